//! Factorials and binomials as `f64`.
//!
//! Values up to `34!` come from exact `u128` arithmetic and are rounded once;
//! beyond that a running floating-point product takes over, keeping the
//! relative error at a few ulps for every size the engines can reach.

const EXACT_LIMIT: u64 = 34;

fn exact_factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn factorial(n: u64) -> f64 {
    if n <= EXACT_LIMIT {
        exact_factorial(n) as f64
    } else {
        let base = exact_factorial(EXACT_LIMIT) as f64;
        (EXACT_LIMIT + 1..=n).fold(base, |acc, k| acc * k as f64)
    }
}

/// `n! / (n - k)!`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_LIMIT {
        ((n - k + 1)..=n).map(|v| v as u128).product::<u128>() as f64
    } else {
        ((n - k + 1)..=n).fold(1.0, |acc, v| acc * v as f64)
    }
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    // Multiplicative form stays integral at every step.
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return falling_factorial(n, k) / factorial(k),
        }
    }
    acc as f64
}
