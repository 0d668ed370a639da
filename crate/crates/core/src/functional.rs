//! Characteristic functional of the fully excited emitters as an exact
//! polynomial in formal detector variables `f_l` and their conjugates `f*_l`.
//!
//! With `c_{l,j} = e^{-i phi(j, theta_l)}` and `beta_j = sum_l c_{l,j} f_l`,
//! every emitter contributes a factor `1 - |beta_j|^2`, so
//!
//! ```text
//! C[f] = prod_j (1 - sum_{l,l'} c_{l,j} conj(c_{l',j}) f_l f*_{l'})
//! ```
//!
//! Correlations are read off coefficients: the coefficient of
//! `prod_l f_l^{a_l} f*_l^{a_l}` equals `(-1)^m G^(m) / (prod_l a_l!)^2`,
//! where detector angle `l` is repeated `a_l` times and `m = sum_l a_l`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::combinatorics::{binomial, factorial};
use crate::compensated::DdComplex;
use crate::error::{Error, Result};
use crate::geometry::EmitterGeometry;

/// Largest number of distinct detector angles (formal variables).
pub const MAX_VARIABLES: usize = 4;

/// Exponents of `f_1..f_K` followed by those of `f*_1..f*_K`. Unused slots
/// stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub f: [u8; MAX_VARIABLES],
    pub f_conj: [u8; MAX_VARIABLES],
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.f.iter().chain(&self.f_conj).map(|&e| e as usize).sum()
    }

    /// The monomial with `f` and `f*` exponents swapped.
    pub fn conjugate(&self) -> Self {
        Self {
            f: self.f_conj,
            f_conj: self.f,
        }
    }

    fn f_degree(&self) -> usize {
        self.f.iter().map(|&e| e as usize).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalPolynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl FormalPolynomial {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Complex64 {
        self.terms
            .get(monomial)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coefficient(&Monomial::default())
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest `|c(a;b) - conj(c(b;a))|` over all terms.
    pub fn hermiticity_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|(mono, c)| (c - self.coefficient(&mono.conjugate()).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Evaluates the polynomial at `f`, treating `f*` as the complex
    /// conjugate of `f`.
    pub fn evaluate(&self, f: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(mono, c)| {
                let mut v = *c;
                for (l, z) in f.iter().enumerate().take(self.n_vars) {
                    v *= z.powu(mono.f[l] as u32) * z.conj().powu(mono.f_conj[l] as u32);
                }
                v
            })
            .sum()
    }
}

/// Upper bound on the number of distinct monomials in the expansion for
/// `n` emitters and `k` variables: `sum_{d=0}^{n} C(d+k-1, k-1)^2`. Each
/// surviving monomial has equal `f` and `f*` degree `d <= n`.
pub fn max_term_count(n: usize, k: usize) -> f64 {
    (0..=n)
        .map(|d| {
            let c = binomial((d + k - 1) as u64, (k - 1) as u64);
            c * c
        })
        .sum()
}

/// Full expansion of the characteristic functional for detectors at the
/// `K` distinct `angles`.
pub fn build_functional(geometry: &EmitterGeometry, angles: &[f64]) -> Result<FormalPolynomial> {
    build_functional_truncated(geometry, angles, geometry.n_emitters())
}

/// Like [`build_functional`] but drops every monomial whose `f` degree
/// exceeds `max_order`; coefficients up to that order are unaffected.
pub fn build_functional_truncated(
    geometry: &EmitterGeometry,
    angles: &[f64],
    max_order: usize,
) -> Result<FormalPolynomial> {
    let k = angles.len();
    if k == 0 || k > MAX_VARIABLES {
        return Err(Error::TooManyVariables {
            k,
            max: MAX_VARIABLES,
        });
    }
    if let Some(&bad) = angles.iter().find(|a| !a.is_finite()) {
        return Err(Error::NonFiniteAngle(bad));
    }
    let n = geometry.n_emitters();
    if n > u8::MAX as usize {
        return Err(Error::Unsupported(format!(
            "functional expansion supports at most {} emitters",
            u8::MAX
        )));
    }

    // double-double accumulation: coefficients at deep interference minima
    // are tiny differences of large partial products
    let mut terms: BTreeMap<Monomial, DdComplex> = BTreeMap::new();
    terms.insert(
        Monomial::default(),
        DdComplex::from_c64(Complex64::new(1.0, 0.0)),
    );

    for j in 1..=n {
        let c: Vec<Complex64> = angles
            .iter()
            .map(|&theta| Complex64::from_polar(1.0, -geometry.phase_unchecked(j, theta)))
            .collect();
        // -c_l conj(c_l') for every (l, l') pair of the |beta_j|^2 factor
        let pair: Vec<(usize, usize, DdComplex)> = (0..k)
            .flat_map(|l| (0..k).map(move |lp| (l, lp)))
            .map(|(l, lp)| (l, lp, -DdComplex::mul_conj(c[l], c[lp])))
            .collect();

        let mut next = terms.clone();
        for (mono, coef) in &terms {
            if mono.f_degree() >= max_order {
                continue;
            }
            for &(l, lp, w) in &pair {
                let mut m2 = *mono;
                m2.f[l] += 1;
                m2.f_conj[lp] += 1;
                let slot = next.entry(m2).or_insert(DdComplex::ZERO);
                *slot = *slot + *coef * w;
            }
        }
        terms = next;
    }

    let terms = terms.into_iter().map(|(k, v)| (k, v.to_c64())).collect();
    Ok(FormalPolynomial { n_vars: k, terms })
}

/// `G^(m)` with detector angle `l` repeated `multiplicities[l]` times:
/// `(-1)^m (prod_l a_l!)^2` times the coefficient of
/// `prod_l f_l^{a_l} f*_l^{a_l}`. A monomial absent from the expansion
/// (more photons than emitters) yields 0.
pub fn extract_gm(poly: &FormalPolynomial, multiplicities: &[usize]) -> Result<f64> {
    if multiplicities.len() != poly.n_vars {
        return Err(Error::MultiplicityArity {
            expected: poly.n_vars,
            got: multiplicities.len(),
        });
    }
    let m: usize = multiplicities.iter().sum();
    if m == 0 {
        return Err(Error::OrderOutOfRange { m, n: 0 });
    }
    if multiplicities.iter().any(|&a| a > u8::MAX as usize) {
        return Ok(0.0);
    }
    let mut mono = Monomial::default();
    for (l, &a) in multiplicities.iter().enumerate() {
        mono.f[l] = a as u8;
        mono.f_conj[l] = a as u8;
    }
    let coef = poly.coefficient(&mono);
    let merge: f64 = multiplicities.iter().map(|&a| factorial(a as u64)).product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let g = coef * (sign * merge * merge);
    if g.im.abs() > 1e-12 * g.re.abs().max(1.0) {
        return Err(Error::NonRealCorrelation { imag: g.im });
    }
    Ok(g.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{g_m_closed_coincident, g_m_exact};
    use crate::geometry::DetectorList;
    use crate::state::StateVector;
    use std::f64::consts::PI;

    fn mono(f: &[u8], fc: &[u8]) -> Monomial {
        let mut m = Monomial::default();
        m.f[..f.len()].copy_from_slice(f);
        m.f_conj[..fc.len()].copy_from_slice(fc);
        m
    }

    #[test]
    fn constant_term_is_one() {
        for n in 1..=5 {
            let g = EmitterGeometry::new(n, 1.9).unwrap();
            let p = build_functional(&g, &[0.2, -0.4]).unwrap();
            assert_eq!(p.constant_term(), Complex64::new(1.0, 0.0));
            let zero = [Complex64::new(0.0, 0.0); 2];
            assert_eq!(p.evaluate(&zero), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn single_emitter_single_variable() {
        let g = EmitterGeometry::new(1, 2.0).unwrap();
        let p = build_functional(&g, &[0.7]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&mono(&[1], &[1])), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn two_emitter_cross_term_matches_fringe() {
        // coefficient of f1 f2 f1* f2* equals G^(2) = 2 (1 + cos x)
        let g = EmitterGeometry::new(2, PI).unwrap();
        let (t1, t2) = (0.3, -0.9);
        let p = build_functional(&g, &[t1, t2]).unwrap();
        let x = g.detector_phase_difference(t1, t2);
        let c = p.coefficient(&mono(&[1, 1], &[1, 1]));
        assert!((c.re - 2.0 * (1.0 + x.cos())).abs() < 1e-12);
        assert!(c.im.abs() < 1e-12);
        assert!((extract_gm(&p, &[1, 1]).unwrap() - 2.0 * (1.0 + x.cos())).abs() < 1e-12);
    }

    #[test]
    fn product_form_matches_direct_evaluation() {
        let g = EmitterGeometry::new(4, 2.3).unwrap();
        let angles = [0.1, 0.5, -0.8];
        let p = build_functional(&g, &angles).unwrap();
        let f = [
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.1, 0.4),
            Complex64::new(0.25, 0.05),
        ];
        let direct: Complex64 = (1..=4)
            .map(|j| {
                let beta: Complex64 = angles
                    .iter()
                    .zip(&f)
                    .map(|(&t, &fl)| Complex64::from_polar(1.0, -g.phase_of(j, t).unwrap()) * fl)
                    .sum();
                Complex64::new(1.0 - beta.norm_sqr(), 0.0)
            })
            .product();
        assert!((p.evaluate(&f) - direct).norm() < 1e-12);
    }

    #[test]
    fn structural_invariants() {
        for n in 1..=6 {
            for k in 1..=4 {
                let g = EmitterGeometry::new(n, 2.0 * PI).unwrap();
                let angles: Vec<f64> = (0..k).map(|l| 0.17 * l as f64 - 0.3).collect();
                let p = build_functional(&g, &angles).unwrap();
                assert!(p.hermiticity_defect() < 1e-12);
                assert!(p.total_degree() <= 2 * n);
                assert!(p.len() as f64 <= max_term_count(n, k));
            }
        }
    }

    #[test]
    fn coincident_multiplicities_match_closed_form() {
        for n in 2..=8 {
            let g = EmitterGeometry::new(n, 2.0 * PI).unwrap();
            let (t1, t2) = (0.0, 0.137);
            let p = build_functional(&g, &[t1, t2]).unwrap();
            let x = g.detector_phase_difference(t1, t2);
            for m in 1..=n {
                let v = extract_gm(&p, &[m - 1, 1]).unwrap();
                let c = g_m_closed_coincident(n, m, x).unwrap();
                assert!((v - c).abs() / c.max(1e-3) < 1e-9, "N={n} m={m}: {v} vs {c}");
            }
        }
    }

    #[test]
    fn matches_exact_engine_three_angles() {
        let g = EmitterGeometry::new(5, 1.4).unwrap();
        let angles = [0.2, -0.6, 1.1];
        let p = build_functional(&g, &angles).unwrap();
        let phi = StateVector::fully_excited(5).unwrap();
        for mult in [[1, 1, 1], [2, 0, 1], [0, 3, 2], [1, 2, 2], [4, 0, 0]] {
            let dets: Vec<f64> = mult
                .iter()
                .zip(&angles)
                .flat_map(|(&a, &t)| std::iter::repeat(t).take(a))
                .collect();
            let e = g_m_exact(&g, &DetectorList::new(dets).unwrap(), &phi).unwrap();
            let v = extract_gm(&p, &mult).unwrap();
            assert!((v - e).abs() / e.max(1e-3) < 1e-9, "{mult:?}: {v} vs {e}");
        }
    }

    #[test]
    fn truncation_keeps_low_orders() {
        let g = EmitterGeometry::new(6, 2.0).unwrap();
        let full = build_functional(&g, &[0.1, 0.9]).unwrap();
        let cut = build_functional_truncated(&g, &[0.1, 0.9], 3).unwrap();
        assert!(cut.len() < full.len());
        for (mono, c) in cut.terms() {
            assert!(mono.f.iter().map(|&e| e as usize).sum::<usize>() <= 3);
            assert!((full.coefficient(mono) - c).norm() < 1e-12);
        }
        for mult in [[2, 1], [0, 3], [1, 0]] {
            assert_eq!(extract_gm(&cut, &mult), extract_gm(&full, &mult));
        }
    }

    #[test]
    fn too_many_photons_gives_zero() {
        let g = EmitterGeometry::new(3, 1.0).unwrap();
        let p = build_functional(&g, &[0.4, 0.1]).unwrap();
        assert_eq!(extract_gm(&p, &[4, 0]).unwrap(), 0.0);
        assert_eq!(extract_gm(&p, &[2, 2]).unwrap(), 0.0);
    }

    #[test]
    fn argument_errors() {
        let g = EmitterGeometry::new(3, 1.0).unwrap();
        assert!(matches!(
            build_functional(&g, &[]),
            Err(Error::TooManyVariables { .. })
        ));
        assert!(matches!(
            build_functional(&g, &[0.0; 5]),
            Err(Error::TooManyVariables { .. })
        ));
        let p = build_functional(&g, &[0.4, 0.1]).unwrap();
        assert!(matches!(
            extract_gm(&p, &[1]),
            Err(Error::MultiplicityArity { .. })
        ));
        assert!(extract_gm(&p, &[0, 0]).is_err());
    }
}
