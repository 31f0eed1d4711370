use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::system::TimeDomain;

/// Relative tolerance used to pair an eigenvalue with its conjugate.
pub const PAIRING_TOL: f64 = 1e-8;

pub(crate) fn pair_tol(z: Complex64) -> f64 {
    PAIRING_TOL * z.norm().max(1.0)
}

/// A multiset of complex eigenvalues closed under conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSet {
    values: Vec<Complex64>,
}

impl SpectrumSet {
    /// Validates conjugate closure by greedy nearest-conjugate matching.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("spectrum"));
        }
        if let Some(orphan) = unpaired(&values).first() {
            return Err(Error::NotConjugateClosed(format!("{orphan} has no conjugate partner")));
        }
        let mut s = SpectrumSet { values };
        s.sort();
        Ok(s)
    }

    /// Adds the conjugate of every value that lacks a partner.
    pub fn completing_conjugates(mut values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("spectrum"));
        }
        let extra: Vec<Complex64> = unpaired(&values).into_iter().map(|z| z.conj()).collect();
        values.extend(extra);
        SpectrumSet::new(values)
    }

    fn sort(&mut self) {
        self.values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.values.iter()
    }

    pub fn union(&self, other: &SpectrumSet) -> SpectrumSet {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        let mut s = SpectrumSet { values };
        s.sort();
        s
    }

    /// Largest real part (`-inf` when empty).
    pub fn spectral_abscissa(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// All values strictly inside the stability region, with margin `tol`.
    pub fn is_stable(&self, domain: TimeDomain, tol: f64) -> bool {
        match domain {
            TimeDomain::Continuous => self.values.iter().all(|z| z.re < -tol),
            TimeDomain::Discrete => self.values.iter().all(|z| z.norm() < 1.0 - tol),
        }
    }

    /// Largest distance between greedily matched elements, each scaled by
    /// `1 + |λ|`; infinite when the sizes differ.
    pub fn max_mismatch(&self, other: &SpectrumSet) -> f64 {
        multiset_mismatch(&self.values, &other.values)
    }

    /// Multiset equality within `tol·(1 + |λ|)`.
    pub fn matches(&self, other: &SpectrumSet, tol: f64) -> bool {
        self.max_mismatch(other) <= tol
    }

    /// Real coefficients of `∏(s - λ)`, highest power first.
    pub fn characteristic_polynomial(&self) -> Vec<f64> {
        poly_from_roots(&self.values).into_iter().map(|z| z.re).collect()
    }
}

/// Greedy multiset distance between two lists of complex values, each
/// pair scaled by `1 + |a|`; infinite when the lengths differ.
pub fn multiset_mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (idx, dist) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("lengths match");
        used[idx] = true;
        worst = worst.max(dist / (1.0 + x.norm()));
    }
    worst
}

/// Coefficients of `∏(s - r)`, highest power first.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &z in roots {
        let mut next = vec![Complex64::default(); coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a * z;
        }
        coeffs = next;
    }
    coeffs
}

/// Values left without a conjugate partner after greedy matching.
fn unpaired(values: &[Complex64]) -> Vec<Complex64> {
    let mut used = vec![false; values.len()];
    let mut orphans = Vec::new();
    for i in 0..values.len() {
        if used[i] {
            continue;
        }
        let z = values[i];
        used[i] = true;
        if z.im.abs() <= pair_tol(z) {
            continue;
        }
        let target = z.conj();
        let best = (0..values.len())
            .filter(|&k| !used[k])
            .map(|k| (k, (values[k] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((k, d)) if d <= pair_tol(z) => used[k] = true,
            _ => orphans.push(z),
        }
    }
    orphans
}

impl fmt::Display for SpectrumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, z) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match f.precision() {
                Some(p) => write!(f, "{z:.p$}")?,
                None => write!(f, "{z}")?,
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closure_is_enforced() {
        assert!(SpectrumSet::new(vec![c(1.0, 2.0), c(1.0, -2.0), c(-3.0, 0.0)]).is_ok());
        assert!(SpectrumSet::new(vec![c(1.0, 2.0), c(1.0, 2.0)]).is_err());
        // within pairing tolerance
        assert!(SpectrumSet::new(vec![c(1.0, 2.0), c(1.0 + 1e-12, -2.0)]).is_ok());
        assert!(SpectrumSet::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn completion_adds_missing_conjugates() {
        let s = SpectrumSet::completing_conjugates(vec![c(-1.0, 1.0), c(-2.0, 0.0), c(-3.0, -4.0), c(-3.0, 4.0)]).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.values().contains(&c(-1.0, -1.0)));
    }

    #[test]
    fn multiset_compare_respects_multiplicity() {
        let a = SpectrumSet::new(vec![c(-1.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0)]).unwrap();
        let b = SpectrumSet::new(vec![c(-1.0, 0.0), c(-2.0, 0.0), c(-2.0, 0.0)]).unwrap();
        assert!(!a.matches(&b, 1e-6));
        assert!(a.matches(&a.clone(), 0.0));
    }

    #[test]
    fn characteristic_polynomial_of_pairs() {
        // (s^2 + 3s + 2)^2 = s^4 + 6s^3 + 13s^2 + 12s + 4
        let s = SpectrumSet::new(vec![c(-1.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0), c(-2.0, 0.0)]).unwrap();
        assert_eq!(s.characteristic_polynomial(), vec![1.0, 6.0, 13.0, 12.0, 4.0]);
    }

    #[test]
    fn stability_regions() {
        let s = SpectrumSet::new(vec![c(-0.5, 0.5), c(-0.5, -0.5)]).unwrap();
        assert!(s.is_stable(TimeDomain::Continuous, 1e-9));
        assert!(s.is_stable(TimeDomain::Discrete, 1e-9));
        let s = SpectrumSet::new(vec![c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        assert!(!s.is_stable(TimeDomain::Continuous, 1e-9));
        assert!(!s.is_stable(TimeDomain::Discrete, 1e-9));
    }
}
