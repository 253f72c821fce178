//! Target permutations, untying, and the contribution of individual
//! principal diagrams. Used as an independent check of the untying rules.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::Rational;
use crate::perm::{compose_all, Carrier, Label, Perm, PermError};
use crate::Quantity;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("bad key: {0}")]
    Key(String),
    #[error("orthogonal target is not palindromic")]
    NotPalindromic,
    #[error("inconsistent counts: {0}")]
    Counts(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UntieMode {
    Orthogonal,
    UnitaryI,
    UnitaryO,
}

/// Target on `{1..n, n̄..1̄}` (orthogonal) or reduced on `{1..n}` (unitary).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetPerm {
    pub n: u32,
    pub perm: Perm,
}

impl TargetPerm {
    pub fn orthogonal(perm: Perm) -> Result<Self, DiagramError> {
        if perm.carrier() != Carrier::Barred {
            return Err(DiagramError::Perm(PermError::NeedsBarred));
        }
        if !perm.is_palindromic() {
            return Err(DiagramError::NotPalindromic);
        }
        Ok(TargetPerm { n: perm.points(), perm })
    }

    pub fn reduced(perm: Perm) -> Result<Self, DiagramError> {
        if perm.carrier() != Carrier::Reduced {
            return Err(DiagramError::Perm(PermError::CarrierMismatch("expected the reduced carrier".into())));
        }
        Ok(TargetPerm { n: perm.points(), perm })
    }

    pub fn parse_orthogonal(n: u32, text: &str) -> Result<Self, DiagramError> {
        Self::orthogonal(Perm::parse(n, Carrier::Barred, text)?)
    }

    pub fn parse_reduced(n: u32, text: &str) -> Result<Self, DiagramError> {
        Self::reduced(Perm::parse(n, Carrier::Reduced, text)?)
    }

    /// Full palindromic target of a reduced one: the given cycles plus their
    /// reversals.
    pub fn lift(&self) -> Result<TargetPerm, DiagramError> {
        if self.perm.carrier() == Carrier::Barred {
            return Ok(self.clone());
        }
        let mut cycles = self.perm.label_cycles();
        let rev: Vec<Vec<Label>> = cycles.iter().map(|c| reverse_cycle(c)).collect();
        cycles.extend(rev);
        Self::orthogonal(Perm::from_cycles(self.n, Carrier::Barred, &cycles)?)
    }

    /// Drops every cycle made of barred symbols; fails if a cycle mixes.
    pub fn erase(&self) -> Result<TargetPerm, DiagramError> {
        let mut keep = Vec::new();
        for c in self.perm.label_cycles() {
            if c.iter().all(|l| !l.barred) {
                keep.push(c);
            } else if c.iter().any(|l| !l.barred) {
                return Err(DiagramError::Key("target mixes barred and plain labels".into()));
            }
        }
        Self::reduced(Perm::from_cycles(self.n, Carrier::Reduced, &keep)?)
    }
}

/// `(z₁ … z_k) ↦ (z̄_k … z̄₁)`.
pub fn reverse_cycle(c: &[Label]) -> Vec<Label> {
    c.iter().rev().map(|l| l.flip()).collect()
}

fn key_perm(n: u32, carrier: Carrier, key: &[Label]) -> Result<Perm, DiagramError> {
    if key.len() < 2 {
        return Err(DiagramError::Key("a key needs at least two labels".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for l in key {
        if l.index == 0 || l.index > n {
            return Err(DiagramError::Key(format!("label {l} out of range")));
        }
        if !seen.insert(*l) {
            return Err(DiagramError::Key(format!("label {l} repeated")));
        }
    }
    Ok(Perm::from_cycles(n, carrier, &[key.to_vec()])?)
}

/// Target after untying a vertex with key `ρ`: `ρ⁻¹ τ ρ̄⁻¹` (orthogonal),
/// `ρ⁻¹ τ` (i-untying) or `τ ρ̄⁻¹` (o-untying, key given barred).
pub fn untie(target: &TargetPerm, key: &[Label], mode: UntieMode) -> Result<TargetPerm, DiagramError> {
    let n = target.n;
    match mode {
        UntieMode::Orthogonal => {
            let rho = key_perm(n, Carrier::Barred, key)?;
            let rho_bar = key_perm(n, Carrier::Barred, &reverse_cycle(key))?;
            let out = compose_all(&[&rho.inverse(), &target.perm, &rho_bar.inverse()])?;
            TargetPerm::orthogonal(out)
        }
        UntieMode::UnitaryI => {
            if key.iter().any(|l| l.barred) {
                return Err(DiagramError::Key("i-untying needs an unbarred key".into()));
            }
            let rho = key_perm(n, Carrier::Reduced, key)?;
            TargetPerm::reduced(compose_all(&[&rho.inverse(), &target.perm])?)
        }
        UntieMode::UnitaryO => {
            if key.iter().any(|l| !l.barred) {
                return Err(DiagramError::Key("o-untying needs a barred key".into()));
            }
            let rho_bar = key_perm(n, Carrier::Reduced, &reverse_cycle(key))?;
            TargetPerm::reduced(compose_all(&[&target.perm, &rho_bar.inverse()])?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lead {
    Input,
    Output,
    Mixed,
}

/// Edge and vertex numbers of a diagram, with its untieable vertices given
/// as `(degree, lead)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramCount {
    pub edges: u32,
    pub vertices: u32,
    pub untieable: Vec<(u32, Lead)>,
}

fn rpow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// `(−1)^V N_i^n N_o^n / N^{E−V} · Π (1 − N^{m−1}/N_j^{m−1})` over the
/// untieable `2m`-vertices. A mixed vertex carries no correction for
/// transmission and uses `N_j = N₁` for reflection.
pub fn principal_contribution(
    counts: &DiagramCount,
    n: u32,
    n1: &Rational,
    n2: &Rational,
    quantity: Quantity,
) -> Result<Rational, DiagramError> {
    if counts.edges < counts.vertices + 1 {
        return Err(DiagramError::Counts(format!("E = {} < V + 1 = {}", counts.edges, counts.vertices + 1)));
    }
    if counts.untieable.len() > counts.vertices as usize {
        return Err(DiagramError::Counts("more untieable vertices than vertices".into()));
    }
    let big_n = n1 + n2;
    let (ni, no) = match quantity {
        Quantity::Transmission => (n1.clone(), n2.clone()),
        Quantity::Reflection => (n1.clone(), n1.clone()),
    };
    let mut out = rpow(&ni, n as i64) * rpow(&no, n as i64) * rpow(&big_n, -((counts.edges - counts.vertices) as i64));
    if counts.vertices % 2 == 1 {
        out = -out;
    }
    for &(deg, lead) in &counts.untieable {
        if deg % 2 == 1 || deg < 4 {
            return Err(DiagramError::Counts(format!("untieable vertex of degree {deg}")));
        }
        let m = (deg / 2) as i64;
        let nj = match (lead, quantity) {
            (Lead::Input, _) => ni.clone(),
            (Lead::Output, _) => no.clone(),
            (Lead::Mixed, Quantity::Transmission) => continue,
            (Lead::Mixed, Quantity::Reflection) => n1.clone(),
        };
        if nj.is_zero() {
            return Err(DiagramError::Counts("empty lead".into()));
        }
        out *= Rational::one() - rpow(&big_n, m - 1) * rpow(&nj, 1 - m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: i64) -> Label {
        Label::from_signed(v).unwrap()
    }

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn orthogonal_fixture() {
        let t = TargetPerm::parse_orthogonal(3, "(1 2 3)(-3 -2 -1)").unwrap();
        let out = untie(&t, &[l(-3), l(1), l(3)], UntieMode::Orthogonal).unwrap();
        assert_eq!(out, TargetPerm::parse_orthogonal(3, "(1 2)(3)(-3)(-2 -1)").unwrap());
    }

    #[test]
    fn unitary_fixtures() {
        let t = TargetPerm::parse_reduced(4, "(1 2 3)(4)").unwrap();
        let a = untie(&t, &[l(1), l(4)], UntieMode::UnitaryI).unwrap();
        assert_eq!(a, TargetPerm::parse_reduced(4, "(1 2 3 4)").unwrap());
        let b = untie(&t, &[l(-2), l(-4), l(-3)], UntieMode::UnitaryO).unwrap();
        assert_eq!(b, TargetPerm::parse_reduced(4, "(1 2 4)(3)").unwrap());
        let both = untie(&a, &[l(-2), l(-4), l(-3)], UntieMode::UnitaryO).unwrap();
        assert_eq!(both, TargetPerm::parse_reduced(4, "(1 2)(3)(4)").unwrap());
    }

    #[test]
    fn erase_matches_unitary() {
        let t = TargetPerm::parse_reduced(4, "(1 2 3)(4)").unwrap();
        let full = t.lift().unwrap();
        for (key, mode) in [(vec![l(1), l(4)], UntieMode::UnitaryI), (vec![l(-2), l(-4), l(-3)], UntieMode::UnitaryO)] {
            let red = untie(&t, &key, mode).unwrap();
            let orth = untie(&full, &key, UntieMode::Orthogonal).unwrap();
            assert_eq!(orth.erase().unwrap(), red);
            assert!(orth.perm.is_palindromic());
        }
    }

    #[test]
    fn bad_keys() {
        let t = TargetPerm::parse_reduced(4, "(1 2 3)(4)").unwrap();
        assert!(untie(&t, &[l(1)], UntieMode::UnitaryI).is_err());
        assert!(untie(&t, &[l(1), l(1)], UntieMode::UnitaryI).is_err());
        assert!(untie(&t, &[l(-1), l(2)], UntieMode::UnitaryI).is_err());
        assert!(untie(&t, &[l(1), l(2)], UntieMode::UnitaryO).is_err());
        assert!(untie(&t, &[l(1), l(9)], UntieMode::UnitaryI).is_err());
        assert!(TargetPerm::parse_orthogonal(3, "(1 2 3)").is_err());
    }

    #[test]
    fn contribution_fixtures() {
        let (n1, n2) = (q(3), q(5));
        let n = &n1 + &n2;
        let c = DiagramCount { edges: 8, vertices: 1, untieable: vec![(4, Lead::Input)] };
        let got = principal_contribution(&c, 3, &n1, &n2, Quantity::Transmission).unwrap();
        let p3 = |x: &Rational, e: i64| rpow(x, e);
        let want = -(p3(&n1, 3) * p3(&n2, 3) / p3(&n, 7)) + p3(&n1, 2) * p3(&n2, 3) / p3(&n, 6);
        assert_eq!(got, want);

        let c = DiagramCount { edges: 8, vertices: 2, untieable: vec![(4, Lead::Output), (6, Lead::Mixed)] };
        let got = principal_contribution(&c, 3, &n1, &n2, Quantity::Transmission).unwrap();
        assert_eq!(got, p3(&n1, 3) * p3(&n2, 3) / p3(&n, 6) * (q(1) - &n / &n2));
        let got = principal_contribution(&c, 3, &n1, &n2, Quantity::Reflection).unwrap();
        let want = p3(&n1, 6) / p3(&n, 6) * (q(1) - &n / &n1) * (q(1) - p3(&n, 2) / p3(&n1, 2));
        assert_eq!(got, want);
    }

    #[test]
    fn second_moment_column() {
        let (ni, no) = (q(2), q(7));
        let n = &ni + &no;
        let c = DiagramCount { edges: 8, vertices: 3, untieable: vec![(4, Lead::Input), (4, Lead::Output)] };
        let got = principal_contribution(&c, 2, &ni, &no, Quantity::Transmission).unwrap();
        let p = |x: &Rational, e: i64| rpow(x, e);
        let want = -(p(&ni, 2) * p(&no, 2) / p(&n, 5)) + &ni * p(&no, 2) / p(&n, 4) + p(&ni, 2) * &no / p(&n, 4)
            - &ni * &no / p(&n, 3);
        assert_eq!(got, want);
    }

    #[test]
    fn rejects_bad_counts() {
        let c = DiagramCount { edges: 2, vertices: 2, untieable: vec![] };
        assert!(principal_contribution(&c, 1, &q(1), &q(1), Quantity::Transmission).is_err());
        let c = DiagramCount { edges: 5, vertices: 1, untieable: vec![(3, Lead::Input)] };
        assert!(principal_contribution(&c, 1, &q(1), &q(1), Quantity::Transmission).is_err());
    }
}
