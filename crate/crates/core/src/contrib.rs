//! Contributions of nodes, composite edges and base-structure vertices.
//!
//! Every factor is stripped of its power of `N`: an edge loses its `1/N`,
//! a vertex its `−N` keeps only the sign. Negative powers of ζ₁ and ζ₂ are
//! cleared with the exact quotients kept in [`TreeFunctions`].

use std::fmt;
use std::sync::Mutex;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::algebra::{Poly, Rational, Series, Var};
use crate::basegen::EdgeKind;
use crate::trees::TreeFunctions;
use crate::Quantity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndLabel {
    I,
    O,
    IO,
    OI,
}

impl EndLabel {
    pub fn tilde(self) -> Self {
        match self {
            EndLabel::I => EndLabel::O,
            EndLabel::O => EndLabel::I,
            EndLabel::IO => EndLabel::OI,
            EndLabel::OI => EndLabel::IO,
        }
    }

    pub fn hat(self) -> Self {
        match self {
            EndLabel::IO => EndLabel::OI,
            EndLabel::OI => EndLabel::IO,
            x => x,
        }
    }

    pub fn is_composite(self) -> bool {
        matches!(self, EndLabel::IO | EndLabel::OI)
    }

    /// First letter is `i`.
    pub fn starts_i(self) -> bool {
        matches!(self, EndLabel::I | EndLabel::IO)
    }

    /// Last letter is `i`.
    pub fn ends_i(self) -> bool {
        matches!(self, EndLabel::I | EndLabel::OI)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "i" => Some(EndLabel::I),
            "o" => Some(EndLabel::O),
            "io" => Some(EndLabel::IO),
            "oi" => Some(EndLabel::OI),
            _ => None,
        }
    }
}

impl fmt::Display for EndLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndLabel::I => "i",
            EndLabel::O => "o",
            EndLabel::IO => "io",
            EndLabel::OI => "oi",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("labels ({0}, {1}) do not fit a {2:?} edge")]
    Inadmissible(EndLabel, EndLabel, EdgeKind),
    #[error("vertex of degree {0}: need at least 3 labels")]
    Degree(usize),
}

/// The four distinct edge contributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    /// `Eu(i,o) = Eu(o,i) = Eo(io,io) = Eo(oi,oi)`
    Same,
    /// `Eo(io,oi) = Eo(oi,io)`
    Cross,
    /// `Eu(i,i)`
    II,
    /// `Eu(o,o)`
    OO,
}

pub fn edge_class(kind: EdgeKind, a: EndLabel, b: EndLabel) -> Result<EdgeClass, LabelError> {
    use EndLabel::*;
    match (kind, a, b) {
        (EdgeKind::Unitary, I, O) | (EdgeKind::Unitary, O, I) => Ok(EdgeClass::Same),
        (EdgeKind::Unitary, I, I) => Ok(EdgeClass::II),
        (EdgeKind::Unitary, O, O) => Ok(EdgeClass::OO),
        (EdgeKind::Orthogonal, IO, IO) | (EdgeKind::Orthogonal, OI, OI) => Ok(EdgeClass::Same),
        (EdgeKind::Orthogonal, IO, OI) | (EdgeKind::Orthogonal, OI, IO) => Ok(EdgeClass::Cross),
        _ => Err(LabelError::Inadmissible(a, b, kind)),
    }
}

/// Node factors `yA`, `yB`, `yB_o`, `yB_i` as series in `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFactors {
    pub y_a: Series,
    pub y_b: Series,
    pub y_bo: Series,
    pub y_bi: Series,
}

fn one(tf: &TreeFunctions) -> Series {
    Series::one(Var::R, tf.trunc)
}

/// Closed forms of the node factors.
pub fn node_factors(tf: &TreeFunctions) -> NodeFactors {
    let one = one(tf);
    let xi = Poly::xi();
    let d2 = (&one - &tf.h).pow(-2).expect("unit constant term");
    match tf.quantity {
        Quantity::Transmission => NodeFactors {
            y_a: &(&tf.h * &(&tf.h - &one.scale(&Rational::from_integer(2.into())))) * &d2,
            y_b: -&(&tf.h * &d2),
            y_bo: (&(&tf.f_q * &tf.f_q) * &d2).mul_poly(&xi),
            y_bi: (&(&tf.fhat_q * &tf.fhat_q) * &d2).mul_poly(&xi),
        },
        Quantity::Reflection => {
            // ζ₂ f²/(ζ₁ (1−f²)²) = ζ₂ f G/(1−f²)²
            let yb = (&(&tf.f * &tf.f_q) * &d2).mul_poly(&Poly::zeta2());
            NodeFactors {
                y_a: &(&tf.h * &(&tf.h - &one.scale(&Rational::from_integer(2.into())))) * &d2,
                y_b: yb.clone(),
                y_bo: yb.clone(),
                y_bi: yb,
            }
        }
    }
}

/// Node factors assembled term by term from the grafted trees.
pub fn node_factors_constructed(tf: &TreeFunctions) -> NodeFactors {
    let k_max = tf.trunc / 2 + 1;
    let one = one(tf);
    let r = Series::monomial(Var::R, tf.trunc, 1, Poly::one());
    let mut y_a = Series::zero(Var::R, tf.trunc);
    let mut y_b = Series::zero(Var::R, tf.trunc);
    let mut hk = one.clone();
    for k in 1..=k_max {
        hk = &hk * &tf.h;
        y_a = &y_a - &hk.scale(&Rational::from_integer(((k + 1) as i64).into()));
        y_b = &y_b - &hk.scale(&Rational::from_integer((k as i64).into()));
    }
    // Odd node with one more tree of type `major` than of `minor`, plus its
    // untied version where every `major` tree is a bare leaf.
    let odd = |major: &Series, minor: &Series, lead: Poly| {
        let mut acc = Series::zero(Var::R, tf.trunc);
        let mut untied = Series::zero(Var::R, tf.trunc);
        let mut maj = major.clone(); // major^{k+1}, starts at k = 1 below
        maj = &maj * major;
        let mut rk = &r * &r;
        let mut mink = one.clone();
        for k in 1..=tf.trunc {
            let kk: Rational = Rational::from_integer((k as i64).into());
            acc = &acc - &(&maj * &mink).scale(&kk);
            untied = &untied + &(&rk * &mink).scale(&kk);
            maj = &maj * major;
            rk = &rk * &r;
            mink = &mink * minor;
        }
        &acc + &untied.mul_poly(&lead)
    };
    match tf.quantity {
        Quantity::Transmission => NodeFactors {
            y_bo: odd(&tf.f, &tf.fhat, Poly::zeta2()),
            y_bi: odd(&tf.fhat, &tf.f, Poly::zeta1()),
            y_a,
            y_b,
        },
        Quantity::Reflection => {
            let b = odd(&tf.f, &tf.f, Poly::zeta1());
            NodeFactors { y_a, y_b: b.clone(), y_bo: b.clone(), y_bi: b }
        }
    }
}

/// Edge factor from node factors via the sums over alternating odd nodes.
pub fn edge_factor_from_nodes(class: EdgeClass, kind: EdgeKind, nf: &NodeFactors) -> Series {
    let one = Series::one(Var::R, nf.y_a.trunc());
    let a = &one - &nf.y_a;
    let den = match kind {
        EdgeKind::Unitary => &(&a * &a) - &(&nf.y_bo * &nf.y_bi),
        EdgeKind::Orthogonal => &(&a * &a) - &(&nf.y_b * &nf.y_b),
    };
    let num = match class {
        EdgeClass::Same => a,
        EdgeClass::Cross => nf.y_b.clone(),
        EdgeClass::II => nf.y_bo.clone(),
        EdgeClass::OO => nf.y_bi.clone(),
    };
    num.try_div(&den).expect("unit constant term")
}

/// Simplified closed form of an edge factor.
pub fn edge_factor_closed(class: EdgeClass, tf: &TreeFunctions) -> Series {
    let one = one(tf);
    match tf.quantity {
        Quantity::Transmission => {
            let base = (&one - &tf.h).try_div(&(&one + &tf.h)).expect("unit constant term");
            match class {
                EdgeClass::Same => base,
                EdgeClass::Cross => -&(&tf.h * &base),
                EdgeClass::II => (&(&tf.f_q * &tf.f_q) * &base).mul_poly(&Poly::xi()),
                EdgeClass::OO => (&(&tf.fhat_q * &tf.fhat_q) * &base).mul_poly(&Poly::xi()),
            }
        }
        Quantity::Reflection => {
            // ζ₁²(1−f²)²/(ζ₁² − ζ₂² f⁴) = (1−f²)²/(1 − ζ₂² G² f²)
            let w = &one - &tf.h;
            let den = &one - &(&tf.h_q * &tf.h).mul_poly(&Poly::zeta2().pow(2));
            let base = (&w * &w).try_div(&den).expect("unit constant term");
            match class {
                EdgeClass::Same => base,
                _ => (&(&tf.f * &tf.f_q) * &base).mul_poly(&Poly::zeta2()),
            }
        }
    }
}

/// `N·E(a, b)` for an edge of the given kind.
pub fn edge_factor(kind: EdgeKind, a: EndLabel, b: EndLabel, tf: &TreeFunctions) -> Result<Series, LabelError> {
    Ok(edge_factor_closed(edge_class(kind, a, b)?, tf))
}

/// `(p, q)`: sectors of type `o`-`o` and `i`-`i` in the cyclic sequence.
/// The sector after a stub is bounded by that stub's last letter and the
/// next stub's first letter.
pub fn sector_counts(labels: &[EndLabel]) -> (usize, usize) {
    let k = labels.len();
    let mut p = 0;
    let mut q = 0;
    for j in 0..k {
        let left = labels[j].ends_i();
        let right = labels[(j + 1) % k].starts_i();
        match (left, right) {
            (true, true) => q += 1,
            (false, false) => p += 1,
            _ => {}
        }
    }
    (p, q)
}

/// Which untying correction a vertex with all sectors odd receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Untie {
    None,
    /// every sector `i`-`i` (`q = k`)
    AllII,
    /// every sector `o`-`o` (`p = k`)
    AllOO,
    /// every sector odd, of both kinds
    Mixed,
}

pub fn untie_class(k: usize, p: usize, q: usize) -> Untie {
    if q == k {
        Untie::AllII
    } else if p == k {
        Untie::AllOO
    } else if p + q == k {
        Untie::Mixed
    } else {
        Untie::None
    }
}

/// `V_k` stripped to sign: `−f^q f̂^p/(1−h)^k · χ`, with the labels already
/// passed through tilde.
pub fn vertex_factor(tf: &TreeFunctions, labels: &[EndLabel]) -> Result<Series, LabelError> {
    let k = labels.len();
    if k < 3 {
        return Err(LabelError::Degree(k));
    }
    let (p, q) = sector_counts(labels);
    let one = one(tf);
    let den = (&one - &tf.h).pow(-(k as i64)).expect("unit constant term");
    let pw = |s: &Series, e: usize| s.pow(e as i64).expect("nonnegative power");
    let mut num = &pw(&tf.f, q) * &pw(&tf.fhat, p);
    match (tf.quantity, untie_class(k, p, q)) {
        (Quantity::Transmission, Untie::AllII) => {
            num = &num - &pw(&tf.f_q, k).mul_poly(&Poly::zeta2());
        }
        (Quantity::Transmission, Untie::AllOO) => {
            num = &num - &pw(&tf.fhat_q, k).mul_poly(&Poly::zeta1());
        }
        (Quantity::Reflection, Untie::AllII | Untie::AllOO | Untie::Mixed) => {
            num = &num - &pw(&tf.f_q, k).mul_poly(&Poly::zeta1());
        }
        _ => {}
    }
    Ok(-&(&num * &den))
}

/// Memo of edge and vertex factors keyed by their label signature.
pub struct FactorMemo<'a> {
    tf: &'a TreeFunctions,
    edges: Mutex<FxHashMap<EdgeClass, Series>>,
    vertices: Mutex<FxHashMap<Vec<EndLabel>, Series>>,
}

impl<'a> FactorMemo<'a> {
    pub fn new(tf: &'a TreeFunctions) -> Self {
        FactorMemo { tf, edges: Mutex::default(), vertices: Mutex::default() }
    }

    pub fn tree_functions(&self) -> &TreeFunctions {
        self.tf
    }

    pub fn edge(&self, kind: EdgeKind, a: EndLabel, b: EndLabel) -> Result<Series, LabelError> {
        let class = edge_class(kind, a, b)?;
        if let Some(s) = self.edges.lock().unwrap().get(&class) {
            return Ok(s.clone());
        }
        let s = edge_factor_closed(class, self.tf);
        self.edges.lock().unwrap().insert(class, s.clone());
        Ok(s)
    }

    pub fn vertex(&self, labels: &[EndLabel]) -> Result<Series, LabelError> {
        if let Some(s) = self.vertices.lock().unwrap().get(labels) {
            return Ok(s.clone());
        }
        let s = vertex_factor(self.tf, labels)?;
        self.vertices.lock().unwrap().insert(labels.to_vec(), s.clone());
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::solve_tree_functions;
    use EndLabel::*;

    const K: usize = 14;

    #[test]
    fn label_involutions() {
        for l in [I, O, IO, OI] {
            assert_eq!(l.tilde().tilde(), l);
            assert_eq!(l.hat().hat(), l);
            assert_eq!(l.tilde().hat(), l.hat().tilde());
        }
        assert_eq!(IO.tilde(), OI);
        assert_eq!(I.hat(), I);
    }

    #[test]
    fn sector_example() {
        assert_eq!(sector_counts(&[OI, I, OI, O]), (1, 1));
        assert_eq!(sector_counts(&[I, O, I, O]), (0, 0));
        assert_eq!(sector_counts(&[I, I, I]), (0, 3));
    }

    #[test]
    fn node_factor_identities() {
        for q in [Quantity::Transmission, Quantity::Reflection] {
            let tf = solve_tree_functions(q, K);
            let nf = node_factors(&tf);
            assert_eq!(nf, node_factors_constructed(&tf), "{q:?}");
            assert_eq!(&nf.y_bo * &nf.y_bi, &nf.y_b * &nf.y_b, "{q:?}");
        }
    }

    #[test]
    fn transmission_leading_terms() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        let nf = node_factors(&tf);
        assert!(nf.y_a.coeff(0).is_zero() && nf.y_b.coeff(0).is_zero());
        assert_eq!(nf.y_bo.coeff(2), &Poly::xi());
        // yA = −Σ (k+1) h^k
        let hs = tf.h.coeff(2).clone();
        assert_eq!(nf.y_a.coeff(2), &hs.scale_int(&(-2).into()));
    }

    #[test]
    fn edges_construction_vs_closed() {
        for q in [Quantity::Transmission, Quantity::Reflection] {
            let tf = solve_tree_functions(q, K);
            let nf = node_factors_constructed(&tf);
            for (kind, a, b) in [
                (EdgeKind::Unitary, I, O),
                (EdgeKind::Unitary, O, I),
                (EdgeKind::Unitary, I, I),
                (EdgeKind::Unitary, O, O),
                (EdgeKind::Orthogonal, IO, IO),
                (EdgeKind::Orthogonal, OI, OI),
                (EdgeKind::Orthogonal, IO, OI),
                (EdgeKind::Orthogonal, OI, IO),
            ] {
                let class = edge_class(kind, a, b).unwrap();
                assert_eq!(
                    edge_factor_from_nodes(class, kind, &nf),
                    edge_factor(kind, a, b, &tf).unwrap(),
                    "{q:?} {kind:?} {a} {b}"
                );
            }
            assert!(edge_factor(EdgeKind::Unitary, IO, I, &tf).is_err());
            assert!(edge_factor(EdgeKind::Orthogonal, I, O, &tf).is_err());
        }
    }

    #[test]
    fn edge_geometric_identity() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        let nf = node_factors(&tf);
        let one = Series::one(Var::R, K);
        let e = edge_factor(EdgeKind::Unitary, O, I, &tf).unwrap();
        let a = &one - &nf.y_a;
        assert_eq!(&e * &(&(&a * &a) - &(&nf.y_bo * &nf.y_bi)), a);
        assert_eq!(*e.coeff(0), Poly::one());
    }

    #[test]
    fn vertex_examples() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        let one = Series::one(Var::R, K);
        let d3 = (&one - &tf.h).pow(-3).unwrap();
        let d4 = (&one - &tf.h).pow(-4).unwrap();
        assert_eq!(vertex_factor(&tf, &[I, I, O, O]).unwrap(), -&(&(&tf.fhat * &tf.f) * &d4));
        assert_eq!(vertex_factor(&tf, &[I, O, I]).unwrap(), -&(&tf.f * &d3));
        assert_eq!(vertex_factor(&tf, &[IO, IO, IO]).unwrap(), -&d3);
        // q = 3: −(f³/(1−h)³)(1 − 1/ζ₂²)
        let f3 = tf.f.pow(3).unwrap();
        let want = -&(&(&f3 - &tf.f_q.pow(3).unwrap().mul_poly(&Poly::zeta2())) * &d3);
        assert_eq!(vertex_factor(&tf, &[I, I, I]).unwrap(), want);
        assert!(vertex_factor(&tf, &[I, O]).is_err());
    }

    #[test]
    fn reflection_is_not_symmetric_transmission() {
        let t = solve_tree_functions(Quantity::Transmission, 6);
        let r = solve_tree_functions(Quantity::Reflection, 6);
        let half = crate::algebra::Rational::new(1.into(), 2.into());
        let at_half = |s: &Series, n: usize| s.coeff(n).eval(&half);
        let (nt, nr) = (node_factors(&t), node_factors(&r));
        assert_ne!(at_half(&nt.y_b, 4), at_half(&nr.y_b, 4));
    }
}
