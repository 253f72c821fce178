//! Published closed forms for `T_{2g}` and `R_{2g}`, expanded in `s`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Poly, Series, SeriesError, Var};
use crate::trees::leading_order_closed_form;
use crate::{Quantity, Symmetry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    T0,
    R0,
    T1O,
    T2U,
    T2O,
    T3O,
    T4U,
    T4O,
    R1O,
    R2U,
    R2O,
    R3O,
    R4U,
    R4O,
}

impl FormulaId {
    pub const ALL: [FormulaId; 14] = [
        FormulaId::T0,
        FormulaId::R0,
        FormulaId::T1O,
        FormulaId::T2U,
        FormulaId::T2O,
        FormulaId::T3O,
        FormulaId::T4U,
        FormulaId::T4O,
        FormulaId::R1O,
        FormulaId::R2U,
        FormulaId::R2O,
        FormulaId::R3O,
        FormulaId::R4U,
        FormulaId::R4O,
    ];

    /// The catalogued formula for an order, if any. Orders without one are
    /// either zero (unitary at odd `2g`) or not catalogued.
    pub fn for_order(quantity: Quantity, symmetry: Symmetry, genus2: u32) -> Option<FormulaId> {
        use FormulaId::*;
        use Quantity::*;
        use Symmetry::*;
        Some(match (quantity, symmetry, genus2) {
            (Transmission, _, 0) => T0,
            (Reflection, _, 0) => R0,
            (Transmission, Orthogonal, 1) => T1O,
            (Transmission, Unitary, 2) => T2U,
            (Transmission, Orthogonal, 2) => T2O,
            (Transmission, Orthogonal, 3) => T3O,
            (Transmission, Unitary, 4) => T4U,
            (Transmission, Orthogonal, 4) => T4O,
            (Reflection, Orthogonal, 1) => R1O,
            (Reflection, Unitary, 2) => R2U,
            (Reflection, Orthogonal, 2) => R2O,
            (Reflection, Orthogonal, 3) => R3O,
            (Reflection, Unitary, 4) => R4U,
            (Reflection, Orthogonal, 4) => R4O,
            _ => return None,
        })
    }

    pub fn order(self) -> (Quantity, Option<Symmetry>, u32) {
        use FormulaId::*;
        use Quantity::*;
        use Symmetry::*;
        match self {
            T0 => (Transmission, None, 0),
            R0 => (Reflection, None, 0),
            T1O => (Transmission, Some(Orthogonal), 1),
            T2U => (Transmission, Some(Unitary), 2),
            T2O => (Transmission, Some(Orthogonal), 2),
            T3O => (Transmission, Some(Orthogonal), 3),
            T4U => (Transmission, Some(Unitary), 4),
            T4O => (Transmission, Some(Orthogonal), 4),
            R1O => (Reflection, Some(Orthogonal), 1),
            R2U => (Reflection, Some(Unitary), 2),
            R2O => (Reflection, Some(Orthogonal), 2),
            R3O => (Reflection, Some(Orthogonal), 3),
            R4U => (Reflection, Some(Unitary), 4),
            R4O => (Reflection, Some(Orthogonal), 4),
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FormulaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown formula id {s:?}"))
    }
}

/// `Σ c ξ^a s^b` as a series.
fn terms(k: usize, t: &[(i64, u32, usize)]) -> Series {
    let mut out = Series::zero(Var::S, k);
    let xi = Poly::xi();
    for &(c, a, b) in t {
        if b <= k {
            out = &out + &Series::monomial(Var::S, k, b, xi.pow(a).scale_int(&c.into()));
        }
    }
    out
}

/// `pre · poly · (1−s)^{a/2} (1−s+4ξs)^{b/2} (1−4ξs)^{c/2}`.
fn build(
    k: usize,
    pre: &[(i64, u32, usize)],
    poly: &[(i64, u32, usize)],
    halves: (i64, i64, i64),
) -> Result<Series, SeriesError> {
    let one = Series::one(Var::S, k);
    let s = Series::monomial(Var::S, k, 1, Poly::one());
    let xs4 = s.mul_poly(&Poly::xi().scale_int(&4.into()));
    let a = &one - &s;
    let b = &a + &xs4;
    let c = &one - &xs4;
    let mut out = &terms(k, pre) * &terms(k, poly);
    for (base, e) in [(a, halves.0), (b, halves.1), (c, halves.2)] {
        if e != 0 {
            out = &out * &base.pow_half(e)?;
        }
    }
    Ok(out)
}

const ONE: &[(i64, u32, usize)] = &[(1, 0, 0)];

/// Series of a catalogued formula through `s^K`.
pub fn closed_form_series(id: FormulaId, k: usize) -> Result<Series, SeriesError> {
    use FormulaId::*;
    match id {
        T0 => leading_order_closed_form(Quantity::Transmission, k),
        R0 => leading_order_closed_form(Quantity::Reflection, k),
        T1O => build(k, &[(-1, 1, 1)], ONE, (-2, -2, 0)),
        T2U => build(k, &[(-1, 2, 2)], ONE, (-3, -5, 0)),
        T2O => build(k, &[(1, 1, 1)], &[(1, 0, 0), (-1, 0, 2), (4, 1, 2), (-3, 1, 1)], (-3, -5, 0)),
        T3O => build(
            k,
            &[(-1, 1, 1)],
            &[(1, 0, 2), (6, 0, 1), (1, 0, 0), (-8, 1, 2), (-24, 1, 1), (16, 2, 2)],
            (0, -8, 0),
        ),
        T4U => build(
            k,
            &[(-1, 2, 2)],
            &[
                (1, 0, 0),
                (4, 0, 1),
                (-10, 0, 2),
                (4, 0, 3),
                (1, 0, 4),
                (-20, 1, 1),
                (40, 1, 2),
                (-12, 1, 3),
                (-8, 1, 4),
                (9, 2, 2),
                (-16, 2, 3),
                (16, 2, 4),
            ],
            (-5, -11, 0),
        ),
        T4O => build(
            k,
            &[(1, 1, 1)],
            &[
                (1, 0, 0),
                (20, 0, 1),
                (-43, 0, 2),
                (43, 0, 4),
                (-20, 0, 5),
                (-1, 0, 6),
                (-99, 1, 1),
                (68, 1, 2),
                (326, 1, 3),
                (-448, 1, 4),
                (141, 1, 5),
                (12, 1, 6),
                (518, 2, 2),
                (-1304, 2, 3),
                (1002, 2, 4),
                (-168, 2, 5),
                (-48, 2, 6),
                (-165, 3, 3),
                (408, 3, 4),
                (-304, 3, 5),
                (64, 3, 6),
            ],
            (-5, -11, 0),
        ),
        R1O => build(k, &[(1, 1, 1)], ONE, (0, 0, -2)),
        R2U => build(k, &[(1, 2, 3), (-1, 2, 2)], ONE, (0, 0, -5)),
        R2O => build(k, &[(-1, 1, 1)], &[(1, 1, 2), (3, 1, 1), (-2, 0, 1), (1, 0, 0)], (0, 0, -5)),
        R3O => build(
            k,
            &[(1, 1, 1)],
            &[(8, 0, 2), (-8, 0, 1), (1, 0, 0), (-32, 1, 2), (24, 1, 1), (16, 2, 2)],
            (0, 0, -8),
        ),
        R4U => build(
            k,
            &[(1, 2, 3), (-1, 2, 2)],
            &[
                (1, 0, 0),
                (20, 1, 1),
                (9, 2, 2),
                (-8, 0, 1),
                (-20, 1, 2),
                (-2, 2, 3),
                (8, 0, 2),
                (-8, 1, 3),
                (9, 2, 4),
            ],
            (0, 0, -11),
        ),
        R4O => build(
            k,
            &[(-1, 1, 1)],
            &[
                (1, 0, 0),
                (-26, 0, 1),
                (-52, 1, 4),
                (198, 2, 4),
                (3, 3, 6),
                (4, 2, 5),
                (-17, 3, 5),
                (-87, 3, 4),
                (392, 1, 3),
                (-768, 2, 3),
                (-427, 1, 2),
                (518, 2, 2),
                (165, 3, 3),
                (-48, 0, 3),
                (72, 0, 2),
                (99, 1, 1),
            ],
            (0, 0, -11),
        ),
    }
}

/// Expected series for an order: the catalogued form, or zero where no
/// structure exists.
pub fn expected_series(quantity: Quantity, symmetry: Symmetry, genus2: u32, k: usize) -> Option<Series> {
    if symmetry == Symmetry::Unitary && genus2 % 2 == 1 {
        return Some(Series::zero(Var::S, k));
    }
    FormulaId::for_order(quantity, symmetry, genus2).map(|id| closed_form_series(id, k).expect("catalogued form"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_geometric() {
        let s = closed_form_series(FormulaId::R1O, 6).unwrap();
        let xi = Poly::xi();
        for n in 1..=6 {
            assert_eq!(s.coeff(n), &xi.pow(n as u32).scale_int(&(4i64.pow(n as u32 - 1)).into()));
        }
        assert!(s.coeff(0).is_zero());
    }

    #[test]
    fn low_orders() {
        let xi = Poly::xi();
        let r2u = closed_form_series(FormulaId::R2U, 4).unwrap();
        assert_eq!(r2u.coeff(2), &-&xi.pow(2));
        assert!(r2u.coeff(1).is_zero());
        let t3 = closed_form_series(FormulaId::T3O, 4).unwrap();
        assert_eq!(t3.coeff(1), &-&xi);
        let t2u = closed_form_series(FormulaId::T2U, 4).unwrap();
        assert_eq!(t2u.coeff(2), &-&xi.pow(2));
        // T₁ᴼ at order s is −ξ: conductance correction −ξ
        let t1 = closed_form_series(FormulaId::T1O, 4).unwrap();
        assert_eq!(t1.coeff(1), &-&xi);
    }

    #[test]
    fn ids_round_trip() {
        for id in FormulaId::ALL {
            assert_eq!(id.to_string().parse::<FormulaId>().unwrap(), id);
            let (q, sym, g) = id.order();
            if let Some(sym) = sym {
                assert_eq!(FormulaId::for_order(q, sym, g), Some(id));
            }
        }
        assert!("T9X".parse::<FormulaId>().is_err());
    }

    #[test]
    fn transmission_forms_symmetric() {
        for id in FormulaId::ALL {
            let s = closed_form_series(id, 8).unwrap();
            assert_eq!(s.is_symmetric(), id != FormulaId::R0, "{id}");
        }
    }
}
