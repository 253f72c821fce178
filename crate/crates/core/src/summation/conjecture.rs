//! Strips the conjectured prefactor from a generating function and checks
//! that what remains is a polynomial of the expected degrees.
//!
//! Transmission: `T = (ξs)^β (1−s)^{−(2g+1)/2} (1−s+4ξs)^{−(6g−1)/2} P(ξ, s)`
//! with `deg_ξ P ≤ 2g−β`, `deg_s P ≤ 2(2g−β)`.
//! Reflection: `R = (ξs)^β (s−1)^{β−1} (1−4ξs)^{−(6g−1)/2} Q(ξs, s)` with
//! `Q` of order `2g−β` in each of `ξs` and `s`.

use serde_json::json;

use crate::algebra::{rational_string, Poly, Rational, Series, Var};
use crate::{Quantity, Symmetry};

use super::GenFunResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConjectureStatus {
    /// Quotient is a polynomial within the bounds and the truncation covers
    /// at least one order past the bound in `s`.
    Polynomial,
    /// Quotient is consistent with the bounds, but the truncation does not
    /// reach past them.
    Undetermined,
    /// The series vanishes identically.
    Zero,
    Violation(String),
}

impl ConjectureStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConjectureStatus::Polynomial => "polynomial",
            ConjectureStatus::Undetermined => "undetermined",
            ConjectureStatus::Zero => "zero",
            ConjectureStatus::Violation(_) => "violation",
        }
    }
}

/// `coeff · ξ^xi · s^s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub xi: usize,
    pub s: usize,
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub status: ConjectureStatus,
    pub beta: u32,
    pub terms: Vec<Term>,
    /// Bounds: degree in `ξ` and in `s` for transmission, in `ξs` and
    /// in `s` for reflection.
    pub bound: (usize, usize),
    /// Last `s` power of the quotient that was checked.
    pub checked_through: usize,
}

impl ConjectureReport {
    pub fn is_polynomial(&self) -> bool {
        self.status == ConjectureStatus::Polynomial
    }

    /// Degrees actually used: `(max ξ power, max s power)`.
    pub fn degrees(&self) -> (usize, usize) {
        let dx = self.terms.iter().map(|t| t.xi).max().unwrap_or(0);
        let ds = self.terms.iter().map(|t| t.s).max().unwrap_or(0);
        (dx, ds)
    }

    /// Polynomial as a bivariate [`Poly`]-valued series in `s`.
    pub fn polynomial(&self) -> Vec<(usize, Poly)> {
        let mut by_s: std::collections::BTreeMap<usize, Poly> = Default::default();
        for t in &self.terms {
            let e = by_s.entry(t.s).or_insert_with(Poly::zero);
            *e = &*e + &Poly::xi().pow(t.xi as u32).scale(&t.coeff);
        }
        by_s.into_iter().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let poly = match self.status {
            ConjectureStatus::Polynomial | ConjectureStatus::Undetermined => json!(self
                .terms
                .iter()
                .map(|t| json!({"coeff": rational_string(&t.coeff), "xi": t.xi, "s": t.s}))
                .collect::<Vec<_>>()),
            _ => serde_json::Value::Null,
        };
        let mut out = json!({
            "status": self.status.as_str(),
            "beta": self.beta,
            "bound": [self.bound.0, self.bound.1],
            "checked_through": self.checked_through,
            "polynomial": poly,
        });
        if let ConjectureStatus::Violation(msg) = &self.status {
            out["detail"] = json!(msg);
        }
        out
    }
}

fn half_power(base: &Series, e: i64) -> Series {
    base.pow_half(e).expect("unit constant term")
}

pub fn conjecture_extract(result: &GenFunResult) -> ConjectureReport {
    let beta: u32 = match result.symmetry {
        Symmetry::Orthogonal => 1,
        Symmetry::Unitary => 2,
    };
    let g2 = result.genus2 as usize;
    let series = &result.series;
    let k = series.trunc();
    let mut report = ConjectureReport {
        status: ConjectureStatus::Zero,
        beta,
        terms: Vec::new(),
        bound: (g2.saturating_sub(beta as usize), 0),
        checked_through: 0,
    };
    report.bound.1 = match result.quantity {
        Quantity::Transmission => 2 * report.bound.0,
        Quantity::Reflection => report.bound.0,
    };
    if series.is_zero() {
        return report;
    }
    if g2 < beta as usize {
        report.status = ConjectureStatus::Violation(format!("nonzero series below the minimal order 2g = {beta}"));
        return report;
    }
    let one = Series::one(Var::S, k);
    let s = Series::monomial(Var::S, k, 1, Poly::one());
    let xs4 = s.mul_poly(&Poly::xi().scale_int(&4.into()));
    let e_big = 3 * g2 as i64 - 1;
    let stripped = match result.quantity {
        Quantity::Transmission => {
            let a = &one - &s;
            let b = &a + &xs4;
            &(series * &half_power(&a, g2 as i64 + 1)) * &half_power(&b, e_big)
        }
        Quantity::Reflection => {
            let c = &one - &xs4;
            let mut q = series * &half_power(&c, e_big);
            if beta == 2 {
                q = -&q.try_div(&(&one - &s)).expect("unit constant term");
            }
            q
        }
    };
    let Ok(shifted) = stripped.shift_down(beta as usize) else {
        report.status = ConjectureStatus::Violation(format!("series does not start at s^{beta}"));
        return report;
    };
    let Some(quot) = shifted.div_poly_exact(&Poly::xi().pow(beta)) else {
        report.status = ConjectureStatus::Violation(format!("coefficients not divisible by ξ^{beta}"));
        return report;
    };
    report.checked_through = quot.trunc();
    let (bx, bs) = report.bound;
    let s_max = match result.quantity {
        Quantity::Transmission => bs,
        Quantity::Reflection => bx + bs,
    };
    for (n, c) in quot.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let Some(xs) = c.to_xi_basis() else {
            report.status = ConjectureStatus::Violation(format!("coefficient of s^{n} is not a polynomial in ξ"));
            return report;
        };
        if n > s_max {
            report.status = ConjectureStatus::Violation(format!("nonzero coefficient at s^{n} beyond degree {s_max}"));
            return report;
        }
        for (a, v) in xs.into_iter().enumerate() {
            if num_traits::Zero::is_zero(&v) {
                continue;
            }
            let ok = match result.quantity {
                Quantity::Transmission => a <= bx,
                Quantity::Reflection => a <= bx && n >= a && n - a <= bs,
            };
            if !ok {
                report.status = ConjectureStatus::Violation(format!("term ξ^{a} s^{n} outside the conjectured degrees"));
                return report;
            }
            report.terms.push(Term { coeff: v, xi: a, s: n });
        }
    }
    report.status = if quot.trunc() > s_max { ConjectureStatus::Polynomial } else { ConjectureStatus::Undetermined };
    report
}
