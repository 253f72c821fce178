//! Truncated power series in `r` or `s = r²` with `Poly` coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use super::poly::{rational_string, Poly};
use super::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    R,
    S,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series mismatch: {0}")]
    Mismatch(String),
    #[error("constant term is not an invertible rational")]
    NonInvertible,
    #[error("square root needs constant term 1")]
    Branch,
    #[error("odd power r^{0} has a nonzero coefficient")]
    Parity(usize),
    #[error("operation needs a series in {0:?}")]
    WrongVar(Var),
    #[error("cannot divide by {var:?}^{k}: low coefficient nonzero")]
    NotDivisible { var: Var, k: usize },
}

/// Coefficients of powers `0..=trunc` of the variable.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    var: Var,
    trunc: usize,
    coeffs: Vec<Poly>,
}

impl Series {
    pub fn zero(var: Var, trunc: usize) -> Self {
        Series { var, trunc, coeffs: vec![Poly::zero(); trunc + 1] }
    }

    pub fn constant(var: Var, trunc: usize, c: Poly) -> Self {
        let mut s = Series::zero(var, trunc);
        s.coeffs[0] = c;
        s
    }

    pub fn one(var: Var, trunc: usize) -> Self {
        Series::constant(var, trunc, Poly::one())
    }

    /// `c · var^k`, or zero when `k` is beyond the truncation.
    pub fn monomial(var: Var, trunc: usize, k: usize, c: Poly) -> Self {
        let mut s = Series::zero(var, trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(var: Var, trunc: usize, mut coeffs: Vec<Poly>) -> Self {
        coeffs.resize(trunc + 1, Poly::zero());
        Series { var, trunc, coeffs }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Poly) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, trunc: usize) -> Series {
        assert!(trunc <= self.trunc, "cannot extend a truncated series");
        Series { var: self.var, trunc, coeffs: self.coeffs[..=trunc].to_vec() }
    }

    fn check(&self, o: &Series) -> Result<(), SeriesError> {
        if self.var != o.var || self.trunc != o.trunc {
            return Err(SeriesError::Mismatch(format!(
                "{:?}/{} vs {:?}/{}",
                self.var, self.trunc, o.var, o.trunc
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(Series { var: self.var, trunc: self.trunc, coeffs })
    }

    pub fn try_mul(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check(o)?;
        let k = self.trunc;
        let mut coeffs = vec![Poly::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..=k - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(Series { var: self.var, trunc: k, coeffs })
    }

    pub fn try_div(&self, o: &Series) -> Result<Series, SeriesError> {
        self.check(o)?;
        self.try_mul(&o.inverse()?)
    }

    pub fn mul_poly(&self, p: &Poly) -> Series {
        self.map(|c| c * p)
    }

    pub fn scale(&self, c: &Rational) -> Series {
        self.map(|x| x.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Series {
        Series { var: self.var, trunc: self.trunc, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// `1/a`; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<Series, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() || !c0.is_constant() {
            return Err(SeriesError::NonInvertible);
        }
        let inv0 = Rational::one() / c0.constant_term();
        let mut out: Vec<Poly> = Vec::with_capacity(self.trunc + 1);
        out.push(Poly::constant(&inv0));
        let neg_inv0 = -inv0;
        for n in 1..=self.trunc {
            let mut acc = Poly::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                let b = &out[n - k];
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            out.push(acc.scale(&neg_inv0));
        }
        Ok(Series { var: self.var, trunc: self.trunc, coeffs: out })
    }

    /// Square root with constant term 1.
    pub fn sqrt(&self) -> Result<Series, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::Branch);
        }
        let half = Rational::new(1.into(), 2.into());
        let mut out: Vec<Poly> = Vec::with_capacity(self.trunc + 1);
        out.push(Poly::one());
        for n in 1..=self.trunc {
            let mut acc = self.coeffs[n].clone();
            for k in 1..n {
                let a = &out[k];
                let b = &out[n - k];
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc - &(a * b);
                }
            }
            out.push(acc.scale(&half));
        }
        Ok(Series { var: self.var, trunc: self.trunc, coeffs: out })
    }

    /// Integer power; negative exponents go through `inverse`.
    pub fn pow(&self, e: i64) -> Result<Series, SeriesError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Series::one(self.var, self.trunc);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `a^(e/2)`, computed as an integer power of the square root.
    pub fn pow_half(&self, e: i64) -> Result<Series, SeriesError> {
        if e % 2 == 0 {
            self.pow(e / 2)
        } else {
            self.sqrt()?.pow(e)
        }
    }

    /// `s·d/ds`: the coefficient of `s^n` is multiplied by `n`.
    pub fn s_d_ds(&self) -> Result<Series, SeriesError> {
        if self.var != Var::S {
            return Err(SeriesError::WrongVar(Var::S));
        }
        Ok(Series {
            var: Var::S,
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c.scale_int(&(n as i64).into()))
                .collect(),
        })
    }

    /// Coefficient of `s^n` becomes the coefficient of `r^{2n}`; odd powers
    /// must vanish.
    pub fn reindex_r_to_s(&self) -> Result<Series, SeriesError> {
        if self.var != Var::R {
            return Err(SeriesError::WrongVar(Var::R));
        }
        if let Some(k) = (1..=self.trunc).step_by(2).find(|&k| !self.coeffs[k].is_zero()) {
            return Err(SeriesError::Parity(k));
        }
        let coeffs = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(Series { var: Var::S, trunc: self.trunc / 2, coeffs })
    }

    /// Inverse of `reindex_r_to_s`, truncated at `r^{2K}`.
    pub fn s_to_r(&self) -> Result<Series, SeriesError> {
        if self.var != Var::S {
            return Err(SeriesError::WrongVar(Var::S));
        }
        let mut out = Series::zero(Var::R, 2 * self.trunc);
        for (n, c) in self.coeffs.iter().enumerate() {
            out.coeffs[2 * n] = c.clone();
        }
        Ok(out)
    }

    /// Multiplies by `var^k`.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut out = Series::zero(self.var, self.trunc);
        for n in k..=self.trunc {
            out.coeffs[n] = self.coeffs[n - k].clone();
        }
        out
    }

    /// Divides by `var^k`; the result loses `k` orders of truncation.
    pub fn shift_down(&self, k: usize) -> Result<Series, SeriesError> {
        if k > self.trunc || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(SeriesError::NotDivisible { var: self.var, k });
        }
        Ok(Series { var: self.var, trunc: self.trunc - k, coeffs: self.coeffs[k..].to_vec() })
    }

    /// Applies ζ₁ ↦ 1 − ζ₁ to every coefficient.
    pub fn reflect(&self) -> Series {
        self.map(Poly::reflect)
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(Poly::is_symmetric)
    }

    /// Every coefficient divided exactly by `p`.
    pub fn div_poly_exact(&self, p: &Poly) -> Option<Series> {
        let coeffs = self.coeffs.iter().map(|c| c.div_exact(p)).collect::<Option<Vec<_>>>()?;
        Some(Series { var: self.var, trunc: self.trunc, coeffs })
    }

    /// `[[power, [ζ₁ coefficients]]]` with rationals as `"num/den"`.
    pub fn to_json_zeta1(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| serde_json::json!([n, c.to_strings()]))
                .collect(),
        )
    }

    /// Same layout in the ξ basis, or `None` if some coefficient is not
    /// symmetric in ζ₁ ↔ ζ₂.
    pub fn to_json_xi(&self) -> Option<serde_json::Value> {
        let mut rows = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            let xs = c.to_xi_basis()?;
            rows.push(serde_json::json!([n, xs.iter().map(rational_string).collect::<Vec<_>>()]));
        }
        Some(serde_json::Value::Array(rows))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.var {
            Var::R => "r",
            Var::S => "s",
        };
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c}){v}^{n}")?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({v}^{})", self.trunc + 1)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        self.try_add(o).expect("series add")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        self.try_add(&-o).expect("series sub")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        self.try_mul(o).expect("series mul")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.map(|c| -c)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Series {
            type Output = Series;
            fn $m(self, o: Series) -> Series { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
