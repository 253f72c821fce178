//! Univariate polynomials in ζ₁ with rational coefficients.
//!
//! Stored as integer numerators over one shared positive denominator, kept
//! primitive, so the common case of integer coefficients never touches a gcd.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { num: Vec::new(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Poly::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Poly::from_ints(&[c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_parts(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }

    pub fn constant(c: &Rational) -> Self {
        Poly::from_parts(vec![c.numer().clone()], c.denom().clone())
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Poly::from_parts(num, den)
    }

    /// ζ₁
    pub fn zeta1() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// ζ₂ = 1 − ζ₁
    pub fn zeta2() -> Self {
        Poly::from_ints(&[1, -1])
    }

    /// ξ = ζ₁ζ₂ = ζ₁ − ζ₁²
    pub fn xi() -> Self {
        Poly::from_ints(&[0, 1, -1])
    }

    fn from_parts(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(|c| c.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            return Poly::zero();
        }
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                den /= &g;
                for c in &mut num {
                    *c /= &g;
                }
            }
        }
        Poly { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.den.is_one() && self.num[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        match self.num.get(i) {
            Some(c) => Rational::new(c.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() || self.is_zero() {
            return Poly::zero();
        }
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Poly::from_parts(num, &self.den * c.denom())
    }

    pub fn scale_int(&self, c: &BigInt) -> Poly {
        if c.is_zero() || self.is_zero() {
            return Poly::zero();
        }
        Poly::from_parts(self.num.iter().map(|x| x * c).collect(), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by ζ₁^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut num = vec![BigInt::zero(); k];
        num.extend(self.num.iter().cloned());
        Poly { num, den: self.den.clone() }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.num.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc / Rational::from_integer(self.den.clone())
    }

    /// Substitutes ζ₁ ↦ 1 − ζ₁ (exchanges ζ₁ and ζ₂).
    pub fn reflect(&self) -> Poly {
        // Horner in (1 - ζ₁).
        let base = Poly::zeta2();
        let mut acc = Poly::zero();
        for c in self.num.iter().rev() {
            acc = &(&acc * &base) + &Poly::from_parts(vec![c.clone()], BigInt::one());
        }
        Poly::from_parts(acc.num, &acc.den * &self.den)
    }

    pub fn is_symmetric(&self) -> bool {
        self.reflect() == *self
    }

    /// Exact division; `None` when the divisor is zero or leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lead = Rational::new(d.num[dd].clone(), d.den.clone());
        let mut rem: Vec<Rational> = self.coeffs();
        let dc = d.coeffs();
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let q = &rem[k + dd] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in dc.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Poly::from_rationals(&quot))
        } else {
            None
        }
    }

    /// Coefficients in powers of ξ, valid only for polynomials invariant under
    /// ζ₁ ↦ 1 − ζ₁.
    pub fn to_xi_basis(&self) -> Option<Vec<Rational>> {
        if !self.is_symmetric() {
            return None;
        }
        let mut rest = self.clone();
        let mut out = Vec::new();
        let xi = Poly::xi();
        while !rest.is_zero() {
            let deg = rest.degree().unwrap();
            if deg % 2 == 1 {
                return None;
            }
            let d = deg / 2;
            // Leading coefficient of ξ^d is (−1)^d.
            let mut c = rest.coeff(deg);
            if d % 2 == 1 {
                c = -c;
            }
            if out.len() <= d {
                out.resize(d + 1, Rational::zero());
            }
            out[d] = c.clone();
            rest = &rest - &xi.pow(d as u32).scale(&c);
        }
        Some(out)
    }

    pub fn from_xi_basis(coeffs: &[Rational]) -> Poly {
        let xi = Poly::xi();
        let mut acc = Poly::zero();
        let mut p = Poly::one();
        for c in coeffs {
            acc = &acc + &p.scale(c);
            p = &p * &xi;
        }
        acc
    }

    /// Coefficients as `"num/den"` strings, lowest power first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(rational_string).collect()
    }
}

pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let n = self.num.len().max(o.num.len());
        let mut num = Vec::with_capacity(n);
        if self.den == o.den {
            for i in 0..n {
                num.push(get(&self.num, i) + get(&o.num, i));
            }
            return Poly::from_parts(num, self.den.clone());
        }
        let den = self.den.lcm(&o.den);
        let fa = &den / &self.den;
        let fb = &den / &o.den;
        for i in 0..n {
            num.push(get(&self.num, i) * &fa + get(&o.num, i) * &fb);
        }
        Poly::from_parts(num, den)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut num = vec![BigInt::zero(); self.num.len() + o.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    num[i + j] += a * b;
                }
            }
        }
        let den = &self.den * &o.den;
        Poly::from_parts(num, den)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn get(v: &[BigInt], i: usize) -> BigInt {
    v.get(i).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn xi_is_product() {
        assert_eq!(&Poly::zeta1() * &Poly::zeta2(), Poly::xi());
    }

    #[test]
    fn canonical_form() {
        let p = Poly::from_rationals(&[q(2, 4), q(0, 1), q(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.coeff(0), q(1, 2));
        assert_eq!(p.denominator(), &BigInt::from(2));
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z, Poly::zero());
    }

    #[test]
    fn mixed_denominators() {
        let a = Poly::from_rationals(&[q(1, 3), q(1, 2)]);
        let b = Poly::from_rationals(&[q(1, 6), q(-1, 2)]);
        assert_eq!(&a + &b, Poly::constant(&q(1, 2)));
        assert_eq!((&a * &b).coeff(1), q(1, 12) - q(1, 6));
    }

    #[test]
    fn reflect_and_xi_basis() {
        let z1 = Poly::zeta1();
        assert_eq!(z1.reflect(), Poly::zeta2());
        assert!(Poly::xi().is_symmetric());
        let p = Poly::from_xi_basis(&[q(3, 1), q(-2, 5), q(7, 1)]);
        assert_eq!(p.to_xi_basis().unwrap(), vec![q(3, 1), q(-2, 5), q(7, 1)]);
        assert!(z1.to_xi_basis().is_none());
    }

    #[test]
    fn exact_division() {
        let a = Poly::from_ints(&[1, 2, 3]);
        let b = Poly::from_ints(&[-1, 1]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&b).is_none());
        assert!(a.div_exact(&Poly::zero()).is_none());
    }

    #[test]
    fn eval_matches() {
        let p = Poly::xi();
        assert_eq!(p.eval(&q(1, 3)), q(2, 9));
    }
}
