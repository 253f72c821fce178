//! Generating functions of the trees grafted onto base structures.

use crate::algebra::{Poly, Rational, Series, SeriesError, Var};
use crate::Quantity;

/// Tree series in `r`, truncated at `r^K`.
///
/// Besides `f`, `f̂` and `h = f·f̂` this keeps the exact quotients used to
/// clear negative powers of ζ₁ and ζ₂ later on: for transmission
/// `F = f/ζ₂`, `F̂ = f̂/ζ₁`, `H = h/ξ`; for reflection `G = f/ζ₁` (stored in
/// both `f_q` and `fhat_q`) and `H = f²/ζ₁²`.
#[derive(Debug, Clone)]
pub struct TreeFunctions {
    pub quantity: Quantity,
    pub trunc: usize,
    pub f: Series,
    pub fhat: Series,
    pub h: Series,
    pub f_q: Series,
    pub fhat_q: Series,
    pub h_q: Series,
}

pub fn solve_tree_functions(quantity: Quantity, trunc: usize) -> TreeFunctions {
    assert!(trunc >= 2, "truncation must be at least 2");
    match quantity {
        Quantity::Transmission => transmission(trunc),
        Quantity::Reflection => reflection(trunc),
    }
}

fn r_mono(trunc: usize, k: usize, c: Poly) -> Series {
    Series::monomial(Var::R, trunc, k, c)
}

/// Newton iteration for a root of `q` with zero constant term, seeded at 0.
/// Each pass at least doubles the number of correct coefficients.
fn newton(trunc: usize, q: impl Fn(&Series) -> (Series, Series)) -> Series {
    let mut x = Series::zero(Var::R, trunc);
    let mut correct = 1usize;
    loop {
        let (val, der) = q(&x);
        if val.is_zero() {
            return x;
        }
        x = &x - &val.try_div(&der).expect("derivative has unit constant term");
        correct *= 2;
        assert!(correct <= 4 * (trunc + 2), "Newton iteration failed to converge");
    }
}

fn transmission(trunc: usize) -> TreeFunctions {
    let s = r_mono(trunc, 2, Poly::one());
    let xi = Poly::xi();
    let s_xi = s.mul_poly(&xi);
    // s ξ h² + (s − 2sξ − 1) h + s ξ
    let lin = &(&s - &s_xi.scale(&Rational::from_integer(2.into()))) - &Series::one(Var::R, trunc);
    let h = newton(trunc, |h| {
        let val = &(&(&s_xi * &(h * h)) + &(&lin * h)) + &s_xi;
        let der = &(&s_xi * h).scale(&Rational::from_integer(2.into())) + &lin;
        (val, der)
    });
    let r = r_mono(trunc, 1, Poly::one());
    let one = Series::one(Var::R, trunc);
    let f = &r * &(&Series::constant(Var::R, trunc, Poly::zeta2()) + &h.mul_poly(&Poly::zeta1()));
    let fhat = &r * &(&Series::constant(Var::R, trunc, Poly::zeta1()) + &h.mul_poly(&Poly::zeta2()));
    let h_q = h.div_poly_exact(&xi).expect("h is divisible by xi");
    let z1sq = Poly::zeta1().pow(2);
    let z2sq = Poly::zeta2().pow(2);
    let f_q = &r * &(&one + &h_q.mul_poly(&z1sq));
    let fhat_q = &r * &(&one + &h_q.mul_poly(&z2sq));
    TreeFunctions { quantity: Quantity::Transmission, trunc, f, fhat, h, f_q, fhat_q, h_q }
}

fn reflection(trunc: usize) -> TreeFunctions {
    let r = r_mono(trunc, 1, Poly::one());
    let rz1 = r.mul_poly(&Poly::zeta1());
    let rz2 = r.mul_poly(&Poly::zeta2());
    let one = Series::one(Var::R, trunc);
    // r ζ₂ f² − f + r ζ₁
    let f = newton(trunc, |f| {
        let val = &(&(&rz2 * &(f * f)) - f) + &rz1;
        let der = &(&rz2 * f).scale(&Rational::from_integer(2.into())) - &one;
        (val, der)
    });
    let h = &f * &f;
    let g = f.div_poly_exact(&Poly::zeta1()).expect("f is divisible by zeta1");
    let h_q = &g * &g;
    TreeFunctions {
        quantity: Quantity::Reflection,
        trunc,
        fhat: f.clone(),
        f,
        h,
        f_q: g.clone(),
        fhat_q: g,
        h_q,
    }
}

/// Closed-form leading order `T₀` or `R₀` as a series in `s` through `s^K`.
pub fn leading_order_closed_form(quantity: Quantity, trunc_s: usize) -> Result<Series, SeriesError> {
    let one = Series::one(Var::S, trunc_s);
    let s = Series::monomial(Var::S, trunc_s, 1, Poly::one());
    let xi_s = s.mul_poly(&Poly::xi());
    let half = Rational::new(1.into(), 2.into());
    let four = Rational::from_integer(4.into());
    match quantity {
        Quantity::Transmission => {
            // ½ √(1 + 4ξs/(1−s)) − ½
            let inner = &one + &xi_s.scale(&four).try_div(&(&one - &s))?;
            Ok((&inner.sqrt()? - &one).scale(&half))
        }
        Quantity::Reflection => {
            // (2ζ₁s − 1 + √(1 − 4ξs)) / (2(1 − s))
            let root = (&one - &xi_s.scale(&four)).sqrt()?;
            let num = &(&s.mul_poly(&Poly::zeta1().scale_int(&2.into())) - &one) + &root;
            num.scale(&half).try_div(&(&one - &s))
        }
    }
}

/// Leading order built from the tree functions alone: `T₀ = h/(1−h)` and
/// `R₀ = (ζ₁s − ζ₂ r f)/(1 − s)`, returned in `s`.
pub fn leading_order_from_trees(tf: &TreeFunctions) -> Result<Series, SeriesError> {
    let k = tf.trunc;
    let one = Series::one(Var::R, k);
    let out = match tf.quantity {
        Quantity::Transmission => tf.h.try_div(&(&one - &tf.h))?,
        Quantity::Reflection => {
            let s = r_mono(k, 2, Poly::one());
            let r = r_mono(k, 1, Poly::one());
            let num = &s.mul_poly(&Poly::zeta1()) - &(&r * &tf.f).mul_poly(&Poly::zeta2());
            num.try_div(&(&one - &s))?
        }
    };
    out.reindex_r_to_s()
}

/// Residual of the defining equation: `sξh² + (s − 2sξ − 1)h + sξ` for
/// transmission, `rζ₂f² − f + rζ₁` for reflection. Zero for a correct solve.
pub fn quadratic_residual(tf: &TreeFunctions) -> Series {
    let k = tf.trunc;
    match tf.quantity {
        Quantity::Transmission => {
            let s = r_mono(k, 2, Poly::one());
            let sxi = s.mul_poly(&Poly::xi());
            let lin = &(&s - &sxi.scale(&Rational::from_integer(2.into()))) - &Series::one(Var::R, k);
            &(&(&sxi * &(&tf.h * &tf.h)) + &(&lin * &tf.h)) + &sxi
        }
        Quantity::Reflection => {
            let r = r_mono(k, 1, Poly::one());
            &(&(&r.mul_poly(&Poly::zeta2()) * &(&tf.f * &tf.f)) - &tf.f) + &r.mul_poly(&Poly::zeta1())
        }
    }
}

/// `f(1 − r f̂) − rζ₂(1 − h)` and `f̂(1 − r f) − rζ₁(1 − h)`: the simplified
/// transmission tree relations with denominators cleared.
pub fn simplified_identity_residuals(tf: &TreeFunctions) -> [Series; 2] {
    let k = tf.trunc;
    let one = Series::one(Var::R, k);
    let r = r_mono(k, 1, Poly::one());
    let w = &one - &tf.h;
    let a = &(&tf.f * &(&one - &(&r * &tf.fhat))) - &(&r * &w).mul_poly(&Poly::zeta2());
    let b = &(&tf.fhat * &(&one - &(&r * &tf.f))) - &(&r * &w).mul_poly(&Poly::zeta1());
    [a, b]
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: usize = 16;

    fn one(k: usize) -> Series {
        Series::one(Var::R, k)
    }

    #[test]
    fn h_low_order() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        let hs = tf.h.reindex_r_to_s().unwrap();
        let xi = Poly::xi();
        assert!(hs.coeff(0).is_zero());
        assert_eq!(hs.coeff(1), &xi);
        assert_eq!(hs.coeff(2), &(&xi * &(&Poly::one() - &xi.scale_int(&2.into()))));
    }

    #[test]
    fn h_quadratic_residual() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        let s = r_mono(K, 2, Poly::one());
        let sxi = s.mul_poly(&Poly::xi());
        let h = &tf.h;
        let lin = &(&s - &sxi.scale(&Rational::from_integer(2.into()))) - &one(K);
        let res = &(&(&sxi * &(h * h)) + &(&lin * h)) + &sxi;
        assert!(res.is_zero());
    }

    #[test]
    fn simplified_tree_identities() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        let r = r_mono(K, 1, Poly::one());
        let denom = &one(K) - &tf.h;
        let lhs = tf.f.try_div(&denom).unwrap();
        let rhs = r.mul_poly(&Poly::zeta2()).try_div(&(&one(K) - &(&r * &tf.fhat))).unwrap();
        assert_eq!(lhs, rhs);
        let lhs = tf.fhat.try_div(&denom).unwrap();
        let rhs = r.mul_poly(&Poly::zeta1()).try_div(&(&one(K) - &(&r * &tf.f))).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(&tf.f * &tf.fhat, tf.h);
        assert!(simplified_identity_residuals(&tf).iter().all(|s| s.is_zero()));
        for q in [Quantity::Transmission, Quantity::Reflection] {
            assert!(quadratic_residual(&solve_tree_functions(q, K)).is_zero());
        }
    }

    /// Fixed-point iteration of the unsummed tree recursion
    /// `f = rζ₂ − Σ_{k≥2} f^k f̂^{k−1} + ζ₂ Σ_{k≥2} r^k f̂^{k−1}`.
    #[test]
    fn fixed_point_cross_check() {
        let k = 12;
        let r = r_mono(k, 1, Poly::one());
        let (z1, z2) = (Poly::zeta1(), Poly::zeta2());
        let mut f = Series::zero(Var::R, k);
        let mut fh = Series::zero(Var::R, k);
        for _ in 0..=k {
            let hh = &f * &fh;
            let geo_h = (&one(k) - &hh).inverse().unwrap();
            let nf = &(&r.mul_poly(&z2) - &(&(&f * &hh) * &geo_h))
                + &(&(&r * &r) * &fh).mul_poly(&z2).try_div(&(&one(k) - &(&r * &fh))).unwrap();
            let nfh = &(&r.mul_poly(&z1) - &(&(&fh * &hh) * &geo_h))
                + &(&(&r * &r) * &f).mul_poly(&z1).try_div(&(&one(k) - &(&r * &f))).unwrap();
            f = nf;
            fh = nfh;
        }
        let tf = solve_tree_functions(Quantity::Transmission, k);
        assert_eq!(f, tf.f);
        assert_eq!(fh, tf.fhat);
    }

    #[test]
    fn exchange_symmetry() {
        let tf = solve_tree_functions(Quantity::Transmission, K);
        assert_eq!(tf.f.reflect(), tf.fhat);
        assert_eq!(tf.f_q.reflect(), tf.fhat_q);
        assert_eq!(tf.f_q.mul_poly(&Poly::zeta2()), tf.f);
        assert_eq!(tf.fhat_q.mul_poly(&Poly::zeta1()), tf.fhat);
        assert_eq!(tf.h_q.mul_poly(&Poly::xi()), tf.h);
    }

    #[test]
    fn reflection_tree() {
        let tf = solve_tree_functions(Quantity::Reflection, K);
        let (z1, z2) = (Poly::zeta1(), Poly::zeta2());
        assert!(tf.f.coeff(0).is_zero());
        assert_eq!(tf.f.coeff(1), &z1);
        assert_eq!(tf.f.coeff(3), &(&z1.pow(2) * &z2));
        let r = r_mono(K, 1, Poly::one());
        let res = &(&(&r.mul_poly(&z2) * &(&tf.f * &tf.f)) - &tf.f) + &r.mul_poly(&z1);
        assert!(res.is_zero());
        assert_eq!(tf.f, tf.fhat);
        assert_eq!(tf.f_q.mul_poly(&z1), tf.f);
    }

    #[test]
    fn empty_tree_at_zero() {
        let tf = solve_tree_functions(Quantity::Transmission, 4);
        assert!(tf.f.coeff(0).is_zero() && tf.fhat.coeff(0).is_zero() && tf.h.coeff(0).is_zero());
    }

    #[test]
    fn leading_orders_agree() {
        for q in [Quantity::Transmission, Quantity::Reflection] {
            let tf = solve_tree_functions(q, 24);
            let a = leading_order_from_trees(&tf).unwrap();
            let b = leading_order_closed_form(q, 12).unwrap();
            assert_eq!(a, b, "{q:?}");
        }
        let t0 = leading_order_closed_form(Quantity::Transmission, 4).unwrap();
        assert!(t0.coeff(0).is_zero());
        assert_eq!(t0.coeff(1), &Poly::xi());
        let r0 = leading_order_closed_form(Quantity::Reflection, 4).unwrap();
        assert_eq!(r0.coeff(1), &Poly::zeta1().pow(2));
    }
}
