//! Exact CUE moments for small `n` from the unitary Weingarten function,
//! and their expansion in `1/N`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{Poly, Rational, Series};
use crate::Quantity;

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("order n = {0} not supported (n ≤ {MAX_ORDER})")]
    Order(usize),
    #[error("Gram matrix is singular for n = {n}, N = {big_n}")]
    Rank { n: usize, big_n: i64 },
    #[error("need at least one channel in each lead")]
    Channels,
    #[error("mismatch at N^{power} for n = {n}: oracle {oracle}, series {series}")]
    Mismatch { n: usize, power: i64, oracle: String, series: String },
}

/// One-line permutations of `0..n`.
fn symmetric_group(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut t = vec![];
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        t.push(len);
    }
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

fn num_cycles(p: &[usize]) -> usize {
    cycle_type(p).len()
}

fn int_pow(base: i64, e: usize) -> Rational {
    num_traits::pow(Rational::from_integer(base.into()), e)
}

/// Class coefficients at a fixed integer `N`, keyed by cycle type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeingartenTable {
    pub n: usize,
    pub big_n: i64,
    pub values: BTreeMap<Vec<usize>, Rational>,
}

impl WeingartenTable {
    pub fn value(&self, p: &[usize]) -> &Rational {
        &self.values[&cycle_type(p)]
    }

    /// Largest `|Σ_π V(σ⁻¹π) N^{#(π⁻¹ρ)} − δ_{σρ}|`; zero when exact.
    pub fn gram_residual(&self) -> Rational {
        let group = symmetric_group(self.n);
        let mut worst = Rational::zero();
        for s in &group {
            let si = inverse(s);
            for r in &group {
                let mut acc = Rational::zero();
                for p in &group {
                    let pi = inverse(p);
                    acc += self.value(&compose(&si, p)) * int_pow(self.big_n, num_cycles(&compose(&pi, r)));
                }
                if s == r {
                    acc -= Rational::one();
                }
                worst = worst.max(acc.abs());
            }
        }
        worst
    }
}

/// Inverts `G(σ,π) = N^{#cycles(σ⁻¹π)}` exactly.
pub fn weingarten(n: usize, big_n: i64) -> Result<WeingartenTable, OracleError> {
    if n == 0 || n > MAX_ORDER {
        return Err(OracleError::Order(n));
    }
    let group = symmetric_group(n);
    let d = group.len();
    let mut a: Vec<Vec<Rational>> = group
        .iter()
        .map(|s| {
            let si = inverse(s);
            let mut row: Vec<Rational> = group.iter().map(|p| int_pow(big_n, num_cycles(&compose(&si, p)))).collect();
            row.extend((0..d).map(|j| if group[j] == *s { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| !a[r][col].is_zero()) else {
            return Err(OracleError::Rank { n, big_n });
        };
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    // row of the identity (group[0]) gives V(π) directly
    let mut values = BTreeMap::new();
    for (j, p) in group.iter().enumerate() {
        values.entry(cycle_type(p)).or_insert_with(|| a[0][d + j].clone());
    }
    Ok(WeingartenTable { n, big_n, values })
}

fn lead_sizes<T: Clone>(quantity: Quantity, n1: T, n2: T) -> (T, T) {
    match quantity {
        Quantity::Transmission => (n1, n2),
        Quantity::Reflection => (n1.clone(), n1),
    }
}

/// `⟨Tr (t†t)ⁿ⟩` (or `r†r`) for Haar `U(N₁+N₂)`:
/// `Σ_{σ,π} N_o^{#σ} N_i^{#(π c⁻¹)} V(σπ⁻¹)` with `c` the long cycle.
pub fn cue_moment(n: usize, n1: i64, n2: i64, quantity: Quantity) -> Result<Rational, OracleError> {
    if n1 < 1 || n2 < 1 {
        return Err(OracleError::Channels);
    }
    let wg = weingarten(n, n1 + n2)?;
    let (ni, no) = lead_sizes(quantity, n1, n2);
    let group = symmetric_group(n);
    let c_inv: Vec<usize> = (0..n).map(|k| (k + n - 1) % n).collect();
    let mut total = Rational::zero();
    for s in &group {
        let ws = int_pow(no, num_cycles(s));
        for p in &group {
            let v = wg.value(&compose(s, &inverse(p)));
            total += &ws * int_pow(ni, num_cycles(&compose(p, &c_inv))) * v;
        }
    }
    Ok(total)
}

/// `V(π) = N^{−n} Σ_j w_j(π) N^{−j}`, with `w` for `j ≤ order`.
pub fn weingarten_expansion(n: usize, order: usize) -> Result<BTreeMap<Vec<usize>, Vec<Rational>>, OracleError> {
    if n == 0 || n > MAX_ORDER {
        return Err(OracleError::Order(n));
    }
    // G = Nⁿ(I + A) with A(σ,π) = x^{n − #(σ⁻¹π)}, x = 1/N, zero on the diagonal.
    let group = symmetric_group(n);
    let d = group.len();
    let gap: Vec<Vec<usize>> = group
        .iter()
        .map(|s| {
            let si = inverse(s);
            group.iter().map(|p| n - num_cycles(&compose(&si, p))).collect()
        })
        .collect();
    let zero_row = || vec![vec![Rational::zero(); order + 1]; d];
    let mut term = zero_row();
    term[0][0] = Rational::one();
    let mut acc = term.clone();
    for _ in 0..order {
        let mut next = zero_row();
        for (s, row) in term.iter().enumerate() {
            for (p, out) in next.iter_mut().enumerate() {
                let g = gap[s][p];
                if g == 0 {
                    continue;
                }
                for (j, c) in row.iter().enumerate() {
                    if j + g <= order && !c.is_zero() {
                        out[j + g] -= c;
                    }
                }
            }
        }
        for (a, t) in acc.iter_mut().zip(&next) {
            for (x, y) in a.iter_mut().zip(t) {
                *x += y;
            }
        }
        term = next;
    }
    let mut out = BTreeMap::new();
    for (j, p) in group.iter().enumerate() {
        out.entry(cycle_type(p)).or_insert_with(|| acc[j].clone());
    }
    Ok(out)
}

/// `cue_moment(n, ζ₁N, ζ₂N)` as `Σ_p N^p c_p(ζ₁)` for `p` from `1` down to
/// `1 − depth`.
pub fn cue_moment_expansion(n: usize, quantity: Quantity, depth: usize) -> Result<BTreeMap<i64, Poly>, OracleError> {
    let order = n + depth;
    let wg = weingarten_expansion(n, order)?;
    let (zi, zo) = lead_sizes(quantity, Poly::zeta1(), Poly::zeta2());
    let group = symmetric_group(n);
    let c_inv: Vec<usize> = (0..n).map(|k| (k + n - 1) % n).collect();
    let lowest = 1 - depth as i64;
    let mut out: BTreeMap<i64, Poly> = (lowest..=1).map(|p| (p, Poly::zero())).collect();
    for s in &group {
        let a = num_cycles(s);
        for p in &group {
            let b = num_cycles(&compose(p, &c_inv));
            let w = &wg[&cycle_type(&compose(s, &inverse(p)))];
            let z = &zo.pow(a as u32) * &zi.pow(b as u32);
            for (j, c) in w.iter().enumerate() {
                let power = (a + b) as i64 - (n + j) as i64;
                if power < lowest || c.is_zero() {
                    continue;
                }
                let e = out.get_mut(&power).expect("power above N¹");
                *e = &*e + &z.scale(c);
            }
        }
    }
    Ok(out)
}

/// Compares the oracle expansion with `Σ_{2g} N^{1−2g} [sⁿ] X_{2g}` for
/// `2g = 0..=series.len()−1`. A missing order counts as zero.
pub fn check_concordance(n: usize, quantity: Quantity, series: &[Option<&Series>]) -> Result<(), OracleError> {
    let depth = series.len().saturating_sub(1);
    let oracle = cue_moment_expansion(n, quantity, depth)?;
    let zero = Poly::zero();
    for (g2, s) in series.iter().enumerate() {
        let power = 1 - g2 as i64;
        let want = &oracle[&power];
        let got = s.map_or(&zero, |s| if n <= s.trunc() { s.coeff(n) } else { &zero });
        if want != got {
            return Err(OracleError::Mismatch { n, power, oracle: want.to_string(), series: got.to_string() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summation::closed_forms::{closed_form_series, FormulaId};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn small_tables() {
        let w = weingarten(1, 7).unwrap();
        assert_eq!(w.values[&vec![1]], r(1, 7));
        for big_n in [3, 5, 11] {
            let w = weingarten(2, big_n).unwrap();
            assert_eq!(w.values[&vec![1, 1]], r(1, big_n * big_n - 1));
            assert_eq!(w.values[&vec![2]], r(-1, big_n * (big_n * big_n - 1)));
        }
        // V(3-cycle) = 2/(N(N²−1)(N²−4))
        let w = weingarten(3, 5).unwrap();
        assert_eq!(w.values[&vec![3]], r(2, 5 * 24 * 21));
        for n in 1..=4 {
            assert!(weingarten(n, n as i64 + 2).unwrap().gram_residual().is_zero());
        }
    }

    #[test]
    fn singular_and_order_errors() {
        assert_eq!(weingarten(2, 1), Err(OracleError::Rank { n: 2, big_n: 1 }));
        assert_eq!(weingarten(5, 9), Err(OracleError::Order(5)));
    }

    #[test]
    fn first_and_second_moments() {
        for (n1, n2) in [(1, 1), (2, 3), (4, 1)] {
            let big_n = n1 + n2;
            assert_eq!(cue_moment(1, n1, n2, Quantity::Transmission).unwrap(), r(n1 * n2, big_n));
            let w = weingarten(2, big_n).unwrap();
            let (id, tr) = (&w.values[&vec![1, 1]], &w.values[&vec![2]]);
            for q in [Quantity::Transmission, Quantity::Reflection] {
                let (ni, no) = lead_sizes(q, n1, n2);
                let (ni, no) = (Rational::from_integer(ni.into()), Rational::from_integer(no.into()));
                let want = &ni * &ni * &no * &no * tr + &ni * &no * &no * id + &ni * &ni * &no * id + &ni * &no * tr;
                assert_eq!(cue_moment(2, n1, n2, q).unwrap(), want);
            }
        }
    }

    #[test]
    fn expansion_matches_exact_values() {
        // N₁ = N₂ = N/2 at large N: the truncated expansion is within O(N^{−depth}).
        let exp = cue_moment_expansion(3, Quantity::Transmission, 6).unwrap();
        let big_n = 2000i64;
        let exact = cue_moment(3, big_n / 2, big_n / 2, Quantity::Transmission).unwrap();
        let mut approx = Rational::zero();
        for (p, c) in &exp {
            let v = c.eval(&r(1, 2));
            approx += if *p >= 0 { v * int_pow(big_n, *p as usize) } else { v / int_pow(big_n, (-p) as usize) };
        }
        let err = &exact - &approx;
        assert!(err.abs() < r(1, big_n.pow(5)), "{err}");
    }

    #[test]
    fn concordance_low_genus() {
        let k = 6;
        let t0 = closed_form_series(FormulaId::T0, k).unwrap();
        let t2 = closed_form_series(FormulaId::T2U, k).unwrap();
        let r0 = closed_form_series(FormulaId::R0, k).unwrap();
        let r2 = closed_form_series(FormulaId::R2U, k).unwrap();
        for n in 1..=3 {
            check_concordance(n, Quantity::Transmission, &[Some(&t0), None, Some(&t2)]).unwrap();
            check_concordance(n, Quantity::Reflection, &[Some(&r0), None, Some(&r2)]).unwrap();
        }
        // dropping T₂ must be caught
        assert!(check_concordance(2, Quantity::Transmission, &[Some(&t0), None, None]).is_err());
    }
}
