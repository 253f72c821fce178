//! Sum over base structures: label assignments, edge and vertex products,
//! the `1/(2m)` reweighting and `s·d/ds`.

pub mod closed_forms;
pub mod conjecture;
pub mod signature;

use serde_json::json;
use thiserror::Error;

use crate::algebra::{Poly, Rational, Series, SeriesError, Var};
use crate::basegen::{mirror, BaseError, BaseStructure, Catalogue, EdgeKind};
use crate::contrib::{node_factors, EndLabel, FactorMemo, LabelError};
use crate::trees::{leading_order_from_trees, solve_tree_functions, TreeFunctions};
use crate::{Quantity, Symmetry};

pub use closed_forms::{closed_form_series, FormulaId};
pub use conjecture::{conjecture_extract, ConjectureReport, ConjectureStatus};
pub use signature::SignatureTable;

/// Extra `s` orders carried through the computation and dropped at the end.
pub const GUARD: usize = 2;

#[derive(Debug, Error)]
pub enum SumError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("odd power r^{0} in a structure sum")]
    Parity(usize),
    #[error("N-exponent mismatch: V − E = {0}, expected {1}")]
    NExponent(i64, i64),
    #[error("transmission result is not symmetric under ζ₁ ↦ 1 − ζ₁")]
    Basis,
    #[error("vertex of degree {0} exceeds the signature table")]
    Degree(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// `2m` points plus their bars carry one label each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<EndLabel>,
}

impl Assignment {
    pub fn get(&self, code: u32) -> EndLabel {
        self.labels[code as usize]
    }

    pub fn labels(&self) -> &[EndLabel] {
        &self.labels
    }
}

/// Which free choice fixes `b_z`, and whether `z` sees it through `hat`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Owner {
    pub bit: usize,
    pub hat: bool,
    pub kind: EdgeKind,
}

pub(crate) fn free_label(kind: EdgeKind, bit: bool) -> EndLabel {
    match (kind, bit) {
        (EdgeKind::Unitary, false) => EndLabel::I,
        (EdgeKind::Unitary, true) => EndLabel::O,
        (EdgeKind::Orthogonal, false) => EndLabel::IO,
        (EdgeKind::Orthogonal, true) => EndLabel::OI,
    }
}

/// Edge `e` owns free bits `2e` (first entry of its half cycle) and `2e+1`
/// (second entry); the other two ends follow from `b_z = hat(b_ψ(z))`.
pub(crate) fn owners(b: &BaseStructure) -> Vec<Owner> {
    let eps = &b.epsilon;
    let mut out = vec![None; eps.len()];
    for (e, rec) in b.edges.iter().enumerate() {
        for (j, l) in [rec.half_cycle.0, rec.half_cycle.1].into_iter().enumerate() {
            let z = eps.encode(l).expect("label in range");
            let bit = 2 * e + j;
            out[z as usize] = Some(Owner { bit, hat: false, kind: rec.kind });
            out[mirror(eps, z) as usize] = Some(Owner { bit, hat: true, kind: rec.kind });
        }
    }
    out.into_iter().map(|o| o.expect("every end is owned")).collect()
}

fn assignment_from_bits(b: &BaseStructure, own: &[Owner], bits: u64) -> Assignment {
    let labels = own
        .iter()
        .map(|o| {
            let l = free_label(o.kind, bits >> o.bit & 1 == 1);
            if o.hat {
                l.hat()
            } else {
                l
            }
        })
        .collect();
    debug_assert_eq!(own.len(), 4 * b.m as usize);
    Assignment { labels }
}

/// All `4^m` admissible assignments.
pub fn sweep_assignments(b: &BaseStructure) -> impl Iterator<Item = Assignment> + '_ {
    let own = owners(b);
    (0..1u64 << (2 * b.m)).map(move |bits| assignment_from_bits(b, &own, bits))
}

/// Assignment with the given labels on the free ends, in edge order
/// `(b_{s₁}, b_{r₁}, b_{s₂}, …)`.
pub fn assignment_from_free(b: &BaseStructure, free: &[EndLabel]) -> Result<Assignment, LabelError> {
    let own = owners(b);
    let mut bits = 0u64;
    for (j, &l) in free.iter().enumerate() {
        let kind = b.edges[j / 2].kind;
        let bit = if free_label(kind, false) == l {
            false
        } else if free_label(kind, true) == l {
            true
        } else {
            return Err(LabelError::Inadmissible(l, l, kind));
        };
        bits |= (bit as u64) << j;
    }
    Ok(assignment_from_bits(b, &own, bits))
}

pub fn check_n_exponent(b: &BaseStructure) -> Result<(), SumError> {
    let got = b.num_vertices() as i64 - b.m as i64;
    let want = 1 - b.genus2 as i64;
    if got != want {
        return Err(SumError::NExponent(got, want));
    }
    Ok(())
}

pub fn check_parity(s: &Series) -> Result<(), SumError> {
    match (1..=s.trunc()).step_by(2).find(|&k| !s.coeff(k).is_zero()) {
        Some(k) => Err(SumError::Parity(k)),
        None => Ok(()),
    }
}

/// Reference route: every assignment multiplied out as series.
pub fn structure_sum(b: &BaseStructure, memo: &FactorMemo) -> Result<Series, SumError> {
    check_n_exponent(b)?;
    let tf = memo.tree_functions();
    let nu = &b.nu;
    let reps: Vec<Vec<u32>> = b
        .vertices
        .iter()
        .map(|v| v.half_cycle.iter().map(|&l| nu.encode(l).expect("label")).collect())
        .collect();
    let mut total = Series::zero(Var::R, tf.trunc);
    for a in sweep_assignments(b) {
        let mut term = Series::one(Var::R, tf.trunc);
        for e in &b.edges {
            let z1 = nu.encode(e.half_cycle.0).expect("label");
            let z2 = nu.encode(e.half_cycle.1).expect("label");
            term = &term * &memo.edge(e.kind, a.get(z1), a.get(z2))?;
        }
        for c in &reps {
            let labels: Vec<EndLabel> = c.iter().map(|&z| a.get(z).tilde()).collect();
            term = &term * &memo.vertex(&labels)?;
        }
        total = &total + &term;
    }
    check_parity(&total)?;
    Ok(total)
}

/// Fast route for one structure, through its signature counts.
pub fn structure_sum_fast(b: &BaseStructure, tf: &TreeFunctions) -> Result<Series, SumError> {
    check_n_exponent(b)?;
    let mut table = SignatureTable::new(b.genus2);
    table.add(b)?;
    let s = table.structure_series(b.m, tf)?;
    check_parity(&s)?;
    Ok(s)
}

/// Twisted closed loop for `2g = 1`:
/// `½[log(1 − (yA − yB)) − log(1 − (yA + yB))]`, already passed through `s·d/ds`.
pub fn mobius_term(tf: &TreeFunctions) -> Result<Series, SumError> {
    let nf = node_factors(tf);
    let u = nf.y_a.reindex_r_to_s()?;
    let v = nf.y_b.reindex_r_to_s()?;
    let one = Series::one(Var::S, u.trunc());
    let minus = &u - &v;
    let plus = &u + &v;
    let a = (-&minus.s_d_ds()?).try_div(&(&one - &minus))?;
    let b = plus.s_d_ds()?.try_div(&(&one - &plus))?;
    Ok((&a + &b).scale(&Rational::new(1.into(), 2.into())))
}

/// `Σ_m (2m)^{-1} Σ_{structures} structure_sum`, then `s·d/ds`, in `s`.
pub fn assemble_from_table(table: &SignatureTable, tf: &TreeFunctions) -> Result<Series, SumError> {
    let hat = table.integrated(tf)?;
    check_parity(&hat)?;
    Ok(hat.reindex_r_to_s()?.s_d_ds()?)
}

/// Generating-function coefficient `T_{2g}` or `R_{2g}` in `s`.
#[derive(Debug, Clone)]
pub struct GenFunResult {
    pub quantity: Quantity,
    pub symmetry: Symmetry,
    pub genus2: u32,
    pub truncation: usize,
    pub series: Series,
    pub conjecture: Option<ConjectureReport>,
}

impl GenFunResult {
    pub fn basis(&self) -> &'static str {
        if self.series.is_symmetric() {
            "xi"
        } else {
            "zeta1"
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coefficients = self.series.to_json_xi().unwrap_or_else(|| self.series.to_json_zeta1());
        let conjecture = match &self.conjecture {
            Some(c) => c.to_json(),
            None => json!({"status": "not-applicable", "polynomial": null}),
        };
        json!({
            "quantity": self.quantity,
            "symmetry": self.symmetry,
            "genus2": self.genus2,
            "truncation": self.truncation,
            "basis": self.basis(),
            "coefficients": coefficients,
            "conjecture": conjecture,
        })
    }

    /// Coefficient rows for CSV: `power,basis_index,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("power,basis,index,value\n");
        let basis = self.basis();
        for (n, c) in self.series.coeffs().iter().enumerate() {
            let vals = if basis == "xi" { c.to_xi_basis().unwrap_or_default() } else { c.coeffs() };
            for (i, v) in vals.iter().enumerate() {
                if !num_traits::Zero::is_zero(v) {
                    out.push_str(&format!("{n},{basis},{i},{}\n", crate::algebra::rational_string(v)));
                }
            }
        }
        out
    }
}

/// Tree truncation in `r` for results through `s^K`.
pub fn r_truncation(k: usize) -> usize {
    2 * (k + GUARD)
}

/// Assembles `T_{2g}`/`R_{2g}` through `s^K` from a prebuilt signature table
/// (`None` when no structures are needed).
pub fn assemble_with(
    genus2: u32,
    symmetry: Symmetry,
    quantity: Quantity,
    k: usize,
    table: Option<&SignatureTable>,
) -> Result<GenFunResult, SumError> {
    if k < 2 {
        return Err(SumError::Unsupported(format!("truncation {k} < 2")));
    }
    let tf = solve_tree_functions(quantity, r_truncation(k));
    let series = if genus2 == 0 {
        leading_order_from_trees(&tf)?
    } else if symmetry == Symmetry::Unitary && genus2 % 2 == 1 {
        Series::zero(Var::S, tf.trunc / 2)
    } else if genus2 == 1 {
        mobius_term(&tf)?
    } else {
        let table = table.ok_or_else(|| SumError::Unsupported("missing signature table".into()))?;
        if table.genus2() != genus2 || table.symmetry() != symmetry {
            return Err(SumError::Unsupported("signature table built for another order".into()));
        }
        assemble_from_table(table, &tf)?
    }
    .truncate(k);
    if quantity == Quantity::Transmission && !series.is_symmetric() {
        return Err(SumError::Basis);
    }
    let mut out = GenFunResult { quantity, symmetry, genus2, truncation: k, series, conjecture: None };
    if genus2 > 0 {
        out.conjecture = Some(conjecture_extract(&out));
    }
    Ok(out)
}

/// Builds the signature table for `catalogue` when the order needs one.
pub fn table_for(genus2: u32, symmetry: Symmetry, catalogue: &Catalogue) -> Result<Option<SignatureTable>, SumError> {
    if genus2 < 2 || (symmetry == Symmetry::Unitary && genus2 % 2 == 1) {
        return Ok(None);
    }
    let mut t = SignatureTable::with_symmetry(genus2, symmetry);
    t.add_catalogue(catalogue)?;
    Ok(Some(t))
}

/// One-shot assembly, enumerating structures (through `cache` if given).
pub fn assemble(
    genus2: u32,
    symmetry: Symmetry,
    quantity: Quantity,
    k: usize,
    cache: Option<&std::path::Path>,
) -> Result<GenFunResult, SumError> {
    let table = if genus2 >= 2 && !(symmetry == Symmetry::Unitary && genus2 % 2 == 1) {
        let cat = crate::basegen::catalogue(genus2, symmetry, cache)?;
        table_for(genus2, symmetry, &cat)?
    } else {
        None
    };
    assemble_with(genus2, symmetry, quantity, k, table.as_ref())
}

/// Rational function of `h` given as `Σ c_{ij} h^i ξ^{-j}` over a
/// denominator, evaluated as a series; used by tests against the
/// integrated forms.
pub fn h_poly(tf: &TreeFunctions, coeffs: &[(i64, u32, i32)]) -> Series {
    let mut acc = Series::zero(Var::R, tf.trunc);
    for &(c, hp, xp) in coeffs {
        // h^i ξ^{-j} = h^{i-j} H^j
        assert!(xp >= 0 && hp as i32 >= xp);
        let t = &tf.h.pow((hp as i32 - xp) as i64).expect("power") * &tf.h_q.pow(xp as i64).expect("power");
        acc = &acc + &t.mul_poly(&Poly::from_int(c));
    }
    acc
}
