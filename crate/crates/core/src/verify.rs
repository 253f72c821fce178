//! Acceptance catalogue: every check the `verify` command and the
//! acceptance tests run, grouped by criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use crate::algebra::{Poly, Rational};
use crate::basegen::{self, Catalogue};
use crate::contrib::{node_factors, node_factors_constructed};
use crate::diagrams::{untie, TargetPerm, UntieMode};
use crate::perm::Label;
use crate::rmt_oracle::{check_concordance, cue_moment};
use crate::summation::{self, closed_forms, structure_sum_fast, ConjectureStatus, GenFunResult, SignatureTable};
use crate::trees::{
    leading_order_closed_form, leading_order_from_trees, quadratic_residual, simplified_identity_residuals, solve_tree_functions,
};
use crate::{Quantity, Symmetry};

/// Published structure counts, `(2g, symmetry) → {m: count}`.
pub fn table2(genus2: u32, symmetry: Symmetry) -> BTreeMap<u32, usize> {
    let rows: &[(u32, usize)] = match (genus2, symmetry) {
        (2, Symmetry::Orthogonal) => &[(2, 5), (3, 7)],
        (2, Symmetry::Unitary) => &[(2, 1), (3, 1)],
        (3, Symmetry::Orthogonal) => &[(3, 41), (4, 198), (5, 285), (6, 128)],
        (4, Symmetry::Orthogonal) => &[(4, 509), (5, 4508), (6, 14235), (7, 20867), (8, 14516), (9, 3885)],
        (4, Symmetry::Unitary) => &[(4, 21), (5, 168), (6, 483), (7, 651), (8, 420), (9, 105)],
        _ => &[],
    };
    rows.iter().copied().collect()
}

/// Genus-one orthogonal listing in the machine line format.
pub const TABLE1: [&str; 12] = [
    "1:3,2:4",
    "1:-2,3:-4",
    "1:3,2:-4",
    "1:-3,2:4",
    "1:-4,2:-3",
    "1:4,2:5,3:6",
    "1:-2,3:6,4:-5",
    "1:-3,2:5,4:-6",
    "1:4,2:-3,5:-6",
    "1:4,2:-6,3:-5",
    "1:-5,2:-4,3:6",
    "1:-6,2:5,3:-4",
];

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Highest `2g` to compute (1..=4).
    pub max_genus2: u32,
    /// Series truncation for the closed-form comparison.
    pub truncation: usize,
    pub cache: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_genus2: 4, truncation: 10, cache: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn criterion_passed(&self, criterion: u8) -> Option<bool> {
        let mut it = self.checks.iter().filter(|c| c.criterion == criterion).peekable();
        it.peek()?;
        Some(it.all(|c| c.passed))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let checks: Vec<_> = self
            .checks
            .iter()
            .map(|c| json!({"criterion": c.criterion, "name": c.name, "passed": c.passed, "detail": c.detail, "seconds": c.seconds}))
            .collect();
        json!({"passed": self.passed(), "checks": checks})
    }
}

struct Runner<'a> {
    report: VerifyReport,
    progress: &'a mut dyn FnMut(&CheckResult),
}

impl Runner<'_> {
    fn check(&mut self, criterion: u8, name: impl Into<String>, f: impl FnOnce() -> Result<String, String>) {
        let t = Instant::now();
        let (passed, detail) = match f() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let res = CheckResult { criterion, name: name.into(), passed, detail, seconds: t.elapsed().as_secs_f64() };
        (self.progress)(&res);
        self.report.checks.push(res);
    }
}

fn orders(max: u32) -> Vec<(u32, Symmetry)> {
    let mut out = vec![];
    for g2 in 2..=max {
        out.push((g2, Symmetry::Orthogonal));
        if g2 % 2 == 0 {
            out.push((g2, Symmetry::Unitary));
        }
    }
    out
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn label(v: i64) -> Label {
    Label::from_signed(v).expect("fixture label")
}

/// Runs the catalogue up to `opts.max_genus2`, reporting each check as it
/// finishes.
pub fn run_verify(opts: &VerifyOptions, progress: &mut dyn FnMut(&CheckResult)) -> VerifyReport {
    let mut run = Runner { report: VerifyReport::default(), progress };
    let k = opts.truncation;
    let max = opts.max_genus2.clamp(1, 4);
    let cache = opts.cache.as_deref();

    // 1. counts, keeping the catalogues for later checks
    let mut cats: BTreeMap<(u32, Symmetry), Catalogue> = BTreeMap::new();
    for (g2, sym) in orders(max) {
        run.check(1, format!("counts 2g={g2} {sym}"), || {
            let cat = basegen::catalogue(g2, sym, cache).map_err(err)?;
            let got: BTreeMap<u32, usize> = cat.iter().map(|(m, l)| (*m, l.len())).collect();
            let want = table2(g2, sym);
            cats.insert((g2, sym), cat);
            if got == want {
                Ok(format!("{got:?}"))
            } else {
                Err(format!("got {got:?}, want {want:?}"))
            }
        });
    }
    run.check(1, "counts 2g=3 unitary empty", || {
        let c = basegen::count_by_genus(3, Symmetry::Unitary);
        if c.is_empty() {
            Ok("empty".into())
        } else {
            Err(format!("{c:?}"))
        }
    });

    // 2. genus-one listing
    run.check(2, "genus-one orthogonal listing", || {
        let cat = cats.get(&(2, Symmetry::Orthogonal)).ok_or("catalogue missing")?;
        let got: BTreeSet<String> = cat.values().flatten().map(|b| b.to_line()).collect();
        let want: BTreeSet<String> = TABLE1.iter().map(|s| s.to_string()).collect();
        if got == want {
            Ok(format!("{} structures", got.len()))
        } else {
            Err(format!("missing {:?}, extra {:?}", want.difference(&got).collect::<Vec<_>>(), got.difference(&want).collect::<Vec<_>>()))
        }
    });

    // 3. assembled orders against the closed forms
    let mut tables: BTreeMap<(u32, Symmetry), SignatureTable> = BTreeMap::new();
    for (key, cat) in &cats {
        run.check(3, format!("signature sweep 2g={} {}", key.0, key.1), || {
            let t = summation::table_for(key.0, key.1, cat).map_err(err)?.ok_or("no table for this order")?;
            let detail = format!("{} assignments, {} signatures", t.total_assignments(), t.distinct_signatures());
            tables.insert(*key, t);
            Ok(detail)
        });
    }
    let mut results: BTreeMap<(Quantity, Symmetry, u32), GenFunResult> = BTreeMap::new();
    for q in [Quantity::Transmission, Quantity::Reflection] {
        for sym in [Symmetry::Unitary, Symmetry::Orthogonal] {
            for g2 in 1..=max {
                let name = format!("{q} {sym} 2g={g2} through s^{k}");
                run.check(3, name, || {
                    let res = summation::assemble_with(g2, sym, q, k, tables.get(&(g2, sym))).map_err(err)?;
                    let want = closed_forms::expected_series(q, sym, g2, k).ok_or("no closed form")?;
                    let ok = res.series == want;
                    results.insert((q, sym, g2), res);
                    if ok {
                        Ok(formula_name(q, sym, g2))
                    } else {
                        Err("series differs from the closed form".into())
                    }
                });
            }
        }
    }

    // 4. leading order
    for q in [Quantity::Transmission, Quantity::Reflection] {
        run.check(4, format!("{q} leading order through s^12"), || {
            let tf = solve_tree_functions(q, summation::r_truncation(12));
            let a = leading_order_from_trees(&tf).map_err(err)?.truncate(12);
            let b = leading_order_closed_form(q, 12).map_err(err)?;
            if a == b {
                Ok("equal".into())
            } else {
                Err("tree route differs from the closed form".into())
            }
        });
    }

    // 5. properties
    run_properties(&mut run, &cats, &results);

    // 6. conjecture extraction
    for ((q, sym, g2), res) in &results {
        run.check(6, format!("conjecture {q} {sym} 2g={g2}"), || {
            let c = res.conjecture.as_ref().ok_or("no report")?;
            match (&c.status, sym, g2 % 2) {
                (ConjectureStatus::Zero, Symmetry::Unitary, 1) => return Ok("zero".into()),
                (ConjectureStatus::Polynomial, _, _) => {}
                (s, _, _) => return Err(format!("status {}", s.as_str())),
            }
            let (bx, bs) = c.bound;
            let (dx, ds) = c.degrees();
            let s_max = if *q == Quantity::Transmission { bs } else { bx + bs };
            if dx > bx || ds > s_max {
                return Err(format!("degrees ({dx}, {ds}) exceed bounds ({bx}, {s_max})"));
            }
            let minus_one = *q == Quantity::Transmission && ((*sym, *g2) == (Symmetry::Orthogonal, 1) || (*sym, *g2) == (Symmetry::Unitary, 2));
            if minus_one {
                let p = c.polynomial();
                let want = vec![(0usize, Poly::from_int(-1))];
                if p != want {
                    return Err(format!("expected P = −1, got {p:?}"));
                }
            }
            Ok(format!("degrees ({dx}, {ds}) within ({bx}, {s_max})"))
        });
    }

    // 7. untying fixtures
    run.check(7, "orthogonal key (3̄ 1 3)", || {
        let t = TargetPerm::parse_orthogonal(3, "(1 2 3)(-3 -2 -1)").map_err(err)?;
        let got = untie(&t, &[label(-3), label(1), label(3)], UntieMode::Orthogonal).map_err(err)?;
        expect_target(&got, &TargetPerm::parse_orthogonal(3, "(1 2)(3)(-3)(-2 -1)").map_err(err)?)
    });
    run.check(7, "unitary key (1 4)", || {
        let t = TargetPerm::parse_reduced(4, "(1 2 3)(4)").map_err(err)?;
        let got = untie(&t, &[label(1), label(4)], UntieMode::UnitaryI).map_err(err)?;
        expect_target(&got, &TargetPerm::parse_reduced(4, "(1 2 3 4)").map_err(err)?)
    });
    run.check(7, "unitary key (2̄ 4̄ 3̄)", || {
        let t = TargetPerm::parse_reduced(4, "(1 2 3)(4)").map_err(err)?;
        let got = untie(&t, &[label(-2), label(-4), label(-3)], UntieMode::UnitaryO).map_err(err)?;
        expect_target(&got, &TargetPerm::parse_reduced(4, "(1 2 4)(3)").map_err(err)?)
    });

    // 8. CUE oracle
    run.check(8, "M1 = N1 N2 / N exactly", || {
        for (a, b) in [(1, 1), (2, 5), (7, 3)] {
            let got = cue_moment(1, a, b, Quantity::Transmission).map_err(err)?;
            if got != Rational::new((a * b).into(), (a + b).into()) {
                return Err(format!("N1={a}, N2={b}: {got}"));
            }
        }
        Ok("exact".into())
    });
    for q in [Quantity::Transmission, Quantity::Reflection] {
        run.check(8, format!("{q} 1/N concordance n=1..3 through 2g={max}"), || {
            let series: Vec<_> = (0..=max)
                .map(|g2| {
                    if g2 == 0 {
                        return Some(leading_order_closed_form(q, k.max(3)).expect("leading order"));
                    }
                    results.get(&(q, Symmetry::Unitary, g2)).map(|r| r.series.clone())
                })
                .collect();
            if series.iter().skip(1).any(|s| s.is_none()) {
                return Err("missing computed order".into());
            }
            let refs: Vec<_> = series.iter().map(|s| s.as_ref()).collect();
            for n in 1..=3 {
                check_concordance(n, q, &refs).map_err(err)?;
            }
            Ok(format!("orders N^1..N^{}", 1 - max as i64))
        });
    }
    run.check(8, "orthogonal [s^1] tower vs N1N2/(N+1)", || {
        let xi = Poly::xi();
        let t0 = leading_order_closed_form(Quantity::Transmission, 2).map_err(err)?;
        let mut tower = vec![t0.coeff(1).clone()];
        for g2 in 1..=max {
            let r = results.get(&(Quantity::Transmission, Symmetry::Orthogonal, g2)).ok_or("missing computed order")?;
            tower.push(r.series.coeff(1).clone());
        }
        for (g2, c) in tower.iter().enumerate() {
            let want = if g2 % 2 == 0 { xi.clone() } else { -&xi };
            if *c != want {
                return Err(format!("2g={g2}: {c}, want {want}"));
            }
        }
        Ok(format!("through N^{}", 1 - max as i64))
    });

    run.report
}

fn formula_name(q: Quantity, sym: Symmetry, g2: u32) -> String {
    match closed_forms::FormulaId::for_order(q, sym, g2) {
        Some(id) => format!("matches {id}"),
        None => "zero".into(),
    }
}

fn expect_target(got: &TargetPerm, want: &TargetPerm) -> Result<String, String> {
    if got == want {
        Ok(got.perm.to_human_string())
    } else {
        Err(format!("got {}, want {}", got.perm.to_human_string(), want.perm.to_human_string()))
    }
}

fn run_properties(
    run: &mut Runner<'_>,
    cats: &BTreeMap<(u32, Symmetry), Catalogue>,
    results: &BTreeMap<(Quantity, Symmetry, u32), GenFunResult>,
) {
    const TRUNC: usize = 16;
    for q in [Quantity::Transmission, Quantity::Reflection] {
        run.check(5, format!("{q} tree equation residual"), || {
            let tf = solve_tree_functions(q, TRUNC);
            if quadratic_residual(&tf).is_zero() {
                Ok("zero".into())
            } else {
                Err("nonzero residual".into())
            }
        });
        run.check(5, format!("{q} node factors"), || {
            let tf = solve_tree_functions(q, TRUNC);
            let a = node_factors(&tf);
            let b = node_factors_constructed(&tf);
            if a != b {
                return Err("closed forms differ from the constructed sums".into());
            }
            if &a.y_bo * &a.y_bi != &a.y_b * &a.y_b {
                return Err("yBo·yBi ≠ yB²".into());
            }
            Ok("closed = constructed, yBo·yBi = yB²".into())
        });
    }
    run.check(5, "simplified tree identities", || {
        let tf = solve_tree_functions(Quantity::Transmission, TRUNC);
        if simplified_identity_residuals(&tf).iter().all(|s| s.is_zero()) {
            Ok("zero".into())
        } else {
            Err("nonzero residual".into())
        }
    });
    for q in [Quantity::Transmission, Quantity::Reflection] {
        run.check(5, format!("{q} per-structure parity and N-exponent, 2g ≤ 3"), || {
            let tf = solve_tree_functions(q, 8);
            let mut n = 0;
            for g2 in [2, 3] {
                let Some(cat) = cats.get(&(g2, Symmetry::Orthogonal)) else { continue };
                for b in cat.values().flatten() {
                    summation::check_n_exponent(b).map_err(|e| format!("{}: {e}", b.to_line()))?;
                    structure_sum_fast(b, &tf).map_err(|e| format!("{}: {e}", b.to_line()))?;
                    n += 1;
                }
            }
            Ok(format!("{n} structures"))
        });
    }
    run.check(5, "unitary structures are the orientable orthogonal ones", || {
        for (&(g2, sym), cat) in cats {
            if sym != Symmetry::Unitary {
                continue;
            }
            let Some(orth) = cats.get(&(g2, Symmetry::Orthogonal)) else { continue };
            for (m, list) in cat {
                let u: Vec<String> = list.iter().map(|b| b.to_line()).collect();
                let o: Vec<String> = orth[m].iter().filter(|b| b.orientable).map(|b| b.to_line()).collect();
                if u != o {
                    return Err(format!("2g={g2}, m={m}"));
                }
            }
        }
        Ok("equal".into())
    });
    run.check(5, "transmission outputs symmetric under ζ1 ↔ 1 − ζ1", || {
        for ((q, sym, g2), r) in results {
            if *q == Quantity::Transmission && !r.series.is_symmetric() {
                return Err(format!("{sym} 2g={g2}"));
            }
        }
        Ok("all symmetric".into())
    });
}
