//! Exact Dantzig–Wolfe column generation for the activation LP.
//!
//! Apart from the family rows and the normalization row, every row touches a
//! single selector block. The master problem keeps the family rows plus a
//! convexity row over columns, each column being a normalized feasible point
//! of one block. Pricing maximizes the reduced cost over each block's local
//! polytope. At termination the full LP dual is assembled from the master
//! duals and the pricing duals, so the result is an ordinary optimal
//! solution of the monolithic LP.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{CertificationLp, CertifyError, RowKind};
use crate::ratlp::{self, LpProblem, LpRow, LpSolution, LpStatus, Sense};
use crate::rational::{self, Rational};

const MAX_ROUNDS: usize = 100_000;

struct Column {
    block: usize,
    x: Vec<Rational>,
    objective: Rational,
    linking: Vec<Rational>,
}

struct Layout {
    cost: Vec<Rational>,
    linking: Vec<usize>,
    /// Dense coefficients of each linking row.
    linking_dense: Vec<Vec<Rational>>,
    norm: usize,
    /// Row indices per block, in LP order.
    local: Vec<Vec<usize>>,
    /// The same rows restricted to block-local variable indices.
    local_rows: Vec<Vec<LpRow>>,
}

fn layout(clp: &CertificationLp) -> Result<Layout, CertifyError> {
    let lp = &clp.lp;
    let bs = clp.block_size;
    let mut linking = Vec::new();
    let mut norm = None;
    let mut local = vec![Vec::new(); clp.num_blocks];
    for (r, kind) in clp.kinds.iter().enumerate() {
        match *kind {
            RowKind::Family { .. } => linking.push(r),
            RowKind::Normalization => norm = Some(r),
            RowKind::EveSelector { k, .. } | RowKind::FamilySelector { k, .. } => {
                let row = &lp.rows[r];
                if row.coeffs.iter().any(|(j, _)| j / bs != k) {
                    return Err(CertifyError::Solver(format!("{kind} leaves its block")));
                }
                local[k].push(r);
            }
        }
    }
    let norm = norm.ok_or_else(|| CertifyError::Solver("missing normalization row".into()))?;
    let linking_dense = linking
        .iter()
        .map(|&r| {
            let mut v = vec![Rational::zero(); lp.num_vars];
            for (j, c) in &lp.rows[r].coeffs {
                v[*j] = c.clone();
            }
            v
        })
        .collect();
    let local_rows = local
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            rows.iter()
                .map(|&r| {
                    let row = &lp.rows[r];
                    LpRow::new(
                        row.coeffs.iter().map(|(j, c)| (j - k * bs, c.clone())).collect(),
                        row.sense,
                        row.rhs.clone(),
                    )
                })
                .collect()
        })
        .collect();
    Ok(Layout {
        cost: lp.cost_vector(),
        linking,
        linking_dense,
        norm,
        local,
        local_rows,
    })
}

impl Layout {
    fn column(&self, clp: &CertificationLp, block: usize, x: Vec<Rational>) -> Column {
        let base = block * clp.block_size;
        let dot = |w: &[Rational]| {
            x.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(Rational::zero(), |acc, (j, v)| acc + &w[base + j] * v)
        };
        Column {
            block,
            objective: dot(&self.cost),
            linking: self.linking_dense.iter().map(|w| dot(w)).collect(),
            x,
        }
    }

    fn reduced_costs(&self, clp: &CertificationLp, block: usize, y: &[Rational]) -> Vec<Rational> {
        let base = block * clp.block_size;
        (0..clp.block_size)
            .map(|j| {
                let mut r = self.cost[base + j].clone();
                for (w, yl) in self.linking_dense.iter().zip(y) {
                    if !yl.is_zero() {
                        r -= &w[base + j] * yl;
                    }
                }
                r
            })
            .collect()
    }

    fn pricing_problem(&self, clp: &CertificationLp, block: usize, reduced: &[Rational]) -> LpProblem {
        let mut rows = self.local_rows[block].clone();
        rows.push(LpRow::new(
            (0..clp.block_size).map(|j| (j, Rational::one())).collect(),
            Sense::Eq,
            Rational::one(),
        ));
        let objective = reduced.iter().cloned().enumerate().collect();
        LpProblem::new(clp.block_size, objective, rows)
    }
}

/// The uniform point of the first block that satisfies its local rows and
/// every linking row.
fn initial_column(clp: &CertificationLp, layout: &Layout) -> Option<Column> {
    let bs = clp.block_size;
    let u = vec![rational::frac(1, bs as i64); bs];
    (0..clp.num_blocks).find_map(|k| {
        if !layout.local_rows[k].iter().all(|r| r.is_satisfied(&u)) {
            return None;
        }
        let col = layout.column(clp, k, u.clone());
        let ok = layout
            .linking
            .iter()
            .zip(&col.linking)
            .all(|(&r, act)| *act <= clp.lp.rows[r].rhs);
        ok.then_some(col)
    })
}

pub(super) fn solve(clp: &CertificationLp) -> Result<LpSolution, CertifyError> {
    let layout = layout(clp)?;
    let Some(first) = initial_column(clp, &layout) else {
        return Ok(ratlp::solve(&clp.lp)?);
    };
    let lp = &clp.lp;
    let nl = layout.linking.len();
    let mut columns = vec![first];
    let mut pivots = 0usize;

    for _ in 0..MAX_ROUNDS {
        let master = master_problem(lp, &layout, &columns);
        let msol = ratlp::solve(&master)?;
        pivots += msol.pivots;
        if msol.status != LpStatus::Optimal {
            return Err(CertifyError::Solver(format!("master problem {}", msol.status)));
        }
        let (y, y0) = (&msol.dual[..nl], &msol.dual[nl]);

        let priced: Vec<(Vec<Rational>, LpSolution)> = (0..clp.num_blocks)
            .into_par_iter()
            .map(|k| {
                let reduced = layout.reduced_costs(clp, k, y);
                let sol = ratlp::solve(&layout.pricing_problem(clp, k, &reduced))?;
                Ok((reduced, sol))
            })
            .collect::<Result<_, CertifyError>>()?;
        pivots += priced.iter().map(|(_, s)| s.pivots).sum::<usize>();

        let before = columns.len();
        for (k, (_, sol)) in priced.iter().enumerate() {
            if sol.status == LpStatus::Optimal && sol.objective_value > *y0 {
                columns.push(layout.column(clp, k, sol.primal.clone()));
            }
        }
        if columns.len() > before {
            continue;
        }

        // Converged: assemble the full primal and dual.
        let mut primal = vec![Rational::zero(); lp.num_vars];
        for (col, w) in columns.iter().zip(&msol.primal) {
            if w.is_zero() {
                continue;
            }
            let base = col.block * clp.block_size;
            for (j, v) in col.x.iter().enumerate() {
                if !v.is_zero() {
                    primal[base + j] += w * v;
                }
            }
        }
        let mut dual = vec![Rational::zero(); lp.rows.len()];
        for (&r, v) in layout.linking.iter().zip(y) {
            dual[r] = v.clone();
        }
        dual[layout.norm] = y0.clone();
        for (k, (reduced, sol)) in priced.iter().enumerate() {
            let z = match sol.status {
                LpStatus::Optimal => sol.dual[..layout.local[k].len()].to_vec(),
                _ => {
                    let (z, p) = cover_infeasible_block(&layout.local_rows[k], reduced, y0)?;
                    pivots += p;
                    z
                }
            };
            for (&r, v) in layout.local[k].iter().zip(z) {
                dual[r] = v;
            }
        }
        let objective_value = lp.objective_at(&primal);
        return Ok(LpSolution {
            status: LpStatus::Optimal,
            primal,
            objective_value,
            dual,
            ray: None,
            pivots,
        });
    }
    Err(CertifyError::Solver(format!(
        "column generation did not converge in {MAX_ROUNDS} rounds"
    )))
}

fn master_problem(lp: &LpProblem, layout: &Layout, columns: &[Column]) -> LpProblem {
    let mut rows: Vec<LpRow> = layout
        .linking
        .iter()
        .enumerate()
        .map(|(l, &r)| {
            let coeffs = columns
                .iter()
                .enumerate()
                .map(|(c, col)| (c, col.linking[l].clone()))
                .collect();
            LpRow::new(coeffs, lp.rows[r].sense, lp.rows[r].rhs.clone())
        })
        .collect();
    rows.push(LpRow::new(
        (0..columns.len()).map(|c| (c, Rational::one())).collect(),
        Sense::Eq,
        Rational::one(),
    ));
    let objective = columns
        .iter()
        .enumerate()
        .map(|(c, col)| (c, col.objective.clone()))
        .collect();
    LpProblem::new(columns.len(), objective, rows)
}

/// For a block whose local polytope is empty, finds `z ≥ 0` with
/// `Sᵀz ≥ reduced − y0`, so the block's dual constraints hold.
fn cover_infeasible_block(
    rows: &[LpRow],
    reduced: &[Rational],
    y0: &Rational,
) -> Result<(Vec<Rational>, usize), CertifyError> {
    let mut by_var: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); reduced.len()];
    for (i, row) in rows.iter().enumerate() {
        if row.sense != Sense::Le {
            return Err(CertifyError::Solver("unexpected local row sense".into()));
        }
        for (j, c) in &row.coeffs {
            by_var[*j].push((i, c.clone()));
        }
    }
    let cover_rows = by_var
        .into_iter()
        .zip(reduced)
        .map(|(coeffs, r)| LpRow::new(coeffs, Sense::Ge, r - y0))
        .collect();
    let sol = ratlp::solve(&LpProblem::new(rows.len(), Vec::new(), cover_rows))?;
    if sol.status != LpStatus::Optimal {
        return Err(CertifyError::Solver(format!(
            "no dual cover for an empty block ({})",
            sol.status
        )));
    }
    Ok((sol.primal, sol.pivots))
}
