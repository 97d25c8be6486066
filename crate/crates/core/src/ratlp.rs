//! Exact rational linear programming.
//!
//! [`solve`] is a dense-tableau two-phase primal simplex over [`Rational`]
//! with Bland's rule: the entering column is the lowest-index improving
//! column and ties in the ratio test go to the lowest-index basic variable.
//! Every answer carries a certificate that [`check_solution`] rechecks without
//! touching solver internals:
//!
//! * `Optimal`: primal point, dual multipliers with `Aᵀy ≥ c`, and
//!   `cᵀx = bᵀy` exactly.
//! * `Infeasible`: Farkas multipliers with `Aᵀy ≥ 0` and `bᵀy < 0`.
//! * `Unbounded`: a feasible point and an improving recession ray.
//!
//! Problems are maximizations over `x ≥ 0`. Dual sign conventions: `≤` rows
//! carry `y ≥ 0`, `≥` rows `y ≤ 0`, `=` rows are free.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn flipped(self) -> Sense {
        match self {
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
            Sense::Eq => Sense::Eq,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// A sparse constraint row `Σ coeffs · x (sense) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl LpRow {
    /// Sorts by variable, merges repeated indices and drops zeros.
    pub fn new(coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) -> Self {
        LpRow {
            coeffs: canonical_sparse(coeffs),
            sense,
            rhs,
        }
    }

    pub fn activity(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &x[*j])
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Maximized.
    pub objective: Vec<(usize, Rational)>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    pub fn new(num_vars: usize, objective: Vec<(usize, Rational)>, rows: Vec<LpRow>) -> Self {
        LpProblem {
            num_vars,
            objective: canonical_sparse(objective),
            rows,
        }
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let bad = self
            .objective
            .iter()
            .chain(self.rows.iter().flat_map(|r| r.coeffs.iter()))
            .find(|(j, _)| *j >= self.num_vars);
        match bad {
            Some((j, _)) => Err(LpError::VariableOutOfRange {
                index: *j,
                num_vars: self.num_vars,
            }),
            None => Ok(()),
        }
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &x[*j])
    }

    /// Dense objective vector.
    pub fn cost_vector(&self) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.num_vars];
        for (j, v) in &self.objective {
            c[*j] = v.clone();
        }
        c
    }

    /// `Aᵀy` as a dense vector.
    pub fn transpose_times(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.num_vars];
        for (row, yr) in self.rows.iter().zip(y) {
            if yr.is_zero() {
                continue;
            }
            for (j, c) in &row.coeffs {
                out[*j] += c * yr;
            }
        }
        out
    }

    /// Line-oriented dump: `vars N`, the `max` line, then one row per line
    /// as `idx:coef ... <sense> rhs`.
    pub fn to_text(&self) -> String {
        let pairs = |v: &[(usize, Rational)]| {
            v.iter()
                .map(|(j, c)| format!("{}:{}", j, rational::format(c)))
                .collect::<Vec<_>>()
        };
        let mut out = format!("vars {}\n", self.num_vars);
        let mut obj = vec!["max".to_string()];
        obj.extend(pairs(&self.objective));
        out.push_str(&obj.join(" "));
        out.push('\n');
        for row in &self.rows {
            let mut parts = pairs(&row.coeffs);
            parts.push(row.sense.symbol().to_string());
            parts.push(rational::format(&row.rhs));
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<LpProblem, LpError> {
        let parse_err = |line: usize, msg: &str| LpError::Parse {
            line,
            message: msg.to_string(),
        };
        let parse_pair = |line: usize, tok: &str| -> Result<(usize, Rational), LpError> {
            let (j, c) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(line, "expected idx:coef"))?;
            let j = j.parse().map_err(|_| parse_err(line, "bad variable index"))?;
            let c = rational::parse(c).map_err(|e| parse_err(line, &e.to_string()))?;
            Ok((j, c))
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let num_vars = header
            .strip_prefix("vars ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| parse_err(ln, "expected `vars N`"))?;
        let (ln, obj) = lines.next().ok_or_else(|| parse_err(ln, "missing objective"))?;
        let mut toks = obj.split_whitespace();
        if toks.next() != Some("max") {
            return Err(parse_err(ln, "expected `max` line"));
        }
        let objective = toks.map(|t| parse_pair(ln, t)).collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 {
                return Err(parse_err(ln, "row needs a sense and rhs"));
            }
            let sense = match toks[toks.len() - 2] {
                "<=" => Sense::Le,
                ">=" => Sense::Ge,
                "=" => Sense::Eq,
                _ => return Err(parse_err(ln, "unknown sense")),
            };
            let rhs = rational::parse(toks[toks.len() - 1])
                .map_err(|e| parse_err(ln, &e.to_string()))?;
            let coeffs = toks[..toks.len() - 2]
                .iter()
                .map(|t| parse_pair(ln, t))
                .collect::<Result<_, _>>()?;
            rows.push(LpRow::new(coeffs, sense, rhs));
        }
        let p = LpProblem::new(num_vars, objective, rows);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "OPTIMAL",
            LpStatus::Infeasible => "INFEASIBLE",
            LpStatus::Unbounded => "UNBOUNDED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded; empty if infeasible.
    pub primal: Vec<Rational>,
    pub objective_value: Rational,
    /// Optimal dual multipliers, or Farkas multipliers when infeasible.
    pub dual: Vec<Rational>,
    /// Improving recession direction when unbounded.
    pub ray: Option<Vec<Rational>>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("variable index {index} out of range ({num_vars} variables)")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("pivot budget of {0} exhausted")]
    PivotBudget(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub max_pivots: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_pivots: 1_000_000,
        }
    }
}

pub fn solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    solve_with(p, SolveOptions::default())
}

pub fn solve_with(p: &LpProblem, opts: SolveOptions) -> Result<LpSolution, LpError> {
    p.validate()?;
    let mut tab = Tableau::build(p);
    let mut pivots = 0usize;

    if tab.first_artificial < tab.ncols {
        let phase1: Vec<Rational> = (0..tab.ncols)
            .map(|j| {
                if j >= tab.first_artificial {
                    -rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        tab.set_costs(phase1);
        match tab.run(tab.ncols, opts.max_pivots, &mut pivots)? {
            Outcome::Optimal => {}
            Outcome::Unbounded(_) => unreachable!("phase 1 objective is bounded by zero"),
        }
        if tab.objective_value().is_negative() {
            let dual = tab.row_duals();
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                objective_value: Rational::zero(),
                dual,
                ray: None,
                pivots,
            });
        }
        tab.drive_out_artificials(&mut pivots);
    }

    let mut costs = vec![Rational::zero(); tab.ncols];
    for (j, c) in &p.objective {
        costs[*j] = c.clone();
    }
    tab.set_costs(costs);
    let allowed = tab.first_artificial;
    match tab.run(allowed, opts.max_pivots, &mut pivots)? {
        Outcome::Optimal => {
            let primal = tab.primal(p.num_vars);
            let objective_value = p.objective_at(&primal);
            let dual = tab.row_duals();
            Ok(LpSolution {
                status: LpStatus::Optimal,
                primal,
                objective_value,
                dual,
                ray: None,
                pivots,
            })
        }
        Outcome::Unbounded(q) => {
            let primal = tab.primal(p.num_vars);
            let mut ray = vec![Rational::zero(); p.num_vars];
            if q < p.num_vars {
                ray[q] = rational::one();
            }
            for (i, &b) in tab.basis.iter().enumerate() {
                if b < p.num_vars {
                    ray[b] = -tab.t[i][q].clone();
                }
            }
            Ok(LpSolution {
                status: LpStatus::Unbounded,
                objective_value: p.objective_at(&primal),
                primal,
                dual: Vec::new(),
                ray: Some(ray),
                pivots,
            })
        }
    }
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

struct Tableau {
    /// Rows of `[columns | rhs]`.
    t: Vec<Vec<Rational>>,
    /// Reduced costs `c_j − c_Bᵀ B⁻¹ A_j`, plus `-objective` in the last slot.
    d: Vec<Rational>,
    costs: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
    /// Column that formed the initial identity basis for each row.
    init_col: Vec<usize>,
    /// `±1` applied to each row so that its rhs is nonnegative.
    flipped: Vec<bool>,
}

impl Tableau {
    fn build(p: &LpProblem) -> Tableau {
        let n = p.num_vars;
        let m = p.rows.len();
        let flipped: Vec<bool> = p.rows.iter().map(|r| r.rhs.is_negative()).collect();
        let senses: Vec<Sense> = p
            .rows
            .iter()
            .zip(&flipped)
            .map(|(r, &f)| if f { r.sense.flipped() } else { r.sense })
            .collect();
        let n_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
        let n_art = senses.iter().filter(|s| **s != Sense::Le).count();
        let ncols = n + n_slack + n_art;
        let first_artificial = n + n_slack;
        let mut t = vec![vec![Rational::zero(); ncols + 1]; m];
        let mut init_col = vec![0; m];
        let (mut next_slack, mut next_art) = (n, first_artificial);
        for (i, row) in p.rows.iter().enumerate() {
            let sign = if flipped[i] { -rational::one() } else { rational::one() };
            for (j, c) in &row.coeffs {
                t[i][*j] = c * &sign;
            }
            t[i][ncols] = &row.rhs * &sign;
            match senses[i] {
                Sense::Le => {
                    t[i][next_slack] = rational::one();
                    init_col[i] = next_slack;
                    next_slack += 1;
                }
                Sense::Ge => {
                    t[i][next_slack] = -rational::one();
                    next_slack += 1;
                    t[i][next_art] = rational::one();
                    init_col[i] = next_art;
                    next_art += 1;
                }
                Sense::Eq => {
                    t[i][next_art] = rational::one();
                    init_col[i] = next_art;
                    next_art += 1;
                }
            }
        }
        Tableau {
            t,
            d: vec![Rational::zero(); ncols + 1],
            costs: vec![Rational::zero(); ncols],
            basis: init_col.clone(),
            ncols,
            first_artificial,
            init_col,
            flipped,
        }
    }

    fn set_costs(&mut self, costs: Vec<Rational>) {
        let mut d: Vec<Rational> = costs.iter().cloned().chain([Rational::zero()]).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, tij) in d.iter_mut().zip(&self.t[i]) {
                if !tij.is_zero() {
                    *dj -= cb * tij;
                }
            }
        }
        self.d = d;
        self.costs = costs;
    }

    fn objective_value(&self) -> Rational {
        -self.d[self.ncols].clone()
    }

    fn run(&mut self, allowed: usize, budget: usize, pivots: &mut usize) -> Result<Outcome, LpError> {
        loop {
            let Some(q) = (0..allowed).find(|&j| self.d[j].is_positive()) else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][self.ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(Outcome::Unbounded(q));
            };
            if *pivots >= budget {
                return Err(LpError::PivotBudget(budget));
            }
            self.pivot(r, q);
            *pivots += 1;
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let inv = rational::one() / &self.t[r][q];
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !self.t[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.d[q].is_zero() {
            let f = self.d[q].clone();
            for &j in &nz {
                self.d[j] -= &f * &pivot_row[j];
            }
        }
        self.t[r] = pivot_row;
        self.basis[r] = q;
    }

    /// After a successful phase 1, swaps zero-level artificials out of the
    /// basis where the row allows it. Rows with no structural entry are
    /// redundant and keep their artificial at level zero.
    fn drive_out_artificials(&mut self, pivots: &mut usize) {
        for i in 0..self.t.len() {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            if let Some(q) = (0..self.first_artificial).find(|&j| !self.t[i][j].is_zero()) {
                self.pivot(i, q);
                *pivots += 1;
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.t[i][self.ncols].clone();
            }
        }
        x
    }

    /// `y = c_Bᵀ B⁻¹`, read from the columns of the initial identity basis and
    /// mapped back through the row sign flips.
    fn row_duals(&self) -> Vec<Rational> {
        (0..self.t.len())
            .map(|r| {
                let col = self.init_col[r];
                let mut y = Rational::zero();
                for (i, &b) in self.basis.iter().enumerate() {
                    let cb = &self.costs[b];
                    if !cb.is_zero() && !self.t[i][col].is_zero() {
                        y += cb * &self.t[i][col];
                    }
                }
                if self.flipped[r] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }
}

/// Independent exact recheck of a solution's certificate.
pub fn check_solution(p: &LpProblem, s: &LpSolution) -> bool {
    check_solution_detailed(p, s).is_ok()
}

/// Like [`check_solution`], reporting the first violated condition.
pub fn check_solution_detailed(p: &LpProblem, s: &LpSolution) -> Result<(), String> {
    p.validate().map_err(|e| e.to_string())?;
    match s.status {
        LpStatus::Optimal => {
            check_primal(p, &s.primal)?;
            check_dual_signs(p, &s.dual)?;
            let aty = p.transpose_times(&s.dual);
            let c = p.cost_vector();
            if let Some(j) = (0..p.num_vars).find(|&j| aty[j] < c[j]) {
                return Err(format!(
                    "dual constraint for variable {j} violated: {} < {}",
                    rational::format(&aty[j]),
                    rational::format(&c[j])
                ));
            }
            let primal_obj = p.objective_at(&s.primal);
            let dual_obj = dual_bound(p, &s.dual);
            if primal_obj != s.objective_value {
                return Err(format!(
                    "reported objective {} differs from cᵀx = {}",
                    rational::format(&s.objective_value),
                    rational::format(&primal_obj)
                ));
            }
            if dual_obj != primal_obj {
                return Err(format!(
                    "duality gap: cᵀx = {}, bᵀy = {}",
                    rational::format(&primal_obj),
                    rational::format(&dual_obj)
                ));
            }
            Ok(())
        }
        LpStatus::Infeasible => {
            check_dual_signs(p, &s.dual)?;
            let aty = p.transpose_times(&s.dual);
            if let Some(j) = aty.iter().position(|v| v.is_negative()) {
                return Err(format!("Farkas condition Aᵀy ≥ 0 fails at variable {j}"));
            }
            if !dual_bound(p, &s.dual).is_negative() {
                return Err("Farkas condition bᵀy < 0 fails".into());
            }
            Ok(())
        }
        LpStatus::Unbounded => {
            check_primal(p, &s.primal)?;
            let ray = s.ray.as_ref().ok_or("unbounded status without a ray")?;
            if ray.len() != p.num_vars || ray.iter().any(|v| v.is_negative()) {
                return Err("ray must be a nonnegative vector of full length".into());
            }
            for (i, row) in p.rows.iter().enumerate() {
                let a = row.activity(ray);
                let ok = match row.sense {
                    Sense::Le => !a.is_positive(),
                    Sense::Ge => !a.is_negative(),
                    Sense::Eq => a.is_zero(),
                };
                if !ok {
                    return Err(format!("ray leaves the feasible region through row {i}"));
                }
            }
            if !p.objective_at(ray).is_positive() {
                return Err("ray does not improve the objective".into());
            }
            Ok(())
        }
    }
}

/// `bᵀy`.
pub fn dual_bound(p: &LpProblem, y: &[Rational]) -> Rational {
    p.rows
        .iter()
        .zip(y)
        .fold(Rational::zero(), |acc, (r, v)| acc + &r.rhs * v)
}

fn check_primal(p: &LpProblem, x: &[Rational]) -> Result<(), String> {
    if x.len() != p.num_vars {
        return Err(format!("primal has length {}, expected {}", x.len(), p.num_vars));
    }
    if let Some(j) = x.iter().position(|v| v.is_negative()) {
        return Err(format!("primal variable {j} is negative"));
    }
    if let Some(i) = p.rows.iter().position(|r| !r.is_satisfied(x)) {
        return Err(format!("primal row {i} violated"));
    }
    Ok(())
}

fn check_dual_signs(p: &LpProblem, y: &[Rational]) -> Result<(), String> {
    if y.len() != p.rows.len() {
        return Err(format!("dual has length {}, expected {}", y.len(), p.rows.len()));
    }
    for (i, (row, v)) in p.rows.iter().zip(y).enumerate() {
        let ok = match row.sense {
            Sense::Le => !v.is_negative(),
            Sense::Ge => !v.is_positive(),
            Sense::Eq => true,
        };
        if !ok {
            return Err(format!("dual multiplier of row {i} has the wrong sign"));
        }
    }
    Ok(())
}

fn canonical_sparse(mut v: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    v.sort_by_key(|(j, _)| *j);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(v.len());
    for (j, c) in v {
        match out.last_mut() {
            Some((lj, lc)) if *lj == j => *lc += c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn row(c: &[(usize, i64)], sense: Sense, rhs: i64) -> LpRow {
        LpRow::new(c.iter().map(|&(j, v)| (j, int(v))).collect(), sense, int(rhs))
    }

    #[test]
    fn single_bound() {
        let p = LpProblem::new(1, vec![(0, int(1))], vec![row(&[(0, 1)], Sense::Le, 3)]);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.primal, vec![int(3)]);
        assert_eq!(s.objective_value, int(3));
        assert_eq!(s.dual, vec![int(1)]);
        assert!(check_solution(&p, &s));
    }

    #[test]
    fn negative_rhs_is_infeasible_with_farkas_certificate() {
        let p = LpProblem::new(1, vec![(0, int(1))], vec![row(&[(0, 1)], Sense::Le, -1)]);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        assert!(check_solution(&p, &s));
    }

    #[test]
    fn two_variable_vertex() {
        let p = LpProblem::new(
            2,
            vec![(0, int(1)), (1, int(1))],
            vec![
                row(&[(0, 1), (1, 2)], Sense::Le, 4),
                row(&[(0, 3), (1, 1)], Sense::Le, 6),
            ],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value, frac(14, 5));
        assert_eq!(s.primal, vec![frac(8, 5), frac(6, 5)]);
        assert!(check_solution(&p, &s));
    }

    #[test]
    fn unbounded_reports_ray() {
        let p = LpProblem::new(
            2,
            vec![(0, int(1))],
            vec![row(&[(0, 1), (1, -1)], Sense::Le, 1)],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        assert!(check_solution(&p, &s));
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 1 twice, maximize x - y.
        let p = LpProblem::new(
            2,
            vec![(0, int(1)), (1, int(-1))],
            vec![
                row(&[(0, 1), (1, 1)], Sense::Eq, 1),
                row(&[(0, 2), (1, 2)], Sense::Eq, 2),
                row(&[(0, 1)], Sense::Ge, 0),
            ],
        );
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value, int(1));
        assert!(check_solution_detailed(&p, &s).is_ok());
    }

    #[test]
    fn checker_rejects_tampering() {
        let p = LpProblem::new(
            2,
            vec![(0, int(1)), (1, int(1))],
            vec![
                row(&[(0, 1), (1, 2)], Sense::Le, 4),
                row(&[(0, 3), (1, 1)], Sense::Le, 6),
            ],
        );
        let s = solve(&p).unwrap();
        let mut off = s.clone();
        off.objective_value += frac(1, 7);
        assert!(!check_solution(&p, &off));
        let mut neg = s.clone();
        neg.dual[0] = frac(-1, 5);
        assert!(!check_solution(&p, &neg));
    }

    #[test]
    fn pivot_budget_is_reported() {
        let p = LpProblem::new(
            2,
            vec![(0, int(1)), (1, int(1))],
            vec![
                row(&[(0, 1), (1, 2)], Sense::Le, 4),
                row(&[(0, 3), (1, 1)], Sense::Le, 6),
            ],
        );
        assert_eq!(
            solve_with(&p, SolveOptions { max_pivots: 0 }),
            Err(LpError::PivotBudget(0))
        );
    }

    #[test]
    fn text_round_trip() {
        let p = LpProblem::new(
            3,
            vec![(2, frac(-1, 2)), (0, int(1))],
            vec![
                row(&[(0, 1), (2, 2)], Sense::Le, 4),
                row(&[], Sense::Eq, 0),
                row(&[(1, 3)], Sense::Ge, -6),
            ],
        );
        let text = p.to_text();
        assert!(text.starts_with("vars 3\nmax 0:1/1 2:-1/2\n"));
        assert_eq!(LpProblem::from_text(&text).unwrap(), p);
        assert!(LpProblem::from_text("vars 1\nmax 3:1/1\n").is_err());
    }
}
