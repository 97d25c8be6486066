//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use nondistill::probvec::{secret_bit, tensor};
use nondistill::ratlp::{LpProblem, LpRow, LpStatus, Sense};
use nondistill::rational::{frac, int};
use nondistill::{Axis, JointDist, LocalMap, Rational};
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn trivial_g() -> JointDist {
    JointDist::new(
        vec![Axis::new("A", 1), Axis::new("B", 1), Axis::new("E", 1)],
        [(vec![0, 0, 0], int(1))],
    )
    .unwrap()
}

pub fn secret_bit_g() -> JointDist {
    let e = JointDist::new(vec![Axis::new("E", 1)], [(vec![0], int(1))]).unwrap();
    tensor(&secret_bit(), &e).unwrap()
}

pub fn eve_knows_all() -> JointDist {
    JointDist::new(
        vec![Axis::new("A", 2), Axis::new("B", 2), Axis::new("E", 2)],
        [(vec![0, 0, 0], frac(1, 2)), (vec![1, 1, 1], frac(1, 2))],
    )
    .unwrap()
}

/// Nonnegative integers summing to `total`, drawn as a random composition.
pub fn composition(rng: &mut impl Rng, parts: usize, total: u32) -> Vec<u32> {
    let mut out = vec![0u32; parts];
    for _ in 0..total {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

/// Random distribution with entries `w/D`, `D ≤ max_den`.
pub fn random_dist(rng: &mut impl Rng, shape: &[(&str, usize)], max_den: u32) -> JointDist {
    let n: usize = shape.iter().map(|(_, s)| s).product();
    let den = rng.gen_range(1..=max_den);
    let weights = composition(rng, n, den);
    let axes = shape.iter().map(|(l, s)| Axis::new(*l, *s)).collect();
    JointDist::from_dense(
        axes,
        weights.iter().map(|&w| frac(w as i64, den as i64)).collect(),
    )
    .unwrap()
}

pub fn random_map(rng: &mut impl Rng, input: Axis, output: Axis, max_num: i64) -> LocalMap {
    let coeffs = (0..input.size * output.size)
        .map(|_| frac(rng.gen_range(0..=max_num), rng.gen_range(1..=4)))
        .collect();
    LocalMap::new(input, output, coeffs).unwrap()
}

/// `Σ_{a,b} …` written out directly: `lift(q,g)(a,b,e',e)` with `q` on axes
/// `(A, B, E')` and `g` on `(A, B, E)`, as a dense row-major vector.
pub fn dense_lift(q: &JointDist, g: &JointDist) -> Vec<Rational> {
    let (qs, gs) = (q.shape(), g.shape());
    let (ca, cb, d) = (gs[0], gs[1], gs[2]);
    let ep = qs[2];
    let mut out = vec![Rational::zero(); 4 * ep * d];
    for a in 0..2 {
        for b in 0..2 {
            for e1 in 0..ep {
                for e in 0..d {
                    let mut s = Rational::zero();
                    for x in 0..ca {
                        for y in 0..cb {
                            s += q.get(&[a * ca + x, b * cb + y, e1]) * g.get(&[x, y, e]);
                        }
                    }
                    out[((a * 2 + b) * ep + e1) * d + e] = s;
                }
            }
        }
    }
    out
}

/// `(4·Σ min(x00, x11) − 2λ0·Σ x)` over the trailing Eve index of a dense
/// `(2, 2, n)` tensor.
pub fn dense_activation(t: &[Rational], lambda0: &Rational) -> Rational {
    let n = t.len() / 4;
    let mut mins = Rational::zero();
    for e in 0..n {
        mins += t[e].clone().min(t[3 * n + e].clone());
    }
    let mass: Rational = t.iter().cloned().sum();
    int(4) * mins - int(2) * lambda0 * mass
}

/// `2·Σ_e min(p00e, p11e)/Σp` from a dense `(2, 2, |E|)` vector.
pub fn dense_lambda(t: &[Rational]) -> Rational {
    let n = t.len() / 4;
    let mins: Rational = (0..n).map(|e| t[e].clone().min(t[3 * n + e].clone())).sum();
    let mass: Rational = t.iter().cloned().sum();
    int(2) * mins / mass
}

/// Outcome of brute-force vertex enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteOutcome {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// Solves `n×n` systems exactly; `None` when singular.
pub fn gauss(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let v = &f * &m[col][c];
                    m[r][c] -= v;
                }
                let v = &f * &rhs[col];
                rhs[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn dense_row(row: &LpRow, n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for (j, c) in &row.coeffs {
        v[*j] = c.clone();
    }
    v
}

/// Feasible vertices of `{x ≥ 0 : rows}`, found by making every choice of
/// `n` constraints tight.
pub fn vertices(n: usize, rows: &[LpRow]) -> Vec<Vec<Rational>> {
    let mut pool: Vec<(Vec<Rational>, Rational)> = rows
        .iter()
        .map(|r| (dense_row(r, n), r.rhs.clone()))
        .collect();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        pool.push((e, Rational::zero()));
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut choose = vec![0usize; n];
    fn rec(
        start: usize,
        depth: usize,
        choose: &mut Vec<usize>,
        pool: &[(Vec<Rational>, Rational)],
        rows: &[LpRow],
        out: &mut Vec<Vec<Rational>>,
    ) {
        let n = choose.len();
        if depth == n {
            let m = choose.iter().map(|&i| pool[i].0.clone()).collect();
            let b = choose.iter().map(|&i| pool[i].1.clone()).collect();
            if let Some(x) = gauss(m, b) {
                if x.iter().all(|v| !v.is_negative())
                    && rows.iter().all(|r| r.is_satisfied(&x))
                    && !out.contains(&x)
                {
                    out.push(x);
                }
            }
            return;
        }
        for i in start..pool.len() {
            choose[depth] = i;
            rec(i + 1, depth + 1, choose, pool, rows, out);
        }
    }
    rec(0, 0, &mut choose, &pool, rows, &mut out);
    out
}

/// Exact LP oracle: the optimum is attained at a vertex unless a feasible
/// ray with positive objective exists. Rays are searched as vertices of the
/// recession cone cut by `Σ r = 1`.
pub fn brute_force(p: &LpProblem) -> BruteOutcome {
    let n = p.num_vars;
    let verts = vertices(n, &p.rows);
    if verts.is_empty() {
        return BruteOutcome::Infeasible;
    }
    let mut cone: Vec<LpRow> = p
        .rows
        .iter()
        .map(|r| LpRow::new(r.coeffs.clone(), r.sense, Rational::zero()))
        .collect();
    cone.push(LpRow::new(
        (0..n).map(|j| (j, Rational::one())).collect(),
        Sense::Eq,
        Rational::one(),
    ));
    if vertices(n, &cone).iter().any(|r| p.objective_at(r).is_positive()) {
        return BruteOutcome::Unbounded;
    }
    BruteOutcome::Optimal(verts.iter().map(|x| p.objective_at(x)).max().unwrap())
}

pub fn random_lp(rng: &mut impl Rng) -> LpProblem {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(0..=5);
    let objective = (0..n).map(|j| (j, int(rng.gen_range(-5..=5)))).collect();
    let rows = (0..m)
        .map(|_| {
            let coeffs = (0..n).map(|j| (j, int(rng.gen_range(-4..=4)))).collect();
            let sense = match rng.gen_range(0..5) {
                0 => Sense::Ge,
                1 => Sense::Eq,
                _ => Sense::Le,
            };
            LpRow::new(coeffs, sense, frac(rng.gen_range(-4..=9), rng.gen_range(1..=3)))
        })
        .collect();
    LpProblem::new(n, objective, rows)
}

pub fn status_of(b: &BruteOutcome) -> LpStatus {
    match b {
        BruteOutcome::Infeasible => LpStatus::Infeasible,
        BruteOutcome::Unbounded => LpStatus::Unbounded,
        BruteOutcome::Optimal(_) => LpStatus::Optimal,
    }
}
