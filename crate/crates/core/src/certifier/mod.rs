//! The activation linear program and its certificates.
//!
//! For a distribution `G_ABE` (with `|E| = d`), a family of `M` map pairs and
//! a threshold `λ0`, the variables are the entries of a distribution
//! `Q_ABK` whose `A`/`B` alphabets are the composites `(bit, copy)` and whose
//! Eve-side symbol is a selector vector `k ∈ {0,1}^{d+M}`. Component `e` of
//! `k` names the diagonal cell attaining the min for Eve symbol `e` of the
//! lifted product; component `d+i` does the same for family member `i`.
//!
//! Maximize `Σ_{k,e} 4·L(k_e,k_e,k,e) − 2λ0·Σ_{a,b} L(a,b,k,e)` with
//! `L = U_A U_B (Q_ABK ⊗ G)`, subject to
//!
//! * family rows: `4·Σ_k F_i(k_{d+i},k_{d+i},k) − 2λ0·Σ F_i ≤ 0`,
//!   `F_i = M^i_A N^i_B Q_ABK`;
//! * selector rows: `L(k_e,k_e,k,e) − L(¬k_e,¬k_e,k,e) ≤ 0` and the same for
//!   `F_i` at `k_{d+i}`;
//! * `Σ Q_ABK = 1`, `Q_ABK ≥ 0`.
//!
//! An optimum `≤ 0` certifies that `G` is undistillable.

mod certificate;
mod decomposed;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::families::MapFamily;
use crate::lifting::{self, LiftError};
use crate::measures::{self, MeasureError};
use crate::probvec::{apply_local, Axis, DistError, JointDist};
use crate::ratlp::{self, LpError, LpProblem, LpRow, LpSolution, Sense};
use crate::rational::{self, Rational};

pub use certificate::{
    check_certificate, recheck_against, recheck_math, verify_certificate, Certificate, Verdict, VerifyError,
};

/// Default cap on `d + M`.
pub const DEFAULT_MAX_DM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(
        "problem too large: d + M = {d} + {m} exceeds the limit {limit} \
         ({vars} variables, {rows} rows)"
    )]
    SizeGuard {
        d: usize,
        m: usize,
        limit: usize,
        vars: u128,
        rows: u128,
    },
    #[error("solver failure: {0}")]
    Solver(String),
}

impl From<LpError> for CertifyError {
    fn from(e: LpError) -> Self {
        CertifyError::Solver(e.to_string())
    }
}

/// Selector vector `k`, component 0 being the most significant bit of its
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelectorVector {
    index: usize,
    len: usize,
}

impl SelectorVector {
    pub fn new(index: usize, len: usize) -> Self {
        assert!(len >= usize::BITS as usize || index < (1usize << len));
        SelectorVector { index, len }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        SelectorVector {
            index,
            len: bits.len(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, component: usize) -> usize {
        (self.index >> (self.len - 1 - component)) & 1
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|c| self.bit(c) as u8).collect()
    }
}

/// `(G, F, λ0)` with its derived dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationProblem {
    g: JointDist,
    family: MapFamily,
    lambda0: Rational,
    eve_label: String,
}

impl CertificationProblem {
    pub fn new(g: &JointDist, family: &MapFamily, lambda0: &Rational) -> Result<Self, CertifyError> {
        g.axis_position("A")?;
        g.axis_position("B")?;
        let others: Vec<&Axis> = g
            .axes()
            .iter()
            .filter(|a| a.label != "A" && a.label != "B")
            .collect();
        if others.len() != 1 {
            return Err(CertifyError::Invalid(format!(
                "G must have axes A, B and exactly one Eve axis, found {:?}",
                g.labels()
            )));
        }
        let eve_label = others[0].label.clone();
        if eve_label == "K" {
            return Err(CertifyError::Invalid("Eve's axis of G may not be labelled K".into()));
        }
        let g = g.permute(&["A", "B", &eve_label])?;
        if lambda0.is_negative() {
            return Err(CertifyError::Invalid("lambda0 must be nonnegative".into()));
        }
        let problem = CertificationProblem {
            family: family.clone(),
            lambda0: lambda0.clone(),
            eve_label,
            g,
        };
        family.check_shape(problem.a_copy(), problem.b_copy())?;
        Ok(problem)
    }

    pub fn g(&self) -> &JointDist {
        &self.g
    }

    pub fn family(&self) -> &MapFamily {
        &self.family
    }

    pub fn lambda0(&self) -> &Rational {
        &self.lambda0
    }

    pub fn a_copy(&self) -> usize {
        self.g.axes()[0].size
    }

    pub fn b_copy(&self) -> usize {
        self.g.axes()[1].size
    }

    /// Eve's alphabet size in `G`.
    pub fn d(&self) -> usize {
        self.g.axes()[2].size
    }

    /// Family size.
    pub fn m(&self) -> usize {
        self.family.len()
    }

    pub fn selector_len(&self) -> usize {
        self.d() + self.m()
    }

    /// Variables per selector value: `2|A_G| · 2|B_G|`.
    pub fn block_size(&self) -> usize {
        4 * self.a_copy() * self.b_copy()
    }

    /// `2^{d+M}`, saturating.
    pub fn num_selectors(&self) -> u128 {
        1u128.checked_shl(self.selector_len() as u32).unwrap_or(u128::MAX)
    }

    pub fn num_vars(&self) -> u128 {
        self.num_selectors().saturating_mul(self.block_size() as u128)
    }

    /// Upper bound on row count before zero/duplicate rows are removed.
    pub fn max_rows(&self) -> u128 {
        (self.selector_len() as u128)
            .saturating_mul(self.num_selectors())
            .saturating_add(self.m() as u128 + 1)
    }

    /// Column index of `Q_ABK(a, b, k)`; blocks of one selector value are
    /// contiguous.
    pub fn var_index(&self, a: usize, b: usize, k: usize) -> usize {
        let nb = 2 * self.b_copy();
        k * self.block_size() + a * nb + b
    }

    /// Axes of `Q_ABK`.
    pub fn q_axes(&self) -> Vec<Axis> {
        let len = self.selector_len();
        let k_axis = if len == 0 {
            Axis::new("K", 1)
        } else {
            Axis::composite("K", vec![2; len])
        };
        vec![
            Axis::composite("A", vec![2, self.a_copy()]),
            Axis::composite("B", vec![2, self.b_copy()]),
            k_axis,
        ]
    }

    /// Hex SHA-256 of the canonical serialization of `(G, F, λ0)`.
    pub fn fingerprint(&self) -> String {
        let g = self.g.relabel(&self.eve_label.clone(), "E").expect("fresh label");
        let body = json!({
            "g": g.to_wire(),
            "pairs": self.family.pairs_wire(),
            "lambda0": rational::format(&self.lambda0),
        });
        hex::encode(Sha256::digest(body.to_string().as_bytes()))
    }

    /// Flattens `Q_ABK` into the LP variable vector.
    pub fn q_to_vector(&self, q: &JointDist) -> Result<Vec<Rational>, CertifyError> {
        let axes = self.q_axes();
        if q.axes().iter().map(|a| a.size).ne(axes.iter().map(|a| a.size))
            || q.labels() != ["A", "B", "K"]
        {
            return Err(CertifyError::Invalid(format!(
                "Q_ABK must have axes A({}), B({}), K({}), found {:?} with shape {:?}",
                axes[0].size,
                axes[1].size,
                axes[2].size,
                q.labels(),
                q.shape()
            )));
        }
        let n = usize::try_from(self.num_vars()).map_err(|_| CertifyError::Invalid("too many variables".into()))?;
        let mut x = vec![Rational::zero(); n];
        for (idx, v) in q.entries() {
            x[self.var_index(idx[0], idx[1], idx[2])] = v.clone();
        }
        Ok(x)
    }

    pub fn vector_to_q(&self, x: &[Rational]) -> Result<JointDist, CertifyError> {
        let nb = 2 * self.b_copy();
        let bs = self.block_size();
        let entries = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| {
                let (k, r) = (j / bs, j % bs);
                (vec![r / nb, r % nb, k], v.clone())
            });
        Ok(JointDist::new(self.q_axes(), entries)?)
    }
}

/// What a row of the activation LP encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// `λ[M^i N^i Q] ≤ λ0`, linearized.
    Family { i: usize },
    /// Component `e` of `k` selects the min of the lifted diagonal.
    EveSelector { e: usize, k: usize },
    /// Component `d+i` of `k` selects the min of the filtered diagonal.
    FamilySelector { i: usize, k: usize },
    Normalization,
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKind::Family { i } => write!(f, "family constraint i={i}"),
            RowKind::EveSelector { e, k } => write!(f, "selector row e={e} k={k}"),
            RowKind::FamilySelector { i, k } => write!(f, "selector row i={i} k={k}"),
            RowKind::Normalization => write!(f, "normalization row"),
        }
    }
}

/// The assembled LP with row provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationLp {
    pub lp: LpProblem,
    pub kinds: Vec<RowKind>,
    pub block_size: usize,
    pub num_blocks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverRoute {
    /// Column generation over selector blocks; exact, with a full-LP dual.
    Decomposed,
    /// One dense simplex tableau over the whole LP.
    Monolithic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub max_dm: usize,
    pub route: SolverRoute,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            max_dm: DEFAULT_MAX_DM,
            route: SolverRoute::Decomposed,
        }
    }
}

/// Lifted and filtered images of one `Q` basis vector `δ_{(a,b)}`.
struct BasisImage {
    /// `(L(0,0,e), L(1,1,e))` per Eve symbol.
    lift_diag: Vec<(Rational, Rational)>,
    /// `Σ_{a,b} L(a,b,e)` per Eve symbol.
    lift_mass: Vec<Rational>,
    /// `(F_i(0,0), F_i(1,1))` per family member.
    fil_diag: Vec<(Rational, Rational)>,
    fil_mass: Vec<Rational>,
}

fn basis_images(problem: &CertificationProblem) -> Result<Vec<BasisImage>, CertifyError> {
    let (na, nb) = (2 * problem.a_copy(), 2 * problem.b_copy());
    let d = problem.d();
    let axes = vec![
        Axis::composite("A", vec![2, problem.a_copy()]),
        Axis::composite("B", vec![2, problem.b_copy()]),
        Axis::new("K", 1),
    ];
    let mut out = Vec::with_capacity(na * nb);
    for a in 0..na {
        for b in 0..nb {
            let basis = JointDist::new(axes.clone(), [(vec![a, b, 0], Rational::one())])?;
            let lifted = lifting::lift(&basis, problem.g())?;
            let mut lift_diag = vec![(Rational::zero(), Rational::zero()); d];
            let mut lift_mass = vec![Rational::zero(); d];
            for (idx, v) in lifted.entries() {
                let e = idx[3];
                lift_mass[e] += v;
                if idx[0] == idx[1] {
                    if idx[0] == 0 {
                        lift_diag[e].0 += v;
                    } else {
                        lift_diag[e].1 += v;
                    }
                }
            }
            let mut fil_diag = Vec::with_capacity(problem.m());
            let mut fil_mass = Vec::with_capacity(problem.m());
            for pair in &problem.family().pairs {
                let f = apply_local(&pair.map_a, &basis, "A")?;
                let f = apply_local(&pair.map_b, &f, "B")?;
                fil_diag.push((f.get(&[0, 0, 0]), f.get(&[1, 1, 0])));
                fil_mass.push(f.total_mass());
            }
            out.push(BasisImage {
                lift_diag,
                lift_mass,
                fil_diag,
                fil_mass,
            });
        }
    }
    Ok(out)
}

fn pick(pair: &(Rational, Rational), bit: usize) -> &Rational {
    if bit == 0 {
        &pair.0
    } else {
        &pair.1
    }
}

/// Assembles the activation LP. Coefficients come from lifting and filtering
/// each `Q` basis vector; all-zero rows and exact duplicate rows are dropped.
pub fn build_lp(
    problem: &CertificationProblem,
    opts: &CertifyOptions,
) -> Result<CertificationLp, CertifyError> {
    let (d, m) = (problem.d(), problem.m());
    if d + m > opts.max_dm || d + m >= usize::BITS as usize - 8 {
        return Err(CertifyError::SizeGuard {
            d,
            m,
            limit: opts.max_dm,
            vars: problem.num_vars(),
            rows: problem.max_rows(),
        });
    }
    let images = basis_images(problem)?;
    let len = d + m;
    let num_blocks = 1usize << len;
    let bs = problem.block_size();
    let four = rational::int(4);
    let two_l0 = rational::int(2) * problem.lambda0();

    let mut objective = Vec::new();
    for k in 0..num_blocks {
        let sel = SelectorVector::new(k, len);
        for (r, img) in images.iter().enumerate() {
            let mut c = Rational::zero();
            for e in 0..d {
                c += &four * pick(&img.lift_diag[e], sel.bit(e)) - &two_l0 * &img.lift_mass[e];
            }
            objective.push((k * bs + r, c));
        }
    }

    let mut rows: Vec<(RowKind, LpRow)> = Vec::new();
    for i in 0..m {
        let mut coeffs = Vec::new();
        for k in 0..num_blocks {
            let s = SelectorVector::new(k, len).bit(d + i);
            for (r, img) in images.iter().enumerate() {
                let c = &four * pick(&img.fil_diag[i], s) - &two_l0 * &img.fil_mass[i];
                coeffs.push((k * bs + r, c));
            }
        }
        rows.push((RowKind::Family { i }, LpRow::new(coeffs, Sense::Le, Rational::zero())));
    }
    for e in 0..d {
        for k in 0..num_blocks {
            let s = SelectorVector::new(k, len).bit(e);
            let coeffs = images
                .iter()
                .enumerate()
                .map(|(r, img)| {
                    (k * bs + r, pick(&img.lift_diag[e], s) - pick(&img.lift_diag[e], 1 - s))
                })
                .collect();
            rows.push((
                RowKind::EveSelector { e, k },
                LpRow::new(coeffs, Sense::Le, Rational::zero()),
            ));
        }
    }
    for i in 0..m {
        for k in 0..num_blocks {
            let s = SelectorVector::new(k, len).bit(d + i);
            let coeffs = images
                .iter()
                .enumerate()
                .map(|(r, img)| {
                    (k * bs + r, pick(&img.fil_diag[i], s) - pick(&img.fil_diag[i], 1 - s))
                })
                .collect();
            rows.push((
                RowKind::FamilySelector { i, k },
                LpRow::new(coeffs, Sense::Le, Rational::zero()),
            ));
        }
    }
    rows.push((
        RowKind::Normalization,
        LpRow::new(
            (0..num_blocks * bs).map(|j| (j, Rational::one())).collect(),
            Sense::Eq,
            Rational::one(),
        ),
    ));

    let mut seen = HashSet::new();
    rows.retain(|(_, row)| {
        !(row.coeffs.is_empty() && row.rhs.is_zero()) && seen.insert(row.clone())
    });
    let (kinds, rows): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(CertificationLp {
        lp: LpProblem::new(num_blocks * bs, objective, rows),
        kinds,
        block_size: bs,
        num_blocks,
    })
}

/// Solves an assembled activation LP along the chosen route.
pub fn solve_lp(clp: &CertificationLp, route: SolverRoute) -> Result<LpSolution, CertifyError> {
    let sol = match route {
        SolverRoute::Monolithic => ratlp::solve(&clp.lp)?,
        SolverRoute::Decomposed => decomposed::solve(clp)?,
    };
    ratlp::check_solution_detailed(&clp.lp, &sol)
        .map_err(|e| CertifyError::Solver(format!("self-check failed: {e}")))?;
    Ok(sol)
}

/// Values of the objective and of each family row at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationValues {
    pub objective: Rational,
    pub family: Vec<Rational>,
}

/// Evaluates the linearized objective and family rows at `Q_ABK`, reading the
/// min-branch from each selector component.
pub fn selector_values(
    problem: &CertificationProblem,
    q_abk: &JointDist,
) -> Result<ActivationValues, CertifyError> {
    let x = problem.q_to_vector(q_abk)?;
    let images = basis_images(problem)?;
    let (d, len, bs) = (problem.d(), problem.selector_len(), problem.block_size());
    let four = rational::int(4);
    let two_l0 = rational::int(2) * problem.lambda0();
    let mut objective = Rational::zero();
    let mut family = vec![Rational::zero(); problem.m()];
    for (j, v) in x.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let sel = SelectorVector::new(j / bs, len);
        let img = &images[j % bs];
        for e in 0..d {
            objective += v * (&four * pick(&img.lift_diag[e], sel.bit(e)) - &two_l0 * &img.lift_mass[e]);
        }
        for (i, slot) in family.iter_mut().enumerate() {
            *slot += v * (&four * pick(&img.fil_diag[i], sel.bit(d + i)) - &two_l0 * &img.fil_mass[i]);
        }
    }
    Ok(ActivationValues { objective, family })
}

/// The same quantities on a distribution with an explicit Eve axis, using
/// true minima: `2·advantage(lift(q, G))` and `2·advantage(M^i N^i q)`.
pub fn min_values(
    problem: &CertificationProblem,
    q: &JointDist,
) -> Result<ActivationValues, CertifyError> {
    let l0 = problem.lambda0();
    let two = rational::int(2);
    let lifted = lifting::lift(q, problem.g())?;
    let objective = &two * measures::lambda_advantage(&lifted, l0)?;
    let family = problem
        .family()
        .pairs
        .iter()
        .map(|pair| {
            let f = apply_local(&pair.map_a, q, "A")?;
            let f = apply_local(&pair.map_b, &f, "B")?;
            Ok(&two * measures::lambda_advantage(&f, l0)?)
        })
        .collect::<Result<_, CertifyError>>()?;
    Ok(ActivationValues { objective, family })
}

/// Collapses an explicit Eve axis of `q` onto selector vectors.
///
/// `q` has composite axes `A`, `B` and one further axis `E'`. Each `e'` is
/// mapped to `k(e') = (r_1, …, r_d, s_1, …, s_M)`, where `r_e = 1` iff
/// `L(0,0,e',e) > L(1,1,e',e)` for the lifted slice and `s_i = 1` iff the
/// same holds for the `i`-th filtered slice (ties select 0). Slices sharing
/// a selector vector are summed.
pub fn group_by_selector(
    q: &JointDist,
    g: &JointDist,
    family: &MapFamily,
) -> Result<JointDist, CertifyError> {
    let problem = CertificationProblem::new(g, family, &rational::half())?;
    let eve: Vec<usize> = (0..q.axes().len())
        .filter(|&i| q.axes()[i].label != "A" && q.axes()[i].label != "B")
        .collect();
    if eve.len() != 1 {
        return Err(CertifyError::Invalid(format!(
            "q must have axes A, B and one Eve axis, found {:?}",
            q.labels()
        )));
    }
    let q = q.permute(&["A", "B", &q.axes()[eve[0]].label.clone()])?;
    let expect = [2 * problem.a_copy(), 2 * problem.b_copy()];
    if q.shape()[..2] != expect {
        return Err(CertifyError::Invalid(format!(
            "q's A/B alphabets {:?} do not match G's copies {:?}",
            &q.shape()[..2],
            expect
        )));
    }
    let slice_axes = vec![q.axes()[0].clone(), q.axes()[1].clone(), Axis::new("K", 1)];
    let mut slices: BTreeMap<usize, Vec<(Vec<usize>, Rational)>> = BTreeMap::new();
    for (idx, v) in q.entries() {
        slices
            .entry(idx[2])
            .or_default()
            .push((vec![idx[0], idx[1], 0], v.clone()));
    }
    let (d, len) = (problem.d(), problem.selector_len());
    let mut grouped: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for entries in slices.into_values() {
        let slice = JointDist::new(slice_axes.clone(), entries)?;
        let mut bits = Vec::with_capacity(len);
        let lifted = lifting::lift(&slice, problem.g())?;
        for e in 0..d {
            bits.push(u8::from(lifted.get(&[0, 0, 0, e]) > lifted.get(&[1, 1, 0, e])));
        }
        for pair in &family.pairs {
            let f = apply_local(&pair.map_a, &slice, "A")?;
            let f = apply_local(&pair.map_b, &f, "B")?;
            bits.push(u8::from(f.get(&[0, 0, 0]) > f.get(&[1, 1, 0])));
        }
        let k = SelectorVector::from_bits(&bits).index();
        for (idx, v) in slice.entries() {
            *grouped
                .entry(vec![idx[0], idx[1], k])
                .or_insert_with(Rational::zero) += v;
        }
    }
    Ok(JointDist::new(problem.q_axes(), grouped)?)
}

/// `Q(a', x_A, b', x_B) = ¼·δ(a', x_A)·δ(b', x_B)` for bits `a', b', x_A, x_B`,
/// with a trivial Eve axis `E'`. Alice's and Bob's halves are independent,
/// so no family member can filter it above ½, while `lift(Q, G)` equals
/// `¼·G` on the bit-valued part of G's alphabets.
pub fn canonical_witness_q(g: &JointDist) -> Result<JointDist, CertifyError> {
    let (ca, cb) = (g.axis("A")?.size, g.axis("B")?.size);
    if ca < 2 || cb < 2 {
        return Err(CertifyError::Invalid(format!(
            "canonical witness needs |A|, |B| ≥ 2, found {ca} and {cb}"
        )));
    }
    let quarter = rational::frac(1, 4);
    let mut entries = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            entries.push((vec![a * ca + a, b * cb + b, 0], quarter.clone()));
        }
    }
    Ok(JointDist::new(
        vec![
            Axis::composite("A", vec![2, ca]),
            Axis::composite("B", vec![2, cb]),
            Axis::new("E'", 1),
        ],
        entries,
    )?)
}

/// The uniform distribution over every `(a, b)` composite pair with a trivial
/// Eve axis. Its lift is independent of the bits, so every diagonal ties.
pub fn uniform_q(g: &JointDist) -> Result<JointDist, CertifyError> {
    let (ca, cb) = (g.axis("A")?.size, g.axis("B")?.size);
    let n = 4 * ca * cb;
    Ok(JointDist::from_dense(
        vec![
            Axis::composite("A", vec![2, ca]),
            Axis::composite("B", vec![2, cb]),
            Axis::new("E'", 1),
        ],
        vec![rational::frac(1, n as i64); n],
    )?)
}

/// Solves the activation LP for `(g, family, λ0)` and packages the result.
pub fn certify(
    g: &JointDist,
    family: &MapFamily,
    lambda0: &Rational,
    opts: &CertifyOptions,
) -> Result<Certificate, CertifyError> {
    let problem = CertificationProblem::new(g, family, lambda0)?;
    let clp = build_lp(&problem, opts)?;
    let sol = solve_lp(&clp, opts.route)?;
    if sol.status != ratlp::LpStatus::Optimal {
        return Err(CertifyError::Solver(format!(
            "activation LP reported {} (it is always feasible and bounded)",
            sol.status
        )));
    }
    Certificate::from_solution(&problem, &sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpotcheckOptions {
    /// Vertices sampled by optimizing random objectives.
    pub vertices: usize,
    /// Random convex combinations of the sampled vertices.
    pub mixtures: usize,
    pub seed: u64,
    pub certify: CertifyOptions,
}

impl Default for SpotcheckOptions {
    fn default() -> Self {
        SpotcheckOptions {
            vertices: 8,
            mixtures: 8,
            seed: 0,
            certify: CertifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpotcheckReport {
    pub samples: usize,
    /// Largest λ-advantage of `lift(Q_ABK, G)` over the samples.
    pub max_advantage: Rational,
    /// Samples with positive advantage; any entry indicates a soundness bug.
    pub violations: Vec<JointDist>,
}

/// Samples feasible points of the activation LP and confirms that none of
/// them lifts to a distribution with λ above `λ0`. Meaningful after
/// [`certify`] returned [`Verdict::Undistillable`].
pub fn feasible_set_spotcheck(
    g: &JointDist,
    family: &MapFamily,
    lambda0: &Rational,
    opts: &SpotcheckOptions,
) -> Result<SpotcheckReport, CertifyError> {
    let problem = CertificationProblem::new(g, family, lambda0)?;
    let clp = build_lp(&problem, &opts.certify)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for _ in 0..opts.vertices {
        let mut sampled = clp.clone();
        let objective = (0..clp.lp.num_vars)
            .map(|j| (j, rational::int(rng.gen_range(-5..=5))))
            .collect();
        sampled.lp = LpProblem::new(clp.lp.num_vars, objective, clp.lp.rows.clone());
        let sol = solve_lp(&sampled, opts.certify.route)?;
        points.push(sol.primal);
    }
    let vertex_count = points.len();
    for _ in 0..opts.mixtures {
        if vertex_count == 0 {
            break;
        }
        let weights: Vec<i64> = (0..vertex_count).map(|_| rng.gen_range(0..=4)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let mut x = vec![Rational::zero(); clp.lp.num_vars];
        for (w, p) in weights.iter().zip(&points[..vertex_count]) {
            if *w == 0 {
                continue;
            }
            let w = rational::frac(*w, total);
            for (slot, v) in x.iter_mut().zip(p) {
                if !v.is_zero() {
                    *slot += &w * v;
                }
            }
        }
        points.push(x);
    }
    let mut max_advantage: Option<Rational> = None;
    let mut violations = Vec::new();
    for x in &points {
        if let Some(i) = clp.lp.rows.iter().position(|r| !r.is_satisfied(x)) {
            return Err(CertifyError::Solver(format!(
                "sampled point violates {}",
                clp.kinds[i]
            )));
        }
        let q = problem.vector_to_q(x)?;
        let lifted = lifting::lift(&q, problem.g())?;
        let adv = measures::lambda_advantage(&lifted, lambda0)?;
        if adv.is_positive() {
            violations.push(q);
        }
        if max_advantage.as_ref().is_none_or(|m| adv > *m) {
            max_advantage = Some(adv);
        }
    }
    Ok(SpotcheckReport {
        samples: points.len(),
        max_advantage: max_advantage.unwrap_or_else(Rational::zero),
        violations,
    })
}

#[cfg(test)]
mod tests;
