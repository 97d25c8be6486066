//! The universal map `U`, currying, and the lifted product `U_A U_B (Q ⊗ G)`.
//!
//! Any nonnegative global map `M : H1 ⊗ H2 → H3` factors as `M = U ∘ (M' ⊗ id)`
//! with the local map `M'^{(x3,x2)}_{x1} = M^{x3}_{(x1,x2)}` and the fixed
//! `U^{y3}_{(x3,x2,y2)} = δ(y3,x3)·δ(x2,y2)`. Composite indices are row-major,
//! first factor most significant.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::probvec::{apply_local, Axis, DistError, JointDist, LocalMap};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("map input size {size} does not factor as {size1} x {size2}")]
    Factorization {
        size: usize,
        size1: usize,
        size2: usize,
    },
    #[error("axis {label:?} of Q has size {actual}, expected 2 x {copy} = {}", 2 * copy)]
    CopySize {
        label: String,
        copy: usize,
        actual: usize,
    },
}

/// `U : (H3 ⊗ H2) ⊗ H2 → H3` with input order `(x3, x2, y2)`.
pub fn universal_map(out_size: usize, copy_size: usize) -> LocalMap {
    let inputs = out_size * copy_size * copy_size;
    let mut coeffs = vec![Rational::zero(); out_size * inputs];
    for x3 in 0..out_size {
        for c in 0..copy_size {
            let col = (x3 * copy_size + c) * copy_size + c;
            coeffs[x3 * inputs + col] = Rational::one();
        }
    }
    LocalMap::new(
        Axis::composite("in", vec![out_size, copy_size, copy_size]),
        Axis::new("out", out_size),
        coeffs,
    )
    .expect("delta tensor is a valid map")
}

/// Re-indexes `M : H1 ⊗ H2 → H3` (input order `(x1, x2)`) into
/// `M' : H1 → H3 ⊗ H2` (output order `(x3, x2)`).
pub fn curry(m: &LocalMap, split: (usize, usize)) -> Result<LocalMap, LiftError> {
    let (s1, s2) = split;
    if s1 * s2 != m.cols() {
        return Err(LiftError::Factorization {
            size: m.cols(),
            size1: s1,
            size2: s2,
        });
    }
    let s3 = m.rows();
    let mut coeffs = vec![Rational::zero(); s3 * s2 * s1];
    for x3 in 0..s3 {
        for x1 in 0..s1 {
            for x2 in 0..s2 {
                coeffs[(x3 * s2 + x2) * s1 + x1] = m.get(x3, x1 * s2 + x2).clone();
            }
        }
    }
    Ok(LocalMap::new(
        Axis::new(m.input.label.clone(), s1),
        Axis::composite(m.output.label.clone(), vec![s3, s2]),
        coeffs,
    )?)
}

/// `U_A U_B (q ⊗ g)`.
///
/// `q` carries composite axes `A` = (bit, copy) of size `2·|A_g|` and `B` of
/// size `2·|B_g|`, plus any Eve-side axes; `g` carries `A`, `B` and its own
/// Eve axes. The result has axes `A`, `B` (bits), then `q`'s Eve axes, then
/// `g`'s, with `entry(a,b,e',e) = Σ_{x,y} q((a,x),(b,y),e')·g(x,y,e)`.
pub fn lift(q: &JointDist, g: &JointDist) -> Result<JointDist, LiftError> {
    let (qa, qb, q_eve) = split_parties(q)?;
    let (ga, gb, g_eve) = split_parties(g)?;
    let ca = g.axes()[ga].size;
    let cb = g.axes()[gb].size;
    for (pos, copy) in [(qa, ca), (qb, cb)] {
        let ax = &q.axes()[pos];
        if ax.size != 2 * copy {
            return Err(LiftError::CopySize {
                label: ax.label.clone(),
                copy,
                actual: ax.size,
            });
        }
    }
    let mut axes = vec![Axis::new("A", 2), Axis::new("B", 2)];
    axes.extend(q_eve.iter().map(|&i| q.axes()[i].clone()));
    axes.extend(g_eve.iter().map(|&i| g.axes()[i].clone()));

    // g's entries grouped by (x_A, x_B).
    let mut g_by_copy: BTreeMap<(usize, usize), Vec<(Vec<usize>, &Rational)>> = BTreeMap::new();
    for (idx, v) in g.entries() {
        let e: Vec<usize> = g_eve.iter().map(|&i| idx[i]).collect();
        g_by_copy.entry((idx[ga], idx[gb])).or_default().push((e, v));
    }
    let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (idx, qv) in q.entries() {
        let (a, x) = (idx[qa] / ca, idx[qa] % ca);
        let (b, y) = (idx[qb] / cb, idx[qb] % cb);
        let Some(slice) = g_by_copy.get(&(x, y)) else {
            continue;
        };
        let mut key = vec![a, b];
        key.extend(q_eve.iter().map(|&i| idx[i]));
        for (e, gv) in slice {
            let mut k = key.clone();
            k.extend_from_slice(e);
            *out.entry(k).or_insert_with(Rational::zero) += qv * *gv;
        }
    }
    Ok(JointDist::new(axes, out)?)
}

/// The same product computed literally: tensor, fuse each party's axes into
/// the `(bit, copy, g-symbol)` composite, and contract with [`universal_map`].
pub fn lift_via_universal_map(q: &JointDist, g: &JointDist) -> Result<JointDist, LiftError> {
    let ca = g.axis("A")?.size;
    let cb = g.axis("B")?.size;
    let g2 = g.relabel("A", "A~")?.relabel("B", "B~")?;
    let t = crate::probvec::tensor(q, &g2)?;
    let t = t.merge_axes(&["A", "A~"], "A")?;
    let t = apply_local(&universal_map(2, ca), &t, "A")?;
    let t = t.merge_axes(&["B", "B~"], "B")?;
    let t = apply_local(&universal_map(2, cb), &t, "B")?;
    // Plain bit axes, matching `lift`.
    let mut labels: Vec<String> = t.labels();
    labels.retain(|l| l != "A" && l != "B");
    let mut order = vec!["A", "B"];
    order.extend(labels.iter().map(String::as_str));
    let t = t.permute(&order)?;
    let axes: Vec<Axis> = t
        .axes()
        .iter()
        .map(|a| {
            if a.label == "A" || a.label == "B" {
                Axis::new(a.label.clone(), a.size)
            } else {
                a.clone()
            }
        })
        .collect();
    let entries: Vec<_> = t.entries().map(|(k, v)| (k.clone(), v.clone())).collect();
    Ok(JointDist::new(axes, entries)?)
}

fn split_parties(p: &JointDist) -> Result<(usize, usize, Vec<usize>), DistError> {
    let a = p.axis_position("A")?;
    let b = p.axis_position("B")?;
    let eve = (0..p.axes().len()).filter(|&i| i != a && i != b).collect();
    Ok((a, b, eve))
}
