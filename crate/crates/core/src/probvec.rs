//! Unnormalized multipartite distributions and local filtering maps.
//!
//! A [`JointDist`] is a nonnegative rational tensor whose axes are identified
//! by party label (`A`, `B`, `E`, `K`, ...). Entries are stored sparsely; an
//! absent index is a zero entry. Total mass is unconstrained, so filtered
//! (probability-losing) results are ordinary values.
//!
//! Composite alphabets such as Alice's `(bit, copy)` pair live on a single axis
//! with a `factors` annotation. The flat index is row-major over the factors,
//! first factor most significant.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("axis label {0:?} appears more than once")]
    LabelCollision(String),
    #[error("no axis labelled {0:?}")]
    UnknownAxis(String),
    #[error("axis {label:?} has size {actual}, expected {expected}")]
    SizeMismatch {
        label: String,
        expected: usize,
        actual: usize,
    },
    #[error("axis {0:?} has size 0")]
    EmptyAxis(String),
    #[error("factors {factors:?} of axis {label:?} do not multiply to {size}")]
    BadFactors {
        label: String,
        size: usize,
        factors: Vec<usize>,
    },
    #[error("negative entry {value} at index {index:?}")]
    Negative { index: Vec<usize>, value: String },
    #[error("index {index:?} out of range for shape {shape:?}")]
    IndexOutOfRange {
        index: Vec<usize>,
        shape: Vec<usize>,
    },
    #[error("duplicate entry for index {0:?}")]
    DuplicateIndex(Vec<usize>),
    #[error("map coefficient matrix is {rows}x{cols}, but the axes need {out}x{inp}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        out: usize,
        inp: usize,
    },
    #[error("axis sets differ: {0:?} vs {1:?}")]
    AxesDiffer(Vec<String>, Vec<String>),
    #[error("negative scale factor {0}")]
    NegativeScale(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Rational(#[from] rational::ParseRationalError),
}

/// One tensor factor: a party label and its alphabet size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis {
    pub label: String,
    pub size: usize,
    /// Sizes of the sub-alphabets when the axis is a composite, in index order.
    pub factors: Option<Vec<usize>>,
}

impl Axis {
    pub fn new(label: impl Into<String>, size: usize) -> Self {
        Axis {
            label: label.into(),
            size,
            factors: None,
        }
    }

    pub fn composite(label: impl Into<String>, factors: Vec<usize>) -> Self {
        Axis {
            label: label.into(),
            size: factors.iter().product(),
            factors: Some(factors),
        }
    }

    fn validate(&self) -> Result<(), DistError> {
        if self.size == 0 {
            return Err(DistError::EmptyAxis(self.label.clone()));
        }
        if let Some(f) = &self.factors {
            if f.iter().product::<usize>() != self.size || f.contains(&0) {
                return Err(DistError::BadFactors {
                    label: self.label.clone(),
                    size: self.size,
                    factors: f.clone(),
                });
            }
        }
        Ok(())
    }
}

/// A nonnegative rational tensor over labelled finite alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDist {
    axes: Vec<Axis>,
    entries: BTreeMap<Vec<usize>, Rational>,
}

impl JointDist {
    /// Builds a distribution from sparse entries. Zero entries are dropped;
    /// repeated indices, negative values and out-of-range indices are rejected.
    pub fn new(
        axes: Vec<Axis>,
        entries: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self, DistError> {
        check_axes(&axes)?;
        let shape: Vec<usize> = axes.iter().map(|a| a.size).collect();
        let mut map = BTreeMap::new();
        for (index, value) in entries {
            if index.len() != shape.len() || index.iter().zip(&shape).any(|(i, s)| i >= s) {
                return Err(DistError::IndexOutOfRange { index, shape });
            }
            if value.is_negative() {
                return Err(DistError::Negative {
                    index,
                    value: rational::format(&value),
                });
            }
            if map.contains_key(&index) {
                return Err(DistError::DuplicateIndex(index));
            }
            map.insert(index, value);
        }
        map.retain(|_, v| !v.is_zero());
        Ok(JointDist { axes, entries: map })
    }

    /// Builds from a dense row-major value list.
    pub fn from_dense(axes: Vec<Axis>, values: Vec<Rational>) -> Result<Self, DistError> {
        check_axes(&axes)?;
        let shape: Vec<usize> = axes.iter().map(|a| a.size).collect();
        let total: usize = shape.iter().product();
        if values.len() != total {
            return Err(DistError::IndexOutOfRange {
                index: vec![values.len()],
                shape,
            });
        }
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(flat, v)| (unflatten(flat, &shape), v));
        JointDist::new(axes, entries)
    }

    pub fn zero(axes: Vec<Axis>) -> Result<Self, DistError> {
        JointDist::new(axes, std::iter::empty())
    }

    /// The zero-axis distribution holding a single number.
    pub fn scalar(value: Rational) -> Result<Self, DistError> {
        JointDist::new(Vec::new(), [(Vec::new(), value)])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.axes.iter().map(|a| a.label.clone()).collect()
    }

    pub fn axis_position(&self, label: &str) -> Result<usize, DistError> {
        self.axes
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| DistError::UnknownAxis(label.to_string()))
    }

    pub fn axis(&self, label: &str) -> Result<&Axis, DistError> {
        self.axis_position(label).map(|i| &self.axes[i])
    }

    pub fn get(&self, index: &[usize]) -> Rational {
        self.entries.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> Rational {
        self.entries.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    /// Multiplies every entry by a nonnegative constant.
    pub fn scale(&self, c: &Rational) -> Result<Self, DistError> {
        if c.is_negative() {
            return Err(DistError::NegativeScale(rational::format(c)));
        }
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Ok(JointDist {
            axes: self.axes.clone(),
            entries,
        })
    }

    /// Entrywise sum of two distributions over the same axes.
    pub fn add(&self, other: &JointDist) -> Result<Self, DistError> {
        if self.axes != other.axes {
            return Err(DistError::AxesDiffer(self.labels(), other.labels()));
        }
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            *entries.entry(k.clone()).or_insert_with(Rational::zero) += v;
        }
        Ok(JointDist {
            axes: self.axes.clone(),
            entries,
        })
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Self, DistError> {
        let pos = self.axis_position(from)?;
        if from != to && self.axes.iter().any(|a| a.label == to) {
            return Err(DistError::LabelCollision(to.to_string()));
        }
        let mut out = self.clone();
        out.axes[pos].label = to.to_string();
        Ok(out)
    }

    /// Reorders axes to the given label order (which must be a permutation).
    pub fn permute(&self, order: &[&str]) -> Result<Self, DistError> {
        if order.len() != self.axes.len() {
            return Err(DistError::AxesDiffer(
                self.labels(),
                order.iter().map(|s| s.to_string()).collect(),
            ));
        }
        let positions = order
            .iter()
            .map(|l| self.axis_position(l))
            .collect::<Result<Vec<_>, _>>()?;
        let axes: Vec<Axis> = positions.iter().map(|&p| self.axes[p].clone()).collect();
        check_axes(&axes)?;
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (positions.iter().map(|&p| k[p]).collect(), v.clone()))
            .collect();
        Ok(JointDist { axes, entries })
    }

    /// Fuses the listed axes into one composite axis placed where the first
    /// listed axis was. The composite index is row-major in the listed order.
    pub fn merge_axes(&self, labels: &[&str], new_label: &str) -> Result<Self, DistError> {
        let positions = labels
            .iter()
            .map(|l| self.axis_position(l))
            .collect::<Result<Vec<_>, _>>()?;
        let merged: BTreeSet<usize> = positions.iter().copied().collect();
        if merged.len() != positions.len() {
            return Err(DistError::LabelCollision(labels.join(",")));
        }
        let sizes: Vec<usize> = positions.iter().map(|&p| self.axes[p].size).collect();
        let first = positions[0];
        let mut axes = Vec::new();
        let mut layout = Vec::new(); // None = composite slot, Some(p) = kept axis
        for (p, axis) in self.axes.iter().enumerate() {
            if p == first {
                axes.push(Axis::composite(new_label, sizes.clone()));
                layout.push(None);
            } else if !merged.contains(&p) {
                axes.push(axis.clone());
                layout.push(Some(p));
            }
        }
        check_axes(&axes)?;
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                let fused = positions
                    .iter()
                    .zip(&sizes)
                    .fold(0usize, |acc, (&p, &s)| acc * s + k[p]);
                let idx = layout
                    .iter()
                    .map(|slot| match slot {
                        None => fused,
                        Some(p) => k[*p],
                    })
                    .collect();
                (idx, v.clone())
            })
            .collect();
        Ok(JointDist { axes, entries })
    }

    pub fn split_axis(&self, label: &str, parts: &[(&str, usize)]) -> Result<Self, DistError> {
        let pos = self.axis_position(label)?;
        let size: usize = parts.iter().map(|p| p.1).product();
        if size != self.axes[pos].size {
            return Err(DistError::SizeMismatch {
                label: label.to_string(),
                expected: size,
                actual: self.axes[pos].size,
            });
        }
        let mut axes = self.axes[..pos].to_vec();
        axes.extend(parts.iter().map(|(l, s)| Axis::new(*l, *s)));
        axes.extend_from_slice(&self.axes[pos + 1..]);
        check_axes(&axes)?;
        let sizes: Vec<usize> = parts.iter().map(|p| p.1).collect();
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                let mut idx = k[..pos].to_vec();
                idx.extend(unflatten(k[pos], &sizes));
                idx.extend_from_slice(&k[pos + 1..]);
                (idx, v.clone())
            })
            .collect();
        Ok(JointDist { axes, entries })
    }

    /// Sums out every axis not in `keep`. Axis order is preserved.
    pub fn marginal(&self, keep: &[&str]) -> Result<Self, DistError> {
        for l in keep {
            self.axis_position(l)?;
        }
        let kept: Vec<usize> = (0..self.axes.len())
            .filter(|&p| keep.contains(&self.axes[p].label.as_str()))
            .collect();
        let axes = kept.iter().map(|&p| self.axes[p].clone()).collect();
        let mut entries: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (k, v) in &self.entries {
            let idx: Vec<usize> = kept.iter().map(|&p| k[p]).collect();
            *entries.entry(idx).or_insert_with(Rational::zero) += v;
        }
        Ok(JointDist { axes, entries })
    }

    /// Row-major dense values (mostly useful for small tensors and tests).
    pub fn to_dense(&self) -> Vec<Rational> {
        let shape = self.shape();
        let total: usize = shape.iter().product();
        let mut out = vec![Rational::zero(); total];
        for (k, v) in &self.entries {
            out[flatten(k, &shape)] = v.clone();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("distribution serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("distribution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DistError> {
        let wire: DistWire =
            serde_json::from_str(text).map_err(|e| DistError::Json(e.to_string()))?;
        JointDist::from_wire(wire)
    }

    pub(crate) fn to_wire(&self) -> DistWire {
        DistWire {
            axes: self.axes.iter().map(AxisWire::from).collect(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryWire {
                    index: k.clone(),
                    p: rational::format(v),
                })
                .collect(),
        }
    }

    pub(crate) fn from_wire(wire: DistWire) -> Result<Self, DistError> {
        let axes = wire.axes.into_iter().map(Axis::from).collect();
        let entries = wire
            .entries
            .into_iter()
            .map(|e| Ok((e.index, rational::parse(&e.p)?)))
            .collect::<Result<Vec<_>, DistError>>()?;
        JointDist::new(axes, entries)
    }
}

/// Outer product; the result carries `p.axes ++ q.axes`.
pub fn tensor(p: &JointDist, q: &JointDist) -> Result<JointDist, DistError> {
    let mut axes = p.axes.clone();
    axes.extend(q.axes.iter().cloned());
    check_axes(&axes)?;
    let mut entries = BTreeMap::new();
    for (i, a) in &p.entries {
        for (j, b) in &q.entries {
            let mut idx = i.clone();
            idx.extend_from_slice(j);
            entries.insert(idx, a * b);
        }
    }
    Ok(JointDist { axes, entries })
}

/// Tensor product in which each party holds both systems: `p` and `q` must
/// carry the same labels in the same order, and every axis of the result is
/// the composite `(p-symbol, q-symbol)`.
pub fn party_tensor(p: &JointDist, q: &JointDist) -> Result<JointDist, DistError> {
    if p.labels() != q.labels() {
        return Err(DistError::AxesDiffer(p.labels(), q.labels()));
    }
    let axes: Vec<Axis> = p
        .axes
        .iter()
        .zip(&q.axes)
        .map(|(a, b)| {
            let mut factors = a.factors.clone().unwrap_or_else(|| vec![a.size]);
            factors.extend(b.factors.clone().unwrap_or_else(|| vec![b.size]));
            Axis::composite(a.label.clone(), factors)
        })
        .collect();
    let mut entries = BTreeMap::new();
    for (i, a) in &p.entries {
        for (j, b) in &q.entries {
            let idx = i
                .iter()
                .zip(j)
                .zip(&q.axes)
                .map(|((x, y), ax)| x * ax.size + y)
                .collect();
            entries.insert(idx, a * b);
        }
    }
    Ok(JointDist { axes, entries })
}

/// `p^{⊗n}` with every party holding all `n` copies. `n = 0` yields the
/// all-size-1 distribution of mass 1 over the same labels.
pub fn tensor_power(p: &JointDist, n: usize) -> Result<JointDist, DistError> {
    let mut acc = JointDist::new(
        p.axes.iter().map(|a| Axis::new(a.label.clone(), 1)).collect(),
        [(vec![0; p.axes.len()], Rational::one())],
    )?;
    for k in 0..n {
        acc = if k == 0 { p.clone() } else { party_tensor(&acc, p)? };
    }
    Ok(acc)
}

/// The perfectly correlated uniform bit `S(a,b) = ½·δ_{a,b}` on axes `A`, `B`.
pub fn secret_bit() -> JointDist {
    let h = rational::half();
    JointDist::new(
        vec![Axis::new("A", 2), Axis::new("B", 2)],
        [(vec![0, 0], h.clone()), (vec![1, 1], h)],
    )
    .expect("secret bit is well formed")
}

/// A nonnegative linear map between alphabets; rows index outputs, columns
/// index inputs. Column sums are unconstrained (filtering is allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMap {
    pub input: Axis,
    pub output: Axis,
    coeffs: Vec<Rational>,
}

impl LocalMap {
    pub fn new(input: Axis, output: Axis, coeffs: Vec<Rational>) -> Result<Self, DistError> {
        input.validate()?;
        output.validate()?;
        if coeffs.len() != input.size * output.size {
            return Err(DistError::MatrixShape {
                rows: output.size,
                cols: if output.size == 0 { 0 } else { coeffs.len() / output.size },
                out: output.size,
                inp: input.size,
            });
        }
        if let Some((i, v)) = coeffs.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(DistError::Negative {
                index: vec![i / input.size, i % input.size],
                value: rational::format(v),
            });
        }
        Ok(LocalMap {
            input,
            output,
            coeffs,
        })
    }

    /// Builds from explicit rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, DistError> {
        let out = rows.len();
        let inp = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != inp) {
            return Err(DistError::MatrixShape {
                rows: out,
                cols: bad.len(),
                out,
                inp,
            });
        }
        LocalMap::new(
            Axis::new("in", inp),
            Axis::new("out", out),
            rows.into_iter().flatten().collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let coeffs = (0..n * n)
            .map(|i| if i / n == i % n { Rational::one() } else { Rational::zero() })
            .collect();
        LocalMap::new(Axis::new("in", n), Axis::new("out", n), coeffs).expect("identity")
    }

    pub fn rows(&self) -> usize {
        self.output.size
    }

    pub fn cols(&self) -> usize {
        self.input.size
    }

    pub fn get(&self, out: usize, inp: usize) -> &Rational {
        &self.coeffs[out * self.input.size + inp]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn row(&self, out: usize) -> &[Rational] {
        &self.coeffs[out * self.input.size..(out + 1) * self.input.size]
    }

    pub fn with_axes(mut self, input: Axis, output: Axis) -> Result<Self, DistError> {
        if input.size != self.input.size || output.size != self.output.size {
            return Err(DistError::MatrixShape {
                rows: self.output.size,
                cols: self.input.size,
                out: output.size,
                inp: input.size,
            });
        }
        input.validate()?;
        output.validate()?;
        self.input = input;
        self.output = output;
        Ok(self)
    }

    /// Matrix product `self ∘ inner`.
    pub fn compose(&self, inner: &LocalMap) -> Result<LocalMap, DistError> {
        if inner.output.size != self.input.size {
            return Err(DistError::SizeMismatch {
                label: self.input.label.clone(),
                expected: self.input.size,
                actual: inner.output.size,
            });
        }
        let (n, k, m) = (self.rows(), self.cols(), inner.cols());
        let mut coeffs = vec![Rational::zero(); n * m];
        for y in 0..n {
            for z in 0..k {
                let a = self.get(y, z);
                if a.is_zero() {
                    continue;
                }
                for x in 0..m {
                    let b = inner.get(z, x);
                    if !b.is_zero() {
                        coeffs[y * m + x] += a * b;
                    }
                }
            }
        }
        LocalMap::new(inner.input.clone(), self.output.clone(), coeffs)
    }

    /// Kronecker product: acts on `(x_self, x_other)` row-major pairs.
    pub fn kron(&self, other: &LocalMap) -> LocalMap {
        let (r1, c1, r2, c2) = (self.rows(), self.cols(), other.rows(), other.cols());
        let mut coeffs = vec![Rational::zero(); r1 * r2 * c1 * c2];
        for y1 in 0..r1 {
            for x1 in 0..c1 {
                let a = self.get(y1, x1);
                if a.is_zero() {
                    continue;
                }
                for y2 in 0..r2 {
                    for x2 in 0..c2 {
                        coeffs[(y1 * r2 + y2) * (c1 * c2) + x1 * c2 + x2] = a * other.get(y2, x2);
                    }
                }
            }
        }
        let factors = |a: &Axis, b: &Axis| {
            let mut f = a.factors.clone().unwrap_or_else(|| vec![a.size]);
            f.extend(b.factors.clone().unwrap_or_else(|| vec![b.size]));
            f
        };
        LocalMap {
            input: Axis::composite(self.input.label.clone(), factors(&self.input, &other.input)),
            output: Axis::composite(
                self.output.label.clone(),
                factors(&self.output, &other.output),
            ),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_wire(&self) -> MapWire {
        MapWire {
            input: AxisWire::from(&self.input),
            output: AxisWire::from(&self.output),
            coeffs: (0..self.rows())
                .map(|y| self.row(y).iter().map(rational::format).collect())
                .collect(),
        }
    }

    pub fn from_wire(wire: MapWire) -> Result<Self, DistError> {
        let input = Axis::from(wire.input);
        let output = Axis::from(wire.output);
        if wire.coeffs.len() != output.size || wire.coeffs.iter().any(|r| r.len() != input.size) {
            return Err(DistError::MatrixShape {
                rows: wire.coeffs.len(),
                cols: wire.coeffs.first().map_or(0, |r| r.len()),
                out: output.size,
                inp: input.size,
            });
        }
        let coeffs = wire
            .coeffs
            .iter()
            .flatten()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        LocalMap::new(input, output, coeffs)
    }
}

/// Contracts the named axis of `p` with `m`:
/// `out(…, y, …) = Σ_x m(y, x) · p(…, x, …)`.
///
/// The axis keeps its party label and takes its alphabet (size and factors)
/// from `m.output`.
pub fn apply_local(m: &LocalMap, p: &JointDist, label: &str) -> Result<JointDist, DistError> {
    let pos = p.axis_position(label)?;
    if p.axes[pos].size != m.input.size {
        return Err(DistError::SizeMismatch {
            label: label.to_string(),
            expected: m.input.size,
            actual: p.axes[pos].size,
        });
    }
    let mut axes = p.axes.clone();
    axes[pos] = Axis {
        label: label.to_string(),
        size: m.output.size,
        factors: m.output.factors.clone(),
    };
    // Column-wise nonzeros of m, so each input symbol scatters only where needed.
    let columns: Vec<Vec<(usize, &Rational)>> = (0..m.input.size)
        .map(|x| {
            (0..m.output.size)
                .map(|y| (y, m.get(y, x)))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    let mut entries: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (k, v) in &p.entries {
        for (y, c) in &columns[k[pos]] {
            let mut idx = k.clone();
            idx[pos] = *y;
            *entries.entry(idx).or_insert_with(Rational::zero) += v * *c;
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(JointDist { axes, entries })
}

fn check_axes(axes: &[Axis]) -> Result<(), DistError> {
    let mut seen = BTreeSet::new();
    for a in axes {
        a.validate()?;
        if !seen.insert(a.label.as_str()) {
            return Err(DistError::LabelCollision(a.label.clone()));
        }
    }
    Ok(())
}

pub(crate) fn flatten(index: &[usize], shape: &[usize]) -> usize {
    index.iter().zip(shape).fold(0, |acc, (i, s)| acc * s + i)
}

pub(crate) fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for (slot, s) in idx.iter_mut().zip(shape).rev() {
        *slot = flat % s;
        flat /= s;
    }
    idx
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisWire {
    pub party: String,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
}

impl From<&Axis> for AxisWire {
    fn from(a: &Axis) -> Self {
        AxisWire {
            party: a.label.clone(),
            size: a.size,
            factors: a.factors.clone(),
        }
    }
}

impl From<AxisWire> for Axis {
    fn from(w: AxisWire) -> Self {
        Axis {
            label: w.party,
            size: w.size,
            factors: w.factors,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryWire {
    pub index: Vec<usize>,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistWire {
    pub axes: Vec<AxisWire>,
    pub entries: Vec<EntryWire>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapWire {
    pub input: AxisWire,
    pub output: AxisWire,
    pub coeffs: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn uniform_bit(label: &str) -> JointDist {
        JointDist::from_dense(vec![Axis::new(label, 2)], vec![frac(1, 2), frac(1, 2)]).unwrap()
    }

    #[test]
    fn tensor_with_unit_adds_trivial_axis() {
        let unit = JointDist::new(vec![Axis::new("U", 1)], [(vec![0], int(1))]).unwrap();
        let q = uniform_bit("A");
        let t = tensor(&unit, &q).unwrap();
        assert_eq!(t.shape(), vec![1, 2]);
        assert_eq!(t.marginal(&["A"]).unwrap(), q);
    }

    #[test]
    fn tensor_of_uniform_bits_is_uniform() {
        let t = tensor(&uniform_bit("A"), &uniform_bit("B")).unwrap();
        assert_eq!(t.to_dense(), vec![frac(1, 4); 4]);
    }

    #[test]
    fn secret_bit_squared() {
        let s = secret_bit();
        let s2 = tensor(&s, &s.relabel("A", "A2").unwrap().relabel("B", "B2").unwrap()).unwrap();
        let support: Vec<_> = s2.entries().map(|(k, v)| (k.clone(), v.clone())).collect();
        assert_eq!(
            support,
            vec![
                (vec![0, 0, 0, 0], frac(1, 4)),
                (vec![0, 0, 1, 1], frac(1, 4)),
                (vec![1, 1, 0, 0], frac(1, 4)),
                (vec![1, 1, 1, 1], frac(1, 4)),
            ]
        );
    }

    #[test]
    fn tensor_rejects_label_collision() {
        let s = secret_bit();
        assert_eq!(tensor(&s, &s), Err(DistError::LabelCollision("A".into())));
    }

    #[test]
    fn apply_identity_zero_and_flip() {
        let s = secret_bit();
        assert_eq!(apply_local(&LocalMap::identity(2), &s, "A").unwrap(), s);
        let zero = LocalMap::from_rows(vec![vec![int(0), int(0)], vec![int(0), int(0)]]).unwrap();
        let z = apply_local(&zero, &s, "B").unwrap();
        assert!(z.total_mass().is_zero());
        let flip = LocalMap::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let anti = apply_local(&flip, &s, "A").unwrap();
        assert_eq!(anti.get(&[0, 1]), frac(1, 2));
        assert_eq!(anti.get(&[1, 0]), frac(1, 2));
        assert_eq!(anti.get(&[0, 0]), int(0));
    }

    #[test]
    fn apply_rejects_size_mismatch() {
        let err = apply_local(&LocalMap::identity(3), &secret_bit(), "A").unwrap_err();
        assert!(matches!(err, DistError::SizeMismatch { .. }));
    }

    #[test]
    fn mass_and_marginals() {
        let s = secret_bit();
        assert_eq!(s.total_mass(), int(1));
        assert_eq!(s.scale(&int(3)).unwrap().total_mass(), int(3));
        assert_eq!(JointDist::zero(vec![Axis::new("A", 2)]).unwrap().total_mass(), int(0));
        assert_eq!(s.marginal(&["A", "B"]).unwrap(), s);
        assert_eq!(s.marginal(&[]).unwrap().get(&[]), int(1));
        assert_eq!(s.marginal(&["A"]).unwrap(), uniform_bit("A"));
        assert!(matches!(s.marginal(&["Z"]), Err(DistError::UnknownAxis(_))));
    }

    #[test]
    fn constructor_rejects_bad_entries() {
        let axes = vec![Axis::new("A", 2)];
        assert!(matches!(
            JointDist::new(axes.clone(), [(vec![0], frac(-1, 2))]),
            Err(DistError::Negative { .. })
        ));
        assert!(matches!(
            JointDist::new(axes.clone(), [(vec![2], int(1))]),
            Err(DistError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            JointDist::new(axes, [(vec![1], int(1)), (vec![1], int(1))]),
            Err(DistError::DuplicateIndex(_))
        ));
    }

    #[test]
    fn json_round_trip_and_format() {
        let text = r#"{"axes":[{"party":"A","size":2},{"party":"B","size":2},{"party":"E","size":3}],"entries":[{"index":[0,0,0],"p":"1/6"},{"index":[1,1,2],"p":"2/6"}]}"#;
        let d = JointDist::from_json(text).unwrap();
        assert_eq!(d.get(&[1, 1, 2]), frac(1, 3));
        assert_eq!(
            d.to_json(),
            r#"{"axes":[{"party":"A","size":2},{"party":"B","size":2},{"party":"E","size":3}],"entries":[{"index":[0,0,0],"p":"1/6"},{"index":[1,1,2],"p":"1/3"}]}"#
        );
        let dup = r#"{"axes":[{"party":"A","size":2}],"entries":[{"index":[0],"p":"1/2"},{"index":[0],"p":"1/2"}]}"#;
        assert!(matches!(JointDist::from_json(dup), Err(DistError::DuplicateIndex(_))));
        let neg = r#"{"axes":[{"party":"A","size":2}],"entries":[{"index":[0],"p":"-1/2"}]}"#;
        assert!(matches!(JointDist::from_json(neg), Err(DistError::Negative { .. })));
    }

    #[test]
    fn merge_then_split_is_identity() {
        let s = tensor(&secret_bit(), &uniform_bit("E")).unwrap();
        let m = s.merge_axes(&["A", "E"], "AE").unwrap();
        assert_eq!(m.labels(), vec!["AE", "B"]);
        assert_eq!(m.axis("AE").unwrap().factors, Some(vec![2, 2]));
        let back = m
            .split_axis("AE", &[("A", 2), ("E", 2)])
            .unwrap()
            .permute(&["A", "B", "E"])
            .unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn tensor_power_mass_is_multiplicative() {
        let p = tensor(&secret_bit(), &uniform_bit("E")).unwrap().scale(&frac(2, 3)).unwrap();
        let p2 = tensor_power(&p, 2).unwrap();
        assert_eq!(p2.shape(), vec![4, 4, 4]);
        assert_eq!(p2.total_mass(), frac(4, 9));
        assert_eq!(tensor_power(&p, 1).unwrap(), p);
        assert_eq!(tensor_power(&p, 0).unwrap().total_mass(), int(1));
    }

    #[test]
    fn map_compose_and_kron() {
        let flip = LocalMap::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(flip.compose(&flip).unwrap().coeffs(), LocalMap::identity(2).coeffs());
        let k = flip.kron(&LocalMap::identity(2));
        assert_eq!(k.rows(), 4);
        assert_eq!(*k.get(0, 2), int(1));
        assert_eq!(*k.get(3, 1), int(1));
        assert_eq!(*k.get(0, 0), int(0));
    }
}
