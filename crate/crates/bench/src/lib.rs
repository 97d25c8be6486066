//! Fixed inputs shared by the benchmarks.

use nondistill::rational::frac;
use nondistill::{Axis, JointDist};

/// Alice and Bob share a uniform bit that Eve also holds.
pub fn eve_knows_all() -> JointDist {
    JointDist::new(
        vec![Axis::new("A", 2), Axis::new("B", 2), Axis::new("E", 2)],
        [(vec![0, 0, 0], frac(1, 2)), (vec![1, 1, 1], frac(1, 2))],
    )
    .unwrap()
}

/// A noisy shared bit with a partially informed Eve.
pub fn noisy_bit() -> JointDist {
    let mut entries = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for e in 0..2 {
                let w = if a == b { 3 } else { 1 } + if a == e { 2 } else { 0 };
                entries.push((vec![a, b, e], frac(w, 24)));
            }
        }
    }
    JointDist::new(vec![Axis::new("A", 2), Axis::new("B", 2), Axis::new("E", 2)], entries)
        .unwrap()
}
