//! Finite families of constraint map pairs `(M^i_A, N^i_B)`.
//!
//! Each map acts on a party's composite `(bit, copy)` alphabet of the
//! activation distribution and outputs a bit. Deterministic maps are encoded
//! by a per-symbol action relative to the symbol's own bit factor:
//! `0` keeps the bit, `1` flips it, `2` discards the symbol. The all-keep
//! string is the strip map, so canonical (lexicographic) order puts the strip
//! pair first.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::probvec::{Axis, DistError, LocalMap, MapWire};
use crate::rational::{self, Rational};

const KEEP: u8 = 0;
const FLIP: u8 = 1;
const DISCARD: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapPair {
    pub map_a: LocalMap,
    pub map_b: LocalMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFamily {
    pub pairs: Vec<MapPair>,
    pub generator: String,
    pub seed: Option<u64>,
}

impl MapFamily {
    pub fn new(pairs: Vec<MapPair>, generator: impl Into<String>) -> Self {
        MapFamily {
            pairs,
            generator: generator.into(),
            seed: None,
        }
    }

    pub fn empty() -> Self {
        MapFamily::new(Vec::new(), "explicit")
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The first `m` pairs.
    pub fn prefix(&self, m: usize) -> MapFamily {
        MapFamily {
            pairs: self.pairs[..m.min(self.pairs.len())].to_vec(),
            generator: self.generator.clone(),
            seed: self.seed,
        }
    }

    /// Indices of pairs that repeat an earlier pair.
    pub fn duplicates(&self) -> Vec<usize> {
        (0..self.pairs.len())
            .filter(|&i| self.pairs[..i].contains(&self.pairs[i]))
            .collect()
    }

    /// Checks that every pair maps `(2·a_copy)`- and `(2·b_copy)`-symbol
    /// alphabets to bits.
    pub fn check_shape(&self, a_copy: usize, b_copy: usize) -> Result<(), DistError> {
        for pair in &self.pairs {
            for (map, copy) in [(&pair.map_a, a_copy), (&pair.map_b, b_copy)] {
                if map.cols() != 2 * copy {
                    return Err(DistError::SizeMismatch {
                        label: map.input.label.clone(),
                        expected: 2 * copy,
                        actual: map.cols(),
                    });
                }
                if map.rows() != 2 {
                    return Err(DistError::SizeMismatch {
                        label: map.output.label.clone(),
                        expected: 2,
                        actual: map.rows(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("family serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DistError> {
        let wire: FamilyWire =
            serde_json::from_str(text).map_err(|e| DistError::Json(e.to_string()))?;
        let pairs = wire
            .pairs
            .into_iter()
            .map(|p| {
                let pair = MapPair {
                    map_a: LocalMap::from_wire(p.map_a)?,
                    map_b: LocalMap::from_wire(p.map_b)?,
                };
                for m in [&pair.map_a, &pair.map_b] {
                    if m.rows() != 2 {
                        return Err(DistError::SizeMismatch {
                            label: m.output.label.clone(),
                            expected: 2,
                            actual: m.rows(),
                        });
                    }
                }
                Ok(pair)
            })
            .collect::<Result<_, DistError>>()?;
        Ok(MapFamily {
            pairs,
            generator: wire.generator,
            seed: wire.seed,
        })
    }

    pub(crate) fn pairs_wire(&self) -> Vec<PairWire> {
        self.pairs
            .iter()
            .map(|p| PairWire {
                map_a: p.map_a.to_wire(),
                map_b: p.map_b.to_wire(),
            })
            .collect()
    }

    fn to_wire(&self) -> FamilyWire {
        FamilyWire {
            pairs: self.pairs_wire(),
            generator: self.generator.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct PairWire {
    pub map_a: MapWire,
    pub map_b: MapWire,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FamilyWire {
    pairs: Vec<PairWire>,
    generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn composite_axes(label: &str, copy: usize) -> (Axis, Axis) {
    (Axis::composite(label, vec![2, copy]), Axis::new(label, 2))
}

/// The deterministic map for a relative action string over `(bit, copy)`.
pub fn relative_action_map(actions: &[u8], copy: usize, label: &str) -> LocalMap {
    let n = 2 * copy;
    assert_eq!(actions.len(), n, "one action per (bit, copy) symbol");
    let mut coeffs = vec![Rational::zero(); 2 * n];
    for (sym, &act) in actions.iter().enumerate() {
        let bit = sym / copy;
        let out = match act {
            KEEP => bit,
            FLIP => 1 - bit,
            DISCARD => continue,
            other => panic!("invalid action digit {other}"),
        };
        coeffs[out * n + sym] = rational::one();
    }
    let (input, output) = composite_axes(label, copy);
    LocalMap::new(input, output, coeffs).expect("0/1 map")
}

fn action_string(mut index: usize, n: usize) -> Vec<u8> {
    let mut digits = vec![0u8; n];
    for d in digits.iter_mut().rev() {
        *d = (index % 3) as u8;
        index /= 3;
    }
    digits
}

/// Measure the bit factor, ignore the copy factor, on both sides.
pub fn strip_pair(a_copy: usize, b_copy: usize) -> MapPair {
    MapPair {
        map_a: relative_action_map(&vec![KEEP; 2 * a_copy], a_copy, "A"),
        map_b: relative_action_map(&vec![KEEP; 2 * b_copy], b_copy, "B"),
    }
}

/// Deterministic filter-map pairs in canonical order, truncated at `cap`.
///
/// Pairs are ordered by Alice's action string, then Bob's; the all-discard
/// (zero) map is excluded on either side. With copy sizes `(ca, cb)` there are
/// `(3^{2ca} − 1)·(3^{2cb} − 1)` pairs in total.
pub fn deterministic_family(a_copy: usize, b_copy: usize, cap: usize) -> MapFamily {
    let na = 2 * a_copy;
    let nb = 2 * b_copy;
    let count_a = 3usize.saturating_pow(na as u32) - 1;
    let count_b = 3usize.saturating_pow(nb as u32) - 1;
    let total = count_a.saturating_mul(count_b);
    let pairs = (0..total.min(cap))
        .map(|k| {
            let (ia, ib) = (k / count_b, k % count_b);
            MapPair {
                map_a: relative_action_map(&action_string(ia, na), a_copy, "A"),
                map_b: relative_action_map(&action_string(ib, nb), b_copy, "B"),
            }
        })
        .collect();
    MapFamily::new(pairs, "deterministic")
}

/// `m` pairs with coefficients drawn uniformly from `{0, 1/D, …, 1}`,
/// reproducible from `seed`.
pub fn random_filter_family(
    a_copy: usize,
    b_copy: usize,
    m: usize,
    seed: u64,
    denom_bound: u32,
) -> MapFamily {
    let denom = denom_bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_map = |copy: usize, label: &str| {
        let coeffs = (0..2 * 2 * copy)
            .map(|_| rational::frac(rng.gen_range(0..=denom) as i64, denom as i64))
            .collect();
        let (input, output) = composite_axes(label, copy);
        LocalMap::new(input, output, coeffs).expect("nonnegative map")
    };
    let pairs = (0..m)
        .map(|_| MapPair {
            map_a: random_map(a_copy, "A"),
            map_b: random_map(b_copy, "B"),
        })
        .collect();
    MapFamily {
        pairs,
        generator: "random".into(),
        seed: Some(seed),
    }
}
