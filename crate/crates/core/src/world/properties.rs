//! Exact checks of monotonicity and submodularity of spread functions on tiny graphs.

use rayon::prelude::*;
use serde::Serialize;

use super::exact::{exact_spread, ExactOptions};
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::model::{GapSet, Item};

/// Exact values of a spread over every subset of a small candidate list.
#[derive(Clone, Debug)]
pub struct ObjectiveTable {
    pub candidates: Vec<NodeId>,
    /// Indexed by bitmask over `candidates`.
    pub values: Vec<f64>,
}

impl ObjectiveTable {
    pub fn value(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    pub fn set_of(&self, mask: usize) -> Vec<NodeId> {
        (0..self.candidates.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.candidates[i]).collect()
    }
}

/// Tabulates the exact spread of `measured` while the seed set of `varied` ranges over all
/// subsets of `candidates` and the other item's seeds stay at `fixed`.
pub fn objective_table(
    g: &Graph,
    q: &GapSet,
    varied: Item,
    measured: Item,
    fixed: &[NodeId],
    candidates: &[NodeId],
    opts: &ExactOptions,
) -> Result<ObjectiveTable> {
    if candidates.len() > 10 {
        return Err(invalid("at most 10 candidates"));
    }
    let masks: Vec<usize> = (0..1usize << candidates.len()).collect();
    let values = masks
        .par_iter()
        .map(|&mask| {
            let s: Vec<NodeId> =
                (0..candidates.len()).filter(|i| mask >> i & 1 == 1).map(|i| candidates[i]).collect();
            let r = match varied {
                Item::A => exact_spread(g, q, &s, fixed, opts)?,
                Item::B => exact_spread(g, q, fixed, &s, opts)?,
            };
            Ok(match measured {
                Item::A => r.sigma_a,
                Item::B => r.sigma_b,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ObjectiveTable { candidates: candidates.to_vec(), values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    MonotoneIncreasing,
    MonotoneDecreasing,
    Submodular,
}

/// A witness that a property fails. For monotonicity `larger == base`; `gains` holds the
/// marginal gain of `added` at `base` and at `larger`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub base: Vec<NodeId>,
    pub larger: Vec<NodeId>,
    pub added: NodeId,
    pub gains: (f64, f64),
}

/// Finds a violation of `property` larger than `tol`, checking single-element steps only:
/// monotonicity on every `S -> S + x`, submodularity on every `S, S + y, x` (which implies the
/// inequality for every `S ⊆ T`).
pub fn find_violation(table: &ObjectiveTable, property: Property, tol: f64) -> Option<Violation> {
    let c = table.candidates.len();
    let f = &table.values;
    for s in 0..1usize << c {
        for x in (0..c).filter(|&x| s >> x & 1 == 0) {
            let gain = f[s | 1 << x] - f[s];
            let bad = match property {
                Property::MonotoneIncreasing => gain < -tol,
                Property::MonotoneDecreasing => gain > tol,
                Property::Submodular => false,
            };
            if bad {
                return Some(Violation {
                    base: table.set_of(s),
                    larger: table.set_of(s),
                    added: table.candidates[x],
                    gains: (gain, gain),
                });
            }
            if property != Property::Submodular {
                continue;
            }
            for y in (0..c).filter(|&y| y != x && s >> y & 1 == 0) {
                let t = s | 1 << y;
                let later = f[t | 1 << x] - f[t];
                if later > gain + tol {
                    return Some(Violation {
                        base: table.set_of(s),
                        larger: table.set_of(t),
                        added: table.candidates[x],
                        gains: (gain, later),
                    });
                }
            }
        }
    }
    None
}
