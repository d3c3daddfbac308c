//! Reverse-reachable sets for the two seed selection problems.
//!
//! A generator draws one RR-set for a root in a (lazily sampled) possible world: the set
//! of nodes that, added as seeds, would make the root adopt A. Coverage of these sets is
//! an unbiased estimate of the objective scaled by `1/n`.

mod cim;
mod sim;
mod world;

use serde::{Deserialize, Serialize};

pub use world::{LazyWorld, RrWorld};

use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::model::simulate::check_seeds;
use crate::model::GapSet;
use world::Marks;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RrVariant {
    /// A-seed selection: label B-adopters from the fixed B-seeds, then search backwards.
    #[value(name = "rr-sim")]
    Sim,
    /// A-seed selection: search backwards first and label B-adopters only inside the
    /// explored region.
    #[value(name = "rr-sim+")]
    SimPlus,
    /// B-seed selection against fixed A-seeds.
    #[value(name = "rr-cim")]
    Cim,
}

/// Edges examined, by phase. `ept_f` counts forward labeling, `ept_b1` the exploratory
/// backward search of the two-pass generator, `ept_b2` the backward search that builds
/// the set, and `ept_bs`/`ept_bo` the boost generator's backward work on edges into
/// set members and into other nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RrCounters {
    pub ept_f: u64,
    pub ept_b1: u64,
    pub ept_b2: u64,
    pub ept_bs: u64,
    pub ept_bo: u64,
}

impl RrCounters {
    pub fn add(&mut self, o: &RrCounters) {
        self.ept_f += o.ept_f;
        self.ept_b1 += o.ept_b1;
        self.ept_b2 += o.ept_b2;
        self.ept_bs += o.ept_bs;
        self.ept_bo += o.ept_bo;
    }

    pub fn total(&self) -> u64 {
        self.ept_f + self.ept_b1 + self.ept_b2 + self.ept_bs + self.ept_bo
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrSet {
    pub root: NodeId,
    pub members: Vec<NodeId>,
    pub counters: RrCounters,
}

/// Reusable RR-set generator for one graph, GAP set and fixed seed set.
pub struct RrGenerator<'g> {
    pub(crate) g: &'g Graph,
    pub(crate) q: GapSet,
    pub(crate) variant: RrVariant,
    pub(crate) fixed: Vec<NodeId>,
    pub(crate) is_fixed: Vec<bool>,
    pub(crate) s: Scratch,
}

pub(crate) struct Scratch {
    pub(crate) m1: Marks,
    pub(crate) m2: Marks,
    pub(crate) m3: Marks,
    pub(crate) m4: Marks,
    pub(crate) m5: Marks,
    pub(crate) label: Vec<u8>,
    pub(crate) labeled: Vec<NodeId>,
    pub(crate) queue: std::collections::VecDeque<NodeId>,
    pub(crate) queue2: std::collections::VecDeque<NodeId>,
    pub(crate) list: Vec<NodeId>,
    pub(crate) list2: Vec<NodeId>,
    pub(crate) edges: Vec<(NodeId, NodeId)>,
}

impl<'g> RrGenerator<'g> {
    /// `fixed` are the B-seeds for the A-seed variants and the A-seeds for the boost variant.
    pub fn new(g: &'g Graph, q: &GapSet, variant: RrVariant, fixed: &[NodeId]) -> Result<Self> {
        g.require_weighted()?;
        q.validate()?;
        check_seeds(g, fixed, "fixed")?;
        match variant {
            RrVariant::Sim | RrVariant::SimPlus if !q.is_self_submodular() => {
                return Err(q.regime_error("A-seed RR-sets need qA0 <= qAB and qB0 = qBA"))
            }
            RrVariant::Cim if !q.is_cross_submodular() => {
                return Err(q.regime_error("B-seed RR-sets need qA0 <= qAB, qB0 <= qBA and qBA = 1"))
            }
            _ => {}
        }
        let n = g.n();
        let mut is_fixed = vec![false; n];
        for &s in fixed {
            is_fixed[s as usize] = true;
        }
        let mut fixed = fixed.to_vec();
        fixed.sort_unstable();
        fixed.dedup();
        Ok(RrGenerator {
            g,
            q: *q,
            variant,
            fixed,
            is_fixed,
            s: Scratch {
                m1: Marks::new(n),
                m2: Marks::new(n),
                m3: Marks::new(n),
                m4: Marks::new(n),
                m5: Marks::new(n),
                label: vec![0; n],
                labeled: Vec::new(),
                queue: Default::default(),
                queue2: Default::default(),
                list: Vec::new(),
                list2: Vec::new(),
                edges: Vec::new(),
            },
        })
    }

    pub fn variant(&self) -> RrVariant {
        self.variant
    }

    /// Writes the RR-set of `root` into `out` (cleared first) and returns the work done.
    pub fn generate_into<W: RrWorld>(&mut self, root: NodeId, world: &mut W, out: &mut Vec<NodeId>) -> RrCounters {
        out.clear();
        match self.variant {
            RrVariant::Sim => self.rr_sim(root, world, out),
            RrVariant::SimPlus => self.rr_sim_plus(root, world, out),
            RrVariant::Cim => self.rr_cim(root, world, out),
        }
    }

    pub fn generate<W: RrWorld>(&mut self, root: NodeId, world: &mut W) -> RrSet {
        let mut members = Vec::new();
        let counters = self.generate_into(root, world, &mut members);
        RrSet { root, members, counters }
    }
}
