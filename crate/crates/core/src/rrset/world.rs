use rand::Rng;

use crate::graph::{EdgeId, Graph, NodeId};
use crate::model::Item;
use crate::rng::StreamRng;
use crate::world::PossibleWorld;

/// World access for reverse-reachable set generation.
pub trait RrWorld {
    fn live(&mut self, g: &Graph, e: EdgeId) -> bool;
    fn alpha(&mut self, v: NodeId, item: Item) -> f64;
}

impl RrWorld for &PossibleWorld {
    #[inline]
    fn live(&mut self, _g: &Graph, e: EdgeId) -> bool {
        self.live[e as usize]
    }

    #[inline]
    fn alpha(&mut self, v: NodeId, item: Item) -> f64 {
        self.alpha[v as usize][item.index()]
    }
}

const UNTESTED: u8 = 0;
const LIVE: u8 = 1;
const BLOCKED: u8 = 2;

/// Samples edges and thresholds on first use and remembers them until the next reset.
pub struct LazyWorld {
    rng: StreamRng,
    edge: Vec<u8>,
    alpha: Vec<[f64; 2]>,
    touched_edges: Vec<EdgeId>,
    touched_nodes: Vec<NodeId>,
    /// Number of edge coin flips since the last reset.
    pub flips: u64,
}

impl LazyWorld {
    pub fn new(g: &Graph, rng: StreamRng) -> Self {
        LazyWorld {
            rng,
            edge: vec![UNTESTED; g.m()],
            alpha: vec![[f64::NAN; 2]; g.n()],
            touched_edges: Vec::new(),
            touched_nodes: Vec::new(),
            flips: 0,
        }
    }

    /// Forgets every sampled variable and continues from `rng`.
    pub fn reset(&mut self, rng: StreamRng) {
        for &e in &self.touched_edges {
            self.edge[e as usize] = UNTESTED;
        }
        for &v in &self.touched_nodes {
            self.alpha[v as usize] = [f64::NAN; 2];
        }
        self.touched_edges.clear();
        self.touched_nodes.clear();
        self.flips = 0;
        self.rng = rng;
    }

    pub fn rng(&mut self) -> &mut StreamRng {
        &mut self.rng
    }

    /// Edges whose liveness has been sampled since the last reset.
    pub fn sampled_edges(&self) -> usize {
        self.touched_edges.len()
    }
}

impl RrWorld for LazyWorld {
    #[inline]
    fn live(&mut self, g: &Graph, e: EdgeId) -> bool {
        match self.edge[e as usize] {
            UNTESTED => {
                let live = self.rng.gen::<f64>() < g.prob(e);
                self.edge[e as usize] = if live { LIVE } else { BLOCKED };
                self.touched_edges.push(e);
                self.flips += 1;
                live
            }
            s => s == LIVE,
        }
    }

    #[inline]
    fn alpha(&mut self, v: NodeId, item: Item) -> f64 {
        let slot = &mut self.alpha[v as usize];
        if slot[0].is_nan() && slot[1].is_nan() {
            self.touched_nodes.push(v);
        }
        let a = &mut slot[item.index()];
        if a.is_nan() {
            *a = self.rng.gen::<f64>();
        }
        *a
    }
}

/// A set of marked nodes cleared in O(1).
#[derive(Clone, Debug)]
pub(crate) struct Marks {
    stamp: Vec<u32>,
    cur: u32,
}

impl Marks {
    pub(crate) fn new(n: usize) -> Self {
        Marks { stamp: vec![0; n], cur: 1 }
    }

    pub(crate) fn clear(&mut self) {
        self.cur = self.cur.wrapping_add(1);
        if self.cur == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.cur = 1;
        }
    }

    /// Marks `v`; returns false if it was already marked.
    #[inline]
    pub(crate) fn insert(&mut self, v: NodeId) -> bool {
        let s = &mut self.stamp[v as usize];
        if *s == self.cur {
            false
        } else {
            *s = self.cur;
            true
        }
    }

    #[inline]
    pub(crate) fn contains(&self, v: NodeId) -> bool {
        self.stamp[v as usize] == self.cur
    }
}
