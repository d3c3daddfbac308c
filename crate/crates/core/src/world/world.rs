use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{EdgeId, Graph, NodeId};
use crate::model::Item;

/// One fully sampled outcome of all randomness in the model.
#[derive(Clone, Debug)]
pub struct PossibleWorld {
    /// Liveness per edge id.
    pub live: Vec<bool>,
    /// Adoption thresholds `[alpha_A, alpha_B]` per node.
    pub alpha: Vec<[f64; 2]>,
    /// Per edge id: position of its source in the target's informer permutation.
    pub rank: Vec<u32>,
    /// Which item a node seeded with both adopts first.
    pub tau: Vec<Item>,
}

pub fn sample_world<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> PossibleWorld {
    let live = (0..g.m() as EdgeId).map(|e| rng.gen::<f64>() < g.prob(e)).collect();
    let alpha = (0..g.n()).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let mut rank = vec![0u32; g.m()];
    let mut perm: Vec<u32> = Vec::new();
    for v in 0..g.n() as NodeId {
        let ins = g.in_edges(v);
        perm.clear();
        perm.extend(0..ins.len() as u32);
        perm.shuffle(rng);
        for (pos, &e) in ins.iter().enumerate() {
            rank[e as usize] = perm[pos];
        }
    }
    let tau = (0..g.n()).map(|_| if rng.gen::<bool>() { Item::A } else { Item::B }).collect();
    PossibleWorld { live, alpha, rank, tau }
}

/// Access to a world's random variables. The cascade only asks questions it needs, which
/// lets an enumerator branch on exactly those questions.
pub trait WorldSource {
    fn edge_live(&mut self, g: &Graph, e: EdgeId) -> bool;
    fn alpha_at_most(&mut self, v: NodeId, item: Item, threshold: f64) -> bool;
    /// Sorts in-edges of `v` by `v`'s informer permutation.
    fn order_informers(&mut self, g: &Graph, v: NodeId, edges: &mut [EdgeId]);
    fn seed_first(&mut self, v: NodeId) -> Item;
}

impl WorldSource for &PossibleWorld {
    fn edge_live(&mut self, _g: &Graph, e: EdgeId) -> bool {
        self.live[e as usize]
    }

    fn alpha_at_most(&mut self, v: NodeId, item: Item, threshold: f64) -> bool {
        self.alpha[v as usize][item.index()] <= threshold
    }

    fn order_informers(&mut self, _g: &Graph, _v: NodeId, edges: &mut [EdgeId]) {
        edges.sort_by_key(|&e| self.rank[e as usize]);
    }

    fn seed_first(&mut self, v: NodeId) -> Item {
        self.tau[v as usize]
    }
}
