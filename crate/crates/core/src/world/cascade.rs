//! The diffusion as a deterministic function of a possible world.

use super::world::{PossibleWorld, WorldSource};
use crate::error::Result;
use crate::graph::{EdgeId, Graph, NodeId};
use crate::model::simulate::check_seeds;
use crate::model::{CascadeOutcome, GapSet, Item, ItemState, NodeState};

pub(crate) struct Cascade<'g> {
    g: &'g Graph,
    q: GapSet,
    ordered: bool,
    pub(crate) state: Vec<NodeState>,
    pub(crate) time: Vec<[Option<u32>; 2]>,
    t: u32,
    steps: u32,
    next: Vec<(NodeId, Vec<Item>)>,
}

impl<'g> Cascade<'g> {
    pub(crate) fn new(g: &'g Graph, q: GapSet, force_tie_break: bool) -> Self {
        Cascade {
            g,
            q,
            ordered: force_tie_break || !q.is_mutual_complement(),
            state: vec![NodeState::default(); g.n()],
            time: vec![[None; 2]; g.n()],
            t: 0,
            steps: 0,
            next: Vec::new(),
        }
    }

    fn adopt(&mut self, v: NodeId, item: Item) {
        self.state[v as usize].set(item, ItemState::Adopted);
        self.time[v as usize][item.index()] = Some(self.t);
        self.steps = self.t;
        match self.next.last_mut() {
            Some((u, items)) if *u == v => items.push(item),
            _ => self.next.push((v, vec![item])),
        }
    }

    fn inform<W: WorldSource>(&mut self, v: NodeId, item: Item, w: &mut W) {
        let st = self.state[v as usize];
        if st.get(item) != ItemState::Idle {
            return;
        }
        let other = item.other();
        if st.get(other) == ItemState::Adopted {
            if w.alpha_at_most(v, item, self.q.q(item, true)) {
                self.adopt(v, item);
            } else {
                self.state[v as usize].set(item, ItemState::Rejected);
            }
        } else if w.alpha_at_most(v, item, self.q.q(item, false)) {
            self.adopt(v, item);
            if st.get(other) == ItemState::Suspended {
                if w.alpha_at_most(v, other, self.q.q(other, true)) {
                    self.adopt(v, other);
                } else {
                    self.state[v as usize].set(other, ItemState::Rejected);
                }
            }
        } else {
            self.state[v as usize].set(item, ItemState::Suspended);
        }
    }

    pub(crate) fn run<W: WorldSource>(&mut self, seeds_a: &[NodeId], seeds_b: &[NodeId], w: &mut W) {
        let mut seeds: Vec<(NodeId, bool, bool)> = Vec::new();
        for &s in seeds_a.iter().chain(seeds_b) {
            seeds.push((s, seeds_a.contains(&s), seeds_b.contains(&s)));
        }
        seeds.sort_unstable();
        seeds.dedup();
        for (s, a, b) in seeds {
            match (a, b) {
                (true, false) => self.adopt(s, Item::A),
                (false, true) => self.adopt(s, Item::B),
                _ => {
                    let first = w.seed_first(s);
                    self.adopt(s, first);
                    self.adopt(s, first.other());
                }
            }
        }

        let mut edges: Vec<EdgeId> = Vec::new();
        while !self.next.is_empty() {
            let frontier = std::mem::take(&mut self.next);
            self.t += 1;
            let mut inbox: Vec<(NodeId, EdgeId, usize)> = Vec::new();
            for (idx, (u, _)) in frontier.iter().enumerate() {
                for e in self.g.out_edges(*u) {
                    if w.edge_live(self.g, e) {
                        inbox.push((self.g.target(e), e, idx));
                    }
                }
            }
            inbox.sort_by_key(|x| x.0);
            for group in inbox.chunk_by(|x, y| x.0 == y.0) {
                let v = group[0].0;
                edges.clear();
                edges.extend(group.iter().map(|x| x.1));
                let mixed = {
                    let mut seen = [false; 2];
                    group.iter().flat_map(|x| frontier[x.2].1.iter()).for_each(|i| seen[i.index()] = true);
                    seen[0] && seen[1]
                };
                if self.ordered && mixed && group.len() > 1 {
                    w.order_informers(self.g, v, &mut edges);
                }
                for &e in &edges {
                    let idx = group.iter().find(|x| x.1 == e).unwrap().2;
                    for k in 0..frontier[idx].1.len() {
                        self.inform(v, frontier[idx].1[k], w);
                    }
                }
            }
        }
    }

    pub(crate) fn outcome(self) -> CascadeOutcome {
        let pick = |k: usize| -> Vec<NodeId> {
            (0..self.g.n()).filter(|&v| self.time[v][k].is_some()).map(|v| v as NodeId).collect()
        };
        CascadeOutcome {
            a_adopted: pick(0),
            b_adopted: pick(1),
            adopted_at: self.time.clone(),
            states: self.state.clone(),
            steps: self.steps,
        }
    }

    pub(crate) fn masks(&self) -> (u64, u64) {
        let mut m = (0u64, 0u64);
        for (v, t) in self.time.iter().enumerate() {
            if t[0].is_some() {
                m.0 |= 1 << v;
            }
            if t[1].is_some() {
                m.1 |= 1 << v;
            }
        }
        m
    }
}

/// Runs the diffusion in a fully sampled world. With `force_tie_break` the informer
/// permutation is honoured even when the GAPs make it irrelevant.
pub fn deterministic_cascade(
    g: &Graph,
    q: &GapSet,
    world: &PossibleWorld,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    force_tie_break: bool,
) -> Result<CascadeOutcome> {
    g.require_weighted()?;
    q.validate()?;
    check_seeds(g, seeds_a, "A")?;
    check_seeds(g, seeds_b, "B")?;
    let mut c = Cascade::new(g, *q, force_tie_break);
    c.run(seeds_a, seeds_b, &mut &*world);
    Ok(c.outcome())
}
