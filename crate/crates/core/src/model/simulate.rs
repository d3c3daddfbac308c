//! Forward Monte-Carlo diffusion, flipping coins as the process unfolds.

use rand::Rng;

use super::gaps::{GapSet, Item};
use super::state::{ItemState, NodeState};
use crate::error::{invalid, Result};
use crate::graph::{EdgeId, Graph, NodeId};

#[derive(Clone, Copy, Debug, Default)]
pub struct SimOptions {
    /// Order same-step informers by a random permutation even when the GAPs make the order
    /// irrelevant.
    pub full_tie_break: bool,
}

#[derive(Clone, Debug)]
pub struct CascadeOutcome {
    pub a_adopted: Vec<NodeId>,
    pub b_adopted: Vec<NodeId>,
    /// Step at which each node adopted A and B.
    pub adopted_at: Vec<[Option<u32>; 2]>,
    pub states: Vec<NodeState>,
    /// Last step at which any adoption happened.
    pub steps: u32,
}

impl CascadeOutcome {
    pub fn sigma(&self, item: Item) -> usize {
        match item {
            Item::A => self.a_adopted.len(),
            Item::B => self.b_adopted.len(),
        }
    }
}

/// Observer of the diffusion's decisions, in the order they happen.
pub trait EventSink {
    /// `v` is informed of `item` while still idle on it.
    fn informed(&mut self, _v: NodeId, _item: Item) {}
    fn adopted(&mut self, _v: NodeId, _item: Item) {}
    /// Called after every change of `v`'s joint state.
    fn state(&mut self, _v: NodeId, _s: NodeState) {}
}

impl EventSink for () {}

const UNTESTED: u8 = 0;
const LIVE: u8 = 1;
const BLOCKED: u8 = 2;
const NEVER: u32 = u32::MAX;

pub(crate) fn check_seeds(g: &Graph, seeds: &[NodeId], what: &str) -> Result<()> {
    match seeds.iter().find(|&&s| s as usize >= g.n()) {
        Some(s) => Err(invalid(format!("{what} seed {s} is not a node (n = {})", g.n()))),
        None => Ok(()),
    }
}

/// Reusable diffusion state. All per-run arrays are reset through touched lists, so one
/// run costs time proportional to what it explored.
pub(crate) struct Simulator<'g> {
    g: &'g Graph,
    q: GapSet,
    rho: [f64; 2],
    ordered: bool,
    state: Vec<NodeState>,
    time: Vec<[u32; 2]>,
    edge: Vec<u8>,
    key: Vec<u64>,
    touched_nodes: Vec<NodeId>,
    touched_edges: Vec<EdgeId>,
    frontier: Vec<(NodeId, [Item; 2], u8)>,
    next: Vec<(NodeId, [Item; 2], u8)>,
    inbox: Vec<(NodeId, u32, EdgeId)>,
    seed_mark: Vec<u8>,
    pub(crate) count: [usize; 2],
    pub(crate) steps: u32,
    t: u32,
}

impl<'g> Simulator<'g> {
    pub(crate) fn new(g: &'g Graph, q: GapSet, opts: SimOptions) -> Self {
        Simulator {
            g,
            q,
            rho: [q.reconsider(Item::A), q.reconsider(Item::B)],
            // Under mutual complementarity the informer order cannot change the outcome.
            ordered: opts.full_tie_break || !q.is_mutual_complement(),
            state: vec![NodeState::default(); g.n()],
            time: vec![[NEVER; 2]; g.n()],
            edge: vec![UNTESTED; g.m()],
            key: vec![0; g.m()],
            touched_nodes: Vec::new(),
            touched_edges: Vec::new(),
            frontier: Vec::new(),
            next: Vec::new(),
            inbox: Vec::new(),
            seed_mark: vec![0; g.n()],
            count: [0; 2],
            steps: 0,
            t: 0,
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched_nodes {
            self.state[v as usize] = NodeState::default();
            self.time[v as usize] = [NEVER; 2];
        }
        for &e in &self.touched_edges {
            self.edge[e as usize] = UNTESTED;
            self.key[e as usize] = 0;
        }
        self.touched_nodes.clear();
        self.touched_edges.clear();
        self.frontier.clear();
        self.count = [0; 2];
        self.steps = 0;
        self.t = 0;
    }

    fn touch(&mut self, v: NodeId) {
        if self.state[v as usize] == NodeState::default() {
            self.touched_nodes.push(v);
        }
    }

    fn adopt<S: EventSink>(&mut self, v: NodeId, item: Item, sink: &mut S) {
        self.touch(v);
        self.state[v as usize].set(item, ItemState::Adopted);
        self.time[v as usize][item.index()] = self.t;
        self.count[item.index()] += 1;
        self.steps = self.t;
        match self.next.last_mut() {
            Some(last) if last.0 == v => {
                last.1[last.2 as usize] = item;
                last.2 += 1;
            }
            _ => self.next.push((v, [item, item], 1)),
        }
        sink.adopted(v, item);
    }

    fn set(&mut self, v: NodeId, item: Item, s: ItemState) {
        self.touch(v);
        self.state[v as usize].set(item, s);
    }

    fn inform<R: Rng, S: EventSink>(&mut self, v: NodeId, item: Item, rng: &mut R, sink: &mut S) {
        let st = self.state[v as usize];
        if st.get(item) != ItemState::Idle {
            return;
        }
        sink.informed(v, item);
        let other = item.other();
        if st.get(other) == ItemState::Adopted {
            if rng.gen::<f64>() < self.q.q(item, true) {
                self.adopt(v, item, sink);
            } else {
                self.set(v, item, ItemState::Rejected);
            }
        } else if rng.gen::<f64>() < self.q.q(item, false) {
            self.adopt(v, item, sink);
            if st.get(other) == ItemState::Suspended {
                if rng.gen::<f64>() < self.rho[other.index()] {
                    self.adopt(v, other, sink);
                } else {
                    self.set(v, other, ItemState::Rejected);
                }
            }
        } else {
            self.set(v, item, ItemState::Suspended);
        }
        sink.state(v, self.state[v as usize]);
    }

    pub(crate) fn run<R: Rng, S: EventSink>(&mut self, seeds_a: &[NodeId], seeds_b: &[NodeId], rng: &mut R, sink: &mut S) {
        self.reset();
        let mut seeds: Vec<NodeId> = Vec::with_capacity(seeds_a.len() + seeds_b.len());
        for &s in seeds_a {
            self.seed_mark[s as usize] |= 1;
            seeds.push(s);
        }
        for &s in seeds_b {
            self.seed_mark[s as usize] |= 2;
            seeds.push(s);
        }
        seeds.sort_unstable();
        seeds.dedup();
        self.next.clear();
        for &s in &seeds {
            let mark = std::mem::take(&mut self.seed_mark[s as usize]);
            let order = match mark {
                1 => vec![Item::A],
                2 => vec![Item::B],
                _ if rng.gen::<bool>() => vec![Item::A, Item::B],
                _ => vec![Item::B, Item::A],
            };
            for item in order {
                self.adopt(s, item, sink);
                sink.state(s, self.state[s as usize]);
            }
        }

        while !self.next.is_empty() {
            std::mem::swap(&mut self.frontier, &mut self.next);
            self.next.clear();
            self.t += 1;
            self.inbox.clear();
            for (idx, &(u, _, _)) in self.frontier.iter().enumerate() {
                for e in self.g.out_edges(u) {
                    let live = match self.edge[e as usize] {
                        UNTESTED => {
                            let live = rng.gen::<f64>() < self.g.prob(e);
                            self.edge[e as usize] = if live { LIVE } else { BLOCKED };
                            self.touched_edges.push(e);
                            live
                        }
                        s => s == LIVE,
                    };
                    if live {
                        self.inbox.push((self.g.target(e), idx as u32, e));
                    }
                }
            }
            self.inbox.sort_by_key(|x| x.0);
            let mut inbox = std::mem::take(&mut self.inbox);
            let mut lo = 0;
            while lo < inbox.len() {
                let v = inbox[lo].0;
                let mut hi = lo + 1;
                while hi < inbox.len() && inbox[hi].0 == v {
                    hi += 1;
                }
                let group = &mut inbox[lo..hi];
                if self.ordered && group.len() > 1 && self.mixes_items(group) {
                    for &(_, _, e) in group.iter() {
                        if self.key[e as usize] == 0 {
                            self.key[e as usize] = rng.gen::<u64>() | 1;
                        }
                    }
                    group.sort_by_key(|&(_, _, e)| (self.key[e as usize], e));
                }
                for &(_, idx, _) in group.iter() {
                    let (_, items, len) = self.frontier[idx as usize];
                    for &item in &items[..len as usize] {
                        self.inform(v, item, rng, sink);
                    }
                }
                lo = hi;
            }
            self.inbox = inbox;
        }
    }

    fn mixes_items(&self, group: &[(NodeId, u32, EdgeId)]) -> bool {
        let mut seen = [false; 2];
        for &(_, idx, _) in group {
            let (_, items, len) = self.frontier[idx as usize];
            for &item in &items[..len as usize] {
                seen[item.index()] = true;
            }
        }
        seen[0] && seen[1]
    }

    pub(crate) fn outcome(&self) -> CascadeOutcome {
        let n = self.g.n();
        let mut a_adopted = Vec::new();
        let mut b_adopted = Vec::new();
        let mut adopted_at = vec![[None; 2]; n];
        for v in 0..n {
            let t = self.time[v];
            adopted_at[v] = [(t[0] != NEVER).then_some(t[0]), (t[1] != NEVER).then_some(t[1])];
            if t[0] != NEVER {
                a_adopted.push(v as NodeId);
            }
            if t[1] != NEVER {
                b_adopted.push(v as NodeId);
            }
        }
        CascadeOutcome { a_adopted, b_adopted, adopted_at, states: self.state.clone(), steps: self.steps }
    }

    pub(crate) fn adopted(&self, v: NodeId, item: Item) -> bool {
        self.time[v as usize][item.index()] != NEVER
    }
}

/// Runs one diffusion from the given seed sets.
pub fn simulate<R: Rng>(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    rng: &mut R,
    opts: SimOptions,
) -> Result<CascadeOutcome> {
    simulate_with(g, q, seeds_a, seeds_b, rng, opts, &mut ())
}

/// [`simulate`] reporting every decision to `sink`.
pub fn simulate_with<R: Rng, S: EventSink>(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    rng: &mut R,
    opts: SimOptions,
    sink: &mut S,
) -> Result<CascadeOutcome> {
    g.require_weighted()?;
    q.validate()?;
    check_seeds(g, seeds_a, "A")?;
    check_seeds(g, seeds_b, "B")?;
    let mut sim = Simulator::new(g, *q, opts);
    sim.run(seeds_a, seeds_b, rng, sink);
    Ok(sim.outcome())
}
