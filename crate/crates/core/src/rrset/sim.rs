use super::{RrCounters, RrGenerator, RrWorld};
use crate::graph::NodeId;
use crate::model::Item;

impl RrGenerator<'_> {
    /// Marks in `m1` every node that adopts B. B spreads regardless of A here, so a node
    /// adopts B iff a live path of B-adopters reaches it from a B-seed.
    fn label_b<W: RrWorld>(&mut self, starts: &[NodeId], world: &mut W, c: &mut RrCounters) {
        let (g, q_b0) = (self.g, self.q.q_b0);
        let s = &mut self.s;
        s.m1.clear();
        s.queue.clear();
        for &b in starts {
            if s.m1.insert(b) {
                s.queue.push_back(b);
            }
        }
        while let Some(u) = s.queue.pop_front() {
            for e in g.out_edges(u) {
                c.ept_f += 1;
                let v = g.target(e);
                if s.m1.contains(v) {
                    continue;
                }
                if world.live(g, e) && world.alpha(v, Item::B) <= q_b0 {
                    s.m1.insert(v);
                    s.queue.push_back(v);
                }
            }
        }
    }

    /// Backward search from `root` through nodes that would adopt A once informed. Uses
    /// the B-adopter marks in `m1` and visit marks in `m3`.
    fn backward_a<W: RrWorld>(&mut self, root: NodeId, world: &mut W, out: &mut Vec<NodeId>, c: &mut RrCounters) {
        let (g, q) = (self.g, self.q);
        let s = &mut self.s;
        s.m3.clear();
        s.queue.clear();
        s.m3.insert(root);
        s.queue.push_back(root);
        while let Some(u) = s.queue.pop_front() {
            out.push(u);
            let threshold = if s.m1.contains(u) { q.q_ab } else { q.q_a0 };
            if world.alpha(u, Item::A) > threshold {
                continue;
            }
            for &e in g.in_edges(u) {
                c.ept_b2 += 1;
                let w = g.source(e);
                if !s.m3.contains(w) && world.live(g, e) {
                    s.m3.insert(w);
                    s.queue.push_back(w);
                }
            }
        }
    }

    pub(super) fn rr_sim<W: RrWorld>(&mut self, root: NodeId, world: &mut W, out: &mut Vec<NodeId>) -> RrCounters {
        let mut c = RrCounters::default();
        let fixed = std::mem::take(&mut self.fixed);
        self.label_b(&fixed, world, &mut c);
        self.fixed = fixed;
        self.backward_a(root, world, out, &mut c);
        c
    }

    pub(super) fn rr_sim_plus<W: RrWorld>(&mut self, root: NodeId, world: &mut W, out: &mut Vec<NodeId>) -> RrCounters {
        let mut c = RrCounters::default();
        let (g, q_b0) = (self.g, self.q.q_b0);
        let s = &mut self.s;
        // Everything that can reach the root over live edges; only these nodes matter. Every
        // live edge into the region starts inside it, so the ones seen here are all B needs.
        s.m2.clear();
        s.queue.clear();
        s.list.clear();
        s.edges.clear();
        s.m2.insert(root);
        s.queue.push_back(root);
        while let Some(u) = s.queue.pop_front() {
            if self.is_fixed[u as usize] {
                s.list.push(u);
            }
            for &e in g.in_edges(u) {
                c.ept_b1 += 1;
                let w = g.source(e);
                if world.live(g, e) {
                    s.edges.push((w, u));
                    if s.m2.insert(w) {
                        s.queue.push_back(w);
                    }
                }
            }
        }
        s.m1.clear();
        if !s.list.is_empty() {
            s.edges.sort_unstable();
            for &b in &s.list {
                s.m1.insert(b);
                s.queue.push_back(b);
            }
            while let Some(u) = s.queue.pop_front() {
                let from = s.edges.partition_point(|&(w, _)| w < u);
                for &(w, v) in &s.edges[from..] {
                    if w != u {
                        break;
                    }
                    c.ept_f += 1;
                    if !s.m1.contains(v) && world.alpha(v, Item::B) <= q_b0 {
                        s.m1.insert(v);
                        s.queue.push_back(v);
                    }
                }
            }
        }
        self.backward_a(root, world, out, &mut c);
        c
    }
}
