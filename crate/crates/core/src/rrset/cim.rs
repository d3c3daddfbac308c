use super::{RrCounters, RrGenerator, RrWorld};
use crate::graph::NodeId;
use crate::model::Item;

const NONE: u8 = 0;
const ADOPTED: u8 = 1;
const SUSPENDED: u8 = 2;
const POTENTIAL: u8 = 3;
const REJECTED: u8 = 4;

impl RrGenerator<'_> {
    fn set_label(&mut self, v: NodeId, l: u8) {
        if self.s.label[v as usize] == NONE {
            self.s.labeled.push(v);
        }
        self.s.label[v as usize] = l;
    }

    /// Labels A's reach without any B-seed: adopted, suspended (informed by an adopter but
    /// declined, could still adopt after B), potential (reachable only through suspended
    /// or potential nodes and could adopt after B), rejected (can never adopt A).
    fn label_a<W: RrWorld>(&mut self, world: &mut W, c: &mut RrCounters) {
        let (g, q) = (self.g, self.q);
        for v in std::mem::take(&mut self.s.labeled) {
            self.s.label[v as usize] = NONE;
        }
        self.s.queue.clear();
        for i in 0..self.fixed.len() {
            let a = self.fixed[i];
            self.set_label(a, ADOPTED);
            self.s.queue.push_back(a);
        }
        while let Some(u) = self.s.queue.pop_front() {
            let lu = self.s.label[u as usize];
            for e in g.out_edges(u) {
                c.ept_f += 1;
                let v = g.target(e);
                let lv = self.s.label[v as usize];
                if lv == ADOPTED || lv == REJECTED || (lv != NONE && lu != ADOPTED) || (lv == SUSPENDED && lu == ADOPTED) {
                    continue;
                }
                if !world.live(g, e) {
                    continue;
                }
                let alpha = world.alpha(v, Item::A);
                let new = if alpha > q.q_ab {
                    REJECTED
                } else if lu == ADOPTED {
                    if alpha <= q.q_a0 {
                        ADOPTED
                    } else {
                        SUSPENDED
                    }
                } else {
                    POTENTIAL
                };
                self.set_label(v, new);
                if new != REJECTED {
                    self.s.queue.push_back(v);
                }
            }
        }
    }

    #[inline]
    fn ab_diffusible<W: RrWorld>(&self, v: NodeId, world: &mut W) -> bool {
        let a = world.alpha(v, Item::A);
        a <= self.q.q_a0 || (a <= self.q.q_ab && world.alpha(v, Item::B) <= self.q.q_b0)
    }

    #[inline]
    fn b_diffusible<W: RrWorld>(&self, v: NodeId, world: &mut W) -> bool {
        self.s.label[v as usize] == ADOPTED || world.alpha(v, Item::B) <= self.q.q_b0
    }

    pub(super) fn rr_cim<W: RrWorld>(&mut self, root: NodeId, world: &mut W, out: &mut Vec<NodeId>) -> RrCounters {
        let mut c = RrCounters::default();
        self.label_a(world, &mut c);
        let lroot = self.s.label[root as usize];
        if lroot != SUSPENDED && lroot != POTENTIAL {
            return c;
        }
        let g = self.g;
        // m1: primary visit, m2: shared secondary visit, m3: members,
        // m4/m5: forward and backward marks of a potential blocked node's check.
        self.s.m1.clear();
        self.s.m2.clear();
        self.s.m3.clear();
        self.s.list2.clear();
        let mut examined: Vec<NodeId> = Vec::new();
        let mut primary = std::mem::take(&mut self.s.queue2);
        primary.clear();
        self.s.m1.insert(root);
        primary.push_back(root);

        while let Some(u) = primary.pop_front() {
            let lu = self.s.label[u as usize];
            let abd = self.ab_diffusible(u, world);
            if lu == SUSPENDED {
                if self.s.m3.insert(u) {
                    out.push(u);
                }
                if abd && self.s.m2.insert(u) {
                    // Any node that can deliver B to u along B-adopting nodes helps.
                    self.s.queue.clear();
                    self.s.queue.push_back(u);
                    while let Some(x) = self.s.queue.pop_front() {
                        for &e in g.in_edges(x) {
                            examined.push(x);
                            let w = g.source(e);
                            if self.s.m2.contains(w) || !world.live(g, e) {
                                continue;
                            }
                            self.s.m2.insert(w);
                            if self.s.m3.insert(w) {
                                out.push(w);
                            }
                            if self.b_diffusible(w, world) {
                                self.s.queue.push_back(w);
                            }
                        }
                    }
                }
            } else if lu == POTENTIAL {
                if abd {
                    for &e in g.in_edges(u) {
                        examined.push(u);
                        let w = g.source(e);
                        if !self.s.m1.contains(w) && world.live(g, e) {
                            self.s.m1.insert(w);
                            primary.push_back(w);
                        }
                    }
                } else if self.unblocks_suspended(u, world, &mut examined) && self.s.m3.insert(u) {
                    // As a B-seed, u would feed B to a suspended node whose A flows back to u.
                    out.push(u);
                }
            }
        }
        self.s.queue2 = primary;
        for x in examined {
            if self.s.m3.contains(x) {
                c.ept_bs += 1;
            } else {
                c.ept_bo += 1;
            }
        }
        c
    }

    /// Whether some suspended node is both B-reachable from `u` and able to pass A back
    /// to `u` through nodes that adopt A once they hold B.
    fn unblocks_suspended<W: RrWorld>(&mut self, u: NodeId, world: &mut W, examined: &mut Vec<NodeId>) -> bool {
        let g = self.g;
        self.s.m4.clear();
        self.s.queue.clear();
        self.s.m4.insert(u);
        self.s.queue.push_back(u);
        while let Some(x) = self.s.queue.pop_front() {
            for e in g.out_edges(x) {
                let y = g.target(e);
                examined.push(y);
                if self.s.m4.contains(y) || !world.live(g, e) {
                    continue;
                }
                self.s.m4.insert(y);
                if self.b_diffusible(y, world) {
                    self.s.queue.push_back(y);
                }
            }
        }
        self.s.m5.clear();
        self.s.queue.clear();
        self.s.m5.insert(u);
        self.s.queue.push_back(u);
        while let Some(x) = self.s.queue.pop_front() {
            if self.s.label[x as usize] == SUSPENDED && self.s.m4.contains(x) {
                return true;
            }
            for &e in g.in_edges(x) {
                examined.push(x);
                let w = g.source(e);
                if self.s.m5.contains(w) {
                    continue;
                }
                let lw = self.s.label[w as usize];
                if !(lw == POTENTIAL || lw == SUSPENDED || lw == ADOPTED) || !self.ab_diffusible(w, world) {
                    continue;
                }
                if world.live(g, e) {
                    self.s.m5.insert(w);
                    self.s.queue.push_back(w);
                }
            }
        }
        false
    }
}
