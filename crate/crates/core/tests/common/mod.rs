//! Instance generators and reference oracles written independently of the library's
//! cascade and enumeration code.
#![allow(dead_code)]

use comic::{GapSet, Graph, NodeId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edge = (NodeId, NodeId, f64);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(n: usize, edges: &[Edge]) -> Graph {
    let e: Vec<_> = edges.iter().map(|&(u, v, p)| (u, v, Some(p))).collect();
    Graph::from_edges(n, &e).unwrap()
}

pub fn edges_of(g: &Graph) -> Vec<Edge> {
    g.edges().collect()
}

/// Random simple digraph with `n` nodes and exactly `m` edges, probabilities drawn from
/// `probs`.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, m: usize, probs: &[f64]) -> Vec<Edge> {
    let mut all: Vec<(NodeId, NodeId)> =
        (0..n as NodeId).flat_map(|u| (0..n as NodeId).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(m.min(all.len()));
    all.sort_unstable();
    all.into_iter().map(|(u, v)| (u, v, *probs.choose(rng).unwrap())).collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize, probs: &[f64]) -> Graph {
    graph(n, &random_edges(rng, n, m, probs))
}

/// Distinct random nodes.
pub fn random_nodes<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<NodeId> {
    let mut v: Vec<NodeId> = (0..n as NodeId).collect();
    v.shuffle(rng);
    v.truncate(k);
    v.sort_unstable();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// q_a0 <= q_ab, q_b0 <= q_ba.
    Complement,
    /// q_a0 >= q_ab, q_b0 >= q_ba.
    Compete,
    /// One side complements, the other competes.
    Mixed,
    /// q_a0 <= q_ab and q_b0 = q_ba.
    OneWay,
    /// Complementary with q_ba = 1.
    CrossUnit,
    /// Competing with q_a0 = q_b0 = 1.
    CompeteUnit,
}

fn grid<R: Rng>(rng: &mut R) -> f64 {
    *[0.0, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0].choose(rng).unwrap()
}

fn ordered<R: Rng>(rng: &mut R) -> (f64, f64) {
    let (a, b) = (grid(rng), grid(rng));
    (a.min(b), a.max(b))
}

pub fn random_gaps<R: Rng>(rng: &mut R, family: Family) -> GapSet {
    let (a_lo, a_hi) = ordered(rng);
    let (b_lo, b_hi) = ordered(rng);
    let q = match family {
        Family::Complement => [a_lo, a_hi, b_lo, b_hi],
        Family::Compete => [a_hi, a_lo, b_hi, b_lo],
        Family::Mixed => {
            if rng.gen() {
                [a_lo, a_hi, b_hi, b_lo]
            } else {
                [a_hi, a_lo, b_lo, b_hi]
            }
        }
        Family::OneWay => [a_lo, a_hi, b_lo, b_lo],
        Family::CrossUnit => [a_lo, a_hi, b_lo, 1.0],
        Family::CompeteUnit => [1.0, a_lo, 1.0, b_lo],
    };
    GapSet::new(q[0], q[1], q[2], q[3]).unwrap()
}

/// One concrete world for the reference cascade. `order[v]` lists `v`'s in-neighbours in
/// tie-break order.
#[derive(Clone, Debug)]
pub struct RefWorld {
    pub live: Vec<bool>,
    pub alpha: Vec<[f64; 2]>,
    pub order: Vec<Vec<NodeId>>,
    pub a_first: Vec<bool>,
}

const IDLE: u8 = 0;
const SUSPENDED: u8 = 1;
const ADOPTED: u8 = 2;
const REJECTED: u8 = 3;

/// Straight transcription of the diffusion rules: every node hears the items its
/// informers adopted in the previous step, informers in the node's tie-break order, each
/// informer's items in the order it adopted them. Returns bitmasks of A- and B-adopters.
pub fn ref_cascade(n: usize, edges: &[Edge], q: &GapSet, w: &RefWorld, sa: &[NodeId], sb: &[NodeId]) -> (u64, u64) {
    let qv = |x: usize, holds_other: bool| -> f64 {
        match (x, holds_other) {
            (0, false) => q.q_a0,
            (0, true) => q.q_ab,
            (1, false) => q.q_b0,
            _ => q.q_ba,
        }
    };
    let mut st = vec![[IDLE; 2]; n];
    let mut fresh: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n as NodeId {
        let (a, b) = (sa.contains(&v), sb.contains(&v));
        let items: Vec<usize> = match (a, b) {
            (true, true) if w.a_first[v as usize] => vec![0, 1],
            (true, true) => vec![1, 0],
            (true, false) => vec![0],
            (false, true) => vec![1],
            _ => vec![],
        };
        for &x in &items {
            st[v as usize][x] = ADOPTED;
        }
        fresh[v as usize] = items;
    }
    let live_edge = |u: NodeId, v: NodeId| edges.iter().position(|&(a, b, _)| a == u && b == v).map(|i| w.live[i]);
    while fresh.iter().any(|f| !f.is_empty()) {
        let mut next: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            for &u in &w.order[v] {
                if fresh[u as usize].is_empty() || live_edge(u, v as NodeId) != Some(true) {
                    continue;
                }
                for &x in &fresh[u as usize] {
                    let y = 1 - x;
                    if st[v][x] != IDLE {
                        continue;
                    }
                    if st[v][y] == ADOPTED {
                        if w.alpha[v][x] <= qv(x, true) {
                            st[v][x] = ADOPTED;
                            next[v].push(x);
                        } else {
                            st[v][x] = REJECTED;
                        }
                    } else if w.alpha[v][x] <= qv(x, false) {
                        st[v][x] = ADOPTED;
                        next[v].push(x);
                        if st[v][y] == SUSPENDED {
                            if w.alpha[v][y] <= qv(y, true) {
                                st[v][y] = ADOPTED;
                                next[v].push(y);
                            } else {
                                st[v][y] = REJECTED;
                            }
                        }
                    } else {
                        st[v][x] = SUSPENDED;
                    }
                }
            }
        }
        fresh = next;
    }
    let mut m = (0u64, 0u64);
    for (v, s) in st.iter().enumerate() {
        if s[0] == ADOPTED {
            m.0 |= 1 << v;
        }
        if s[1] == ADOPTED {
            m.1 |= 1 << v;
        }
    }
    m
}

/// Threshold ranges of one item: intervals cut at that item's two GAPs, each with a
/// representative point and its probability.
fn ranges(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0, lo.min(hi), lo.max(hi), 1.0];
    cuts.dedup();
    cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| ((w[0] + w[1]) / 2.0, w[1] - w[0])).collect()
}

fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Expected A- and B-spread by brute-force enumeration of every combination of edge
/// states, threshold ranges, informer permutations and seed coins.
pub fn naive_spread(n: usize, edges: &[Edge], q: &GapSet, sa: &[NodeId], sb: &[NodeId]) -> (f64, f64) {
    // Each factor: list of (setter, probability) choices.
    let edge_choices: Vec<Vec<(bool, f64)>> = edges
        .iter()
        .map(|&(_, _, p)| [(true, p), (false, 1.0 - p)].into_iter().filter(|c| c.1 > 0.0).collect())
        .collect();
    let ra = ranges(q.q_a0, q.q_ab);
    let rb = ranges(q.q_b0, q.q_ba);
    let perms: Vec<Vec<Vec<NodeId>>> = (0..n as NodeId)
        .map(|v| {
            let ins: Vec<NodeId> = edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect();
            permutations(&ins)
        })
        .collect();
    let dual: Vec<usize> = (0..n).filter(|&v| sa.contains(&(v as NodeId)) && sb.contains(&(v as NodeId))).collect();

    let mut w = RefWorld {
        live: vec![false; edges.len()],
        alpha: vec![[0.0; 2]; n],
        order: perms.iter().map(|p| p[0].clone()).collect(),
        a_first: vec![true; n],
    };
    let (mut sum_a, mut sum_b) = (0.0, 0.0);
    // Odometer over all factors.
    let sizes: Vec<usize> = edge_choices
        .iter()
        .map(|c| c.len())
        .chain((0..n).flat_map(|_| [ra.len(), rb.len()]))
        .chain(perms.iter().map(|p| p.len()))
        .chain(dual.iter().map(|_| 2))
        .collect();
    let mut idx = vec![0usize; sizes.len()];
    loop {
        let mut mass = 1.0;
        let mut k = 0;
        for (e, c) in edge_choices.iter().enumerate() {
            let (l, p) = c[idx[k]];
            w.live[e] = l;
            mass *= p;
            k += 1;
        }
        for v in 0..n {
            let (xa, pa) = ra[idx[k]];
            let (xb, pb) = rb[idx[k + 1]];
            w.alpha[v] = [xa, xb];
            mass *= pa * pb;
            k += 2;
        }
        for (v, p) in perms.iter().enumerate() {
            w.order[v].clone_from(&p[idx[k]]);
            mass /= p.len() as f64;
            k += 1;
        }
        for &v in &dual {
            w.a_first[v] = idx[k] == 0;
            mass *= 0.5;
            k += 1;
        }
        let (a, b) = ref_cascade(n, edges, q, &w, sa, sb);
        sum_a += mass * a.count_ones() as f64;
        sum_b += mass * b.count_ones() as f64;

        let mut i = 0;
        loop {
            if i == sizes.len() {
                return (sum_a, sum_b);
            }
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Classic independent-cascade spread where each non-seed node is receptive with
/// probability `node_p`, by enumerating edge and node states.
pub fn ic_spread(n: usize, edges: &[Edge], node_p: f64, seeds: &[NodeId]) -> f64 {
    let m = edges.len();
    let free: Vec<usize> = (0..n).filter(|&v| !seeds.contains(&(v as NodeId))).collect();
    let mut total = 0.0;
    for em in 0..1u64 << m {
        let mut pe = 1.0;
        for (i, &(_, _, p)) in edges.iter().enumerate() {
            pe *= if em >> i & 1 == 1 { p } else { 1.0 - p };
        }
        if pe == 0.0 {
            continue;
        }
        for nm in 0..1u64 << free.len() {
            let mut pn = 1.0;
            let mut receptive = vec![false; n];
            seeds.iter().for_each(|&s| receptive[s as usize] = true);
            for (j, &v) in free.iter().enumerate() {
                let r = nm >> j & 1 == 1;
                receptive[v] = r;
                pn *= if r { node_p } else { 1.0 - node_p };
            }
            if pn == 0.0 {
                continue;
            }
            let mut reached = vec![false; n];
            let mut stack: Vec<usize> = seeds.iter().map(|&s| s as usize).collect();
            stack.iter().for_each(|&s| reached[s] = true);
            while let Some(u) = stack.pop() {
                for (i, &(a, b, _)) in edges.iter().enumerate() {
                    let b = b as usize;
                    if a as usize == u && em >> i & 1 == 1 && !reached[b] && receptive[b] {
                        reached[b] = true;
                        stack.push(b);
                    }
                }
            }
            total += pe * pn * reached.iter().filter(|&&r| r).count() as f64;
        }
    }
    total
}

/// All subsets of `items` as vectors, in bitmask order.
pub fn power_set(items: &[NodeId]) -> Vec<Vec<NodeId>> {
    (0..1usize << items.len())
        .map(|m| (0..items.len()).filter(|i| m >> i & 1 == 1).map(|i| items[i]).collect())
        .collect()
}

/// The six-node gadget on which two A-seeds give `v` adoption probability `1 - q + q^2`:
/// `s1 -> v`, `s2 -> w`, `w -> v`, `y -> x`, `x -> w`, all certain, GAPs `(q, 1, 1, 0)`,
/// B-seed `y`. Node ids: s1=0, s2=1, w=2, v=3, y=4, x=5.
pub fn reconsideration_gadget() -> (Graph, [NodeId; 6]) {
    let g = graph(6, &[(0, 3, 1.0), (1, 2, 1.0), (2, 3, 1.0), (4, 5, 1.0), (5, 2, 1.0)]);
    (g, [0, 1, 2, 3, 4, 5])
}

/// Whether `values` (indexed by bitmask over `c` elements) violates the property by more
/// than `tol` for some `S ⊆ T` and `x ∉ T`, by scanning every such triple.
/// `kind`: 0 increasing, 1 decreasing, 2 submodular.
pub fn scan_violates(values: &[f64], c: usize, kind: u8, tol: f64) -> bool {
    let full = 1usize << c;
    for t in 0..full {
        // Every subset s of t.
        let mut s = t;
        loop {
            let bad = match kind {
                0 => values[s] > values[t] + tol,
                1 => values[s] + tol < values[t],
                _ => (0..c).filter(|&x| t >> x & 1 == 0).any(|x| {
                    values[t | 1 << x] - values[t] > values[s | 1 << x] - values[s] + tol
                }),
            };
            if bad {
                return true;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    false
}
