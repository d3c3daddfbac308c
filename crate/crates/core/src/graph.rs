//! Directed graphs with per-edge influence probabilities.
//!
//! Edges are stored once, sorted by `(source, target)`, so an edge id is also an index into
//! the forward CSR. The reverse adjacency lists edge ids grouped by target and sorted by
//! source; both directions therefore agree on edge identity.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{invalid, Error, Result};

pub type NodeId = u32;
pub type EdgeId = u32;

#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeListOptions {
    /// Each listed pair is inserted in both directions.
    pub undirected: bool,
    /// Compact sparse ids to `0..n`; original ids are kept as labels.
    pub remap: bool,
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    src: Vec<NodeId>,
    dst: Vec<NodeId>,
    prob: Vec<f64>,
    weighted: bool,
    out_off: Vec<usize>,
    in_off: Vec<usize>,
    in_edge: Vec<EdgeId>,
    labels: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph from `(source, target, probability)` triples. Either every edge
    /// carries a probability or none does.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, Option<f64>)]) -> Result<Graph> {
        if n > NodeId::MAX as usize || edges.len() > EdgeId::MAX as usize {
            return Err(invalid("graph too large for 32-bit ids"));
        }
        let weighted = edges.first().is_some_and(|e| e.2.is_some());
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v, p) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(invalid(format!("edge ({u}, {v}) references a node outside 0..{n}")));
            }
            if u == v {
                return Err(invalid(format!("self-loop at node {u}")));
            }
            if p.is_some() != weighted {
                return Err(invalid("either all edges or no edge may carry a probability"));
            }
            let p = match p {
                Some(p) if !(0.0..=1.0).contains(&p) => {
                    return Err(invalid(format!("probability {p} on edge ({u}, {v}) is outside [0, 1]")))
                }
                Some(p) => p,
                None => f64::NAN,
            };
            list.push((u, v, p));
        }
        list.sort_by_key(|&(u, v, _)| (u, v));
        if let Some(w) = list.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(invalid(format!("parallel edge ({}, {})", w[0].0, w[0].1)));
        }

        let m = list.len();
        let mut out_off = vec![0usize; n + 1];
        let mut in_off = vec![0usize; n + 1];
        for &(u, v, _) in &list {
            out_off[u as usize + 1] += 1;
            in_off[v as usize + 1] += 1;
        }
        for i in 0..n {
            out_off[i + 1] += out_off[i];
            in_off[i + 1] += in_off[i];
        }
        // Edges are sorted by source, so filling in edge order keeps each in-list sorted by source.
        let mut fill = in_off.clone();
        let mut in_edge = vec![0 as EdgeId; m];
        for (e, &(_, v, _)) in list.iter().enumerate() {
            in_edge[fill[v as usize]] = e as EdgeId;
            fill[v as usize] += 1;
        }
        Ok(Graph {
            n,
            src: list.iter().map(|e| e.0).collect(),
            dst: list.iter().map(|e| e.1).collect(),
            prob: list.iter().map(|e| e.2).collect(),
            weighted,
            out_off,
            in_off,
            in_edge,
            labels: None,
        })
    }

    pub fn load_edge_list(path: &Path, opts: EdgeListOptions) -> Result<Graph> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::read_edge_list(file, opts).map_err(|e| match e {
            Error::Io { source, .. } => Error::Io { path: path.to_path_buf(), source },
            other => other,
        })
    }

    /// Parses a whitespace-separated edge list: `source target [probability]` per line,
    /// `#` starts a comment. Without remapping, `n` is one more than the largest id.
    pub fn read_edge_list<R: Read>(reader: R, opts: EdgeListOptions) -> Result<Graph> {
        let mut raw: Vec<(u64, u64, Option<f64>)> = Vec::new();
        let mut with_prob: Option<bool> = None;
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|source| Error::Io { path: Default::default(), source })?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 2 && fields.len() != 3 {
                return Err(Error::Parse { line: lineno, msg: format!("expected 2 or 3 fields, found {}", fields.len()) });
            }
            let id = |s: &str| {
                s.parse::<u64>().map_err(|_| Error::Parse { line: lineno, msg: format!("bad node id {s:?}") })
            };
            let (u, v) = (id(fields[0])?, id(fields[1])?);
            let p = match fields.get(2) {
                Some(s) => Some(
                    s.parse::<f64>()
                        .ok()
                        .filter(|p| (0.0..=1.0).contains(p))
                        .ok_or_else(|| Error::Parse { line: lineno, msg: format!("bad probability {s:?}") })?,
                ),
                None => None,
            };
            match with_prob {
                None => with_prob = Some(p.is_some()),
                Some(w) if w != p.is_some() => {
                    return Err(Error::Parse { line: lineno, msg: "probability column present on some lines only".into() })
                }
                _ => {}
            }
            raw.push((u, v, p));
            if opts.undirected {
                raw.push((v, u, p));
            }
        }

        let (n, labels, map): (usize, Option<Vec<u64>>, Box<dyn Fn(u64) -> u64>) = if opts.remap {
            let mut ids: Vec<u64> = raw.iter().flat_map(|e| [e.0, e.1]).collect();
            ids.sort_unstable();
            ids.dedup();
            let table = ids.clone();
            (ids.len(), Some(ids), Box::new(move |x| table.binary_search(&x).unwrap() as u64))
        } else {
            let n = raw.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0);
            (n as usize, None, Box::new(|x| x))
        };
        if n > NodeId::MAX as usize {
            return Err(invalid(format!("node id {} does not fit in 32 bits; use remapping", n - 1)));
        }
        let edges: Vec<(NodeId, NodeId, Option<f64>)> =
            raw.iter().map(|&(u, v, p)| (map(u) as NodeId, map(v) as NodeId, p)).collect();
        let mut g = Graph::from_edges(n, &edges)?;
        g.labels = labels;
        Ok(g)
    }

    /// Serializes as an edge list readable by [`Graph::read_edge_list`]. Probabilities are
    /// printed with 9 significant digits.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in 0..self.m() {
            let (u, v) = (self.label(self.src[e]), self.label(self.dst[e]));
            if self.weighted {
                let _ = writeln!(out, "{u}\t{v}\t{}", format_sig(self.prob[e], 9));
            } else {
                let _ = writeln!(out, "{u}\t{v}");
            }
        }
        out
    }

    /// Sets p(u, v) = 1 / in-degree(v) on every edge.
    pub fn assign_weighted_cascade(&mut self) {
        for v in 0..self.n {
            let edges = &self.in_edge[self.in_off[v]..self.in_off[v + 1]];
            let p = 1.0 / edges.len().max(1) as f64;
            for &e in edges {
                self.prob[e as usize] = p;
            }
        }
        self.weighted = true;
    }

    pub fn assign_uniform(&mut self, p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("probability {p} is outside [0, 1]")));
        }
        self.prob.iter_mut().for_each(|x| *x = p);
        self.weighted = true;
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.src.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn require_weighted(&self) -> Result<()> {
        if self.weighted {
            Ok(())
        } else {
            Err(Error::Unweighted)
        }
    }

    #[inline]
    pub fn source(&self, e: EdgeId) -> NodeId {
        self.src[e as usize]
    }

    #[inline]
    pub fn target(&self, e: EdgeId) -> NodeId {
        self.dst[e as usize]
    }

    #[inline]
    pub fn prob(&self, e: EdgeId) -> f64 {
        self.prob[e as usize]
    }

    /// Edge ids leaving `u`, in increasing target order.
    #[inline]
    pub fn out_edges(&self, u: NodeId) -> std::ops::Range<EdgeId> {
        self.out_off[u as usize] as EdgeId..self.out_off[u as usize + 1] as EdgeId
    }

    /// Edge ids entering `v`, in increasing source order.
    #[inline]
    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_edge[self.in_off[v as usize]..self.in_off[v as usize + 1]]
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_off[u as usize + 1] - self.out_off[u as usize]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_off[v as usize + 1] - self.in_off[v as usize]
    }

    /// Position of edge `e` within the in-list of its target.
    pub fn in_position(&self, e: EdgeId) -> usize {
        let v = self.dst[e as usize];
        let list = self.in_edges(v);
        list.binary_search_by_key(&self.src[e as usize], |&x| self.src[x as usize]).expect("edge present in reverse index")
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let range = self.out_edges(u);
        let slice = &self.dst[range.start as usize..range.end as usize];
        slice.binary_search(&v).ok().map(|i| range.start + i as EdgeId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.m()).map(move |e| (self.src[e], self.dst[e], self.prob[e]))
    }

    /// Original id of a node (itself unless the graph was remapped).
    pub fn label(&self, v: NodeId) -> u64 {
        self.labels.as_ref().map_or(v as u64, |l| l[v as usize])
    }

    /// Dense id of an original id.
    pub fn node_of_label(&self, label: u64) -> Option<NodeId> {
        match &self.labels {
            Some(l) => l.binary_search(&label).ok().map(|i| i as NodeId),
            None => (label < self.n as u64).then_some(label as NodeId),
        }
    }

    /// Bytes held by the adjacency arrays.
    pub fn heap_bytes(&self) -> usize {
        self.m() * (4 + 4 + 8 + 4) + (self.n + 1) * 16 + self.labels.as_ref().map_or(0, |l| l.len() * 8)
    }
}

/// Rounds to `digits` significant digits and prints the shortest decimal that reads back
/// to the rounded value.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
    format!("{rounded}")
}
