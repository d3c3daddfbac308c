//! GAP estimation from timestamped action logs.
//!
//! A log lists, per user and item, when the user was informed of the item and when (if
//! ever) they rated it. A rating implies having been informed no later.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::model::{simulate_with, EventSink, GapSet, Item, SimOptions};
use crate::rng::{self, domain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Inform,
    Rate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub user: String,
    pub item: String,
    pub action: Action,
    pub ts: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Times {
    inform: Option<u64>,
    rate: Option<u64>,
}

/// Validated log indexed by item, then user.
#[derive(Clone, Debug, Default)]
pub struct ActionLog {
    by_item: HashMap<String, HashMap<String, Times>>,
    records: usize,
}

impl ActionLog {
    pub fn from_records<I: IntoIterator<Item = ActionRecord>>(records: I) -> Result<ActionLog> {
        let mut log = ActionLog::default();
        for r in records {
            log.push(r)?;
        }
        log.finish()?;
        Ok(log)
    }

    fn push(&mut self, r: ActionRecord) -> Result<()> {
        let t = self.by_item.entry(r.item.clone()).or_default().entry(r.user.clone()).or_default();
        let slot = match r.action {
            Action::Inform => &mut t.inform,
            Action::Rate => &mut t.rate,
        };
        if slot.is_some() {
            return Err(invalid(format!("user {} has two {:?} records for item {}", r.user, r.action, r.item)));
        }
        *slot = Some(r.ts);
        self.records += 1;
        Ok(())
    }

    /// A rating without an informing record counts as being informed at the same time.
    fn finish(&mut self) -> Result<()> {
        for (item, users) in &mut self.by_item {
            for (user, t) in users.iter_mut() {
                match (t.inform, t.rate) {
                    (None, Some(r)) => t.inform = Some(r),
                    (Some(i), Some(r)) if i > r => {
                        return Err(invalid(format!("user {user} rated item {item} at {r} before being informed at {i}")))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Reads `user item action timestamp` lines (tab or space separated, `#` comments).
    pub fn read<R: Read>(reader: R) -> Result<ActionLog> {
        let mut log = ActionLog::default();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|source| Error::Io { path: Default::default(), source })?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let f: Vec<&str> = body.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::Parse { line: lineno, msg: format!("expected 4 fields, found {}", f.len()) });
            }
            let action = match f[2] {
                "rate" => Action::Rate,
                "inform" => Action::Inform,
                other => return Err(Error::Parse { line: lineno, msg: format!("unknown action {other:?}") }),
            };
            let ts = f[3].parse::<u64>().map_err(|_| Error::Parse { line: lineno, msg: format!("bad timestamp {:?}", f[3]) })?;
            log.push(ActionRecord { user: f[0].into(), item: f[1].into(), action, ts })
                .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        }
        log.finish()?;
        Ok(log)
    }

    pub fn load(path: &Path) -> Result<ActionLog> {
        let f = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::read(f)
    }

    pub fn records(&self) -> usize {
        self.records
    }

    pub fn items(&self) -> BTreeSet<&str> {
        self.by_item.keys().map(|s| s.as_str()).collect()
    }

    /// Informing and rating times of `user` for `item`.
    pub fn times(&self, user: &str, item: &str) -> (Option<u64>, Option<u64>) {
        self.by_item.get(item).and_then(|u| u.get(user)).map_or((None, None), |t| (t.inform, t.rate))
    }

    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(u64, &str, &str, &str)> = Vec::new();
        for (item, users) in &self.by_item {
            for (user, t) in users {
                if let Some(i) = t.inform {
                    rows.push((i, user, item, "inform"));
                }
                if let Some(r) = t.rate {
                    rows.push((r, user, item, "rate"));
                }
            }
        }
        rows.sort();
        rows.iter().map(|(ts, u, i, a)| format!("{u}\t{i}\t{a}\t{ts}\n")).collect()
    }
}

/// 95% normal-approximation interval, clipped to [0, 1].
pub fn confidence_interval(q: f64, n: u64) -> Option<(f64, f64)> {
    if n == 0 {
        return None;
    }
    let half = 1.96 * (q * (1.0 - q) / n as f64).sqrt();
    Some(((q - half).max(0.0), (q + half).min(1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    /// `None` when the denominator is empty.
    pub est: Option<f64>,
    pub n: u64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl GapEstimate {
    fn from_counts(hits: u64, n: u64) -> Self {
        if n == 0 {
            return GapEstimate { est: None, n, lo: None, hi: None };
        }
        let q = hits as f64 / n as f64;
        let (lo, hi) = confidence_interval(q, n).expect("n > 0");
        GapEstimate { est: Some(q), n, lo: Some(lo), hi: Some(hi) }
    }

    pub fn contains(&self, x: f64) -> bool {
        matches!((self.lo, self.hi), (Some(lo), Some(hi)) if lo <= x && x <= hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnedGaps {
    #[serde(rename = "qA0")]
    pub q_a0: GapEstimate,
    #[serde(rename = "qAB")]
    pub q_ab: GapEstimate,
    #[serde(rename = "qB0")]
    pub q_b0: GapEstimate,
    #[serde(rename = "qBA")]
    pub q_ba: GapEstimate,
}

impl LearnedGaps {
    /// Point estimates, or an error naming the first undefined GAP.
    pub fn to_gap_set(&self) -> Result<GapSet> {
        let get = |name: &str, e: &GapEstimate| e.est.ok_or_else(|| invalid(format!("{name} is undefined (no samples)")));
        GapSet::new(get("qA0", &self.q_a0)?, get("qAB", &self.q_ab)?, get("qB0", &self.q_b0)?, get("qBA", &self.q_ba)?)
    }
}

/// `(q_x0, q_xy)` for item `x` against item `y`.
fn learn_pair(x: &HashMap<String, Times>, y: Option<&HashMap<String, Times>>) -> (GapEstimate, GapEstimate) {
    let empty = HashMap::new();
    let y = y.unwrap_or(&empty);
    let (mut alone_hits, mut alone_n, mut after_hits, mut after_n) = (0u64, 0u64, 0u64, 0u64);
    for (user, tx) in x {
        let Some(inform_x) = tx.inform else { continue };
        let rate_y = y.get(user).and_then(|t| t.rate);
        // Strictly earlier; equal timestamps do not count as before.
        let y_before_inform = rate_y.is_some_and(|r| r < inform_x);
        let y_before_rate = matches!((rate_y, tx.rate), (Some(ry), Some(rx)) if ry < rx);
        if y_before_inform {
            after_n += 1;
            if tx.rate.is_some() {
                after_hits += 1;
            }
        } else {
            alone_n += 1;
            if tx.rate.is_some() && !y_before_rate {
                alone_hits += 1;
            }
        }
    }
    (GapEstimate::from_counts(alone_hits, alone_n), GapEstimate::from_counts(after_hits, after_n))
}

/// Estimates the four GAPs of `item_a` and `item_b`.
///
/// `q_a0` is the fraction of users informed of A while not holding B who rated A without
/// rating B first. `q_ab` is the fraction of users who rated B before being informed of A
/// that went on to rate A.
pub fn learn_gaps(log: &ActionLog, item_a: &str, item_b: &str) -> Result<LearnedGaps> {
    let a = log.by_item.get(item_a).ok_or_else(|| invalid(format!("item {item_a:?} does not occur in the log")))?;
    let b = log.by_item.get(item_b).ok_or_else(|| invalid(format!("item {item_b:?} does not occur in the log")))?;
    let (q_a0, q_ab) = learn_pair(a, Some(b));
    let (q_b0, q_ba) = learn_pair(b, Some(a));
    Ok(LearnedGaps { q_a0, q_ab, q_b0, q_ba })
}

struct LogSink<'a> {
    run: usize,
    clock: &'a mut u64,
    seeds: &'a [bool],
    out: &'a mut Vec<ActionRecord>,
}

impl LogSink<'_> {
    fn push(&mut self, v: NodeId, item: Item, action: Action) {
        if self.seeds[v as usize] {
            return;
        }
        *self.clock += 1;
        self.out.push(ActionRecord {
            user: format!("{}:{}", self.run, v),
            item: match item {
                Item::A => "A".into(),
                Item::B => "B".into(),
            },
            action,
            ts: *self.clock,
        });
    }
}

impl EventSink for LogSink<'_> {
    fn informed(&mut self, v: NodeId, item: Item) {
        self.push(v, item, Action::Inform);
    }

    fn adopted(&mut self, v: NodeId, item: Item) {
        self.push(v, item, Action::Rate);
    }
}

/// A log produced by `runs` independent diffusions on `g`, with items named `"A"` and `"B"`
/// and users `"<run>:<node>"`. Every decision gets its own timestamp, in the order the
/// diffusion makes them. Seed nodes are left out since they never decide.
pub fn synthesize_log(
    g: &Graph,
    q: &GapSet,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    runs: usize,
    master_seed: u64,
) -> Result<ActionLog> {
    let mut is_seed = vec![false; g.n()];
    seeds_a.iter().chain(seeds_b).for_each(|&s| {
        if (s as usize) < g.n() {
            is_seed[s as usize] = true
        }
    });
    let mut records = Vec::new();
    let mut clock = 0u64;
    for run in 0..runs {
        let mut rng = rng::stream(master_seed, domain::SYNTH_LOG, run as u64);
        let mut sink = LogSink { run, clock: &mut clock, seeds: &is_seed, out: &mut records };
        simulate_with(g, q, seeds_a, seeds_b, &mut rng, SimOptions::default(), &mut sink)?;
    }
    ActionLog::from_records(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log(text: &str) -> ActionLog {
        ActionLog::read(text.as_bytes()).unwrap()
    }

    #[test]
    fn rating_implies_informing() {
        let l = log("7\tX\trate\t100\n");
        assert_eq!(l.times("7", "X"), (Some(100), Some(100)));
        let l = log("7\tX\tinform\t100\n");
        assert_eq!(l.times("7", "X"), (Some(100), None));
        assert_eq!(log("").records(), 0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(ActionLog::read("7\tX\tbuy\t1\n".as_bytes()).is_err());
        assert!(ActionLog::read("7\tX\trate\n".as_bytes()).is_err());
        assert!(ActionLog::read("7\tX\trate\t-1\n".as_bytes()).is_err());
        assert!(ActionLog::read("7\tX\trate\t5\n7\tX\trate\t6\n".as_bytes()).is_err());
        assert!(ActionLog::read("7\tX\tinform\t9\n7\tX\trate\t6\n".as_bytes()).is_err());
    }

    #[test]
    fn interval_arithmetic() {
        let (lo, hi) = confidence_interval(0.5, 100).unwrap();
        assert!((hi - 0.5 - 0.098).abs() < 1e-12 && (0.5 - lo - 0.098).abs() < 1e-12);
        assert_eq!(confidence_interval(1.0, 10), Some((1.0, 1.0)));
        assert_eq!(confidence_interval(0.0, 10), Some((0.0, 0.0)));
        assert_eq!(confidence_interval(0.3, 0), None);
        let (lo, hi) = confidence_interval(0.88, 2000).unwrap();
        assert!(((hi - lo) / 2.0 - 0.0142).abs() < 1e-4);
    }

    #[test]
    fn precedence_trace() {
        // Rated B at 5, informed of A at 7, rated A at 9: B came first on both counts.
        let l = log("u\tB\trate\t5\nu\tA\tinform\t7\nu\tA\trate\t9\n");
        let g = learn_gaps(&l, "A", "B").unwrap();
        assert_eq!((g.q_ab.n, g.q_ab.est), (1, Some(1.0)));
        assert_eq!(g.q_a0.n, 0);
        assert_eq!(g.q_a0.est, None);
        // B's side: informed of B at 5 while A not yet rated.
        assert_eq!((g.q_b0.n, g.q_b0.est), (1, Some(1.0)));
    }

    #[test]
    fn ties_are_not_before() {
        let l = log("u\tB\trate\t5\nu\tA\trate\t5\n");
        let g = learn_gaps(&l, "A", "B").unwrap();
        assert_eq!((g.q_a0.n, g.q_a0.est), (1, Some(1.0)));
        assert_eq!(g.q_ab.n, 0);
    }
}
