mod common;

use std::io::Write;

use comic::learn::{learn_gaps, synthesize_log, Action, ActionLog, ActionRecord};
use comic::{GapSet, Graph};
use common::*;
use proptest::prelude::*;

fn rec(user: usize, item: &str, action: Action, ts: u64) -> ActionRecord {
    ActionRecord { user: user.to_string(), item: item.into(), action, ts }
}

#[test]
fn ratio_from_counts() {
    // 60 users informed of A with no earlier B rating, 45 of them rate A.
    let mut records = Vec::new();
    for u in 0..60 {
        records.push(rec(u, "A", Action::Inform, 10));
        if u < 45 {
            records.push(rec(u, "A", Action::Rate, 11));
        }
    }
    records.push(rec(999, "B", Action::Rate, 1));
    let g = learn_gaps(&ActionLog::from_records(records).unwrap(), "A", "B").unwrap();
    assert_eq!((g.q_a0.est, g.q_a0.n), (Some(0.75), 60));
    assert_eq!(g.q_ab.est, None);
    assert_eq!(g.q_b0.est, Some(1.0));
    assert!(g.to_gap_set().is_err());
}

#[test]
fn missing_item_and_file_round_trip() {
    let log = ActionLog::read("1 A rate 3\n2 B inform 4\n2 B rate 6 # late\n".as_bytes()).unwrap();
    assert!(learn_gaps(&log, "A", "C").is_err());
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(log.to_tsv().as_bytes()).unwrap();
    let back = ActionLog::load(f.path()).unwrap();
    assert_eq!(back.to_tsv(), log.to_tsv());
    assert_eq!(back.times("2", "B"), (Some(4), Some(6)));
    let json = serde_json::to_value(learn_gaps(&back, "A", "B").unwrap()).unwrap();
    for key in ["qA0", "qAB", "qB0", "qBA"] {
        assert!(json[key].get("est").is_some() && json[key].get("n").is_some(), "{json}");
    }
}

fn arb_log() -> impl Strategy<Value = Vec<ActionRecord>> {
    let user = (0usize..30, prop::option::of(0u64..20), prop::option::of(0u64..5), prop::option::of(0u64..20), prop::option::of(0u64..5));
    prop::collection::vec(user, 1..30).prop_map(|users| {
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (u, ia, ra, ib, rb) in users {
            if !seen.insert(u) {
                continue;
            }
            for (item, inform, delay) in [("A", ia, ra), ("B", ib, rb)] {
                if let Some(i) = inform {
                    out.push(rec(u, item, Action::Inform, i));
                    if let Some(d) = delay {
                        out.push(rec(u, item, Action::Rate, i + d));
                    }
                }
            }
        }
        out.push(rec(1000, "A", Action::Inform, 0));
        out.push(rec(1000, "B", Action::Inform, 0));
        out
    })
}

proptest! {
    #[test]
    fn swapping_items_swaps_gaps(records in arb_log()) {
        let log = ActionLog::from_records(records).unwrap();
        let ab = learn_gaps(&log, "A", "B").unwrap();
        let ba = learn_gaps(&log, "B", "A").unwrap();
        prop_assert_eq!((ab.q_a0, ab.q_ab), (ba.q_b0, ba.q_ba));
        prop_assert_eq!((ab.q_b0, ab.q_ba), (ba.q_a0, ba.q_ab));
    }

    #[test]
    fn estimates_lie_in_their_intervals(records in arb_log()) {
        let g = learn_gaps(&ActionLog::from_records(records).unwrap(), "A", "B").unwrap();
        for e in [g.q_a0, g.q_ab, g.q_b0, g.q_ba] {
            match e.est {
                Some(q) => {
                    prop_assert!((0.0..=1.0).contains(&q));
                    prop_assert!(e.contains(q));
                    prop_assert!(e.lo.unwrap() >= 0.0 && e.hi.unwrap() <= 1.0);
                }
                None => prop_assert_eq!(e.n, 0),
            }
        }
    }
}

fn star(leaves: usize) -> Graph {
    // Two hubs (A and B seeds) reaching every leaf; leaves also talk in a ring.
    let mut edges: Vec<Edge> = Vec::new();
    for v in 2..leaves as u32 + 2 {
        edges.push((0, v, 0.9));
        edges.push((1, v, 0.9));
        let next = if v + 1 < leaves as u32 + 2 { v + 1 } else { 2 };
        edges.push((v, next, 0.3));
    }
    edges.sort_by_key(|e| (e.0, e.1));
    graph(leaves + 2, &edges)
}

#[test]
fn synthetic_logs_recover_the_gaps() {
    let q = GapSet::new(0.75, 0.85, 0.92, 0.97).unwrap();
    let g = star(40);
    let log = synthesize_log(&g, &q, &[0], &[1], 2000, 3).unwrap();
    let learned = learn_gaps(&log, "A", "B").unwrap();
    let truth = [q.q_a0, q.q_ab, q.q_b0, q.q_ba];
    let est = [learned.q_a0, learned.q_ab, learned.q_b0, learned.q_ba];
    for (t, e) in truth.iter().zip(&est) {
        assert!(e.n >= 1000, "{e:?}");
        // Five standard errors, so the check is deterministic in practice.
        let se = (t * (1.0 - t) / e.n as f64).sqrt();
        assert!((e.est.unwrap() - t).abs() < 5.0 * se, "{t} vs {e:?}");
    }
    let small = learn_gaps(&synthesize_log(&g, &q, &[0], &[1], 40, 3).unwrap(), "A", "B").unwrap();
    let width = |e: &comic::learn::GapEstimate| e.hi.unwrap() - e.lo.unwrap();
    assert!(width(&small.q_a0) > width(&learned.q_a0));
    assert_eq!(synthesize_log(&g, &q, &[0], &[1], 40, 3).unwrap().to_tsv(), synthesize_log(&g, &q, &[0], &[1], 40, 3).unwrap().to_tsv());
}
