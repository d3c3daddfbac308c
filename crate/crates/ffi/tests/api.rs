use std::ffi::{CStr, CString};
use std::ptr;

use comic_ffi::*;

const GAPS: ComicGaps = ComicGaps { q_a0: 0.5, q_ab: 0.5, q_b0: 0.0, q_ba: 0.0 };

/// Path 0 -> 1 -> 2 with certain edges.
fn path3() -> *mut ComicGraph {
    let (src, dst, p) = ([0u32, 1], [1u32, 2], [1.0f64, 1.0]);
    let mut g = ptr::null_mut();
    let st = unsafe { comic_graph_from_edges(3, src.as_ptr(), dst.as_ptr(), p.as_ptr(), 2, &mut g) };
    assert_eq!(st, ComicStatus::Ok);
    g
}

fn last_error() -> String {
    let p = comic_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn graph_handles() {
    let g = path3();
    unsafe {
        assert_eq!(comic_graph_node_count(g), 3);
        assert_eq!(comic_graph_edge_count(g), 2);
        assert_eq!(comic_graph_node_count(ptr::null()), 0);
        comic_graph_free(g);
        comic_graph_free(ptr::null_mut());
    }

    let (src, dst) = ([0u32, 2], [1u32, 1]);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { comic_graph_from_edges(3, src.as_ptr(), dst.as_ptr(), ptr::null(), 2, &mut h) }, ComicStatus::Ok);
    let mut e = ComicSpread::default();
    // Weighted cascade: node 1 has in-degree 2, so each edge fires with probability 1/2.
    let st = unsafe { comic_exact_spread(h, ComicGaps { q_a0: 1.0, q_ab: 1.0, q_b0: 0.0, q_ba: 0.0 }, [0u32].as_ptr(), 1, ptr::null(), 0, &mut e) };
    assert_eq!(st, ComicStatus::Ok);
    assert!((e.sigma_a - 1.5).abs() < 1e-12);
    unsafe { comic_graph_free(h) };

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    std::fs::write(&file, "0 1 0.5\n1 2 0.5\n").unwrap();
    let path = CString::new(file.to_str().unwrap()).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { comic_graph_load(path.as_ptr(), false, false, &mut l) }, ComicStatus::Ok);
    assert_eq!(unsafe { comic_graph_edge_count(l) }, 2);
    unsafe { comic_graph_free(l) };
}

#[test]
fn spreads_and_boost() {
    let g = path3();
    let sa = [0u32];
    let mut e = ComicSpread::default();
    assert_eq!(unsafe { comic_exact_spread(g, GAPS, sa.as_ptr(), 1, ptr::null(), 0, &mut e) }, ComicStatus::Ok);
    assert!((e.sigma_a - 1.75).abs() < 1e-12 && e.stderr_a == 0.0);
    let mut m = ComicSpread::default();
    assert_eq!(unsafe { comic_estimate_spread(g, GAPS, sa.as_ptr(), 1, ptr::null(), 0, 20_000, 1, &mut m) }, ComicStatus::Ok);
    assert!((m.sigma_a - 1.75).abs() < 4.0 * m.stderr_a);
    let mut b = ComicBoost::default();
    let q = ComicGaps { q_a0: 0.2, q_ab: 0.9, q_b0: 1.0, q_ba: 1.0 };
    assert_eq!(unsafe { comic_estimate_boost(g, q, sa.as_ptr(), 1, [1u32].as_ptr(), 1, 20_000, 1, &mut b) }, ComicStatus::Ok);
    assert!(b.boost > 0.5, "{b:?}");
    unsafe { comic_graph_free(g) };
}

#[test]
fn seed_selection() {
    let g = path3();
    let params = ComicTimParams { k: 1, ..comic_default_tim_params() };
    let mut seeds = [u32::MAX; 4];
    let mut len = 0;
    let mut stats = ComicRrStats::default();
    let st = unsafe {
        comic_select_seeds(g, GAPS, ComicProblem::SelfInfMax, ptr::null(), 0, &params, 7, seeds.as_mut_ptr(), 4, &mut len, &mut stats)
    };
    assert_eq!(st, ComicStatus::Ok);
    assert_eq!((len, seeds[0]), (1, 0));
    assert!(stats.theta > 0);

    // Too small a buffer still reports the count.
    let params2 = ComicTimParams { k: 2, ..params };
    let st = unsafe {
        comic_select_seeds(g, GAPS, ComicProblem::SelfInfMax, ptr::null(), 0, &params2, 7, seeds.as_mut_ptr(), 1, &mut len, ptr::null_mut())
    };
    assert_eq!((st, len), (ComicStatus::BufferTooSmall, 2));

    let q = ComicGaps { q_a0: 0.2, q_ab: 0.9, q_b0: 0.3, q_ba: 0.8 };
    let st = unsafe {
        comic_select_seeds(g, q, ComicProblem::SelfInfMax, [2u32].as_ptr(), 1, &params, 7, seeds.as_mut_ptr(), 4, &mut len, ptr::null_mut())
    };
    assert_eq!(st, ComicStatus::Regime);
    let mut ratio = 0.0;
    let st = unsafe {
        comic_sandwich(g, q, ComicProblem::SelfInfMax, [2u32].as_ptr(), 1, &params, 2000, 7, seeds.as_mut_ptr(), 4, &mut len, &mut ratio)
    };
    assert_eq!(st, ComicStatus::Ok, "{}", last_error());
    assert_eq!(len, 1);
    assert!(ratio > 0.0 && ratio <= 1.0 + 1e-9);
    unsafe { comic_graph_free(g) };
}

#[test]
fn learning() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("log.tsv");
    std::fs::write(&file, "1\tX\tinform\t1\n1\tX\trate\t2\n2\tX\tinform\t1\n3\tY\trate\t1\n").unwrap();
    let (path, x, y) = (CString::new(file.to_str().unwrap()).unwrap(), CString::new("X").unwrap(), CString::new("Y").unwrap());
    let mut out = ComicLearnedGaps::default();
    assert_eq!(unsafe { comic_learn_gaps(path.as_ptr(), x.as_ptr(), y.as_ptr(), &mut out) }, ComicStatus::Ok);
    assert!(out.q_a0.defined);
    assert_eq!((out.q_a0.est, out.q_a0.n), (0.5, 2));
    assert!(!out.q_ab.defined);
}

#[test]
fn errors_are_reported() {
    let mut g = ptr::null_mut();
    let st = unsafe { comic_graph_from_edges(2, [0u32].as_ptr(), [5u32].as_ptr(), [0.5].as_ptr(), 1, &mut g) };
    assert_eq!(st, ComicStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(last_error().contains("outside"));

    let missing = CString::new("/nonexistent/graph.txt").unwrap();
    assert_eq!(unsafe { comic_graph_load(missing.as_ptr(), false, false, &mut g) }, ComicStatus::Io);
    assert_eq!(unsafe { comic_graph_load(ptr::null(), false, false, &mut g) }, ComicStatus::NullPointer);

    let h = path3();
    let mut e = ComicSpread::default();
    let bad = ComicGaps { q_a0: 1.5, ..GAPS };
    assert_eq!(unsafe { comic_exact_spread(h, bad, ptr::null(), 0, ptr::null(), 0, &mut e) }, ComicStatus::InvalidArgument);
    assert_eq!(unsafe { comic_exact_spread(ptr::null(), GAPS, ptr::null(), 0, ptr::null(), 0, &mut e) }, ComicStatus::NullPointer);
    assert_eq!(unsafe { comic_exact_spread(h, GAPS, ptr::null(), 1, ptr::null(), 0, &mut e) }, ComicStatus::NullPointer);
    // A successful call clears the message.
    assert_eq!(unsafe { comic_exact_spread(h, GAPS, [0u32].as_ptr(), 1, ptr::null(), 0, &mut e) }, ComicStatus::Ok);
    assert!(comic_last_error().is_null());
    unsafe { comic_graph_free(h) };
}
