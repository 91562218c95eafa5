//! Cross-checks the interval operator against an independent oracle
//! that enumerates every shortest path explicitly.

use geodetic_core::convexity::{interval, interval_of_set, is_geodetic};
use geodetic_core::enumerate::connected_graphs_up_to_iso;
use geodetic_core::graph::{Graph, VertexId};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

/// Every vertex on some shortest u-v path, found by walking all of them.
fn oracle_interval(g: &Graph, u: VertexId, v: VertexId) -> BTreeSet<VertexId> {
    let dist_u = g.bfs_distances(u).unwrap();
    let target = dist_u.get(v).expect("connected");
    let dist_v = g.bfs_distances(v).unwrap();
    let mut seen = BTreeSet::new();
    let mut stack = vec![vec![u]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if last == v {
            seen.extend(path.iter().copied());
            continue;
        }
        for &next in g.neighbors(last).unwrap() {
            let step = path.len() as u32;
            // stay on geodesics: one step further from u, exactly on budget toward v
            if dist_u.get(next) == Some(step) && dist_v.get(next) == Some(target - step) {
                let mut longer = path.clone();
                longer.push(next);
                stack.push(longer);
            }
        }
    }
    seen
}

#[test]
fn interval_matches_path_enumeration_on_all_small_graphs() {
    let graphs = connected_graphs_up_to_iso(6);
    assert_eq!(graphs.len(), 143);
    for g in &graphs {
        let ids: Vec<VertexId> = g.vertices().collect();
        for (i, &u) in ids.iter().enumerate() {
            for &v in &ids[i..] {
                let fast: BTreeSet<VertexId> = interval(g, u, v).unwrap().iter().collect();
                assert_eq!(fast, oracle_interval(g, u, v), "I({u},{v}) on {:?}", g.edges().collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn set_interval_is_the_union_of_pair_intervals() {
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    for g in connected_graphs_up_to_iso(6).iter().filter(|g| g.vertex_count() >= 3) {
        let ids: Vec<VertexId> = g.vertices().collect();
        let mut s: Vec<VertexId> = (0..3).map(|_| ids[rng.gen_range(0..ids.len())]).collect();
        s.sort_unstable();
        s.dedup();
        let fast: BTreeSet<VertexId> = interval_of_set(g, &s).unwrap().iter().collect();
        let mut slow = BTreeSet::new();
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i..] {
                slow.extend(oracle_interval(g, u, v));
            }
        }
        assert_eq!(fast, slow);
    }
}

#[test]
fn geodetic_verdict_agrees_with_the_oracle_union() {
    let mut rng = StdRng::seed_from_u64(7);
    for g in connected_graphs_up_to_iso(5).iter().filter(|g| g.vertex_count() >= 2) {
        let ids: Vec<VertexId> = g.vertices().collect();
        for _ in 0..4 {
            let take = rng.gen_range(1..=ids.len());
            let mut s = ids.clone();
            for i in (1..s.len()).rev() {
                s.swap(i, rng.gen_range(0..=i));
            }
            s.truncate(take);
            s.sort_unstable();
            let mut union = BTreeSet::new();
            for (i, &u) in s.iter().enumerate() {
                for &v in &s[i..] {
                    union.extend(oracle_interval(g, u, v));
                }
            }
            let verdict = is_geodetic(g, &s).unwrap();
            assert_eq!(verdict.is_geodetic, union.len() == g.vertex_count());
            let uncovered: BTreeSet<VertexId> = verdict.uncovered.iter().copied().collect();
            let expected: BTreeSet<VertexId> =
                g.vertices().filter(|v| !union.contains(v)).collect();
            assert_eq!(uncovered, expected);
        }
    }
}
