//! Graphlet counting for subsets of 3 or 4 vertices.
//!
//! Each induced subgraph is encoded as a bitmask over its `C(l, 2)` vertex
//! pairs and mapped to an isomorphism class through a lookup table. For
//! `l <= 4` the edge count plus the sorted degree sequence separates all
//! classes, which the tests confirm against permutation canonical forms.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::{Graph, PairIndex};

/// Classes for `l = 3`, indexed by edge count.
pub const GRAPHLETS_3: [&str; 4] = ["empty", "one-edge", "two-path", "triangle"];

/// Classes for `l = 4`, ordered by edge count then degree sequence.
pub const GRAPHLETS_4: [&str; 11] = [
    "empty",
    "one-edge",
    "two-disjoint-edges",
    "two-path+isolated",
    "triangle+isolated",
    "star",
    "path",
    "four-cycle",
    "paw",
    "diamond",
    "complete",
];

/// Keys (edge count, ascending degree sequence) in class order.
const KEYS_4: [(u32, [u8; 4]); 11] = [
    (0, [0, 0, 0, 0]),
    (1, [0, 0, 1, 1]),
    (2, [1, 1, 1, 1]),
    (2, [0, 1, 1, 2]),
    (3, [0, 2, 2, 2]),
    (3, [1, 1, 1, 3]),
    (3, [1, 1, 2, 2]),
    (4, [2, 2, 2, 2]),
    (4, [1, 2, 2, 3]),
    (5, [2, 2, 3, 3]),
    (6, [3, 3, 3, 3]),
];

pub fn class_count(size: usize) -> usize {
    match size {
        3 => GRAPHLETS_3.len(),
        4 => GRAPHLETS_4.len(),
        _ => 0,
    }
}

/// Whether class `class` of size `size` is connected.
pub fn is_connected_class(size: usize, class: usize) -> bool {
    match size {
        3 => class >= 2,
        4 => class >= 5,
        _ => false,
    }
}

/// Local pair order inside a subset: (0,1), (0,2), ..., lexicographic.
fn local_pairs(size: usize) -> Vec<(usize, usize)> {
    (0..size)
        .flat_map(|a| (a + 1..size).map(move |b| (a, b)))
        .collect()
}

fn classify_mask(size: usize, mask: usize) -> usize {
    let pairs = local_pairs(size);
    let mut deg = [0u8; 4];
    for (bit, &(a, b)) in pairs.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    let edges = mask.count_ones();
    if size == 3 {
        return edges as usize;
    }
    let mut key = deg;
    key.sort_unstable();
    KEYS_4
        .iter()
        .position(|&(e, d)| e == edges && d == key)
        .expect("every 4-vertex graph has a class")
}

fn table(size: usize) -> &'static [u8] {
    static T3: OnceLock<Vec<u8>> = OnceLock::new();
    static T4: OnceLock<Vec<u8>> = OnceLock::new();
    let build = |size: usize| -> Vec<u8> {
        let bits = size * (size - 1) / 2;
        (0..1usize << bits).map(|m| classify_mask(size, m) as u8).collect()
    };
    match size {
        3 => T3.get_or_init(|| build(3)),
        _ => T4.get_or_init(|| build(4)),
    }
}

/// Class of the subgraph induced on `vertices` (length 3 or 4). `override_pair`
/// replaces the indicator of one pair, for evaluating a flipped graph without
/// materializing it.
fn subset_class(x: &Graph, vertices: &[usize], override_pair: Option<(usize, usize, bool)>) -> usize {
    let size = vertices.len();
    let mut mask = 0usize;
    let mut bit = 0;
    for a in 0..size {
        for b in a + 1..size {
            let (u, v) = (vertices[a], vertices[b]);
            let present = match override_pair {
                Some((i, j, val)) if (u == i && v == j) || (u == j && v == i) => val,
                _ => x.has_edge(u, v),
            };
            if present {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    table(size)[mask] as usize
}

fn check_size(x: &Graph, size: usize) -> Result<()> {
    if size != 3 && size != 4 {
        return Err(Error::InvalidKernel(format!("graphlet size must be 3 or 4, got {size}")));
    }
    if x.n() < size {
        return Err(Error::GraphTooSmall { n: x.n(), size });
    }
    Ok(())
}

/// Counts of every class over all `C(n, size)` vertex subsets; with
/// `connected_only` only the connected classes are kept (2 for size 3,
/// 6 for size 4).
pub fn graphlet_features(x: &Graph, size: usize, connected_only: bool) -> Result<Vec<u64>> {
    check_size(x, size)?;
    let counts = all_class_counts(x, size);
    Ok(restrict(counts, size, connected_only))
}

fn restrict(counts: Vec<u64>, size: usize, connected_only: bool) -> Vec<u64> {
    if !connected_only {
        return counts;
    }
    counts
        .into_iter()
        .enumerate()
        .filter(|&(c, _)| is_connected_class(size, c))
        .map(|(_, v)| v)
        .collect()
}

fn all_class_counts(x: &Graph, size: usize) -> Vec<u64> {
    let n = x.n();
    let mut counts = vec![0u64; class_count(size)];
    let t = table(size);
    if size == 3 {
        for i in 0..n {
            for j in i + 1..n {
                let ij = x.has_edge(i, j) as usize;
                for k in j + 1..n {
                    let mask = ij | (x.has_edge(i, k) as usize) << 1 | (x.has_edge(j, k) as usize) << 2;
                    counts[t[mask] as usize] += 1;
                }
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                let ij = x.has_edge(i, j) as usize;
                for k in j + 1..n {
                    let ik = x.has_edge(i, k) as usize;
                    let jk = x.has_edge(j, k) as usize;
                    let head = ij | ik << 1 | jk << 3;
                    for m in k + 1..n {
                        let mask = head
                            | (x.has_edge(i, m) as usize) << 2
                            | (x.has_edge(j, m) as usize) << 4
                            | (x.has_edge(k, m) as usize) << 5;
                        counts[t[mask] as usize] += 1;
                    }
                }
            }
        }
    }
    counts
}

/// Features of `x` with pair `s` toggled, derived from the full counts of
/// `x` by revisiting only the subsets that contain both endpoints of `s`.
pub(crate) fn flipped_class_counts(x: &Graph, base_counts: &[u64], s: PairIndex, size: usize) -> Result<Vec<u64>> {
    let (i, j) = x.pair_unindex(s)?;
    let flipped = !x.has_edge(i, j);
    let mut counts: Vec<i64> = base_counts.iter().map(|&c| c as i64).collect();
    let others: Vec<usize> = (0..x.n()).filter(|&v| v != i && v != j).collect();
    let mut visit = |vertices: &[usize]| {
        counts[subset_class(x, vertices, None)] -= 1;
        counts[subset_class(x, vertices, Some((i, j, flipped)))] += 1;
    };
    if size == 3 {
        for &k in &others {
            visit(&[i, j, k]);
        }
    } else {
        for (a, &k) in others.iter().enumerate() {
            for &m in &others[a + 1..] {
                visit(&[i, j, k, m]);
            }
        }
    }
    Ok(counts.into_iter().map(|c| c as u64).collect())
}

/// Full (unrestricted) counts; used by the flip-family path.
pub(crate) fn full_counts(x: &Graph, size: usize) -> Result<Vec<u64>> {
    check_size(x, size)?;
    Ok(all_class_counts(x, size))
}

pub(crate) fn restrict_counts(counts: Vec<u64>, size: usize, connected_only: bool) -> Vec<u64> {
    restrict(counts, size, connected_only)
}
