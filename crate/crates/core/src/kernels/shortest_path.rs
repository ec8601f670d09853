//! Shortest-path kernel.
//!
//! After the Floyd transformation every vertex pair carries its shortest
//! distance as an edge label. A one-step walk on the product of two such
//! complete graphs matches edges with equal labels, so the kernel reduces to
//! an inner product of distance histograms over ordered vertex pairs.
//! Disconnected pairs are left out of the histogram.

use crate::graph::Graph;

const UNREACHABLE: u32 = u32::MAX;

/// All-pairs shortest hop distances (Floyd-Warshall), row-major `n x n`.
pub fn all_pairs_distances(x: &Graph) -> Vec<u32> {
    let n = x.n();
    let mut dist = vec![UNREACHABLE; n * n];
    for v in 0..n {
        dist[v * n + v] = 0;
    }
    for (i, j) in x.edges() {
        dist[i * n + j] = 1;
        dist[j * n + i] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                let dkj = dist[k * n + j];
                if dkj != UNREACHABLE && dik + dkj < dist[i * n + j] {
                    dist[i * n + j] = dik + dkj;
                }
            }
        }
    }
    dist
}

/// `hist[d]` = number of ordered vertex pairs at finite distance `d >= 1`
/// (index 0 unused).
pub fn distance_histogram(x: &Graph) -> Vec<u64> {
    let n = x.n();
    let dist = all_pairs_distances(x);
    let mut hist = vec![0u64; n.max(1)];
    for (idx, &d) in dist.iter().enumerate() {
        if idx / n != idx % n && d != UNREACHABLE {
            hist[d as usize] += 1;
        }
    }
    hist
}

pub fn shortest_path_kernel(x: &Graph, x2: &Graph) -> f64 {
    let a = distance_histogram(x);
    let b = distance_histogram(x2);
    a.iter()
        .zip(&b)
        .skip(1)
        .map(|(p, q)| (*p as f64) * (*q as f64))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_of_three() {
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(distance_histogram(&p), vec![0, 4, 2]);
        assert_eq!(shortest_path_kernel(&p, &p), 20.0);
    }

    #[test]
    fn empty_graph_contributes_nothing() {
        let p = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(shortest_path_kernel(&p, &Graph::empty(4)), 0.0);
        assert!(shortest_path_kernel(&p, &p) > 0.0);
    }

    #[test]
    fn distances_on_cycle() {
        let c5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let d = all_pairs_distances(&c5);
        assert_eq!(d[2], 2);
        assert_eq!(d[3], 2);
        assert_eq!(d[1], 1);
        assert_eq!(distance_histogram(&c5), vec![0, 10, 10, 0, 0]);
    }
}
