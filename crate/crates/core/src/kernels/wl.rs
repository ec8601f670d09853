//! Weisfeiler-Lehman subtree kernel.
//!
//! All vertices start with the same label. Each round replaces a label by a
//! compressed id of (own label, sorted multiset of neighbour labels). The
//! dictionary is shared by every graph in one call, so feature vectors of a
//! batch live in the same coordinate system.

use std::collections::HashMap;

use super::SparseVec;
use crate::graph::Graph;

/// Label-count features for each graph over rounds `0..=levels`.
pub fn wl_features(graphs: &[&Graph], levels: usize) -> Vec<SparseVec> {
    let mut labels: Vec<Vec<u32>> = graphs.iter().map(|g| vec![0u32; g.n()]).collect();
    let mut features: Vec<SparseVec> = graphs
        .iter()
        .map(|g| if g.n() > 0 { vec![(0u32, g.n() as f64)] } else { Vec::new() })
        .collect();
    let mut next_id: u32 = 1;
    let mut signature: Vec<u32> = Vec::new();
    for _ in 0..levels {
        let mut dictionary: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut relabelled = Vec::with_capacity(graphs.len());
        for (g, old) in graphs.iter().zip(&labels) {
            let mut fresh = Vec::with_capacity(g.n());
            for v in 0..g.n() {
                signature.clear();
                signature.push(old[v]);
                let start = signature.len();
                signature.extend(g.neighbours(v).map(|u| old[u]));
                signature[start..].sort_unstable();
                let id = match dictionary.get(signature.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = next_id;
                        next_id += 1;
                        dictionary.insert(signature.clone(), id);
                        id
                    }
                };
                fresh.push(id);
            }
            relabelled.push(fresh);
        }
        for (feat, fresh) in features.iter_mut().zip(&relabelled) {
            let mut sorted = fresh.clone();
            sorted.sort_unstable();
            for chunk in sorted.chunk_by(|a, b| a == b) {
                feat.push((chunk[0], chunk.len() as f64));
            }
        }
        labels = relabelled;
    }
    features
}

pub fn weisfeiler_lehman(x: &Graph, x2: &Graph, levels: usize) -> f64 {
    let f = wl_features(&[x, x2], levels);
    super::sparse_dot(&f[0], &f[1])
}
