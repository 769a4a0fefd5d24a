use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DistanceMatrix, GraphError};
use crate::imgseq::{ImageSet, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Per-point count of neighbors drawn from each provenance class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Split {
    pub k_o: usize,
    pub k_f: usize,
}

/// Directed neighborhood graph. Lists are sorted by `(distance, index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph {
    n: usize,
    neighbors: Vec<Vec<Neighbor>>,
    split: Option<Vec<Split>>,
}

impl NeighborGraph {
    /// Builds a graph from explicit lists, rejecting self-loops, duplicates and bad indices.
    pub fn from_lists(neighbors: Vec<Vec<Neighbor>>, split: Option<Vec<Split>>) -> Result<Self, GraphError> {
        let n = neighbors.len();
        for (point, list) in neighbors.iter().enumerate() {
            for (k, nb) in list.iter().enumerate() {
                if nb.index >= n {
                    return Err(GraphError::InvalidEdge {
                        point,
                        neighbor: nb.index,
                        reason: "neighbor index out of range",
                    });
                }
                if nb.index == point {
                    return Err(GraphError::InvalidEdge {
                        point,
                        neighbor: nb.index,
                        reason: "self-loop",
                    });
                }
                if list[..k].iter().any(|o| o.index == nb.index) {
                    return Err(GraphError::InvalidEdge {
                        point,
                        neighbor: nb.index,
                        reason: "duplicate edge",
                    });
                }
            }
        }
        if let Some(s) = &split {
            if s.len() != n {
                return Err(GraphError::SizeMismatch {
                    expected: n,
                    actual: s.len(),
                });
            }
        }
        Ok(Self { n, neighbors, split })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[Neighbor] {
        &self.neighbors[i]
    }

    pub fn neighbor_indices(&self, i: usize) -> Vec<usize> {
        self.neighbors[i].iter().map(|nb| nb.index).collect()
    }

    pub fn all_neighbors(&self) -> &[Vec<Neighbor>] {
        &self.neighbors
    }

    /// Present only for dual-protocol graphs.
    pub fn split(&self) -> Option<&[Split]> {
        self.split.as_deref()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].iter().any(|nb| nb.index == j)
    }
}

fn by_distance(dm: &DistanceMatrix, i: usize) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| dm.get(i, a).total_cmp(&dm.get(i, b)).then(a.cmp(&b))
}

/// The `k` nearest of `candidates` to point `i`, excluding `i`, ties to the lower index.
fn nearest(dm: &DistanceMatrix, i: usize, candidates: impl Iterator<Item = usize>, k: usize) -> Vec<usize> {
    let mut c: Vec<usize> = candidates.filter(|&j| j != i).collect();
    c.sort_by(by_distance(dm, i));
    c.truncate(k);
    c
}

fn to_neighbors(dm: &DistanceMatrix, i: usize, mut idx: Vec<usize>) -> Vec<Neighbor> {
    idx.sort_by(by_distance(dm, i));
    idx.into_iter()
        .map(|j| Neighbor {
            index: j,
            distance: dm.get(i, j),
        })
        .collect()
}

/// Each point's `k` nearest other points.
pub fn knn_plain(dm: &DistanceMatrix, k: usize) -> Result<NeighborGraph, GraphError> {
    let n = dm.n();
    if k < 1 || k > n - 1 {
        return Err(GraphError::KOutOfRange { k, n });
    }
    let neighbors = (0..n)
        .into_par_iter()
        .map(|i| to_neighbors(dm, i, nearest(dm, i, 0..n, k)))
        .collect();
    Ok(NeighborGraph {
        n,
        neighbors,
        split: None,
    })
}

fn check_dual_inputs(set: &ImageSet, dm: &DistanceMatrix, kt: usize) -> Result<usize, GraphError> {
    if dm.n() != set.len() {
        return Err(GraphError::SizeMismatch {
            expected: set.len(),
            actual: dm.n(),
        });
    }
    if !set.is_flip_augmented() {
        return Err(GraphError::NotFlipAugmented);
    }
    if kt % 2 != 0 {
        return Err(GraphError::OddKt(kt));
    }
    let n = set.len() / 2;
    // losers backfill from their own class, which must hold K_t candidates besides the point
    if kt < 2 || kt > n - 1 {
        return Err(GraphError::KtOutOfRange { kt, n });
    }
    Ok(n)
}

/// Phase 1 of the dual protocol: `K_t/2` nearest originals plus `K_t/2` nearest flipped
/// points for every point.
pub fn dual_knn_initial(set: &ImageSet, dm: &DistanceMatrix, kt: usize) -> Result<NeighborGraph, GraphError> {
    let n = check_dual_inputs(set, dm, kt)?;
    let half = kt / 2;
    let neighbors = (0..2 * n)
        .into_par_iter()
        .map(|i| {
            let mut idx = nearest(dm, i, 0..n, half);
            idx.extend(nearest(dm, i, n..2 * n, half));
            to_neighbors(dm, i, idx)
        })
        .collect();
    Ok(NeighborGraph {
        n: 2 * n,
        neighbors,
        split: Some(vec![Split { k_o: half, k_f: half }; 2 * n]),
    })
}

/// Resolves cross-set neighbors claimed by several points of the same class.
///
/// For each class, a cross-set point claimed by more than one member goes to the claimant
/// whose summed distance to all of its contested cross-set neighbors is smallest (ties to
/// the lower index). Every other claimant drops the edge and takes its next-nearest unused
/// neighbor from its own class, so each point keeps `K_t` neighbors.
pub fn abandon_reconfirm(set: &ImageSet, dm: &DistanceMatrix, graph: &NeighborGraph) -> Result<NeighborGraph, GraphError> {
    let kt = graph.neighbors.first().map_or(0, Vec::len);
    let n = check_dual_inputs(set, dm, kt)?;
    let class = |j: usize| if j < n { Provenance::Original } else { Provenance::Flipped };
    let phase_one = graph.n == 2 * n
        && graph.split.as_ref().is_some_and(|s| {
            s.iter().zip(&graph.neighbors).enumerate().all(|(i, (sp, list))| {
                let k_o = list.iter().filter(|nb| class(nb.index) == Provenance::Original).count();
                sp.k_o == kt / 2 && sp.k_f == kt / 2 && k_o == kt / 2 && list.len() == kt && list.iter().all(|nb| nb.index != i)
            })
        });
    if !phase_one {
        return Err(GraphError::NotPhaseOne);
    }

    let mut same: Vec<Vec<usize>> = Vec::with_capacity(2 * n);
    let mut cross: Vec<Vec<usize>> = Vec::with_capacity(2 * n);
    for (i, list) in graph.neighbors.iter().enumerate() {
        let (s, c): (Vec<Neighbor>, Vec<Neighbor>) = list.iter().partition(|nb| class(nb.index) == class(i));
        same.push(s.into_iter().map(|nb| nb.index).collect());
        cross.push(c.into_iter().map(|nb| nb.index).collect());
    }

    for members in [0..n, n..2 * n] {
        let mut claims: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in members.clone() {
            for &j in &cross[i] {
                claims.entry(j).or_default().push(i);
            }
        }
        claims.retain(|_, c| c.len() > 1);
        if claims.is_empty() {
            continue;
        }
        let total: Vec<f64> = members
            .clone()
            .map(|i| {
                cross[i]
                    .iter()
                    .filter(|j| claims.contains_key(j))
                    .map(|&j| dm.get(i, j))
                    .sum()
            })
            .collect();
        let base = members.start;
        for (&j, claimants) in &claims {
            let owner = *claimants
                .iter()
                .min_by(|&&a, &&b| total[a - base].total_cmp(&total[b - base]).then(a.cmp(&b)))
                .expect("contested points have claimants");
            for &i in claimants.iter().filter(|&&i| i != owner) {
                cross[i].retain(|&c| c != j);
                let next = nearest(dm, i, members.clone().filter(|q| !same[i].contains(q)), 1);
                same[i].push(next[0]);
            }
        }
    }

    let mut split = Vec::with_capacity(2 * n);
    let neighbors = (0..2 * n)
        .map(|i| {
            let (k_same, k_cross) = (same[i].len(), cross[i].len());
            split.push(if i < n {
                Split { k_o: k_same, k_f: k_cross }
            } else {
                Split { k_o: k_cross, k_f: k_same }
            });
            let mut idx = std::mem::take(&mut same[i]);
            idx.append(&mut cross[i]);
            to_neighbors(dm, i, idx)
        })
        .collect();
    Ok(NeighborGraph {
        n: 2 * n,
        neighbors,
        split: Some(split),
    })
}

/// Full dual protocol: phase-1 selection followed by [`abandon_reconfirm`].
pub fn dual_knn(set: &ImageSet, dm: &DistanceMatrix, kt: usize) -> Result<NeighborGraph, GraphError> {
    let initial = dual_knn_initial(set, dm, kt)?;
    abandon_reconfirm(set, dm, &initial)
}
