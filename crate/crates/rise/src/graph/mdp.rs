//! Sequential minimum-distance non-bipartite pairing layers.

use super::blossom::max_weight_matching;
use super::{check_layer_range, GraphBuilder, GraphEdge, GraphKind, GraphSequence};
use crate::error::{Result, RiseError};
use crate::geometry::DistanceMatrix;

/// Layer l is an exact minimum-weight perfect matching (near-perfect for odd
/// n, via a zero-cost dummy vertex) of the complete graph minus the pairs
/// used by layers < l. The default is the exact primal-dual solver; the
/// greedy variant exists only behind an explicit flag and is never selected
/// silently.
pub struct MdpBuilder {
    approx: bool,
}

impl MdpBuilder {
    pub const fn exact() -> Self {
        MdpBuilder { approx: false }
    }

    pub const fn approx() -> Self {
        MdpBuilder { approx: true }
    }
}

impl GraphBuilder for MdpBuilder {
    fn kind(&self) -> GraphKind {
        GraphKind::Mdp
    }

    fn max_k(&self, n: usize) -> usize {
        n.saturating_sub(2)
    }

    fn build(&self, d: &DistanceMatrix, k: usize) -> Result<GraphSequence> {
        let n = d.n();
        check_layer_range(k, self.max_k(n), "mdp", n)?;

        let mut used = vec![false; n * n];
        let mut edges = Vec::with_capacity(k * (n / 2));
        for layer in 1..=k {
            let mut matching = if self.approx {
                greedy_matching(d, &used)
            } else {
                exact_matching(d, &used)
            };
            if matching.len() != n / 2 {
                return Err(RiseError::InfeasibleLayer {
                    layer,
                    want: "perfect matching",
                });
            }
            canonicalize_ties(d, &used, &mut matching);
            for &(i, j) in &matching {
                used[i * n + j] = true;
                used[j * n + i] = true;
                edges.push(GraphEdge {
                    i: i as u32,
                    j: j as u32,
                    layer: layer as u32,
                    dist: d.get(i, j),
                });
            }
        }

        Ok(GraphSequence::new(n, k, GraphKind::Mdp, edges, None))
    }
}

/// Minimum-weight (near-)perfect matching over the residual complete graph.
/// Runs maximum-weight matching on negated distances with the cardinality
/// constraint; odd n gets a dummy vertex with zero-cost edges.
fn exact_matching(d: &DistanceMatrix, used: &[bool]) -> Vec<(usize, usize)> {
    let n = d.n();
    let odd = n % 2 == 1;
    let nv = if odd { n + 1 } else { n };
    let mut elist = Vec::with_capacity(nv * (nv - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            if !used[i * n + j] {
                elist.push((i, j, -d.get(i, j)));
            }
        }
    }
    if odd {
        for i in 0..n {
            elist.push((i, n, 0.0));
        }
    }
    let mate = max_weight_matching(nv, &elist, true);
    let mut out = Vec::with_capacity(n / 2);
    for (i, &m) in mate.iter().enumerate().take(n) {
        if let Some(j) = m {
            if i < j && j < n {
                out.push((i, j));
            }
        }
    }
    out
}

/// Greedy pairing: repeatedly match the globally closest unmatched pair.
fn greedy_matching(d: &DistanceMatrix, used: &[bool]) -> Vec<(usize, usize)> {
    let n = d.n();
    let mut avail: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !used[i * n + j])
        .collect();
    avail.sort_by(|&(ai, aj), &(bi, bj)| {
        d.get(ai, aj)
            .total_cmp(&d.get(bi, bj))
            .then(ai.cmp(&bi))
            .then(aj.cmp(&bj))
    });
    let mut matched = vec![false; n];
    let mut out = Vec::with_capacity(n / 2);
    for (i, j) in avail {
        if !matched[i] && !matched[j] {
            matched[i] = true;
            matched[j] = true;
            out.push((i, j));
            if out.len() == n / 2 {
                break;
            }
        }
    }
    out
}

/// Resolve exact weight ties among optimal matchings toward the
/// lexicographically smaller pair set: apply zero-cost two-edge swaps while
/// they reduce the sorted edge list. Continuous data has no ties, so this
/// normally runs a single scan.
fn canonicalize_ties(d: &DistanceMatrix, used: &[bool], matching: &mut Vec<(usize, usize)>) {
    let n = d.n();
    matching.sort_unstable();
    loop {
        let mut improved = false;
        'outer: for a in 0..matching.len() {
            for b in (a + 1)..matching.len() {
                let (p, q) = matching[a];
                let (r, s) = matching[b];
                let cur = d.get(p, q) + d.get(r, s);
                for (w, x, y, z) in [(p, r, q, s), (p, s, q, r)] {
                    let (e1, e2) = (norm(w, x), norm(y, z));
                    if used[e1.0 * n + e1.1] || used[e2.0 * n + e2.1] {
                        continue;
                    }
                    let alt = d.get(e1.0, e1.1) + d.get(e2.0, e2.1);
                    if alt == cur {
                        let mut cand = matching.clone();
                        cand[a] = e1;
                        cand[b] = e2;
                        cand.sort_unstable();
                        if cand < *matching {
                            *matching = cand;
                            improved = true;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distance_matrix, Metric, ObservationSet};

    fn line(points: &[f64]) -> DistanceMatrix {
        let rows: Vec<Vec<f64>> = points.iter().map(|&p| vec![p]).collect();
        let obs = ObservationSet::from_rows(&rows).unwrap();
        distance_matrix(&obs, Metric::Euclidean).unwrap()
    }

    #[test]
    fn unique_optimal_pairing() {
        let d = line(&[0.0, 1.0, 10.0, 11.0]);
        let g = MdpBuilder::exact().build(&d, 1).unwrap();
        let e: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(e, vec![(0, 1), (2, 3)]);
        let total: f64 = g.edges().iter().map(|e| e.dist).sum();
        assert_eq!(total, 2.0);
    }

    #[test]
    fn tied_second_layer_resolves_lexicographically() {
        // residual matchings {(0,2),(1,3)} and {(0,3),(1,2)} both weigh 20
        let d = line(&[0.0, 1.0, 10.0, 11.0]);
        let g = MdpBuilder::exact().build(&d, 2).unwrap();
        let l2: Vec<(u32, u32)> = g.layer_increment(2).map(|e| (e.i, e.j)).collect();
        assert_eq!(l2, vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn odd_n_leaves_one_unmatched_per_layer() {
        let d = line(&[0.0, 1.0, 3.0, 10.0, 11.5]);
        let g = MdpBuilder::exact().build(&d, 2).unwrap();
        for l in 1..=2 {
            let inc: Vec<_> = g.layer_increment(l).collect();
            assert_eq!(inc.len(), 2);
            let mut touched = std::collections::HashSet::new();
            for e in inc {
                assert!(touched.insert(e.i));
                assert!(touched.insert(e.j));
            }
        }
    }

    #[test]
    fn infeasible_layer_is_reported() {
        // n=4 admits exactly 3 pairwise edge-disjoint perfect matchings,
        // but max_k(4)=2 blocks k=3 up front; k=2 on n=4 is still feasible.
        let d = line(&[0.0, 1.0, 10.0, 11.0]);
        assert!(MdpBuilder::exact().build(&d, 3).is_err());
        assert!(MdpBuilder::exact().build(&d, 2).is_ok());
    }

    #[test]
    fn greedy_is_distinct_strategy() {
        // greedy pairs (1,2) first here and ends with a heavier total
        let d = line(&[0.0, 2.0, 3.0, 6.0]);
        let exact = MdpBuilder::exact().build(&d, 1).unwrap();
        let greedy = MdpBuilder::approx().build(&d, 1).unwrap();
        let wt = |g: &GraphSequence| g.edges().iter().map(|e| e.dist).sum::<f64>();
        assert!(wt(&exact) <= wt(&greedy));
        assert_eq!(wt(&exact), 5.0); // (0,1) + (2,3) = 2 + 3
    }
}
