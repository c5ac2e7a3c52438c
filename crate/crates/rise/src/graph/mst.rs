//! Sequential minimum-spanning-tree layers (Kruskal on residual graphs).

use super::{check_layer_range, GraphBuilder, GraphEdge, GraphKind, GraphSequence};
use crate::error::{Result, RiseError};
use crate::geometry::DistanceMatrix;

/// Layer l is an exact MST of the complete graph minus the edges used by
/// layers < l. Edge-weight ties are broken by lexicographic (i, j) order,
/// which makes the sequence deterministic.
pub struct MstBuilder;

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

impl GraphBuilder for MstBuilder {
    fn kind(&self) -> GraphKind {
        GraphKind::Mst
    }

    fn max_k(&self, n: usize) -> usize {
        n / 2
    }

    fn build(&self, d: &DistanceMatrix, k: usize) -> Result<GraphSequence> {
        let n = d.n();
        check_layer_range(k, self.max_k(n), "mst", n)?;

        // one global sort by (dist, i, j); layers reuse it
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        all.sort_by(|&(ai, aj), &(bi, bj)| {
            d.get(ai, aj)
                .total_cmp(&d.get(bi, bj))
                .then(ai.cmp(&bi))
                .then(aj.cmp(&bj))
        });

        let mut used = vec![false; all.len()];
        let mut edges = Vec::with_capacity(k * (n - 1));
        for layer in 1..=k {
            let mut uf = UnionFind::new(n);
            let mut taken = 0;
            for (idx, &(i, j)) in all.iter().enumerate() {
                if used[idx] {
                    continue;
                }
                if uf.union(i, j) {
                    used[idx] = true;
                    edges.push(GraphEdge {
                        i: i as u32,
                        j: j as u32,
                        layer: layer as u32,
                        dist: d.get(i, j),
                    });
                    taken += 1;
                    if taken == n - 1 {
                        break;
                    }
                }
            }
            if taken != n - 1 {
                // The residual graph lost connectivity (possible when an
                // earlier layer concentrated edges on one vertex).
                return Err(RiseError::InfeasibleLayer {
                    layer,
                    want: "spanning tree",
                });
            }
        }

        Ok(GraphSequence::new(n, k, GraphKind::Mst, edges, None))
    }
}
