//! k-nearest-neighbor graph layers.

use super::{check_layer_range, GraphBuilder, GraphEdge, GraphKind, GraphSequence};
use crate::error::Result;
use crate::geometry::DistanceMatrix;

/// Layer l is the union of every vertex's first l nearest-neighbor
/// relations; the undirected edge (i,j) first appears at
/// min(position of j in i's list, position of i in j's list).
pub struct KnnBuilder;

impl GraphBuilder for KnnBuilder {
    fn kind(&self) -> GraphKind {
        GraphKind::Knn
    }

    fn max_k(&self, n: usize) -> usize {
        n.saturating_sub(1)
    }

    fn build(&self, d: &DistanceMatrix, k: usize) -> Result<GraphSequence> {
        let n = d.n();
        check_layer_range(k, self.max_k(n), "knn", n)?;

        // directed_rank[i*n + j] = position of j in i's neighbor list (1..=k)
        let mut directed_rank = vec![0u32; n * n];
        let mut order: Vec<usize> = Vec::with_capacity(n - 1);
        for i in 0..n {
            order.clear();
            order.extend((0..n).filter(|&j| j != i));
            // distance ties broken by smaller vertex index
            order.sort_by(|&a, &b| d.get(i, a).total_cmp(&d.get(i, b)).then(a.cmp(&b)));
            for (pos, &j) in order.iter().take(k).enumerate() {
                directed_rank[i * n + j] = (pos + 1) as u32;
            }
        }

        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = directed_rank[i * n + j];
                let b = directed_rank[j * n + i];
                let first = match (a, b) {
                    (0, 0) => continue,
                    (0, b) => b,
                    (a, 0) => a,
                    (a, b) => a.min(b),
                };
                edges.push(GraphEdge {
                    i: i as u32,
                    j: j as u32,
                    layer: first,
                    dist: d.get(i, j),
                });
            }
        }

        Ok(GraphSequence::new(
            n,
            k,
            GraphKind::Knn,
            edges,
            Some(directed_rank),
        ))
    }
}
