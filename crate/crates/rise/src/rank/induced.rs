//! Graph-induced rank: the number of layers containing each edge.

use super::{RankKind, RankMatrix, RankScheme};
use crate::error::Result;
use crate::graph::{GraphKind, GraphSequence};

/// For mst/mdp an edge first appearing in layer l is in k-l+1 nested layers,
/// so R_ij = k - l + 1. For knn the count is kept directed (k - position + 1
/// for each vertex's neighbor list) and then symmetrized as (D + D^T)/2.
pub struct InducedRank;

impl RankScheme for InducedRank {
    fn kind(&self) -> RankKind {
        RankKind::Induced
    }

    fn weigh(&self, g: &GraphSequence) -> Result<RankMatrix> {
        let n = g.n();
        let k = g.k() as f64;
        let mut m = RankMatrix::zero(n, RankKind::Induced);
        match g.kind() {
            GraphKind::Knn => {
                for e in g.edges() {
                    let (i, j) = (e.i as usize, e.j as usize);
                    let dij = g
                        .directed_rank(i, j)
                        .map_or(0.0, |pos| k - pos as f64 + 1.0);
                    let dji = g
                        .directed_rank(j, i)
                        .map_or(0.0, |pos| k - pos as f64 + 1.0);
                    m.set_sym(i, j, 0.5 * (dij + dji));
                }
            }
            GraphKind::Mst | GraphKind::Mdp => {
                for e in g.edges() {
                    m.set_sym(e.i as usize, e.j as usize, k - e.layer as f64 + 1.0);
                }
            }
        }
        Ok(m)
    }
}
