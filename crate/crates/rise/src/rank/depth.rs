//! Graph-depth rank: layer count plus a normalized within-increment rank.

use super::{RankKind, RankMatrix, RankScheme};
use crate::error::Result;
use crate::graph::GraphSequence;
use crate::stats::midranks;

/// An edge first appearing in layer l gets (k - l + 1) - 1 + r_ij, where
/// r_ij is its similarity midrank within the layer increment normalized to
/// (0, 1]: the most similar edge of the increment scores 1, the least 1/M.
pub struct DepthRank;

impl RankScheme for DepthRank {
    fn kind(&self) -> RankKind {
        RankKind::Depth
    }

    fn weigh(&self, g: &GraphSequence) -> Result<RankMatrix> {
        let mut m = RankMatrix::zero(g.n(), RankKind::Depth);
        let k = g.k() as f64;
        for layer in 1..=g.k() {
            let inc: Vec<_> = g.layer_increment(layer).collect();
            if inc.is_empty() {
                continue;
            }
            let sims: Vec<f64> = inc.iter().map(|e| -e.dist).collect();
            let ranks = midranks(&sims);
            let m_count = inc.len() as f64;
            for (e, rank) in inc.iter().zip(ranks) {
                let normalized = rank / m_count;
                m.set_sym(
                    e.i as usize,
                    e.j as usize,
                    (k - layer as f64 + 1.0) - 1.0 + normalized,
                );
            }
        }
        Ok(m)
    }
}
