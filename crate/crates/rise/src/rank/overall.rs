//! Overall rank: similarity midranks among all edges of G_k.

use super::{RankKind, RankMatrix, RankScheme};
use crate::error::Result;
use crate::graph::GraphSequence;
use crate::stats::midranks;

/// Edges are ranked by similarity S = -dist ascending, so the smallest
/// distance receives the largest rank |G_k| and more weight; ties share
/// midranks. Non-edges stay zero.
pub struct OverallRank;

impl RankScheme for OverallRank {
    fn kind(&self) -> RankKind {
        RankKind::Overall
    }

    fn weigh(&self, g: &GraphSequence) -> Result<RankMatrix> {
        let mut m = RankMatrix::zero(g.n(), RankKind::Overall);
        let sims: Vec<f64> = g.edges().iter().map(|e| -e.dist).collect();
        let ranks = midranks(&sims);
        for (e, rank) in g.edges().iter().zip(ranks) {
            m.set_sym(e.i as usize, e.j as usize, rank);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distance_matrix, Metric, ObservationSet};
    use crate::graph::{builder, GraphKind};

    fn line(points: &[f64]) -> crate::geometry::DistanceMatrix {
        let rows: Vec<Vec<f64>> = points.iter().map(|&p| vec![p]).collect();
        let obs = ObservationSet::from_rows(&rows).unwrap();
        distance_matrix(&obs, Metric::Euclidean).unwrap()
    }

    #[test]
    fn tied_edges_share_midranks() {
        let d = line(&[0.0, 1.0, 10.0, 11.0]);
        let g = builder(GraphKind::Mdp).build(&d, 1).unwrap();
        let r = OverallRank.weigh(&g).unwrap();
        assert_eq!(r.get(0, 1), 1.5);
        assert_eq!(r.get(2, 3), 1.5);
    }

    #[test]
    fn smaller_distance_ranks_higher() {
        let d = line(&[0.0, 2.0, 10.0, 13.0]);
        let g = builder(GraphKind::Mdp).build(&d, 1).unwrap();
        let r = OverallRank.weigh(&g).unwrap();
        assert_eq!(r.get(0, 1), 2.0); // dist 2
        assert_eq!(r.get(2, 3), 1.0); // dist 3
    }

    #[test]
    fn mdp_closed_form_r0() {
        // overall rank on 1-MDP with distinct distances: r0 = k(1+Nk/2)/(2(N-1))
        let d = line(&[0.0, 1.0, 5.0, 12.0, 30.0, 50.0]);
        let g = builder(GraphKind::Mdp).build(&d, 1).unwrap();
        let r = OverallRank.weigh(&g).unwrap();
        let n = r.n() as f64;
        let r0 = r.total() / (n * (n - 1.0));
        assert!((r0 - 0.4).abs() < 1e-15);
    }
}
