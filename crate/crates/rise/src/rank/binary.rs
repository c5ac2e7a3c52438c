//! Binary weights: the unweighted edge-count statistic within this framework.

use super::{RankKind, RankMatrix, RankScheme};
use crate::error::Result;
use crate::graph::GraphSequence;

pub struct BinaryWeight;

impl RankScheme for BinaryWeight {
    fn kind(&self) -> RankKind {
        RankKind::Binary
    }

    fn weigh(&self, g: &GraphSequence) -> Result<RankMatrix> {
        let mut m = RankMatrix::zero(g.n(), RankKind::Binary);
        for e in g.edges() {
            m.set_sym(e.i as usize, e.j as usize, 1.0);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{distance_matrix, Metric, ObservationSet};
    use crate::graph::{builder, GraphKind};

    #[test]
    fn edge_count_identity() {
        let rows: Vec<Vec<f64>> = [0.0, 2.0, 5.0, 9.0, 14.0]
            .iter()
            .map(|&p| vec![p])
            .collect();
        let obs = ObservationSet::from_rows(&rows).unwrap();
        let d = distance_matrix(&obs, Metric::Euclidean).unwrap();
        for kind in [GraphKind::Knn, GraphKind::Mst, GraphKind::Mdp] {
            let g = builder(kind).build(&d, 2).unwrap();
            let r = BinaryWeight.weigh(&g).unwrap();
            assert_eq!(0.5 * r.total(), g.edge_count() as f64);
        }
    }

    #[test]
    fn complete_graph_all_ones() {
        let rows: Vec<Vec<f64>> = [0.0, 1.0, 3.0, 7.0].iter().map(|&p| vec![p]).collect();
        let obs = ObservationSet::from_rows(&rows).unwrap();
        let d = distance_matrix(&obs, Metric::Euclidean).unwrap();
        let g = builder(GraphKind::Knn).build(&d, 3).unwrap();
        let r = BinaryWeight.weigh(&g).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(r.get(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }
    }
}
