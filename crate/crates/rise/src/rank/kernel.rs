//! Kernel / negative-distance weights restricted to graph edges.

use super::{KernelSpec, RankKind, RankMatrix, RankScheme};
use crate::error::{Result, RiseError};
use crate::graph::GraphSequence;

/// Raw edge weights are either Gaussian kernel values exp(-d^2 / (2 sigma^2))
/// or the affine negative distance max_dist - d + 1; both are rescaled by the
/// minimum positive raw weight so that every positive entry is >= 1.
pub struct KernelWeight {
    spec: KernelSpec,
}

impl KernelWeight {
    pub fn new(spec: KernelSpec) -> Self {
        KernelWeight { spec }
    }

    fn resolve_sigma(&self, g: &GraphSequence) -> Result<f64> {
        let KernelSpec::Gaussian { sigma } = self.spec else {
            unreachable!()
        };
        let sigma = match sigma {
            Some(s) => s,
            None => {
                // default bandwidth: median edge distance of G_k
                let mut sims: Vec<f64> = g.edges().iter().map(|e| e.dist).collect();
                sims.sort_by(f64::total_cmp);
                let len = sims.len();
                if len % 2 == 1 {
                    sims[len / 2]
                } else {
                    0.5 * (sims[len / 2 - 1] + sims[len / 2])
                }
            }
        };
        if sigma > 0.0 {
            Ok(sigma)
        } else {
            Err(RiseError::InvalidBandwidth(sigma))
        }
    }
}

impl RankScheme for KernelWeight {
    fn kind(&self) -> RankKind {
        RankKind::Kernel
    }

    fn weigh(&self, g: &GraphSequence) -> Result<RankMatrix> {
        let mut m = RankMatrix::zero(g.n(), RankKind::Kernel);
        if g.edge_count() == 0 {
            return Ok(m);
        }
        let raw: Vec<f64> = match self.spec {
            KernelSpec::Gaussian { .. } => {
                let sigma = self.resolve_sigma(g)?;
                g.edges()
                    .iter()
                    .map(|e| (-e.dist * e.dist / (2.0 * sigma * sigma)).exp())
                    .collect()
            }
            KernelSpec::NegdistAffine => {
                let max_dist = g
                    .edges()
                    .iter()
                    .map(|e| e.dist)
                    .fold(f64::NEG_INFINITY, f64::max);
                g.edges().iter().map(|e| max_dist - e.dist + 1.0).collect()
            }
        };
        let min_pos = raw
            .iter()
            .copied()
            .filter(|&w| w > 0.0)
            .fold(f64::INFINITY, f64::min);
        for (e, w) in g.edges().iter().zip(raw) {
            if w > 0.0 {
                m.set_sym(e.i as usize, e.j as usize, w / min_pos);
            }
        }
        Ok(m)
    }
}
