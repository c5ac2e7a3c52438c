//! Edge-weight (rank) matrices over a graph sequence.
//!
//! Five interchangeable weighting strategies turn a [`GraphSequence`] into a
//! symmetric nonnegative matrix R with zero diagonal: graph-induced ranks,
//! overall similarity ranks, graph-depth ranks, binary edge indicators, and
//! kernel/negative-distance weights restricted to the graph.

mod binary;
mod depth;
mod induced;
mod kernel;
mod overall;

pub use binary::BinaryWeight;
pub use depth::DepthRank;
pub use induced::InducedRank;
pub use kernel::KernelWeight;
pub use overall::OverallRank;

use crate::error::{Result, RiseError};
use crate::graph::GraphSequence;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankKind {
    Induced,
    Overall,
    Depth,
    Binary,
    Kernel,
    /// Externally supplied weights (e.g. a symmetrized raw matrix).
    Custom,
}

impl RankKind {
    pub fn name(self) -> &'static str {
        match self {
            RankKind::Induced => "induced",
            RankKind::Overall => "overall",
            RankKind::Depth => "depth",
            RankKind::Binary => "binary",
            RankKind::Kernel => "kernel",
            RankKind::Custom => "custom",
        }
    }
}

/// Kernel used by [`KernelWeight`]. `sigma: None` means the median edge
/// distance of the graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum KernelSpec {
    Gaussian { sigma: Option<f64> },
    NegdistAffine,
}

/// Scheme selector carrying any per-scheme parameters; resolves to a boxed
/// strategy at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum RankSpec {
    Induced,
    Overall,
    Depth,
    Binary,
    Kernel(KernelSpec),
}

impl RankSpec {
    pub fn kind(&self) -> RankKind {
        match self {
            RankSpec::Induced => RankKind::Induced,
            RankSpec::Overall => RankKind::Overall,
            RankSpec::Depth => RankKind::Depth,
            RankSpec::Binary => RankKind::Binary,
            RankSpec::Kernel(_) => RankKind::Kernel,
        }
    }

    pub fn scheme(&self) -> Box<dyn RankScheme> {
        match *self {
            RankSpec::Induced => Box::new(InducedRank),
            RankSpec::Overall => Box::new(OverallRank),
            RankSpec::Depth => Box::new(DepthRank),
            RankSpec::Binary => Box::new(BinaryWeight),
            RankSpec::Kernel(spec) => Box::new(KernelWeight::new(spec)),
        }
    }

    /// Parse a scheme name; kernel parameters come from the caller.
    pub fn parse(name: &str, kernel: Option<KernelSpec>) -> Result<Self> {
        match name {
            "induced" => Ok(RankSpec::Induced),
            "overall" => Ok(RankSpec::Overall),
            "depth" => Ok(RankSpec::Depth),
            "binary" => Ok(RankSpec::Binary),
            "kernel" => Ok(RankSpec::Kernel(
                kernel.unwrap_or(KernelSpec::Gaussian { sigma: None }),
            )),
            other => Err(RiseError::Parse(format!("unknown rank scheme `{other}`"))),
        }
    }
}

/// Registered scheme names, in CLI order.
pub const SCHEME_NAMES: [&str; 5] = ["induced", "overall", "depth", "binary", "kernel"];

/// An edge-weighting strategy.
pub trait RankScheme: Send + Sync {
    fn kind(&self) -> RankKind;

    /// Produce the symmetric weight matrix of a graph sequence.
    fn weigh(&self, g: &GraphSequence) -> Result<RankMatrix>;
}

/// Symmetric nonnegative N x N weight matrix with zero diagonal; positive
/// entries live only on edges of G_k.
#[derive(Debug, Clone)]
pub struct RankMatrix {
    r: Vec<f64>,
    n: usize,
    scheme: RankKind,
}

impl RankMatrix {
    pub(crate) fn zero(n: usize, scheme: RankKind) -> Self {
        RankMatrix {
            r: vec![0.0; n * n],
            n,
            scheme,
        }
    }

    /// Wrap an externally built symmetric matrix, validating the invariants.
    pub fn from_symmetric_raw(rows: &[Vec<f64>], scheme: RankKind) -> Result<Self> {
        let n = rows.len();
        let mut m = RankMatrix::zero(n, scheme);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(RiseError::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(RiseError::NonFiniteEntry { row: i, col: j });
                }
                if v < 0.0 {
                    return Err(RiseError::NegativeEntry { i, j, value: v });
                }
                if i == j && v != 0.0 {
                    return Err(RiseError::NonzeroDiagonal { i, value: v });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rows[i][j] != rows[j][i] {
                    return Err(RiseError::Asymmetric {
                        i,
                        j,
                        a: rows[i][j],
                        b: rows[j][i],
                    });
                }
                m.set(i, j, rows[i][j]);
            }
        }
        Ok(m)
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.r[i * self.n + j] = v;
    }

    #[inline]
    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.r[i * self.n + j] = v;
        self.r[j * self.n + i] = v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.n + j]
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scheme(&self) -> RankKind {
        self.scheme
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.r[i * self.n..(i + 1) * self.n]
    }

    /// Sum over the full double index (each undirected edge twice).
    pub fn total(&self) -> f64 {
        self.r.iter().sum()
    }
}

/// The symmetrization map (R + R^T)/2 with the diagonal forced to zero.
/// Rank sums U_x, U_y are unchanged by it.
pub fn symmetrize(raw: &[Vec<f64>]) -> Result<RankMatrix> {
    let n = raw.len();
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(RiseError::NotSquare {
                rows: n,
                row: i,
                cols: row.len(),
            });
        }
    }
    let mut m = RankMatrix::zero(n, RankKind::Custom);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = 0.5 * (raw[i][j] + raw[j][i]);
            if !v.is_finite() {
                return Err(RiseError::NonFiniteEntry { row: i, col: j });
            }
            if v < 0.0 {
                return Err(RiseError::NegativeEntry { i, j, value: v });
            }
            m.set(i, j, v);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_is_fixed_point_on_symmetric_input() {
        let raw = vec![vec![0.0, 2.0], vec![2.0, 0.0]];
        let m = symmetrize(&raw).unwrap();
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(1, 0), 2.0);
    }

    #[test]
    fn symmetrize_averages() {
        let raw = vec![vec![0.0, 2.0], vec![0.0, 0.0]];
        let m = symmetrize(&raw).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), 1.0);
    }

    #[test]
    fn parse_scheme_names() {
        for name in SCHEME_NAMES {
            let spec = RankSpec::parse(name, None).unwrap();
            assert_eq!(spec.kind().name(), name);
        }
        assert!(RankSpec::parse("bogus", None).is_err());
    }
}
