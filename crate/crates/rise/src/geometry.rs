//! Observation ingestion and distance-matrix construction.
//!
//! Observations are rows of a dense matrix (matrix-valued data enters as
//! row-major flattenings with a shape hint). The similarity used everywhere
//! downstream is the negated pairwise Euclidean/Frobenius distance.

use crate::error::{Result, RiseError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Pairwise metric. Frobenius on flattened matrices coincides numerically
/// with Euclidean on the flattened vectors; it exists as an explicit mode
/// for matrix-valued data and requires a shape hint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Frobenius,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Frobenius => "frobenius",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = RiseError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "frobenius" => Ok(Metric::Frobenius),
            other => Err(RiseError::Parse(format!("unknown metric `{other}`"))),
        }
    }
}

/// N observations of dimension d, one per row.
#[derive(Debug, Clone)]
pub struct ObservationSet {
    data: Vec<f64>,
    n: usize,
    dim: usize,
    shape_hint: Option<(usize, usize)>,
}

impl ObservationSet {
    /// Build from rows, checking finiteness and the N >= 4 minimum
    /// (smallest pooled size at which both samples can have m, n >= 2).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() < 4 {
            return Err(RiseError::TooFewObservations(rows.len()));
        }
        let dim = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(RiseError::RaggedRow {
                    row: i,
                    got: row.len(),
                    expected: dim,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(RiseError::NonFiniteEntry { row: i, col: j });
                }
                data.push(v);
            }
        }
        Ok(ObservationSet {
            data,
            n: rows.len(),
            dim,
            shape_hint: None,
        })
    }

    /// Build from a flat row-major buffer of `n` rows.
    pub fn from_flat(data: Vec<f64>, n: usize, dim: usize) -> Result<Self> {
        assert_eq!(data.len(), n * dim, "flat buffer length mismatch");
        if n < 4 {
            return Err(RiseError::TooFewObservations(n));
        }
        for (idx, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(RiseError::NonFiniteEntry {
                    row: idx / dim,
                    col: idx % dim,
                });
            }
        }
        Ok(ObservationSet {
            data,
            n,
            dim,
            shape_hint: None,
        })
    }

    /// Declare the matrix shape of each flattened row.
    pub fn with_shape_hint(mut self, rows: usize, cols: usize) -> Result<Self> {
        if rows * cols != self.dim {
            return Err(RiseError::ShapeMismatch {
                rows,
                cols,
                dim: self.dim,
            });
        }
        self.shape_hint = Some((rows, cols));
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape_hint(&self) -> Option<(usize, usize)> {
        self.shape_hint
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Dense symmetric nonnegative distance matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    d: Vec<f64>,
    n: usize,
}

const SYMMETRY_REL_TOL: f64 = 1e-9;
const DIAGONAL_TOL: f64 = 1e-12;

impl DistanceMatrix {
    /// Pairwise distances between observation rows. Row blocks are computed
    /// in parallel; every entry is independent, so the result is bitwise
    /// deterministic regardless of thread count.
    pub fn from_observations(obs: &ObservationSet, metric: Metric) -> Result<Self> {
        if metric == Metric::Frobenius && obs.shape_hint().is_none() {
            return Err(RiseError::MissingShapeHint);
        }
        let n = obs.len();
        let mut d = vec![0.0; n * n];
        d.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let zi = obs.row(i);
            for (j, slot) in row.iter_mut().enumerate() {
                if i == j {
                    continue;
                }
                let zj = obs.row(j);
                let mut acc = 0.0;
                for (a, b) in zi.iter().zip(zj) {
                    let t = a - b;
                    acc += t * t;
                }
                *slot = acc.sqrt();
            }
        });
        Ok(DistanceMatrix { d, n })
    }

    /// Validate a precomputed square matrix: symmetry within relative
    /// tolerance (then symmetrized exactly by averaging), zero diagonal,
    /// nonnegative entries.
    pub fn validate(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(RiseError::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
        }
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for (j, &v) in rows[i].iter().enumerate() {
                if !v.is_finite() {
                    return Err(RiseError::NonFiniteEntry { row: i, col: j });
                }
                if i == j {
                    if v.abs() > DIAGONAL_TOL {
                        return Err(RiseError::NonzeroDiagonal { i, value: v });
                    }
                    continue;
                }
                if v < 0.0 {
                    return Err(RiseError::NegativeEntry { i, j, value: v });
                }
                d[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let a = d[i * n + j];
                let b = d[j * n + i];
                let diff = (a - b).abs();
                if diff > SYMMETRY_REL_TOL * a.abs().max(b.abs()) {
                    return Err(RiseError::Asymmetric { i, j, a, b });
                }
                let avg = 0.5 * (a + b);
                d[i * n + j] = avg;
                d[j * n + i] = avg;
            }
        }
        Ok(DistanceMatrix { d, n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Median over the n(n-1)/2 off-diagonal upper-triangle entries.
    pub fn median_offdiag(&self) -> f64 {
        let mut v: Vec<f64> = (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        v.sort_by(f64::total_cmp);
        let len = v.len();
        if len == 0 {
            return 0.0;
        }
        if len % 2 == 1 {
            v[len / 2]
        } else {
            0.5 * (v[len / 2 - 1] + v[len / 2])
        }
    }
}

/// Compute the distance matrix of an observation set under the given metric.
pub fn distance_matrix(obs: &ObservationSet, metric: Metric) -> Result<DistanceMatrix> {
    DistanceMatrix::from_observations(obs, metric)
}

/// Validate a raw square matrix as a distance matrix.
pub fn validate_distance_matrix(rows: &[Vec<f64>]) -> Result<DistanceMatrix> {
    DistanceMatrix::validate(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(rows: &[&[f64]]) -> ObservationSet {
        ObservationSet::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn one_dimensional_points() {
        let o = obs(&[&[0.0], &[3.0], &[4.0], &[10.0]]);
        let d = distance_matrix(&o, Metric::Euclidean).unwrap();
        assert_eq!(d.get(0, 1), 3.0);
        assert_eq!(d.get(0, 2), 4.0);
        assert_eq!(d.get(1, 2), 1.0);
        assert_eq!(d.get(1, 0), 3.0);
        assert_eq!(d.get(0, 0), 0.0);
    }

    #[test]
    fn identical_rows_zero_distance() {
        let o = obs(&[&[1.0, 2.0], &[1.0, 2.0], &[0.0, 0.0], &[5.0, 5.0]]);
        let d = distance_matrix(&o, Metric::Euclidean).unwrap();
        assert_eq!(d.get(0, 1), 0.0);
    }

    #[test]
    fn non_finite_entry_named() {
        let rows = vec![
            vec![0.0, 1.0],
            vec![f64::NAN, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
        ];
        match ObservationSet::from_rows(&rows) {
            Err(RiseError::NonFiniteEntry { row: 1, col: 0 }) => {}
            other => panic!("expected NonFiniteEntry(1,0), got {other:?}"),
        }
    }

    #[test]
    fn frobenius_needs_shape_hint() {
        let o = obs(&[&[0.0; 4], &[1.0; 4], &[2.0; 4], &[3.0; 4]]);
        assert!(matches!(
            distance_matrix(&o, Metric::Frobenius),
            Err(RiseError::MissingShapeHint)
        ));
        let o = o.with_shape_hint(2, 2).unwrap();
        let df = distance_matrix(&o, Metric::Frobenius).unwrap();
        let de = distance_matrix(&o, Metric::Euclidean).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(df.get(i, j), de.get(i, j));
            }
        }
    }

    #[test]
    fn validate_accepts_and_symmetrizes() {
        let d = validate_distance_matrix(&[vec![0.0, 1.0], vec![1.0 + 1e-12, 0.0]]).unwrap();
        assert_eq!(d.get(0, 1), d.get(1, 0));
    }

    #[test]
    fn validate_rejects_asymmetric() {
        match validate_distance_matrix(&[vec![0.0, 1.0], vec![2.0, 0.0]]) {
            Err(RiseError::Asymmetric { i: 0, j: 1, .. }) => {}
            other => panic!("expected Asymmetric, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_negative() {
        match validate_distance_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]) {
            Err(RiseError::NegativeEntry { .. }) => {}
            other => panic!("expected NegativeEntry, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_nonzero_diagonal() {
        match validate_distance_matrix(&[vec![1e-3, 1.0], vec![1.0, 0.0]]) {
            Err(RiseError::NonzeroDiagonal { i: 0, .. }) => {}
            other => panic!("expected NonzeroDiagonal, got {other:?}"),
        }
    }
}
