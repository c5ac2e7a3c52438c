//! Brute-force oracles shared by the integration suites. Everything here is
//! independent of the library's algorithmic paths: plain double loops,
//! Prufer-sequence tree enumeration, and recursive matching enumeration.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rise::{DistanceMatrix, ObservationSet, RankMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Gaussian observation rows.
pub fn gaussian_rows(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect()
}

pub fn gaussian_obs(n: usize, d: usize, rng: &mut ChaCha8Rng) -> ObservationSet {
    ObservationSet::from_rows(&gaussian_rows(n, d, rng)).unwrap()
}

/// Plain double-loop Euclidean distances.
pub fn naive_distances(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..rows[i].len() {
                let t = rows[i][k] - rows[j][k];
                acc += t * t;
            }
            d[i][j] = acc.sqrt();
        }
    }
    d
}

/// Minimum spanning-tree weight over all labeled trees (Prufer enumeration),
/// restricted to `allowed` edges. Returns None when no admissible spanning
/// tree exists. Exact for n <= 9 at reasonable cost.
pub fn min_spanning_tree_bruteforce(
    d: &DistanceMatrix,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<f64> {
    let n = d.n();
    assert!((2..=9).contains(&n));
    if n == 2 {
        return allowed(0, 1).then(|| d.get(0, 1));
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut best: Option<f64> = None;
    loop {
        if let Some(w) = prufer_tree_weight(&seq, n, &allowed, d) {
            if best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == len {
                return best;
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// Decode one Prufer sequence and accumulate the tree weight, rejecting
/// trees that use a disallowed edge.
fn prufer_tree_weight(
    seq: &[usize],
    n: usize,
    allowed: &impl Fn(usize, usize) -> bool,
    d: &DistanceMatrix,
) -> Option<f64> {
    let mut degree = vec![1u32; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut total = 0.0;
    let mut ptr = 0usize;
    let mut leaf = usize::MAX;
    for &v in seq {
        let u = if leaf != usize::MAX {
            std::mem::replace(&mut leaf, usize::MAX)
        } else {
            while degree[ptr] != 1 {
                ptr += 1;
            }
            let u = ptr;
            ptr += 1;
            u
        };
        if !allowed(u.min(v), u.max(v)) {
            return None;
        }
        total += d.get(u, v);
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        }
    }
    // final edge joins the remaining leaf (or pointer scan) to vertex n-1
    let u = if leaf != usize::MAX {
        leaf
    } else {
        while degree[ptr] != 1 {
            ptr += 1;
        }
        ptr
    };
    if !allowed(u.min(n - 1), u.max(n - 1)) {
        return None;
    }
    Some(total + d.get(u, n - 1))
}

/// Minimum-weight perfect matching (even n) or near-perfect matching
/// leaving one vertex unmatched (odd n) by full enumeration over `allowed`
/// residual edges. Returns (weight, pairs) of the optimum, None if
/// infeasible. Exact for n <= 8.
pub fn min_matching_bruteforce(
    d: &DistanceMatrix,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<(f64, Vec<(usize, usize)>)> {
    let n = d.n();
    fn rec(
        n: usize,
        d: &DistanceMatrix,
        allowed: &impl Fn(usize, usize) -> bool,
        used: &mut Vec<bool>,
        skip_budget: &mut usize,
        acc: f64,
        pairs: &mut Vec<(usize, usize)>,
        best: &mut Option<(f64, Vec<(usize, usize)>)>,
    ) {
        let Some(v) = (0..n).find(|&v| !used[v]) else {
            if best.as_ref().is_none_or(|(b, _)| acc < *b) {
                *best = Some((acc, pairs.clone()));
            }
            return;
        };
        used[v] = true;
        if *skip_budget > 0 {
            *skip_budget -= 1;
            rec(n, d, allowed, used, skip_budget, acc, pairs, best);
            *skip_budget += 1;
        }
        for w in (v + 1)..n {
            if !used[w] && allowed(v, w) {
                used[w] = true;
                pairs.push((v, w));
                rec(
                    n,
                    d,
                    allowed,
                    used,
                    skip_budget,
                    acc + d.get(v, w),
                    pairs,
                    best,
                );
                pairs.pop();
                used[w] = false;
            }
        }
        used[v] = false;
    }
    let mut best = None;
    let mut used = vec![false; n];
    let mut skip = n % 2; // odd n leaves exactly one vertex unmatched
    rec(
        n,
        d,
        &allowed,
        &mut used,
        &mut skip,
        0.0,
        &mut Vec::new(),
        &mut best,
    );
    best
}

/// All m-subsets of 0..n (small n only).
pub fn all_subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, m, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, m, 0, &mut cur, &mut out);
    out
}

/// Rank sums of an explicit label subset by direct double loops.
pub fn subset_rank_sums_naive(r: &RankMatrix, subset: &[usize]) -> (f64, f64) {
    let n = r.n();
    let in_x: Vec<bool> = {
        let mut v = vec![false; n];
        for &i in subset {
            v[i] = true;
        }
        v
    };
    let mut u_x = 0.0;
    let mut u_y = 0.0;
    for i in 0..n {
        for j in 0..n {
            if in_x[i] && in_x[j] {
                u_x += r.get(i, j);
            } else if !in_x[i] && !in_x[j] {
                u_y += r.get(i, j);
            }
        }
    }
    (u_x, u_y)
}

/// Mean/variance/covariance of (U_x, U_y) over the exhaustive permutation
/// null (all C(N, m) assignments equally likely).
pub struct EnumeratedMoments {
    pub e_x: f64,
    pub e_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
    pub count: usize,
}

pub fn enumerate_label_moments(r: &RankMatrix, m: usize) -> EnumeratedMoments {
    let n = r.n();
    let subsets = all_subsets(n, m);
    let count = subsets.len();
    let values: Vec<(f64, f64)> = subsets
        .iter()
        .map(|s| subset_rank_sums_naive(r, s))
        .collect();
    let e_x = values.iter().map(|v| v.0).sum::<f64>() / count as f64;
    let e_y = values.iter().map(|v| v.1).sum::<f64>() / count as f64;
    let var_x = values.iter().map(|v| (v.0 - e_x).powi(2)).sum::<f64>() / count as f64;
    let var_y = values.iter().map(|v| (v.1 - e_y).powi(2)).sum::<f64>() / count as f64;
    let cov_xy = values
        .iter()
        .map(|v| (v.0 - e_x) * (v.1 - e_y))
        .sum::<f64>()
        / count as f64;
    EnumeratedMoments {
        e_x,
        e_y,
        var_x,
        var_y,
        cov_xy,
        count,
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
