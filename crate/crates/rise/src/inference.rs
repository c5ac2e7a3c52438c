//! Rank sums, exact permutation moments, degeneracy checks, the
//! chi-squared-calibrated statistic, permutation p-values, and condition
//! diagnostics.

use crate::error::{Result, RiseError};
use crate::rank::RankMatrix;
use crate::stats::{chi2_2_sf, std_normal_sf};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative tolerance for detecting the structural degeneracies; exact
/// zeros occur for the constant-degree and star-shaped constructions,
/// the tolerance only guards floating-point near-singularity.
const DEGENERACY_EPS: f64 = 1e-12;

/// Exact permutation p-values are used when C(N, m) is at most this many
/// assignments; larger problems fall back to Monte Carlo.
const EXACT_ENUMERATION_LIMIT: u64 = 1_000_000;

/// Stream ids for seed-derived RNG substreams (one per permutation
/// replicate, offset to keep them disjoint from data-sampling streams).
const PERMUTATION_STREAM_BASE: u64 = 1 << 32;

/// Two-sample split of the pooled observations: by convention the first m
/// indices are sample X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSplit {
    pub m: usize,
    pub n: usize,
}

impl SampleSplit {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(RiseError::InvalidSplit { m, n });
        }
        Ok(SampleSplit { m, n })
    }

    pub fn pooled(&self) -> usize {
        self.m + self.n
    }
}

/// First and second permutation-null moments of (U_x, U_y) plus the
/// weighted/difference decomposition moments and degeneracy flags.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n_pooled: usize,
    pub m: usize,
    pub n: usize,
    pub r0: f64,
    pub r1_sq: f64,
    pub rd_sq: f64,
    pub vr: f64,
    pub vd: f64,
    pub mu_x: f64,
    pub mu_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
    pub mu_w: f64,
    pub sigma_w_sq: f64,
    pub mu_diff: f64,
    pub sigma_diff_sq: f64,
    pub c1_degenerate: bool,
    pub c2_degenerate: bool,
}

impl MomentSummary {
    /// r1^2 / r0^2; 1 exactly characterizes (C1).
    pub fn c1_ratio(&self) -> Option<f64> {
        (self.r0 != 0.0).then(|| self.r1_sq / (self.r0 * self.r0))
    }

    /// (N-2) V_d / (2 (N-1) V_r); 1 exactly characterizes (C2).
    pub fn c2_ratio(&self) -> Option<f64> {
        let n = self.n_pooled as f64;
        let denom = 2.0 * (n - 1.0) * self.vr;
        (denom != 0.0).then(|| (n - 2.0) * self.vd / denom)
    }
}

/// Outcome of [`degeneracy_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degeneracy {
    Ok,
    C1,
    C2,
}

/// Within-sample rank sums: u_x sums R over ordered pairs inside X, u_y
/// inside Y (each undirected edge is counted twice by the double sum).
pub fn rank_sums(r: &RankMatrix, split: &SampleSplit) -> Result<(f64, f64)> {
    let n_pooled = split.pooled();
    if r.n() != n_pooled {
        return Err(RiseError::DimensionMismatch {
            rank_n: r.n(),
            split_n: n_pooled,
        });
    }
    let mut u_x = 0.0;
    for i in 0..split.m {
        let row = r.row(i);
        for j in 0..split.m {
            u_x += row[j];
        }
    }
    let mut u_y = 0.0;
    for i in split.m..n_pooled {
        let row = r.row(i);
        for j in split.m..n_pooled {
            u_y += row[j];
        }
    }
    Ok((u_x, u_y))
}

/// Closed-form permutation-null moments of (U_x, U_y), the weighted sum
/// U_w and the difference U_diff.
pub fn permutation_moments(r: &RankMatrix, m: usize, n: usize) -> Result<MomentSummary> {
    let n_pooled = m + n;
    if n_pooled <= 3 {
        return Err(RiseError::PooledTooSmall(n_pooled));
    }
    if m < 2 || n < 2 {
        return Err(RiseError::InvalidSplit { m, n });
    }
    if r.n() != n_pooled {
        return Err(RiseError::DimensionMismatch {
            rank_n: r.n(),
            split_n: n_pooled,
        });
    }

    let nn = n_pooled as f64;
    let (mf, nf) = (m as f64, n as f64);

    let mut r0 = 0.0;
    let mut r1_sq = 0.0;
    let mut rd_sq = 0.0;
    for i in 0..n_pooled {
        let row = r.row(i);
        let row_sum: f64 = row.iter().sum();
        let row_sq: f64 = row.iter().map(|v| v * v).sum();
        let row_mean = row_sum / (nn - 1.0);
        r0 += row_mean;
        r1_sq += row_mean * row_mean;
        rd_sq += row_sq;
    }
    r0 /= nn;
    r1_sq /= nn;
    rd_sq /= nn * (nn - 1.0);

    let vr = r1_sq - r0 * r0;
    let vd = rd_sq - r0 * r0;

    let mu_x = mf * (mf - 1.0) * r0;
    let mu_y = nf * (nf - 1.0) * r0;
    let denom = (nn - 2.0) * (nn - 3.0);
    let var_x =
        2.0 * mf * nf * (mf - 1.0) / denom * ((nf - 1.0) * vd + 2.0 * (mf - 2.0) * (nn - 1.0) * vr);
    let var_y =
        2.0 * mf * nf * (nf - 1.0) / denom * ((mf - 1.0) * vd + 2.0 * (nf - 2.0) * (nn - 1.0) * vr);
    let cov_xy = 2.0 * mf * (mf - 1.0) * nf * (nf - 1.0) / denom * (vd - 2.0 * (nn - 1.0) * vr);

    let mu_w = nn * (nf - 1.0) * (mf - 1.0) * r0 / (nn - 2.0);
    let sigma_w_sq =
        2.0 * mf * (mf - 1.0) * nf * (nf - 1.0) * ((nn - 2.0) * vd - 2.0 * (nn - 1.0) * vr)
            / ((nn - 2.0) * (nn - 2.0) * (nn - 3.0));
    let mu_diff = (nn - 1.0) * (mf - nf) * r0;
    let sigma_diff_sq = 4.0 * (nn - 1.0) * mf * nf * vr;

    let c1_degenerate = vr <= DEGENERACY_EPS * rd_sq;
    let c2_degenerate =
        ((nn - 2.0) * vd - 2.0 * (nn - 1.0) * vr).abs() <= DEGENERACY_EPS * nn * rd_sq;

    Ok(MomentSummary {
        n_pooled,
        m,
        n,
        r0,
        r1_sq,
        rd_sq,
        vr,
        vd,
        mu_x,
        mu_y,
        var_x,
        var_y,
        cov_xy,
        mu_w,
        sigma_w_sq,
        mu_diff,
        sigma_diff_sq,
        c1_degenerate,
        c2_degenerate,
    })
}

/// Classify the covariance degeneracy: (C1) V_r = 0, or (C2)
/// (N-2) V_d = 2 (N-1) V_r. C1 takes precedence when both hold.
pub fn degeneracy_check(ms: &MomentSummary) -> Degeneracy {
    if ms.c1_degenerate {
        Degeneracy::C1
    } else if ms.c2_degenerate {
        Degeneracy::C2
    } else {
        Degeneracy::Ok
    }
}

/// Condition ratios attached to a test result.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConditionRatios {
    pub a3: Option<f64>,
    pub a5: Option<f64>,
    pub c1_ratio: Option<f64>,
    pub c2_ratio: Option<f64>,
}

/// Full test output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestResult {
    pub u_x: f64,
    pub u_y: f64,
    pub t_r: f64,
    pub z_w: f64,
    pub z_diff: f64,
    pub r_max: f64,
    pub p_chi2: f64,
    pub p_zw: f64,
    pub p_max: f64,
    pub p_perm: Option<f64>,
    pub perm_mode: Option<PermutationMode>,
    pub diagnostics: MomentSummary,
    pub condition_ratios: ConditionRatios,
}

fn degeneracy_error(ms: &MomentSummary) -> RiseError {
    RiseError::Degenerate {
        condition: match degeneracy_check(ms) {
            Degeneracy::C1 => "C1: V_r = 0",
            Degeneracy::C2 => "C2: (N-2) V_d = 2 (N-1) V_r",
            Degeneracy::Ok => "near-singular covariance",
        },
    }
}

/// The RISE test: standardized decomposition Z_w, Z_diff, statistic
/// T_R = Z_w^2 + Z_diff^2, chi-squared(2) / one-sided normal / max-type
/// p-values. Errors when the permutation covariance is degenerate.
pub fn rise_test(r: &RankMatrix, split: &SampleSplit) -> Result<TestResult> {
    let ms = permutation_moments(r, split.m, split.n)?;
    if degeneracy_check(&ms) != Degeneracy::Ok || ms.sigma_w_sq <= 0.0 || ms.sigma_diff_sq <= 0.0 {
        return Err(degeneracy_error(&ms));
    }
    let (u_x, u_y) = rank_sums(r, split)?;
    let (z_w, z_diff) = standardize(u_x, u_y, &ms);
    let t_r = z_w * z_w + z_diff * z_diff;
    let r_max = z_w.max(z_diff.abs());
    let (a3, a5) = condition_diagnostics(r)?;
    Ok(TestResult {
        u_x,
        u_y,
        t_r,
        z_w,
        z_diff,
        r_max,
        p_chi2: chi2_2_sf(t_r),
        p_zw: std_normal_sf(z_w),
        p_max: max_type_pvalue(r_max),
        p_perm: None,
        perm_mode: None,
        diagnostics: ms,
        condition_ratios: ConditionRatios {
            a3: Some(a3),
            a5: Some(a5),
            c1_ratio: ms.c1_ratio(),
            c2_ratio: ms.c2_ratio(),
        },
    })
}

#[inline]
fn standardize(u_x: f64, u_y: f64, ms: &MomentSummary) -> (f64, f64) {
    let nn = ms.n_pooled as f64;
    let (mf, nf) = (ms.m as f64, ms.n as f64);
    let u_w = ((nf - 1.0) * u_x + (mf - 1.0) * u_y) / (nn - 2.0);
    let u_diff = u_x - u_y;
    let z_w = (u_w - ms.mu_w) / ms.sigma_w_sq.sqrt();
    let z_diff = (u_diff - ms.mu_diff) / ms.sigma_diff_sq.sqrt();
    (z_w, z_diff)
}

/// P(max{Z_w, |Z_diff|} >= t) for independent standard normals:
/// 1 - Phi(t) (2 Phi(t) - 1).
fn max_type_pvalue(t: f64) -> f64 {
    let phi = 1.0 - std_normal_sf(t);
    (1.0 - phi * (2.0 * phi - 1.0).max(0.0)).clamp(0.0, 1.0)
}

/// Statistic used for the permutation null.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermutationStatistic {
    TR,
    ZW,
    RMax,
}

impl std::str::FromStr for PermutationStatistic {
    type Err = RiseError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t_r" | "tr" => Ok(PermutationStatistic::TR),
            "z_w" | "zw" => Ok(PermutationStatistic::ZW),
            "r_max" | "rmax" => Ok(PermutationStatistic::RMax),
            other => Err(RiseError::Parse(format!("unknown statistic `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermutationMode {
    Exact,
    MonteCarlo,
}

/// Evaluate (u_x, u_y) for a sorted subset playing the role of sample X.
/// Accumulation order matches the exact enumerator element-for-element so
/// that the observed assignment compares bitwise-equal to its enumerated
/// copy.
fn subset_rank_sums(r: &RankMatrix, subset: &[usize], rowsums: &[f64], total: f64) -> (f64, f64) {
    let mut u_x = 0.0;
    let mut rs = 0.0;
    for (pos, &v) in subset.iter().enumerate() {
        let row = r.row(v);
        let mut cross = 0.0;
        for &u in &subset[..pos] {
            cross += row[u];
        }
        u_x += 2.0 * cross;
        rs += rowsums[v];
    }
    let u_y = total - 2.0 * rs + u_x;
    (u_x, u_y)
}

fn binomial_capped(n: usize, k: usize, cap: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n-i) is divisible by i+1
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Permutation p-value of the chosen statistic. Enumerates all C(N, m)
/// assignments exactly when there are at most 10^6 of them, otherwise
/// draws `budget` random assignments and applies the add-one estimator.
/// Moments are computed once; each assignment costs one rank-sum pass.
pub fn permutation_pvalue(
    r: &RankMatrix,
    split: &SampleSplit,
    statistic: PermutationStatistic,
    budget: usize,
    seed: u64,
) -> Result<(f64, PermutationMode)> {
    if budget < 1 {
        return Err(RiseError::EmptyBudget);
    }
    let ms = permutation_moments(r, split.m, split.n)?;
    let need_w = matches!(
        statistic,
        PermutationStatistic::TR | PermutationStatistic::ZW | PermutationStatistic::RMax
    );
    let need_diff = matches!(
        statistic,
        PermutationStatistic::TR | PermutationStatistic::RMax
    );
    if (need_w && ms.sigma_w_sq <= 0.0) || (need_diff && ms.sigma_diff_sq <= 0.0) {
        return Err(degeneracy_error(&ms));
    }

    let n_pooled = split.pooled();
    let rowsums: Vec<f64> = (0..n_pooled).map(|i| r.row(i).iter().sum()).collect();
    let total: f64 = rowsums.iter().sum();

    let stat_of = |u_x: f64, u_y: f64| -> f64 {
        let (z_w, z_diff) = standardize(u_x, u_y, &ms);
        match statistic {
            PermutationStatistic::TR => z_w * z_w + z_diff * z_diff,
            PermutationStatistic::ZW => z_w,
            PermutationStatistic::RMax => z_w.max(z_diff.abs()),
        }
    };

    let observed: Vec<usize> = (0..split.m).collect();
    let (u_x_obs, u_y_obs) = subset_rank_sums(r, &observed, &rowsums, total);
    let stat_obs = stat_of(u_x_obs, u_y_obs);

    let n_assignments = binomial_capped(n_pooled, split.m, EXACT_ENUMERATION_LIMIT);
    if n_assignments <= EXACT_ENUMERATION_LIMIT {
        let mut exceed = 0u64;
        let mut count = 0u64;
        enumerate_assignments(r, split.m, &rowsums, total, &mut |u_x, u_y| {
            count += 1;
            if stat_of(u_x, u_y) >= stat_obs {
                exceed += 1;
            }
        });
        debug_assert_eq!(count, n_assignments);
        Ok((exceed as f64 / count as f64, PermutationMode::Exact))
    } else {
        let exceed: u64 = (0..budget)
            .into_par_iter()
            .map(|rep| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(PERMUTATION_STREAM_BASE + rep as u64);
                let mut idx: Vec<usize> = (0..n_pooled).collect();
                let (subset, _) = idx.partial_shuffle(&mut rng, split.m);
                let mut subset = subset.to_vec();
                subset.sort_unstable();
                let (u_x, u_y) = subset_rank_sums(r, &subset, &rowsums, total);
                u64::from(stat_of(u_x, u_y) >= stat_obs)
            })
            .sum();
        Ok((
            (1.0 + exceed as f64) / (1.0 + budget as f64),
            PermutationMode::MonteCarlo,
        ))
    }
}

/// Depth-first enumeration of all m-subsets with incremental rank sums.
fn enumerate_assignments(
    r: &RankMatrix,
    m: usize,
    rowsums: &[f64],
    total: f64,
    visit: &mut impl FnMut(f64, f64),
) {
    struct Ctx<'a> {
        r: &'a RankMatrix,
        rowsums: &'a [f64],
        total: f64,
        n: usize,
        m: usize,
        members: Vec<usize>,
    }
    fn rec(ctx: &mut Ctx, start: usize, u_x: f64, rs: f64, visit: &mut impl FnMut(f64, f64)) {
        if ctx.members.len() == ctx.m {
            visit(u_x, ctx.total - 2.0 * rs + u_x);
            return;
        }
        let remaining = ctx.m - ctx.members.len();
        for v in start..=(ctx.n - remaining) {
            let row = ctx.r.row(v);
            let mut cross = 0.0;
            for &u in &ctx.members {
                cross += row[u];
            }
            ctx.members.push(v);
            rec(ctx, v + 1, u_x + 2.0 * cross, rs + ctx.rowsums[v], visit);
            ctx.members.pop();
        }
    }
    let mut ctx = Ctx {
        r,
        rowsums,
        total,
        n: r.n(),
        m,
        members: Vec::with_capacity(m),
    };
    rec(&mut ctx, 0, 0.0, 0.0, visit);
}

/// The two condition ratios A3 and A5 used as asymptotic-validity
/// diagnostics. The triple sum of A5 excludes s = j and is computed through
/// its quadratic expansion in O(N^2).
pub fn condition_diagnostics(r: &RankMatrix) -> Result<(f64, f64)> {
    let n = r.n();
    let nn = n as f64;
    let mut row_means = vec![0.0; n];
    let mut rd_sq = 0.0;
    for i in 0..n {
        let row = r.row(i);
        row_means[i] = row.iter().sum::<f64>() / (nn - 1.0);
        rd_sq += row.iter().map(|v| v * v).sum::<f64>();
    }
    rd_sq /= nn * (nn - 1.0);
    let r0 = row_means.iter().sum::<f64>() / nn;
    let r1_sq = row_means.iter().map(|v| v * v).sum::<f64>() / nn;
    let vr = r1_sq - r0 * r0;
    if vr <= DEGENERACY_EPS * rd_sq {
        return Err(RiseError::Degenerate {
            condition: "C1: V_r = 0",
        });
    }
    let centered: Vec<f64> = row_means.iter().map(|&m| m - r0).collect();

    let a3_num: f64 = centered.iter().map(|&t| t.abs().powi(3)).sum();
    let a3 = a3_num / (nn * vr).powf(1.5);

    let mut a5_num = 0.0;
    for i in 0..n {
        let row = r.row(i);
        let mut weighted = 0.0;
        let mut diag = 0.0;
        for j in 0..n {
            let x = row[j] * centered[j];
            weighted += x;
            diag += x * x;
        }
        a5_num += weighted * weighted - diag;
    }
    let a5 = a5_num.abs() / (nn.powi(3) * rd_sq * vr);

    Ok((a3, a5))
}
