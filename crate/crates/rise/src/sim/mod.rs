//! Simulation settings and the size/power bench.

mod sample;

use crate::error::{Result, RiseError};
use crate::geometry::{distance_matrix, Metric, ObservationSet};
use crate::graph::{builder, GraphKind};
use crate::inference::{rise_test, SampleSplit};
use crate::rank::{RankKind, RankSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sample::{Component, MeanSpec, Sampler, Tail};
use serde::{Deserialize, Serialize};

// RNG substream layout (all streams of the one experiment seed):
// 1 = fixed direction draw, 2 = standalone sampling, 256+r = replicate r.
const DIRECTION_STREAM: u64 = 1;
const SAMPLE_STREAM: u64 = 2;
const REPLICATE_STREAM_BASE: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Multivariate Gaussian with AR(0.6) covariance.
    GaussianI,
    /// Even Gaussian mixture with identity/scaled-identity covariances.
    MixtureII,
    /// Multivariate log-normal over AR(0.6).
    LognormalIII,
    /// Multivariate t with 5 degrees of freedom over AR(0.6).
    T5IV,
}

impl Family {
    pub fn token(self) -> &'static str {
        match self {
            Family::GaussianI => "I",
            Family::MixtureII => "II",
            Family::LognormalIII => "III",
            Family::T5IV => "IV",
        }
    }

    fn variants(self) -> &'static [Variant] {
        use Variant::*;
        match self {
            Family::GaussianI => &[Null, A, B, C, D, E],
            Family::MixtureII => &[Null, A, B, C],
            Family::LognormalIII | Family::T5IV => &[Null, A, B, C, D],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Null,
    A,
    B,
    C,
    D,
    E,
}

impl Variant {
    pub fn token(self) -> &'static str {
        match self {
            Variant::Null => "null",
            Variant::A => "a",
            Variant::B => "b",
            Variant::C => "c",
            Variant::D => "d",
            Variant::E => "e",
        }
    }
}

/// A (family, variant, dimension) triple, e.g. `I-a` at d = 200. Only
/// variants defined for the family construct; use [`SimSetting::new`] or
/// [`SimSetting::parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimSetting {
    family: Family,
    variant: Variant,
    d: usize,
}

impl SimSetting {
    pub fn new(family: Family, variant: Variant, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(RiseError::Parse(format!("dimension d={d} too small")));
        }
        if !family.variants().contains(&variant) {
            return Err(RiseError::UnknownSetting(format!(
                "{}-{}",
                family.token(),
                variant.token()
            )));
        }
        Ok(SimSetting { family, variant, d })
    }

    /// Parse tokens like `I-null`, `I-a`, `IV-d`.
    pub fn parse(token: &str, d: usize) -> Result<Self> {
        let (fam, var) = token
            .split_once('-')
            .ok_or_else(|| RiseError::UnknownSetting(token.to_string()))?;
        let family = match fam {
            "I" => Family::GaussianI,
            "II" => Family::MixtureII,
            "III" => Family::LognormalIII,
            "IV" => Family::T5IV,
            _ => return Err(RiseError::UnknownSetting(token.to_string())),
        };
        let variant = match var {
            "null" => Variant::Null,
            "a" => Variant::A,
            "b" => Variant::B,
            "c" => Variant::C,
            "d" => Variant::D,
            "e" => Variant::E,
            _ => return Err(RiseError::UnknownSetting(token.to_string())),
        };
        SimSetting::new(family, variant, d)
    }

    pub fn token(&self) -> String {
        format!("{}-{}", self.family.token(), self.variant.token())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// A setting with its per-experiment randomness fixed: the unit direction
/// of the directed-location variants is drawn once from a dedicated seed
/// stream and reused across replicates.
pub struct RealizedSetting {
    pub setting: SimSetting,
    f_x: Sampler,
    f_y: Sampler,
}

impl RealizedSetting {
    pub fn new(setting: SimSetting, seed: u64) -> Self {
        let d = setting.d;
        let ln_d = (d as f64).ln();
        let sqrt_d = (d as f64).sqrt();

        let direction = |scale: f64| -> MeanSpec {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(DIRECTION_STREAM);
            let mut mu: Vec<f64> = (0..d)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
            mu.iter_mut().for_each(|v| *v *= scale / norm);
            MeanSpec::Vector(mu)
        };
        // 1-based alternating signs on the first floor(0.05 d) coordinates
        let sparse = |coef: f64| -> MeanSpec {
            let count = (0.05 * d as f64).floor() as usize;
            let mag = coef * ln_d / sqrt_d;
            let mut mu = vec![0.0; d];
            for (idx, v) in mu.iter_mut().take(count).enumerate() {
                *v = if (idx + 1) % 2 == 1 { -mag } else { mag };
            }
            MeanSpec::Vector(mu)
        };

        use Variant::*;
        let (f_x, f_y) = match setting.family {
            Family::GaussianI => {
                let base = Sampler::Single(Component::gaussian(MeanSpec::Zero, 0.6, 1.0));
                let y = match setting.variant {
                    Null => Component::gaussian(MeanSpec::Zero, 0.6, 1.0),
                    A => Component::gaussian(MeanSpec::Constant(0.5 * ln_d / sqrt_d), 0.6, 1.0),
                    B => Component::gaussian(direction(0.5 * ln_d), 0.6, 1.0),
                    C => {
                        let sigma = 1.0 + 0.12 * ln_d / sqrt_d;
                        Component::gaussian(MeanSpec::Zero, 0.6, sigma * sigma)
                    }
                    D => Component::gaussian(MeanSpec::Zero, 0.15, 1.0),
                    E => Component::gaussian(direction(0.2 * ln_d), 0.15, 1.0),
                };
                (base, Sampler::Single(y))
            }
            Family::MixtureII => {
                let mix = |shift: f64, var1: f64, var2: f64, rho: f64| {
                    Sampler::EvenMixture(
                        Component::gaussian(MeanSpec::Constant(shift), rho, var1),
                        Component::gaussian(MeanSpec::Constant(-shift), rho, var2),
                    )
                };
                let base = mix(0.3, 1.0, 2.0, 0.0);
                let y = match setting.variant {
                    Null => mix(0.3, 1.0, 2.0, 0.0),
                    A => mix(0.3 + 0.75 / ln_d, 1.0, 2.0, 0.0),
                    B => {
                        let s = 0.12 * (50.0 / d as f64).sqrt();
                        let v1 = (1.0 + s) * (1.0 + s);
                        let v2 = (std::f64::consts::SQRT_2 + s) * (std::f64::consts::SQRT_2 + s);
                        mix(0.3, v1, v2, 0.0)
                    }
                    C => mix(0.35, 1.0, 2.0, 0.5),
                    _ => unreachable!("variant validated in SimSetting::new"),
                };
                (base, y)
            }
            Family::LognormalIII => {
                let logn = |mean: MeanSpec, var_scale: f64| Component {
                    mean,
                    rho: 0.6,
                    var_scale,
                    tail: Tail::Lognormal,
                };
                let base = Sampler::Single(logn(MeanSpec::Zero, 1.0));
                let y = match setting.variant {
                    Null => logn(MeanSpec::Zero, 1.0),
                    A => logn(MeanSpec::Constant(0.5 * ln_d / sqrt_d), 1.0),
                    B => logn(sparse(2.8), 1.0),
                    C => {
                        let sigma = 1.0 + 0.15 * ln_d / sqrt_d;
                        logn(MeanSpec::Zero, sigma * sigma)
                    }
                    D => {
                        // the mixed alternative scales the covariance by
                        // sigma itself, not sigma^2
                        let sigma = 1.0 + 0.1 * (50.0 / d as f64).powf(0.25);
                        logn(MeanSpec::Constant(0.25 * ln_d / sqrt_d), sigma)
                    }
                    _ => unreachable!(),
                };
                (base, Sampler::Single(y))
            }
            Family::T5IV => {
                let t5 = |mean: MeanSpec, rho: f64, var_scale: f64| Component {
                    mean,
                    rho,
                    var_scale,
                    tail: Tail::StudentT { df: 5.0 },
                };
                let base = Sampler::Single(t5(MeanSpec::Zero, 0.6, 1.0));
                let y = match setting.variant {
                    Null => t5(MeanSpec::Zero, 0.6, 1.0),
                    A => t5(MeanSpec::Constant(0.5 * ln_d / sqrt_d), 0.6, 1.0),
                    B => t5(sparse(2.1), 0.6, 1.0),
                    C => t5(MeanSpec::Zero, 0.1, 0.7),
                    D => t5(MeanSpec::Constant(0.5 * ln_d / sqrt_d), 0.8, 1.0),
                    _ => unreachable!(),
                };
                (base, Sampler::Single(y))
            }
        };
        RealizedSetting { setting, f_x, f_y }
    }

    /// Draw m observations from F_X followed by n from F_Y.
    pub fn sample<R: Rng>(&self, m: usize, n: usize, rng: &mut R) -> Result<ObservationSet> {
        let d = self.setting.d;
        let mut data = vec![0.0; (m + n) * d];
        for (i, row) in data.chunks_mut(d).enumerate() {
            if i < m {
                self.f_x.sample_into(rng, row);
            } else {
                self.f_y.sample_into(rng, row);
            }
        }
        ObservationSet::from_flat(data, m + n, d)
    }
}

/// Draw pooled samples for a setting: m from F_X, n from F_Y, with a
/// seed-derived substream so parallel callers see identical data.
pub fn sample_setting(
    s: SimSetting,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<(ObservationSet, SampleSplit)> {
    let realized = RealizedSetting::new(s, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SAMPLE_STREAM);
    let obs = realized.sample(m, n, &mut rng)?;
    Ok((obs, SampleSplit::new(m, n)?))
}

/// Layer-count selector: a fixed k or the floor(N^0.65) rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KChoice {
    Fixed(usize),
    N065,
}

impl KChoice {
    pub fn resolve(&self, n_pooled: usize) -> usize {
        match *self {
            KChoice::Fixed(k) => k,
            KChoice::N065 => (n_pooled as f64).powf(0.65).floor() as usize,
        }
    }
}

/// Test configuration: graph strategy, rank strategy, layer count.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MethodConfig {
    pub graph: GraphKind,
    pub rank: RankSpec,
    pub k: KChoice,
}

/// One size/power estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerReport {
    pub setting: String,
    pub variant: String,
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub graph: GraphKind,
    pub rank: RankKind,
    pub k: usize,
    pub alpha: f64,
    pub reps: usize,
    pub power: f64,
    pub stderr: f64,
    pub errors: usize,
    pub seconds: Option<f64>,
    pub seed: u64,
    pub lambda: Option<f64>,
}

/// Run `reps` independent replicates of sample -> distance -> graph ->
/// rank -> test and report the rejection rate of the chi-squared p-value at
/// level alpha. Replicates run in parallel over seed-derived substreams, so
/// the report does not depend on thread count. Replicates that hit a
/// degenerate rank matrix (or an infeasible layer) count as errors and are
/// excluded from the denominator.
pub fn estimate_power(
    s: SimSetting,
    method: &MethodConfig,
    m: usize,
    n: usize,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<PowerReport> {
    if reps < 1 {
        return Err(RiseError::Parse("reps must be >= 1".into()));
    }
    let n_pooled = m + n;
    SampleSplit::new(m, n)?;
    let k = method.k.resolve(n_pooled);
    let gb = builder(method.graph);
    if k < 1 || k > gb.max_k(n_pooled) {
        return Err(RiseError::LayerCountOutOfRange {
            k,
            max: gb.max_k(n_pooled),
            graph: method.graph.name(),
            n: n_pooled,
        });
    }
    let realized = RealizedSetting::new(s, seed);
    let split = SampleSplit::new(m, n)?;
    let scheme = method.rank.scheme();

    let outcomes: Vec<Option<bool>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(REPLICATE_STREAM_BASE + rep as u64);
            let mut run = || -> Result<bool> {
                let obs = realized.sample(m, n, &mut rng)?;
                let dist = distance_matrix(&obs, Metric::Euclidean)?;
                let g = gb.build(&dist, k)?;
                let r = scheme.weigh(&g)?;
                let res = rise_test(&r, &split)?;
                Ok(res.p_chi2 < alpha)
            };
            run().ok()
        })
        .collect();

    let errors = outcomes.iter().filter(|o| o.is_none()).count();
    let effective = reps - errors;
    let rejections = outcomes.iter().flatten().filter(|&&r| r).count();
    let power = if effective > 0 {
        rejections as f64 / effective as f64
    } else {
        0.0
    };
    let stderr = if effective > 0 {
        (power * (1.0 - power) / effective as f64).sqrt()
    } else {
        0.0
    };

    Ok(PowerReport {
        setting: s.family.token().to_string(),
        variant: s.variant.token().to_string(),
        d: s.d,
        m,
        n,
        graph: method.graph,
        rank: method.rank.kind(),
        k,
        alpha,
        reps,
        power,
        stderr,
        errors,
        seconds: None,
        seed,
        lambda: None,
    })
}

/// Power across a lambda grid with k = 2 floor(N^lambda) for knn/mdp and
/// k = floor(N^lambda) for mst (capped at each builder's maximum).
#[allow(clippy::too_many_arguments)]
pub fn power_vs_k_sweep(
    s: SimSetting,
    method: &MethodConfig,
    m: usize,
    n: usize,
    alpha: f64,
    reps: usize,
    lambda_grid: &[f64],
    seed: u64,
) -> Result<Vec<PowerReport>> {
    let n_pooled = m + n;
    let mut reports = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(RiseError::InvalidLambda(lambda));
        }
        let base = (n_pooled as f64).powf(lambda).floor() as usize;
        let raw_k = match method.graph {
            GraphKind::Mst => base,
            GraphKind::Knn | GraphKind::Mdp => 2 * base,
        };
        let k = raw_k.clamp(1, builder(method.graph).max_k(n_pooled));
        let cfg = MethodConfig {
            k: KChoice::Fixed(k),
            ..*method
        };
        let mut report = estimate_power(s, &cfg, m, n, alpha, reps, seed)?;
        report.lambda = Some(lambda);
        reports.push(report);
    }
    Ok(reports)
}
