//! Samplers for the four simulation families.
//!
//! Every covariance in the study is a scaled AR(rho) correlation matrix
//! Sigma_ij = s * rho^|i-j|. Its Cholesky factor is known in closed form and
//! equals the AR(1) recursion x_1 = z_1, x_i = rho x_{i-1} + sqrt(1-rho^2) z_i,
//! so draws cost O(d) instead of a dense O(d^2) triangular solve.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

/// Mean vector of a component.
#[derive(Debug, Clone)]
pub(crate) enum MeanSpec {
    Zero,
    Constant(f64),
    Vector(Vec<f64>),
}

impl MeanSpec {
    #[inline]
    fn add_to(&self, buf: &mut [f64]) {
        match self {
            MeanSpec::Zero => {}
            MeanSpec::Constant(c) => buf.iter_mut().for_each(|v| *v += c),
            MeanSpec::Vector(mu) => buf.iter_mut().zip(mu).for_each(|(v, m)| *v += m),
        }
    }
}

/// One mixture component / plain distribution: mean + tail family over a
/// scaled AR covariance. `var_scale` multiplies the covariance matrix.
#[derive(Debug, Clone)]
pub(crate) struct Component {
    pub mean: MeanSpec,
    pub rho: f64,
    pub var_scale: f64,
    pub tail: Tail,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Tail {
    Gaussian,
    Lognormal,
    StudentT { df: f64 },
}

impl Component {
    pub fn gaussian(mean: MeanSpec, rho: f64, var_scale: f64) -> Self {
        Component {
            mean,
            rho,
            var_scale,
            tail: Tail::Gaussian,
        }
    }

    /// Draw one observation into `buf`.
    pub fn sample_into<R: Rng>(&self, rng: &mut R, buf: &mut [f64]) {
        unit_ar_into(self.rho, rng, buf);
        let sd = self.var_scale.sqrt();
        if sd != 1.0 {
            buf.iter_mut().for_each(|v| *v *= sd);
        }
        if let Tail::StudentT { df } = self.tail {
            // multivariate t: scale the whole Gaussian vector by sqrt(df/W)
            let w: f64 = ChiSquared::new(df).unwrap().sample(rng);
            let factor = (df / w).sqrt();
            buf.iter_mut().for_each(|v| *v *= factor);
        }
        self.mean.add_to(buf);
        if matches!(self.tail, Tail::Lognormal) {
            buf.iter_mut().for_each(|v| *v = v.exp());
        }
    }
}

/// A sampling distribution: single component or an even two-point mixture.
#[derive(Debug, Clone)]
pub(crate) enum Sampler {
    Single(Component),
    EvenMixture(Component, Component),
}

impl Sampler {
    pub fn sample_into<R: Rng>(&self, rng: &mut R, buf: &mut [f64]) {
        match self {
            Sampler::Single(c) => c.sample_into(rng, buf),
            Sampler::EvenMixture(a, b) => {
                if rng.random_bool(0.5) {
                    a.sample_into(rng, buf)
                } else {
                    b.sample_into(rng, buf)
                }
            }
        }
    }
}

/// Standard-normal innovations through the AR(1) recursion; the result has
/// exactly the AR(rho) correlation matrix.
#[inline]
fn unit_ar_into<R: Rng>(rho: f64, rng: &mut R, buf: &mut [f64]) {
    if rho == 0.0 {
        for v in buf.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        return;
    }
    let innov = (1.0 - rho * rho).sqrt();
    let mut prev: f64 = rng.sample(StandardNormal);
    buf[0] = prev;
    for v in buf.iter_mut().skip(1) {
        let z: f64 = rng.sample(StandardNormal);
        prev = rho * prev + innov * z;
        *v = prev;
    }
}
