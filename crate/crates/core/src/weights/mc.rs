//! Block-parallel Monte Carlo integration with deterministic reduction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const RNG_NAME: &str = "ChaCha8";

/// Monte Carlo budget and estimator settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub samples: usize,
    pub seed: u64,
    pub blocks: usize,
    pub min_sep: f64,
    pub kurtosis_threshold: f64,
    /// Use closed-form values for isolated vertices and the single-vertex family.
    pub exact_shortcuts: bool,
    /// Run blocks on the rayon pool when the `parallel` feature is enabled.
    pub parallel: bool,
}

impl Default for McParams {
    fn default() -> Self {
        McParams {
            samples: 200_000,
            seed: 0,
            blocks: 32,
            min_sep: 1e-6,
            kurtosis_threshold: 50.0,
            exact_shortcuts: true,
            parallel: true,
        }
    }
}

impl McParams {
    pub fn with_samples(&self, samples: usize) -> Self {
        McParams { samples, ..self.clone() }
    }

    pub fn raw(&self) -> Self {
        McParams { exact_shortcuts: false, ..self.clone() }
    }
}

/// A scalar Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub rejected: u64,
    pub kurtosis: f64,
    pub median_of_means: bool,
}

impl Estimate {
    pub fn exact(v: f64) -> Self {
        Estimate { mean: v, stderr: 0.0, samples: 0, rejected: 0, kurtosis: 0.0, median_of_means: false }
    }
}

#[derive(Clone, Debug, Default)]
struct BlockStats {
    count: u64,
    rejected: u64,
    sums: Vec<[f64; 4]>,
}

/// 64-bit FNV-1a, used to derive per-integrand RNG streams from string keys.
pub fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn block_rng(seed: u64, stream: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.rotate_left(17));
    rng.set_stream(block as u64);
    rng
}

fn run_blocks<F>(params: &McParams, f: F) -> Vec<BlockStats>
where
    F: Fn(usize) -> BlockStats + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if params.parallel {
        use rayon::prelude::*;
        return (0..params.blocks).into_par_iter().map(f).collect();
    }
    (0..params.blocks).map(f).collect()
}

/// Estimates `volume · E[f]` componentwise, with `sample` drawing a point or rejecting it.
pub fn integrate_vec<T, S, F>(params: &McParams, stream: u64, volume: f64, ncomp: usize, sample: S, f: F) -> Vec<Estimate>
where
    S: Fn(&mut ChaCha8Rng) -> Option<T> + Sync,
    F: Fn(&T) -> Vec<f64> + Sync,
{
    let blocks = params.blocks.max(1);
    let per_block = params.samples.div_ceil(blocks);
    let stats = run_blocks(params, |b| {
        let mut rng = block_rng(params.seed, stream, b);
        let mut st = BlockStats { sums: vec![[0.0; 4]; ncomp], ..Default::default() };
        while (st.count as usize) < per_block {
            let Some(x) = sample(&mut rng) else {
                st.rejected += 1;
                continue;
            };
            let vals = f(&x);
            for (acc, v) in st.sums.iter_mut().zip(vals) {
                let v = v * volume;
                acc[0] += v;
                acc[1] += v * v;
                acc[2] += v * v * v;
                acc[3] += v * v * v * v;
            }
            st.count += 1;
        }
        st
    });
    let total: u64 = stats.iter().map(|s| s.count).sum();
    let rejected: u64 = stats.iter().map(|s| s.rejected).sum();
    (0..ncomp)
        .map(|c| {
            let nt = total as f64;
            let mut raw = [0.0; 4];
            for s in &stats {
                for (r, v) in raw.iter_mut().zip(s.sums[c]) {
                    *r += v;
                }
            }
            let mean = raw[0] / nt;
            let var = (raw[1] / nt - mean * mean).max(0.0);
            let m4 = raw[3] / nt - 4.0 * mean * raw[2] / nt + 6.0 * mean * mean * raw[1] / nt - 3.0 * mean.powi(4);
            let kurtosis = if var > 0.0 { m4 / (var * var) } else { 0.0 };
            let mut est = Estimate {
                mean,
                stderr: (var / nt).sqrt(),
                samples: total,
                rejected,
                kurtosis,
                median_of_means: false,
            };
            if kurtosis > params.kurtosis_threshold && stats.len() > 2 {
                let mut means: Vec<f64> = stats.iter().map(|s| s.sums[c][0] / s.count as f64).collect();
                let bm = means.iter().sum::<f64>() / means.len() as f64;
                let bv = means.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
                means.sort_by(f64::total_cmp);
                let k = means.len();
                est.mean = if k % 2 == 1 { means[k / 2] } else { 0.5 * (means[k / 2 - 1] + means[k / 2]) };
                est.stderr = 1.2533 * (bv / k as f64).sqrt();
                est.median_of_means = true;
            }
            est
        })
        .collect()
}

pub fn integrate<T, S, F>(params: &McParams, stream: u64, volume: f64, sample: S, f: F) -> Estimate
where
    S: Fn(&mut ChaCha8Rng) -> Option<T> + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    integrate_vec(params, stream, volume, 1, sample, |x| vec![f(x)]).remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn uniform_mean_and_determinism() {
        let p = McParams { samples: 20_000, ..Default::default() };
        let a = integrate(&p, 1, 2.0, |r| Some(r.random::<f64>()), |x| *x);
        let b = integrate(&p, 1, 2.0, |r| Some(r.random::<f64>()), |x| *x);
        assert_eq!(a, b);
        assert!((a.mean - 1.0).abs() < 4.0 * a.stderr);
        let seq = integrate(&McParams { parallel: false, ..p }, 1, 2.0, |r| Some(r.random::<f64>()), |x| *x);
        assert_eq!(a, seq);
    }
}
