//! Error bars for correlated Markov-chain series.

use serde::Serialize;

/// Mean with a standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn naive_stderr(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Standard error of the mean at every blocking level (block sizes
/// 1, 2, 4, …) while at least `min_blocks` blocks remain.
pub fn blocking_levels(xs: &[f64], min_blocks: usize) -> Vec<f64> {
    let mut levels = Vec::new();
    let mut series = xs.to_vec();
    while series.len() >= min_blocks.max(2) {
        levels.push(naive_stderr(&series));
        series = series
            .chunks_exact(2)
            .map(|c| 0.5 * (c[0] + c[1]))
            .collect();
    }
    levels
}

/// Blocking estimate: the first level whose successor agrees within the
/// statistical uncertainty of the level itself, or the largest estimate
/// when no plateau is reached.
pub fn blocking_estimate(xs: &[f64]) -> Estimate {
    let m = mean(xs);
    let levels = blocking_levels(xs, 16);
    if levels.is_empty() {
        return Estimate {
            mean: m,
            stderr: naive_stderr(xs),
        };
    }
    let mut chosen = None;
    for l in 0..levels.len().saturating_sub(1) {
        let blocks = xs.len() >> l;
        let uncertainty = levels[l] / (2.0 * (blocks as f64 - 1.0)).sqrt();
        if (levels[l + 1] - levels[l]).abs() <= uncertainty {
            chosen = Some(levels[l].max(levels[l + 1]));
            break;
        }
    }
    let stderr = chosen.unwrap_or_else(|| levels.iter().cloned().fold(0.0, f64::max));
    Estimate { mean: m, stderr }
}

/// Block jackknife of a nonlinear statistic. `stat` receives the index set
/// kept in each replica.
pub fn block_jackknife<F>(n: usize, blocks: usize, stat: F) -> Estimate
where
    F: Fn(&[usize]) -> f64,
{
    let all: Vec<usize> = (0..n).collect();
    let full = stat(&all);
    let blocks = blocks.min(n).max(2);
    let size = n / blocks;
    let mut replicas = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let lo = b * size;
        let hi = if b + 1 == blocks { n } else { lo + size };
        let kept: Vec<usize> = (0..n).filter(|i| *i < lo || *i >= hi).collect();
        replicas.push(stat(&kept));
    }
    let rm = mean(&replicas);
    let var = replicas.iter().map(|r| (r - rm).powi(2)).sum::<f64>() * (blocks as f64 - 1.0)
        / blocks as f64;
    Estimate {
        mean: full,
        stderr: var.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_has_zero_error() {
        let xs = vec![1.0; 128];
        let e = blocking_estimate(&xs);
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn correlated_series_error_exceeds_naive() {
        // AR(1) with strong correlation, deterministic LCG noise
        let mut state = 12345u64;
        let mut noise = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut x = 0.0;
        let xs: Vec<f64> = (0..1 << 14)
            .map(|_| {
                x = 0.95 * x + noise();
                x
            })
            .collect();
        let naive = naive_stderr(&xs);
        let e = blocking_estimate(&xs);
        assert!(e.stderr > 3.0 * naive, "{} vs {}", e.stderr, naive);
    }

    #[test]
    fn jackknife_of_mean_matches_blocked_error() {
        let xs: Vec<f64> = (0..256).map(|i| ((i * 37) % 17) as f64).collect();
        let jk = block_jackknife(xs.len(), 32, |idx| {
            idx.iter().map(|&i| xs[i]).sum::<f64>() / idx.len() as f64
        });
        assert!((jk.mean - mean(&xs)).abs() < 1e-12);
        assert!(jk.stderr > 0.0);
    }
}
