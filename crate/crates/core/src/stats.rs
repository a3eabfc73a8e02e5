//! Sample statistics and power-law fits for runtime scaling.

use num_traits::Float;
use serde::Serialize;

use crate::error::{EdoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSummary<F> {
    pub count: usize,
    pub mean: F,
    /// Sample standard deviation (n - 1 denominator); zero for a single value.
    pub std: F,
}

pub fn summarize<F: Float>(values: &[F]) -> Option<SampleSummary<F>> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let nf = F::from(n)?;
    let mean = values.iter().fold(F::zero(), |a, &v| a + v) / nf;
    let std = if n == 1 {
        F::zero()
    } else {
        let ss = values
            .iter()
            .fold(F::zero(), |a, &v| a + (v - mean) * (v - mean));
        (ss / F::from(n - 1)?).sqrt()
    };
    Some(SampleSummary {
        count: n,
        mean,
        std,
    })
}

/// `y ~ exp(intercept) * x^slope`, fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit<F> {
    pub slope: F,
    pub intercept: F,
    pub r_squared: F,
}

impl<F: Float> PowerLawFit<F> {
    pub fn predict(&self, x: F) -> F {
        (self.intercept + self.slope * x.ln()).exp()
    }
}

/// Ordinary least squares on `(ln x, ln y)`.
pub fn loglog_slope<F: Float>(points: &[(F, F)]) -> Result<PowerLawFit<F>> {
    if points.len() < 2 {
        return Err(EdoError::InvalidFit(format!(
            "need at least two points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(x, y)| !(x > F::zero() && y > F::zero()))
    {
        return Err(EdoError::InvalidFit("coordinates must be positive".into()));
    }
    let n = F::from(points.len()).expect("point count fits the float type");
    let logs: Vec<(F, F)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().fold(F::zero(), |a, p| a + p.0) / n;
    let my = logs.iter().fold(F::zero(), |a, p| a + p.1) / n;
    let (mut sxx, mut sxy, mut syy) = (F::zero(), F::zero(), F::zero());
    for &(lx, ly) in &logs {
        let (dx, dy) = (lx - mx, ly - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx <= F::epsilon() * n {
        return Err(EdoError::InvalidFit("all x values are identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = logs.iter().fold(F::zero(), |a, &(lx, ly)| {
        let r = ly - (intercept + slope * lx);
        a + r * r
    });
    let r_squared = if syy > F::zero() {
        F::one() - ss_res / syy
    } else {
        F::one()
    };
    Ok(PowerLawFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn summaries() {
        let s = summarize(&[10.0, 10.0, 10.0]).unwrap();
        assert_eq!((s.count, s.mean, s.std), (3, 10.0, 0.0));
        let s = summarize(&[8.0f64, 12.0]).unwrap();
        assert_eq!(s.mean, 10.0);
        assert!((s.std - 8.0f64.sqrt()).abs() < 1e-12);
        assert!(summarize::<f64>(&[]).is_none());
        assert_eq!(summarize(&[4.0f32]).unwrap().std, 0.0);
    }

    #[test]
    fn exact_power_laws() {
        let f = loglog_slope(&[(10.0, 100.0), (100.0, 10_000.0)]).unwrap();
        assert!((f.slope - 2.0f64).abs() < 1e-12);
        let f = loglog_slope(&[(2.0, 8.0), (4.0, 64.0), (8.0, 512.0)]).unwrap();
        assert!((f.slope - 3.0f64).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!((f.predict(16.0) - 4096.0).abs() < 1e-6);
    }

    #[test]
    fn noisy_cubic() {
        // Hand-computed: slope 2.9847, r^2 0.99995.
        let f = loglog_slope(&[(2.0, 8.1), (4.0, 63.0), (8.0, 520.0)]).unwrap();
        assert!((f.slope - 3.0f64).abs() < 0.05, "{}", f.slope);
        assert!(f.r_squared > 0.999);
    }

    #[test]
    fn single_precision() {
        let f = loglog_slope(&[(2.0f32, 8.0), (4.0, 64.0), (8.0, 512.0)]).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-4);
    }

    #[test]
    fn fit_errors() {
        assert!(loglog_slope(&[(1.0, 1.0)]).is_err());
        assert!(loglog_slope(&[(1.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(loglog_slope(&[(1.0, -1.0), (2.0, 2.0)]).is_err());
        assert!(loglog_slope(&[(3.0, 1.0), (3.0, 2.0)]).is_err());
        assert!(loglog_slope(&[(f64::NAN, 1.0), (3.0, 2.0)]).is_err());
    }

    proptest! {
        #[test]
        fn recovers_exponent(
            c in 1e-3f64..1e3,
            k in -5.0f64..5.0,
            xs in proptest::collection::btree_set(1u32..10_000, 2..12),
        ) {
            let pts: Vec<(f64, f64)> = xs.iter().map(|&x| {
                let x = x as f64;
                (x, c * x.powf(k))
            }).collect();
            let f = loglog_slope(&pts).unwrap();
            prop_assert!((f.slope - k).abs() < 1e-9, "{} vs {}", f.slope, k);
            prop_assert!((f.intercept - c.ln()).abs() < 1e-7);
        }
    }
}
