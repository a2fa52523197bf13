//! Summation, sample statistics and log-log slope fits.

use alloc::vec::Vec;
use num_traits::Float;

/// Neumaier-compensated running sum. Adding the same values in the same
/// order always gives the same bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of a slice, in slice order.
pub fn sum(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(values.iter().copied());
    acc.value()
}

/// Sample mean and standard error (`sample std / sqrt(len)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub count: usize,
}

pub fn mean_estimate(values: &[f64]) -> MeanEstimate {
    let count = values.len();
    if count == 0 {
        return MeanEstimate { mean: f64::NAN, std_dev: f64::NAN, std_error: f64::NAN, count };
    }
    let mean = sum(values) / count as f64;
    let std_dev = if count > 1 {
        let mut acc = CompensatedSum::new();
        acc.extend(values.iter().map(|v| (v - mean) * (v - mean)));
        (acc.value() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    MeanEstimate { mean, std_dev, std_error: std_dev / (count as f64).sqrt(), count }
}

/// Linear-interpolated empirical quantile, `prob` in `[0, 1]`.
pub fn quantile(values: &[f64], prob: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let pos = prob.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence interval of the slope; NaN with
    /// fewer than three points.
    pub slope_half_width: f64,
    pub residuals: Vec<f64>,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = sum(xs) / n as f64;
    let my = sum(ys) / n as f64;
    let mut sxx = CompensatedSum::new();
    let mut sxy = CompensatedSum::new();
    for (x, y) in xs.iter().zip(ys) {
        sxx.add((x - mx) * (x - mx));
        sxy.add((x - mx) * (y - my));
    }
    let sxx = sxx.value();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy.value() / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - intercept - slope * x).collect();
    let slope_half_width = if n > 2 {
        let rss: f64 = sum(&residuals.iter().map(|r| r * r).collect::<Vec<_>>());
        let se = (rss / (n - 2) as f64 / sxx).sqrt();
        student_t_975(n - 2) * se
    } else {
        f64::NAN
    };
    Some(LineFit { slope, intercept, slope_half_width, residuals })
}

/// Slope of `log(y)` against `log(x)`; all values must be positive.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

/// Two-sided 97.5% quantile of Student's t distribution.
pub fn student_t_975(df: usize) -> f64 {
    const TABLE: [f64; 30] = [
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179,
        2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
        2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    ];
    match df {
        0 => f64::INFINITY,
        1..=30 => TABLE[df - 1],
        31..=60 => 2.000,
        61..=120 => 1.980,
        _ => 1.960,
    }
}
