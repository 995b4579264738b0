//! Error metrics and scaling-law fits.

use crate::error::{Error, Result};

/// Mean, over steps and coordinates, of the squared difference between
/// `estimates` and `reference`. With per-node estimates this is the MSE per
/// node.
pub fn empirical_mse(estimates: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    if estimates.len() != reference.len() {
        return Err(Error::invalid(format!(
            "{} estimates vs {} reference steps",
            estimates.len(),
            reference.len()
        )));
    }
    if estimates.is_empty() {
        return Err(Error::invalid("no steps to compare"));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (t, (e, r)) in estimates.iter().zip(reference).enumerate() {
        if e.len() != r.len() {
            return Err(Error::invalid(format!("dimension mismatch at step {}", t + 1)));
        }
        total += e.iter().zip(r).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        count += e.len();
    }
    if count == 0 {
        return Err(Error::invalid("estimates have zero dimension"));
    }
    Ok(total / count as f64)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance; 0 for fewer than two values.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Standard error of the mean.
pub fn standard_error(values: &[f64]) -> f64 {
    (sample_variance(values) / values.len() as f64).sqrt()
}

/// `(squared bias, unbiased sample variance)` of replicate estimates of a
/// scalar with known `reference` value.
pub fn bias_variance(replicates: &[f64], reference: f64) -> Result<(f64, f64)> {
    if replicates.len() < 2 {
        return Err(Error::invalid("bias/variance needs at least two replicates"));
    }
    let m = mean(replicates);
    Ok(((m - reference).powi(2), sample_variance(replicates)))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("need at least two (x, y) pairs"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (mean(&lx), mean(&ly));
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("x values must not all be equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Pearson correlation of two equally long samples.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::invalid("correlation needs two equally long samples"));
    }
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::invalid("correlation of a constant sample"));
    }
    Ok(sab / (saa * sbb).sqrt())
}
