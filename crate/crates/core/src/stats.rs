//! Sample statistics over exact fractions.
//!
//! Sums are accumulated in 64.64 fixed point (i128), so the mean is exact to
//! well below any rendered precision and identical across runs; floating
//! point only enters for the final division and square root.

use crate::error::{Error, Result};
use crate::problem::Fraction;

const FRAC_BITS: u32 = 64;

fn fixed(x: Fraction) -> i128 {
    ((x.num() as i128) << FRAC_BITS) / x.den() as i128
}

fn to_f64(fp: i128) -> f64 {
    fp as f64 / (2f64).powi(FRAC_BITS as i32)
}

/// Mean and sample standard deviation (unbiased variance, square-rooted).
/// A single sample has no deviation estimate.
pub fn mean_std(samples: &[Fraction]) -> Result<(f64, Option<f64>)> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let t = samples.len() as i128;
    let sum: i128 = samples.iter().map(|&x| fixed(x)).sum();
    let mean_fp = sum / t;
    let mean = to_f64(mean_fp);
    if t == 1 {
        return Ok((mean, None));
    }
    // Second pass over centered values keeps constant samples at exactly
    // zero; squares are taken at 32 fractional bits to stay inside i128.
    let sum_sq: i128 = samples
        .iter()
        .map(|&x| {
            let centered = (fixed(x) - mean_fp) >> (FRAC_BITS / 2);
            centered * centered
        })
        .sum();
    let var = to_f64(sum_sq / (t - 1));
    Ok((mean, Some(var.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(num: i64, den: i64) -> Fraction {
        Fraction::new(num, den)
    }

    #[test]
    fn coin_flip_mean_and_std() {
        let (mean, std) = mean_std(&[fr(0, 1), fr(1, 1)]).unwrap();
        assert_eq!(mean, 0.5);
        assert!((std.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quarters() {
        let (mean, std) = mean_std(&[fr(1, 4), fr(3, 4)]).unwrap();
        assert_eq!(mean, 0.5);
        assert!((std.unwrap() - 0.125f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn single_sample_has_no_deviation() {
        let (mean, std) = mean_std(&[fr(2, 3)]).unwrap();
        assert!((mean - 2.0 / 3.0).abs() < 1e-12);
        assert!(std.is_none());
    }

    #[test]
    fn constant_samples_have_zero_deviation() {
        let samples = vec![fr(5, 7); 100];
        let (mean, std) = mean_std(&samples).unwrap();
        assert!((mean - 5.0 / 7.0).abs() < 1e-12);
        assert_eq!(std, Some(0.0));
    }

    #[test]
    fn mixed_denominators_stay_exact() {
        // 1/3 + 1/7 + 1/2 over 3 samples: mean 41/126.
        let (mean, _) = mean_std(&[fr(1, 3), fr(1, 7), fr(1, 2)]).unwrap();
        assert!((mean - 41.0 / 126.0).abs() < 1e-12);
    }

    #[test]
    fn empty_input_errors() {
        assert!(matches!(mean_std(&[]), Err(Error::EmptyInput)));
    }
}
