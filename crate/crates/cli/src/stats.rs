//! Median / median-absolute-deviation summaries and the shot-budget rule.

use log::warn;

use crate::error::{CliError, Result};

/// Cap returned by [`shot_budget_hint`] when the expected value is zero.
pub const DEFAULT_MAX_SHOTS: u64 = 10_000_000;

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// `(median, median(|x - median|))`; even lengths average the middle pair.
pub fn summarize(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(CliError::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = median_sorted(&sorted);
    let mut dev: Vec<f64> = sorted.iter().map(|x| (x - median).abs()).collect();
    dev.sort_by(f64::total_cmp);
    Ok((median, median_sorted(&dev)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotHint {
    pub shots: u64,
    /// The rule produced more than `max_shots` (or was undefined) and the
    /// cap was returned instead.
    pub capped: bool,
}

/// Advisory minimum shot count for a Hadamard-test estimate of magnitude
/// `|v|`: `ceil(10 / |v|)`, so `0.01 -> 1000` and `1 -> 10`.
pub fn shot_budget_hint(expected_value: f64, max_shots: u64) -> Result<ShotHint> {
    if expected_value.is_nan() || expected_value.abs() > 1.0 {
        return Err(CliError::OutOfRange(expected_value));
    }
    if expected_value == 0.0 {
        warn!("expected value is zero; no finite shot count resolves its sign, returning {max_shots}");
        return Ok(ShotHint {
            shots: max_shots,
            capped: true,
        });
    }
    // The small slack keeps 10 / 0.01 from rounding up to 1001.
    let raw = (10.0 / expected_value.abs() - 1e-9).ceil();
    if raw > max_shots as f64 {
        warn!("shot hint {raw} exceeds the cap {max_shots}");
        return Ok(ShotHint {
            shots: max_shots,
            capped: true,
        });
    }
    Ok(ShotHint {
        shots: raw as u64,
        capped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(summarize(&[1.0, 2.0, 100.0]).unwrap(), (2.0, 1.0));
        assert_eq!(summarize(&[4.0; 7]).unwrap(), (4.0, 0.0));
        assert_eq!(summarize(&[1.0, 3.0]).unwrap(), (2.0, 1.0));
        assert!(matches!(summarize(&[]), Err(CliError::EmptySample)));
    }

    #[test]
    fn shot_hints() {
        assert_eq!(shot_budget_hint(0.01, DEFAULT_MAX_SHOTS).unwrap().shots, 1000);
        assert_eq!(shot_budget_hint(-0.01, DEFAULT_MAX_SHOTS).unwrap().shots, 1000);
        assert_eq!(shot_budget_hint(1.0, DEFAULT_MAX_SHOTS).unwrap().shots, 10);
        assert_eq!(shot_budget_hint(0.3, DEFAULT_MAX_SHOTS).unwrap().shots, 34);
        let zero = shot_budget_hint(0.0, 500).unwrap();
        assert_eq!(
            zero,
            ShotHint {
                shots: 500,
                capped: true
            }
        );
        assert!(shot_budget_hint(1e-9, 500).unwrap().capped);
        assert!(shot_budget_hint(1.5, 500).is_err());
        assert!(shot_budget_hint(f64::NAN, 500).is_err());
    }
}
