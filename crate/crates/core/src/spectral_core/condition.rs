use super::function::{cube, linf, norm_sq, SpectralFunction};
use crate::error::{Error, Result};

/// Growth bound `|c_k| ≤ constant · (1+|k|)^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    pub constant: f64,
    pub power: f64,
}

/// Coefficients to test: a finite collection or an infinite rule `k ↦ |c_k|`.
pub enum CoefficientSource<'a> {
    Finite(&'a SpectralFunction),
    Rule {
        dim: usize,
        magnitude: &'a (dyn Fn(&[i64]) -> f64 + Sync),
        growth: Option<GrowthBound>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferenceCondition {
    pub holds: bool,
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// Truncation radius actually used (may exceed the request).
    pub radius: usize,
}

fn weight(k: &[i64]) -> f64 {
    let r2 = norm_sq(k);
    (-r2).exp() / r2.sqrt()
}

/// Partial sum of `Σ_{k≠0} |c_k| e^{-|k|²}/|k|` over `0 < |k|_∞ ≤ radius`
/// with a rigorous bound on the remainder.
pub fn check_transference_condition(source: &CoefficientSource, radius: usize) -> Result<TransferenceCondition> {
    let radius = radius.max(1);
    match source {
        CoefficientSource::Finite(s) => {
            let mut partial = 0.0;
            let mut tail = 0.0;
            for (k, c) in s.iter() {
                if linf(k) == 0 {
                    continue;
                }
                let t = c.norm() * weight(k);
                if linf(k) as usize <= radius {
                    partial += t;
                } else {
                    tail += t;
                }
            }
            Ok(TransferenceCondition { holds: true, partial_sum: partial, tail_bound: tail, radius })
        }
        CoefficientSource::Rule { dim, magnitude, growth } => {
            let growth = growth.ok_or_else(|| {
                Error::Refused("an infinite coefficient rule needs a growth bound".into())
            })?;
            if !(growth.constant.is_finite() && growth.constant >= 0.0 && growth.power.is_finite()) {
                return Err(Error::Input("invalid growth bound".into()));
            }
            let dim = *dim;
            // (1+r)^p e^{-r²}/r is decreasing for r ≥ m once p < 2m(1+m)
            let mut radius = radius;
            while growth.power >= 2.0 * (radius + 1) as f64 * (radius + 2) as f64 {
                radius += 1;
            }
            let partial: f64 = cube(dim, radius)
                .iter()
                .filter(|k| linf(k) > 0)
                .map(|k| magnitude(k) * weight(k))
                .sum();
            let shell_bound = |m: usize| -> f64 {
                let mf = m as f64;
                let count = (2.0 * mf + 1.0).powi(dim as i32) - (2.0 * mf - 1.0).powi(dim as i32);
                let r_lo = mf;
                count * growth.constant * (1.0 + r_lo).powf(growth.power.max(0.0)) * (-r_lo * r_lo).exp() / r_lo
            };
            let mut tail = 0.0;
            let mut m = radius + 1;
            loop {
                let t = shell_bound(m);
                let next = shell_bound(m + 1);
                tail += t;
                if next == 0.0 {
                    break;
                }
                let ratio = next / t;
                if ratio <= 0.5 && next < 1e-17 * tail.max(f64::MIN_POSITIVE) {
                    tail += next * ratio / (1.0 - ratio) + next;
                    break;
                }
                m += 1;
            }
            let holds = tail.is_finite() && partial.is_finite();
            Ok(TransferenceCondition { holds, partial_sum: partial, tail_bound: tail, radius })
        }
    }
}
