//! Continuous selection of dihedral angles along a sampled flex.
//!
//! Principal values jump by 2π when a wedge closes through 0; the lifted
//! series unwraps each step into (−π, π]. Samples with a degenerate angle
//! (cancelling normals, value pinned to 0) carry no branch information and are
//! filled in by linear interpolation between the neighbouring lifted values.

use std::f64::consts::{PI, TAU};

use crate::geometry::DihedralAngle;

use super::FlexError;

/// Consecutive raw values this close to a difference of exactly π are ambiguous.
pub const AMBIGUITY_TOL: f64 = 1e-9;

/// Map an angle difference into (−π, π].
pub fn wrap(d: f64) -> f64 {
    let mut w = d % TAU;
    if w > PI {
        w -= TAU;
    } else if w <= -PI {
        w += TAU;
    }
    w
}

/// Incremental lifter for one edge.
#[derive(Clone, Debug)]
pub struct EdgeLift {
    edge: usize,
    lifted: Vec<f64>,
    /// Index and raw value of the last nondegenerate sample.
    anchor: Option<(usize, f64)>,
}

impl EdgeLift {
    pub fn new(edge: usize) -> Self {
        Self {
            edge,
            lifted: Vec::new(),
            anchor: None,
        }
    }

    pub fn push(&mut self, angle: &DihedralAngle) -> Result<(), FlexError> {
        let k = self.lifted.len();
        if angle.degenerate {
            // provisional: hold the last value until the gap closes
            let hold = self.lifted.last().copied().unwrap_or(0.0);
            self.lifted.push(hold);
            return Ok(());
        }
        let raw = angle.principal_value;
        match self.anchor {
            None => {
                // no earlier branch information: samples before this one were
                // degenerate and take this value's branch (0 ↔ 2π by continuity)
                let start = if k > 0 { nearest_turn(raw) } else { raw };
                self.lifted.iter_mut().for_each(|v| *v = start);
                self.lifted.push(raw);
            }
            Some((i, prev_raw)) => {
                let d = wrap(raw - prev_raw);
                if (d.abs() - PI).abs() <= AMBIGUITY_TOL {
                    return Err(FlexError::LiftAmbiguity {
                        edge: self.edge,
                        sample: k,
                    });
                }
                let value = self.lifted[i] + d;
                let gap = k - i;
                for m in 1..gap {
                    let s = m as f64 / gap as f64;
                    self.lifted[i + m] = self.lifted[i] + s * d;
                }
                self.lifted.push(value);
            }
        }
        self.anchor = Some((k, raw));
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.lifted
    }
}

/// 0 or 2π, whichever is closer to `raw`.
fn nearest_turn(raw: f64) -> f64 {
    if raw > PI {
        TAU
    } else {
        0.0
    }
}

/// Lift a full series of principal angles, `samples[k][edge]`. Returns
/// `lifted[k][edge]`, with `lifted[0]` equal to the principal values at the
/// first sample (degenerate edges there start at 0).
pub fn lift_angles(samples: &[Vec<DihedralAngle>]) -> Result<Vec<Vec<f64>>, FlexError> {
    let Some(first) = samples.first() else {
        return Ok(Vec::new());
    };
    let mut lifters: Vec<EdgeLift> = first.iter().map(|a| EdgeLift::new(a.edge)).collect();
    for sample in samples {
        for (lift, angle) in lifters.iter_mut().zip(sample) {
            lift.push(angle)?;
        }
    }
    let first_values: Vec<f64> = first.iter().map(|a| a.principal_value).collect();
    Ok((0..samples.len())
        .map(|k| {
            lifters
                .iter()
                .zip(&first_values)
                .map(|(l, &v0)| {
                    // a leading degenerate run is pinned to the principal value
                    // at t = 0, then shifted so later values stay continuous
                    let shift = v0 - l.values()[0];
                    l.values()[k] + shift
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn series(values: &[f64]) -> Vec<Vec<DihedralAngle>> {
        values
            .iter()
            .map(|&v| {
                vec![DihedralAngle {
                    edge: 0,
                    principal_value: v,
                    degenerate: false,
                }]
            })
            .collect()
    }

    fn degenerate() -> DihedralAngle {
        DihedralAngle {
            edge: 0,
            principal_value: 0.0,
            degenerate: true,
        }
    }

    #[test]
    fn wrap_range() {
        assert_abs_diff_eq!(wrap(6.1), 6.1 - TAU, epsilon = 1e-15);
        assert_eq!(wrap(PI), PI);
        assert_eq!(wrap(-PI), PI);
        assert_abs_diff_eq!(wrap(-6.1), TAU - 6.1, epsilon = 1e-15);
        assert_eq!(wrap(0.25), 0.25);
    }

    #[test]
    fn constant_series() {
        let lifted = lift_angles(&series(&[1.3; 5])).unwrap();
        assert!(lifted.iter().all(|row| row[0] == 1.3));
    }

    #[test]
    fn crosses_branch() {
        let lifted = lift_angles(&series(&[0.1, 6.2, 6.0])).unwrap();
        let col: Vec<f64> = lifted.iter().map(|r| r[0]).collect();
        assert_abs_diff_eq!(col[0], 0.1);
        assert_abs_diff_eq!(col[1], 6.2 - TAU + 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(col[1], -0.083_185_307_179_586_2, epsilon = 1e-12);
        assert_abs_diff_eq!(col[2], -0.283_185_307_179_586_2, epsilon = 1e-12);
    }

    #[test]
    fn ambiguous_half_turn() {
        let r = lift_angles(&series(&[0.5, 0.5 + PI]));
        assert_eq!(r, Err(FlexError::LiftAmbiguity { edge: 0, sample: 1 }));
    }

    #[test]
    fn bridges_degenerate_samples() {
        let mut samples = series(&[0.2, 0.1]);
        samples.push(vec![degenerate()]);
        samples.push(vec![degenerate()]);
        samples.extend(series(&[TAU - 0.2]));
        let lifted = lift_angles(&samples).unwrap();
        let col: Vec<f64> = lifted.iter().map(|r| r[0]).collect();
        // 0.1 → -0.2 through the closed wedge, interpolated in thirds
        assert_abs_diff_eq!(col[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(col[3], -0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(col[4], -0.2, epsilon = 1e-12);
    }

    #[test]
    fn leading_degenerate_sample_is_pinned_to_principal_value() {
        let mut samples = vec![vec![degenerate()]];
        samples.extend(series(&[TAU - 0.05, TAU - 0.1]));
        let lifted = lift_angles(&samples).unwrap();
        let col: Vec<f64> = lifted.iter().map(|r| r[0]).collect();
        assert_eq!(col[0], 0.0);
        assert_abs_diff_eq!(col[1], -0.05, epsilon = 1e-12);
        assert_abs_diff_eq!(col[2], -0.1, epsilon = 1e-12);
    }

    #[test]
    fn refinement_consistency() {
        // a smooth angle history sampled at two resolutions lifts identically
        let angle = |t: f64| (0.3 + 9.0 * t).rem_euclid(TAU);
        let coarse: Vec<f64> = (0..=20).map(|k| angle(k as f64 / 20.0)).collect();
        let fine: Vec<f64> = (0..=40).map(|k| angle(k as f64 / 40.0)).collect();
        let lc = lift_angles(&series(&coarse)).unwrap();
        let lf = lift_angles(&series(&fine)).unwrap();
        for k in 0..=20 {
            assert_abs_diff_eq!(lc[k][0], lf[2 * k][0], epsilon = 1e-12);
            assert_abs_diff_eq!(lc[k][0], 0.3 + 9.0 * k as f64 / 20.0, epsilon = 1e-12);
        }
    }
}
