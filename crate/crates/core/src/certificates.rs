//! Rigidity certificates from edge-length independence, the conserved
//! angle combinations they imply, and monitoring of those quantities along a
//! traced flex.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::flex::FlexPath;
use crate::geometry::{edge_lengths, oriented_volume, weighted_sum};
use crate::lengths::{
    clear_denominators, find_integer_relation, is_q_independent, serialize_big_ints, DecimalValue, ExactLength,
    IndependenceVerdict, LengthError, RelationOptions, SpanBasis,
};

pub const INCONCLUSIVE_CAVEAT: &str =
    "an integer relation among edge lengths does not imply flexibility; the independence test is sufficient only";

/// Edges whose length is not a rational combination of the other lengths:
/// their coefficient row lives on a basis element no other edge uses.
pub fn constant_angle_edges(span: &SpanBasis) -> Vec<usize> {
    let mut out: Vec<usize> = (0..span.dim())
        .filter_map(|j| match span.support(j).as_slice() {
            [only] => Some(*only),
            _ => None,
        })
        .collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// Edge lengths are ℚ-independent, proven exactly.
    Rigid,
    /// No integer relation up to `height` among decimal lengths.
    RigidPresumed {
        height: u64,
    },
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Rigid => "Rigid",
            Verdict::RigidPresumed { .. } => "RigidPresumed",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Edge lengths as given to the certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum LengthsInput {
    Exact(Vec<ExactLength>),
    Numeric {
        values: Vec<DecimalValue>,
        options: RelationOptions,
    },
}

impl LengthsInput {
    pub fn mode(&self) -> &'static str {
        match self {
            LengthsInput::Exact(_) => "exact",
            LengthsInput::Numeric { .. } => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityCertificate {
    pub verdict: Verdict,
    pub mode: &'static str,
    pub evidence: IndependenceVerdict,
    /// Edges predicted to keep a constant dihedral angle on any flex
    /// (exact mode only; empty otherwise).
    pub constant_angle_edges: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<&'static str>,
}

impl RigidityCertificate {
    pub fn relations(&self) -> Vec<Vec<BigInt>> {
        match &self.evidence {
            IndependenceVerdict::Dependent { relation } => vec![relation.clone()],
            _ => Vec::new(),
        }
    }
}

/// Certify rigidity from ℚ-independence of the edge lengths. Numeric mode
/// fails only when the relation search cannot run (too many edges).
pub fn rigidity_certificate(lengths: &LengthsInput) -> Result<RigidityCertificate, LengthError> {
    let (evidence, constant) = match lengths {
        LengthsInput::Exact(ls) => (is_q_independent(ls), constant_angle_edges(&crate::lengths::q_basis(ls))),
        LengthsInput::Numeric { values, options } => {
            let evidence = match find_integer_relation(values, options) {
                Ok(rel) => IndependenceVerdict::Dependent {
                    relation: rel.into_iter().map(BigInt::from).collect(),
                },
                Err(LengthError::NoneUpToHeight(height)) => IndependenceVerdict::IndependentUpToHeight { height },
                Err(e) => return Err(e),
            };
            (evidence, Vec::new())
        }
    };
    let verdict = match &evidence {
        IndependenceVerdict::IndependentExact => Verdict::Rigid,
        IndependenceVerdict::IndependentUpToHeight { height } => Verdict::RigidPresumed { height: *height },
        IndependenceVerdict::Dependent { .. } => Verdict::Inconclusive,
    };
    let caveat = (verdict == Verdict::Inconclusive).then_some(INCONCLUSIVE_CAVEAT);
    Ok(RigidityCertificate {
        verdict,
        mode: lengths.mode(),
        evidence,
        constant_angle_edges: constant,
        caveat,
    })
}

/// Σ_σ c_σ·φ̃_σ, conserved along every flex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantCombination {
    /// The basis element the combination belongs to, e.g. "√2".
    pub label: String,
    pub radicand: u128,
    #[serde(serialize_with = "serialize_big_ints")]
    pub coeffs: Vec<BigInt>,
    #[serde(rename = "constant")]
    pub claimed_constant: f64,
}

impl InvariantCombination {
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs_f64().iter().map(|c| c.abs()).sum()
    }

    pub fn value(&self, angles: &[f64]) -> f64 {
        self.coeffs_f64().iter().zip(angles).map(|(c, a)| c * a).sum()
    }
}

/// One combination per basis element: its coefficient column, cleared to
/// coprime integers, with the value at the given (t = 0) angles.
pub fn invariant_combinations(span: &SpanBasis, angles0: &[f64]) -> Vec<InvariantCombination> {
    (0..span.dim())
        .map(|j| {
            let mut c = InvariantCombination {
                label: ExactLength::sqrt_of(span.radicands[j]).to_string(),
                radicand: span.radicands[j],
                coeffs: clear_denominators(&span.column(j)),
                claimed_constant: 0.0,
            };
            c.claimed_constant = c.value(angles0);
            c
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CombinationDeviation {
    pub label: String,
    pub max_deviation: f64,
    /// Σ|coeffs|, the natural scale of the deviation.
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarMonitor {
    pub initial: f64,
    pub max_deviation: f64,
    /// Reference magnitude for relative tolerances.
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonitoringReport {
    pub samples: usize,
    pub combinations: Vec<CombinationDeviation>,
    /// Oriented volume; scale is max(|V(0)|, mean edge length³).
    pub volume: ScalarMonitor,
    /// Σ ℓ_σ·φ̃_σ; scale is Σ ℓ_σ.
    pub weighted_angle_sum: ScalarMonitor,
}

/// Deviations of every conserved quantity from its value at the first sample.
pub fn monitor_flex(path: &FlexPath, combinations: &[InvariantCombination]) -> MonitoringReport {
    let polys: Vec<_> = (0..path.len()).map(|k| path.polyhedron_at(k)).collect();
    let lengths0 = polys.first().map(edge_lengths).unwrap_or_default();
    let length_sum: f64 = lengths0.iter().sum();
    let mean_cube = if lengths0.is_empty() {
        0.0
    } else {
        (length_sum / lengths0.len() as f64).powi(3)
    };

    let combos = combinations
        .iter()
        .map(|c| CombinationDeviation {
            label: c.label.clone(),
            max_deviation: path
                .samples
                .iter()
                .map(|s| (c.value(&s.lifted) - c.claimed_constant).abs())
                .fold(0.0, f64::max),
            scale: c.l1_norm(),
        })
        .collect();

    let volumes: Vec<f64> = polys.iter().map(oriented_volume).collect();
    let sums: Vec<f64> = polys
        .iter()
        .zip(&path.samples)
        .map(|(p, s)| weighted_sum(&edge_lengths(p), &s.lifted))
        .collect();
    let monitor = |series: &[f64], scale: f64| {
        let initial = series.first().copied().unwrap_or(0.0);
        ScalarMonitor {
            initial,
            max_deviation: series.iter().map(|v| (v - initial).abs()).fold(0.0, f64::max),
            scale,
        }
    };
    let v0 = volumes.first().copied().unwrap_or(0.0);
    MonitoringReport {
        samples: path.len(),
        combinations: combos,
        volume: monitor(&volumes, v0.abs().max(mean_cube)),
        weighted_angle_sum: monitor(&sums, length_sum),
    }
}

/// How far `other` is from `angles` in whole turns, per edge; integral
/// exactly when the two are lifts of the same principal angles.
pub fn branch_turns(angles: &[f64], other: &[f64]) -> Vec<f64> {
    angles.iter().zip(other).map(|(a, b)| (b - a) / TAU).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flex::{trace_flex, TraceOptions};
    use crate::lengths::q_basis;
    use crate::models;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn distinct_radicands_predict_every_edge() {
        let ls: Vec<ExactLength> = [2u128, 3, 5, 7].into_iter().map(ExactLength::sqrt_of).collect();
        assert_eq!(constant_angle_edges(&q_basis(&ls)), vec![0, 1, 2, 3]);
    }

    #[test]
    fn shared_radicand_is_not_predicted() {
        let ls: Vec<ExactLength> = [2u128, 2, 3].into_iter().map(ExactLength::sqrt_of).collect();
        assert_eq!(constant_angle_edges(&q_basis(&ls)), vec![2]);
    }

    #[test]
    fn bricard_predicts_nothing() {
        let b = models::bricard_default();
        let span = q_basis(&b.exact_lengths().unwrap());
        assert_eq!(span.dim(), 6);
        assert!(constant_angle_edges(&span).is_empty());
    }

    #[test]
    fn distinct_radicand_octahedron_is_rigid() {
        let m = models::distinct_radicand_octahedron();
        let cert = rigidity_certificate(&LengthsInput::Exact(m.exact_lengths().unwrap())).unwrap();
        assert_eq!(cert.verdict, Verdict::Rigid);
        assert_eq!(cert.evidence, IndependenceVerdict::IndependentExact);
        assert_eq!(cert.constant_angle_edges.len(), 12);
        assert_eq!(cert.caveat, None);
    }

    #[test]
    fn regular_octahedron_is_inconclusive() {
        let m = models::regular_octahedron();
        let cert = rigidity_certificate(&LengthsInput::Exact(m.exact_lengths().unwrap())).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        let mut expected = vec![0i64; 12];
        expected[0] = 1;
        expected[1] = -1;
        assert_eq!(cert.relations(), vec![ints(&expected)]);
        assert_eq!(cert.caveat, Some(INCONCLUSIVE_CAVEAT));
    }

    #[test]
    fn decimal_lengths_are_presumed_rigid() {
        let m = models::distinct_radicand_octahedron();
        let exact = m.exact_lengths().unwrap();
        let values = exact
            .iter()
            .map(|l| DecimalValue::parse(&l.to_decimal(30)).unwrap())
            .collect();
        let cert = rigidity_certificate(&LengthsInput::Numeric {
            values,
            options: RelationOptions::default(),
        })
        .unwrap();
        assert_eq!(cert.verdict, Verdict::RigidPresumed { height: 1_000_000 });
        assert!(cert.constant_angle_edges.is_empty());
        // the exact run agrees
        let exact_cert = rigidity_certificate(&LengthsInput::Exact(exact)).unwrap();
        assert_eq!(exact_cert.verdict, Verdict::Rigid);
    }

    #[test]
    fn octahedron_has_one_combination() {
        let m = models::regular_octahedron();
        let span = q_basis(&m.exact_lengths().unwrap());
        let angles = vec![1.0; 12];
        let combos = invariant_combinations(&span, &angles);
        assert_eq!(combos.len(), 1);
        assert_eq!(combos[0].coeffs, ints(&[1; 12]));
        assert_eq!(combos[0].claimed_constant, 12.0);
        assert_eq!(combos[0].label, "√2");
    }

    #[test]
    fn combinations_clear_denominators() {
        let ls = vec![
            ExactLength::sqrt_of(2),
            ExactLength::new(q(2, 1), 2),
            ExactLength::sqrt_of(3),
        ];
        let combos = invariant_combinations(&q_basis(&ls), &[0.0; 3]);
        assert_eq!(combos.len(), 2);
        assert_eq!(combos[0].coeffs, ints(&[1, 2, 0]));
        assert_eq!(combos[1].coeffs, ints(&[0, 0, 1]));
        let halves = vec![ExactLength::new(q(1, 2), 5), ExactLength::new(q(1, 3), 5)];
        let combos = invariant_combinations(&q_basis(&halves), &[0.0; 2]);
        assert_eq!(combos[0].coeffs, ints(&[3, 2]));
    }

    #[test]
    fn every_combination_is_integral_and_nonzero() {
        for m in [
            models::regular_octahedron(),
            models::triangulated_cube(),
            models::bricard_default(),
            models::distinct_radicand_octahedron(),
        ] {
            let span = q_basis(&m.exact_lengths().unwrap());
            for c in invariant_combinations(&span, &vec![0.0; span.coefficients.len()]) {
                assert!(c.coeffs.iter().any(|x| *x != BigInt::from(0)), "{}", m.name);
            }
        }
    }

    #[test]
    fn branch_change_moves_values_by_whole_turns() {
        let b = models::bricard_default();
        let span = q_basis(&b.exact_lengths().unwrap());
        let angles: Vec<f64> = crate::geometry::dihedral_angles(&b.polyhedron, 1e-9)
            .unwrap()
            .iter()
            .map(|a| a.principal_value)
            .collect();
        let combos = invariant_combinations(&span, &angles);
        let mut shifted = angles.clone();
        shifted[3] += TAU;
        shifted[7] -= 2.0 * TAU;
        let turns = branch_turns(&angles, &shifted);
        for c in &combos {
            let delta = (c.value(&shifted) - c.claimed_constant) / TAU;
            let expected: f64 = c.coeffs_f64().iter().zip(&turns).map(|(c, t)| c * t.round()).sum();
            assert!((delta - expected).abs() < 1e-9);
            assert!((delta - delta.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn rigid_motion_path_has_no_deviation() {
        use crate::flex::FlexPath;
        use nalgebra::{Rotation3, Vector3};
        let cube = models::triangulated_cube();
        let configs: Vec<Vec<f64>> = (0..10)
            .map(|k| {
                let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), 0.2 * k as f64);
                let shift = Vector3::new(0.1 * k as f64, 0.0, -0.3 * k as f64);
                cube.polyhedron.map_points(|p| rot * p + shift).configuration()
            })
            .collect();
        let path = FlexPath::from_configurations(&cube.polyhedron, &configs).unwrap();
        let span = q_basis(&cube.exact_lengths().unwrap());
        let combos = invariant_combinations(&span, &path.samples[0].lifted);
        let report = monitor_flex(&path, &combos);
        assert!(report.combinations.iter().all(|c| c.max_deviation <= 1e-9));
        assert!(report.volume.max_deviation <= 1e-9);
        assert!(report.weighted_angle_sum.max_deviation <= 1e-9);
    }

    #[test]
    fn bricard_pair_sums_are_conserved() {
        let b = models::bricard_default();
        let opts = TraceOptions {
            n_steps: 40,
            ..Default::default()
        };
        let path = trace_flex(&b.polyhedron, None, &opts).unwrap();
        let span = q_basis(&b.exact_lengths().unwrap());
        let combos = invariant_combinations(&span, &path.samples[0].lifted);
        assert_eq!(combos.len(), 6);
        for c in &combos {
            assert_eq!(c.coeffs.iter().filter(|x| **x != BigInt::from(0)).count(), 2);
        }
        let report = monitor_flex(&path, &combos);
        for c in &report.combinations {
            assert!(c.max_deviation <= 1e-6 * c.scale, "{}: {}", c.label, c.max_deviation);
        }
        assert!(report.weighted_angle_sum.max_deviation <= 1e-6 * report.weighted_angle_sum.scale);
        assert!(report.volume.max_deviation <= 1e-8 * report.volume.scale);
    }
}
