//! Numerical flexes: rigidity matrix, infinitesimal flex dimension,
//! continuation along the constraint set, angle lifting and triviality tests.

mod lift;
mod procrustes;
mod rigidity;
mod trace;

use serde::Serialize;
use thiserror::Error;

use crate::complex::SimplicialSurface;
use crate::geometry::{DihedralAngle, GeometryError, Point, Polyhedron};

pub use lift::{lift_angles, wrap, EdgeLift, AMBIGUITY_TOL};
pub use procrustes::{best_rigid_motion, is_trivial_flex, rigid_residual};
pub use rigidity::{
    framework_rigidity_matrix, infinitesimal_flex_dim, nontrivial_flexes, null_space, rigidity_matrix,
    rigidity_matrix_at, squared_lengths_at, trivial_motion_basis, SINGULAR_VALUE_TOL,
};
pub use trace::{trace_flex, TraceOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlexError {
    #[error("all vertices are collinear")]
    DegenerateConfiguration,
    #[error("flex dimension {flex_dim} at step {step} (expected 1)")]
    SingularPoint {
        step: usize,
        flex_dim: usize,
        path: Box<FlexPath>,
    },
    #[error("corrector failed to converge at step {step}")]
    CorrectorDivergence { step: usize, path: Box<FlexPath> },
    #[error("face {face} degenerated at step {step}")]
    FaceDegeneration {
        step: usize,
        face: usize,
        path: Box<FlexPath>,
    },
    #[error("edge {edge}: raw angles differ by π at sample {sample}, lift is ambiguous")]
    LiftAmbiguity { edge: usize, sample: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl FlexError {
    /// The samples traced before the failure, when there are any.
    pub fn partial_path(&self) -> Option<&FlexPath> {
        match self {
            FlexError::SingularPoint { path, .. }
            | FlexError::CorrectorDivergence { path, .. }
            | FlexError::FaceDegeneration { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StepDiagnostics {
    pub step_size: f64,
    pub corrector_iterations: usize,
    /// Largest |ℓ² − ℓ₀²| after correction.
    pub residual: f64,
    /// Step halvings before this sample was accepted.
    pub halvings: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlexSample {
    /// Parameter in [0, 1].
    pub t: f64,
    /// Arc length in configuration space from the start.
    pub arc: f64,
    /// Coordinates in canonical vertex order, flattened.
    pub config: Vec<f64>,
    pub angles: Vec<DihedralAngle>,
    /// Lifted dihedral angle per edge.
    pub lifted: Vec<f64>,
    pub diagnostics: StepDiagnostics,
}

impl FlexSample {
    pub fn points(&self) -> Vec<Point> {
        trace::points_of(&self.config)
    }

    pub fn polyhedron(&self, surface: &SimplicialSurface) -> Polyhedron {
        Polyhedron::new(surface.clone(), self.points()).expect("sample matches its surface")
    }
}

/// A sampled flex; sample 0 is the starting configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct FlexPath {
    pub surface: SimplicialSurface,
    pub samples: Vec<FlexSample>,
}

impl FlexPath {
    /// A path built from given configurations; angles are computed and lifted.
    pub fn from_configurations(start: &Polyhedron, configs: &[Vec<f64>]) -> Result<Self, FlexError> {
        let polys: Vec<Polyhedron> = configs.iter().map(|c| start.with_configuration(c)).collect();
        let raw = polys
            .iter()
            .map(|p| crate::geometry::dihedral_angles(p, crate::geometry::NORMAL_CANCELLATION_TOL))
            .collect::<Result<Vec<_>, _>>()?;
        let lifted = lift_angles(&raw)?;
        let mut arc = 0.0;
        let mut samples = Vec::with_capacity(configs.len());
        for (k, ((c, angles), lifted)) in configs.iter().zip(raw).zip(lifted).enumerate() {
            if k > 0 {
                arc += c
                    .iter()
                    .zip(&configs[k - 1])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
            samples.push(FlexSample {
                t: arc,
                arc,
                config: c.clone(),
                angles,
                lifted,
                diagnostics: StepDiagnostics::default(),
            });
        }
        let mut path = Self {
            surface: start.surface().clone(),
            samples,
        };
        path.rescale();
        Ok(path)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of accepted steps (samples after the start).
    pub fn steps(&self) -> usize {
        self.samples.len().saturating_sub(1)
    }

    pub fn polyhedron_at(&self, k: usize) -> Polyhedron {
        self.samples[k].polyhedron(&self.surface)
    }

    /// Lifted angle series of one edge.
    pub fn lifted_series(&self, edge: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.lifted[edge]).collect()
    }

    /// max_k max_σ |ℓ_σ(t_k) − ℓ_σ(0)| / ℓ_σ(0).
    pub fn max_relative_length_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let base = crate::geometry::edge_lengths(&first.polyhedron(&self.surface));
        self.samples
            .iter()
            .skip(1)
            .flat_map(|s| {
                let now = crate::geometry::edge_lengths(&s.polyhedron(&self.surface));
                now.into_iter()
                    .zip(base.clone())
                    .map(|(l, l0)| (l - l0).abs() / l0)
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    /// Largest change of any lifted angle over the path, per edge.
    pub fn angle_variation(&self) -> Vec<f64> {
        let n = self.surface.n_edges();
        (0..n)
            .map(|e| {
                let series = self.lifted_series(e);
                let lo = series.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if series.is_empty() {
                    0.0
                } else {
                    hi - lo
                }
            })
            .collect()
    }

    fn rescale(&mut self) {
        let total = self.samples.last().map_or(0.0, |s| s.arc);
        for s in &mut self.samples {
            s.t = if total > 0.0 { s.arc / total } else { 0.0 };
        }
    }

    fn rescaled(mut self) -> Self {
        self.rescale();
        self
    }
}
