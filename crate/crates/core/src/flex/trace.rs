//! Predictor–corrector continuation along the edge-length constraint set.

use log::{debug, info};
use nalgebra::{DMatrix, DVector};

use crate::complex::SimplicialSurface;
use crate::geometry::{dihedral_angles, Point, Polyhedron, NORMAL_CANCELLATION_TOL};

use super::lift::EdgeLift;
use super::rigidity::{nontrivial_flexes, rigidity_matrix_at, squared_lengths_at, trivial_motion_basis};
use super::{FlexError, FlexPath, FlexSample, StepDiagnostics};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    /// Number of accepted steps to take.
    pub n_steps: usize,
    /// Largest arc-length step in configuration space.
    pub step: f64,
    /// Corrector tolerance on squared lengths, relative to (max length)².
    pub tol: f64,
    /// Relative singular-value threshold for kernel dimensions.
    pub sv_tol: f64,
    pub max_corrector_iterations: usize,
    /// Give up once the step has been halved below `step · min_step_ratio`.
    pub min_step_ratio: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            n_steps: 200,
            step: 0.01,
            tol: 1e-11,
            sv_tol: super::rigidity::SINGULAR_VALUE_TOL,
            max_corrector_iterations: 12,
            min_step_ratio: 1e-6,
        }
    }
}

/// Iterations at or below this count make a step "easy".
const EASY_ITERATIONS: usize = 3;
/// Consecutive easy steps before the step size is doubled.
const EASY_STREAK: usize = 3;
/// Successive tangents must agree at least this well (cosine).
const TANGENT_AGREEMENT: f64 = 0.9;
/// Largest lifted-angle change accepted in one step; larger changes shrink the step.
const MAX_ANGLE_STEP: f64 = 0.5 * std::f64::consts::PI;

struct Corrected {
    x: DVector<f64>,
    iterations: usize,
    residual: f64,
}

/// Newton–Gauss projection of `pred` onto {squared lengths = target}, inside
/// the slice through `pred` orthogonal to the trivial motions and to `tangent`.
fn correct(
    surface: &SimplicialSurface,
    pred: &DVector<f64>,
    tangent: &DVector<f64>,
    target: &DVector<f64>,
    abs_tol: f64,
    max_iterations: usize,
) -> Option<Corrected> {
    let trivial = trivial_motion_basis(pred);
    let m = surface.n_edges();
    let n = pred.len();
    let mut x = pred.clone();
    let mut last_residual = f64::INFINITY;
    for iteration in 1..=max_iterations {
        let r = rigidity_matrix_at(surface, &x);
        let mut jac = DMatrix::zeros(m + 7, n);
        jac.view_mut((0, 0), (m, n)).copy_from(&r);
        jac.view_mut((m, 0), (6, n)).copy_from(&trivial.transpose());
        jac.view_mut((m + 6, 0), (1, n)).copy_from(&tangent.transpose());
        let offset = &x - pred;
        let mut f = DVector::zeros(m + 7);
        f.rows_mut(0, m).copy_from(&(squared_lengths_at(surface, &x) - target));
        f.rows_mut(m, 6).copy_from(&(trivial.transpose() * &offset));
        f[m + 6] = tangent.dot(&offset);
        let dx = jac.svd(true, true).solve(&(-f), 1e-14).ok()?;
        x += &dx;
        let residual = (squared_lengths_at(surface, &x) - target).amax();
        if !residual.is_finite() || (iteration > 2 && residual > last_residual) {
            return None;
        }
        if residual <= abs_tol {
            return Some(Corrected {
                x,
                iterations: iteration,
                residual,
            });
        }
        last_residual = residual;
    }
    None
}

fn unit_flex(surface: &SimplicialSurface, x: &DVector<f64>, sv_tol: f64) -> Result<DVector<f64>, usize> {
    let k = nontrivial_flexes(surface, x, sv_tol);
    if k.ncols() == 1 {
        Ok(k.column(0).normalize())
    } else {
        Err(k.ncols())
    }
}

/// Trace a one-parameter flex from `start`.
///
/// The predictor follows the unit infinitesimal flex orthogonal to the
/// trivial motions; its sign follows the previous tangent (initially
/// `direction_hint`, or a fixed sign convention without one). The corrector
/// restores all edge lengths. Steps are halved on corrector failure and
/// doubled again, up to `opts.step`, after three easy successes. The parameter
/// t is arc length in configuration space rescaled to [0, 1].
///
/// Errors carry the path traced so far.
pub fn trace_flex(
    start: &Polyhedron,
    direction_hint: Option<&DVector<f64>>,
    opts: &TraceOptions,
) -> Result<FlexPath, FlexError> {
    let surface = start.surface().clone();
    let x0 = DVector::from_vec(start.configuration());
    let target = squared_lengths_at(&surface, &x0);
    let max_sq = target.max();
    let abs_tol = opts.tol * max_sq;
    let area_tol = start.default_area_tol();

    let angles0 = dihedral_angles(start, NORMAL_CANCELLATION_TOL)?;
    let mut lifters: Vec<EdgeLift> = (0..surface.n_edges()).map(EdgeLift::new).collect();
    for (l, a) in lifters.iter_mut().zip(&angles0) {
        l.push(a)?;
    }
    let mut path = FlexPath {
        surface: surface.clone(),
        samples: vec![FlexSample {
            t: 0.0,
            arc: 0.0,
            config: x0.iter().copied().collect(),
            angles: angles0,
            lifted: lifters.iter().map(|l| l.values()[0]).collect(),
            diagnostics: StepDiagnostics::default(),
        }],
    };

    let mut tangent = match unit_flex(&surface, &x0, opts.sv_tol) {
        Ok(t) => t,
        Err(flex_dim) => {
            return Err(FlexError::SingularPoint {
                step: 0,
                flex_dim,
                path: Box::new(path.rescaled()),
            })
        }
    };
    let orient_by = |t: DVector<f64>, reference: Option<&DVector<f64>>| -> DVector<f64> {
        let sign =
            match reference {
                Some(r) => t.dot(r),
                None => {
                    let (i, _) = t.iter().enumerate().fold((0, 0.0f64), |(bi, bv), (i, v)| {
                        if v.abs() > bv.abs() + 1e-12 {
                            (i, *v)
                        } else {
                            (bi, bv)
                        }
                    });
                    t[i]
                }
            };
        if sign < 0.0 {
            -t
        } else {
            t
        }
    };
    tangent = orient_by(tangent, direction_hint);

    let mut x = x0;
    let mut h = opts.step;
    let mut easy = 0usize;
    let mut halvings = 0usize;
    let mut arc = 0.0;
    while path.samples.len() <= opts.n_steps {
        let step_index = path.samples.len();
        if h < opts.step * opts.min_step_ratio {
            return Err(FlexError::CorrectorDivergence {
                step: step_index,
                path: Box::new(path.rescaled()),
            });
        }
        let pred = &x + &tangent * h;
        let Some(c) = correct(
            &surface,
            &pred,
            &tangent,
            &target,
            abs_tol,
            opts.max_corrector_iterations,
        ) else {
            debug!("step {step_index}: corrector failed at h = {h:e}, halving");
            h *= 0.5;
            halvings += 1;
            easy = 0;
            continue;
        };
        let candidate = start.with_configuration(c.x.as_slice());
        if let Some(face) = (0..surface.n_faces()).find(|&f| candidate.face_area(f) <= area_tol) {
            return Err(FlexError::FaceDegeneration {
                step: step_index,
                face,
                path: Box::new(path.rescaled()),
            });
        }
        let next_tangent = match unit_flex(&surface, &c.x, opts.sv_tol) {
            Ok(t) => orient_by(t, Some(&tangent)),
            Err(flex_dim) => {
                return Err(FlexError::SingularPoint {
                    step: step_index,
                    flex_dim,
                    path: Box::new(path.rescaled()),
                })
            }
        };
        if next_tangent.dot(&tangent) < TANGENT_AGREEMENT {
            debug!("step {step_index}: tangent turned too far at h = {h:e}, halving");
            h *= 0.5;
            halvings += 1;
            easy = 0;
            continue;
        }
        let angles = dihedral_angles(&candidate, NORMAL_CANCELLATION_TOL)?;
        let mut trial = lifters.clone();
        let mut continuous = true;
        for (l, a) in trial.iter_mut().zip(&angles) {
            let before = l.values().last().copied().unwrap_or(0.0);
            l.push(a)?;
            let after = *l.values().last().expect("just pushed");
            if (after - before).abs() >= MAX_ANGLE_STEP {
                continuous = false;
            }
        }
        if !continuous {
            debug!("step {step_index}: angle jump at h = {h:e}, halving");
            h *= 0.5;
            halvings += 1;
            easy = 0;
            continue;
        }
        lifters = trial;
        arc += (&c.x - &x).norm();
        path.samples.push(FlexSample {
            t: arc,
            arc,
            config: c.x.iter().copied().collect(),
            angles,
            lifted: lifters.iter().map(|l| *l.values().last().expect("pushed")).collect(),
            diagnostics: StepDiagnostics {
                step_size: h,
                corrector_iterations: c.iterations,
                residual: c.residual,
                halvings,
            },
        });
        x = c.x;
        tangent = next_tangent;
        halvings = 0;
        if c.iterations <= EASY_ITERATIONS {
            easy += 1;
            if easy >= EASY_STREAK {
                h = (2.0 * h).min(opts.step);
                easy = 0;
            }
        } else {
            easy = 0;
        }
    }
    path.rescale();
    info!("traced {} steps, arc length {arc:.6}", path.samples.len() - 1);
    Ok(path)
}

/// Vertex positions of a flat configuration vector.
pub(crate) fn points_of(config: &[f64]) -> Vec<Point> {
    config.chunks_exact(3).map(|c| Point::new(c[0], c[1], c[2])).collect()
}
