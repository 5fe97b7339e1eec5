use nalgebra::{DMatrix, DVector, SVD};

use super::FlexError;
use crate::complex::SimplicialSurface;
use crate::geometry::{Point, Polyhedron};

/// Default relative singular-value threshold for rank decisions.
pub const SINGULAR_VALUE_TOL: f64 = 1e-8;

fn point(x: &DVector<f64>, i: usize) -> Point {
    Point::new(x[3 * i], x[3 * i + 1], x[3 * i + 2])
}

/// Jacobian of the squared bar lengths of a bar-joint framework; `bars` hold
/// positions into `x` (three coordinates per joint).
pub fn framework_rigidity_matrix(bars: &[(usize, usize)], x: &DVector<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(bars.len(), x.len());
    for (row, &(i, j)) in bars.iter().enumerate() {
        let d = 2.0 * (point(x, i) - point(x, j));
        for k in 0..3 {
            m[(row, 3 * i + k)] = d[k];
            m[(row, 3 * j + k)] = -d[k];
        }
    }
    m
}

fn bars(surface: &SimplicialSurface) -> Vec<(usize, usize)> {
    surface
        .edges()
        .iter()
        .map(|e| {
            (
                surface.vertex_index(e.0).expect("edge vertex"),
                surface.vertex_index(e.1).expect("edge vertex"),
            )
        })
        .collect()
}

/// Jacobian of the squared edge-length map at configuration `x`
/// (one row per edge, canonical orders).
pub fn rigidity_matrix_at(surface: &SimplicialSurface, x: &DVector<f64>) -> DMatrix<f64> {
    framework_rigidity_matrix(&bars(surface), x)
}

pub fn rigidity_matrix(p: &Polyhedron) -> DMatrix<f64> {
    rigidity_matrix_at(p.surface(), &DVector::from_vec(p.configuration()))
}

/// Squared edge lengths at `x`, canonical edge order.
pub fn squared_lengths_at(surface: &SimplicialSurface, x: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        surface.n_edges(),
        surface.edges().iter().map(|e| {
            let i = surface.vertex_index(e.0).expect("edge vertex");
            let j = surface.vertex_index(e.1).expect("edge vertex");
            (point(x, i) - point(x, j)).norm_squared()
        }),
    )
}

/// The infinitesimal rigid motions at `x`: three translations and three
/// rotations about the centroid, as an orthonormal 3v × 6 basis.
pub fn trivial_motion_basis(x: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len() / 3;
    let centroid = (0..n).fold(Point::zeros(), |acc, i| acc + point(x, i)) / n as f64;
    let mut raw = DMatrix::zeros(3 * n, 6);
    for i in 0..n {
        let r = point(x, i) - centroid;
        for k in 0..3 {
            raw[(3 * i + k, k)] = 1.0;
            let axis = Point::ith(k, 1.0);
            let v = axis.cross(&r);
            for c in 0..3 {
                raw[(3 * i + c, 3 + k)] = v[c];
            }
        }
    }
    raw.qr().q()
}

fn is_collinear(x: &DVector<f64>) -> bool {
    let n = x.len() / 3;
    if n < 3 {
        return true;
    }
    let a = point(x, 0);
    let far = (1..n)
        .map(|i| point(x, i) - a)
        .max_by(|u, v| u.norm().total_cmp(&v.norm()))
        .unwrap_or_else(Point::zeros);
    let scale = far.norm();
    if scale == 0.0 {
        return true;
    }
    let dir = far / scale;
    (1..n).all(|i| (point(x, i) - a).cross(&dir).norm() <= 1e-12 * scale)
}

/// Singular values of `m`, padded with zero rows to a square matrix so that
/// every right singular vector is available. Returned with the rows of Vᵀ.
fn full_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested V");
    (svd.singular_values.iter().copied().collect(), v_t)
}

/// Orthonormal basis (columns) of the numerical null space of `m`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (sv, v_t) = full_svd(m);
    let cutoff = rel_tol * sv.iter().copied().fold(0.0, f64::max);
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for (k, s) in sv.iter().enumerate() {
        if *s <= cutoff {
            cols.push(v_t.row(k).transpose());
        }
    }
    if cols.is_empty() {
        DMatrix::zeros(m.ncols(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Dimension of the kernel of the rigidity matrix minus the six trivial motions.
pub fn infinitesimal_flex_dim(p: &Polyhedron, rel_tol: f64) -> Result<usize, FlexError> {
    let x = DVector::from_vec(p.configuration());
    if is_collinear(&x) {
        return Err(FlexError::DegenerateConfiguration);
    }
    let kernel = null_space(&rigidity_matrix_at(p.surface(), &x), rel_tol).ncols();
    Ok(kernel.saturating_sub(6))
}

/// Infinitesimal flexes orthogonal to the trivial motions at `x`, as columns.
pub fn nontrivial_flexes(surface: &SimplicialSurface, x: &DVector<f64>, rel_tol: f64) -> DMatrix<f64> {
    let r = rigidity_matrix_at(surface, x);
    let t = trivial_motion_basis(x);
    // scale the trivial rows like the rigidity rows so one threshold serves both
    let scale = r.norm() / (r.nrows() as f64).sqrt();
    let mut stacked = DMatrix::zeros(r.nrows() + 6, r.ncols());
    stacked.view_mut((0, 0), (r.nrows(), r.ncols())).copy_from(&r);
    stacked
        .view_mut((r.nrows(), 0), (6, r.ncols()))
        .copy_from(&(t.transpose() * scale));
    null_space(&stacked, rel_tol)
}
