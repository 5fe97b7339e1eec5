use nalgebra::{Matrix3, Rotation3};

use crate::geometry::Point;

use super::FlexPath;

/// Proper rotation R and translation t minimizing Σ |R·a_i + t − b_i|² (Kabsch).
pub fn best_rigid_motion(from: &[Point], to: &[Point]) -> (Rotation3<f64>, Point) {
    assert_eq!(from.len(), to.len());
    let n = from.len() as f64;
    let ca = from.iter().sum::<Point>() / n;
    let cb = to.iter().sum::<Point>() / n;
    let h: Matrix3<f64> = from.iter().zip(to).map(|(a, b)| (b - cb) * (a - ca).transpose()).sum();
    let svd = h.svd(true, true);
    let u = svd.u.expect("U");
    let v_t = svd.v_t.expect("Vᵀ");
    let d = (u * v_t).determinant().signum();
    let fix = Matrix3::from_diagonal(&Point::new(1.0, 1.0, d));
    let r = Rotation3::from_matrix_unchecked(u * fix * v_t);
    let t = cb - r * ca;
    (r, t)
}

/// Largest vertex displacement left after the best rigid alignment of `from` onto `to`.
pub fn rigid_residual(from: &[Point], to: &[Point]) -> f64 {
    let (r, t) = best_rigid_motion(from, to);
    from.iter()
        .zip(to)
        .map(|(a, b)| (r * a + t - b).norm())
        .fold(0.0, f64::max)
}

/// True when every sample of the path is a rigid motion of the first one, up
/// to `tol` times the diameter of the first sample.
pub fn is_trivial_flex(path: &FlexPath, tol: f64) -> bool {
    let Some(first) = path.samples.first() else {
        return true;
    };
    let base = first.points();
    let diameter = first.polyhedron(&path.surface).diameter();
    path.samples
        .iter()
        .skip(1)
        .all(|s| rigid_residual(&base, &s.points()) <= tol * diameter)
}
