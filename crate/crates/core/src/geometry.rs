//! Metric quantities of a realized surface: face areas, edge lengths,
//! principal dihedral angles, oriented volume and the length-weighted angle sum.

use std::f64::consts::TAU;

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitBall};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{Face, SimplicialSurface, VertexId};

pub type Point = Vector3<f64>;

/// Default tolerance on |n₁ + n₂| below which a dihedral angle is degenerate.
pub const NORMAL_CANCELLATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("no coordinates for vertex {0}")]
    MissingVertex(VertexId),
    #[error("face {face} is degenerate (area {area:e})")]
    DegenerateFace { face: usize, area: f64 },
    #[error("edge {edge} is not shared by exactly two consistently oriented faces")]
    InconsistentIncidence { edge: usize },
    #[error("edge {edge}: midpoint touches another simplex, no admissible ball")]
    ZeroRadius { edge: usize },
    #[error("edge index {0} out of range")]
    NoSuchEdge(usize),
}

/// A surface realized in ℝ³; coordinates are stored in canonical vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    surface: SimplicialSurface,
    coords: Vec<Point>,
}

impl Polyhedron {
    pub fn new(surface: SimplicialSurface, coords: Vec<Point>) -> Result<Self, GeometryError> {
        if coords.len() != surface.n_vertices() {
            return Err(GeometryError::CoordinateCount {
                expected: surface.n_vertices(),
                got: coords.len(),
            });
        }
        Ok(Self { surface, coords })
    }

    /// Coordinates given per vertex id rather than in canonical order.
    pub fn from_vertex_map(
        surface: SimplicialSurface,
        lookup: impl Fn(VertexId) -> Option<Point>,
    ) -> Result<Self, GeometryError> {
        let coords = surface
            .vertices()
            .iter()
            .map(|&v| lookup(v).ok_or(GeometryError::MissingVertex(v)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(surface, coords)
    }

    pub fn surface(&self) -> &SimplicialSurface {
        &self.surface
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    /// Position of vertex id `v`.
    pub fn position(&self, v: VertexId) -> Point {
        self.coords[self.surface.vertex_index(v).expect("vertex of this surface")]
    }

    /// Coordinates flattened to a vector in ℝ^{3v}.
    pub fn configuration(&self) -> Vec<f64> {
        self.coords.iter().flat_map(|p| [p.x, p.y, p.z]).collect()
    }

    /// Same surface, new flattened coordinates.
    pub fn with_configuration(&self, x: &[f64]) -> Self {
        assert_eq!(x.len(), 3 * self.coords.len());
        let coords = x.chunks_exact(3).map(|c| Point::new(c[0], c[1], c[2])).collect();
        Self {
            surface: self.surface.clone(),
            coords,
        }
    }

    /// Same coordinates with every face's orientation reversed.
    pub fn reversed(&self) -> Self {
        Self {
            surface: self.surface.reversed(),
            coords: self.coords.clone(),
        }
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Self {
        Self {
            surface: self.surface.clone(),
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn face_points(&self, face: &Face) -> [Point; 3] {
        [self.position(face[0]), self.position(face[1]), self.position(face[2])]
    }

    pub fn face_area(&self, fi: usize) -> f64 {
        let [a, b, c] = self.face_points(&self.surface.faces()[fi]);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Unit normal following the face's cyclic order (right-hand rule).
    pub fn face_normal(&self, fi: usize) -> Point {
        let [a, b, c] = self.face_points(&self.surface.faces()[fi]);
        (b - a).cross(&(c - a)).normalize()
    }

    pub fn max_edge_length(&self) -> f64 {
        edge_lengths(self).into_iter().fold(0.0, f64::max)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.coords.iter().enumerate() {
            for q in &self.coords[i + 1..] {
                d = d.max((p - q).norm());
            }
        }
        d
    }

    /// Scale-aware face-area tolerance, 1e-12 · (max edge length)².
    pub fn default_area_tol(&self) -> f64 {
        1e-12 * self.max_edge_length().powi(2)
    }
}

/// Areas of all faces, or the first face whose area does not exceed `tol`.
pub fn check_nondegenerate(p: &Polyhedron, tol: f64) -> Result<Vec<f64>, GeometryError> {
    (0..p.surface.n_faces())
        .map(|fi| {
            let area = p.face_area(fi);
            if area > tol {
                Ok(area)
            } else {
                Err(GeometryError::DegenerateFace { face: fi, area })
            }
        })
        .collect()
}

/// Euclidean edge lengths in canonical edge order.
pub fn edge_lengths(p: &Polyhedron) -> Vec<f64> {
    p.surface
        .edges()
        .iter()
        .map(|e| (p.position(e.0) - p.position(e.1)).norm())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DihedralAngle {
    pub edge: usize,
    /// In [0, 2π).
    pub principal_value: f64,
    /// Set when the two face normals cancel; the value is then 0.
    pub degenerate: bool,
}

/// The local picture at an edge: the edge line, the two in-face directions
/// and the two oriented normals.
struct EdgeFrame {
    start: Point,
    end: Point,
    axis: Point,
    in_face: [Point; 2],
    normals: [Point; 2],
    faces: [usize; 2],
}

fn edge_frame(p: &Polyhedron, edge: usize) -> Result<EdgeFrame, GeometryError> {
    let surface = p.surface();
    let e = *surface.edges().get(edge).ok_or(GeometryError::NoSuchEdge(edge))?;
    let faces = surface.edge_faces(edge);
    let start = p.position(e.0);
    let end = p.position(e.1);
    let axis = (end - start).normalize();
    let mut in_face = [Point::zeros(); 2];
    let mut normals = [Point::zeros(); 2];
    for (k, &fi) in faces.iter().enumerate() {
        let face = surface.faces()[fi];
        let apex = face
            .iter()
            .copied()
            .find(|&v| v != e.0 && v != e.1)
            .ok_or(GeometryError::InconsistentIncidence { edge })?;
        let w = p.position(apex) - start;
        in_face[k] = (w - axis * w.dot(&axis)).normalize();
        normals[k] = p.face_normal(fi);
    }
    Ok(EdgeFrame {
        start,
        end,
        axis,
        in_face,
        normals,
        faces,
    })
}

/// Angle of `v` around `axis`, measured from `reference`, in [0, 2π).
fn angle_around(axis: &Point, reference: &Point, v: &Point) -> f64 {
    let side = axis.cross(reference);
    let a = v.dot(&side).atan2(v.dot(reference));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Principal value of the dihedral angle at `edge`: the angular width of the
/// wedge between the two faces that contains the direction n₁ + n₂.
pub fn principal_dihedral(p: &Polyhedron, edge: usize, tol: f64) -> Result<DihedralAngle, GeometryError> {
    let frame = edge_frame(p, edge)?;
    let bisector = frame.normals[0] + frame.normals[1];
    if bisector.norm() <= tol {
        return Ok(DihedralAngle {
            edge,
            principal_value: 0.0,
            degenerate: true,
        });
    }
    let [u1, u2] = frame.in_face;
    let second = angle_around(&frame.axis, &u1, &u2);
    let towards = angle_around(&frame.axis, &u1, &bisector);
    let width = if towards > 0.0 && towards < second {
        second
    } else {
        TAU - second
    };
    // width can round to exactly 2π when the faces nearly fold together
    let principal_value = if width >= TAU { 0.0 } else { width };
    Ok(DihedralAngle {
        edge,
        principal_value,
        degenerate: false,
    })
}

/// Principal dihedral angles of all edges, canonical order.
pub fn dihedral_angles(p: &Polyhedron, tol: f64) -> Result<Vec<DihedralAngle>, GeometryError> {
    (0..p.surface.n_edges())
        .map(|e| principal_dihedral(p, e, tol))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloOptions {
    pub samples: usize,
    /// Ball radius as a fraction of the distance from the edge midpoint to
    /// the nearest simplex not containing the edge.
    pub radius_fraction: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            radius_fraction: 0.25,
            seed: 0,
            workers: 1,
        }
    }
}

/// Samples per independently seeded block. The estimate depends only on the
/// seed and the sample count, never on the worker count.
const MC_BLOCK: usize = 1 << 14;

/// Volume-ratio estimate of the principal dihedral angle: draws uniform
/// points in a small ball around the edge midpoint and counts those lying in
/// the slice entered by n₁ + n₂. Membership is decided by the parity of
/// crossings of the two face triangles along the segment to a reference
/// point inside that slice.
pub fn monte_carlo_dihedral(p: &Polyhedron, edge: usize, opts: &MonteCarloOptions) -> Result<f64, GeometryError> {
    let frame = edge_frame(p, edge)?;
    let bisector = frame.normals[0] + frame.normals[1];
    if bisector.norm() <= NORMAL_CANCELLATION_TOL {
        return Ok(0.0);
    }
    let centre = 0.5 * (frame.start + frame.end);
    let clearance = clearance_at(p, edge, &frame, &centre);
    if clearance <= 1e-12 * p.max_edge_length() {
        return Err(GeometryError::ZeroRadius { edge });
    }
    let radius = opts.radius_fraction * clearance;
    let reference = centre + 0.5 * radius * bisector.normalize();
    let faces = frame.faces.map(|fi| p.face_points(&p.surface().faces()[fi]));

    let n_blocks = opts.samples.div_ceil(MC_BLOCK);
    let count_block = |block: usize| -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(block as u64);
        let len = MC_BLOCK.min(opts.samples - block * MC_BLOCK);
        (0..len)
            .filter(|_| {
                let [x, y, z]: [f64; 3] = UnitBall.sample(&mut rng);
                let q = centre + radius * Point::new(x, y, z);
                let crossings = faces
                    .iter()
                    .filter(|t| segment_hits_triangle(&q, &reference, t))
                    .count();
                crossings % 2 == 0
            })
            .count()
    };
    let inside: usize = if opts.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        pool.install(|| (0..n_blocks).into_par_iter().map(count_block).sum())
    } else {
        (0..n_blocks).map(count_block).sum()
    };
    Ok(TAU * inside as f64 / opts.samples as f64)
}

/// Distance from `centre` to the other edges of the two incident faces and to
/// every face not containing the edge.
fn clearance_at(p: &Polyhedron, edge: usize, frame: &EdgeFrame, centre: &Point) -> f64 {
    let surface = p.surface();
    let e = surface.edges()[edge];
    let mut best = f64::INFINITY;
    for &fi in &frame.faces {
        let face = surface.faces()[fi];
        for k in 0..3 {
            let (a, b) = (face[k], face[(k + 1) % 3]);
            if (a == e.0 && b == e.1) || (a == e.1 && b == e.0) {
                continue;
            }
            best = best.min(point_segment_distance(centre, &p.position(a), &p.position(b)));
        }
    }
    for (fi, face) in surface.faces().iter().enumerate() {
        if frame.faces.contains(&fi) {
            continue;
        }
        let [a, b, c] = p.face_points(face);
        best = best.min(point_triangle_distance(centre, &a, &b, &c));
    }
    best
}

pub(crate) fn point_segment_distance(x: &Point, a: &Point, b: &Point) -> f64 {
    let ab = b - a;
    let t = ((x - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    (x - (a + ab * t)).norm()
}

/// Distance from `x` to the closed triangle abc.
pub(crate) fn point_triangle_distance(x: &Point, a: &Point, b: &Point, c: &Point) -> f64 {
    let n = (b - a).cross(&(c - a));
    let nn = n.norm_squared();
    if nn > 0.0 {
        // projection inside the triangle?
        let proj = x - n * ((x - a).dot(&n) / nn);
        let inside = [(a, b), (b, c), (c, a)]
            .iter()
            .all(|(u, v)| (*v - *u).cross(&(proj - *u)).dot(&n) >= 0.0);
        if inside {
            return (x - proj).norm();
        }
    }
    point_segment_distance(x, a, b)
        .min(point_segment_distance(x, b, c))
        .min(point_segment_distance(x, c, a))
}

/// Möller–Trumbore test for the open segment pq against triangle t.
fn segment_hits_triangle(p: &Point, q: &Point, t: &[Point; 3]) -> bool {
    let dir = q - p;
    let e1 = t[1] - t[0];
    let e2 = t[2] - t[0];
    let h = dir.cross(&e2);
    let det = e1.dot(&h);
    if det.abs() < 1e-300 {
        return false;
    }
    let inv = 1.0 / det;
    let s = p - t[0];
    let u = inv * s.dot(&h);
    if !(0.0..=1.0).contains(&u) {
        return false;
    }
    let qv = s.cross(&e1);
    let v = inv * dir.dot(&qv);
    if v < 0.0 || u + v > 1.0 {
        return false;
    }
    let s_param = inv * e2.dot(&qv);
    s_param > 0.0 && s_param < 1.0
}

/// Signed volume enclosed by the oriented surface.
pub fn oriented_volume(p: &Polyhedron) -> f64 {
    p.surface
        .faces()
        .iter()
        .map(|f| {
            let [a, b, c] = p.face_points(f);
            a.dot(&b.cross(&c))
        })
        .sum::<f64>()
        / 6.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedAngleSum {
    pub value: f64,
    /// Edges whose angle was degenerate (contributing 0).
    pub degenerate_edges: Vec<usize>,
}

/// Σ ℓ_σ·φ_σ over all edges using principal values.
pub fn weighted_angle_sum(p: &Polyhedron) -> Result<WeightedAngleSum, GeometryError> {
    let angles = dihedral_angles(p, NORMAL_CANCELLATION_TOL)?;
    let values: Vec<f64> = angles.iter().map(|a| a.principal_value).collect();
    Ok(WeightedAngleSum {
        value: weighted_sum(&edge_lengths(p), &values),
        degenerate_edges: angles.iter().filter(|a| a.degenerate).map(|a| a.edge).collect(),
    })
}

/// Σ ℓ_σ·φ_σ for given lengths and (principal or lifted) angles.
pub fn weighted_sum(lengths: &[f64], angles: &[f64]) -> f64 {
    assert_eq!(lengths.len(), angles.len());
    lengths.iter().zip(angles).map(|(l, a)| l * a).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use approx::assert_abs_diff_eq;
    use nalgebra::{Rotation3, Unit};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn areas() {
        let oct = models::regular_octahedron().polyhedron;
        let areas = check_nondegenerate(&oct, oct.default_area_tol()).unwrap();
        assert_eq!(areas.len(), 8);
        for a in areas {
            assert_abs_diff_eq!(a, 3f64.sqrt() / 2.0, epsilon = 1e-14);
        }
        let tri = [Point::zeros(), Point::x(), Point::y()];
        assert_abs_diff_eq!(0.5 * (tri[1] - tri[0]).cross(&(tri[2] - tri[0])).norm(), 0.5);
    }

    #[test]
    fn collinear_face_is_degenerate() {
        let oct = models::regular_octahedron().polyhedron;
        // squash vertex 4 (+z) onto the segment between 0 (+x) and 2 (+y)
        let squashed = oct.map_points(|q| {
            if *q == Point::z() {
                Point::new(0.5, 0.5, 0.0)
            } else {
                *q
            }
        });
        match check_nondegenerate(&squashed, squashed.default_area_tol()) {
            Err(GeometryError::DegenerateFace { face, area }) => {
                assert_eq!(face, 0);
                assert_abs_diff_eq!(area, 0.0, epsilon = 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lengths() {
        let oct = models::regular_octahedron().polyhedron;
        for l in edge_lengths(&oct) {
            assert_abs_diff_eq!(l, 2f64.sqrt(), epsilon = 1e-15);
        }
        assert_eq!((Point::new(3.0, 4.0, 0.0) - Point::zeros()).norm(), 5.0);
    }

    #[test]
    fn cube_angles() {
        let cube = models::triangulated_cube().polyhedron;
        let s = cube.surface();
        for (ei, e) in s.edges().iter().enumerate() {
            let phi = principal_dihedral(&cube, ei, NORMAL_CANCELLATION_TOL).unwrap();
            let rev = principal_dihedral(&cube.reversed(), ei, NORMAL_CANCELLATION_TOL).unwrap();
            let diagonal = (cube.position(e.0) - cube.position(e.1)).norm() > 1.2;
            if diagonal {
                assert_abs_diff_eq!(phi.principal_value, PI, epsilon = 1e-12);
                assert_abs_diff_eq!(rev.principal_value, PI, epsilon = 1e-12);
            } else {
                assert_abs_diff_eq!(phi.principal_value, 1.5 * PI, epsilon = 1e-12);
                assert_abs_diff_eq!(rev.principal_value, 0.5 * PI, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn tetrahedron_exterior_angle() {
        let tet = models::regular_tetrahedron().polyhedron;
        let interior = (1.0f64 / 3.0).acos();
        for e in 0..6 {
            let phi = principal_dihedral(&tet, e, NORMAL_CANCELLATION_TOL).unwrap();
            assert_abs_diff_eq!(phi.principal_value, TAU - interior, epsilon = 1e-12);
            // independent route via normals: interior angle = π − angle between normals
            let [f1, f2] = tet.surface().edge_faces(e);
            let between = tet.face_normal(f1).dot(&tet.face_normal(f2)).acos();
            assert_abs_diff_eq!(PI - between, interior, epsilon = 1e-12);
        }
    }

    #[test]
    fn folded_edge_is_degenerate() {
        // +z moved onto -z: the two faces at edge (0,2) coincide with opposite normals
        let oct = models::regular_octahedron().polyhedron;
        let folded = oct.map_points(|q| if *q == Point::z() { -Point::z() } else { *q });
        let e = folded.surface().edge_index(0, 2).unwrap();
        let phi = principal_dihedral(&folded, e, NORMAL_CANCELLATION_TOL).unwrap();
        assert!(phi.degenerate);
        assert_eq!(phi.principal_value, 0.0);
    }

    #[test]
    fn orientations_sum_to_full_turn() {
        for m in [
            models::regular_octahedron(),
            models::bricard_default(),
            models::regular_tetrahedron(),
        ] {
            let p = m.polyhedron;
            let r = p.reversed();
            for e in 0..p.surface().n_edges() {
                let a = principal_dihedral(&p, e, NORMAL_CANCELLATION_TOL).unwrap();
                let b = principal_dihedral(&r, e, NORMAL_CANCELLATION_TOL).unwrap();
                assert_abs_diff_eq!(a.principal_value + b.principal_value, TAU, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn independent_of_point_on_edge() {
        // sliding both faces along the edge direction moves the edge midpoint
        // while keeping the wedge; the angle must not change
        let cube = models::triangulated_cube().polyhedron;
        for ei in 0..cube.surface().n_edges() {
            let e = cube.surface().edges()[ei];
            let dir = (cube.position(e.1) - cube.position(e.0)).normalize();
            let shifted = cube.map_points(|q| q + 0.37 * dir);
            let a = principal_dihedral(&cube, ei, NORMAL_CANCELLATION_TOL).unwrap();
            let b = principal_dihedral(&shifted, ei, NORMAL_CANCELLATION_TOL).unwrap();
            assert_abs_diff_eq!(a.principal_value, b.principal_value, epsilon = 1e-12);
        }
    }

    #[test]
    fn monte_carlo_flat_and_cube() {
        let cube = models::triangulated_cube().polyhedron;
        let opts = MonteCarloOptions {
            samples: 200_000,
            ..Default::default()
        };
        let flat = cube.surface().edge_index(0, 3).unwrap();
        let est = monte_carlo_dihedral(&cube, flat, &opts).unwrap();
        assert_abs_diff_eq!(est, PI, epsilon = 0.03);
        let true_edge = cube.surface().edge_index(0, 1).unwrap();
        let est = monte_carlo_dihedral(&cube, true_edge, &opts).unwrap();
        assert_abs_diff_eq!(est, 1.5 * PI, epsilon = 0.03);
        let est = monte_carlo_dihedral(&cube.reversed(), true_edge, &opts).unwrap();
        assert_abs_diff_eq!(est, 0.5 * PI, epsilon = 0.03);
    }

    #[test]
    fn monte_carlo_is_independent_of_workers() {
        let tet = models::regular_tetrahedron().polyhedron;
        let base = MonteCarloOptions {
            samples: 50_000,
            seed: 7,
            ..Default::default()
        };
        let one = monte_carlo_dihedral(&tet, 2, &base).unwrap();
        let four = monte_carlo_dihedral(&tet, 2, &MonteCarloOptions { workers: 4, ..base }).unwrap();
        assert_eq!(one, four);
        let other_seed = monte_carlo_dihedral(&tet, 2, &MonteCarloOptions { seed: 8, ..base }).unwrap();
        assert_ne!(one, other_seed);
    }

    #[test]
    fn monte_carlo_zero_radius_on_self_contact() {
        // vertex 1 (-x) moved onto the midpoint of edge (0,2), which then
        // touches faces not containing that edge
        let oct = models::regular_octahedron().polyhedron;
        let touch = oct.map_points(|q| {
            if *q == -Point::x() {
                Point::new(0.5, 0.5, 0.0)
            } else {
                *q
            }
        });
        let e = touch.surface().edge_index(0, 2).unwrap();
        let opts = MonteCarloOptions {
            samples: 10,
            ..Default::default()
        };
        let r = monte_carlo_dihedral(&touch, e, &opts);
        assert_eq!(r, Err(GeometryError::ZeroRadius { edge: e }));
    }

    #[test]
    fn volumes() {
        let cube = models::triangulated_cube().polyhedron;
        assert_abs_diff_eq!(oriented_volume(&cube), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(oriented_volume(&cube.reversed()), -1.0, epsilon = 1e-14);
        let oct = models::regular_octahedron().polyhedron;
        // eight tetrahedra (0, e_i, e_j, e_k) of volume 1/6 each
        assert_abs_diff_eq!(oriented_volume(&oct), 8.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn weighted_sums() {
        let lengths = [1.0, 2.0, 0.5];
        assert_abs_diff_eq!(weighted_sum(&lengths, &[PI; 3]), PI * 3.5);

        let cube = models::triangulated_cube().polyhedron;
        let w = weighted_angle_sum(&cube).unwrap();
        assert!(w.degenerate_edges.is_empty());
        assert_abs_diff_eq!(w.value, 18.0 * PI + 6.0 * 2f64.sqrt() * PI, epsilon = 1e-10);

        let oct = models::regular_octahedron().polyhedron;
        let phi = TAU - (-1.0f64 / 3.0).acos();
        let w = weighted_angle_sum(&oct).unwrap();
        assert_abs_diff_eq!(w.value, 12.0 * 2f64.sqrt() * phi, epsilon = 1e-10);
    }

    fn rotation_strategy() -> impl Strategy<Value = (Rotation3<f64>, Point)> {
        (
            -1.0..1.0f64,
            -1.0..1.0f64,
            0.1..1.0f64,
            -3.0..3.0f64,
            -5.0..5.0f64,
            -5.0..5.0f64,
            -5.0..5.0f64,
        )
            .prop_map(|(ax, ay, az, angle, tx, ty, tz)| {
                let axis = Unit::new_normalize(Point::new(ax, ay, az));
                (Rotation3::from_axis_angle(&axis, angle), Point::new(tx, ty, tz))
            })
    }

    proptest! {
        #[test]
        fn volume_and_angles_are_rigid_invariants((rot, shift) in rotation_strategy()) {
            let p = models::bricard_default().polyhedron;
            let moved = p.map_points(|q| rot * q + shift);
            let v0 = oriented_volume(&models::triangulated_cube().polyhedron);
            let cube = models::triangulated_cube().polyhedron.map_points(|q| rot * q + shift);
            prop_assert!((oriented_volume(&cube) - v0).abs() <= 1e-9 * v0.abs());
            for e in 0..p.surface().n_edges() {
                let a = principal_dihedral(&p, e, NORMAL_CANCELLATION_TOL).unwrap();
                let b = principal_dihedral(&moved, e, NORMAL_CANCELLATION_TOL).unwrap();
                prop_assert!((a.principal_value - b.principal_value).abs() < 1e-10);
            }
        }

        #[test]
        fn point_reflection_negates_volume((rot, shift) in rotation_strategy()) {
            let cube = models::triangulated_cube().polyhedron.map_points(|q| rot * q + shift);
            let mirrored = cube.map_points(|q| -q);
            prop_assert!((oriented_volume(&mirrored) + oriented_volume(&cube)).abs() < 1e-9);
        }
    }
}
