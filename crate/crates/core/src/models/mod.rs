//! Built-in polyhedra and text formats (OFF meshes in, JSON reports and CSV
//! series out).

mod off;
mod report;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::complex::{ComplexError, Face, SimplicialSurface};
use crate::geometry::{check_nondegenerate, edge_lengths, GeometryError, Point, Polyhedron};
use crate::lengths::{normalize_sqrt, parse_rational, ExactLength, LengthError};

pub use off::{load_off, parse_off, save_off, OffMesh};
pub use report::{save_report_json, save_series_csv, Report, FORMAT_VERSION};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("degenerate Bricard spec: {0}")]
    DegenerateSpec(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: face is not a triangle")]
    NonTriangular { line: usize },
    #[error("model has no exact coordinates or lengths")]
    NoExactData,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Length(#[from] LengthError),
}

pub type RationalPoint = [BigRational; 3];

/// A polyhedron together with whatever exact data it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub polyhedron: Polyhedron,
    /// Rational coordinates in canonical vertex order, when known.
    pub rational_coords: Option<Vec<RationalPoint>>,
    /// Edge lengths declared by the caller, canonical edge order; they take
    /// precedence over lengths derived from rational coordinates.
    pub declared_lengths: Option<Vec<ExactLength>>,
}

impl Model {
    /// Build from rational coordinates given per vertex id 0..n.
    pub fn from_rational(name: &str, faces: Vec<Face>, coords: Vec<RationalPoint>) -> Result<Self, ModelError> {
        let surface = SimplicialSurface::new(faces)?;
        let pick = |v: usize| coords.get(v).cloned();
        let rational: Vec<RationalPoint> = surface
            .vertices()
            .iter()
            .map(|&v| pick(v).ok_or(GeometryError::MissingVertex(v)))
            .collect::<Result<_, _>>()?;
        let points = rational
            .iter()
            .map(|q| Point::new(to_f64(&q[0]), to_f64(&q[1]), to_f64(&q[2])))
            .collect();
        let polyhedron = Polyhedron::new(surface, points)?;
        Ok(Self {
            name: name.to_string(),
            polyhedron,
            rational_coords: Some(rational),
            declared_lengths: None,
        })
    }

    /// Exact edge lengths in canonical edge order.
    pub fn exact_lengths(&self) -> Result<Vec<ExactLength>, ModelError> {
        if let Some(ls) = &self.declared_lengths {
            return Ok(ls.clone());
        }
        let coords = self.rational_coords.as_ref().ok_or(ModelError::NoExactData)?;
        let s = self.polyhedron.surface();
        s.edges()
            .iter()
            .map(|e| {
                let a = &coords[s.vertex_index(e.0).expect("edge vertex")];
                let b = &coords[s.vertex_index(e.1).expect("edge vertex")];
                let sq = (0..3).fold(BigRational::zero(), |acc, k| {
                    let d = &a[k] - &b[k];
                    acc + &d * &d
                });
                Ok(normalize_sqrt(&sq)?)
            })
            .collect()
    }

    /// Largest relative mismatch between declared and realized lengths.
    pub fn declared_length_mismatch(&self) -> Option<f64> {
        let declared = self.declared_lengths.as_ref()?;
        Some(
            edge_lengths(&self.polyhedron)
                .iter()
                .zip(declared)
                .map(|(l, d)| (l - d.to_f64()).abs() / d.to_f64())
                .fold(0.0, f64::max),
        )
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn rat(s: &str) -> BigRational {
    parse_rational(s).expect("literal rational")
}

fn rpoint(x: &str, y: &str, z: &str) -> RationalPoint {
    [rat(x), rat(y), rat(z)]
}

/// Octahedron faces on vertices 0..6 with antipodal pairs (0,1), (2,3),
/// (4,5), counterclockwise from outside when vertex 2k sits at +e_k.
pub const OCTAHEDRON_FACES: [Face; 8] = [
    [0, 2, 4],
    [2, 1, 4],
    [1, 3, 4],
    [3, 0, 4],
    [2, 0, 5],
    [1, 2, 5],
    [3, 1, 5],
    [0, 3, 5],
];

/// Vertices ±e_i: 0 = +x, 1 = −x, 2 = +y, 3 = −y, 4 = +z, 5 = −z.
pub fn regular_octahedron() -> Model {
    let coords = vec![
        rpoint("1", "0", "0"),
        rpoint("-1", "0", "0"),
        rpoint("0", "1", "0"),
        rpoint("0", "-1", "0"),
        rpoint("0", "0", "1"),
        rpoint("0", "0", "-1"),
    ];
    Model::from_rational("octahedron", OCTAHEDRON_FACES.to_vec(), coords).expect("fixture")
}

/// Unit cube, vertex x + 2y + 4z at (x, y, z). Each square (v0 v1 v2 v3),
/// listed counterclockwise from outside, is split along v0v2.
pub fn triangulated_cube() -> Model {
    let coords = (0..8)
        .map(|i: u32| {
            let bit = |k: u32| ((i >> k) & 1).to_string();
            rpoint(&bit(0), &bit(1), &bit(2))
        })
        .collect();
    let quads = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ];
    let faces = quads
        .iter()
        .flat_map(|[a, b, c, d]| [[*a, *b, *c], [*a, *c, *d]])
        .collect();
    Model::from_rational("cube", faces, coords).expect("fixture")
}

/// Alternate corners of the cube [−1, 1]³.
pub fn regular_tetrahedron() -> Model {
    let coords = vec![
        rpoint("1", "1", "1"),
        rpoint("1", "-1", "-1"),
        rpoint("-1", "1", "-1"),
        rpoint("-1", "-1", "1"),
    ];
    let faces = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
    Model::from_rational("tetrahedron", faces, coords).expect("fixture")
}

/// Three free points of a line-symmetric octahedron; the other three are
/// their images under the half-turn R(x, y, z) = (−x, −y, z).
#[derive(Clone, Debug, PartialEq)]
pub struct BricardSpec {
    pub a: RationalPoint,
    pub b: RationalPoint,
    pub n: RationalPoint,
}

impl Default for BricardSpec {
    fn default() -> Self {
        Self {
            a: rpoint("2.0", "0.3", "1.1"),
            b: rpoint("-0.4", "1.7", "-0.9"),
            n: rpoint("0.5", "-0.6", "2.2"),
        }
    }
}

fn half_turn(p: &RationalPoint) -> RationalPoint {
    [-p[0].clone(), -p[1].clone(), p[2].clone()]
}

/// Vertices A = 0, A′ = 1, B = 2, B′ = 3, N = 4, S = 5 on octahedron
/// combinatorics; (A, A′), (B, B′), (N, S) are the non-adjacent pairs.
pub fn make_bricard_type1(spec: &BricardSpec) -> Result<Model, ModelError> {
    let coords = vec![
        spec.a.clone(),
        half_turn(&spec.a),
        spec.b.clone(),
        half_turn(&spec.b),
        spec.n.clone(),
        half_turn(&spec.n),
    ];
    const NAMES: [&str; 6] = ["A", "A'", "B", "B'", "N", "S"];
    for i in 0..6 {
        for j in i + 1..6 {
            if coords[i] == coords[j] {
                return Err(ModelError::DegenerateSpec(format!("{} = {}", NAMES[i], NAMES[j])));
            }
        }
    }
    let model = Model::from_rational("bricard-type1", OCTAHEDRON_FACES.to_vec(), coords)?;
    let p = &model.polyhedron;
    if let Err(GeometryError::DegenerateFace { face, .. }) = check_nondegenerate(p, p.default_area_tol()) {
        return Err(ModelError::DegenerateSpec(format!("face {face} is degenerate")));
    }
    Ok(model)
}

pub fn bricard_default() -> Model {
    let mut m = make_bricard_type1(&BricardSpec::default()).expect("default spec is valid");
    m.name = "bricard-default".to_string();
    m
}

/// Edge squared lengths of [`distinct_radicand_octahedron`].
pub const DISTINCT_RADICAND_SQUARES: [((usize, usize), u128); 12] = [
    ((0, 2), 13),
    ((0, 3), 19),
    ((0, 4), 2),
    ((0, 5), 14),
    ((1, 2), 10),
    ((1, 3), 11),
    ((1, 4), 6),
    ((1, 5), 17),
    ((2, 4), 7),
    ((2, 5), 3),
    ((3, 4), 15),
    ((3, 5), 5),
];

/// An octahedron whose twelve edge lengths are √d for twelve distinct
/// squarefree d. The lengths are declared exactly; the coordinates realize
/// them to about 1e-15.
pub fn distinct_radicand_octahedron() -> Model {
    let coords = vec![
        Point::new(1.8074174393474833, 0.11385000765064476, 1.5952804873532431),
        Point::new(-1.7362716228675659, -0.0699981298448724, 1.4623385054103752),
        Point::new(-0.3415983843697662, 1.0627950544366043, -1.1399040196943646),
        Point::new(-0.8978597954846439, -1.69368033159893, -1.3054623753271695),
        Point::new(0.5702859723912947, 0.7426400960844294, 1.3230145178413335),
        Point::new(0.5980263909831978, -0.155606696727876, -1.9352671155834178),
    ];
    let surface = SimplicialSurface::new(OCTAHEDRON_FACES.to_vec()).expect("fixture");
    let declared = surface
        .edges()
        .iter()
        .map(|e| {
            let d = DISTINCT_RADICAND_SQUARES
                .iter()
                .find(|((a, b), _)| (*a, *b) == (e.0, e.1))
                .expect("every edge declared")
                .1;
            ExactLength::sqrt_of(d)
        })
        .collect();
    Model {
        name: "distinct-radicands".to_string(),
        polyhedron: Polyhedron::new(surface, coords).expect("fixture"),
        rational_coords: None,
        declared_lengths: Some(declared),
    }
}

pub const BUILTIN_MODELS: [&str; 5] = [
    "octahedron",
    "cube",
    "tetrahedron",
    "bricard-default",
    "distinct-radicands",
];

pub fn builtin(name: &str) -> Option<Model> {
    Some(match name {
        "octahedron" => regular_octahedron(),
        "cube" => triangulated_cube(),
        "tetrahedron" => regular_tetrahedron(),
        "bricard-default" => bricard_default(),
        "distinct-radicands" => distinct_radicand_octahedron(),
        _ => return None,
    })
}
