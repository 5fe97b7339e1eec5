//! Combinatorial closed surfaces: finite strongly connected two-dimensional
//! simplicial complexes with an optional consistent orientation.
//!
//! Faces are ordered vertex triples; the cyclic order is the orientation.
//! Everything here is purely combinatorial, coordinates live in
//! [`crate::geometry`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type VertexId = usize;

/// An oriented triangle, `[a, b, c]` meaning the cyclic order a → b → c.
pub type Face = [VertexId; 3];

/// An unordered edge stored with `0 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.0, self.1)
    }
}

/// The conditions a face list must satisfy to describe a closed oriented surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    /// Every face is a genuine 2-simplex (three distinct vertices).
    #[serde(rename = "i")]
    I,
    /// Two faces meet in the empty set, a vertex or an edge of both.
    #[serde(rename = "ii")]
    II,
    /// Every vertex and edge lies in some triangle.
    #[serde(rename = "iii")]
    III,
    /// Every edge lies in exactly two triangles.
    #[serde(rename = "iv")]
    IV,
    /// The faces are connected through shared edges.
    #[serde(rename = "v")]
    V,
    /// Faces sharing an edge induce opposite directions on it.
    #[serde(rename = "orientation")]
    Orientation,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
            Condition::V => "v",
            Condition::Orientation => "orientation",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    /// The offending simplices, each as a vertex list.
    pub simplices: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            passed: violations.is_empty(),
            violations,
        }
    }

    /// True when no violation other than `Condition::Orientation` was found.
    pub fn passed_ignoring_orientation(&self) -> bool {
        self.violations.iter().all(|v| v.condition == Condition::Orientation)
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("face list is empty")]
    Empty,
    #[error("invalid complex: {} violation(s), first: condition ({})", .0.violations.len(), .0.violations[0].condition)]
    Invalid(ValidationReport),
    #[error("surface is not orientable (conflict at face {face})")]
    NonOrientable { face: usize },
}

/// Check a face list against the closed-surface conditions without throwing;
/// every problem found is listed in the report.
pub fn validate_complex(faces: &[Face]) -> ValidationReport {
    validate_with_vertices(None, faces)
}

/// As [`validate_complex`], with an explicit vertex set. Vertices that lie in
/// no face are reported under condition (iii).
pub fn validate_with_vertices(vertices: Option<&[VertexId]>, faces: &[Face]) -> ValidationReport {
    let mut violations = Vec::new();
    if faces.is_empty() {
        violations.push(Violation {
            condition: Condition::V,
            simplices: Vec::new(),
        });
        return ValidationReport::from_violations(violations);
    }

    // (i)
    let bad_faces: Vec<Vec<VertexId>> = faces
        .iter()
        .filter(|f| f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
        .map(|f| f.to_vec())
        .collect();
    if !bad_faces.is_empty() {
        violations.push(Violation {
            condition: Condition::I,
            simplices: bad_faces,
        });
    }

    // (ii): two distinct faces may not span the same vertex set.
    let mut seen: BTreeMap<[VertexId; 3], usize> = BTreeMap::new();
    let mut duplicates = Vec::new();
    for f in faces {
        let key = sorted_triple(f);
        let count = seen.entry(key).or_insert(0);
        *count += 1;
        if *count == 2 {
            duplicates.push(key.to_vec());
        }
    }
    if !duplicates.is_empty() {
        violations.push(Violation {
            condition: Condition::II,
            simplices: duplicates,
        });
    }

    // (iii)
    let face_vertices: BTreeSet<VertexId> = faces.iter().flatten().copied().collect();
    if let Some(vs) = vertices {
        let isolated: Vec<Vec<VertexId>> = vs
            .iter()
            .filter(|v| !face_vertices.contains(v))
            .map(|&v| vec![v])
            .collect();
        if !isolated.is_empty() {
            violations.push(Violation {
                condition: Condition::III,
                simplices: isolated,
            });
        }
    }

    // (iv)
    let incidence = edge_incidence(faces);
    let non_manifold: Vec<Vec<VertexId>> = incidence
        .iter()
        .filter(|(_, fs)| fs.len() != 2)
        .map(|(e, _)| vec![e.0, e.1])
        .collect();
    if !non_manifold.is_empty() {
        violations.push(Violation {
            condition: Condition::IV,
            simplices: non_manifold,
        });
    }

    // (v)
    let components = face_components(faces, &incidence);
    if components.len() > 1 {
        let simplices = components.iter().skip(1).map(|c| faces[c[0]].to_vec()).collect();
        violations.push(Violation {
            condition: Condition::V,
            simplices,
        });
    }

    // orientation
    let mut inconsistent = Vec::new();
    for (edge, fs) in &incidence {
        if fs.len() != 2 {
            continue;
        }
        let d0 = direction_in(&faces[fs[0]], *edge);
        let d1 = direction_in(&faces[fs[1]], *edge);
        if d0 == d1 {
            inconsistent.push(vec![edge.0, edge.1]);
        }
    }
    if !inconsistent.is_empty() {
        violations.push(Violation {
            condition: Condition::Orientation,
            simplices: inconsistent,
        });
    }

    ValidationReport::from_violations(violations)
}

fn sorted_triple(f: &Face) -> [VertexId; 3] {
    let mut s = *f;
    s.sort_unstable();
    s
}

fn face_edges(f: &Face) -> [(VertexId, VertexId); 3] {
    [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]
}

/// +1 if the face traverses the edge from the smaller to the larger id, -1 otherwise.
fn direction_in(f: &Face, edge: Edge) -> i8 {
    for (a, b) in face_edges(f) {
        if a == edge.0 && b == edge.1 {
            return 1;
        }
        if a == edge.1 && b == edge.0 {
            return -1;
        }
    }
    0
}

fn edge_incidence(faces: &[Face]) -> BTreeMap<Edge, Vec<usize>> {
    let mut map: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for (a, b) in face_edges(f) {
            if a != b {
                map.entry(Edge::new(a, b)).or_default().push(fi);
            }
        }
    }
    map
}

fn face_components(faces: &[Face], incidence: &BTreeMap<Edge, Vec<usize>>) -> Vec<Vec<usize>> {
    let mut adjacency = vec![Vec::new(); faces.len()];
    for fs in incidence.values() {
        for (i, &a) in fs.iter().enumerate() {
            for &b in &fs[i + 1..] {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    let mut component = vec![usize::MAX; faces.len()];
    let mut components = Vec::new();
    for start in 0..faces.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        component[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for &g in &adjacency[f] {
                if component[g] == usize::MAX {
                    component[g] = id;
                    members.push(g);
                    queue.push_back(g);
                }
            }
        }
        components.push(members);
    }
    components
}

/// A validated closed surface with derived vertex, edge and incidence data.
///
/// Vertices and edges are kept in canonical (sorted) order; every coefficient
/// vector and angle series in the crate is indexed by that edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialSurface {
    faces: Vec<Face>,
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    edge_faces: Vec<[usize; 2]>,
    vertex_index: HashMap<VertexId, usize>,
    edge_index: HashMap<Edge, usize>,
}

impl SimplicialSurface {
    /// Build a surface, requiring all conditions including a consistent orientation.
    pub fn new(faces: Vec<Face>) -> Result<Self, ComplexError> {
        if faces.is_empty() {
            return Err(ComplexError::Empty);
        }
        let report = validate_complex(&faces);
        if !report.passed {
            return Err(ComplexError::Invalid(report));
        }
        Ok(Self::build(faces))
    }

    /// Build a surface whose orientation may still be inconsistent (input to [`orient`]).
    pub fn new_unoriented(faces: Vec<Face>) -> Result<Self, ComplexError> {
        if faces.is_empty() {
            return Err(ComplexError::Empty);
        }
        let report = validate_complex(&faces);
        if !report.passed_ignoring_orientation() {
            return Err(ComplexError::Invalid(report));
        }
        Ok(Self::build(faces))
    }

    fn build(faces: Vec<Face>) -> Self {
        let incidence = edge_incidence(&faces);
        let vertices: Vec<VertexId> = faces
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let vertex_index = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<Edge> = incidence.keys().copied().collect();
        let edge_faces = incidence.values().map(|fs| [fs[0], fs[1]]).collect();
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Self {
            faces,
            vertices,
            edges,
            edge_faces,
            vertex_index,
            edge_index,
        }
    }

    /// Faces in input order, with their orientation.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Vertex ids in canonical (ascending) order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Position of a vertex id in canonical vertex order.
    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertex_index.get(&v).copied()
    }

    pub fn edge_index(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.edge_index.get(&Edge::new(a, b)).copied()
    }

    /// The two faces (indices into [`Self::faces`]) containing edge `e`.
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    /// The `dim`-simplices as sorted vertex lists, in canonical order.
    /// Dimensions above two are empty.
    pub fn skeleton(&self, dim: usize) -> Vec<Vec<VertexId>> {
        match dim {
            0 => self.vertices.iter().map(|&v| vec![v]).collect(),
            1 => self.edges.iter().map(|e| vec![e.0, e.1]).collect(),
            2 => {
                let mut fs: Vec<Vec<VertexId>> = self.faces.iter().map(|f| sorted_triple(f).to_vec()).collect();
                fs.sort();
                fs
            }
            _ => Vec::new(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    /// Genus of a closed orientable surface, from the Euler characteristic.
    pub fn genus(&self) -> Option<u64> {
        let chi = self.euler_characteristic();
        if chi <= 2 && (2 - chi) % 2 == 0 {
            Some(((2 - chi) / 2) as u64)
        } else {
            None
        }
    }

    /// The surface with every face's cyclic order reversed.
    pub fn reversed(&self) -> Self {
        let faces = self.faces.iter().map(|f| [f[2], f[1], f[0]]).collect();
        Self::build(faces)
    }

    pub fn is_oriented(&self) -> bool {
        !validate_complex(&self.faces).has(Condition::Orientation)
    }
}

/// Make the orientation globally consistent by breadth-first propagation from
/// face 0, whose cyclic order is kept. Faces are reversed as `[a, b, c] → [c, b, a]`.
pub fn orient(surface: &SimplicialSurface) -> Result<SimplicialSurface, ComplexError> {
    let mut faces = surface.faces.clone();
    let mut decided = vec![false; faces.len()];
    decided[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for (a, b) in face_edges(&faces[f]) {
            let e = surface.edge_index[&Edge::new(a, b)];
            let [f0, f1] = surface.edge_faces[e];
            let g = if f0 == f { f1 } else { f0 };
            let edge = Edge::new(a, b);
            let want = -direction_in(&faces[f], edge);
            if decided[g] {
                if direction_in(&faces[g], edge) != want {
                    return Err(ComplexError::NonOrientable { face: g });
                }
            } else {
                if direction_in(&faces[g], edge) != want {
                    faces[g].reverse();
                }
                decided[g] = true;
                queue.push_back(g);
            }
        }
    }
    Ok(SimplicialSurface::build(faces))
}
