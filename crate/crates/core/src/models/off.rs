use std::fmt::Write;

use crate::complex::Face;
use crate::geometry::Point;
use crate::lengths::parse_rational;

use super::{Model, ModelError, RationalPoint, FORMAT_VERSION};

/// An OFF mesh as read, before any validation of its faces.
#[derive(Clone, Debug, PartialEq)]
pub struct OffMesh {
    pub coords: Vec<Point>,
    /// The same coordinates as the exact rationals their decimals denote.
    pub rational: Vec<RationalPoint>,
    pub faces: Vec<Face>,
}

fn parse_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        message: message.into(),
    }
}

/// Parse OFF text: header "OFF", counts "nV nF nE", nV coordinate lines and
/// nF lines "3 i j k". Everything after '#' on a line is ignored.
pub fn parse_off(text: &str) -> Result<OffMesh, ModelError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count().max(1);

    match lines.next() {
        Some((_, "OFF")) => {}
        Some((n, _)) => return Err(parse_err(n, "expected header \"OFF\"")),
        None => return Err(parse_err(1, "expected header \"OFF\"")),
    }
    let (n, counts) = lines
        .next()
        .ok_or_else(|| parse_err(last_line, "missing counts line"))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(n, format!("bad count {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [nv, nf, _ne] = counts[..] else {
        return Err(parse_err(n, "expected \"nV nF nE\""));
    };

    let mut coords = Vec::with_capacity(nv);
    let mut rational = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines
            .next()
            .ok_or_else(|| parse_err(last_line, "missing vertex line"))?;
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(parse_err(n, "expected three coordinates"));
        }
        let mut p = Point::zeros();
        let mut q: Vec<_> = Vec::with_capacity(3);
        for (k, t) in tokens.iter().enumerate() {
            p[k] = t.parse().map_err(|_| parse_err(n, format!("bad coordinate {t:?}")))?;
            q.push(parse_rational(t).ok_or_else(|| parse_err(n, format!("bad coordinate {t:?}")))?);
        }
        coords.push(p);
        rational.push([q[0].clone(), q[1].clone(), q[2].clone()]);
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, l) = lines.next().ok_or_else(|| parse_err(last_line, "missing face line"))?;
        let tokens: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(n, format!("bad index {t:?}"))))
            .collect::<Result<_, _>>()?;
        match tokens.split_first() {
            Some((&3, rest)) if rest.len() == 3 => {
                if let Some(bad) = rest.iter().find(|&&v| v >= nv) {
                    return Err(parse_err(n, format!("vertex index {bad} out of range")));
                }
                faces.push([rest[0], rest[1], rest[2]]);
            }
            Some((&k, rest)) if k == rest.len() => return Err(ModelError::NonTriangular { line: n }),
            _ => return Err(parse_err(n, "face vertex count does not match")),
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_err(n, "unexpected trailing data"));
    }
    Ok(OffMesh {
        coords,
        rational,
        faces,
    })
}

/// Parse and validate; orientation is taken from the face vertex order.
pub fn load_off(text: &str, name: &str) -> Result<Model, ModelError> {
    let mesh = parse_off(text)?;
    let mut model = Model::from_rational(name, mesh.faces, mesh.rational)?;
    // keep the nearest doubles of the written decimals
    let s = model.polyhedron.surface().clone();
    model.polyhedron =
        crate::geometry::Polyhedron::new(s.clone(), s.vertices().iter().map(|&v| mesh.coords[v]).collect())?;
    Ok(model)
}

/// Faces rotated to start at their least vertex, then sorted.
fn canonical_faces(faces: &[Face]) -> Vec<Face> {
    let mut out: Vec<Face> = faces
        .iter()
        .map(|f| {
            let i = (0..3).min_by_key(|&i| f[i]).expect("three vertices");
            [f[i], f[(i + 1) % 3], f[(i + 2) % 3]]
        })
        .collect();
    out.sort_unstable();
    out
}

/// Canonical OFF text: shortest round-trip decimals, vertices renumbered to
/// canonical order, faces rotated and sorted.
pub fn save_off(p: &crate::geometry::Polyhedron) -> String {
    let s = p.surface();
    let renumbered: Vec<Face> = s
        .faces()
        .iter()
        .map(|f| f.map(|v| s.vertex_index(v).expect("face vertex")))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "OFF");
    let _ = writeln!(out, "# format_version: {FORMAT_VERSION}");
    let _ = writeln!(out, "{} {} {}", s.n_vertices(), s.n_faces(), s.n_edges());
    for q in p.coords() {
        let _ = writeln!(out, "{} {} {}", q.x, q.y, q.z);
    }
    for f in canonical_faces(&renumbered) {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    out
}
