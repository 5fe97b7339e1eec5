//! Independent oracles for the integration tests.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use rigiditylab::models::Model;

/// Rank over ℚ by fraction-exact Gaussian elimination.
pub fn exact_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = BigRational::one() / m[rank][c].clone();
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] * &inv;
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The model's coordinates as exact rationals: its rational coordinates when
/// it has them, otherwise the exact values of its doubles.
pub fn rational_coords(model: &Model) -> Vec<[BigRational; 3]> {
    match &model.rational_coords {
        Some(q) => q.clone(),
        None => model
            .polyhedron
            .coords()
            .iter()
            .map(|p| [0, 1, 2].map(|k| BigRational::from_float(p[k]).expect("finite coordinate")))
            .collect(),
    }
}

/// 3v − 6 − rank of the exact rigidity matrix (non-collinear input assumed).
pub fn exact_flex_dim(model: &Model) -> usize {
    let s = model.polyhedron.surface();
    let q = rational_coords(model);
    let n = 3 * s.n_vertices();
    let two = BigRational::from_integer(2.into());
    let matrix: Vec<Vec<BigRational>> = s
        .edges()
        .iter()
        .map(|e| {
            let i = s.vertex_index(e.0).unwrap();
            let j = s.vertex_index(e.1).unwrap();
            let mut row = vec![BigRational::zero(); n];
            for k in 0..3 {
                let d = &two * (&q[i][k] - &q[j][k]);
                row[3 * j + k] = -d.clone();
                row[3 * i + k] = d;
            }
            row
        })
        .collect();
    n - 6 - exact_rank(matrix)
}
