//! LLL reduction of integer lattice bases with exact rational Gram–Schmidt data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn round(x: &BigRational) -> BigInt {
    // round half away from zero is fine for size reduction
    x.round().to_integer()
}

struct GramSchmidt {
    ortho: Vec<Vec<BigRational>>,
    norms: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl GramSchmidt {
    fn new(n: usize) -> Self {
        Self {
            ortho: vec![Vec::new(); n],
            norms: vec![BigRational::zero(); n],
            mu: vec![vec![BigRational::zero(); n]; n],
        }
    }

    /// Recompute row `k` from the basis and the (already valid) rows before it.
    fn update_row(&mut self, basis: &[Vec<BigInt>], k: usize) {
        let b = to_rational(&basis[k]);
        let mut star = b.clone();
        for j in 0..k {
            let m = if self.norms[j].is_zero() {
                BigRational::zero()
            } else {
                dot(&b, &self.ortho[j]) / &self.norms[j]
            };
            for (s, o) in star.iter_mut().zip(&self.ortho[j]) {
                *s -= &m * o;
            }
            self.mu[k][j] = m;
        }
        self.norms[k] = dot(&star, &star);
        self.ortho[k] = star;
    }
}

/// Reduce the rows of `basis` in place with parameter δ = 3/4. The rows must
/// be linearly independent.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut gs = GramSchmidt::new(n);
    for k in 0..n {
        gs.update_row(basis, k);
    }
    let mut k = 1;
    while k < n {
        size_reduce(basis, &mut gs, k, k - 1, &half);
        let mu = &gs.mu[k][k - 1];
        let lovasz = (&delta - mu * mu) * &gs.norms[k - 1];
        if gs.norms[k] < lovasz {
            basis.swap(k, k - 1);
            for row in k - 1..n {
                gs.update_row(basis, row);
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                size_reduce(basis, &mut gs, k, l, &half);
            }
            k += 1;
        }
    }
}

fn size_reduce(basis: &mut [Vec<BigInt>], gs: &mut GramSchmidt, k: usize, l: usize, half: &BigRational) {
    if gs.mu[k][l].abs() <= *half {
        return;
    }
    let q = round(&gs.mu[k][l]);
    let (head, tail) = basis.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        *x -= &q * y;
    }
    let qr = BigRational::from_integer(q);
    for j in 0..l {
        let delta = &qr * &gs.mu[l][j];
        gs.mu[k][j] -= delta;
    }
    gs.mu[k][l] -= &qr;
}
