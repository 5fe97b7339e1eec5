//! Heuristic integer-relation search for lengths known only as decimals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::exact::parse_rational;
use super::lattice::lll_reduce;
use super::LengthError;

pub const MAX_RELATION_DIM: usize = 64;

/// A real number held exactly as the rational it was given as, together with
/// the number of significant decimal digits it is trusted to.
#[derive(Clone, Debug, PartialEq)]
pub struct DecimalValue {
    pub value: BigRational,
    pub digits: u32,
}

/// Marks a value as exact.
pub const EXACT_DIGITS: u32 = u32::MAX;

impl DecimalValue {
    /// Parses a literal. Integers and fractions "a/b" are exact; otherwise
    /// every written significant digit is trusted.
    pub fn parse(s: &str) -> Option<Self> {
        let value = parse_rational(s)?;
        let s = s.trim();
        if !s.contains(['.', 'e', 'E']) {
            return Some(Self::exact(value));
        }
        let mantissa = s.split(['e', 'E']).next().unwrap_or("");
        let digits = mantissa
            .chars()
            .filter(char::is_ascii_digit)
            .skip_while(|&c| c == '0')
            .count()
            .max(1) as u32;
        Some(Self { value, digits })
    }

    pub fn exact(value: BigRational) -> Self {
        Self {
            value,
            digits: EXACT_DIGITS,
        }
    }

    /// The exact binary value of a double, trusted to 15 digits.
    pub fn from_f64(x: f64) -> Option<Self> {
        Some(Self {
            value: BigRational::from_float(x)?,
            digits: 15,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationOptions {
    /// Largest admissible |c_i|.
    pub height: u64,
    /// Lattice scale N; values enter the lattice as round(N·x_i).
    pub scale: u64,
    /// Decimal precision at which a candidate's residual is verified.
    pub precision: u32,
}

impl Default for RelationOptions {
    fn default() -> Self {
        Self {
            height: 1_000_000,
            scale: 1_000_000_000_000,
            precision: 50,
        }
    }
}

fn ten_pow_neg(k: u32) -> BigRational {
    BigRational::new(1.into(), BigInt::from(10).pow(k))
}

/// Search for integers c, not all zero, with |c_i| ≤ H and Σ c_i·x_i = 0.
///
/// The lattice spanned by the rows (e_i | round(N·x_i)) is LLL-reduced and
/// each reduced row is a candidate. A candidate is accepted when its height
/// is at most H, |Σ c_i x_i| ≤ n·H/N, and the residual evaluated on the exact
/// inputs stays within what rounding of the inputs can explain:
/// Σ |c_i|·|x_i|·10^(1−p_i) + 10^(−p), with p_i the smaller of the requested
/// precision p and the digits input i carries. Returns the accepted candidate
/// of least height, normalized so its first nonzero entry is positive.
pub fn find_integer_relation(values: &[DecimalValue], opts: &RelationOptions) -> Result<Vec<i64>, LengthError> {
    let n = values.len();
    if !(2..=MAX_RELATION_DIM).contains(&n) {
        return Err(LengthError::RelationDimension(n));
    }
    if opts.scale == 0 || opts.height == 0 {
        return Err(LengthError::NoneUpToHeight(opts.height));
    }
    let scale = BigRational::from_integer(BigInt::from(opts.scale));
    let mut basis: Vec<Vec<BigInt>> = values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row = vec![BigInt::zero(); n + 1];
            row[i] = BigInt::from(1);
            row[n] = (&x.value * &scale).round().to_integer();
            row
        })
        .collect();
    lll_reduce(&mut basis);

    let height = BigInt::from(opts.height);
    let n_big = BigRational::from_integer(BigInt::from(n as u64));
    let lattice_bound = &n_big * BigRational::new(height.clone(), BigInt::from(opts.scale));
    let ten = BigRational::from_integer(10.into());
    let rounding: Vec<BigRational> = values
        .iter()
        .map(|x| x.value.abs() * &ten * ten_pow_neg(x.digits.min(opts.precision)))
        .collect();
    let floor = ten_pow_neg(opts.precision);

    let mut best: Option<Vec<BigInt>> = None;
    for row in &basis {
        let coeffs = &row[..n];
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        if coeffs.iter().any(|c| c.abs() > height) {
            continue;
        }
        let residual = coeffs
            .iter()
            .zip(values)
            .fold(BigRational::zero(), |acc, (c, x)| {
                acc + BigRational::from_integer(c.clone()) * &x.value
            })
            .abs();
        let verify_bound = coeffs.iter().zip(&rounding).fold(floor.clone(), |acc, (c, e)| {
            acc + BigRational::from_integer(c.abs()) * e
        });
        if residual > lattice_bound || residual > verify_bound {
            continue;
        }
        let h = coeffs.iter().map(|c| c.abs()).max().unwrap_or_default();
        let better = best
            .as_ref()
            .is_none_or(|b| h < b.iter().map(|c| c.abs()).max().unwrap_or_default());
        if better {
            best = Some(coeffs.to_vec());
        }
    }
    let relation = best.ok_or(LengthError::NoneUpToHeight(opts.height))?;
    Ok(normalize(relation))
}

fn normalize(mut c: Vec<BigInt>) -> Vec<i64> {
    let g = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        c.iter_mut().for_each(|x| *x /= &g);
    }
    if c.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    c.iter().map(|x| x.to_i64().expect("bounded by height")).collect()
}
