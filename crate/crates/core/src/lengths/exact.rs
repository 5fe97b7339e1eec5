use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::factor::squarefree_decompose;
use super::LengthError;

/// A length `r·√d` with `r` rational and `d` a squarefree positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactLength {
    pub r: BigRational,
    pub d: u128,
}

impl ExactLength {
    /// Canonical constructor; `d` must already be squarefree.
    pub fn new(r: BigRational, d: u128) -> Self {
        Self { r, d }
    }

    /// `√d` for a squarefree `d`.
    pub fn sqrt_of(d: u128) -> Self {
        Self::new(BigRational::one(), d)
    }

    pub fn to_f64(&self) -> f64 {
        self.r.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// r²·d, exactly.
    pub fn square(&self) -> BigRational {
        &self.r * &self.r * BigRational::from_integer(BigInt::from(self.d))
    }

    /// Decimal rendering truncated to `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        // floor(10^digits · r·√d) = floor(√(r²·d·10^(2·digits)))
        let scale = BigInt::from(10).pow(2 * digits);
        let sq = self.square() * BigRational::from_integer(scale);
        let floor = (sq.numer() / sq.denom()).sqrt();
        let mut s = floor.to_string();
        let digits = digits as usize;
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let split = s.len() - digits;
        format!("{}.{}", &s[..split], &s[split..])
    }
}

impl fmt::Display for ExactLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "{}", self.r)
        } else if self.r.is_one() {
            write!(f, "√{}", self.d)
        } else {
            write!(f, "{}·√{}", self.r, self.d)
        }
    }
}

fn to_u64(n: &BigInt) -> Result<u64, LengthError> {
    n.to_u64()
        .filter(|&v| v < (1u64 << 63))
        .ok_or_else(|| LengthError::FactorizationTooLarge(n.to_string()))
}

/// Canonical form of √q for a positive rational q.
pub fn normalize_sqrt(q: &BigRational) -> Result<ExactLength, LengthError> {
    if !q.is_positive() {
        return Err(LengthError::NonPositive);
    }
    // q is kept reduced, so the two squarefree parts are coprime
    let (sn, dn) = squarefree_decompose(to_u64(q.numer())?)?;
    let (sm, dm) = squarefree_decompose(to_u64(q.denom())?)?;
    // √(sn²dn / sm²dm) = sn/(sm·dm) · √(dn·dm)
    let r = BigRational::new(BigInt::from(sn), BigInt::from(sm) * BigInt::from(dm));
    Ok(ExactLength::new(r, dn as u128 * dm as u128))
}

/// A ℚ-basis {√d_j} of the span of a set of lengths, with coefficient rows
/// in the order the lengths were given.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanBasis {
    /// Radicands d_j, ascending; λ_j = √d_j.
    pub radicands: Vec<u128>,
    /// `coefficients[σ][j]` = α_{σj}.
    pub coefficients: Vec<Vec<BigRational>>,
}

impl SpanBasis {
    pub fn dim(&self) -> usize {
        self.radicands.len()
    }

    /// Σ_j α_{σj}·λ_j as an exact length. Rows are supported on a single
    /// basis element by construction.
    pub fn reconstruct(&self, row: usize) -> ExactLength {
        let coeffs = &self.coefficients[row];
        match coeffs.iter().position(|c| !c.is_zero()) {
            Some(j) => ExactLength::new(coeffs[j].clone(), self.radicands[j]),
            None => ExactLength::new(BigRational::zero(), 1),
        }
    }

    /// The coordinate functional for λ_j applied to every row: column j of α.
    pub fn column(&self, j: usize) -> Vec<BigRational> {
        self.coefficients.iter().map(|row| row[j].clone()).collect()
    }

    /// Edges (rows) whose coefficient is nonzero on basis element j.
    pub fn support(&self, j: usize) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&s| !self.coefficients[s][j].is_zero())
            .collect()
    }
}

pub fn q_basis(lengths: &[ExactLength]) -> SpanBasis {
    let radicands: Vec<u128> = lengths
        .iter()
        .map(|l| l.d)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let coefficients = lengths
        .iter()
        .map(|l| {
            radicands
                .iter()
                .map(|&d| if d == l.d { l.r.clone() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    SpanBasis {
        radicands,
        coefficients,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndependenceVerdict {
    IndependentExact,
    /// No integer relation with coefficients up to `height` was found.
    IndependentUpToHeight {
        height: u64,
    },
    Dependent {
        #[serde(serialize_with = "serialize_big_ints")]
        relation: Vec<BigInt>,
    },
}

pub(crate) fn serialize_big_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Scale a rational vector to coprime integers; the first nonzero entry
/// keeps its sign.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Exact ℚ-independence of lengths of the form r·√d: independent iff all
/// radicands are distinct. Otherwise the first clashing pair gives the relation.
pub fn is_q_independent(lengths: &[ExactLength]) -> IndependenceVerdict {
    let mut first_with: BTreeMap<u128, usize> = BTreeMap::new();
    for (j, l) in lengths.iter().enumerate() {
        if let Some(&i) = first_with.get(&l.d) {
            let mut rel = vec![BigRational::zero(); lengths.len()];
            rel[i] = lengths[j].r.clone();
            rel[j] = -lengths[i].r.clone();
            return IndependenceVerdict::Dependent {
                relation: clear_denominators(&rel),
            };
        }
        first_with.insert(l.d, j);
    }
    IndependenceVerdict::IndependentExact
}

/// True iff Σ c_i·ℓ_i = 0 exactly (the sum vanishes in each radicand group).
pub fn annihilates(lengths: &[ExactLength], relation: &[BigInt]) -> bool {
    let mut groups: BTreeMap<u128, BigRational> = BTreeMap::new();
    for (l, c) in lengths.iter().zip(relation) {
        *groups.entry(l.d).or_insert_with(BigRational::zero) += &l.r * BigRational::from_integer(c.clone());
    }
    groups.values().all(Zero::is_zero)
}

/// Parse "a", "a/b" or a finite decimal "x.y" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (Sign::Minus, rest),
        None => (Sign::Plus, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let digits = if sign == Sign::Minus { -digits } else { digits };
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(digits * ten.pow(shift as u32))
    } else {
        BigRational::new(digits, ten.pow((-shift) as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn len(n: i64, d: i64, rad: u128) -> ExactLength {
        ExactLength::new(q(n, d), rad)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_sqrt(&q(8, 1)).unwrap(), len(2, 1, 2));
        assert_eq!(normalize_sqrt(&q(1, 1)).unwrap(), len(1, 1, 1));
        assert_eq!(normalize_sqrt(&q(9, 2)).unwrap(), len(3, 2, 2));
        assert_eq!(normalize_sqrt(&q(1083, 100)).unwrap(), len(19, 10, 3));
        assert_eq!(normalize_sqrt(&q(0, 1)), Err(LengthError::NonPositive));
        assert_eq!(normalize_sqrt(&q(-2, 1)), Err(LengthError::NonPositive));
        let huge = BigRational::from_integer(BigInt::from(1u64 << 63) * 3);
        assert!(matches!(
            normalize_sqrt(&huge),
            Err(LengthError::FactorizationTooLarge(_))
        ));
    }

    #[test]
    fn basis_examples() {
        let b = q_basis(&[len(1, 1, 2), len(2, 1, 2), len(1, 1, 3)]);
        assert_eq!(b.radicands, vec![2, 3]);
        assert_eq!(
            b.coefficients,
            vec![vec![q(1, 1), q(0, 1)], vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]
        );

        let oct = vec![len(1, 1, 2); 12];
        let b = q_basis(&oct);
        assert_eq!(b.radicands, vec![2]);
        assert!(b.coefficients.iter().all(|row| row == &vec![q(1, 1)]));

        let b = q_basis(&[len(3, 1, 1), len(5, 2, 1)]);
        assert_eq!(b.radicands, vec![1]);
        assert_eq!(b.coefficients, vec![vec![q(3, 1)], vec![q(5, 2)]]);
    }

    #[test]
    fn independence_examples() {
        let v = is_q_independent(&[len(1, 1, 2), len(1, 1, 3), len(1, 1, 5)]);
        assert_eq!(v, IndependenceVerdict::IndependentExact);

        let lengths = [len(1, 1, 2), len(2, 1, 2)];
        let v = is_q_independent(&lengths);
        let rel = vec![BigInt::from(2), BigInt::from(-1)];
        assert_eq!(v, IndependenceVerdict::Dependent { relation: rel.clone() });
        assert!(annihilates(&lengths, &rel));

        let v = is_q_independent(&[len(1, 1, 1), len(2, 1, 1)]);
        assert_eq!(v, IndependenceVerdict::Dependent { relation: rel });

        let v = is_q_independent(&[len(1, 3, 7), len(5, 1, 11), len(5, 2, 7)]);
        let rel = vec![BigInt::from(15), BigInt::from(0), BigInt::from(-2)];
        assert_eq!(v, IndependenceVerdict::Dependent { relation: rel });
    }

    #[test]
    fn decimals() {
        assert_eq!(len(1, 1, 2).to_decimal(5), "1.41421");
        assert_eq!(len(1, 10, 1).to_decimal(3), "0.100");
        assert_eq!(len(1, 1000, 1).to_decimal(2), "0.00");
        assert_eq!(parse_rational("1.25"), Some(q(5, 4)));
        assert_eq!(parse_rational("-0.3"), Some(q(-3, 10)));
        assert_eq!(parse_rational("2"), Some(q(2, 1)));
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("1.5e2"), Some(q(150, 1)));
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    proptest! {
        #[test]
        fn normalize_round_trip(n in 1i64..2_000_000, d in 1i64..2_000_000) {
            let value = q(n, d);
            let l = normalize_sqrt(&value).unwrap();
            prop_assert_eq!(l.square(), value);
            prop_assert!(l.r.is_positive());
        }

        #[test]
        fn basis_reconstructs(entries in proptest::collection::vec((1i64..500, 1i64..50), 1..20)) {
            let lengths: Vec<ExactLength> = entries
                .iter()
                .map(|&(n, d)| normalize_sqrt(&q(n, d)).unwrap())
                .collect();
            let basis = q_basis(&lengths);
            for (i, l) in lengths.iter().enumerate() {
                prop_assert_eq!(&basis.reconstruct(i), l);
            }
            if let IndependenceVerdict::Dependent { relation } = is_q_independent(&lengths) {
                prop_assert!(relation.iter().any(|c| !c.is_zero()));
                prop_assert!(annihilates(&lengths, &relation));
            } else {
                let distinct: std::collections::BTreeSet<_> = lengths.iter().map(|l| l.d).collect();
                prop_assert_eq!(distinct.len(), lengths.len());
            }
        }
    }
}
