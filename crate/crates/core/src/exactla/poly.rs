use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{Field, Scalar};
use super::LinAlgError;

/// Univariate polynomial, coefficients stored lowest degree first and
/// trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

/// Roots found in the ground field, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    /// `(root, multiplicity)` in increasing root order.
    pub roots: Vec<(Scalar, usize)>,
    /// The polynomial is a product of linear factors over the field.
    pub splits: bool,
}

impl RootSet {
    pub fn is_squarefree_split(&self) -> bool {
        self.splits && self.roots.iter().all(|(_, m)| *m == 1)
    }

    pub fn distinct(&self) -> Vec<Scalar> {
        self.roots.iter().map(|(r, _)| r.clone()).collect()
    }
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// `x − r`.
    pub fn linear(root: &Scalar) -> Poly {
        let f = root.field();
        Poly::new(f, vec![-root, f.one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(Scalar::is_one)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(self.field, Vec::new());
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                let shift = top - dd;
                quot[shift] = c.clone();
                for (k, d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] = &rem[shift + k] - &(&c * d);
                }
            }
            rem.pop();
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    /// Roots lying in the ground field, with multiplicity.
    ///
    /// Over GF(p) every element is tried. Over ℚ the candidates are the
    /// rational-root-theorem fractions of the integer-normalized polynomial;
    /// whatever is left after dividing out linear factors has no rational
    /// root, so the polynomial splits exactly when nothing is left.
    pub fn roots_over_field(&self) -> Result<RootSet, LinAlgError> {
        if self.is_zero() {
            return Err(LinAlgError::ZeroPolynomial);
        }
        let mut rest = self.clone();
        let mut roots: Vec<(Scalar, usize)> = Vec::new();
        let candidates = match self.field {
            Field::Prime(_) => self.field.elements().unwrap(),
            Field::Rational => rational_root_candidates(self),
        };
        for r in candidates {
            let lin = Poly::linear(&r);
            let mut mult = 0;
            while rest.degree().unwrap_or(0) >= 1 && rest.eval(&r).is_zero() {
                rest = rest.div_rem(&lin).0;
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
        roots.sort();
        let splits = rest.degree() == Some(0);
        Ok(RootSet { roots, splits })
    }
}

fn rational_root_candidates(p: &Poly) -> Vec<Scalar> {
    // Clear denominators, then strip the factor x^k so the constant term is nonzero.
    let mut lcm = BigInt::one();
    for c in &p.coeffs {
        lcm = lcm.lcm(c.as_rational().unwrap().denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c.as_rational().unwrap() * num_rational::BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut out = Vec::new();
    let first = ints.iter().position(|c| !c.is_zero()).unwrap();
    if first > 0 {
        out.push(Field::Rational.zero());
    }
    let constant = ints[first].abs();
    let lead = ints.last().unwrap().abs();
    let num_divs = divisors(&constant);
    let den_divs = divisors(&lead);
    for a in &num_divs {
        for b in &den_divs {
            for sign in [1i64, -1] {
                let s = Field::Rational
                    .from_ratio(&(a * BigInt::from(sign)), b)
                    .unwrap();
                out.push(s);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let q = n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
