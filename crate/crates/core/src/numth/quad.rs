//! Exact arithmetic in real quadratic fields `Q(sqrt d)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::int::{is_perfect_square_big, squarefree_part};
use crate::error::{Error, Result};

/// The element `a + b*sqrt(d)` of `Q(sqrt d)`, `d > 1` squarefree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: i64,
    a: BigRational,
    b: BigRational,
}

impl QuadElem {
    pub fn new(d: i64, a: BigRational, b: BigRational) -> Result<Self> {
        if d <= 1 {
            return Err(Error::invalid(format!("field label must exceed 1, got {d}")));
        }
        let (s, _) = squarefree_part(d as i128)?;
        if s != d as i128 {
            return Err(Error::invalid(format!("field label {d} is not squarefree")));
        }
        Ok(QuadElem { d, a, b })
    }

    /// Builds from integer coordinates; panics on a bad label (use in trusted code only).
    pub fn from_ints(d: i64, a: i64, b: i64) -> Self {
        Self::new(d, rat(a), rat(b)).expect("valid field label")
    }

    pub fn rational(d: i64, a: BigRational) -> Result<Self> {
        Self::new(d, a, BigRational::zero())
    }

    pub fn one(d: i64) -> Self {
        QuadElem { d, a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The nontrivial automorphism `b -> -b`.
    pub fn conjugate(&self) -> Self {
        QuadElem { d: self.d, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d)
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadElem { d: self.d, a: &self.a * k, b: &self.b * k }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conjugate().scale(&n.recip()))
    }

    /// Sign of the real embedding `sqrt d -> +sqrt d`, computed exactly.
    pub fn sign_at_plus(&self) -> Ordering {
        sign_of(&self.a, &self.b, self.d)
    }

    /// Sign of the real embedding `sqrt d -> -sqrt d`.
    pub fn sign_at_minus(&self) -> Ordering {
        sign_of(&self.a, &(-&self.b), self.d)
    }

    /// Negative under both real embeddings.
    pub fn is_totally_negative(&self) -> bool {
        self.sign_at_plus() == Ordering::Less && self.sign_at_minus() == Ordering::Less
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixing elements of Q(sqrt {}) and Q(sqrt {})", self.d, other.d);
    }

    /// Lossy value under the `+sqrt d` embedding; display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

fn sign_of(a: &BigRational, b: &BigRational, d: i64) -> Ordering {
    // sign(a + b sqrt d): compare a^2 with b^2 d when the signs of a and b differ.
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    match (sa, sb) {
        (_, Ordering::Equal) => sa,
        (Ordering::Equal, _) => sb,
        (x, y) if x == y => x,
        _ => {
            let lhs = a * a;
            let rhs = b * b * rat(d);
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact square root of a rational, if it is a rational square.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = is_perfect_square_big(x.numer())?;
    let d = is_perfect_square_big(x.denom())?;
    Some(BigRational::new(n, d))
}

/// A square root of `x` inside `Q(sqrt d)`, or `None` when `x` is not a square there.
pub fn quad_is_square(x: &QuadElem) -> Option<QuadElem> {
    let d = x.d;
    if x.b.is_zero() {
        if let Some(r) = rational_sqrt(&x.a) {
            return Some(QuadElem { d, a: r, b: BigRational::zero() });
        }
        // a = d c^2 gives (c sqrt d)^2.
        let c = rational_sqrt(&(&x.a / rat(d)))?;
        return Some(QuadElem { d, a: BigRational::zero(), b: c });
    }
    // (u + v sqrt d)^2 = x forces u^2 - d v^2 = +-n with n^2 = N(x), and u^2 + d v^2 = a.
    let n = rational_sqrt(&x.norm())?;
    let two = rat(2);
    for cand in [(&x.a + &n) / &two, (&x.a - &n) / &two] {
        if cand.is_zero() {
            continue;
        }
        if let Some(u) = rational_sqrt(&cand) {
            let v = &x.b / (&u * &two);
            let y = QuadElem { d, a: u, b: v };
            if &(&y * &y) == x {
                return Some(y);
            }
        }
    }
    None
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.check_same_field(rhs);
        QuadElem { d: self.d, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self.check_same_field(rhs);
        QuadElem { d: self.d, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.check_same_field(rhs);
        QuadElem {
            d: self.d,
            a: &self.a * &rhs.a + &self.b * &rhs.b * rat(self.d),
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { d: self.d, a: -&self.a, b: -&self.b }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.a, self.b, self.d)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
