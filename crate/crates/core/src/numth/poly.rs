//! Dense integer polynomials and the power-sum / elementary-symmetric
//! conversions (Newton's identities).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients stored lowest degree first and trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Monic polynomial from its roots' elementary symmetric functions:
    /// `x^n - e1 x^{n-1} + e2 x^{n-2} - ...`.
    pub fn from_elementary(e: &[BigInt]) -> Self {
        let n = e.len();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        for (i, ei) in e.iter().enumerate() {
            let k = i + 1;
            coeffs[n - k] = if k % 2 == 0 { ei.clone() } else { -ei };
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Elementary symmetric functions `e1..en` of the roots (monic only).
    pub fn elementary(&self) -> Result<Vec<BigInt>> {
        let n = self.monic_degree()?;
        Ok((1..=n)
            .map(|k| {
                let c = &self.coeffs[n - k];
                if k % 2 == 0 {
                    c.clone()
                } else {
                    -c
                }
            })
            .collect())
    }

    fn monic_degree(&self) -> Result<usize> {
        if !self.is_monic() {
            return Err(Error::invalid("power sums need a monic polynomial"));
        }
        Ok(self.coeffs.len() - 1)
    }

    /// Power sums `s_1..s_deg` of the roots.
    pub fn power_sums(&self) -> Result<Vec<BigRational>> {
        let n = self.monic_degree()?;
        self.power_sums_upto(n)
    }

    /// Power sums `s_1..s_count`, any `count` (Newton's identities with
    /// `e_k = 0` beyond the degree).
    pub fn power_sums_upto(&self, count: usize) -> Result<Vec<BigRational>> {
        let e = self.elementary()?;
        let s = power_sums_from_elementary(&e, count);
        Ok(s.into_iter().map(BigRational::from_integer).collect())
    }
}

/// `s_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i s_{k-i} + (-1)^{k-1} k e_k`.
pub fn power_sums_from_elementary(e: &[BigInt], count: usize) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut acc = BigInt::zero();
        for i in 1..k {
            if let Some(ei) = e.get(i - 1) {
                let term = ei * &s[k - i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        if let Some(ek) = e.get(k - 1) {
            let term = ek * BigInt::from(k);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s
}

/// Inverse of [`IntPoly::power_sums`]: the monic polynomial of degree
/// `s.len()` whose roots have the given power sums. Intermediate values are
/// exact rationals; the result must be integral.
pub fn newton_from_power_sums(s: &[BigRational]) -> Result<IntPoly> {
    let e = elementary_from_power_sums(s);
    let mut ints = Vec::with_capacity(e.len());
    for (k, ek) in e.into_iter().enumerate() {
        if !ek.is_integer() {
            return Err(Error::invalid(format!("e_{} = {ek} is not an integer", k + 1)));
        }
        ints.push(ek.to_integer());
    }
    Ok(IntPoly::from_elementary(&ints))
}

/// `k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} s_i`.
pub fn elementary_from_power_sums(s: &[BigRational]) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = Vec::with_capacity(s.len());
    for k in 1..=s.len() {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let prev = if k == i { BigRational::one() } else { e[k - i - 1].clone() };
            let term = prev * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    e
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
