//! Symbolic `gamma_p` as a polynomial in the Weil coefficients `a_1..a_g`
//! and `p`, and the triangle-inequality bound `psi_g`.
//!
//! Convention: the Weil polynomial is
//! `x^{2g} + a_1 x^{2g-1} + ... + a_g x^g + p a_{g-1} x^{g-1} + ... + p^g`,
//! so `a_1 = -t1` in the trace convention used by the census.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer polynomial in `g + 1` variables `a_1..a_g, p`. Exponent
/// vectors have length `g + 1`; the last slot is the exponent of `p`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut m = Self::zero(nvars);
        m.add_term(vec![0; nvars], c.into());
        m
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut m = Self::zero(nvars);
        m.add_term(e, BigInt::one());
        m
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficientwise exact division; fails if some coefficient is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Result<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(Error::consistency(format!("coefficient {c} not divisible by {k}")));
            }
            out.add_term(e.clone(), q);
        }
        Ok(out)
    }

    pub fn eval(&self, vals: &[BigInt]) -> BigInt {
        assert_eq!(vals.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(vals).fold(c.clone(), |acc, (&k, v)| acc * num_traits::pow(v.clone(), k as usize))
            })
            .sum()
    }

    /// Highest exponent of variable `i` over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Weighted degrees present, with weight `w[i]` for variable `i`.
    pub fn weights(&self, w: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> =
            self.terms.keys().map(|e| e.iter().zip(w).map(|(a, b)| a * b).sum()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let g = self.nvars - 1;
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            let a = c.abs();
            if !a.is_one() || e.iter().all(|&k| k == 0) {
                factors.push(a.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                let name = if i == g { "p".to_string() } else { format!("a{}", i + 1) };
                match k {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `gamma_p` for dimension `g`: the coefficients `c_0 = 1, c_1, ..., c_g` of
/// the characteristic polynomial of `(pi + pbar)^2`, and the expanded
/// `(-1)^g sum c_j (4p)^{g-j}`.
#[derive(Clone, Debug)]
pub struct GammaPoly {
    pub g: usize,
    pub c: Vec<MPoly>,
    pub expanded: MPoly,
}

impl GammaPoly {
    /// Evaluates at `a_1..a_g` (paper convention) and `p`.
    pub fn eval(&self, a: &[BigInt], p: &BigInt) -> BigInt {
        let mut vals = a.to_vec();
        vals.push(p.clone());
        self.expanded.eval(&vals)
    }

    /// Lemma-level shape check: every `a_i` appears at most squared.
    pub fn max_degree_in_a(&self) -> u32 {
        (0..self.g).map(|i| self.expanded.degree_in(i)).max().unwrap_or(0)
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Builds `gamma_p` symbolically from power sums of Frobenius.
pub fn gamma_symbolic(g: usize) -> Result<GammaPoly> {
    if g == 0 || g > 8 {
        return Err(Error::invalid(format!("dimension must be in 1..=8, got {g}")));
    }
    let nv = g + 1;
    let p = MPoly::var(nv, g);
    // e_k of the 2g roots: coefficient of x^{2g-k} times (-1)^k
    let coeff = |k: usize| -> MPoly {
        if k == 0 {
            MPoly::constant(nv, 1)
        } else if k <= g {
            MPoly::var(nv, k - 1)
        } else if k < 2 * g {
            p.pow((k - g) as u32).mul(&MPoly::var(nv, 2 * g - k - 1))
        } else {
            p.pow(g as u32)
        }
    };
    let e: Vec<MPoly> = (1..=2 * g)
        .map(|k| if k % 2 == 0 { coeff(k) } else { coeff(k).scale(&BigInt::from(-1)) })
        .collect();
    // power sums S_1..S_{2g} of the roots, division-free Newton
    let mut s: Vec<MPoly> = Vec::with_capacity(2 * g);
    for k in 1..=2 * g {
        let mut acc = MPoly::zero(nv);
        for i in 1..k {
            let term = e[i - 1].mul(&s[k - i - 1]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        let last = e[k - 1].scale(&BigInt::from(k));
        acc = if k % 2 == 1 { acc.add(&last) } else { acc.sub(&last) };
        s.push(acc);
    }
    // T_m = sum over the g values beta_i^{2m}
    let t: Vec<MPoly> = (1..=g)
        .map(|m| {
            let mut acc = p.pow(m as u32).scale(&(binomial(2 * m as u64, m as u64) * BigInt::from(g)));
            for k in 0..m {
                let term = p.pow(k as u32).mul(&s[2 * m - 2 * k - 1]).scale(&binomial(2 * m as u64, k as u64));
                acc = acc.add(&term);
            }
            acc
        })
        .collect();
    // elementary symmetric E_k of beta_i^2
    let mut big_e: Vec<MPoly> = vec![MPoly::constant(nv, 1)];
    for k in 1..=g {
        let mut acc = MPoly::zero(nv);
        for i in 1..=k {
            let term = big_e[k - i].mul(&t[i - 1]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        big_e.push(acc.div_exact(&BigInt::from(k))?);
    }
    let c: Vec<MPoly> = big_e
        .iter()
        .enumerate()
        .map(|(k, ek)| if k % 2 == 0 { ek.clone() } else { ek.scale(&BigInt::from(-1)) })
        .collect();
    let four_p = p.scale(&BigInt::from(4));
    let mut sum = MPoly::zero(nv);
    for (j, cj) in c.iter().enumerate() {
        sum = sum.add(&cj.mul(&four_p.pow((g - j) as u32)));
    }
    let expanded = if g % 2 == 1 { sum.scale(&BigInt::from(-1)) } else { sum };
    Ok(GammaPoly { g, c, expanded })
}

/// `gamma_p` for `g = 2` as printed: `a2^2 - 4p a1^2 + 4p a2 + 4p^2`.
pub fn printed_gamma_g2() -> MPoly {
    let (a1, a2, p) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2));
    let k = |n: i64| BigInt::from(n);
    a2.pow(2)
        .sub(&p.mul(&a1.pow(2)).scale(&k(4)))
        .add(&p.mul(&a2).scale(&k(4)))
        .add(&p.pow(2).scale(&k(4)))
}

/// The printed `g = 3` expression, as its nested coefficients
/// `[1, c1, c2, c3]` (before the overall sign and the powers of `4p`).
pub fn printed_gamma_g3_coeffs() -> Vec<MPoly> {
    let (a1, a2, a3, p) = (MPoly::var(4, 0), MPoly::var(4, 1), MPoly::var(4, 2), MPoly::var(4, 3));
    let k = |n: i64| BigInt::from(n);
    let c1 = a2.scale(&k(2)).sub(&p.scale(&k(6))).sub(&a1.pow(2));
    let c2 = a2
        .pow(2)
        .sub(&a2.mul(&p).scale(&k(6)))
        .add(&p.pow(2).scale(&k(9)))
        .add(&a1.mul(&a3).scale(&k(2)))
        .sub(&p.mul(&a1.pow(2)).scale(&k(4)));
    let c3 = a3
        .pow(2)
        .sub(&p.mul(&a1).mul(&a3).scale(&k(4)))
        .add(&p.pow(2).mul(&a1.pow(2)).scale(&k(4)));
    vec![MPoly::constant(4, 1), c1, c2, c3]
}

/// The printed `g = 3` expression, expanded.
pub fn printed_gamma_g3() -> MPoly {
    let c = printed_gamma_g3_coeffs();
    let four_p = MPoly::var(4, 3).scale(&BigInt::from(4));
    let mut sum = MPoly::zero(4);
    for (j, cj) in c.iter().enumerate() {
        sum = sum.add(&cj.mul(&four_p.pow((3 - j) as u32)));
    }
    sum.scale(&BigInt::from(-1))
}

/// Which algebraic form the triangle inequality is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiForm {
    /// Every monomial of the expanded `gamma_p` bounded separately.
    Expanded,
    /// `sum_j (4p)^{g-j} |c_j|`, each `c_j` expanded with like terms combined.
    Nested,
}

/// The form used for the published constants: expanded at `g <= 2`, nested beyond.
pub fn default_psi_form(g: usize) -> PsiForm {
    if g <= 2 {
        PsiForm::Expanded
    } else {
        PsiForm::Nested
    }
}

/// `K_g` with `psi_g(sqrt p) = K_g p^g`, from `|a_i| <= C(2g, i) p^{i/2}`.
///
/// `gamma_p` is weighted-homogeneous of degree `2g` when `a_i` has weight `i`
/// and `p` weight 2, so every monomial bound is a constant times `p^g`.
pub fn psi_constant(g: usize, form: PsiForm) -> Result<BigInt> {
    let gp = gamma_symbolic(g)?;
    let bounds: Vec<BigInt> = (1..=g).map(|i| binomial(2 * g as u64, i as u64)).collect();
    let monomial_bound = |poly: &MPoly| -> BigInt {
        poly.terms()
            .map(|(e, c)| {
                e[..g].iter().zip(&bounds).fold(c.abs(), |acc, (&k, b)| acc * num_traits::pow(b.clone(), k as usize))
            })
            .sum()
    };
    Ok(match form {
        PsiForm::Expanded => monomial_bound(&gp.expanded),
        PsiForm::Nested => gp
            .c
            .iter()
            .enumerate()
            .map(|(j, cj)| num_traits::pow(BigInt::from(4), g - j) * monomial_bound(cj))
            .sum(),
    })
}

/// `psi_g(sqrt p)` in the default form.
pub fn psi_bound(g: usize, p: &BigInt) -> Result<BigInt> {
    Ok(psi_constant(g, default_psi_form(g))? * num_traits::pow(p.clone(), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn g2_matches_printed() {
        let gp = gamma_symbolic(2).unwrap();
        assert_eq!(gp.expanded, printed_gamma_g2());
        // beta in {4, -3}: (16 - 28)(9 - 28) = 228
        assert_eq!(gp.eval(&[b(-1), b(2)], &b(7)), b(228));
    }

    #[test]
    fn g1_is_trace_discriminant() {
        // beta = -a1, gamma = -(4p - a1^2) = a1^2 - 4p
        let gp = gamma_symbolic(1).unwrap();
        assert_eq!(gp.eval(&[b(3)], &b(5)), b(9 - 20));
    }

    #[test]
    fn quadratic_in_each_coefficient() {
        for g in 1..=4 {
            let gp = gamma_symbolic(g).unwrap();
            assert!(gp.max_degree_in_a() <= 2, "g={g}");
            assert_eq!(gp.expanded.weights(&weight_vector(g)), vec![2 * g as u32]);
        }
    }

    fn weight_vector(g: usize) -> Vec<u32> {
        let mut w: Vec<u32> = (1..=g as u32).collect();
        w.push(2);
        w
    }

    #[test]
    fn g3_against_explicit_roots() {
        // beta = {1, 2, -3}, p = 7: pi is a root of x^2 - beta x + p.
        // prod (beta^2 - 4p) = (1-28)(4-28)(9-28) = -12312
        let betas = [1i64, 2, -3];
        let p = 7i64;
        let mut poly = vec![b(1)];
        for &be in &betas {
            let f = [b(p), b(-be), b(1)];
            let mut next = vec![b(0); poly.len() + 2];
            for (i, x) in poly.iter().enumerate() {
                for (j, y) in f.iter().enumerate() {
                    next[i + j] += x * y;
                }
            }
            poly = next;
        }
        // poly = x^6 + a1 x^5 + a2 x^4 + a3 x^3 + ...
        let a = [poly[5].clone(), poly[4].clone(), poly[3].clone()];
        let expected: i64 = betas.iter().map(|&x| x * x - 4 * p).product();
        let gp = gamma_symbolic(3).unwrap();
        assert_eq!(gp.eval(&a, &b(p)), b(expected));
        let mut vals = a.to_vec();
        vals.push(b(p));
        assert_ne!(printed_gamma_g3().eval(&vals), b(expected));
    }

    #[test]
    fn psi_constants() {
        assert_eq!(psi_constant(2, PsiForm::Expanded).unwrap(), b(128));
        assert_eq!(psi_constant(3, PsiForm::Nested).unwrap(), b(5072));
        assert_eq!(psi_bound(2, &b(7)).unwrap(), b(128 * 49));
    }
}
