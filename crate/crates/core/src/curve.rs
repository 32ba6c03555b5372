//! Point counting on genus-2 curves `y^2 = f(x)` over `F_p` and `F_{p^2}`,
//! and assembly of the Frobenius characteristic polynomial.
//!
//! Counts are for the smooth projective model: affine solutions plus one
//! point at infinity when `deg f = 5`, and two or zero when `deg f = 6`
//! depending on whether the leading coefficient is a square.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_consistent, Error, Result};
use crate::numth::{is_prime, legendre_table, IntPoly};

/// Largest `p^k` the enumeration oracle accepts.
pub const SLOW_COUNT_LIMIT: u64 = 10_000_000;

/// Integer model `y^2 = f(x)` of a genus-2 curve, `deg f` in `{5, 6}`.
#[derive(Clone, PartialEq, Eq)]
pub struct CurveModel {
    /// Coefficients of `f`, lowest degree first.
    f: Vec<i64>,
    label: Option<String>,
    disc: BigInt,
}

impl CurveModel {
    pub fn new(f: Vec<i64>, label: Option<String>) -> Result<Self> {
        let mut f = f;
        while f.last() == Some(&0) {
            f.pop();
        }
        let deg = f.len().saturating_sub(1);
        if deg != 5 && deg != 6 {
            return Err(Error::invalid(format!("genus-2 model needs deg f in {{5, 6}}, got {deg}")));
        }
        let poly = IntPoly::from_i64(&f);
        let disc = discriminant(&poly);
        if disc.is_zero() {
            return Err(Error::invalid("f has a repeated factor (discriminant 0)"));
        }
        Ok(CurveModel { f, label, disc })
    }

    /// The curve `y^2 = x^5 - 3x^4 + 2x^3 + 1` (LMFDB 3680.a.29440.1).
    pub fn lmfdb_3680_a_29440_1() -> Self {
        Self::new(vec![1, 0, 0, 2, -3, 1], Some("3680.a.29440.1".into())).expect("valid model")
    }

    /// Parses `c0,c1,...` (optionally bracketed), lowest degree first.
    pub fn parse(spec: &str) -> Result<Self> {
        let trimmed = spec.trim().trim_start_matches('[').trim_end_matches(']');
        let coeffs = trimmed
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|e| Error::invalid(format!("bad coefficient {c:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, None)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.f
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.f.last().expect("nonempty")
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn poly(&self) -> IntPoly {
        IntPoly::from_i64(&self.f)
    }

    fn coeffs_mod(&self, p: u64) -> Vec<u64> {
        self.f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect()
    }
}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.poly())?;
        if let Some(l) = &self.label {
            write!(f, " [{l}]")?;
        }
        Ok(())
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            rows[i][i + j] = f.coeff(m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            rows[n + i][i + j] = g.coeff(n - j);
        }
    }
    bareiss_det(rows)
}

/// `disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let Some(n) = f.degree() else {
        return BigInt::zero();
    };
    if n == 0 {
        return BigInt::one();
    }
    let deriv = IntPoly::new((1..=n).map(|i| f.coeff(i) * BigInt::from(i)).collect());
    let res = resultant(f, &deriv);
    let lc = f.leading().expect("nonzero");
    let q = res / lc;
    if (n * (n - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionType {
    Good,
    Bad,
}

/// `Bad` iff `p = 2`, `p | lc(f)` or `p | disc(f)`. This is a proxy for the
/// conductor: it may flag finitely many primes where the Jacobian is in
/// fact good, never the other way round.
pub fn reduction_type(curve: &CurveModel, p: u64) -> ReductionType {
    if p == 2 || curve.leading().rem_euclid(p as i64) == 0 || (curve.disc.clone() % BigInt::from(p)).is_zero() {
        ReductionType::Bad
    } else {
        ReductionType::Good
    }
}

fn require_good(curve: &CurveModel, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if reduction_type(curve, p) == ReductionType::Bad {
        return Err(Error::invalid(format!("{p} is a bad prime for {curve:?}")));
    }
    Ok(())
}

/// Points at infinity over `F_{p^k}`.
fn points_at_infinity(curve: &CurveModel, lc_is_square: bool) -> u64 {
    match (curve.degree(), lc_is_square) {
        (5, _) => 1,
        (_, true) => 2,
        (_, false) => 0,
    }
}

/// Smallest quadratic nonresidue mod an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    let chi = legendre_table(p);
    (2..p).find(|&n| chi[n as usize] == -1).expect("odd prime has a nonresidue")
}

/// `#C(F_{p^k})` for `k` in `{1, 2}`. `N_1` costs `O(p)`; `N_2` costs
/// `O(p^2)` additions using `chi_{p^2}(u) = chi_p(Norm u)`.
pub fn count_points(curve: &CurveModel, p: u64, k: u32) -> Result<u64> {
    require_good(curve, p)?;
    if p > u32::MAX as u64 {
        return Err(Error::capacity(format!("prime {p} too large for table-based counting")));
    }
    let chi = legendre_table(p);
    let f = curve.coeffs_mod(p);
    match k {
        1 => {
            let mut affine: i64 = p as i64;
            for x in 0..p {
                affine += chi[eval_mod(&f, x, p) as usize] as i64;
            }
            let lc_sq = chi[*f.last().unwrap() as usize] == 1;
            Ok(affine as u64 + points_at_infinity(curve, lc_sq))
        }
        2 => {
            let sum = character_sum_fp2(&f, p, &chi);
            let affine = (p * p) as i64 + sum;
            // every element of F_p is a square in F_{p^2}
            Ok(affine as u64 + points_at_infinity(curve, true))
        }
        _ => Err(Error::invalid(format!("fast counting supports k in {{1, 2}}, got {k}"))),
    }
}

fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)
}

/// `sum_{x in F_{p^2}} chi(f(x))` with `chi` the quadratic character of `F_{p^2}`.
fn character_sum_fp2(f: &[u64], p: u64, chi: &[i8]) -> i64 {
    let n = smallest_nonresidue(p);
    // x in F_p: chi(f(x)) = chi_p(f(x)^2), i.e. 1 unless f(x) = 0
    let mut total: i64 = (0..p).filter(|&x| eval_mod(f, x, p) != 0).count() as i64;
    // x = a + b*theta with b != 0; b and -b give conjugate x with equal norms.
    let bs: Vec<u64> = (1..=(p - 1) / 2).collect();
    let mut half: i64 = 0;
    for chunk in bs.chunks(LANES) {
        let tables: Vec<Vec<u64>> = chunk.iter().map(|&b| difference_table(&norm_polynomial(f, p, n, b), p)).collect();
        half += match tables[0].len() {
            11 => sweep_lanes::<11>(&tables, p as u32, chi),
            13 => sweep_lanes::<13>(&tables, p as u32, chi),
            _ => tables.iter().map(|t| sweep_single(t, p as u32, chi)).sum(),
        };
    }
    total += 2 * half;
    total
}

/// Coefficients of `a -> Norm(f(a + b*theta))`, `theta^2 = n`, over `F_p`.
fn norm_polynomial(f: &[u64], p: u64, n: u64, b: u64) -> Vec<u64> {
    let deg = f.len() - 1;
    // Horner in F_p[a][theta]: R = U + V theta, R <- R * (a + b theta) + f_k
    let mut u = vec![0u64; deg + 1];
    let mut v = vec![0u64; deg + 1];
    u[0] = f[deg];
    let bn = b * n % p;
    for k in (0..deg).rev() {
        let mut nu = vec![0u64; deg + 1];
        let mut nv = vec![0u64; deg + 1];
        for i in 0..deg {
            nu[i + 1] = u[i];
            nv[i + 1] = v[i];
        }
        for i in 0..=deg {
            nu[i] = (nu[i] + bn * v[i]) % p;
            nv[i] = (nv[i] + b * u[i]) % p;
        }
        nu[0] = (nu[0] + f[k]) % p;
        u = nu;
        v = nv;
    }
    let mut out = vec![0u64; 2 * deg + 1];
    for i in 0..=deg {
        for j in 0..=deg {
            let uu = u[i] * u[j] % p;
            let vv = v[i] * v[j] % p * n % p;
            out[i + j] = (out[i + j] + uu + p - vv) % p;
        }
    }
    out
}

/// Forward differences `Delta^i P(0)`, `i = 0..=deg P`.
fn difference_table(poly: &[u64], p: u64) -> Vec<u64> {
    let deg = poly.len() - 1;
    let mut d: Vec<u64> = (0..=deg as u64).map(|a| eval_mod(poly, a % p, p)).collect();
    for i in 1..=deg {
        for j in (i..=deg).rev() {
            d[j] = (d[j] + p - d[j - 1]) % p;
        }
    }
    d
}

const LANES: usize = 8;

/// `sum_a chi(P_j(a))` over up to `LANES` polynomials at once, each given by
/// its difference table. Unused lanes are padded with zeros and contribute 0.
fn sweep_lanes<const N: usize>(tables: &[Vec<u64>], p: u32, chi: &[i8]) -> i64 {
    let mut d = [[0u32; LANES]; N];
    for (lane, t) in tables.iter().enumerate() {
        for i in 0..N {
            d[i][lane] = t[i] as u32;
        }
    }
    let mut acc = [0i32; LANES];
    let mut total: i64 = 0;
    for step in 0..p {
        for lane in 0..LANES {
            acc[lane] += chi[d[0][lane] as usize] as i32;
        }
        for i in 0..N - 1 {
            for lane in 0..LANES {
                let t = d[i][lane] + d[i + 1][lane];
                d[i][lane] = t.min(t.wrapping_sub(p));
            }
        }
        // keep the i32 accumulators far from overflow
        if step & 0xFFFF == 0xFFFF {
            total += acc.iter().map(|&x| x as i64).sum::<i64>();
            acc = [0; LANES];
        }
    }
    total + acc.iter().map(|&x| x as i64).sum::<i64>()
}

fn sweep_single(table: &[u64], p: u32, chi: &[i8]) -> i64 {
    let mut d: Vec<u32> = table.iter().map(|&x| x as u32).collect();
    let n = d.len();
    let mut acc: i64 = 0;
    for _ in 0..p {
        acc += chi[d[0] as usize] as i64;
        for i in 0..n - 1 {
            let t = d[i] + d[i + 1];
            d[i] = t.min(t.wrapping_sub(p));
        }
    }
    acc
}

/// `F_{p^2} = F_p(theta)`, `theta^2 = n` the smallest nonresidue.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticExtension {
    pub p: u64,
    pub n: u64,
}

impl QuadraticExtension {
    pub fn new(p: u64) -> Self {
        QuadraticExtension { p, n: smallest_nonresidue(p) }
    }

    pub fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let p = self.p as u128;
        let (a, b) = (x.0 as u128, x.1 as u128);
        let (c, d) = (y.0 as u128, y.1 as u128);
        let re = (a * c + b * d % p * self.n as u128) % p;
        let im = (a * d + b * c) % p;
        (re as u64, im as u64)
    }

    pub fn pow(&self, x: (u64, u64), mut e: u128) -> (u64, u64) {
        let mut acc = (1, 0);
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn norm(&self, x: (u64, u64)) -> u64 {
        let p = self.p as u128;
        let (a, b) = (x.0 as u128, x.1 as u128);
        ((a * a + p * p - b * b % p * self.n as u128 % p) % p) as u64
    }

    /// Quadratic character via the norm map.
    pub fn chi_via_norm(&self, x: (u64, u64)) -> i8 {
        crate::numth::jacobi_unchecked(self.norm(x) as i128, self.p as u128)
    }

    /// Quadratic character via Euler's criterion `x^{(p^2-1)/2}`.
    pub fn chi_via_euler(&self, x: (u64, u64)) -> i8 {
        if x == (0, 0) {
            return 0;
        }
        let q = self.p as u128 * self.p as u128;
        match self.pow(x, (q - 1) / 2) {
            (1, 0) => 1,
            _ => -1,
        }
    }
}

/// `GF(p^k)` as `F_p[t]/(m(t))` with `m` the lexicographically first monic irreducible.
struct SmallField {
    p: u64,
    k: usize,
    /// low coefficients of the monic modulus
    modulus: Vec<u64>,
}

impl SmallField {
    fn new(p: u64, k: usize) -> Self {
        let count = p.pow(k as u32);
        for code in 0..count {
            let low = digits(code, p, k);
            let mut m = low.clone();
            m.push(1);
            if k == 1 || is_irreducible(&m, p) {
                return SmallField { p, k, modulus: low };
            }
        }
        unreachable!("an irreducible polynomial of every degree exists");
    }

    fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    fn encode(&self, v: &[u64]) -> usize {
        v.iter().rev().fold(0u64, |acc, &d| acc * self.p + d) as usize
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let k = self.k;
        let p = self.p;
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        // reduce with t^k = -(m_0 + ... + m_{k-1} t^{k-1})
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let sub = c * self.modulus[i] % p;
                prod[top - k + i] = (prod[top - k + i] + p - sub) % p;
            }
        }
        prod.truncate(k);
        prod
    }

    fn constant(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.k];
        v[0] = c % self.p;
        v
    }
}

fn digits(mut code: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Remainder of `a` modulo monic `m` over `F_p`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for i in 0..=dm {
                r[shift + i] = (r[shift + i] + p - c * m[i] % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut div = digits(code, p, d);
            div.push(1);
            if poly_rem(m, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Enumeration oracle: `#C(F_{p^k})` by evaluating `f` at every element of
/// `GF(p^k)` and consulting a table of squares. Test use only.
pub fn count_points_slow(curve: &CurveModel, p: u64, k: u32) -> Result<u64> {
    require_good(curve, p)?;
    let q = p.checked_pow(k).filter(|&q| q <= SLOW_COUNT_LIMIT).ok_or_else(|| {
        Error::capacity(format!("p^k = {p}^{k} exceeds the enumeration limit {SLOW_COUNT_LIMIT}"))
    })?;
    if k == 0 {
        return Err(Error::invalid("extension degree must be positive"));
    }
    let field = SmallField::new(p, k as usize);
    debug_assert_eq!(field.size(), q);
    let mut is_square = vec![false; q as usize];
    for code in 0..q {
        let x = digits(code, p, k as usize);
        is_square[field.encode(&field.mul(&x, &x))] = true;
    }
    let f = curve.coeffs_mod(p);
    let mut affine = 0u64;
    for code in 0..q {
        let x = digits(code, p, k as usize);
        let mut acc = field.constant(f[f.len() - 1]);
        for &c in f.iter().rev().skip(1) {
            acc = field.mul(&acc, &x);
            acc[0] = (acc[0] + c) % p;
        }
        let idx = field.encode(&acc);
        affine += match idx {
            0 => 1,
            i if is_square[i] => 2,
            _ => 0,
        };
    }
    let lc = field.encode(&field.constant(*f.last().unwrap()));
    Ok(affine + points_at_infinity(curve, is_square[lc]))
}

/// Point counts and Frobenius data at a good prime.
///
/// `t1` is the trace `sum(lambda) = p + 1 - N1`; the characteristic
/// polynomial is `x^4 - t1 x^3 + a2 x^2 - p t1 x + p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCoeffs {
    pub n1: u64,
    pub n2: u64,
    pub t1: i64,
    pub a2: i64,
}

/// `(t1, a2)` from `N1, N2`: `t1 = p + 1 - N1`, `a2 = p + (N2 + N1(N1 - 2p - 2))/2`.
pub fn coeffs_from_counts(p: u64, n1: u64, n2: u64) -> Result<(i64, i64)> {
    let (p, n1, n2) = (p as i128, n1 as i128, n2 as i128);
    let t1 = p + 1 - n1;
    let twice = n2 + n1 * (n1 - 2 * p - 2);
    ensure_consistent!(twice % 2 == 0, "N2 + N1(N1 - 2p - 2) = {twice} is odd");
    let a2 = p + twice / 2;
    let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::capacity(format!("{v} overflows i64")));
    Ok((narrow(t1)?, narrow(a2)?))
}

pub fn frobenius_coeffs(curve: &CurveModel, p: u64) -> Result<FrobeniusCoeffs> {
    let n1 = count_points(curve, p, 1)?;
    let n2 = count_points(curve, p, 2)?;
    let (t1, a2) = coeffs_from_counts(p, n1, n2)?;
    check_weil_bounds(t1, a2, p)?;
    Ok(FrobeniusCoeffs { n1, n2, t1, a2 })
}

/// `|t1| <= 4 sqrt(p)` and `|a2| <= 6p`, tested exactly as `t1^2 <= 16p`.
pub fn check_weil_bounds(t1: i64, a2: i64, p: u64) -> Result<()> {
    let p = p as i128;
    let t = t1 as i128;
    ensure_consistent!(t * t <= 16 * p, "|t1| = {} exceeds 4 sqrt({p})", t1.abs());
    ensure_consistent!((a2 as i128).abs() <= 6 * p, "|a2| = {} exceeds 6*{p}", a2.abs());
    Ok(())
}

/// `x^4 - t1 x^3 + a2 x^2 - p t1 x + p^2`.
pub fn weil_polynomial(t1: i64, a2: i64, p: u64) -> IntPoly {
    let p = p as i64;
    IntPoly::new(vec![
        BigInt::from(p) * BigInt::from(p),
        BigInt::from(-p) * BigInt::from(t1),
        BigInt::from(a2),
        BigInt::from(-t1),
        BigInt::one(),
    ])
}

/// Reconstructs `N_k = p^k + 1 - s_k` from the characteristic polynomial.
pub fn counts_from_weil(t1: i64, a2: i64, p: u64, upto: usize) -> Result<Vec<BigInt>> {
    let s = weil_polynomial(t1, a2, p).power_sums_upto(upto)?;
    let pb = BigInt::from(p);
    Ok(s.iter()
        .enumerate()
        .map(|(i, sk)| num_traits::pow(pb.clone(), i + 1) + 1 - sk.to_integer())
        .collect())
}

impl CurveModel {
    /// `|disc|` as an absolute value, for building exclusion sets.
    pub fn abs_discriminant(&self) -> BigInt {
        self.disc.abs()
    }

    pub fn discriminant_divisible_by(&self, q: u64) -> bool {
        self.disc.is_multiple_of(&BigInt::from(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x5p1() -> CurveModel {
        CurveModel::new(vec![1, 0, 0, 0, 0, 1], None).unwrap()
    }

    #[test]
    fn discriminant_of_x5_plus_1() {
        assert_eq!(*x5p1().discriminant(), BigInt::from(3125));
        // x^2 - 1: disc 4
        assert_eq!(discriminant(&IntPoly::from_i64(&[-1, 0, 1])), BigInt::from(4));
        // x^3 + x + 1: disc -4 - 27 = -31
        assert_eq!(discriminant(&IntPoly::from_i64(&[1, 1, 0, 1])), BigInt::from(-31));
    }

    #[test]
    fn rejects_bad_models() {
        assert!(CurveModel::new(vec![1, 0, 0, 1], None).is_err());
        // (x - 1)^2 (x^3 + 1) has a repeated root
        assert!(CurveModel::new(vec![1, -2, 1, 1, -2, 1], None).is_err());
        assert!(CurveModel::parse("1, 0, 0, 2, -3, 1").is_ok());
        assert!(CurveModel::parse("1, x").is_err());
    }

    #[test]
    fn reduction_types() {
        let c = x5p1();
        assert_eq!(reduction_type(&c, 3), ReductionType::Good);
        assert_eq!(reduction_type(&c, 2), ReductionType::Bad);
        assert_eq!(reduction_type(&c, 5), ReductionType::Bad);
        assert!(count_points(&c, 5, 1).is_err());
    }

    #[test]
    fn x5_plus_1_over_f3() {
        let c = x5p1();
        assert_eq!(count_points(&c, 3, 1).unwrap(), 4);
        assert_eq!(count_points_slow(&c, 3, 1).unwrap(), 4);
    }

    #[test]
    fn fast_matches_slow_small_primes() {
        let c = x5p1();
        for p in [3u64, 7, 11] {
            for k in [1u32, 2] {
                assert_eq!(count_points(&c, p, k).unwrap(), count_points_slow(&c, p, k).unwrap(), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn degree_six_infinity() {
        // lc = 3 is a nonresidue mod 7: no points at infinity over F_7, two over F_49.
        let c = (1..50)
            .map(|c0| CurveModel::new(vec![c0, 1, 0, 0, 0, 0, 3], None).unwrap())
            .find(|c| reduction_type(c, 7) == ReductionType::Good)
            .unwrap();
        let n1 = count_points(&c, 7, 1).unwrap();
        assert_eq!(n1, count_points_slow(&c, 7, 1).unwrap());
        assert_eq!(count_points(&c, 7, 2).unwrap(), count_points_slow(&c, 7, 2).unwrap());
        assert_eq!(legendre_table(7)[3], -1);
    }

    #[test]
    fn elliptic_trace_sanity() {
        // y^2 = x^3 + x + 1 over F_5 has 9 points, trace -3.
        let p = 5i64;
        let chi = legendre_table(5);
        let affine: i64 = (0..p).map(|x| 1 + chi[((x * x * x + x + 1) % p) as usize] as i64).sum();
        let n = affine + 1;
        assert_eq!(n, 9);
        assert_eq!(p + 1 - n, -3);
    }

    #[test]
    fn extension_character_identity() {
        let f = QuadraticExtension::new(13);
        for a in 0..13 {
            for b in 0..13 {
                assert_eq!(f.chi_via_norm((a, b)), f.chi_via_euler((a, b)));
            }
        }
    }

    #[test]
    fn coefficient_formula() {
        let c = CurveModel::lmfdb_3680_a_29440_1();
        let fc = frobenius_coeffs(&c, 7).unwrap();
        let back = counts_from_weil(fc.t1, fc.a2, 7, 2).unwrap();
        assert_eq!(back[0], BigInt::from(fc.n1));
        assert_eq!(back[1], BigInt::from(fc.n2));
    }

    #[test]
    fn weil_bound_violation_detected() {
        assert!(check_weil_bounds(11, 0, 7).is_err());
        assert!(check_weil_bounds(10, 0, 7).is_ok());
        assert!(check_weil_bounds(0, 43, 7).is_err());
    }
}
