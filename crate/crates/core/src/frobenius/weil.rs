//! Weil polynomials of arbitrary dimension: the real Weil polynomial of
//! `beta = pi + p/pi`, the characteristic polynomial of `beta^2`, and the
//! numeric `gamma_p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{ensure_consistent, Error, Result};
use crate::numth::{newton_from_power_sums, IntPoly};

/// `x^{2g} + a_1 x^{2g-1} + ... + a_g x^g + p a_{g-1} x^{g-1} + ... + p^g`.
pub fn weil_shape_poly(a: &[BigInt], p: u64) -> IntPoly {
    let g = a.len();
    let p = BigInt::from(p);
    let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
    coeffs[2 * g] = BigInt::one();
    for (i, ai) in a.iter().enumerate() {
        let k = i + 1;
        coeffs[2 * g - k] = ai.clone();
        if k < g {
            coeffs[k] = num_traits::pow(p.clone(), g - k) * ai;
        }
    }
    coeffs[0] = num_traits::pow(p, g);
    IntPoly::new(coeffs)
}

/// Half the degree, after checking the functional-equation symmetry
/// `coeff(x^i) = p^{g-i} coeff(x^{2g-i})`.
pub fn weil_dimension(poly: &IntPoly, p: u64) -> Result<usize> {
    let deg = poly.degree().unwrap_or(0);
    if !poly.is_monic() || deg == 0 || deg % 2 == 1 {
        return Err(Error::invalid(format!("{poly} is not a monic polynomial of even degree")));
    }
    let g = deg / 2;
    let pb = BigInt::from(p);
    for i in 0..g {
        if poly.coeff(i) != num_traits::pow(pb.clone(), g - i) * poly.coeff(2 * g - i) {
            return Err(Error::invalid(format!("{poly} lacks the Weil symmetry at x^{i}")));
        }
    }
    Ok(g)
}

/// Arithmetic in `Q[x]/(P)` for monic `P`.
struct Quotient<'a> {
    modulus: &'a IntPoly,
    n: usize,
}

impl Quotient<'_> {
    fn mul(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let n = self.n;
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                prod[i + j] += xi * yj;
            }
        }
        for top in (n..prod.len()).rev() {
            let c = std::mem::take(&mut prod[top]);
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                let m = BigRational::from_integer(self.modulus.coeff(i));
                prod[top - n + i] -= &c * m;
            }
        }
        prod.truncate(n);
        prod
    }
}

/// The monic degree-`g` polynomial `h` with `h(pi + p/pi) = 0`, found as the
/// annihilator of `beta = x + p x^{-1}` in `Q[x]/(P)` by exact elimination.
pub fn real_weil_poly(charpoly: &IntPoly, p: u64) -> Result<IntPoly> {
    let g = weil_dimension(charpoly, p)?;
    let n = 2 * g;
    let q = Quotient { modulus: charpoly, n };
    let pg = BigRational::from_integer(num_traits::pow(BigInt::from(p), g));
    // P = x Q(x) + p^g, so x^{-1} = -Q(x) / p^g
    let mut beta: Vec<BigRational> =
        (1..=n).map(|i| -BigRational::from_integer(charpoly.coeff(i)) / &pg).collect();
    for c in beta.iter_mut() {
        *c *= BigRational::from_integer(BigInt::from(p));
    }
    beta[1] += BigRational::one();

    let mut powers = vec![unit(n)];
    for k in 1..=g {
        let next = q.mul(&powers[k - 1], &beta);
        powers.push(next);
    }
    // Solve sum_{i<g} h_i beta^i = -beta^g over the n coordinates.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..g).map(|i| powers[i][r].clone()).collect();
            row.push(-powers[g][r].clone());
            row
        })
        .collect();
    let h = solve_overdetermined(&mut rows, g)?;
    let mut coeffs = Vec::with_capacity(g + 1);
    for c in h {
        ensure_consistent!(c.is_integer(), "real Weil polynomial has non-integral coefficient {c}");
        coeffs.push(c.to_integer());
    }
    coeffs.push(BigInt::one());
    Ok(IntPoly::new(coeffs))
}

fn unit(n: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::one();
    v
}

/// Gauss-Jordan on an `m x (k+1)` augmented system; requires rank `k` and consistency.
fn solve_overdetermined(rows: &mut [Vec<BigRational>], k: usize) -> Result<Vec<BigRational>> {
    let m = rows.len();
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(r) = (pivot_row..m).find(|&r| !rows[r][col].is_zero()) else {
            return Err(Error::invalid(
                "beta generates a proper subalgebra; its degree-g annihilator is not unique",
            ));
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for c in col..=k {
            rows[pivot_row][c] *= &inv;
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=k {
                    let sub = &f * &rows[pivot_row][c];
                    rows[r][c] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    for row in rows.iter().skip(k) {
        ensure_consistent!(row[k].is_zero(), "annihilator system is inconsistent");
    }
    Ok((0..k).map(|i| rows[i][k].clone()).collect())
}

/// Characteristic polynomial of the squares of the roots of monic `h`,
/// via `s_k(roots^2) = s_{2k}(roots)`.
pub fn charpoly_of_square(h: &IntPoly) -> Result<IntPoly> {
    let g = h.degree().unwrap_or(0);
    let s = h.power_sums_upto(2 * g)?;
    let doubled: Vec<BigRational> = (1..=g).map(|k| s[2 * k - 1].clone()).collect();
    newton_from_power_sums(&doubled)
}

/// `gamma_p = (-1)^g charpoly_{beta^2}(4p)` from a Weil polynomial.
pub fn gamma_from_charpoly(charpoly: &IntPoly, p: u64) -> Result<BigInt> {
    let g = weil_dimension(charpoly, p)?;
    let sq = charpoly_of_square(&real_weil_poly(charpoly, p)?)?;
    let v = sq.eval(&BigInt::from(4 * p));
    Ok(if g % 2 == 1 { -v } else { v })
}

/// `gamma_p` from paper-convention coefficients `a_1..a_g`.
pub fn gamma(a: &[i64], p: u64) -> Result<BigInt> {
    let a: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
    gamma_from_charpoly(&weil_shape_poly(&a, p), p)
}
