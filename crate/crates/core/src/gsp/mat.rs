//! Small matrices over `Z/m` (`m <= 16`, size `2g <= 4`) packed into a `u64`.

use crate::error::{Error, Result};

/// A `2g x 2g` matrix over `Z/m`, 4 bits per entry, row-major.
pub type PackedMat = u64;

pub const MAX_N: usize = 4;
pub const MAX_MODULUS: u64 = 16;

pub type Mat = [[u8; MAX_N]; MAX_N];

/// Arithmetic context: dimension `n = 2g` and modulus `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatSpace {
    pub g: usize,
    pub n: usize,
    pub m: u8,
}

impl MatSpace {
    pub fn new(g: usize, m: u64) -> Result<Self> {
        if !(1..=2).contains(&g) {
            return Err(Error::capacity(format!("packed matrices support g in {{1, 2}}, got {g}")));
        }
        if !(2..=MAX_MODULUS).contains(&m) {
            return Err(Error::capacity(format!("packed matrices need 2 <= modulus <= {MAX_MODULUS}, got {m}")));
        }
        Ok(MatSpace { g, n: 2 * g, m: m as u8 })
    }

    pub fn pack(&self, a: &Mat) -> PackedMat {
        let mut w = 0u64;
        for i in 0..self.n {
            for j in 0..self.n {
                w |= ((a[i][j] % self.m) as u64) << (4 * (i * self.n + j));
            }
        }
        w
    }

    pub fn unpack(&self, w: PackedMat) -> Mat {
        let mut a = [[0u8; MAX_N]; MAX_N];
        for i in 0..self.n {
            for j in 0..self.n {
                a[i][j] = ((w >> (4 * (i * self.n + j))) & 0xF) as u8;
            }
        }
        a
    }

    pub fn identity(&self) -> Mat {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u8) -> Mat {
        let mut a = [[0u8; MAX_N]; MAX_N];
        for (i, row) in a.iter_mut().enumerate().take(self.n) {
            row[i] = c % self.m;
        }
        a
    }

    /// `J = [[0, I], [-I, 0]]`.
    pub fn j(&self) -> Mat {
        let mut a = [[0u8; MAX_N]; MAX_N];
        for i in 0..self.g {
            a[i][i + self.g] = 1;
            a[i + self.g][i] = self.m - 1;
        }
        a
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let m = self.m as u32;
        let mut c = [[0u8; MAX_N]; MAX_N];
        for i in 0..self.n {
            for j in 0..self.n {
                let mut s = 0u32;
                for k in 0..self.n {
                    s += a[i][k] as u32 * b[k][j] as u32;
                }
                c[i][j] = (s % m) as u8;
            }
        }
        c
    }

    pub fn transpose(&self, a: &Mat) -> Mat {
        let mut t = [[0u8; MAX_N]; MAX_N];
        for i in 0..self.n {
            for j in 0..self.n {
                t[j][i] = a[i][j];
            }
        }
        t
    }

    pub fn scale(&self, a: &Mat, c: u8) -> Mat {
        let mut out = *a;
        for row in out.iter_mut().take(self.n) {
            for x in row.iter_mut().take(self.n) {
                *x = ((*x as u32 * c as u32) % self.m as u32) as u8;
            }
        }
        out
    }

    /// Symplectic pairing of rows `u`, `v`: `u J v^T`.
    fn omega(&self, u: &[u8; MAX_N], v: &[u8; MAX_N]) -> u8 {
        let m = self.m as u32;
        let mut s = 0u32;
        for k in 0..self.g {
            s += u[k] as u32 * v[k + self.g] as u32;
            s += (m - u[k + self.g] as u32 % m) % m * v[k] as u32;
        }
        (s % m) as u8
    }

    /// The unit `mu` with `M J M^T = mu J`, or `None` when `M` is not a symplectic similitude.
    pub fn multiplicator(&self, a: &Mat) -> Option<u8> {
        let mu = self.omega(&a[0], &a[self.g]);
        if gcd(mu as u64, self.m as u64) != 1 {
            return None;
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let want = if j == i + self.g && i < self.g { mu } else { 0 };
                if self.omega(&a[i], &a[j]) != want {
                    return None;
                }
            }
        }
        Some(mu)
    }

    pub fn inv_unit(&self, u: u8) -> u8 {
        (1..self.m).find(|&v| (u as u32 * v as u32) % self.m as u32 == 1).expect("unit")
    }

    /// `M^{-1} = mu^{-1} J M^T J^{-1}` for a similitude with multiplicator `mu`.
    pub fn inverse(&self, a: &Mat, mu: u8) -> Mat {
        let j = self.j();
        let jinv = self.scale(&j, self.m - 1);
        let t = self.mul(&self.mul(&j, &self.transpose(a)), &jinv);
        self.scale(&t, self.inv_unit(mu))
    }

    fn det_rows_cols(&self, a: &Mat, rows: &[usize], cols: &[usize]) -> i64 {
        // Laplace expansion along the first row
        if rows.is_empty() {
            return 1;
        }
        if rows.len() == 1 {
            return a[rows[0]][cols[0]] as i64;
        }
        let mut total = 0i64;
        for (pos, &c) in cols.iter().enumerate() {
            let v = a[rows[0]][c] as i64;
            if v == 0 {
                continue;
            }
            let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.det_rows_cols(a, &rows[1..], &sub);
            total += if pos % 2 == 0 { v * minor } else { -v * minor };
        }
        total
    }

    /// Characteristic polynomial `x^n + c_1 x^{n-1} + ... + c_n` as `[c_1, ..., c_n]` mod `m`,
    /// with `c_k = (-1)^k` times the sum of principal `k x k` minors.
    pub fn charpoly(&self, a: &Mat) -> Vec<u8> {
        let n = self.n;
        let m = self.m as i64;
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let mut s = 0i64;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                s += self.det_rows_cols(a, &idx, &idx);
            }
            let c = if k % 2 == 0 { s } else { -s };
            out.push(c.rem_euclid(m) as u8);
        }
        out
    }

    /// Decodes `code` (base `m`, entry `(i, j)` at digit `i n + j`) into a matrix.
    pub fn from_code(&self, mut code: u64) -> Mat {
        let mut a = [[0u8; MAX_N]; MAX_N];
        let m = self.m as u64;
        for i in 0..self.n {
            for j in 0..self.n {
                a[i][j] = (code % m) as u8;
                code /= m;
            }
        }
        a
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip() {
        let s = MatSpace::new(2, 13).unwrap();
        let a = s.from_code(123_456_789);
        assert_eq!(s.unpack(s.pack(&a)), a);
    }

    #[test]
    fn multiplicator_examples() {
        let s = MatSpace::new(2, 7).unwrap();
        assert_eq!(s.multiplicator(&s.identity()), Some(1));
        assert_eq!(s.multiplicator(&s.j()), Some(1));
        assert_eq!(s.multiplicator(&s.scalar(3)), Some(2));
        let s1 = MatSpace::new(1, 5).unwrap();
        assert_eq!(s1.multiplicator(&s1.j()), Some(1));
        // singular
        assert_eq!(s.multiplicator(&s.scalar(0)), None);
    }

    #[test]
    fn inverse_and_charpoly() {
        let s = MatSpace::new(1, 5).unwrap();
        let mut a = s.identity();
        a[0][1] = 2;
        a[1][0] = 3;
        // det = 1 - 6 = -5 = 0 mod 5: not invertible
        assert_eq!(s.multiplicator(&a), None);
        a[1][1] = 2;
        // det = 2 - 6 = -4 = 1
        let mu = s.multiplicator(&a).unwrap();
        assert_eq!(mu, 1);
        assert_eq!(s.mul(&a, &s.inverse(&a, mu)), s.identity());
        // x^2 - 3x + 1
        assert_eq!(s.charpoly(&a), vec![2, 1]);
    }

    #[test]
    fn rejects_large_parameters() {
        assert!(MatSpace::new(3, 5).is_err());
        assert!(MatSpace::new(1, 17).is_err());
    }
}
