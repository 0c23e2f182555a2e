//! Small dense matrices over a [`Scalar`] field.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, ctx: &F::Ctx) -> Self {
        Matrix { rows, cols, data: vec![F::zero(ctx); rows * cols] }
    }

    pub fn identity(n: usize, ctx: &F::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i * n + i] = F::one(ctx);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: Vec<F>) -> Self {
        let n = d.len();
        let ctx = d.first().expect("nonempty diagonal").ctx();
        let mut m = Self::zeros(n, n, &ctx);
        for (i, v) in d.into_iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn ctx(&self) -> F::Ctx {
        self.data[0].ctx()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.clone() * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> F {
        let mut acc = F::zero(&self.ctx());
        for i in 0..self.rows.min(self.cols) {
            acc = acc + self.get(i, i);
        }
        acc
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero(&v[0].ctx());
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc = acc + a.clone() * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        let ctx = v[0].ctx();
        let mut out = vec![F::zero(&ctx); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o = o.clone() + vi.clone() * a;
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols).clone() * other.get(i % other.rows, j % other.cols)
        })
    }

    /// Embed a square operator acting on `arity` consecutive sites starting at
    /// `site` (0-based) into the `n`-site space. Site 0 is the most significant bit.
    pub fn embed(&self, site: usize, n: usize) -> Result<Self> {
        let arity = self.rows.trailing_zeros() as usize;
        if self.rows != self.cols || 1usize << arity != self.rows {
            return Err(Error::Argument("site operators must be square of size 2^k".into()));
        }
        if site + arity > n {
            return Err(Error::Argument(format!("operator on sites {}..{} exceeds {n} sites", site + 1, site + arity)));
        }
        let ctx = self.ctx();
        let left = Matrix::identity(1 << site, &ctx);
        let right = Matrix::identity(1 << (n - site - arity), &ctx);
        Ok(left.kron(self).kron(&right))
    }

    /// Coefficients `c_0..c_n` of `det(lambda I - A) = sum c_k lambda^k`, by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<F> {
        assert_eq!(self.rows, self.cols, "charpoly needs a square matrix");
        let n = self.rows;
        let ctx = self.ctx();
        let mut coeffs = vec![F::zero(&ctx); n + 1];
        coeffs[n] = F::one(&ctx);
        let mut m = Matrix::zeros(n, n, &ctx);
        let id = Matrix::identity(n, &ctx);
        for k in 1..=n {
            m = &(self * &m) + &id.scale(&coeffs[n + 1 - k]);
            let am = self * &m;
            coeffs[n - k] = -(am.trace() / F::from_i64(k as i64, &ctx));
        }
        coeffs
    }

    /// Solve `A x = b` for a system with at least as many equations as
    /// unknowns, requiring the surplus equations to be consistent. Exact fields
    /// must match exactly; floating ones within the working tolerance.
    pub fn solve_consistent(&self, b: &[F]) -> Result<Vec<F>> {
        let (rows, cols) = (self.rows, self.cols);
        if b.len() != rows || rows < cols {
            return Err(Error::Argument(format!("system is {rows}x{cols} with {} right-hand sides", b.len())));
        }
        let mut aug: Vec<Vec<F>> =
            (0..rows).map(|i| self.row(i).iter().cloned().chain(std::iter::once(b[i].clone())).collect()).collect();
        let scale = aug.iter().flatten().map(|v| v.magnitude()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let tol = self.ctx_tolerance() * scale;
        for col in 0..cols {
            let pivot = (col..rows)
                .filter(|&r| !aug[r][col].is_zero() && (F::is_exact() || aug[r][col].magnitude() > tol))
                .max_by(|&r1, &r2| {
                    let (m1, m2) = (aug[r1][col].magnitude(), aug[r2][col].magnitude());
                    if F::is_exact() {
                        // exact: prefer the first usable row to keep the pivot sequence deterministic
                        r2.cmp(&r1)
                    } else {
                        m1.partial_cmp(&m2).unwrap_or(std::cmp::Ordering::Equal)
                    }
                })
                .ok_or_else(|| Error::Precondition(format!("singular system: no pivot in column {col}")))?;
            aug.swap(col, pivot);
            let inv = aug[col][col].inv();
            for j in col..=cols {
                aug[col][j] = aug[col][j].clone() * &inv;
            }
            for r in 0..rows {
                if r == col || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col].clone();
                for j in col..=cols {
                    let v = aug[col][j].clone() * &factor;
                    aug[r][j] = aug[r][j].clone() - v;
                }
            }
        }
        for (r, row) in aug.iter().enumerate().skip(cols) {
            let v = &row[cols];
            let bad = if F::is_exact() { !v.is_zero() } else { v.magnitude() > 16.0 * tol };
            if bad {
                return Err(Error::Precondition(format!("inconsistent system: equation {r} has residual {:e}", v.magnitude())));
            }
        }
        Ok(aug.into_iter().take(cols).map(|row| row[cols].clone()).collect())
    }

    fn ctx_tolerance(&self) -> f64 {
        self.data.first().map_or(0.0, |v| v.tolerance())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Matrix::identity(self.rows, &self.ctx());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<F: Scalar> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b).collect() }
    }
}

impl<F: Scalar> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b).collect() }
    }
}

impl<F: Scalar> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let ctx = self.ctx();
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols, &ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn charpoly_2x2() {
        // [[1,2],[3,4]]: lambda^2 - 5 lambda - 2
        let a = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]);
        assert_eq!(a.charpoly(), vec![q(-2), q(-5), q(1)]);
    }

    #[test]
    fn charpoly_matches_cayley_hamilton() {
        let a = Matrix::from_rows(vec![
            vec![q(2), q(-1), q(0)],
            vec![q(1), q(3), Rational::new(1, 2)],
            vec![q(0), q(5), q(-7)],
        ]);
        let c = a.charpoly();
        let mut acc = Matrix::zeros(3, 3, &());
        for (k, ck) in c.iter().enumerate() {
            acc = &acc + &a.pow(k).scale(ck);
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn consistent_solve() {
        let a = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(3)]]);
        let x = a.solve_consistent(&[q(3), q(1), q(7)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(matches!(a.solve_consistent(&[q(3), q(1), q(8)]), Err(Error::Precondition(_))));
        let sing = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(sing.solve_consistent(&[q(1), q(2)]).is_err());
    }

    #[test]
    fn embedding_order() {
        let sigma = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]]);
        let e = sigma.embed(0, 2).unwrap();
        // site 0 is the high bit: |10> -> |00>
        assert_eq!(*e.get(0, 2), q(1));
        let e = sigma.embed(1, 2).unwrap();
        assert_eq!(*e.get(0, 1), q(1));
        assert!(sigma.embed(2, 2).is_err());
    }
}
