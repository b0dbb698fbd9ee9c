//! Integer matrices and exact elimination.
//!
//! Determinants and square solves use Bareiss fraction-free elimination so
//! every intermediate entry stays an integer. Rank, kernels and left solves of
//! rectangular systems go through a reduced row echelon form over [`Rat`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<IntMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<IntMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                r.len()
            )));
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        IntMatrix::new(rows.len(), cols, data)
    }

    pub fn identity(k: usize) -> IntMatrix {
        let mut data = vec![BigInt::zero(); k * k];
        for i in 0..k {
            data[i * k + i] = BigInt::one();
        }
        IntMatrix { rows: k, cols: k, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Submatrix formed by the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        IntMatrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn permute_columns(&self, perm: &[usize]) -> IntMatrix {
        self.select_columns(perm)
    }

    /// `self · v`
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, x)| Rat::from(a) * x).sum())
            .collect()
    }

    /// `selfᵀ · y`
    pub fn tmul_vec(&self, y: &[Rat]) -> Vec<Rat> {
        assert_eq!(y.len(), self.rows);
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| Rat::from(self.get(r, c)) * &y[r]).sum())
            .collect()
    }

    /// `self · otherᵀ`
    pub fn mul_transpose(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                data.push(self.row(i).iter().zip(other.row(j)).map(|(a, b)| a * b).sum());
            }
        }
        IntMatrix { rows: self.rows, cols: other.rows, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).iter().map(Rat::from).collect()).collect()
    }

    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Bareiss forward elimination on a `k × (k + extra)` integer matrix.
///
/// On return the left `k × k` block is upper triangular, row `i` carries the
/// `i`-th leading principal minor of the (row-permuted) input on its diagonal,
/// and the returned sign accounts for the row swaps. `None` means singular.
fn bareiss(m: &mut [Vec<BigInt>], k: usize) -> Option<i8> {
    let width = m.first().map_or(0, Vec::len);
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for p in 0..k {
        let pivot = (p..k).find(|&r| !m[r][p].is_zero())?;
        if pivot != p {
            m.swap(pivot, p);
            sign = -sign;
        }
        for i in p + 1..k {
            for j in p + 1..width {
                let v = &m[i][j] * &m[p][p] - &m[i][p] * &m[p][j];
                // exact by Sylvester's identity
                m[i][j] = v / &prev;
            }
            m[i][p] = BigInt::zero();
        }
        prev = m[p][p].clone();
    }
    Some(sign)
}

/// Exact determinant of a square matrix.
pub fn det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let k = m.rows;
    if k == 0 {
        return BigInt::one();
    }
    let mut rows = m.to_rows();
    match bareiss(&mut rows, k) {
        Some(sign) => {
            let d = rows[k - 1][k - 1].clone();
            if sign < 0 {
                -d
            } else {
                d
            }
        }
        None => BigInt::zero(),
    }
}

/// Solve `m · X = B` for several right-hand sides at once (columns of `rhs`).
pub fn solve_many(m: &IntMatrix, rhs: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    assert_eq!(m.rows, m.cols, "solve with a non-square matrix");
    let k = m.rows;
    if rhs.iter().any(|b| b.len() != k) {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    // clear denominators column by column so the augmented matrix is integral
    let scales: Vec<BigInt> = rhs
        .iter()
        .map(|b| b.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())))
        .collect();
    let mut aug: Vec<Vec<BigInt>> = (0..k)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            for (b, s) in rhs.iter().zip(&scales) {
                row.push(b[r].numer() * (s / b[r].denom()));
            }
            row
        })
        .collect();
    bareiss(&mut aug, k).ok_or(Error::SingularMatrix)?;
    let mut out = Vec::with_capacity(rhs.len());
    for (c, s) in scales.iter().enumerate() {
        let col = k + c;
        let mut x = vec![Rat::zero(); k];
        for i in (0..k).rev() {
            let mut acc = Rat::from(&aug[i][col]);
            for j in i + 1..k {
                acc -= &(Rat::from(&aug[i][j]) * &x[j]);
            }
            x[i] = acc / Rat::from(&aug[i][i]);
        }
        let s = Rat::from(s);
        out.push(x.into_iter().map(|v| v / &s).collect());
    }
    Ok(out)
}

/// Solve `m · x = b` exactly.
pub fn solve(m: &IntMatrix, b: &[Rat]) -> Result<Vec<Rat>> {
    Ok(solve_many(m, &[b.to_vec()])?.pop().expect("one column"))
}

/// Solve `mᵀ · x = b` exactly.
pub fn solve_transpose(m: &IntMatrix, b: &[Rat]) -> Result<Vec<Rat>> {
    solve(&m.transpose(), b)
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &IntMatrix) -> usize {
    rref(&mut m.to_rat_rows()).len()
}

pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Integer matrix whose rows form a basis of `ker(a)`.
///
/// Each row is primitive (entries with gcd one) with a positive leading entry.
pub fn kernel_basis(a: &IntMatrix) -> Result<IntMatrix> {
    let mut rows = a.to_rat_rows();
    let pivots = rref(&mut rows);
    if pivots.len() < a.rows {
        return Err(Error::RankDeficient { rank: pivots.len(), expected: a.rows });
    }
    let n = a.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut data = Vec::with_capacity(free.len() * n);
    for &f in &free {
        let mut v = vec![Rat::zero(); n];
        v[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&rows[r][f];
        }
        data.extend(primitive_integer_vector(&v));
    }
    IntMatrix::new(free.len(), n, data)
}

/// Scale a rational vector to a primitive integer vector with positive leading entry.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
    let g = if lead_neg { -g } else { g };
    ints.into_iter().map(|x| x / &g).collect()
}

/// Some `y` with `aᵀ · y = v`, if `v` lies in the row span of `a`.
pub fn solve_left(a: &IntMatrix, v: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(v.len(), a.cols);
    let k = a.rows;
    // augmented system [aᵀ | v]
    let mut aug: Vec<Vec<Rat>> = (0..a.cols)
        .map(|c| {
            let mut row: Vec<Rat> = (0..k).map(|r| Rat::from(a.get(r, c))).collect();
            row.push(v[c].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut y = vec![Rat::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        y[p] = aug[r][k].clone();
    }
    Some(y)
}

pub fn in_row_span(a: &IntMatrix, v: &[Rat]) -> bool {
    solve_left(a, v).is_some()
}
