//! The model matrix `A` together with cached matroid and simplex data.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det, rank, solve_left, solve_many, IntMatrix, Rat};
use crate::matroid::Matroid;
use crate::subdivision::regular_triangulation;
use crate::subset::{Subset, MAX_GROUND};

/// Data attached to a basis `τ`: its determinant and the coordinates of every
/// column of `A` in the basis `A_τ`.
#[derive(Debug)]
pub struct Frame {
    pub det: BigInt,
    /// `coords[i] = A_τ⁻¹ a_i`, which is row `i` of `Aᵀ(A_τᵀ)⁻¹`; entry `p`
    /// belongs to the `p`-th smallest element of `τ`.
    pub coords: Vec<Vec<Rat>>,
}

impl Frame {
    /// `vol_A(τ) = |det A_τ|`
    pub fn volume(&self) -> u64 {
        self.det.abs().to_u64().expect("simplex volume fits in 64 bits")
    }
}

/// A full-rank integer `k×n` matrix with `(1,…,1)` in its row span and no zero
/// columns.
#[derive(Debug)]
pub struct ModelMatrix {
    a: IntMatrix,
    ones: Vec<Rat>,
    matroid: Matroid,
    basis_index: HashMap<Subset, usize>,
    frames: Vec<OnceLock<Frame>>,
    dual: OnceLock<Matroid>,
    homogenized: OnceLock<Matroid>,
    volume: OnceLock<Result<u64>>,
}

impl ModelMatrix {
    pub fn new(a: IntMatrix) -> Result<ModelMatrix> {
        let (k, n) = (a.rows(), a.cols());
        if n > MAX_GROUND - 1 {
            // the homogenized matroid lives on n + 1 elements
            return Err(Error::TooLarge(n));
        }
        if k == 0 || k > n {
            return Err(Error::DimensionMismatch(format!("a {k}x{n} model matrix")));
        }
        let r = rank(&a);
        if r < k {
            return Err(Error::RankDeficient { rank: r, expected: k });
        }
        if let Some(c) = (0..n).find(|&c| (0..k).all(|r| a.get(r, c).is_zero())) {
            return Err(Error::ZeroColumn(c));
        }
        let ones = solve_left(&a, &vec![Rat::one(); n]).ok_or(Error::NoAllOnes)?;
        let matroid = Matroid::from_matrix(&a)?;
        let basis_index = matroid.bases().iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let frames = (0..matroid.num_bases()).map(|_| OnceLock::new()).collect();
        Ok(ModelMatrix {
            a,
            ones,
            matroid,
            basis_index,
            frames,
            dual: OnceLock::new(),
            homogenized: OnceLock::new(),
            volume: OnceLock::new(),
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<ModelMatrix> {
        ModelMatrix::new(IntMatrix::from_rows(rows)?)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `M(A)`
    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    /// `M(B)`, the dual of `M(A)`.
    pub fn dual_matroid(&self) -> &Matroid {
        self.dual.get_or_init(|| self.matroid.dual())
    }

    /// `M(Bʰ)`, the free coextension of `M(B)`; the extra element has index `n`.
    pub fn homogenized_matroid(&self) -> &Matroid {
        self.homogenized.get_or_init(|| {
            self.dual_matroid()
                .free_coextension()
                .expect("M(A) has no loops, so M(B) has no coloops")
        })
    }

    /// Some `y` with `Aᵀy = (1,…,1)`.
    pub fn ones_coefficients(&self) -> &[Rat] {
        &self.ones
    }

    pub fn is_basis(&self, tau: Subset) -> bool {
        self.basis_index.contains_key(&tau)
    }

    pub fn check_basis(&self, tau: Subset) -> Result<()> {
        if self.is_basis(tau) {
            Ok(())
        } else {
            Err(Error::NotABasis(tau.to_string()))
        }
    }

    pub fn frame(&self, tau: Subset) -> Result<&Frame> {
        let &idx = self.basis_index.get(&tau).ok_or_else(|| Error::NotABasis(tau.to_string()))?;
        Ok(self.frames[idx].get_or_init(|| {
            let a_tau = self.a.select_columns(&tau.to_vec());
            let columns: Vec<Vec<Rat>> = (0..self.n())
                .map(|c| self.a.column(c).iter().map(Rat::from).collect())
                .collect();
            let coords = solve_many(&a_tau, &columns).expect("basis columns are independent");
            Frame { det: det(&a_tau), coords }
        }))
    }

    /// `vol_A(τ) = |det A_τ|`
    pub fn simplex_volume(&self, tau: Subset) -> Result<u64> {
        Ok(self.frame(tau)?.volume())
    }

    /// `vol_A(Q_A)`, the sum of simplex volumes over any triangulation of `Q_A`.
    pub fn volume(&self) -> Result<u64> {
        self.volume
            .get_or_init(|| {
                let zero = vec![Rat::zero(); self.n()];
                let tri = regular_triangulation(self, &zero);
                let mut total = BigInt::zero();
                for &tau in &tri.simplices {
                    total += self.frame(tau).expect("simplex is a basis").det.abs();
                }
                total.to_u64().ok_or(Error::VolumeOverflow)
            })
            .clone()
    }

    /// Does the first row consist of ones?
    pub fn has_ones_row(&self) -> bool {
        self.a.row(0).iter().all(|x| *x == BigInt::from(1))
    }

    /// The same model with columns reordered: column `p` of the result is column `perm[p]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<ModelMatrix> {
        ModelMatrix::new(self.a.permute_columns(perm))
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn volumes_of_examples() {
        assert_eq!(binary().volume().unwrap(), 2);
        assert_eq!(hirzebruch().volume().unwrap(), 4);
        assert_eq!(pentagon().volume().unwrap(), 5);
        assert_eq!(prism().volume().unwrap(), 3);
        assert_eq!(curve(&[0, 1, 3, 7]).volume().unwrap(), 7);
        assert_eq!(curve(&[-2, 5]).volume().unwrap(), 7);
    }

    /// Twice the area of a lattice polygon given in cyclic order.
    fn shoelace(points: &[(i64, i64)]) -> i64 {
        let n = points.len();
        (0..n)
            .map(|i| {
                let (x0, y0) = points[i];
                let (x1, y1) = points[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum::<i64>()
            .abs()
    }

    #[test]
    fn polygon_volume_matches_shoelace() {
        let polys: [&[(i64, i64)]; 3] = [
            &[(0, 0), (1, 0), (2, 1), (1, 2), (0, 1)],
            &[(0, 0), (4, 0), (5, 3), (1, 4)],
            &[(0, 0), (3, 1), (2, 5), (-1, 3)],
        ];
        for p in polys {
            let rows = vec![vec![1; p.len()], p.iter().map(|q| q.0).collect(), p.iter().map(|q| q.1).collect()];
            assert_eq!(ModelMatrix::from_rows(&rows).unwrap().volume().unwrap() as i64, shoelace(p));
        }
    }

    #[test]
    fn validation() {
        assert!(matches!(
            ModelMatrix::from_rows(&[vec![1, 1, 1], vec![2, 2, 2]]),
            Err(Error::RankDeficient { .. })
        ));
        assert_eq!(ModelMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap().volume().unwrap(), 1);
        assert!(matches!(ModelMatrix::from_rows(&[vec![0, 1, 2], vec![1, 1, 3]]), Err(Error::NoAllOnes)));
        assert!(matches!(
            ModelMatrix::from_rows(&[vec![1, 0, 1], vec![0, 0, 1]]),
            Err(Error::ZeroColumn(1))
        ));
    }

    #[test]
    fn frame_rows_match_hand_computation() {
        // Aᵀ(A_125ᵀ)⁻¹ for the pentagon
        let m = pentagon();
        let f = m.frame(Subset::from_labels(&[1, 2, 5]).unwrap()).unwrap();
        let expect = [[1, 0, 0], [0, 1, 0], [-2, 2, 1], [-2, 1, 2], [0, 0, 1]];
        for (row, e) in f.coords.iter().zip(expect) {
            assert_eq!(row, &e.map(Rat::from).to_vec());
        }
        assert_eq!(f.volume(), 1);
    }

    #[test]
    fn homogenized_matroid_shape() {
        let h = hirzebruch();
        assert_eq!(h.homogenized_matroid().rank(), 4);
        assert_eq!(h.homogenized_matroid().ground_size(), 7);
    }
}
