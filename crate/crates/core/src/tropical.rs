//! Points of the tropical affine space `L_{A,u}`: Plücker vector, τ-operator,
//! the vertices `w^(τ)` and point membership.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::model::ModelMatrix;
use crate::subset::Subset;

/// A point of `ℚⁿ`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropVector(pub Vec<Rat>);

impl TropVector {
    pub fn zeros(n: usize) -> TropVector {
        TropVector(vec![Rat::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> TropVector {
        TropVector(v.iter().map(|&x| Rat::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> TropVector {
        TropVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &TropVector) -> TropVector {
        TropVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &TropVector) -> TropVector {
        TropVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `x + c·(1,…,1)`
    pub fn shift(&self, c: &Rat) -> TropVector {
        TropVector(self.0.iter().map(|x| x + c).collect())
    }

    pub fn max_abs(&self) -> Rat {
        self.0.iter().map(Rat::abs).max().unwrap_or_else(Rat::zero)
    }

    /// Entries reordered so that position `p` holds entry `perm[p]`.
    pub fn permute(&self, perm: &[usize]) -> TropVector {
        TropVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl Index<usize> for TropVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl From<Vec<Rat>> for TropVector {
    fn from(v: Vec<Rat>) -> TropVector {
        TropVector(v)
    }
}

impl fmt::Display for TropVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for TropVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Tropical data: `w ≥ 0` with at least one zero entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TropicalData(TropVector);

impl TropicalData {
    pub fn new(w: TropVector) -> Result<TropicalData> {
        if let Some(i) = w.iter().position(Rat::is_negative) {
            return Err(Error::InvalidData(format!("entry {} is negative", i + 1)));
        }
        if !w.iter().any(Rat::is_zero) {
            return Err(Error::InvalidData("no entry is zero".into()));
        }
        Ok(TropicalData(w))
    }

    pub fn from_ints(v: &[i64]) -> Result<TropicalData> {
        TropicalData::new(TropVector::from_ints(v))
    }

    pub fn vector(&self) -> &TropVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `O(w) = {i : w_i = 0}`
    pub fn zero_set(&self) -> Subset {
        self.0.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(i, _)| i).collect()
    }

    /// `min{w_i : w_i > 0}`, if any entry is positive.
    pub fn min_positive(&self) -> Option<Rat> {
        self.0.iter().filter(|x| x.is_positive()).min().cloned()
    }

    pub fn permute(&self, perm: &[usize]) -> TropicalData {
        TropicalData(self.0.permute(perm))
    }
}

impl Index<usize> for TropicalData {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

fn check_len(model: &ModelMatrix, len: usize) -> Result<()> {
    if len == model.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("vector of length {len} for {} columns", model.n())))
    }
}

/// Tropical Plücker vector of `Lʰ_{A,u}`, indexed by the bases of `M(Bʰ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlueckerVector {
    pub values: BTreeMap<Subset, Rat>,
}

impl PlueckerVector {
    pub fn get(&self, gamma: Subset) -> Option<&Rat> {
        self.values.get(&gamma)
    }
}

/// `π_γ = 0` if `γ ∋ n+1`, else `min{w_i : i ∈ γ, γ−i ∈ M(B)}`.
pub fn pluecker(model: &ModelMatrix, w: &TropicalData) -> Result<PlueckerVector> {
    check_len(model, w.len())?;
    let n = model.n();
    let mb = model.dual_matroid();
    let values = model
        .homogenized_matroid()
        .bases()
        .iter()
        .map(|&gamma| {
            let v = if gamma.contains(n) {
                Rat::zero()
            } else {
                gamma
                    .iter()
                    .filter(|&i| mb.is_basis(gamma.without(i)))
                    .map(|i| w[i].clone())
                    .min()
                    .expect("γ = σ + j for a basis σ")
            };
            (gamma, v)
        })
        .collect();
    Ok(PlueckerVector { values })
}

/// The τ-operator `x ↦ x^(τ)` on `M(A)`.
pub fn tau_operator(model: &ModelMatrix, tau: Subset, x: &TropVector) -> Result<TropVector> {
    model.check_basis(tau)?;
    check_len(model, x.len())?;
    let m = model.matroid();
    let n = model.n();
    let outside = tau.complement(n);
    let mut y = x.0.clone();
    for j in tau.iter() {
        let best = outside
            .iter()
            .filter(|&i| m.is_basis(tau.exchange(j, i)))
            .map(|i| &x[i])
            .fold(&x[j], |a, b| a.min(b));
        y[j] = best.clone();
    }
    for i in outside.iter() {
        y[i] = tau
            .iter()
            .filter(|&j| m.is_basis(tau.exchange(j, i)))
            .map(|j| y[j].clone())
            .max()
            .expect("no loops: some exchange exists");
    }
    Ok(TropVector(y))
}

/// The cone `C_τ = w^(τ) + pos(e_i : i ∉ τ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub tau: Subset,
    pub apex: TropVector,
    pub free: Subset,
}

impl Cone {
    pub fn contains(&self, x: &TropVector) -> bool {
        x.len() == self.apex.len()
            && (0..x.len()).all(|i| {
                if self.free.contains(i) {
                    x[i] >= self.apex[i]
                } else {
                    x[i] == self.apex[i]
                }
            })
    }
}

pub fn vertex(model: &ModelMatrix, w: &TropicalData, tau: Subset) -> Result<Cone> {
    let apex = tau_operator(model, tau, w.vector())?;
    Ok(Cone { tau, apex, free: tau.complement(model.n()) })
}

/// Does `x` lie on `L_{A,u}`? Decided by whether the bases `γ` of `M(Bʰ)`
/// maximizing `Σ_{i∈γ} x̂_i − π_γ` at `x̂ = (x, 0)` cover `[n+1]`.
pub fn contains_point(model: &ModelMatrix, w: &TropicalData, x: &TropVector) -> Result<bool> {
    check_len(model, x.len())?;
    Ok(contains_point_with(&pluecker(model, w)?, model.n(), x))
}

/// As [`contains_point`], reusing a precomputed Plücker vector.
pub fn contains_point_with(pi: &PlueckerVector, n: usize, x: &TropVector) -> bool {
    let mut best: Option<Rat> = None;
    let mut cover = Subset::EMPTY;
    for (&gamma, p) in &pi.values {
        let v: Rat = gamma.iter().filter(|&i| i < n).map(|i| &x[i]).sum::<Rat>() - p;
        match best.as_ref().map(|b| v.cmp(b)) {
            None | Some(std::cmp::Ordering::Greater) => {
                best = Some(v);
                cover = gamma;
            }
            Some(std::cmp::Ordering::Equal) => cover = cover.union(gamma),
            Some(std::cmp::Ordering::Less) => {}
        }
    }
    cover == Subset::full(n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    fn s(labels: &[usize]) -> Subset {
        Subset::from_labels(labels).unwrap()
    }

    fn tv(v: &[i64]) -> TropVector {
        TropVector::from_ints(v)
    }

    #[test]
    fn data_validation() {
        assert!(TropicalData::from_ints(&[1, 2]).is_err());
        assert!(TropicalData::from_ints(&[0, -1]).is_err());
        let w = TropicalData::from_ints(&[0, 2, 0, 3]).unwrap();
        assert_eq!(w.zero_set(), s(&[1, 3]));
        assert_eq!(w.min_positive(), Some(Rat::from(2)));
    }

    #[test]
    fn hirzebruch_vertices() {
        let m = hirzebruch();
        let x = tv(&[6, 8, 7, 6, 4, 0]);
        assert_eq!(tau_operator(&m, s(&[2, 5, 6]), &x).unwrap(), tv(&[6, 6, 4, 4, 4, 0]));
        assert_eq!(tau_operator(&m, s(&[1, 2, 6]), &x).unwrap(), tv(&[4, 4, 4, 4, 4, 0]));
        assert!(tau_operator(&m, s(&[3, 4, 5]), &x).is_err());
        let c = tv(&[3; 6]);
        assert_eq!(tau_operator(&m, s(&[1, 2, 3]), &c).unwrap(), c);
    }

    #[test]
    fn pentagon_and_prism_vertices() {
        let p = pentagon();
        let w = TropicalData::from_ints(&[0, 4, 10, 6, 5]).unwrap();
        assert_eq!(vertex(&p, &w, s(&[1, 2, 5])).unwrap().apex, tv(&[0, 4, 5, 5, 5]));
        let pr = prism();
        let w = TropicalData::from_ints(&[0, 1, 1, 1, 2, 4]).unwrap();
        assert_eq!(vertex(&pr, &w, s(&[3, 4, 5, 6])).unwrap().apex, tv(&[0, 1, 0, 0, 1, 0]));
        assert_eq!(vertex(&pr, &w, s(&[2, 3, 4, 5])).unwrap().apex, tv(&[0, 0, 1, 0, 0, 1]));
        assert_eq!(vertex(&pr, &w, s(&[1, 2, 3, 4])).unwrap().apex, tv(&[0, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn eight_bases_vertices() {
        let m = eight_bases();
        let w = TropicalData::from_ints(&[0, 1, 2, 3, 4]).unwrap();
        let apex = |t: &[usize]| vertex(&m, &w, s(t)).unwrap().apex;
        for t in [[1, 2, 5], [1, 4, 5], [1, 3, 4], [1, 2, 3]] {
            assert_eq!(apex(&t), tv(&[0, 1, 2, 1, 2]));
        }
        for t in [[2, 3, 5], [3, 4, 5]] {
            assert_eq!(apex(&t), tv(&[0, 1, 0, 1, 0]));
        }
        for t in [[2, 4, 5], [2, 3, 4]] {
            assert_eq!(apex(&t), tv(&[0, 0, 2, 0, 2]));
        }
    }

    #[test]
    fn pluecker_values() {
        let m = binary();
        let w = TropicalData::from_ints(&[0, 2, 1, 4]).unwrap();
        let pi = pluecker(&m, &w).unwrap();
        // M(B) = U(1,4), M(Bʰ) = U(2,5)
        assert_eq!(pi.values.len(), 10);
        assert_eq!(pi.get(s(&[3, 5])), Some(&Rat::zero()));
        assert_eq!(pi.get(s(&[2, 4])), Some(&Rat::from(2)));
        assert_eq!(pi.get(s(&[1, 4])), Some(&Rat::zero()));
        let zero = pluecker(&hirzebruch(), &TropicalData::from_ints(&[0; 6]).unwrap()).unwrap();
        assert!(zero.values.values().all(Rat::is_zero));
    }

    #[test]
    fn apex_matches_pluecker_on_tau() {
        let m = hirzebruch();
        let w = TropicalData::from_ints(&[6, 8, 7, 6, 4, 0]).unwrap();
        let pi = pluecker(&m, &w).unwrap();
        for &tau in m.matroid().bases() {
            let sigma = tau.complement(6);
            let apex = vertex(&m, &w, tau).unwrap().apex;
            for j in tau.iter() {
                assert_eq!(pi.get(sigma.with(j)), Some(&apex[j]), "τ = {tau}, j = {}", j + 1);
            }
        }
    }

    #[test]
    fn membership() {
        let m = binary();
        let w = TropicalData::from_ints(&[0, 2, 1, 4]).unwrap();
        assert!(contains_point(&m, &w, &tv(&[0, 0, 0, 0])).unwrap());
        assert!(contains_point(&m, &w, &tv(&[0, 2, 1, 3])).unwrap());
        assert!(!contains_point(&m, &w, &tv(&[0, 2, 1, 1])).unwrap());
        assert!(!contains_point(&m, &w, &tv(&[5, 5, 9, 0])).unwrap());
    }
}
