//! Regular subdivisions of `Q_A`: cell tests, maximal cells and perturbed
//! triangulations.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{lp_feasible, solve_transpose, Constraint, EpsRat, Rat};
use crate::model::ModelMatrix;
use crate::subset::Subset;

/// Scalars that can serve as lifting weights.
pub trait Weight: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn add_scaled(&mut self, c: &Rat, v: &Self);
}

impl Weight for Rat {
    fn zero() -> Rat {
        Rat::zero()
    }

    fn add_scaled(&mut self, c: &Rat, v: &Rat) {
        *self += &(c * v);
    }
}

impl Weight for EpsRat {
    fn zero() -> EpsRat {
        EpsRat::zero()
    }

    fn add_scaled(&mut self, c: &Rat, v: &EpsRat) {
        *self = &*self + &v.scale(c);
    }
}

/// Result of testing whether a basis `τ` lies in a cell of `Δ_ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTest {
    pub in_cell: bool,
    /// Indices `i` with `(Aᵀ(A_τᵀ)⁻¹ω_τ)_i = ω_i`; always contains `τ`.
    pub equality: Subset,
    /// Indices where the inequality fails.
    pub violations: Subset,
}

/// The affine function through the lifted points of `τ`, evaluated at every column.
pub fn lifted_values<W: Weight>(model: &ModelMatrix, tau: Subset, omega: &[W]) -> Result<Vec<W>> {
    let frame = model.frame(tau)?;
    let tau_elems = tau.to_vec();
    Ok(frame
        .coords
        .iter()
        .map(|row| {
            let mut acc = W::zero();
            for (c, &j) in row.iter().zip(&tau_elems) {
                if !c.is_zero() {
                    acc.add_scaled(c, &omega[j]);
                }
            }
            acc
        })
        .collect())
}

pub fn cell_test<W: Weight>(model: &ModelMatrix, tau: Subset, omega: &[W]) -> Result<CellTest> {
    assert_eq!(omega.len(), model.n(), "weight vector length");
    let lhs = lifted_values(model, tau, omega)?;
    let (mut equality, mut violations) = (Subset::EMPTY, Subset::EMPTY);
    for (i, (l, w)) in lhs.iter().zip(omega).enumerate() {
        match l.cmp(w) {
            std::cmp::Ordering::Equal => equality = equality.with(i),
            std::cmp::Ordering::Greater => violations = violations.with(i),
            std::cmp::Ordering::Less => {}
        }
    }
    Ok(CellTest { in_cell: violations.is_empty(), equality, violations })
}

/// `Aᵀ(A_τᵀ)⁻¹ω_τ ≤ ω` entrywise.
pub fn lies_in_cell<W: Weight>(model: &ModelMatrix, tau: Subset, omega: &[W]) -> Result<bool> {
    Ok(cell_test(model, tau, omega)?.in_cell)
}

/// A maximal cell together with the linear functional `ψ` with `Aᵀψ = ω` on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub members: Subset,
    pub functional: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivisionCells {
    pub cells: Vec<Cell>,
}

impl SubdivisionCells {
    pub fn members(&self) -> Vec<Subset> {
        self.cells.iter().map(|c| c.members).collect()
    }

    /// Does `s` lie in one of the cells?
    pub fn covers(&self, s: Subset) -> bool {
        self.cells.iter().any(|c| s.is_subset(c.members))
    }
}

/// Maximal cells of `Δ_ω`, sorted lexicographically.
pub fn maximal_cells(model: &ModelMatrix, omega: &[Rat]) -> SubdivisionCells {
    let found: Vec<(Vec<Rat>, Subset)> = model
        .matroid()
        .bases()
        .par_iter()
        .filter_map(|&tau| {
            let test = cell_test(model, tau, omega).expect("basis");
            test.in_cell.then(|| {
                let w_tau: Vec<Rat> = tau.iter().map(|j| omega[j].clone()).collect();
                let a_tau = model.matrix().select_columns(&tau.to_vec());
                (solve_transpose(&a_tau, &w_tau).expect("basis"), test.equality)
            })
        })
        .collect();
    let grouped: BTreeMap<Vec<Rat>, Subset> = found.into_iter().collect();
    let candidates: Vec<Cell> =
        grouped.into_iter().map(|(functional, members)| Cell { members, functional }).collect();
    let mut cells: Vec<Cell> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d.members != c.members && c.members.is_subset(d.members)))
        .cloned()
        .collect();
    cells.sort_by_key(|c| c.members);
    SubdivisionCells { cells }
}

/// A lexicographic lift `ω̃_i = Σ_l levels[l][i]·ε^l ± ε^(L + position of i in order)`,
/// where `L` is the number of levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lifting {
    pub levels: Vec<Vec<Rat>>,
    pub order: Vec<usize>,
    pub negate: bool,
}

impl Lifting {
    /// `ω + ε^(i+1)` in the natural order.
    pub fn standard(omega: &[Rat]) -> Lifting {
        Lifting { levels: vec![omega.to_vec()], order: (0..omega.len()).collect(), negate: false }
    }

    pub fn weights(&self) -> Vec<EpsRat> {
        let n = self.order.len();
        let depth = self.levels.len();
        let mut coeffs = vec![vec![Rat::zero(); depth + n]; n];
        for (l, level) in self.levels.iter().enumerate() {
            for (i, v) in level.iter().enumerate() {
                coeffs[i][l] = v.clone();
            }
        }
        let sign = if self.negate { -Rat::one() } else { Rat::one() };
        for (pos, &i) in self.order.iter().enumerate() {
            coeffs[i][depth + pos] = sign.clone();
        }
        coeffs.into_iter().map(EpsRat::new).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    /// Maximal simplices, sorted lexicographically.
    pub simplices: Vec<Subset>,
    /// The lift inducing it, when known.
    pub lifting: Option<Lifting>,
}

impl Triangulation {
    /// A triangulation given only by its simplices, e.g. read from a file.
    pub fn from_simplices(mut simplices: Vec<Subset>) -> Triangulation {
        simplices.sort();
        simplices.dedup();
        Triangulation { simplices, lifting: None }
    }

    pub fn volume(&self, model: &ModelMatrix) -> Result<u64> {
        self.simplices.iter().map(|&t| model.simplex_volume(t)).sum()
    }
}

/// The regular triangulation induced by a lexicographic lift.
pub fn triangulation_from_lifting(model: &ModelMatrix, lifting: &Lifting) -> Triangulation {
    let weights = lifting.weights();
    let mut simplices: Vec<Subset> = model
        .matroid()
        .bases()
        .par_iter()
        .copied()
        .filter(|&tau| lies_in_cell(model, tau, &weights).expect("basis"))
        .collect();
    simplices.sort();
    Triangulation { simplices, lifting: Some(lifting.clone()) }
}

/// A regular triangulation refining `Δ_ω`, from the lift `ω_i + ε^(i+1)`.
pub fn regular_triangulation(model: &ModelMatrix, omega: &[Rat]) -> Triangulation {
    triangulation_from_lifting(model, &Lifting::standard(omega))
}

/// Does every simplex of `tri` lie in a cell of `Δ_ω`?
pub fn refines(model: &ModelMatrix, tri: &Triangulation, omega: &[Rat]) -> Result<bool> {
    for &tau in &tri.simplices {
        if !lies_in_cell(model, tau, omega)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is there a linear form on `ℝ^k` maximized on `{a_i}` exactly at `i ∈ O`?
pub fn is_face(model: &ModelMatrix, o: Subset) -> bool {
    let k = model.k();
    let a = model.matrix();
    // (1,…,1) lies in the row span, so the maximum can be shifted to 0
    let constraints: Vec<Constraint> = (0..model.n())
        .map(|i| {
            let coeffs: Vec<Rat> = (0..k).map(|r| Rat::from(a.get(r, i))).collect();
            if o.contains(i) {
                Constraint::eq(coeffs, Rat::zero())
            } else {
                Constraint::lt(coeffs, Rat::zero())
            }
        })
        .collect();
    lp_feasible(&constraints, k)
}

/// `e_O`, the indicator vector of `O`.
pub fn indicator(n: usize, o: Subset) -> Vec<Rat> {
    (0..n).map(|i| if o.contains(i) { Rat::one() } else { Rat::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;

    fn s(labels: &[usize]) -> Subset {
        Subset::from_labels(labels).unwrap()
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from(x)).collect()
    }

    #[test]
    fn hirzebruch_cells() {
        let m = hirzebruch();
        let omega = rv(&[-6, -6, -4, -4, -4, 0]);
        assert!(lies_in_cell(&m, s(&[2, 5, 6]), &omega).unwrap());
        assert_eq!(maximal_cells(&m, &omega).members(), vec![s(&[1, 2, 3, 4, 5]), s(&[2, 5, 6])]);
        let omega126 = rv(&[-4, -4, -4, -4, -4, 0]);
        assert!(!lies_in_cell(&m, s(&[1, 2, 6]), &omega126).unwrap());
        assert_eq!(maximal_cells(&m, &omega126).members(), vec![s(&[1, 2, 3, 4, 5]), s(&[2, 5, 6])]);
        assert_eq!(maximal_cells(&m, &rv(&[0; 6])).members(), vec![Subset::full(6)]);
    }

    #[test]
    fn equality_pattern_matches_cells() {
        let m = hirzebruch();
        let omega = rv(&[-6, -6, -4, -4, -4, 0]);
        let t = cell_test(&m, s(&[1, 2, 3]), &omega).unwrap();
        assert!(t.in_cell);
        assert_eq!(t.equality, s(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn pentagon_subdivision_and_triangulation() {
        let m = pentagon();
        let e1 = rv(&[1, 0, 0, 0, 0]);
        assert_eq!(maximal_cells(&m, &e1).members(), vec![s(&[1, 2, 5]), s(&[2, 3, 4, 5])]);
        let tri = regular_triangulation(&m, &e1);
        assert!(tri.simplices.contains(&s(&[1, 2, 5])));
        assert!(refines(&m, &tri, &e1).unwrap());
        assert_eq!(tri.volume(&m).unwrap(), 5);
        let e12 = rv(&[1, 1, 0, 0, 0]);
        assert_eq!(maximal_cells(&m, &e12).members(), vec![s(&[1, 2, 3, 5]), s(&[3, 4, 5])]);
    }

    #[test]
    fn binary_triangulation_refines_e1() {
        let m = binary();
        let e1 = rv(&[1, 0, 0, 0]);
        let tri = regular_triangulation(&m, &e1);
        assert_eq!(tri.simplices, vec![s(&[1, 2, 3]), s(&[2, 3, 4])]);
        assert_eq!(tri.volume(&m).unwrap(), 2);
    }

    #[test]
    fn refinement_checks() {
        let m = hirzebruch();
        let mock = Triangulation::from_simplices(vec![s(&[1, 2, 6]), s(&[1, 3, 4]), s(&[1, 4, 5]), s(&[1, 5, 6])]);
        assert_eq!(mock.volume(&m).unwrap(), 4);
        assert!(refines(&m, &mock, &rv(&[0; 6])).unwrap());
        assert!(!refines(&m, &mock, &rv(&[-4, -4, -4, -4, -4, 0])).unwrap());
    }

    #[test]
    fn faces() {
        let p = pentagon();
        assert!(is_face(&p, s(&[1, 2])));
        assert!(is_face(&p, s(&[1])));
        assert!(!is_face(&p, s(&[1, 3])));
        let sq = binary();
        assert!(is_face(&sq, s(&[1])));
        assert!(!is_face(&sq, s(&[1, 4])));
        assert!(is_face(&sq, Subset::full(4)));
        let h = hirzebruch();
        // the point (1,1) is interior to the top edge 3456
        assert!(!is_face(&h, s(&[4])));
        assert!(is_face(&h, s(&[3, 4, 5, 6])));
    }

    #[test]
    fn curve_triangulation_at_zero() {
        let m = curve(&[0, 1, 3, 4]);
        let tri = regular_triangulation(&m, &rv(&[0; 4]));
        assert_eq!(tri.volume(&m).unwrap(), 4);
    }
}
