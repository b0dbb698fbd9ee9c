//! Matroids given by their list of bases.

use std::collections::HashSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{det, rank, IntMatrix};
use crate::subset::{combinations, Subset, MAX_GROUND};

/// A matroid on `{0, …, n-1}`, stored as its sorted list of bases.
#[derive(Clone, Debug)]
pub struct Matroid {
    ground: usize,
    rank: usize,
    bases: Vec<Subset>,
    lookup: HashSet<Subset>,
    representation: Option<IntMatrix>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Matroid) -> bool {
        self.ground == other.ground && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Matroid {
    /// Build from an explicit basis list. The exchange axiom is not checked here;
    /// see [`Matroid::satisfies_exchange_axiom`].
    pub fn from_bases(ground: usize, bases: impl IntoIterator<Item = Subset>) -> Result<Matroid> {
        if ground > MAX_GROUND {
            return Err(Error::TooLarge(ground));
        }
        let mut bases: Vec<Subset> = bases.into_iter().collect();
        bases.sort();
        bases.dedup();
        let Some(first) = bases.first() else {
            return Err(Error::DimensionMismatch("a matroid needs at least one basis".into()));
        };
        let rank = first.len();
        let full = Subset::full(ground);
        if let Some(b) = bases.iter().find(|b| b.len() != rank || !b.is_subset(full)) {
            return Err(Error::DimensionMismatch(format!("basis {b} has the wrong size or support")));
        }
        let lookup = bases.iter().copied().collect();
        Ok(Matroid { ground, rank, bases, lookup, representation: None })
    }

    /// The column matroid: a `k`-subset is a basis iff its columns have nonzero determinant.
    pub fn from_matrix(m: &IntMatrix) -> Result<Matroid> {
        let (k, n) = (m.rows(), m.cols());
        if n > MAX_GROUND {
            return Err(Error::TooLarge(n));
        }
        let r = rank(m);
        if r < k {
            return Err(Error::RankDeficient { rank: r, expected: k });
        }
        let bases = combinations(n, k)
            .into_iter()
            .filter(|s| !det(&m.select_columns(&s.to_vec())).is_zero());
        let mut out = Matroid::from_bases(n, bases)?;
        out.representation = Some(m.clone());
        Ok(out)
    }

    pub fn uniform(rank: usize, ground: usize) -> Matroid {
        Matroid::from_bases(ground, combinations(ground, rank)).expect("uniform matroid")
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn representation(&self) -> Option<&IntMatrix> {
        self.representation.as_ref()
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.lookup.contains(&s)
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() == combinations(self.ground, self.rank).len()
    }

    /// Rank-sized subsets that are not bases, in lexicographic order.
    pub fn non_bases(&self) -> Vec<Subset> {
        combinations(self.ground, self.rank).into_iter().filter(|s| !self.is_basis(*s)).collect()
    }

    /// Does some basis lie inside `s`?
    pub fn contains_basis(&self, s: Subset) -> bool {
        self.bases.iter().any(|b| b.is_subset(s))
    }

    /// Elements in no basis.
    pub fn loops(&self) -> Subset {
        let covered = self.bases.iter().fold(Subset::EMPTY, |acc, b| acc.union(*b));
        covered.complement(self.ground)
    }

    /// Elements in every basis.
    pub fn coloops(&self) -> Subset {
        self.bases.iter().fold(Subset::full(self.ground), |acc, b| acc.intersection(*b))
    }

    /// Bases are the complements of the bases of `self`.
    pub fn dual(&self) -> Matroid {
        Matroid::from_bases(self.ground, self.bases.iter().map(|b| b.complement(self.ground)))
            .expect("dual of a matroid")
    }

    /// The matroid on `n + 1` elements with bases `σ + j` for every basis `σ`
    /// and every `j ∉ σ`; the new element has index `n`.
    pub fn free_coextension(&self) -> Result<Matroid> {
        if let Some(c) = self.coloops().iter().next() {
            return Err(Error::HasColoop(c));
        }
        if self.ground + 1 > MAX_GROUND {
            return Err(Error::TooLarge(self.ground + 1));
        }
        let n1 = self.ground + 1;
        let bases = self
            .bases
            .iter()
            .flat_map(|s| s.complement(n1).iter().map(move |j| s.with(j)));
        Matroid::from_bases(n1, bases)
    }

    fn check_basis(&self, tau: Subset) -> Result<()> {
        if self.is_basis(tau) {
            Ok(())
        } else {
            Err(Error::NotABasis(tau.to_string()))
        }
    }

    /// All `i ∉ τ` such that `τ - j + i` is a basis.
    pub fn exchange_neighbors(&self, tau: Subset, j: usize) -> Result<Subset> {
        self.check_basis(tau)?;
        if !tau.contains(j) {
            return Err(Error::NotABasis(format!("element {} is not in {tau}", j + 1)));
        }
        Ok(tau
            .complement(self.ground)
            .iter()
            .filter(|&i| self.is_basis(tau.exchange(j, i)))
            .collect())
    }

    /// Every `j ∈ τ \ O` can be swapped for some `i ∈ O \ τ` keeping a basis.
    pub fn has_basis_exchange_into(&self, tau: Subset, o: Subset) -> Result<bool> {
        self.check_basis(tau)?;
        let targets = o.difference(tau);
        Ok(tau
            .difference(o)
            .iter()
            .all(|j| targets.iter().any(|i| self.is_basis(tau.exchange(j, i)))))
    }

    /// Exhaustive check of the basis-exchange axiom.
    pub fn satisfies_exchange_axiom(&self) -> bool {
        self.bases.iter().all(|&t1| {
            self.bases.iter().all(|&t2| {
                t1.difference(t2).iter().all(|i1| {
                    t2.difference(t1).iter().any(|i2| self.is_basis(t1.exchange(i1, i2)))
                })
            })
        })
    }

    /// Exhaustive check of the symmetric exchange property.
    pub fn satisfies_symmetric_exchange(&self) -> bool {
        self.bases.iter().all(|&t1| {
            self.bases.iter().all(|&t2| {
                t1.difference(t2).iter().all(|i1| {
                    t2.difference(t1).iter().any(|i2| {
                        self.is_basis(t1.exchange(i1, i2)) && self.is_basis(t2.exchange(i2, i1))
                    })
                })
            })
        })
    }
}
