//! Tropical critical points: cone intersections, certified triangulations,
//! closed forms for curves and polygons, and the uniform-case constant.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::model::ModelMatrix;
use crate::subdivision::{
    cell_test, indicator, is_face, regular_triangulation, triangulation_from_lifting, Lifting, Triangulation,
};
use crate::subset::Subset;
use crate::tropical::{tau_operator, TropVector, TropicalData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub q: TropVector,
    pub multiplicity: u64,
    /// Bases whose cones contributed this point.
    pub witnesses: Vec<Subset>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `O(w)` contains a basis of `M(A)`.
    ContainsBasis,
    /// Closed form for a monomial curve.
    Curve,
    /// `M(A)` is uniform and `O(w)` is not a face of `Q_A`.
    UniformNotFace,
    /// `Q_A` is a polygon whose columns are its vertices; certified triangulation.
    Polygon,
    /// A regular triangulation whose simplices all pass the cell test.
    Triangulation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPointSet {
    /// Sorted lexicographically by `q`.
    pub points: Vec<CriticalPoint>,
    pub total_multiplicity: u64,
    pub complete: bool,
    pub method: Method,
    /// The certifying triangulation, when one was used.
    pub triangulation: Option<Triangulation>,
}

impl CriticalPointSet {
    fn new(contributions: Vec<(TropVector, u64, Option<Subset>)>, method: Method) -> CriticalPointSet {
        let mut merged: BTreeMap<TropVector, (u64, Vec<Subset>)> = BTreeMap::new();
        for (q, m, tau) in contributions {
            if m == 0 {
                continue;
            }
            let slot = merged.entry(q).or_default();
            slot.0 += m;
            slot.1.extend(tau);
        }
        let points: Vec<CriticalPoint> = merged
            .into_iter()
            .map(|(q, (multiplicity, mut witnesses))| {
                witnesses.sort();
                CriticalPoint { q, multiplicity, witnesses }
            })
            .collect();
        let total_multiplicity = points.iter().map(|p| p.multiplicity).sum();
        CriticalPointSet { points, total_multiplicity, complete: true, method, triangulation: None }
    }

    fn zero(model: &ModelMatrix, method: Method) -> Result<CriticalPointSet> {
        Ok(CriticalPointSet::new(vec![(TropVector::zeros(model.n()), model.volume()?, None)], method))
    }

    /// `(q, multiplicity)` pairs, convenient for comparisons.
    pub fn pairs(&self) -> Vec<(TropVector, u64)> {
        self.points.iter().map(|p| (p.q.clone(), p.multiplicity)).collect()
    }

    /// The same set with coordinates reordered by `perm` (see [`TropVector::permute`]).
    pub fn permute(&self, perm: &[usize]) -> Vec<(TropVector, u64)> {
        let mut v: Vec<(TropVector, u64)> = self.points.iter().map(|p| (p.q.permute(perm), p.multiplicity)).collect();
        v.sort();
        v
    }
}

/// A simplex of a triangulation whose cone misses `row(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailedSimplex {
    pub tau: Subset,
    pub apex: TropVector,
    /// Indices `i` with `(Aᵀ(A_τᵀ)⁻¹w^(τ)_τ)_i < w^(τ)_i`.
    pub violations: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub triangulation: Triangulation,
    pub failed: Vec<FailedSimplex>,
}

/// Every triangulation tried, with the simplices that failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub attempts: Vec<Attempt>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "no tried triangulation certifies all of its simplices ({} tried)", self.attempts.len())?;
        for (i, a) in self.attempts.iter().enumerate() {
            let simplices: Vec<String> = a.triangulation.simplices.iter().map(ToString::to_string).collect();
            writeln!(f, "  triangulation {}: {{{}}}", i + 1, simplices.join(", "))?;
            for s in &a.failed {
                writeln!(
                    f,
                    "    {} misses row(A): apex {}, violated at {}",
                    s.tau,
                    s.apex,
                    s.violations
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Complete(CriticalPointSet),
    Incomplete(Diagnostic),
}

impl Outcome {
    pub fn complete(self) -> Option<CriticalPointSet> {
        match self {
            Outcome::Complete(s) => Some(s),
            Outcome::Incomplete(_) => None,
        }
    }

    pub fn as_complete(&self) -> Option<&CriticalPointSet> {
        match self {
            Outcome::Complete(s) => Some(s),
            Outcome::Incomplete(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Seed for the random perturbation orders of the triangulation search.
    pub seed: u64,
    /// Upper bound on the liftings tried by the triangulation search.
    pub max_attempts: usize,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions { seed: 0, max_attempts: 48 }
    }
}

fn check_len(model: &ModelMatrix, w: &TropicalData) -> Result<()> {
    if w.len() == model.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("data of length {} for {} columns", w.len(), model.n())))
    }
}

fn intersect(model: &ModelMatrix, w: &TropicalData, tau: Subset) -> Result<std::result::Result<CriticalPoint, FailedSimplex>> {
    let apex = tau_operator(model, tau, w.vector())?;
    let omega: Vec<Rat> = apex.iter().map(|x| -x).collect();
    let test = cell_test(model, tau, &omega)?;
    if !test.in_cell {
        return Ok(Err(FailedSimplex { tau, apex, violations: test.violations }));
    }
    let frame = model.frame(tau)?;
    let tau_elems = tau.to_vec();
    let q: Vec<Rat> = frame
        .coords
        .iter()
        .map(|row| row.iter().zip(&tau_elems).map(|(c, &j)| c * &apex[j]).sum())
        .collect();
    Ok(Ok(CriticalPoint { q: TropVector(q), multiplicity: frame.volume(), witnesses: vec![tau] }))
}

/// The point where `row(A)` meets the cone `C_τ`, if it does.
pub fn cone_intersection(model: &ModelMatrix, w: &TropicalData, tau: Subset) -> Result<Option<CriticalPoint>> {
    check_len(model, w)?;
    Ok(intersect(model, w, tau)?.ok())
}

/// All critical points from a regular triangulation whose simplices each meet
/// `row(A)`; the failing simplices otherwise.
pub fn solve_by_triangulation(
    model: &ModelMatrix,
    w: &TropicalData,
    tri: &Triangulation,
) -> Result<std::result::Result<CriticalPointSet, Vec<FailedSimplex>>> {
    check_len(model, w)?;
    let total = tri.volume(model)?;
    let expected = model.volume()?;
    if total != expected {
        return Err(Error::InvalidData(format!(
            "simplices have total volume {total}, but vol(Q_A) = {expected}"
        )));
    }
    let results: Vec<_> = tri
        .simplices
        .par_iter()
        .map(|&tau| intersect(model, w, tau))
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    let mut failed = Vec::new();
    for r in results {
        match r {
            Ok(p) => points.push((p.q, p.multiplicity, p.witnesses.first().copied())),
            Err(f) => failed.push(f),
        }
    }
    if !failed.is_empty() {
        return Ok(Err(failed));
    }
    let mut set = CriticalPointSet::new(points, Method::Triangulation);
    set.triangulation = Some(tri.clone());
    Ok(Ok(set))
}

fn to_u64(v: &BigInt) -> Result<u64> {
    v.abs().to_u64().ok_or(Error::VolumeOverflow)
}

/// Closed form for `A = (1 … 1; a_1 … a_n)` with distinct `a_i`.
pub fn solve_curve(model: &ModelMatrix, w: &TropicalData) -> Result<CriticalPointSet> {
    check_len(model, w)?;
    let a = model.matrix();
    if model.k() != 2 || !model.has_ones_row() {
        return Err(Error::NotACurve("expected a 2×n matrix whose first row is all ones".into()));
    }
    let n = model.n();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&i, &j| a.get(1, i).cmp(a.get(1, j)));
    let pts: Vec<BigInt> = perm.iter().map(|&i| a.get(1, i).clone()).collect();
    if pts.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::NotACurve("second row has repeated entries".into()));
    }
    let ws = w.permute(&perm);
    let o = ws.zero_set();
    let zero = TropVector::zeros(n);
    let unpermute = |v: Vec<Rat>| {
        let mut out = vec![Rat::zero(); n];
        for (pos, x) in v.into_iter().enumerate() {
            out[perm[pos]] = x;
        }
        TropVector(out)
    };
    let witness = |p: usize, q: usize| Some(Subset::EMPTY.with(perm[p]).with(perm[q]));
    let contributions = match (o == Subset::singleton(0), o == Subset::singleton(n - 1), ws.min_positive()) {
        (true, _, Some(wmin)) => {
            let d = Rat::from(&(&pts[1] - &pts[0]));
            let q = pts.iter().map(|p| &wmin * &(Rat::from(&(p - &pts[0])) / &d)).collect();
            vec![
                (unpermute(q), to_u64(&(&pts[1] - &pts[0]))?, witness(0, 1)),
                (zero, to_u64(&(&pts[n - 1] - &pts[1]))?, None),
            ]
        }
        (_, true, Some(wmin)) => {
            let d = Rat::from(&(&pts[n - 1] - &pts[n - 2]));
            let q = pts.iter().map(|p| &wmin * &(Rat::from(&(&pts[n - 1] - p)) / &d)).collect();
            vec![
                (unpermute(q), to_u64(&(&pts[n - 1] - &pts[n - 2]))?, witness(n - 2, n - 1)),
                (zero, to_u64(&(&pts[n - 2] - &pts[0]))?, None),
            ]
        }
        _ => vec![(zero, to_u64(&(&pts[n - 1] - &pts[0]))?, None)],
    };
    Ok(CriticalPointSet::new(contributions, Method::Curve))
}

/// One term `c(A, O, Δ, τ, i)` of the uniform-case constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantTerm {
    pub tau: Subset,
    pub i: usize,
    pub positive_sum: Rat,
    pub negative_sum: Rat,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformConstant {
    /// Minimum of the terms; `None` when no simplex containing `O` leaves an index out.
    pub value: Option<Rat>,
    pub triangulation: Triangulation,
    pub terms: Vec<ConstantTerm>,
}

impl UniformConstant {
    /// Do at least `k` entries of `w` satisfy `w_j ≤ c · min{w_i > 0}`?
    pub fn condition_holds(&self, w: &TropicalData, k: usize) -> bool {
        let Some(wmin) = w.min_positive() else {
            return true;
        };
        let Some(c) = &self.value else {
            return true;
        };
        let bound = c * &wmin;
        w.vector().iter().filter(|x| **x <= bound).count() >= k
    }
}

/// The spread constant for a uniform `M(A)` and a face `O`, over the
/// ε-perturbed triangulation refining `Δ_{e_O}`.
pub fn uniform_constant(model: &ModelMatrix, o: Subset) -> Result<UniformConstant> {
    if !model.matroid().is_uniform() {
        return Err(Error::NotUniform);
    }
    if o.is_empty() || !o.is_subset(Subset::full(model.n())) || !is_face(model, o) {
        return Err(Error::NotAFace(o.to_string()));
    }
    let n = model.n();
    let triangulation = regular_triangulation(model, &indicator(n, o));
    let mut terms = Vec::new();
    for &tau in triangulation.simplices.iter().filter(|t| o.is_subset(**t)) {
        let frame = model.frame(tau)?;
        let positions: Vec<(usize, usize)> = tau.iter().enumerate().collect();
        for i in tau.complement(n).iter() {
            let (mut pos, mut neg) = (Rat::zero(), Rat::zero());
            for &(p, j) in &positions {
                if o.contains(j) {
                    continue;
                }
                let c = &frame.coords[i][p];
                if c.is_positive() {
                    pos += c;
                } else {
                    neg += c;
                }
            }
            let value = &pos / &(Rat::one() - &neg);
            terms.push(ConstantTerm { tau, i, positive_sum: pos, negative_sum: neg, value });
        }
    }
    let value = terms.iter().map(|t| t.value.clone()).min();
    Ok(UniformConstant { value, triangulation, terms })
}

/// Are the columns the vertices of a convex polygon (all of them extreme)?
fn is_convex_polygon(model: &ModelMatrix) -> bool {
    model.k() == 3
        && model.has_ones_row()
        && model.matroid().is_uniform()
        && (0..model.n()).all(|i| is_face(model, Subset::singleton(i)))
}

/// The liftings tried by the triangulation search, most promising first.
fn candidate_liftings(model: &ModelMatrix, w: &TropicalData, options: &SolveOptions) -> Vec<Lifting> {
    let n = model.n();
    let e_o = indicator(n, w.zero_set());
    let wv = w.vector().as_slice().to_vec();
    let neg_w: Vec<Rat> = wv.iter().map(|x| -x).collect();
    let level_sets = vec![
        vec![e_o.clone()],
        vec![e_o.clone(), wv.clone()],
        vec![e_o.clone(), neg_w.clone()],
        vec![wv],
        vec![neg_w],
        vec![vec![Rat::zero(); n]],
    ];
    let mut orders: Vec<Vec<usize>> = vec![(0..n).collect(), (0..n).rev().collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let per_order = level_sets.len() * 2;
    while orders.len() * per_order < options.max_attempts {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        orders.push(p);
    }
    let mut out = Vec::new();
    for order in &orders {
        for levels in &level_sets {
            for negate in [false, true] {
                out.push(Lifting { levels: levels.clone(), order: order.clone(), negate });
            }
        }
    }
    out.truncate(options.max_attempts.max(1));
    out
}

/// Search regular triangulations for one that certifies every simplex.
pub fn search_triangulations(model: &ModelMatrix, w: &TropicalData, options: &SolveOptions) -> Result<Outcome> {
    let mut seen: HashSet<Vec<Subset>> = HashSet::new();
    let mut attempts = Vec::new();
    for lifting in candidate_liftings(model, w, options) {
        let tri = triangulation_from_lifting(model, &lifting);
        if !seen.insert(tri.simplices.clone()) {
            continue;
        }
        match solve_by_triangulation(model, w, &tri)? {
            Ok(set) => return Ok(Outcome::Complete(set)),
            Err(failed) => attempts.push(Attempt { triangulation: tri, failed }),
        }
    }
    Ok(Outcome::Incomplete(Diagnostic { attempts }))
}

/// All tropical critical points of `(A, w)`, or a diagnostic when no tried
/// triangulation certifies.
pub fn solve(model: &ModelMatrix, w: &TropicalData, options: &SolveOptions) -> Result<Outcome> {
    check_len(model, w)?;
    let o = w.zero_set();
    if model.matroid().contains_basis(o) {
        return Ok(Outcome::Complete(CriticalPointSet::zero(model, Method::ContainsBasis)?));
    }
    if model.k() == 2 && model.has_ones_row() {
        if let Ok(set) = solve_curve(model, w) {
            return Ok(Outcome::Complete(set));
        }
    }
    if model.matroid().is_uniform() && !is_face(model, o) {
        return Ok(Outcome::Complete(CriticalPointSet::zero(model, Method::UniformNotFace)?));
    }
    if is_convex_polygon(model) {
        let tri = regular_triangulation(model, &indicator(model.n(), o));
        if let Ok(mut set) = solve_by_triangulation(model, w, &tri)? {
            set.method = Method::Polygon;
            return Ok(Outcome::Complete(set));
        }
    }
    search_triangulations(model, w, options)
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

    fn data(v: &[i64]) -> TropicalData {
        TropicalData::from_ints(v).unwrap()
    }

    fn solved(model: &ModelMatrix, w: &[i64]) -> CriticalPointSet {
        solve(model, &data(w), &SolveOptions::default()).unwrap().complete().expect("certified")
    }

    #[test]
    fn hirzebruch_cones() {
        let m = hirzebruch();
        let w = data(&[6, 8, 7, 6, 4, 0]);
        let p = cone_intersection(&m, &w, s(&[2, 5, 6])).unwrap().unwrap();
        assert_eq!(p.q, tv(&[10, 6, 12, 8, 4, 0]));
        assert_eq!(p.multiplicity, 1);
        assert_eq!(cone_intersection(&m, &w, s(&[1, 2, 6])).unwrap(), None);
    }

    #[test]
    fn hirzebruch_given_triangulation() {
        let m = hirzebruch();
        let tri = Triangulation::from_simplices(vec![s(&[1, 2, 3]), s(&[2, 3, 4]), s(&[2, 4, 5]), s(&[2, 5, 6])]);
        let set = solve_by_triangulation(&m, &data(&[6, 8, 7, 6, 4, 0]), &tri).unwrap().unwrap();
        assert_eq!(
            set.pairs(),
            vec![(tv(&[0, 0, 0, 0, 0, 0]), 1), (tv(&[6, 6, 0, 0, 0, 0]), 2), (tv(&[10, 6, 12, 8, 4, 0]), 1)]
        );
        assert_eq!(set.points[1].witnesses, vec![s(&[2, 3, 4]), s(&[2, 4, 5])]);
        let full = solved(&m, &[6, 8, 7, 6, 4, 0]);
        assert_eq!(full.pairs(), set.pairs());
    }

    #[test]
    fn binary_and_pentagon() {
        assert_eq!(solved(&binary(), &[0, 2, 1, 4]).pairs(), vec![(tv(&[0, 0, 0, 0]), 1), (tv(&[0, 2, 1, 3]), 1)]);
        let p = pentagon();
        let set = solved(&p, &[0, 4, 10, 6, 5]);
        assert_eq!(set.pairs(), vec![(tv(&[0, 0, 0, 0, 0]), 4), (tv(&[0, 4, 13, 14, 5]), 1)]);
        assert_eq!(set.method, Method::Polygon);
        let set = solved(&p, &[0, 0, 7, 3, 5]);
        assert_eq!(set.pairs(), vec![(tv(&[0, 0, 0, 0, 0]), 4), (tv(&[0, 0, 3, 6, 3]), 1)]);
    }

    #[test]
    fn prism() {
        let set = solved(&super::super::model::fixtures::prism(), &[0, 1, 1, 1, 2, 4]);
        assert_eq!(
            set.pairs(),
            vec![(tv(&[0, 0, 1, 0, 0, 1]), 1), (tv(&[0, 1, 0, 0, 1, 0]), 1), (tv(&[0, 1, 1, 1, 2, 2]), 1)]
        );
        assert_eq!(set.total_multiplicity, 3);
    }

    #[test]
    fn zero_set_with_a_basis() {
        let set = solved(&hirzebruch(), &[0, 0, 0, 5, 1, 2]);
        assert_eq!(set.method, Method::ContainsBasis);
        assert_eq!(set.pairs(), vec![(tv(&[0; 6]), 4)]);
        let set = solved(&hirzebruch(), &[0; 6]);
        assert_eq!(set.pairs(), vec![(tv(&[0; 6]), 4)]);
    }

    #[test]
    fn curves() {
        let m = curve(&[0, 1, 3]);
        let set = solve_curve(&m, &data(&[0, 2, 5])).unwrap();
        assert_eq!(set.pairs(), vec![(tv(&[0, 0, 0]), 2), (tv(&[0, 2, 6]), 1)]);
        let set = solve_curve(&m, &data(&[4, 2, 0])).unwrap();
        // w_min = 2, a = (0,1,3): 2·((3-0)/2, (3-1)/2, 0) = (3, 2, 0)
        assert_eq!(set.pairs(), vec![(tv(&[0, 0, 0]), 1), (tv(&[3, 2, 0]), 2)]);
        let set = solve_curve(&m, &data(&[4, 0, 1])).unwrap();
        assert_eq!(set.pairs(), vec![(tv(&[0, 0, 0]), 3)]);
        // unsorted columns are handled by permuting
        let m = curve(&[3, 0, 1]);
        let set = solve_curve(&m, &data(&[5, 0, 2])).unwrap();
        assert_eq!(set.pairs(), vec![(tv(&[0, 0, 0]), 2), (tv(&[6, 0, 2]), 1)]);
        assert!(matches!(solve_curve(&curve(&[0, 1, 1]), &data(&[0, 1, 1])), Err(Error::NotACurve(_))));
        assert!(matches!(solve_curve(&binary(), &data(&[0, 1, 1, 1])), Err(Error::NotACurve(_))));
    }

    #[test]
    fn curve_agrees_with_triangulation() {
        let m = curve(&[0, 1, 3]);
        let w = data(&[0, 2, 5]);
        let by_tri = search_triangulations(&m, &w, &SolveOptions::default()).unwrap().complete().unwrap();
        assert_eq!(by_tri.pairs(), solve_curve(&m, &w).unwrap().pairs());
    }

    #[test]
    fn constants() {
        let c = uniform_constant(&pentagon(), s(&[1])).unwrap();
        assert_eq!(c.value, Some(Rat::from(3)));
        let c = uniform_constant(&binary(), s(&[1])).unwrap();
        assert_eq!(c.value, Some(Rat::from(2)));
        assert!(c.condition_holds(&data(&[0, 2, 1, 4]), 3));
        assert!(!c.condition_holds(&data(&[0, 5, 1, 4]), 3));
        assert!(matches!(uniform_constant(&hirzebruch(), s(&[1])), Err(Error::NotUniform)));
        assert!(matches!(uniform_constant(&binary(), s(&[1, 4])), Err(Error::NotAFace(_))));
        let edge = uniform_constant(&pentagon(), s(&[1, 2])).unwrap();
        assert!(edge.value.unwrap() >= Rat::one());
    }

    #[test]
    fn uniform_not_face_gives_zero() {
        let set = solved(&binary(), &[0, 3, 2, 0]);
        assert_eq!(set.method, Method::UniformNotFace);
        assert_eq!(set.pairs(), vec![(tv(&[0; 4]), 2)]);
    }

    #[test]
    fn bad_triangulation_volume() {
        let tri = Triangulation::from_simplices(vec![s(&[1, 2, 3])]);
        assert!(matches!(
            solve_by_triangulation(&binary(), &data(&[0, 2, 1, 4]), &tri),
            Err(Error::InvalidData(_))
        ));
    }
}
