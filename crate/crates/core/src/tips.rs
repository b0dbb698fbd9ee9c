//! Tropical iterative proportional scaling.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::critical::CriticalPointSet;
use crate::error::{Error, Result};
use crate::linalg::{rank, rank_rat, IntMatrix, Rat};
use crate::model::ModelMatrix;
use crate::tropical::{TropVector, TropicalData};

/// A nonnegative integer matrix whose columns all sum to `α > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingModel {
    pub a: IntMatrix,
    pub alpha: BigInt,
}

impl ScalingModel {
    pub fn new(a: IntMatrix) -> Result<ScalingModel> {
        if a.cols() == 0 {
            return Err(Error::InvalidData("scaling matrix has no columns".into()));
        }
        if (0..a.rows()).any(|r| a.row(r).iter().any(Signed::is_negative)) {
            return Err(Error::InvalidData("scaling matrix has a negative entry".into()));
        }
        if let Some(r) = (0..a.rows()).find(|&r| a.row(r).iter().all(Zero::is_zero)) {
            return Err(Error::InvalidData(format!("scaling matrix row {} is zero", r + 1)));
        }
        let sums: Vec<BigInt> = (0..a.cols()).map(|c| a.column(c).iter().sum()).collect();
        if sums.iter().any(|s| *s != sums[0]) {
            return Err(Error::InvalidData("column sums of the scaling matrix differ".into()));
        }
        let alpha = sums[0].clone();
        Ok(ScalingModel { a, alpha })
    }

    /// Use `a` for `model`, checking that both have the same row space.
    pub fn for_model(model: &ModelMatrix, a: IntMatrix) -> Result<ScalingModel> {
        let s = ScalingModel::new(a)?;
        if !same_row_space(model.matrix(), &s.a) {
            return Err(Error::InvalidData("scaling matrix has a different row space".into()));
        }
        Ok(s)
    }

    pub fn k(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `r_i = min{x_j : a_ij ≠ 0}`
    pub fn row_minima(&self, x: &[Rat]) -> Vec<Rat> {
        (0..self.k())
            .map(|r| {
                self.a
                    .row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(_, v)| v.clone())
                    .min()
                    .expect("rows are nonzero")
            })
            .collect()
    }
}

pub fn same_row_space(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    let ra = rank(a);
    ra == rank(b) && a.stack(b).map(|m| rank(&m) == ra).unwrap_or(false)
}

/// A nonnegative matrix with constant column sums and the same row space.
///
/// Already valid matrices are returned unchanged. Otherwise `k−1` rows
/// independent modulo `(1,…,1)` are shifted to have minimum zero and a first
/// row `α·1 − (column sums)` is added, where `α` is the largest column sum.
pub fn reparametrize(model: &ModelMatrix) -> Result<ScalingModel> {
    let a = model.matrix();
    if let Ok(s) = ScalingModel::new(a.clone()) {
        return Ok(s);
    }
    let n = a.cols();
    let mut basis: Vec<Vec<Rat>> = vec![vec![Rat::one(); n]];
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    for r in 0..a.rows() {
        let row: Vec<Rat> = a.row(r).iter().map(Rat::from).collect();
        basis.push(row);
        if rank_rat(&basis) == basis.len() {
            let min = a.row(r).iter().min().expect("nonempty row").clone();
            chosen.push(a.row(r).iter().map(|x| x - &min).collect());
        } else {
            basis.pop();
        }
    }
    if basis.len() != a.rows() {
        return Err(Error::NoAllOnes);
    }
    let sums: Vec<BigInt> = (0..n).map(|c| chosen.iter().map(|row| &row[c]).sum()).collect();
    let alpha = sums.iter().max().expect("nonempty").clone();
    let mut rows = vec![sums.iter().map(|s| &alpha - s).collect::<Vec<BigInt>>()];
    rows.extend(chosen);
    let out = IntMatrix::from_rows(&rows)?;
    if !same_row_space(a, &out) {
        return Err(Error::NoAllOnes);
    }
    ScalingModel::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TipsState {
    pub t: usize,
    pub q: TropVector,
    /// `r̂ᵗ_i = min{qᵗ_j : a_ij ≠ 0}`
    pub r_hat: Vec<Rat>,
}

impl TipsState {
    pub fn initial(s: &ScalingModel, q0: TropVector) -> TipsState {
        let r_hat = s.row_minima(q0.as_slice());
        TipsState { t: 0, q: q0, r_hat }
    }
}

/// `r_i = min{w_j : a_ij ≠ 0}`
pub fn target(s: &ScalingModel, w: &TropicalData) -> Vec<Rat> {
    s.row_minima(w.vector().as_slice())
}

/// `q⁺ = q + α⁻¹Aᵀ(r − r̂)`
pub fn tips_step(s: &ScalingModel, r: &[Rat], state: &TipsState) -> TipsState {
    let diff: Vec<Rat> = r.iter().zip(&state.r_hat).map(|(a, b)| a - b).collect();
    let alpha = Rat::from(&s.alpha);
    let update = s.a.tmul_vec(&diff);
    let q: Vec<Rat> = state.q.iter().zip(&update).map(|(x, u)| x + &(u / &alpha)).collect();
    let r_hat = s.row_minima(&q);
    TipsState { t: state.t + 1, q: TropVector(q), r_hat }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TipsStatus {
    /// `r̂ᵗ = r` was reached exactly.
    Terminated,
    /// Steps shrink geometrically; the limit was extrapolated exactly.
    Converging,
    /// Neither; the run stopped at the tolerance or the iteration cap.
    Undecided,
}

#[derive(Clone, Debug)]
pub struct TipsOptions {
    pub max_iter: usize,
    /// Stop (undecided) once `‖Δq‖∞ < tol`, when no geometric pattern is found.
    pub tol: Option<Rat>,
    /// Detect geometric decay and extrapolate the limit.
    pub extrapolate: bool,
}

impl Default for TipsOptions {
    fn default() -> TipsOptions {
        TipsOptions { max_iter: 1000, tol: None, extrapolate: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalitySource {
    /// Compared against a full list of critical points.
    Solve,
    /// Only the fixed-point condition `r̂ = r` was checked.
    FixedPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TipsReport {
    pub status: TipsStatus,
    pub steps: usize,
    /// `q⁰, q¹, …` up to the last computed iterate.
    pub trajectory: Vec<TropVector>,
    /// Final point: the exact endpoint, the extrapolated limit or the last iterate.
    pub endpoint: TropVector,
    /// Ratio of consecutive steps, when geometric decay was detected.
    pub ratio: Option<Rat>,
    pub target: Vec<Rat>,
    pub is_critical: bool,
    pub criticality_source: CriticalitySource,
}

/// Is `d1 = ρ·d0` for some rational `ρ` (with `d0 ≠ 0`)?
fn ratio_of(d0: &TropVector, d1: &TropVector) -> Option<Rat> {
    let p = d0.iter().position(|x| !x.is_zero())?;
    let rho = &d1[p] / &d0[p];
    d0.iter().zip(d1.iter()).all(|(a, b)| &(a * &rho) == b).then_some(rho)
}

/// Run tIPS from `q0`. When `reference` holds the complete critical points the
/// verdict compares against them; otherwise only `r̂ = r` is checked.
pub fn tips_run(
    s: &ScalingModel,
    w: &TropicalData,
    q0: TropVector,
    options: &TipsOptions,
    reference: Option<&CriticalPointSet>,
) -> Result<TipsReport> {
    if w.len() != s.n() || q0.len() != s.n() {
        return Err(Error::DimensionMismatch("data, start vector and scaling matrix differ in length".into()));
    }
    if options.max_iter == 0 {
        return Err(Error::InvalidData("max_iter must be at least 1".into()));
    }
    let r = target(s, w);
    let mut state = TipsState::initial(s, q0);
    let mut trajectory = vec![state.q.clone()];
    let mut steps: Vec<TropVector> = Vec::new();
    let mut status = TipsStatus::Undecided;
    let mut endpoint = None;
    let mut ratio = None;
    while state.t < options.max_iter {
        if state.r_hat == r {
            status = TipsStatus::Terminated;
            break;
        }
        let next = tips_step(s, &r, &state);
        let d = next.q.sub(&state.q);
        state = next;
        trajectory.push(state.q.clone());
        steps.push(d);
        if options.extrapolate && steps.len() >= 3 {
            let m = steps.len();
            if let (Some(r1), Some(r2)) = (ratio_of(&steps[m - 3], &steps[m - 2]), ratio_of(&steps[m - 2], &steps[m - 1])) {
                if r1 == r2 && r1.is_positive() && r1 < Rat::one() {
                    // q_m + d_m/(1-ρ), with d_m the step leaving the last iterate
                    let next_step = steps[m - 1].scale(&r1);
                    let limit = state.q.add(&next_step.scale(&(Rat::one() - &r1).recip()));
                    // a limit of the continuous iteration map is one of its fixed points
                    if s.row_minima(limit.as_slice()) == r {
                        status = TipsStatus::Converging;
                        endpoint = Some(limit);
                        ratio = Some(r1);
                        break;
                    }
                }
            }
        }
        if let (Some(tol), Some(d)) = (&options.tol, steps.last()) {
            if &d.max_abs() < tol {
                break;
            }
        }
    }
    if status == TipsStatus::Undecided && state.r_hat == r {
        status = TipsStatus::Terminated;
    }
    let endpoint = endpoint.unwrap_or_else(|| state.q.clone());
    let (is_critical, criticality_source) = match reference.filter(|set| set.complete) {
        Some(set) => (
            status != TipsStatus::Undecided && set.points.iter().any(|p| p.q == endpoint),
            CriticalitySource::Solve,
        ),
        None => (status != TipsStatus::Undecided && s.row_minima(endpoint.as_slice()) == r, CriticalitySource::FixedPoint),
    };
    Ok(TipsReport {
        status,
        steps: state.t,
        trajectory,
        endpoint,
        ratio,
        target: r,
        is_critical,
        criticality_source,
    })
}
