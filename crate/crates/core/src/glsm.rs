//! Vacuum equations of the abelian gauged linear sigma model.
//!
//! With `σ = 0`, `W = 0` and equal gauge couplings, a vacuum is a zero of
//! the D-term `μ(φ) = Q·s − r` (`s_i = |φ_i|^2`) modulo the gauge group.
//! Complexified orbits are explored through the Kempf–Ness function
//! `f(t) = Σ_i s_i e^{2⟨q_i,t⟩} − 2⟨r,t⟩`, whose gradient is
//! `2(Q·s(t) − r)`, and orbits meet `μ^{-1}(0)` iff `r` lies in the relative
//! interior of `cone{q_i : s_i ≠ 0}`. That cone test is done exactly and is
//! the oracle the numerical solver is checked against.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::{CoxPresentation, MAX_SUBSET_RAYS};
use crate::delta::Multidegree;
use crate::fan::{walls, Fan, FanError};
use crate::lattice::{solve_integer, to_rational, IntMatrix};
use crate::lp::{cone_combination, find_point, Constraint, Relation};

pub const ARMIJO: f64 = 1e-4;
pub const MAX_HALVINGS: usize = 60;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlsmError {
    #[error("{what}: expected length {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("amplitude {index} is negative")]
    NegativeAmplitude { index: usize },
    #[error("support index {0} out of range")]
    SupportIndex(usize),
    #[error("tolerance must be positive and finite")]
    InvalidTol,
    #[error("{fields} fields exceeds the subset-search limit of {limit}")]
    TooManyFields { fields: usize, limit: usize },
    #[error("degree is not admissible")]
    Inadmissible,
    #[error("class {0:?} has no integer lift to divisors")]
    NoLift(Vec<BigInt>),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

/// Which branch of the `σ` equations is in force. Only `σ = 0` occurs in
/// the geometric phase, so it is the only branch modeled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaBranch {
    #[default]
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLSMProblem {
    /// `k × r`; column `i` is the charge `q_i` of field `φ_i`.
    pub charges: IntMatrix,
    /// FI parameters `r_a`.
    pub fi: Vec<BigRational>,
    /// `s_i = |φ_i|^2`.
    pub amplitudes: Vec<BigRational>,
    pub sigma: SigmaBranch,
}

impl GLSMProblem {
    pub fn new(charges: IntMatrix, fi: Vec<BigRational>, amplitudes: Vec<BigRational>) -> Result<Self, GlsmError> {
        if fi.len() != charges.rows() {
            return Err(GlsmError::Dimension {
                what: "fi",
                expected: charges.rows(),
                found: fi.len(),
            });
        }
        if amplitudes.len() != charges.cols() {
            return Err(GlsmError::Dimension {
                what: "amplitudes",
                expected: charges.cols(),
                found: amplitudes.len(),
            });
        }
        if let Some(index) = amplitudes.iter().position(Signed::is_negative) {
            return Err(GlsmError::NegativeAmplitude { index });
        }
        Ok(Self {
            charges,
            fi,
            amplitudes,
            sigma: SigmaBranch::Zero,
        })
    }

    pub fn num_fields(&self) -> usize {
        self.charges.cols()
    }

    pub fn rank(&self) -> usize {
        self.charges.rows()
    }

    /// Fields with `s_i ≠ 0`.
    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.num_fields()).filter(|&i| !self.amplitudes[i].is_zero()).collect()
    }
}

/// `Q·s − r`, exactly.
pub fn moment_map(p: &GLSMProblem) -> Vec<BigRational> {
    (0..p.rank())
        .map(|a| {
            let qs: BigRational = (0..p.num_fields())
                .map(|i| to_rational(&p.charges[(a, i)]) * &p.amplitudes[i])
                .sum();
            qs - &p.fi[a]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    InteriorStable,
    BoundaryMarginal,
    Unstable,
}

fn charge_columns(q: &IntMatrix, support: &BTreeSet<usize>) -> Vec<Vec<BigRational>> {
    support
        .iter()
        .map(|&i| q.column(i).iter().map(to_rational).collect())
        .collect()
}

/// Position of `r` relative to `cone{q_i : i ∈ support}`. The relative
/// interior of a finitely generated cone is the set of strictly positive
/// combinations of its generators, so both tests are single LPs.
pub fn semistable(q: &IntMatrix, support: &BTreeSet<usize>, r: &[BigRational]) -> Result<Stability, GlsmError> {
    if let Some(&bad) = support.iter().find(|&&i| i >= q.cols()) {
        return Err(GlsmError::SupportIndex(bad));
    }
    if r.len() != q.rows() {
        return Err(GlsmError::Dimension {
            what: "fi",
            expected: q.rows(),
            found: r.len(),
        });
    }
    let gens = charge_columns(q, support);
    Ok(if cone_combination(&gens, r, true).is_some() {
        Stability::InteriorStable
    } else if cone_combination(&gens, r, false).is_some() {
        Stability::BoundaryMarginal
    } else {
        Stability::Unstable
    })
}

/// A direction `u` certifying `r ∉ relint cone{q_i}`: either
/// `⟨q_i,u⟩ ≤ 0` for all `i` with `⟨r,u⟩ > 0` (outside the cone, `f`
/// decreases without bound along `u`), or `⟨q_i,u⟩ ≤ 0`, `⟨r,u⟩ ≥ 0` and
/// `Σ⟨q_i,u⟩ < 0` (on the boundary, the infimum is not attained).
/// The second flag is true for the boundary kind. Independent of
/// [`semistable`], which works in the primal.
pub fn recession_certificate(gens: &[Vec<BigRational>], r: &[BigRational]) -> Option<(Vec<BigRational>, bool)> {
    let k = r.len();
    let zero = BigRational::zero;
    let mut base: Vec<Constraint> = gens.iter().map(|g| Constraint::new(g.clone(), Relation::Le, zero())).collect();

    let mut outside = base.clone();
    outside.push(Constraint::gt(r.to_vec(), zero()));
    // the cone condition is homogeneous; normalize to keep witnesses small
    let mut bounded = outside.clone();
    bounded.push(Constraint::new(r.to_vec(), Relation::Le, BigRational::one()));
    if let Some(u) = find_point(k, &bounded) {
        return Some((u, false));
    }

    base.push(Constraint::ge(r.to_vec(), zero()));
    let sum: Vec<BigRational> = (0..k).map(|a| gens.iter().map(|g| g[a].clone()).sum()).collect();
    base.push(Constraint::new(sum.clone(), Relation::Lt, zero()));
    base.push(Constraint::ge(sum, -BigRational::one()));
    find_point(k, &base).map(|u| (u, true))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolveStatus {
    Converged {
        t: Vec<f64>,
    },
    Unstable {
        #[serde(serialize_with = "crate::json::serialize_rational_vec")]
        direction: Vec<BigRational>,
        /// `r` is on the boundary of the cone rather than outside it.
        boundary: bool,
    },
    IterationLimit {
        t: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    #[serde(flatten)]
    pub status: SolveStatus,
    /// `‖∇f‖_∞` at the returned point (at `t = 0` when unstable).
    pub gradient_norm: f64,
    pub iterations: usize,
}

impl SolveReport {
    pub fn converged(&self) -> Option<&[f64]> {
        match &self.status {
            SolveStatus::Converged { t } => Some(t),
            _ => None,
        }
    }
}

/// Floating-point view of a problem restricted to its support.
struct Objective {
    q: Vec<Vec<f64>>,
    s: Vec<f64>,
    r: Vec<f64>,
}

impl Objective {
    fn new(p: &GLSMProblem) -> Self {
        let support = p.support();
        let to_f = |x: &BigRational| x.to_f64().expect("finite rational");
        Self {
            q: support
                .iter()
                .map(|&i| p.charges.column(i).iter().map(|x| x.to_f64().expect("small charge")).collect())
                .collect(),
            s: support.iter().map(|&i| to_f(&p.amplitudes[i])).collect(),
            r: p.fi.iter().map(to_f).collect(),
        }
    }

    fn weights(&self, t: &[f64]) -> Vec<f64> {
        self.q
            .iter()
            .zip(&self.s)
            .map(|(q, s)| s * (2.0 * dot(q, t)).exp())
            .collect()
    }

    fn value(&self, t: &[f64]) -> f64 {
        self.weights(t).iter().sum::<f64>() - 2.0 * dot(&self.r, t)
    }

    /// `Q·s(t) − r`.
    fn residual(&self, t: &[f64]) -> Vec<f64> {
        let w = self.weights(t);
        (0..self.r.len())
            .map(|a| self.q.iter().zip(&w).map(|(q, w)| w * q[a]).sum::<f64>() - self.r[a])
            .collect()
    }

    fn gradient(&self, t: &[f64]) -> Vec<f64> {
        self.residual(t).into_iter().map(|x| 2.0 * x).collect()
    }

    fn hessian(&self, t: &[f64]) -> DMatrix<f64> {
        let k = self.r.len();
        let mut h = DMatrix::zeros(k, k);
        for (q, w) in self.q.iter().zip(self.weights(t)) {
            for a in 0..k {
                for b in 0..k {
                    h[(a, b)] += 4.0 * w * q[a] * q[b];
                }
            }
        }
        h
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `f(t)` in floating point.
pub fn kempf_ness_value(p: &GLSMProblem, t: &[f64]) -> f64 {
    Objective::new(p).value(t)
}

/// `∇f(t) = 2(Q·s(t) − r)`.
pub fn kempf_ness_gradient(p: &GLSMProblem, t: &[f64]) -> Vec<f64> {
    Objective::new(p).gradient(t)
}

/// `Q·s(t) − r` with `s_i(t) = s_i e^{2⟨q_i,t⟩}`.
pub fn moment_map_at(p: &GLSMProblem, t: &[f64]) -> Vec<f64> {
    Objective::new(p).residual(t)
}

/// Orthonormal basis (as columns) of the span of the supported charges.
/// The rank is decided exactly by rational Gram–Schmidt.
fn span_basis(gens: &[Vec<BigRational>], k: usize) -> DMatrix<f64> {
    let mut ortho: Vec<Vec<BigRational>> = Vec::new();
    for g in gens {
        let mut v = g.clone();
        for o in &ortho {
            let num: BigRational = v.iter().zip(o).map(|(a, b)| a * b).sum();
            let den: BigRational = o.iter().map(|x| x * x).sum();
            let c = num / den;
            for (vi, oi) in v.iter_mut().zip(o) {
                *vi -= &c * oi;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            ortho.push(v);
        }
    }
    let mut w = DMatrix::zeros(k, ortho.len());
    for (j, o) in ortho.iter().enumerate() {
        let col: Vec<f64> = o.iter().map(|x| x.to_f64().expect("finite")).collect();
        let norm = dot(&col, &col).sqrt();
        for a in 0..k {
            w[(a, j)] = col[a] / norm;
        }
    }
    w
}

/// Minimizes `f` by damped Newton over the span of the supported charges
/// (`f` is constant in the orthogonal directions once `r` is in that span).
///
/// Exact certificates decide instability first, so a run that reaches the
/// Newton loop has an attained minimum; `IterationLimit` then only means
/// the iteration budget or the line search gave out.
pub fn kempf_ness_solve(p: &GLSMProblem, tol: f64, max_iter: usize) -> Result<SolveReport, GlsmError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(GlsmError::InvalidTol);
    }
    let k = p.rank();
    let obj = Objective::new(p);
    let zero_t = vec![0.0; k];
    let gens = charge_columns(&p.charges, &p.support());
    if let Some((direction, boundary)) = recession_certificate(&gens, &p.fi) {
        return Ok(SolveReport {
            gradient_norm: inf_norm(&obj.gradient(&zero_t)),
            status: SolveStatus::Unstable { direction, boundary },
            iterations: 0,
        });
    }

    let w = span_basis(&gens, k);
    let mut t = zero_t;
    let mut fval = obj.value(&t);
    let mut grad = obj.gradient(&t);
    for iter in 0..=max_iter {
        let gnorm = inf_norm(&grad);
        if gnorm < tol {
            return Ok(SolveReport {
                status: SolveStatus::Converged { t },
                gradient_norm: gnorm,
                iterations: iter,
            });
        }
        if iter == max_iter {
            break;
        }
        let g_y = w.transpose() * DVector::from_column_slice(&grad);
        let h_y = w.transpose() * obj.hessian(&t) * &w;
        let step_y = match h_y.clone().cholesky() {
            Some(ch) => -ch.solve(&g_y),
            None => -&g_y,
        };
        let step: Vec<f64> = (&w * &step_y).iter().copied().collect();
        let slope = dot(&grad, &step);

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<f64> = t.iter().zip(&step).map(|(x, d)| x + alpha * d).collect();
            let fc = obj.value(&cand);
            if fc.is_finite() {
                let gc = obj.gradient(&cand);
                let armijo = fc <= fval + ARMIJO * alpha * slope;
                // Near the minimum f stalls at roundoff level while the
                // gradient keeps shrinking; accept such steps too.
                let flat = (fc - fval).abs() <= 8.0 * f64::EPSILON * fval.abs().max(1.0)
                    && inf_norm(&gc) < gnorm;
                if armijo || flat {
                    accepted = Some((cand, fc, gc));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((cand, fc, gc)) => {
                t = cand;
                fval = fc;
                grad = gc;
            }
            None => {
                return Ok(SolveReport {
                    gradient_norm: gnorm,
                    status: SolveStatus::IterationLimit { t },
                    iterations: iter,
                });
            }
        }
    }
    Ok(SolveReport {
        gradient_norm: inf_norm(&grad),
        status: SolveStatus::IterationLimit { t },
        iterations: max_iter,
    })
}

/// Minimal coordinate zero-sets `Z` whose complement is unstable at `r`,
/// sorted lexicographically. Instability is inherited by supersets, so
/// sets are scanned by size and supersets of found ones are skipped.
pub fn unstable_supports(q: &IntMatrix, r: &[BigRational], max_rays: usize) -> Result<Vec<Vec<usize>>, GlsmError> {
    let n = q.cols();
    let limit = max_rays.min(MAX_SUBSET_RAYS);
    if n > limit {
        return Err(GlsmError::TooManyFields { fields: n, limit });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut masks: Vec<u32> = (0..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut found: Vec<u32> = Vec::new();
    for z in masks {
        if found.iter().any(|&f| f & !z == 0) {
            continue;
        }
        let complement: BTreeSet<usize> = (0..n).filter(|&i| z & (1 << i) == 0).collect();
        if semistable(q, &complement, r)? == Stability::Unstable {
            found.push(z);
        }
    }
    let mut out: Vec<Vec<usize>> = found
        .into_iter()
        .map(|z| (0..n).filter(|&i| z & (1 << i) != 0).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// `e·d` for an integer lift `Q e = a`. Lifts differ by the image of `M`,
/// which pairs to zero with admissible `d`.
pub fn pair_divisor_curve(pres: &CoxPresentation, a: &[BigInt], d: &Multidegree) -> Result<BigInt, GlsmError> {
    let r = pres.num_rays();
    if d.len() != r {
        return Err(GlsmError::Dimension {
            what: "degree",
            expected: r,
            found: d.len(),
        });
    }
    if a.len() != pres.pic_rank {
        return Err(GlsmError::Dimension {
            what: "class",
            expected: pres.pic_rank,
            found: a.len(),
        });
    }
    let dv = d.as_bigints();
    let obstruction = pres.ray_matrix.transpose().mul_vec(&dv).expect("shape");
    if obstruction.iter().any(|x| !x.is_zero()) {
        return Err(GlsmError::Inadmissible);
    }
    let e = solve_integer(&pres.charge_matrix, a)
        .expect("shape")
        .ok_or_else(|| GlsmError::NoLift(a.to_vec()))?;
    Ok(e.iter().zip(&dv).map(|(x, y)| x * y).sum())
}

/// `a` pairs positively with every wall curve class.
pub fn kahler_cone_contains(fan: &Fan, pres: &CoxPresentation, a: &[BigInt]) -> Result<bool, GlsmError> {
    for wall in walls(fan)? {
        let d = Multidegree(wall.relation.iter().map(|x| x.to_i64().expect("small relation")).collect());
        if !pair_divisor_curve(pres, a, &d)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first class `Q e` with `e ∈ {0,..,3}^{Δ(1)}` (in lexicographic order
/// of `e`) that lies in the Kähler cone, if any.
pub fn find_kahler_class(fan: &Fan, pres: &CoxPresentation) -> Result<Option<Vec<BigInt>>, GlsmError> {
    let r = pres.num_rays();
    let mut e = vec![0u32; r];
    loop {
        let ev: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        let a = pres.charge_matrix.mul_vec(&ev).expect("shape");
        if kahler_cone_contains(fan, pres, &a)? {
            return Ok(Some(a));
        }
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if e[i] < 3 {
                e[i] += 1;
                break;
            }
            e[i] = 0;
        }
    }
}

/// On-disk problem: `{"charges": [[int]], "fi": [ratstring], "amplitudes":
/// [ratstring]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlsmFile {
    pub charges: Vec<Vec<i64>>,
    pub fi: Vec<String>,
    #[serde(default)]
    pub amplitudes: Vec<String>,
}

fn parse_rationals(xs: &[String], field: &str) -> Result<Vec<BigRational>, GlsmError> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            x.trim().parse::<BigRational>().map_err(|e| GlsmError::Field {
                path: format!("{field}[{i}]"),
                message: format!("'{x}': {e}"),
            })
        })
        .collect()
}

impl GlsmFile {
    pub fn charge_matrix(&self) -> Result<IntMatrix, GlsmError> {
        let cols = self.charges.first().map_or(0, Vec::len);
        if let Some(i) = self.charges.iter().position(|row| row.len() != cols) {
            return Err(GlsmError::Field {
                path: format!("charges[{i}]"),
                message: format!("expected {cols} entries, found {}", self.charges[i].len()),
            });
        }
        Ok(IntMatrix::from_rows_with_cols(&self.charges, cols).expect("rectangular"))
    }

    pub fn fi_vector(&self) -> Result<Vec<BigRational>, GlsmError> {
        parse_rationals(&self.fi, "fi")
    }

    pub fn problem(&self) -> Result<GLSMProblem, GlsmError> {
        let q = self.charge_matrix()?;
        let fi = self.fi_vector()?;
        let amplitudes = parse_rationals(&self.amplitudes, "amplitudes")?;
        GLSMProblem::new(q, fi, amplitudes).map_err(|e| match e {
            GlsmError::Dimension { what, expected, found } => GlsmError::Field {
                path: what.to_string(),
                message: format!("expected length {expected}, found {found}"),
            },
            GlsmError::NegativeAmplitude { index } => GlsmError::Field {
                path: format!("amplitudes[{index}]"),
                message: "amplitude is negative".into(),
            },
            e => e,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cox::cox_presentation;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qs(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn bs(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn p2_charges() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1i64, 1, 1]]).unwrap()
    }

    fn f1_charges() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1i64, -1, 1, 0], vec![0, 1, 0, 1]]).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn moment_map_examples() {
        let p = GLSMProblem::new(p2_charges(), qs(&[3]), qs(&[1, 1, 1])).unwrap();
        assert_eq!(moment_map(&p), qs(&[0]));
        let p = GLSMProblem::new(p2_charges(), qs(&[1]), qs(&[1, 0, 0])).unwrap();
        assert_eq!(moment_map(&p), qs(&[0]));
        let p = GLSMProblem::new(p2_charges(), qs(&[1]), qs(&[0, 0, 0])).unwrap();
        assert_eq!(moment_map(&p), qs(&[-1]));
    }

    #[test]
    fn problem_validation() {
        assert!(matches!(
            GLSMProblem::new(p2_charges(), qs(&[1, 2]), qs(&[1, 1, 1])),
            Err(GlsmError::Dimension { what: "fi", .. })
        ));
        assert_eq!(
            GLSMProblem::new(p2_charges(), qs(&[1]), qs(&[1, -1, 1])),
            Err(GlsmError::NegativeAmplitude { index: 1 })
        );
    }

    #[test]
    fn semistability_examples() {
        let p2 = p2_charges();
        assert_eq!(semistable(&p2, &set(&[0]), &qs(&[1])).unwrap(), Stability::InteriorStable);
        assert_eq!(semistable(&p2, &set(&[]), &qs(&[1])).unwrap(), Stability::Unstable);
        assert_eq!(semistable(&p2, &set(&[0]), &qs(&[0])).unwrap(), Stability::BoundaryMarginal);
        let f1 = f1_charges();
        assert_eq!(semistable(&f1, &set(&[1, 3]), &qs(&[1, 1])).unwrap(), Stability::Unstable);
        assert_eq!(semistable(&f1, &set(&[0, 3]), &qs(&[1, 1])).unwrap(), Stability::InteriorStable);
        assert_eq!(semistable(&f1, &set(&[0, 3]), &qs(&[1, 0])).unwrap(), Stability::BoundaryMarginal);
        assert_eq!(semistable(&f1, &set(&[7]), &qs(&[1, 0])), Err(GlsmError::SupportIndex(7)));
    }

    #[test]
    fn certificates_agree_with_primal() {
        let f1 = f1_charges();
        for mask in 0u32..16 {
            let support: BTreeSet<usize> = (0..4).filter(|&i| mask & (1 << i) != 0).collect();
            for r0 in -2..=2 {
                for r1 in -2..=2 {
                    let r = qs(&[r0, r1]);
                    let primal = semistable(&f1, &support, &r).unwrap();
                    let cert = recession_certificate(&charge_columns(&f1, &support), &r);
                    match (primal, cert) {
                        (Stability::InteriorStable, None) => {}
                        (Stability::BoundaryMarginal, Some((_, true))) => {}
                        (Stability::Unstable, Some((_, false))) => {}
                        other => panic!("{support:?} {r:?}: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn solver_closed_form() {
        let p = GLSMProblem::new(p2_charges(), qs(&[1]), qs(&[1, 1, 1])).unwrap();
        let rep = kempf_ness_solve(&p, 1e-10, DEFAULT_MAX_ITER).unwrap();
        let t = rep.converged().expect("converges")[0];
        assert!((t + 0.5 * 3f64.ln()).abs() < 1e-9, "{t}");
        let p = GLSMProblem::new(p2_charges(), qs(&[1]), qs(&[1, 0, 0])).unwrap();
        let rep = kempf_ness_solve(&p, 1e-10, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(rep.converged().unwrap(), &[0.0]);
        assert_eq!(rep.iterations, 0);
        let p = GLSMProblem::new(p2_charges(), qs(&[1]), qs(&[0, 0, 0])).unwrap();
        let rep = kempf_ness_solve(&p, 1e-10, DEFAULT_MAX_ITER).unwrap();
        assert!(matches!(rep.status, SolveStatus::Unstable { boundary: false, .. }));
        assert_eq!(kempf_ness_solve(&p, 0.0, 10), Err(GlsmError::InvalidTol));
        assert_eq!(kempf_ness_solve(&p, f64::NAN, 10), Err(GlsmError::InvalidTol));
    }

    #[test]
    fn solver_on_rank_deficient_support() {
        // only q_0 = (1, 0) and q_2 = (1, 0) supported on F1; r on their ray
        let p = GLSMProblem::new(f1_charges(), qs(&[2, 0]), qs(&[1, 0, 3, 0])).unwrap();
        let rep = kempf_ness_solve(&p, 1e-10, DEFAULT_MAX_ITER).unwrap();
        let t = rep.converged().expect("converges");
        assert!(inf_norm(&moment_map_at(&p, t)) < 1e-10);
        // boundary: r = (1, 0) with all fields on
        let p = GLSMProblem::new(f1_charges(), qs(&[1, 0]), qs(&[1, 1, 1, 1])).unwrap();
        let rep = kempf_ness_solve(&p, 1e-8, DEFAULT_MAX_ITER).unwrap();
        assert!(matches!(rep.status, SolveStatus::Unstable { boundary: true, .. }));
    }

    #[test]
    fn unstable_supports_examples() {
        assert_eq!(unstable_supports(&p2_charges(), &qs(&[1]), 16).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(unstable_supports(&f1_charges(), &qs(&[1, 1]), 16).unwrap(), vec![vec![0, 2], vec![1, 3]]);
        let p1p1 = IntMatrix::from_rows(&[vec![1i64, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(unstable_supports(&p1p1, &qs(&[1, 1]), 16).unwrap(), vec![vec![0, 1], vec![2, 3]]);
        assert!(matches!(
            unstable_supports(&p1p1, &qs(&[1, 1]), 3),
            Err(GlsmError::TooManyFields { fields: 4, limit: 3 })
        ));
    }

    #[test]
    fn divisor_curve_pairings() {
        let f1 = Fan::hirzebruch(1);
        let pres = cox_presentation(&f1).unwrap();
        // express a = (1,1) in this presentation's charge basis via e
        let e = bs(&[1, 0, 0, 1]);
        let a_here = pres.charge_matrix.mul_vec(&e).unwrap();
        for rel in [[1, -1, 1, 0], [0, 1, 0, 1]] {
            assert_eq!(pair_divisor_curve(&pres, &a_here, &Multidegree(rel.to_vec())).unwrap(), BigInt::one());
        }
        // the wall through the +1 section: (D_0 + D_3)·D_3 = 2
        assert_eq!(
            pair_divisor_curve(&pres, &a_here, &Multidegree(vec![1, 0, 1, 1])).unwrap(),
            BigInt::from(2)
        );
        assert!(kahler_cone_contains(&f1, &pres, &a_here).unwrap());

        let p2 = Fan::projective_space(2);
        let pres = cox_presentation(&p2).unwrap();
        let h = pres.charge_matrix.mul_vec(&bs(&[1, 0, 0])).unwrap();
        let line = Multidegree(vec![1, 1, 1]);
        assert_eq!(pair_divisor_curve(&pres, &h, &line).unwrap(), BigInt::one());
        assert!(kahler_cone_contains(&p2, &pres, &h).unwrap());
        let minus: Vec<BigInt> = h.iter().map(|x| -x).collect();
        assert_eq!(pair_divisor_curve(&pres, &minus, &line).unwrap(), -BigInt::one());
        assert!(!kahler_cone_contains(&p2, &pres, &minus).unwrap());
        assert_eq!(
            pair_divisor_curve(&pres, &h, &Multidegree(vec![1, 0, 0])),
            Err(GlsmError::Inadmissible)
        );
    }

    #[test]
    fn kahler_class_search() {
        for fan in [Fan::projective_space(3), Fan::p1xp1(), Fan::hirzebruch(2)] {
            let pres = cox_presentation(&fan).unwrap();
            let a = find_kahler_class(&fan, &pres).unwrap().expect("projective");
            assert!(kahler_cone_contains(&fan, &pres, &a).unwrap());
        }
    }

    #[test]
    fn file_errors_name_fields() {
        let file: GlsmFile =
            serde_json::from_str(r#"{"charges": [[1,1,1]], "fi": ["1"], "amplitudes": ["1", "x", "1"]}"#).unwrap();
        assert!(file.problem().unwrap_err().to_string().starts_with("amplitudes[1]"));
        let file: GlsmFile =
            serde_json::from_str(r#"{"charges": [[1,1,1],[1]], "fi": ["1"], "amplitudes": []}"#).unwrap();
        assert!(file.problem().unwrap_err().to_string().starts_with("charges[1]"));
        let file: GlsmFile =
            serde_json::from_str(r#"{"charges": [[1,1,1]], "fi": ["1"], "amplitudes": ["1", "-1", "1"]}"#).unwrap();
        assert!(file.problem().unwrap_err().to_string().starts_with("amplitudes[1]"));
    }
}
