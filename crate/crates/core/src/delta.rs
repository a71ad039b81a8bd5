//! Genus-0 weak Δ-collections in the fixed presentation of `P^1`.
//!
//! On `P^1` every line bundle is some `O(d)`, so a weak Δ-collection is a
//! multidegree `d`, one binary form `u_ρ` of degree `d_ρ` per ray, and one
//! nonzero scalar `t_j` per standard basis vector `e_j` of `M`. The scalar
//! `t_j` records the trivialization of `⊗_ρ L_ρ^{⟨e_j, n_ρ⟩}` relative to
//! the canonical one: it is the image of the canonical generator, so an
//! isomorphism `γ = (λ_ρ)` sends `t_j` to `∏_ρ λ_ρ^{⟨e_j, n_ρ⟩} · t_j`.
//! Compatibility fixes every other `t_m` from these, so they are not stored.
//!
//! Nondegeneracy at genus 0 reduces to one gcd: put
//! `g_σ = ∏_{ρ ⊄ σ} u_ρ` for each maximal cone `σ`. The induced map avoids
//! `V(I)` at a point `p` iff some `g_σ(p) ≠ 0`, so the collection is
//! nondegenerate iff the nonzero `g_σ` have no common root over the
//! algebraic closure, i.e. iff `gcd(g_σ)` has degree zero. Zero `g_σ`
//! vanish everywhere and never help, which is exactly `gcd(0, h) = h`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::Fan;
use crate::forms::{self, BinaryForm, FormError};
use crate::lattice::{smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("expected {expected} entries, found {found}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("negative degree {degree} on ray {ray}")]
    NegativeDegree { ray: usize, degree: i64 },
    #[error("section {ray} has degree {found}, expected {expected}")]
    SectionDegree {
        ray: usize,
        expected: usize,
        found: usize,
    },
    #[error("multidegree {0:?} is not admissible (Σ d_ρ n_ρ ≠ 0)")]
    Inadmissible(Vec<i64>),
    #[error("trivialization {index} is zero")]
    ZeroTrivialization { index: usize },
    #[error("collection vanishes identically; no base divisor")]
    Vanishing,
    #[error("cover does not define a morphism: {0}")]
    BadCover(String),
    #[error("collections live on different fans or multidegrees")]
    ShapeMismatch,
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Degrees `d_ρ` of the line bundles `L_ρ`, indexed by ray.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&d| d >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Multidegree {
        Multidegree(self.0.iter().map(|d| d * k).collect())
    }

    pub fn as_bigints(&self) -> Vec<BigInt> {
        self.0.iter().map(|&d| BigInt::from(d)).collect()
    }
}

/// `Σ_ρ d_ρ n_ρ = 0`, forced by the isomorphisms `c_m` on `P^1`.
pub fn admissible(fan: &Fan, d: &Multidegree) -> Result<bool, DeltaError> {
    if d.len() != fan.num_rays() {
        return Err(DeltaError::IndexMismatch {
            expected: fan.num_rays(),
            found: d.len(),
        });
    }
    Ok((0..fan.dim()).all(|j| {
        fan.rays
            .iter()
            .zip(&d.0)
            .map(|(r, &dr)| r[j] * dr)
            .sum::<i64>()
            == 0
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDeltaCollection {
    fan: Arc<Fan>,
    degree: Multidegree,
    sections: Vec<BinaryForm>,
    trivializations: Vec<BigRational>,
}

impl WeakDeltaCollection {
    /// Trivializations default to the canonical ones (all `1`).
    pub fn new(
        fan: Arc<Fan>,
        degree: Multidegree,
        sections: Vec<BinaryForm>,
        trivializations: Option<Vec<BigRational>>,
    ) -> Result<Self, DeltaError> {
        let r = fan.num_rays();
        if degree.len() != r {
            return Err(DeltaError::IndexMismatch {
                expected: r,
                found: degree.len(),
            });
        }
        if sections.len() != r {
            return Err(DeltaError::IndexMismatch {
                expected: r,
                found: sections.len(),
            });
        }
        for (ray, &d) in degree.0.iter().enumerate() {
            if d < 0 {
                return Err(DeltaError::NegativeDegree { ray, degree: d });
            }
        }
        for (ray, (u, &d)) in sections.iter().zip(&degree.0).enumerate() {
            if u.degree() != d as usize {
                return Err(DeltaError::SectionDegree {
                    ray,
                    expected: d as usize,
                    found: u.degree(),
                });
            }
        }
        if !admissible(&fan, &degree)? {
            return Err(DeltaError::Inadmissible(degree.0));
        }
        let n = fan.dim();
        let trivializations = trivializations.unwrap_or_else(|| vec![BigRational::one(); n]);
        if trivializations.len() != n {
            return Err(DeltaError::IndexMismatch {
                expected: n,
                found: trivializations.len(),
            });
        }
        if let Some(index) = trivializations.iter().position(Zero::is_zero) {
            return Err(DeltaError::ZeroTrivialization { index });
        }
        Ok(Self {
            fan,
            degree,
            sections,
            trivializations,
        })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn degree(&self) -> &Multidegree {
        &self.degree
    }

    pub fn sections(&self) -> &[BinaryForm] {
        &self.sections
    }

    pub fn trivializations(&self) -> &[BigRational] {
        &self.trivializations
    }

    /// Rays whose section is zero.
    pub fn zero_sections(&self) -> BTreeSet<usize> {
        (0..self.sections.len()).filter(|&i| self.sections[i].is_zero()).collect()
    }

    /// Same fan and trivializations, new sections. Degrees are read off the
    /// forms.
    pub fn with_sections(&self, sections: Vec<BinaryForm>) -> Result<Self, DeltaError> {
        let degree = Multidegree(sections.iter().map(|s| s.degree() as i64).collect());
        Self::new(self.fan.clone(), degree, sections, Some(self.trivializations.clone()))
    }

    /// The torus `(K^×)^{Δ(1)}` acting by `u_ρ -> λ_ρ u_ρ`,
    /// `t_j -> ∏_ρ λ_ρ^{⟨e_j, n_ρ⟩} t_j`. Elements of `G` fix every `t_j`.
    pub fn act(&self, lambda: &[BigRational]) -> Result<Self, DeltaError> {
        if lambda.len() != self.sections.len() {
            return Err(DeltaError::IndexMismatch {
                expected: self.sections.len(),
                found: lambda.len(),
            });
        }
        let sections = self.sections.iter().zip(lambda).map(|(u, l)| u.scale(l)).collect();
        let trivializations = character_values(&self.fan, lambda)
            .into_iter()
            .zip(&self.trivializations)
            .map(|(c, t)| c * t)
            .collect();
        Self::new(self.fan.clone(), self.degree.clone(), sections, Some(trivializations))
    }
}

/// `(∏_ρ λ_ρ^{⟨e_j, n_ρ⟩})_j`; all ones iff `λ ∈ G`.
pub fn character_values(fan: &Fan, lambda: &[BigRational]) -> Vec<BigRational> {
    (0..fan.dim())
        .map(|j| {
            fan.rays
                .iter()
                .zip(lambda)
                .fold(BigRational::one(), |acc, (r, l)| acc * rat_pow(l, r[j]))
        })
        .collect()
}

pub fn in_gauge_group(fan: &Fan, lambda: &[BigRational]) -> bool {
    lambda.iter().all(|l| !l.is_zero()) && character_values(fan, lambda).iter().all(One::is_one)
}

fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    (0..e.unsigned_abs()).fold(BigRational::one(), |acc, _| acc * &base)
}

/// `g_σ = ∏_{ρ ⊄ σ} u_ρ` for every maximal cone, in fan order.
pub fn cone_products(c: &WeakDeltaCollection) -> Vec<BinaryForm> {
    c.fan
        .max_cones
        .iter()
        .map(|cone| {
            (0..c.sections.len())
                .filter(|i| !cone.contains(i))
                .fold(BinaryForm::one(), |acc, i| acc.mul(&c.sections[i]))
        })
        .collect()
}

/// Some maximal cone has every section off it nonzero, so the induced map
/// is generically outside `V(I)`.
pub fn is_nonvanishing(c: &WeakDeltaCollection) -> bool {
    c.fan
        .max_cones
        .iter()
        .any(|cone| (0..c.sections.len()).filter(|i| !cone.contains(i)).all(|i| !c.sections[i].is_zero()))
}

/// The gcd of the cone products: its roots are the points of `P^1` sent
/// into `V(I)`.
pub fn base_divisor(c: &WeakDeltaCollection) -> Result<BinaryForm, DeltaError> {
    match forms::gcd(&cone_products(c)) {
        Ok(g) => Ok(g),
        Err(FormError::AllZero) => Err(DeltaError::Vanishing),
        Err(e) => Err(e.into()),
    }
}

pub fn is_nondegenerate(c: &WeakDeltaCollection) -> bool {
    base_divisor(c).is_ok_and(|g| g.degree() == 0)
}

/// Pulls back along the morphism `P^1 -> P^1`, `[z0:z1] -> [a:b]`.
pub fn pullback(
    c: &WeakDeltaCollection,
    a: &BinaryForm,
    b: &BinaryForm,
) -> Result<WeakDeltaCollection, DeltaError> {
    if a.degree() != b.degree() {
        return Err(DeltaError::BadCover(format!(
            "components have degrees {} and {}",
            a.degree(),
            b.degree()
        )));
    }
    if a.degree() == 0 {
        return Err(DeltaError::BadCover("cover has degree 0".into()));
    }
    let common = forms::gcd(&[a.clone(), b.clone()])
        .map_err(|_| DeltaError::BadCover("both components are zero".into()))?;
    if common.degree() > 0 {
        return Err(DeltaError::BadCover(format!("components share the factor {common}")));
    }
    let sections = c
        .sections
        .iter()
        .map(|u| u.compose(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let k = a.degree() as i64;
    WeakDeltaCollection::new(
        c.fan.clone(),
        c.degree.scale(k),
        sections,
        Some(c.trivializations.clone()),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsomorphismVerdict {
    /// `λ` with `λ_ρ u_ρ = u'_ρ` and `∏_ρ λ_ρ^{⟨e_j,n_ρ⟩} = t'_j / t_j`.
    IsomorphicRational { witness: Vec<BigRational> },
    /// Isomorphic once roots of rational numbers are allowed.
    IsomorphicOverClosure,
    NotIsomorphic,
}

/// Decides whether two collections on the same fan and multidegree are
/// isomorphic, i.e. lie in one orbit of the torus action above.
///
/// Rays with nonzero sections fix `λ_ρ` as a ratio of forms. The remaining
/// unknowns must solve a monomial system `∏_{ρ free} λ_ρ^{A_{ρj}} = κ_j`;
/// in Smith coordinates this splits into `μ_l^{d_l} = κ'_l` plus the
/// consistency conditions `κ'_l = 1` beyond the rank. Consistency decides
/// solvability over the algebraic closure; rational solvability further
/// needs each `κ'_l` to be a rational `d_l`-th power.
pub fn isomorphic(c1: &WeakDeltaCollection, c2: &WeakDeltaCollection) -> Result<IsomorphismVerdict, DeltaError> {
    if c1.fan != c2.fan || c1.degree != c2.degree {
        return Err(DeltaError::ShapeMismatch);
    }
    let fan = &c1.fan;
    let r = fan.num_rays();
    let n = fan.dim();

    let mut lambda: Vec<Option<BigRational>> = vec![None; r];
    for ((u, v), slot) in c1.sections.iter().zip(&c2.sections).zip(lambda.iter_mut()) {
        match (u.is_zero(), v.is_zero()) {
            (true, true) => {}
            (false, false) => match u.ratio_to(v) {
                Some(l) => *slot = Some(l),
                None => return Ok(IsomorphismVerdict::NotIsomorphic),
            },
            _ => return Ok(IsomorphismVerdict::NotIsomorphic),
        }
    }

    let free: Vec<usize> = (0..r).filter(|&i| lambda[i].is_none()).collect();
    // κ_j = (t'_j / t_j) / ∏_{fixed} λ_ρ^{n_ρ[j]}
    let kappa: Vec<BigRational> = (0..n)
        .map(|j| {
            let fixed: BigRational = (0..r)
                .filter_map(|i| lambda[i].as_ref().map(|l| rat_pow(l, fan.rays[i][j])))
                .product();
            &c2.trivializations[j] / &c1.trivializations[j] / fixed
        })
        .collect();

    let exps: Vec<Vec<i64>> = free.iter().map(|&i| fan.rays[i].clone()).collect();
    let a = IntMatrix::from_rows_with_cols(&exps, n).expect("rectangular");
    let snf = smith_normal_form(&a);
    let rank = snf.rank();
    let kappa_prime: Vec<BigRational> = (0..n)
        .map(|l| {
            (0..n).fold(BigRational::one(), |acc, j| {
                acc * rat_pow(&kappa[j], snf.v[(j, l)].to_i64().expect("small exponent"))
            })
        })
        .collect();
    if kappa_prime[rank..].iter().any(|k| !k.is_one()) {
        return Ok(IsomorphismVerdict::NotIsomorphic);
    }

    let mut mu = vec![BigRational::one(); free.len()];
    for l in 0..rank {
        let d = snf.d[(l, l)].to_u32().expect("small invariant factor");
        match rational_root(&kappa_prime[l], d) {
            Some(root) => mu[l] = root,
            None => return Ok(IsomorphismVerdict::IsomorphicOverClosure),
        }
    }
    for (k, &i) in free.iter().enumerate() {
        let value = (0..free.len()).fold(BigRational::one(), |acc, l| {
            acc * rat_pow(&mu[l], snf.u[(l, k)].to_i64().expect("small exponent"))
        });
        lambda[i] = Some(value);
    }
    let witness: Vec<BigRational> = lambda.into_iter().map(|l| l.expect("assigned")).collect();
    debug_assert!(verify_witness(c1, c2, &witness));
    Ok(IsomorphismVerdict::IsomorphicRational { witness })
}

/// Checks a claimed isomorphism exactly.
pub fn verify_witness(c1: &WeakDeltaCollection, c2: &WeakDeltaCollection, lambda: &[BigRational]) -> bool {
    lambda.len() == c1.sections.len()
        && lambda.iter().all(|l| !l.is_zero())
        && c1.act(lambda).is_ok_and(|image| image == *c2)
}

/// Rational `d`-th root of `x`, if one exists.
fn rational_root(x: &BigRational, d: u32) -> Option<BigRational> {
    if d == 1 {
        return Some(x.clone());
    }
    if x.is_negative() && d.is_multiple_of(2) {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(d);
        (num_traits::pow(r.clone(), d as usize) == n.abs()).then_some(r)
    };
    let num = root_int(x.numer())?;
    let den = root_int(x.denom())?;
    let root = BigRational::new(num, den);
    Some(if x.is_negative() { -root } else { root })
}

/// Where a collection file names its fan: a built-in name or an inline fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanRef {
    Name(String),
    Inline(Fan),
}

/// On-disk form of a collection: `{"fan", "degrees", "sections",
/// "trivializations"?}` with sections in the form grammar and rationals as
/// strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionFile {
    pub fan: FanRef,
    pub degrees: Vec<i64>,
    pub sections: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivializations: Option<Vec<String>>,
}

impl CollectionFile {
    /// Builds the collection, resolving fan names through `resolve` (which
    /// typically falls back to [`Fan::named`]). Errors name the offending
    /// field, e.g. `sections[2]`.
    pub fn resolve<F>(&self, mut resolve: F) -> Result<WeakDeltaCollection, DeltaError>
    where
        F: FnMut(&str) -> Option<Fan>,
    {
        let field = |path: String, message: String| DeltaError::Field { path, message };
        let fan = match &self.fan {
            FanRef::Inline(f) => f.clone(),
            FanRef::Name(name) => {
                resolve(name).ok_or_else(|| field("fan".into(), format!("unknown fan '{name}'")))?
            }
        };
        let mut sections = Vec::with_capacity(self.sections.len());
        for (i, text) in self.sections.iter().enumerate() {
            let expected = self.degrees.get(i).and_then(|&d| usize::try_from(d).ok());
            let form = BinaryForm::parse(text, expected)
                .map_err(|e| field(format!("sections[{i}]"), e.to_string()))?;
            sections.push(form);
        }
        let trivializations = match &self.trivializations {
            None => None,
            Some(ts) => Some(
                ts.iter()
                    .enumerate()
                    .map(|(i, t)| {
                        t.trim()
                            .parse::<BigRational>()
                            .map_err(|e| field(format!("trivializations[{i}]"), format!("'{t}': {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        WeakDeltaCollection::new(Arc::new(fan), Multidegree(self.degrees.clone()), sections, trivializations)
            .map_err(|e| match e {
                e @ DeltaError::Field { .. } => e,
                e => field("collection".into(), e.to_string()),
            })
    }

    /// Canonical file form. Built-in fans are referenced by name.
    pub fn from_collection(c: &WeakDeltaCollection) -> Self {
        let fan = match Fan::named(&c.fan.name) {
            Some(builtin) if builtin == *c.fan => FanRef::Name(c.fan.name.clone()),
            _ => FanRef::Inline((*c.fan).clone()),
        };
        Self {
            fan,
            degrees: c.degree.0.clone(),
            sections: c.sections.iter().map(ToString::to_string).collect(),
            trivializations: Some(c.trivializations.iter().map(ToString::to_string).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn p2() -> Arc<Fan> {
        Arc::new(Fan::new(
            "P2",
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        ))
    }

    fn coll(fan: &Arc<Fan>, d: &[i64], secs: &[&str]) -> WeakDeltaCollection {
        let sections = secs
            .iter()
            .zip(d)
            .map(|(s, &k)| BinaryForm::parse(s, Some(k as usize)).unwrap())
            .collect();
        WeakDeltaCollection::new(fan.clone(), Multidegree(d.to_vec()), sections, None).unwrap()
    }

    #[test]
    fn admissibility() {
        let f1 = Fan::hirzebruch(1);
        assert!(admissible(&p2(), &Multidegree(vec![1, 1, 1])).unwrap());
        assert!(!admissible(&p2(), &Multidegree(vec![1, 0, 0])).unwrap());
        assert!(admissible(&f1, &Multidegree(vec![1, 0, 1, 1])).unwrap());
        assert!(matches!(
            admissible(&f1, &Multidegree(vec![1, 0])),
            Err(DeltaError::IndexMismatch { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        let fan = p2();
        let s = |t: &str| BinaryForm::parse(t, None).unwrap();
        assert!(matches!(
            WeakDeltaCollection::new(fan.clone(), Multidegree(vec![1, 0, 0]), vec![s("z0"), s("1"), s("1")], None),
            Err(DeltaError::Inadmissible(_))
        ));
        assert!(matches!(
            WeakDeltaCollection::new(fan.clone(), Multidegree(vec![1, 1, 1]), vec![s("z0"), s("z1"), s("z0^2")], None),
            Err(DeltaError::SectionDegree { ray: 2, .. })
        ));
        assert!(matches!(
            WeakDeltaCollection::new(
                fan.clone(),
                Multidegree(vec![1, 1, 1]),
                vec![s("z0"), s("z1"), s("z0")],
                Some(vec![q(1), q(0)])
            ),
            Err(DeltaError::ZeroTrivialization { index: 1 })
        ));
        assert!(matches!(
            WeakDeltaCollection::new(fan, Multidegree(vec![-1, -1, -1]), vec![s("z0"), s("z1"), s("z0")], None),
            Err(DeltaError::NegativeDegree { ray: 0, .. })
        ));
    }

    #[test]
    fn nonvanishing_examples() {
        let fan = p2();
        assert!(is_nonvanishing(&coll(&fan, &[1, 1, 1], &["z0", "z1", "z0+z1"])));
        assert!(is_nonvanishing(&coll(&fan, &[1, 1, 1], &["0", "z1", "z0+z1"])));
        assert!(!is_nonvanishing(&coll(&fan, &[1, 1, 1], &["0", "0", "0"])));
    }

    #[test]
    fn nondegeneracy_examples() {
        let fan = p2();
        assert!(is_nondegenerate(&coll(&fan, &[1, 1, 1], &["z0", "z1", "z0+z1"])));
        let c = coll(&fan, &[1, 1, 1], &["z0", "z0", "z0"]);
        assert!(!is_nondegenerate(&c));
        assert_eq!(base_divisor(&c).unwrap().to_string(), "z0");
        assert!(!is_nondegenerate(&coll(&fan, &[1, 1, 1], &["0", "0", "0"])));
    }

    #[test]
    fn base_divisor_examples() {
        let fan = p2();
        let c = coll(&fan, &[2, 2, 2], &["z0^2", "z0*z1", "z0^2 + z0*z1"]);
        assert_eq!(base_divisor(&c).unwrap(), BinaryForm::z0());
        let good = coll(&fan, &[1, 1, 1], &["z0", "z1", "z0+z1"]);
        assert_eq!(base_divisor(&good).unwrap(), BinaryForm::one());
        let p1 = Arc::new(Fan::projective_space(1));
        let c = coll(&p1, &[1, 1], &["z0", "z0"]);
        assert_eq!(base_divisor(&c).unwrap(), BinaryForm::z0());
        let dead = coll(&fan, &[1, 1, 1], &["0", "0", "0"]);
        assert_eq!(base_divisor(&coll(&fan, &[1, 1, 1], &["0", "0", "z0"])).unwrap(), BinaryForm::z0());
        assert_eq!(base_divisor(&dead), Err(DeltaError::Vanishing));
    }

    #[test]
    fn pullback_examples() {
        let fan = p2();
        let c = coll(&fan, &[1, 1, 1], &["z0", "z1", "z0+z1"]);
        assert_eq!(pullback(&c, &BinaryForm::z0(), &BinaryForm::z1()).unwrap(), c);
        let sq = |s: &str| BinaryForm::parse(s, None).unwrap();
        let pb = pullback(&c, &sq("z0^2"), &sq("z1^2")).unwrap();
        assert_eq!(pb, coll(&fan, &[2, 2, 2], &["z0^2", "z1^2", "z0^2+z1^2"]));
        assert!(matches!(pullback(&c, &sq("z0^2"), &sq("z0 z1")), Err(DeltaError::BadCover(_))));
        assert!(matches!(pullback(&c, &sq("1"), &sq("2")), Err(DeltaError::BadCover(_))));
    }

    #[test]
    fn isomorphism_examples() {
        let fan = p2();
        let c = coll(&fan, &[2, 2, 2], &["z0^2", "z1^2", "z0 z1"]);
        let c2 = coll(&fan, &[2, 2, 2], &["2 z0^2", "2 z1^2", "2 z0 z1"]);
        assert_eq!(
            isomorphic(&c, &c2).unwrap(),
            IsomorphismVerdict::IsomorphicRational { witness: vec![q(2), q(2), q(2)] }
        );
        let c3 = coll(&fan, &[2, 2, 2], &["2 z0^2", "2 z1^2", "3 z0 z1"]);
        assert_eq!(isomorphic(&c, &c3).unwrap(), IsomorphismVerdict::NotIsomorphic);
        assert_eq!(
            isomorphic(&c, &c).unwrap(),
            IsomorphismVerdict::IsomorphicRational { witness: vec![q(1); 3] }
        );
    }

    #[test]
    fn isomorphism_with_free_rays() {
        // P1xP1, sections (z0, z1, 0, 0) have λ_2, λ_3 free; the relation
        // λ_2 / λ_3 = τ_1 is always solvable.
        let fan = Arc::new(Fan::p1xp1());
        let c = coll(&fan, &[1, 1, 0, 0], &["z0", "z1", "0", "0"]);
        let mut t = c.clone();
        t.trivializations = vec![q(1), q(5)];
        match isomorphic(&c, &t).unwrap() {
            IsomorphismVerdict::IsomorphicRational { witness } => assert!(verify_witness(&c, &t, &witness)),
            other => panic!("{other:?}"),
        }
        // the fixed pair must satisfy λ_0 / λ_1 = τ_0 = 1
        let s = coll(&fan, &[1, 1, 0, 0], &["z0", "3 z1", "0", "0"]);
        assert_eq!(isomorphic(&c, &s).unwrap(), IsomorphismVerdict::NotIsomorphic);
    }

    #[test]
    fn isomorphism_over_closure_only() {
        // A root obstruction needs the free rays to span a sublattice of
        // index > 1; here rays (1,0) and (1,2) span one of index 2.
        let fan = Arc::new(Fan::new(
            "sq",
            vec![vec![1, 0], vec![1, 2], vec![-1, -1], vec![0, -1], vec![-1, 0], vec![0, 1]],
            vec![vec![0, 1], vec![1, 5], vec![5, 4], vec![4, 2], vec![2, 3], vec![3, 0]],
        ));
        // degrees all zero: constant sections; zero out rays 0 and 1
        let c = coll(&fan, &[0; 6], &["0", "0", "1", "1", "1", "1"]);
        let mut t = c.clone();
        // constraint on rays 0,1: λ0 λ1 = τ_0, λ1^2 = τ_1
        t.trivializations = vec![q(1), q(2)];
        assert_eq!(isomorphic(&c, &t).unwrap(), IsomorphismVerdict::IsomorphicOverClosure);
        t.trivializations = vec![q(1), q(4)];
        assert!(matches!(isomorphic(&c, &t).unwrap(), IsomorphismVerdict::IsomorphicRational { .. }));
        t.trivializations = vec![q(1), q(-4)];
        assert_eq!(isomorphic(&c, &t).unwrap(), IsomorphismVerdict::IsomorphicOverClosure);
    }

    #[test]
    fn shape_mismatch() {
        let fan = p2();
        let a = coll(&fan, &[1, 1, 1], &["z0", "z1", "z0"]);
        let b = coll(&fan, &[2, 2, 2], &["z0^2", "z1^2", "z0^2"]);
        assert_eq!(isomorphic(&a, &b), Err(DeltaError::ShapeMismatch));
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&BigRational::new(4.into(), 9.into()), 2), Some(BigRational::new(2.into(), 3.into())));
        assert_eq!(rational_root(&q(2), 2), None);
        assert_eq!(rational_root(&q(-8), 3), Some(q(-2)));
        assert_eq!(rational_root(&q(-4), 2), None);
    }

    #[test]
    fn file_round_trip() {
        let fan = p2();
        let c = coll(&fan, &[1, 1, 1], &["z0", "z1", "z0+z1"]);
        let file = CollectionFile::from_collection(&c);
        assert_eq!(file.fan, FanRef::Inline((*fan).clone()));
        let back = file.resolve(Fan::named).unwrap();
        assert_eq!(back, c);

        let named = Arc::new(Fan::projective_space(2));
        let c = coll(&named, &[1, 1, 1], &["z0", "z1", "z0+z1"]);
        let file = CollectionFile::from_collection(&c);
        assert_eq!(file.fan, FanRef::Name("P2".into()));
        let json = serde_json::to_string(&file).unwrap();
        let parsed: CollectionFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.resolve(Fan::named).unwrap(), c);
    }

    #[test]
    fn file_errors_name_fields() {
        let file: CollectionFile = serde_json::from_str(
            r#"{"fan": "P2", "degrees": [1,1,1], "sections": ["z0", "z1 +", "z0"]}"#,
        )
        .unwrap();
        let err = file.resolve(Fan::named).unwrap_err().to_string();
        assert!(err.starts_with("sections[1]: syntax error at position"), "{err}");
        let file: CollectionFile =
            serde_json::from_str(r#"{"fan": "nope", "degrees": [], "sections": []}"#).unwrap();
        assert!(file.resolve(Fan::named).unwrap_err().to_string().starts_with("fan:"));
    }
}
