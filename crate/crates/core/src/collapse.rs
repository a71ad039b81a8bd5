//! The collapsing map from genus-0 stable maps of degree `(1, d)` into
//! `P^1 × X` to weak Δ-collections of multidegree `d`.
//!
//! A stable map is summarized by its main component `C_0` (identified with
//! the target `P^1`) and, for each tree hanging off `C_0`, the attachment
//! point and the tree's total multidegree. Pushing forward multiplies every
//! main section by `ℓ_p^{d_{p,ρ}}`, where `ℓ_p` is the linear form
//! vanishing at `p`.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delta::{
    admissible, base_divisor, is_nondegenerate, CollectionFile, DeltaError, Multidegree, WeakDeltaCollection,
};
use crate::fan::{prime_divisors_nef, Fan};
use crate::forms::{linear_form_at, BinaryForm, Mobius, ProjectivePoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub point: ProjectivePoint,
    /// Total multidegree of the tree glued at `point`.
    pub degree: Multidegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusZeroStableMapData {
    pub main: WeakDeltaCollection,
    pub attachments: Vec<Attachment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StableMapViolation {
    /// The fan fails the nef proxy for convexity (or walls could not be
    /// computed at all).
    NotConvex { detail: String },
    DegenerateMain { base_divisor: String },
    VanishingMain,
    AttachmentLength { attachment: usize, expected: usize, found: usize },
    NegativeAttachmentDegree { attachment: usize, ray: usize },
    InadmissibleAttachmentDegree { attachment: usize },
    ZeroAttachmentDegree { attachment: usize },
    RepeatedPoint { first: usize, second: usize },
}

impl std::fmt::Display for StableMapViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotConvex { detail } => write!(f, "target fails the convexity proxy: {detail}"),
            Self::DegenerateMain { base_divisor } => {
                write!(f, "main component is degenerate (base divisor {base_divisor})")
            }
            Self::VanishingMain => write!(f, "main component maps into V(I)"),
            Self::AttachmentLength { attachment, expected, found } => {
                write!(f, "attachment {attachment}: degree has {found} entries, expected {expected}")
            }
            Self::NegativeAttachmentDegree { attachment, ray } => {
                write!(f, "attachment {attachment}: negative degree on ray {ray}")
            }
            Self::InadmissibleAttachmentDegree { attachment } => {
                write!(f, "attachment {attachment}: degree is not admissible")
            }
            Self::ZeroAttachmentDegree { attachment } => {
                write!(f, "attachment {attachment}: zero degree (contracted tree)")
            }
            Self::RepeatedPoint { first, second } => {
                write!(f, "attachments {first} and {second} share a point")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StableMapReport {
    pub violations: Vec<StableMapViolation>,
}

impl StableMapReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for StableMapReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollapseError {
    #[error("invalid stable-map data: {0}")]
    Invalid(StableMapReport),
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

pub fn validate(data: &GenusZeroStableMapData) -> StableMapReport {
    let mut violations = Vec::new();
    let fan = data.main.fan();
    match prime_divisors_nef(fan) {
        Ok(report) if report.all_nef => {}
        Ok(report) => {
            let bad: Vec<usize> = report.divisors.iter().filter(|d| !d.nef).map(|d| d.ray).collect();
            violations.push(StableMapViolation::NotConvex {
                detail: format!("prime divisors {bad:?} are not nef"),
            });
        }
        Err(e) => violations.push(StableMapViolation::NotConvex { detail: e.to_string() }),
    }

    match base_divisor(&data.main) {
        Ok(g) if g.degree() == 0 => {}
        Ok(g) => violations.push(StableMapViolation::DegenerateMain {
            base_divisor: g.to_string(),
        }),
        Err(_) => violations.push(StableMapViolation::VanishingMain),
    }

    let r = fan.num_rays();
    for (i, att) in data.attachments.iter().enumerate() {
        if att.degree.len() != r {
            violations.push(StableMapViolation::AttachmentLength {
                attachment: i,
                expected: r,
                found: att.degree.len(),
            });
            continue;
        }
        if let Some(ray) = att.degree.0.iter().position(|&d| d < 0) {
            violations.push(StableMapViolation::NegativeAttachmentDegree { attachment: i, ray });
        }
        if !admissible(fan, &att.degree).unwrap_or(false) {
            violations.push(StableMapViolation::InadmissibleAttachmentDegree { attachment: i });
        }
        if att.degree.is_zero() {
            violations.push(StableMapViolation::ZeroAttachmentDegree { attachment: i });
        }
    }
    for i in 0..data.attachments.len() {
        for j in i + 1..data.attachments.len() {
            if data.attachments[i].point.same_point(&data.attachments[j].point) {
                violations.push(StableMapViolation::RepeatedPoint { first: i, second: j });
            }
        }
    }
    StableMapReport { violations }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseResult {
    pub collection: WeakDeltaCollection,
    pub total_degree: Multidegree,
}

pub fn collapse(data: &GenusZeroStableMapData) -> Result<CollapseResult, CollapseError> {
    let report = validate(data);
    if !report.is_valid() {
        return Err(CollapseError::Invalid(report));
    }
    let main = &data.main;
    let mut sections = main.sections().to_vec();
    let mut total = main.degree().clone();
    for att in &data.attachments {
        let ell = linear_form_at(&att.point);
        for (u, &d) in sections.iter_mut().zip(&att.degree.0) {
            *u = u.mul(&ell.pow(d as usize));
        }
        total = total.add(&att.degree);
    }
    let collection = WeakDeltaCollection::new(
        main.fan().clone(),
        total.clone(),
        sections,
        Some(main.trivializations().to_vec()),
    )?;
    debug_assert!(!crate::moduli::in_f_d(&collection));
    Ok(CollapseResult {
        collection,
        total_degree: total,
    })
}

/// Output is nondegenerate exactly when nothing was attached.
pub fn output_nondegenerate(result: &CollapseResult) -> bool {
    is_nondegenerate(&result.collection)
}

/// Precomposition with an automorphism `g` of the source `P^1`.
///
/// Sections become `u(g·z)`. Points move by the adjugate of `g`, which is
/// `g^{-1}` projectively and satisfies `ℓ_p(g·z) = ℓ_{adj(g)·p}(z)` on the
/// nose, so collapsing commutes with reparametrizing exactly.
pub trait Reparametrize: Sized {
    fn reparametrize(&self, g: &Mobius) -> Self;
}

impl Reparametrize for WeakDeltaCollection {
    fn reparametrize(&self, g: &Mobius) -> Self {
        let sections: Vec<BinaryForm> = self.sections().iter().map(|u| u.substitute(g)).collect();
        self.with_sections(sections).expect("substitution preserves degrees")
    }
}

impl Reparametrize for GenusZeroStableMapData {
    fn reparametrize(&self, g: &Mobius) -> Self {
        let adj = g.adjugate();
        Self {
            main: self.main.reparametrize(g),
            attachments: self
                .attachments
                .iter()
                .map(|a| Attachment {
                    point: adj.apply(&a.point),
                    degree: a.degree.clone(),
                })
                .collect(),
        }
    }
}

impl Reparametrize for CollapseResult {
    fn reparametrize(&self, g: &Mobius) -> Self {
        Self {
            collection: self.collection.reparametrize(g),
            total_degree: self.total_degree.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentFile {
    pub point: [String; 2],
    pub degree: Vec<i64>,
}

/// On-disk stable-map data: `{"main": <collection>, "attachments": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableMapFile {
    pub main: CollectionFile,
    #[serde(default)]
    pub attachments: Vec<AttachmentFile>,
}

impl StableMapFile {
    pub fn resolve<F>(&self, resolve: F) -> Result<GenusZeroStableMapData, DeltaError>
    where
        F: FnMut(&str) -> Option<Fan>,
    {
        let main = self.main.resolve(resolve).map_err(|e| match e {
            DeltaError::Field { path, message } => DeltaError::Field {
                path: format!("main.{path}"),
                message,
            },
            e => e,
        })?;
        let mut attachments = Vec::with_capacity(self.attachments.len());
        for (i, att) in self.attachments.iter().enumerate() {
            let coord = |k: usize| {
                att.point[k].trim().parse::<BigRational>().map_err(|e| DeltaError::Field {
                    path: format!("attachments[{i}].point[{k}]"),
                    message: format!("'{}': {e}", att.point[k]),
                })
            };
            let point = ProjectivePoint::new(coord(0)?, coord(1)?).map_err(|e| DeltaError::Field {
                path: format!("attachments[{i}].point"),
                message: e.to_string(),
            })?;
            attachments.push(Attachment {
                point,
                degree: Multidegree(att.degree.clone()),
            });
        }
        Ok(GenusZeroStableMapData { main, attachments })
    }

    pub fn from_data(data: &GenusZeroStableMapData) -> Self {
        Self {
            main: CollectionFile::from_collection(&data.main),
            attachments: data
                .attachments
                .iter()
                .map(|a| AttachmentFile {
                    point: [a.point.a().to_string(), a.point.b().to_string()],
                    degree: a.degree.0.clone(),
                })
                .collect(),
        }
    }
}

/// Convenience constructor used by tests and examples.
pub fn stable_map(
    fan: &Arc<Fan>,
    main_degree: &[i64],
    sections: &[&str],
    attachments: &[((i64, i64), &[i64])],
) -> Result<GenusZeroStableMapData, DeltaError> {
    let forms = sections
        .iter()
        .zip(main_degree)
        .map(|(s, &d)| BinaryForm::parse(s, usize::try_from(d).ok()))
        .collect::<Result<Vec<_>, _>>()?;
    let main = WeakDeltaCollection::new(fan.clone(), Multidegree(main_degree.to_vec()), forms, None)?;
    let attachments = attachments
        .iter()
        .map(|&((a, b), d)| {
            Ok(Attachment {
                point: ProjectivePoint::from_ints(a, b)?,
                degree: Multidegree(d.to_vec()),
            })
        })
        .collect::<Result<Vec<_>, DeltaError>>()?;
    Ok(GenusZeroStableMapData { main, attachments })
}
