//! Genus-0 moduli data `Y_d`, `F_d` and `W_d = (Y_d - F_d) / G`.
//!
//! `W_d` is handled through orbit-level predicates and dimension counts
//! only. `w_dim` is the naive `dim Y_d - dim G`, which is the orbit-space
//! dimension when generic stabilizers are trivial.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::delta::{admissible, is_nonvanishing, DeltaError, Multidegree, WeakDeltaCollection};
use crate::fan::Fan;
use crate::forms::BinaryForm;

/// Resampling budget of [`sample`].
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuliError {
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error("no sample outside F_d after {0} rejections")]
    RejectionsExhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliSummary {
    pub degree: Multidegree,
    pub y_dim: usize,
    pub g_dim: usize,
    pub w_dim: i64,
    /// Always true: `w_dim` ignores special stabilizers.
    pub assumes_trivial_generic_stabilizer: bool,
}

fn check_degree(fan: &Fan, d: &Multidegree) -> Result<(), DeltaError> {
    if !admissible(fan, d)? {
        return Err(DeltaError::Inadmissible(d.0.clone()));
    }
    if let Some(ray) = d.0.iter().position(|&x| x < 0) {
        return Err(DeltaError::NegativeDegree { ray, degree: d.0[ray] });
    }
    Ok(())
}

pub fn summarize(fan: &Fan, d: &Multidegree) -> Result<ModuliSummary, ModuliError> {
    check_degree(fan, d)?;
    let y_dim: usize = d.0.iter().map(|&x| x as usize + 1).sum();
    let g_dim = fan.num_rays() - fan.dim();
    Ok(ModuliSummary {
        degree: d.clone(),
        y_dim,
        g_dim,
        w_dim: y_dim as i64 - g_dim as i64,
        assumes_trivial_generic_stabilizer: true,
    })
}

/// Membership in `F_d`: the induced map lands in `V(I)` generically, which
/// on an irreducible curve means everywhere.
pub fn in_f_d(c: &WeakDeltaCollection) -> bool {
    !is_nonvanishing(c)
}

/// A form of degree `deg` with integer coefficients in `[-bound, bound]`.
pub fn random_form<R: Rng>(rng: &mut R, deg: usize, bound: i64) -> BinaryForm {
    let coeffs = (0..=deg)
        .map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-bound..=bound))))
        .collect();
    BinaryForm::from_coeffs(coeffs)
}

/// Draws a point of `Y_d - F_d` with canonical trivializations, advancing
/// `rng`. Draws landing in `F_d` are rejected.
pub fn sample<R: Rng>(
    fan: &Arc<Fan>,
    d: &Multidegree,
    rng: &mut R,
    coeff_bound: i64,
) -> Result<WeakDeltaCollection, ModuliError> {
    check_degree(fan, d)?;
    let bound = coeff_bound.abs();
    for _ in 0..=MAX_REJECTIONS {
        let sections = d.0.iter().map(|&k| random_form(rng, k as usize, bound)).collect();
        let c = WeakDeltaCollection::new(fan.clone(), d.clone(), sections, None)?;
        if is_nonvanishing(&c) {
            return Ok(c);
        }
    }
    Err(ModuliError::RejectionsExhausted(MAX_REJECTIONS))
}

/// [`sample`] from a fresh ChaCha8 stream.
pub fn sample_seeded(
    fan: &Arc<Fan>,
    d: &Multidegree,
    seed: u64,
    coeff_bound: i64,
) -> Result<WeakDeltaCollection, ModuliError> {
    sample(fan, d, &mut ChaCha8Rng::seed_from_u64(seed), coeff_bound)
}
