//! The Cox quotient `X = (C^{Δ(1)} - V(I)) / G` of a smooth complete fan.
//!
//! The charge matrix `Q` has the integer relations among the rays as rows,
//! so its columns are the `G`-weights of the homogeneous coordinates.
//! `V(I)` is recorded twice: by the irrelevant-ideal generators (one
//! monomial per maximal cone) and by the primitive collections.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::fan::{require_smooth_complete, Fan, FanError};
use crate::lattice::{integer_kernel, smith_normal_form, IntMatrix};

/// Largest ray count for exhaustive subset searches.
pub const MAX_SUBSET_RAYS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("Picard group has torsion {0:?}; refusing to build a presentation")]
    Torsion(Vec<BigInt>),
    #[error("{rays} rays exceeds the subset-search limit of {limit}")]
    TooManyRays { rays: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxPresentation {
    /// `|Δ(1)| x n`, one ray per row.
    pub ray_matrix: IntMatrix,
    /// `(|Δ(1)| - n) x |Δ(1)|`, rows annihilate the image of `M`.
    pub charge_matrix: IntMatrix,
    pub pic_rank: usize,
    pub pic_torsion: Vec<BigInt>,
    /// Ray supports of `∏_{ρ ⊄ σ} x_ρ`, one per maximal cone in fan order.
    pub irrelevant_generators: Vec<Vec<usize>>,
    pub primitive_collections: Vec<Vec<usize>>,
}

impl CoxPresentation {
    pub fn num_rays(&self) -> usize {
        self.ray_matrix.rows()
    }

    /// Column `i` of `Q`: the charge of homogeneous coordinate `x_i`.
    pub fn charge(&self, i: usize) -> Vec<BigInt> {
        self.charge_matrix.column(i)
    }
}

pub fn cox_presentation(fan: &Fan) -> Result<CoxPresentation, CoxError> {
    require_smooth_complete(fan)?;
    let r = fan.num_rays();
    if r > MAX_SUBSET_RAYS {
        return Err(CoxError::TooManyRays {
            rays: r,
            limit: MAX_SUBSET_RAYS,
        });
    }
    let b = fan.ray_matrix();

    // Pic X = Z^{Δ(1)} / im(M); torsion shows up as invariant factors > 1.
    let pic_torsion: Vec<BigInt> = smith_normal_form(&b)
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    if !pic_torsion.is_empty() {
        return Err(CoxError::Torsion(pic_torsion));
    }

    let relations = integer_kernel(&b.transpose());
    let charge_matrix = IntMatrix::from_rows_with_cols(&relations, r).expect("kernel vectors");
    let pic_rank = charge_matrix.rows();

    let irrelevant_generators = fan
        .max_cones
        .iter()
        .map(|cone| (0..r).filter(|i| !cone.contains(i)).collect())
        .collect();

    Ok(CoxPresentation {
        ray_matrix: b,
        charge_matrix,
        pic_rank,
        pic_torsion,
        irrelevant_generators,
        primitive_collections: primitive_collections(fan)?,
    })
}

/// Minimal ray sets spanning no cone, sorted lexicographically.
pub fn primitive_collections(fan: &Fan) -> Result<Vec<Vec<usize>>, CoxError> {
    let r = fan.num_rays();
    if r > MAX_SUBSET_RAYS {
        return Err(CoxError::TooManyRays {
            rays: r,
            limit: MAX_SUBSET_RAYS,
        });
    }
    let cone_masks: Vec<u32> = fan
        .max_cones
        .iter()
        .map(|c| c.iter().fold(0u32, |m, &i| m | (1 << i)))
        .collect();
    let in_cone = |mask: u32| cone_masks.iter().any(|&c| mask & !c == 0);
    let mut out: Vec<Vec<usize>> = (1u32..(1 << r))
        .filter(|&mask| {
            !in_cone(mask)
                && (0..r)
                    .filter(|&i| mask & (1 << i) != 0)
                    .all(|i| in_cone(mask & !(1 << i)))
        })
        .map(|mask| (0..r).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Whether a point whose vanishing coordinates are exactly `zero_set` lies
/// outside `V(I)`: some maximal cone contains every vanishing coordinate.
pub fn outside_irrelevant_locus(pres: &CoxPresentation, zero_set: &BTreeSet<usize>) -> bool {
    pres.irrelevant_generators
        .iter()
        .any(|complement| complement.iter().all(|i| !zero_set.contains(i)))
}
