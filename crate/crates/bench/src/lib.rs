//! Fixed inputs for the benchmarks in `benches/`.

use std::sync::Arc;

use toric_core::collapse::stable_map;
use toric_core::delta::Multidegree;
use toric_core::{BigRational, Fan, GLSMProblem, GenusZeroStableMapData, IntMatrix, WeakDeltaCollection};

/// A dense `rows x cols` integer matrix with entries in `-7..=7`, from a
/// linear congruential stream.
pub fn dense_matrix(rows: usize, cols: usize, seed: u64) -> IntMatrix {
    let mut state = seed;
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 15) as i64 - 7
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows_with_cols(&data, cols).expect("rectangular")
}

/// A nondegenerate cubic collection on `P^2`.
pub fn cubic_on_p2() -> WeakDeltaCollection {
    let sections = ["z0^3 - z1^3", "z0^2*z1 + 2*z1^3", "z0^3 + z0*z1^2 - z1^3"];
    let forms = sections
        .iter()
        .map(|s| toric_core::BinaryForm::parse(s, Some(3)).expect("form"))
        .collect();
    WeakDeltaCollection::new(Arc::new(Fan::projective_space(2)), Multidegree(vec![3, 3, 3]), forms, None)
        .expect("collection")
}

/// Linear main component on `P^2` with three attached trees.
pub fn stable_map_on_p2() -> GenusZeroStableMapData {
    let p2 = Arc::new(Fan::projective_space(2));
    stable_map(
        &p2,
        &[1, 1, 1],
        &["z0", "z1", "z0 + z1"],
        &[((1, 2), &[1, 1, 1]), ((3, -1), &[2, 2, 2]), ((0, 1), &[1, 1, 1])],
    )
    .expect("stable map")
}

/// Hirzebruch `F_1` charges with every field switched on.
pub fn hirzebruch_problem() -> GLSMProblem {
    let q = IntMatrix::from_rows(&[vec![1i64, -1, 1, 0], vec![0, 1, 0, 1]]).expect("charges");
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    GLSMProblem::new(q, vec![r(2, 1), r(3, 1)], vec![r(1, 1), r(5, 2), r(3, 1), r(1, 3)]).expect("problem")
}
