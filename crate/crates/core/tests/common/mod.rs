//! Seeded generators and independent oracles shared by the integration
//! tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use toric_core::collapse::{Attachment, GenusZeroStableMapData};
use toric_core::delta::{is_nondegenerate, Multidegree, WeakDeltaCollection};
use toric_core::fan::Fan;
use toric_core::forms::{BinaryForm, Mobius, ProjectivePoint};
use toric_core::glsm::GLSMProblem;
use toric_core::lattice::IntMatrix;
use toric_core::moduli::{random_form, sample};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn golden_fans() -> Vec<Fan> {
    let mut fans: Vec<Fan> = (1..=4).map(Fan::projective_space).collect();
    fans.push(Fan::p1xp1());
    fans.extend((0..=2).map(Fan::hirzebruch));
    fans
}

/// A nonzero rational `p/q` with `|p| <= 5`, `1 <= q <= 4`.
pub fn random_unit<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let p = rng.random_range(-5i64..=5);
        if p != 0 {
            return BigRational::new(p.into(), rng.random_range(1i64..=4).into());
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R, bound: i64) -> ProjectivePoint {
    loop {
        let (a, b) = (rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
        if a != 0 || b != 0 {
            return ProjectivePoint::from_ints(a, b).unwrap();
        }
    }
}

pub fn random_linear_form<R: Rng>(rng: &mut R) -> BinaryForm {
    loop {
        let f = random_form(rng, 1, 4);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_mobius<R: Rng>(rng: &mut R) -> Mobius {
    loop {
        let mut e = [[0i64; 2]; 2];
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.random_range(-3..=3);
            }
        }
        if let Ok(g) = Mobius::from_ints(e) {
            return g;
        }
    }
}

/// Nondegenerate sample from the seeded stream.
pub fn nondegenerate_sample<R: Rng>(fan: &Arc<Fan>, d: &Multidegree, rng: &mut R, bound: i64) -> WeakDeltaCollection {
    loop {
        let c = sample(fan, d, rng, bound).unwrap();
        if is_nondegenerate(&c) {
            return c;
        }
    }
}

/// Sample with every section nonzero.
pub fn full_sample<R: Rng>(fan: &Arc<Fan>, d: &Multidegree, rng: &mut R, bound: i64) -> WeakDeltaCollection {
    loop {
        let c = sample(fan, d, rng, bound).unwrap();
        if c.sections().iter().all(|u| !u.is_zero()) {
            return c;
        }
    }
}

/// `λ_ρ = ∏_a s_a^{Q_{aρ}}`; lands in `G` because `Q B = 0`.
pub fn gauge_element(charges: &IntMatrix, s: &[BigRational]) -> Vec<BigRational> {
    (0..charges.cols())
        .map(|rho| {
            (0..charges.rows()).fold(BigRational::one(), |acc, a| {
                let e: i64 = (&charges[(a, rho)]).try_into().unwrap();
                let base = if e < 0 { s[a].recip() } else { s[a].clone() };
                (0..e.unsigned_abs()).fold(acc, |acc, _| acc * &base)
            })
        })
        .collect()
}

/// Wall curve classes with nonnegative entries, deduplicated.
pub fn effective_classes(fan: &Fan) -> Vec<Vec<i64>> {
    let classes: Vec<Vec<i64>> = toric_core::fan::walls(fan)
        .unwrap()
        .into_iter()
        .map(|w| w.relation.iter().map(|x| x.try_into().unwrap()).collect::<Vec<i64>>())
        .filter(|r| r.iter().all(|&x| x >= 0))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(!classes.is_empty());
    classes
}

/// A random nonzero combination of `classes` with coefficients in `0..=2`:
/// admissible, nonnegative and nonzero.
pub fn random_effective_degree<R: Rng>(classes: &[Vec<i64>], rng: &mut R) -> Multidegree {
    loop {
        let mut d = vec![0i64; classes[0].len()];
        for c in classes {
            let k = rng.random_range(0..=2);
            for (di, ci) in d.iter_mut().zip(c) {
                *di += k * ci;
            }
        }
        if d.iter().any(|&x| x != 0) {
            return Multidegree(d);
        }
    }
}

pub fn random_stable_map<R: Rng>(fan: &Arc<Fan>, classes: &[Vec<i64>], rng: &mut R) -> GenusZeroStableMapData {
    let main_degree = random_effective_degree(classes, rng);
    let main = nondegenerate_sample(fan, &main_degree, rng, 3);
    let count = rng.random_range(0..=3);
    let mut attachments: Vec<Attachment> = Vec::new();
    while attachments.len() < count {
        let point = random_point(rng, 5);
        if attachments.iter().any(|a| a.point.same_point(&point)) {
            continue;
        }
        attachments.push(Attachment {
            point,
            degree: random_effective_degree(classes, rng),
        });
    }
    GenusZeroStableMapData { main, attachments }
}

/// Ray indices whose section vanishes at `p`.
pub fn zero_set(c: &WeakDeltaCollection, p: &ProjectivePoint) -> BTreeSet<usize> {
    (0..c.sections().len()).filter(|&i| c.sections()[i].vanishes_at(p)).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// All rational projective roots of `f`, by the rational root theorem on
/// the integer-scaled coefficients. Independent of the gcd machinery.
pub fn rational_roots(f: &BinaryForm) -> Vec<ProjectivePoint> {
    assert!(!f.is_zero());
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut c: Vec<BigInt> = f.coeffs().iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    // c_k multiplies z0^{d-k} z1^k: a zero leading entry means z1 | f
    if c[0].is_zero() {
        roots.push(ProjectivePoint::from_ints(1, 0).unwrap());
        while c.first().is_some_and(Zero::is_zero) {
            c.remove(0);
        }
    }
    if c.last().is_some_and(Zero::is_zero) {
        roots.push(ProjectivePoint::from_ints(0, 1).unwrap());
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
    }
    if c.len() <= 1 {
        return roots;
    }
    let reduced = BinaryForm::from_coeffs(c.iter().cloned().map(BigRational::from_integer).collect());
    let (lead, trail) = (c[c.len() - 1].clone(), c[0].clone());
    for a in divisors(&lead) {
        for b in divisors(&trail) {
            for sign in [1, -1] {
                let (pa, pb) = (BigInt::from(sign) * &a, b.clone());
                if pa.gcd(&pb) != BigInt::one() {
                    continue;
                }
                let p = ProjectivePoint::new(BigRational::from_integer(pa), BigRational::from_integer(pb)).unwrap();
                if reduced.vanishes_at(&p) && !roots.iter().any(|r| r.same_point(&p)) {
                    roots.push(p);
                }
            }
        }
    }
    roots
}

/// Smallest admissible `e ∈ {0,1,2}^{Δ(1)}` (all-ones first) that is
/// positive on every maximal-cone complement, so `u_ρ -> ℓ^{e_ρ} u_ρ`
/// multiplies every cone product by a power of `ℓ`.
pub fn planting_degree(fan: &Fan) -> Multidegree {
    let r = fan.num_rays();
    let ok = |e: &[i64]| {
        toric_core::delta::admissible(fan, &Multidegree(e.to_vec())).unwrap()
            && fan
                .max_cones
                .iter()
                .all(|cone| (0..r).filter(|i| !cone.contains(i)).any(|i| e[i] > 0))
    };
    let ones = vec![1i64; r];
    if ok(&ones) {
        return Multidegree(ones);
    }
    let mut best: Option<Vec<i64>> = None;
    for code in 0..3usize.pow(r as u32) {
        let e: Vec<i64> = (0..r).map(|i| ((code / 3usize.pow(i as u32)) % 3) as i64).collect();
        if ok(&e) && best.as_ref().is_none_or(|b| e.iter().sum::<i64>() < b.iter().sum::<i64>()) {
            best = Some(e);
        }
    }
    Multidegree(best.expect("some planting degree"))
}

pub fn plant(c: &WeakDeltaCollection, ell: &BinaryForm) -> WeakDeltaCollection {
    let e = planting_degree(c.fan());
    c.with_sections(
        c.sections()
            .iter()
            .zip(&e.0)
            .map(|(u, &k)| u.mul(&ell.pow(k as usize)))
            .collect(),
    )
    .unwrap()
}

/// Random small charge matrix, FI vector and amplitudes.
pub fn random_problem<R: Rng>(rng: &mut R) -> GLSMProblem {
    let k = rng.random_range(1..=3);
    let n = rng.random_range(2..=5);
    let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(-2..=2)).collect()).collect();
    let charges = IntMatrix::from_rows_with_cols(&rows, n).unwrap();
    let fi = (0..k).map(|_| q(rng.random_range(-3..=3))).collect();
    let amplitudes = (0..n)
        .map(|_| BigRational::new(rng.random_range(0i64..=6).into(), rng.random_range(1i64..=3).into()))
        .collect();
    GLSMProblem::new(charges, fi, amplitudes).unwrap()
}

/// Random instance on a golden charge matrix: random support, amplitudes
/// on it, integer FI parameters in `[-3, 3]`.
pub fn golden_instance<R: Rng>(charges: &IntMatrix, rng: &mut R) -> GLSMProblem {
    let n = charges.cols();
    let amplitudes = (0..n)
        .map(|_| {
            if rng.random_bool(0.35) {
                q(0)
            } else {
                BigRational::new(rng.random_range(1i64..=9).into(), rng.random_range(1i64..=4).into())
            }
        })
        .collect();
    let fi = (0..charges.rows()).map(|_| q(rng.random_range(-3..=3))).collect();
    GLSMProblem::new(charges.clone(), fi, amplitudes).unwrap()
}
