//! Smooth simplicial fans: validation, smoothness, completeness, walls and
//! the nef check on toric prime divisors.
//!
//! Rays keep the order they were given in and every output indexes rays by
//! that order. Only simplicial fans are handled.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{inverse_rational, smith_normal_form, solve_integer, IntMatrix};
use crate::lp::{self, Constraint, Relation};

/// Directions sampled by the completeness cross-check.
pub const COMPLETENESS_SAMPLES: usize = 1000;
const COMPLETENESS_SEED: u64 = 0x746f_7269_635f_6661;
const SAMPLE_RANGE: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("invalid fan: {0}")]
    Invalid(FanReport),
    #[error("fan is not smooth (cone {cone} is not unimodular)")]
    NotSmooth { cone: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("fan JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub name: String,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(name: impl Into<String>, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Self {
        Self {
            name: name.into(),
            rays,
            max_cones,
        }
    }

    /// Lattice rank, read off the first ray.
    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows_with_cols(&self.rays, self.dim()).expect("rectangular rays")
    }

    pub fn ray(&self, i: usize) -> Vec<BigInt> {
        self.rays[i].iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn from_json_str(s: &str) -> Result<Self, FanError> {
        serde_json::from_str(s).map_err(|e| FanError::Json(e.to_string()))
    }

    /// Canonical JSON text: keys in the order `name`, `rays`, `max_cones`,
    /// one ray or cone per line. Parsing this text and writing it again
    /// gives identical bytes.
    pub fn to_json_string(&self) -> String {
        fn list<T: Serialize>(items: &[T]) -> String {
            if items.is_empty() {
                return "[]".to_string();
            }
            let body: Vec<String> = items
                .iter()
                .map(|x| format!("    {}", serde_json::to_string(x).expect("serializable")))
                .collect();
            format!("[\n{}\n  ]", body.join(",\n"))
        }
        format!(
            "{{\n  \"name\": {},\n  \"rays\": {},\n  \"max_cones\": {}\n}}\n",
            serde_json::to_string(&self.name).expect("string"),
            list(&self.rays),
            list(&self.max_cones)
        )
    }

    /// Projective space `P^n`: rays `e_1..e_n, -(e_1+..+e_n)`, every
    /// `n`-subset of rays a maximal cone.
    pub fn projective_space(n: usize) -> Self {
        assert!(n >= 1);
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let max_cones = (0..=n)
            .rev()
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Self::new(format!("P{n}"), rays, max_cones)
    }

    /// `P^1 x P^1` with rays ordered `e1, -e1, e2, -e2`.
    pub fn p1xp1() -> Self {
        Self::new(
            "P1xP1",
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
    }

    /// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Self {
        Self::new(
            format!("F{a}"),
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
    }

    /// Built-in fans by name: `P<n>`, `P1xP1`, `F<a>`.
    pub fn named(name: &str) -> Option<Self> {
        if name == "P1xP1" {
            return Some(Self::p1xp1());
        }
        if let Some(n) = name.strip_prefix('P').and_then(|s| s.parse::<usize>().ok()) {
            return (1..=8).contains(&n).then(|| Self::projective_space(n));
        }
        if let Some(a) = name.strip_prefix('F').and_then(|s| s.parse::<i64>().ok()) {
            return (0..=8).contains(&a).then(|| Self::hirzebruch(a));
        }
        None
    }

    /// Whether the ray set `rays` spans a cone, i.e. lies in one maximal cone.
    pub fn spans_cone(&self, rays: &BTreeSet<usize>) -> bool {
        self.max_cones
            .iter()
            .any(|c| rays.iter().all(|r| c.contains(r)))
    }

    fn cone_matrix(&self, cone: usize) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.max_cones[cone].iter().map(|&r| self.rays[r].clone()).collect();
        IntMatrix::from_rows_with_cols(&rows, self.dim()).expect("rectangular")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanViolation {
    NoRays,
    RayDimension { ray: usize, expected: usize, found: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    EmptyCone { cone: usize },
    ConeIndexOutOfRange { cone: usize, index: usize },
    RepeatedIndexInCone { cone: usize, index: usize },
    ConeNotSimplicial { cone: usize },
    DuplicateCone { first: usize, second: usize },
    NonMaximalCone { cone: usize, containing: usize },
    BadIntersection { first: usize, second: usize },
    UnusedRay { ray: usize },
    RaysDoNotSpan,
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FanViolation::*;
        match self {
            NoRays => write!(f, "fan has no rays"),
            RayDimension { ray, expected, found } => {
                write!(f, "ray {ray} has {found} coordinates, expected {expected}")
            }
            ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            DuplicateRay { first, second } => write!(f, "rays {first} and {second} coincide"),
            EmptyCone { cone } => write!(f, "cone {cone} is empty"),
            ConeIndexOutOfRange { cone, index } => {
                write!(f, "cone {cone} refers to missing ray {index}")
            }
            RepeatedIndexInCone { cone, index } => write!(f, "cone {cone} repeats ray {index}"),
            ConeNotSimplicial { cone } => write!(f, "cone {cone} generators are linearly dependent"),
            DuplicateCone { first, second } => write!(f, "cones {first} and {second} coincide"),
            NonMaximalCone { cone, containing } => {
                write!(f, "cone {cone} is a face of cone {containing}")
            }
            BadIntersection { first, second } => {
                write!(f, "cones {first} and {second} do not meet in a common face")
            }
            UnusedRay { ray } => write!(f, "ray {ray} lies in no maximal cone"),
            RaysDoNotSpan => write!(f, "rays do not span the ambient space"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub violations: Vec<FanViolation>,
}

impl FanReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_fan(fan: &Fan) -> FanReport {
    use FanViolation::*;
    let mut v = Vec::new();
    let n = fan.dim();
    if fan.rays.is_empty() || n == 0 {
        v.push(NoRays);
        return FanReport { violations: v };
    }
    let mut ray_ok = vec![true; fan.num_rays()];
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != n {
            v.push(RayDimension {
                ray: i,
                expected: n,
                found: r.len(),
            });
            ray_ok[i] = false;
            continue;
        }
        let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            v.push(ZeroRay { ray: i });
            ray_ok[i] = false;
        } else if g != 1 {
            v.push(NonPrimitiveRay { ray: i });
        }
    }
    for i in 0..fan.num_rays() {
        for j in i + 1..fan.num_rays() {
            if fan.rays[i] == fan.rays[j] {
                v.push(DuplicateRay { first: i, second: j });
            }
        }
    }
    if ray_ok.iter().any(|ok| !ok) {
        return FanReport { violations: v };
    }

    let mut cone_ok = vec![true; fan.max_cones.len()];
    for (c, cone) in fan.max_cones.iter().enumerate() {
        if cone.is_empty() {
            v.push(EmptyCone { cone: c });
            cone_ok[c] = false;
            continue;
        }
        let mut seen = BTreeSet::new();
        for &i in cone {
            if i >= fan.num_rays() {
                v.push(ConeIndexOutOfRange { cone: c, index: i });
                cone_ok[c] = false;
            } else if !seen.insert(i) {
                v.push(RepeatedIndexInCone { cone: c, index: i });
                cone_ok[c] = false;
            }
        }
        if cone_ok[c] && fan.cone_matrix(c).rank() != cone.len() {
            v.push(ConeNotSimplicial { cone: c });
            cone_ok[c] = false;
        }
    }

    let sets: Vec<BTreeSet<usize>> = fan
        .max_cones
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if !(cone_ok[a] && cone_ok[b]) {
                continue;
            }
            if sets[a] == sets[b] {
                v.push(DuplicateCone { first: a, second: b });
            } else if sets[a].is_subset(&sets[b]) {
                v.push(NonMaximalCone { cone: a, containing: b });
            } else if sets[b].is_subset(&sets[a]) {
                v.push(NonMaximalCone { cone: b, containing: a });
            } else if !meets_in_common_face(fan, &sets[a], &sets[b]) {
                v.push(BadIntersection { first: a, second: b });
            }
        }
    }

    let used: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    for i in 0..fan.num_rays() {
        if !used.contains(&i) {
            v.push(UnusedRay { ray: i });
        }
    }
    if fan.ray_matrix().rank() != n {
        v.push(RaysDoNotSpan);
    }
    FanReport { violations: v }
}

/// For simplicial cones `σ = cone(S)`, `τ = cone(T)`: `σ ∩ τ = cone(S ∩ T)`
/// iff no nonnegative relation `Σ a_s n_s = Σ b_t n_t` puts positive weight on
/// a ray outside `S ∩ T`.
fn meets_in_common_face(fan: &Fan, s: &BTreeSet<usize>, t: &BTreeSet<usize>) -> bool {
    let vars: Vec<(usize, bool)> = s
        .iter()
        .map(|&i| (i, true))
        .chain(t.iter().map(|&i| (i, false)))
        .collect();
    let k = vars.len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut cons = Vec::new();
    for a in 0..fan.dim() {
        let coeffs = vars
            .iter()
            .map(|&(r, left)| if left { q(fan.rays[r][a]) } else { q(-fan.rays[r][a]) })
            .collect();
        cons.push(Constraint::new(coeffs, Relation::Eq, BigRational::zero()));
    }
    for i in 0..k {
        let mut e = vec![BigRational::zero(); k];
        e[i] = -BigRational::one();
        cons.push(Constraint::new(e, Relation::Le, BigRational::zero()));
    }
    let outside: Vec<BigRational> = vars
        .iter()
        .map(|&(r, _)| if s.contains(&r) && t.contains(&r) { q(0) } else { q(1) })
        .collect();
    cons.push(Constraint::new(outside, Relation::Eq, BigRational::one()));
    !lp::is_feasible(k, &cons)
}

fn require_valid(fan: &Fan) -> Result<(), FanError> {
    let report = validate_fan(fan);
    if report.is_valid() {
        Ok(())
    } else {
        Err(FanError::Invalid(report))
    }
}

/// Every maximal cone's generators extend to a lattice basis.
pub fn is_smooth(fan: &Fan) -> Result<bool, FanError> {
    require_valid(fan)?;
    Ok(first_singular_cone(fan).is_none())
}

fn first_singular_cone(fan: &Fan) -> Option<usize> {
    (0..fan.max_cones.len()).find(|&c| {
        let snf = smith_normal_form(&fan.cone_matrix(c));
        snf.invariant_factors().iter().any(|d| !d.is_one())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub full_dimensional: bool,
    /// Every facet of every maximal cone lies in exactly two maximal cones.
    pub closed_pseudomanifold: bool,
    pub connected: bool,
    pub samples: usize,
    pub samples_covered: usize,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.full_dimensional
            && self.closed_pseudomanifold
            && self.connected
            && self.samples_covered == self.samples
    }
}

/// Maximal cones containing `facet` (as a ray subset).
fn cones_containing(fan: &Fan, facet: &BTreeSet<usize>) -> Vec<usize> {
    (0..fan.max_cones.len())
        .filter(|&c| facet.iter().all(|r| fan.max_cones[c].contains(r)))
        .collect()
}

/// The combinatorial pseudomanifold test hardened by seeded random
/// directions, each of which must land in some maximal cone. This is a
/// heuristic-hardened check, not a certified decision procedure.
pub fn completeness_report(fan: &Fan) -> Result<CompletenessReport, FanError> {
    require_valid(fan)?;
    let n = fan.dim();
    let cones = &fan.max_cones;
    let full_dimensional = cones.iter().all(|c| c.len() == n);

    let mut closed = full_dimensional;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); cones.len()];
    if full_dimensional {
        for (c, cone) in cones.iter().enumerate() {
            for skip in cone {
                let facet: BTreeSet<usize> = cone.iter().copied().filter(|r| r != skip).collect();
                let owners = cones_containing(fan, &facet);
                if owners.len() != 2 {
                    closed = false;
                }
                adjacency[c].extend(owners.into_iter().filter(|&o| o != c));
            }
        }
    }

    let mut seen = vec![false; cones.len()];
    let mut queue = VecDeque::from([0usize]);
    if !cones.is_empty() {
        seen[0] = true;
    }
    while let Some(c) = queue.pop_front() {
        for &d in &adjacency[c] {
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    let connected = !cones.is_empty() && seen.iter().all(|&s| s);

    let inverses: Vec<Vec<Vec<BigRational>>> = if full_dimensional {
        (0..cones.len())
            .filter_map(|c| {
                // columns = generators; inverse gives cone coordinates
                let cols: Vec<Vec<BigRational>> = (0..n)
                    .map(|a| {
                        cones[c]
                            .iter()
                            .map(|&r| BigRational::from_integer(BigInt::from(fan.rays[r][a])))
                            .collect()
                    })
                    .collect();
                inverse_rational(&cols)
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(COMPLETENESS_SEED);
    let mut covered = 0;
    let mut drawn = 0;
    while drawn < COMPLETENESS_SAMPLES {
        let x: Vec<BigRational> = (0..n)
            .map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE))))
            .collect();
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        drawn += 1;
        let inside = inverses.iter().any(|inv| {
            inv.iter().all(|row| {
                let coord: BigRational = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                !coord.is_negative()
            })
        });
        if inside {
            covered += 1;
        }
    }

    Ok(CompletenessReport {
        full_dimensional,
        closed_pseudomanifold: closed,
        connected,
        samples: COMPLETENESS_SAMPLES,
        samples_covered: covered,
    })
}

pub fn is_complete(fan: &Fan) -> Result<bool, FanError> {
    Ok(completeness_report(fan)?.is_complete())
}

/// Errors unless the fan is valid, smooth and complete.
pub fn require_smooth_complete(fan: &Fan) -> Result<(), FanError> {
    require_valid(fan)?;
    if let Some(cone) = first_singular_cone(fan) {
        return Err(FanError::NotSmooth { cone });
    }
    if !completeness_report(fan)?.is_complete() {
        return Err(FanError::NotComplete);
    }
    Ok(())
}

/// A codimension-one cone shared by two maximal cones, with the linear
/// relation `n_left + n_right + Σ c_i n_i = 0` over the wall rays. The
/// relation doubles as the class of the torus-invariant curve of the wall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub wall_rays: Vec<usize>,
    pub left_cone: usize,
    pub right_cone: usize,
    #[serde(serialize_with = "crate::json::serialize_bigint_vec")]
    pub relation: Vec<BigInt>,
}

pub fn walls(fan: &Fan) -> Result<Vec<Wall>, FanError> {
    require_smooth_complete(fan)?;
    let cones = &fan.max_cones;
    let mut found: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (c, cone) in cones.iter().enumerate() {
        for skip in cone {
            let facet: BTreeSet<usize> = cone.iter().copied().filter(|r| r != skip).collect();
            for other in cones_containing(fan, &facet) {
                if other > c {
                    found.insert((c, other), facet.iter().copied().collect());
                }
            }
        }
    }
    let mut out = Vec::with_capacity(found.len());
    for ((left, right), wall_rays) in found {
        let opposite = |c: usize| {
            *cones[c]
                .iter()
                .find(|r| !wall_rays.contains(r))
                .expect("one ray off the wall")
        };
        let (a, b) = (opposite(left), opposite(right));
        // columns n_a, wall rays; solve for -n_b
        let mut basis = vec![fan.ray(a)];
        basis.extend(wall_rays.iter().map(|&r| fan.ray(r)));
        let m = IntMatrix::from_rows(&basis).expect("rectangular").transpose();
        let target: Vec<BigInt> = fan.ray(b).into_iter().map(|x| -x).collect();
        let x = solve_integer(&m, &target)
            .expect("square system")
            .ok_or(FanError::NotSmooth { cone: left })?;
        let mut relation = vec![BigInt::zero(); fan.num_rays()];
        relation[b] = BigInt::one();
        relation[a] = x[0].clone();
        for (k, &r) in wall_rays.iter().enumerate() {
            relation[r] = x[k + 1].clone();
        }
        if !relation[a].is_one() {
            return Err(FanError::NotSmooth { cone: left });
        }
        out.push(Wall {
            wall_rays,
            left_cone: left,
            right_cone: right,
            relation,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorNef {
    pub ray: usize,
    /// Smallest degree of `O(D_ρ)` on a wall curve.
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub min_wall_degree: BigInt,
    pub nef: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefReport {
    pub divisors: Vec<DivisorNef>,
    pub all_nef: bool,
}

/// Whether every toric prime divisor is nef. Used as a checkable stand-in
/// for convexity of the toric variety ("convexity proxy"); it is not claimed
/// to be equivalent to convexity.
pub fn prime_divisors_nef(fan: &Fan) -> Result<NefReport, FanError> {
    let walls = walls(fan)?;
    let divisors: Vec<DivisorNef> = (0..fan.num_rays())
        .map(|ray| {
            let min = walls
                .iter()
                .map(|w| w.relation[ray].clone())
                .min()
                .unwrap_or_else(BigInt::zero);
            DivisorNef {
                ray,
                nef: !min.is_negative(),
                min_wall_degree: min,
            }
        })
        .collect();
    let all_nef = divisors.iter().all(|d| d.nef);
    Ok(NefReport { divisors, all_nef })
}

/// `Σ_ρ d_ρ n_ρ`, the obstruction for a degree vector to be a curve class.
pub fn weighted_ray_sum(fan: &Fan, weights: &[BigInt]) -> Vec<BigInt> {
    let b = fan.ray_matrix();
    b.transpose().mul_vec(weights).expect("one weight per ray")
}
