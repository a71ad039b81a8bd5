//! Exact rational feasibility by Fourier–Motzkin elimination.
//!
//! Systems here are tiny (a handful of variables), so plain elimination
//! with duplicate pruning is fast enough and never rounds. Feasible
//! systems return an explicit witness point recovered by back-substitution,
//! which callers use as a certificate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `a·x <= b`
    Le,
    /// `a·x < b`
    Lt,
    /// `a·x == b`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    /// `a·x >= b`, stored as `-a·x <= -b`.
    pub fn ge(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::new(coeffs.into_iter().map(|c| -c).collect(), Relation::Le, -rhs)
    }

    /// `a·x > b`, stored as `-a·x < -b`.
    pub fn gt(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::new(coeffs.into_iter().map(|c| -c).collect(), Relation::Lt, -rhs)
    }

    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        let lhs: BigRational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// One inequality during elimination: `coeffs·x (<|<=) rhs`.
#[derive(Debug, Clone)]
struct Ineq {
    coeffs: Vec<BigRational>,
    strict: bool,
    rhs: BigRational,
}

impl Ineq {
    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in &mut self.coeffs {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn constant_ok(&self) -> bool {
        if self.strict {
            self.rhs.is_positive()
        } else {
            !self.rhs.is_negative()
        }
    }
}

/// `x_var = (rhs - Σ_{k != var} coeffs_k x_k) / coeffs_var`
struct Substitution {
    var: usize,
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

/// Returns some `x` satisfying every constraint, or `None` if the system is
/// infeasible. All constraints must have `nvars` coefficients.
pub fn find_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    debug_assert!(constraints.iter().all(|c| c.coeffs.len() == nvars));
    let mut eqs: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        match c.relation {
            Relation::Eq => eqs.push((c.coeffs.clone(), c.rhs.clone())),
            Relation::Le | Relation::Lt => ineqs.push(Ineq {
                coeffs: c.coeffs.clone(),
                strict: c.relation == Relation::Lt,
                rhs: c.rhs.clone(),
            }),
        }
    }

    // Gaussian elimination of equalities.
    let mut subs: Vec<Substitution> = Vec::new();
    while let Some((coeffs, rhs)) = eqs.pop() {
        let Some(var) = coeffs.iter().position(|c| !c.is_zero()) else {
            if rhs.is_zero() {
                continue;
            }
            return None;
        };
        let pivot = coeffs[var].clone();
        let coeffs: Vec<BigRational> = coeffs.iter().map(|c| c / &pivot).collect();
        let rhs = rhs / &pivot;
        let eliminate = |row: &mut Vec<BigRational>, b: &mut BigRational| {
            let f = row[var].clone();
            if f.is_zero() {
                return;
            }
            for (r, c) in row.iter_mut().zip(&coeffs) {
                *r -= &f * c;
            }
            *b -= &f * &rhs;
        };
        for (row, b) in eqs.iter_mut() {
            eliminate(row, b);
        }
        for q in ineqs.iter_mut() {
            eliminate(&mut q.coeffs, &mut q.rhs);
        }
        subs.push(Substitution { var, coeffs, rhs });
    }

    let substituted: Vec<bool> = {
        let mut s = vec![false; nvars];
        for sub in &subs {
            s[sub.var] = true;
        }
        s
    };

    // Fourier–Motzkin on the remaining free variables.
    let mut current = prune(ineqs)?;
    let mut history: Vec<(usize, Vec<Ineq>)> = Vec::new();
    let mut free: Vec<usize> = (0..nvars).filter(|&j| !substituted[j]).collect();
    while !free.is_empty() {
        // cheapest variable: fewest generated pairs
        let (pos, var) = free
            .iter()
            .enumerate()
            .min_by_key(|(_, &j)| {
                let pos = current.iter().filter(|q| q.coeffs[j].is_positive()).count();
                let neg = current.iter().filter(|q| q.coeffs[j].is_negative()).count();
                (pos * neg, j)
            })
            .map(|(p, &j)| (p, j))
            .expect("nonempty");
        free.remove(pos);

        let (involved, rest): (Vec<Ineq>, Vec<Ineq>) =
            current.into_iter().partition(|q| !q.coeffs[var].is_zero());
        let uppers: Vec<&Ineq> = involved.iter().filter(|q| q.coeffs[var].is_positive()).collect();
        let lowers: Vec<&Ineq> = involved.iter().filter(|q| q.coeffs[var].is_negative()).collect();
        let mut next = rest;
        for up in &uppers {
            for lo in &lowers {
                let a = up.coeffs[var].clone();
                let b = -lo.coeffs[var].clone();
                // b*up + a*lo cancels var
                let coeffs: Vec<BigRational> = up
                    .coeffs
                    .iter()
                    .zip(&lo.coeffs)
                    .map(|(u, l)| &b * u + &a * l)
                    .collect();
                next.push(Ineq {
                    coeffs,
                    strict: up.strict || lo.strict,
                    rhs: &b * &up.rhs + &a * &lo.rhs,
                });
            }
        }
        history.push((var, involved));
        current = prune(next)?;
    }

    // Back-substitution.
    let mut x = vec![BigRational::zero(); nvars];
    for (var, involved) in history.iter().rev() {
        x[*var] = pick_value(*var, involved, &x);
    }
    for sub in subs.iter().rev() {
        let mut val = sub.rhs.clone();
        for (k, c) in sub.coeffs.iter().enumerate() {
            if k != sub.var && !c.is_zero() {
                val -= c * &x[k];
            }
        }
        x[sub.var] = val;
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

pub fn is_feasible(nvars: usize, constraints: &[Constraint]) -> bool {
    find_point(nvars, constraints).is_some()
}

/// Normalizes, drops trivial rows and keeps the tightest of duplicate rows.
/// `None` when a constant row is violated.
fn prune(ineqs: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut best: BTreeMap<Vec<BigRational>, Ineq> = BTreeMap::new();
    for q in ineqs {
        if q.is_constant() {
            if !q.constant_ok() {
                return None;
            }
            continue;
        }
        let q = q.normalized();
        match best.get(&q.coeffs) {
            Some(old) if old.rhs < q.rhs || (old.rhs == q.rhs && (old.strict || !q.strict)) => {}
            _ => {
                best.insert(q.coeffs.clone(), q);
            }
        }
    }
    Some(best.into_values().collect())
}

fn pick_value(var: usize, involved: &[Ineq], x: &[BigRational]) -> BigRational {
    let mut lower: Option<(BigRational, bool)> = None;
    let mut upper: Option<(BigRational, bool)> = None;
    for q in involved {
        let a = &q.coeffs[var];
        let mut rest = q.rhs.clone();
        for (k, c) in q.coeffs.iter().enumerate() {
            if k != var && !c.is_zero() {
                rest -= c * &x[k];
            }
        }
        let bound = rest / a;
        if a.is_positive() {
            let tighter = match &upper {
                None => true,
                Some((u, s)) => bound < *u || (bound == *u && q.strict && !s),
            };
            if tighter {
                upper = Some((bound, q.strict));
            }
        } else {
            let tighter = match &lower {
                None => true,
                Some((l, s)) => bound > *l || (bound == *l && q.strict && !s),
            };
            if tighter {
                lower = Some((bound, q.strict));
            }
        }
    }
    let one = BigRational::one();
    match (lower, upper) {
        (None, None) => BigRational::zero(),
        (Some((l, _)), None) => l + one,
        (None, Some((u, _))) => u - one,
        (Some((l, ls)), Some((u, us))) => {
            if l == u && !ls && !us {
                l
            } else {
                (l + u) / BigRational::from_integer(BigInt::from(2))
            }
        }
    }
}

/// Coefficients `λ` with `Σ λ_i g_i = point` and `λ >= 0` (`λ > 0` when
/// `strict`), i.e. a certificate that `point` lies in the cone (its relative
/// interior when `strict`) spanned by `generators`.
pub fn cone_combination(
    generators: &[Vec<BigRational>],
    point: &[BigRational],
    strict: bool,
) -> Option<Vec<BigRational>> {
    let k = generators.len();
    let dim = point.len();
    let mut cons = Vec::with_capacity(dim + k);
    for a in 0..dim {
        let coeffs = generators.iter().map(|g| g[a].clone()).collect();
        cons.push(Constraint::new(coeffs, Relation::Eq, point[a].clone()));
    }
    for i in 0..k {
        let mut e = vec![BigRational::zero(); k];
        e[i] = -BigRational::one();
        let rel = if strict { Relation::Lt } else { Relation::Le };
        cons.push(Constraint::new(e, rel, BigRational::zero()));
    }
    find_point(k, &cons)
}
