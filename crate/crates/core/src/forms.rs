//! Homogeneous binary forms `Σ c_k z0^{d-k} z1^k` with exact rational
//! coefficients, projective points of `P^1`, and Möbius substitutions.
//!
//! A form carries its degree even when it is zero: the zero section of
//! `O(3)` and the zero section of `O(1)` are different forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("inhomogeneous form: terms of degree {first} and {second}")]
    Inhomogeneous { first: usize, second: usize },
    #[error("expected a form of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("gcd of zero forms is undefined")]
    AllZero,
    #[error("[0:0] is not a point of P^1")]
    ZeroRepresentative,
    #[error("singular substitution matrix")]
    SingularMobius,
    #[error("cover components have degrees {0} and {1}")]
    CoverDegree(usize, usize),
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A point `[a:b]` of `P^1` with a fixed rational representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    a: BigRational,
    b: BigRational,
}

impl ProjectivePoint {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self, FormError> {
        if a.is_zero() && b.is_zero() {
            return Err(FormError::ZeroRepresentative);
        }
        Ok(Self { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, FormError> {
        Self::new(q(a), q(b))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Same point of `P^1`, regardless of representative.
    pub fn same_point(&self, other: &ProjectivePoint) -> bool {
        &self.a * &other.b == &self.b * &other.a
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.a, self.b)
    }
}

/// Invertible 2x2 rational matrix `[[a, b], [c, d]]`, acting on forms by
/// `z0 -> a z0 + b z1`, `z1 -> c z0 + d z1`, and on points by `p -> g p`,
/// so that `substitute(f, g)(p) = f(g p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    m: [[BigRational; 2]; 2],
}

impl Mobius {
    pub fn new(m: [[BigRational; 2]; 2]) -> Result<Self, FormError> {
        let g = Self { m };
        if g.det().is_zero() {
            return Err(FormError::SingularMobius);
        }
        Ok(g)
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Result<Self, FormError> {
        Self::new(m.map(|row| row.map(q)))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0], [0, 1]]).expect("invertible")
    }

    pub fn swap() -> Self {
        Self::from_ints([[0, 1], [1, 0]]).expect("invertible")
    }

    pub fn entries(&self) -> &[[BigRational; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> BigRational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        let adj = self.adjugate();
        Self {
            m: adj.m.map(|row| row.map(|x| x / &det)),
        }
    }

    /// `det(g) · g^{-1}`; the same projective map as the inverse.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self {
            m: [[d.clone(), -b.clone()], [-c.clone(), a.clone()]],
        }
    }

    pub fn compose(&self, other: &Mobius) -> Self {
        let mut m: [[BigRational; 2]; 2] = Default::default();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = &self.m[i][0] * &other.m[0][j] + &self.m[i][1] * &other.m[1][j];
            }
        }
        Self { m }
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint {
            a: &self.m[0][0] * &p.a + &self.m[0][1] * &p.b,
            b: &self.m[1][0] * &p.a + &self.m[1][1] * &p.b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigRational>,
}

impl BinaryForm {
    /// Coefficients `c_0..c_d` of `z0^d, z0^{d-1} z1, .., z1^d`. Panics on an
    /// empty vector.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form has at least one coefficient");
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); degree + 1],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn z0() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn z1() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `c · z0^a · z1^b`
    pub fn monomial(c: BigRational, a: usize, b: usize) -> Self {
        let mut f = Self::zero(a + b);
        f.coeffs[b] = c;
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &BinaryForm) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> Self {
        let mut out = Self::zero(self.degree() + other.degree());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn evaluate(&self, p: &ProjectivePoint) -> BigRational {
        let d = self.degree();
        let mut total = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            total += c * rpow(&p.a, d - k) * rpow(&p.b, k);
        }
        total
    }

    pub fn vanishes_at(&self, p: &ProjectivePoint) -> bool {
        self.evaluate(p).is_zero()
    }

    /// `f(a, b)` for forms `a`, `b` of a common degree `k`; the result has
    /// degree `k · deg f`.
    pub fn compose(&self, a: &BinaryForm, b: &BinaryForm) -> Result<Self, FormError> {
        if a.degree() != b.degree() {
            return Err(FormError::CoverDegree(a.degree(), b.degree()));
        }
        let d = self.degree();
        let mut out = Self::zero(d * a.degree());
        let a_pows: Vec<BinaryForm> = powers(a, d);
        let b_pows: Vec<BinaryForm> = powers(b, d);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&a_pows[d - k].mul(&b_pows[k]).scale(c));
        }
        Ok(out)
    }

    pub fn substitute(&self, g: &Mobius) -> Self {
        let [[a, b], [c, d]] = &g.m;
        let l0 = Self::from_coeffs(vec![a.clone(), b.clone()]);
        let l1 = Self::from_coeffs(vec![c.clone(), d.clone()]);
        self.compose(&l0, &l1).expect("linear forms share degree")
    }

    /// `λ` with `other = λ · self`, if the forms are proportional with a
    /// nonzero factor. `None` when `self` is zero.
    pub fn ratio_to(&self, other: &BinaryForm) -> Option<BigRational> {
        if self.degree() != other.degree() {
            return None;
        }
        let k = self.coeffs.iter().position(|c| !c.is_zero())?;
        let lambda = &other.coeffs[k] / &self.coeffs[k];
        if lambda.is_zero() {
            return None;
        }
        (self.scale(&lambda) == *other).then_some(lambda)
    }

    /// Multiplicity of the factor `z1`, i.e. of the root `[1:0]`. Zero
    /// forms report their full degree plus one.
    pub fn z1_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Scales so that the first nonzero coefficient is one.
    pub fn monic(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => {
                let inv = lead.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn partial_z0(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::from_coeffs((0..d).map(|k| &self.coeffs[k] * q((d - k) as i64)).collect())
    }

    pub fn partial_z1(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self::from_coeffs((1..=d).map(|k| &self.coeffs[k] * q(k as i64)).collect())
    }

    /// `f(x, 1)` and the multiplicity of `z1` split off.
    fn dehomogenize(&self) -> (usize, Poly) {
        let j = self.z1_multiplicity();
        let d = self.degree();
        let coeffs: Vec<BigRational> = (0..=d).rev().filter(|&k| k >= j).map(|k| self.coeffs[k].clone()).collect();
        // coeffs[i] = coefficient of x^i
        (j, Poly::new(coeffs))
    }

    fn homogenize(p: &Poly, z1_power: usize) -> Self {
        let e = p.degree().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); z1_power];
        coeffs.extend((0..=e).rev().map(|i| p.coeff(i)));
        Self { coeffs }
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &BinaryForm) -> Option<Self> {
        if g.is_zero() || g.degree() > self.degree() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.degree() - g.degree()));
        }
        let (jf, pf) = self.dehomogenize();
        let (jg, pg) = g.dehomogenize();
        if jg > jf {
            return None;
        }
        let (quot, rem) = pf.div_rem(&pg);
        if !rem.is_zero() {
            return None;
        }
        Some(Self::homogenize(&quot, jf - jg))
    }

    pub fn divides(&self, f: &BinaryForm) -> bool {
        f.div_exact(self).is_some()
    }

    /// Parses the form grammar: signed sums of terms `q*z0^a*z1^b` with
    /// integer or `p/q` coefficients; `*` and `^1` are optional.
    pub fn parse(text: &str, expected_degree: Option<usize>) -> Result<Self, FormError> {
        let terms = Parser::new(text).parse()?;
        let mut degree: Option<usize> = None;
        for t in terms.iter().filter(|t| !t.coeff.is_zero()) {
            let td = t.z0 + t.z1;
            match degree {
                None => degree = Some(td),
                Some(d) if d != td => {
                    return Err(FormError::Inhomogeneous { first: d, second: td });
                }
                _ => {}
            }
        }
        let degree = match (degree, expected_degree) {
            (Some(d), Some(e)) if d != e => {
                return Err(FormError::DegreeMismatch { expected: e, found: d });
            }
            (Some(d), _) => d,
            (None, Some(e)) => e,
            (None, None) => terms.iter().map(|t| t.z0 + t.z1).max().unwrap_or(0),
        };
        let mut f = Self::zero(degree);
        for t in terms.into_iter().filter(|t| !t.coeff.is_zero()) {
            f.coeffs[t.z1] += t.coeff;
        }
        Ok(f)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut vars = Vec::new();
            match d - k {
                0 => {}
                1 => vars.push("z0".to_string()),
                a => vars.push(format!("z0^{a}")),
            }
            match k {
                0 => {}
                1 => vars.push("z1".to_string()),
                b => vars.push(format!("z1^{b}")),
            }
            let mono = vars.join("*");
            let mag = c.abs();
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryForm {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, FormError> {
        Self::parse(s, None)
    }
}

/// Monic GCD of the nonzero forms in `fs`; zero forms are ignored, so
/// `gcd(0, h) = h`. A degree-zero result is the constant form `1`.
pub fn gcd(fs: &[BinaryForm]) -> Result<BinaryForm, FormError> {
    let mut z1_power: Option<usize> = None;
    let mut acc: Option<Poly> = None;
    for f in fs.iter().filter(|f| !f.is_zero()) {
        let (j, p) = f.dehomogenize();
        z1_power = Some(z1_power.map_or(j, |m| m.min(j)));
        acc = Some(match acc {
            None => p,
            Some(a) => a.gcd(&p),
        });
    }
    let (j, p) = z1_power.zip(acc).ok_or(FormError::AllZero)?;
    Ok(BinaryForm::homogenize(&p.monic(), j))
}

/// The linear form `b z0 - a z1`, vanishing exactly at `[a:b]`.
pub fn linear_form_at(p: &ProjectivePoint) -> BinaryForm {
    BinaryForm::from_coeffs(vec![p.b.clone(), -p.a.clone()])
}

fn rpow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

fn powers(f: &BinaryForm, up_to: usize) -> Vec<BinaryForm> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(BinaryForm::one());
    for i in 0..up_to {
        let next = out[i].mul(f);
        out.push(next);
    }
    out
}

/// Dense univariate polynomial, `coeffs[i]` the coefficient of `x^i`, with
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lead) => Self::new(self.coeffs.iter().map(|c| c / lead).collect()),
            None => self.clone(),
        }
    }

    fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Poly::new(vec![]), self.clone());
        };
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

struct Term {
    coeff: BigRational,
    z0: usize,
    z1: usize,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormError> {
        Err(FormError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<Vec<Term>, FormError> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty form");
        }
        let mut negative = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            negative = c == '-';
            self.pos += 1;
        }
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(c @ ('+' | '-')) => {
                    negative = c == '-';
                    self.pos += 1;
                }
                Some(c) => return self.err(format!("expected '+' or '-', found '{c}'")),
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, FormError> {
        self.skip_ws();
        let mut t = Term {
            coeff: BigRational::one(),
            z0: 0,
            z1: 0,
        };
        let mut seen = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            t.coeff = self.rational()?;
            seen = true;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') if seen => {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some('z') {
                        return self.err("expected z0 or z1 after '*'");
                    }
                    self.factor(&mut t)?;
                }
                Some('z') => {
                    self.factor(&mut t)?;
                    seen = true;
                }
                _ => break,
            }
        }
        if !seen {
            return match self.peek() {
                Some(c) => self.err(format!("expected a term, found '{c}'")),
                None => self.err("expected a term, found end of input"),
            };
        }
        Ok(t)
    }

    fn factor(&mut self, t: &mut Term) -> Result<(), FormError> {
        let start = self.pos;
        self.pos += 1; // 'z'
        let var = match self.peek() {
            Some('0') => 0,
            Some('1') => 1,
            _ => {
                self.pos = start;
                return self.err("expected variable z0 or z1");
            }
        };
        self.pos += 1;
        self.skip_ws();
        let mut exp = 1;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return self.err("expected an exponent after '^'");
            }
            exp = digits.parse::<usize>().or_else(|_| {
                self.pos = start;
                self.err("exponent too large")
            })?;
        }
        if var == 0 {
            t.z0 += exp;
        } else {
            t.z1 += exp;
        }
        Ok(())
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn rational(&mut self) -> Result<BigRational, FormError> {
        let num: BigInt = self.digits().parse().expect("digits");
        self.skip_ws();
        if self.peek() != Some('/') {
            return Ok(BigRational::from_integer(num));
        }
        self.pos += 1;
        self.skip_ws();
        let den_pos = self.pos;
        let den = self.digits();
        if den.is_empty() {
            return self.err("expected a denominator after '/'");
        }
        let den: BigInt = den.parse().expect("digits");
        if den.is_zero() {
            self.pos = den_pos;
            return self.err("zero denominator");
        }
        Ok(BigRational::new(num, den))
    }
}
