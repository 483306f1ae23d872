//! Exact scalars, Laurent polynomials in torus variables, truncated q-series
//! and dense rational matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exact rational number.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `"p/q"` with `q > 0`, also for integers.
pub fn fmt_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `x^k` for any integer `k`; `0^k` with `k < 0` is a pole.
pub fn rat_pow(x: &Rat, k: i64) -> Option<Rat> {
    if k < 0 && x.is_zero() {
        return None;
    }
    Some(num_traits::pow::Pow::pow(x, k as i32))
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// Integer Laurent polynomial in a fixed, ordered list of named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentPoly {
    pub fn zero(vars: &[&str]) -> Self {
        LaurentPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::monomial(vars, &vec![0; vars.len()], 1)
    }

    pub fn monomial(vars: &[&str], exps: &[i64], coeff: i64) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(exps.to_vec(), coeff);
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sum of coefficients, i.e. the virtual dimension of the character.
    pub fn dimension(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn coeff(&self, exps: &[i64]) -> i64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Vec<i64>, coeff: i64) {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exps);
        }
    }

    fn check_compatible(&self, other: &LaurentPoly) {
        assert_eq!(self.vars, other.vars, "Laurent polynomials over different variables");
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> LaurentPoly {
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        self.check_compatible(other);
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Replaces every variable by its inverse.
    pub fn conjugate(&self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().map(|x| -x).collect(), c))
                .collect(),
        }
    }

    /// Monomial substitution: each exponent vector is sent through `map` into
    /// a polynomial over `vars`.
    pub fn map_monomials(&self, vars: &[&str], map: impl Fn(&[i64]) -> Vec<i64>) -> LaurentPoly {
        let mut out = Self::zero(vars);
        for (e, &c) in &self.terms {
            out.add_term(map(e), c);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&x, _)| x != 0)
                .map(|(&x, v)| if x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            let mag = c.abs();
            match (mono.is_empty(), mag) {
                (true, _) => write!(f, "{sign}{mag}")?,
                (false, 1) => write!(f, "{sign}{}", mono.join("*"))?,
                (false, _) => write!(f, "{sign}{mag}*{}", mono.join("*"))?,
            }
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parameter points and Euler classes
// ---------------------------------------------------------------------------

/// Exact values for the equivariant parameters.
///
/// A torus variable is bound to a parameter by its leading letter:
/// `z → t`, `w → a`, `v → b`, `u → m`, keeping the suffix, so `z1` reads
/// `t1` and `w12` reads `a12`. Other variable names are looked up verbatim.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPoint {
    values: BTreeMap<String, Rat>,
}

impl ParamPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: Rat) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: Rat) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.values.get(name)
    }

    /// Value of `name`, or `InvalidInput` if it is not bound.
    pub fn value(&self, name: &str) -> Result<&Rat> {
        self.get(name)
            .ok_or_else(|| Error::InvalidInput(format!("parameter {name} is not bound")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.values.iter()
    }

    /// Parameter bound to the torus variable `var`.
    pub fn for_variable(&self, var: &str) -> Result<&Rat> {
        let mut chars = var.chars();
        let mapped = match chars.next() {
            Some('z') => format!("t{}", chars.as_str()),
            Some('w') => format!("a{}", chars.as_str()),
            Some('v') => format!("b{}", chars.as_str()),
            Some('u') => format!("m{}", chars.as_str()),
            _ => var.to_string(),
        };
        self.get(&mapped)
            .or_else(|| self.get(var))
            .ok_or_else(|| Error::InvalidInput(format!("variable {var} is not bound")))
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Bound on numerators and denominators produced by [`random_point`].
pub const POINT_BOUND: i64 = 97;

/// Deterministic pseudo-random point: each name gets `p/q` with
/// `p ∈ [−97, 97] ∖ {0}` and `q ∈ [1, 97]`.
pub fn random_point(seed: u64, names: &[&str]) -> ParamPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pt = ParamPoint::new();
    for name in names {
        pt.set(name, random_rat(&mut rng));
    }
    pt
}

pub fn random_rat(rng: &mut impl Rng) -> Rat {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-POINT_BOUND..=POINT_BOUND);
    }
    rat(num, rng.gen_range(1..=POINT_BOUND))
}

/// Linear weight `shift + Σ_j exps_j · param_j` of a monomial.
pub fn monomial_weight(vars: &[String], exps: &[i64], pt: &ParamPoint, shift: &Rat) -> Result<Rat> {
    let mut w = shift.clone();
    for (v, &e) in vars.iter().zip(exps) {
        if e != 0 {
            w += pt.for_variable(v)? * int(e);
        }
    }
    Ok(w)
}

/// Equivariant Euler class `e_shift(χ) = Π (shift + weight)^coeff`.
///
/// A zero weight with positive multiplicity makes the result zero; with
/// negative multiplicity it is a pole and yields `DegenerateParameters`.
pub fn euler_eval(chi: &LaurentPoly, pt: &ParamPoint, shift: &Rat) -> Result<Rat> {
    let mut acc = Rat::one();
    let mut vanishes = false;
    for (e, c) in chi.terms() {
        let w = monomial_weight(chi.vars(), e, pt, shift)?;
        if w.is_zero() {
            if c < 0 {
                return Err(Error::DegenerateParameters(format!(
                    "zero weight in denominator for monomial {e:?} of {chi}"
                )));
            }
            vanishes = true;
            continue;
        }
        acc *= rat_pow(&w, c).expect("nonzero base");
    }
    Ok(if vanishes { Rat::zero() } else { acc })
}

// ---------------------------------------------------------------------------
// Truncated multivariate power series
// ---------------------------------------------------------------------------

/// Power series in `q_1..q_N`, truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<Vec<u32>, Rat>,
}

impl QSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        QSeries { nvars, order, coeffs: BTreeMap::new() }
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, Rat::one())
    }

    pub fn constant(nvars: usize, order: u32, c: Rat) -> Self {
        Self::monomial(nvars, order, &vec![0; nvars], c)
    }

    /// `c · q^exps`, or zero if the monomial lies beyond the truncation.
    pub fn monomial(nvars: usize, order: u32, exps: &[u32], c: Rat) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_coeff(exps, c);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.coeffs.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    /// Adds `c · q^exps` in place; ignored beyond the truncation order.
    pub fn add_coeff(&mut self, exps: &[u32], c: Rat) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if exps.iter().sum::<u32>() > self.order || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exps.to_vec()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(exps);
        }
    }

    fn check_compatible(&self, other: &QSeries) {
        assert_eq!(self.nvars, other.nvars, "series in different numbers of variables");
    }

    /// Result truncation is the smaller of the two.
    pub fn add(&self, other: &QSeries) -> QSeries {
        self.check_compatible(other);
        let mut out = Self::zero(self.nvars, self.order.min(other.order));
        for (e, c) in self.coeffs.iter().chain(&other.coeffs) {
            out.add_coeff(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> QSeries {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, c) in &self.coeffs {
            out.add_coeff(e, c * k);
        }
        out
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        self.check_compatible(other);
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.nvars, order);
        for (e1, c1) in &self.coeffs {
            let d1: u32 = e1.iter().sum();
            for (e2, c2) in &other.coeffs {
                if d1 + e2.iter().sum::<u32>() > order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_coeff(&e, c1 * c2);
            }
        }
        out
    }

    pub fn truncate(&self, order: u32) -> QSeries {
        let mut out = Self::zero(self.nvars, order.min(self.order));
        for (e, c) in &self.coeffs {
            out.add_coeff(e, c.clone());
        }
        out
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn invert(&self) -> Result<QSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnitSeries("zero constant term".into()));
        }
        // 1/f = (1/c0) Σ_n (1 − f/c0)^n
        let inv0 = c0.recip();
        let one = Self::one(self.nvars, self.order);
        let g = one.sub(&self.scale(&inv0));
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.order {
            power = power.mul(&g);
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv0))
    }

    fn require_unit_constant(&self, what: &str) -> Result<()> {
        if self.constant_term() != Rat::one() {
            return Err(Error::NonUnitSeries(format!("{what} needs constant term 1")));
        }
        Ok(())
    }

    /// `log f` for `f` with constant term 1.
    pub fn log(&self) -> Result<QSeries> {
        self.require_unit_constant("log")?;
        let g = self.sub(&Self::one(self.nvars, self.order));
        let mut acc = Self::zero(self.nvars, self.order);
        let mut power = Self::one(self.nvars, self.order);
        for n in 1..=self.order as i64 {
            power = power.mul(&g);
            let sign = if n % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&rat(sign, n)));
        }
        Ok(acc)
    }

    /// `exp g` for `g` without constant term.
    pub fn exp(&self) -> Result<QSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonUnitSeries("exp needs zero constant term".into()));
        }
        let mut acc = Self::one(self.nvars, self.order);
        let mut term = Self::one(self.nvars, self.order);
        for n in 1..=self.order as i64 {
            term = term.mul(self).scale(&rat(1, n));
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `f^α = exp(α log f)` for `f` with constant term 1.
    pub fn pow_rational(&self, alpha: &Rat) -> Result<QSeries> {
        self.require_unit_constant("rational power")?;
        if alpha.is_zero() {
            return Ok(Self::one(self.nvars, self.order));
        }
        self.log()?.scale(alpha).exp()
    }

    /// Coefficients as `"p/q"` strings keyed by exponent vector.
    pub fn describe_coeff(&self, exps: &[u32]) -> String {
        fmt_rat(&self.coeff(exps))
    }

    /// All exponent vectors of total degree `≤ order`.
    pub fn exponents(nvars: usize, order: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill_exponents(0, order, &mut cur, &mut out);
        out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
        out
    }
}

fn fill_exponents(i: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for d in 0..=budget {
        cur[i] = d;
        fill_exponents(i + 1, budget - d, cur, out);
    }
    cur[i] = 0;
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in Self::exponents(self.nvars, self.order) {
            let Some(c) = self.coeffs.get(&e) else { continue };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = if self.nvars == 1 { "q".to_string() } else { format!("q{}", i + 1) };
                    if x == 1 { name } else { format!("{name}^{x}") }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

/// `(x; q)_∞ = Π_{i≥0} (1 − x q^i)` truncated at total degree `order`, where
/// `x` and `q` are monomials given by exponent vectors.
pub fn qpochhammer(x: &[u32], q: &[u32], order: u32) -> Result<QSeries> {
    assert_eq!(x.len(), q.len(), "monomials in different numbers of variables");
    let nvars = x.len();
    let dx: u32 = x.iter().sum();
    let dq: u32 = q.iter().sum();
    if dx == 0 || dq == 0 {
        return Err(Error::NonConvergent);
    }
    let mut acc = QSeries::one(nvars, order);
    let mut i = 0u32;
    while dx + i * dq <= order {
        let e: Vec<u32> = x.iter().zip(q).map(|(a, b)| a + i * b).collect();
        let factor = QSeries::one(nvars, order).sub(&QSeries::monomial(nvars, order, &e, Rat::one()));
        acc = acc.mul(&factor);
        i += 1;
    }
    Ok(acc)
}

/// Euler function `(q; q)_∞` in one variable.
pub fn euler_function(order: u32) -> QSeries {
    qpochhammer(&[1], &[1], order).expect("positive degree")
}

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

/// Dense matrix of rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else { continue };
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
            let inv = m.get(row, col).recip();
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in 0..m.cols {
                    let v = m.get(r, j) - &f * m.get(row, j);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact inverse by Gauss-Jordan elimination, `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else { return Rat::zero() };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                let f = m.get(r, col) / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j) - &f * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn q1(coeffs: &[i64], order: u32) -> QSeries {
        let mut s = QSeries::zero(1, order);
        for (i, &c) in coeffs.iter().enumerate() {
            s.add_coeff(&[i as u32], int(c));
        }
        s
    }

    #[test]
    fn euler_eval_worked_example() {
        let vars = ["z1", "u1", "w12", "u2"];
        let chi = LaurentPoly::monomial(&vars, &[1, -1, 0, 0], 1)
            .add(&LaurentPoly::monomial(&vars, &[0, 0, 1, 1], -2));
        let pt = ParamPoint::new()
            .with("t1", rat(3, 7))
            .with("m1", rat(-2, 5))
            .with("a12", rat(1, 3))
            .with("m2", rat(5, 11));
        let expected = (rat(3, 7) - rat(-2, 5)) / ((rat(1, 3) + rat(5, 11)) * (rat(1, 3) + rat(5, 11)));
        assert_eq!(euler_eval(&chi, &pt, &Rat::zero()).unwrap(), expected);
        assert_eq!(euler_eval(&LaurentPoly::zero(&vars), &pt, &Rat::zero()).unwrap(), Rat::one());
    }

    #[test]
    fn euler_eval_zero_weights() {
        let vars = ["z"];
        let pt = ParamPoint::new().with("t", int(1));
        let zero_num = LaurentPoly::monomial(&vars, &[2], 1);
        assert_eq!(euler_eval(&zero_num, &pt, &int(-2)).unwrap(), Rat::zero());
        let pole = LaurentPoly::monomial(&vars, &[2], -1);
        assert!(matches!(euler_eval(&pole, &pt, &int(-2)), Err(Error::DegenerateParameters(_))));
    }

    #[test]
    fn conjugation_examples() {
        let vars = ["z1", "z2"];
        let one = LaurentPoly::one(&vars);
        assert_eq!(one.conjugate(), one);
        let p = LaurentPoly::monomial(&vars, &[1, 0], 1).add(&LaurentPoly::monomial(&vars, &[0, -1], 1));
        let expected = LaurentPoly::monomial(&vars, &[-1, 0], 1).add(&LaurentPoly::monomial(&vars, &[0, 1], 1));
        assert_eq!(p.conjugate(), expected);
    }

    #[test]
    fn series_examples() {
        let a = q1(&[1, 1], 2);
        let b = q1(&[1, -1], 2);
        assert_eq!(a.mul(&b), q1(&[1, 0, -1], 2));
        assert_eq!(q1(&[1, -1], 2).invert().unwrap(), q1(&[1, 1, 1], 2));
        assert!(matches!(q1(&[0, 1], 2).invert(), Err(Error::NonUnitSeries(_))));
        let prod = q1(&[1, -1], 3).mul(&q1(&[1, 0, -1], 3)).mul(&q1(&[1, 0, 0, -1], 3));
        assert_eq!(prod, euler_function(3));
        assert_eq!(euler_function(3), q1(&[1, -1, -1, 0], 3));
        assert_eq!(qpochhammer(&[2], &[1], 2).unwrap(), q1(&[1, 0, -1], 2));
        assert_eq!(qpochhammer(&[1, 1], &[1, 1], 2).unwrap(), {
            let mut s = QSeries::one(2, 2);
            s.add_coeff(&[1, 1], int(-1));
            s
        });
        assert!(matches!(qpochhammer(&[0], &[1], 2), Err(Error::NonConvergent)));
    }

    #[test]
    fn euler_function_pentagonal() {
        // 1 − q − q² + q⁵ + q⁷ − q¹² − q¹⁵
        let e = euler_function(15);
        let mut expected = QSeries::one(1, 15);
        for (k, c) in [(1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)] {
            expected.add_coeff(&[k], int(c));
        }
        assert_eq!(e, expected);
    }

    #[test]
    fn rational_powers() {
        let f = q1(&[1, -1], 4);
        assert_eq!(f.pow_rational(&Rat::zero()).unwrap(), QSeries::one(1, 4));
        assert_eq!(f.pow_rational(&int(-1)).unwrap(), f.invert().unwrap());
        assert_eq!(f.pow_rational(&int(3)).unwrap(), f.mul(&f).mul(&f));
        let half = f.pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(half.mul(&half), f);
        let m = rat(3, 7);
        let z = euler_function(1).pow_rational(&(int(2) * &m * &m - int(1))).unwrap();
        assert_eq!(z.coeff(&[1]), int(1) - int(2) * &m * &m);
    }

    #[test]
    fn matrix_inverse_and_rank() {
        let m = RatMatrix::from_rows(vec![vec![int(2), int(1)], vec![int(4), int(3)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert_eq!(m.determinant(), int(2));
        let s = RatMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.rank(), 1);
        assert_eq!(s.determinant(), Rat::zero());
    }

    #[test]
    fn random_points_are_deterministic_and_bounded() {
        let a = random_point(1, &["t1", "t2"]);
        assert_eq!(a, random_point(1, &["t1", "t2"]));
        assert_ne!(a, random_point(2, &["t1", "t2"]));
        for seed in 0..50 {
            for (_, v) in random_point(seed, &["x", "y", "z"]).iter() {
                assert!(!v.is_zero());
                assert!(v.denom() > &BigInt::zero());
                assert!(v.numer().abs() <= BigInt::from(POINT_BOUND));
                assert!(v.denom() <= &BigInt::from(POINT_BOUND));
            }
        }
    }

    fn series_strategy(nvars: usize, order: u32) -> impl Strategy<Value = QSeries> {
        let exps = QSeries::exponents(nvars, order);
        proptest::collection::vec((-5i64..=5, 1i64..=4), exps.len()).prop_map(move |cs| {
            let mut s = QSeries::zero(nvars, order);
            for (e, (p, q)) in exps.iter().zip(cs) {
                s.add_coeff(e, rat(p, q));
            }
            s
        })
    }

    fn unit_series(nvars: usize, order: u32) -> impl Strategy<Value = QSeries> {
        series_strategy(nvars, order).prop_map(move |s| {
            let c = s.constant_term();
            s.sub(&QSeries::constant(nvars, order, c - Rat::one()))
        })
    }

    fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(((-3i64..=3, -3i64..=3), -2i64..=2), 0..6).prop_map(|ts| {
            let mut p = LaurentPoly::zero(&["z1", "z2"]);
            for ((a, b), c) in ts {
                p.add_term(vec![a, b], c);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn series_ring_axioms(a in series_strategy(2, 3), b in series_strategy(2, 3), c in series_strategy(2, 3)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn rational_power_inverse(f in unit_series(2, 3), p in -4i64..=4, q in 1i64..=3) {
            let alpha = rat(p, q);
            let prod = f.pow_rational(&alpha).unwrap().mul(&f.pow_rational(&-alpha).unwrap());
            prop_assert_eq!(prod, QSeries::one(2, 3));
        }

        #[test]
        fn invert_is_inverse(f in unit_series(1, 5)) {
            prop_assert_eq!(f.mul(&f.invert().unwrap()), QSeries::one(1, 5));
        }

        #[test]
        fn conjugation_is_involutive_and_multiplicative(p in poly_strategy(), q in poly_strategy()) {
            prop_assert_eq!(p.conjugate().conjugate(), p.clone());
            prop_assert_eq!(p.mul(&q).conjugate(), p.conjugate().mul(&q.conjugate()));
        }

        #[test]
        fn euler_eval_is_multiplicative(p in poly_strategy(), q in poly_strategy(), seed in 0u64..1000) {
            let pt = random_point(seed, &["t1", "t2"]);
            let shift = rat(1, 101);
            if let (Ok(a), Ok(b), Ok(c)) = (
                euler_eval(&p, &pt, &shift),
                euler_eval(&q, &pt, &shift),
                euler_eval(&p.add(&q), &pt, &shift),
            ) {
                if !a.is_zero() && !b.is_zero() {
                    prop_assert_eq!(c, a * b);
                }
            }
        }

        #[test]
        fn conjugate_euler_sign(exps in proptest::collection::btree_set((-3i64..=3, -3i64..=3), 0..6), seed in 0u64..1000) {
            let mut chi = LaurentPoly::zero(&["z1", "z2"]);
            for (a, b) in exps {
                if (a, b) != (0, 0) {
                    chi.add_term(vec![a, b], 1);
                }
            }
            let pt = random_point(seed, &["t1", "t2"]);
            let zero = Rat::zero();
            if let (Ok(e), Ok(ec)) = (euler_eval(&chi, &pt, &zero), euler_eval(&chi.conjugate(), &pt, &zero)) {
                let sign = if chi.dimension() % 2 == 0 { int(1) } else { int(-1) };
                prop_assert_eq!(ec, sign * e);
            }
        }
    }
}
