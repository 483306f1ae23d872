//! The charge-zero Fock space, seen both as the infinite wedge (basis `v_μ`)
//! and as the boson space of polynomials in `p_1, p_2, …` (basis `p_λ`).
//!
//! On the boson side `α_{−k}` is multiplication by `p_k` and `α_k = k ∂/∂p_k`,
//! with `⟨p_λ, p_λ⟩ = z_λ`. The two pictures are identified by `v_μ ↦ s_μ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{int, rat, QSeries, Rat, RatMatrix};
use crate::partitions::{border_strips, removable_strips, Partition};
use crate::virasoro::VermaModule;

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// Finite rational combination of basis vectors labelled by partitions.
/// Whether the labels mean wedge states `v_μ` or boson monomials `p_λ` is
/// fixed by the operation that produced the vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    coeffs: BTreeMap<Partition, Rat>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(mu: &Partition) -> Self {
        Self::monomial(mu, Rat::one())
    }

    pub fn monomial(mu: &Partition, c: Rat) -> Self {
        let mut v = Self::zero();
        v.add_term(mu, c);
        v
    }

    pub fn vacuum() -> Self {
        Self::basis(&Partition::empty())
    }

    pub fn coeff(&self, mu: &Partition) -> Rat {
        self.coeffs.get(mu).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, mu: &Partition, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(mu.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(mu);
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, k: &Rat) {
        if k.is_zero() {
            return;
        }
        for (mu, c) in &other.coeffs {
            self.add_term(mu, c * k);
        }
    }

    pub fn plus(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn minus(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scaled(&self, k: &Rat) -> FockVector {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    /// Largest `|μ|` in the support, 0 for the zero vector.
    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(Partition::size).max().unwrap_or(0)
    }

    /// Largest total size of the odd parts of a supporting monomial.
    pub fn max_odd_degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|l| l.parts().iter().filter(|&&p| p % 2 == 1).sum())
            .max()
            .unwrap_or(0)
    }

    /// Applies a linear map given on basis vectors.
    pub fn map_linear(&self, mut f: impl FnMut(&Partition) -> FockVector) -> FockVector {
        let mut out = Self::zero();
        for (mu, c) in &self.coeffs {
            out.add_scaled(&f(mu), c);
        }
        out
    }
}

/// Boson pairing `⟨p_λ, p_μ⟩ = δ_{λμ} z_λ`.
pub fn boson_inner(a: &FockVector, b: &FockVector) -> Rat {
    let mut acc = Rat::zero();
    for (lam, c) in a.terms() {
        let d = b.coeff(lam);
        if !d.is_zero() {
            acc += c * d * Rat::from_integer(lam.z_factor());
        }
    }
    acc
}

/// Wedge pairing: `v_μ` orthonormal.
pub fn wedge_inner(a: &FockVector, b: &FockVector) -> Rat {
    let mut acc = Rat::zero();
    for (mu, c) in a.terms() {
        acc += c * b.coeff(mu);
    }
    acc
}

/// Product of boson monomials.
pub fn boson_product(a: &FockVector, b: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (l1, c1) in a.terms() {
        for (l2, c2) in b.terms() {
            out.add_term(&l1.merge(l2), c1 * c2);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Infinite wedge
// ---------------------------------------------------------------------------

fn occupied(mu: &Partition, len: usize) -> (Vec<i64>, i64) {
    let s = mu.beta_set(len, 0);
    let bottom = *s.last().unwrap();
    (s, bottom)
}

/// Moves the particle at `from` to the empty slot `to` in the Maya diagram
/// of `mu`, with sign `(−1)^{#particles strictly between}`. `None` if the
/// move is blocked.
fn move_particle(mu: &Partition, from: i64, to: i64) -> Option<(Partition, Rat)> {
    let len = mu.len() + from.unsigned_abs() as usize + to.unsigned_abs() as usize + 2;
    let (mut s, _) = occupied(mu, len);
    if !s.contains(&from) || s.contains(&to) {
        return None;
    }
    let (lo, hi) = (from.min(to), from.max(to));
    let between = s.iter().filter(|&&x| lo < x && x < hi).count();
    s.retain(|&x| x != from);
    s.push(to);
    let sign = if between % 2 == 0 { Rat::one() } else { -Rat::one() };
    Some((Partition::from_beta_set(&s, 0), sign))
}

/// Projective action of the elementary matrix `E_{ij}` on wedge states; the
/// diagonal carries the normal-ordering correction `−[i ≤ 0]`.
pub fn rho_e(i: i64, j: i64, v: &FockVector) -> FockVector {
    v.map_linear(|mu| {
        if i == j {
            let len = mu.len() + i.unsigned_abs() as usize + 2;
            let (s, _) = occupied(mu, len);
            let value = i64::from(s.contains(&i)) - i64::from(i <= 0);
            return FockVector::monomial(mu, int(value));
        }
        match move_particle(mu, j, i) {
            Some((nu, sign)) => FockVector::monomial(&nu, sign),
            None => FockVector::zero(),
        }
    })
}

/// `Σ_{a∈Z} c(a mod 2) ρ(E_{a, a+offset})` on wedge states; `by_parity` is
/// `[c(even), c(odd)]`.
pub fn e_sum(offset: i64, by_parity: &[Rat; 2], v: &FockVector) -> FockVector {
    v.map_linear(|mu| {
        let len = mu.len() + offset.unsigned_abs() as usize + 2;
        let (s, bottom) = occupied(mu, len);
        let coef = |a: i64| &by_parity[a.rem_euclid(2) as usize];
        let mut out = FockVector::zero();
        if offset == 0 {
            let top = s[0].max(0);
            let mut diag = Rat::zero();
            for a in bottom..=top {
                let value = i64::from(s.contains(&a)) - i64::from(a <= 0);
                if value != 0 {
                    diag += coef(a) * int(value);
                }
            }
            out.add_term(mu, diag);
            return out;
        }
        for &j in &s {
            let a = j - offset;
            let c = coef(a);
            if c.is_zero() || a < bottom || s.contains(&a) {
                continue;
            }
            let (nu, sign) = move_particle(mu, j, a).expect("slot checked");
            out.add_term(&nu, sign * c);
        }
        out
    })
}

/// `α_n = Σ_i ρ(E_{i,i+n})` on wedge states.
pub fn alpha_wedge_esum(n: i64, v: &FockVector) -> FockVector {
    e_sum(n, &[Rat::one(), Rat::one()], v)
}

/// `α_n` on wedge states by the border-strip rule: `α_{−n}` adds `n`-strips
/// with sign `(−1)^{height}`, `α_n` removes them.
pub fn alpha_wedge_strips(n: i64, v: &FockVector) -> FockVector {
    assert!(n != 0, "α_0 vanishes at charge zero");
    v.map_linear(|mu| {
        let strips = if n < 0 { border_strips(mu, (-n) as u32) } else { removable_strips(mu, n as u32) };
        let mut out = FockVector::zero();
        for (nu, height) in strips {
            out.add_term(&nu, if height % 2 == 0 { Rat::one() } else { -Rat::one() });
        }
        out
    })
}

/// `α_n` on wedge states, computed both ways and cross-checked.
pub fn alpha_wedge(n: i64, v: &FockVector) -> Result<FockVector> {
    let by_strips = alpha_wedge_strips(n, v);
    let by_sum = alpha_wedge_esum(n, v);
    if by_strips != by_sum {
        return Err(Error::CrossCheckFailure {
            what: format!("α_{n} by border strips and by E-sum"),
            left: format!("{by_strips:?}"),
            right: format!("{by_sum:?}"),
        });
    }
    Ok(by_strips)
}

// ---------------------------------------------------------------------------
// Bosons and the Schur transition
// ---------------------------------------------------------------------------

/// `α_n` on boson monomials.
pub fn alpha_boson(n: i64, v: &FockVector) -> FockVector {
    assert!(n != 0, "α_0 vanishes at charge zero");
    v.map_linear(|lam| {
        if n < 0 {
            return FockVector::basis(&lam.with_part((-n) as u32));
        }
        let k = n as u32;
        match lam.without_part(k) {
            Some(rest) => FockVector::monomial(&rest, int(n * lam.multiplicity(k) as i64)),
            None => FockVector::zero(),
        }
    })
}

fn character_cache() -> &'static RwLock<HashMap<(Partition, Partition), BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<(Partition, Partition), BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Symmetric group character `χ^μ(λ)` by the Murnaghan-Nakayama rule.
pub fn character(mu: &Partition, lambda: &Partition) -> BigInt {
    if mu.size() != lambda.size() {
        return BigInt::zero();
    }
    if lambda.is_empty() {
        return BigInt::one();
    }
    let key = (mu.clone(), lambda.clone());
    if let Some(c) = character_cache().read().expect("character cache").get(&key) {
        return c.clone();
    }
    let first = lambda.parts()[0];
    let rest = lambda.without_part(first).expect("first part present");
    let mut acc = BigInt::zero();
    for (nu, height) in removable_strips(mu, first) {
        let term = character(&nu, &rest);
        if height % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    character_cache().write().expect("character cache").insert(key, acc.clone());
    acc
}

/// Wedge state to bosons: `s_μ = Σ_λ χ^μ(λ)/z_λ p_λ`.
pub fn schur_to_power(v: &FockVector) -> FockVector {
    v.map_linear(|mu| {
        let mut out = FockVector::zero();
        for lam in Partition::all_of_size(mu.size()) {
            let chi = character(mu, &lam);
            if !chi.is_zero() {
                out.add_term(&lam, Rat::new(chi, lam.z_factor()));
            }
        }
        out
    })
}

/// Bosons to wedge states: `p_λ = Σ_μ χ^μ(λ) s_μ`.
pub fn power_to_schur(v: &FockVector) -> FockVector {
    v.map_linear(|lam| {
        let mut out = FockVector::zero();
        for mu in Partition::all_of_size(lam.size()) {
            out.add_term(&mu, Rat::from_integer(character(&mu, lam)));
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Vertex operators
// ---------------------------------------------------------------------------

/// Which boson modes an operator involves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Full,
    Even,
    Odd,
}

impl Sector {
    pub fn allows(self, k: u32) -> bool {
        match self {
            Sector::Full => true,
            Sector::Even => k.is_multiple_of(2),
            Sector::Odd => k % 2 == 1,
        }
    }

    /// Basis monomials of this sector at degree `d`.
    pub fn basis(self, d: u32) -> Vec<Partition> {
        Partition::all_of_size_with(d, |k| self.allows(k))
    }
}

/// Degree-`b` part of `Γ_{s,−}^{n}(y) = exp(n Σ_{k∈s} y^k p_k / k)`:
/// `Σ_{κ⊢b} n^{ℓ(κ)}/z_κ p_κ`.
pub fn creation_block(sector: Sector, n: &Rat, b: u32) -> FockVector {
    let mut out = FockVector::zero();
    for kappa in sector.basis(b) {
        let mut c = Rat::one();
        for _ in 0..kappa.len() {
            c *= n;
        }
        out.add_term(&kappa, c / Rat::from_integer(kappa.z_factor()));
    }
    out
}

/// Sub-multisets `ν ⊆ λ` with parts in `sector`, with `Π_k C(m_k(λ), m_k(ν))`
/// and the complement `λ ∖ ν`.
fn sub_multisets(lam: &Partition, sector: Sector) -> Vec<(Partition, Partition, BigInt)> {
    let mut distinct: Vec<u32> = lam.parts().to_vec();
    distinct.dedup();
    let mut out = vec![(Vec::new(), BigInt::one())];
    for k in distinct {
        let mult = lam.multiplicity(k);
        let upto = if sector.allows(k) { mult } else { 0 };
        out = out
            .into_iter()
            .flat_map(|(nu, c): (Vec<u32>, BigInt)| {
                (0..=upto).map(move |j| {
                    let mut nu = nu.clone();
                    nu.extend(std::iter::repeat_n(k, j));
                    (nu, &c * binomial(BigInt::from(mult), BigInt::from(j)))
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|(nu, c)| {
            let nu = Partition::new(nu);
            let mut rest = lam.clone();
            for &p in nu.parts() {
                rest = rest.without_part(p).expect("sub-multiset");
            }
            (nu, rest, c)
        })
        .collect()
}

/// Degree-`a` part of `Γ_{s,+}^{n}(x) = exp(n Σ_{k∈s} x^k α_k / k) = exp(n Σ x^k ∂_k)`
/// applied to `v`.
pub fn annihilation_block(sector: Sector, n: &Rat, a: u32, v: &FockVector) -> FockVector {
    v.map_linear(|lam| {
        let mut out = FockVector::zero();
        for (nu, rest, c) in sub_multisets(lam, sector) {
            if nu.size() != a {
                continue;
            }
            let mut coef = Rat::from_integer(c);
            for _ in 0..nu.len() {
                coef *= n;
            }
            out.add_term(&rest, coef);
        }
        out
    })
}

/// Coefficient of `y^shift` in `Γ_s^{(m)}(y) = Γ_{s,−}^{m}(y) Γ_{s,+}^{−m}(y^{-1})`
/// applied to boson states; maps degree `d` to `d + shift`.
pub fn gamma_block(sector: Sector, m: &Rat, shift: i64, v: &FockVector) -> FockVector {
    v.map_linear(|lam| gamma_block_basis(sector, m, shift, lam))
}

type GammaKey = (Sector, Rat, i64, Partition);

fn gamma_cache() -> &'static RwLock<HashMap<GammaKey, FockVector>> {
    static CACHE: OnceLock<RwLock<HashMap<GammaKey, FockVector>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn gamma_block_basis(sector: Sector, m: &Rat, shift: i64, lam: &Partition) -> FockVector {
    let key = (sector, m.clone(), shift, lam.clone());
    if let Some(v) = gamma_cache().read().expect("gamma cache").get(&key) {
        return v.clone();
    }
    let mut out = FockVector::zero();
    let neg = -m.clone();
    let single = FockVector::basis(lam);
    for b in 0..=lam.size() {
        let created = shift + b as i64;
        if created < 0 {
            continue;
        }
        let lowered = annihilation_block(sector, &neg, b, &single);
        if lowered.is_zero() {
            continue;
        }
        out.add_scaled(&boson_product(&creation_block(sector, m, created as u32), &lowered), &Rat::one());
    }
    gamma_cache().write().expect("gamma cache").insert(key, out.clone());
    out
}

/// `x`-power carried by the coefficient of `y^shift`: `y = x` for the full
/// operator, `y = x^{1/2}` for the even and odd parts.
pub fn x_power(sector: Sector, shift: i64) -> Rat {
    match sector {
        Sector::Full => int(shift),
        Sector::Even | Sector::Odd => rat(shift, 2),
    }
}

/// `(Γ_s^{(m)} v_μ, v_ν)` between wedge states, without its power of `x`.
pub fn gamma_element(m: &Rat, mu: &Partition, nu: &Partition, sector: Sector) -> Rat {
    let shift = nu.size() as i64 - mu.size() as i64;
    let image = gamma_block(sector, m, shift, &schur_to_power(&FockVector::basis(mu)));
    boson_inner(&image, &schur_to_power(&FockVector::basis(nu)))
}

// ---------------------------------------------------------------------------
// Graded operators
// ---------------------------------------------------------------------------

/// A degree-homogeneous operator on one boson sector, materialized on all
/// basis monomials of degree `≤ bound` whose image also has degree `≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOperator {
    sector: Sector,
    shift: i64,
    bound: u32,
    images: BTreeMap<Partition, FockVector>,
}

impl GradedOperator {
    pub fn materialize(
        sector: Sector,
        shift: i64,
        bound: u32,
        mut f: impl FnMut(&Partition) -> FockVector,
    ) -> Self {
        let mut images = BTreeMap::new();
        for d in 0..=bound {
            let target = d as i64 + shift;
            if target < 0 || target > bound as i64 {
                continue;
            }
            for lam in sector.basis(d) {
                images.insert(lam.clone(), f(&lam));
            }
        }
        GradedOperator { sector, shift, bound, images }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Image of a vector; every monomial and its image must lie within the bound.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut out = FockVector::zero();
        for (lam, c) in v.terms() {
            let d = lam.size() as i64;
            if d + self.shift < 0 {
                continue;
            }
            let Some(image) = self.images.get(lam) else {
                return Err(Error::TruncationExceeded {
                    requested: (d.max(d + self.shift)) as usize,
                    bound: self.bound as usize,
                });
            };
            out.add_scaled(image, c);
        }
        Ok(out)
    }

    /// Block from source degree `d` as a matrix (rows: target basis).
    pub fn block(&self, d: u32) -> Result<RatMatrix> {
        let target = d as i64 + self.shift;
        if target < 0 {
            return Ok(RatMatrix::zeros(0, self.sector.basis(d).len()));
        }
        let sources = self.sector.basis(d);
        let targets = self.sector.basis(target as u32);
        let mut m = RatMatrix::zeros(targets.len(), sources.len());
        for (j, lam) in sources.iter().enumerate() {
            let image = self.apply(&FockVector::basis(lam))?;
            for (i, mu) in targets.iter().enumerate() {
                m.set(i, j, image.coeff(mu));
            }
        }
        Ok(m)
    }

    /// Source degrees whose blocks are materialized.
    pub fn source_degrees(&self) -> Vec<u32> {
        (0..=self.bound)
            .filter(|&d| {
                let t = d as i64 + self.shift;
                t >= 0 && t <= self.bound as i64
            })
            .collect()
    }
}

/// `Γ_s^{(m)}` coefficient of `y^shift` as a graded operator on sector `s`.
pub fn gamma_operator(sector: Sector, m: &Rat, shift: i64, bound: u32) -> GradedOperator {
    GradedOperator::materialize(sector, shift, bound, |lam| gamma_block_basis(sector, m, shift, lam))
}

/// One block of an operator identity that failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMismatch {
    pub location: String,
    pub expected: FockVector,
    pub actual: FockVector,
}

/// Outcome of [`omega_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OmegaReport {
    pub blocks_checked: usize,
    pub mismatches: Vec<BlockMismatch>,
    /// Series identities among the `Ω_s` themselves that failed.
    pub series_failures: Vec<String>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.series_failures.is_empty()
    }
}

/// `Ω_s(u)^e` in `u = xy`: `(1−u²)^{−e/2}` (even), `(1−u²)^{e/2}(1−u)^{−e}` (odd),
/// `(1−u)^{−e}` (full).
pub fn omega_power(sector: Sector, e: &Rat, order: u32) -> Result<QSeries> {
    let one_minus = |k: u32| {
        let mut s = QSeries::one(1, order);
        s.add_coeff(&[k], -Rat::one());
        s
    };
    match sector {
        Sector::Even => one_minus(2).pow_rational(&(-e / int(2))),
        Sector::Odd => Ok(one_minus(2).pow_rational(&(e / int(2)))?.mul(&one_minus(1).pow_rational(&-e)?)),
        Sector::Full => one_minus(1).pow_rational(&-e),
    }
}

/// `Ω_s(u) = exp(Σ_{k∈s} u^k/k)`, straight from the commutator `[α_k, α_{−k}] = k`.
pub fn omega_from_commutator(sector: Sector, order: u32) -> Result<QSeries> {
    let mut log = QSeries::zero(1, order);
    for k in (1..=order).filter(|&k| sector.allows(k)) {
        log.add_coeff(&[k], rat(1, k as i64));
    }
    log.exp()
}

/// Verifies `Γ_{s,+}^m(x) Γ_{s,−}^n(y) = Ω_s(x,y)^{mn} Γ_{s,−}^n(y) Γ_{s,+}^m(x)`
/// on every `x^a y^b` block applied to sector monomials of degree `≤ degree`
/// with `b ≤ degree`, that `Γ_{s,±}` blocks have the grading required by
/// `q^d Γ_{s,±}(x) = Γ_{s,±}(x q^{∓1}) q^d`, that the closed forms of `Ω_s`
/// match the commutator, and that `Ω_e Ω_o = Ω`.
pub fn omega_check(sector: Sector, m: &Rat, n: &Rat, degree: u32) -> Result<OmegaReport> {
    let mut report = OmegaReport::default();
    let order = 2 * degree;
    let omega = omega_power(sector, &(m * n), order)?;
    let closed = omega_power(sector, &Rat::one(), order)?;
    if closed != omega_from_commutator(sector, order)? {
        report.series_failures.push(format!("closed form of Ω_{sector:?} disagrees with exp Σ u^k/k"));
    }
    let product = omega_power(Sector::Even, &Rat::one(), order)?.mul(&omega_power(Sector::Odd, &Rat::one(), order)?);
    if product != omega_power(Sector::Full, &Rat::one(), order)? {
        report.series_failures.push("Ω_e Ω_o ≠ Ω".into());
    }
    for d in 0..=degree {
        for lam in sector.basis(d) {
            let v = FockVector::basis(&lam);
            for b in 0..=degree {
                let created = creation_block(sector, n, b);
                if created.terms().any(|(k, _)| k.size() != b) {
                    report.series_failures.push(format!("Γ_- block y^{b} is not of degree {b}"));
                }
                for a in 0..=(d + b) {
                    let lowered = annihilation_block(sector, m, a, &v);
                    if lowered.terms().any(|(k, _)| k.size() + a != d) {
                        report.series_failures.push(format!("Γ_+ block x^{a} on {lam} is not of degree −{a}"));
                    }
                    let lhs = annihilation_block(sector, m, a, &boson_product(&created, &v));
                    let mut rhs = FockVector::zero();
                    for c in 0..=a.min(b) {
                        let w = omega.coeff(&[c]);
                        if w.is_zero() {
                            continue;
                        }
                        let inner = annihilation_block(sector, m, a - c, &v);
                        rhs.add_scaled(&boson_product(&creation_block(sector, n, b - c), &inner), &w);
                    }
                    report.blocks_checked += 1;
                    if lhs != rhs {
                        report.mismatches.push(BlockMismatch {
                            location: format!("x^{a} y^{b} on p_{lam}"),
                            expected: lhs,
                            actual: rhs,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Affine sl2 and Segal-Sugawara
// ---------------------------------------------------------------------------

/// Level-one action of affine sl2 by modes `e_i, f_i, h_i`.
pub trait Sl2Action {
    fn e(&self, i: i64, v: &FockVector) -> FockVector;
    fn f(&self, i: i64, v: &FockVector) -> FockVector;
    fn h(&self, i: i64, v: &FockVector) -> FockVector;
    /// The degree lowered by positive modes, used to bound Sugawara sums.
    fn mode_degree(&self, v: &FockVector) -> u32;

    fn mode(&self, g: Generator, i: i64, v: &FockVector) -> FockVector {
        match g {
            Generator::E => self.e(i, v),
            Generator::F => self.f(i, v),
            Generator::H => self.h(i, v),
        }
    }

    /// `L_k = (1/12) Σ_i :2 e_i f_{k−i} + 2 f_i e_{k−i} + h_i h_{k−i}:`, where
    /// `:a_i b_j:` is `a_i b_j` for `i ≤ 0` and `b_j a_i` otherwise.
    fn sugawara(&self, k: i64, v: &FockVector) -> FockVector {
        let reach = (self.mode_degree(v) as i64 + 1) / 2 + 1;
        let mut out = FockVector::zero();
        let pairs = [(Generator::E, Generator::F, int(2)), (Generator::F, Generator::E, int(2)), (Generator::H, Generator::H, int(1))];
        for i in (k - reach - 1)..=(reach + 1) {
            let j = k - i;
            for (a, b, c) in &pairs {
                let term = if i <= 0 { self.mode(*a, i, &self.mode(*b, j, v)) } else { self.mode(*b, j, &self.mode(*a, i, v)) };
                out.add_scaled(&term, &(c / int(12)));
            }
        }
        out
    }

    /// `L_{k,s} = L_k + s h_k + s² δ_{k,0}`.
    fn sugawara_shifted(&self, k: i64, s: &Rat, v: &FockVector) -> FockVector {
        let mut out = self.sugawara(k, v);
        out.add_scaled(&self.h(k, v), s);
        if k == 0 {
            out.add_scaled(v, &(s * s));
        }
        out
    }
}

/// A mode of affine sl2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
    H,
}

impl Generator {
    /// Degree lowered by the mode of index `i`.
    pub fn degree_drop(self, i: i64) -> i64 {
        match self {
            Generator::E => 2 * i - 1,
            Generator::F => 2 * i + 1,
            Generator::H => 2 * i,
        }
    }
}

/// Materializes `e_i, f_i, h_i` for `|i| ≤ max_index` on `sector` up to degree `bound`.
pub fn sl2_generators<A: Sl2Action>(
    action: &A,
    sector: Sector,
    max_index: i64,
    bound: u32,
) -> Vec<(Generator, i64, GradedOperator)> {
    let mut out = Vec::new();
    for g in [Generator::E, Generator::F, Generator::H] {
        for i in -max_index..=max_index {
            let op = GradedOperator::materialize(sector, -g.degree_drop(i), bound, |lam| {
                action.mode(g, i, &FockVector::basis(lam))
            });
            out.push((g, i, op));
        }
    }
    out
}

/// `L_{k,s}` materialized on `sector` up to degree `bound`.
pub fn sugawara_operator<A: Sl2Action>(action: &A, k: i64, s: &Rat, sector: Sector, bound: u32) -> GradedOperator {
    GradedOperator::materialize(sector, -2 * k, bound, |lam| action.sugawara_shifted(k, s, &FockVector::basis(lam)))
}

/// Homogeneous picture: generators as sums of elementary matrices acting on
/// wedge states, `e_i = Σ E_{2k,2k+2i−1}`, `f_i = Σ E_{2k−1,2k+2i}`,
/// `h_i = Σ E_{2k,2k+2i} − E_{2k−1,2k−1+2i}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Homogeneous;

impl Sl2Action for Homogeneous {
    fn e(&self, i: i64, v: &FockVector) -> FockVector {
        e_sum(2 * i - 1, &[Rat::one(), Rat::zero()], v)
    }

    fn f(&self, i: i64, v: &FockVector) -> FockVector {
        e_sum(2 * i + 1, &[Rat::zero(), Rat::one()], v)
    }

    fn h(&self, i: i64, v: &FockVector) -> FockVector {
        e_sum(2 * i, &[Rat::one(), -Rat::one()], v)
    }

    fn mode_degree(&self, v: &FockVector) -> u32 {
        v.max_degree()
    }
}

type ModeKey = (u8, i64, Partition);

/// Principal picture on odd bosons: `2A(y) = Γ_o^{(2)}(y) − 1` with
/// `A(y) = Σ A_n y^{−n}`, `h_i = A_{2i}`, `e_i = (α_{2i−1} − A_{2i−1})/2`,
/// `f_i = (α_{2i+1} + A_{2i+1})/2`. Even modes of a monomial are spectators.
#[derive(Debug, Default)]
pub struct Principal {
    modes: RwLock<HashMap<ModeKey, FockVector>>,
}

impl Principal {
    pub fn new() -> Self {
        Self::default()
    }

    /// `A_n`, lowering odd degree by `n`.
    pub fn a_mode(&self, n: i64, v: &FockVector) -> FockVector {
        self.on_odd_part(0, n, v, |n, lam| {
            let mut out = gamma_block_basis(Sector::Odd, &int(2), -n, lam).scaled(&rat(1, 2));
            if n == 0 {
                out.add_term(lam, rat(-1, 2));
            }
            out
        })
    }

    fn on_odd_part(
        &self,
        tag: u8,
        n: i64,
        v: &FockVector,
        compute: impl Fn(i64, &Partition) -> FockVector,
    ) -> FockVector {
        v.map_linear(|lam| {
            let (odd, even) = lam.split_by(|k| k % 2 == 1);
            let key = (tag, n, odd.clone());
            let cached = self.modes.read().expect("mode cache").get(&key).cloned();
            let image = cached.unwrap_or_else(|| {
                let image = compute(n, &odd);
                self.modes.write().expect("mode cache").insert(key, image.clone());
                image
            });
            if even.is_empty() {
                return image;
            }
            image.map_linear(|mu| FockVector::basis(&mu.merge(&even)))
        })
    }

    /// `L_{k,s}` restricted to odd monomials and memoized there.
    pub fn sugawara_cached(&self, k: i64, s: &Rat, v: &FockVector) -> FockVector {
        let lk = self.on_odd_part(1, k, v, |k, lam| self.sugawara(k, &FockVector::basis(lam)));
        let mut out = lk;
        out.add_scaled(&self.h(k, v), s);
        if k == 0 {
            out.add_scaled(v, &(s * s));
        }
        out
    }
}

impl Sl2Action for Principal {
    fn e(&self, i: i64, v: &FockVector) -> FockVector {
        alpha_boson(2 * i - 1, v).minus(&self.a_mode(2 * i - 1, v)).scaled(&rat(1, 2))
    }

    fn f(&self, i: i64, v: &FockVector) -> FockVector {
        alpha_boson(2 * i + 1, v).plus(&self.a_mode(2 * i + 1, v)).scaled(&rat(1, 2))
    }

    fn h(&self, i: i64, v: &FockVector) -> FockVector {
        self.a_mode(2 * i, v)
    }

    fn mode_degree(&self, v: &FockVector) -> u32 {
        v.max_odd_degree()
    }
}

/// Lowest vector `v_k` of charge `k`: the Schur function of the staircase
/// `[2k, …, 1]` (`k ≥ 0`) or `[−2k−1, …, 1]` (`k < 0`), as odd bosons.
pub fn lowest_vector(k: i64) -> FockVector {
    schur_to_power(&FockVector::basis(&Partition::staircase(k)))
}

/// `L_{−μ} v_∅ ↦ L_{−μ_1,s} ⋯ L_{−μ_l,s} v_k`, checked against a singular Gram matrix.
pub fn verma_embedding(principal: &Principal, k: i64, s: &Rat, mu: &Partition) -> Result<FockVector> {
    let weight = (int(k) + s) * (int(k) + s);
    VermaModule::new(Rat::one(), weight).gram_inverse(mu.size())?;
    Ok(verma_image(principal, k, s, mu))
}

fn verma_image(principal: &Principal, k: i64, s: &Rat, mu: &Partition) -> FockVector {
    let mut v = lowest_vector(k);
    for &part in mu.parts().iter().rev() {
        v = principal.sugawara_cached(-(part as i64), s, &v);
    }
    v
}

/// Joint eigenspace of `(h_0, d')` on odd bosons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeSector {
    /// `h_0` eigenvalue `2k`.
    pub h0: i64,
    /// `d' = (d_o − h_0/2)/2`.
    pub d_prime: Rat,
    /// Odd degree `d_o`.
    pub odd_degree: u32,
    pub multiplicity: usize,
}

/// Decomposes the odd boson space up to odd degree `bound` under `h_0 = A_0`
/// and `d'`. Fails if `A_0` is not diagonalizable with even integer spectrum.
pub fn charge_decompose(principal: &Principal, bound: u32) -> Result<Vec<ChargeSector>> {
    let mut out = Vec::new();
    for d in 0..=bound {
        let basis = Sector::Odd.basis(d);
        let dim = basis.len();
        let a0 = GradedOperator::materialize(Sector::Odd, 0, d, |lam| principal.a_mode(0, &FockVector::basis(lam)))
            .block(d)?;
        let mut found = 0;
        // |h_0| ≤ 2k needs |v_k| = 2k² + k ≤ d.
        let reach = (d as i64) + 1;
        for k in -reach..=reach {
            let mut shifted = a0.clone();
            for i in 0..dim {
                let v = shifted.get(i, i) - int(2 * k);
                shifted.set(i, i, v);
            }
            let nullity = dim - shifted.rank();
            if nullity > 0 {
                out.push(ChargeSector { h0: 2 * k, d_prime: rat(d as i64 - k, 2), odd_degree: d, multiplicity: nullity });
                found += nullity;
            }
        }
        if found != dim {
            return Err(Error::CrossCheckFailure {
                what: format!("spectrum of h_0 at odd degree {d}"),
                left: found.to_string(),
                right: dim.to_string(),
            });
        }
    }
    Ok(out)
}
