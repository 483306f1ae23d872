//! Virasoro Verma modules, Shapovalov forms, matrix elements of the
//! Liouville vertex operator and torus conformal blocks.
//!
//! Basis vectors are `v_μ = L_{−μ_1} ⋯ L_{−μ_l} v_∅` with `μ_1 ≥ μ_2 ≥ …`.
//! The bracket is `[L_m, L_n] = (m − n) L_{m+n} + δ_{m+n,0} (m³ − m)/12 · c`.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{int, rat, QSeries, Rat, RatMatrix};
use crate::nekrasov::compositions;
use crate::partitions::Partition;

/// Central charge and lowest weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirParams {
    pub c: Rat,
    pub h: Rat,
}

/// Finite combination of PBW basis vectors of one level.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VermaVector {
    level: i64,
    coeffs: BTreeMap<Partition, Rat>,
}

impl VermaVector {
    pub fn zero(level: i64) -> Self {
        VermaVector { level, coeffs: BTreeMap::new() }
    }

    pub fn basis(mu: &Partition) -> Self {
        let mut v = Self::zero(mu.size() as i64);
        v.coeffs.insert(mu.clone(), Rat::one());
        v
    }

    pub fn vacuum() -> Self {
        Self::basis(&Partition::empty())
    }

    pub fn level(&self) -> i64 {
        self.level
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

    pub fn add_scaled(&mut self, other: &VermaVector, k: &Rat) {
        if k.is_zero() {
            return;
        }
        for (mu, c) in &other.coeffs {
            debug_assert_eq!(mu.size() as i64, self.level, "mixing levels");
            let entry = self.coeffs.entry(mu.clone()).or_insert_with(Rat::zero);
            *entry += c * k;
            if entry.is_zero() {
                self.coeffs.remove(mu);
            }
        }
    }

    pub fn scaled(&self, k: &Rat) -> VermaVector {
        let mut out = Self::zero(self.level);
        out.add_scaled(self, k);
        out
    }
}

/// Verma module `M_h` at central charge `c`, with memoized `L_n` action on
/// basis vectors.
#[derive(Debug)]
pub struct VermaModule {
    params: VirParams,
    action: RwLock<HashMap<(i64, Partition), VermaVector>>,
}

impl VermaModule {
    pub fn new(c: Rat, h: Rat) -> Self {
        VermaModule { params: VirParams { c, h }, action: RwLock::new(HashMap::new()) }
    }

    pub fn params(&self) -> &VirParams {
        &self.params
    }

    /// `L_n v` for any vector `v`.
    pub fn apply_l(&self, n: i64, v: &VermaVector) -> VermaVector {
        let mut out = VermaVector::zero(v.level - n);
        for (mu, c) in v.terms() {
            out.add_scaled(&self.apply_l_basis(n, mu), c);
        }
        out
    }

    /// `L_n v_μ`.
    pub fn apply_l_basis(&self, n: i64, mu: &Partition) -> VermaVector {
        let key = (n, mu.clone());
        if let Some(v) = self.action.read().expect("cache lock").get(&key) {
            return v.clone();
        }
        let v = self.compute_l_basis(n, mu);
        self.action.write().expect("cache lock").insert(key, v.clone());
        v
    }

    fn compute_l_basis(&self, n: i64, mu: &Partition) -> VermaVector {
        let level = mu.size() as i64;
        let target = level - n;
        if n == 0 {
            return VermaVector::basis(mu).scaled(&(&self.params.h + int(level)));
        }
        if target < 0 {
            return VermaVector::zero(target);
        }
        let Some(&first) = mu.parts().first() else {
            // n < 0 on the vacuum.
            return VermaVector::basis(&Partition::new(vec![(-n) as u32]));
        };
        if n < 0 && -n >= first as i64 {
            return VermaVector::basis(&mu.with_part((-n) as u32));
        }
        // L_n L_{−a} w = L_{−a} L_n w + (n + a) L_{n−a} w + δ_{n,a} (n³ − n)/12 c w
        let a = first as i64;
        let rest = Partition::new(mu.parts()[1..].to_vec());
        let rest_vec = VermaVector::basis(&rest);
        let mut out = self.apply_l(-a, &self.apply_l(n, &rest_vec));
        out.add_scaled(&self.apply_l(n - a, &rest_vec), &int(n + a));
        if n == a {
            let central = rat(n * n * n - n, 12) * &self.params.c;
            out.add_scaled(&rest_vec, &central);
        }
        out
    }

    /// Shapovalov form `(v_μ, v_ν)`: the vacuum coefficient of
    /// `L_{μ_l} ⋯ L_{μ_1} v_ν`.
    pub fn inner(&self, mu: &Partition, nu: &Partition) -> Rat {
        if mu.size() != nu.size() {
            return Rat::zero();
        }
        let mut v = VermaVector::basis(nu);
        for &part in mu.parts() {
            v = self.apply_l(part as i64, &v);
        }
        v.coeff(&Partition::empty())
    }

    /// Gram matrix `K_{μν}` at `level`, indexed by [`Partition::all_of_size`].
    pub fn gram(&self, level: u32) -> RatMatrix {
        let basis = Partition::all_of_size(level);
        let mut k = RatMatrix::zeros(basis.len(), basis.len());
        for (i, mu) in basis.iter().enumerate() {
            for (j, nu) in basis.iter().enumerate().skip(i) {
                let value = self.inner(mu, nu);
                k.set(j, i, value.clone());
                k.set(i, j, value);
            }
        }
        k
    }

    pub fn gram_inverse(&self, level: u32) -> Result<RatMatrix> {
        self.gram(level)
            .inverse()
            .ok_or(Error::SingularGram { level: level as usize })
    }
}

/// Which side of a matrix element the recursion peels first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PeelOrder {
    /// Strip `L_{−n}` from the target vector while possible.
    #[default]
    Right,
    /// Strip `L_{−n}` from the source vector while possible.
    Left,
}

/// Matrix elements `S_{μ,ν}(k_1, h, k_2) = (V v_{μ,k_1}, v_{ν,k_2})` of the
/// vertex operator `V^h_{k_2,k_1}: M_{k_1} → M_{k_2}`, normalized so that the
/// vacuum element is 1.
#[derive(Debug)]
pub struct VertexElements {
    source: VermaModule,
    target: VermaModule,
    weight: Rat,
    order: PeelOrder,
    memo: RwLock<HashMap<(Partition, Partition), Rat>>,
}

impl VertexElements {
    pub fn new(c: &Rat, k1: &Rat, h: &Rat, k2: &Rat) -> Self {
        Self::with_order(c, k1, h, k2, PeelOrder::default())
    }

    pub fn with_order(c: &Rat, k1: &Rat, h: &Rat, k2: &Rat, order: PeelOrder) -> Self {
        VertexElements {
            source: VermaModule::new(c.clone(), k1.clone()),
            target: VermaModule::new(c.clone(), k2.clone()),
            weight: h.clone(),
            order,
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// `k_2 − h − k_1 + |ν| − |μ|`, the `x`-exponent of the unnormalized element.
    fn grading(&self, mu_level: i64, nu_level: i64) -> Rat {
        &self.target.params.h - &self.weight - &self.source.params.h + int(nu_level - mu_level)
    }

    pub fn element(&self, mu: &Partition, nu: &Partition) -> Rat {
        let key = (mu.clone(), nu.clone());
        if let Some(v) = self.memo.read().expect("memo lock").get(&key) {
            return v.clone();
        }
        let v = self.compute(mu, nu);
        self.memo.write().expect("memo lock").insert(key, v.clone());
        v
    }

    /// Bilinear extension to arbitrary vectors.
    pub fn pair(&self, left: &VermaVector, right: &VermaVector) -> Rat {
        let mut acc = Rat::zero();
        for (mu, a) in left.terms() {
            for (nu, b) in right.terms() {
                acc += a * b * self.element(mu, nu);
            }
        }
        acc
    }

    fn compute(&self, mu: &Partition, nu: &Partition) -> Rat {
        let peel_right = match self.order {
            PeelOrder::Right => !nu.is_empty(),
            PeelOrder::Left => mu.is_empty() && !nu.is_empty(),
        };
        if mu.is_empty() && nu.is_empty() {
            return Rat::one();
        }
        let h = &self.weight;
        if peel_right {
            // S(μ, L_{−n} ν') = S(L_n μ, ν') + (h(n+1) + p(μ, ν')) S(μ, ν')
            let n = nu.parts()[0] as i64;
            let rest = Partition::new(nu.parts()[1..].to_vec());
            let lowered = self.source.apply_l_basis(n, mu);
            let coeff = h * int(n + 1) + self.grading(mu.size() as i64, rest.size() as i64);
            self.pair(&lowered, &VermaVector::basis(&rest)) + coeff * self.element(mu, &rest)
        } else {
            // S(L_{−n} μ', ν) = S(μ', L_n ν) − (h(1−n) + p(μ', ν)) S(μ', ν)
            let n = mu.parts()[0] as i64;
            let rest = Partition::new(mu.parts()[1..].to_vec());
            let lowered = self.target.apply_l_basis(n, nu);
            let coeff = h * int(1 - n) + self.grading(rest.size() as i64, nu.size() as i64);
            self.pair(&VermaVector::basis(&rest), &lowered) - coeff * self.element(&rest, nu)
        }
    }

    /// Matrix with rows indexed by partitions of `from`, columns by partitions of `to`.
    pub fn block(&self, from: u32, to: u32) -> RatMatrix {
        let rows = Partition::all_of_size(from);
        let cols = Partition::all_of_size(to);
        let mut m = RatMatrix::zeros(rows.len(), cols.len());
        for (i, mu) in rows.iter().enumerate() {
            for (j, nu) in cols.iter().enumerate() {
                m.set(i, j, self.element(mu, nu));
            }
        }
        m
    }
}

/// `S_{μ,ν}(k_1, h, k_2)` at central charge `c`.
pub fn s_element(mu: &Partition, nu: &Partition, k1: &Rat, h: &Rat, k2: &Rat, c: &Rat, order: PeelOrder) -> Rat {
    VertexElements::with_order(c, k1, h, k2, order).element(mu, nu)
}

/// Torus block `Σ Π_i q_i^{|μ_i|} S_{ν_i,μ_{i+1}}(k_i, h_i, k_{i+1}) [K(k_i)^{-1}]_{μ_i ν_i}`,
/// indices taken cyclically, as a trace of matrix products.
pub fn block(c: &Rat, ks: &[Rat], hs: &[Rat], order: u32) -> Result<QSeries> {
    let n = ks.len();
    if n == 0 || hs.len() != n {
        return Err(Error::InvalidInput("one internal and one external weight per node".into()));
    }
    let modules: Vec<VermaModule> = ks.iter().map(|k| VermaModule::new(c.clone(), k.clone())).collect();
    let vertices: Vec<VertexElements> =
        (0..n).map(|i| VertexElements::new(c, &ks[i], &hs[i], &ks[(i + 1) % n])).collect();
    let mut inverses: HashMap<(usize, u32), RatMatrix> = HashMap::new();
    for (i, module) in modules.iter().enumerate() {
        for level in 0..=order {
            inverses.insert((i, level), module.gram_inverse(level)?);
        }
    }
    let mut b = QSeries::zero(n, order);
    for total in 0..=order {
        for sizes in compositions(total, n) {
            let dim = Partition::all_of_size(sizes[0]).len();
            let mut product = RatMatrix::identity(dim);
            for i in 0..n {
                let next = sizes[(i + 1) % n];
                product = product
                    .mul(&inverses[&(i, sizes[i])])
                    .mul(&vertices[i].block(sizes[i], next));
            }
            let trace = (0..dim).fold(Rat::zero(), |acc, k| acc + product.get(k, k));
            b.add_coeff(&sizes, trace);
        }
    }
    Ok(b)
}

/// CFT parameters of one node under the AGT dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgtNode {
    pub k: Rat,
    pub h: Rat,
}

/// `c = 1 + 6(t1+t2)²/(t1 t2)`, `k_i = ((t1+t2)² − 4a_i²)/(4 t1 t2)`,
/// `h_i = m_i(t1 + t2 − m_i)/(t1 t2)`.
pub fn agt_substitution(t1: &Rat, t2: &Rat, a: &[Rat], m: &[Rat]) -> Result<(Rat, Vec<AgtNode>)> {
    let p = t1 * t2;
    if p.is_zero() {
        return Err(Error::DegenerateParameters("t1·t2 = 0".into()));
    }
    if a.len() != m.len() {
        return Err(Error::InvalidInput("one Coulomb parameter per mass".into()));
    }
    let s = t1 + t2;
    let c = int(1) + int(6) * &s * &s / &p;
    let nodes = a
        .iter()
        .zip(m)
        .map(|(ai, mi)| AgtNode {
            k: (&s * &s - int(4) * ai * ai) / (int(4) * &p),
            h: mi * (&s - mi) / &p,
        })
        .collect();
    Ok((c, nodes))
}
