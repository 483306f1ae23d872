//! Nekrasov partition functions of the necklace quiver, the Ext operator `W`
//! and the prefactor `Z'`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::characters::{half_weight, sign, w_weight, w_weight_general, SignConvention};
use crate::error::{Error, Result};
use crate::exactmath::{int, qpochhammer, QSeries, Rat, RatMatrix};
use crate::partitions::RTuple;

/// Equivariant parameters of the torus acting on the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Torus {
    /// `t1 = t`, `t2 = −t`.
    Special { t: Rat },
    General { t1: Rat, t2: Rat },
}

impl Torus {
    pub fn special_unit() -> Self {
        Torus::Special { t: Rat::one() }
    }

    pub fn t1_t2(&self) -> (Rat, Rat) {
        match self {
            Torus::Special { t } => (t.clone(), -t.clone()),
            Torus::General { t1, t2 } => (t1.clone(), t2.clone()),
        }
    }

    /// `Δ_{m,n} = m(t1 + t2 − n)/(t1 t2)`.
    pub fn delta(&self, m: &Rat, n: &Rat) -> Result<Rat> {
        let (t1, t2) = self.t1_t2();
        let denom = &t1 * &t2;
        if denom.is_zero() {
            return Err(Error::DegenerateParameters("t1·t2 = 0".into()));
        }
        Ok(m * (&t1 + &t2 - n) / denom)
    }
}

/// A necklace quiver gauge theory: `N` nodes of rank `r`, framings `𝐚_i`,
/// masses `m_i`, truncated at total instanton number `order`.
#[derive(Clone, Debug)]
pub struct GaugeConfig {
    pub rank: usize,
    pub torus: Torus,
    /// One `r`-list per node.
    pub framings: Vec<Vec<Rat>>,
    pub masses: Vec<Rat>,
    pub order: u32,
    pub convention: SignConvention,
}

impl GaugeConfig {
    pub fn new(torus: Torus, framings: Vec<Vec<Rat>>, masses: Vec<Rat>, order: u32) -> Result<Self> {
        let rank = framings.first().map_or(0, Vec::len);
        if rank == 0 || framings.iter().any(|a| a.len() != rank) {
            return Err(Error::InvalidInput("every node needs a framing of the same rank ≥ 1".into()));
        }
        if masses.len() != framings.len() {
            return Err(Error::InvalidInput("one mass per node".into()));
        }
        Ok(GaugeConfig { rank, torus, framings, masses, order, convention: SignConvention::default() })
    }

    /// Number of nodes `N`.
    pub fn nodes(&self) -> usize {
        self.framings.len()
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.nodes()
    }

    fn weight(&self, mu: &RTuple, nu: &RTuple, a: &[Rat], b: &[Rat], m: &Rat) -> Result<Rat> {
        match &self.torus {
            Torus::Special { t } => w_weight(mu, nu, a, b, m, t),
            Torus::General { t1, t2 } => w_weight_general(mu, nu, a, b, m, t1, t2),
        }
    }
}

/// All compositions `(n_1, …, n_N)` of `total` into `parts` nonnegative pieces.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn tuple_chains(sizes: &[u32], r: usize) -> Vec<Vec<RTuple>> {
    let mut chains = vec![vec![]];
    for &n in sizes {
        let options = RTuple::enumerate(n, r);
        chains = chains
            .into_iter()
            .flat_map(|c: Vec<RTuple>| {
                options.iter().map(move |t| {
                    let mut c = c.clone();
                    c.push(t.clone());
                    c
                })
            })
            .collect();
    }
    chains
}

/// `Z = Σ Π_i q_i^{|𝛍^i|} w_{𝛍^i,𝛍^{i+1}}(𝐚_i, 𝐚_{i+1}, m_i) / w_{𝛍^i,𝛍^i}(𝐚_i, 𝐚_i, 0)`,
/// summed over all `N`-tuples of `r`-tuples, indices taken cyclically.
pub fn z_direct(cfg: &GaugeConfig) -> Result<QSeries> {
    let n = cfg.nodes();
    let r = cfg.rank;
    let mut diag: HashMap<(usize, RTuple), Rat> = HashMap::new();
    let mut z = QSeries::zero(n, cfg.order);
    for total in 0..=cfg.order {
        for sizes in compositions(total, n) {
            for chain in tuple_chains(&sizes, r) {
                let mut term = Rat::one();
                for i in 0..n {
                    let j = cfg.next(i);
                    let a = &cfg.framings[i];
                    let key = (i, chain[i].clone());
                    let d = match diag.get(&key) {
                        Some(d) => d.clone(),
                        None => {
                            let d = cfg.weight(&chain[i], &chain[i], a, a, &Rat::zero())?;
                            diag.insert(key, d.clone());
                            d
                        }
                    };
                    if d.is_zero() {
                        return Err(Error::DegenerateParameters(format!(
                            "vanishing diagonal weight at node {} for {}",
                            i + 1,
                            chain[i]
                        )));
                    }
                    term *= cfg.weight(&chain[i], &chain[j], a, &cfg.framings[j], &cfg.masses[i])? / d;
                    if term.is_zero() {
                        break;
                    }
                }
                z.add_coeff(&sizes, term);
            }
        }
    }
    Ok(z)
}

/// Matrix element `(W^{(m)}_{𝐛,𝐚}(x) u_source, u_target)`: the coefficient
/// `value` of `x^{x_power}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WMatrixElement {
    pub source: RTuple,
    pub target: RTuple,
    pub value: Rat,
    pub x_power: i64,
}

/// `(−1)^{r|𝛍|} w_{𝛍,𝛎}(𝐚, 𝐛, m) / (w_𝛍(𝐚) w_𝛎(𝐛))` with the square roots
/// taken in `convention`.
pub fn w_element(
    source: &RTuple,
    target: &RTuple,
    a: &[Rat],
    b: &[Rat],
    m: &Rat,
    t: &Rat,
    convention: SignConvention,
) -> Result<WMatrixElement> {
    let w = w_weight(source, target, a, b, m, t)?;
    let denom = half_weight(source, a, t, convention)? * half_weight(target, b, t, convention)?;
    let value = sign(source.rank() as u64 * source.size() as u64) * w / denom;
    Ok(WMatrixElement {
        source: source.clone(),
        target: target.clone(),
        value,
        x_power: target.size() as i64 - source.size() as i64,
    })
}

/// Block of `W` from size `from` to size `to`: rows indexed by targets,
/// columns by sources, both in [`RTuple::enumerate`] order.
pub fn w_block(
    from: u32,
    to: u32,
    a: &[Rat],
    b: &[Rat],
    m: &Rat,
    t: &Rat,
    convention: SignConvention,
) -> Result<RatMatrix> {
    let r = a.len();
    let sources = RTuple::enumerate(from, r);
    let targets = RTuple::enumerate(to, r);
    let mut block = RatMatrix::zeros(targets.len(), sources.len());
    for (col, s) in sources.iter().enumerate() {
        for (row, tgt) in targets.iter().enumerate() {
            block.set(row, col, w_element(s, tgt, a, b, m, t, convention)?.value);
        }
    }
    Ok(block)
}

/// Exponent vector of `x_i = q_1 · q_{i+1} ⋯ q_N` (1-based `i`).
pub fn x_exponents(i: usize, n: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[0] = 1;
    for slot in e.iter_mut().skip(i) {
        *slot += 1;
    }
    e
}

/// `Tr q^d W_N(x_N) ⋯ W_1(x_1)` with `W_i = W^{(m_i)}_{𝐚_{i+1},𝐚_i}`, as a
/// trace of products of matrix blocks.
pub fn z_trace(cfg: &GaugeConfig) -> Result<QSeries> {
    let Torus::Special { t } = &cfg.torus else {
        return Err(Error::InvalidInput("the trace form needs t1 + t2 = 0".into()));
    };
    let n = cfg.nodes();
    let mut blocks: HashMap<(usize, u32, u32), RatMatrix> = HashMap::new();
    let mut z = QSeries::zero(n, cfg.order);
    for total in 0..=cfg.order {
        for sizes in compositions(total, n) {
            let mut product = RatMatrix::identity(RTuple::enumerate(sizes[0], cfg.rank).len());
            for i in 0..n {
                let j = cfg.next(i);
                let key = (i, sizes[i], sizes[j]);
                if let std::collections::hash_map::Entry::Vacant(slot) = blocks.entry(key) {
                    let block = w_block(
                        sizes[i],
                        sizes[j],
                        &cfg.framings[i],
                        &cfg.framings[j],
                        &cfg.masses[i],
                        t,
                        cfg.convention,
                    )?;
                    slot.insert(block);
                }
                product = blocks[&key].mul(&product);
            }
            let trace = (0..product.rows()).fold(Rat::zero(), |acc, k| acc + product.get(k, k));
            // q^d contributes q^{n_1} with q = q_1⋯q_N; W_i contributes x_i^{n_{i+1}−n_i}.
            let mut exps = vec![sizes[0] as i64; n];
            for i in 0..n {
                let shift = sizes[cfg.next(i)] as i64 - sizes[i] as i64;
                for (e, x) in exps.iter_mut().zip(x_exponents(i + 1, n)) {
                    *e += shift * x;
                }
            }
            let exps: Vec<u32> = exps
                .into_iter()
                .map(|e| u32::try_from(e).expect("trace monomial has a negative exponent"))
                .collect();
            z.add_coeff(&exps, trace);
        }
    }
    Ok(z)
}

/// `Z' = (q;q)^{2ΣΔ_{m_i,m_i} − 1} Π_{i<j} (x_i/x_j; q)^{2Δ_{m_i,m_j}} (q x_j/x_i; q)^{2Δ_{m_j,m_i}}`
/// with `x_i/x_j = q_{i+1}⋯q_j` and `q x_j/x_i = q_1⋯q_i q_{j+1}⋯q_N`.
pub fn z_prime(cfg: &GaugeConfig) -> Result<QSeries> {
    let n = cfg.nodes();
    let order = cfg.order;
    let q = vec![1u32; n];
    let mut diag_sum = Rat::zero();
    for m in &cfg.masses {
        diag_sum += cfg.torus.delta(m, m)?;
    }
    let mut z = qpochhammer(&q, &q, order)?.pow_rational(&(int(2) * diag_sum - int(1)))?;
    for i in 0..n {
        for j in i + 1..n {
            let inner: Vec<u32> = (0..n).map(|k| u32::from(k > i && k <= j)).collect();
            let outer: Vec<u32> = inner.iter().map(|e| 1 - e).collect();
            let dij = cfg.torus.delta(&cfg.masses[i], &cfg.masses[j])?;
            let dji = cfg.torus.delta(&cfg.masses[j], &cfg.masses[i])?;
            z = z.mul(&qpochhammer(&inner, &q, order)?.pow_rational(&(int(2) * dij))?);
            z = z.mul(&qpochhammer(&outer, &q, order)?.pow_rational(&(int(2) * dji))?);
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{random_point, rat, euler_function};
    use crate::partitions::Partition;

    fn single(parts: &[u32]) -> RTuple {
        RTuple::new(vec![Partition::new(parts.to_vec())])
    }

    #[test]
    fn compositions_cover_all_sizes() {
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(3, 3).len(), 10);
    }

    #[test]
    fn x_bookkeeping() {
        assert_eq!(x_exponents(1, 3), vec![1, 1, 1]);
        assert_eq!(x_exponents(2, 3), vec![1, 0, 1]);
        assert_eq!(x_exponents(3, 3), vec![1, 0, 0]);
    }

    #[test]
    fn order_zero_is_one() {
        let cfg = GaugeConfig::new(Torus::special_unit(), vec![vec![rat(1, 3), rat(-1, 3)]], vec![rat(2, 7)], 0).unwrap();
        assert_eq!(z_direct(&cfg).unwrap(), QSeries::one(1, 0));
        assert_eq!(z_trace(&cfg).unwrap(), QSeries::one(1, 0));
    }

    fn closed_form_first_order(t1: &Rat, t2: &Rat, a: &Rat, m: &Rat) -> Rat {
        let two = int(2);
        let s = t1 + t2;
        let first = (m - &two * a) * (m - t2) * (m - t1) * (m + &two * a - &s)
            / (&two * a * t1 * t2 * (&s - &two * a));
        let second = (m + &two * a) * (m - t2) * (m - t1) * (m - &two * a - &s)
            / (&two * a * t1 * t2 * (&s + &two * a));
        first - second
    }

    #[test]
    fn first_order_rank_two() {
        for seed in 0..5 {
            let pt = random_point(seed, &["t1", "t2", "a", "m"]);
            let g = |n: &str| pt.value(n).unwrap().clone();
            let torus = Torus::General { t1: g("t1"), t2: g("t2") };
            let cfg = GaugeConfig::new(torus, vec![vec![g("a"), -g("a")]], vec![g("m")], 1).unwrap();
            let z = z_direct(&cfg).unwrap();
            assert_eq!(z.coeff(&[0]), Rat::one());
            assert_eq!(z.coeff(&[1]), closed_form_first_order(&g("t1"), &g("t2"), &g("a"), &g("m")));
        }
    }

    #[test]
    fn w_element_examples() {
        let e = RTuple::empty(2);
        let a = [rat(1, 2), rat(-1, 2)];
        let w = w_element(&e, &e, &a, &a, &rat(3, 5), &int(1), SignConvention::default()).unwrap();
        assert_eq!((w.value, w.x_power), (Rat::one(), 0));
        for m in -3..=3 {
            let m = rat(m, 2);
            let w = w_element(&single(&[1, 1]), &single(&[2, 1]), &[int(0)], &[int(0)], &m, &int(1), SignConvention::default())
                .unwrap();
            let expected = &m * (&m - int(1)) * (&m - int(2)) * (&m + int(3)) * (&m + int(1)) / int(6);
            assert_eq!(w.value, expected);
            assert_eq!(w.x_power, 1);
        }
    }

    #[test]
    fn w_element_depends_on_framing_differences() {
        for seed in 0..3 {
            let pt = random_point(seed, &["a1", "a2", "b1", "b2", "m", "c"]);
            let g = |n: &str| pt.value(n).unwrap().clone();
            let a = [g("a1"), g("a2")];
            let b = [g("b1"), g("b2")];
            let a_shift = [g("a1") + g("c"), g("a2") + g("c")];
            let b_shift = [g("b1") + g("c"), g("b2") + g("c")];
            for s in 0..=2 {
                for src in RTuple::enumerate(s, 2) {
                    for tgt in RTuple::enumerate(2 - s, 2) {
                        let plain = w_element(&src, &tgt, &a, &b, &g("m"), &int(1), SignConvention::default()).unwrap();
                        let shifted =
                            w_element(&src, &tgt, &a_shift, &b_shift, &g("m"), &int(1), SignConvention::default()).unwrap();
                        assert_eq!(plain.value, shifted.value);
                    }
                }
            }
        }
    }

    fn special_config(seed: u64, r: usize, n: usize, order: u32) -> GaugeConfig {
        let mut names = vec!["t".to_string()];
        for i in 0..n {
            names.push(format!("m{i}"));
            for j in 0..r {
                names.push(format!("a{i}_{j}"));
            }
        }
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let pt = random_point(seed, &names);
        let g = |s: String| pt.value(&s).unwrap().clone();
        let framings = (0..n).map(|i| (0..r).map(|j| g(format!("a{i}_{j}"))).collect()).collect();
        let masses = (0..n).map(|i| g(format!("m{i}"))).collect();
        GaugeConfig::new(Torus::Special { t: g("t".into()) }, framings, masses, order).unwrap()
    }

    #[test]
    fn trace_matches_direct_sum() {
        for (r, n, order) in [(1, 1, 3), (2, 1, 2), (1, 2, 2), (2, 2, 1)] {
            for seed in 0..2 {
                let mut cfg = special_config(seed, r, n, order);
                let direct = z_direct(&cfg).unwrap();
                assert_eq!(z_trace(&cfg).unwrap(), direct, "r={r} N={n}");
                cfg.convention = SignConvention::LeadingForm;
                assert_eq!(z_trace(&cfg).unwrap(), direct, "r={r} N={n} leading-form signs");
            }
        }
    }

    #[test]
    fn prefactor_examples() {
        let m = rat(2, 9);
        let cfg = GaugeConfig::new(Torus::special_unit(), vec![vec![int(0)]], vec![m.clone()], 3).unwrap();
        let z = z_prime(&cfg).unwrap();
        assert_eq!(z.coeff(&[0]), Rat::one());
        assert_eq!(z.coeff(&[1]), int(1) - int(2) * &m * &m);
        let massless = GaugeConfig::new(Torus::special_unit(), vec![vec![int(0)]], vec![int(0)], 4).unwrap();
        assert_eq!(z_prime(&massless).unwrap(), euler_function(4).invert().unwrap());
    }

    #[test]
    fn prefactor_two_nodes_against_products() {
        // Equal integer-valued 2Δ exponents: compare with plain finite products.
        let torus = Torus::special_unit();
        let m = int(1);
        let cfg = GaugeConfig::new(torus, vec![vec![int(0)], vec![int(0)]], vec![m.clone(), m], 2).unwrap();
        let order = 2;
        let mut expected = QSeries::one(2, order);
        // (q;q)^{3}: 2Δ_{11} + 2Δ_{22} − 1 = 3 at t = 1.
        for _ in 0..3 {
            expected = expected.mul(&qpochhammer(&[1, 1], &[1, 1], order).unwrap());
        }
        // (q_2; q)^2 (q_1; q)^2
        for x in [[0u32, 1], [1, 0]] {
            let p = qpochhammer(&x, &[1, 1], order).unwrap();
            expected = expected.mul(&p).mul(&p);
        }
        assert_eq!(z_prime(&cfg).unwrap(), expected);
    }

    #[test]
    fn direct_sum_has_unit_constant_term() {
        for seed in 0..3 {
            let cfg = special_config(seed, 2, 2, 2);
            assert_eq!(z_direct(&cfg).unwrap().coeff(&[0, 0]), Rat::one());
        }
    }
}
