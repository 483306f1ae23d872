//! The verification pipelines. Each check compares two independent
//! computations coefficient by coefficient and records every comparison.

use std::collections::BTreeMap;

use agt_core::characters::SignConvention;
use agt_core::exactmath::{int, rat, random_point, QSeries, RatMatrix};
use agt_core::fock::{
    boson_inner, boson_product, gamma_block, gamma_operator, schur_to_power, sugawara_operator, verma_embedding,
    FockVector, GradedOperator, Principal, Sector,
};
use agt_core::nekrasov::{w_element, z_direct, z_prime, z_trace, GaugeConfig, Torus};
use agt_core::partitions::{blend, blend_norm};
use agt_core::virasoro::{agt_substitution, block, VertexElements};
use agt_core::{ChargeVector, Partition, RTuple, Rat};
use num_traits::{One, Zero};

use crate::error::{CliError, CliResult};
use crate::identities::check_identities;
use crate::report::{CheckReport, Tally};
use crate::spec::{CheckName, CheckSpec, Mode};

/// Runs the check named in `spec`.
pub fn run_check(spec: &CheckSpec) -> CliResult<CheckReport> {
    spec.validate()?;
    match spec.check {
        CheckName::Voprop => check_voprop(spec),
        CheckName::Dpfprop => check_dpfprop(spec),
        CheckName::Mainprop => check_mainprop(spec),
        CheckName::Mainthm => check_mainthm(spec),
        CheckName::Agt => check_agt(spec),
        CheckName::Identities => check_identities(spec),
        CheckName::Tragt => check_tragt(spec),
    }
}

/// Base seed of the `i`-th independent sample; re-seeding walks upward from it.
pub fn sample_seed(base: u64, i: u64) -> u64 {
    base + 1000 * i
}

pub(crate) fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(Partition::all_of_size).collect()
}

pub(crate) fn tuples_up_to(n: u32, r: usize) -> Vec<RTuple> {
    (0..=n).flat_map(|k| RTuple::enumerate(k, r)).collect()
}

fn single(mu: &Partition) -> RTuple {
    RTuple::new(vec![mu.clone()])
}

fn random_value(seed: u64, name: &str) -> agt_core::Result<Rat> {
    Ok(random_point(seed, &[name]).value(name)?.clone())
}

fn schur(mu: &Partition) -> FockVector {
    schur_to_power(&FockVector::basis(mu))
}

fn require_rank(spec: &CheckSpec, default: usize, allowed: &[usize]) -> CliResult<usize> {
    let r = spec.rank.unwrap_or(default);
    if !allowed.contains(&r) {
        return Err(CliError::InvalidSpec(format!("{} needs rank in {allowed:?}, got {r}", spec.check.as_str())));
    }
    Ok(r)
}

/// `(k, l)` pairs from `--charges k,l`, or the default grid.
fn charge_pairs(spec: &CheckSpec, grid: &[i64]) -> CliResult<Vec<(i64, i64)>> {
    match &spec.charges {
        Some(ch) if ch.len() == 2 => Ok(vec![(ch[0], ch[1])]),
        Some(ch) => Err(CliError::InvalidSpec(format!("expected charges k,l; got {ch:?}"))),
        None => Ok(grid.iter().flat_map(|&k| grid.iter().map(move |&l| (k, l))).collect()),
    }
}

/// Framing `𝐤 − (1/2, 1)` attached to the balanced charge `(k, −k)`.
fn shifted_framing(k: i64) -> Vec<Rat> {
    vec![int(k) - rat(1, 2), int(-k) - int(1)]
}

/// `W^{(m)}` at rank 1 (trivial framing, `t = 1`) against `Γ^{(m)}` on wedge states.
pub fn check_voprop(spec: &CheckSpec) -> CliResult<CheckReport> {
    require_rank(spec, 1, &[1])?;
    let bound = spec.degree.unwrap_or(5);
    let mut t = Tally::new();
    let parts = partitions_up_to(bound);
    let states: Vec<FockVector> = parts.iter().map(schur).collect();
    let zero = [Rat::zero()];
    for i in 0..3 {
        let m = t.with_reseed(sample_seed(spec.seed, i), |s, _| random_value(s, "m"))?;
        t.param(format!("m[{i}]"), &m);
        for (mu, src) in parts.iter().zip(&states) {
            let mut images: BTreeMap<u32, FockVector> = BTreeMap::new();
            for (nu, tgt) in parts.iter().zip(&states) {
                let image = images.entry(nu.size()).or_insert_with(|| {
                    gamma_block(Sector::Full, &m, nu.size() as i64 - mu.size() as i64, src)
                });
                let gamma = boson_inner(image, tgt);
                let w = w_element(&single(mu), &single(nu), &zero, &zero, &m, &Rat::one(), SignConvention::default())?;
                t.rat(|| format!("m[{i}] ({mu}, {nu})"), &w.value, &gamma);
            }
        }
        if bound >= 3 {
            let (mu, nu) = (Partition::from([1, 1]), Partition::from([2, 1]));
            let worked = &m * (&m - int(1)) * (&m - int(2)) * (&m + int(3)) * (&m + int(1)) / int(6);
            let w = w_element(&single(&mu), &single(&nu), &zero, &zero, &m, &Rat::one(), SignConvention::default())?;
            t.rat(|| format!("m[{i}] worked example, W side"), &worked, &w.value);
            let gamma = boson_inner(&gamma_block(Sector::Full, &m, 1, &schur(&mu)), &schur(&nu));
            t.rat(|| format!("m[{i}] worked example, vertex-operator side"), &worked, &gamma);
        }
    }
    Ok(t.finish(spec))
}

/// `β_𝐥^{-1} W^{(2m)} β_𝐤 = c · W^{(m)}_{𝐥−𝐢/2, 𝐤−𝐢/2}` on blended states, with one constant `c`
/// per charge pair read off the vacuum element.
pub fn check_dpfprop(spec: &CheckSpec) -> CliResult<CheckReport> {
    require_rank(spec, 2, &[2])?;
    let bound = spec.degree.unwrap_or(2);
    let pairs = charge_pairs(spec, &[-1, 0, 1])?;
    let mut t = Tally::new();
    let m = t.with_reseed(spec.seed, |s, _| random_value(s, "m"))?;
    t.param("m", &m);
    let two_m = int(2) * &m;
    let tuples = tuples_up_to(bound, 2);
    let zero = [Rat::zero()];
    let one = Rat::one();
    let conv = SignConvention::default();
    for (k, l) in pairs {
        let (kv, lv) = (ChargeVector::balanced(k), ChargeVector::balanced(l));
        let (a, b) = (shifted_framing(k), shifted_framing(l));
        let (dk, dl) = (blend_norm(&kv), blend_norm(&lv));
        let src: Vec<Partition> = tuples.iter().map(|x| blend(x, &kv).0).collect();
        let tgt: Vec<Partition> = tuples.iter().map(|x| blend(x, &lv).0).collect();
        let lhs = |i: usize, j: usize| w_element(&single(&src[i]), &single(&tgt[j]), &zero, &zero, &two_m, &one, conv);
        let rhs = |i: usize, j: usize| w_element(&tuples[i], &tuples[j], &a, &b, &m, &one, conv);
        let vacuum_rhs = rhs(0, 0)?.value;
        if vacuum_rhs.is_zero() {
            return Err(agt_core::Error::DegenerateParameters("vanishing vacuum element".into()).into());
        }
        let c = lhs(0, 0)?.value / vacuum_rhs;
        t.param(format!("c[k={k},l={l}]"), &c);
        for i in 0..tuples.len() {
            for j in 0..tuples.len() {
                let (left, right) = (lhs(i, j)?, rhs(i, j)?);
                let loc = || format!("k={k} l={l} ({}, {})", tuples[i], tuples[j]);
                t.rat(loc, &(&c * &right.value), &left.value);
                let power = int(2 * (tuples[j].size() as i64 - tuples[i].size() as i64)) + &dl - &dk;
                t.rat(|| format!("{} x-power", loc()), &power, &int(left.x_power));
            }
        }
    }
    Ok(t.finish(spec))
}

const MAINPROP_MODES: i64 = 2;
const MAINPROP_HALF_SHIFTS: i64 = 8;

/// `[L_{k,1/4}, Γ_p] = (m²k + p − k) Γ_{p−k}` on odd bosons, where `Γ_p` is the
/// `x^p` part of `Γ_o^{(2m)}(x^{1/2})`, plus agreement of every operator block
/// between truncations `D` and `D + 2`.
pub fn check_mainprop(spec: &CheckSpec) -> CliResult<CheckReport> {
    let bound = spec.degree.unwrap_or(9);
    let mut t = Tally::new();
    let principal = Principal::new();
    let s = rat(1, 4);
    let max_shift = MAINPROP_HALF_SHIFTS + 2 * MAINPROP_MODES;
    let mut sugawara: BTreeMap<i64, GradedOperator> = BTreeMap::new();
    for k in -MAINPROP_MODES..=MAINPROP_MODES {
        let op = sugawara_operator(&principal, k, &s, Sector::Odd, bound);
        let wider = sugawara_operator(&principal, k, &s, Sector::Odd, bound + 2);
        compare_truncations(&mut t, &format!("L_{{{k},1/4}}"), &op, &wider)?;
        sugawara.insert(k, op);
    }
    for i in 0..2 {
        let m = t.with_reseed(sample_seed(spec.seed, i), |s, _| random_value(s, "m"))?;
        t.param(format!("m[{i}]"), &m);
        let two_m = int(2) * &m;
        let mut gammas: BTreeMap<i64, GradedOperator> = BTreeMap::new();
        for shift in -max_shift..=max_shift {
            let op = gamma_operator(Sector::Odd, &two_m, shift, bound);
            if shift.abs() <= MAINPROP_HALF_SHIFTS {
                let wider = gamma_operator(Sector::Odd, &two_m, shift, bound + 2);
                compare_truncations(&mut t, &format!("m[{i}] Γ_{{{shift}/2}}"), &op, &wider)?;
            }
            gammas.insert(shift, op);
        }
        for (&k, l_op) in &sugawara {
            for shift in -MAINPROP_HALF_SHIFTS..=MAINPROP_HALF_SHIFTS {
                let factor = &m * &m * int(k) + rat(shift, 2) - int(k);
                let (g, g_next) = (&gammas[&shift], &gammas[&(shift - 2 * k)]);
                for d in 0..=bound as i64 {
                    let visited = [d + shift, d - 2 * k, d + shift - 2 * k];
                    if visited.iter().any(|&x| x < 0 || x > bound as i64) {
                        continue;
                    }
                    for lam in Sector::Odd.basis(d as u32) {
                        let v = FockVector::basis(&lam);
                        let lhs = l_op.apply(&g.apply(&v)?)?.minus(&g.apply(&l_op.apply(&v)?)?);
                        let rhs = g_next.apply(&v)?.scaled(&factor);
                        t.vector(|| format!("m[{i}] k={k} p={shift}/2 on p_{lam}"), &rhs, &lhs);
                    }
                }
            }
        }
    }
    Ok(t.finish(spec))
}

fn compare_truncations(t: &mut Tally, name: &str, narrow: &GradedOperator, wide: &GradedOperator) -> CliResult<()> {
    for d in narrow.source_degrees() {
        let (a, b) = (narrow.block(d)?, wide.block(d)?);
        t.record(a == b, || format!("{name} block from degree {d} at D={} vs D={}", narrow.bound(), wide.bound()), "equal", "different");
    }
    Ok(())
}

/// The three parts of the rank-two theorem: the blended states span
/// `Λ_e ⊗ V_k`; `Γ^{(2m)}` between blended states factorizes into even and
/// odd blocks and equals the rank-two `W^{(m)}`; the odd factor equals the
/// Virasoro vertex-operator elements through the Verma embedding.
pub fn check_mainthm(spec: &CheckSpec) -> CliResult<CheckReport> {
    require_rank(spec, 2, &[2])?;
    let bound = spec.degree.unwrap_or(3);
    let pairs = charge_pairs(spec, &[0, 1])?;
    let mut t = Tally::new();
    let m = t.with_reseed(spec.seed, |s, _| random_value(s, "m"))?;
    t.param("m", &m);
    let principal = Principal::new();
    let s = rat(1, 4);
    let mut charges: Vec<i64> = pairs.iter().flat_map(|&(k, l)| [k, l]).collect();
    charges.sort_unstable();
    charges.dedup();
    for &k in &charges {
        mainthm_span(&mut t, &principal, k, bound, &s)?;
    }
    for &(k, l) in &pairs {
        mainthm_factorization(&mut t, &m, k, l, bound)?;
        mainthm_virasoro(&mut t, &principal, &m, k, l, bound, &s)?;
    }
    Ok(t.finish(spec))
}

fn rank_of(columns: &[FockVector]) -> usize {
    let mut labels: Vec<&Partition> = columns.iter().flat_map(|c| c.terms().map(|(l, _)| l)).collect();
    labels.sort();
    labels.dedup();
    let mut mat = RatMatrix::zeros(labels.len(), columns.len());
    for (j, c) in columns.iter().enumerate() {
        for (i, l) in labels.iter().enumerate() {
            mat.set(i, j, c.coeff(l));
        }
    }
    mat.rank()
}

fn mainthm_span(t: &mut Tally, principal: &Principal, k: i64, bound: u32, s: &Rat) -> CliResult<()> {
    let kv = ChargeVector::balanced(k);
    for n in 0..=bound {
        let blended: Vec<FockVector> = RTuple::enumerate(n, 2).iter().map(|x| schur(&blend(x, &kv).0)).collect();
        let mut products = Vec::new();
        for j in 0..=n {
            for lam in Sector::Even.basis(2 * j) {
                for nu in Partition::all_of_size(n - j) {
                    let image = verma_embedding(principal, k, s, &nu)?;
                    products.push(boson_product(&FockVector::basis(&lam), &image));
                }
            }
        }
        let dim = blended.len();
        let joint: Vec<FockVector> = blended.iter().chain(&products).cloned().collect();
        t.count(|| format!("k={k} level {n}: rank of blended images"), dim, rank_of(&blended));
        t.count(|| format!("k={k} level {n}: rank of Λ_e ⊗ Verma images"), dim, rank_of(&products));
        t.count(|| format!("k={k} level {n}: rank of both together"), dim, rank_of(&joint));
    }
    Ok(())
}

fn mainthm_factorization(t: &mut Tally, m: &Rat, k: i64, l: i64, bound: u32) -> CliResult<()> {
    let two_m = int(2) * m;
    let (kv, lv) = (ChargeVector::balanced(k), ChargeVector::balanced(l));
    let (dk, dl) = (blend_norm(&kv), blend_norm(&lv));
    let quarter = rat(1, 4);
    let weight = |x: i64| (int(x) + &quarter) * (int(x) + &quarter);
    t.rat(|| format!("k={k} l={l} d_l/2 − d_k/2"), &(weight(l) - weight(k)), &((&dl - &dk) / int(2)));
    let (a, b) = (shifted_framing(k), shifted_framing(l));
    let tuples = tuples_up_to(bound, 2);
    let src: Vec<(Partition, FockVector)> =
        tuples.iter().map(|x| blend(x, &kv).0).map(|p| (p.clone(), schur(&p))).collect();
    let tgt: Vec<(Partition, FockVector)> =
        tuples.iter().map(|x| blend(x, &lv).0).map(|p| (p.clone(), schur(&p))).collect();
    let shift = |i: usize, j: usize| tgt[j].0.size() as i64 - src[i].0.size() as i64;
    let vacuum = boson_inner(&gamma_block(Sector::Full, &two_m, shift(0, 0), &src[0].1), &tgt[0].1);
    t.param(format!("vacuum[k={k},l={l}]"), &vacuum);
    for i in 0..tuples.len() {
        let mut images: BTreeMap<i64, FockVector> = BTreeMap::new();
        for j in 0..tuples.len() {
            let sh = shift(i, j);
            let loc = || format!("k={k} l={l} ({}, {})", tuples[i], tuples[j]);
            if let std::collections::btree_map::Entry::Vacant(slot) = images.entry(sh) {
                let full = gamma_block(Sector::Full, &two_m, sh, &src[i].1);
                let degree = src[i].0.size() as i64;
                let mut factored = FockVector::zero();
                for even_shift in -degree..=(sh + degree) {
                    let even = gamma_block(Sector::Even, &two_m, even_shift, &src[i].1);
                    factored.add_scaled(&gamma_block(Sector::Odd, &two_m, sh - even_shift, &even), &Rat::one());
                }
                t.vector(|| format!("k={k} l={l} {} y-shift {sh}: even ⊗ odd factorization", tuples[i]), &full, &factored);
                slot.insert(full);
            }
            let lhs = boson_inner(&images[&sh], &tgt[j].1);
            let w = w_element(&tuples[i], &tuples[j], &a, &b, m, &Rat::one(), SignConvention::default())?;
            t.rat(loc, &(&vacuum * &w.value), &lhs);
            let half_power = rat(sh, 2);
            let expected = int(tuples[j].size() as i64 - tuples[i].size() as i64) + (&dl - &dk) / int(2);
            t.rat(|| format!("{} x-power", loc()), &expected, &half_power);
        }
    }
    Ok(())
}

fn mainthm_virasoro(t: &mut Tally, principal: &Principal, m: &Rat, k: i64, l: i64, bound: u32, s: &Rat) -> CliResult<()> {
    let two_m = int(2) * m;
    let weight = |x: i64| (int(x) + s) * (int(x) + s);
    let vertex = VertexElements::new(&Rat::one(), &weight(k), &(m * m), &weight(l));
    let parts = partitions_up_to(bound);
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for mu in &parts {
        src.push(verma_embedding(principal, k, s, mu)?);
        tgt.push(verma_embedding(principal, l, s, mu)?);
    }
    let staircase = |x: i64| Partition::staircase(x).size() as i64;
    let shift = |i: usize, j: usize| {
        (staircase(l) + 2 * parts[j].size() as i64) - (staircase(k) + 2 * parts[i].size() as i64)
    };
    let element = |i: usize, j: usize| boson_inner(&gamma_block(Sector::Odd, &two_m, shift(i, j), &src[i]), &tgt[j]);
    let vacuum = element(0, 0);
    t.param(format!("odd vacuum[k={k},l={l}]"), &vacuum);
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            let expected = &vacuum * vertex.element(&parts[i], &parts[j]);
            t.rat(|| format!("k={k} l={l} Verma ({}, {})", parts[i], parts[j]), &expected, &element(i, j));
        }
    }
    Ok(())
}

fn agt_sides(t1: &Rat, t2: &Rat, a: &[Rat], m: &[Rat], order: u32) -> agt_core::Result<(QSeries, QSeries)> {
    let torus = if (t1 + t2).is_zero() { Torus::Special { t: t1.clone() } } else { Torus::General { t1: t1.clone(), t2: t2.clone() } };
    let framings = a.iter().map(|x| vec![x.clone(), -x.clone()]).collect();
    let cfg = GaugeConfig::new(torus, framings, m.to_vec(), order)?;
    let z = z_direct(&cfg)?;
    let (c, nodes) = agt_substitution(t1, t2, a, m)?;
    let ks: Vec<Rat> = nodes.iter().map(|n| n.k.clone()).collect();
    let hs: Vec<Rat> = nodes.iter().map(|n| n.h.clone()).collect();
    let conformal = block(&c, &ks, &hs, order)?;
    Ok((z, z_prime(&cfg)?.mul(&conformal)))
}

/// `Z = Z' · B` under the AGT dictionary.
pub fn check_agt(spec: &CheckSpec) -> CliResult<CheckReport> {
    require_rank(spec, 2, &[2])?;
    let n = spec.points.unwrap_or(1);
    let mut t = Tally::new();
    match spec.mode {
        Mode::Special => {
            let order = spec.order.unwrap_or(if n == 1 { 3 } else { 2 });
            let ks = spec.charges.clone().unwrap_or_else(|| (0..n as i64).collect());
            if ks.len() != n {
                return Err(CliError::InvalidSpec(format!("need {n} charges, got {}", ks.len())));
            }
            let a: Vec<Rat> = ks.iter().map(|&k| int(k) + rat(1, 4)).collect();
            for (i, ai) in a.iter().enumerate() {
                t.param(format!("a{i}"), ai);
            }
            let names: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
            let (masses, (z, rhs)) = t.with_reseed(spec.seed, |s, _| {
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let pt = random_point(s, &refs);
                let masses: Vec<Rat> = names.iter().map(|nm| pt.value(nm).cloned()).collect::<agt_core::Result<_>>()?;
                let sides = agt_sides(&Rat::one(), &-Rat::one(), &a, &masses, order)?;
                Ok((masses, sides))
            })?;
            for (nm, mi) in names.iter().zip(&masses) {
                t.param(nm.clone(), mi);
            }
            t.series("Z vs Z'·B", &z, &rhs);
        }
        Mode::Generic => {
            if n != 1 {
                return Err(CliError::InvalidSpec("generic mode runs with one puncture".into()));
            }
            let order = spec.order.unwrap_or(2);
            if order > 2 {
                return Err(CliError::InvalidSpec("generic mode is limited to order 2".into()));
            }
            t.note("conjecture check: generic t1, t2 outside the proven t1 + t2 = 0 locus");
            for i in 0..3 {
                let (pt, (z, rhs)) = t.with_reseed(sample_seed(spec.seed, i), |s, _| {
                    let pt = random_point(s, &["t1", "t2", "a", "m"]);
                    let g = |nm: &str| pt.value(nm).cloned();
                    let sides = agt_sides(&g("t1")?, &g("t2")?, &[g("a")?], &[g("m")?], order)?;
                    Ok((pt, sides))
                })?;
                for (nm, v) in pt.iter() {
                    t.param(format!("{nm}[{i}]"), v);
                }
                t.series(&format!("sample {i}: Z vs Z'·B"), &z, &rhs);
            }
        }
    }
    Ok(t.finish(spec))
}

/// Random special-point gauge configuration: `t`, masses `m{i}`, framings `a{i}_{j}`.
pub fn random_special_config(seed: u64, r: usize, n: usize, order: u32) -> agt_core::Result<GaugeConfig> {
    let mut names = vec!["t".to_string()];
    for i in 0..n {
        names.push(format!("m{i}"));
        names.extend((0..r).map(|j| format!("a{i}_{j}")));
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pt = random_point(seed, &refs);
    let g = |s: String| pt.value(&s).cloned();
    let framings = (0..n).map(|i| (0..r).map(|j| g(format!("a{i}_{j}"))).collect()).collect::<agt_core::Result<_>>()?;
    let masses = (0..n).map(|i| g(format!("m{i}"))).collect::<agt_core::Result<_>>()?;
    GaugeConfig::new(Torus::Special { t: g("t".into())? }, framings, masses, order)
}

/// Trace of the composed `W` operators against the direct Nekrasov sum.
pub fn check_tragt(spec: &CheckSpec) -> CliResult<CheckReport> {
    let r = spec.rank.unwrap_or(1);
    let n = spec.points.unwrap_or(1);
    let order = spec.order.unwrap_or(3);
    let mut t = Tally::new();
    for i in 0..3 {
        let (cfg, trace, direct) = t.with_reseed(sample_seed(spec.seed, i), |s, _| {
            let cfg = random_special_config(s, r, n, order)?;
            let trace = z_trace(&cfg)?;
            let direct = z_direct(&cfg)?;
            Ok((cfg, trace, direct))
        })?;
        if let Torus::Special { t: tv } = &cfg.torus {
            t.param(format!("t[{i}]"), tv);
        }
        for (j, mj) in cfg.masses.iter().enumerate() {
            t.param(format!("m{j}[{i}]"), mj);
        }
        t.series(&format!("sample {i}: trace vs direct"), &direct, &trace);
    }
    Ok(t.finish(spec))
}
