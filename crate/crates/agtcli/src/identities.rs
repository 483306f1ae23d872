//! Cross-formula identities of every module, bundled into one check.

use agt_core::characters::{e_pair_closed, e_pair_hooks, e_specialized};
use agt_core::exactmath::{euler_function, fmt_rat, int, qpochhammer, random_point, rat, QSeries};
use agt_core::fock::{
    alpha_wedge, alpha_wedge_strips, charge_decompose, gamma_block, lowest_vector, omega_check, FockVector,
    Generator, Homogeneous, Principal, Sector, Sl2Action,
};
use agt_core::nekrasov::{z_direct, z_prime, z_trace, GaugeConfig, Torus};
use agt_core::partitions::{blend, blend_norm, unblend};
use agt_core::{ChargeVector, RTuple, Rat};
use num_traits::Zero;

use crate::checks::{partitions_up_to, random_special_config, tuples_up_to};
use crate::error::CliResult;
use crate::report::{CheckReport, Mismatch, Tally};
use crate::spec::CheckSpec;

/// Runs every identity suite with degree bound `--degree` (default 4).
pub fn check_identities(spec: &CheckSpec) -> CliResult<CheckReport> {
    let bound = spec.degree.unwrap_or(4);
    let mut t = Tally::new();
    if bound == 0 {
        return Ok(t.finish(spec));
    }
    character_routes(&mut t, bound.min(4))?;
    trace_forms(&mut t, spec.seed, bound.min(3))?;
    omega_relations(&mut t, spec.seed, bound.min(4))?;
    heisenberg_relations(&mut t, bound.min(6));
    sl2_relations(&mut t, "homogeneous", &Homogeneous, Sector::Full, bound.min(6));
    let principal = Principal::new();
    sl2_relations(&mut t, "principal", &principal, Sector::Odd, bound.min(6));
    virasoro_relations(&mut t, "homogeneous", &Homogeneous, Sector::Full, bound.min(3));
    virasoro_relations(&mut t, "principal", &principal, Sector::Odd, bound.min(4));
    blend_bijectivity(&mut t, bound);
    kac_counts(&mut t, &principal, bound)?;
    prefactor_trace(&mut t, spec.seed, bound.min(3))?;
    Ok(t.finish(spec))
}

/// Closed, hook and beta-set forms of the pair character.
pub fn character_routes(t: &mut Tally, bound: u32) -> CliResult<()> {
    let parts = partitions_up_to(bound);
    for mu in &parts {
        for nu in &parts {
            let (closed, hooks) = (e_pair_closed(mu, nu), e_pair_hooks(mu, nu));
            t.record(closed == hooks, || format!("E_{{{mu},{nu}}} closed vs hooks"), &closed, &hooks);
            match e_specialized(mu, nu) {
                Ok(_) => {
                    t.record(true, String::new, "", "");
                }
                Err(e) => {
                    t.record(false, || format!("E_{{{mu},{nu}}} specialization routes"), "agreement", e);
                }
            }
        }
    }
    Ok(())
}

/// Trace of composed `W` blocks against the direct sum.
pub fn trace_forms(t: &mut Tally, seed: u64, order: u32) -> CliResult<()> {
    for (r, n) in [(1, 1), (2, 1), (1, 2)] {
        let (trace, direct) = t.with_reseed(seed, |s, _| {
            let cfg = random_special_config(s, r, n, order)?;
            Ok((z_trace(&cfg)?, z_direct(&cfg)?))
        })?;
        t.series(&format!("trace form r={r} N={n}"), &direct, &trace);
    }
    Ok(())
}

/// Commutation of the half vertex operators through `Ω_s`.
pub fn omega_relations(t: &mut Tally, seed: u64, degree: u32) -> CliResult<()> {
    let pt = random_point(seed, &["m", "n"]);
    let (m, n) = (pt.value("m")?.clone(), pt.value("n")?.clone());
    t.param("omega m", &m);
    t.param("omega n", &n);
    for sector in [Sector::Even, Sector::Odd, Sector::Full] {
        let report = omega_check(sector, &m, &n, degree)?;
        let block_failures = report.mismatches.into_iter().map(|b| {
            let label = b.expected.minus(&b.actual).terms().next().map(|(l, _)| l.clone()).unwrap_or_default();
            Mismatch {
                location: format!("Ω_{sector:?} {} at p_{label}", b.location),
                expected: fmt_rat(&b.expected.coeff(&label)),
                actual: fmt_rat(&b.actual.coeff(&label)),
            }
        });
        let series_failures = report.series_failures.into_iter().map(|s| Mismatch {
            location: format!("Ω_{sector:?} series"),
            expected: "identity".into(),
            actual: s,
        });
        t.absorb(report.blocks_checked + 2, block_failures.chain(series_failures).collect::<Vec<_>>());
    }
    Ok(())
}

fn wedge_states(sector: Sector, bound: u32) -> Vec<FockVector> {
    (0..=bound).flat_map(|d| sector.basis(d)).map(|l| FockVector::basis(&l)).collect()
}

/// `[α_m, α_n] = m δ_{m+n,0}` and agreement of the two `α` constructions.
pub fn heisenberg_relations(t: &mut Tally, bound: u32) {
    for v in wedge_states(Sector::Full, bound) {
        let label = v.terms().next().map(|(l, _)| l.clone()).unwrap_or_default();
        for m in -4i64..=4 {
            if m == 0 {
                continue;
            }
            let ok = alpha_wedge(m, &v).is_ok();
            t.record(ok, || format!("α_{m} on v_{label}: strips vs E-sum"), "agree", "differ");
            for n in -4i64..=4 {
                if n == 0 {
                    continue;
                }
                let lhs = alpha_wedge_strips(m, &alpha_wedge_strips(n, &v)).minus(&alpha_wedge_strips(n, &alpha_wedge_strips(m, &v)));
                let rhs = if m + n == 0 { v.scaled(&int(m)) } else { FockVector::zero() };
                t.vector(|| format!("[α_{m}, α_{n}] on v_{label}"), &rhs, &lhs);
            }
        }
    }
}

/// Level-one affine sl2 relations for modes `|i| ≤ 2`.
pub fn sl2_relations(t: &mut Tally, name: &str, action: &dyn Sl2Action, sector: Sector, bound: u32) {
    let commutator = |a: &dyn Fn(&FockVector) -> FockVector, b: &dyn Fn(&FockVector) -> FockVector, v: &FockVector| {
        a(&b(v)).minus(&b(&a(v)))
    };
    for v in wedge_states(sector, bound) {
        let label = v.terms().next().map(|(l, _)| l.clone()).unwrap_or_default();
        for m in -2i64..=2 {
            for n in -2i64..=2 {
                let central = if m + n == 0 { int(m) } else { Rat::zero() };
                let (e_m, f_n, h_m, h_n, e_n) = (
                    |w: &FockVector| action.e(m, w),
                    |w: &FockVector| action.f(n, w),
                    |w: &FockVector| action.h(m, w),
                    |w: &FockVector| action.h(n, w),
                    |w: &FockVector| action.e(n, w),
                );
                let mut rhs = action.h(m + n, &v);
                rhs.add_scaled(&v, &central);
                t.vector(|| format!("{name} [e_{m}, f_{n}] on {label}"), &rhs, &commutator(&e_m, &f_n, &v));
                let rhs = v.scaled(&(int(2) * &central));
                t.vector(|| format!("{name} [h_{m}, h_{n}] on {label}"), &rhs, &commutator(&h_m, &h_n, &v));
                let rhs = action.e(m + n, &v).scaled(&int(2));
                t.vector(|| format!("{name} [h_{m}, e_{n}] on {label}"), &rhs, &commutator(&h_m, &e_n, &v));
                let rhs = action.f(m + n, &v).scaled(&int(-2));
                t.vector(|| format!("{name} [h_{m}, f_{n}] on {label}"), &rhs, &commutator(&h_m, &f_n, &v));
            }
        }
        if sector == Sector::Full {
            // d' = (d − h_0/2)/2 grades the modes: [d', x_i] = −i x_i.
            let d_prime = |w: &FockVector| {
                let graded = w.map_linear(|mu| FockVector::monomial(mu, int(mu.size() as i64)));
                graded.minus(&action.h(0, w).scaled(&rat(1, 2))).scaled(&rat(1, 2))
            };
            for i in -2i64..=2 {
                for g in [Generator::E, Generator::F, Generator::H] {
                    let x = |w: &FockVector| action.mode(g, i, w);
                    let lhs = d_prime(&x(&v)).minus(&x(&d_prime(&v)));
                    t.vector(|| format!("{name} [d', {g:?}_{i}] on {label}"), &x(&v).scaled(&int(-i)), &lhs);
                }
            }
        }
    }
}

/// Virasoro relations with `c = 1` for the Sugawara modes `|k| ≤ 2`.
pub fn virasoro_relations(t: &mut Tally, name: &str, action: &dyn Sl2Action, sector: Sector, bound: u32) {
    for v in wedge_states(sector, bound) {
        let label = v.terms().next().map(|(l, _)| l.clone()).unwrap_or_default();
        for m in -2i64..=2 {
            for n in -2i64..=2 {
                let lhs = action.sugawara(m, &action.sugawara(n, &v)).minus(&action.sugawara(n, &action.sugawara(m, &v)));
                let mut rhs = action.sugawara(m + n, &v).scaled(&int(m - n));
                if m + n == 0 {
                    rhs.add_scaled(&v, &rat(m * m * m - m, 12));
                }
                t.vector(|| format!("{name} [L_{m}, L_{n}] on {label}"), &rhs, &lhs);
            }
        }
    }
}

/// `unblend ∘ blend = id`, distinct images and `|blend(𝛍, 𝐤)| = r|𝛍| + d_𝐤`.
pub fn blend_bijectivity(t: &mut Tally, bound: u32) {
    let charge_sets: Vec<ChargeVector> = vec![
        ChargeVector::balanced(0),
        ChargeVector::balanced(1),
        ChargeVector::balanced(-1),
        ChargeVector::balanced(2),
        ChargeVector::new(vec![1, 0, -1]),
        ChargeVector::new(vec![0, 2, -1]),
    ];
    for k in &charge_sets {
        let r = k.rank();
        let tuples: Vec<RTuple> = tuples_up_to(bound.min(if r == 2 { 4 } else { 3 }), r);
        let mut images = Vec::new();
        for x in &tuples {
            let (mu, total) = blend(x, k);
            let back = unblend(&mu, total, r);
            t.record(back == (x.clone(), k.clone()), || format!("unblend(blend({x}, {k}))"), format!("{x} {k}"), format!("{} {}", back.0, back.1));
            let expected = int(r as i64 * x.size() as i64) + blend_norm(k);
            t.rat(|| format!("|blend({x}, {k})|"), &expected, &int(mu.size() as i64));
            images.push(mu);
        }
        let count = images.len();
        images.sort();
        images.dedup();
        t.count(|| format!("distinct blends for charges {k}"), count, images.len());
    }
}

/// Joint `(h_0, d')` multiplicities on odd bosons against the coefficients of
/// `Σ_k y^{2k} q^{k²} / (q;q)_∞` for `d' ≤ bound`, and the lowest vectors.
pub fn kac_counts(t: &mut Tally, principal: &Principal, bound: u32) -> CliResult<()> {
    let kmax = (0..).take_while(|k: &i64| k * k <= bound as i64).last().unwrap_or(0);
    let odd_bound = 2 * bound + kmax as u32;
    let sectors = charge_decompose(principal, odd_bound)?;
    let pn = euler_function(bound).invert()?;
    for k in -kmax..=kmax {
        for d_prime in 0..=bound as i64 {
            let expected = if d_prime >= k * k { pn.coeff(&[(d_prime - k * k) as u32]) } else { Rat::zero() };
            let found: usize = sectors
                .iter()
                .filter(|s| s.h0 == 2 * k && s.d_prime == int(d_prime))
                .map(|s| s.multiplicity)
                .sum();
            t.rat(|| format!("multiplicity of h_0={} d'={d_prime}", 2 * k), &expected, &int(found as i64));
        }
        let v = lowest_vector(k);
        let weight = int(k * k);
        t.record(v.max_odd_degree() == v.max_degree(), || format!("v_{k} has only odd modes"), "odd", "mixed");
        t.vector(|| format!("h_0 v_{k}"), &v.scaled(&int(2 * k)), &principal.h(0, &v));
        t.vector(|| format!("L_0 v_{k}"), &v.scaled(&weight), &principal.sugawara(0, &v));
    }
    Ok(())
}

/// `Tr_{Λ_e} q^{d/2} Γ_e^{(2m)} = (q;q)^{2m²−1}`, which is also `Z'` for one
/// puncture at `t1 + t2 = 0`.
pub fn prefactor_trace(t: &mut Tally, seed: u64, order: u32) -> CliResult<()> {
    let m = random_point(seed, &["m"]).value("m")?.clone();
    t.param("trace m", &m);
    let trace = even_trace(&(int(2) * &m), order);
    let closed = qpochhammer(&[1], &[1], order)?.pow_rational(&(int(2) * &m * &m - int(1)))?;
    t.series("Tr q^{d/2} Γ_e vs (q;q)^{2m²−1}", &closed, &trace);
    let cfg = GaugeConfig::new(Torus::special_unit(), vec![vec![Rat::zero(), Rat::zero()]], vec![m], order)?;
    t.series("Tr q^{d/2} Γ_e vs Z'", &z_prime(&cfg)?, &trace);
    Ok(())
}

/// `Σ_d q^{d/2} Tr(Γ_e^{(m)} restricted to even degree d)`, up to `q^order`.
pub fn even_trace(m: &Rat, order: u32) -> QSeries {
    let mut series = QSeries::zero(1, order);
    for j in 0..=order {
        let mut trace = Rat::zero();
        for lam in Sector::Even.basis(2 * j) {
            trace += gamma_block(Sector::Even, m, 0, &FockVector::basis(&lam)).coeff(&lam);
        }
        series.add_coeff(&[j], trace);
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use agt_core::Partition;
    use num_traits::One;

    #[test]
    fn even_trace_massless_is_plain_partition_count() {
        let series = even_trace(&Rat::zero(), 4);
        for j in 0..=4u32 {
            assert_eq!(series.coeff(&[j]), int(Partition::all_of_size(j).len() as i64));
        }
        assert_eq!(series.coeff(&[0]), Rat::one());
    }
}
