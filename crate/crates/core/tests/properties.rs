use agt_core::characters::{e_pair_closed, e_pair_hooks, e_specialized, half_weight, SignConvention};
use agt_core::exactmath::{int, random_point, rat, Rat};
use agt_core::fock::{
    alpha_wedge, alpha_wedge_strips, boson_inner, gamma_block, power_to_schur, schur_to_power, FockVector, Sector,
};
use agt_core::nekrasov::{w_element, z_direct, z_trace, GaugeConfig, Torus};
use agt_core::partitions::{blend, blend_norm, blend_truncation, blend_with_len, border_strips, unblend};
use agt_core::virasoro::{s_element, PeelOrder, VermaModule, VermaVector};
use agt_core::{ChargeVector, Partition, RTuple};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn partition(max_parts: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_parts).prop_map(Partition::new)
}

fn tuple(r: usize) -> impl Strategy<Value = RTuple> {
    prop::collection::vec(partition(2, 2), r).prop_map(RTuple::new)
}

fn point(seed: u64, names: &[&str]) -> Vec<Rat> {
    let pt = random_point(seed, names);
    names.iter().map(|n| pt.value(n).unwrap().clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_an_involution(mu in partition(5, 5)) {
        prop_assert_eq!(mu.conjugate().conjugate(), mu.clone());
        prop_assert_eq!(mu.boxes().count() as u32, mu.size());
        prop_assert_eq!(mu.conjugate().size(), mu.size());
    }

    #[test]
    fn single_strips_are_addable_corners(mu in partition(5, 5)) {
        let grown: Vec<Partition> = border_strips(&mu, 1).into_iter().map(|(l, h)| { assert_eq!(h, 0); l }).collect();
        let mut expected = Vec::new();
        for row in 1..=mu.len() + 1 {
            let above = if row == 1 { u32::MAX } else { mu.part(row - 1) };
            if mu.part(row) < above {
                let mut parts = mu.parts().to_vec();
                if row > parts.len() { parts.push(1) } else { parts[row - 1] += 1 }
                expected.push(Partition::new(parts));
            }
        }
        expected.sort();
        let mut got = grown;
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn blend_round_trips(r in 2usize..=3, seed in any::<u64>(), mus in prop::collection::vec(partition(2, 2), 3)) {
        let mus = RTuple::new(mus.into_iter().take(r).collect());
        let ks: Vec<i64> = (0..r).map(|i| ((seed >> (3 * i)) % 5) as i64 - 2).collect();
        let charges = ChargeVector::new(ks);
        let (mu, k) = blend(&mus, &charges);
        prop_assert_eq!(unblend(&mu, k, r), (mus.clone(), charges.clone()));
        prop_assert_eq!(int(mu.size() as i64), int(r as i64 * mus.size() as i64) + blend_norm(&charges));
        let longer = blend_with_len(&mus, &charges, blend_truncation(&mus, &charges) + 7);
        prop_assert_eq!(longer, (mu, k));
    }

    #[test]
    fn character_formulas_agree(mu in partition(3, 3), nu in partition(3, 3)) {
        prop_assert_eq!(e_pair_closed(&mu, &nu), e_pair_hooks(&mu, &nu));
        prop_assert!(e_specialized(&mu, &nu).is_ok());
    }

    #[test]
    fn diagonal_specialization_is_symmetric(mu in partition(3, 4)) {
        let e = e_specialized(&mu, &mu).unwrap();
        let flipped = e.map_monomials(&["z"], |x| vec![-x[0]]);
        prop_assert_eq!(flipped, e.clone());
        prop_assert_eq!(e.dimension(), 2 * mu.size() as i64);
    }

    #[test]
    fn rank_one_half_weight_is_hook_product(mu in partition(4, 4), seed in 0u64..1000) {
        let t = point(seed, &["t"])[0].abs();
        let w = half_weight(&RTuple::new(vec![mu.clone()]), &[int(0)], &t, SignConvention::PositiveAtPoint).unwrap();
        let mut power = Rat::from_integer(1.into());
        for _ in 0..mu.size() { power *= &t; }
        prop_assert_eq!(w.abs() / power, Rat::from_integer(mu.hook_product().into()));
    }

    #[test]
    fn w_depends_on_framing_differences(src in tuple(2), tgt in tuple(2), seed in 0u64..1000) {
        let v = point(seed, &["a1", "a2", "b1", "b2", "m", "s"]);
        let (a, b) = ([v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]);
        let shift = |x: &[Rat; 2]| [&x[0] + &v[5], &x[1] + &v[5]];
        let t = int(1);
        let plain = w_element(&src, &tgt, &a, &b, &v[4], &t, SignConvention::default());
        let moved = w_element(&src, &tgt, &shift(&a), &shift(&b), &v[4], &t, SignConvention::default());
        if let (Ok(x), Ok(y)) = (plain, moved) {
            prop_assert_eq!(x.value, y.value);
        }
    }

    #[test]
    fn gram_is_symmetric(seed in 0u64..1000, level in 0u32..=4) {
        let v = point(seed, &["c", "h"]);
        prop_assert!(VermaModule::new(v[0].clone(), v[1].clone()).gram(level).is_symmetric());
    }

    #[test]
    fn verma_commutators(seed in 0u64..1000, level in 0u32..=3, a in -3i64..=3, b in -3i64..=3) {
        let v = point(seed, &["c", "h"]);
        let module = VermaModule::new(v[0].clone(), v[1].clone());
        let basis = Partition::all_of_size(level);
        let coeffs = point(seed + 1, &["x0", "x1", "x2"]);
        let mut vec = VermaVector::zero(level as i64);
        for (mu, c) in basis.iter().zip(coeffs.iter().cycle()) {
            vec.add_scaled(&VermaVector::basis(mu), c);
        }
        let mut lhs = module.apply_l(a, &module.apply_l(b, &vec));
        lhs.add_scaled(&module.apply_l(b, &module.apply_l(a, &vec)), &int(-1));
        let mut rhs = module.apply_l(a + b, &vec).scaled(&int(a - b));
        if a + b == 0 {
            rhs.add_scaled(&vec, &(rat(a * a * a - a, 12) * &v[0]));
        }
        let (l, r): (Vec<_>, Vec<_>) = (lhs.terms().collect(), rhs.terms().collect());
        prop_assert_eq!(l, r);
    }

    #[test]
    fn peel_orders_agree(mu in partition(2, 3), nu in partition(2, 3), seed in 0u64..1000) {
        let v = point(seed, &["k1", "h", "k2", "c"]);
        let right = s_element(&mu, &nu, &v[0], &v[1], &v[2], &v[3], PeelOrder::Right);
        let left = s_element(&mu, &nu, &v[0], &v[1], &v[2], &v[3], PeelOrder::Left);
        prop_assert_eq!(right, left);
    }

    #[test]
    fn alpha_constructions_agree(mu in partition(4, 4), n in -4i64..=4) {
        prop_assume!(n != 0);
        prop_assert!(alpha_wedge(n, &FockVector::basis(&mu)).is_ok());
    }

    #[test]
    fn heisenberg_commutator(mu in partition(4, 3), m in 1i64..=4, n in -4i64..=4) {
        prop_assume!(n != 0);
        let v = FockVector::basis(&mu);
        let lhs = alpha_wedge_strips(m, &alpha_wedge_strips(n, &v)).minus(&alpha_wedge_strips(n, &alpha_wedge_strips(m, &v)));
        let rhs = if m + n == 0 { v.scaled(&int(m)) } else { FockVector::zero() };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn schur_transition_round_trips(mu in partition(4, 4)) {
        let v = FockVector::basis(&mu);
        prop_assert_eq!(power_to_schur(&schur_to_power(&v)), v);
    }

    #[test]
    fn vertex_operator_matches_rank_one_w(mu in partition(3, 3), nu in partition(3, 3), seed in 0u64..1000) {
        let m = point(seed, &["m"])[0].clone();
        let shift = nu.size() as i64 - mu.size() as i64;
        let gamma = boson_inner(
            &gamma_block(Sector::Full, &m, shift, &schur_to_power(&FockVector::basis(&mu))),
            &schur_to_power(&FockVector::basis(&nu)),
        );
        let single = |p: &Partition| RTuple::new(vec![p.clone()]);
        let w = w_element(&single(&mu), &single(&nu), &[int(0)], &[int(0)], &m, &int(1), SignConvention::default()).unwrap();
        prop_assert_eq!(w.value, gamma);
        prop_assert_eq!(w.x_power, shift);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn trace_form_matches_direct_sum(seed in 0u64..10_000, r in 1usize..=2, n in 1usize..=2) {
        let order = if r * n > 2 { 2 } else { 3 };
        let mut names = vec!["t".to_string()];
        for i in 0..n {
            names.push(format!("m{i}"));
            names.extend((0..r).map(|j| format!("a{i}{j}")));
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let v = point(seed, &refs);
        let mut it = v.into_iter();
        let t = it.next().unwrap();
        let mut framings = Vec::new();
        let mut masses = Vec::new();
        for _ in 0..n {
            masses.push(it.next().unwrap());
            framings.push((0..r).map(|_| it.next().unwrap()).collect());
        }
        let cfg = GaugeConfig::new(Torus::Special { t }, framings, masses, order).unwrap();
        match (z_direct(&cfg), z_trace(&cfg)) {
            (Ok(d), Ok(tr)) => prop_assert_eq!(d, tr),
            (Err(_), _) | (_, Err(_)) => {}
        }
    }
}

#[test]
fn rank_one_partition_function_is_vertex_operator_trace() {
    let m = rat(3, 7);
    let order = 4;
    let cfg = GaugeConfig::new(Torus::special_unit(), vec![vec![int(0)]], vec![m.clone()], order).unwrap();
    let z = z_direct(&cfg).unwrap();
    for n in 0..=order {
        let mut trace = Rat::zero();
        for mu in Partition::all_of_size(n) {
            let s = schur_to_power(&FockVector::basis(&mu));
            trace += boson_inner(&gamma_block(Sector::Full, &m, 0, &s), &s);
        }
        assert_eq!(z.coeff(&[n]), trace, "q^{n}");
    }
}
