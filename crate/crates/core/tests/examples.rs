//! Worked examples whose expected values come from exhaustive runs over the
//! small-order catalogs rather than from hand computation.

use loopkit::crypto::{
    cf_membership_battery, cf_set, is_cf, key_schedule, roundtrip_check, CipherScheme, SchemeKind,
};
use loopkit::cycles::{cycle_census, rho_cycles};
use loopkit::families::{cyclic, dihedral, moufang_12};
use loopkit::mappings::{
    inner_group, inner_mapping_battery, inverse_cube, is_autotopism, is_right_pseudo_aut,
    is_vd_loop, mult_group, osborn_autotopism_triple, r_inner, t_map, InnerFlavor,
};
use loopkit::perm::DEFAULT_CLOSURE_BOUND;
use loopkit::properties::{
    check_identity, is_osborn, is_power_associative, is_universal_wip, local_sets, nuclei, osborn,
    IdentityId, OsbornMethod,
};
use loopkit::search::{enumerate_loops, find_example, Filter, SearchConfig};
use loopkit::verifier::{verify_loops, StatementId, VerifyConfig};
use loopkit::{LoopTable, Side};

fn all_loops(n: usize) -> Vec<LoopTable> {
    enumerate_loops(n, &Filter::all(), None, &SearchConfig::default())
        .unwrap()
        .loops
}

fn find(n_max: usize, want: &str) -> Option<LoopTable> {
    find_example(n_max, &want.parse().unwrap(), &SearchConfig::default()).unwrap()
}

fn first_non_osborn_of_order_5() -> LoopTable {
    all_loops(5).into_iter().find(|l| !osborn(l)).unwrap()
}

#[test]
fn first_order_5_loop_has_distinct_one_sided_inverses() {
    let loops = all_loops(5);
    let first = loops
        .iter()
        .find(|l| l.j_map(Side::Lambda) != l.j_map(Side::Rho))
        .unwrap();
    assert_eq!(first, &loops[0]);
    let x = (0..5)
        .find(|&x| first.lambda_inv(x) != first.rho_inv(x))
        .unwrap();
    assert_eq!(first.mul(first.lambda_inv(x), x), 0);
    assert_eq!(first.mul(x, first.rho_inv(x)), 0);
}

#[test]
fn nonassociative_osborn_loops_of_order_6_have_equal_e_maps_along_inverses() {
    let l = find(8, "OS2 & !ASSOC").expect("a nonassociative Osborn loop exists");
    assert_eq!(l.order(), 6);
    for x in 0..6 {
        assert_eq!(l.e_map(x), l.e_map(l.lambda_inv(x)));
        assert_eq!(l.e_map(x), l.e_map(l.rho_inv(x)));
        assert_eq!(l.e_map(x), l.theta_map(x).inverse());
    }
    assert!((1..6).any(|x| !l.e_map(x).is_identity()));
}

#[test]
fn os2_failure_on_order_5_has_a_sound_witness() {
    let l = first_non_osborn_of_order_5();
    let r = check_identity(&l, IdentityId::Os2);
    let w = r.witness.clone().unwrap();
    assert_eq!(w.len(), 3);
    assert_eq!(IdentityId::Os2.eval(&l, &w), Some(false));
    assert!(r.triples_checked <= 125);
}

#[test]
fn moufang_12_is_osborn_under_every_method() {
    let m = moufang_12();
    assert!(check_identity(&m, IdentityId::Moufang).holds);
    assert!(!check_identity(&m, IdentityId::Assoc).holds);
    for method in OsbornMethod::ALL {
        assert!(is_osborn(&m, method).holds, "{method:?}");
    }
}

#[test]
fn autotopism_method_witness_violates_the_triple() {
    let l = first_non_osborn_of_order_5();
    let r = is_osborn(&l, OsbornMethod::Autotopism);
    let w = r.witness.unwrap();
    let (a, b, c) = osborn_autotopism_triple(&l, w[0]);
    assert_ne!(
        l.mul(a.apply(w[1]), b.apply(w[2])),
        c.apply(l.mul(w[1], w[2]))
    );
    assert!(!is_autotopism(&l, &a, &b, &c).unwrap().holds);
}

#[test]
fn first_nonassociative_order_5_loop_has_proper_nucleus() {
    let l = all_loops(5)
        .into_iter()
        .find(|l| !check_identity(l, IdentityId::Assoc).holds)
        .unwrap();
    let nuc = nuclei(&l);
    assert!(nuc.nucleus.contains(&0));
    assert!(nuc.nucleus.len() < 5);
    let proper_pair = (0..5).any(|x| (0..5).any(|y| local_sets(&l, x, y).left.len() < 5));
    assert!(proper_pair);
}

#[test]
fn loops_of_order_at_most_4_are_power_associative_and_order_5_is_not() {
    for n in 1..=4 {
        for l in all_loops(n) {
            assert!(is_power_associative(&l).holds);
        }
    }
    assert!(find(4, "!ASSOC").is_none());
    assert_eq!(find(5, "!ASSOC").unwrap().order(), 5);
}

#[test]
fn cc_loops_need_not_be_power_associative() {
    let l = find(8, "CC_LEFT & CC_RIGHT & !PAPL3").expect("found below order 8");
    assert_eq!(l.order(), 6);
    let r = is_power_associative(&l);
    assert!(!r.holds);
    assert!(r.witness.is_some());
}

#[test]
fn wip_loops_that_are_not_osborn_fail_universality() {
    let l = find(6, "WIP & !OS2").expect("present at order 5");
    assert_eq!(l.order(), 5);
    assert!(!is_universal_wip(&l).holds);
}

#[test]
fn non_moufang_osborn_loop_appears_at_order_6() {
    let l = find(8, "OS2 & !MOUFANG").unwrap();
    assert_eq!(l.order(), 6);
    assert!(check_identity(&l, IdentityId::CcLeft).holds);
    assert!(check_identity(&l, IdentityId::CcRight).holds);
}

#[test]
fn vd_property_separates_groups_from_non_osborn_loops() {
    assert!(is_vd_loop(&dihedral(3)).holds);
    assert!(!is_vd_loop(&first_non_osborn_of_order_5()).holds);
}

#[test]
fn moufang_12_inner_maps_are_pseudo_automorphisms() {
    let m = moufang_12();
    assert!(inner_mapping_battery(&m).unwrap().holds());
    for x in 0..12 {
        assert!(is_right_pseudo_aut(&m, &t_map(&m, x), inverse_cube(&m, x)).holds);
    }
    let rho = inner_group(&m, InnerFlavor::Rho, DEFAULT_CLOSURE_BOUND).unwrap();
    let lam = inner_group(&m, InnerFlavor::Lambda, DEFAULT_CLOSURE_BOUND).unwrap();
    assert_eq!(rho.order(), 54);
    assert!(rho.same_elements(&lam));
}

#[test]
fn right_inner_map_companion_on_osborn_loops() {
    for l in enumerate_loops(6, &"OS2".parse().unwrap(), None, &SearchConfig::default())
        .unwrap()
        .loops
    {
        for x in 0..6 {
            for y in 0..6 {
                let xy = l.mul(x, y);
                let c = l.mul(l.lambda_inv(xy), l.ldiv(l.lambda_inv(y), x));
                assert!(is_right_pseudo_aut(&l, &r_inner(&l, x, y), c).holds);
            }
        }
    }
}

#[test]
fn cf_sets_on_a_nonassociative_order_5_loop() {
    let l = first_non_osborn_of_order_5();
    let mult = mult_group(&l, DEFAULT_CLOSURE_BOUND).unwrap();
    for x in 0..5 {
        assert_eq!(
            cf_set(&l, x, DEFAULT_CLOSURE_BOUND).unwrap().order() * 5,
            mult.order()
        );
    }
    let (x, y) = (0..5)
        .flat_map(|x| (0..5).map(move |y| (x, y)))
        .find(|&(x, y)| l.mul(x, y) != l.mul(y, x))
        .unwrap();
    assert!(!is_cf(&l, &t_map(&l, y), x, Some(&mult)).unwrap());
}

#[test]
fn cf_membership_holds_on_every_order_5_loop_and_moufang_12() {
    for l in all_loops(5).iter().chain([&moufang_12()]) {
        assert!(cf_membership_battery(l, DEFAULT_CLOSURE_BOUND)
            .unwrap()
            .holds());
    }
}

#[test]
fn osborn_cipher_on_the_first_non_lsip_osborn_loop() {
    let l = find(8, "OS2 & !LSIP").unwrap();
    assert!(roundtrip_check(SchemeKind::OsbornCi, &l).unwrap().holds);
    for key in 0..l.order() {
        let s = CipherScheme::new(SchemeKind::OsbornCi, &l, key).unwrap();
        for m in 0..l.order() {
            assert_eq!(s.decipher(s.encipher(m)), m);
            assert_eq!(s.decipher(s.encipher(m)), s.decipher_oracle(s.encipher(m)));
        }
    }
}

#[test]
fn non_lsip_osborn_loop_has_long_inverse_cycle() {
    let l = find(8, "OS2 & !LSIP").unwrap();
    let d = rho_cycles(&l);
    assert!(d.longest() > 2);
    let seed = (0..l.order())
        .find(|&x| d.period_of(x) == d.longest())
        .unwrap();
    let ks = key_schedule(&l, seed, d.longest(), Side::Rho);
    assert!(!ks.reuse_warning);
    let back = key_schedule(
        &l,
        ks.stream[ks.stream.len() - 1],
        d.longest(),
        Side::Lambda,
    );
    let mut forward = ks.stream.clone();
    forward.reverse();
    assert_eq!(back.stream, forward);
    let e = key_schedule(&l, 0, 4, Side::Rho);
    assert_eq!((e.stream, e.period), (vec![0; 4], 1));
}

#[test]
fn order_5_census() {
    let census = cycle_census(&all_loops(5));
    assert_eq!(census.loops_scanned, 56);
    let rows: Vec<(usize, u64, u64)> = census
        .rows
        .iter()
        .map(|r| (r.length, r.count, r.loops))
        .collect();
    assert_eq!(
        rows,
        vec![(1, 88, 56), (2, 12, 6), (3, 24, 24), (4, 24, 24)]
    );
    // `e` is always a fixed point, so no orbit can cover all five elements
    assert_eq!(census.max_length(), 4);
}

#[test]
fn inner_group_statement_on_orders_up_to_4() {
    let loops: Vec<LoopTable> = (1..=4).flat_map(all_loops).collect();
    let report = verify_loops(
        &loops,
        StatementId::InnerGroupsCoincide,
        &VerifyConfig::default(),
    );
    assert!(report.passed());
    assert_eq!(report.loops_skipped, 0);
}

#[test]
fn forced_moufang_on_order_5() {
    let report = verify_loops(
        &all_loops(5),
        StatementId::ForcedMoufang,
        &VerifyConfig::default(),
    );
    assert!(report.passed());
    assert_eq!(report.loops_tested + report.loops_skipped, 56);
}

#[test]
fn groups_are_never_skipped() {
    let groups = vec![cyclic(4), dihedral(3), dihedral(4)];
    for s in StatementId::ALL {
        let report = verify_loops(&groups, s, &VerifyConfig::default());
        if s != StatementId::RhoFifthPower {
            assert!(report.passed(), "{s}");
        }
        if !matches!(
            s,
            StatementId::ExponentTwoAbelian | StatementId::WipOsbornInverses
        ) {
            assert_eq!(report.loops_skipped, 0, "{s}");
        }
    }
}
