//! Property tests over random catalog members, their principal isotopes and
//! relabelings.

use std::sync::OnceLock;

use proptest::prelude::*;

use loopkit::crypto::{CipherScheme, SchemeKind};
use loopkit::cycles::rho_cycles;
use loopkit::mappings::is_autotopism;
use loopkit::properties::{check_identity, is_osborn, IdentityId, OsbornMethod};
use loopkit::search::{enumerate_loops, Filter, SearchConfig};
use loopkit::{LoopTable, Magma, Permutation, Side};

fn catalog(n: usize) -> &'static [LoopTable] {
    static CATALOGS: OnceLock<Vec<Vec<LoopTable>>> = OnceLock::new();
    &CATALOGS.get_or_init(|| {
        (0..=6)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                enumerate_loops(n, &Filter::all(), None, &SearchConfig::default())
                    .unwrap()
                    .loops
            })
            .collect()
    })[n]
}

/// A random loop of order 1..=6 from the exhaustive catalogs.
fn any_loop() -> impl Strategy<Value = LoopTable> {
    (1usize..=6, any::<prop::sample::Index>())
        .prop_map(|(n, i)| catalog(n)[i.index(catalog(n).len())].clone())
}

fn osborn_loop() -> impl Strategy<Value = LoopTable> {
    static OSBORN: OnceLock<Vec<LoopTable>> = OnceLock::new();
    let pool = OSBORN.get_or_init(|| {
        (1..=6)
            .flat_map(|n| {
                catalog(n)
                    .iter()
                    .filter(|l| is_osborn(l, OsbornMethod::Os2).holds)
            })
            .cloned()
            .collect()
    });
    any::<prop::sample::Index>().prop_map(move |i| pool[i.index(pool.len())].clone())
}

fn any_permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

fn with_permutation(
    loops: impl Strategy<Value = LoopTable>,
) -> impl Strategy<Value = (LoopTable, Permutation)> {
    loops.prop_flat_map(|l| {
        let n = l.order();
        (Just(l), any_permutation(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn division_laws(l in any_loop()) {
        let n = l.order();
        for x in 0..n {
            for z in 0..n {
                prop_assert_eq!(l.mul(x, l.ldiv(x, z)), z);
                prop_assert_eq!(l.ldiv(x, l.mul(x, z)), z);
                prop_assert_eq!(l.mul(l.rdiv(z, x), x), z);
                prop_assert_eq!(l.rdiv(l.mul(z, x), x), z);
            }
            let lx_inv = l.left_translation(x).inverse();
            prop_assert_eq!(lx_inv, Permutation::from_fn(n, |y| l.ldiv(x, y)));
            let rx_inv = l.right_translation(x).inverse();
            prop_assert_eq!(rx_inv, Permutation::from_fn(n, |y| l.rdiv(y, x)));
        }
    }

    #[test]
    fn one_sided_inverse_maps_are_mutually_inverse(l in any_loop()) {
        let jl = l.j_map(Side::Lambda);
        let jr = l.j_map(Side::Rho);
        prop_assert!(jl.then(&jr).is_identity());
        prop_assert!(jr.then(&jl).is_identity());
    }

    #[test]
    fn trivial_isotope_is_the_loop(l in any_loop()) {
        prop_assert_eq!(l.principal_isotope(0, 0), l);
    }

    #[test]
    fn isotopes_are_loops_with_identity_zero(l in any_loop(), u in 0usize..6, v in 0usize..6) {
        let n = l.order();
        let iso = l.principal_isotope(u % n, v % n);
        prop_assert_eq!(iso.order(), n);
        for x in 0..n {
            prop_assert_eq!(iso.mul(0, x), x);
            prop_assert_eq!(iso.mul(x, 0), x);
        }
    }

    #[test]
    fn text_round_trip((l, sigma) in with_permutation(any_loop())) {
        prop_assert_eq!(LoopTable::parse(&l.to_text(), "t").unwrap(), l.clone());
        // relabeled tables come back in canonical form
        let q = l.quasigroup().relabel(&sigma);
        let back = LoopTable::parse(&q.to_text(), "t").unwrap();
        prop_assert_eq!(back.order(), l.order());
        prop_assert_eq!(back.relabeling().apply(sigma.apply(0)), 0);
    }

    #[test]
    fn failed_checks_have_sound_witnesses(l in any_loop()) {
        for id in IdentityId::ALL {
            let r = check_identity(&l, id);
            match &r.witness {
                Some(w) => {
                    prop_assert!(!r.holds);
                    prop_assert_eq!(w.len(), id.arity());
                    prop_assert_eq!(id.eval(&l, w), Some(false), "{}", id);
                }
                None => prop_assert!(r.holds),
            }
        }
    }

    #[test]
    fn groups_satisfy_every_identity_valid_in_all_groups(l in any_loop()) {
        if check_identity(&l, IdentityId::Assoc).holds {
            for id in IdentityId::ALL {
                if !matches!(id, IdentityId::Comm | IdentityId::Exp2 | IdentityId::Cip | IdentityId::Aip) {
                    prop_assert!(check_identity(&l, id).holds, "{}", id);
                }
            }
        }
    }

    #[test]
    fn osborn_methods_agree(l in any_loop()) {
        let verdicts: Vec<bool> = OsbornMethod::ALL.iter().map(|&m| is_osborn(&l, m).holds).collect();
        prop_assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{:?}", verdicts);
    }

    #[test]
    fn e_map_inverts_theta_on_osborn_loops(l in osborn_loop()) {
        for x in 0..l.order() {
            prop_assert_eq!(l.e_map(x), l.theta_map(x).inverse());
        }
    }

    #[test]
    fn relabeling_preserves_autotopisms((l, sigma) in with_permutation(osborn_loop())) {
        let m = LoopTable::from_rows(&l.quasigroup().relabel(&sigma).rows()).unwrap();
        prop_assert!(check_identity(&m, IdentityId::Os2).holds);
        for x in 0..l.order() {
            let (a, b, c) = loopkit::mappings::osborn_autotopism_triple(&m, x);
            prop_assert!(is_autotopism(&m, &a, &b, &c).unwrap().holds);
        }
    }

    #[test]
    fn cycle_lengths_are_the_cycle_type(l in any_loop()) {
        let d = rho_cycles(&l);
        prop_assert_eq!(d.lengths.iter().sum::<usize>(), l.order());
        prop_assert_eq!(&d.lengths, &l.j_map(Side::Rho).cycle_type());
        let jr = l.j_map(Side::Rho);
        prop_assert_eq!(d.longest() <= 2, jr.then(&jr).is_identity());
    }

    #[test]
    fn osborn_cipher_round_trips(l in osborn_loop(), key in 0usize..6, m in 0usize..6) {
        let n = l.order();
        let s = CipherScheme::new(SchemeKind::OsbornCi, &l, key % n).unwrap();
        let c = s.encipher(m % n);
        prop_assert_eq!(s.decipher(c), m % n);
        prop_assert_eq!(s.decipher_oracle(c), m % n);
    }
}

#[test]
fn prefiltering_never_changes_a_catalog() {
    for spec in [
        "LSIP",
        "COMM",
        "OS2 & !LSIP",
        "WIP",
        "EXP2",
        "FLEX & !ASSOC",
        "CC_LEFT & RSIP",
    ] {
        let filter: Filter = spec.parse().unwrap();
        let fast = enumerate_loops(6, &filter, None, &SearchConfig::default()).unwrap();
        let plain = enumerate_loops(
            6,
            &filter,
            None,
            &SearchConfig {
                prefilter: false,
                ..SearchConfig::default()
            },
        )
        .unwrap();
        assert_eq!(fast.digest, plain.digest, "{spec}");
        let post: Vec<LoopTable> = catalog(6)
            .iter()
            .filter(|l| filter.matches(l))
            .cloned()
            .collect();
        assert_eq!(fast.loops, post, "{spec}");
    }
}

#[test]
fn magma_and_table_agree() {
    let l = &catalog(5)[7];
    for a in 0..5 {
        for b in 0..5 {
            assert_eq!(Magma::mul(l, a, b), Some(l.mul(a, b)));
        }
    }
}
