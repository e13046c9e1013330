//! Autotopisms, inner mappings, pseudo-automorphisms and the groups they
//! generate.
//!
//! Pseudo-automorphism conventions, with `T` acting on the right:
//!
//! * right, companion `c`: `(c · xT) · yT = c · ((xy)T)`
//! * left, companion `c`: `xT · (yT · c) = ((xy)T) · c`
//!
//! This is the orientation under which `R_(x,y)` of an Osborn loop is a right
//! pseudo-automorphism with companion `(xy)^λ (y^λ \ x)`; the mirrored
//! orientation fails that already on the order-12 Moufang loop.
//!
//! Commutators are `[A, B] = A^{-1} B^{-1} A B`.

use serde::Serialize;

use crate::error::{LoopError, Result};
use crate::perm::{PermGroup, Permutation};
use crate::properties::{osborn, scan_tuples, Battery, CheckResult};
use crate::table::LoopTable;

/// A triple `(A, B, C)` with `xA · yB = (xy)C` for all `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Autotopism {
    pub a: Permutation,
    pub b: Permutation,
    pub c: Permutation,
}

impl Autotopism {
    pub fn new(l: &LoopTable, a: Permutation, b: Permutation, c: Permutation) -> Result<Self> {
        let r = is_autotopism(l, &a, &b, &c)?;
        match r.witness {
            None => Ok(Autotopism { a, b, c }),
            Some(w) => Err(LoopError::NotAutotopism(w)),
        }
    }

    /// Componentwise product, again an autotopism.
    pub fn then(&self, other: &Autotopism) -> Autotopism {
        Autotopism {
            a: self.a.then(&other.a),
            b: self.b.then(&other.b),
            c: self.c.then(&other.c),
        }
    }
}

fn check_degree(l: &LoopTable, p: &Permutation) -> Result<()> {
    if p.degree() != l.order() {
        return Err(LoopError::DegreeMismatch {
            expected: l.order(),
            found: p.degree(),
        });
    }
    Ok(())
}

pub fn is_autotopism(
    l: &LoopTable,
    a: &Permutation,
    b: &Permutation,
    c: &Permutation,
) -> Result<CheckResult> {
    for p in [a, b, c] {
        check_degree(l, p)?;
    }
    Ok(scan_tuples(l.order(), 2, |t| {
        l.mul(a.apply(t[0]), b.apply(t[1])) == c.apply(l.mul(t[0], t[1]))
    }))
}

/// `(L_{x^λ}, R_x^{-1}, L_x^{-1} R_x^{-1})`, an autotopism for every `x`
/// exactly when the loop is Osborn.
pub fn osborn_autotopism_triple(
    l: &LoopTable,
    x: usize,
) -> (Permutation, Permutation, Permutation) {
    let rx_inv = l.right_translation(x).inverse();
    let a = l.left_translation(l.lambda_inv(x));
    let c = l.left_translation(x).inverse().then(&rx_inv);
    (a, rx_inv, c)
}

pub fn is_automorphism(l: &LoopTable, t: &Permutation) -> Result<CheckResult> {
    is_autotopism(l, t, t, t)
}

/// `T_(x) = R_x L_x^{-1}`, i.e. `y -> x \ (yx)`.
pub fn t_map(l: &LoopTable, x: usize) -> Permutation {
    Permutation::from_fn(l.order(), |y| l.ldiv(x, l.mul(y, x)))
}

/// `R_(x,y) = R_x R_y R_{xy}^{-1}`, i.e. `z -> ((zx)y) / (xy)`.
pub fn r_inner(l: &LoopTable, x: usize, y: usize) -> Permutation {
    let xy = l.mul(x, y);
    Permutation::from_fn(l.order(), |z| l.rdiv(l.mul(l.mul(z, x), y), xy))
}

/// `L_(x,y) = L_x L_y L_{yx}^{-1}`, i.e. `z -> (yx) \ (y(xz))`.
pub fn l_inner(l: &LoopTable, x: usize, y: usize) -> Permutation {
    let yx = l.mul(y, x);
    Permutation::from_fn(l.order(), |z| l.ldiv(yx, l.mul(y, l.mul(x, z))))
}

/// Closure of all left and right translations.
pub fn mult_group(l: &LoopTable, bound: usize) -> Result<PermGroup> {
    let n = l.order();
    let mut gens = Vec::with_capacity(2 * n);
    for x in 0..n {
        gens.push(l.left_translation(x));
        gens.push(l.right_translation(x));
    }
    PermGroup::generate(n, gens, bound)
}

/// Which inner mapping group to build. `Rho` is generated by the `L_(x,y)`
/// and `Lambda` by the `R_(x,y)`; `All` is the stabilizer of `e` in `Mult`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerFlavor {
    All,
    Rho,
    Lambda,
    Mu,
}

pub fn inner_group(l: &LoopTable, flavor: InnerFlavor, bound: usize) -> Result<PermGroup> {
    let n = l.order();
    let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));
    let gens: Vec<Permutation> = match flavor {
        InnerFlavor::All => return Ok(mult_group(l, bound)?.stabilizer(0)),
        InnerFlavor::Rho => pairs().map(|(x, y)| l_inner(l, x, y)).collect(),
        InnerFlavor::Lambda => pairs().map(|(x, y)| r_inner(l, x, y)).collect(),
        InnerFlavor::Mu => (0..n).map(|x| t_map(l, x)).collect(),
    };
    PermGroup::generate(n, gens, bound)
}

pub fn is_right_pseudo_aut(l: &LoopTable, t: &Permutation, c: usize) -> CheckResult {
    scan_tuples(l.order(), 2, |v| {
        let (x, y) = (v[0], v[1]);
        l.mul(l.mul(c, t.apply(x)), t.apply(y)) == l.mul(c, t.apply(l.mul(x, y)))
    })
}

pub fn is_left_pseudo_aut(l: &LoopTable, t: &Permutation, c: usize) -> CheckResult {
    scan_tuples(l.order(), 2, |v| {
        let (x, y) = (v[0], v[1]);
        l.mul(t.apply(x), l.mul(t.apply(y), c)) == l.mul(t.apply(l.mul(x, y)), c)
    })
}

/// Names the pseudo-automorphism orientation in report headers.
pub const PSEUDO_AUT_CONVENTION: &str =
    "right: (c·xT)·yT = c·((xy)T); left: xT·(yT·c) = ((xy)T)·c; [A,B] = A^-1 B^-1 A B";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PseudoSide {
    Left,
    Right,
}

/// A verified pseudo-automorphism together with its companion.
#[derive(Clone, Debug, Serialize)]
pub struct PseudoAutWitness {
    pub map: Permutation,
    pub companion: usize,
    pub side: PseudoSide,
}

/// All companions `c` making `t` a pseudo-automorphism on `side`.
pub fn companions(l: &LoopTable, t: &Permutation, side: PseudoSide) -> Vec<usize> {
    (0..l.order())
        .filter(|&c| match side {
            PseudoSide::Left => is_left_pseudo_aut(l, t, c).holds,
            PseudoSide::Right => is_right_pseudo_aut(l, t, c).holds,
        })
        .collect()
}

pub fn find_pseudo_aut(
    l: &LoopTable,
    t: &Permutation,
    side: PseudoSide,
) -> Option<PseudoAutWitness> {
    companions(l, t, side).first().map(|&c| PseudoAutWitness {
        map: t.clone(),
        companion: c,
        side,
    })
}

/// For every `x`: `R_x^{-1} L_x` is a left pseudo-automorphism with companion
/// `x` and `L_x^{-1} R_x` is a right one with companion `x`.
/// Witness: `[x, side, a, b]` with side 0 for left and 1 for right.
pub fn is_vd_loop(l: &LoopTable) -> CheckResult {
    let mut checked = 0;
    for x in 0..l.order() {
        let lx = l.left_translation(x);
        let rx = l.right_translation(x);
        let left_map = rx.inverse().then(&lx);
        let right_map = lx.inverse().then(&rx);
        let r = is_left_pseudo_aut(l, &left_map, x);
        checked += r.triples_checked;
        if let Some(w) = r.witness {
            return CheckResult::fail(vec![x, 0, w[0], w[1]], checked);
        }
        let r = is_right_pseudo_aut(l, &right_map, x);
        checked += r.triples_checked;
        if let Some(w) = r.witness {
            return CheckResult::fail(vec![x, 1, w[0], w[1]], checked);
        }
    }
    CheckResult::pass(checked)
}

/// `x^λ · (x^λ · x^λ)`, the bracketing used for "x^{-3}".
pub fn inverse_cube(l: &LoopTable, x: usize) -> usize {
    let xl = l.lambda_inv(x);
    l.mul(xl, l.mul(xl, xl))
}

/// Checks on an Osborn loop, for all `x, y`:
///
/// * `R_(x,y)` is a right pseudo-automorphism with companion `(xy)^λ (y^λ \ x)`;
/// * `L_(x,y)` is a left pseudo-automorphism for some companion (found by scan);
/// * `R_(x,y)^{-1} = [L_{y^ρ}^{-1}, R_x^{-1}] = L_(y^λ, x^λ)`.
pub fn inner_mapping_battery(l: &LoopTable) -> Result<Battery> {
    if !osborn(l) {
        return Err(LoopError::NotOsborn);
    }
    let n = l.order();
    let mut battery = Battery::default();
    let mut r_pa = CheckResult::pass(0);
    let mut l_pa = CheckResult::pass(0);
    let mut comm = CheckResult::pass(0);
    let mut linner = CheckResult::pass(0);
    let mut companions_found = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let r = r_inner(l, x, y);
            let companion = l.mul(l.lambda_inv(l.mul(x, y)), l.ldiv(l.lambda_inv(y), x));
            if r_pa.holds {
                let c = is_right_pseudo_aut(l, &r, companion);
                r_pa.triples_checked += c.triples_checked;
                if let Some(w) = c.witness {
                    r_pa = CheckResult::fail(vec![x, y, w[0], w[1]], r_pa.triples_checked);
                }
            }
            if l_pa.holds {
                l_pa.triples_checked += 1;
                match find_pseudo_aut(l, &l_inner(l, x, y), PseudoSide::Left) {
                    Some(w) => companions_found.push((x, y, w.companion)),
                    None => l_pa = CheckResult::fail(vec![x, y], l_pa.triples_checked),
                }
            }
            let r_inv = r.inverse();
            let bracket = Permutation::commutator(
                &l.left_translation(l.rho_inv(y)).inverse(),
                &l.right_translation(x).inverse(),
            );
            let other = l_inner(l, l.lambda_inv(y), l.lambda_inv(x));
            if comm.holds {
                comm.triples_checked += 1;
                if r_inv != bracket {
                    comm = CheckResult::fail(vec![x, y], comm.triples_checked);
                }
            }
            if linner.holds {
                linner.triples_checked += 1;
                if bracket != other {
                    linner = CheckResult::fail(vec![x, y], linner.triples_checked);
                }
            }
        }
    }
    battery.push(
        "R_(x,y) right pseudo-automorphism, companion (xy)^λ(y^λ\\x)",
        r_pa,
    );
    battery.push("L_(x,y) left pseudo-automorphism (some companion)", l_pa);
    battery.push("R_(x,y)^-1 = [L_{y^ρ}^-1, R_x^-1]", comm);
    battery.push("[L_{y^ρ}^-1, R_x^-1] = L_(y^λ,x^λ)", linner);
    if !companions_found.is_empty() {
        let shown: Vec<String> = companions_found
            .iter()
            .take(8)
            .map(|(x, y, c)| format!("L_({x},{y}):{c}"))
            .collect();
        battery
            .notes
            .push(format!("first left companions found: {}", shown.join(" ")));
    }
    Ok(battery)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic, dihedral, klein, moufang_12};
    use crate::perm::DEFAULT_CLOSURE_BOUND;

    #[test]
    fn identity_triple_is_autotopism() {
        let s3 = dihedral(3);
        let id = Permutation::identity(6);
        assert!(is_autotopism(&s3, &id, &id, &id).unwrap().holds);
    }

    #[test]
    fn translation_triple_in_abelian_group() {
        let z6 = cyclic(6);
        for a in 0..6 {
            for b in 0..6 {
                let t = Autotopism::new(
                    &z6,
                    z6.left_translation(a),
                    z6.left_translation(b),
                    z6.left_translation(z6.mul(a, b)),
                );
                assert!(t.is_ok());
            }
        }
    }

    #[test]
    fn degree_mismatch() {
        let z4 = cyclic(4);
        let p = Permutation::identity(3);
        assert!(matches!(
            is_autotopism(&z4, &p, &p, &p),
            Err(LoopError::DegreeMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn inner_maps_fix_identity() {
        let m = moufang_12();
        for x in 0..12 {
            assert_eq!(t_map(&m, x).apply(0), 0);
            for y in 0..12 {
                assert_eq!(r_inner(&m, x, y).apply(0), 0);
                assert_eq!(l_inner(&m, x, y).apply(0), 0);
            }
        }
    }

    #[test]
    fn abelian_group_inner_maps_are_trivial() {
        let z5 = cyclic(5);
        for x in 0..5 {
            assert!(t_map(&z5, x).is_identity());
            for y in 0..5 {
                assert!(r_inner(&z5, x, y).is_identity());
            }
        }
    }

    #[test]
    fn cyclic_mult_group_is_regular() {
        for n in 1..=7 {
            let z = cyclic(n);
            let g = mult_group(&z, DEFAULT_CLOSURE_BOUND).unwrap();
            assert_eq!(g.order(), n);
            assert_eq!(
                inner_group(&z, InnerFlavor::All, DEFAULT_CLOSURE_BOUND)
                    .unwrap()
                    .order(),
                1
            );
        }
    }

    #[test]
    fn s3_mult_group() {
        let s3 = dihedral(3);
        let g = mult_group(&s3, DEFAULT_CLOSURE_BOUND).unwrap();
        // L(G) x R(G) modulo the center: 36 / 1
        assert_eq!(g.order(), 36);
        let inn = inner_group(&s3, InnerFlavor::All, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(inn.order(), 6);
        let mu = inner_group(&s3, InnerFlavor::Mu, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(mu.order(), 6);
    }

    #[test]
    fn automorphisms_are_pseudo_automorphisms_with_companion_e() {
        let k = klein();
        let swap = Permutation::from_images(&[0, 2, 1, 3]).unwrap();
        assert!(is_automorphism(&k, &swap).unwrap().holds);
        assert!(is_right_pseudo_aut(&k, &swap, 0).holds);
        assert!(is_left_pseudo_aut(&k, &swap, 0).holds);
    }

    #[test]
    fn moufang_middle_inner_map_companion_is_inverse_cube() {
        let m = moufang_12();
        for x in 0..12 {
            let r = is_right_pseudo_aut(&m, &t_map(&m, x), inverse_cube(&m, x));
            assert!(r.holds, "x = {x}: {r:?}");
        }
    }

    #[test]
    fn groups_are_vd_loops() {
        for g in [cyclic(5), klein(), dihedral(3)] {
            assert!(is_vd_loop(&g).holds);
        }
    }

    #[test]
    fn inner_mapping_battery_on_groups_and_moufang() {
        for l in [cyclic(4), dihedral(3), moufang_12()] {
            let b = inner_mapping_battery(&l).unwrap();
            assert!(b.holds(), "{:?}", b.describe_failure());
        }
    }
}
