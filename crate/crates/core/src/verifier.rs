//! Statement batteries: each claim about Osborn loops compiled into a
//! precondition and an exhaustive conclusion check, run on single loops or
//! whole catalogs.
//!
//! Reading conventions used throughout:
//!
//! * `t²` is `t·t`; `x^{λ²}` is `(x^λ)^λ`; cubes are `(x·x)·x` unless a
//!   bracketing is spelled out.
//! * `|J| = 2` is read as `J² = id` (order dividing 2); the strict reading
//!   (order exactly 2) is recorded in notes when it differs.
//! * The map written `J_λ : x -> x · x^ρx` agrees with `xa = x^{λ²}` only as
//!   `J_λ²`, and is checked as such.
//! * The last displayed map of the `w = x^{λ²} · x^λx^ρ` group is checked as
//!   `w^{λ²} · w^λ w^ρ = x^λ · xx`, the form consistent with its siblings and
//!   with groups.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::crypto::{cf_membership_battery, cf_subgroup_battery, osborn_ci_battery};
use crate::error::{LoopError, Result};
use crate::exec::Exec;
use crate::mappings::{
    inner_group, inner_mapping_battery, is_automorphism, is_autotopism, t_map, InnerFlavor,
    PSEUDO_AUT_CONVENTION,
};
use crate::perm::{Permutation, DEFAULT_CLOSURE_BOUND};
use crate::properties::{
    center, check_identity, is_power_associative, is_universal_wip, nuclei, osborn, scan_tuples,
    Battery, CheckResult, IdentityId,
};
use crate::search::catalog_digest;
use crate::table::{LoopTable, Side};

/// Claims that can be checked, keyed by their external tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatementId {
    /// Osborn: `R_(x,y)` right pseudo-automorphism with companion
    /// `(xy)^λ (y^λ \ x)`, `L_(x,y)` left pseudo-automorphism, and
    /// `R_(x,y)^{-1} = [L_{y^ρ}^{-1}, R_x^{-1}] = L_(y^λ, x^λ)`.
    InnerMappings,
    /// Osborn: `<L_(x,y)> = <R_(x,y)>`.
    InnerGroupsCoincide,
    /// Osborn: `T_(a)` an automorphism forces `a·aa = aa·a ∈ N`; centrum cubes are central.
    AutomorphicMiddleInner,
    /// Osborn with `(xx)^ρ = x^ρ x^ρ`: `J_ρ⁵ = id`.
    RhoFifthPower,
    /// Osborn of exponent 2 is an abelian group.
    ExponentTwoAbelian,
    /// Universal WIP iff WIP and Osborn.
    UniversalWip,
    /// Osborn plus any of FLEX, LAP, RAP, LIP, RIP, AAIP forces Moufang;
    /// commutative or CIP forces commutative Moufang.
    ForcedMoufang,
    /// WIP Osborn loops, `a = x^ρ x`: seven element equations and their map forms.
    WipOsbornInverses,
    /// Osborn: `(θ_x, θ_x, L_x T_(x) R_x^{-1})` is an autotopism, `θ_x ∈ <R_(x,y)>`.
    ThetaAutotopism,
    /// Osborn: fixed points of `T_(x)` and `T_(x) = L_{x^λ} R_x`.
    MiddleInnerForms,
    /// Osborn: `R_x = L_{x^λ} R_x L_x`.
    RightTranslationChain,
    /// Osborn: `(x^λ·xy)(x^λ·xy^ρ) = (x^λ·xz^λ)(x^λ·xz) = e`.
    UnitProducts,
    /// Osborn: inverses of `x^λ·xy` and relatives.
    InverseOfProducts,
    /// Osborn: seven formulas for powers of `J_λ`, `J_ρ`.
    InverseMapFormulas,
    /// Osborn: one-variable inverse identities.
    OneVariableInverses,
    /// Osborn: two-variable inverse identities.
    TwoVariableInverses,
    /// Osborn: `J_λ² = id`, `J_ρ² = id`, `J_λ = J_ρ`, LSIP, RSIP coincide.
    SelfInverseEquivalence,
    /// CC-loops: power associativity, 3-PAPL, `J_λ = J_ρ`, LSIP, RSIP coincide.
    CcPowerAssociativity,
    /// Every CF set is a subgroup of `Mult`; the one at `e` is `Inn`.
    CfSubgroups,
    /// `T_(x)`, `R_(x,y)`, `L_(x,y)` as CFs match `C(x)`, `N_λ(x,y)`, `N_ρ(x,y)`.
    CfMembership,
    /// Osborn: `yx = x(x^λ y · x)` is a CI whose functional fixes `e`.
    OsbornCiFunctional,
}

use StatementId::*;

impl StatementId {
    pub const ALL: [StatementId; 21] = [
        InnerMappings,
        InnerGroupsCoincide,
        AutomorphicMiddleInner,
        RhoFifthPower,
        ExponentTwoAbelian,
        UniversalWip,
        ForcedMoufang,
        WipOsbornInverses,
        ThetaAutotopism,
        MiddleInnerForms,
        RightTranslationChain,
        UnitProducts,
        InverseOfProducts,
        InverseMapFormulas,
        OneVariableInverses,
        TwoVariableInverses,
        SelfInverseEquivalence,
        CcPowerAssociativity,
        CfSubgroups,
        CfMembership,
        OsbornCiFunctional,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            InnerMappings => "THM_1_1",
            InnerGroupsCoincide => "THM_1_2",
            AutomorphicMiddleInner => "THM_1_3_1",
            RhoFifthPower => "THM_1_3_2",
            ExponentTwoAbelian => "THM_1_4",
            UniversalWip => "THM_1_5",
            ForcedMoufang => "LEM_1_1",
            WipOsbornInverses => "LEM_1_2",
            ThetaAutotopism => "THM_2_1_1",
            MiddleInnerForms => "THM_2_1_2",
            RightTranslationChain => "THM_2_1_3",
            UnitProducts => "THM_2_1_4",
            InverseOfProducts => "LEM_2_1_1",
            InverseMapFormulas => "LEM_2_1_2",
            OneVariableInverses => "LEM_2_1_3",
            TwoVariableInverses => "LEM_2_1_4",
            SelfInverseEquivalence => "LEM_2_1_5",
            CcPowerAssociativity => "COR_2_1",
            CfSubgroups => "LEM_2_2",
            CfMembership => "LEM_2_3",
            OsbornCiFunctional => "LEM_2_4",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            InnerMappings => "inner mappings of Osborn loops are pseudo-automorphisms; R_(x,y)^-1 = [L_{y^ρ}^-1, R_x^-1] = L_(y^λ,x^λ)",
            InnerGroupsCoincide => "Osborn loops: <L_(x,y)> = <R_(x,y)>",
            AutomorphicMiddleInner => "Osborn loops: T_(a) automorphic implies a·aa = aa·a in N; centrum cubes lie in Z",
            RhoFifthPower => "Osborn loops with (xx)^ρ = x^ρx^ρ: J_ρ^5 = id",
            ExponentTwoAbelian => "Osborn loops of exponent 2 are abelian groups",
            UniversalWip => "universal WIP iff WIP and Osborn",
            ForcedMoufang => "Osborn + FLEX/LAP/RAP/LIP/RIP/AAIP is Moufang; Osborn + COMM/CIP is commutative Moufang",
            WipOsbornInverses => "WIP Osborn loops with a = x^ρx: xa = x^λλ, ax^λ = x^ρ, x^ρa = x^λ, ax = x^ρρ and the a^-1 forms",
            ThetaAutotopism => "Osborn loops: (θ_x, θ_x, L_x T_(x) R_x^-1) is an autotopism with θ_x in <R_(x,y)>",
            MiddleInnerForms => "Osborn loops: x T_(x) = x via both unit products; T_(x) = L_{x^λ} R_x",
            RightTranslationChain => "Osborn loops: R_x = L_{x^λ} R_x L_x",
            UnitProducts => "Osborn loops: (x^λ·xy)(x^λ·xy^ρ) = (x^λ·xz^λ)(x^λ·xz) = e",
            InverseOfProducts => "Osborn loops: (x^λ·xy)^ρ = x^λ·xy^ρ, (x^λ·xy^ρ)^λ = (x^λ·xy^λ)^ρ",
            InverseMapFormulas => "Osborn loops: formulas for J_ρ, J_ρ^2, J_λ, J_λ^2, J_λ^3",
            OneVariableInverses => "Osborn loops: one-variable inverse identities",
            TwoVariableInverses => "Osborn loops: two-variable inverse identities",
            SelfInverseEquivalence => "Osborn loops: J_λ^2 = id, J_ρ^2 = id, J_λ = J_ρ, LSIP, RSIP coincide",
            CcPowerAssociativity => "CC-loops: power associativity, 3-PAPL, J_λ = J_ρ, LSIP, RSIP coincide",
            CfSubgroups => "CF_x is a subgroup of Mult; CF_e = Inn",
            CfMembership => "T_(x) in CF_y iff y in C(x); R_(x,y) in CF_z iff z in N_λ(x,y); L_(x,y) in CF_z iff z in N_ρ(x,y)",
            OsbornCiFunctional => "Osborn loops: yx = x(x^λy·x) is a CI whose functional fixes e",
        }
    }

    fn precondition(self) -> Precondition {
        match self {
            UniversalWip | CfSubgroups | CfMembership => Precondition::None,
            RhoFifthPower => Precondition::OsbornSquareInverse,
            ExponentTwoAbelian => Precondition::OsbornExponentTwo,
            WipOsbornInverses => Precondition::WipOsborn,
            CcPowerAssociativity => Precondition::Cc,
            _ => Precondition::Osborn,
        }
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StatementId {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        StatementId::ALL
            .into_iter()
            .find(|id| id.tag() == upper)
            .ok_or_else(|| LoopError::UnknownStatement(s.to_string()))
    }
}

impl Serialize for StatementId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Precondition {
    None,
    Osborn,
    OsbornSquareInverse,
    OsbornExponentTwo,
    WipOsborn,
    Cc,
}

impl Precondition {
    fn holds(self, l: &LoopTable) -> bool {
        match self {
            Precondition::None => true,
            Precondition::Osborn => osborn(l),
            Precondition::OsbornSquareInverse => osborn(l) && square_inverse(l).holds,
            Precondition::OsbornExponentTwo => {
                osborn(l) && check_identity(l, IdentityId::Exp2).holds
            }
            Precondition::WipOsborn => check_identity(l, IdentityId::Wip).holds && osborn(l),
            Precondition::Cc => {
                check_identity(l, IdentityId::CcLeft).holds
                    && check_identity(l, IdentityId::CcRight).holds
            }
        }
    }
}

/// `(xx)^ρ = x^ρ x^ρ` for all `x`.
pub fn square_inverse(l: &LoopTable) -> CheckResult {
    all1(l, |x| {
        let xr = l.rho_inv(x);
        l.rho_inv(l.mul(x, x)) == l.mul(xr, xr)
    })
}

fn all1(l: &LoopTable, f: impl Fn(usize) -> bool) -> CheckResult {
    scan_tuples(l.order(), 1, |v| f(v[0]))
}

fn all2(l: &LoopTable, f: impl Fn(usize, usize) -> bool) -> CheckResult {
    scan_tuples(l.order(), 2, |v| f(v[0], v[1]))
}

fn verdict(ok: bool) -> CheckResult {
    if ok {
        CheckResult::pass(1)
    } else {
        CheckResult::fail(Vec::new(), 1)
    }
}

/// First `x` where two permutations differ.
fn same_map(p: &Permutation, q: &Permutation) -> CheckResult {
    scan_tuples(p.degree(), 1, |v| p.apply(v[0]) == q.apply(v[0]))
}

/// Options for battery runs.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Cap on materialized permutation groups.
    pub bound: usize,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            bound: DEFAULT_CLOSURE_BOUND,
            exec: Exec::default(),
        }
    }
}

impl VerifyConfig {
    pub fn sequential() -> Self {
        VerifyConfig {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }
}

/// What a statement did on one loop.
#[derive(Clone, Debug)]
pub enum Outcome {
    Skipped,
    Checked(Battery),
}

/// Runs one statement on one loop.
pub fn check_statement(l: &LoopTable, s: StatementId, cfg: &VerifyConfig) -> Result<Outcome> {
    if !s.precondition().holds(l) {
        return Ok(Outcome::Skipped);
    }
    let battery = match s {
        InnerMappings => inner_mapping_battery(l)?,
        InnerGroupsCoincide => inner_groups_coincide(l, cfg.bound)?,
        AutomorphicMiddleInner => automorphic_middle_inner(l),
        RhoFifthPower => rho_fifth_power(l),
        ExponentTwoAbelian => {
            let mut b = Battery::default();
            b.push("ASSOC", check_identity(l, IdentityId::Assoc));
            b.push("COMM", check_identity(l, IdentityId::Comm));
            b
        }
        UniversalWip => universal_wip(l),
        ForcedMoufang => forced_moufang(l),
        WipOsbornInverses => wip_osborn_inverses(l),
        ThetaAutotopism => theta_autotopism(l, cfg.bound)?,
        MiddleInnerForms => middle_inner_forms(l),
        RightTranslationChain => right_translation_chain(l),
        UnitProducts => unit_products(l),
        InverseOfProducts => inverse_of_products(l)?,
        InverseMapFormulas => inverse_map_formulas(l)?,
        OneVariableInverses => one_variable_inverses(l)?,
        TwoVariableInverses => two_variable_inverses(l)?,
        SelfInverseEquivalence => self_inverse_equivalence(l)?,
        CcPowerAssociativity => cc_power_associativity(l)?,
        CfSubgroups => cf_subgroup_battery(l, cfg.bound)?,
        CfMembership => cf_membership_battery(l, cfg.bound)?,
        OsbornCiFunctional => osborn_ci_battery(l)?,
    };
    Ok(Outcome::Checked(battery))
}

fn inner_groups_coincide(l: &LoopTable, bound: usize) -> Result<Battery> {
    let rho = inner_group(l, InnerFlavor::Rho, bound)?;
    let lambda = inner_group(l, InnerFlavor::Lambda, bound)?;
    let mut b = Battery::default();
    b.push("<L_(x,y)> = <R_(x,y)>", verdict(rho.same_elements(&lambda)));
    b.notes.push(format!(
        "|<L_(x,y)>| = {}, |<R_(x,y)>| = {}",
        rho.order(),
        lambda.order()
    ));
    Ok(b)
}

fn automorphic_middle_inner(l: &LoopTable) -> Battery {
    let n = l.order();
    let nucleus = nuclei(l).nucleus;
    let z = center(l);
    let mut cube = CheckResult::pass(0);
    let mut in_nucleus = CheckResult::pass(0);
    let mut central_cube = CheckResult::pass(0);
    let mut automorphic = Vec::new();
    for a in 0..n {
        let aa = l.mul(a, a);
        let ta = t_map(l, a);
        if is_automorphism(l, &ta).expect("degrees match").holds {
            automorphic.push(a);
            cube.triples_checked += 1;
            in_nucleus.triples_checked += 1;
            let left = l.mul(aa, a);
            if cube.holds && l.mul(a, aa) != left {
                cube = CheckResult::fail(vec![a], cube.triples_checked);
            }
            if in_nucleus.holds && !nucleus.contains(&left) {
                in_nucleus = CheckResult::fail(vec![a], in_nucleus.triples_checked);
            }
        }
        if (0..n).all(|x| l.mul(a, x) == l.mul(x, a)) {
            central_cube.triples_checked += 1;
            if central_cube.holds && !z.contains(&l.mul(aa, a)) {
                central_cube = CheckResult::fail(vec![a], central_cube.triples_checked);
            }
        }
    }
    let mut b = Battery::default();
    b.push("T_(a) automorphism => a·aa = aa·a", cube);
    b.push("T_(a) automorphism => aa·a in N", in_nucleus);
    b.push("a in C => (aa)a in Z", central_cube);
    b.notes
        .push(format!("elements with automorphic T_(a): {automorphic:?}"));
    b
}

fn rho_fifth_power(l: &LoopTable) -> Battery {
    let j = l.j_map(Side::Rho);
    let mut b = Battery::default();
    b.push(
        "J_ρ^5 = id",
        same_map(&j.pow(5), &Permutation::identity(l.order())),
    );
    b.notes.push(format!("order of J_ρ: {}", j.order()));
    b
}

fn universal_wip(l: &LoopTable) -> Battery {
    let uw = is_universal_wip(l);
    let wip = check_identity(l, IdentityId::Wip).holds;
    let osb = osborn(l);
    let mut b = Battery::default();
    let ok = uw.holds == (wip && osb);
    b.push(
        "universal WIP <=> WIP and Osborn",
        if ok {
            CheckResult::pass(uw.triples_checked)
        } else {
            CheckResult::fail(uw.witness.clone().unwrap_or_default(), uw.triples_checked)
        },
    );
    if !ok {
        b.notes.push(format!(
            "universal WIP {}, WIP {wip}, Osborn {osb}",
            uw.holds
        ));
    }
    b
}

fn forced_moufang(l: &LoopTable) -> Battery {
    use IdentityId::*;
    let moufang = check_identity(l, Moufang);
    let comm = check_identity(l, Comm);
    let mut b = Battery::default();
    for p in [Flex, Lap, Rap, Lip, Rip, Aaip] {
        let r = if check_identity(l, p).holds {
            moufang.clone()
        } else {
            CheckResult::pass(0)
        };
        b.push(format!("{p} => MOUFANG"), r);
    }
    for p in [Comm, Cip] {
        let r = if check_identity(l, p).holds {
            if !moufang.holds {
                moufang.clone()
            } else {
                comm.clone()
            }
        } else {
            CheckResult::pass(0)
        };
        b.push(format!("{p} => MOUFANG and COMM"), r);
    }
    b
}

fn wip_osborn_inverses(l: &LoopTable) -> Battery {
    let n = l.order();
    let lam = |x| l.lambda_inv(x);
    let rho = |x| l.rho_inv(x);
    let a_of = |x| l.mul(rho(x), x);
    let mut b = Battery::default();
    // element equations, a = x^ρ x
    b.push("x a = x^λλ", all1(l, |x| l.mul(x, a_of(x)) == lam(lam(x))));
    b.push("a x^λ = x^ρ", all1(l, |x| l.mul(a_of(x), lam(x)) == rho(x)));
    b.push("x^ρ a = x^λ", all1(l, |x| l.mul(rho(x), a_of(x)) == lam(x)));
    b.push("a x = x^ρρ", all1(l, |x| l.mul(a_of(x), x) == rho(rho(x))));
    for (side, name) in [(Side::Rho, "ρ"), (Side::Lambda, "λ")] {
        let ainv = |x| match side {
            Side::Rho => rho(a_of(x)),
            Side::Lambda => lam(a_of(x)),
        };
        b.push(
            format!("x a^-1 = a x (a^-1 = a^{name})"),
            all1(l, |x| l.mul(x, ainv(x)) == l.mul(a_of(x), x)),
        );
        b.push(
            format!("a^-1 x^λ = x^λ a (a^-1 = a^{name})"),
            all1(l, |x| l.mul(ainv(x), lam(x)) == l.mul(lam(x), a_of(x))),
        );
        b.push(
            format!("a^-1 x^ρ = x^ρ a (a^-1 = a^{name})"),
            all1(l, |x| l.mul(ainv(x), rho(x)) == l.mul(rho(x), a_of(x))),
        );
    }
    // the same content as maps compared with powers of J
    let jl = l.j_map(Side::Lambda);
    let jr = l.j_map(Side::Rho);
    let map = |f: &dyn Fn(usize) -> usize| Permutation::from_fn(n, f);
    let forms = [
        (
            "J_λ^2 : x -> x · x^ρx",
            map(&|x| l.mul(x, a_of(x))),
            jl.pow(2),
        ),
        (
            "J_ρ : x -> x^ρx · x^λ",
            map(&|x| l.mul(a_of(x), lam(x))),
            jr.clone(),
        ),
        (
            "J_λ : x -> x^ρ · x^ρx",
            map(&|x| l.mul(rho(x), a_of(x))),
            jl.clone(),
        ),
        (
            "J_ρ^2 : x -> x^ρx · x",
            map(&|x| l.mul(a_of(x), x)),
            jr.pow(2),
        ),
    ];
    let element_verdicts: Vec<bool> = b.checks.iter().take(4).map(|c| c.result.holds).collect();
    let mut map_verdicts = Vec::new();
    for (name, p, q) in forms {
        let r = same_map(&p, &q);
        map_verdicts.push(r.holds);
        b.push(name, r);
    }
    b.push(
        "element and map forms agree",
        verdict(element_verdicts == map_verdicts),
    );
    b
}

fn theta_autotopism(l: &LoopTable, bound: usize) -> Result<Battery> {
    let n = l.order();
    let lambda_group = inner_group(l, InnerFlavor::Lambda, bound)?;
    let mut auto = CheckResult::pass(0);
    let mut member = CheckResult::pass(0);
    for x in 0..n {
        let theta = l.theta_map(x);
        let c = l
            .left_translation(x)
            .then(&t_map(l, x))
            .then(&l.right_translation(x).inverse());
        let r = is_autotopism(l, &theta, &theta, &c)?;
        auto.triples_checked += r.triples_checked;
        if auto.holds {
            if let Some(w) = r.witness {
                auto = CheckResult::fail(vec![x, w[0], w[1]], auto.triples_checked);
            }
        }
        member.triples_checked += 1;
        if member.holds && !lambda_group.contains(&theta) {
            member = CheckResult::fail(vec![x], member.triples_checked);
        }
    }
    let mut b = Battery::default();
    b.push("(θ_x, θ_x, L_x T_(x) R_x^-1) autotopism", auto);
    b.push("θ_x in <R_(x,y)>", member);
    Ok(b)
}

/// `(x^λ · xy)(x^λ · xz)`.
fn unit_product(l: &LoopTable, x: usize, y: usize, z: usize) -> usize {
    let xl = l.lambda_inv(x);
    l.mul(l.mul(xl, l.mul(x, y)), l.mul(xl, l.mul(x, z)))
}

fn middle_inner_forms(l: &LoopTable) -> Battery {
    let mut b = Battery::default();
    b.push(
        "[(x^λ·xy)(x^λ·xy^ρ)]x = x",
        all2(l, |x, y| l.mul(unit_product(l, x, y, l.rho_inv(y)), x) == x),
    );
    b.push(
        "[(x^λ·xz^λ)(x^λ·xz)]x = x",
        all2(l, |x, z| {
            l.mul(unit_product(l, x, l.lambda_inv(z), z), x) == x
        }),
    );
    b.push("x T_(x) = x", all1(l, |x| t_map(l, x).apply(x) == x));
    b.push(
        "T_(x) = L_{x^λ} R_x",
        all2(l, |x, y| {
            t_map(l, x).apply(y) == l.mul(l.mul(l.lambda_inv(x), y), x)
        }),
    );
    b
}

fn right_translation_chain(l: &LoopTable) -> Battery {
    let mut b = Battery::default();
    b.push(
        "R_x = L_{x^λ} R_x L_x",
        all1(l, |x| {
            let chain = l
                .left_translation(l.lambda_inv(x))
                .then(&l.right_translation(x))
                .then(&l.left_translation(x));
            chain == l.right_translation(x)
        }),
    );
    b.push(
        "yx = x(x^λy · x)",
        all2(l, |x, y| {
            l.mul(y, x) == l.mul(x, l.mul(l.mul(l.lambda_inv(x), y), x))
        }),
    );
    b
}

fn unit_products(l: &LoopTable) -> Battery {
    let mut b = Battery::default();
    b.push(
        "(x^λ·xy)(x^λ·xy^ρ) = e",
        all2(l, |x, y| unit_product(l, x, y, l.rho_inv(y)) == 0),
    );
    b.push(
        "(x^λ·xz^λ)(x^λ·xz) = e",
        all2(l, |x, z| unit_product(l, x, l.lambda_inv(z), z) == 0),
    );
    b
}

fn require_osborn(l: &LoopTable) -> Result<()> {
    if osborn(l) {
        Ok(())
    } else {
        Err(LoopError::NotOsborn)
    }
}

/// Shorthand used by the inverse-identity batteries.
struct Ops<'a>(&'a LoopTable);

impl Ops<'_> {
    fn m(&self, a: usize, b: usize) -> usize {
        self.0.mul(a, b)
    }
    fn l(&self, x: usize) -> usize {
        self.0.lambda_inv(x)
    }
    fn r(&self, x: usize) -> usize {
        self.0.rho_inv(x)
    }
    fn sq(&self, x: usize) -> usize {
        self.m(x, x)
    }
    /// `x^λ · xy`
    fn lx(&self, x: usize, y: usize) -> usize {
        self.m(self.l(x), self.m(x, y))
    }
    /// `x^{λ²} · x^λ x^ρ`
    fn w(&self, x: usize) -> usize {
        self.m(self.l(self.l(x)), self.m(self.l(x), self.r(x)))
    }
}

/// Items of the first two-variable group.
pub fn inverse_of_products(l: &LoopTable) -> Result<Battery> {
    require_osborn(l)?;
    let o = Ops(l);
    let mut b = Battery::default();
    b.push(
        "(x^λ·xy)^ρ = x^λ·xy^ρ",
        all2(l, |x, y| o.r(o.lx(x, y)) == o.lx(x, o.r(y))),
    );
    b.push(
        "(x^λ·xy^ρ)^λ = (x^λ·xy^λ)^ρ",
        all2(l, |x, y| o.l(o.lx(x, o.r(y))) == o.r(o.lx(x, o.l(y)))),
    );
    Ok(b)
}

/// Formulas for `J_ρ`, `J_ρ²`, `J_λ`, `J_λ²`, `J_λ³`, each compared with the
/// corresponding power of the inverse map.
pub fn inverse_map_formulas(l: &LoopTable) -> Result<Battery> {
    require_osborn(l)?;
    let o = Ops(l);
    let n = l.order();
    let jl = l.j_map(Side::Lambda);
    let jr = l.j_map(Side::Rho);
    let map = |f: &dyn Fn(usize) -> usize| Permutation::from_fn(n, f);
    let forms: [(&str, Permutation, Permutation); 7] = [
        (
            "J_ρ : x -> x^λx^λ · x",
            map(&|x| o.m(o.sq(o.l(x)), x)),
            jr.clone(),
        ),
        (
            "J_ρ^2 : x -> xx · x^ρ",
            map(&|x| o.m(o.sq(x), o.r(x))),
            jr.pow(2),
        ),
        ("J_λ : x -> x^λλ · x^λx^ρ", map(&|x| o.w(x)), jl.clone()),
        ("J_λ^2 : x -> x^λ · xx", map(&|x| o.lx(x, x)), jl.pow(2)),
        (
            "J_λ : x -> (x^λ·xx^λ)^2 (x^λ·xx)",
            map(&|x| o.m(o.sq(o.lx(x, o.l(x))), o.lx(x, x))),
            jl.clone(),
        ),
        (
            "J_λ : x -> (x^λx^λ·x)^λ (x^λx^λ·x)^2",
            map(&|x| {
                let r = o.m(o.sq(o.l(x)), x);
                o.m(o.l(r), o.sq(r))
            }),
            jl.clone(),
        ),
        (
            "J_λ^3 : x -> x^λ · xx^λ",
            map(&|x| o.lx(x, o.l(x))),
            jl.pow(3),
        ),
    ];
    let mut b = Battery::default();
    for (name, p, q) in forms {
        b.push(name, same_map(&p, &q));
    }
    Ok(b)
}

/// One-variable identities relating inverses, squares and `w = x^{λ²}·x^λx^ρ`.
pub fn one_variable_inverses(l: &LoopTable) -> Result<Battery> {
    require_osborn(l)?;
    let o = Ops(l);
    let p = |x| o.lx(x, o.l(x)); // x^λ · xx^λ
    let q = |x| o.lx(x, x); // x^λ · xx
    let r = |x| o.m(o.sq(o.l(x)), x); // x^λx^λ · x
    let mut b = Battery::default();
    b.push("x^λ · x x^ρρ = x", all1(l, |x| o.lx(x, o.r(o.r(x))) == x));
    b.push(
        "(x · x^ρx^ρ)^λ = x · x^ρx",
        all1(l, |x| o.l(o.m(x, o.sq(o.r(x)))) == o.m(x, o.m(o.r(x), x))),
    );
    b.push(
        "x · x^ρx = (x · x^ρx^λ)^ρ",
        all1(l, |x| {
            o.m(x, o.m(o.r(x), x)) == o.r(o.m(x, o.m(o.r(x), o.l(x))))
        }),
    );
    b.push("(x^λ · xx)^λ = x^λ · xx^λ", all1(l, |x| o.l(q(x)) == p(x)));
    b.push(
        "x^λλλ · x^λλx = x^λ · xx",
        all1(l, |x| {
            let l2 = o.l(o.l(x));
            o.m(o.l(l2), o.m(l2, x)) == q(x)
        }),
    );
    b.push(
        "w^λλ · w^λw^ρ = x^λ · xx, w = x^λλ · x^λx^ρ",
        all1(l, |x| {
            let w = o.w(x);
            o.m(o.l(o.l(w)), o.m(o.l(w), o.r(w))) == q(x)
        }),
    );
    b.push(
        "(x^λ·xx^λ)^2 (x^λ·xx) = x^λλ · x^λx^ρ",
        all1(l, |x| o.m(o.sq(p(x)), q(x)) == o.w(x)),
    );
    b.push(
        "(x^λx^λ·x)^λ (x^λx^λ·x)^2 = (x^λ·xx^λ)^2 (x^λ·xx)",
        all1(l, |x| o.m(o.l(r(x)), o.sq(r(x))) == o.m(o.sq(p(x)), q(x))),
    );
    b.push(
        "w^λ w^2 = x^λ · xx^λ",
        all1(l, |x| {
            let w = o.w(x);
            o.m(o.l(w), o.sq(w)) == p(x)
        }),
    );
    b.push(
        "w^λ = (x^λλ · x^λx^λ)^ρ",
        all1(l, |x| o.l(o.w(x)) == o.r(o.m(o.l(o.l(x)), o.sq(o.l(x))))),
    );
    b.push(
        "q^λλ · q^λq^ρ = x^λ · xx^λ, q = x^λ · xx",
        all1(l, |x| {
            let q = q(x);
            o.m(o.l(o.l(q)), o.m(o.l(q), o.r(q))) == p(x)
        }),
    );
    Ok(b)
}

/// Two-variable identities between `λ` and `ρ` images.
pub fn two_variable_inverses(l: &LoopTable) -> Result<Battery> {
    require_osborn(l)?;
    let o = Ops(l);
    let mut b = Battery::default();
    b.push(
        "(x · x^ρy^ρ)^λ = (x · x^ρy^λ)^ρ",
        all2(l, |x, y| {
            o.l(o.m(x, o.m(o.r(x), o.r(y)))) == o.r(o.m(x, o.m(o.r(x), o.l(y))))
        }),
    );
    b.push(
        "(x^λ · x y^ρρ)^λ = (x^λ · xy)^ρ",
        all2(l, |x, y| o.l(o.lx(x, o.r(o.r(y)))) == o.r(o.lx(x, y))),
    );
    b.push(
        "(x^λλ · x^λy^ρ)^λ = (x^λλ · x^λy^λ)^ρ",
        all2(l, |x, y| {
            let l2 = o.l(o.l(x));
            o.l(o.m(l2, o.m(o.l(x), o.r(y)))) == o.r(o.m(l2, o.m(o.l(x), o.l(y))))
        }),
    );
    b.push(
        "(x^λ · xy)^λ = (x^λ · x y^λλ)^ρ",
        all2(l, |x, y| o.l(o.lx(x, y)) == o.r(o.lx(x, o.l(o.l(y))))),
    );
    Ok(b)
}

/// Five conditions whose verdicts must all be equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiveWay {
    pub names: [&'static str; 5],
    pub verdicts: [bool; 5],
}

impl FiveWay {
    pub fn coincide(&self) -> bool {
        self.verdicts.iter().all(|&v| v == self.verdicts[0])
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .names
            .iter()
            .zip(self.verdicts)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        parts.join(" ")
    }
}

/// `J_λ² = id`, `J_ρ² = id`, `J_λ = J_ρ`, LSIP, RSIP on an Osborn loop.
pub fn self_inverse_conditions(l: &LoopTable) -> Result<FiveWay> {
    require_osborn(l)?;
    let id = Permutation::identity(l.order());
    let jl = l.j_map(Side::Lambda);
    let jr = l.j_map(Side::Rho);
    Ok(FiveWay {
        names: ["J_λ^2=id", "J_ρ^2=id", "J_λ=J_ρ", "LSIP", "RSIP"],
        verdicts: [
            jl.pow(2) == id,
            jr.pow(2) == id,
            jl == jr,
            check_identity(l, IdentityId::Lsip).holds,
            check_identity(l, IdentityId::Rsip).holds,
        ],
    })
}

fn self_inverse_equivalence(l: &LoopTable) -> Result<Battery> {
    let five = self_inverse_conditions(l)?;
    let mut b = Battery::default();
    b.push("five conditions coincide", verdict(five.coincide()));
    if !five.coincide() {
        b.notes.push(five.summary());
    }
    let jl = l.j_map(Side::Lambda);
    if jl.is_identity() && l.order() > 1 {
        b.notes
            .push("J_λ = id: order divides 2 but is not exactly 2".to_string());
    }
    Ok(b)
}

/// Power associativity, 3-PAPL, `J_λ = J_ρ`, LSIP, RSIP on a CC-loop.
pub fn cc_conditions(l: &LoopTable) -> Result<FiveWay> {
    if !(check_identity(l, IdentityId::CcLeft).holds
        && check_identity(l, IdentityId::CcRight).holds)
    {
        return Err(LoopError::NotCC);
    }
    Ok(FiveWay {
        names: ["power-associative", "3-PAPL", "J_λ=J_ρ", "LSIP", "RSIP"],
        verdicts: [
            is_power_associative(l).holds,
            check_identity(l, IdentityId::Papl3).holds,
            l.j_map(Side::Lambda) == l.j_map(Side::Rho),
            check_identity(l, IdentityId::Lsip).holds,
            check_identity(l, IdentityId::Rsip).holds,
        ],
    })
}

fn cc_power_associativity(l: &LoopTable) -> Result<Battery> {
    let five = cc_conditions(l)?;
    let mut b = Battery::default();
    b.push("five conditions coincide", verdict(five.coincide()));
    let direction = if !five.coincide() {
        five.summary()
    } else if five.verdicts[0] {
        "all five true".to_string()
    } else {
        "all five false".to_string()
    };
    let kind = if check_identity(l, IdentityId::Assoc).holds {
        "group"
    } else {
        "nonassociative"
    };
    b.notes.push(format!("CC-loop ({kind}): {direction}"));
    Ok(b)
}

/// Per-loop failure of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub digest: String,
    pub check: String,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopErrorRecord {
    pub digest: String,
    pub message: String,
}

pub const CONTRADICTION_MARKER: &str = "PAPER-CONTRADICTION (verify by independent recomputation)";

/// Notes kept verbatim in a report; the rest are only counted.
pub const MAX_NOTES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub statement: StatementId,
    pub description: String,
    pub conventions: Vec<String>,
    pub catalog_digest: String,
    pub loops_tested: u64,
    pub loops_skipped: u64,
    pub failures: Vec<Failure>,
    pub errors: Vec<LoopErrorRecord>,
    /// Distinct per-loop notes with the number of loops producing each.
    pub notes: Vec<NoteCount>,
    pub notes_omitted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoteCount {
    pub note: String,
    pub loops: u64,
    /// Digest of the first loop producing the note.
    pub first: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "statement {}: {}", self.statement, self.description);
        for c in &self.conventions {
            let _ = writeln!(out, "convention: {c}");
        }
        let _ = writeln!(out, "catalog digest: {}", self.catalog_digest);
        let _ = writeln!(
            out,
            "{} tested, {} skipped, {} failures",
            self.loops_tested,
            self.loops_skipped,
            self.failures.len()
        );
        for f in &self.failures {
            let w: Vec<String> = f.witness.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "FAIL {} {} at ({}): {CONTRADICTION_MARKER}",
                f.digest,
                f.check,
                w.join(", ")
            );
        }
        for e in &self.errors {
            let _ = writeln!(out, "ERROR {} {}", e.digest, e.message);
        }
        for n in &self.notes {
            let _ = writeln!(
                out,
                "note [{} loops, first {}]: {}",
                n.loops, n.first, n.note
            );
        }
        if self.notes_omitted > 0 {
            let _ = writeln!(
                out,
                "({} further distinct notes omitted)",
                self.notes_omitted
            );
        }
        out
    }
}

fn conventions() -> Vec<String> {
    vec![
        format!("pseudo-automorphisms: {PSEUDO_AUT_CONVENTION}"),
        "maps act on the right: xAB applies A first".into(),
        "|J| = 2 read as J^2 = id".into(),
    ]
}

/// Runs a statement on one loop.
pub fn verify(l: &LoopTable, s: StatementId) -> VerificationReport {
    verify_loops(std::slice::from_ref(l), s, &VerifyConfig::sequential())
}

/// Runs a statement over loops in order; results do not depend on `cfg.exec`.
pub fn verify_loops(loops: &[LoopTable], s: StatementId, cfg: &VerifyConfig) -> VerificationReport {
    let outcomes = cfg
        .exec
        .map(loops, |l| (l.digest(), check_statement(l, s, cfg)));
    let mut report = VerificationReport {
        statement: s,
        description: s.description().to_string(),
        conventions: conventions(),
        catalog_digest: catalog_digest(loops),
        loops_tested: 0,
        loops_skipped: 0,
        failures: Vec::new(),
        errors: Vec::new(),
        notes: Vec::new(),
        notes_omitted: 0,
    };
    let mut note_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut omitted: BTreeSet<String> = BTreeSet::new();
    for (digest, outcome) in outcomes {
        match outcome {
            Err(e) => report.errors.push(LoopErrorRecord {
                digest,
                message: e.to_string(),
            }),
            Ok(Outcome::Skipped) => report.loops_skipped += 1,
            Ok(Outcome::Checked(battery)) => {
                report.loops_tested += 1;
                for c in battery.checks.iter().filter(|c| !c.result.holds) {
                    report.failures.push(Failure {
                        digest: digest.clone(),
                        check: c.name.clone(),
                        witness: c.result.witness.clone().unwrap_or_default(),
                    });
                }
                for note in battery.notes {
                    if let Some(&i) = note_index.get(&note) {
                        report.notes[i].loops += 1;
                    } else if report.notes.len() < MAX_NOTES {
                        note_index.insert(note.clone(), report.notes.len());
                        report.notes.push(NoteCount {
                            note,
                            loops: 1,
                            first: digest.clone(),
                        });
                    } else {
                        omitted.insert(note);
                    }
                }
            }
        }
    }
    report.notes_omitted = omitted.len() as u64;
    report
}

/// [`verify_loops`] over a saved or enumerated catalog.
pub fn verify_catalog(
    catalog: &crate::search::Catalog,
    s: StatementId,
    cfg: &VerifyConfig,
) -> VerificationReport {
    verify_loops(&catalog.loops, s, cfg)
}
