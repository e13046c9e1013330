//! Cryptographic functionals and two toy cipher schemes.
//!
//! A functional `F` in `Mult(Q)` is a CF at `x` when `xF = x`; the CFs at `x`
//! are the stabilizer of `x` in `Mult(Q)`.
//!
//! The schemes encipher one loop element at a time and are teaching
//! prototypes only: no padding, no chaining, no security claims.
//!
//! * `Cip` (cross inverse property loops), key `y`: `m -> y·m`, undone by
//!   `c -> c·y^ρ`.
//! * `OsbornCi` (Osborn loops), key `x`: `m -> x((x^λ m) x)`, which equals
//!   `m x`; undone by the chain `c -> x^λ \ ((x \ c) / x)`, with the one-step
//!   `c / x` kept as an oracle.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LoopError, Result};
use crate::mappings::{l_inner, mult_group, r_inner, t_map};
use crate::perm::{PermGroup, Permutation};
use crate::properties::{check_identity, local_sets, osborn, Battery, CheckResult, IdentityId};
use crate::table::{LoopTable, Side};

/// Whether `xF = x`. With `mult` given, `F` must also lie in that group.
pub fn is_cf(l: &LoopTable, f: &Permutation, x: usize, mult: Option<&PermGroup>) -> Result<bool> {
    if f.degree() != l.order() {
        return Err(LoopError::DegreeMismatch {
            expected: l.order(),
            found: f.degree(),
        });
    }
    if let Some(g) = mult {
        if !g.contains(f) {
            return Err(LoopError::NotInMultGroup);
        }
    }
    Ok(f.apply(x) == x)
}

/// All CFs at `x`: the stabilizer of `x` in `Mult(Q)`.
pub fn cf_set(l: &LoopTable, x: usize, bound: usize) -> Result<PermGroup> {
    Ok(mult_group(l, bound)?.stabilizer(x))
}

/// Subgroup structure of the CF sets, for every `x`:
/// each is a closed subgroup of `Mult` of index `n`, and the one at `e`
/// coincides with the group generated by all `R_(x,y)`, `L_(x,y)`, `T_(x)`.
pub fn cf_subgroup_battery(l: &LoopTable, bound: usize) -> Result<Battery> {
    let n = l.order();
    let mult = mult_group(l, bound)?;
    let mut battery = Battery::default();
    let mut closed = CheckResult::pass(0);
    let mut index = CheckResult::pass(0);
    for x in 0..n {
        let cf = mult.stabilizer(x);
        closed.triples_checked += 1;
        index.triples_checked += 1;
        if closed.holds && !(cf.is_closed() && cf.is_subset_of(&mult)) {
            closed = CheckResult::fail(vec![x], closed.triples_checked);
        }
        if index.holds && cf.order() * n != mult.order() {
            index = CheckResult::fail(vec![x], index.triples_checked);
        }
    }
    let mut gens = Vec::new();
    for x in 0..n {
        gens.push(t_map(l, x));
        for y in 0..n {
            gens.push(r_inner(l, x, y));
            gens.push(l_inner(l, x, y));
        }
    }
    let inn = PermGroup::generate(n, gens, bound)?;
    let at_e = mult.stabilizer(0);
    let equal = if at_e.same_elements(&inn) {
        CheckResult::pass(1)
    } else {
        CheckResult::fail(vec![0], 1)
    };
    battery.push("CF_x is a subgroup of Mult", closed);
    battery.push("|CF_x| = |Mult| / n", index);
    battery.push("CF_e = <R_(x,y), L_(x,y), T_(x)>", equal);
    battery.notes.push(format!(
        "|Mult| = {}, |CF_e| = {}",
        mult.order(),
        at_e.order()
    ));
    Ok(battery)
}

/// For all `x, y, z`:
/// `T_(x)` is a CF at `y` iff `xy = yx`;
/// `R_(x,y)` is a CF at `z` iff `zx · y = z · xy`;
/// `L_(x,y)` is a CF at `z` iff `y · xz = yx · z`.
/// Membership of each functional in `Mult` is checked against the closure.
pub fn cf_membership_battery(l: &LoopTable, bound: usize) -> Result<Battery> {
    let n = l.order();
    let mult = mult_group(l, bound)?;
    let mut t_res = CheckResult::pass(0);
    let mut r_res = CheckResult::pass(0);
    let mut l_res = CheckResult::pass(0);
    for x in 0..n {
        let t = t_map(l, x);
        let commutant = local_sets(l, x, 0).commutant;
        for y in 0..n {
            t_res.triples_checked += 1;
            if t_res.holds && is_cf(l, &t, y, Some(&mult))? != commutant.contains(&y) {
                t_res = CheckResult::fail(vec![x, y], t_res.triples_checked);
            }
            let sets = local_sets(l, x, y);
            let r = r_inner(l, x, y);
            let li = l_inner(l, x, y);
            for z in 0..n {
                r_res.triples_checked += 1;
                l_res.triples_checked += 1;
                if r_res.holds && is_cf(l, &r, z, Some(&mult))? != sets.left.contains(&z) {
                    r_res = CheckResult::fail(vec![x, y, z], r_res.triples_checked);
                }
                if l_res.holds && is_cf(l, &li, z, Some(&mult))? != sets.right.contains(&z) {
                    l_res = CheckResult::fail(vec![x, y, z], l_res.triples_checked);
                }
            }
        }
    }
    let mut battery = Battery::default();
    battery.push("T_(x) in CF_y iff y in C(x)", t_res);
    battery.push("R_(x,y) in CF_z iff z in N_λ(x,y)", r_res);
    battery.push("L_(x,y) in CF_z iff z in N_ρ(x,y)", l_res);
    Ok(battery)
}

/// `L_{x^λ} R_x L_x R_x^{-1}`: the functional form of `yx = x(x^λ y · x)`.
pub fn osborn_ci_functional(l: &LoopTable, x: usize) -> Permutation {
    l.left_translation(l.lambda_inv(x))
        .then(&l.right_translation(x))
        .then(&l.left_translation(x))
        .then(&l.right_translation(x).inverse())
}

/// On an Osborn loop, for every `x`: `m -> x((x^λ m) x)` equals `R_x`, and
/// the functional `L_{x^λ} R_x L_x R_x^{-1}` is a CF at `e`.
pub fn osborn_ci_battery(l: &LoopTable) -> Result<Battery> {
    if !osborn(l) {
        return Err(LoopError::NotOsborn);
    }
    let n = l.order();
    let mut pointwise = CheckResult::pass(0);
    let mut fixes_e = CheckResult::pass(0);
    for x in 0..n {
        let xl = l.lambda_inv(x);
        for m in 0..n {
            pointwise.triples_checked += 1;
            if pointwise.holds && l.mul(x, l.mul(l.mul(xl, m), x)) != l.mul(m, x) {
                pointwise = CheckResult::fail(vec![x, m], pointwise.triples_checked);
            }
        }
        fixes_e.triples_checked += 1;
        if fixes_e.holds && !is_cf(l, &osborn_ci_functional(l, x), 0, None)? {
            fixes_e = CheckResult::fail(vec![x], fixes_e.triples_checked);
        }
    }
    let mut battery = Battery::default();
    battery.push("x(x^λ m · x) = m x", pointwise);
    battery.push("e L_{x^λ} R_x L_x R_x^-1 = e", fixes_e);
    Ok(battery)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Cip,
    OsbornCi,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Cip => "cip",
            SchemeKind::OsbornCi => "osborn",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cip" => Ok(SchemeKind::Cip),
            "osborn" | "osborn_ci" => Ok(SchemeKind::OsbornCi),
            other => Err(LoopError::SchemeInvariantViolated(format!(
                "unknown scheme `{other}`"
            ))),
        }
    }
}

/// A scheme bound to a loop whose required property was verified at construction.
#[derive(Clone, Copy, Debug)]
pub struct CipherScheme<'a> {
    kind: SchemeKind,
    table: &'a LoopTable,
    key: usize,
}

impl<'a> CipherScheme<'a> {
    pub fn new(kind: SchemeKind, table: &'a LoopTable, key: usize) -> Result<Self> {
        if key >= table.order() {
            return Err(LoopError::SchemeInvariantViolated(format!(
                "key {key} is not an element of an order-{} loop",
                table.order()
            )));
        }
        match kind {
            SchemeKind::Cip => {
                let r = check_identity(table, IdentityId::Cip);
                if !r.holds {
                    return Err(LoopError::SchemeInvariantViolated(format!(
                        "loop lacks the cross inverse property (fails at {})",
                        r.witness_text()
                    )));
                }
            }
            SchemeKind::OsbornCi => {
                let r = check_identity(table, IdentityId::Os2);
                if !r.holds {
                    return Err(LoopError::SchemeInvariantViolated(format!(
                        "loop is not Osborn (fails at {})",
                        r.witness_text()
                    )));
                }
            }
        }
        Ok(CipherScheme { kind, table, key })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn key(&self) -> usize {
        self.key
    }

    pub fn table(&self) -> &'a LoopTable {
        self.table
    }

    /// Same loop and kind under another key; the loop was already validated.
    pub fn rekey(&self, key: usize) -> Result<Self> {
        if key >= self.table.order() {
            return Err(LoopError::SchemeInvariantViolated(format!(
                "key {key} is not an element of an order-{} loop",
                self.table.order()
            )));
        }
        Ok(CipherScheme { key, ..*self })
    }

    pub fn encipher(&self, m: usize) -> usize {
        let l = self.table;
        let k = self.key;
        match self.kind {
            SchemeKind::Cip => l.mul(k, m),
            SchemeKind::OsbornCi => l.mul(k, l.mul(l.mul(l.lambda_inv(k), m), k)),
        }
    }

    pub fn decipher(&self, c: usize) -> usize {
        let l = self.table;
        let k = self.key;
        match self.kind {
            SchemeKind::Cip => l.mul(c, l.rho_inv(k)),
            SchemeKind::OsbornCi => l.ldiv(l.lambda_inv(k), l.rdiv(l.ldiv(k, c), k)),
        }
    }

    /// Single division undoing [`Self::encipher`]: `k \ c` or `c / k`.
    pub fn decipher_oracle(&self, c: usize) -> usize {
        match self.kind {
            SchemeKind::Cip => self.table.ldiv(self.key, c),
            SchemeKind::OsbornCi => self.table.rdiv(c, self.key),
        }
    }
}

/// Roundtrip and oracle agreement over every key and message.
pub fn roundtrip_check(kind: SchemeKind, l: &LoopTable) -> Result<CheckResult> {
    let scheme = CipherScheme::new(kind, l, 0)?;
    let n = l.order();
    let mut checked = 0;
    for key in 0..n {
        let s = scheme.rekey(key)?;
        for m in 0..n {
            checked += 1;
            let c = s.encipher(m);
            if s.decipher(c) != m || s.decipher_oracle(c) != m {
                return Ok(CheckResult::fail(vec![key, m], checked));
            }
        }
    }
    Ok(CheckResult::pass(checked))
}

/// Keys taken along an inverse cycle: `seed, seed^ρ, seed^ρρ, ...`
/// (or the reverse walk through `λ`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeySchedule {
    pub seed: usize,
    pub stream: Vec<usize>,
    /// Length of the inverse cycle through `seed`.
    pub period: usize,
    /// Set when the stream is longer than the period, so keys repeat.
    pub reuse_warning: bool,
}

pub fn key_schedule(l: &LoopTable, seed: usize, k: usize, side: Side) -> KeySchedule {
    let step = |x| match side {
        Side::Rho => l.rho_inv(x),
        Side::Lambda => l.lambda_inv(x),
    };
    let mut stream = Vec::with_capacity(k);
    let mut cur = seed;
    for _ in 0..k {
        stream.push(cur);
        cur = step(cur);
    }
    let mut period = 1;
    let mut walk = step(seed);
    while walk != seed {
        walk = step(walk);
        period += 1;
    }
    KeySchedule {
        seed,
        stream,
        period,
        reuse_warning: period < k,
    }
}

/// Enciphers message `i` under key `stream[i mod len]`.
pub fn encipher_stream(
    scheme: &CipherScheme<'_>,
    ks: &KeySchedule,
    msgs: &[usize],
) -> Result<Vec<usize>> {
    stream_map(scheme, ks, msgs, |s, m| s.encipher(m))
}

pub fn decipher_stream(
    scheme: &CipherScheme<'_>,
    ks: &KeySchedule,
    msgs: &[usize],
) -> Result<Vec<usize>> {
    stream_map(scheme, ks, msgs, |s, c| s.decipher(c))
}

fn stream_map(
    scheme: &CipherScheme<'_>,
    ks: &KeySchedule,
    msgs: &[usize],
    f: impl Fn(&CipherScheme<'_>, usize) -> usize,
) -> Result<Vec<usize>> {
    if ks.stream.is_empty() {
        return Err(LoopError::SchemeInvariantViolated(
            "empty key stream".into(),
        ));
    }
    msgs.iter()
        .enumerate()
        .map(|(i, &m)| {
            if m >= scheme.table().order() {
                return Err(LoopError::SchemeInvariantViolated(format!(
                    "message element {m} out of range"
                )));
            }
            Ok(f(&scheme.rekey(ks.stream[i % ks.stream.len()])?, m))
        })
        .collect()
}
