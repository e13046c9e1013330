//! Named loop identities as exhaustively checked predicates, plus nuclei,
//! centrum and center.
//!
//! Every identity is evaluated through [`Magma`], so the same definition
//! serves complete tables and the partial tables of the enumerator.
//! Tuples are scanned with the last variable varying fastest; the first
//! failing tuple is the witness.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{LoopError, Result};
use crate::mappings;
use crate::table::{LoopTable, Magma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `yx · (z E_y · y) = (y · xz) y` with `E_y = R_y R_{y^ρ}`
    Os1,
    /// `x(yz · x) = (x^λ \ y) · zx`
    Os2,
    /// `(x · yz)x = xy · (z E_x^{-1} · x)`
    Os3,
    /// `x[(x^λ y)z · x] = y · zx`
    Os2p,
    /// `(x · yz)x = xy · [(x^λ · xz) · x]`
    Os3p,
    /// `xy · z = e` implies `x · yz = e`
    Wip,
    /// `xy · x^ρ = y`
    Cip,
    /// `x^λ · xy = y`
    Lip,
    /// `yx · x^ρ = y`
    Rip,
    /// `(xy)^ρ = y^ρ x^ρ`
    Aaip,
    /// `xy · x = x · yx`
    Flex,
    /// `x · xy = xx · y`
    Lap,
    /// `yx · x = y · xx`
    Rap,
    /// `(xy)(zx) = (x · yz)x`
    Moufang,
    /// `x · yz = (xy)/x · xz`
    CcLeft,
    /// `zy · x = zx · x \ (yx)`
    CcRight,
    /// `xx · x = x · xx`
    Papl3,
    /// `x^λ · xx = x`
    Lsip,
    /// `xx · x^ρ = x`
    Rsip,
    Comm,
    Assoc,
    /// `xx = e`
    Exp2,
    /// `(xy)^ρ = x^ρ y^ρ`
    Aip,
}

use IdentityId::*;

impl IdentityId {
    pub const ALL: [IdentityId; 23] = [
        Os1, Os2, Os3, Os2p, Os3p, Wip, Cip, Lip, Rip, Aaip, Flex, Lap, Rap, Moufang, CcLeft,
        CcRight, Papl3, Lsip, Rsip, Comm, Assoc, Exp2, Aip,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Os1 => "OS1",
            Os2 => "OS2",
            Os3 => "OS3",
            Os2p => "OS2P",
            Os3p => "OS3P",
            Wip => "WIP",
            Cip => "CIP",
            Lip => "LIP",
            Rip => "RIP",
            Aaip => "AAIP",
            Flex => "FLEX",
            Lap => "LAP",
            Rap => "RAP",
            Moufang => "MOUFANG",
            CcLeft => "CC_LEFT",
            CcRight => "CC_RIGHT",
            Papl3 => "PAPL3",
            Lsip => "LSIP",
            Rsip => "RSIP",
            Comm => "COMM",
            Assoc => "ASSOC",
            Exp2 => "EXP2",
            Aip => "AIP",
        }
    }

    /// Number of quantified variables.
    pub fn arity(self) -> usize {
        match self {
            Papl3 | Lsip | Rsip | Exp2 => 1,
            Cip | Lip | Rip | Aaip | Flex | Lap | Rap | Comm | Aip => 2,
            Os1 | Os2 | Os3 | Os2p | Os3p | Wip | Moufang | CcLeft | CcRight | Assoc => 3,
        }
    }

    /// Evaluates the identity at one tuple; `None` if some needed cell is unknown.
    /// `v` must hold at least `arity()` elements.
    #[inline]
    pub fn eval<M: Magma + ?Sized>(self, m: &M, v: &[usize]) -> Option<bool> {
        let x = v[0];
        let y = v.get(1).copied().unwrap_or(0);
        let z = v.get(2).copied().unwrap_or(0);
        let mul = |a, b| m.mul(a, b);
        Some(match self {
            Os1 => {
                let ze = mul(mul(z, y)?, m.rho(y)?)?;
                mul(mul(y, x)?, mul(ze, y)?)? == mul(mul(y, mul(x, z)?)?, y)?
            }
            Os2 => {
                let lhs = mul(x, mul(mul(y, z)?, x)?)?;
                lhs == mul(m.ldiv(m.lam(x)?, y)?, mul(z, x)?)?
            }
            Os3 => {
                let ze = m.rdiv(m.rdiv(z, m.rho(x)?)?, x)?;
                mul(mul(x, mul(y, z)?)?, x)? == mul(mul(x, y)?, mul(ze, x)?)?
            }
            Os2p => {
                let inner = mul(mul(mul(m.lam(x)?, y)?, z)?, x)?;
                mul(x, inner)? == mul(y, mul(z, x)?)?
            }
            Os3p => {
                let t = mul(mul(m.lam(x)?, mul(x, z)?)?, x)?;
                mul(mul(x, mul(y, z)?)?, x)? == mul(mul(x, y)?, t)?
            }
            Wip => {
                if mul(mul(x, y)?, z)? != 0 {
                    true
                } else {
                    mul(x, mul(y, z)?)? == 0
                }
            }
            Cip => mul(mul(x, y)?, m.rho(x)?)? == y,
            Lip => mul(m.lam(x)?, mul(x, y)?)? == y,
            Rip => mul(mul(y, x)?, m.rho(x)?)? == y,
            Aaip => m.rho(mul(x, y)?)? == mul(m.rho(y)?, m.rho(x)?)?,
            Flex => mul(mul(x, y)?, x)? == mul(x, mul(y, x)?)?,
            Lap => mul(x, mul(x, y)?)? == mul(mul(x, x)?, y)?,
            Rap => mul(mul(y, x)?, x)? == mul(y, mul(x, x)?)?,
            Moufang => mul(mul(x, y)?, mul(z, x)?)? == mul(mul(x, mul(y, z)?)?, x)?,
            CcLeft => mul(x, mul(y, z)?)? == mul(m.rdiv(mul(x, y)?, x)?, mul(x, z)?)?,
            CcRight => mul(mul(z, y)?, x)? == mul(mul(z, x)?, m.ldiv(x, mul(y, x)?)?)?,
            Papl3 => {
                let xx = mul(x, x)?;
                mul(xx, x)? == mul(x, xx)?
            }
            Lsip => mul(m.lam(x)?, mul(x, x)?)? == x,
            Rsip => mul(mul(x, x)?, m.rho(x)?)? == x,
            Comm => mul(x, y)? == mul(y, x)?,
            Assoc => mul(mul(x, y)?, z)? == mul(x, mul(y, z)?)?,
            Exp2 => mul(x, x)? == 0,
            Aip => m.rho(mul(x, y)?)? == mul(m.rho(x)?, m.rho(y)?)?,
        })
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.tag() == upper)
            .ok_or_else(|| LoopError::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Verdict of an exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub holds: bool,
    /// First counterexample in scan order.
    pub witness: Option<Vec<usize>>,
    pub triples_checked: u64,
}

impl CheckResult {
    pub fn pass(checked: u64) -> Self {
        CheckResult {
            holds: true,
            witness: None,
            triples_checked: checked,
        }
    }

    pub fn fail(witness: Vec<usize>, checked: u64) -> Self {
        CheckResult {
            holds: false,
            witness: Some(witness),
            triples_checked: checked,
        }
    }

    pub fn witness_text(&self) -> String {
        match &self.witness {
            None => "-".into(),
            Some(w) => {
                let parts: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                format!("({})", parts.join(", "))
            }
        }
    }
}

/// Runs `pred` over all `arity`-tuples of `0..n`, last coordinate fastest.
pub fn scan_tuples(n: usize, arity: usize, mut pred: impl FnMut(&[usize]) -> bool) -> CheckResult {
    let mut tuple = vec![0usize; arity];
    let mut checked = 0u64;
    if n == 0 {
        return CheckResult::pass(0);
    }
    loop {
        checked += 1;
        if !pred(&tuple) {
            return CheckResult::fail(tuple, checked);
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return CheckResult::pass(checked);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}

pub fn check_identity(l: &LoopTable, id: IdentityId) -> CheckResult {
    scan_tuples(l.order(), id.arity(), |t| id.eval(l, t).unwrap_or(false))
}

/// Looks up a tag and checks it.
pub fn check_identity_tag(l: &LoopTable, tag: &str) -> Result<CheckResult> {
    Ok(check_identity(l, tag.parse()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OsbornMethod {
    Os2,
    Os3,
    Os2p,
    Os3p,
    /// `(L_{x^λ}, R_x^{-1}, L_x^{-1} R_x^{-1})` is an autotopism for every `x`.
    Autotopism,
}

impl OsbornMethod {
    pub const ALL: [OsbornMethod; 5] = [
        OsbornMethod::Os2,
        OsbornMethod::Os3,
        OsbornMethod::Os2p,
        OsbornMethod::Os3p,
        OsbornMethod::Autotopism,
    ];
}

pub fn is_osborn(l: &LoopTable, method: OsbornMethod) -> CheckResult {
    match method {
        OsbornMethod::Os2 => check_identity(l, Os2),
        OsbornMethod::Os3 => check_identity(l, Os3),
        OsbornMethod::Os2p => check_identity(l, Os2p),
        OsbornMethod::Os3p => check_identity(l, Os3p),
        OsbornMethod::Autotopism => {
            let mut checked = 0;
            for x in 0..l.order() {
                let (a, b, c) = mappings::osborn_autotopism_triple(l, x);
                let r = mappings::is_autotopism(l, &a, &b, &c).expect("degrees match");
                checked += r.triples_checked;
                if let Some(w) = r.witness {
                    return CheckResult::fail(vec![x, w[0], w[1]], checked);
                }
            }
            CheckResult::pass(checked)
        }
    }
}

/// Shorthand for the OS2 check.
pub fn osborn(l: &LoopTable) -> bool {
    check_identity(l, Os2).holds
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nuclei {
    pub left: BTreeSet<usize>,
    pub middle: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
    pub nucleus: BTreeSet<usize>,
}

pub fn nuclei(l: &LoopTable) -> Nuclei {
    let n = l.order();
    let all_pairs = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|x| (0..n).all(|y| f(x, y)));
    let left: BTreeSet<usize> = (0..n)
        .filter(|&a| all_pairs(&|x, y| l.mul(l.mul(a, x), y) == l.mul(a, l.mul(x, y))))
        .collect();
    let middle: BTreeSet<usize> = (0..n)
        .filter(|&a| all_pairs(&|x, y| l.mul(x, l.mul(a, y)) == l.mul(l.mul(x, a), y)))
        .collect();
    let right: BTreeSet<usize> = (0..n)
        .filter(|&a| all_pairs(&|x, y| l.mul(x, l.mul(y, a)) == l.mul(l.mul(x, y), a)))
        .collect();
    let nucleus = left
        .iter()
        .filter(|a| middle.contains(a) && right.contains(a))
        .copied()
        .collect();
    Nuclei {
        left,
        middle,
        right,
        nucleus,
    }
}

pub fn centrum(l: &LoopTable) -> BTreeSet<usize> {
    let n = l.order();
    (0..n)
        .filter(|&a| (0..n).all(|x| l.mul(a, x) == l.mul(x, a)))
        .collect()
}

pub fn center(l: &LoopTable) -> BTreeSet<usize> {
    let nucleus = nuclei(l).nucleus;
    centrum(l).intersection(&nucleus).copied().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSets {
    /// `{z | zx · y = z · xy}`
    pub left: BTreeSet<usize>,
    /// `{z | y · xz = yx · z}`
    pub right: BTreeSet<usize>,
    /// `{z | xz = zx}`
    pub commutant: BTreeSet<usize>,
}

pub fn local_sets(l: &LoopTable, x: usize, y: usize) -> LocalSets {
    let n = l.order();
    LocalSets {
        left: (0..n)
            .filter(|&z| l.mul(l.mul(z, x), y) == l.mul(z, l.mul(x, y)))
            .collect(),
        right: (0..n)
            .filter(|&z| l.mul(y, l.mul(x, z)) == l.mul(l.mul(y, x), z))
            .collect(),
        commutant: (0..n).filter(|&z| l.mul(x, z) == l.mul(z, x)).collect(),
    }
}

/// Every one-generated submagma is associative. The witness is
/// `[x, a, b, c]` with `a, b, c` in the submagma generated by `x`.
pub fn is_power_associative(l: &LoopTable) -> CheckResult {
    let mut checked = 0;
    for x in 0..l.order() {
        let sub: Vec<usize> = l.generated_submagma(x).into_iter().collect();
        for &a in &sub {
            for &b in &sub {
                for &c in &sub {
                    checked += 1;
                    if l.mul(l.mul(a, b), c) != l.mul(a, l.mul(b, c)) {
                        return CheckResult::fail(vec![x, a, b, c], checked);
                    }
                }
            }
        }
    }
    CheckResult::pass(checked)
}

pub fn is_exponent_two(l: &LoopTable) -> CheckResult {
    check_identity(l, Exp2)
}

/// WIP in every principal isotope. The witness is `[u, v, x, y, z]`, the
/// triple given in the isotope's canonical labels.
pub fn is_universal_wip(l: &LoopTable) -> CheckResult {
    let n = l.order();
    let mut checked = 0;
    for u in 0..n {
        for v in 0..n {
            let iso = l.principal_isotope(u, v);
            let r = check_identity(&iso, Wip);
            checked += r.triples_checked;
            if let Some(w) = r.witness {
                return CheckResult::fail(vec![u, v, w[0], w[1], w[2]], checked);
            }
        }
    }
    CheckResult::pass(checked)
}

/// A named group of checks run together.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Battery {
    pub checks: Vec<NamedCheck>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    #[serde(flatten)]
    pub result: CheckResult,
}

impl Battery {
    pub fn push(&mut self, name: impl Into<String>, result: CheckResult) {
        self.checks.push(NamedCheck {
            name: name.into(),
            result,
        });
    }

    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.result.holds)
    }

    pub fn first_failure(&self) -> Option<&NamedCheck> {
        self.checks.iter().find(|c| !c.result.holds)
    }

    /// Collapses the battery into one verdict; the witness is the first failure's.
    pub fn overall(&self) -> CheckResult {
        let checked = self.checks.iter().map(|c| c.result.triples_checked).sum();
        match self.first_failure() {
            None => CheckResult::pass(checked),
            Some(c) => CheckResult::fail(c.result.witness.clone().unwrap_or_default(), checked),
        }
    }

    pub fn describe_failure(&self) -> Option<String> {
        self.first_failure()
            .map(|c| format!("{} at {}", c.name, c.result.witness_text()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRecord {
    pub identity: IdentityId,
    #[serde(flatten)]
    pub result: CheckResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedFlags {
    pub is_osborn: bool,
    pub is_group: bool,
    pub is_moufang: bool,
    pub is_cc: bool,
    pub is_power_associative: bool,
    pub is_universal_wip: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub order: usize,
    pub digest: String,
    pub identities: Vec<IdentityRecord>,
    pub power_associative: CheckResult,
    pub universal_wip: CheckResult,
    pub flags: DerivedFlags,
}

impl PropertyReport {
    pub fn build(l: &LoopTable) -> Self {
        let identities: Vec<IdentityRecord> = IdentityId::ALL
            .into_iter()
            .map(|id| IdentityRecord {
                identity: id,
                result: check_identity(l, id),
            })
            .collect();
        let holds = |id: IdentityId| {
            identities
                .iter()
                .any(|r| r.identity == id && r.result.holds)
        };
        let power_associative = is_power_associative(l);
        let universal_wip = is_universal_wip(l);
        let flags = DerivedFlags {
            is_osborn: holds(Os2),
            is_group: holds(Assoc),
            is_moufang: holds(Moufang),
            is_cc: holds(CcLeft) && holds(CcRight),
            is_power_associative: power_associative.holds,
            is_universal_wip: universal_wip.holds,
        };
        PropertyReport {
            order: l.order(),
            digest: l.digest(),
            identities,
            power_associative,
            universal_wip,
            flags,
        }
    }

    pub fn get(&self, id: IdentityId) -> &CheckResult {
        &self
            .identities
            .iter()
            .find(|r| r.identity == id)
            .expect("every identity is reported")
            .result
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("order {}  digest {}\n", self.order, self.digest);
        let line = |name: &str, r: &CheckResult| {
            format!(
                "{:<10} {:<6} checked {:<8} witness {}\n",
                name,
                if r.holds { "holds" } else { "fails" },
                r.triples_checked,
                r.witness_text()
            )
        };
        for rec in &self.identities {
            out.push_str(&line(rec.identity.tag(), &rec.result));
        }
        out.push_str(&line("POWER_ASSOC", &self.power_associative));
        out.push_str(&line("UNIV_WIP", &self.universal_wip));
        let f = &self.flags;
        out.push_str(&format!(
            "is_osborn {}  is_group {}  is_moufang {}  is_cc {}  is_power_associative {}  is_universal_wip {}\n",
            f.is_osborn, f.is_group, f.is_moufang, f.is_cc, f.is_power_associative, f.is_universal_wip
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic, dihedral, elementary_abelian, klein};

    #[test]
    fn tags_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.tag().parse::<IdentityId>().unwrap(), id);
        }
        assert!(matches!(
            "BOGUS".parse::<IdentityId>(),
            Err(LoopError::UnknownIdentity(_))
        ));
    }

    #[test]
    fn scan_order_is_last_fastest() {
        let mut seen = Vec::new();
        scan_tuples(2, 2, |t| {
            seen.push(t.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn groups_satisfy_osborn_forms() {
        let z4 = cyclic(4);
        for m in OsbornMethod::ALL {
            assert!(is_osborn(&z4, m).holds, "{m:?}");
        }
        assert!(check_identity(&z4, Comm).holds);
    }

    #[test]
    fn s3_is_not_commutative() {
        let s3 = dihedral(3);
        let r = check_identity(&s3, Comm);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_ne!(s3.mul(w[0], w[1]), s3.mul(w[1], w[0]));
    }

    #[test]
    fn exponent_two() {
        assert!(is_exponent_two(&klein()).holds);
        assert!(is_exponent_two(&elementary_abelian(3)).holds);
        let r = is_exponent_two(&cyclic(3));
        assert_eq!(r.witness, Some(vec![1]));
    }

    #[test]
    fn group_nuclei_and_center() {
        let s3 = dihedral(3);
        let nu = nuclei(&s3);
        assert_eq!(nu.nucleus.len(), 6);
        assert_eq!(center(&s3), BTreeSet::from([0]));
        let z5 = cyclic(5);
        assert_eq!(center(&z5).len(), 5);
        assert_eq!(centrum(&z5).len(), 5);
    }

    #[test]
    fn local_sets_contain_identity() {
        let s3 = dihedral(3);
        for x in 0..6 {
            for y in 0..6 {
                let s = local_sets(&s3, x, y);
                assert_eq!(s.left.len(), 6);
                assert!(s.right.contains(&0) && s.commutant.contains(&0));
            }
        }
    }

    #[test]
    fn groups_are_power_associative_and_universally_wip() {
        for g in [cyclic(6), dihedral(3), klein()] {
            assert!(is_power_associative(&g).holds);
            assert!(is_universal_wip(&g).holds);
        }
    }
}
