//! Backtracking enumeration of loops in canonical (reduced) form.
//!
//! Cells are filled row-major, skipping row 0 and column 0, with candidates
//! tried in ascending order, so the output order is lexicographic on the
//! table and independent of how the work is split. Parallel runs split on
//! the completions of row 1 and merge partitions in order.
//!
//! Prefilters prune partial tables that already violate a required
//! identity. They are sound (they never reject a branch containing a
//! match) and every completed table is post-filtered against the full
//! filter, so results equal those of plain post-filtering.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LoopError, Result};
use crate::exec::Exec;
use crate::perm::Permutation;
use crate::properties::{check_identity, IdentityId};
use crate::table::{LoopTable, Magma};

const EMPTY: u8 = u8::MAX;

/// A reduced Latin square under construction; row 0 and column 0 are fixed.
#[derive(Clone, Debug)]
pub struct PartialLoop {
    n: usize,
    cells: Vec<u8>,
    // ldiv[a n + c] = b when a b = c is placed
    ldiv: Vec<u8>,
    // rdiv[c n + b] = a when a b = c is placed
    rdiv: Vec<u8>,
}

impl PartialLoop {
    pub fn new(n: usize) -> Self {
        let mut p = PartialLoop {
            n,
            cells: vec![EMPTY; n * n],
            ldiv: vec![EMPTY; n * n],
            rdiv: vec![EMPTY; n * n],
        };
        for i in 0..n {
            p.place(0, i, i);
            if i > 0 {
                p.place(i, 0, i);
            }
        }
        p
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Option<usize> {
        let v = self.cells[r * self.n + c];
        (v != EMPTY).then_some(v as usize)
    }

    #[inline]
    fn can_place(&self, r: usize, c: usize, v: usize) -> bool {
        self.ldiv[r * self.n + v] == EMPTY && self.rdiv[v * self.n + c] == EMPTY
    }

    #[inline]
    fn place(&mut self, r: usize, c: usize, v: usize) {
        let n = self.n;
        self.cells[r * n + c] = v as u8;
        self.ldiv[r * n + v] = c as u8;
        self.rdiv[v * n + c] = r as u8;
    }

    #[inline]
    fn clear(&mut self, r: usize, c: usize) {
        let n = self.n;
        let v = self.cells[r * n + c] as usize;
        self.cells[r * n + c] = EMPTY;
        self.ldiv[r * n + v] = EMPTY;
        self.rdiv[v * n + c] = EMPTY;
    }

    fn to_loop(&self) -> LoopTable {
        let n = self.n;
        LoopTable::from_fn(n, |a, b| self.cells[a * n + b] as usize)
            .expect("completed reduced squares are loops")
    }
}

impl Magma for PartialLoop {
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> Option<usize> {
        self.get(a, b)
    }

    #[inline]
    fn ldiv(&self, a: usize, c: usize) -> Option<usize> {
        let v = self.ldiv[a * self.n + c];
        (v != EMPTY).then_some(v as usize)
    }

    #[inline]
    fn rdiv(&self, c: usize, b: usize) -> Option<usize> {
        let v = self.rdiv[c * self.n + b];
        (v != EMPTY).then_some(v as usize)
    }
}

/// A pruning rule over partial tables.
pub trait Prefilter: Sync {
    /// May `value` go into cell `(row, col)`?
    fn admits(&self, _p: &PartialLoop, _row: usize, _col: usize, _value: usize) -> bool {
        true
    }

    /// Called after a cell is placed; `false` prunes the branch.
    fn consistent(&self, _p: &PartialLoop, _row: usize, _col: usize) -> bool {
        true
    }
}

/// Prunes nothing.
pub struct NoopPrefilter;

impl Prefilter for NoopPrefilter {}

/// Commutativity: cell `(x, y)` must equal `(y, x)` once that is filled.
pub struct CommPrefilter;

impl Prefilter for CommPrefilter {
    fn admits(&self, p: &PartialLoop, row: usize, col: usize, value: usize) -> bool {
        p.get(col, row).is_none_or(|v| v == value)
    }
}

/// Exponent two: the diagonal is all `e`, and `e` appears nowhere else off row/column 0.
pub struct Exp2Prefilter;

impl Prefilter for Exp2Prefilter {
    fn admits(&self, _p: &PartialLoop, row: usize, col: usize, value: usize) -> bool {
        (row == col) == (value == 0)
    }
}

/// Rescans every tuple after each placement. Filters use a faster incremental
/// check for their clauses; this one serves as an extra rule or a reference.
pub struct IdentityPrefilter(pub IdentityId);

impl Prefilter for IdentityPrefilter {
    fn consistent(&self, p: &PartialLoop, _row: usize, _col: usize) -> bool {
        let id = self.0;
        let n = p.order();
        let mut t = [0usize; 3];
        match id.arity() {
            1 => (0..n).all(|x| id.eval(p, &[x]) != Some(false)),
            2 => (0..n).all(|x| {
                t[0] = x;
                (0..n).all(|y| id.eval(p, &[x, y]) != Some(false))
            }),
            _ => {
                for x in 0..n {
                    t[0] = x;
                    for y in 0..n {
                        t[1] = y;
                        for z in 0..n {
                            t[2] = z;
                            if id.eval(p, &t) == Some(false) {
                                return false;
                            }
                        }
                    }
                }
                true
            }
        }
    }
}

/// The pruning rule used for a required identity.
pub fn prefilter_for(id: IdentityId) -> Box<dyn Prefilter> {
    match id {
        IdentityId::Comm => Box::new(CommPrefilter),
        IdentityId::Exp2 => Box::new(Exp2Prefilter),
        other => Box::new(IdentityPrefilter(other)),
    }
}

/// One conjunct of a filter: an identity or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: IdentityId,
    pub negated: bool,
}

/// A conjunction of identities and negated identities, e.g. `OS2 & !LSIP`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub clauses: Vec<Clause>,
}

impl Filter {
    pub fn all() -> Self {
        Filter::default()
    }

    pub fn require(ids: &[IdentityId]) -> Self {
        Filter {
            clauses: ids
                .iter()
                .map(|&id| Clause { id, negated: false })
                .collect(),
        }
    }

    pub fn and_not(mut self, id: IdentityId) -> Self {
        self.clauses.push(Clause { id, negated: true });
        self
    }

    pub fn and(mut self, id: IdentityId) -> Self {
        self.clauses.push(Clause { id, negated: false });
        self
    }

    pub fn matches(&self, l: &LoopTable) -> bool {
        self.clauses
            .iter()
            .all(|c| check_identity(l, c.id).holds != c.negated)
    }

    /// Value-level pruning rules for positive clauses that have one.
    pub fn prefilters(&self) -> Vec<Box<dyn Prefilter>> {
        let mut seen = HashSet::new();
        self.clauses
            .iter()
            .filter(|c| !c.negated && seen.insert(c.id))
            .filter_map(|c| match c.id {
                IdentityId::Comm => Some(Box::new(CommPrefilter) as Box<dyn Prefilter>),
                IdentityId::Exp2 => Some(Box::new(Exp2Prefilter) as Box<dyn Prefilter>),
                _ => None,
            })
            .collect()
    }

    /// Positive clauses checked incrementally on partial tables.
    pub fn watched(&self) -> Vec<IdentityId> {
        let mut seen = HashSet::new();
        self.clauses
            .iter()
            .filter(|c| !c.negated && seen.insert(c.id))
            .filter(|c| !matches!(c.id, IdentityId::Comm | IdentityId::Exp2))
            .map(|c| c.id)
            .collect()
    }

    pub fn has_positive(&self) -> bool {
        self.clauses.iter().any(|c| !c.negated)
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("all");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("{}{}", if c.negated { "!" } else { "" }, c.id))
            .collect();
        f.write_str(&parts.join(" & "))
    }
}

impl FromStr for Filter {
    type Err = LoopError;

    /// Tags separated by `&`, `,` or whitespace; `!` negates. `all` or an
    /// empty string is the empty conjunction.
    fn from_str(s: &str) -> Result<Self> {
        let mut clauses = Vec::new();
        for tok in s.split(|ch: char| ch == '&' || ch == ',' || ch.is_whitespace()) {
            if tok.is_empty() || tok.eq_ignore_ascii_case("all") {
                continue;
            }
            if tok.contains('(') || tok.contains(')') || tok.contains('|') {
                return Err(LoopError::BadFilter(format!(
                    "`{tok}`: only conjunctions of TAG and !TAG are supported"
                )));
            }
            let (negated, tag) = match tok.strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, tok),
            };
            let id = tag
                .parse()
                .map_err(|_| LoopError::BadFilter(format!("unknown tag `{tag}`")))?;
            clauses.push(Clause { id, negated });
        }
        Ok(Filter { clauses })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Largest order enumerated without a pruning clause.
    pub unfiltered_bound: usize,
    /// Largest order enumerated at all.
    pub filtered_bound: usize,
    /// Apply prefilters (disable to compare against plain post-filtering).
    pub prefilter: bool,
    pub exec: Exec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            unfiltered_bound: 7,
            filtered_bound: 10,
            prefilter: true,
            exec: Exec::default(),
        }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig {
            exec: Exec::Sequential,
            ..Default::default()
        }
    }
}

/// Incremental checking of required identities on a partial table.
///
/// Every tuple not yet decided waits on the first fact its evaluation was
/// missing: a cell, "row `a` contains `c`" (for `a \ c`), or "column `b`
/// contains `c`" (for `c / b`). Placing a value supplies exactly three such
/// facts, so only the tuples waiting on them are re-evaluated. Changes are
/// logged and undone in stack order while backtracking.
struct Watches {
    n: usize,
    ids: Vec<IdentityId>,
    lists: Vec<Vec<u32>>,
    taken: Vec<(usize, Vec<u32>)>,
    pushed: Vec<usize>,
}

/// Records the first fact a partial evaluation needed but did not find.
struct Probe<'a> {
    p: &'a PartialLoop,
    miss: std::cell::Cell<usize>,
}

impl Probe<'_> {
    fn note(&self, event: usize) {
        if self.miss.get() == usize::MAX {
            self.miss.set(event);
        }
    }
}

impl Magma for Probe<'_> {
    fn order(&self) -> usize {
        self.p.n
    }

    fn mul(&self, a: usize, b: usize) -> Option<usize> {
        let r = self.p.get(a, b);
        if r.is_none() {
            self.note(a * self.p.n + b);
        }
        r
    }

    fn ldiv(&self, a: usize, c: usize) -> Option<usize> {
        let r = Magma::ldiv(self.p, a, c);
        if r.is_none() {
            self.note(self.p.n * self.p.n + a * self.p.n + c);
        }
        r
    }

    fn rdiv(&self, c: usize, b: usize) -> Option<usize> {
        let r = Magma::rdiv(self.p, c, b);
        if r.is_none() {
            self.note(2 * self.p.n * self.p.n + b * self.p.n + c);
        }
        r
    }
}

enum Eval {
    True,
    False,
    Waits(usize),
}

impl Watches {
    /// `None` when the partial table already violates an identity.
    fn new(ids: Vec<IdentityId>, p: &PartialLoop) -> Option<Self> {
        let n = p.n;
        let mut w = Watches {
            n,
            ids,
            lists: vec![Vec::new(); 3 * n * n],
            taken: Vec::new(),
            pushed: Vec::new(),
        };
        for (k, id) in w.ids.iter().enumerate() {
            let arity = id.arity();
            let count = n.pow(arity as u32);
            for i in 0..count {
                let (x, y, z) = match arity {
                    1 => (i, 0, 0),
                    2 => (i / n, i % n, 0),
                    _ => (i / (n * n), (i / n) % n, i % n),
                };
                let t = (k as u32) << 24 | (x as u32) << 16 | (y as u32) << 8 | z as u32;
                match w.eval(p, t) {
                    Eval::True => {}
                    Eval::False => return None,
                    Eval::Waits(e) => w.lists[e].push(t),
                }
            }
        }
        w.pushed.clear();
        Some(w)
    }

    fn eval(&self, p: &PartialLoop, t: u32) -> Eval {
        let id = self.ids[(t >> 24) as usize];
        let v = [
            (t >> 16 & 0xff) as usize,
            (t >> 8 & 0xff) as usize,
            (t & 0xff) as usize,
        ];
        let probe = Probe {
            p,
            miss: std::cell::Cell::new(usize::MAX),
        };
        match id.eval(&probe, &v) {
            Some(true) => Eval::True,
            Some(false) => Eval::False,
            None => Eval::Waits(probe.miss.get()),
        }
    }

    fn mark(&self) -> (usize, usize) {
        (self.taken.len(), self.pushed.len())
    }

    /// Re-evaluates the tuples released by placing `v` at `(r, c)`.
    fn place(&mut self, p: &PartialLoop, r: usize, c: usize, v: usize) -> bool {
        let n = self.n;
        for event in [r * n + c, n * n + r * n + v, 2 * n * n + c * n + v] {
            let list = std::mem::take(&mut self.lists[event]);
            let mut ok = true;
            for &t in &list {
                match self.eval(p, t) {
                    Eval::True => {}
                    Eval::False => {
                        ok = false;
                        break;
                    }
                    Eval::Waits(e) => {
                        self.lists[e].push(t);
                        self.pushed.push(e);
                    }
                }
            }
            self.taken.push((event, list));
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: (usize, usize)) {
        while self.pushed.len() > mark.1 {
            let e = self.pushed.pop().expect("non-empty");
            self.lists[e].pop();
        }
        while self.taken.len() > mark.0 {
            let (e, list) = self.taken.pop().expect("non-empty");
            self.lists[e] = list;
        }
    }
}

struct Engine<'a> {
    n: usize,
    cells: Vec<(usize, usize)>,
    prefilters: &'a [&'a dyn Prefilter],
    watched: Vec<IdentityId>,
    filter: &'a Filter,
}

impl Engine<'_> {
    fn dfs(
        &self,
        p: &mut PartialLoop,
        w: &mut Watches,
        k: usize,
        stop_at: usize,
        visit: &mut dyn FnMut(&PartialLoop) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == stop_at {
            return visit(p);
        }
        let (r, c) = self.cells[k];
        for v in 0..self.n {
            if !p.can_place(r, c, v) {
                continue;
            }
            if !self.prefilters.iter().all(|f| f.admits(p, r, c, v)) {
                continue;
            }
            p.place(r, c, v);
            let mark = w.mark();
            let ok = self.prefilters.iter().all(|f| f.consistent(p, r, c)) && w.place(p, r, c, v);
            let flow = if ok {
                self.dfs(p, w, k + 1, stop_at, visit)
            } else {
                ControlFlow::Continue(())
            };
            w.undo(mark);
            p.clear(r, c);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn split_point(&self) -> usize {
        self.n.saturating_sub(1).min(self.cells.len())
    }

    /// Row-1 completions, in search order.
    fn partitions(&self) -> Vec<PartialLoop> {
        let mut out = Vec::new();
        let mut p = PartialLoop::new(self.n);
        let Some(mut w) = Watches::new(self.watched.clone(), &p) else {
            return out;
        };
        let _ = self.dfs(&mut p, &mut w, 0, self.split_point(), &mut |q| {
            out.push(q.clone());
            ControlFlow::Continue(())
        });
        out
    }

    /// Completes one partition, stopping after `limit` matches.
    fn complete(&self, mut p: PartialLoop, limit: Option<usize>, visit: &mut dyn FnMut(LoopTable)) {
        let Some(mut w) = Watches::new(self.watched.clone(), &p) else {
            return;
        };
        let mut found = 0usize;
        let end = self.cells.len();
        let _ = self.dfs(&mut p, &mut w, self.split_point(), end, &mut |q| {
            let l = q.to_loop();
            if self.filter.matches(&l) {
                visit(l);
                found += 1;
                if limit.is_some_and(|k| found >= k) {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
    }
}

fn check_bounds(n: usize, filter: &Filter, cfg: &SearchConfig) -> Result<()> {
    if n == 0 {
        return Err(LoopError::BadDimensions {
            order: 0,
            detail: "order must be positive".into(),
        });
    }
    let pruned = cfg.prefilter && filter.has_positive();
    let max = if pruned {
        cfg.filtered_bound
    } else {
        cfg.unfiltered_bound
    };
    if n > max {
        return Err(LoopError::OrderTooLarge { order: n, max });
    }
    Ok(())
}

fn with_engine<R>(
    n: usize,
    filter: &Filter,
    extra: &[&dyn Prefilter],
    cfg: &SearchConfig,
    run: impl FnOnce(&Engine<'_>) -> R,
) -> Result<R> {
    check_bounds(n, filter, cfg)?;
    let (owned, watched) = if cfg.prefilter {
        (filter.prefilters(), filter.watched())
    } else {
        (Vec::new(), Vec::new())
    };
    let mut prefilters: Vec<&dyn Prefilter> = owned.iter().map(|b| b.as_ref()).collect();
    prefilters.extend_from_slice(extra);
    let engine = Engine {
        n,
        cells: (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect(),
        prefilters: &prefilters,
        watched,
        filter,
    };
    Ok(run(&engine))
}

/// Folds every matching loop of order `n` into one accumulator per
/// partition, then merges partitions in search order.
pub fn fold_loops<A, I, F, M>(
    n: usize,
    filter: &Filter,
    extra: &[&dyn Prefilter],
    cfg: &SearchConfig,
    init: I,
    fold: F,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, LoopTable) + Sync + Send,
    M: Fn(A, A) -> A,
{
    with_engine(n, filter, extra, cfg, |engine| {
        let parts = engine.partitions();
        let accs = cfg.exec.map(&parts, |p| {
            let mut acc = init();
            engine.complete(p.clone(), None, &mut |l| fold(&mut acc, l));
            acc
        });
        accs.into_iter().fold(init(), merge)
    })
}

/// Number of matching loops of order `n`.
pub fn count_loops(n: usize, filter: &Filter, cfg: &SearchConfig) -> Result<u64> {
    fold_loops(
        n,
        filter,
        &[],
        cfg,
        || 0u64,
        |acc, _| *acc += 1,
        |a, b| a + b,
    )
}

/// All matching loops of order `n` (the first `limit` if given), in search order.
pub fn enumerate_loops(
    n: usize,
    filter: &Filter,
    limit: Option<usize>,
    cfg: &SearchConfig,
) -> Result<Catalog> {
    enumerate_with(n, filter, &[], limit, cfg)
}

/// [`enumerate_loops`] with additional caller-supplied prefilters.
pub fn enumerate_with(
    n: usize,
    filter: &Filter,
    extra: &[&dyn Prefilter],
    limit: Option<usize>,
    cfg: &SearchConfig,
) -> Result<Catalog> {
    let loops = with_engine(n, filter, extra, cfg, |engine| {
        if limit.is_some() && !cfg.exec.is_parallel() {
            // stream partitions in order and stop as soon as enough are found
            let mut loops = Vec::new();
            for p in engine.partitions() {
                let want = limit.map(|k| k - loops.len());
                engine.complete(p, want, &mut |l| loops.push(l));
                if limit.is_some_and(|k| loops.len() >= k) {
                    break;
                }
            }
            loops
        } else {
            let parts = engine.partitions();
            let per_part = cfg.exec.map(&parts, |p| {
                let mut found = Vec::new();
                engine.complete(p.clone(), limit, &mut |l| found.push(l));
                found
            });
            let mut loops: Vec<LoopTable> = per_part.into_iter().flatten().collect();
            if let Some(k) = limit {
                loops.truncate(k);
            }
            loops
        }
    })?;
    Ok(Catalog::new(Some(n), filter.to_string(), loops))
}

/// First loop of order `1..=n_max`, in search order, satisfying `want`.
pub fn find_example(n_max: usize, want: &Filter, cfg: &SearchConfig) -> Result<Option<LoopTable>> {
    for n in 1..=n_max {
        let cat = enumerate_loops(n, want, Some(1), cfg)?;
        if let Some(l) = cat.loops.into_iter().next() {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Lexicographically least table among all relabelings fixing `e`.
pub fn canonical_min_image(l: &LoopTable) -> LoopTable {
    let n = l.order();
    let mut best = l.rows();
    let mut rest: Vec<usize> = (1..n).collect();
    permute_rest(&mut rest, 0, &mut |perm| {
        let mut images = vec![0usize; n];
        for (i, &v) in perm.iter().enumerate() {
            images[i + 1] = v;
        }
        let sigma = Permutation::from_images(&images).expect("bijection");
        let relabeled = l.quasigroup().relabel(&sigma).rows();
        if relabeled < best {
            best = relabeled;
        }
    });
    LoopTable::from_rows(&best).expect("relabeling of a loop")
}

fn permute_rest(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute_rest(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// Keeps the first member of each isomorphism class, in catalog order.
pub fn reduce_isomorphic(loops: &[LoopTable]) -> Vec<LoopTable> {
    let mut seen = HashSet::new();
    loops
        .iter()
        .filter(|l| seen.insert(canonical_min_image(l)))
        .cloned()
        .collect()
}

/// A deterministic list of canonical loops with a content digest.
#[derive(Clone, Debug)]
pub struct Catalog {
    /// `None` for catalogs mixing orders.
    pub order: Option<usize>,
    pub filter: String,
    pub loops: Vec<LoopTable>,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub order: Option<usize>,
    pub filter: String,
    pub count: usize,
    pub digest: String,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl Catalog {
    pub fn new(order: Option<usize>, filter: String, loops: Vec<LoopTable>) -> Self {
        let digest = catalog_digest(&loops);
        Catalog {
            order,
            filter,
            loops,
            digest,
        }
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            order: self.order,
            filter: self.filter.clone(),
            count: self.loops.len(),
            digest: self.digest.clone(),
        }
    }

    /// Writes `loop_NNNNNN.tbl` files and `manifest.json` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (i, l) in self.loops.iter().enumerate() {
            std::fs::write(dir.join(format!("loop_{i:06}.tbl")), l.to_text())?;
        }
        let manifest = serde_json::to_string_pretty(&self.manifest())?;
        std::fs::write(dir.join(MANIFEST_FILE), manifest + "\n")?;
        Ok(())
    }

    /// Reads a saved catalog and checks it against its manifest.
    pub fn load(dir: &Path) -> Result<Self> {
        let manifest_path = dir.join(MANIFEST_FILE);
        let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(&manifest_path)?)?;
        let mut files: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "tbl"))
            .collect();
        files.sort();
        let loops = files
            .iter()
            .map(|p| LoopTable::read(p))
            .collect::<Result<Vec<_>>>()?;
        let cat = Catalog::new(manifest.order, manifest.filter.clone(), loops);
        let bad = |msg: String| LoopError::Parse {
            path: manifest_path.display().to_string(),
            line: 1,
            msg,
        };
        if cat.len() != manifest.count {
            return Err(bad(format!(
                "manifest lists {} tables, found {}",
                manifest.count,
                cat.len()
            )));
        }
        if cat.digest != manifest.digest {
            return Err(bad(format!(
                "digest mismatch: manifest {}, tables {}",
                manifest.digest, cat.digest
            )));
        }
        Ok(cat)
    }
}

/// SHA-256 over the concatenated table texts, in catalog order.
pub fn catalog_digest(loops: &[LoopTable]) -> String {
    let mut h = Sha256::new();
    for l in loops {
        h.update(l.to_text().as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
