//! Cayley tables of finite quasigroups and loops.
//!
//! Elements are indices `0..n`. A [`LoopTable`] is always canonical: its
//! identity is `0`, so row 0 and column 0 are the identity map. Both
//! divisions are precomputed, so every operation here is a table lookup.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Axis, LoopError, Result};
use crate::perm::Permutation;

/// Largest supported order; elements are stored as bytes.
pub const MAX_ORDER: usize = 256;

/// Read access to a (possibly partial) loop whose identity is `0`.
///
/// Every method returns `None` when the answer depends on an unfilled cell.
/// Complete tables always answer `Some`.
pub trait Magma {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> Option<usize>;
    /// The `b` with `a * b = c`.
    fn ldiv(&self, a: usize, c: usize) -> Option<usize>;
    /// The `a` with `a * b = c`.
    fn rdiv(&self, c: usize, b: usize) -> Option<usize>;

    /// Left inverse `x^λ`, with `x^λ x = e`.
    fn lam(&self, x: usize) -> Option<usize> {
        self.rdiv(0, x)
    }

    /// Right inverse `x^ρ`, with `x x^ρ = e`.
    fn rho(&self, x: usize) -> Option<usize> {
        self.ldiv(x, 0)
    }
}

/// A Latin square read as a multiplication table, with both division tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasigroupTable {
    n: usize,
    mul: Vec<u8>,
    ldiv: Vec<u8>,
    rdiv: Vec<u8>,
}

/// Validates an `n x n` grid as a Latin square.
pub fn make_table(n: usize, rows: &[Vec<usize>]) -> Result<QuasigroupTable> {
    if n == 0 {
        return Err(LoopError::BadDimensions {
            order: n,
            detail: "order must be positive".into(),
        });
    }
    if n > MAX_ORDER {
        return Err(LoopError::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    if rows.len() != n {
        return Err(LoopError::BadDimensions {
            order: n,
            detail: format!("{} rows", rows.len()),
        });
    }
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(LoopError::BadDimensions {
            order: n,
            detail: format!("row {r} has {} entries", row.len()),
        });
    }
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(LoopError::EntryOutOfRange {
                    row: r,
                    col: c,
                    value: v,
                    order: n,
                });
            }
        }
    }
    let mut ldiv = vec![u8::MAX; n * n];
    let mut rdiv = vec![u8::MAX; n * n];
    for (a, row) in rows.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if ldiv[a * n + c] != u8::MAX {
                return Err(LoopError::NotLatinSquare {
                    axis: Axis::Row,
                    index: a,
                    value: c,
                });
            }
            ldiv[a * n + c] = b as u8;
        }
    }
    for b in 0..n {
        for (a, row) in rows.iter().enumerate() {
            let c = row[b];
            if rdiv[c * n + b] != u8::MAX {
                return Err(LoopError::NotLatinSquare {
                    axis: Axis::Column,
                    index: b,
                    value: c,
                });
            }
            rdiv[c * n + b] = a as u8;
        }
    }
    let mul = rows.iter().flatten().map(|&v| v as u8).collect();
    Ok(QuasigroupTable { n, mul, ldiv, rdiv })
}

impl QuasigroupTable {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn ldiv(&self, a: usize, c: usize) -> usize {
        self.ldiv[a * self.n + c] as usize
    }

    #[inline]
    pub fn rdiv(&self, c: usize, b: usize) -> usize {
        self.rdiv[c * self.n + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul
            .chunks(self.n)
            .map(|row| row.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Elements `e` with `e x = x e = x` for all `x`.
    pub fn identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// The isomorphic copy under the relabeling `x -> sigma(x)`.
    pub fn relabel(&self, sigma: &Permutation) -> QuasigroupTable {
        let n = self.n;
        let inv = sigma.inverse();
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| sigma.apply(self.mul(inv.apply(a), inv.apply(b))))
                    .collect()
            })
            .collect();
        make_table(n, &rows).expect("relabeling preserves Latin squares")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.mul.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses the table text format: the order on the first line, then one row
/// per line as whitespace-separated indices. Blank lines and `#` comments
/// are ignored.
pub fn parse_table(text: &str, path: &str) -> Result<QuasigroupTable> {
    let parse_err = |line: usize, msg: String| LoopError::Parse {
        path: path.to_string(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty table file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(first, format!("expected the order, found `{header}`")))?;
    if n == 0 || n > MAX_ORDER {
        return Err(parse_err(
            first,
            format!("order {n} outside 1..={MAX_ORDER}"),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    let mut line_of_row = Vec::with_capacity(n);
    for (lineno, line) in lines {
        if rows.len() == n {
            return Err(parse_err(lineno, format!("more than {n} rows")));
        }
        let mut row = Vec::with_capacity(n);
        for (col, tok) in line.split_whitespace().enumerate() {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("column {col}: `{tok}` is not an index")))?;
            if v >= n {
                return Err(parse_err(
                    lineno,
                    format!("column {col}: {v} is outside [0, {n})"),
                ));
            }
            row.push(v);
        }
        if row.len() != n {
            return Err(parse_err(
                lineno,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
        line_of_row.push(lineno);
    }
    if rows.len() != n {
        return Err(parse_err(
            line_of_row.last().copied().unwrap_or(first),
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    make_table(n, &rows).map_err(|e| match e {
        LoopError::NotLatinSquare {
            axis: Axis::Row,
            index,
            value,
        } => {
            let col = rows[index].iter().rposition(|&v| v == value).unwrap_or(0);
            parse_err(
                line_of_row[index],
                format!("row {index} repeats {value} (column {col})"),
            )
        }
        LoopError::NotLatinSquare {
            axis: Axis::Column,
            index,
            value,
        } => {
            let row = rows.iter().rposition(|r| r[index] == value).unwrap_or(0);
            parse_err(line_of_row[row], format!("column {index} repeats {value}"))
        }
        other => other,
    })
}

/// Left or right inverse map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lambda,
    Rho,
}

/// A loop in canonical form (identity `0`).
#[derive(Clone, Debug)]
pub struct LoopTable {
    q: QuasigroupTable,
    lam: Vec<u8>,
    rho: Vec<u8>,
    relabeling: Permutation,
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for LoopTable {}

impl std::hash::Hash for LoopTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state)
    }
}

/// Detects the identity and relabels it to `0` by swapping it with `0`.
pub fn as_loop(q: QuasigroupTable) -> Result<LoopTable> {
    let e = q.identity().ok_or(LoopError::NoIdentity)?;
    let n = q.order();
    let sigma = Permutation::from_fn(n, |x| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    });
    let q = if e == 0 { q } else { q.relabel(&sigma) };
    let lam = (0..n).map(|x| q.rdiv(0, x) as u8).collect();
    let rho = (0..n).map(|x| q.ldiv(x, 0) as u8).collect();
    Ok(LoopTable {
        q,
        lam,
        rho,
        relabeling: sigma,
    })
}

impl LoopTable {
    /// Validates rows and normalizes to canonical form.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        as_loop(make_table(rows.len(), rows)?)
    }

    /// Tabulates `f` on `0..n`; the result is validated.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        LoopTable::from_rows(&rows)
    }

    pub fn parse(text: &str, path: &str) -> Result<Self> {
        as_loop(parse_table(text, path)?)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        LoopTable::parse(&text, &path.display().to_string())
    }

    pub fn order(&self) -> usize {
        self.q.order()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn quasigroup(&self) -> &QuasigroupTable {
        &self.q
    }

    /// Maps input labels to canonical labels.
    pub fn relabeling(&self) -> &Permutation {
        &self.relabeling
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.q.rows()
    }

    pub fn to_text(&self) -> String {
        self.q.to_text()
    }

    /// Short content hash of the table.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_text().as_bytes());
        let mut out = String::with_capacity(16);
        for b in &hash[..8] {
            let _ = write!(out, "{b:02x}");
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.q.mul(a, b)
    }

    #[inline]
    pub fn ldiv(&self, a: usize, c: usize) -> usize {
        self.q.ldiv(a, c)
    }

    #[inline]
    pub fn rdiv(&self, c: usize, b: usize) -> usize {
        self.q.rdiv(c, b)
    }

    #[inline]
    pub fn lambda_inv(&self, x: usize) -> usize {
        self.lam[x] as usize
    }

    #[inline]
    pub fn rho_inv(&self, x: usize) -> usize {
        self.rho[x] as usize
    }

    /// `L_x : y -> x y`.
    pub fn left_translation(&self, x: usize) -> Permutation {
        Permutation::from_fn(self.order(), |y| self.mul(x, y))
    }

    /// `R_x : y -> y x`.
    pub fn right_translation(&self, x: usize) -> Permutation {
        Permutation::from_fn(self.order(), |y| self.mul(y, x))
    }

    pub fn j_map(&self, side: Side) -> Permutation {
        match side {
            Side::Lambda => Permutation::from_fn(self.order(), |x| self.lambda_inv(x)),
            Side::Rho => Permutation::from_fn(self.order(), |x| self.rho_inv(x)),
        }
    }

    /// `E_x = R_x R_{x^ρ}`.
    pub fn e_map(&self, x: usize) -> Permutation {
        self.right_translation(x)
            .then(&self.right_translation(self.rho_inv(x)))
    }

    /// `θ_x = L_x L_{x^λ}`.
    pub fn theta_map(&self, x: usize) -> Permutation {
        self.left_translation(x)
            .then(&self.left_translation(self.lambda_inv(x)))
    }

    /// The loop `x ∘ y = (x/v)(u\y)`, whose identity is `u v`, in canonical form.
    pub fn principal_isotope(&self, u: usize, v: usize) -> LoopTable {
        let n = self.order();
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let xv = self.rdiv(x, v);
                (0..n).map(|y| self.mul(xv, self.ldiv(u, y))).collect()
            })
            .collect();
        let q = make_table(n, &rows).expect("isotopes are quasigroups");
        as_loop(q).expect("principal isotopes have identity u v")
    }

    /// Smallest subset containing `x` and closed under multiplication.
    pub fn generated_submagma(&self, x: usize) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([x]);
        let mut members = vec![x];
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for j in 0..=i {
                let b = members[j];
                for c in [self.mul(a, b), self.mul(b, a)] {
                    if set.insert(c) {
                        members.push(c);
                    }
                }
            }
            i += 1;
        }
        set
    }
}

impl Magma for LoopTable {
    #[inline]
    fn order(&self) -> usize {
        self.q.n
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.q.mul(a, b))
    }

    #[inline]
    fn ldiv(&self, a: usize, c: usize) -> Option<usize> {
        Some(self.q.ldiv(a, c))
    }

    #[inline]
    fn rdiv(&self, c: usize, b: usize) -> Option<usize> {
        Some(self.q.rdiv(c, b))
    }

    #[inline]
    fn lam(&self, x: usize) -> Option<usize> {
        Some(self.lam[x] as usize)
    }

    #[inline]
    fn rho(&self, x: usize) -> Option<usize> {
        Some(self.rho[x] as usize)
    }
}
