//! Constructors for standard loops used as positive controls and witnesses.

use crate::table::LoopTable;

pub fn cyclic(n: usize) -> LoopTable {
    LoopTable::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
}

pub fn klein() -> LoopTable {
    elementary_abelian(2)
}

/// `(Z_2)^k` with XOR as the operation.
pub fn elementary_abelian(k: u32) -> LoopTable {
    LoopTable::from_fn(1 << k, |a, b| a ^ b).expect("elementary abelian group")
}

/// Dihedral group of order `2m`; `r^i s^a` has index `i + m a`.
pub fn dihedral(m: usize) -> LoopTable {
    LoopTable::from_fn(2 * m, |x, y| {
        let (i, a) = (x % m, x / m);
        let (k, b) = (y % m, y / m);
        let rot = if a == 0 { (i + k) % m } else { (i + m - k) % m };
        rot + m * ((a + b) % 2)
    })
    .expect("dihedral group")
}

/// Quaternion group: index `u + 4 s` stands for `(-1)^s u` with `u` in `1, i, j, k`.
pub fn quaternion() -> LoopTable {
    // unit products as (sign, unit)
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    LoopTable::from_fn(8, |x, y| {
        let (u, s) = (x % 4, x / 4);
        let (v, t) = (y % 4, y / 4);
        let (sign, w) = UNITS[u][v];
        w + 4 * ((s + t + sign) % 2)
    })
    .expect("quaternion group")
}

/// `a x b` with index `i + |a| j`.
pub fn direct_product(a: &LoopTable, b: &LoopTable) -> LoopTable {
    let n = a.order();
    LoopTable::from_fn(n * b.order(), |x, y| {
        a.mul(x % n, y % n) + n * b.mul(x / n, y / n)
    })
    .expect("direct product")
}

/// Chein's doubling `M(G, 2)`: elements `g` and `g u`, with
/// `g h = gh`, `g (hu) = (hg) u`, `(gu) h = (g h^-1) u`, `(gu)(hu) = h^-1 g`.
/// For a nonabelian group `G` the result is a nonassociative Moufang loop.
pub fn chein_double(g: &LoopTable) -> LoopTable {
    let n = g.order();
    let inv = |x: usize| g.rho_inv(x);
    LoopTable::from_fn(2 * n, |x, y| match (x < n, y < n) {
        (true, true) => g.mul(x, y),
        (true, false) => n + g.mul(y - n, x),
        (false, true) => n + g.mul(x - n, inv(y)),
        (false, false) => g.mul(inv(y - n), x - n),
    })
    .expect("Chein double")
}

/// The smallest nonassociative Moufang loop, `M(S_3, 2)`, of order 12.
pub fn moufang_12() -> LoopTable {
    chein_double(&dihedral(3))
}

/// Named group tables of order at most 16.
pub fn bundled_groups() -> Vec<(String, LoopTable)> {
    let mut out: Vec<(String, LoopTable)> =
        (1..=16).map(|n| (format!("Z{n}"), cyclic(n))).collect();
    out.push(("Klein".into(), klein()));
    out.push(("D6".into(), dihedral(3)));
    out.push(("D8".into(), dihedral(4)));
    out.push(("Q8".into(), quaternion()));
    out.push(("Z2^3".into(), elementary_abelian(3)));
    out.push(("Z4xZ2".into(), direct_product(&cyclic(4), &cyclic(2))));
    out.push(("Z2^4".into(), elementary_abelian(4)));
    out.push(("D12".into(), dihedral(6)));
    out.push(("D16".into(), dihedral(8)));
    out
}
