//! Brute-force reference computations on raw row vectors, sharing no code
//! with the library.

#![allow(dead_code)]

pub type Rows = Vec<Vec<usize>>;

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Candidate rows for row `r` of a reduced square: permutations starting with `r`.
fn row_choices(n: usize) -> Vec<Vec<Vec<usize>>> {
    (0..n)
        .map(|r| {
            let rest: Vec<usize> = (0..n).filter(|&v| v != r).collect();
            permutations(&rest)
                .into_iter()
                .map(|mut p| {
                    p.insert(0, r);
                    p
                })
                .collect()
        })
        .collect()
}

fn columns_latin(rows: &Rows, n: usize) -> bool {
    (0..n).all(|c| {
        let mut seen = vec![false; n];
        rows.iter()
            .all(|row| !std::mem::replace(&mut seen[row[c]], true))
    })
}

/// Every combination of row permutations, checked only once complete.
pub fn full_grid_count(n: usize) -> u64 {
    let choices = row_choices(n);
    let mut idx = vec![0usize; n];
    let mut count = 0;
    loop {
        let rows: Rows = (0..n)
            .map(|r| {
                if r == 0 {
                    (0..n).collect()
                } else {
                    choices[r][idx[r]].clone()
                }
            })
            .collect();
        if columns_latin(&rows, n) {
            count += 1;
        }
        // odometer over rows 1..n
        let mut r = n;
        loop {
            if r <= 1 {
                return count;
            }
            r -= 1;
            idx[r] += 1;
            if idx[r] < choices[r].len() {
                break;
            }
            idx[r] = 0;
        }
    }
}

/// Row-at-a-time backtracking, listing squares in lexicographic order.
pub fn row_backtrack(n: usize) -> Vec<Rows> {
    fn go(n: usize, choices: &[Vec<Vec<usize>>], rows: &mut Rows, out: &mut Vec<Rows>) {
        let r = rows.len();
        if r == n {
            out.push(rows.clone());
            return;
        }
        for cand in &choices[r] {
            if rows
                .iter()
                .all(|row| row.iter().zip(cand).all(|(a, b)| a != b))
            {
                rows.push(cand.clone());
                go(n, choices, rows, out);
                rows.pop();
            }
        }
    }
    let choices = row_choices(n);
    let mut out = Vec::new();
    let mut rows = vec![(0..n).collect()];
    if n == 1 {
        return vec![rows];
    }
    go(n, &choices, &mut rows, &mut out);
    out
}

/// `x(yz · x) = (x^λ \ y) · zx`, evaluated straight from the rows.
pub fn osborn_by_rows(t: &Rows) -> bool {
    let n = t.len();
    let ldiv = |a: usize, c: usize| (0..n).find(|&b| t[a][b] == c).unwrap();
    let lam = |x: usize| (0..n).find(|&a| t[a][x] == 0).unwrap();
    (0..n)
        .all(|x| (0..n).all(|y| (0..n).all(|z| t[x][t[t[y][z]][x]] == t[ldiv(lam(x), y)][t[z][x]])))
}

pub fn lsip_by_rows(t: &Rows) -> bool {
    let n = t.len();
    let lam = |x: usize| (0..n).find(|&a| t[a][x] == 0).unwrap();
    (0..n).all(|x| t[lam(x)][t[x][x]] == x)
}
