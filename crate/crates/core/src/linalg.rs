//! Dense linear algebra over the residue field `k` and over its prime field.

#![allow(clippy::needless_range_loop)]

use crate::field::{FFElem, FieldCtx};

pub type KMatrix = Vec<Vec<FFElem>>;

pub fn kmat_identity(n: usize) -> KMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { FFElem::ONE } else { FFElem::ZERO })
                .collect()
        })
        .collect()
}

pub fn kmat_mul(ctx: &FieldCtx, a: &KMatrix, b: &KMatrix) -> KMatrix {
    let n = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(FFElem::ZERO, |acc, t| {
                        ctx.add(acc, ctx.mul(a[i][t], b[t][j]))
                    })
                })
                .collect()
        })
        .collect()
}

/// Applies `x ↦ σ^j(x)` entrywise.
pub fn kmat_twist(ctx: &FieldCtx, a: &KMatrix, j: i64) -> KMatrix {
    a.iter()
        .map(|r| r.iter().map(|&x| ctx.sigma_pow(x, j)).collect())
        .collect()
}

/// Characteristic polynomial `det(Z·I − A)`, coefficients from the constant
/// term up (monic). Reduces to upper Hessenberg form by similarity and then
/// runs the usual three-term recurrence.
pub fn char_poly(ctx: &FieldCtx, a: &KMatrix) -> Vec<FFElem> {
    let n = a.len();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let pinv = ctx.inv(h[j + 1][j]).expect("pivot is nonzero");
        for r in j + 2..n {
            let f = ctx.mul(h[r][j], pinv);
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let t = ctx.mul(f, h[j + 1][c]);
                h[r][c] = ctx.sub(h[r][c], t);
            }
            for row in h.iter_mut() {
                let t = ctx.mul(f, row[r]);
                row[j + 1] = ctx.add(row[j + 1], t);
            }
        }
    }
    // p[k] is the characteristic polynomial of the leading k×k block
    let mut p: Vec<Vec<FFElem>> = vec![vec![FFElem::ONE]];
    for m in 1..=n {
        // (Z − h[m-1][m-1])·p[m-1]
        let prev = &p[m - 1];
        let mut next = vec![FFElem::ZERO; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = ctx.add(next[i + 1], c);
            next[i] = ctx.sub(next[i], ctx.mul(h[m - 1][m - 1], c));
        }
        let mut prod = FFElem::ONE;
        for i in 1..m {
            prod = ctx.mul(prod, h[m - i][m - i - 1]);
            let f = ctx.mul(prod, h[m - i - 1][m - 1]);
            if f.is_zero() {
                continue;
            }
            for (t, &c) in p[m - i - 1].iter().enumerate() {
                next[t] = ctx.sub(next[t], ctx.mul(f, c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Rank over `k` of a list of vectors.
pub fn rank(ctx: &FieldCtx, vectors: &[Vec<FFElem>]) -> usize {
    let mut rows: Vec<Vec<FFElem>> = vectors.to_vec();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let pinv = ctx.inv(rows[r][c]).expect("pivot is nonzero");
        for i in r + 1..rows.len() {
            let f = ctx.mul(rows[i][c], pinv);
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let t = ctx.mul(f, rows[r][j]);
                rows[i][j] = ctx.sub(rows[i][j], t);
            }
        }
        r += 1;
    }
    r
}

fn inv_mod(x: u32, p: u32) -> u32 {
    // p is prime, so x^(p-2) is the inverse
    let (mut base, mut e, mut acc) = (x as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Basis of `{x : A·x = 0}` over `F_p`, `A` given by rows.
pub fn fp_nullspace(p: u32, a: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut rows: Vec<Vec<u32>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv as u64 % p as u64) as u32;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = rows[i][c];
            for j in 0..cols {
                let t = (f as u64 * rows[r][j] as u64 % p as u64) as u32;
                rows[i][j] = (rows[i][j] + p - t) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; cols];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[ri][fc]) % p;
            }
            v
        })
        .collect()
}
