#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use toricfan::Fan;

/// Rank over Q by fraction-free elimination with content removal.
pub fn rational_rank(rows: Vec<Vec<i128>>) -> usize {
    let mut rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let (a, b) = (rows[r][c].clone(), rows[i][c].clone());
            let pivot = rows[r].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot).skip(c) {
                *x = &*x * &a - y * &b;
            }
            let g = rows[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                rows[i].iter_mut().for_each(|x| *x /= &g);
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exponent vectors of degree `q` in `n` variables.
pub fn exponents(n: usize, q: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if q == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=q)
        .rev()
        .flat_map(|a| {
            exponents(n - 1, q - a).into_iter().map(move |mut e| {
                e.insert(0, a);
                e
            })
        })
        .collect()
}

fn monomial_at(e: &[u32], p: &[i128]) -> i128 {
    e.iter().zip(p).map(|(&k, &x)| x.pow(k)).product()
}

/// Rank of piecewise polynomials of degree `q` on a fan whose maximal cones
/// are full-dimensional, counted as unknowns minus independent agreement
/// constraints. Each piece is a polynomial in ambient coordinates; two
/// pieces must agree on the span of their common rays, tested at the
/// lattice points `Σ c_i b_i` with `|c| = q` over a basis `b` of that span.
pub fn hilbert_oracle(fan: &Fan, q: u32) -> usize {
    let n = fan.ambient_rank();
    let mons = exponents(n, q);
    let max = fan.maximal();
    let width = mons.len() * max.len();
    let mut rows = Vec::new();
    for a in 0..max.len() {
        for b in a + 1..max.len() {
            let ra = fan.cone(max[a]).rays();
            let common: Vec<Vec<i64>> = ra.iter().filter(|r| fan.cone(max[b]).rays().contains(r)).cloned().collect();
            let mut basis: Vec<Vec<i64>> = Vec::new();
            for r in common {
                let mut trial = basis.clone();
                trial.push(r);
                let as_rows = trial.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
                if rational_rank(as_rows) == trial.len() {
                    basis = trial;
                }
            }
            for c in exponents(basis.len(), q) {
                let point: Vec<i128> = (0..n)
                    .map(|i| basis.iter().zip(&c).map(|(v, &k)| v[i] as i128 * k as i128).sum())
                    .collect();
                let mut row = vec![0i128; width];
                for (k, e) in mons.iter().enumerate() {
                    let v = monomial_at(e, &point);
                    row[a * mons.len() + k] = v;
                    row[b * mons.len() + k] = -v;
                }
                rows.push(row);
            }
        }
    }
    width - rational_rank(rows)
}

/// Complete fans in rank 2 with random rays; every angular gap is below π.
pub fn complete_fan2() -> impl Strategy<Value = Fan> {
    prop::collection::btree_set((-4i64..=4, -4i64..=4), 3..8).prop_filter_map("rays must span positively", |pts| {
        let mut rays: Vec<[i64; 2]> = pts
            .into_iter()
            .filter(|&(x, y)| (x, y) != (0, 0) && gcd(x as i128, y as i128) == 1)
            .map(|(x, y)| [x, y])
            .collect();
        rays.sort_by(|a, b| (a[1] as f64).atan2(a[0] as f64).total_cmp(&(b[1] as f64).atan2(b[0] as f64)));
        rays.dedup();
        let k = rays.len();
        if k < 3 {
            return None;
        }
        for i in 0..k {
            let (a, b) = (rays[i], rays[(i + 1) % k]);
            if a[0] * b[1] - a[1] * b[0] <= 0 {
                return None;
            }
        }
        let cones: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
        Some(Fan::from_maximal(2, &rays, &cones).expect("angularly sorted cones form a fan"))
    })
}
