//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Smith normal form
//! is the workhorse: ranks, kernels, cokernels, integer solvability and
//! torsion coefficients of every chain complex in the crate go through it.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_big_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<R: AsRef<[i64]>>(rows: usize, columns: &[R]) -> Self {
        Self::from_rows(rows, columns).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend(self.row(i).iter().cloned());
        }
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Converts to machine integers, failing if an entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| to_i64_vec(self.row(i)))
            .collect()
    }

    pub fn to_i64_columns(&self) -> Result<Vec<Vec<i64>>> {
        self.transpose().to_i64_rows()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += k * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        let src: Vec<BigInt> = self.row(source).to_vec();
        let cols = self.cols;
        for (j, s) in src.iter().enumerate() {
            if !s.is_zero() {
                self.data[target * cols + j] += k * s;
            }
        }
    }

    /// col[target] += k * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source].clone();
            if !s.is_zero() {
                self.data[i * self.cols + target] += k * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        let cols = self.cols;
        for x in &mut self.data[i * cols..(i + 1) * cols] {
            *x = -std::mem::take(x);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn to_big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
}

/// Divides a vector by the gcd of its entries. The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

pub fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Smith normal form `left * A * right = diag(diagonal)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors `d_1 | d_2 | ...`, non-negative, zeros trailing.
    /// Has length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub left_transform: IntMatrix,
    pub right_transform: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `left * A * right` should equal.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left_transform.rows(), self.right_transform.rows());
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

/// Smith normal form with unimodular witnesses.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut left = IntMatrix::identity(a.rows());
    let mut right = IntMatrix::identity(a.cols());
    let diagonal = snf_core(a.clone(), Some((&mut left, &mut right)));
    SnfResult {
        diagonal,
        left_transform: left,
        right_transform: right,
    }
}

/// Invariant factors only; skips the transform bookkeeping.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    snf_core(a.clone(), None)
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_diagonal(a).iter().filter(|d| !d.is_zero()).count()
}

fn snf_core(mut a: IntMatrix, mut transforms: Option<(&mut IntMatrix, &mut IntMatrix)>) -> Vec<BigInt> {
    let m = a.rows();
    let n = a.cols();
    let steps = m.min(n);
    let mut diagonal = Vec::with_capacity(steps);

    for t in 0..steps {
        loop {
            // Minimal |entry| pivot, ties to lowest row then lowest column.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => x.magnitude() < a[(bi, bj)].magnitude(),
                    };
                    if better {
                        best = Some((i, j));
                        if x.magnitude().is_one() {
                            break;
                        }
                    }
                }
                if let Some((bi, bj)) = best {
                    if a[(bi, bj)].magnitude().is_one() {
                        break;
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Remaining block is zero.
                diagonal.resize(steps, BigInt::zero());
                return diagonal;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some((l, r)) = transforms.as_mut() {
                l.swap_rows(t, pi);
                r.swap_cols(t, pj);
            }

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &pivot);
                a.add_row_multiple(i, t, &q);
                if let Some((l, _)) = transforms.as_mut() {
                    l.add_row_multiple(i, t, &q);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &pivot);
                a.add_col_multiple(j, t, &q);
                if let Some((_, r)) = transforms.as_mut() {
                    r.add_col_multiple(j, t, &q);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Enforce the divisibility chain.
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let one = BigInt::one();
                a.add_row_multiple(t, i, &one);
                if let Some((l, _)) = transforms.as_mut() {
                    l.add_row_multiple(t, i, &one);
                }
                continue;
            }
            break;
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some((l, _)) = transforms.as_mut() {
                l.negate_row(t);
            }
        }
        diagonal.push(a[(t, t)].clone());
    }
    diagonal
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `a`.
///
/// The result has full row rank, positive pivots, strictly increasing pivot
/// columns, and entries above each pivot reduced into `[0, pivot)`. Two
/// matrices span the same row lattice iff their Hermite forms are equal.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let m = h.rows();
    let n = h.cols();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| h[(i, c)].magnitude() < h[(b, c)].magnitude()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            let pivot = h[(r, c)].clone();
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &pivot);
                h.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    h.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Z-basis of `{x : A x = 0}`, returned as the columns of a matrix.
///
/// The basis is put in Hermite form (as rows), so it is canonical: equal
/// kernels give equal outputs.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let free: Vec<usize> = (r..a.cols()).collect();
    let basis = snf.right_transform.select_columns(&free);
    hermite_rows(&basis.transpose()).transpose()
}

/// Free rank and torsion coefficients of `coker(A) = Z^rows / A Z^cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn cokernel_invariants(a: &IntMatrix) -> CokernelInvariants {
    let diag = smith_diagonal(a);
    let r = diag.iter().filter(|d| !d.is_zero()).count();
    CokernelInvariants {
        free_rank: a.rows() - r,
        torsion: diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
    }
}

/// Some integer solution of `A x = b`, or `None` if there is none over Z.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side length mismatch");
    let snf = smith_normal_form(a);
    let lb = snf.left_transform.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in lb.iter().enumerate() {
        match snf.diagonal.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, rem) = c.div_rem(d);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            _ => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.right_transform.mul_vec(&y))
}

/// True iff the columns of `basis` span a saturated sublattice (direct summand).
pub fn is_saturated(basis: &IntMatrix) -> bool {
    smith_diagonal(basis).iter().all(One::is_one)
}

/// True iff the column spans of `a` and `b` are equal as lattices.
pub fn same_column_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && hermite_rows(&a.transpose()) == hermite_rows(&b.transpose())
}

/// Rank of `A` reduced modulo the prime `p` (p < 2^32).
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    assert!((2..1u64 << 32).contains(&p), "modulus out of range");
    let pb = BigInt::from(p);
    let m = a.rows();
    let n = a.cols();
    let mut w: Vec<u64> = a
        .data
        .iter()
        .map(|x| x.mod_floor(&pb).to_u64().expect("reduced entry fits"))
        .collect();
    let mut rank = 0;
    for c in 0..n {
        if rank == m {
            break;
        }
        let Some(piv) = (rank..m).find(|&i| w[i * n + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..n {
                w.swap(piv * n + j, rank * n + j);
            }
        }
        let inv = mod_inverse(w[rank * n + c], p);
        for j in c..n {
            w[rank * n + j] = mul_mod(w[rank * n + j], inv, p);
        }
        for i in rank + 1..m {
            let f = w[i * n + c];
            if f == 0 {
                continue;
            }
            for j in c..n {
                let sub = mul_mod(f, w[rank * n + j], p);
                w[i * n + j] = (w[i * n + j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// Serde helpers writing integers as JSON numbers when they fit in 64 bits
/// and as decimal strings otherwise.
pub mod json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Serialize, Serializer};

    use super::IntMatrix;

    pub struct Big<'a>(pub &'a BigInt);

    impl Serialize for Big<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self.0.to_i64() {
                Some(x) => s.serialize_i64(x),
                None => s.serialize_str(&self.0.to_string()),
            }
        }
    }

    pub fn vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Big))
    }

    pub fn nested<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_seq(self.0.iter().map(Big))
            }
        }
        s.collect_seq(v.iter().map(|r| Row(r)))
    }

    /// Matrix as a list of rows.
    pub fn matrix<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        nested(&m.row_vecs(), s)
    }

    pub fn option_matrix<S: Serializer>(m: &Option<IntMatrix>, s: S) -> Result<S::Ok, S::Error> {
        match m {
            Some(m) => matrix(m, s),
            None => s.serialize_none(),
        }
    }
}
