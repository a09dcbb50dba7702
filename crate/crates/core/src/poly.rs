//! Homogeneous integral polynomials on the sublattices `N_σ`.
//!
//! A polynomial on `N_σ` is written in the coordinates of the cone's span
//! basis, so integrality with respect to the lattice holds by construction.
//! Only one homogeneous degree is ever materialized at a time.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::cone::{Cone, LatticeVector};
use crate::error::{Error, Result};
use crate::linalg::{to_big_vec, IntMatrix};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// Degree-`q` homogeneous polynomials on a lattice with a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolySpace {
    ambient_rank: usize,
    lattice_basis: Vec<LatticeVector>,
    degree: u32,
    monomials: Vec<Exponent>,
    lookup: HashMap<Exponent, usize>,
}

impl GradedPolySpace {
    pub fn new(cone: &Cone, degree: u32) -> Self {
        Self::with_basis(cone.ambient_rank(), cone.span_basis().to_vec(), degree)
    }

    /// Polynomials on all of `N` in standard coordinates, i.e. `Sym^q(M)`.
    pub fn ambient(ambient_rank: usize, degree: u32) -> Self {
        let basis = (0..ambient_rank)
            .map(|i| (0..ambient_rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::with_basis(ambient_rank, basis, degree)
    }

    pub fn with_basis(ambient_rank: usize, lattice_basis: Vec<LatticeVector>, degree: u32) -> Self {
        let monomials = monomials(lattice_basis.len(), degree);
        let lookup = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        GradedPolySpace {
            ambient_rank,
            lattice_basis,
            degree,
            monomials,
            lookup,
        }
    }

    pub fn lattice_basis(&self) -> &[LatticeVector] {
        &self.lattice_basis
    }

    pub fn variables(&self) -> usize {
        self.lattice_basis.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Grading in equivariant cohomology: twice the polynomial degree.
    pub fn cohomological_degree(&self) -> u32 {
        2 * self.degree
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.lookup.get(e).copied()
    }

    fn same_lattice(&self, other: &GradedPolySpace) -> bool {
        self.ambient_rank == other.ambient_rank && self.lattice_basis == other.lattice_basis
    }
}

/// Exponent vectors of total degree `q` in `vars` variables, in descending
/// lexicographic order (`x^2, xy, y^2`).
pub fn monomials(vars: usize, q: u32) -> Vec<Exponent> {
    fn rec(vars: usize, q: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if vars == 0 {
            if q == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if vars == 1 {
            prefix.push(q);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=q).rev() {
            prefix.push(e);
            rec(vars - 1, q - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, q, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// `C(q + vars - 1, vars - 1)`, with the conventions for `vars = 0`.
pub fn monomial_count(vars: usize, q: u32) -> usize {
    if vars == 0 {
        return usize::from(q == 0);
    }
    let (n, k) = (q as u128 + vars as u128 - 1, vars as u128 - 1);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as usize
}

type Sparse = HashMap<Exponent, BigInt>;

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out: Sparse = HashMap::with_capacity(a.len() * b.len());
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Matrix of the substitution `x_i = Σ_j subst[i][j] t_j` from degree-`q`
/// polynomials in `x` to degree-`q` polynomials in `t`.
fn substitution_matrix(source: &GradedPolySpace, target: &GradedPolySpace, subst: &[Vec<BigInt>]) -> IntMatrix {
    let tvars = target.variables();
    let linear: Vec<Sparse> = subst
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| {
                    let mut e = vec![0u32; tvars];
                    e[j] = 1;
                    (e, c.clone())
                })
                .collect()
        })
        .collect();
    let unit: Sparse = HashMap::from([(vec![0u32; tvars], BigInt::one())]);

    let mut m = IntMatrix::zeros(target.len(), source.len());
    let mut power_cache: HashMap<(usize, u32), Sparse> = HashMap::new();
    for (col, e) in source.monomials().iter().enumerate() {
        let mut acc = unit.clone();
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let p = power_cache
                .entry((i, k))
                .or_insert_with(|| (0..k).fold(unit.clone(), |a, _| sparse_mul(&a, &linear[i])))
                .clone();
            acc = sparse_mul(&acc, &p);
            if acc.is_empty() {
                break;
            }
        }
        for (exp, c) in acc {
            let row = target.index_of(&exp).expect("substitution preserves degree");
            m[(row, col)] = c;
        }
    }
    m
}

/// Restriction `Z[σ]_q → Z[τ]_q` for a face `τ ≤ σ`.
///
/// Columns index σ-monomials and rows τ-monomials: evaluating `f` at a point
/// of `N_τ` equals evaluating `M f` at the same point in τ-coordinates.
pub fn restriction_matrix(sigma: &Cone, tau: &Cone, q: u32) -> Result<IntMatrix> {
    if !sigma.has_face(tau) {
        return Err(Error::NotAFace {
            sigma: sigma.to_string(),
            tau: tau.to_string(),
        });
    }
    let source = GradedPolySpace::new(sigma, q);
    let target = GradedPolySpace::new(tau, q);
    // subst[i][j] = i-th σ-coordinate of the j-th τ basis vector
    let coords: Vec<Vec<BigInt>> = tau
        .span_basis()
        .iter()
        .map(|b| sigma.coordinates(b).expect("face lies in the span"))
        .collect();
    let subst: Vec<Vec<BigInt>> = (0..sigma.dim())
        .map(|i| coords.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(substitution_matrix(&source, &target, &subst))
}

/// Restriction of global polynomials `Sym^q(M) → Z[σ]_q`.
pub fn global_restriction(q: u32, sigma: &Cone) -> IntMatrix {
    let n = sigma.ambient_rank();
    let source = GradedPolySpace::ambient(n, q);
    let target = GradedPolySpace::new(sigma, q);
    let subst: Vec<Vec<BigInt>> = (0..n)
        .map(|i| sigma.span_basis().iter().map(|b| BigInt::from(b[i])).collect())
        .collect();
    substitution_matrix(&source, &target, &subst)
}

/// An element of `Z[σ]_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyElement {
    pub space: GradedPolySpace,
    pub coefficients: Vec<BigInt>,
}

impl PolyElement {
    pub fn new(space: GradedPolySpace, coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} monomials",
                coefficients.len(),
                space.len()
            )));
        }
        Ok(PolyElement { space, coefficients })
    }

    pub fn zero(space: GradedPolySpace) -> Self {
        let n = space.len();
        PolyElement {
            space,
            coefficients: vec![BigInt::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> u32 {
        self.space.degree()
    }

    /// Value at the lattice point with the given basis coordinates.
    pub fn evaluate(&self, coords: &[BigInt]) -> BigInt {
        self.space
            .monomials()
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let term: BigInt = e.iter().zip(coords).map(|(&k, x)| Pow::pow(x, k)).product();
                c * term
            })
            .sum()
    }

    /// Value at an ambient lattice point of `N_σ`.
    pub fn evaluate_at(&self, point: &[i64]) -> Option<BigInt> {
        let basis = IntMatrix::from_columns(self.space.ambient_rank, &self.space.lattice_basis);
        let coords = crate::linalg::solve(&basis, &to_big_vec(point))?;
        Some(self.evaluate(&coords))
    }

    pub fn multiply(&self, other: &PolyElement) -> Result<PolyElement> {
        if !self.space.same_lattice(&other.space) {
            return Err(Error::ConeMismatch);
        }
        let space = GradedPolySpace::with_basis(
            self.space.ambient_rank,
            self.space.lattice_basis.clone(),
            self.degree() + other.degree(),
        );
        let mut coefficients = vec![BigInt::zero(); space.len()];
        for (ea, ca) in self.space.monomials().iter().zip(&self.coefficients) {
            if ca.is_zero() {
                continue;
            }
            for (eb, cb) in other.space.monomials().iter().zip(&other.coefficients) {
                if cb.is_zero() {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                coefficients[space.index_of(&e).expect("degree adds")] += ca * cb;
            }
        }
        Ok(PolyElement { space, coefficients })
    }

    pub fn add(&self, other: &PolyElement) -> Result<PolyElement> {
        if self.space != other.space {
            return Err(Error::ConeMismatch);
        }
        Ok(PolyElement {
            space: self.space.clone(),
            coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect(),
        })
    }
}
