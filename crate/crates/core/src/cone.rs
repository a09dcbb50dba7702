//! Strongly convex rational polyhedral cones.
//!
//! A [`Cone`] keeps both representations: primitive extremal rays (V) and
//! facet normals plus the lattice of linear equations `σ⊥` (H). Conversions
//! between them use the double description method on small exact vectors.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, primitive, to_big_vec, to_i64_vec, IntMatrix};

/// Integer vector in `N` or `M`.
pub type LatticeVector = Vec<i64>;

#[derive(Clone, Debug, Serialize)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    facet_normals: Vec<LatticeVector>,
    span_basis: Vec<LatticeVector>,
    perp_basis: Vec<LatticeVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl std::hash::Hash for Cone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_rank.hash(state);
        self.rays.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_rank, self.dim(), &self.rays).cmp(&(other.ambient_rank, other.dim(), &other.rays))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone(")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, ")")
    }
}

/// The projection `π_σ : N → N(σ) = N / N_σ` in fixed bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    pub source_rank: usize,
    pub target_rank: usize,
    /// `target_rank × source_rank`; its rows form a basis of `σ⊥ ∩ M`.
    pub matrix: IntMatrix,
}

impl QuotientMap {
    pub fn apply(&self, v: &[i64]) -> Result<LatticeVector> {
        to_i64_vec(&self.matrix.mul_vec(&to_big_vec(v)))
    }
}

impl Cone {
    /// The cone generated by `rays` in `Z^ambient_rank`.
    ///
    /// Zero, duplicate and non-primitive generators are normalized away, and
    /// non-extremal generators are dropped.
    pub fn from_rays<R: AsRef<[i64]>>(ambient_rank: usize, rays: &[R]) -> Result<Cone> {
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        for r in rays {
            let r = r.as_ref();
            if r.len() != ambient_rank {
                return Err(Error::DimensionMismatch(format!(
                    "ray {r:?} has length {}, expected {ambient_rank}",
                    r.len()
                )));
            }
            let v = primitive(&to_big_vec(r));
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            if !gens.contains(&v) {
                gens.push(v);
            }
        }
        if gens.is_empty() {
            return Ok(Self::zero(ambient_rank));
        }

        let gen_matrix = IntMatrix::from_big_rows(ambient_rank, gens.clone());
        let perp = linalg::kernel_basis(&gen_matrix).transpose();
        let span = linalg::kernel_basis(&perp).transpose();
        let dim = span.rows();
        let span_cols = span.transpose();

        let coords: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| linalg::solve(&span_cols, g).expect("generator lies in its saturated span"))
            .collect();

        // Facet normals of σ = extreme rays of σ∨ in span coordinates.
        let dual_rays = extreme_rays(dim, &coords);
        if dual_rays.is_empty() || linalg::rank(&IntMatrix::from_big_rows(dim, dual_rays.clone())) < dim {
            return Err(Error::NotStronglyConvex {
                context: format!("{:?}", to_i64_rows(&gens)?),
            });
        }

        let mut extremal = Vec::new();
        for (g, c) in gens.iter().zip(&coords) {
            let tight: Vec<Vec<BigInt>> = dual_rays.iter().filter(|m| dot(m, c).is_zero()).cloned().collect();
            let r = if tight.is_empty() {
                0
            } else {
                linalg::rank(&IntMatrix::from_big_rows(dim, tight))
            };
            if r + 1 == dim {
                extremal.push(to_i64_vec(g)?);
            }
        }
        extremal.sort();

        // Lift normals from M_σ to M: solve <m, b_i> = m̄_i.
        let mut facet_normals = Vec::with_capacity(dual_rays.len());
        for m in &dual_rays {
            let lift = linalg::solve(&span, m).expect("saturated span admits integral lifts");
            facet_normals.push(to_i64_vec(&lift)?);
        }
        facet_normals.sort();

        Ok(Cone {
            ambient_rank,
            rays: extremal,
            facet_normals,
            span_basis: span.to_i64_rows()?,
            perp_basis: perp.to_i64_rows()?,
        })
    }

    pub fn zero(ambient_rank: usize) -> Cone {
        Cone {
            ambient_rank,
            rays: Vec::new(),
            facet_normals: Vec::new(),
            span_basis: Vec::new(),
            perp_basis: (0..ambient_rank)
                .map(|i| (0..ambient_rank).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    /// The cone cut out by `<a, x> >= 0` for every `a` in `inequalities` and
    /// `<e, x> = 0` for every `e` in `equations`. The result must be pointed.
    pub fn from_inequalities(
        ambient_rank: usize,
        inequalities: &[LatticeVector],
        equations: &[LatticeVector],
    ) -> Result<Cone> {
        let mut rows: Vec<Vec<BigInt>> = inequalities.iter().map(|a| to_big_vec(a)).collect();
        for e in equations {
            let e = to_big_vec(e);
            rows.push(e.iter().map(|x| -x).collect());
            rows.push(e);
        }
        if ambient_rank == 0 {
            return Ok(Self::zero(0));
        }
        if rows.is_empty() || linalg::rank(&IntMatrix::from_big_rows(ambient_rank, rows.clone())) < ambient_rank {
            return Err(Error::NotStronglyConvex {
                context: "H-representation".into(),
            });
        }
        let rays = extreme_rays(ambient_rank, &rows);
        let rays = to_i64_rows(&rays)?;
        Cone::from_rays(ambient_rank, &rays)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Primitive extremal ray generators, sorted.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Primitive inward facet normals in `M`, sorted. Together with
    /// [`Cone::perp_basis`] they form the H-representation.
    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facet_normals
    }

    /// Z-basis of `N_σ = N ∩ lin(σ)`, in Hermite form.
    pub fn span_basis(&self) -> &[LatticeVector] {
        &self.span_basis
    }

    /// Z-basis of `σ⊥ ∩ M`, in Hermite form.
    pub fn perp_basis(&self) -> &[LatticeVector] {
        &self.perp_basis
    }

    pub fn dim(&self) -> usize {
        self.span_basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_rank
    }

    pub fn in_span(&self, v: &[i64]) -> bool {
        self.perp_basis.iter().all(|e| pair(e, v) == 0)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.in_span(v) && self.facet_normals.iter().all(|m| pair(m, v) >= 0)
    }

    pub fn relative_interior_contains(&self, v: &[i64]) -> bool {
        self.in_span(v) && self.facet_normals.iter().all(|m| pair(m, v) > 0)
    }

    /// Coordinates of `v ∈ N_σ` in the span basis.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<BigInt>> {
        let b = IntMatrix::from_columns(self.ambient_rank, &self.span_basis);
        linalg::solve(&b, &to_big_vec(v))
    }

    /// σ∨ as a cone in `M`. Only strongly convex when σ is full-dimensional.
    pub fn dual(&self) -> Result<Cone> {
        if !self.is_full_dimensional() {
            return Err(Error::NotStronglyConvex {
                context: format!("dual of {self}"),
            });
        }
        Cone::from_rays(self.ambient_rank, &self.facet_normals)
    }

    /// Facets: the faces `σ ∩ m⊥` for each facet normal `m`.
    pub fn facets(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = self
            .facet_normals
            .iter()
            .map(|m| {
                let rays: Vec<&LatticeVector> = self.rays.iter().filter(|r| pair(m, r) == 0).collect();
                Cone::from_rays(self.ambient_rank, &rays).expect("faces of a strongly convex cone are strongly convex")
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All faces, including the zero cone and the cone itself, sorted by
    /// dimension and then by rays.
    pub fn faces(&self) -> Vec<Cone> {
        let mut all = std::collections::BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if all.contains(&c) {
                continue;
            }
            stack.extend(c.facets());
            all.insert(c);
        }
        all.into_iter().collect()
    }

    /// Whether `tau` is a face of `self`.
    pub fn has_face(&self, tau: &Cone) -> bool {
        if tau.ambient_rank != self.ambient_rank || !tau.rays.iter().all(|r| self.rays.contains(r)) {
            return false;
        }
        // The smallest face containing τ's rays is cut out by the sum of the
        // facet normals vanishing on all of them.
        let mut m = vec![0i64; self.ambient_rank];
        for n in &self.facet_normals {
            if tau.rays.iter().all(|r| pair(n, r) == 0) {
                for (a, b) in m.iter_mut().zip(n) {
                    *a += b;
                }
            }
        }
        let face_rays: Vec<&LatticeVector> = self.rays.iter().filter(|r| pair(&m, r) == 0).collect();
        face_rays.len() == tau.rays.len()
    }

    /// `v_σ`: the sum of the primitive ray generators.
    pub fn interior_point(&self) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(Error::ZeroCone);
        }
        let mut v = vec![0i64; self.ambient_rank];
        for r in &self.rays {
            for (a, b) in v.iter_mut().zip(r) {
                *a = a.checked_add(*b).ok_or(Error::Overflow)?;
            }
        }
        Ok(v)
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }

    /// Simplicial, and the rays form a Z-basis of `N_σ`.
    pub fn is_smooth(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let coords: Vec<Vec<BigInt>> = self
            .rays
            .iter()
            .map(|r| self.coordinates(r).expect("ray lies in span"))
            .collect();
        let det = IntMatrix::from_big_rows(self.dim(), coords).determinant();
        det.abs() == BigInt::from(1)
    }

    /// Lattice index of the sublattice generated by the rays in `N_σ`
    /// (1 for smooth cones). Only meaningful for simplicial cones.
    pub fn multiplicity(&self) -> Option<BigInt> {
        if !self.is_simplicial() {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::from(1));
        }
        let coords: Vec<Vec<BigInt>> = self
            .rays
            .iter()
            .map(|r| self.coordinates(r).expect("ray lies in span"))
            .collect();
        Some(IntMatrix::from_big_rows(self.dim(), coords).determinant().abs())
    }

    pub fn quotient_map(&self) -> QuotientMap {
        let matrix = if self.perp_basis.is_empty() {
            IntMatrix::zeros(0, self.ambient_rank)
        } else {
            IntMatrix::from_rows(self.ambient_rank, &self.perp_basis)
        };
        QuotientMap {
            source_rank: self.ambient_rank,
            target_rank: self.perp_basis.len(),
            matrix,
        }
    }
}

/// Convenience wrapper matching the free-function style used elsewhere.
pub fn cone_from_rays<R: AsRef<[i64]>>(ambient_rank: usize, rays: &[R]) -> Result<Cone> {
    Cone::from_rays(ambient_rank, rays)
}

pub(crate) fn pair(m: &[i64], v: &[i64]) -> i128 {
    m.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn to_i64_rows(v: &[Vec<BigInt>]) -> Result<Vec<LatticeVector>> {
    v.iter().map(|r| to_i64_vec(r)).collect()
}

/// Extreme rays of the pointed cone `{x ∈ R^d : <a, x> >= 0 for all rows a}`.
///
/// Double description: start from a simplicial cone cut out by `d`
/// independent constraints, then add the remaining constraints one at a
/// time, combining adjacent pairs across each new hyperplane. `rows` must
/// have rank `d`.
fn extreme_rays(d: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if d == 0 {
        return Vec::new();
    }
    // Pick d independent constraints greedily (first-come, deterministic).
    let mut basis: Vec<usize> = Vec::new();
    for (i, _) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if linalg::rank(&IntMatrix::from_big_rows(d, trial)) == basis.len() + 1 {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d, "constraint system must have full rank");

    // Initial rays: columns of adj(A_B), i.e. solutions tight on all but one
    // basis constraint, oriented to be positive on the remaining one.
    let a_b = IntMatrix::from_big_rows(d, basis.iter().map(|&j| rows[j].clone()).collect());
    let mut rays: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for k in 0..d {
        let others: Vec<usize> = (0..d).filter(|&i| i != k).collect();
        let sub = a_b.select_rows(&others);
        let ker = linalg::kernel_basis(&sub);
        debug_assert_eq!(ker.cols(), 1);
        let mut v = primitive(&ker.column(0));
        if dot(&rows[basis[k]], &v).is_negative() {
            v = v.iter().map(|x| -x).collect();
        }
        rays.push(v);
    }

    let mut processed: Vec<usize> = basis.clone();
    for (i, a) in rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            processed.push(i);
            continue;
        }
        let zero_sets: Vec<Vec<usize>> = rays
            .iter()
            .map(|r| processed.iter().copied().filter(|&j| dot(&rows[j], r).is_zero()).collect())
            .collect();

        let mut next: Vec<Vec<BigInt>> = (0..rays.len()).filter(|&k| !vals[k].is_negative()).map(|k| rays[k].clone()).collect();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<usize> = zero_sets[p].iter().copied().filter(|j| zero_sets[q].contains(j)).collect();
                if common.len() + 2 < d {
                    continue;
                }
                // Combinatorial adjacency: no third ray is tight on all of `common`.
                let blocked = (0..rays.len())
                    .any(|k| k != p && k != q && common.iter().all(|j| zero_sets[k].contains(j)));
                if blocked {
                    continue;
                }
                let combo: Vec<BigInt> = rays[q]
                    .iter()
                    .zip(&rays[p])
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                let v = primitive(&combo);
                if !v.iter().all(Zero::is_zero) && !next.contains(&v) {
                    next.push(v);
                }
            }
        }
        rays = next;
        processed.push(i);
    }
    rays.sort();
    rays
}
