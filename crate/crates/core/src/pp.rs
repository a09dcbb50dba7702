//! Piecewise polynomials on a fan.
//!
//! `PP(Σ)_q` is the kernel of the Mayer–Vietoris map
//! `δ: ⊕_{σ ∈ Σ_max} Z[σ]_q → ⊕_{σ_0 < σ_1} Z[σ_0 ∩ σ_1]_q`, with the
//! maximal cones ordered by the fan's canonical order.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan};
use crate::linalg::{self, kernel_basis, IntMatrix};
use crate::poly::{restriction_matrix, GradedPolySpace, PolyElement};

/// Column layout shared by `δ` and `δ⁰`: one block per cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub cones: Vec<ConeId>,
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl BlockLayout {
    pub fn new(fan: &Fan, cones: &[ConeId], q: u32) -> Self {
        let mut offsets = Vec::with_capacity(cones.len());
        let mut total = 0;
        for &c in cones {
            offsets.push(total);
            total += GradedPolySpace::new(fan.cone(c), q).len();
        }
        BlockLayout {
            cones: cones.to_vec(),
            offsets,
            total,
        }
    }

    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        let end = self.offsets.get(k + 1).copied().unwrap_or(self.total);
        self.offsets[k]..end
    }

    pub fn position(&self, c: ConeId) -> Option<usize> {
        self.cones.iter().position(|&x| x == c)
    }
}

/// A piecewise polynomial: one polynomial per maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPElement {
    fingerprint: u64,
    degree: u32,
    cones: Vec<ConeId>,
    pieces: Vec<PolyElement>,
}

impl PPElement {
    /// Splits a coefficient vector laid out over the maximal cones.
    pub fn from_vector(fan: &Fan, q: u32, v: &[BigInt]) -> Result<Self> {
        let layout = BlockLayout::new(fan, fan.maximal(), q);
        if v.len() != layout.total {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} monomials",
                v.len(),
                layout.total
            )));
        }
        let pieces = layout
            .cones
            .iter()
            .enumerate()
            .map(|(k, &c)| PolyElement {
                space: GradedPolySpace::new(fan.cone(c), q),
                coefficients: v[layout.block(k)].to_vec(),
            })
            .collect();
        Ok(PPElement {
            fingerprint: fan.fingerprint(),
            degree: q,
            cones: layout.cones,
            pieces,
        })
    }

    /// The constant function 1.
    pub fn one(fan: &Fan) -> Self {
        let v = vec![BigInt::from(1); fan.maximal().len()];
        Self::from_vector(fan, 0, &v).expect("one constant per maximal cone")
    }

    /// Restriction of a global polynomial in `Sym^q(M)`, given in standard coordinates.
    pub fn from_global(fan: &Fan, q: u32, coefficients: &[BigInt]) -> Result<Self> {
        let mut v = Vec::new();
        for &c in fan.maximal() {
            let r = crate::poly::global_restriction(q, fan.cone(c));
            if r.cols() != coefficients.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} coefficients for {} monomials",
                    coefficients.len(),
                    r.cols()
                )));
            }
            v.extend(r.mul_vec(coefficients));
        }
        Self::from_vector(fan, q, &v)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn cones(&self) -> &[ConeId] {
        &self.cones
    }

    pub fn pieces(&self) -> &[PolyElement] {
        &self.pieces
    }

    pub fn piece(&self, c: ConeId) -> Option<&PolyElement> {
        self.cones.iter().position(|&x| x == c).map(|k| &self.pieces[k])
    }

    pub fn to_vector(&self) -> Vec<BigInt> {
        self.pieces.iter().flat_map(|p| p.coefficients.iter().cloned()).collect()
    }

    pub fn belongs_to(&self, fan: &Fan) -> bool {
        self.fingerprint == fan.fingerprint()
    }

    /// Checks that the pieces agree on every pairwise intersection.
    pub fn is_compatible(&self, fan: &Fan) -> bool {
        self.belongs_to(fan) && delta_matrix(fan, self.degree).mul_vec(&self.to_vector()).iter().all(Zero::is_zero)
    }

    /// Value at a lattice point of the support, if it lies in the support.
    pub fn evaluate_at(&self, fan: &Fan, point: &[i64]) -> Option<BigInt> {
        self.cones
            .iter()
            .zip(&self.pieces)
            .find(|(&c, _)| fan.cone(c).contains(point))
            .and_then(|(_, p)| p.evaluate_at(point))
    }
}

/// Row blocks of `δ`: ordered pairs of maximal cones with a nonzero target.
fn delta_rows(fan: &Fan, q: u32) -> Vec<(usize, usize, ConeId)> {
    let max = fan.maximal();
    let mut rows = Vec::new();
    for a in 0..max.len() {
        for b in a + 1..max.len() {
            let meet = fan.intersection(max[a], max[b]);
            if fan.dim(meet) > 0 || q == 0 {
                rows.push((a, b, meet));
            }
        }
    }
    rows
}

/// The Mayer–Vietoris map `δ` in degree `q`.
///
/// Rows are grouped by pair `(σ_0, σ_1)` and then by monomial of
/// `Z[σ_0 ∩ σ_1]_q`; the `σ_1` block enters with `+1`, the `σ_0` block with `−1`.
pub fn delta_matrix(fan: &Fan, q: u32) -> IntMatrix {
    let max = fan.maximal();
    let layout = BlockLayout::new(fan, max, q);
    let pairs = delta_rows(fan, q);
    let heights: Vec<usize> = pairs
        .iter()
        .map(|&(_, _, meet)| GradedPolySpace::new(fan.cone(meet), q).len())
        .collect();
    let mut m = IntMatrix::zeros(heights.iter().sum(), layout.total);
    let mut r = 0;
    for (&(a, b, meet), &h) in pairs.iter().zip(&heights) {
        if h == 0 {
            continue;
        }
        let tau = fan.cone(meet);
        let ra = restriction_matrix(fan.cone(max[a]), tau, q).expect("intersection is a face");
        let rb = restriction_matrix(fan.cone(max[b]), tau, q).expect("intersection is a face");
        m.set_block(r, layout.offsets[b], &rb);
        m.set_block(r, layout.offsets[a], &ra.scale(&BigInt::from(-1)));
        r += h;
    }
    m
}

/// A Z-basis of `PP(Σ)_q`, as columns laid out over the maximal cones.
pub fn pp_kernel(fan: &Fan, q: u32) -> IntMatrix {
    let d = delta_matrix(fan, q);
    if d.rows() == 0 {
        return IntMatrix::identity(d.cols());
    }
    kernel_basis(&d)
}

pub fn pp_basis(fan: &Fan, q: u32) -> Vec<PPElement> {
    let k = pp_kernel(fan, q);
    let basis: Vec<PPElement> = k
        .columns()
        .iter()
        .map(|c| PPElement::from_vector(fan, q, c).expect("kernel column fits the layout"))
        .collect();
    debug_assert!(basis.iter().all(|b| b.is_compatible(fan)));
    basis
}

pub fn pp_rank(fan: &Fan, q: u32) -> usize {
    let d = delta_matrix(fan, q);
    d.cols() - linalg::rank(&d)
}

/// Ranks of `PP(Σ)_q` for `q = 0..=d_max`.
pub fn hilbert_function(fan: &Fan, d_max: u32) -> Vec<usize> {
    (0..=d_max).map(|q| pp_rank(fan, q)).collect()
}

pub fn pp_multiply(fan: &Fan, a: &PPElement, b: &PPElement) -> Result<PPElement> {
    if !a.belongs_to(fan) || !b.belongs_to(fan) {
        return Err(Error::FanMismatch);
    }
    let pieces = a
        .pieces
        .iter()
        .zip(&b.pieces)
        .map(|(x, y)| x.multiply(y))
        .collect::<Result<Vec<_>>>()?;
    let out = PPElement {
        fingerprint: a.fingerprint,
        degree: a.degree + b.degree,
        cones: a.cones.clone(),
        pieces,
    };
    assert!(out.is_compatible(fan), "product of piecewise polynomials left PP");
    Ok(out)
}

pub fn pp_add(fan: &Fan, a: &PPElement, b: &PPElement) -> Result<PPElement> {
    if !a.belongs_to(fan) || !b.belongs_to(fan) {
        return Err(Error::FanMismatch);
    }
    let pieces = a
        .pieces
        .iter()
        .zip(&b.pieces)
        .map(|(x, y)| x.add(y))
        .collect::<Result<Vec<_>>>()?;
    Ok(PPElement { pieces, ..a.clone() })
}

/// Coordinates of `x` in the basis returned by [`pp_basis`], if `x` is in PP.
pub fn pp_coordinates(fan: &Fan, x: &PPElement) -> Result<Option<Vec<BigInt>>> {
    if !x.belongs_to(fan) {
        return Err(Error::FanMismatch);
    }
    Ok(linalg::solve(&pp_kernel(fan, x.degree), &x.to_vector()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Components {
    pub count: usize,
    /// Component index of each maximal cone, in fan order.
    pub labels: Vec<(ConeId, usize)>,
    /// Set when some maximal cone is not full-dimensional.
    pub degenerate: bool,
}

/// Facet-connected components of the maximal cones.
pub fn piecewise_constant_components(fan: &Fan) -> Components {
    let comps = fan.facet_components(fan.maximal());
    let mut labels: Vec<(ConeId, usize)> = comps
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.iter().map(move |&s| (s, k)))
        .collect();
    labels.sort();
    Components {
        count: comps.len(),
        labels,
        degenerate: !fan.maximal_full_dim(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_big_vec;

    fn p1() -> Fan {
        Fan::from_maximal(1, &[[1], [-1]], &[vec![0], vec![1]]).unwrap()
    }

    fn p2() -> Fan {
        Fan::from_maximal(2, &[[1, 0], [0, 1], [-1, -1]], &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn p1_delta_degree_zero() {
        let d = delta_matrix(&p1(), 0);
        assert_eq!(d, IntMatrix::from_rows(2, &[[-1, 1]]));
    }

    #[test]
    fn single_cone_has_no_rows() {
        let f = Fan::from_maximal(2, &[[1, 0], [0, 1]], &[vec![0, 1]]).unwrap();
        for q in 0..3 {
            let d = delta_matrix(&f, q);
            assert_eq!(d.rows(), 0);
            assert_eq!(d.cols(), q as usize + 1);
        }
        assert_eq!(hilbert_function(&f, 2), vec![1, 2, 3]);
    }

    #[test]
    fn p2_degree_one() {
        let d = delta_matrix(&p2(), 1);
        assert_eq!((d.rows(), d.cols()), (3, 6));
        assert_eq!(linalg::rank(&d), 3);
        assert_eq!(hilbert_function(&p2(), 3), vec![1, 3, 6, 9]);
    }

    #[test]
    fn p1_hilbert() {
        assert_eq!(hilbert_function(&p1(), 3), vec![1, 2, 2, 2]);
    }

    #[test]
    fn basis_elements_are_compatible() {
        let f = p2();
        for q in 0..3 {
            let b = pp_basis(&f, q);
            assert_eq!(b.len(), pp_rank(&f, q));
            assert!(b.iter().all(|x| x.is_compatible(&f)));
        }
    }

    #[test]
    fn products_stay_in_pp() {
        let f = p2();
        let b1 = pp_basis(&f, 1);
        for x in &b1 {
            for y in &b1 {
                let z = pp_multiply(&f, x, y).unwrap();
                assert_eq!(z.degree(), 2);
                assert!(pp_coordinates(&f, &z).unwrap().is_some());
            }
        }
        let one = PPElement::one(&f);
        assert_eq!(pp_multiply(&f, &one, &b1[0]).unwrap(), b1[0]);
    }

    #[test]
    fn courant_square_on_p1() {
        let f = p1();
        // t on the positive ray, 0 on the negative one
        let x = PPElement::from_vector(&f, 1, &to_big_vec(&[1, 0])).unwrap();
        assert!(x.is_compatible(&f));
        let sq = pp_multiply(&f, &x, &x).unwrap();
        assert_eq!(sq.to_vector(), to_big_vec(&[1, 0]));
        assert_eq!(sq.evaluate_at(&f, &[3]), Some(BigInt::from(9)));
        assert_eq!(sq.evaluate_at(&f, &[-3]), Some(BigInt::from(0)));
    }

    #[test]
    fn fan_mismatch() {
        let a = PPElement::one(&p1());
        let b = PPElement::one(&p2());
        assert_eq!(pp_multiply(&p2(), &a, &b), Err(Error::FanMismatch));
    }

    #[test]
    fn global_polynomials_are_piecewise() {
        let f = p2();
        let g = PPElement::from_global(&f, 2, &to_big_vec(&[1, -2, 5])).unwrap();
        assert!(g.is_compatible(&f));
        assert_eq!(g.evaluate_at(&f, &[-1, 2]), Some(BigInt::from(1 + 4 + 20)));
    }

    #[test]
    fn components() {
        assert_eq!(piecewise_constant_components(&p2()).count, 1);
        let anti = Fan::from_maximal(2, &[[1, 0], [0, 1], [-1, 0], [0, -1]], &[vec![0, 1], vec![2, 3]]).unwrap();
        let c = piecewise_constant_components(&anti);
        assert_eq!(c.count, 2);
        assert!(!c.degenerate);
        let path = Fan::from_maximal(
            2,
            &[[1, 0], [0, 1], [0, -1], [-1, 0]],
            &[vec![0, 1], vec![0, 2], vec![3, 2]],
        )
        .unwrap();
        assert_eq!(piecewise_constant_components(&path).count, 1);
    }
}
