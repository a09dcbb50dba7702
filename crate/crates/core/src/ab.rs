//! The Atiyah–Bredon complex of a complete fan.
//!
//! Position `i` holds `⊕ Z[σ]_q` over the cones of codimension `i`, and
//! `δ^i` restricts from each cone to its facets with an incidence sign fixed
//! by the orientations of the cones' span bases.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan};
use crate::linalg::{self, json, kernel_basis, rank_mod_p, smith_diagonal, IntMatrix};
use crate::poly::restriction_matrix;
use crate::pp::{delta_matrix, BlockLayout};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Rationals,
    Prime(u64),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One cohomology group of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub position: usize,
    /// Free rank over Z or Q, dimension over F_p.
    pub rank: usize,
    /// Torsion coefficients; only populated over Z.
    #[serde(serialize_with = "json::vec")]
    pub torsion: Vec<BigInt>,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ABComplex {
    fingerprint: u64,
    degree: u32,
    layouts: Vec<BlockLayout>,
    differentials: Vec<IntMatrix>,
    orientation: Vec<i8>,
}

/// Sign of `[σ : τ]` for the canonical orientations: the determinant of
/// τ's span basis followed by an inward vector, in σ's span coordinates.
pub fn incidence_sign(fan: &Fan, sigma: ConeId, tau: ConeId) -> i8 {
    let s = fan.cone(sigma);
    let t = fan.cone(tau);
    let d = s.dim();
    let inward = s.interior_point().expect("a cone with a facet is nonzero");
    let mut cols: Vec<Vec<BigInt>> = t
        .span_basis()
        .iter()
        .map(|b| s.coordinates(b).expect("facet lies in the span"))
        .collect();
    cols.push(s.coordinates(&inward).expect("interior point lies in the span"));
    let m = IntMatrix::from_big_rows(d, (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect());
    let det = m.determinant();
    debug_assert!(!det.is_zero());
    if det.is_positive() {
        1
    } else {
        -1
    }
}

pub fn build_ab(fan: &Fan, q: u32) -> Result<ABComplex> {
    build_ab_oriented(fan, q, &vec![1; fan.len()])
}

/// Builds the complex with extra orientation signs `ε_σ ∈ {±1}` per cone;
/// the incidence `[σ : τ]` is multiplied by `ε_σ ε_τ`.
pub fn build_ab_oriented(fan: &Fan, q: u32, orientation: &[i8]) -> Result<ABComplex> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    if orientation.len() != fan.len() || orientation.iter().any(|&e| e != 1 && e != -1) {
        return Err(Error::DimensionMismatch(format!(
            "need one sign ±1 per cone ({} cones)",
            fan.len()
        )));
    }
    let n = fan.ambient_rank();
    let layouts: Vec<BlockLayout> = (0..=n).map(|i| BlockLayout::new(fan, &fan.cones_of_dim(n - i), q)).collect();
    let mut differentials = Vec::with_capacity(n);
    for i in 0..n {
        let (src, dst) = (&layouts[i], &layouts[i + 1]);
        let mut m = IntMatrix::zeros(dst.total, src.total);
        for (k, &sigma) in src.cones.iter().enumerate() {
            for &tau in fan.facets_of(sigma) {
                let r = dst.position(tau).expect("facet has codimension one more");
                let sign = incidence_sign(fan, sigma, tau) * orientation[sigma.0] * orientation[tau.0];
                let block = restriction_matrix(fan.cone(sigma), fan.cone(tau), q)?;
                m.set_block(dst.offsets[r], src.offsets[k], &block.scale(&BigInt::from(sign)));
            }
        }
        differentials.push(m);
    }
    let ab = ABComplex {
        fingerprint: fan.fingerprint(),
        degree: q,
        layouts,
        differentials,
        orientation: orientation.to_vec(),
    };
    assert!(ab.squares_to_zero(), "δ∘δ ≠ 0 in the Atiyah–Bredon complex");
    Ok(ab)
}

impl ABComplex {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn positions(&self) -> usize {
        self.layouts.len()
    }

    pub fn term_cones(&self, i: usize) -> &[ConeId] {
        &self.layouts[i].cones
    }

    pub fn term_ranks(&self) -> Vec<usize> {
        self.layouts.iter().map(|l| l.total).collect()
    }

    /// `δ^i`: term `i` → term `i + 1`.
    pub fn differential(&self, i: usize) -> &IntMatrix {
        &self.differentials[i]
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }

    pub fn squares_to_zero(&self) -> bool {
        self.differentials.windows(2).all(|w| (&w[1] * &w[0]).is_zero())
    }

    pub fn differential_ranks(&self, coefficients: Coefficients) -> Vec<usize> {
        self.differentials
            .iter()
            .map(|d| match coefficients {
                Coefficients::Prime(p) => rank_mod_p(d, p),
                _ => linalg::rank(d),
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(&self.term_ranks())
    }

    pub fn cohomology(&self, coefficients: Coefficients) -> Vec<CohomologyGroup> {
        let terms = self.term_ranks();
        let (ranks, torsion): (Vec<usize>, Vec<Vec<BigInt>>) = match coefficients {
            Coefficients::Prime(p) => (
                self.differentials.iter().map(|d| rank_mod_p(d, p)).collect(),
                vec![Vec::new(); self.differentials.len()],
            ),
            _ => self
                .differentials
                .iter()
                .map(|d| {
                    let diag = smith_diagonal(d);
                    let r = diag.iter().filter(|x| !x.is_zero()).count();
                    let t = if coefficients == Coefficients::Integers {
                        diag.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
                    } else {
                        Vec::new()
                    };
                    (r, t)
                })
                .unzip(),
        };
        (0..terms.len())
            .map(|i| {
                let out = ranks.get(i).copied().unwrap_or(0);
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                CohomologyGroup {
                    position: i,
                    rank: terms[i] - out - inc,
                    torsion: if i > 0 { torsion[i - 1].clone() } else { Vec::new() },
                }
            })
            .collect()
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// `δ⁰` of the two-skeleton comparison: one row block per codimension-one
/// cone lying in exactly two full-dimensional cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta0 {
    pub matrix: IntMatrix,
    /// `(τ, σ_a, σ_b)` per row block, `σ_a < σ_b`.
    pub rows: Vec<(ConeId, ConeId, ConeId)>,
    pub columns: BlockLayout,
}

pub fn delta0_general(fan: &Fan, q: u32) -> Result<Delta0> {
    if let Some(&bad) = fan.maximal().iter().find(|&&m| !fan.cone(m).is_full_dimensional()) {
        return Err(Error::MaximalNotFullDim(fan.cone(bad).to_string()));
    }
    let n = fan.ambient_rank();
    let columns = BlockLayout::new(fan, fan.maximal(), q);
    let mut rows = Vec::new();
    if n > 0 {
        for tau in fan.cones_of_dim(n - 1) {
            if let [a, b] = fan.full_dim_cofacets(tau)[..] {
                rows.push((tau, a.min(b), a.max(b)));
            }
        }
    }
    let heights: Vec<usize> = rows
        .iter()
        .map(|&(t, _, _)| crate::poly::GradedPolySpace::new(fan.cone(t), q).len())
        .collect();
    let mut matrix = IntMatrix::zeros(heights.iter().sum(), columns.total);
    let mut r = 0;
    for (&(t, a, b), &h) in rows.iter().zip(&heights) {
        let tau = fan.cone(t);
        let ra = restriction_matrix(fan.cone(a), tau, q)?;
        let rb = restriction_matrix(fan.cone(b), tau, q)?;
        let ka = columns.position(a).expect("full-dimensional cones are maximal");
        let kb = columns.position(b).expect("full-dimensional cones are maximal");
        matrix.set_block(r, columns.offsets[kb], &rb);
        matrix.set_block(r, columns.offsets[ka], &ra.scale(&BigInt::from(-1)));
        r += h;
    }
    Ok(Delta0 { matrix, rows, columns })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelComparison {
    pub degree: u32,
    pub ker_delta0_rank: usize,
    pub ker_delta_rank: usize,
    pub equal: bool,
    /// `X` with `K_δ⁰ · X = K_δ` for the canonical kernel bases, when equal.
    #[serde(serialize_with = "json::option_matrix")]
    pub basis_change_witness: Option<IntMatrix>,
}

pub fn kernel_comparison(fan: &Fan, q: u32) -> Result<KernelComparison> {
    let d0 = delta0_general(fan, q)?;
    let k0 = kernel_basis(&d0.matrix);
    let k = kernel_basis(&delta_matrix(fan, q));
    let equal = linalg::same_column_lattice(&k0, &k);
    let basis_change_witness = if equal {
        let cols: Option<Vec<Vec<BigInt>>> = k.columns().iter().map(|c| linalg::solve(&k0, c)).collect();
        cols.map(|cols| {
            let rows = k0.cols();
            IntMatrix::from_big_rows(cols.len(), (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
        })
    } else {
        None
    };
    Ok(KernelComparison {
        degree: q,
        ker_delta0_rank: k0.cols(),
        ker_delta_rank: k.cols(),
        equal,
        basis_change_witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeExactness {
    pub degree: u32,
    pub cohomological_degree: u32,
    pub term_ranks: Vec<usize>,
    pub h0_rank: usize,
    pub cohomology: Vec<CohomologyGroup>,
    /// Positions `i ≥ 1` with `H^i = 0`.
    pub exact_at: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvennessReport {
    pub coefficients: Coefficients,
    pub max_degree: u32,
    pub scope: String,
    pub pass: bool,
    pub degrees: Vec<DegreeExactness>,
}

impl EvennessReport {
    pub fn torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.cohomology.iter().all(|g| g.torsion.is_empty()))
    }
}

pub fn degree_exactness(fan: &Fan, q: u32, coefficients: Coefficients) -> Result<DegreeExactness> {
    let ab = build_ab(fan, q)?;
    let cohomology = ab.cohomology(coefficients);
    let exact_at: Vec<usize> = cohomology.iter().skip(1).filter(|g| g.is_zero()).map(|g| g.position).collect();
    Ok(DegreeExactness {
        degree: q,
        cohomological_degree: 2 * q,
        term_ranks: ab.term_ranks(),
        h0_rank: cohomology[0].rank,
        pass: exact_at.len() + 1 == cohomology.len(),
        exact_at,
        cohomology,
    })
}

/// Vanishing of Atiyah–Bredon cohomology in positions `≥ 1` for all
/// `q ≤ d_max`. A pass is evidence up to that degree, not a certificate.
pub fn evenness_probe(fan: &Fan, d_max: u32, coefficients: Coefficients) -> Result<EvennessReport> {
    let degrees = (0..=d_max)
        .map(|q| degree_exactness(fan, q, coefficients))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvennessReport {
        coefficients,
        max_degree: d_max,
        scope: format!("up to degree {d_max}"),
        pass: degrees.iter().all(|d| d.pass),
        degrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub cone: ConeId,
    pub rays: Vec<usize>,
    pub star_rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_degree: u32,
    pub whole_fan_pass: bool,
    pub entries: Vec<SweepEntry>,
    /// Cones whose star fails while the whole fan passes.
    pub counterexamples: Vec<ConeId>,
    /// Cones whose star fails.
    pub failing: Vec<ConeId>,
}

/// Runs the evenness probe over Z on the star fan of every cone.
pub fn orbit_closure_sweep(fan: &Fan, d_max: u32) -> Result<SweepReport> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut entries = Vec::with_capacity(fan.len());
    for sigma in fan.ids() {
        let star = fan.star_fan(sigma)?;
        let pass = evenness_probe(&star, d_max, Coefficients::Integers)?.pass;
        entries.push(SweepEntry {
            cone: sigma,
            rays: fan.ray_ids(sigma).to_vec(),
            star_rank: star.ambient_rank(),
            pass,
        });
    }
    let whole_fan_pass = entries.first().is_some_and(|e| e.pass);
    let failing: Vec<ConeId> = entries.iter().filter(|e| !e.pass).map(|e| e.cone).collect();
    Ok(SweepReport {
        max_degree: d_max,
        whole_fan_pass,
        counterexamples: if whole_fan_pass { failing.clone() } else { Vec::new() },
        failing,
        entries,
    })
}

pub const PROBE_PRIMES: [u64; 3] = [2, 3, 5];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionEntry {
    pub position: usize,
    #[serde(serialize_with = "json::vec")]
    pub torsion: Vec<BigInt>,
    pub rank_q: usize,
    /// `(p, dim over F_p)`.
    pub dims_fp: Vec<(u64, usize)>,
    pub mismatch: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionDegree {
    pub degree: u32,
    pub positions: Vec<TorsionEntry>,
    pub h0_saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub max_degree: u32,
    pub any_torsion: bool,
    pub any_mismatch: bool,
    pub degrees: Vec<TorsionDegree>,
}

pub fn torsion_probe(fan: &Fan, d_max: u32) -> Result<TorsionReport> {
    let mut degrees = Vec::new();
    for q in 0..=d_max {
        let ab = build_ab(fan, q)?;
        let z = ab.cohomology(Coefficients::Integers);
        let qq = ab.cohomology(Coefficients::Rationals);
        let fp: Vec<(u64, Vec<CohomologyGroup>)> =
            PROBE_PRIMES.iter().map(|&p| (p, ab.cohomology(Coefficients::Prime(p)))).collect();
        let positions = (0..z.len())
            .map(|i| {
                let dims_fp: Vec<(u64, usize)> = fp.iter().map(|(p, h)| (*p, h[i].rank)).collect();
                TorsionEntry {
                    position: i,
                    torsion: z[i].torsion.clone(),
                    rank_q: qq[i].rank,
                    mismatch: dims_fp.iter().any(|&(_, d)| d != qq[i].rank),
                    dims_fp,
                }
            })
            .collect();
        let h0 = match ab.differentials().first() {
            Some(d) => kernel_basis(d),
            None => IntMatrix::identity(ab.term_ranks()[0]),
        };
        degrees.push(TorsionDegree {
            degree: q,
            positions,
            h0_saturated: linalg::is_saturated(&h0),
        });
    }
    Ok(TorsionReport {
        max_degree: d_max,
        any_torsion: degrees.iter().any(|d| d.positions.iter().any(|e| !e.torsion.is_empty())),
        any_mismatch: degrees.iter().any(|d| d.positions.iter().any(|e| e.mismatch)),
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Fan {
        Fan::from_maximal(1, &[[1], [-1]], &[vec![0], vec![1]]).unwrap()
    }

    fn p2() -> Fan {
        Fan::from_maximal(2, &[[1, 0], [0, 1], [-1, -1]], &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    fn ranks(h: &[CohomologyGroup]) -> Vec<usize> {
        h.iter().map(|g| g.rank).collect()
    }

    #[test]
    fn p2_degree_zero() {
        let ab = build_ab(&p2(), 0).unwrap();
        assert_eq!(ab.term_ranks(), vec![3, 3, 1]);
        assert_eq!(ab.differential_ranks(Coefficients::Integers), vec![2, 1]);
        assert_eq!(ranks(&ab.cohomology(Coefficients::Integers)), vec![1, 0, 0]);
        assert_eq!(ab.euler_characteristic(), 1);
    }

    #[test]
    fn p2_degree_one() {
        let ab = build_ab(&p2(), 1).unwrap();
        assert_eq!(ab.term_ranks(), vec![6, 3, 0]);
        assert_eq!(ranks(&ab.cohomology(Coefficients::Integers)), vec![3, 0, 0]);
    }

    #[test]
    fn p1_degree_zero() {
        let ab = build_ab(&p1(), 0).unwrap();
        assert_eq!(ab.term_ranks(), vec![2, 1]);
        assert_eq!(ranks(&ab.cohomology(Coefficients::Integers)), vec![1, 0]);
    }

    #[test]
    fn requires_complete() {
        let f = Fan::from_maximal(2, &[[1, 0], [0, 1]], &[vec![0, 1]]).unwrap();
        assert!(matches!(build_ab(&f, 0), Err(Error::NotComplete)));
        assert!(matches!(evenness_probe(&f, 1, Coefficients::Integers), Err(Error::NotComplete)));
    }

    #[test]
    fn delta0_shapes() {
        let orthant = Fan::from_maximal(2, &[[1, 0], [0, 1]], &[vec![0, 1]]).unwrap();
        assert_eq!(delta0_general(&orthant, 2).unwrap().matrix.rows(), 0);
        let half = Fan::from_maximal(2, &[[1, 0], [0, 1], [-1, 0]], &[vec![0, 1], vec![1, 2]]).unwrap();
        let d = delta0_general(&half, 1).unwrap();
        assert_eq!(d.rows.len(), 1);
        assert_eq!(d.matrix.rows(), 1);
        let ray = Fan::from_maximal(2, &[[1, 0]], &[vec![0]]).unwrap();
        assert!(matches!(delta0_general(&ray, 0), Err(Error::MaximalNotFullDim(_))));
    }

    #[test]
    fn delta0_matches_ab_on_p2() {
        let f = p2();
        for q in 0..3 {
            let d0 = delta0_general(&f, q).unwrap().matrix;
            let ab = build_ab(&f, q).unwrap();
            let d = ab.differential(0);
            assert_eq!(linalg::rank(&d0), linalg::rank(d));
            assert!(linalg::same_column_lattice(&kernel_basis(&d0), &kernel_basis(d)));
        }
    }

    #[test]
    fn kernels_agree_on_p2() {
        let f = p2();
        let r: Vec<usize> = (0..4).map(|q| kernel_comparison(&f, q).unwrap()).map(|k| {
            assert!(k.equal);
            assert!(k.basis_change_witness.is_some());
            k.ker_delta_rank
        }).collect();
        assert_eq!(r, vec![1, 3, 6, 9]);
    }

    #[test]
    fn p2_even_and_torsion_free() {
        let rep = evenness_probe(&p2(), 3, Coefficients::Integers).unwrap();
        assert!(rep.pass);
        assert!(rep.torsion_free());
        let t = torsion_probe(&p2(), 3).unwrap();
        assert!(!t.any_torsion && !t.any_mismatch);
        assert!(t.degrees.iter().all(|d| d.h0_saturated));
    }

    #[test]
    fn sweep_p2() {
        let s = orbit_closure_sweep(&p2(), 2).unwrap();
        assert!(s.whole_fan_pass);
        assert_eq!(s.entries.len(), 7);
        assert!(s.failing.is_empty());
    }

    #[test]
    fn orientation_change_keeps_cohomology() {
        let f = p2();
        let eps: Vec<i8> = (0..f.len()).map(|i| if i % 3 == 1 { -1 } else { 1 }).collect();
        for q in 0..3 {
            let a = build_ab(&f, q).unwrap().cohomology(Coefficients::Integers);
            let b = build_ab_oriented(&f, q, &eps).unwrap().cohomology(Coefficients::Integers);
            assert_eq!(a, b);
        }
    }
}
