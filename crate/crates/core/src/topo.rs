//! Simplicial homology, links of cones, cell censuses and cubical subdivisions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fan::{ConeId, Fan, OrderComplex};
use crate::linalg::{json, smith_diagonal, IntMatrix};

/// A finite simplicial complex with vertex tuples kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexZ {
    vertices: Vec<usize>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplexZ {
    /// Closure of the given simplices under taking faces.
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                all.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect());
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut simplices = vec![Vec::new(); top];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        Self::from_layers(simplices)
    }

    pub fn from_order_complex(c: &OrderComplex) -> Self {
        let simplices = c
            .simplices
            .iter()
            .map(|layer| layer.iter().map(|s| s.iter().map(|v| v.0).collect()).collect())
            .collect();
        Self::from_layers(simplices)
    }

    fn from_layers(mut simplices: Vec<Vec<Vec<usize>>>) -> Self {
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        for layer in &mut simplices {
            layer.sort();
        }
        let vertices = simplices.first().map(|l| l.iter().map(|s| s[0]).collect()).unwrap_or_default();
        let index = simplices
            .iter()
            .map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        SimplicialComplexZ {
            vertices,
            simplices,
            index,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Simplices of dimension `k`.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Top dimension; `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// `∂_k: C_k → C_{k-1}`; `∂_0` is the augmentation onto `C_{-1} = Z`.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        let cols = self.simplices(k);
        if k == 0 {
            return IntMatrix::from_big_rows(cols.len(), vec![vec![BigInt::one(); cols.len()]]);
        }
        let rows = self.simplices(k - 1).len();
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, s) in cols.iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let r = self.index[k - 1][&face];
                m[(r, j)] = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
            }
        }
        m
    }

    /// Checks `∂_{k-1} ∂_k = 0` in every degree.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (1..self.simplices.len()).all(|k| (&self.boundary(k - 1) * &self.boundary(k)).is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: i64,
    pub free_rank: usize,
    #[serde(serialize_with = "json::vec")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Reduced homology in degrees `-1..=dim`. The empty complex has `H̃_{-1} = Z`.
pub fn reduced_homology(c: &SimplicialComplexZ) -> Vec<HomologyGroup> {
    let top = c.simplices.len();
    // chain ranks of C_{-1}, C_0, ..., C_top-1
    let mut chain = vec![1usize];
    chain.extend(c.f_vector());
    // diag[k] belongs to ∂_k (k = 0..top)
    let diags: Vec<Vec<BigInt>> = (0..top).map(|k| smith_diagonal(&c.boundary(k))).collect();
    let rank = |k: usize| diags.get(k).map_or(0, |d| d.iter().filter(|x| !x.is_zero()).count());
    (0..=top)
        .map(|pos| {
            // pos indexes C_{pos-1}; outgoing ∂_{pos-1}, incoming ∂_pos
            let out = if pos == 0 { 0 } else { rank(pos - 1) };
            let inc = rank(pos);
            HomologyGroup {
                degree: pos as i64 - 1,
                free_rank: chain[pos] - out - inc,
                torsion: diags
                    .get(pos)
                    .map(|d| d.iter().filter(|x| !x.is_zero() && !x.is_one()).cloned().collect())
                    .unwrap_or_default(),
            }
        })
        .collect()
}

/// Order complex of `{τ ∈ Σ : τ > σ}`.
pub fn link_complex(fan: &Fan, sigma: ConeId) -> Result<SimplicialComplexZ> {
    if sigma.0 >= fan.len() {
        return Err(Error::ConeNotInFan(sigma.to_string()));
    }
    let upper: Vec<ConeId> = fan.star_poset(sigma).iter().copied().filter(|&t| t != sigma).collect();
    Ok(SimplicialComplexZ::from_order_complex(&fan.chains_within(&upper)))
}

pub fn link_homology(fan: &Fan, sigma: ConeId) -> Result<Vec<HomologyGroup>> {
    Ok(reduced_homology(&link_complex(fan, sigma)?))
}

/// `H̃_i(lk σ) = 0` for all `i < n − dim σ − 1`.
pub fn free_link_check(fan: &Fan, sigma: ConeId) -> Result<bool> {
    let h = link_homology(fan, sigma)?;
    let top = fan.ambient_rank() as i64 - fan.dim(sigma) as i64 - 1;
    Ok(h.iter().filter(|g| g.degree < top).all(HomologyGroup::is_zero))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(try_from = "String")]
pub enum Field {
    Complex,
    Real,
    NonNegative,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Complex => "C",
            Field::Real => "R",
            Field::NonNegative => "R+",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" => Ok(Field::Complex),
            "R" => Ok(Field::Real),
            "R+" | "R_+" => Ok(Field::NonNegative),
            other => Err(Error::Parse(format!("unknown field {other:?}, expected C, R or R+"))),
        }
    }
}

impl TryFrom<String> for Field {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCensus {
    pub field: Field,
    /// Number of cells in each dimension.
    pub counts: Vec<u64>,
    pub euler: i64,
}

fn binomial(m: u64, j: u64) -> u64 {
    (0..j).fold(1u64, |acc, i| acc * (m - i) / (i + 1))
}

/// Ordinary cells of `(T(k) × |F(Σ)|)/∼`: each chain `σ_0 < … < σ_p` carries
/// the cells of the torus `T/T_{σ_0}` of rank `m = n − dim σ_0` times a `p`-simplex.
pub fn cell_census(fan: &Fan, field: Field) -> CellCensus {
    let n = fan.ambient_rank() as u64;
    let mut counts: Vec<u64> = Vec::new();
    let mut add = |d: usize, k: u64| {
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += k;
    };
    for (p, layer) in fan.order_complex().simplices.iter().enumerate() {
        for chain in layer {
            let m = n - fan.dim(chain[0]) as u64;
            match field {
                Field::Complex => (0..=m).for_each(|j| add(j as usize + p, binomial(m, j))),
                Field::Real => add(p, 1u64 << m),
                Field::NonNegative => add(p, 1),
            }
        }
    }
    let euler = counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    CellCensus { field, counts, euler }
}

/// The cube `I_τ^σ`, triangulated by the maximal chains from τ to σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub lower: ConeId,
    pub upper: ConeId,
    pub dim: usize,
    pub simplices: Vec<Vec<ConeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicalSubdivision {
    pub cubes: Vec<Cube>,
    pub counts: Vec<usize>,
    pub euler: i64,
}

impl CubicalSubdivision {
    /// Cubes `I_τ'^σ'` with `τ' ≤ min(chain)` and `max(chain) ≤ σ'`.
    pub fn cubes_containing<'a>(&'a self, fan: &'a Fan, chain: &'a [ConeId]) -> impl Iterator<Item = &'a Cube> + 'a {
        let lo = chain[0];
        let hi = *chain.last().expect("nonempty chain");
        self.cubes
            .iter()
            .filter(move |c| fan.is_face(c.lower, lo) && fan.is_face(hi, c.upper))
    }
}

fn maximal_chains(fan: &Fan, lower: ConeId, upper: ConeId) -> Vec<Vec<ConeId>> {
    if lower == upper {
        return vec![vec![lower]];
    }
    let mut out = Vec::new();
    for &f in fan.facets_of(upper) {
        if fan.is_face(lower, f) {
            for mut c in maximal_chains(fan, lower, f) {
                c.push(upper);
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

pub fn cubical_subdivision(fan: &Fan) -> Result<CubicalSubdivision> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let mut cubes = Vec::new();
    for lower in fan.ids() {
        for &upper in fan.star_poset(lower) {
            cubes.push(Cube {
                lower,
                upper,
                dim: fan.dim(upper) - fan.dim(lower),
                simplices: maximal_chains(fan, lower, upper),
            });
        }
    }
    cubes.sort_by_key(|c| (c.dim, c.lower, c.upper));
    let mut counts = vec![0usize; fan.ambient_rank() + 1];
    for c in &cubes {
        counts[c.dim] += 1;
    }
    let euler = counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    Ok(CubicalSubdivision { cubes, counts, euler })
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

    fn summary(h: &[HomologyGroup]) -> Vec<(i64, usize, Vec<i64>)> {
        h.iter()
            .map(|g| (g.degree, g.free_rank, g.torsion.iter().map(|t| t.try_into().unwrap()).collect()))
            .collect()
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let c = SimplicialComplexZ::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(c.boundary_squares_to_zero());
        assert_eq!(summary(&reduced_homology(&c)), vec![(-1, 0, vec![]), (0, 0, vec![]), (1, 1, vec![])]);
    }

    #[test]
    fn point_and_empty() {
        let pt = SimplicialComplexZ::from_facets(&[vec![7]]);
        assert!(reduced_homology(&pt).iter().all(HomologyGroup::is_zero));
        let empty = SimplicialComplexZ::from_facets(&[]);
        assert_eq!(summary(&reduced_homology(&empty)), vec![(-1, 1, vec![])]);
    }

    #[test]
    fn projective_plane() {
        let facets: Vec<Vec<usize>> = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ]
        .iter()
        .map(|f| f.to_vec())
        .collect();
        let c = SimplicialComplexZ::from_facets(&facets);
        assert_eq!(c.f_vector(), vec![6, 15, 10]);
        assert!(c.boundary_squares_to_zero());
        assert_eq!(
            summary(&reduced_homology(&c)),
            vec![(-1, 0, vec![]), (0, 0, vec![]), (1, 0, vec![2]), (2, 0, vec![])]
        );
    }

    #[test]
    fn links_in_p2() {
        let f = p2();
        let h0 = link_homology(&f, f.zero_cone()).unwrap();
        assert_eq!(summary(&h0)[1..], [(0, 0, vec![]), (1, 1, vec![])]);
        let ray = f.cones_of_dim(1)[0];
        let hr = link_homology(&f, ray).unwrap();
        assert_eq!(summary(&hr), vec![(-1, 0, vec![]), (0, 1, vec![])]);
        let top = f.maximal()[0];
        assert_eq!(summary(&link_homology(&f, top).unwrap()), vec![(-1, 1, vec![])]);
        assert!(f.ids().all(|s| free_link_check(&f, s).unwrap()));
        assert!(matches!(link_homology(&f, ConeId(99)), Err(Error::ConeNotInFan(_))));
    }

    #[test]
    fn antipodal_link_fails() {
        let f = Fan::from_maximal(2, &[[1, 0], [0, 1], [-1, 0], [0, -1]], &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(!free_link_check(&f, f.zero_cone()).unwrap());
        assert!(free_link_check(&p1(), p1().zero_cone()).unwrap());
    }

    #[test]
    fn census() {
        let f = p2();
        assert_eq!(cell_census(&f, Field::Complex).euler, 3);
        let r = cell_census(&f, Field::NonNegative);
        assert_eq!((r.counts, r.euler), (vec![7, 12, 6], 1));
        let r = cell_census(&p1(), Field::Real);
        assert_eq!((r.counts, r.euler), (vec![4, 4], 0));
        assert_eq!("R+".parse::<Field>().unwrap(), Field::NonNegative);
    }

    #[test]
    fn cubes() {
        let c = cubical_subdivision(&p2()).unwrap();
        assert_eq!((c.counts.clone(), c.euler), (vec![7, 9, 3], 1));
        assert!(c.cubes.iter().all(|q| q.simplices.len() == (1..=q.dim).product::<usize>()));
        let c = cubical_subdivision(&p1()).unwrap();
        assert_eq!(c.counts, vec![3, 2]);
        let orthant = Fan::from_maximal(2, &[[1, 0], [0, 1]], &[vec![0, 1]]).unwrap();
        assert!(matches!(cubical_subdivision(&orthant), Err(Error::NotComplete)));
    }
}
