//! Rational fans and their face posets.
//!
//! A [`Fan`] is stored fully face-closed. Cones are numbered by [`ConeId`] in
//! a canonical order (dimension, then sorted ray indices), and every matrix
//! built downstream indexes blocks in that order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::cone::{Cone, LatticeVector};
use crate::error::{Error, Result};
use crate::linalg::primitive_i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ConeId(pub usize);

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Cone>,
    ray_ids: Vec<Vec<usize>>,
    maximal: Vec<ConeId>,
    faces: Vec<Vec<ConeId>>,
    cofaces: Vec<Vec<ConeId>>,
    facets: Vec<Vec<ConeId>>,
    index: HashMap<Vec<usize>, ConeId>,
    fingerprint: u64,
}

/// Strictly ascending chains `σ_0 < ... < σ_p`, grouped by `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderComplex {
    pub vertices: Vec<ConeId>,
    pub simplices: Vec<Vec<Vec<ConeId>>>,
}

impl OrderComplex {
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(p, s)| if p % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    pub fn contains(&self, chain: &[ConeId]) -> bool {
        chain
            .len()
            .checked_sub(1)
            .and_then(|p| self.simplices.get(p))
            .is_some_and(|s| s.binary_search_by(|c| c.as_slice().cmp(chain)).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HereditaryFailure {
    pub cone: ConeId,
    /// Facet-connected components of the maximal cones containing `cone`.
    pub components: Vec<Vec<ConeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HereditaryReport {
    pub hereditary: bool,
    pub maximal_full_dim: bool,
    pub failures: Vec<HereditaryFailure>,
}

impl Fan {
    /// Builds a fan from its generating cones, given as index lists into `rays`.
    ///
    /// Faces are added, generators contained in other generators as faces
    /// are absorbed, and every pair of generators is checked to meet in a
    /// common face.
    pub fn from_maximal<R: AsRef<[i64]>>(ambient_rank: usize, rays: &[R], cones: &[Vec<usize>]) -> Result<Fan> {
        for r in rays {
            if r.as_ref().len() != ambient_rank {
                return Err(Error::DimensionMismatch(format!(
                    "ray {:?} has length {}, expected {ambient_rank}",
                    r.as_ref(),
                    r.as_ref().len()
                )));
            }
        }
        let mut generators = Vec::with_capacity(cones.len());
        for (k, idx) in cones.iter().enumerate() {
            let mut gens = Vec::with_capacity(idx.len());
            for &i in idx {
                let r = rays.get(i).ok_or_else(|| {
                    Error::Parse(format!("cone {k}: ray index {i} out of range ({} rays)", rays.len()))
                })?;
                gens.push(r.as_ref().to_vec());
            }
            let c = Cone::from_rays(ambient_rank, &gens).map_err(|e| match e {
                Error::NotStronglyConvex { .. } => Error::NotStronglyConvex {
                    context: format!("cones[{k}] = {idx:?}"),
                },
                other => other,
            })?;
            generators.push(c);
        }
        let preferred: Vec<LatticeVector> = rays.iter().map(|r| primitive_i64(r.as_ref())).collect();
        Self::from_cones(ambient_rank, &preferred, generators)
    }

    /// Builds a fan from arbitrary generating cones. Rays are numbered in
    /// the order they appear in `preferred_rays`, any others afterwards in
    /// sorted order.
    pub fn from_cones(ambient_rank: usize, preferred_rays: &[LatticeVector], generators: Vec<Cone>) -> Result<Fan> {
        let mut gens: Vec<Cone> = Vec::new();
        for g in generators {
            if g.ambient_rank() != ambient_rank {
                return Err(Error::DimensionMismatch(format!("{g} is not in rank {ambient_rank}")));
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        if gens.is_empty() {
            gens.push(Cone::zero(ambient_rank));
        }

        // Ray table.
        let mut used: BTreeSet<LatticeVector> = BTreeSet::new();
        for g in &gens {
            used.extend(g.rays().iter().cloned());
        }
        let mut rays: Vec<LatticeVector> = Vec::new();
        for r in preferred_rays {
            if used.contains(r) && !rays.contains(r) {
                rays.push(r.clone());
            }
        }
        for r in &used {
            if !rays.contains(r) {
                rays.push(r.clone());
            }
        }
        let ray_index: HashMap<&LatticeVector, usize> = rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let key_of = |c: &Cone| -> Vec<usize> {
            let mut k: Vec<usize> = c.rays().iter().map(|r| ray_index[r]).collect();
            k.sort_unstable();
            k
        };

        // Pairwise fan condition on generators.
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                check_meet(&gens[i], &gens[j])?;
            }
        }

        let mut all: BTreeMap<(usize, Vec<usize>), Cone> = BTreeMap::new();
        for g in &gens {
            for f in g.faces() {
                let k = key_of(&f);
                all.entry((f.dim(), k)).or_insert(f);
            }
        }

        let mut cones = Vec::with_capacity(all.len());
        let mut ray_ids = Vec::with_capacity(all.len());
        let mut index = HashMap::with_capacity(all.len());
        for (i, ((_, key), c)) in all.into_iter().enumerate() {
            index.insert(key.clone(), ConeId(i));
            ray_ids.push(key);
            cones.push(c);
        }

        let n = cones.len();
        let mut faces = vec![Vec::new(); n];
        let mut cofaces = vec![Vec::new(); n];
        let mut facets = vec![Vec::new(); n];
        for s in 0..n {
            for t in 0..n {
                if cones[t].dim() <= cones[s].dim() && is_subset(&ray_ids[t], &ray_ids[s]) {
                    faces[s].push(ConeId(t));
                    cofaces[t].push(ConeId(s));
                    if cones[t].dim() + 1 == cones[s].dim() {
                        facets[s].push(ConeId(t));
                    }
                }
            }
        }
        let maximal: Vec<ConeId> = (0..n).filter(|&s| cofaces[s].len() == 1).map(ConeId).collect();

        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        ambient_rank.hash(&mut hasher);
        rays.hash(&mut hasher);
        for m in &maximal {
            ray_ids[m.0].hash(&mut hasher);
        }

        Ok(Fan {
            ambient_rank,
            rays,
            cones,
            ray_ids,
            maximal,
            faces,
            cofaces,
            facets,
            index,
            fingerprint: hasher.finish(),
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id.0]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn ids(&self) -> impl Iterator<Item = ConeId> + '_ {
        (0..self.cones.len()).map(ConeId)
    }

    pub fn ray_ids(&self, id: ConeId) -> &[usize] {
        &self.ray_ids[id.0]
    }

    pub fn dim(&self, id: ConeId) -> usize {
        self.cones[id.0].dim()
    }

    pub fn maximal(&self) -> &[ConeId] {
        &self.maximal
    }

    /// Cones of dimension `d`, in canonical order.
    pub fn cones_of_dim(&self, d: usize) -> Vec<ConeId> {
        self.ids().filter(|&c| self.dim(c) == d).collect()
    }

    pub fn zero_cone(&self) -> ConeId {
        ConeId(0)
    }

    /// All faces `τ ≤ σ`, including `σ`.
    pub fn faces_of(&self, id: ConeId) -> &[ConeId] {
        &self.faces[id.0]
    }

    pub fn facets_of(&self, id: ConeId) -> &[ConeId] {
        &self.facets[id.0]
    }

    /// The star of σ as a poset: all `τ ≥ σ`, including σ.
    pub fn star_poset(&self, id: ConeId) -> &[ConeId] {
        &self.cofaces[id.0]
    }

    pub fn is_face(&self, tau: ConeId, sigma: ConeId) -> bool {
        self.faces[sigma.0].binary_search(&tau).is_ok()
    }

    pub fn id_of(&self, cone: &Cone) -> Option<ConeId> {
        let mut key = Vec::with_capacity(cone.rays().len());
        for r in cone.rays() {
            key.push(self.rays.iter().position(|x| x == r)?);
        }
        key.sort_unstable();
        let id = *self.index.get(&key)?;
        (self.cones[id.0] == *cone).then_some(id)
    }

    pub fn id_of_rays(&self, ray_ids: &[usize]) -> Option<ConeId> {
        let mut key = ray_ids.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    /// `σ ∩ τ`, which is a cone of the fan.
    pub fn intersection(&self, a: ConeId, b: ConeId) -> ConeId {
        let common: Vec<usize> = self.ray_ids[a.0]
            .iter()
            .copied()
            .filter(|r| self.ray_ids[b.0].contains(r))
            .collect();
        self.index[&common]
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn contains_point(&self, v: &[i64]) -> bool {
        self.maximal.iter().any(|&m| self.cones[m.0].contains(v))
    }

    pub fn maximal_full_dim(&self) -> bool {
        self.maximal.iter().all(|&m| self.cones[m.0].is_full_dimensional())
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(Cone::is_smooth)
    }

    /// Full-dimensional cones having `tau` as a facet.
    pub fn full_dim_cofacets(&self, tau: ConeId) -> Vec<ConeId> {
        let n = self.ambient_rank;
        self.cofaces[tau.0]
            .iter()
            .copied()
            .filter(|&s| self.dim(s) == n && self.dim(tau) + 1 == n)
            .collect()
    }

    /// Support is all of `N_R`: pure full-dimensional, every codimension-one
    /// cone a facet of exactly two full-dimensional cones, and the
    /// facet-adjacency graph on top cones connected.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient_rank;
        if !self.maximal_full_dim() {
            return false;
        }
        if n > 0 {
            for tau in self.cones_of_dim(n - 1) {
                if self.full_dim_cofacets(tau).len() != 2 {
                    return false;
                }
            }
        }
        let complete = self.facet_components(&self.maximal).len() == 1;
        debug_assert!(!complete || self.probe_support(), "completeness criterion disagrees with point probe");
        complete
    }

    fn probe_support(&self) -> bool {
        let n = self.ambient_rank;
        if n > 3 {
            return true;
        }
        let count = 5usize.pow(n as u32);
        (0..count).all(|mut k| {
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let x = (k % 5) as i64 - 2;
                    k /= 5;
                    x
                })
                .collect();
            self.contains_point(&v)
        })
    }

    /// Groups full-dimensional cones from `among` into classes connected by
    /// shared facets. Components are sorted; each lists its cones in order.
    pub fn facet_components(&self, among: &[ConeId]) -> Vec<Vec<ConeId>> {
        let n = self.ambient_rank;
        let nodes: Vec<ConeId> = among.iter().copied().filter(|&c| self.dim(c) == n).collect();
        let pos: HashMap<ConeId, usize> = nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        if n > 0 {
            for tau in self.cones_of_dim(n - 1) {
                let above: Vec<usize> = self.full_dim_cofacets(tau).iter().filter_map(|c| pos.get(c).copied()).collect();
                for w in above.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<ConeId>> = BTreeMap::new();
        for (i, &node) in nodes.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(node);
        }
        groups.into_values().collect()
    }

    /// All strictly ascending chains within `vertices` (which must be
    /// sorted), grouped by length.
    pub fn chains_within(&self, vertices: &[ConeId]) -> OrderComplex {
        let allowed: BTreeSet<ConeId> = vertices.iter().copied().collect();
        let mut simplices: Vec<Vec<Vec<ConeId>>> = Vec::new();
        let mut stack: Vec<Vec<ConeId>> = vertices.iter().map(|&v| vec![v]).collect();
        while let Some(chain) = stack.pop() {
            let p = chain.len() - 1;
            if simplices.len() <= p {
                simplices.resize(p + 1, Vec::new());
            }
            let top = *chain.last().expect("chains are nonempty");
            for &up in &self.cofaces[top.0] {
                if up != top && allowed.contains(&up) {
                    let mut next = chain.clone();
                    next.push(up);
                    stack.push(next);
                }
            }
            simplices[p].push(chain);
        }
        for s in &mut simplices {
            s.sort();
        }
        OrderComplex {
            vertices: vertices.to_vec(),
            simplices,
        }
    }

    /// The order complex `F(Σ)`, zero cone included.
    pub fn order_complex(&self) -> OrderComplex {
        let all: Vec<ConeId> = self.ids().collect();
        self.chains_within(&all)
    }

    /// The fan in `N(σ)` describing the orbit closure: images of the cones
    /// containing σ under the quotient map.
    pub fn star_fan(&self, sigma: ConeId) -> Result<Fan> {
        self.check_id(sigma)?;
        let pi = self.cones[sigma.0].quotient_map();
        let mut gens = Vec::new();
        let mut ray_order = Vec::new();
        for &tau in &self.cofaces[sigma.0] {
            if !self.maximal.contains(&tau) {
                continue;
            }
            let mut img = Vec::new();
            for r in self.cones[tau.0].rays() {
                let v = primitive_i64(&pi.apply(r)?);
                if v.iter().any(|&x| x != 0) {
                    if !ray_order.contains(&v) {
                        ray_order.push(v.clone());
                    }
                    img.push(v);
                }
            }
            gens.push(Cone::from_rays(pi.target_rank, &img)?);
        }
        Fan::from_cones(pi.target_rank, &ray_order, gens)
    }

    /// Barycentric subdivision of the star of σ, as a fan in `N(σ)`: one cone
    /// per chain `σ = σ_0 < σ_1 < ... < σ_p`, spanned by `π_σ(v_{σ_i})`.
    pub fn barycentric_fan(&self, sigma: ConeId) -> Result<Fan> {
        self.check_id(sigma)?;
        let pi = self.cones[sigma.0].quotient_map();
        let upper: Vec<ConeId> = self.cofaces[sigma.0].iter().copied().filter(|&t| t != sigma).collect();
        let mut point: HashMap<ConeId, LatticeVector> = HashMap::new();
        let mut ray_order = Vec::new();
        for &t in &upper {
            let v = primitive_i64(&pi.apply(&self.cones[t.0].interior_point()?)?);
            ray_order.push(v.clone());
            point.insert(t, v);
        }
        let chains = self.chains_within(&upper);
        let mut gens = Vec::new();
        for layer in &chains.simplices {
            for chain in layer {
                // saturated chains from a cover of σ up to a maximal cone
                let top = *chain.last().expect("nonempty");
                let saturated = self.dim(chain[0]) == self.dim(sigma) + 1
                    && chain.windows(2).all(|w| self.dim(w[0]) + 1 == self.dim(w[1]))
                    && self.maximal.contains(&top);
                if !saturated {
                    continue;
                }
                let gens_of: Vec<&LatticeVector> = chain.iter().map(|c| &point[c]).collect();
                gens.push(Cone::from_rays(pi.target_rank, &gens_of)?);
            }
        }
        let fan = Fan::from_cones(pi.target_rank, &ray_order, gens)?;
        if !fan.is_simplicial() {
            return Err(Error::NotAFan {
                first: "barycentric subdivision".into(),
                second: "is not simplicial".into(),
            });
        }
        Ok(fan)
    }

    pub fn hereditary_report(&self) -> HereditaryReport {
        let full = self.maximal_full_dim();
        let mut failures = Vec::new();
        if full {
            for tau in self.ids() {
                let star_max: Vec<ConeId> = self.cofaces[tau.0]
                    .iter()
                    .copied()
                    .filter(|c| self.maximal.contains(c))
                    .collect();
                let comps = self.facet_components(&star_max);
                if comps.len() > 1 {
                    failures.push(HereditaryFailure { cone: tau, components: comps });
                }
            }
        }
        HereditaryReport {
            hereditary: full && failures.is_empty(),
            maximal_full_dim: full,
            failures,
        }
    }

    pub fn is_hereditary(&self) -> bool {
        self.hereditary_report().hereditary
    }

    /// Checks that `completion` is a complete fan containing `self` as a
    /// subfan, with `F(self)` and its complement full subcomplexes of the
    /// completion's order complex.
    pub fn is_completed_by(&self, completion: &Fan) -> bool {
        if self.ambient_rank != completion.ambient_rank || !completion.is_complete() {
            return false;
        }
        let mut inside = Vec::new();
        for c in &self.cones {
            match completion.id_of(c) {
                Some(id) => inside.push(id),
                None => return false,
            }
        }
        inside.sort();
        let outside: Vec<ConeId> = completion.ids().filter(|c| inside.binary_search(c).is_err()).collect();

        // Every chain of the completion on vertices of `self` must be a chain of `self`.
        let own = self.order_complex();
        let sub = completion.chains_within(&inside);
        for chain in sub.simplices.iter().flatten() {
            let mapped: Option<Vec<ConeId>> = chain.iter().map(|&c| self.id_of(completion.cone(c))).collect();
            match mapped {
                Some(m) if own.contains(&m) => {}
                _ => return false,
            }
        }
        // The complement is full by construction of chains_within; check it is
        // closed under subchains as a sanity condition.
        let rest = completion.chains_within(&outside);
        rest.simplices
            .iter()
            .flatten()
            .all(|ch| ch.iter().all(|c| outside.binary_search(c).is_ok()))
    }

    fn check_id(&self, id: ConeId) -> Result<()> {
        if id.0 < self.cones.len() {
            Ok(())
        } else {
            Err(Error::ConeNotInFan(id.to_string()))
        }
    }
}

/// Convenience wrapper matching the module's operation names.
pub fn fan_from_maximal<R: AsRef<[i64]>>(ambient_rank: usize, rays: &[R], maximal_cones: &[Vec<usize>]) -> Result<Fan> {
    Fan::from_maximal(ambient_rank, rays, maximal_cones)
}

pub fn validate_completion(f: &Fan, g: &Fan) -> bool {
    f.is_completed_by(g)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Fails unless `a ∩ b` is a face of both.
fn check_meet(a: &Cone, b: &Cone) -> Result<()> {
    let n = a.ambient_rank();
    let common: Vec<LatticeVector> = a.rays().iter().filter(|r| b.rays().contains(r)).cloned().collect();
    let common_cone = Cone::from_rays(n, &common)?;
    let err = || Error::NotAFan {
        first: a.to_string(),
        second: b.to_string(),
    };
    if !a.has_face(&common_cone) || !b.has_face(&common_cone) {
        return Err(err());
    }
    let mut ineqs: Vec<LatticeVector> = a.facet_normals().to_vec();
    ineqs.extend(b.facet_normals().iter().cloned());
    let mut eqs: Vec<LatticeVector> = a.perp_basis().to_vec();
    eqs.extend(b.perp_basis().iter().cloned());
    let meet = Cone::from_inequalities(n, &ineqs, &eqs)?;
    if meet != common_cone {
        return Err(err());
    }
    debug_assert!(meet.rays().iter().all(|r| a.contains(r) && b.contains(r)));
    Ok(())
}
