use proptest::prelude::*;
use toricfan::linalg::{rank, IntMatrix};
use toricfan::{Cone, Error};

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rays3() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..7)
}

fn pointed(rays: &[Vec<i64>]) -> Option<Cone> {
    match Cone::from_rays(3, rays) {
        Ok(c) => Some(c),
        Err(Error::NotStronglyConvex { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn h_and_v_descriptions_agree(gens in rays3()) {
        let Some(c) = pointed(&gens) else { return Ok(()) };
        for g in &gens {
            prop_assert!(c.contains(g));
        }
        for m in c.facet_normals() {
            prop_assert!(c.rays().iter().all(|r| dot(m, r) >= 0));
            let tight: Vec<&Vec<i64>> = c.rays().iter().filter(|r| dot(m, r) == 0).collect();
            let t = IntMatrix::from_rows(3, &tight);
            prop_assert_eq!(if tight.is_empty() { 0 } else { rank(&t) }, c.dim() - 1);
        }
        for p in c.perp_basis() {
            prop_assert!(c.rays().iter().all(|r| dot(p, r) == 0));
        }
        let back = Cone::from_inequalities(3, c.facet_normals(), c.perp_basis()).unwrap();
        prop_assert_eq!(&back, &c);
    }

    #[test]
    fn every_ray_is_extremal(gens in rays3()) {
        let Some(c) = pointed(&gens) else { return Ok(()) };
        for (i, r) in c.rays().iter().enumerate() {
            let others: Vec<Vec<i64>> = c.rays().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
            let rest = Cone::from_rays(3, &others).unwrap();
            prop_assert!(!rest.contains(r));
        }
    }

    #[test]
    fn face_lattice_euler_relation(gens in rays3()) {
        let Some(c) = pointed(&gens) else { return Ok(()) };
        let faces = c.faces();
        let euler: i64 = faces.iter().map(|f| if f.dim() % 2 == 0 { 1 } else { -1 }).sum();
        prop_assert_eq!(euler, if c.is_zero() { 1 } else { 0 });
        for f in &faces {
            prop_assert!(c.has_face(f));
        }
        prop_assert_eq!(faces.iter().filter(|f| f.dim() + 1 == c.dim()).count(), c.facet_normals().len());
    }

    #[test]
    fn duality_and_interior(gens in rays3()) {
        let Some(c) = pointed(&gens) else { return Ok(()) };
        if c.is_zero() {
            prop_assert_eq!(c.interior_point(), Err(Error::ZeroCone));
            return Ok(());
        }
        let v = c.interior_point().unwrap();
        prop_assert!(c.relative_interior_contains(&v));
        if c.is_full_dimensional() {
            let d = c.dual().unwrap();
            prop_assert_eq!(&d.dual().unwrap(), &c);
        }
        let q = c.quotient_map();
        prop_assert_eq!(q.target_rank, 3 - c.dim());
        for r in c.rays() {
            prop_assert!(q.apply(r).unwrap().iter().all(|&x| x == 0));
        }
        if c.is_smooth() {
            prop_assert_eq!(c.multiplicity().unwrap(), 1.into());
        }
    }
}

#[test]
fn simplicial_multiplicities() {
    let c = Cone::from_rays(2, &[[1, 0], [1, 2]]).unwrap();
    assert!(c.is_simplicial() && !c.is_smooth());
    assert_eq!(c.multiplicity().unwrap(), 2.into());
    let sq = Cone::from_rays(3, &[[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]]).unwrap();
    assert!(!sq.is_simplicial());
    assert_eq!(sq.facet_normals().len(), 4);
}
