use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toricfan::linalg::*;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

fn square(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), n).prop_map(move |rows| IntMatrix::from_rows(n, &rows))
}

fn unit(d: &BigInt) -> bool {
    d.abs().is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_witnesses(a in matrix(7, 9)) {
        let s = smith_normal_form(&a);
        let d = &(&s.left_transform * &a) * &s.right_transform;
        prop_assert_eq!(&d, &s.diagonal_matrix());
        prop_assert!(unit(&s.left_transform.determinant()));
        prop_assert!(unit(&s.right_transform.determinant()));
        for w in s.diagonal.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        prop_assert_eq!(smith_diagonal(&a), s.diagonal.clone());
    }

    #[test]
    fn kernel_is_saturated_and_complementary(a in matrix(7, 5)) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.rows(), a.cols());
        prop_assert_eq!(k.cols() + rank(&a), a.cols());
        prop_assert!((&a * &k).is_zero());
        if k.cols() > 0 {
            prop_assert!(is_saturated(&k));
        }
    }

    #[test]
    fn kernel_is_canonical(a in matrix(6, 4), rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..4)) {
        // appending combinations of existing rows leaves the kernel unchanged
        let mut extended = a.row_vecs();
        for coeffs in rows {
            let mut r = vec![BigInt::zero(); a.cols()];
            for (i, c) in coeffs.iter().enumerate().take(a.rows()) {
                for (j, x) in a.row(i).iter().enumerate() {
                    r[j] += x * c;
                }
            }
            extended.push(r);
        }
        let b = IntMatrix::from_big_rows(a.cols(), extended);
        prop_assert_eq!(kernel_basis(&a), kernel_basis(&b));
    }

    #[test]
    fn hermite_form_is_idempotent(a in matrix(6, 9)) {
        let h = hermite_rows(&a);
        prop_assert_eq!(h.rows(), rank(&a));
        prop_assert_eq!(hermite_rows(&h), h.clone());
        prop_assert!(same_column_lattice(&a.transpose(), &h.transpose()));
    }

    #[test]
    fn solve_recovers_images(a in matrix(6, 6), x in prop::collection::vec(-5i64..=5, 6)) {
        let x = to_big_vec(&x[..a.cols()]);
        let b = a.mul_vec(&x);
        let y = solve(&a, &b).expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn cokernel_counts(a in matrix(6, 9)) {
        let c = cokernel_invariants(&a);
        prop_assert_eq!(c.free_rank + rank(&a), a.rows());
        if a.rows() == a.cols() && c.free_rank == 0 {
            let order: BigInt = c.torsion.iter().product();
            prop_assert_eq!(order, a.determinant().abs());
        }
    }

    #[test]
    fn modular_rank_bounded(a in matrix(7, 9)) {
        let r = rank(&a);
        for p in [2u64, 3, 5, 7] {
            let rp = rank_mod_p(&a, p);
            prop_assert!(rp <= r);
            let diag = smith_diagonal(&a);
            let expected = diag.iter().filter(|d| !d.is_zero() && !d.is_multiple_of(&BigInt::from(p))).count();
            prop_assert_eq!(rp, expected);
        }
    }

    #[test]
    fn determinant_is_multiplicative((a, b) in (1usize..=5).prop_flat_map(|n| (square(n), square(n)))) {
        prop_assert_eq!((&a * &b).determinant(), a.determinant() * b.determinant());
    }
}

#[test]
fn huge_entries_stay_exact() {
    let big = 1i64 << 62;
    let a = IntMatrix::from_rows(3, &[[big, big - 1, 3], [big - 1, big - 2, 5], [7, 11, 13]]);
    let s = smith_normal_form(&a);
    assert_eq!(&(&s.left_transform * &a) * &s.right_transform, s.diagonal_matrix());
    assert_eq!(s.diagonal.iter().product::<BigInt>().abs(), a.determinant().abs());
}
