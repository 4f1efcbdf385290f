use hall_core::fq::{enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial, rref_rank_kernel, FqMatrix};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = FqMatrix> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 0usize..6, 0usize..6).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |data| FqMatrix::from_vec(r, c, p, data).unwrap())
    })
}

fn square_matrix() -> impl Strategy<Value = FqMatrix> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 0usize..6).prop_flat_map(|(p, n)| {
        prop::collection::vec(0..p, n * n).prop_map(move |data| FqMatrix::from_vec(n, n, p, data).unwrap())
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(m in matrix()) {
        let red = rref_rank_kernel(&m);
        prop_assert_eq!(red.rank + red.kernel.rows(), m.cols());
        prop_assert_eq!(red.rank, m.transpose().rank());
    }

    #[test]
    fn kernel_rows_are_annihilated(m in matrix()) {
        let red = rref_rank_kernel(&m);
        for r in 0..red.kernel.rows() {
            prop_assert!(m.mul_vec(red.kernel.row(r)).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(red.kernel.rank(), red.kernel.rows());
    }

    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let once = rref_rank_kernel(&m);
        let twice = rref_rank_kernel(&once.rref);
        prop_assert_eq!(&once.rref, &twice.rref);
        prop_assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn row_space_survives_row_reduction(m in matrix()) {
        let red = rref_rank_kernel(&m);
        prop_assert_eq!(m.row_space(), red.rref.row_space());
    }

    #[test]
    fn square_inverse_round_trips(m in square_matrix()) {
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(m.mul(&inv), FqMatrix::identity(m.rows(), m.modulus()));
                prop_assert_eq!(inv.mul(&m), FqMatrix::identity(m.rows(), m.modulus()));
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }
}

#[test]
fn subspace_counts_are_gaussian_binomials() {
    for p in [2u32, 3] {
        for n in 0..=4usize {
            let mut total = 0u64;
            for k in 0..=n {
                let subs = enumerate_subspaces(n, k, p).unwrap();
                assert_eq!(subs.len() as u64, gaussian_binomial(n as u32, k as u32, p as u64), "n={n} k={k} p={p}");
                assert!(subs.iter().all(|s| s.dim() == k));
                total += subs.len() as u64;
            }
            assert_eq!(enumerate_all_subspaces(n, p).len() as u64, total);
        }
    }
}

#[test]
fn subspaces_are_pairwise_distinct() {
    let subs = enumerate_subspaces(4, 2, 2).unwrap();
    for (i, a) in subs.iter().enumerate() {
        for b in &subs[i + 1..] {
            assert!(!(a.contains_subspace(b) && b.contains_subspace(a)));
        }
    }
}
