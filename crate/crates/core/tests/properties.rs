//! Randomized properties of the linear algebra, the projective dimension
//! order and minimal resolutions.

use bifinite::corpus::{builtin, load_extension};
use bifinite::field::{Field, PrimeField, Rationals};
use bifinite::linalg::Matrix;
use bifinite::module::{minimal_resolution, random_module, PdStatus, RandomBounds};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    matrices(7)
}

fn matrices(max_cols: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..7, 1usize..max_cols).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..4, r * c)))
}

fn build<F: Field>(f: &F, r: usize, c: usize, entries: &[i64]) -> Matrix<F> {
    assert_eq!(entries.len(), r * c);
    let rows = entries.chunks(c).map(|row| row.iter().map(|&x| f.from_i64(x)).collect()).collect();
    Matrix::from_rows(f, c, rows)
}

fn status() -> impl Strategy<Value = PdStatus> {
    prop_oneof![Just(PdStatus::Zero), (0usize..6).prop_map(PdStatus::Finite), (1usize..6).prop_map(PdStatus::AtLeast)]
}

/// Every integer in the interval a status stands for; `Zero` is -1.
fn members(s: PdStatus) -> Vec<i64> {
    match s {
        PdStatus::Zero => vec![-1],
        PdStatus::Finite(n) => vec![n as i64],
        PdStatus::AtLeast(c) => (c as i64..12).collect(),
    }
}

proptest! {
    #[test]
    fn rank_plus_nullity((r, c, e) in matrix_strategy()) {
        for m in [build(&Rationals, r, c, &e).rank(), build(&PrimeField::new(1009).unwrap(), r, c, &e).rank()] {
            prop_assert!(m <= r.min(c));
        }
        let q = build(&Rationals, r, c, &e);
        let k = q.kernel_basis();
        prop_assert_eq!(q.rank() + k.rows(), c);
        if k.rows() > 0 {
            prop_assert!(q.mul(&k.transpose()).is_zero());
        }
        prop_assert_eq!(q.transpose().rank(), q.rank());
    }

    #[test]
    fn small_integer_ranks_agree_across_fields((r, c, e) in matrices(4)) {
        // Entries in [-3, 3], at most 3 columns: every minor is below 150 < 1009.
        let q = build(&Rationals, r, c, &e).rank();
        let p = build(&PrimeField::new(1009).unwrap(), r, c, &e).rank();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn interval_order_is_sound(a in status(), b in status()) {
        let all = members(a).into_iter().all(|x| members(b).into_iter().all(|y| x <= y));
        let none = members(a).into_iter().all(|x| members(b).into_iter().all(|y| x > y));
        match a.le(b) {
            Some(true) => prop_assert!(all),
            Some(false) => prop_assert!(none),
            None => prop_assert!(!all && !none),
        }
        let m = a.max(b);
        prop_assert_eq!(m, b.max(a));
        prop_assert_ne!(a.le(m), Some(false));
        prop_assert_ne!(b.le(m), Some(false));
    }

    #[test]
    fn random_resolutions_are_exact_and_minimal(seed in 0u64..10_000, which in 0usize..3) {
        let f = PrimeField::new(1009).unwrap();
        let name = ["ex1", "a3", "cyc2"][which];
        let ext = load_extension(&f, builtin(name).unwrap(), false).unwrap();
        let m = random_module(&ext.rings.a, seed, RandomBounds::default()).unwrap();
        let res = minimal_resolution(&m, 6).unwrap();
        prop_assert!(res.exactness().is_exact(), "{name} seed {seed}: {}", res.status);
        prop_assert!(res.is_minimal());
    }
}
