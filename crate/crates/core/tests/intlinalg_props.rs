mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use trace_kit_core::intlinalg::{cokernel_class, kron, smith_normal_form, trace, IntMatrix};

use common::{random_matrix, random_unimodular, rng};

/// Cofactor expansion along the first row.
fn det_oracle(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| a[(r + 1, if c < j { c } else { c + 1 })].clone());
        let term = &a[(0, j)] * det_oracle(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_factorization(seed in any::<u64>(), rows in 0usize..5, cols in 0usize..5) {
        let a = random_matrix(&mut rng(seed), rows, cols, 6);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&(&snf.u * &a) * &snf.v, snf.s.clone());
        prop_assert!(snf.u.determinant().unwrap().abs().is_one());
        prop_assert!(snf.v.determinant().unwrap().abs().is_one());
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    prop_assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
        let d = snf.invariant_factors();
        for k in 0..d.len() {
            prop_assert!(!d[k].is_negative());
            if k + 1 < d.len() && !d[k].is_zero() {
                prop_assert!(d[k + 1].is_multiple_of(&d[k]));
            }
            if d[k].is_zero() {
                prop_assert!(d[k..].iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion(seed in any::<u64>(), n in 0usize..5) {
        let a = random_matrix(&mut rng(seed), n, n, 5);
        prop_assert_eq!(a.determinant().unwrap(), det_oracle(&a));
    }

    #[test]
    fn unimodular_inverse(seed in any::<u64>(), n in 1usize..5) {
        let (u, v) = random_unimodular(&mut rng(seed), n);
        prop_assert_eq!(u.inverse_unimodular().unwrap(), v);
    }

    #[test]
    fn cokernel_classes_ignore_boundaries(seed in any::<u64>(), rows in 1usize..5, cols in 0usize..5) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, rows, cols, 4);
        let v = random_matrix(&mut r, rows, 1, 9).col_vec(0);
        let w = random_matrix(&mut r, cols, 1, 3).col_vec(0);
        let shifted: Vec<BigInt> = v.iter().zip(a.mul_vec(&w).unwrap()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(cokernel_class(&a, &v).unwrap(), cokernel_class(&a, &shifted).unwrap());
    }

    #[test]
    fn kron_trace_multiplies(seed in any::<u64>(), n in 0usize..4, m in 0usize..4) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n, 4);
        let b = random_matrix(&mut r, m, m, 4);
        prop_assert_eq!(trace(&kron(&a, &b, 1)).unwrap(), trace(&a).unwrap() * trace(&b).unwrap());
        prop_assert_eq!(trace(&kron(&a, &b, -1)).unwrap(), -(trace(&a).unwrap() * trace(&b).unwrap()));
    }
}

#[test]
fn cyclic_cokernels_match_residues() {
    for m in 1i64..8 {
        let a = IntMatrix::from_i64(&[&[m]]);
        for x in -10i64..10 {
            for y in -10i64..10 {
                let same = cokernel_class(&a, &[BigInt::from(x)]).unwrap() == cokernel_class(&a, &[BigInt::from(y)]).unwrap();
                assert_eq!(same, (x - y).rem_euclid(m) == 0);
            }
        }
    }
}
