use std::collections::BTreeMap;

use proptest::prelude::*;

use skelcollar_core::bundles::{splitting_type, BundleTransition};
use skelcollar_core::duality::{dual_of_bundle_pair, dual_of_lagrangian};
use skelcollar_core::exact::{rat, sparse_kernel, SparseRow};
use skelcollar_core::{LaurentPoly, RatMatrix, Rational};

const VARS: [&str; 3] = ["z", "u", "w"];

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((small_rat(), prop::collection::vec(-2i64..=2, 3)), 0..5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, e)| {
                let pw: Vec<(&str, i64)> = VARS.iter().copied().zip(e).collect();
                LaurentPoly::monomial(c, &pw)
            })
            .sum()
    })
}

fn polynomial() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((small_rat(), prop::collection::vec(0i64..=2, 3)), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, e)| {
                let pw: Vec<(&str, i64)> = VARS.iter().copied().zip(e).collect();
                LaurentPoly::monomial(c, &pw)
            })
            .sum()
    })
}

fn matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
            .prop_map(|rows| RatMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
        prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn substitution_is_a_ring_map(a in laurent(), b in laurent(), p in polynomial()) {
        // w -> p needs non-negative w powers
        let bind = BTreeMap::from([("w".to_string(), p)]);
        let drop_neg_w = |f: &LaurentPoly| -> LaurentPoly {
            f.named_terms()
                .into_iter()
                .filter(|(m, _)| m.get("w").copied().unwrap_or(0) >= 0)
                .map(|(m, c)| {
                    let pw: Vec<(&str, i64)> = m.iter().map(|(k, &e)| (k.as_str(), e)).collect();
                    LaurentPoly::monomial(c, &pw)
                })
                .sum()
        };
        let (a, b) = (drop_neg_w(&a), drop_neg_w(&b));
        let s = |f: &LaurentPoly| f.substitute(&bind).unwrap();
        prop_assert_eq!(s(&(&a + &b)), s(&a) + s(&b));
        prop_assert_eq!(s(&(&a * &b)), s(&a) * s(&b));
    }

    #[test]
    fn inverse_of_monomials(c in small_rat(), e in prop::collection::vec(-3i64..=3, 3)) {
        prop_assume!(c != rat(0));
        let pw: Vec<(&str, i64)> = VARS.iter().copied().zip(e).collect();
        let m = LaurentPoly::monomial(c, &pw);
        prop_assert_eq!(&m * &m.inverse().unwrap(), LaurentPoly::one());
    }

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn sparse_kernel_agrees_with_dense(m in matrix()) {
        let rows: Vec<SparseRow> = (0..m.rows())
            .map(|i| m.row(i).iter().enumerate().filter(|(_, c)| **c != rat(0)).map(|(j, c)| (j, c.clone())).collect())
            .collect();
        let k = sparse_kernel(m.cols(), &rows);
        prop_assert_eq!(k.len(), m.kernel().len());
        for v in &k {
            let mut dense = vec![rat(0); m.cols()];
            for (j, c) in v {
                dense[*j] = c.clone();
            }
            prop_assert!(m.mul_vec(&dense).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn json_round_trip(a in laurent()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), a);
    }

    #[test]
    fn split_bundles_have_their_twist(n in 1u32..5, j in 0i64..5) {
        prop_assert_eq!(splitting_type(&BundleTransition::split(n, j)).unwrap(), j);
    }
}

#[test]
fn duality_is_a_bijection() {
    for n in 1..=12u32 {
        for j in 0..n as i64 {
            let pair = dual_of_lagrangian(n, j).unwrap();
            assert_eq!(dual_of_bundle_pair(n, pair).unwrap(), j);
        }
    }
}
