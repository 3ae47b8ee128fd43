use num_integer::Integer;

use skelcollar_core::bundles::{phi_transform, splitting_type, BundleTransition};
use skelcollar_core::deform::{ext1_basis, reduce};
use skelcollar_core::duality::{duality_report, square_check, SquareOptions};
use skelcollar_core::exact::rat;
use skelcollar_core::skeleton::{build_atlas, skeleton};
use skelcollar_core::toric::{dynkin_dual_graph, hj_expansion, minimal_resolution, QuotientSingularity};
use skelcollar_core::LaurentPoly;

#[test]
fn skeleton_count_matches_collar_residues() {
    for n in 2..=8usize {
        assert_eq!(skeleton(n - 1).unwrap().len(), n);
    }
}

#[test]
fn atlas_transitions_form_a_cocycle() {
    for n in 1..=4 {
        assert!(build_atlas(n).unwrap().check_cocycle(), "n={n}");
    }
}

#[test]
fn resolution_follows_continued_fraction() {
    for n in 2..=15u32 {
        for a in 1..n {
            if a.gcd(&n) != 1 {
                continue;
            }
            let s = QuotientSingularity::new(n, a).unwrap();
            let chain = minimal_resolution(&s);
            let want: Vec<i64> = hj_expansion(n as u64, a as u64).unwrap().iter().map(|&x| -(x as i64)).collect();
            assert_eq!(chain.self_intersections, want, "1/{n}(1,{a})");
            assert!(dynkin_dual_graph(&chain).is_path());
        }
    }
}

#[test]
fn extension_splitting_types() {
    // [[z^j, z^k], [0, z^-j]] splits as |k| for |k| < j, and as j otherwise
    let z = |e: i64| LaurentPoly::monomial(rat(1), &[("z", e)]);
    for n in 1..=3u32 {
        for j in 0..=4i64 {
            for k in -j - 1..=j + 1 {
                let want = if k.abs() < j { k.abs() } else { j };
                assert_eq!(splitting_type(&BundleTransition::canonical(n, j, z(k))).unwrap(), want, "n={n} j={j} k={k}");
            }
        }
    }
}

#[test]
fn phi_preserves_collar_class() {
    for n in 1..=5u32 {
        for j in 0..=4 {
            let r = phi_transform(n, j).unwrap();
            assert!(r.preserves_collar_class());
            assert_eq!(r.j_out, j + n as i64);
        }
    }
}

#[test]
fn coboundaries_reduce_to_zero() {
    for n in 1..=3u32 {
        for j in 1..=3i64 {
            let b = ext1_basis(n, j, None).unwrap();
            // z^j lies in the image from the U side
            let c = reduce(n, j, &LaurentPoly::monomial(rat(1), &[("z", j)])).unwrap();
            assert!(c.is_zero(), "n={n} j={j}");
            for p in b.polys() {
                assert_eq!(reduce(n, j, &p).unwrap().p, p);
            }
        }
    }
}

#[test]
fn squares_under_other_seeds() {
    for seed in [2u64, 99, 12345] {
        let r = duality_report(5, &SquareOptions { samples: 30, seed, def_s: 1 }).unwrap();
        assert!(r.all_verified, "seed {seed}");
    }
    for s in 2..=3 {
        assert!(!square_check(6, 2, &SquareOptions { def_s: s, ..Default::default() }).unwrap().verdict);
    }
}
