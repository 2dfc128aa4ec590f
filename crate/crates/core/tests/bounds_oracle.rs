mod common;

use common::{oracle_cover_deepening, oracle_cover_exists, oracle_maximal};
use proptest::prelude::*;
use xclab::bounds::{maximal_rectangles, min_rectangle_cover, nnegrank_bounds};
use xclab::exactmath::support;
use xclab::gadgets::matrix_m;
use xclab::{BooleanMatrix, Budget};

#[test]
fn maximal_rectangles_match_oracle() {
    for n in 1..=4 {
        let b = support(&matrix_m(n).unwrap());
        assert_eq!(maximal_rectangles(&b, 1 << 20).unwrap(), oracle_maximal(&b), "n={n}");
    }
}

#[test]
fn cover_sizes_match_subset_oracle() {
    for n in 1..=3 {
        let b = support(&matrix_m(n).unwrap());
        let rects = oracle_maximal(&b);
        let got = min_rectangle_cover(&b, &mut Budget::unlimited(), 1 << 20).unwrap();
        assert!(got.optimal);
        assert!(got.is_valid_for(&b));
        // no smaller cover among subsets of size ≤ 6; a cover of the found size exists
        assert!(!oracle_cover_exists(&b, &rects, (got.size - 1).min(6)), "n={n}");
        if got.size <= 6 {
            assert!(oracle_cover_exists(&b, &rects, got.size));
        }
    }
}

#[test]
fn support_zero_iff_single_overlap() {
    for n in 1..=4 {
        let b = support(&matrix_m(n).unwrap());
        for a in 0..1usize << n {
            for c in 0..1usize << n {
                assert_eq!(!b.get(a, c), (a & c).count_ones() == 1);
            }
        }
    }
}

fn small_bool() -> impl Strategy<Value = Vec<Vec<u8>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(0u8..2, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cover_invariant_under_permutation(rows in small_bool(), seed in any::<u64>()) {
        let b = BooleanMatrix::from_u8(&rows);
        let mut rp: Vec<usize> = (0..b.rows()).collect();
        let mut cp: Vec<usize> = (0..b.cols()).collect();
        let mut s = seed;
        for v in [&mut rp, &mut cp] {
            for i in (1..v.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (s >> 33) as usize % (i + 1));
            }
        }
        let p = b.permuted(&rp, &cp);
        let c1 = min_rectangle_cover(&b, &mut Budget::unlimited(), 1 << 16).unwrap();
        let c2 = min_rectangle_cover(&p, &mut Budget::unlimited(), 1 << 16).unwrap();
        prop_assert!(c1.is_valid_for(&b) && c2.is_valid_for(&p));
        prop_assert_eq!(c1.size, c2.size);
        let rects = oracle_maximal(&b);
        prop_assert_eq!(c1.size, oracle_cover_deepening(&b, &rects));
    }

    #[test]
    fn bound_chain(rows in prop::collection::vec(prop::collection::vec(0i64..3, 4), 1..5)) {
        let m = xclab::RationalMatrix::from_i64(&rows);
        let bd = nnegrank_bounds(&m, &mut Budget::unlimited(), 1 << 16, None).unwrap();
        prop_assert!(bd.cover.size <= bd.lower.max(bd.cover.size));
        prop_assert!(bd.cover.size <= bd.lower);
        prop_assert!(bd.lower <= bd.upper);
        prop_assert!(bd.upper <= m.rows().min(m.cols()).max(1));
        prop_assert!(xclab::factorization::verify_nonneg_factorization(&m, &bd.upper_witness).unwrap().passed());
    }
}
