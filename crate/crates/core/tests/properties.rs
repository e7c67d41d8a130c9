use proptest::prelude::*;
use quadra_core::equivalence::{
    are_equivalent, canonical_form, is_symmetric_equivalent, is_transpose_equivalent, PermPair,
};
use quadra_core::fixtures;
use quadra_core::matrix::{
    col_sum_multiset, is_strongly_quadrangular, row_sum_multiset, BinMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_matrix(max_n: usize) -> impl Strategy<Value = BinMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u16..(1u16 << n), n)
            .prop_map(move |rows| BinMatrix::from_row_words(n, &rows).unwrap())
    })
}

fn arb_matrix_with_perm(max_n: usize) -> impl Strategy<Value = (BinMatrix, PermPair)> {
    arb_matrix(max_n).prop_flat_map(|m| {
        let n = m.degree();
        (
            Just(m),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(|(m, r, c)| (m, PermPair::new(r, c).unwrap()))
    })
}

proptest! {
    #[test]
    fn transpose_is_an_involution(m in arb_matrix(8)) {
        prop_assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn zeros_and_ones_fill_the_matrix(m in arb_matrix(10)) {
        let n = m.degree();
        prop_assert_eq!(m.zero_count() + m.ones_count(), n * n);
    }

    #[test]
    fn sq_is_transpose_invariant(m in arb_matrix(6)) {
        prop_assert_eq!(is_strongly_quadrangular(&m), is_strongly_quadrangular(&m.transpose()));
    }

    #[test]
    fn text_round_trip(m in arb_matrix(12)) {
        prop_assert_eq!(BinMatrix::parse_text(&m.to_text()).unwrap(), m);
        prop_assert_eq!(m.to_text().parse::<BinMatrix>().unwrap(), m);
        let rows: Vec<String> = m.to_string().lines().map(str::to_owned).collect();
        prop_assert_eq!(BinMatrix::from_row_strs(&rows).unwrap(), m);
    }

    #[test]
    fn json_round_trip(m in arb_matrix(8)) {
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<BinMatrix>(&json).unwrap(), m);
    }

    #[test]
    fn canonical_form_is_permutation_invariant((m, p) in arb_matrix_with_perm(7)) {
        let moved = p.apply(&m).unwrap();
        prop_assert_eq!(canonical_form(&moved), canonical_form(&m));
        prop_assert!(are_equivalent(&m, &moved).unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent_and_equivalent(m in arb_matrix(7)) {
        let c = canonical_form(&m);
        prop_assert_eq!(canonical_form(&c), c);
        prop_assert!(are_equivalent(&m, &c).unwrap());
        prop_assert!(c <= m);
    }

    #[test]
    fn equivalence_preserves_invariants(a in arb_matrix(5), b in arb_matrix(5)) {
        if a.degree() == b.degree() && are_equivalent(&a, &b).unwrap() {
            prop_assert_eq!(a.zero_count(), b.zero_count());
            prop_assert_eq!(row_sum_multiset(&a), row_sum_multiset(&b));
            prop_assert_eq!(col_sum_multiset(&a), col_sum_multiset(&b));
        }
    }

    #[test]
    fn equivalence_is_symmetric_and_transitive((m, p) in arb_matrix_with_perm(6), seed in any::<u64>()) {
        let n = m.degree();
        let b = p.apply(&m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = PermPair::random(n, &mut rng).apply(&b).unwrap();
        prop_assert!(are_equivalent(&m, &m).unwrap());
        prop_assert!(are_equivalent(&b, &m).unwrap());
        prop_assert!(are_equivalent(&m, &c).unwrap());
    }

    #[test]
    fn symmetric_equivalent_implies_transpose_equivalent(m in arb_matrix(6)) {
        if is_symmetric_equivalent(&m) {
            prop_assert!(is_transpose_equivalent(&m));
        }
        prop_assert_eq!(is_transpose_equivalent(&m), is_transpose_equivalent(&m.transpose()));
    }

    #[test]
    fn symmetric_matrices_are_symmetric_equivalent((m, p) in arb_matrix_with_perm(6)) {
        let n = m.degree();
        let mut s = m;
        for i in 0..n {
            for j in 0..i {
                s.set(i, j, s.get(j, i));
            }
        }
        prop_assert!(is_symmetric_equivalent(&s));
        prop_assert!(is_symmetric_equivalent(&p.apply(&s).unwrap()));
    }
}

#[test]
fn canonical_form_stable_under_thousand_random_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut corpus = vec![
        fixtures::dita_degree4(),
        fixtures::cond_degree6(),
        fixtures::newcond_degree5_first(),
        fixtures::newcond_degree5_second(),
        fixtures::both_degree10(),
    ];
    corpus.extend(fixtures::indecomposable_degree4().into_iter().map(|(m, _, _)| m));
    for m in corpus {
        let c = canonical_form(&m);
        for _ in 0..1000 {
            let p = PermPair::random(m.degree(), &mut rng);
            assert_eq!(canonical_form(&p.apply(&m).unwrap()), c, "{m:?}");
        }
    }
}
