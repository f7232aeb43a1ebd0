use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use threegen::cli_io::SessionDocument;
use threegen::groebner::{prune, quotient_dimension, resolve, IdealData};
use threegen::invariants::{check_exactness, grade, Grade};
use threegen::koszul::koszul_complex;
use threegen::matrix::{FreeModuleSpec, PolyMatrix};
use threegen::poly::{random_form, Monomial, MonomialOrder, Polynomial, Ring};

fn ring(n: usize) -> Ring {
    Ring::with_standard_names(32003, n).unwrap()
}

fn forms(r: &Ring, degrees: &[u32], seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    degrees
        .iter()
        .map(|&d| random_form(r, d, &mut rng))
        .collect()
}

fn row(r: &Ring, entries: Vec<Polynomial>) -> PolyMatrix {
    PolyMatrix::from_rows(r, vec![entries])
        .unwrap()
        .infer_grading(None)
        .unwrap()
}

fn matrix_of(r: &Ring, raw: &[Vec<Vec<(u32, [u16; 3])>>]) -> PolyMatrix {
    let rows = raw
        .iter()
        .map(|row| {
            row.iter()
                .map(|terms| {
                    Polynomial::from_terms(r, terms.iter().map(|&(c, e)| (c, Monomial::new(e))))
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(r, rows).unwrap()
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<Vec<(u32, [u16; 3])>>>> {
    (1usize..4, 1usize..4).prop_flat_map(|(rows, cols)| {
        let entry = prop::collection::vec((0u32..32003, [0u16..2, 0u16..2, 0u16..2]), 0..3);
        prop::collection::vec(prop::collection::vec(entry, cols), rows)
    })
}

fn euler(ranks: &[usize]) -> i64 {
    ranks
        .iter()
        .enumerate()
        .map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pruning_keeps_exactness_and_euler_characteristic(
        seed in any::<u64>(),
        degrees in prop::collection::vec(1u32..3, 1..5),
    ) {
        let r = ring(3);
        let f = row(&r, forms(&r, &degrees, seed));
        let res = resolve(&f, usize::MAX);
        let pruned = prune(&res).unwrap();
        prop_assert!(pruned.is_minimal());
        prop_assert!(pruned.length() <= res.length());
        prop_assert!(pruned.length() <= 3);
        prop_assert_eq!(euler(&pruned.ranks()), euler(&res.ranks()));
        prop_assert!(check_exactness(&pruned).passed());
        prop_assert!(check_exactness(&res).passed());
    }

    #[test]
    fn generic_forms_are_regular(seed in any::<u64>(), degrees in prop::collection::vec(1u32..3, 1..4)) {
        let r = ring(3);
        let seq = forms(&r, &degrees, seed);
        let k = koszul_complex(&seq).unwrap();
        for w in k.differentials().windows(2) {
            prop_assert!(w[0].compose(&w[1]).unwrap().is_zero());
        }
        prop_assert!(check_exactness(&k).passed());
        let ideal = IdealData::new(&r, seq.clone());
        prop_assert_eq!(grade(&ideal), Grade::Finite(seq.len()));
        prop_assert_eq!(quotient_dimension(&ideal), (3 - seq.len()) as i32);
    }

    #[test]
    fn variable_powers_have_grade_equal_to_their_count(exps in prop::collection::vec(0u32..4, 4)) {
        let r = ring(4);
        let gens: Vec<Polynomial> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| r.var(i).pow(e))
            .collect();
        let n = gens.len();
        let g = grade(&IdealData::new(&r, gens));
        prop_assert_eq!(g, Grade::Finite(n));
    }

    #[test]
    fn minors_of_a_submatrix_have_no_larger_grade(raw in arb_matrix(), t in 1usize..3) {
        let r = Ring::new(32003, ["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
        let f = matrix_of(&r, &raw);
        prop_assume!(t <= f.rows() && t < f.cols());
        let rows: Vec<usize> = (0..f.rows()).collect();
        let cols: Vec<usize> = (0..f.cols() - 1).collect();
        let sub = f.submatrix(&rows, &cols);
        let big = f.minor_ideal(t).unwrap();
        let small = sub.minor_ideal(t).unwrap();
        for g in small.generators() {
            prop_assert!(big.contains(g));
        }
        prop_assert!(grade(&small) <= grade(&big));
    }

    #[test]
    fn rank_is_invariant_under_duality(raw in arb_matrix()) {
        let r = Ring::new(32003, ["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
        let f = matrix_of(&r, &raw);
        prop_assert_eq!(f.rank(), f.dual().rank());
        prop_assert!(f.rank() <= f.rows().min(f.cols()));
    }

    #[test]
    fn documents_round_trip(raw in arb_matrix()) {
        let r = Ring::new(32003, ["x", "y", "z"], MonomialOrder::Lex).unwrap();
        let f = matrix_of(&r, &raw);
        let mut doc = SessionDocument::new(&r);
        doc.add_matrix("f", f.clone()).unwrap();
        let text = doc.emit();
        let back = SessionDocument::parse(&text).unwrap();
        prop_assert_eq!(back.emit(), text);
        prop_assert_eq!(back.matrix("f").unwrap().entries(), f.entries());
    }
}

#[test]
fn appended_zero_map_breaks_exactness() {
    let r = ring(2);
    let f = row(&r, r.vars());
    let z = PolyMatrix::zero(&r, f.source().clone(), FreeModuleSpec::graded(vec![2]));
    let res = threegen::groebner::ResolutionData::new(&r, vec![f, z]).unwrap();
    assert!(!check_exactness(&res).passed());
}
