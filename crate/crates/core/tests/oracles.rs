mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{invariant_factors_by_minors, orientable_by_brute_force, random_connected_gluing};
use lenscert::galois::FieldSpec;
use lenscert::intlinalg::{abelianization, hadamard_torsion_bound, smith_normal_form};
use lenscert::presentation::{default_names, GroupPresentation, Word};
use lenscert::projmat::{enumerate_psl, evaluate_word, ProjMatrix};
use lenscert::triangulation::{orientation_check, validate};
use lenscert::IntMatrix;

fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        (Just(c), proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r))
    })
}

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0..gens, prop_oneof![Just(1i8), Just(-1i8)]), 0..=max_len).prop_map(Word::from_letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_minors((cols, rows) in matrix()) {
        let snf = smith_normal_form(&IntMatrix::from_rows(cols, &rows), true);
        let ours: Vec<i64> = snf.diag.iter().take(snf.rank).map(|d| i64::try_from(d).unwrap()).collect();
        prop_assert_eq!(ours, invariant_factors_by_minors(&rows, cols));
        let u = snf.left.unwrap();
        let v = snf.right.unwrap();
        let n = u.mul(&IntMatrix::from_rows(cols, &rows)).mul(&v);
        for i in 0..n.rows() {
            for j in 0..n.cols() {
                let expect = if i == j && i < snf.rank { snf.diag[i].clone() } else { BigInt::from(0) };
                prop_assert_eq!(&n.row(i)[j], &expect);
            }
        }
    }

    #[test]
    fn word_text_round_trip(w in word(4, 12)) {
        let names = default_names(4);
        let text = w.display(&names).to_string();
        prop_assert_eq!(Word::parse(&text, &names).unwrap(), w);
    }

    #[test]
    fn free_reduction_preserves_value(w in word(2, 16)) {
        let spec = FieldSpec::prime(7).unwrap();
        let gens = [
            ProjMatrix::from_ints(spec, [1, 1, 0, 1]).unwrap(),
            ProjMatrix::from_ints(spec, [0, 1, 6, 0]).unwrap(),
        ];
        let reduced = w.free_reduce();
        prop_assert!(reduced.len() <= w.len());
        prop_assert_eq!(evaluate_word(&gens, &w).unwrap(), evaluate_word(&gens, &reduced).unwrap());
        let inv = w.concat(&w.inverse());
        prop_assert!(inv.free_reduce().is_empty());
    }

    #[test]
    fn presentation_text_round_trip(rels in proptest::collection::vec(word(3, 6), 0..5)) {
        let pres = GroupPresentation::new(3, rels);
        let text = pres.to_text();
        let lines: Vec<&str> = text.lines().collect();
        let names: Vec<&str> = lines[0].split_whitespace().skip(2).collect();
        let relators: Vec<&str> = lines[1..].iter().map(|l| l.strip_prefix("rel ").unwrap()).collect();
        let back = GroupPresentation::parse_relators(&names, &relators).unwrap();
        prop_assert_eq!(back.relators(), pres.relators());
    }

    #[test]
    fn hadamard_bound(gens in 1usize..=4, rels in proptest::collection::vec(word(4, 6), 1..=8)) {
        let rels: Vec<Word> = rels
            .into_iter()
            .map(|w| Word::from_letters(w.letters().iter().map(|&(g, e)| (g % gens, e)).collect()))
            .collect();
        let pres = GroupPresentation::new(gens, rels);
        let h = abelianization(&pres);
        let torsion: BigInt = h.torsion_order();
        prop_assert!(torsion.magnitude() <= &hadamard_torsion_bound(&pres));
    }
}

#[test]
fn orientation_on_random_gluings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 1..=8 {
        for _ in 0..25 {
            let tri = random_connected_gluing(&mut rng, t);
            let r = orientation_check(&tri).unwrap();
            assert_eq!(r.orientable, orientable_by_brute_force(&tri));
            if let Some(signs) = &r.assignment {
                for p in tri.pairings() {
                    assert!(lenscert::triangulation::pairing_consistent(
                        &p.perm,
                        signs[p.source.tet],
                        signs[p.target.tet]
                    ));
                }
            }
        }
    }
}

#[test]
fn random_gluings_satisfy_face_count() {
    // every closed gluing has exactly 2t face classes
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 1..=10 {
        let tri = random_connected_gluing(&mut rng, t);
        assert_eq!(validate(&tri).faces, 2 * t);
    }
}

#[test]
fn psl_enumeration_is_closed() {
    for p in [3u64, 5, 7] {
        let spec = FieldSpec::prime(p).unwrap();
        let all = enumerate_psl(spec);
        let set: std::collections::HashSet<_> = all.iter().map(|m| m.entries()).collect();
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                assert!(set.contains(&a.mul(b).unwrap().entries()));
            }
        }
    }
}
