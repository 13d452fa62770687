use proptest::prelude::*;

use genwait::cli::spec::{parse_spec, GroupSpec, Term};
use genwait::perm::{GroupHandle, Permutation};

fn permutation(max_degree: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_degree)
        .prop_flat_map(|n| Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn pair(max_degree: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_degree).prop_flat_map(|n| {
        let one = Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle();
        (one.clone(), one).prop_map(|(a, b)| {
            (
                Permutation::from_images(a).unwrap(),
                Permutation::from_images(b).unwrap(),
            )
        })
    })
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        (1usize..9).prop_map(Term::Symmetric),
        (1usize..9).prop_map(Term::Alternating),
        (1usize..40).prop_map(Term::Cyclic),
        (3usize..20).prop_map(Term::Dihedral),
        Just(Term::Quaternion),
        (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..4)
            .prop_map(|(p, d)| Term::Elementary { p, d }),
        (1u32..3, prop::sample::subsequence(vec![3u64, 5, 7, 11], 1..4))
            .prop_map(|(d, primes)| Term::Gd { d, primes }),
        permutation(6).prop_map(|p| {
            let cycles = p
                .cycles()
                .into_iter()
                .map(|c| c.into_iter().map(|v| v + 1).collect())
                .collect();
            Term::Perm { degree: p.degree(), generators: vec![cycles] }
        }),
    ]
}

proptest! {
    #[test]
    fn spec_print_parse_round_trip(terms in prop::collection::vec(term(), 1..4)) {
        let spec = GroupSpec { terms };
        let text = spec.to_string();
        let parsed = parse_spec(&text).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(parse_spec(&parsed.to_string()).unwrap(), parsed);
    }

    #[test]
    fn inverse_reverses_products((p, q) in pair(9)) {
        prop_assert_eq!(p.compose(&q).inverse(), q.inverse().compose(&p.inverse()));
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.compose(&q).is_even(), p.is_even() == q.is_even());
        for x in 0..p.degree() as u32 {
            prop_assert_eq!(p.compose(&q).image(x), q.image(p.image(x)));
        }
    }

    #[test]
    fn cycles_rebuild_the_permutation(p in permutation(10)) {
        prop_assert_eq!(Permutation::from_cycles(p.degree(), &p.cycles()).unwrap(), p);
    }

    #[test]
    fn chain_order_matches_element_count((p, q) in pair(6)) {
        let g = GroupHandle::build(&[p.clone(), q.clone()], p.degree()).unwrap();
        let elements = g.elements(720).unwrap();
        prop_assert_eq!(g.order_u64().unwrap(), elements.len() as u64);
        prop_assert!(g.contains(&p.compose(&q)).unwrap());
        for x in elements.iter().take(20) {
            prop_assert!(g.contains(x).unwrap());
        }
    }
}
