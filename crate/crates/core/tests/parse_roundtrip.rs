use holder_gain::poly::coeff::{cr, rational};
use holder_gain::poly::{MixedMonomial, MixedPolynomial};
use holder_gain::report::parse_defining_function;
use proptest::prelude::*;

const CAP: u32 = 8;

fn real_poly() -> impl Strategy<Value = MixedPolynomial> {
    let term = (
        prop::array::uniform3(0u32..=2),
        prop::array::uniform3(0u32..=2),
        (-9i64..=9, 1i64..=7),
        (-9i64..=9, 1i64..=7),
    );
    prop::collection::vec(term, 0..=6).prop_map(|ts| {
        MixedPolynomial::from_terms(
            ts.into_iter().map(|(a, b, (p, q), (r, s))| (MixedMonomial::new(a, b), cr(rational(p, q), rational(r, s)))),
            CAP,
        )
        .real_part()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_polynomials_parse_back(p in real_poly()) {
        let text = p.to_string();
        let back = parse_defining_function(&text, Some(CAP)).unwrap();
        prop_assert!(back.terms().eq(p.terms()), "{text}");
    }

    #[test]
    fn whitespace_and_comments_are_ignored(p in real_poly()) {
        let text = format!("# header\n  {}  \n# trailer", p.to_string().replace(" + ", "\n  +  "));
        let back = parse_defining_function(&text, Some(CAP)).unwrap();
        prop_assert!(back.terms().eq(p.terms()));
    }
}
