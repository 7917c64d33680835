//! Property tests for the structural invariants of the kernel types.

use chrono_kernel::auto::{apply, invert_word, AutoWord, Generator};
use chrono_kernel::herm::{projection_from_vector, rank1_decompose, trace_product, Mat2};
use chrono_kernel::json::{
    herm_from_json, herm_to_json, point_from_json, point_to_json, rational_from_json,
    rational_to_json, word_from_json, word_to_json,
};
use chrono_kernel::scalar::{rat, GaussRational};
use chrono_kernel::spacetime::{
    cayley, cayley_inv, coherent, distance, lightlike, quadric_embed, quadric_pairing,
    unitary_coherent, xi, xi_inv, M4Event, Point,
};
use chrono_kernel::{Herm2, Projection, Rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=40).prop_map(|(n, d)| rat(n, d))
}

fn arb_gauss() -> impl Strategy<Value = GaussRational> {
    (arb_rational(), arb_rational()).prop_map(|(re, im)| GaussRational::new(re, im))
}

fn arb_herm() -> impl Strategy<Value = Herm2> {
    (arb_rational(), arb_rational(), arb_gauss()).prop_map(|(a, d, z)| Herm2::new(a, d, z))
}

fn arb_projection() -> impl Strategy<Value = Projection> {
    (arb_gauss(), arb_gauss())
        .prop_filter_map("vector must be nonzero", |(u, v)| {
            projection_from_vector(&[u, v]).ok()
        })
}

fn arb_point() -> impl Strategy<Value = Point> {
    prop_oneof![
        5 => arb_herm().prop_map(Point::Finite),
        3 => (arb_projection(), arb_rational()).prop_map(|(p, a)| Point::infinite(p, a)),
        1 => Just(Point::Omega),
    ]
}

fn arb_event() -> impl Strategy<Value = M4Event> {
    (arb_rational(), arb_rational(), arb_rational(), arb_rational())
        .prop_map(|(x, y, z, t)| M4Event::new(x, y, z, t))
}

fn arb_generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        Just(Generator::Negate),
        Just(Generator::Transpose),
        Just(Generator::Invert),
        arb_herm().prop_map(Generator::Translate),
        (arb_gauss(), arb_gauss(), arb_gauss(), arb_gauss()).prop_filter_map(
            "matrix must be invertible",
            |(a, b, c, d)| Generator::congruence(Mat2::new(a, b, c, d)).ok()
        ),
    ]
}

fn arb_word() -> impl Strategy<Value = AutoWord> {
    proptest::collection::vec(arb_generator(), 1..5).prop_map(AutoWord::of)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gauss_field_axioms(a in arb_gauss(), b in arb_gauss(), c in arb_gauss()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!((&a * &b).clone(), &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), GaussRational::one());
        }
    }

    #[test]
    fn herm_det_trace_identities(x in arb_herm(), y in arb_herm()) {
        // det(X+Y) = det X + det Y + tr(X · adj Y)
        let adj_y = Herm2::new(y.d.clone(), y.a.clone(), y.z.scale(&rat(-1, 1)));
        prop_assert_eq!((&x + &y).det(), x.det() + y.det() + trace_product(&x, &adj_y));
        prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
    }

    #[test]
    fn projection_laws(p in arb_projection()) {
        let m = p.matrix();
        prop_assert!(m.det().is_zero());
        prop_assert!(m.trace().is_one());
        let c = p.complement();
        prop_assert_eq!(m + c.matrix(), Herm2::identity());
        let (t, q) = rank1_decompose(&m.scale(&rat(5, 3))).unwrap();
        prop_assert_eq!(t, rat(5, 3));
        prop_assert_eq!(q, p);
    }

    #[test]
    fn coherency_symmetric_reflexive(a in arb_point(), b in arb_point()) {
        prop_assert!(coherent(&a, &a));
        prop_assert_eq!(coherent(&a, &b), coherent(&b, &a));
        let d = distance(&a, &b);
        prop_assert!(d <= 2);
        prop_assert_eq!(d == 0, a == b);
        prop_assert_eq!(d <= 1, coherent(&a, &b));
    }

    #[test]
    fn cayley_roundtrip(a in arb_point()) {
        let u = cayley(&a);
        prop_assert_eq!(cayley_inv(&u).unwrap(), a);
    }

    #[test]
    fn cayley_preserves_coherence(a in arb_point(), b in arb_point()) {
        prop_assert_eq!(coherent(&a, &b), unitary_coherent(&cayley(&a), &cayley(&b)));
    }

    #[test]
    fn quadric_embed_is_isotropic(a in arb_point(), b in arb_point()) {
        let qa = quadric_embed(&a);
        prop_assert!(qa.quadric_form().is_zero());
        prop_assert_eq!(coherent(&a, &b), quadric_pairing(&qa, &quadric_embed(&b)).is_zero());
    }

    #[test]
    fn xi_bridge(r1 in arb_event(), r2 in arb_event()) {
        prop_assert_eq!(xi_inv(&xi(&r1)), r1.clone());
        prop_assert_eq!(
            lightlike(&r1, &r2),
            coherent(&Point::Finite(xi(&r1)), &Point::Finite(xi(&r2)))
        );
    }

    #[test]
    fn words_invert(w in arb_word(), a in arb_point()) {
        let wi = invert_word(&w);
        prop_assert_eq!(apply(&wi, &apply(&w, &a)), a);
    }

    #[test]
    fn words_preserve_distance(w in arb_word(), a in arb_point(), b in arb_point()) {
        prop_assert_eq!(distance(&a, &b), distance(&apply(&w, &a), &apply(&w, &b)));
    }

    #[test]
    fn json_roundtrips(a in arb_point(), x in arb_herm(), r in arb_rational(), w in arb_word()) {
        prop_assert_eq!(point_from_json(&point_to_json(&a)).unwrap(), a);
        prop_assert_eq!(herm_from_json(&herm_to_json(&x)).unwrap(), x);
        prop_assert_eq!(rational_from_json(&rational_to_json(&r)).unwrap(), r);
        prop_assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn rank_one_difference_definition(x in arb_herm(), p in arb_projection(), t in arb_rational()) {
        // X and X + tP differ by rank ≤ 1, hence are coherent
        let y = &x + &p.matrix().scale(&t);
        prop_assert!(coherent(&Point::Finite(x.clone()), &Point::Finite(y)));
        // infinite points of different direction are never coherent
        let q = p.complement();
        if !t.is_zero() && !t.abs().is_one() {
            let a = Point::infinite(p.clone(), t.clone());
            let b = Point::infinite(q, t);
            prop_assert!(!coherent(&a, &b));
        }
    }
}
