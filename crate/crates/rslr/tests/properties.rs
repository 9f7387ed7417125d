//! Property-based checks: printer/parser round-trips, substitution and
//! shifting laws, the subtype order, size measures, distribution
//! algebra, and semantic laws on generated well-typed terms.

mod common;

use proptest::prelude::*;
use rslr::ast::{shift, substitute, Aspect, NameHint, Term, Type};
use rslr::bigstep;
use rslr::dist::{Dist, Prob};
use rslr::smallstep::{self, Strategy as Order};
use rslr::types::{infer_closed, subtype};

fn arb_aspect() -> impl Strategy<Value = Aspect> {
    prop_oneof![Just(Aspect::Modal), Just(Aspect::NonModal)]
}

fn arb_type() -> impl Strategy<Value = Type> {
    let leaf = Just(Type::Nat);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (arb_aspect(), inner.clone(), inner.clone())
                .prop_map(|(a, d, c)| Type::arrow(a, d, c)),
            (inner.clone(), inner).prop_map(|(l, r)| Type::prod(l, r)),
        ]
    })
}

fn arb_hint() -> impl Strategy<Value = NameHint> {
    // deliberately clashing and reserved-looking hints; printing must
    // freshen them away
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("x'".to_string()),
        Just("rec".to_string()),
        Just("add".to_string()),
    ]
    .prop_map(NameHint)
}

/// Closed abstract syntax trees, not necessarily well typed: indices
/// stay within the enclosing binder count.
fn arb_ast() -> impl Strategy<Value = Term> {
    fn node(depth: u32, env: usize) -> BoxedStrategy<Term> {
        let mut leaves: Vec<BoxedStrategy<Term>> = vec![
            (0u64..100).prop_map(|n| Term::Num(n.into())).boxed(),
            Just(Term::Rand).boxed(),
            Just(Term::S0).boxed(),
            Just(Term::S1).boxed(),
            Just(Term::P).boxed(),
        ];
        if env > 0 {
            leaves.push(
                (0..env, arb_hint())
                    .prop_map(|(i, h)| Term::Var(i, h))
                    .boxed(),
            );
        }
        let leaf = proptest::strategy::Union::new(leaves).boxed();
        if depth == 0 {
            return leaf;
        }
        let sub = move || node(depth - 1, env);
        let under = move || node(depth - 1, env + 1);
        prop_oneof![
            leaf,
            (arb_hint(), arb_aspect(), arb_type(), under()).prop_map(|(h, a, ty, b)| {
                Term::Abs {
                    hint: h,
                    aspect: a,
                    ty,
                    body: Box::new(b),
                }
            }),
            (sub(), sub()).prop_map(|(f, a)| Term::App(Box::new(f), Box::new(a))),
            (arb_type(), sub(), sub(), sub(), sub()).prop_map(|(ty, s, z, e, o)| Term::Case {
                ty,
                scrut: Box::new(s),
                zero: Box::new(z),
                even: Box::new(e),
                odd: Box::new(o),
            }),
            (arb_type(), sub(), sub(), sub()).prop_map(|(ty, a, b, s)| Term::Rec {
                ty,
                arg: Box::new(a),
                base: Box::new(b),
                step: Box::new(s),
            }),
            (sub(), sub()).prop_map(|(l, r)| Term::Pair(Box::new(l), Box::new(r))),
            sub().prop_map(|t| Term::Proj1(Box::new(t))),
            sub().prop_map(|t| Term::Proj2(Box::new(t))),
        ]
        .boxed()
    }
    node(3, 0)
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(t in arb_ast()) {
        let printed = t.to_string();
        let back = rslr::parse_term(&printed)
            .unwrap_or_else(|e| panic!("reparse of `{}` failed: {}", printed, e));
        prop_assert_eq!(back, t);
    }

    #[test]
    fn type_printing_round_trips(ty in arb_type()) {
        let back = rslr::parse_type(&ty.to_string()).unwrap();
        prop_assert_eq!(back, ty);
    }

    #[test]
    fn substituting_an_absent_name_changes_nothing(t in arb_ast()) {
        let s = substitute(&t, "not_free_here", &Term::Rand);
        prop_assert_eq!(s, t);
    }

    #[test]
    fn shifting_by_zero_changes_nothing(t in arb_ast()) {
        prop_assert_eq!(shift(&t, 0, 0), t.clone());
    }

    #[test]
    fn subtyping_is_reflexive(ty in arb_type()) {
        prop_assert!(subtype(&ty, &ty));
    }

    #[test]
    fn subtyping_is_antisymmetric(a in arb_type(), b in arb_type()) {
        if subtype(&a, &b) && subtype(&b, &a) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn subtyping_is_transitive(a in arb_type(), b in arb_type(), c in arb_type()) {
        if subtype(&a, &b) && subtype(&b, &c) {
            prop_assert!(subtype(&a, &c));
        }
    }

    #[test]
    fn size_measures_are_ordered(t in arb_ast()) {
        prop_assert!(t.size() >= 1);
        prop_assert!(t.size_wonum() <= t.size());
        prop_assert!(t.size_num() <= t.size());
    }

    #[test]
    fn mixing_preserves_mass_and_dyadicity(
        pairs_a in proptest::collection::vec((0u32..20, 0u32..6), 1..8),
        pairs_b in proptest::collection::vec((0u32..20, 0u32..6), 1..8),
    ) {
        let build = |pairs: Vec<(u32, u32)>| {
            Dist::from_pairs(
                pairs
                    .into_iter()
                    .map(|(k, e)| (k, Prob::new(1.into(), (1u64 << e).into()))),
            )
        };
        let (a, b) = (build(pairs_a), build(pairs_b));
        let (ma, mb) = (a.mass(), b.mass());
        let half = Prob::new(1.into(), 2.into());
        let mixed = Dist::mix([(half.clone(), a), (half.clone(), b)]);
        prop_assert_eq!(mixed.mass(), (ma + mb) * half);
        prop_assert!(mixed.is_dyadic());
    }

    #[test]
    fn generated_terms_satisfy_the_semantic_laws(seed in any::<u64>()) {
        let t = common::random_term(seed);
        let ty = infer_closed(&t).unwrap();

        let big = bigstep::eval(&t, bigstep::DEFAULT_FUEL).unwrap();
        let left = smallstep::eval_dist(&t, Order::Leftmost, bigstep::DEFAULT_FUEL).unwrap();
        let right = smallstep::eval_dist(&t, Order::Rightmost, bigstep::DEFAULT_FUEL).unwrap();
        prop_assert_eq!(&big, &left);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(big.mass(), Prob::new(1.into(), 1.into()));
        prop_assert!(big.is_dyadic());

        // one step of subject reduction
        if let Some(succs) = smallstep::step(&t, Order::Leftmost) {
            for s in succs {
                let ty2 = infer_closed(&s).unwrap();
                prop_assert!(subtype(&ty2, &ty));
            }
        }

        // numeral-phase derivations respect the size bounds
        for o in bigstep::eval_nf(&t, bigstep::DEFAULT_FUEL).unwrap() {
            prop_assert!(o.metrics.nodes <= t.size_wonum());
            prop_assert!(o.metrics.max_size <= 2 * t.size() * t.size());
            prop_assert!(o.metrics.max_size_num <= t.size_num() + t.size_wonum());
        }
    }
}
