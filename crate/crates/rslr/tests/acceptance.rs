//! End-to-end acceptance gate. Each test prints a single pass/fail
//! line for its criterion.

mod common;

use common::{corpus, random_terms, xor_of_one_coin, WORKED_EXAMPLE};
use num_bigint::BigUint;
use rslr::ast::{app, apps, lam, num, rec, var, Aspect, Term, Type};
use rslr::bigstep::{self, DEFAULT_FUEL};
use rslr::dist::{Dist, Prob};
use rslr::smallstep::{self, Strategy};
use rslr::stdlib::{compile_polynomial, mk_add, mk_encode, mk_mult, unary, unary_value};
use rslr::tm;
use rslr::types::{infer_closed, subtype, TypeErrorKind};
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

fn criterion(n: usize, name: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {} ({}): pass", n, name),
        Err(e) => {
            println!("criterion {} ({}): FAIL", n, name);
            resume_unwind(e);
        }
    }
}

fn eval(t: &Term) -> Dist<Term> {
    bigstep::eval(t, DEFAULT_FUEL).unwrap()
}

#[test]
fn criterion_1_reference_examples() {
    criterion(1, "reference examples", || {
        // (a) one coin fed twice to xor collapses to 0
        let t = xor_of_one_coin();
        assert_eq!(eval(&t), Dist::dirac(num(0)));
        assert_eq!(
            smallstep::eval_dist(&t, Strategy::Leftmost, DEFAULT_FUEL).unwrap(),
            Dist::dirac(num(0))
        );

        // (b) the two-numeral coin-flip recursion: uniform over the 16
        // numerals 10b₁b₂b₃b₄, including 100110
        let t = rslr::parse_term(WORKED_EXAMPLE).unwrap();
        let d = eval(&t);
        assert_eq!(d.len(), 16);
        let sixteenth = Prob::new(1.into(), 16.into());
        for n in 32u64..48 {
            assert_eq!(d.pmf(&num(n)), sixteenth);
        }
        assert_eq!(d.pmf(&num(0b100110)), sixteenth);

        // (c) library terms sit at their documented types
        assert_eq!(
            infer_closed(&mk_add()).unwrap(),
            rslr::parse_type("N !-> N ~-> N").unwrap()
        );
        assert_eq!(
            infer_closed(&mk_mult()).unwrap(),
            rslr::parse_type("N !-> N !-> N").unwrap()
        );
        assert_eq!(
            infer_closed(&mk_encode()).unwrap(),
            rslr::parse_type("N !-> N").unwrap()
        );

        // (d) iterating squaring is rejected: mult wants modal inputs
        let expo = lam(
            "h",
            Aspect::Modal,
            Type::Nat,
            rec(
                Type::Nat,
                var("h"),
                num(3),
                lam(
                    "x",
                    Aspect::Modal,
                    Type::Nat,
                    lam(
                        "y",
                        Aspect::NonModal,
                        Type::Nat,
                        apps(mk_mult(), [var("y"), var("y")]),
                    ),
                ),
            ),
        );
        let e = infer_closed(&expo).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::AspectViolation);
    });
}

#[test]
fn criterion_2_adequacy() {
    criterion(2, "big-step vs small-step adequacy", || {
        let terms = corpus();
        assert!(terms.len() >= 30);
        for t in &terms {
            let big = eval(t);
            let small = smallstep::eval_dist(t, Strategy::Leftmost, DEFAULT_FUEL).unwrap();
            assert_eq!(big, small, "disagreement on {}", t);
        }
    });
}

#[test]
fn criterion_3_confluence() {
    criterion(3, "strategy independence", || {
        for t in &corpus() {
            let l = smallstep::eval_dist(t, Strategy::Leftmost, DEFAULT_FUEL).unwrap();
            let r = smallstep::eval_dist(t, Strategy::Rightmost, DEFAULT_FUEL).unwrap();
            assert_eq!(l, r, "strategies disagree on {}", t);
        }
    });
}

#[test]
fn criterion_4_derivation_bounds() {
    criterion(4, "derivation size bounds", || {
        let explicit: Vec<Term> = corpus()
            .into_iter()
            .filter(|t| t.is_explicit())
            .collect();
        assert!(!explicit.is_empty());
        for t in &explicit {
            let size = t.size();
            let wonum = t.size_wonum();
            let size_num = t.size_num();
            for o in bigstep::eval_nf(t, DEFAULT_FUEL).unwrap() {
                let m = o.metrics;
                assert!(m.nodes <= wonum, "nodes {} > size_wonum {} for {}", m.nodes, wonum, t);
                assert!(m.nodes <= 2 * size);
                assert!(m.max_size <= 2 * size * size);
                assert!(
                    m.max_size_num <= size_num + wonum,
                    "numeral growth {} > {} + {} for {}",
                    m.max_size_num,
                    size_num,
                    wonum,
                    t
                );
            }
        }
    });
}

fn dirac_numeral(d: &Dist<Term>) -> BigUint {
    assert_eq!(d.len(), 1);
    let t = d.support().next().unwrap();
    t.as_numeral().expect("numeral outcome").clone()
}

#[test]
fn criterion_5_arithmetic_oracle() {
    criterion(5, "unary arithmetic vs integer oracle", || {
        for i in 0..=8u64 {
            for j in 0..=8u64 {
                let sum = eval(&apps(mk_add(), [unary(i), unary(j)]));
                assert_eq!(dirac_numeral(&sum), unary_value(i + j), "{}+{}", i, j);
                let prod = eval(&apps(mk_mult(), [unary(i), unary(j)]));
                assert_eq!(dirac_numeral(&prod), unary_value(i * j), "{}*{}", i, j);
            }
        }
        let polys: [(&[u64], fn(u64) -> u64); 3] = [
            (&[0, 1], |n| n),
            (&[0, 0, 1], |n| n * n),
            (&[3, 2], |n| 2 * n + 3),
        ];
        for (coeffs, f) in polys {
            let p = compile_polynomial(coeffs);
            for n in 0..=5u64 {
                let got = eval(&app(p.clone(), unary(n)));
                assert_eq!(dirac_numeral(&got), unary_value(f(n)), "p{:?}({})", coeffs, n);
            }
        }
    });
}

fn machine(text: &str) -> tm::TmSpec {
    tm::parse_tm_spec(text).unwrap()
}

#[test]
fn criterion_6_tm_cross_validation() {
    criterion(6, "compiled machines vs simulator", || {
        let flipper = machine(
            "states: flip\ninitial: flip\nfinals:\nalphabet: _ 0 1\nbudget: 1 0 1\n\
             trans: flip, _ -> (flip, _, S) | (flip, _, S)\n\
             trans: flip, 0 -> (flip, 1, L) | (flip, 1, L)\n\
             trans: flip, 1 -> (flip, 0, L) | (flip, 0, L)\n",
        );
        let coin = machine(
            "states: go halt\ninitial: go\nfinals: halt\nalphabet: _ 0 1\nbudget: 1\n\
             trans: go, _ -> (halt, 0, S) | (halt, 1, S)\n\
             trans: go, 0 -> (halt, 0, S) | (halt, 1, S)\n\
             trans: go, 1 -> (halt, 0, S) | (halt, 1, S)\n\
             trans: halt, _ -> (halt, _, S) | (halt, _, S)\n\
             trans: halt, 0 -> (halt, 0, S) | (halt, 0, S)\n\
             trans: halt, 1 -> (halt, 1, S) | (halt, 1, S)\n",
        );
        let walk = machine(
            "states: a b halt\ninitial: a\nfinals: halt\nalphabet: _ 0 1\nbudget: 2\n\
             trans: a, _ -> (b, 1, L) | (b, 0, R)\n\
             trans: a, 0 -> (b, 1, L) | (b, 0, R)\n\
             trans: a, 1 -> (b, 1, L) | (b, 0, R)\n\
             trans: b, _ -> (halt, 1, L) | (halt, 0, R)\n\
             trans: b, 0 -> (halt, 1, L) | (halt, 0, R)\n\
             trans: b, 1 -> (halt, 1, L) | (halt, 0, R)\n\
             trans: halt, _ -> (halt, _, S) | (halt, _, S)\n\
             trans: halt, 0 -> (halt, 0, S) | (halt, 0, S)\n\
             trans: halt, 1 -> (halt, 1, S) | (halt, 1, S)\n",
        );
        for (name, spec) in [("flipper", flipper), ("coin", coin), ("walk", walk)] {
            let t = tm::compile_tm(&spec).unwrap();
            assert!(infer_closed(&t).is_ok());
            for n in 0u8..16 {
                let n = BigUint::from(n);
                let got = tm::output_dist_of_term(&t, &n, DEFAULT_FUEL).unwrap();
                let want = spec.output_distribution(&n).unwrap();
                assert_eq!(got, want, "{} on input {}", name, n);
            }
        }
    });
}

#[test]
fn criterion_7_recognition() {
    criterion(7, "recognition checkers", || {
        let parity = rslr::parse_term(
            "\\x:!N. case[N] x { zero -> 0b1 | even -> 0b1 | odd -> 0b0 }",
        )
        .unwrap();
        let samples: Vec<(BigUint, bool)> = (0u8..10)
            .map(|n| (BigUint::from(n), n % 2 == 1))
            .collect();
        let half = Prob::new(1.into(), 2.into());
        for eps in [Prob::new(1.into(), 4.into()), half.clone()] {
            let reports =
                tm::check_error_recognition(&parity, &samples, &eps, DEFAULT_FUEL).unwrap();
            assert_eq!(reports.len(), 10);
            for r in &reports {
                assert!(r.pass, "parity fails on {}", r.input);
                assert!(r.margin >= half, "margin {} below 1/2", r.margin);
            }
        }

        let coin = rslr::parse_term("\\x:~N. rand").unwrap();
        let quarter = Prob::new(1.into(), 4.into());
        let reports = tm::check_error_recognition(
            &coin,
            &[(BigUint::from(0u8), true)],
            &quarter,
            DEFAULT_FUEL,
        )
        .unwrap();
        assert!(!reports[0].pass);
        assert!(tm::majority_decision(&coin, &BigUint::from(0u8), DEFAULT_FUEL).unwrap());
    });
}

#[test]
fn criterion_8_sampler_statistics() {
    criterion(8, "sampler statistics", || {
        let t = rslr::parse_term(WORKED_EXAMPLE).unwrap();
        let total = 10_000u64;
        let mut counts = std::collections::BTreeMap::new();
        for seed in 0..total {
            let r = bigstep::sample(&t, seed, DEFAULT_FUEL).unwrap();
            *counts.entry(r).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 16);
        for (outcome, k) in &counts {
            let freq = *k as f64 / total as f64;
            assert!(
                (freq - 1.0 / 16.0).abs() <= 0.02,
                "outcome {} frequency {}",
                outcome,
                freq
            );
        }
    });
}

#[test]
fn criterion_9_subject_reduction() {
    criterion(9, "subject reduction", || {
        for t in corpus() {
            let mut frontier = vec![(t.clone(), infer_closed(&t).unwrap())];
            let mut steps = 0u32;
            while let Some((s, ty)) = frontier.pop() {
                if steps >= 500 {
                    break;
                }
                if let Some(succs) = smallstep::step(&s, Strategy::Leftmost) {
                    steps += 1;
                    for s2 in succs {
                        let ty2 = infer_closed(&s2)
                            .unwrap_or_else(|e| panic!("step of {} untypable: {}", s, e));
                        assert!(
                            subtype(&ty2, &ty),
                            "type grew from {} to {} stepping {}",
                            ty,
                            ty2,
                            s
                        );
                        frontier.push((s2, ty2));
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_random_corpus_is_as_required() {
    // supporting check: the randomized corpus slice is explicit,
    // closed, coin-flipping and well-typed
    let ts = random_terms();
    assert_eq!(ts.len(), 10);
    for t in &ts {
        assert!(t.is_explicit() && t.is_closed() && t.contains_rand());
    }
}
