//! Shared corpus of closed terms of type N: every library operation
//! applied to small arguments, plus seeded random coin-flipping
//! explicit terms.
#![allow(dead_code)] // each test target uses a different subset

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rslr::ast::{app, apps, case, lam, num, pair, proj1, proj2, var, Aspect, Term, Type};
use rslr::stdlib::{
    compile_polynomial, encode_string, fs_element, mk_add, mk_append, mk_encode, mk_mult, mk_ntos,
    mk_ston, mk_switch, mk_tail, unary,
};
use rslr::types::infer_closed;

pub const WORKED_EXAMPLE: &str = "(\\z:~N. \\h:!N. rec[N](h; z; \\x:!N. \\y:~N. \
    (case[N ~-> N] rand { zero -> S1 | even -> S1 | odd -> S0 }) y)) 0b10 0b1110";

/// `(λx:■N. t⊕ x x) rand`, which must collapse to 0: the coin is
/// resolved before being fed twice to exclusive-or.
pub fn xor_of_one_coin() -> Term {
    let table = |zero: u64, other: u64| {
        lam(
            "y",
            Aspect::NonModal,
            Type::Nat,
            case(Type::Nat, var("y"), num(zero), num(other), num(other)),
        )
    };
    let t_xor = lam(
        "x",
        Aspect::NonModal,
        Type::Nat,
        case(
            Type::arrow(Aspect::NonModal, Type::Nat, Type::Nat),
            var("x"),
            table(0, 1),
            table(1, 0),
            table(1, 0),
        ),
    );
    app(
        lam(
            "x",
            Aspect::NonModal,
            Type::Nat,
            apps(t_xor, [var("x"), var("x")]),
        ),
        Term::Rand,
    )
}

pub fn stdlib_corpus() -> Vec<Term> {
    let mut out = Vec::new();
    for n in [0u64, 1, 5, 12] {
        out.push(app(mk_encode(), num(n)));
    }
    for (i, j) in [(0u64, 0u64), (1, 2), (2, 3), (3, 3)] {
        out.push(apps(mk_add(), [unary(i), unary(j)]));
    }
    for (i, j) in [(0u64, 2u64), (1, 3), (2, 2), (3, 2)] {
        out.push(apps(mk_mult(), [unary(i), unary(j)]));
    }
    out.push(app(compile_polynomial(&[3, 2]), unary(2)));
    out.push(app(compile_polynomial(&[0, 1]), unary(3)));
    out.push(app(compile_polynomial(&[0, 0, 1]), unary(2)));
    for j in 0..3usize {
        out.push(apps(
            mk_switch(&Type::Nat, 3),
            [Term::Num(fs_element(j)), num(4), num(5), num(6), num(7)],
        ));
    }
    for word in [vec![0usize, 2], vec![1]] {
        out.push(app(
            mk_append(3),
            pair(Term::Num(encode_string(&word)), Term::Num(fs_element(1))),
        ));
        out.push(proj1(app(mk_tail(3), Term::Num(encode_string(&word)))));
    }
    for n in [0u64, 5, 9] {
        out.push(app(mk_ntos(3, 1, 2), num(n)));
        out.push(app(mk_ston(3, 2), app(mk_ntos(3, 1, 2), num(n))));
    }
    out.push(rslr::parse_term(WORKED_EXAMPLE).unwrap());
    out.push(xor_of_one_coin());
    out
}

fn gen_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth == 0 {
        return if rng.gen_bool(0.5) {
            Term::Rand
        } else {
            num(rng.gen_range(0..8))
        };
    }
    match rng.gen_range(0..8) {
        0 => Term::Rand,
        1 => num(rng.gen_range(0..16)),
        2 => app(Term::S0, gen_term(rng, depth - 1)),
        3 => app(Term::S1, gen_term(rng, depth - 1)),
        4 => app(Term::P, gen_term(rng, depth - 1)),
        5 => case(
            Type::Nat,
            gen_term(rng, depth - 1),
            gen_term(rng, depth - 1),
            gen_term(rng, depth - 1),
            gen_term(rng, depth - 1),
        ),
        6 => {
            let uses = rng.gen_range(0..3);
            let mut body = var("v");
            for _ in 0..uses {
                body = case(Type::Nat, var("v"), body.clone(), body.clone(), body);
            }
            app(
                lam("v", Aspect::NonModal, Type::Nat, body),
                gen_term(rng, depth - 1),
            )
        }
        _ => {
            let p = pair(gen_term(rng, depth - 1), gen_term(rng, depth - 1));
            if rng.gen_bool(0.5) {
                proj1(p)
            } else {
                proj2(p)
            }
        }
    }
}

/// One well-typed explicit closed term of type N per seed.
pub fn random_term(seed: u64) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = gen_term(&mut rng, 4);
    assert!(t.is_explicit() && t.is_closed());
    assert!(infer_closed(&t).is_ok(), "generator produced {}", t);
    t
}

/// Ten seeded explicit closed terms of type N, each containing at
/// least one coin flip.
pub fn random_terms() -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    while out.len() < 10 {
        let t = gen_term(&mut rng, 4);
        if !t.contains_rand() {
            continue;
        }
        assert!(t.is_explicit() && t.is_closed());
        assert!(infer_closed(&t).is_ok(), "generator produced {}", t);
        out.push(t);
    }
    out
}

pub fn corpus() -> Vec<Term> {
    let mut out = stdlib_corpus();
    out.extend(random_terms());
    out
}
