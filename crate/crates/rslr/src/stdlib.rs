//! Library of terms: unary arithmetic, polynomials, finite sets and
//! strings encoded as numerals.
//!
//! Unary numbers are all-ones numerals (the number with i binary digits
//! of 1 stands for i). A finite set element with index i is the numeral
//! with binary digits 1 followed by i zeros. A string is the
//! concatenation of its symbol blocks, most significant first, so the
//! empty string is 0 and a singleton string equals its symbol.

use crate::ast::{
    app, apps, case, lam, num, pair, proj1, proj2, rec, var, Aspect, Term, Type,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The unary encoding of `i`: the numeral `2^i - 1`.
pub fn unary_value(i: u64) -> BigUint {
    (BigUint::one() << i) - 1u8
}

pub fn unary(i: u64) -> Term {
    Term::Num(unary_value(i))
}

/// Inverse of `unary_value` on all-ones numerals.
pub fn unary_length(n: &BigUint) -> Option<u64> {
    let i = n.bits();
    if *n == unary_value(i) {
        Some(i)
    } else {
        None
    }
}

/// `!N -> N`, sends a numeral to the unary encoding of its digit count
/// (zero has no digits here).
pub fn mk_encode() -> Term {
    lam(
        "x",
        Aspect::Modal,
        Type::Nat,
        rec(
            Type::Nat,
            var("x"),
            num(0),
            lam(
                "a",
                Aspect::Modal,
                Type::Nat,
                lam("y", Aspect::NonModal, Type::Nat, app(Term::S1, var("y"))),
            ),
        ),
    )
}

/// `!N -> ~N -> N`, unary addition.
pub fn mk_add() -> Term {
    lam(
        "x",
        Aspect::Modal,
        Type::Nat,
        lam(
            "y",
            Aspect::NonModal,
            Type::Nat,
            rec(
                Type::Nat,
                var("x"),
                var("y"),
                lam(
                    "a",
                    Aspect::Modal,
                    Type::Nat,
                    lam("b", Aspect::NonModal, Type::Nat, app(Term::S1, var("b"))),
                ),
            ),
        ),
    )
}

/// `!N -> !N -> N`, unary multiplication.
pub fn mk_mult() -> Term {
    let loop_ = rec(
        Type::Nat,
        app(Term::P, var("x")),
        var("y"),
        lam(
            "a",
            Aspect::Modal,
            Type::Nat,
            lam(
                "b",
                Aspect::NonModal,
                Type::Nat,
                apps(mk_add(), [var("y"), var("b")]),
            ),
        ),
    );
    lam(
        "x",
        Aspect::Modal,
        Type::Nat,
        lam(
            "y",
            Aspect::Modal,
            Type::Nat,
            case(Type::Nat, var("x"), num(0), loop_.clone(), loop_),
        ),
    )
}

/// `!N -> N` computing `p` in unary: coefficients are given lowest
/// degree first, input and output are unary numbers.
pub fn compile_polynomial(coeffs: &[u64]) -> Term {
    let mut monomials = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut pow: Option<Term> = None;
        for _ in 0..k {
            pow = Some(match pow {
                None => var("n"),
                Some(p) => apps(mk_mult(), [var("n"), p]),
            });
        }
        let mono = match pow {
            None => unary(c),
            Some(p) if c == 1 => p,
            Some(p) => apps(mk_mult(), [unary(c), p]),
        };
        monomials.push(mono);
    }
    let body = match monomials.pop() {
        None => num(0),
        Some(last) => monomials
            .into_iter()
            .rev()
            .fold(last, |acc, m| apps(mk_add(), [m, acc])),
    };
    lam("n", Aspect::Modal, Type::Nat, body)
}

/// Encoding of the finite set element with index `i`.
pub fn fs_element(i: usize) -> BigUint {
    BigUint::one() << i
}

/// Dispatch on a finite set with `m` elements:
/// `~N -> ~A -> ... -> ~A -> ~A -> A`, taking the encoded element, one
/// branch per element and a default for invalid encodings.
pub fn mk_switch(a: &Type, m: usize) -> Term {
    let branch_names: Vec<String> = (0..m).map(|i| format!("y{}", i)).collect();
    let body = if m == 0 {
        var("z")
    } else {
        let recurse = apps(
            mk_switch(a, m - 1),
            std::iter::once(app(Term::P, var("x")))
                .chain(branch_names[1..].iter().map(|n| var(n)))
                .chain(std::iter::once(var("h"))),
        );
        let hold = |t: Term| lam("h", Aspect::NonModal, a.clone(), t);
        app(
            case(
                Type::arrow(Aspect::NonModal, a.clone(), a.clone()),
                var("x"),
                hold(var("h")),
                hold(recurse),
                hold(var("y0")),
            ),
            var("z"),
        )
    };
    let with_default = lam("z", Aspect::NonModal, a.clone(), body);
    let with_branches = branch_names
        .into_iter()
        .rev()
        .fold(with_default, |acc, n| {
            lam(&n, Aspect::NonModal, a.clone(), acc)
        });
    lam("x", Aspect::NonModal, Type::Nat, with_branches)
}

/// `mk_switch` applied to a scrutinee, its branches and a default.
pub fn switch_apply(a: &Type, scrut: Term, branches: Vec<Term>, default: Term) -> Term {
    let m = branches.len();
    apps(
        mk_switch(a, m),
        std::iter::once(scrut)
            .chain(branches)
            .chain(std::iter::once(default)),
    )
}

/// Encoding of the string with the given symbol indices.
pub fn encode_string(indices: &[usize]) -> BigUint {
    let mut acc = BigUint::zero();
    for &j in indices {
        acc = (acc << (j + 1)) | fs_element(j);
    }
    acc
}

/// Inverse of `encode_string` over an alphabet of `m` symbols.
pub fn decode_string(n: &BigUint, m: usize) -> Option<Vec<usize>> {
    let mut rest = n.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let j = rest.trailing_zeros().unwrap_or(0) as usize;
        if j >= m {
            return None;
        }
        rest >>= j + 1;
        out.push(j);
    }
    out.reverse();
    Some(out)
}

fn prod_nn() -> Type {
    Type::prod(Type::Nat, Type::Nat)
}

/// `~(N * N) -> N`: appends a symbol to a string.
pub fn mk_append(m: usize) -> Term {
    let s = || proj1(var("p"));
    let branches: Vec<Term> = (0..m)
        .map(|j| {
            let mut t = app(Term::S1, s());
            for _ in 0..j {
                t = app(Term::S0, t);
            }
            t
        })
        .collect();
    lam(
        "p",
        Aspect::NonModal,
        prod_nn(),
        switch_apply(&Type::Nat, proj2(var("p")), branches, s()),
    )
}

/// `~N -> N * N`: strips the last symbol, returning the remaining
/// string and the symbol. The empty string yields itself paired with
/// the first alphabet element. Built from nested cases; the zero run of
/// a valid block is shorter than the alphabet.
pub fn mk_tail(m: usize) -> Term {
    fn build(j: usize, m: usize, cur: Term) -> Term {
        if j == m {
            // invalid encoding, give a total answer
            return pair(cur, Term::Num(fs_element(m - 1)));
        }
        case(
            prod_nn(),
            cur.clone(),
            pair(num(0), num(1)),
            build(j + 1, m, app(Term::P, cur.clone())),
            pair(app(Term::P, cur), Term::Num(fs_element(j))),
        )
    }
    lam("s", Aspect::NonModal, Type::Nat, build(0, m, var("s")))
}

/// `!N -> N`: writes the digits of a numeral as a string, most
/// significant first, using the alphabet symbols with indices `i0` and
/// `i1` for the two digits.
pub fn mk_ntos(m: usize, i0: usize, i1: usize) -> Term {
    let append = mk_append(m);
    let emit = |i: usize| {
        app(
            append.clone(),
            pair(var("y"), Term::Num(fs_element(i))),
        )
    };
    lam(
        "x",
        Aspect::Modal,
        Type::Nat,
        rec(
            Type::Nat,
            var("x"),
            num(0),
            lam(
                "a",
                Aspect::Modal,
                Type::Nat,
                lam(
                    "y",
                    Aspect::NonModal,
                    Type::Nat,
                    case(Type::Nat, var("a"), var("y"), emit(i0), emit(i1)),
                ),
            ),
        ),
    )
}

/// `!N -> N`: reads a string back as a numeral, one digit per symbol.
/// The symbol with index `i1` contributes digit 1, every other symbol
/// digit 0, so blanks on the tape read as zeros.
pub fn mk_ston(m: usize, i1: usize) -> Term {
    // state: (output so far, pending block as a symbol encoding or 0)
    let emit_branches = |out: Term| -> Vec<Term> {
        (0..m)
            .map(|j| {
                if j == i1 {
                    app(Term::S1, out.clone())
                } else {
                    app(Term::S0, out.clone())
                }
            })
            .collect()
    };
    let st_out = || proj1(var("st"));
    let st_pend = || proj2(var("st"));
    let on_one = pair(
        switch_apply(&Type::Nat, st_pend(), emit_branches(st_out()), st_out()),
        num(1),
    );
    let step = lam(
        "y",
        Aspect::Modal,
        Type::Nat,
        lam(
            "st",
            Aspect::NonModal,
            prod_nn(),
            case(
                prod_nn(),
                var("y"),
                var("st"),
                pair(st_out(), app(Term::S0, st_pend())),
                on_one,
            ),
        ),
    );
    let flush = switch_apply(&Type::Nat, st_pend(), emit_branches(st_out()), st_out());
    lam(
        "s",
        Aspect::Modal,
        Type::Nat,
        app(
            lam("st", Aspect::Modal, prod_nn(), flush),
            rec(prod_nn(), var("s"), pair(num(0), num(0)), step),
        ),
    )
}

/// Named alphabet; the first symbol is the blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub symbols: Vec<String>,
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Alphabet, String> {
        if symbols.is_empty() {
            return Err("alphabet must not be empty".to_string());
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(format!("duplicate alphabet symbol {}", s));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blank(&self) -> usize {
        0
    }

    pub fn index_of(&self, sym: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == sym)
    }

    /// Indices of the symbols spelled "0" and "1", needed to move
    /// numerals on and off a tape.
    pub fn digit_indices(&self) -> Option<(usize, usize)> {
        Some((self.index_of("0")?, self.index_of("1")?))
    }
}

/// The alphabet used when a string operation is requested by name:
/// blank, then the two digits.
pub fn default_alphabet() -> Alphabet {
    Alphabet::new(vec!["_".to_string(), "0".to_string(), "1".to_string()]).unwrap()
}

/// Looks up a library term by name.
pub fn by_name(name: &str) -> Option<Term> {
    let ab = default_alphabet();
    let (i0, i1) = ab.digit_indices().unwrap();
    match name {
        "encode" => Some(mk_encode()),
        "add" => Some(mk_add()),
        "mult" => Some(mk_mult()),
        "append" => Some(mk_append(ab.len())),
        "tail" => Some(mk_tail(ab.len())),
        "ntos" => Some(mk_ntos(ab.len(), i0, i1)),
        "ston" => Some(mk_ston(ab.len(), i1)),
        _ => None,
    }
}

pub fn catalogue() -> &'static [&'static str] {
    &["encode", "add", "mult", "append", "tail", "ntos", "ston"]
}
