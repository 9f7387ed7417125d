//! One-step reduction and the exhaustive multistep semantics.
//!
//! A redex may be contracted in any position except inside the base and
//! step arguments of `rec`. `rand` contracts to 0 and 1 with weight 1/2
//! each; every other axiom is deterministic. Multistep evaluation
//! explores all branches and returns the exact distribution over normal
//! forms, which is strategy independent for typable terms.

use crate::ast::{open, shift, Term};
use crate::dist::{half, one, Dist};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// First redex in preorder, the default.
    Leftmost,
    /// Last redex in preorder.
    Rightmost,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("fuel exhausted while reducing: {term}")]
pub struct FuelExhausted {
    pub term: Term,
}

/// Contracts a root redex. Returns the successors, two of them exactly
/// for `rand` (0 first, then 1).
pub fn contract(t: &Term) -> Option<Vec<Term>> {
    match t {
        Term::Rand => Some(vec![Term::Num(BigUint::zero()), Term::Num(BigUint::from(1u8))]),
        Term::App(f, a) => match (f.as_ref(), a.as_ref()) {
            (Term::S0, Term::Num(n)) => Some(vec![Term::Num(n * 2u8)]),
            (Term::S1, Term::Num(n)) => Some(vec![Term::Num(n * 2u8 + 1u8)]),
            (Term::P, Term::Num(n)) => Some(vec![Term::Num(n / 2u8)]),
            (Term::Abs { ty, body, .. }, arg) => {
                if ty.is_base() {
                    if arg.is_base_value() {
                        Some(vec![open(body, arg)])
                    } else {
                        None
                    }
                } else {
                    Some(vec![open(body, arg)])
                }
            }
            // ((\x:aG. t) s) r -> ((\x:aG. t r) s) when s still needs
            // evaluation, letting the outer argument move inside
            (Term::App(g, s), r) => match g.as_ref() {
                Term::Abs {
                    hint,
                    aspect,
                    ty,
                    body,
                } if ty.is_base() && !s.is_base_value() => {
                    let moved = Term::App(Box::new((**body).clone()), Box::new(shift(r, 1, 0)));
                    Some(vec![Term::App(
                        Box::new(Term::Abs {
                            hint: hint.clone(),
                            aspect: *aspect,
                            ty: ty.clone(),
                            body: Box::new(moved),
                        }),
                        s.clone(),
                    )])
                }
                _ => None,
            },
            _ => None,
        },
        Term::Case {
            scrut,
            zero,
            even,
            odd,
            ..
        } => match scrut.as_ref() {
            Term::Num(n) => {
                let branch = if n.is_zero() {
                    zero
                } else if (n % 2u8).is_zero() {
                    even
                } else {
                    odd
                };
                Some(vec![(**branch).clone()])
            }
            _ => None,
        },
        Term::Rec {
            ty,
            arg,
            base,
            step,
        } => match arg.as_ref() {
            Term::Num(n) => {
                if n.is_zero() {
                    Some(vec![(**base).clone()])
                } else {
                    let rest = Term::Rec {
                        ty: ty.clone(),
                        arg: Box::new(Term::Num(n / 2u8)),
                        base: base.clone(),
                        step: step.clone(),
                    };
                    Some(vec![Term::App(
                        Box::new(Term::App(step.clone(), Box::new(Term::Num(n.clone())))),
                        Box::new(rest),
                    )])
                }
            }
            _ => None,
        },
        Term::Proj1(s) => match s.as_ref() {
            Term::Pair(l, _) => Some(vec![(**l).clone()]),
            _ => None,
        },
        Term::Proj2(s) => match s.as_ref() {
            Term::Pair(_, r) => Some(vec![(**r).clone()]),
            _ => None,
        },
        _ => None,
    }
}

/// Positions of all redexes in preorder. Children are numbered as in
/// the term constructors; the base and step of `rec` are opaque.
pub fn redexes(t: &Term) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(t, &mut path, &mut out);
    out
}

fn collect_redexes(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if contract(t).is_some() {
        out.push(path.clone());
    }
    let kids: Vec<&Term> = match t {
        Term::Abs { body, .. } => vec![body],
        Term::App(f, a) => vec![f, a],
        Term::Case {
            scrut,
            zero,
            even,
            odd,
            ..
        } => vec![scrut, zero, even, odd],
        // reduction may not touch the base and step of a recursion
        Term::Rec { arg, .. } => vec![arg],
        Term::Pair(l, r) => vec![l, r],
        Term::Proj1(s) | Term::Proj2(s) => vec![s],
        _ => vec![],
    };
    for (i, k) in kids.into_iter().enumerate() {
        path.push(i);
        collect_redexes(k, path, out);
        path.pop();
    }
}

pub fn is_normal(t: &Term) -> bool {
    redexes(t).is_empty()
}

fn subterm<'a>(t: &'a Term, path: &[usize]) -> Option<&'a Term> {
    let mut cur = t;
    for &i in path {
        cur = match (cur, i) {
            (Term::Abs { body, .. }, 0) => body,
            (Term::App(f, _), 0) => f,
            (Term::App(_, a), 1) => a,
            (Term::Case { scrut, .. }, 0) => scrut,
            (Term::Case { zero, .. }, 1) => zero,
            (Term::Case { even, .. }, 2) => even,
            (Term::Case { odd, .. }, 3) => odd,
            (Term::Rec { arg, .. }, 0) => arg,
            (Term::Rec { base, .. }, 1) => base,
            (Term::Rec { step, .. }, 2) => step,
            (Term::Pair(l, _), 0) => l,
            (Term::Pair(_, r), 1) => r,
            (Term::Proj1(s), 0) | (Term::Proj2(s), 0) => s,
            _ => return None,
        };
    }
    Some(cur)
}

fn replace(t: &Term, path: &[usize], new: Term) -> Term {
    if path.is_empty() {
        return new;
    }
    let (i, rest) = (path[0], &path[1..]);
    let mut out = t.clone();
    match (&mut out, i) {
        (Term::Abs { body, .. }, 0) => **body = replace(body, rest, new),
        (Term::App(f, _), 0) => **f = replace(f, rest, new),
        (Term::App(_, a), 1) => **a = replace(a, rest, new),
        (Term::Case { scrut, .. }, 0) => **scrut = replace(scrut, rest, new),
        (Term::Case { zero, .. }, 1) => **zero = replace(zero, rest, new),
        (Term::Case { even, .. }, 2) => **even = replace(even, rest, new),
        (Term::Case { odd, .. }, 3) => **odd = replace(odd, rest, new),
        (Term::Rec { arg, .. }, 0) => **arg = replace(arg, rest, new),
        (Term::Rec { base, .. }, 1) => **base = replace(base, rest, new),
        (Term::Rec { step, .. }, 2) => **step = replace(step, rest, new),
        (Term::Pair(l, _), 0) => **l = replace(l, rest, new),
        (Term::Pair(_, r), 1) => **r = replace(r, rest, new),
        (Term::Proj1(s), 0) | (Term::Proj2(s), 0) => **s = replace(s, rest, new),
        _ => panic!("replace: path does not address a subterm"),
    }
    out
}

/// Contracts the redex at `path`, returning all successors.
pub fn step_at(t: &Term, path: &[usize]) -> Option<Vec<Term>> {
    let sub = subterm(t, path)?;
    let succs = contract(sub)?;
    Some(succs.into_iter().map(|s| replace(t, path, s)).collect())
}

/// One scheduled step under the given strategy.
pub fn step(t: &Term, strategy: Strategy) -> Option<Vec<Term>> {
    let rs = redexes(t);
    let pos = match strategy {
        Strategy::Leftmost => rs.first()?,
        Strategy::Rightmost => rs.last()?,
    };
    step_at(t, pos)
}

struct Evaluator {
    strategy: Strategy,
    memo: HashMap<Term, Dist<Term>>,
}

impl Evaluator {
    fn eval(&mut self, t: &Term, budget: u64) -> Result<Dist<Term>, FuelExhausted> {
        if let Some(d) = self.memo.get(t) {
            return Ok(d.clone());
        }
        let succs = match step(t, self.strategy) {
            None => {
                let d = Dist::dirac(t.clone());
                self.memo.insert(t.clone(), d.clone());
                return Ok(d);
            }
            Some(s) => s,
        };
        if budget == 0 {
            return Err(FuelExhausted { term: t.clone() });
        }
        let d = if succs.len() == 1 {
            self.eval(&succs[0], budget - 1)?
        } else {
            let w = half();
            let parts: Result<Vec<_>, _> = succs
                .into_iter()
                .map(|s| self.eval(&s, budget - 1).map(|d| (w.clone(), d)))
                .collect();
            Dist::mix(parts?)
        };
        self.memo.insert(t.clone(), d.clone());
        Ok(d)
    }
}

/// Exhaustive multistep evaluation: the exact distribution over normal
/// forms. `fuel` bounds the number of steps along any single path.
pub fn eval_dist(t: &Term, strategy: Strategy, fuel: u64) -> Result<Dist<Term>, FuelExhausted> {
    let mut ev = Evaluator {
        strategy,
        memo: HashMap::new(),
    };
    ev.eval(t, fuel)
}

/// Like `eval_dist`, also records one line per first visit of each
/// contraction: `pos ⊢ term → succ[, succ]`.
pub fn trace(
    t: &Term,
    strategy: Strategy,
    fuel: u64,
) -> Result<(Vec<String>, Dist<Term>), FuelExhausted> {
    let mut lines = Vec::new();
    let mut memo: HashMap<Term, Dist<Term>> = HashMap::new();
    let d = trace_go(t, strategy, fuel, &mut lines, &mut memo)?;
    Ok((lines, d))
}

fn trace_go(
    t: &Term,
    strategy: Strategy,
    budget: u64,
    lines: &mut Vec<String>,
    memo: &mut HashMap<Term, Dist<Term>>,
) -> Result<Dist<Term>, FuelExhausted> {
    if let Some(d) = memo.get(t) {
        return Ok(d.clone());
    }
    let rs = redexes(t);
    let pos = match strategy {
        Strategy::Leftmost => rs.first(),
        Strategy::Rightmost => rs.last(),
    };
    let pos = match pos {
        None => {
            let d = Dist::dirac(t.clone());
            memo.insert(t.clone(), d.clone());
            return Ok(d);
        }
        Some(p) => p.clone(),
    };
    if budget == 0 {
        return Err(FuelExhausted { term: t.clone() });
    }
    let succs = step_at(t, &pos).expect("redex position");
    let pos_str = if pos.is_empty() {
        "root".to_string()
    } else {
        pos.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    };
    lines.push(format!(
        "{} \u{22a2} {} \u{2192} {}",
        pos_str,
        t,
        succs
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    let d = if succs.len() == 1 {
        trace_go(&succs[0], strategy, budget - 1, lines, memo)?
    } else {
        let parts: Result<Vec<_>, _> = succs
            .into_iter()
            .map(|s| trace_go(&s, strategy, budget - 1, lines, memo).map(|d| (half(), d)))
            .collect();
        Dist::mix(parts?)
    };
    memo.insert(t.clone(), d.clone());
    Ok(d)
}

/// Draws one normal form by following the leftmost strategy and
/// resolving each coin with the seeded generator.
pub fn sample(t: &Term, seed: u64, fuel: u64) -> Result<Term, FuelExhausted> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(t, &mut rng, fuel)
}

pub fn sample_with(t: &Term, rng: &mut impl Rng, fuel: u64) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step(&cur, Strategy::Leftmost) {
            None => return Ok(cur),
            Some(mut succs) => {
                cur = if succs.len() == 1 {
                    succs.pop().unwrap()
                } else {
                    let coin = rng.gen_range(0..2usize);
                    succs.swap_remove(coin)
                };
            }
        }
    }
    if is_normal(&cur) {
        Ok(cur)
    } else {
        Err(FuelExhausted { term: cur })
    }
}

/// Checks that the distribution is the Dirac on a single numeral and
/// returns it.
pub fn expect_numeral_dirac(d: &Dist<Term>) -> Option<BigUint> {
    if d.len() == 1 && d.mass() == one() {
        d.support().next().and_then(|t| t.as_numeral().cloned())
    } else {
        None
    }
}
