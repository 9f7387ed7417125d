//! Big-step evaluation by exhaustive enumeration of derivations.
//!
//! Evaluation is split into two judgments. The first (`eval_rf`)
//! eliminates every recursion and performs the substitutions that are
//! safe before coins are resolved; its values are rec-free terms. The
//! second (`eval_nf`) runs rec-free closed terms of base type down to
//! numerals and pairs of numerals, resolving coins. `eval` composes the
//! two and returns the exact distribution.
//!
//! Each outcome carries derivation metrics: the number of rule
//! instances and the largest judged term, measured three ways.

use crate::ast::{app, apps, open, shift, spine, Term};
use crate::dist::{half, one, Dist, Prob};
use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("stuck term: {term}")]
    Stuck { term: Term },
    #[error("term is not rec-free: {term}")]
    NotExplicit { term: Term },
    #[error("fuel exhausted while evaluating: {term}")]
    Fuel { term: Term },
}

/// Derivation metrics for one enumerated derivation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Metrics {
    /// Number of rule instances in the derivation.
    pub nodes: u64,
    /// Largest size of a judged term.
    pub max_size: u64,
    /// Largest size with numerals counting one.
    pub max_size_wonum: u64,
    /// Largest numeral size in a judged term.
    pub max_size_num: u64,
}

impl Metrics {
    fn of_term(t: &Term) -> Metrics {
        Metrics {
            nodes: 1,
            max_size: t.size(),
            max_size_wonum: t.size_wonum(),
            max_size_num: t.size_num(),
        }
    }

    fn absorb(&mut self, other: &Metrics) {
        self.nodes += other.nodes;
        self.max_size = self.max_size.max(other.max_size);
        self.max_size_wonum = self.max_size_wonum.max(other.max_size_wonum);
        self.max_size_num = self.max_size_num.max(other.max_size_num);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub prob: Prob,
    pub term: Term,
    pub metrics: Metrics,
}

fn outcome(prob: Prob, term: Term, metrics: Metrics) -> Outcome {
    Outcome {
        prob,
        term,
        metrics,
    }
}

/// Cartesian combination of independent premises. Probabilities
/// multiply, node counts add, maxima join.
fn product(parts: &[Vec<Outcome>]) -> Vec<(Prob, Vec<Term>, Metrics)> {
    let mut acc: Vec<(Prob, Vec<Term>, Metrics)> =
        vec![(one(), Vec::new(), Metrics::default())];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (p, ts, m) in &acc {
            for o in part {
                let mut m2 = *m;
                m2.absorb(&o.metrics);
                let mut ts2 = ts.clone();
                ts2.push(o.term.clone());
                next.push((p * &o.prob, ts2, m2));
            }
        }
        acc = next;
    }
    acc
}

struct Evaluator {
    fuel: u64,
    used: u64,
}

impl Evaluator {
    fn tick(&mut self, t: &Term) -> Result<(), EvalError> {
        self.used += 1;
        if self.used > self.fuel {
            Err(EvalError::Fuel { term: t.clone() })
        } else {
            Ok(())
        }
    }

    /// Runs a rec-free closed term of base type down to base values.
    fn nf(&mut self, t: &Term) -> Result<Vec<Outcome>, EvalError> {
        self.tick(t)?;
        let m0 = Metrics::of_term(t);
        let stuck = || EvalError::Stuck { term: t.clone() };
        let (head, args) = spine(t);
        match head {
            Term::Num(_) if args.is_empty() => {
                Ok(vec![outcome(one(), head.clone(), m0)])
            }
            Term::Rand if args.is_empty() => Ok(vec![
                outcome(half(), Term::Num(BigUint::zero()), m0),
                outcome(half(), Term::Num(BigUint::from(1u8)), m0),
            ]),
            Term::S0 | Term::S1 | Term::P if args.len() == 1 => {
                let subs = self.nf(args[0])?;
                let mut out = Vec::new();
                for o in subs {
                    let n = o.term.as_numeral().ok_or_else(stuck)?;
                    let v = match head {
                        Term::S0 => n * 2u8,
                        Term::S1 => n * 2u8 + 1u8,
                        _ => n / 2u8,
                    };
                    let mut m = m0;
                    m.absorb(&o.metrics);
                    out.push(outcome(o.prob, Term::Num(v), m));
                }
                Ok(out)
            }
            Term::Pair(l, r) if args.is_empty() => {
                let parts = [self.nf(l)?, self.nf(r)?];
                Ok(product(&parts)
                    .into_iter()
                    .map(|(p, ts, m)| {
                        let mut m2 = m0;
                        m2.absorb(&m);
                        outcome(p, crate::ast::pair(ts[0].clone(), ts[1].clone()), m2)
                    })
                    .collect())
            }
            Term::Proj1(s) | Term::Proj2(s) if args.is_empty() => {
                let subs = self.nf(s)?;
                let mut out = Vec::new();
                for o in subs {
                    let v = match (&o.term, head) {
                        (Term::Pair(l, _), Term::Proj1(_)) => (**l).clone(),
                        (Term::Pair(_, r), Term::Proj2(_)) => (**r).clone(),
                        _ => return Err(stuck()),
                    };
                    let mut m = m0;
                    m.absorb(&o.metrics);
                    out.push(outcome(o.prob, v, m));
                }
                Ok(out)
            }
            Term::Case {
                scrut,
                zero,
                even,
                odd,
                ..
            } => {
                let scruts = self.nf(scrut)?;
                let mut out = Vec::new();
                for so in scruts {
                    let n = so.term.as_numeral().ok_or_else(stuck)?;
                    let branch: &Term = if n.is_zero() {
                        zero
                    } else if (n % 2u8).is_zero() {
                        even
                    } else {
                        odd
                    };
                    let cont = apps(branch.clone(), args.iter().map(|a| (*a).clone()));
                    for co in self.nf(&cont)? {
                        let mut m = m0;
                        m.absorb(&so.metrics);
                        m.absorb(&co.metrics);
                        out.push(outcome(&so.prob * &co.prob, co.term, m));
                    }
                }
                Ok(out)
            }
            Term::Abs { ty, body, .. } if !args.is_empty() => {
                let (s, rest) = (args[0], &args[1..]);
                if ty.is_base() {
                    let argv = self.nf(s)?;
                    let mut out = Vec::new();
                    for ao in argv {
                        if !ao.term.is_base_value() {
                            return Err(stuck());
                        }
                        let cont = apps(
                            open(body, &ao.term),
                            rest.iter().map(|a| (*a).clone()),
                        );
                        for co in self.nf(&cont)? {
                            let mut m = m0;
                            m.absorb(&ao.metrics);
                            m.absorb(&co.metrics);
                            out.push(outcome(&ao.prob * &co.prob, co.term, m));
                        }
                    }
                    Ok(out)
                } else {
                    let cont = apps(open(body, s), rest.iter().map(|a| (*a).clone()));
                    let mut out = Vec::new();
                    for co in self.nf(&cont)? {
                        let mut m = m0;
                        m.absorb(&co.metrics);
                        out.push(outcome(co.prob, co.term, m));
                    }
                    Ok(out)
                }
            }
            Term::Rec { .. } => Err(EvalError::NotExplicit { term: t.clone() }),
            _ => Err(stuck()),
        }
    }

    /// Eliminates recursions and pre-reduces a closed term, without
    /// resolving the coins it leaves in place.
    fn rf(&mut self, t: &Term) -> Result<Vec<Outcome>, EvalError> {
        self.tick(t)?;
        let m0 = Metrics::of_term(t);
        let stuck = || EvalError::Stuck { term: t.clone() };
        let (head, args) = spine(t);
        match head {
            Term::Num(_) | Term::S0 | Term::S1 | Term::P | Term::Rand if args.is_empty() => {
                Ok(vec![outcome(one(), head.clone(), m0)])
            }
            Term::S0 | Term::S1 | Term::P if args.len() == 1 => {
                let subs = self.rf(args[0])?;
                Ok(subs
                    .into_iter()
                    .map(|o| {
                        let mut m = m0;
                        m.absorb(&o.metrics);
                        outcome(o.prob, app(head.clone(), o.term), m)
                    })
                    .collect())
            }
            Term::Var(..) | Term::Free(_) => {
                let parts: Result<Vec<_>, _> = args.iter().map(|a| self.rf(a)).collect();
                Ok(product(&parts?)
                    .into_iter()
                    .map(|(p, ts, m)| {
                        let mut m2 = m0;
                        m2.absorb(&m);
                        outcome(p, apps(head.clone(), ts), m2)
                    })
                    .collect())
            }
            Term::Pair(l, r) if args.is_empty() => {
                let parts = [self.rf(l)?, self.rf(r)?];
                Ok(product(&parts)
                    .into_iter()
                    .map(|(p, ts, m)| {
                        let mut m2 = m0;
                        m2.absorb(&m);
                        outcome(p, crate::ast::pair(ts[0].clone(), ts[1].clone()), m2)
                    })
                    .collect())
            }
            Term::Proj1(s) | Term::Proj2(s) if args.is_empty() => {
                let subs = self.rf(s)?;
                Ok(subs
                    .into_iter()
                    .map(|o| {
                        let mut m = m0;
                        m.absorb(&o.metrics);
                        let v = if matches!(head, Term::Proj1(_)) {
                            crate::ast::proj1(o.term)
                        } else {
                            crate::ast::proj2(o.term)
                        };
                        outcome(o.prob, v, m)
                    })
                    .collect())
            }
            Term::Abs {
                hint,
                aspect,
                ty,
                body,
            } if args.is_empty() => {
                let subs = self.rf(body)?;
                Ok(subs
                    .into_iter()
                    .map(|o| {
                        let mut m = m0;
                        m.absorb(&o.metrics);
                        outcome(
                            o.prob,
                            Term::Abs {
                                hint: hint.clone(),
                                aspect: *aspect,
                                ty: ty.clone(),
                                body: Box::new(o.term),
                            },
                            m,
                        )
                    })
                    .collect())
            }
            Term::Abs {
                hint,
                aspect,
                ty,
                body,
            } => {
                let (s, rest) = (args[0], &args[1..]);
                if !ty.is_base() {
                    // higher-order beta substitutes the raw argument
                    let cont = apps(open(body, s), rest.iter().map(|a| (*a).clone()));
                    let subs = self.rf(&cont)?;
                    return Ok(subs
                        .into_iter()
                        .map(|o| {
                            let mut m = m0;
                            m.absorb(&o.metrics);
                            outcome(o.prob, o.term, m)
                        })
                        .collect());
                }
                let argv = self.rf(s)?;
                let deferred = argv.iter().any(|o| !o.term.is_closed());
                if deferred {
                    // The argument still mentions an enclosing binder,
                    // so the redex must wait for the numeral phase.
                    // Everything around it is still evaluated.
                    let parts: Result<Vec<_>, _> = rest.iter().map(|a| self.rf(a)).collect();
                    let parts = parts?;
                    let bodies = self.rf(body)?;
                    let mut out = Vec::new();
                    for ao in &argv {
                        for bo in &bodies {
                            for (p, ts, m) in product(&parts) {
                                let mut m2 = m0;
                                m2.absorb(&ao.metrics);
                                m2.absorb(&bo.metrics);
                                m2.absorb(&m);
                                let f = Term::Abs {
                                    hint: hint.clone(),
                                    aspect: *aspect,
                                    ty: ty.clone(),
                                    body: Box::new(bo.term.clone()),
                                };
                                out.push(outcome(
                                    &ao.prob * &bo.prob * p,
                                    apps(app(f, ao.term.clone()), ts),
                                    m2,
                                ));
                            }
                        }
                    }
                    return Ok(out);
                }
                let mut out = Vec::new();
                match aspect {
                    crate::ast::Aspect::Modal => {
                        for ao in argv {
                            for no in self.nf(&ao.term)? {
                                let cont = apps(
                                    open(body, &no.term),
                                    rest.iter().map(|a| (*a).clone()),
                                );
                                for co in self.rf(&cont)? {
                                    let mut m = m0;
                                    m.absorb(&ao.metrics);
                                    m.absorb(&no.metrics);
                                    m.absorb(&co.metrics);
                                    out.push(outcome(
                                        &ao.prob * &no.prob * &co.prob,
                                        co.term,
                                        m,
                                    ));
                                }
                            }
                        }
                    }
                    crate::ast::Aspect::NonModal => {
                        // the abstraction survives with its argument
                        // evaluated in place; the body runs open
                        let inner = apps(
                            (**body).clone(),
                            rest.iter().map(|a| shift(a, 1, 0)),
                        );
                        let us = self.rf(&inner)?;
                        for ao in argv {
                            for no in self.nf(&ao.term)? {
                                for uo in &us {
                                    let mut m = m0;
                                    m.absorb(&ao.metrics);
                                    m.absorb(&no.metrics);
                                    m.absorb(&uo.metrics);
                                    let f = Term::Abs {
                                        hint: hint.clone(),
                                        aspect: *aspect,
                                        ty: ty.clone(),
                                        body: Box::new(uo.term.clone()),
                                    };
                                    out.push(outcome(
                                        &ao.prob * &no.prob * &uo.prob,
                                        app(f, no.term.clone()),
                                        m,
                                    ));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            Term::Case {
                ty,
                scrut,
                zero,
                even,
                odd,
            } => {
                let mut parts = vec![
                    self.rf(scrut)?,
                    self.rf(zero)?,
                    self.rf(even)?,
                    self.rf(odd)?,
                ];
                for a in &args {
                    parts.push(self.rf(a)?);
                }
                Ok(product(&parts)
                    .into_iter()
                    .map(|(p, mut ts, m)| {
                        let spine_vals = ts.split_off(4);
                        let mut m2 = m0;
                        m2.absorb(&m);
                        let c = crate::ast::case(
                            ty.clone(),
                            ts[0].clone(),
                            ts[1].clone(),
                            ts[2].clone(),
                            ts[3].clone(),
                        );
                        outcome(p, apps(c, spine_vals), m2)
                    })
                    .collect())
            }
            Term::Rec {
                arg, base, step, ..
            } => {
                let argv = self.rf(arg)?;
                let bases = self.rf(base)?;
                let spine_parts: Result<Vec<_>, _> =
                    args.iter().map(|a| self.rf(a)).collect();
                let spine_parts = spine_parts?;
                let mut out = Vec::new();
                for ao in argv {
                    if !ao.term.is_closed() {
                        return Err(EvalError::Stuck { term: ao.term });
                    }
                    for no in self.nf(&ao.term)? {
                        let n = no.term.as_numeral().ok_or_else(stuck)?.clone();
                        // one unfolding per binary digit, none for zero
                        let k = n.bits();
                        let mut step_parts = Vec::new();
                        for j in 0..k {
                            let prefix = Term::Num(&n >> j);
                            step_parts.push(self.rf(&app((**step).clone(), prefix))?);
                        }
                        for (sp, svals, sm) in product(&step_parts) {
                            for bo in &bases {
                                let mut chain = bo.term.clone();
                                for r in svals.iter().rev() {
                                    chain = app(r.clone(), chain);
                                }
                                for (qp, qvals, qm) in product(&spine_parts) {
                                    let mut m = m0;
                                    m.absorb(&ao.metrics);
                                    m.absorb(&no.metrics);
                                    m.absorb(&sm);
                                    m.absorb(&bo.metrics);
                                    m.absorb(&qm);
                                    out.push(outcome(
                                        &ao.prob * &no.prob * &sp * &bo.prob * &qp,
                                        apps(chain.clone(), qvals),
                                        m,
                                    ));
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            _ => Err(stuck()),
        }
    }
}

/// All derivations of the numeral-phase judgment for a rec-free closed
/// term of base type.
pub fn eval_nf(t: &Term, fuel: u64) -> Result<Vec<Outcome>, EvalError> {
    let mut ev = Evaluator { fuel, used: 0 };
    ev.nf(t)
}

/// All derivations of the recursion-elimination judgment.
pub fn eval_rf(t: &Term, fuel: u64) -> Result<Vec<Outcome>, EvalError> {
    let mut ev = Evaluator { fuel, used: 0 };
    ev.rf(t)
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Big-step evaluation of a closed term of base type: recursion
/// elimination followed by the numeral phase, composed into the exact
/// distribution over base values.
pub fn eval(t: &Term, fuel: u64) -> Result<Dist<Term>, EvalError> {
    let mut ev = Evaluator { fuel, used: 0 };
    let firsts = ev.rf(t)?;
    let mut d = Dist::empty();
    for o in firsts {
        for no in ev.nf(&o.term)? {
            d.add(no.term, &o.prob * &no.prob);
        }
    }
    Ok(d)
}

/// Worst-case derivation metrics over all numeral-phase derivations of
/// a rec-free closed term.
pub fn derivation_metrics(t: &Term, fuel: u64) -> Result<Metrics, EvalError> {
    let outs = eval_nf(t, fuel)?;
    let mut m = Metrics::default();
    for o in &outs {
        m.nodes = m.nodes.max(o.metrics.nodes);
        m.max_size = m.max_size.max(o.metrics.max_size);
        m.max_size_wonum = m.max_size_wonum.max(o.metrics.max_size_wonum);
        m.max_size_num = m.max_size_num.max(o.metrics.max_size_num);
    }
    Ok(m)
}

/// Worst-case metrics over all full derivations (both phases) of any
/// closed term of base type: per branch, the phases' node counts add
/// and their size maxima join.
pub fn full_metrics(t: &Term, fuel: u64) -> Result<Metrics, EvalError> {
    let mut ev = Evaluator { fuel, used: 0 };
    let firsts = ev.rf(t)?;
    let mut m = Metrics::default();
    for o in &firsts {
        for no in ev.nf(&o.term)? {
            m.nodes = m.nodes.max(o.metrics.nodes + no.metrics.nodes);
            m.max_size = m.max_size.max(o.metrics.max_size.max(no.metrics.max_size));
            m.max_size_wonum = m
                .max_size_wonum
                .max(o.metrics.max_size_wonum.max(no.metrics.max_size_wonum));
            m.max_size_num = m
                .max_size_num
                .max(o.metrics.max_size_num.max(no.metrics.max_size_num));
        }
    }
    Ok(m)
}

pub use crate::smallstep::{sample, sample_with};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::num;
    use crate::dist::prob;
    use crate::parser::parse_term;
    use crate::smallstep::{eval_dist, Strategy};

    fn ev(src: &str) -> Dist<Term> {
        eval(&parse_term(src).unwrap(), DEFAULT_FUEL).unwrap()
    }

    #[test]
    fn numerals_and_constants() {
        assert_eq!(ev("7"), Dist::dirac(num(7)));
        assert_eq!(ev("S0 3"), Dist::dirac(num(6)));
        assert_eq!(ev("S1 3"), Dist::dirac(num(7)));
        assert_eq!(ev("P 0"), Dist::dirac(num(0)));
        assert_eq!(ev("P 7"), Dist::dirac(num(3)));
        assert_eq!(
            ev("rand"),
            Dist::from_pairs([(num(0), prob(1, 2)), (num(1), prob(1, 2))])
        );
    }

    #[test]
    fn case_with_spine() {
        let d = ev("(case[N ~-> N] rand { zero -> S1 | even -> S1 | odd -> S0 }) 1");
        assert_eq!(
            d,
            Dist::from_pairs([(num(3), prob(1, 2)), (num(2), prob(1, 2))])
        );
    }

    #[test]
    fn base_beta_evaluates_argument_first() {
        assert_eq!(ev(r"(\x:!N. S0 x) (S1 1)"), Dist::dirac(num(6)));
        // the coin is resolved once even though x occurs twice
        let d = ev(r"(\x:~N. <x, x>) rand");
        assert_eq!(
            d,
            Dist::from_pairs([
                (crate::ast::pair(num(0), num(0)), prob(1, 2)),
                (crate::ast::pair(num(1), num(1)), prob(1, 2)),
            ])
        );
    }

    #[test]
    fn nonmodal_beta_keeps_abstraction_in_first_phase() {
        let t = parse_term(r"(\y:~N. S0 y) 3").unwrap();
        let rfs = eval_rf(&t, DEFAULT_FUEL).unwrap();
        assert_eq!(rfs.len(), 1);
        assert_eq!(rfs[0].term, parse_term(r"(\y:~N. S0 y) 3").unwrap());
        assert_eq!(ev(r"(\y:~N. S0 y) 3"), Dist::dirac(num(6)));
    }

    #[test]
    fn modal_beta_substitutes_in_first_phase() {
        let t = parse_term(r"(\y:!N. S0 y) 3").unwrap();
        let rfs = eval_rf(&t, DEFAULT_FUEL).unwrap();
        assert_eq!(rfs.len(), 1);
        assert_eq!(rfs[0].term, parse_term("S0 3").unwrap());
    }

    #[test]
    fn rand_is_left_alone_by_the_first_phase() {
        let t = parse_term("S0 rand").unwrap();
        let rfs = eval_rf(&t, DEFAULT_FUEL).unwrap();
        assert_eq!(rfs.len(), 1);
        assert_eq!(rfs[0].term, t);
    }

    #[test]
    fn rec_elimination_unfolds_digits() {
        let d = ev(r"rec[N](13; 0; \x:!N. \y:~N. S1 y)");
        assert_eq!(d, Dist::dirac(num(15)));
        assert_eq!(ev(r"rec[N](0; 9; \x:!N. \y:~N. S1 y)"), Dist::dirac(num(9)));
        assert_eq!(ev(r"rec[N](1; 9; \x:!N. \y:~N. S1 y)"), Dist::dirac(num(19)));
    }

    #[test]
    fn rec_left_in_numeral_phase_is_an_error() {
        let t = parse_term(r"rec[N](3; 0; \x:!N. \y:~N. S1 y)").unwrap();
        assert!(matches!(
            eval_nf(&t, DEFAULT_FUEL),
            Err(EvalError::NotExplicit { .. })
        ));
    }

    #[test]
    fn pairs_and_projections() {
        assert_eq!(ev("p1 <S0 1, 3>"), Dist::dirac(num(2)));
        assert_eq!(ev("p2 <1, S1 1>"), Dist::dirac(num(3)));
        assert_eq!(
            ev("<1, <2, 3>>"),
            Dist::dirac(crate::ast::pair(num(1), crate::ast::pair(num(2), num(3))))
        );
    }

    #[test]
    fn deferred_base_redex_resolves_in_numeral_phase() {
        // the inner argument is a variable of the outer binder, so the
        // first phase keeps the redex
        let d = ev(r"(\y:~N. (\x:~N. S0 x) y) 5");
        assert_eq!(d, Dist::dirac(num(10)));
    }

    #[test]
    fn agrees_with_multistep() {
        let srcs = [
            "rand",
            "S1 (S0 rand)",
            r"(\x:~N. S0 x) rand",
            r"((\x:!N. S1) rand) 7",
            r"rec[N](S1 rand; 0; \x:!N. \y:~N. S1 y)",
            "(case[N ~-> N] rand { zero -> S1 | even -> S1 | odd -> S0 }) (S0 rand)",
            r"(\x:!N. rec[N](x; 0; \a:!N. \b:~N. S1 b)) 12",
        ];
        for src in srcs {
            let t = parse_term(src).unwrap();
            let big = eval(&t, DEFAULT_FUEL).unwrap();
            let small = eval_dist(&t, Strategy::Leftmost, 1_000_000).unwrap();
            assert_eq!(big, small, "mismatch on {}", src);
        }
    }

    #[test]
    fn metrics_respect_the_derivation_bounds() {
        for src in ["S1 (S0 rand)", "7", r"(\x:!N. S0 x) 3"] {
            let t = parse_term(src).unwrap();
            let m = derivation_metrics(&t, DEFAULT_FUEL).unwrap();
            assert!(m.nodes <= t.size_wonum(), "node bound on {}", src);
            assert!(m.max_size_wonum <= t.size_wonum());
            assert!(m.max_size_num <= t.size_num() + t.size_wonum());
            assert!(m.nodes <= 2 * t.size());
        }
    }

    #[test]
    fn mass_is_one_even_with_discarded_coins() {
        let d = ev(r"(\x:!N. 5) rand");
        assert_eq!(d, Dist::dirac(num(5)));
        assert_eq!(d.mass(), one());
    }
}
