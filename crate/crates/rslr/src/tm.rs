//! Probabilistic Turing machines: a spec file format, an exact
//! distribution simulator, a compiler to terms, and recognition
//! checkers.
//!
//! Every (state, symbol) pair carries exactly two transition triples;
//! each step picks one of the two with probability 1/2 (equal triples
//! express determinism). A machine runs for exactly `p(|input|)` steps,
//! where `p` is its budget polynomial, so halting behaviour is
//! expressed by final states that loop in place.
//!
//! Configurations are `⟨left, head, right, state⟩`. Both tape halves
//! keep the symbol adjacent to the head at the right end of the string,
//! so the right half is stored reversed; this makes head moves a
//! `tail`/`append` pair. Off-end reads produce the blank. The head
//! starts on the last input symbol, because `tail` strips the rightmost
//! symbol. The compiled term's output reprojects the whole tape
//! (left ++ head ++ reverse(right)) back to a numeral with `ston`, and
//! the simulator mirrors every one of these conventions exactly.

use crate::ast::{
    app, case, lam, num, pair, proj1, proj2, rec, var, Aspect, Term, Type,
};
use crate::bigstep::{eval, EvalError};
use crate::dist::{Dist, Prob};
use crate::stdlib::{
    compile_polynomial, fs_element, mk_append, mk_encode, mk_ntos, mk_ston, mk_tail, switch_apply,
    Alphabet,
};
use crate::types::{check_first_order, TypeError};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    L,
    S,
    R,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::S => "S",
            Move::R => "R",
        })
    }
}

/// One transition: next state, written symbol, head move (as indices
/// into the state and alphabet lists).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub state: usize,
    pub write: usize,
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmSpec {
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    pub alphabet: Alphabet,
    /// Step budget polynomial in the input length, constant term first.
    pub budget: Vec<u64>,
    pub trans: BTreeMap<(usize, usize), (Triple, Triple)>,
}

/// Machine configuration. `left` is in tape order with the symbol next
/// to the head last; `right` is reversed, also with the nearest symbol
/// last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TmConfig {
    pub left: Vec<usize>,
    pub head: usize,
    pub right: Vec<usize>,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{msg}", .line.map(|l| format!("line {}: ", l)).unwrap_or_default())]
pub struct TmError {
    pub line: Option<usize>,
    pub msg: String,
}

fn err<T>(line: Option<usize>, msg: impl Into<String>) -> Result<T, TmError> {
    Err(TmError {
        line,
        msg: msg.into(),
    })
}

pub fn parse_tm_spec(text: &str) -> Result<TmSpec, TmError> {
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut finals: Option<(usize, Vec<String>)> = None;
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut budget: Option<(usize, Vec<String>)> = None;
    let mut trans_lines: Vec<(usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = match line.split_once(':') {
            Some(kv) => kv,
            None => return err(Some(lineno), "expected `key: value`"),
        };
        let words = || rest.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        let set = |slot: &mut Option<(usize, Vec<String>)>, what: &str| {
            if slot.is_some() {
                return err(Some(lineno), format!("duplicate `{}` section", what));
            }
            *slot = Some((lineno, words()));
            Ok(())
        };
        match key.trim() {
            "states" => set(&mut states, "states")?,
            "finals" => set(&mut finals, "finals")?,
            "alphabet" => set(&mut alphabet, "alphabet")?,
            "budget" => set(&mut budget, "budget")?,
            "initial" => {
                if initial.is_some() {
                    return err(Some(lineno), "duplicate `initial` section");
                }
                initial = Some((lineno, rest.trim().to_string()));
            }
            "trans" => trans_lines.push((lineno, rest.trim().to_string())),
            other => return err(Some(lineno), format!("unknown section `{}`", other)),
        }
    }

    let (sline, state_names) = states.ok_or(TmError {
        line: None,
        msg: "missing `states` section".to_string(),
    })?;
    if state_names.is_empty() {
        return err(Some(sline), "at least one state is required");
    }
    for (i, s) in state_names.iter().enumerate() {
        if state_names[..i].contains(s) {
            return err(Some(sline), format!("duplicate state {}", s));
        }
    }
    let state_index = |line: usize, name: &str| -> Result<usize, TmError> {
        match state_names.iter().position(|s| s == name) {
            Some(i) => Ok(i),
            None => err(Some(line), format!("undeclared state {}", name)),
        }
    };

    let (aline, symbols) = alphabet.ok_or(TmError {
        line: None,
        msg: "missing `alphabet` section".to_string(),
    })?;
    let alphabet = Alphabet::new(symbols).map_err(|msg| TmError {
        line: Some(aline),
        msg,
    })?;
    let sym_index = |line: usize, name: &str| -> Result<usize, TmError> {
        match alphabet.index_of(name) {
            Some(i) => Ok(i),
            None => err(Some(line), format!("undeclared symbol {}", name)),
        }
    };

    let (iline, iname) = initial.ok_or(TmError {
        line: None,
        msg: "missing `initial` section".to_string(),
    })?;
    let initial = state_index(iline, &iname)?;

    let mut final_set = BTreeSet::new();
    if let Some((fline, names)) = finals {
        for n in &names {
            final_set.insert(state_index(fline, n)?);
        }
    }

    let mut budget_coeffs = Vec::new();
    if let Some((bline, words)) = budget {
        for w in &words {
            match w.parse::<u64>() {
                Ok(c) => budget_coeffs.push(c),
                Err(_) => return err(Some(bline), format!("malformed polynomial coefficient {}", w)),
            }
        }
    }

    let mut trans = BTreeMap::new();
    for (lineno, body) in trans_lines {
        let (lhs, rhs) = match body.split_once("->") {
            Some(x) => x,
            None => return err(Some(lineno), "expected `q, s -> triples`"),
        };
        let lhs: Vec<&str> = lhs.split(',').map(str::trim).collect();
        if lhs.len() != 2 {
            return err(Some(lineno), "expected `state, symbol` before ->");
        }
        let q = state_index(lineno, lhs[0])?;
        let s = sym_index(lineno, lhs[1])?;
        let triples: Vec<&str> = rhs.split('|').map(str::trim).collect();
        if triples.len() != 2 {
            return err(
                Some(lineno),
                format!("expected exactly two triples, found {}", triples.len()),
            );
        }
        let mut parsed = Vec::new();
        for t in triples {
            let inner = t
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or(TmError {
                    line: Some(lineno),
                    msg: format!("expected `(state, symbol, move)`, found {}", t),
                })?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return err(Some(lineno), "a triple has exactly three components");
            }
            let mv = match parts[2] {
                "L" => Move::L,
                "S" => Move::S,
                "R" => Move::R,
                other => return err(Some(lineno), format!("bad move {}", other)),
            };
            parsed.push(Triple {
                state: state_index(lineno, parts[0])?,
                write: sym_index(lineno, parts[1])?,
                mv,
            });
        }
        if trans.insert((q, s), (parsed[0], parsed[1])).is_some() {
            return err(
                Some(lineno),
                format!("duplicate transitions for ({}, {})", lhs[0], lhs[1]),
            );
        }
    }

    for q in 0..state_names.len() {
        for s in 0..alphabet.len() {
            if !trans.contains_key(&(q, s)) {
                return err(
                    None,
                    format!(
                        "missing pair of transitions for ({}, {})",
                        state_names[q], alphabet.symbols[s]
                    ),
                );
            }
        }
    }

    Ok(TmSpec {
        states: state_names,
        initial,
        finals: final_set,
        alphabet,
        budget: budget_coeffs,
        trans,
    })
}

pub fn emit_tm_spec(spec: &TmSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("states: {}\n", spec.states.join(" ")));
    out.push_str(&format!("initial: {}\n", spec.states[spec.initial]));
    let finals: Vec<&str> = spec.finals.iter().map(|&q| spec.states[q].as_str()).collect();
    out.push_str(&format!("finals: {}\n", finals.join(" ")));
    out.push_str(&format!("alphabet: {}\n", spec.alphabet.symbols.join(" ")));
    let budget: Vec<String> = spec.budget.iter().map(u64::to_string).collect();
    out.push_str(&format!("budget: {}\n", budget.join(" ")));
    for (&(q, s), &(t1, t2)) in &spec.trans {
        let show = |t: &Triple| {
            format!(
                "({}, {}, {})",
                spec.states[t.state], spec.alphabet.symbols[t.write], t.mv
            )
        };
        out.push_str(&format!(
            "trans: {}, {} -> {} | {}\n",
            spec.states[q],
            spec.alphabet.symbols[s],
            show(&t1),
            show(&t2)
        ));
    }
    out
}

impl TmSpec {
    /// Non-fatal findings: a machine only halts cleanly when its final
    /// states loop in place.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &q in &self.finals {
            for s in 0..self.alphabet.len() {
                let (t1, t2) = self.trans[&(q, s)];
                let loops = |t: &Triple| t.state == q && t.write == s && t.mv == Move::S;
                if !loops(&t1) || !loops(&t2) {
                    out.push(format!(
                        "final state {} does not loop in place on {}",
                        self.states[q], self.alphabet.symbols[s]
                    ));
                }
            }
        }
        out
    }

    pub fn budget_at(&self, len: u64) -> u64 {
        let mut acc = 0u64;
        let mut pow = 1u64;
        for &c in &self.budget {
            acc += c * pow;
            pow = pow.saturating_mul(len);
        }
        acc
    }

    /// The input word for a numeral: its binary digits, most
    /// significant first, over the machine's digit symbols.
    pub fn input_word(&self, n: &BigUint) -> Result<Vec<usize>, TmError> {
        let (i0, i1) = self.digit_indices()?;
        if n.is_zero() {
            return Ok(Vec::new());
        }
        Ok(format!("{:b}", n)
            .bytes()
            .map(|b| if b == b'1' { i1 } else { i0 })
            .collect())
    }

    fn digit_indices(&self) -> Result<(usize, usize), TmError> {
        self.alphabet.digit_indices().ok_or(TmError {
            line: None,
            msg: "alphabet must contain the symbols 0 and 1".to_string(),
        })
    }

    pub fn initial_config(&self, input: &[usize]) -> TmConfig {
        let mut left = input.to_vec();
        let head = left.pop().unwrap_or(self.alphabet.blank());
        TmConfig {
            left,
            head,
            right: Vec::new(),
            state: self.initial,
        }
    }

    fn apply(&self, c: &TmConfig, t: &Triple) -> TmConfig {
        let mut c = c.clone();
        match t.mv {
            Move::S => c.head = t.write,
            Move::R => {
                c.left.push(t.write);
                c.head = c.right.pop().unwrap_or(self.alphabet.blank());
            }
            Move::L => {
                c.right.push(t.write);
                c.head = c.left.pop().unwrap_or(self.alphabet.blank());
            }
        }
        c.state = t.state;
        c
    }

    /// Exact distribution over configurations after `steps` steps, each
    /// step choosing uniformly between the two triples. Configurations
    /// reached along different coin paths merge their mass.
    pub fn simulate(&self, input: &[usize], steps: u64) -> Dist<TmConfig> {
        let half = Prob::new(1.into(), 2.into());
        let mut d = Dist::dirac(self.initial_config(input));
        for _ in 0..steps {
            let mut next = Vec::new();
            for (c, p) in d.iter() {
                let (t1, t2) = self.trans[&(c.state, c.head)];
                if t1 == t2 {
                    next.push((self.apply(c, &t1), p.clone()));
                } else {
                    next.push((self.apply(c, &t1), p * &half));
                    next.push((self.apply(c, &t2), p * &half));
                }
            }
            d = Dist::from_pairs(next);
        }
        d
    }

    /// Reads a final configuration back as a numeral: the whole tape in
    /// order, the digit-1 symbol as 1 and every other symbol as 0.
    pub fn output_of(&self, c: &TmConfig) -> Result<BigUint, TmError> {
        let (_, i1) = self.digit_indices()?;
        let tape = c
            .left
            .iter()
            .chain(std::iter::once(&c.head))
            .chain(c.right.iter().rev());
        let mut n = BigUint::zero();
        for &s in tape {
            n <<= 1u8;
            if s == i1 {
                n |= BigUint::one();
            }
        }
        Ok(n)
    }

    /// End-to-end oracle: run for `p(|n|)` steps on the digits of `n`
    /// and project every final configuration to its output numeral.
    pub fn output_distribution(&self, n: &BigUint) -> Result<Dist<BigUint>, TmError> {
        let word = self.input_word(n)?;
        let d = self.simulate(&word, self.budget_at(word.len() as u64));
        let outs: Vec<(BigUint, Prob)> = d
            .iter()
            .map(|(c, p)| Ok((self.output_of(c)?, p.clone())))
            .collect::<Result<_, TmError>>()?;
        Ok(Dist::from_pairs(outs))
    }
}

fn config_ty() -> Type {
    Type::prod(
        Type::Nat,
        Type::prod(Type::Nat, Type::prod(Type::Nat, Type::Nat)),
    )
}

fn c_left() -> Term {
    proj1(var("c"))
}
fn c_head() -> Term {
    proj1(proj2(var("c")))
}
fn c_right() -> Term {
    proj1(proj2(proj2(var("c"))))
}
fn c_state() -> Term {
    proj2(proj2(proj2(var("c"))))
}

/// The step function `~C -> C` on configurations: one coin picks a
/// side of the transition table (sides agree wherever the two triples
/// are equal), then switches on the state and the head symbol apply
/// that side's triple. Fully deterministic machines get no coin.
pub fn mk_delta(spec: &TmSpec) -> Term {
    let cty = config_ty();
    let m = spec.alphabet.len();
    let tail = mk_tail(m);
    let append = mk_append(m);
    let apply = |t: &Triple| -> Term {
        let q = Term::Num(fs_element(t.state));
        let w = Term::Num(fs_element(t.write));
        match t.mv {
            Move::S => pair(c_left(), pair(w, pair(c_right(), q))),
            Move::R => pair(
                app(append.clone(), pair(c_left(), w)),
                pair(
                    proj2(app(tail.clone(), c_right())),
                    pair(proj1(app(tail.clone(), c_right())), q),
                ),
            ),
            Move::L => pair(
                proj1(app(tail.clone(), c_left())),
                pair(
                    proj2(app(tail.clone(), c_left())),
                    pair(app(append.clone(), pair(c_right(), w)), q),
                ),
            ),
        }
    };
    let dispatch = |side: fn(&(Triple, Triple)) -> Triple| -> Term {
        let per_state: Vec<Term> = (0..spec.states.len())
            .map(|q| {
                let leaves: Vec<Term> = (0..m)
                    .map(|s| apply(&side(&spec.trans[&(q, s)])))
                    .collect();
                switch_apply(&cty, c_head(), leaves, var("c"))
            })
            .collect();
        switch_apply(&cty, c_state(), per_state, var("c"))
    };
    let deterministic = spec.trans.values().all(|(t1, t2)| t1 == t2);
    let body = if deterministic {
        dispatch(|p| p.0)
    } else {
        case(
            cty.clone(),
            Term::Rand,
            dispatch(|p| p.0),
            dispatch(|p| p.1),
            dispatch(|p| p.1),
        )
    };
    lam("c", Aspect::NonModal, cty, body)
}

/// `~S -> C`: the initial configuration, with the head on the last
/// input symbol and an empty right half.
pub fn mk_init(spec: &TmSpec) -> Term {
    let tail = mk_tail(spec.alphabet.len());
    lam(
        "s",
        Aspect::NonModal,
        Type::Nat,
        pair(
            proj1(app(tail.clone(), var("s"))),
            pair(
                proj2(app(tail, var("s"))),
                pair(num(0), Term::Num(fs_element(spec.initial))),
            ),
        ),
    )
}

/// Rebuilds the whole tape of configuration `c` as one string:
/// left ++ head ++ reverse(right), by folding the right half back on.
fn read_tape(spec: &TmSpec) -> Term {
    let m = spec.alphabet.len();
    let tail = mk_tail(m);
    let append = mk_append(m);
    let nn = Type::prod(Type::Nat, Type::Nat);
    // state: (right half not yet replayed, tape so far)
    let go = pair(
        proj1(app(tail.clone(), proj1(var("st")))),
        app(
            append.clone(),
            pair(proj2(var("st")), proj2(app(tail, proj1(var("st"))))),
        ),
    );
    let step = lam(
        "y",
        Aspect::Modal,
        Type::Nat,
        lam(
            "st",
            Aspect::NonModal,
            nn.clone(),
            case(nn.clone(), proj1(var("st")), var("st"), go.clone(), go),
        ),
    );
    let seed = pair(c_right(), app(append, pair(c_left(), c_head())));
    let fold = rec(nn.clone(), c_right(), seed, step);
    app(
        lam("st", Aspect::Modal, nn, proj2(var("st"))),
        fold,
    )
}

/// Compiles a machine to a closed term of type `N !-> N` whose output
/// distribution on every numeral matches the simulator's, projected
/// through `output_of`.
pub fn compile_tm(spec: &TmSpec) -> Result<Term, TmError> {
    let (i0, i1) = spec.digit_indices()?;
    let m = spec.alphabet.len();
    let cty = config_ty();
    let steps = app(
        compile_polynomial(&spec.budget),
        app(mk_encode(), var("x")),
    );
    let start = app(mk_init(spec), app(mk_ntos(m, i0, i1), var("x")));
    let step = lam(
        "y",
        Aspect::NonModal,
        Type::Nat,
        lam(
            "z",
            Aspect::NonModal,
            cty.clone(),
            app(mk_delta(spec), var("z")),
        ),
    );
    let run = rec(cty.clone(), steps, start, step);
    let project = lam(
        "c",
        Aspect::Modal,
        cty,
        app(mk_ston(m, i1), read_tape(spec)),
    );
    Ok(lam(
        "x",
        Aspect::Modal,
        Type::Nat,
        app(project, run),
    ))
}

/// Runs the compiled behaviour of a first-order term on a numeral and
/// returns its exact output distribution over numerals.
pub fn output_dist_of_term(t: &Term, input: &BigUint, fuel: u64) -> Result<Dist<BigUint>, EvalError> {
    let d = eval(&app(t.clone(), Term::Num(input.clone())), fuel)?;
    let outs: Vec<(BigUint, Prob)> = d
        .iter()
        .map(|(k, p)| match k.as_numeral() {
            Some(n) => Ok((n.clone(), p.clone())),
            None => Err(EvalError::Stuck { term: k.clone() }),
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(Dist::from_pairs(outs))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecognitionError {
    #[error("term is not first order of arity 1")]
    NotUnary,
    #[error("epsilon must satisfy 0 < epsilon <= 1/2")]
    BadEpsilon,
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One line of a recognition report: the probability the term lands on
/// the correct side for this input, and how far above `ε` it sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub input: BigUint,
    pub member: bool,
    pub p_correct: Prob,
    pub margin: BigRational,
    pub pass: bool,
}

/// Checks a candidate recognizer on labelled samples: members must hit
/// output 0 with probability above `1 − ε`, non-members must miss it
/// with probability above `1 − ε`. The margin is `p_correct − ε`.
pub fn check_error_recognition(
    t: &Term,
    samples: &[(BigUint, bool)],
    eps: &Prob,
    fuel: u64,
) -> Result<Vec<SampleReport>, RecognitionError> {
    if !(eps > &Prob::zero() && eps <= &Prob::new(1.into(), 2.into())) {
        return Err(RecognitionError::BadEpsilon);
    }
    if check_first_order(t)? != 1 {
        return Err(RecognitionError::NotUnary);
    }
    let mut out = Vec::new();
    for (input, member) in samples {
        let d = eval(&app(t.clone(), Term::Num(input.clone())), fuel)?;
        let accept = d.pmf(&num(0));
        let p_correct = if *member { accept } else { d.mass() - accept };
        let margin = &p_correct - eps;
        let pass = p_correct > Prob::one() - eps;
        out.push(SampleReport {
            input: input.clone(),
            member: *member,
            p_correct,
            margin,
            pass,
        });
    }
    Ok(out)
}

/// Majority semantics: accept iff landing on 0 is at least as likely
/// as landing anywhere else (ties accept).
pub fn majority_decision(t: &Term, input: &BigUint, fuel: u64) -> Result<bool, RecognitionError> {
    if check_first_order(t)? != 1 {
        return Err(RecognitionError::NotUnary);
    }
    let d = eval(&app(t.clone(), Term::Num(input.clone())), fuel)?;
    let accept = d.pmf(&num(0));
    Ok(&accept + &accept >= d.mass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstep::DEFAULT_FUEL;
    use crate::parser::parse_term;
    use crate::types::infer_closed;

    fn coin_writer() -> TmSpec {
        parse_tm_spec(
            "states: go halt\n\
             initial: go\n\
             finals: halt\n\
             alphabet: _ 0 1\n\
             budget: 1\n\
             trans: go, _ -> (halt, 0, S) | (halt, 1, S)\n\
             trans: go, 0 -> (halt, 0, S) | (halt, 1, S)\n\
             trans: go, 1 -> (halt, 0, S) | (halt, 1, S)\n\
             trans: halt, _ -> (halt, _, S) | (halt, _, S)\n\
             trans: halt, 0 -> (halt, 0, S) | (halt, 0, S)\n\
             trans: halt, 1 -> (halt, 1, S) | (halt, 1, S)\n",
        )
        .unwrap()
    }

    fn identity_machine() -> TmSpec {
        parse_tm_spec(
            "states: halt\n\
             initial: halt\n\
             finals: halt\n\
             alphabet: _ 0 1\n\
             budget: 0\n\
             trans: halt, _ -> (halt, _, S) | (halt, _, S)\n\
             trans: halt, 0 -> (halt, 0, S) | (halt, 0, S)\n\
             trans: halt, 1 -> (halt, 1, S) | (halt, 1, S)\n",
        )
        .unwrap()
    }

    fn bit_flipper() -> TmSpec {
        parse_tm_spec(
            "states: flip\n\
             initial: flip\n\
             finals:\n\
             alphabet: _ 0 1\n\
             budget: 1 1\n\
             trans: flip, _ -> (flip, _, S) | (flip, _, S)\n\
             trans: flip, 0 -> (flip, 1, L) | (flip, 1, L)\n\
             trans: flip, 1 -> (flip, 0, L) | (flip, 0, L)\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_and_emit_roundtrip() {
        for spec in [coin_writer(), identity_machine(), bit_flipper()] {
            let text = emit_tm_spec(&spec);
            let back = parse_tm_spec(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(emit_tm_spec(&back), text);
        }
    }

    #[test]
    fn parse_rejects_bad_specs() {
        let e = parse_tm_spec(
            "states: q\ninitial: q\nfinals: q\nalphabet: _\nbudget: 1\n\
             trans: q, _ -> (q, _, S)\n",
        )
        .unwrap_err();
        assert!(e.msg.contains("exactly two triples"), "{}", e);

        let e = parse_tm_spec(
            "states: q\ninitial: q\nfinals:\nalphabet: _\nbudget: 1\n\
             trans: q, _ -> (qq, _, S) | (q, _, S)\n",
        )
        .unwrap_err();
        assert!(e.msg.contains("undeclared state"), "{}", e);

        let e = parse_tm_spec("states: q\ninitial: q\nfinals:\nalphabet: _\nbudget: 1\n")
            .unwrap_err();
        assert!(e.msg.contains("missing pair of transitions"), "{}", e);

        let e = parse_tm_spec(
            "states: q\ninitial: q\nfinals:\nalphabet: _\nbudget: x\n\
             trans: q, _ -> (q, _, S) | (q, _, S)\n",
        )
        .unwrap_err();
        assert!(e.msg.contains("malformed polynomial"), "{}", e);
    }

    #[test]
    fn warnings_flag_restless_finals() {
        assert!(coin_writer().warnings().is_empty());
        let mut spec = coin_writer();
        spec.finals.insert(0);
        assert!(!spec.warnings().is_empty());
    }

    #[test]
    fn simulate_zero_steps_is_dirac_on_start() {
        let spec = coin_writer();
        let input = spec.input_word(&BigUint::from(5u8)).unwrap();
        let d = spec.simulate(&input, 0);
        assert_eq!(d, Dist::dirac(spec.initial_config(&input)));
    }

    #[test]
    fn simulate_coin_machine_splits_once() {
        let spec = coin_writer();
        let d = spec.simulate(&[], 1);
        assert_eq!(d.len(), 2);
        for (_, p) in d.iter() {
            assert_eq!(*p, Prob::new(1.into(), 2.into()));
        }
        // further steps in the halt loop keep the distribution
        let d5 = spec.simulate(&[], 5);
        assert_eq!(
            d.map_keys(|c| spec.output_of(&c).unwrap()),
            d5.map_keys(|c| spec.output_of(&c).unwrap())
        );
    }

    #[test]
    fn simulate_deterministic_machine_stays_dirac() {
        let spec = bit_flipper();
        let input = spec.input_word(&BigUint::from(5u8)).unwrap();
        for steps in 0..6 {
            assert_eq!(spec.simulate(&input, steps).len(), 1);
        }
    }

    #[test]
    fn flipper_oracle_flips_digits() {
        let spec = bit_flipper();
        let d = spec.output_distribution(&BigUint::from(5u8)).unwrap();
        // 101 becomes 010
        assert_eq!(d, Dist::dirac(BigUint::from(2u8)));
    }

    #[test]
    fn compiled_terms_are_unary_functions() {
        for spec in [coin_writer(), identity_machine(), bit_flipper()] {
            let t = compile_tm(&spec).unwrap();
            assert_eq!(check_first_order(&t).unwrap(), 1);
            assert_eq!(
                infer_closed(&t).unwrap(),
                crate::parser::parse_type("N !-> N").unwrap()
            );
        }
    }

    #[test]
    fn compiled_identity_returns_input() {
        let spec = identity_machine();
        let t = compile_tm(&spec).unwrap();
        for n in 0u8..8 {
            let n = BigUint::from(n);
            let got = output_dist_of_term(&t, &n, DEFAULT_FUEL).unwrap();
            assert_eq!(got, spec.output_distribution(&n).unwrap(), "input {}", n);
            assert_eq!(got, Dist::dirac(n));
        }
    }

    #[test]
    fn compiled_coin_machine_matches_oracle() {
        let spec = coin_writer();
        let t = compile_tm(&spec).unwrap();
        let got = output_dist_of_term(&t, &BigUint::zero(), DEFAULT_FUEL).unwrap();
        let want = spec.output_distribution(&BigUint::zero()).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.len(), 2);
        assert_eq!(got.pmf(&BigUint::zero()), Prob::new(1.into(), 2.into()));
        assert_eq!(got.pmf(&BigUint::one()), Prob::new(1.into(), 2.into()));
    }

    #[test]
    fn compiled_flipper_matches_oracle() {
        let spec = bit_flipper();
        let t = compile_tm(&spec).unwrap();
        for n in 0u8..8 {
            let n = BigUint::from(n);
            let got = output_dist_of_term(&t, &n, DEFAULT_FUEL).unwrap();
            assert_eq!(got, spec.output_distribution(&n).unwrap(), "input {}", n);
        }
    }

    fn parity_recognizer() -> Term {
        parse_term("\\x:!N. case[N] x { zero -> 0b1 | even -> 0b1 | odd -> 0b0 }").unwrap()
    }

    #[test]
    fn recognition_report_on_parity() {
        let t = parity_recognizer();
        let eps = Prob::new(1.into(), 4.into());
        let samples = vec![
            (BigUint::from(3u8), true),
            (BigUint::from(4u8), false),
        ];
        let reports = check_error_recognition(&t, &samples, &eps, DEFAULT_FUEL).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        for r in &reports {
            assert_eq!(r.margin, Prob::new(3.into(), 4.into()));
        }
    }

    #[test]
    fn pure_coin_fails_recognition_but_ties_majority() {
        let t = parse_term("\\x:~N. rand").unwrap();
        let eps = Prob::new(1.into(), 4.into());
        let samples = vec![(BigUint::zero(), true)];
        let reports = check_error_recognition(&t, &samples, &eps, DEFAULT_FUEL).unwrap();
        assert!(!reports[0].pass);
        assert_eq!(reports[0].p_correct, Prob::new(1.into(), 2.into()));
        assert!(majority_decision(&t, &BigUint::zero(), DEFAULT_FUEL).unwrap());
    }

    #[test]
    fn recognition_edge_cases() {
        let t = parity_recognizer();
        let half = Prob::new(1.into(), 2.into());
        assert_eq!(
            check_error_recognition(&t, &[], &half, DEFAULT_FUEL).unwrap(),
            vec![]
        );
        assert_eq!(
            check_error_recognition(&t, &[], &Prob::one(), DEFAULT_FUEL),
            Err(RecognitionError::BadEpsilon)
        );
        assert_eq!(
            check_error_recognition(&Term::Rand, &[], &half, DEFAULT_FUEL),
            Err(RecognitionError::NotUnary)
        );
    }

    #[test]
    fn majority_examples() {
        let zero = parse_term("\\x:~N. 0b0").unwrap();
        assert!(majority_decision(&zero, &BigUint::from(9u8), DEFAULT_FUEL).unwrap());
        assert!(!majority_decision(&parity_recognizer(), &BigUint::from(4u8), DEFAULT_FUEL).unwrap());
        assert!(majority_decision(&parity_recognizer(), &BigUint::from(3u8), DEFAULT_FUEL).unwrap());
    }
}
