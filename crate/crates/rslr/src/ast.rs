//! Term and type representation.
//!
//! Terms are stored in a nameless form: bound variables are de Bruijn
//! indices carrying a printing hint, free variables are names. Equality,
//! hashing and ordering ignore the hints, so structural equality is
//! alpha-equivalence.

use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// Aspect annotation on arrows and binders. `Modal` is written `!`,
/// `NonModal` is written `~`. Modal is the smaller aspect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aspect {
    Modal,
    NonModal,
}

impl Aspect {
    /// The aspect preorder: Modal <= Modal, Modal <= NonModal,
    /// NonModal <= NonModal.
    pub fn leq(self, other: Aspect) -> bool {
        !(self == Aspect::NonModal && other == Aspect::Modal)
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aspect::Modal => write!(f, "!"),
            Aspect::NonModal => write!(f, "~"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Nat,
    Arrow(Aspect, Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(a: Aspect, dom: Type, cod: Type) -> Type {
        Type::Arrow(a, Box::new(dom), Box::new(cod))
    }

    pub fn prod(l: Type, r: Type) -> Type {
        Type::Prod(Box::new(l), Box::new(r))
    }

    /// Base types are trees of products over Nat, with no arrows inside.
    pub fn is_base(&self) -> bool {
        match self {
            Type::Nat => true,
            Type::Prod(l, r) => l.is_base() && r.is_base(),
            Type::Arrow(..) => false,
        }
    }
}

/// A binder name kept only for printing. Compares equal to every other
/// hint so that derived equality on terms is alpha-equivalence.
#[derive(Clone, Debug)]
pub struct NameHint(pub String);

impl PartialEq for NameHint {
    fn eq(&self, _: &NameHint) -> bool {
        true
    }
}

impl Eq for NameHint {}

impl std::hash::Hash for NameHint {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl PartialOrd for NameHint {
    fn partial_cmp(&self, other: &NameHint) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NameHint {
    fn cmp(&self, _: &NameHint) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Bound variable as a de Bruijn index, innermost binder is 0.
    Var(usize, NameHint),
    /// Free variable.
    Free(String),
    Num(BigUint),
    S0,
    S1,
    P,
    Rand,
    Abs {
        hint: NameHint,
        aspect: Aspect,
        ty: Type,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    Case {
        ty: Type,
        scrut: Box<Term>,
        zero: Box<Term>,
        even: Box<Term>,
        odd: Box<Term>,
    },
    Rec {
        ty: Type,
        arg: Box<Term>,
        base: Box<Term>,
        step: Box<Term>,
    },
    Pair(Box<Term>, Box<Term>),
    Proj1(Box<Term>),
    Proj2(Box<Term>),
}

pub fn num(n: u64) -> Term {
    Term::Num(BigUint::from(n))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Box::new(f), Box::new(a))
}

pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(f, app)
}

pub fn pair(l: Term, r: Term) -> Term {
    Term::Pair(Box::new(l), Box::new(r))
}

pub fn proj1(t: Term) -> Term {
    Term::Proj1(Box::new(t))
}

pub fn proj2(t: Term) -> Term {
    Term::Proj2(Box::new(t))
}

pub fn var(name: &str) -> Term {
    Term::Free(name.to_string())
}

/// Binds the free variable `name` in `body` and wraps the result in an
/// abstraction. This is the capture-free way to build terms in Rust.
pub fn lam(name: &str, aspect: Aspect, ty: Type, body: Term) -> Term {
    Term::Abs {
        hint: NameHint(name.to_string()),
        aspect,
        ty,
        body: Box::new(bind(name, body, 0)),
    }
}

pub fn case(ty: Type, scrut: Term, zero: Term, even: Term, odd: Term) -> Term {
    Term::Case {
        ty,
        scrut: Box::new(scrut),
        zero: Box::new(zero),
        even: Box::new(even),
        odd: Box::new(odd),
    }
}

pub fn rec(ty: Type, arg: Term, base: Term, step: Term) -> Term {
    Term::Rec {
        ty,
        arg: Box::new(arg),
        base: Box::new(base),
        step: Box::new(step),
    }
}

fn bind(name: &str, t: Term, depth: usize) -> Term {
    match t {
        Term::Free(ref n) if n == name => Term::Var(depth, NameHint(name.to_string())),
        Term::Var(..) | Term::Free(_) | Term::Num(_) | Term::S0 | Term::S1 | Term::P
        | Term::Rand => t,
        Term::Abs {
            hint,
            aspect,
            ty,
            body,
        } => Term::Abs {
            hint,
            aspect,
            ty,
            body: Box::new(bind(name, *body, depth + 1)),
        },
        Term::App(f, a) => app(bind(name, *f, depth), bind(name, *a, depth)),
        Term::Case {
            ty,
            scrut,
            zero,
            even,
            odd,
        } => case(
            ty,
            bind(name, *scrut, depth),
            bind(name, *zero, depth),
            bind(name, *even, depth),
            bind(name, *odd, depth),
        ),
        Term::Rec {
            ty,
            arg,
            base,
            step,
        } => rec(
            ty,
            bind(name, *arg, depth),
            bind(name, *base, depth),
            bind(name, *step, depth),
        ),
        Term::Pair(l, r) => pair(bind(name, *l, depth), bind(name, *r, depth)),
        Term::Proj1(t) => proj1(bind(name, *t, depth)),
        Term::Proj2(t) => proj2(bind(name, *t, depth)),
    }
}

impl Term {
    pub fn is_numeral(&self) -> bool {
        matches!(self, Term::Num(_))
    }

    pub fn as_numeral(&self) -> Option<&BigUint> {
        match self {
            Term::Num(n) => Some(n),
            _ => None,
        }
    }

    /// Pair trees of numerals, the normal forms of base type.
    pub fn is_base_value(&self) -> bool {
        match self {
            Term::Num(_) => true,
            Term::Pair(l, r) => l.is_base_value() && r.is_base_value(),
            _ => false,
        }
    }

    /// True when the term contains no `rec`.
    pub fn is_explicit(&self) -> bool {
        self.subterms_shallow().iter().all(|s| s.is_explicit())
            && !matches!(self, Term::Rec { .. })
    }

    pub fn contains_rand(&self) -> bool {
        matches!(self, Term::Rand)
            || self.subterms_shallow().iter().any(|s| s.contains_rand())
    }

    fn subterms_shallow(&self) -> Vec<&Term> {
        match self {
            Term::Var(..) | Term::Free(_) | Term::Num(_) | Term::S0 | Term::S1 | Term::P
            | Term::Rand => vec![],
            Term::Abs { body, .. } => vec![body],
            Term::App(f, a) => vec![f, a],
            Term::Case {
                scrut,
                zero,
                even,
                odd,
                ..
            } => vec![scrut, zero, even, odd],
            Term::Rec {
                arg, base, step, ..
            } => vec![arg, base, step],
            Term::Pair(l, r) => vec![l, r],
            Term::Proj1(t) | Term::Proj2(t) => vec![t],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        if let Term::Free(n) = self {
            out.insert(n.clone());
        }
        for s in self.subterms_shallow() {
            s.collect_free(out);
        }
    }

    /// True when the term has no free names and no dangling indices.
    pub fn is_closed(&self) -> bool {
        self.closed_above(0)
    }

    fn closed_above(&self, depth: usize) -> bool {
        match self {
            Term::Var(i, _) => *i < depth,
            Term::Free(_) => false,
            Term::Abs { body, .. } => body.closed_above(depth + 1),
            other => other.subterms_shallow().iter().all(|s| s.closed_above(depth)),
        }
    }

    /// Number of binary digits of a numeral, with 0 and 1 both of size 1.
    pub fn numeral_size(n: &BigUint) -> u64 {
        if n.is_zero() {
            1
        } else {
            n.bits()
        }
    }

    /// Term size: variables, constants and binder nodes count 1, a
    /// numeral counts its binary digits.
    pub fn size(&self) -> u64 {
        match self {
            Term::Num(n) => Self::numeral_size(n),
            Term::Var(..) | Term::Free(_) | Term::S0 | Term::S1 | Term::P | Term::Rand => 1,
            Term::App(f, a) => f.size() + a.size(),
            Term::Abs { body, .. } => body.size() + 1,
            Term::Proj1(t) | Term::Proj2(t) => t.size() + 1,
            other => {
                other
                    .subterms_shallow()
                    .iter()
                    .map(|s| s.size())
                    .sum::<u64>()
                    + 1
            }
        }
    }

    /// Term size with every numeral counting 1.
    pub fn size_wonum(&self) -> u64 {
        match self {
            Term::Num(_) => 1,
            Term::Var(..) | Term::Free(_) | Term::S0 | Term::S1 | Term::P | Term::Rand => 1,
            Term::App(f, a) => f.size_wonum() + a.size_wonum(),
            Term::Abs { body, .. } => body.size_wonum() + 1,
            Term::Proj1(t) | Term::Proj2(t) => t.size_wonum() + 1,
            other => {
                other
                    .subterms_shallow()
                    .iter()
                    .map(|s| s.size_wonum())
                    .sum::<u64>()
                    + 1
            }
        }
    }

    /// Largest numeral size occurring in the term, 0 when there is none.
    pub fn size_num(&self) -> u64 {
        match self {
            Term::Num(n) => Self::numeral_size(n),
            other => other
                .subterms_shallow()
                .iter()
                .map(|s| s.size_num())
                .max()
                .unwrap_or(0),
        }
    }
}

/// Adds `d` to every dangling index >= `cutoff`.
pub fn shift(t: &Term, d: i64, cutoff: usize) -> Term {
    match t {
        Term::Var(i, h) => {
            if *i >= cutoff {
                Term::Var((*i as i64 + d) as usize, h.clone())
            } else {
                t.clone()
            }
        }
        Term::Abs {
            hint,
            aspect,
            ty,
            body,
        } => Term::Abs {
            hint: hint.clone(),
            aspect: *aspect,
            ty: ty.clone(),
            body: Box::new(shift(body, d, cutoff + 1)),
        },
        Term::Free(_) | Term::Num(_) | Term::S0 | Term::S1 | Term::P | Term::Rand => t.clone(),
        Term::App(f, a) => app(shift(f, d, cutoff), shift(a, d, cutoff)),
        Term::Case {
            ty,
            scrut,
            zero,
            even,
            odd,
        } => case(
            ty.clone(),
            shift(scrut, d, cutoff),
            shift(zero, d, cutoff),
            shift(even, d, cutoff),
            shift(odd, d, cutoff),
        ),
        Term::Rec {
            ty,
            arg,
            base,
            step,
        } => rec(
            ty.clone(),
            shift(arg, d, cutoff),
            shift(base, d, cutoff),
            shift(step, d, cutoff),
        ),
        Term::Pair(l, r) => pair(shift(l, d, cutoff), shift(r, d, cutoff)),
        Term::Proj1(s) => proj1(shift(s, d, cutoff)),
        Term::Proj2(s) => proj2(shift(s, d, cutoff)),
    }
}

/// Beta-substitution: replaces index `depth` in `body` with `arg` and
/// renumbers the indices above it.
pub fn open(body: &Term, arg: &Term) -> Term {
    open_at(body, arg, 0)
}

fn open_at(body: &Term, arg: &Term, depth: usize) -> Term {
    match body {
        Term::Var(i, h) => {
            if *i == depth {
                shift(arg, depth as i64, 0)
            } else if *i > depth {
                Term::Var(i - 1, h.clone())
            } else {
                body.clone()
            }
        }
        Term::Abs {
            hint,
            aspect,
            ty,
            body: b,
        } => Term::Abs {
            hint: hint.clone(),
            aspect: *aspect,
            ty: ty.clone(),
            body: Box::new(open_at(b, arg, depth + 1)),
        },
        Term::Free(_) | Term::Num(_) | Term::S0 | Term::S1 | Term::P | Term::Rand => body.clone(),
        Term::App(f, a) => app(open_at(f, arg, depth), open_at(a, arg, depth)),
        Term::Case {
            ty,
            scrut,
            zero,
            even,
            odd,
        } => case(
            ty.clone(),
            open_at(scrut, arg, depth),
            open_at(zero, arg, depth),
            open_at(even, arg, depth),
            open_at(odd, arg, depth),
        ),
        Term::Rec {
            ty,
            arg: a,
            base,
            step,
        } => rec(
            ty.clone(),
            open_at(a, arg, depth),
            open_at(base, arg, depth),
            open_at(step, arg, depth),
        ),
        Term::Pair(l, r) => pair(open_at(l, arg, depth), open_at(r, arg, depth)),
        Term::Proj1(t) => proj1(open_at(t, arg, depth)),
        Term::Proj2(t) => proj2(open_at(t, arg, depth)),
    }
}

/// Replaces the free variable `name` with `s`. The nameless
/// representation makes this capture-avoiding; `s` must not contain
/// dangling indices.
pub fn substitute(t: &Term, name: &str, s: &Term) -> Term {
    match t {
        Term::Free(n) if n == name => s.clone(),
        Term::Var(..) | Term::Free(_) | Term::Num(_) | Term::S0 | Term::S1 | Term::P
        | Term::Rand => t.clone(),
        Term::Abs {
            hint,
            aspect,
            ty,
            body,
        } => Term::Abs {
            hint: hint.clone(),
            aspect: *aspect,
            ty: ty.clone(),
            body: Box::new(substitute(body, name, s)),
        },
        Term::App(f, a) => app(substitute(f, name, s), substitute(a, name, s)),
        Term::Case {
            ty,
            scrut,
            zero,
            even,
            odd,
        } => case(
            ty.clone(),
            substitute(scrut, name, s),
            substitute(zero, name, s),
            substitute(even, name, s),
            substitute(odd, name, s),
        ),
        Term::Rec {
            ty,
            arg,
            base,
            step,
        } => rec(
            ty.clone(),
            substitute(arg, name, s),
            substitute(base, name, s),
            substitute(step, name, s),
        ),
        Term::Pair(l, r) => pair(substitute(l, name, s), substitute(r, name, s)),
        Term::Proj1(u) => proj1(substitute(u, name, s)),
        Term::Proj2(u) => proj2(substitute(u, name, s)),
    }
}

/// Splits a term into its head and the argument spine, outermost
/// application last.
pub fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push(a.as_ref());
        head = f;
    }
    args.reverse();
    (head, args)
}
