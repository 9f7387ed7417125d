//! Type checking.
//!
//! The system is Curry-style with two aspects on arrows and binders.
//! Higher-order variables are affine (at most one free occurrence),
//! base-type variables may be duplicated. Inference computes the minimal
//! type and applies subsumption at application, case branches and the
//! recursion premises, so a term is typable exactly when inference
//! succeeds.

use crate::ast::{Aspect, Term, Type};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundVariable,
    NotAFunction,
    ArgumentMismatch,
    AspectViolation,
    AffinityViolation,
    NotBoxFree,
    ScrutineeNotNat,
    RecArgNotNat,
    RecStepHigherOrderVar,
    RecStepMismatch,
    NonBasePair,
    NotAPair,
    MalformedType,
    NotFirstOrder,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeErrorKind::UnboundVariable => "unbound variable",
            TypeErrorKind::NotAFunction => "not a function",
            TypeErrorKind::ArgumentMismatch => "argument type mismatch",
            TypeErrorKind::AspectViolation => "aspect violation",
            TypeErrorKind::AffinityViolation => "higher-order variable used more than once",
            TypeErrorKind::NotBoxFree => "annotation is not modal-free",
            TypeErrorKind::ScrutineeNotNat => "case scrutinee is not of type N",
            TypeErrorKind::RecArgNotNat => "rec argument is not of type N",
            TypeErrorKind::RecStepHigherOrderVar => {
                "rec step uses a higher-order variable from the context"
            }
            TypeErrorKind::RecStepMismatch => "rec step has the wrong type",
            TypeErrorKind::NonBasePair => "pair component is not of base type",
            TypeErrorKind::NotAPair => "projection applied to a non-pair",
            TypeErrorKind::MalformedType => "malformed type annotation",
            TypeErrorKind::NotFirstOrder => "type is not first order over N",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("type error at [{}]: {kind}: {detail}", path_string(.path))]
pub struct TypeError {
    pub kind: TypeErrorKind,
    /// Path of child indices from the root to the offending subterm.
    pub path: Vec<usize>,
    pub detail: String,
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Typing context for free variables.
#[derive(Debug, Clone, Default)]
pub struct Context {
    entries: Vec<(String, Aspect, Type)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn with(mut self, name: &str, aspect: Aspect, ty: Type) -> Context {
        self.entries.push((name.to_string(), aspect, ty));
        self
    }

    fn lookup(&self, name: &str) -> Option<(Aspect, &Type)> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _, _)| n == name)
            .map(|(_, a, t)| (*a, t))
    }
}

pub fn aspect_leq(a: Aspect, b: Aspect) -> bool {
    a.leq(b)
}

/// No modal arrow anywhere in the type.
pub fn box_free(t: &Type) -> bool {
    match t {
        Type::Nat => true,
        Type::Arrow(Aspect::Modal, _, _) => false,
        Type::Arrow(Aspect::NonModal, a, b) => box_free(a) && box_free(b),
        Type::Prod(l, r) => box_free(l) && box_free(r),
    }
}

pub fn positively_box_free(t: &Type) -> bool {
    match t {
        Type::Nat => true,
        Type::Arrow(Aspect::Modal, _, _) => false,
        Type::Arrow(Aspect::NonModal, a, b) => negatively_box_free(a) && positively_box_free(b),
        Type::Prod(l, r) => positively_box_free(l) && positively_box_free(r),
    }
}

pub fn negatively_box_free(t: &Type) -> bool {
    match t {
        Type::Nat => true,
        Type::Arrow(_, a, b) => positively_box_free(a) && negatively_box_free(b),
        Type::Prod(l, r) => negatively_box_free(l) && negatively_box_free(r),
    }
}

/// Subtyping: reflexive on N and products, arrows are contravariant in
/// the domain, covariant in the codomain, and a non-modal arrow is a
/// subtype of the corresponding modal arrow.
pub fn subtype(s: &Type, t: &Type) -> bool {
    match (s, t) {
        (Type::Nat, Type::Nat) => true,
        (Type::Prod(l1, r1), Type::Prod(l2, r2)) => subtype(l1, l2) && subtype(r1, r2),
        (Type::Arrow(a1, d1, c1), Type::Arrow(a2, d2, c2)) => {
            aspect_leq(*a2, *a1) && subtype(d2, d1) && subtype(c1, c2)
        }
        _ => false,
    }
}

/// Well-formedness: product components must be base types.
fn type_wf(t: &Type) -> bool {
    match t {
        Type::Nat => true,
        Type::Arrow(_, a, b) => type_wf(a) && type_wf(b),
        Type::Prod(l, r) => l.is_base() && r.is_base() && type_wf(l) && type_wf(r),
    }
}

struct Checker<'a> {
    ctx: &'a Context,
    /// Types and aspects of enclosing binders, innermost last.
    stack: Vec<(Aspect, Type)>,
}

/// Infers the minimal type of `t` in context `ctx`.
pub fn infer(ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    let mut path = Vec::new();
    check_affinity(ctx, t, &mut path)?;
    let mut ck = Checker {
        ctx,
        stack: Vec::new(),
    };
    ck.infer(t, &mut path)
}

pub fn infer_closed(t: &Term) -> Result<Type, TypeError> {
    infer(&Context::new(), t)
}

/// Checks that `t` is closed and typable at a first-order type over N,
/// returning the arity.
pub fn check_first_order(t: &Term) -> Result<usize, TypeError> {
    let ty = infer_closed(t)?;
    let mut arity = 0;
    let mut cur = &ty;
    loop {
        match cur {
            Type::Nat => return Ok(arity),
            Type::Arrow(_, d, c) if **d == Type::Nat => {
                arity += 1;
                cur = c;
            }
            _ => {
                return Err(TypeError {
                    kind: TypeErrorKind::NotFirstOrder,
                    path: vec![],
                    detail: format!("inferred type {}", ty),
                })
            }
        }
    }
}

/// Affinity: every higher-order variable, bound or free, occurs at most
/// once. This is equivalent to the affine context splitting in the
/// typing rules because the splits are disjoint in every rule.
fn check_affinity(ctx: &Context, t: &Term, path: &mut Vec<usize>) -> Result<(), TypeError> {
    for name in t.free_vars() {
        if let Some((_, ty)) = ctx.lookup(&name) {
            if !ty.is_base() && count_free(t, &name) > 1 {
                return Err(TypeError {
                    kind: TypeErrorKind::AffinityViolation,
                    path: path.clone(),
                    detail: format!("variable {}", name),
                });
            }
        }
    }
    check_bound_affinity(t, path)
}

fn check_bound_affinity(t: &Term, path: &mut Vec<usize>) -> Result<(), TypeError> {
    if let Term::Abs { hint, ty, body, .. } = t {
        if !ty.is_base() && count_bound(body, 0) > 1 {
            return Err(TypeError {
                kind: TypeErrorKind::AffinityViolation,
                path: path.clone(),
                detail: format!("variable {}", hint.0),
            });
        }
    }
    for (i, s) in children(t).into_iter().enumerate() {
        path.push(i);
        check_bound_affinity(s, path)?;
        path.pop();
    }
    Ok(())
}

fn children(t: &Term) -> Vec<&Term> {
    match t {
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
        Term::Proj1(s) | Term::Proj2(s) => vec![s],
        _ => vec![],
    }
}

fn count_free(t: &Term, name: &str) -> usize {
    match t {
        Term::Free(n) if n == name => 1,
        _ => children(t).into_iter().map(|s| count_free(s, name)).sum(),
    }
}

fn count_bound(t: &Term, depth: usize) -> usize {
    match t {
        Term::Var(i, _) => usize::from(*i == depth),
        Term::Abs { body, .. } => count_bound(body, depth + 1),
        _ => children(t)
            .into_iter()
            .map(|s| count_bound(s, depth))
            .sum(),
    }
}

impl<'a> Checker<'a> {
    fn err<T>(
        &self,
        kind: TypeErrorKind,
        path: &[usize],
        detail: impl Into<String>,
    ) -> Result<T, TypeError> {
        Err(TypeError {
            kind,
            path: path.to_vec(),
            detail: detail.into(),
        })
    }

    /// Aspects of every variable occurring free in `t` relative to the
    /// current binder stack.
    fn used_aspects(&self, t: &Term) -> Vec<Aspect> {
        let mut out = Vec::new();
        self.collect_aspects(t, 0, &mut out);
        out
    }

    fn collect_aspects(&self, t: &Term, depth: usize, out: &mut Vec<Aspect>) {
        match t {
            Term::Var(i, _) => {
                if *i >= depth {
                    let slot = i - depth;
                    if slot < self.stack.len() {
                        out.push(self.stack[self.stack.len() - 1 - slot].0);
                    }
                }
            }
            Term::Free(n) => {
                if let Some((a, _)) = self.ctx.lookup(n) {
                    out.push(a);
                }
            }
            Term::Abs { body, .. } => self.collect_aspects(body, depth + 1, out),
            _ => {
                for s in children(t) {
                    self.collect_aspects(s, depth, out);
                }
            }
        }
    }

    fn infer(&mut self, t: &Term, path: &mut Vec<usize>) -> Result<Type, TypeError> {
        match t {
            Term::Num(_) | Term::Rand => Ok(Type::Nat),
            Term::S0 | Term::S1 | Term::P => {
                Ok(Type::arrow(Aspect::NonModal, Type::Nat, Type::Nat))
            }
            Term::Var(i, hint) => match self.stack.len().checked_sub(i + 1) {
                Some(slot) => Ok(self.stack[slot].1.clone()),
                None => self.err(
                    TypeErrorKind::UnboundVariable,
                    path,
                    format!("dangling index {} ({})", i, hint.0),
                ),
            },
            Term::Free(n) => match self.ctx.lookup(n) {
                Some((_, ty)) => Ok(ty.clone()),
                None => self.err(TypeErrorKind::UnboundVariable, path, n.clone()),
            },
            Term::Abs {
                aspect, ty, body, ..
            } => {
                if !type_wf(ty) {
                    return self.err(
                        TypeErrorKind::MalformedType,
                        path,
                        format!("binder annotation {}", ty),
                    );
                }
                self.stack.push((*aspect, ty.clone()));
                path.push(0);
                let b = self.infer(body, path);
                path.pop();
                self.stack.pop();
                Ok(Type::arrow(*aspect, ty.clone(), b?))
            }
            Term::App(f, a) => {
                path.push(0);
                let fty = self.infer(f, path)?;
                path.pop();
                let (asp, dom, cod) = match fty {
                    Type::Arrow(asp, dom, cod) => (asp, dom, cod),
                    other => {
                        return self.err(
                            TypeErrorKind::NotAFunction,
                            path,
                            format!("head has type {}", other),
                        )
                    }
                };
                path.push(1);
                let aty = self.infer(a, path)?;
                if !subtype(&aty, &dom) {
                    let e = self.err(
                        TypeErrorKind::ArgumentMismatch,
                        path,
                        format!("expected {}, found {}", dom, aty),
                    );
                    path.pop();
                    return e;
                }
                // every variable of the argument must live at or below
                // the arrow's aspect
                if !self.used_aspects(a).iter().all(|u| aspect_leq(*u, asp)) {
                    let e = self.err(
                        TypeErrorKind::AspectViolation,
                        path,
                        format!("argument of a {}-aspect function", asp),
                    );
                    path.pop();
                    return e;
                }
                path.pop();
                Ok(*cod)
            }
            Term::Case {
                ty,
                scrut,
                zero,
                even,
                odd,
            } => {
                if !type_wf(ty) || !box_free(ty) {
                    return self.err(
                        TypeErrorKind::NotBoxFree,
                        path,
                        format!("case annotation {}", ty),
                    );
                }
                path.push(0);
                let sty = self.infer(scrut, path)?;
                if sty != Type::Nat {
                    let e = self.err(
                        TypeErrorKind::ScrutineeNotNat,
                        path,
                        format!("found {}", sty),
                    );
                    path.pop();
                    return e;
                }
                path.pop();
                for (i, branch) in [zero, even, odd].into_iter().enumerate() {
                    path.push(i + 1);
                    let bty = self.infer(branch, path)?;
                    if !subtype(&bty, ty) {
                        let e = self.err(
                            TypeErrorKind::ArgumentMismatch,
                            path,
                            format!("branch has type {}, annotation is {}", bty, ty),
                        );
                        path.pop();
                        return e;
                    }
                    path.pop();
                }
                Ok(ty.clone())
            }
            Term::Rec {
                ty,
                arg,
                base,
                step,
            } => {
                if !type_wf(ty) || !box_free(ty) {
                    return self.err(
                        TypeErrorKind::NotBoxFree,
                        path,
                        format!("rec annotation {}", ty),
                    );
                }
                path.push(0);
                let aty = self.infer(arg, path)?;
                if aty != Type::Nat {
                    let e = self.err(TypeErrorKind::RecArgNotNat, path, format!("found {}", aty));
                    path.pop();
                    return e;
                }
                if !self
                    .used_aspects(arg)
                    .iter()
                    .all(|u| *u == Aspect::Modal)
                {
                    let e = self.err(
                        TypeErrorKind::AspectViolation,
                        path,
                        "rec argument must live in a modal context",
                    );
                    path.pop();
                    return e;
                }
                path.pop();
                path.push(1);
                let bty = self.infer(base, path)?;
                if !subtype(&bty, ty) {
                    let e = self.err(
                        TypeErrorKind::ArgumentMismatch,
                        path,
                        format!("rec base has type {}, annotation is {}", bty, ty),
                    );
                    path.pop();
                    return e;
                }
                path.pop();
                path.push(2);
                if let Some(name) = self.higher_order_var_in(step) {
                    let e = self.err(TypeErrorKind::RecStepHigherOrderVar, path, name);
                    path.pop();
                    return e;
                }
                let sty = self.infer(step, path)?;
                let want = Type::arrow(
                    Aspect::Modal,
                    Type::Nat,
                    Type::arrow(Aspect::NonModal, ty.clone(), ty.clone()),
                );
                if !subtype(&sty, &want) {
                    let e = self.err(
                        TypeErrorKind::RecStepMismatch,
                        path,
                        format!("found {}, need a subtype of {}", sty, want),
                    );
                    path.pop();
                    return e;
                }
                path.pop();
                Ok(ty.clone())
            }
            Term::Pair(l, r) => {
                path.push(0);
                let lt = self.infer(l, path)?;
                path.pop();
                path.push(1);
                let rt = self.infer(r, path)?;
                path.pop();
                if !lt.is_base() || !rt.is_base() {
                    return self.err(
                        TypeErrorKind::NonBasePair,
                        path,
                        format!("<{}, {}>", lt, rt),
                    );
                }
                Ok(Type::prod(lt, rt))
            }
            Term::Proj1(s) | Term::Proj2(s) => {
                path.push(0);
                let sty = self.infer(s, path)?;
                path.pop();
                match sty {
                    Type::Prod(l, r) => Ok(if matches!(t, Term::Proj1(_)) { *l } else { *r }),
                    other => {
                        self.err(TypeErrorKind::NotAPair, path, format!("found {}", other))
                    }
                }
            }
        }
    }

    /// Name of some higher-order variable from the surrounding context
    /// occurring free in `t`, if any.
    fn higher_order_var_in(&self, t: &Term) -> Option<String> {
        let mut found = None;
        self.scan_ho(t, 0, &mut found);
        found
    }

    fn scan_ho(&self, t: &Term, depth: usize, found: &mut Option<String>) {
        if found.is_some() {
            return;
        }
        match t {
            Term::Var(i, hint) => {
                if *i >= depth {
                    let slot = i - depth;
                    if slot < self.stack.len() {
                        let (_, ty) = &self.stack[self.stack.len() - 1 - slot];
                        if !ty.is_base() {
                            *found = Some(hint.0.clone());
                        }
                    }
                }
            }
            Term::Free(n) => {
                if let Some((_, ty)) = self.ctx.lookup(n) {
                    if !ty.is_base() {
                        *found = Some(n.clone());
                    }
                }
            }
            Term::Abs { body, .. } => self.scan_ho(body, depth + 1, found),
            _ => {
                for s in children(t) {
                    self.scan_ho(s, depth, found);
                }
            }
        }
    }
}
