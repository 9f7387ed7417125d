//! Python bindings: parse, typecheck, evaluate and sample terms, and
//! compile Turing machine specs, all working on source strings.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rslr::ast::{app, Term};
use rslr::bigstep::{self, EvalError};
use rslr::tm;
use rslr::types::infer_closed;
use std::collections::BTreeMap;

fn parse(src: &str) -> PyResult<Term> {
    rslr::parse_term(src).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn eval_failure(e: EvalError) -> PyErr {
    match e {
        EvalError::Fuel { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Parses a term and returns it in canonical syntax.
#[pyfunction]
#[pyo3(name = "parse")]
fn parse_py(src: &str) -> PyResult<String> {
    Ok(parse(src)?.to_string())
}

/// Infers the minimal type of a closed term.
#[pyfunction]
fn typecheck(src: &str) -> PyResult<String> {
    let t = parse(src)?;
    let ty = infer_closed(&t).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(ty.to_string())
}

/// Evaluates a closed term of type N to its exact distribution:
/// a dict from numeral to an exact (numerator, denominator) pair.
#[pyfunction]
#[pyo3(signature = (src, fuel = 1_000_000))]
fn eval(src: &str, fuel: u64) -> PyResult<BTreeMap<BigUint, (BigUint, BigUint)>> {
    let t = parse(src)?;
    infer_closed(&t).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let d = bigstep::eval(&t, fuel).map_err(eval_failure)?;
    let mut out = BTreeMap::new();
    for (k, p) in d.iter() {
        let n = k
            .as_numeral()
            .ok_or_else(|| PyValueError::new_err(format!("non-numeral outcome {}", k)))?;
        let (num, den) = (p.numer(), p.denom());
        out.insert(
            n.clone(),
            (num.to_biguint().unwrap(), den.to_biguint().unwrap()),
        );
    }
    Ok(out)
}

/// Draws one seeded sample from a closed term of type N.
#[pyfunction]
#[pyo3(signature = (src, seed = 0, fuel = 1_000_000))]
fn sample(src: &str, seed: u64, fuel: u64) -> PyResult<BigUint> {
    let t = parse(src)?;
    infer_closed(&t).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let r = bigstep::sample(&t, seed, fuel).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    r.as_numeral()
        .cloned()
        .ok_or_else(|| PyValueError::new_err(format!("non-numeral outcome {}", r)))
}

/// Returns a library term by name as source.
#[pyfunction]
fn stdlib(name: &str) -> PyResult<String> {
    rslr::stdlib::by_name(name)
        .map(|t| t.to_string())
        .ok_or_else(|| {
            PyValueError::new_err(format!(
                "unknown library term {}; available: {}",
                name,
                rslr::stdlib::catalogue().join(", ")
            ))
        })
}

/// Compiles a machine spec (text) to term source.
#[pyfunction]
fn compile_tm(spec: &str) -> PyResult<String> {
    let spec = tm::parse_tm_spec(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let t = tm::compile_tm(&spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(t.to_string())
}

/// Majority decision of a unary term on a numeral (ties accept).
#[pyfunction]
#[pyo3(signature = (src, input, fuel = 1_000_000))]
fn majority(src: &str, input: BigUint, fuel: u64) -> PyResult<bool> {
    let t = parse(src)?;
    tm::majority_decision(&t, &input, fuel).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Applies a term (source) to numerals and evaluates, as a convenience
/// for driving compiled machines.
#[pyfunction]
#[pyo3(signature = (src, args, fuel = 1_000_000))]
fn apply_eval(
    src: &str,
    args: Vec<BigUint>,
    fuel: u64,
) -> PyResult<BTreeMap<BigUint, (BigUint, BigUint)>> {
    let mut t = parse(src)?;
    for a in args {
        t = app(t, Term::Num(a));
    }
    eval(&t.to_string(), fuel)
}

#[pymodule]
fn rslr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse_py, m)?)?;
    m.add_function(wrap_pyfunction!(typecheck, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(stdlib, m)?)?;
    m.add_function(wrap_pyfunction!(compile_tm, m)?)?;
    m.add_function(wrap_pyfunction!(majority, m)?)?;
    m.add_function(wrap_pyfunction!(apply_eval, m)?)?;
    Ok(())
}
