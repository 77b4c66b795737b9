//! Python bindings: build tangle expressions geometrically, read off
//! counts, planar-diagram data and Jones polynomials, and generate the
//! quartic solution family.

use orthoweave::diagram;
use orthoweave::json as oj;
use orthoweave::numth;
use orthoweave::orthocubic::{self, Built};
use orthoweave::tangle::{self, Slope};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::BTreeMap;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn build_expr(expr: &str, full: bool) -> PyResult<Built> {
    let ast = tangle::parse(expr).map_err(err)?;
    orthocubic::build_opts(&ast, full).map_err(err)
}

/// (spheres, crossings) of the geometric realization of a tangle
/// expression.
#[pyfunction]
#[pyo3(signature = (expr, full = false))]
fn build_counts(expr: &str, full: bool) -> PyResult<(usize, usize)> {
    match build_expr(expr, full)? {
        Built::Necklace(n) => orthocubic::counts_necklace(&n).map_err(err),
        Built::Tangle(t) => orthocubic::counts_tangle(&t).map_err(err),
    }
}

/// Necklace document (JSON text) of a closed expression.
#[pyfunction]
#[pyo3(signature = (expr, full = false))]
fn necklace_json(expr: &str, full: bool) -> PyResult<String> {
    match build_expr(expr, full)? {
        Built::Necklace(n) => {
            orthocubic::validate_packing(&n).map_err(err)?;
            let (_, crossings) = orthocubic::counts_necklace(&n).map_err(err)?;
            let doc = oj::necklace_to_json(&n, crossings, oj::precision());
            Ok(serde_json::to_string_pretty(&doc).unwrap())
        }
        Built::Tangle(_) => Err(PyValueError::new_err(
            "expression is an open tangle; close it with N(...) or D(...)",
        )),
    }
}

/// Re-check every exact invariant of a stored necklace document; returns
/// the sphere count.
#[pyfunction]
fn verify_necklace_json(doc: &str) -> PyResult<usize> {
    let v: serde_json::Value = serde_json::from_str(doc).map_err(err)?;
    let n = oj::necklace_from_json(&v).map_err(err)?;
    orthocubic::validate_packing(&n).map_err(err)?;
    Ok(n.spheres.len())
}

/// Jones polynomial of a closed expression, as a map from quarter powers
/// of t to integer coefficients.
#[pyfunction]
#[pyo3(signature = (expr, full = false))]
fn jones_polynomial(expr: &str, full: bool) -> PyResult<BTreeMap<i64, i64>> {
    let Built::Necklace(n) = build_expr(expr, full)? else {
        return Err(PyValueError::new_err(
            "expression is an open tangle; close it with N(...) or D(...)",
        ));
    };
    let pd = match &n.built_pd {
        Some(pd) => pd.clone(),
        None => diagram::pd_code(&diagram::project_necklace(&n).map_err(err)?).map_err(err)?,
    };
    let j = diagram::jones(&pd).map_err(err)?;
    Ok(j.coeffs)
}

/// (spheres, crossings, components) of a two-strand braid-word necklace.
#[pyfunction]
#[pyo3(signature = (word, halfspace_closure = false))]
fn braid_counts(word: &str, halfspace_closure: bool) -> PyResult<(usize, usize, usize)> {
    let n = orthocubic::braid_grid(word, halfspace_closure).map_err(err)?;
    let (s, c) = orthocubic::counts_necklace(&n).map_err(err)?;
    Ok((s, c, n.cycles.len()))
}

/// Orthocubic point of slope p/q: the exact isotropic vector rendered as
/// strings plus the plane point as decimal strings.
#[pyfunction]
fn orthocubic_point(p: i64, q: i64) -> PyResult<BTreeMap<String, String>> {
    if q < 0 {
        return Err(PyValueError::new_err("denominator must be nonnegative"));
    }
    let s = Slope::new(p.into(), q.into()).map_err(err)?;
    let pt = numth::orthocubic_point(&s).map_err(err)?;
    let mut out = BTreeMap::new();
    out.insert("slope".to_string(), s.to_string());
    out.insert(
        "coordinates".to_string(),
        pt.invvec
            .coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.insert("x".to_string(), pt.cartesian[0].approx(12));
    out.insert("y".to_string(), pt.cartesian[1].approx(12));
    Ok(out)
}

/// Parametrized primitive solutions of x⁴+y⁴+z⁴ = 2t² with p up to
/// `limit`: tuples (x, y, z, t, degenerate).
#[pyfunction]
fn diophantine(limit: u64) -> PyResult<Vec<(u64, u64, u64, u64, bool)>> {
    if limit == 0 || limit > 1_000_000 {
        return Err(PyValueError::new_err("limit must be in 1..=1000000"));
    }
    Ok(numth::diophantine(limit)
        .into_iter()
        .map(|s| {
            (
                u64::try_from(&s.x).unwrap(),
                u64::try_from(&s.y).unwrap(),
                u64::try_from(&s.z).unwrap(),
                u64::try_from(&s.t).unwrap(),
                s.degenerate,
            )
        })
        .collect())
}

/// Canonical continued-fraction expansion of a nonnegative slope p/q.
#[pyfunction]
fn cf_expand(p: i64, q: i64) -> PyResult<Vec<i64>> {
    let s = Slope::new(p.into(), q.into()).map_err(err)?;
    tangle::cf_expand(&s).map_err(err)
}

/// Slope of the continued fraction [a₁, …, aₙ] as a string "p/q".
#[pyfunction]
fn cf_eval(coeffs: Vec<i64>) -> PyResult<String> {
    Ok(tangle::cf_eval(&coeffs).map_err(err)?.to_string())
}

/// Slope of a rational tangle expression.
#[pyfunction]
fn slope_of(expr: &str) -> PyResult<String> {
    let ast = tangle::parse(expr).map_err(err)?;
    Ok(ast.slope().map_err(err)?.to_string())
}

#[pymodule]
fn orthoweave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(build_counts, m)?)?;
    m.add_function(wrap_pyfunction!(necklace_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify_necklace_json, m)?)?;
    m.add_function(wrap_pyfunction!(jones_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(braid_counts, m)?)?;
    m.add_function(wrap_pyfunction!(orthocubic_point, m)?)?;
    m.add_function(wrap_pyfunction!(diophantine, m)?)?;
    m.add_function(wrap_pyfunction!(cf_expand, m)?)?;
    m.add_function(wrap_pyfunction!(cf_eval, m)?)?;
    m.add_function(wrap_pyfunction!(slope_of, m)?)?;
    Ok(())
}
