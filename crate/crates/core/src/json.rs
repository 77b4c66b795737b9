//! JSON schemas for the file formats: every numeric value carries both
//! exact rational parts and a decimal approximation; verification reads
//! only the exact fields. The environment variable ORTHOWEAVE_PRECISION
//! sets the number of approximation digits (default 12).

use crate::diagram::{LaurentPoly, PDCode};
use crate::exactnum::{parse_rat, QuadExt};
use crate::inversive::{CenterRadius, InvVec, Kind};
use crate::orthocubic::Necklace;
use crate::packing::z_color;
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Geom(#[from] crate::inversive::GeomError),
    #[error(transparent)]
    Num(#[from] crate::exactnum::NumError),
}

pub fn precision() -> usize {
    std::env::var("ORTHOWEAVE_PRECISION")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(12)
}

pub fn quadext_to_json(x: &QuadExt, digits: usize) -> Value {
    json!({
        "a": x.a.to_string(),
        "b": x.b.to_string(),
        "approx": x.approx(digits),
    })
}

pub fn quadext_from_json(v: &Value) -> Result<QuadExt, JsonError> {
    let o = v
        .as_object()
        .ok_or_else(|| JsonError::Malformed("number is not an object".into()))?;
    let field = |k: &str| -> Result<_, JsonError> {
        o.get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| JsonError::Malformed(format!("missing exact field `{k}`")))
    };
    Ok(QuadExt::new(parse_rat(field("a")?)?, parse_rat(field("b")?)?))
}

pub fn invvec_to_json(v: &InvVec, digits: usize) -> Value {
    let mut o = Map::new();
    o.insert("dim".into(), json!(v.dim()));
    o.insert(
        "kind".into(),
        json!(match v.kind() {
            Kind::Sphere => "sphere",
            Kind::Point => "point",
        }),
    );
    o.insert(
        "coords".into(),
        Value::Array(v.coords().iter().map(|c| quadext_to_json(c, digits)).collect()),
    );
    if v.is_sphere() {
        match v.center_radius() {
            Ok(CenterRadius::Sphere { center, radius, .. }) => {
                o.insert(
                    "center".into(),
                    Value::Array(center.iter().map(|c| quadext_to_json(c, digits)).collect()),
                );
                o.insert("radius".into(), quadext_to_json(&radius, digits));
            }
            Ok(CenterRadius::Halfspace { normal, delta }) => {
                o.insert(
                    "normal".into(),
                    Value::Array(normal.iter().map(|c| quadext_to_json(c, digits)).collect()),
                );
                o.insert("delta".into(), quadext_to_json(&delta, digits));
            }
            Err(_) => {}
        }
    }
    Value::Object(o)
}

pub fn invvec_from_json(v: &Value) -> Result<InvVec, JsonError> {
    let o = v
        .as_object()
        .ok_or_else(|| JsonError::Malformed("sphere is not an object".into()))?;
    let dim = o
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| JsonError::Malformed("missing dim".into()))? as usize;
    let kind = match o.get("kind").and_then(Value::as_str) {
        Some("sphere") => Kind::Sphere,
        Some("point") => Kind::Point,
        _ => return Err(JsonError::Malformed("missing kind".into())),
    };
    let coords = o
        .get("coords")
        .and_then(Value::as_array)
        .ok_or_else(|| JsonError::Malformed("missing coords".into()))?
        .iter()
        .map(quadext_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InvVec::from_coords(dim, kind, coords)?)
}

/// Necklace document: spheres with exact coordinates, cycles by id, and
/// the sphere/crossing counts.
pub fn necklace_to_json(n: &Necklace, crossings: usize, digits: usize) -> Value {
    let spheres: Vec<Value> = n
        .spheres
        .iter()
        .enumerate()
        .map(|(id, v)| {
            let mut o = invvec_to_json(v, digits);
            let obj = o.as_object_mut().unwrap();
            obj.insert("id".into(), json!(id));
            if let Ok(c) = z_color(v) {
                obj.insert("color".into(), json!(c));
            }
            o
        })
        .collect();
    json!({
        "section": if n.edge_section { "edge" } else { "cubic" },
        "spheres": spheres,
        "cycles": n.cycles,
        "counts": {"spheres": n.spheres.len(), "crossings": crossings},
    })
}

pub fn necklace_from_json(v: &Value) -> Result<Necklace, JsonError> {
    let o = v
        .as_object()
        .ok_or_else(|| JsonError::Malformed("necklace is not an object".into()))?;
    let spheres = o
        .get("spheres")
        .and_then(Value::as_array)
        .ok_or_else(|| JsonError::Malformed("missing spheres".into()))?
        .iter()
        .map(invvec_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let cycles = o
        .get("cycles")
        .and_then(Value::as_array)
        .ok_or_else(|| JsonError::Malformed("missing cycles".into()))?
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| JsonError::Malformed("cycle is not an array".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|u| u as usize)
                        .ok_or_else(|| JsonError::Malformed("cycle id".into()))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    for cyc in &cycles {
        for &id in cyc {
            if id >= spheres.len() {
                return Err(JsonError::Malformed(format!("cycle id {id} out of range")));
            }
        }
    }
    let crossings = o
        .get("counts")
        .and_then(|c| c.get("crossings"))
        .and_then(Value::as_u64)
        .map(|c| c as usize);
    let edge_section = o.get("section").and_then(Value::as_str) == Some("edge");
    Ok(Necklace {
        spheres,
        cycles,
        edge_section,
        built_crossings: crossings,
        built_pd: None,
    })
}

/// Orbit export: sphere list plus the tangency graph (pairs with product
/// exactly −1).
pub fn orbit_to_json(spheres: &[InvVec], digits: usize) -> Value {
    let mut edges = Vec::new();
    for i in 0..spheres.len() {
        for j in (i + 1)..spheres.len() {
            let p = crate::inversive::inv_product(&spheres[i], &spheres[j]).unwrap();
            if p == -QuadExt::one() {
                edges.push(json!([i, j]));
            }
        }
    }
    json!({
        "spheres": spheres.iter().map(|v| invvec_to_json(v, digits)).collect::<Vec<_>>(),
        "tangency_edges": edges,
    })
}

pub fn pd_to_json(pd: &PDCode) -> Value {
    json!({
        "crossings": pd.crossings.iter().map(|c| json!({
            "arcs": c.arcs,
            "positive": c.over_in_last,
        })).collect::<Vec<_>>(),
        "components": pd.components,
    })
}

/// Polynomial as a map from quarter-exponent to coefficient.
pub fn poly_to_json(p: &LaurentPoly) -> Value {
    let mut o = Map::new();
    for (&e, &c) in &p.coeffs {
        o.insert(e.to_string(), json!(c));
    }
    Value::Object(o)
}

/// OBJ scene: one UV-sphere mesh per necklace sphere (float geometry, for
/// viewing only). Half-spaces are skipped.
pub fn necklace_to_obj(n: &Necklace) -> String {
    let mut out = String::from("# orthoweave necklace scene\n");
    let (stacks, slices) = (12usize, 18usize);
    let mut vert_base = 1usize;
    for (i, v) in n.spheres.iter().enumerate() {
        let Ok(CenterRadius::Sphere { center, radius, .. }) = v.center_radius() else {
            continue;
        };
        let (cx, cy, cz) = (
            center[0].to_f64(),
            center[1].to_f64(),
            center.get(2).map(|c| c.to_f64()).unwrap_or(0.0),
        );
        let r = radius.to_f64().abs();
        out.push_str(&format!("o sphere_{i}\n"));
        for a in 0..=stacks {
            let phi = std::f64::consts::PI * a as f64 / stacks as f64;
            for b in 0..slices {
                let theta = 2.0 * std::f64::consts::PI * b as f64 / slices as f64;
                let x = cx + r * phi.sin() * theta.cos();
                let y = cy + r * phi.sin() * theta.sin();
                let z = cz + r * phi.cos();
                out.push_str(&format!("v {x:.6} {y:.6} {z:.6}\n"));
            }
        }
        for a in 0..stacks {
            for b in 0..slices {
                let b2 = (b + 1) % slices;
                let p = |aa: usize, bb: usize| vert_base + aa * slices + bb;
                out.push_str(&format!(
                    "f {} {} {} {}\n",
                    p(a, b),
                    p(a + 1, b),
                    p(a + 1, b2),
                    p(a, b2)
                ));
            }
        }
        vert_base += (stacks + 1) * slices;
    }
    out
}
