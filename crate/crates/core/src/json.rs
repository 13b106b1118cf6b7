//! JSON forms of algebras, elements, tensor results, tower elements and unit groups.
//!
//! Rationals are `[num, den]` pairs in lowest terms. An algebra is
//!
//! ```json
//! { "points": ["a", "b"], "signature": "MV", "generators": [ { "a": [1, 2], "b": [0, 1] } ] }
//! ```
//!
//! with optional `"scalar_denominator"`, `"top"` (an element, for interval algebras)
//! and `"carrier"`. Loading regenerates the carrier from the generators under the
//! signature's operations (MV, or MV plus product); a supplied carrier must match it.
//! Scalars act partially, on whatever the carrier already contains.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::bridge::UnitGroup;
use crate::error::{Error, Result};
use crate::mv::algebra::{generate_subalgebra, interval_algebra, FiniteAlgebra, Signature};
use crate::mv::morphism::{extend_from_generators, Hom};
use crate::mv::points::{PointFunction, PointSet};
use crate::mv::rational::Rational01;
use crate::tensor::TensorResult;
use crate::tower::{Tower, TowerElement};

fn schema(pointer: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.into(), msg: msg.into() }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

pub fn rational_to_json(r: Rational01) -> Value {
    json!([r.num(), r.den()])
}

pub fn rational_from_json(v: &Value, pointer: &str) -> Result<Rational01> {
    let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| schema(pointer, "expected [num, den]"))?;
    let num = pair[0].as_u64().ok_or_else(|| schema(format!("{pointer}/0"), "expected a nonnegative integer"))?;
    let den = pair[1].as_u64().ok_or_else(|| schema(format!("{pointer}/1"), "expected a positive integer"))?;
    Rational01::from_reduced(num, den).map_err(|e| schema(pointer, e.to_string()))
}

/// `{ label: [num, den], … }` in point order.
pub fn element_to_json(points: &PointSet, values: &[Rational01]) -> Value {
    let map: Map<String, Value> =
        points.labels().iter().zip(values).map(|(l, &v)| (l.clone(), rational_to_json(v))).collect();
    Value::Object(map)
}

pub fn element_from_json(v: &Value, points: &Arc<PointSet>, pointer: &str) -> Result<PointFunction> {
    let obj = v.as_object().ok_or_else(|| schema(pointer, "expected an object keyed by point labels"))?;
    if let Some(extra) = obj.keys().find(|k| points.position(k).is_none()) {
        return Err(schema(format!("{pointer}/{}", escape(extra)), "unknown point label"));
    }
    let values = points
        .labels()
        .iter()
        .map(|l| {
            let p = format!("{pointer}/{}", escape(l));
            obj.get(l).ok_or_else(|| schema(&p, "missing value")).and_then(|x| rational_from_json(x, &p))
        })
        .collect::<Result<Vec<_>>>()?;
    PointFunction::new(points.clone(), values)
}

/// Reads an element either as a JSON object or as comma-separated rationals in point order.
pub fn parse_element(text: &str, points: &Arc<PointSet>) -> Result<PointFunction> {
    let text = text.trim();
    if text.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| schema("", e.to_string()))?;
        return element_from_json(&v, points, "");
    }
    let values = text.split(',').map(str::parse).collect::<Result<Vec<Rational01>>>()?;
    PointFunction::new(points.clone(), values)
}

pub fn algebra_to_json(alg: &FiniteAlgebra) -> Value {
    let pts = alg.points();
    let mut obj = Map::new();
    obj.insert("points".into(), json!(pts.labels()));
    obj.insert("signature".into(), json!(alg.signature().as_str()));
    if alg.scalar_denominator() != 1 {
        obj.insert("scalar_denominator".into(), json!(alg.scalar_denominator()));
    }
    if let Some(t) = alg.top() {
        obj.insert("top".into(), element_to_json(pts, alg.values(t)));
    }
    let gens: Vec<Value> = alg.generators().iter().map(|&g| element_to_json(pts, alg.values(g))).collect();
    obj.insert("generators".into(), Value::Array(gens));
    let carrier: Vec<Value> = (0..alg.len()).map(|i| element_to_json(pts, alg.values(i))).collect();
    obj.insert("carrier".into(), Value::Array(carrier));
    Value::Object(obj)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("/{key}"), format!("missing \"{key}\"")))
}

pub fn algebra_from_json(v: &Value, cap: usize) -> Result<FiniteAlgebra> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let labels = field(obj, "points")?.as_array().ok_or_else(|| schema("/points", "expected an array"))?;
    let labels = labels
        .iter()
        .enumerate()
        .map(|(i, l)| l.as_str().map(String::from).ok_or_else(|| schema(format!("/points/{i}"), "expected a string")))
        .collect::<Result<Vec<_>>>()?;
    let points = PointSet::tuples(labels).map_err(|e| schema("/points", e.to_string()))?;
    let sig: Signature = field(obj, "signature")?
        .as_str()
        .ok_or_else(|| schema("/signature", "expected a string"))?
        .parse()
        .map_err(|e: Error| schema("/signature", e.to_string()))?;
    let d = match obj.get("scalar_denominator") {
        None => 1,
        Some(x) => x
            .as_u64()
            .filter(|&d| d >= 1)
            .ok_or_else(|| schema("/scalar_denominator", "expected a positive integer"))?,
    };
    let gens = field(obj, "generators")?.as_array().ok_or_else(|| schema("/generators", "expected an array"))?;
    let gens = gens
        .iter()
        .enumerate()
        .map(|(i, g)| element_from_json(g, &points, &format!("/generators/{i}")))
        .collect::<Result<Vec<_>>>()?;
    let top = obj.get("top").map(|t| element_from_json(t, &points, "/top")).transpose()?;
    let closure_sig = if top.is_some() { Signature::Mv } else { sig };
    let mut alg = generate_subalgebra(&points, &gens, closure_sig, cap)?;
    if let Some(t) = top {
        if sig != Signature::Mv {
            return Err(schema("/signature", "interval algebras carry the MV signature"));
        }
        alg = interval_algebra(&alg, &t).map_err(|e| schema("/top", e.to_string()))?;
    }
    let alg = alg.with_scalar_denominator(d).map_err(|e| schema("/scalar_denominator", e.to_string()))?;
    if let Some(c) = obj.get("carrier") {
        let c = c.as_array().ok_or_else(|| schema("/carrier", "expected an array"))?;
        let mut given = Vec::with_capacity(c.len());
        for (i, e) in c.iter().enumerate() {
            let p = format!("/carrier/{i}");
            let f = element_from_json(e, &points, &p)?;
            if !alg.contains(&f) {
                return Err(schema(p, "element is not generated"));
            }
            given.push(f);
        }
        if given.len() != alg.len() {
            return Err(schema("/carrier", format!("{} elements listed, {} generated", given.len(), alg.len())));
        }
        if let Some(i) = given.windows(2).position(|w| w[0].values() >= w[1].values()) {
            return Err(schema(format!("/carrier/{}", i + 1), "carrier must be sorted without repeats"));
        }
    }
    Ok(alg)
}

/// The algebra JSON of `A ⊗ B` plus `generator_index` rows `[a, b, a⊗b]`.
pub fn tensor_to_json(t: &TensorResult) -> Value {
    let mut v = algebra_to_json(&t.algebra);
    let rows: Vec<Value> = t.generator_index().into_iter().map(|(a, b, e)| json!([a, b, e])).collect();
    v.as_object_mut().expect("object").insert("generator_index".into(), Value::Array(rows));
    v
}

pub fn tower_element_to_json(tw: &Tower, x: &TowerElement) -> Value {
    json!({ "level": x.level, "value": element_to_json(tw.points(x.level), x.value.values()) })
}

pub fn tower_element_from_json(tw: &Tower, v: &Value) -> Result<TowerElement> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let level = field(obj, "level")?.as_u64().ok_or_else(|| schema("/level", "expected a positive integer"))? as usize;
    if level == 0 || level > tw.max_level() {
        return Err(schema("/level", format!("level must lie in 1..={}", tw.max_level())));
    }
    let value = element_from_json(field(obj, "value")?, tw.points(level), "/value")?;
    let x = TowerElement { level, value };
    tw.index_of(&x).map_err(|e| schema("/value", e.to_string()))?;
    Ok(x)
}

pub fn group_to_json(g: &UnitGroup) -> Value {
    json!({ "factors": g.factors })
}

pub fn group_from_json(v: &Value) -> Result<UnitGroup> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let f = field(obj, "factors")?.as_array().ok_or_else(|| schema("/factors", "expected an array"))?;
    let factors = f
        .iter()
        .enumerate()
        .map(|(i, n)| {
            n.as_u64().filter(|&n| n >= 1).ok_or_else(|| schema(format!("/factors/{i}"), "expected a positive integer"))
        })
        .collect::<Result<Vec<_>>>()?;
    UnitGroup::new(factors).map_err(|e| schema("/factors", e.to_string()))
}

/// A hom given by a target algebra and the images of the source generators:
/// `{ "target": <algebra>, "images": [<element>, …] }`.
pub fn hom_from_json(source: &Arc<FiniteAlgebra>, v: &Value, cap: usize) -> Result<Hom> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    let target = Arc::new(algebra_from_json(field(obj, "target")?, cap).map_err(|e| match e {
        Error::Schema { pointer, msg } => schema(format!("/target{pointer}"), msg),
        other => other,
    })?);
    let imgs = field(obj, "images")?.as_array().ok_or_else(|| schema("/images", "expected an array"))?;
    let idx = imgs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("/images/{i}");
            let f = element_from_json(e, target.points(), &p)?;
            target.index_of_function(&f).ok_or_else(|| schema(p, "image is not in the target"))
        })
        .collect::<Result<Vec<_>>>()?;
    extend_from_generators(source, &target, &idx)
}

pub fn hom_to_json(h: &Hom) -> Value {
    let src = h.source();
    let tgt = h.target();
    let images: Vec<Value> =
        src.generators().iter().map(|&g| element_to_json(tgt.points(), tgt.values(h.apply(g)))).collect();
    json!({ "target": algebra_to_json(tgt), "images": images })
}
