//! JSON encodings for series, Lie polynomials, loops and rank tables.
//!
//! Rational coefficients travel as exact strings ("3/4"), complex numbers as
//! [re, im] pairs, words and Lyndon words as arrays of 1-based letters.
//! Emission orders terms length-then-lex so output is deterministic.

use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kz::{Ambient, Loop, Segment, Track};
use crate::lie::LiePoly;
use crate::malcev::{MalcevPresentation, RankProbe};
use crate::ranks::{DistinguishReport, RankTable, ValueFlag};
use crate::series::Series;
use crate::{NcSeries, NumSeries, Rat};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn get<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| bad(format!("missing key `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|u| u as usize).ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn word_from_json(v: &Value, rank: usize, what: &str) -> Result<Vec<u8>> {
    let arr = v.as_array().ok_or_else(|| bad(format!("{what} must be an array of letters")))?;
    let mut w = Vec::with_capacity(arr.len());
    for x in arr {
        let l = as_usize(x, "letter")?;
        if l == 0 || l > rank {
            return Err(bad(format!("letter {l} outside 1..={rank}")));
        }
        w.push(l as u8);
    }
    Ok(w)
}

fn word_to_json(w: &[u8]) -> Value {
    Value::Array(w.iter().map(|&l| json!(l)).collect())
}

fn rat_from_json(v: &Value) -> Result<Rat> {
    let s = v.as_str().ok_or_else(|| bad("coeff must be a string like \"p/q\""))?;
    Rat::from_str(s).map_err(|e| bad(format!("bad rational `{s}`: {e}")))
}

// ---- exact series ----

pub fn series_to_json(s: &NcSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(w, c)| json!({"word": word_to_json(w), "coeff": c.to_string()}))
        .collect();
    json!({"rank": s.rank(), "level": s.level(), "terms": terms})
}

pub fn series_from_json(v: &Value) -> Result<NcSeries> {
    let rank = as_usize(get(v, "rank")?, "rank")?;
    let level = as_usize(get(v, "level")?, "level")?;
    let terms = get(v, "terms")?.as_array().ok_or_else(|| bad("terms must be an array"))?;
    let mut s = Series::zero(rank, level);
    for t in terms {
        let w = word_from_json(get(t, "word")?, rank, "word")?;
        if w.len() > level {
            return Err(bad(format!("word of length {} above level {level}", w.len())));
        }
        s.add_term(w, rat_from_json(get(t, "coeff")?)?);
    }
    Ok(s)
}

// ---- numeric series ----

fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_from_json(v: &Value) -> Result<Complex64> {
    let arr = v.as_array().ok_or_else(|| bad("complex number must be [re, im]"))?;
    if arr.len() != 2 {
        return Err(bad("complex number must be [re, im]"));
    }
    let re = arr[0].as_f64().ok_or_else(|| bad("re must be a number"))?;
    let im = arr[1].as_f64().ok_or_else(|| bad("im must be a number"))?;
    Ok(Complex64::new(re, im))
}

pub fn num_series_to_json(s: &NumSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(w, c)| json!({"word": word_to_json(w), "coeff": complex_to_json(*c)}))
        .collect();
    json!({"rank": s.rank(), "level": s.level(), "terms": terms})
}

pub fn num_series_from_json(v: &Value) -> Result<NumSeries> {
    let rank = as_usize(get(v, "rank")?, "rank")?;
    let level = as_usize(get(v, "level")?, "level")?;
    let terms = get(v, "terms")?.as_array().ok_or_else(|| bad("terms must be an array"))?;
    let mut s = Series::zero(rank, level);
    for t in terms {
        let w = word_from_json(get(t, "word")?, rank, "word")?;
        if w.len() > level {
            return Err(bad(format!("word of length {} above level {level}", w.len())));
        }
        s.add_term(w, complex_from_json(get(t, "coeff")?)?);
    }
    Ok(s)
}

// ---- Lie polynomials ----

pub fn lie_to_json(p: &LiePoly) -> Value {
    let mut terms: Vec<(&Vec<u8>, &Rat)> = p.terms().collect();
    terms.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|(w, c)| json!({"lyndon": word_to_json(w), "coeff": c.to_string()}))
        .collect();
    json!({"rank": p.rank(), "terms": terms})
}

pub fn lie_from_json(v: &Value) -> Result<LiePoly> {
    let rank = as_usize(get(v, "rank")?, "rank")?;
    let terms = get(v, "terms")?.as_array().ok_or_else(|| bad("terms must be an array"))?;
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        let w = word_from_json(get(t, "lyndon")?, rank, "lyndon")?;
        pairs.push((w, rat_from_json(get(t, "coeff")?)?));
    }
    LiePoly::from_terms(rank, pairs)
}

// ---- loops ----

pub fn ambient_to_json(a: &Ambient) -> Value {
    match a {
        Ambient::PuncturedPlane(ps) => json!({
            "type": "punctured-plane",
            "punctures": ps.iter().map(|&p| complex_to_json(p)).collect::<Vec<_>>(),
        }),
        Ambient::Configuration(n) => json!({"type": "configuration", "n": n}),
    }
}

pub fn ambient_from_json(v: &Value) -> Result<Ambient> {
    let ty = get(v, "type")?.as_str().ok_or_else(|| bad("ambient type must be a string"))?;
    match ty {
        "punctured-plane" => {
            let ps = get(v, "punctures")?
                .as_array()
                .ok_or_else(|| bad("punctures must be an array"))?
                .iter()
                .map(complex_from_json)
                .collect::<Result<Vec<_>>>()?;
            if ps.is_empty() {
                return Err(bad("need at least one puncture"));
            }
            Ok(Ambient::PuncturedPlane(ps))
        }
        "configuration" => {
            let n = as_usize(get(v, "n")?, "n")?;
            if n < 2 {
                return Err(bad("configuration needs n >= 2 strands"));
            }
            Ok(Ambient::Configuration(n))
        }
        other => Err(bad(format!("unknown ambient type `{other}`"))),
    }
}

/// Points of one segment endpoint: a single pair for the plane, an array of
/// pairs (one per strand) for configuration space.
fn points_from_json(v: &Value, coords: usize, what: &str) -> Result<Vec<Complex64>> {
    if coords == 1 {
        return Ok(vec![complex_from_json(v)?]);
    }
    let arr = v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))?;
    if arr.len() != coords {
        return Err(bad(format!("{what} must list {coords} strand positions")));
    }
    arr.iter().map(complex_from_json).collect()
}

fn points_to_json(ps: &[Complex64]) -> Value {
    if ps.len() == 1 {
        complex_to_json(ps[0])
    } else {
        Value::Array(ps.iter().map(|&p| complex_to_json(p)).collect())
    }
}

fn orientation_from_json(v: Option<&Value>) -> Result<bool> {
    match v {
        None => Ok(true),
        Some(Value::Number(x)) => match x.as_i64() {
            Some(1) => Ok(true),
            Some(-1) => Ok(false),
            _ => Err(bad("orientation must be 1 (ccw) or -1 (cw)")),
        },
        Some(Value::String(s)) if s == "ccw" => Ok(true),
        Some(Value::String(s)) if s == "cw" => Ok(false),
        Some(_) => Err(bad("orientation must be 1 (ccw) or -1 (cw)")),
    }
}

fn segment_from_json(v: &Value, coords: usize) -> Result<Segment> {
    let ty = get(v, "type")?.as_str().ok_or_else(|| bad("segment type must be a string"))?;
    let from = points_from_json(get(v, "from")?, coords, "from")?;
    let to = points_from_json(get(v, "to")?, coords, "to")?;
    match ty {
        "line" => Ok(Segment {
            tracks: from.iter().zip(&to).map(|(&f, &t)| Track::line(f, t)).collect(),
        }),
        "arc" => {
            let center = complex_from_json(get(v, "center")?)?;
            let ccw = orientation_from_json(v.get("orientation"))?;
            let moving = if coords == 1 {
                0
            } else {
                let m = as_usize(get(v, "moving")?, "moving")?;
                if m == 0 || m > coords {
                    return Err(bad(format!("moving strand {m} outside 1..={coords}")));
                }
                m - 1
            };
            let mut tracks = Vec::with_capacity(coords);
            for i in 0..coords {
                if i == moving {
                    tracks.push(Track::arc(from[i], to[i], center, ccw)?);
                } else {
                    if (from[i] - to[i]).norm() > 1e-9 {
                        return Err(bad(format!(
                            "strand {} must stay put during an arc segment",
                            i + 1
                        )));
                    }
                    tracks.push(Track::line(from[i], to[i]));
                }
            }
            Ok(Segment { tracks })
        }
        other => Err(bad(format!("unknown segment type `{other}`"))),
    }
}

fn segment_to_json(seg: &Segment) -> Result<Value> {
    let from: Vec<Complex64> = seg.tracks.iter().map(Track::start).collect();
    let to: Vec<Complex64> = seg.tracks.iter().map(Track::end).collect();
    let arcs: Vec<usize> = seg
        .tracks
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t, Track::Arc { .. }))
        .map(|(i, _)| i)
        .collect();
    let mut obj = Map::new();
    obj.insert("from".into(), points_to_json(&from));
    obj.insert("to".into(), points_to_json(&to));
    match arcs.as_slice() {
        [] => {
            obj.insert("type".into(), json!("line"));
        }
        [i] => {
            let Track::Arc { center, sweep, .. } = &seg.tracks[*i] else { unreachable!() };
            for (j, tr) in seg.tracks.iter().enumerate() {
                if j != *i && (tr.start() - tr.end()).norm() > 1e-9 {
                    return Err(bad("segment mixes an arc with a moving line"));
                }
            }
            obj.insert("type".into(), json!("arc"));
            obj.insert("center".into(), complex_to_json(*center));
            obj.insert("orientation".into(), json!(if *sweep >= 0.0 { 1 } else { -1 }));
            if seg.tracks.len() > 1 {
                obj.insert("moving".into(), json!(i + 1));
            }
        }
        _ => return Err(bad("segment moves several strands on arcs")),
    }
    Ok(Value::Object(obj))
}

pub fn loop_to_json(lp: &Loop) -> Result<Value> {
    let segments = lp.segments.iter().map(segment_to_json).collect::<Result<Vec<_>>>()?;
    Ok(json!({"ambient": ambient_to_json(&lp.ambient), "segments": segments}))
}

pub fn loop_from_json(v: &Value) -> Result<Loop> {
    let ambient = ambient_from_json(get(v, "ambient")?)?;
    let coords = ambient.coords();
    let segments = get(v, "segments")?
        .as_array()
        .ok_or_else(|| bad("segments must be an array"))?
        .iter()
        .map(|s| segment_from_json(s, coords))
        .collect::<Result<Vec<_>>>()?;
    Loop::new(ambient, segments)
}

// ---- rank tables and reports ----

pub fn rank_table_to_json(t: &RankTable) -> Value {
    let flags: Vec<Value> = t
        .flags
        .iter()
        .map(|f| json!(match f {
            ValueFlag::Exact => "exact",
            ValueFlag::Asymptotic => "asymptotic",
        }))
        .collect();
    json!({
        "family": t.family.to_string(),
        "kind": t.kind.to_string(),
        "values": t.values,
        "flags": flags,
    })
}

pub fn distinguish_to_json(r: &DistinguishReport, families: &[String]) -> Value {
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|&(i, j, k)| {
            json!({
                "first": families.get(i).cloned().unwrap_or_else(|| i.to_string()),
                "second": families.get(j).cloned().unwrap_or_else(|| j.to_string()),
                "first_difference": k,
            })
        })
        .collect();
    json!({"kind": r.kind.to_string(), "through": r.through, "pairs": pairs})
}

pub fn malcev_to_json(mp: &MalcevPresentation, probe: &RankProbe) -> Value {
    json!({
        "primitive": mp.taylor_kind(),
        "relator_logs": mp.relator_logs().iter().map(lie_to_json).collect::<Vec<_>>(),
        "lowest_degree_parts": mp.lowest_degree_parts().iter().map(lie_to_json).collect::<Vec<_>>(),
        "probe": {
            "ranks_holonomy_like": probe.ranks_holonomy_like,
            "ranks_filtration": probe.ranks_filtration,
            "agree_through": probe.agree_through(),
        },
    })
}
