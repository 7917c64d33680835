//! JSON interchange for all kernel types. Rationals travel as canonical
//! "p/q" strings; every encoder/decoder pair round-trips bit-exactly.

use crate::auto::{AutoWord, Generator};
use crate::error::{KernelError, Result};
use crate::herm::{Herm2, Mat2, Projection};
use crate::incidence::Line;
use crate::preservers::{PreserverVerdict, SubcaseTag, TabulatedMap};
use crate::scalar::{format_rational, parse_rational, ExtReal, GaussRational, Rational};
use crate::spacetime::{M4Event, Point, QuadricPoint};
use serde_json::{json, Map, Value};

fn parse_err(what: &str, v: &Value) -> KernelError {
    KernelError::Parse(format!("expected {what}, got {v}"))
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        _ => Err(parse_err("rational string", v)),
    }
}

pub fn gauss_to_json(z: &GaussRational) -> Value {
    json!({ "re": rational_to_json(&z.re), "im": rational_to_json(&z.im) })
}

pub fn gauss_from_json(v: &Value) -> Result<GaussRational> {
    let o = v.as_object().ok_or_else(|| parse_err("complex object", v))?;
    let re = rational_from_json(o.get("re").ok_or_else(|| parse_err("re field", v))?)?;
    let im = rational_from_json(o.get("im").ok_or_else(|| parse_err("im field", v))?)?;
    Ok(GaussRational::new(re, im))
}

pub fn herm_to_json(a: &Herm2) -> Value {
    json!({
        "a": rational_to_json(&a.a),
        "d": rational_to_json(&a.d),
        "z": gauss_to_json(&a.z),
    })
}

pub fn herm_from_json(v: &Value) -> Result<Herm2> {
    let o = v.as_object().ok_or_else(|| parse_err("hermitian object", v))?;
    let get = |k: &str| o.get(k).ok_or_else(|| parse_err(k, v));
    Ok(Herm2::new(
        rational_from_json(get("a")?)?,
        rational_from_json(get("d")?)?,
        gauss_from_json(get("z")?)?,
    ))
}

pub fn projection_to_json(p: &Projection) -> Value {
    herm_to_json(p.matrix())
}

pub fn projection_from_json(v: &Value) -> Result<Projection> {
    Projection::try_new(herm_from_json(v)?)
}

pub fn ext_real_to_json(x: &ExtReal) -> Value {
    match x {
        ExtReal::Finite(r) => rational_to_json(r),
        ExtReal::Infinity => Value::String("inf".into()),
    }
}

pub fn ext_real_from_json(v: &Value) -> Result<ExtReal> {
    match v {
        Value::String(s) if s == "inf" => Ok(ExtReal::Infinity),
        _ => Ok(ExtReal::Finite(rational_from_json(v)?)),
    }
}

pub fn point_to_json(p: &Point) -> Value {
    match p {
        Point::Finite(a) => json!({ "finite": herm_to_json(a) }),
        Point::Infinite { dir, offset } => json!({
            "infinite": { "dir": projection_to_json(dir), "offset": rational_to_json(offset) }
        }),
        Point::Omega => Value::String("omega".into()),
    }
}

pub fn point_from_json(v: &Value) -> Result<Point> {
    match v {
        Value::String(s) if s == "omega" => Ok(Point::Omega),
        Value::Object(o) => {
            if let Some(f) = o.get("finite") {
                return Ok(Point::Finite(herm_from_json(f)?));
            }
            if let Some(i) = o.get("infinite") {
                let io = i.as_object().ok_or_else(|| parse_err("infinite object", v))?;
                let dir = projection_from_json(
                    io.get("dir").ok_or_else(|| parse_err("dir", v))?,
                )?;
                let offset = rational_from_json(
                    io.get("offset").ok_or_else(|| parse_err("offset", v))?,
                )?;
                return Ok(Point::Infinite { dir, offset });
            }
            Err(parse_err("point", v))
        }
        _ => Err(parse_err("point", v)),
    }
}

pub fn m4event_to_json(r: &M4Event) -> Value {
    json!({
        "x": rational_to_json(&r.x),
        "y": rational_to_json(&r.y),
        "z": rational_to_json(&r.z),
        "t": rational_to_json(&r.t),
    })
}

pub fn m4event_from_json(v: &Value) -> Result<M4Event> {
    let o = v.as_object().ok_or_else(|| parse_err("event object", v))?;
    let get = |k: &str| o.get(k).ok_or_else(|| parse_err(k, v));
    Ok(M4Event::new(
        rational_from_json(get("x")?)?,
        rational_from_json(get("y")?)?,
        rational_from_json(get("z")?)?,
        rational_from_json(get("t")?)?,
    ))
}

pub fn quadric_to_json(q: &QuadricPoint) -> Value {
    Value::Array(q.v.iter().map(rational_to_json).collect())
}

pub fn mat2_to_json(m: &Mat2) -> Value {
    Value::Array(
        m.e.iter()
            .map(|row| Value::Array(row.iter().map(gauss_to_json).collect()))
            .collect(),
    )
}

pub fn mat2_from_json(v: &Value) -> Result<Mat2> {
    let rows = v.as_array().ok_or_else(|| parse_err("2x2 matrix", v))?;
    if rows.len() != 2 {
        return Err(parse_err("two matrix rows", v));
    }
    let mut e = Vec::new();
    for row in rows {
        let cells = row.as_array().ok_or_else(|| parse_err("matrix row", v))?;
        if cells.len() != 2 {
            return Err(parse_err("two matrix columns", v));
        }
        for c in cells {
            e.push(gauss_from_json(c)?);
        }
    }
    let mut it = e.into_iter();
    Ok(Mat2::new(
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ))
}

pub fn generator_to_json(g: &Generator) -> Value {
    match g {
        Generator::Negate => json!({ "op": "negate" }),
        Generator::Transpose => json!({ "op": "transpose" }),
        Generator::Invert => json!({ "op": "invert" }),
        Generator::Translate(a) => json!({ "op": "translate", "arg": herm_to_json(a) }),
        Generator::Congruence(s) => json!({ "op": "congruence", "arg": mat2_to_json(s) }),
    }
}

pub fn generator_from_json(v: &Value) -> Result<Generator> {
    let o = v.as_object().ok_or_else(|| parse_err("generator object", v))?;
    let op = o
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("op string", v))?;
    match op {
        "negate" => Ok(Generator::Negate),
        "transpose" => Ok(Generator::Transpose),
        "invert" => Ok(Generator::Invert),
        "translate" => Ok(Generator::Translate(herm_from_json(
            o.get("arg").ok_or_else(|| parse_err("arg", v))?,
        )?)),
        "congruence" => Generator::congruence(mat2_from_json(
            o.get("arg").ok_or_else(|| parse_err("arg", v))?,
        )?),
        other => Err(KernelError::Parse(format!("unknown generator op {other:?}"))),
    }
}

pub fn word_to_json(w: &AutoWord) -> Value {
    Value::Array(w.gens.iter().map(generator_to_json).collect())
}

pub fn word_from_json(v: &Value) -> Result<AutoWord> {
    let arr = v.as_array().ok_or_else(|| parse_err("generator array", v))?;
    Ok(AutoWord::of(
        arr.iter().map(generator_from_json).collect::<Result<_>>()?,
    ))
}

pub fn line_to_json(l: &Line) -> Value {
    match l {
        Line::Finite { base, dir } => json!({
            "finite_line": { "base": herm_to_json(base), "dir": projection_to_json(dir) }
        }),
        Line::Infinity { dir } => json!({ "infinity_line": { "dir": projection_to_json(dir) } }),
    }
}

pub fn line_from_json(v: &Value) -> Result<Line> {
    let o = v.as_object().ok_or_else(|| parse_err("line object", v))?;
    if let Some(f) = o.get("finite_line") {
        let fo = f.as_object().ok_or_else(|| parse_err("finite_line", v))?;
        let base = herm_from_json(fo.get("base").ok_or_else(|| parse_err("base", v))?)?;
        let dir = projection_from_json(fo.get("dir").ok_or_else(|| parse_err("dir", v))?)?;
        return Ok(Line::finite(base, dir));
    }
    if let Some(i) = o.get("infinity_line") {
        let io = i.as_object().ok_or_else(|| parse_err("infinity_line", v))?;
        let dir = projection_from_json(io.get("dir").ok_or_else(|| parse_err("dir", v))?)?;
        return Ok(Line::infinity(dir));
    }
    Err(parse_err("line", v))
}

pub fn tabulated_map_to_json(m: &TabulatedMap) -> Value {
    json!({
        "domain_descriptor": m.domain_descriptor,
        "entries": m.entries.iter().map(|(x, y)| json!({
            "in": point_to_json(x),
            "out": point_to_json(y),
        })).collect::<Vec<_>>(),
    })
}

pub fn tabulated_map_from_json(v: &Value) -> Result<TabulatedMap> {
    let o = v.as_object().ok_or_else(|| parse_err("tabulated map", v))?;
    let desc = o
        .get("domain_descriptor")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("domain_descriptor", v))?;
    let arr = o
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("entries array", v))?;
    let mut entries = Vec::new();
    for e in arr {
        let eo = e.as_object().ok_or_else(|| parse_err("entry", e))?;
        let x = point_from_json(eo.get("in").ok_or_else(|| parse_err("in", e))?)?;
        let y = point_from_json(eo.get("out").ok_or_else(|| parse_err("out", e))?)?;
        entries.push((x, y));
    }
    TabulatedMap::new(desc, entries)
}

pub fn subcase_tag_str(t: &SubcaseTag) -> &'static str {
    match t {
        SubcaseTag::O => "o",
        SubcaseTag::I => "i",
        SubcaseTag::II => "ii",
        SubcaseTag::III => "iii",
        SubcaseTag::IV => "iv",
    }
}

pub fn verdict_to_json(v: &PreserverVerdict) -> Value {
    match v {
        PreserverVerdict::StandardCandidate { word, residual } => json!({
            "verdict": "standard-candidate",
            "word": word_to_json(word),
            "residual": residual,
        }),
        PreserverVerdict::TypeC { removed, vertex } => json!({
            "verdict": "type-c",
            "removed": point_to_json(removed),
            "vertex": point_to_json(vertex),
        }),
        PreserverVerdict::TypeL {
            domain_line,
            image_line,
        } => json!({
            "verdict": "type-l",
            "domain_line": line_to_json(domain_line),
            "image_line": line_to_json(image_line),
        }),
        PreserverVerdict::Subcase {
            tag,
            p_cross,
            q_circ,
            q_cross,
        } => {
            let mut o = Map::new();
            o.insert("verdict".into(), Value::String("subcase".into()));
            o.insert("tag".into(), Value::String(subcase_tag_str(tag).into()));
            if let Some(p) = p_cross {
                o.insert("p_cross".into(), projection_to_json(p));
            }
            if let Some(q) = q_circ {
                o.insert("q_circ".into(), point_to_json(q));
            }
            if let Some(q) = q_cross {
                o.insert("q_cross".into(), point_to_json(q));
            }
            Value::Object(o)
        }
        PreserverVerdict::Inconsistent => json!({ "verdict": "inconsistent" }),
    }
}

pub fn verdicts_to_json(vs: &[PreserverVerdict]) -> Value {
    Value::Array(vs.iter().map(verdict_to_json).collect())
}

/// Human-readable schema summaries, printed by the CLI --schema flag.
pub fn schemas() -> Value {
    json!({
        "rational": "canonical string \"p/q\" or \"p\"; non-reduced forms are rejected",
        "complex": { "re": "rational", "im": "rational" },
        "hermitian": { "a": "rational", "d": "rational", "z": "complex (upper-right entry)" },
        "point": "{\"finite\": hermitian} | {\"infinite\": {\"dir\": hermitian projection, \"offset\": rational}} | \"omega\"",
        "word": "array of generator objects {\"op\": \"negate|transpose|invert|translate|congruence\", \"arg\"?: hermitian | 2x2 complex matrix}",
        "line": "{\"finite_line\": {\"base\": hermitian, \"dir\": projection}} | {\"infinity_line\": {\"dir\": projection}}",
        "tabulated_map": { "domain_descriptor": "string", "entries": "[{\"in\": point, \"out\": point}]" },
        "verdict": "{\"verdict\": \"standard-candidate|type-c|type-l|subcase|inconsistent\", ...}",
        "suite_report": { "suite_id": "string", "cases_run": "integer", "failures": "[payload]", "seed": "integer", "elapsed_ms": "integer" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::projection_from_vector;
    use crate::scalar::{rat, rat_int};

    fn sample_herm() -> Herm2 {
        Herm2::new(rat(3, 7), rat(-2, 5), GaussRational::new(rat(1, 3), rat(-4, 9)))
    }

    #[test]
    fn rational_roundtrip_and_rejection() {
        let r = rat(-22, 7);
        assert_eq!(rational_from_json(&rational_to_json(&r)).unwrap(), r);
        assert!(rational_from_json(&Value::String("2/4".into())).is_err());
        assert!(rational_from_json(&Value::String("1/-2".into())).is_err());
        assert!(rational_from_json(&Value::String("1/0".into())).is_err());
    }

    #[test]
    fn point_roundtrip() {
        let pts = vec![
            Point::Finite(sample_herm()),
            Point::zero(),
            Point::infinite(
                projection_from_vector(&[GaussRational::from_ints(2, 1), GaussRational::one()])
                    .unwrap(),
                rat(5, 3),
            ),
            Point::Omega,
        ];
        for p in pts {
            assert_eq!(point_from_json(&point_to_json(&p)).unwrap(), p);
        }
    }

    #[test]
    fn word_roundtrip() {
        let s = Mat2::new(
            GaussRational::from_ints(1, 2),
            GaussRational::one(),
            GaussRational::zero(),
            GaussRational::from_ints(0, -1),
        );
        let w = AutoWord::of(vec![
            Generator::Negate,
            Generator::Transpose,
            Generator::Invert,
            Generator::Translate(sample_herm()),
            Generator::congruence(s).unwrap(),
        ]);
        assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn line_roundtrip() {
        let l = Line::finite(sample_herm(), Projection::e22());
        assert_eq!(line_from_json(&line_to_json(&l)).unwrap(), l);
        let li = Line::infinity(Projection::e11());
        assert_eq!(line_from_json(&line_to_json(&li)).unwrap(), li);
    }

    #[test]
    fn map_roundtrip() {
        let m = TabulatedMap::new(
            "demo",
            vec![
                (Point::zero(), Point::Omega),
                (Point::Finite(sample_herm()), Point::zero()),
            ],
        )
        .unwrap();
        assert_eq!(tabulated_map_from_json(&tabulated_map_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn projection_json_validates() {
        // a non-idempotent hermitian must be rejected as a projection
        let bad = herm_to_json(&Herm2::identity());
        assert!(projection_from_json(&bad).is_err());
        let _ = rat_int(0);
    }
}
