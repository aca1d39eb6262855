//! JSON documents for sets, functions, planar sets and pairs.
//!
//! Rationals are written as strings `"p/q"`; plain JSON integers are
//! accepted on input.

use serde_json::{json, Map, Value};

use crate::deficiency::{LineFunction, PlanarAtom, PlanarSet, Point2};
use crate::error::HError;
use crate::hintegral::{Domain, Expr, PiecewiseFunction, SeriesExpr};
use crate::hvalue::{CoefficientSeries, HPair};
use crate::num::{fmt_rational, parse_rational, Rational};
use crate::poly::Poly;
use crate::setalg::{repset_normalize, repset_union, Atom, AtomKind, RepSet, SeqKind, SeqSpec};

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document at {path}: {source}")]
    Validation { path: String, source: HError },
}

type DResult<T> = std::result::Result<T, DocError>;

fn bad(path: &str, msg: impl Into<String>) -> DocError {
    DocError::Validation {
        path: path.to_string(),
        source: HError::InvalidInput(msg.into()),
    }
}

fn at<T>(path: &str, r: crate::error::Result<T>) -> DResult<T> {
    r.map_err(|source| DocError::Validation {
        path: path.to_string(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Set(RepSet),
    Function(LineFunction),
    Planar(PlanarSet),
    Pair(HPair),
}

/// Parses JSON text, reporting syntax errors with their position.
pub fn parse_json(text: &str) -> DResult<Value> {
    serde_json::from_str(text).map_err(|e| DocError::Parse {
        line: e.line(),
        column: e.column(),
        message: e
            .to_string()
            .split(" at line")
            .next()
            .unwrap_or_default()
            .to_string(),
    })
}

pub fn parse_document(text: &str) -> DResult<Document> {
    document_from_json(&parse_json(text)?)
}

pub fn document_from_json(v: &Value) -> DResult<Document> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("$", "a document is a JSON object"))?;
    if obj.contains_key("terms") {
        Ok(Document::Function(line_function_from_json(v)?))
    } else if obj.contains_key("planar") {
        Ok(Document::Planar(planar_from_json(v)?))
    } else if obj.contains_key("d") && obj.contains_key("m") {
        Ok(Document::Pair(at("$", HPair::from_json(v))?))
    } else {
        Ok(Document::Set(set_from_json(v, "$")?))
    }
}

pub fn document_to_json(d: &Document) -> Value {
    match d {
        Document::Set(s) => set_to_json(s),
        Document::Function(f) => line_function_to_json(f),
        Document::Planar(p) => planar_to_json(p),
        Document::Pair(p) => p.to_json(),
    }
}

fn rational(v: &Value, path: &str) -> DResult<Rational> {
    match v {
        Value::String(s) => at(path, parse_rational(s)),
        Value::Number(n) => at(path, parse_rational(&n.to_string())),
        _ => Err(bad(path, "expected a rational such as \"p/q\"")),
    }
}

fn rational_list(v: &Value, path: &str) -> DResult<Vec<Rational>> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(path, "expected an array of rationals"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> DResult<&'a Value> {
    o.get(key)
        .ok_or_else(|| bad(path, format!("missing field '{key}'")))
}

fn r(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn rs<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(xs.into_iter().map(r).collect())
}

fn seq_from_json(v: &Value, path: &str) -> DResult<SeqSpec> {
    let o = v
        .as_object()
        .ok_or_else(|| bad(path, "sequence must be an object"))?;
    let a = rational(field(o, "a", path)?, &format!("{path}.a"))?;
    let b = rational(field(o, "b", path)?, &format!("{path}.b"))?;
    let spec = match field(o, "kind", path)?.as_str() {
        Some("harmonic") => at(path, SeqSpec::harmonic(a, b))?,
        Some("geometric") => {
            let q = rational(field(o, "q", path)?, &format!("{path}.q"))?;
            at(path, SeqSpec::geometric(a, b, q))?
        }
        _ => {
            return Err(bad(
                path,
                "sequence kind must be \"harmonic\" or \"geometric\"",
            ))
        }
    };
    match o.get("start") {
        None => Ok(spec),
        Some(s) => {
            let n = s
                .as_u64()
                .filter(|n| *n >= 1)
                .ok_or_else(|| bad(path, "start must be a positive integer"))?;
            Ok(spec.from(n))
        }
    }
}

fn atom_core(o: &Map<String, Value>, path: &str) -> DResult<Option<Atom>> {
    if let Some(v) = o.get("points") {
        return Ok(Some(Atom::points(rational_list(
            v,
            &format!("{path}.points"),
        )?)));
    }
    if let Some(v) = o.get("seq") {
        return Ok(Some(Atom::seq(seq_from_json(v, &format!("{path}.seq"))?)));
    }
    if let Some(v) = o.get("interval") {
        let p = format!("{path}.interval");
        let ends = rational_list(v, &p)?;
        let [lo, hi] =
            <[Rational; 2]>::try_from(ends).map_err(|_| bad(&p, "interval needs [lo, hi]"))?;
        return Ok(Some(at(&p, Atom::interval(lo, hi))?));
    }
    if let Some(v) = o.get("cantor") {
        let p = format!("{path}.cantor");
        let c = v
            .as_object()
            .ok_or_else(|| bad(&p, "cantor needs {\"t\", \"s\"}"))?;
        let t = rational(field(c, "t", &p)?, &format!("{p}.t"))?;
        let s = rational(field(c, "s", &p)?, &format!("{p}.s"))?;
        return Ok(Some(at(&p, Atom::cantor(t, s))?));
    }
    Ok(None)
}

pub fn set_from_json(v: &Value, path: &str) -> DResult<RepSet> {
    let o = v
        .as_object()
        .ok_or_else(|| bad(path, "a set is a JSON object"))?;
    let mut set = if let Some(u) = o.get("union") {
        let arr = u
            .as_array()
            .ok_or_else(|| bad(path, "union needs an array"))?;
        let mut acc = RepSet::empty();
        for (i, s) in arr.iter().enumerate() {
            let p = format!("{path}.union[{i}]");
            acc = at(&p, repset_union(&acc, &set_from_json(s, &p)?))?;
        }
        acc
    } else {
        match atom_core(o, path)? {
            Some(a) => at(path, repset_normalize(vec![a]))?,
            None if o.contains_key("delete") => RepSet::empty(),
            None => {
                return Err(bad(
                    path,
                    "expected one of points, seq, interval, cantor, union",
                ))
            }
        }
    };
    if let Some(d) = o.get("delete") {
        let pts = rational_list(d, &format!("{path}.delete"))?;
        let atoms: Vec<Atom> = set
            .atoms()
            .iter()
            .filter_map(|a| a.without(pts.iter()))
            .collect();
        set = at(path, repset_normalize(atoms))?;
    }
    Ok(set)
}

pub fn atom_to_json(a: &Atom) -> Value {
    let mut o = match &a.kind {
        AtomKind::Points(p) => json!({"points": rs(p)}),
        AtomKind::Seq(s) => {
            let mut body = json!({"a": r(&s.a), "b": r(&s.b)});
            match &s.kind {
                SeqKind::Harmonic => body["kind"] = json!("harmonic"),
                SeqKind::Geometric { q } => {
                    body["kind"] = json!("geometric");
                    body["q"] = r(q);
                }
            }
            if s.start != 1 {
                body["start"] = json!(s.start);
            }
            json!({ "seq": body })
        }
        AtomKind::Interval { lo, hi } => json!({"interval": [r(lo), r(hi)]}),
        AtomKind::Cantor { t, s } => json!({"cantor": {"t": r(t), "s": r(s)}}),
    };
    if !a.deletions.is_empty() {
        o["delete"] = rs(&a.deletions);
    }
    o
}

pub fn set_to_json(s: &RepSet) -> Value {
    match s.atoms() {
        [a] => atom_to_json(a),
        atoms => json!({"union": atoms.iter().map(atom_to_json).collect::<Vec<_>>()}),
    }
}

fn coeff_series_from_json(v: &Value, path: &str) -> DResult<CoefficientSeries> {
    let o = v
        .as_object()
        .ok_or_else(|| bad(path, "series must be an object"))?;
    let get =
        |k: &str| -> DResult<Rational> { rational(field(o, k, path)?, &format!("{path}.{k}")) };
    match field(o, "kind", path)?.as_str() {
        Some("geometric") => at(path, CoefficientSeries::geometric(get("a")?, get("r")?)),
        Some("pseries") => at(path, CoefficientSeries::pseries(get("c")?, get("p")?)),
        Some("list") => Ok(CoefficientSeries::FiniteList(rational_list(
            field(o, "values", path)?,
            &format!("{path}.values"),
        )?)),
        _ => Err(bad(path, "series kind must be geometric, pseries or list")),
    }
}

fn coeff_series_to_json(c: &CoefficientSeries) -> Value {
    match c {
        CoefficientSeries::Geometric { a, r: q } => {
            json!({"kind": "geometric", "a": r(a), "r": r(q)})
        }
        CoefficientSeries::PSeries { c, p } => json!({"kind": "pseries", "c": r(c), "p": r(p)}),
        CoefficientSeries::FiniteList(v) => json!({"kind": "list", "values": rs(v)}),
    }
}

fn expr_from_json(v: &Value, path: &str) -> DResult<Expr> {
    let o = v
        .as_object()
        .ok_or_else(|| bad(path, "expression must be an object"))?;
    if let Some(c) = o.get("const") {
        return Ok(Expr::Const(rational(c, &format!("{path}.const"))?));
    }
    if let Some(p) = o.get("poly") {
        return Ok(Expr::Poly(Poly::new(rational_list(
            p,
            &format!("{path}.poly"),
        )?)));
    }
    if let Some(s) = o.get("series") {
        let p = format!("{path}.series");
        let so = s
            .as_object()
            .ok_or_else(|| bad(&p, "series must be an object"))?;
        let (offset, parts) = match so.get("parts") {
            Some(parts) => {
                let arr = parts
                    .as_array()
                    .ok_or_else(|| bad(&p, "parts needs an array"))?;
                let parts = arr
                    .iter()
                    .enumerate()
                    .map(|(i, x)| coeff_series_from_json(x, &format!("{p}.parts[{i}]")))
                    .collect::<DResult<Vec<_>>>()?;
                let offset = match so.get("offset") {
                    Some(o) => rational(o, &format!("{p}.offset"))?,
                    None => Rational::from_integer(0.into()),
                };
                (offset, parts)
            }
            None => (
                Rational::from_integer(0.into()),
                vec![coeff_series_from_json(s, &p)?],
            ),
        };
        return Ok(Expr::Series(at(&p, SeriesExpr::new(offset, parts))?));
    }
    Err(bad(path, "expected const, poly or series"))
}

fn expr_to_json(e: &Expr) -> Value {
    match e {
        Expr::Const(c) => json!({"const": r(c)}),
        Expr::Poly(p) => json!({"poly": rs(p.coeffs())}),
        Expr::Series(s) => match s.parts.as_slice() {
            [one] if s.offset == Rational::from_integer(0.into()) => {
                json!({"series": coeff_series_to_json(one)})
            }
            parts => {
                json!({"series": {"offset": r(&s.offset), "parts": parts.iter().map(coeff_series_to_json).collect::<Vec<_>>()}})
            }
        },
    }
}

fn tail_from_json(v: &Value, key: &str, path: &str) -> DResult<(Rational, Poly)> {
    let o = v
        .as_object()
        .ok_or_else(|| bad(path, "tail must be an object"))?;
    let at_ = rational(field(o, key, path)?, &format!("{path}.{key}"))?;
    let p = Poly::new(rational_list(
        field(o, "poly", path)?,
        &format!("{path}.poly"),
    )?);
    Ok((at_, p))
}

pub fn function_from_json(v: &Value) -> DResult<PiecewiseFunction> {
    let o = v
        .as_object()
        .ok_or_else(|| bad("$", "a function is a JSON object"))?;
    let terms = field(o, "terms", "$")?
        .as_array()
        .ok_or_else(|| bad("$.terms", "terms needs an array"))?;
    let mut pieces = vec![];
    for (i, t) in terms.iter().enumerate() {
        let p = format!("$.terms[{i}]");
        let to = t
            .as_object()
            .ok_or_else(|| bad(&p, "a term is an object"))?;
        let set = set_from_json(field(to, "set", &p)?, &format!("{p}.set"))?;
        let expr = expr_from_json(field(to, "expr", &p)?, &format!("{p}.expr"))?;
        pieces.extend(set.atoms().iter().map(|a| (a.clone(), expr.clone())));
    }
    let domain = match o.get("domain") {
        None => Domain::All,
        Some(Value::String(s)) if s == "all" => Domain::All,
        Some(d) => Domain::Set(set_from_json(d, "$.domain")?),
    };
    at("$.terms", PiecewiseFunction::new(pieces, domain))
}

pub fn line_function_from_json(v: &Value) -> DResult<LineFunction> {
    let core = function_from_json(v)?;
    let o = v.as_object().expect("checked by function_from_json");
    let left = o
        .get("left")
        .map(|t| tail_from_json(t, "below", "$.left"))
        .transpose()?;
    let right = o
        .get("right")
        .map(|t| tail_from_json(t, "above", "$.right"))
        .transpose()?;
    at("$", LineFunction::new(core, left, right))
}

pub fn function_to_json(f: &PiecewiseFunction) -> Value {
    let mut terms: Vec<Value> = f
        .points()
        .iter()
        .map(|(x, v)| json!({"set": {"points": [r(x)]}, "expr": {"const": r(v)}}))
        .collect();
    terms.extend(
        f.terms()
            .iter()
            .map(|t| json!({"set": atom_to_json(&t.atom), "expr": expr_to_json(&t.expr)})),
    );
    let domain = match f.domain() {
        Domain::All => json!("all"),
        Domain::Set(s) => set_to_json(s),
    };
    json!({"terms": terms, "domain": domain})
}

pub fn line_function_to_json(f: &LineFunction) -> Value {
    let mut v = function_to_json(f.core());
    if let Some((a, p)) = f.left() {
        v["left"] = json!({"below": r(a), "poly": rs(p.coeffs())});
    }
    if let Some((b, p)) = f.right() {
        v["right"] = json!({"above": r(b), "poly": rs(p.coeffs())});
    }
    v
}

fn point2(v: &Value, path: &str) -> DResult<Point2> {
    let xs = rational_list(v, path)?;
    <[Rational; 2]>::try_from(xs)
        .map(|[x, y]| (x, y))
        .map_err(|_| bad(path, "a planar point is [x, y]"))
}

fn point2_list(v: &Value, path: &str) -> DResult<Vec<Point2>> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(path, "expected an array of points"))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| point2(p, &format!("{path}[{i}]")))
        .collect()
}

pub fn planar_from_json(v: &Value) -> DResult<PlanarSet> {
    let arr = v
        .get("planar")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("$.planar", "planar needs an array"))?;
    let mut atoms = vec![];
    for (i, a) in arr.iter().enumerate() {
        let p = format!("$.planar[{i}]");
        let o = a
            .as_object()
            .ok_or_else(|| bad(&p, "a planar atom is an object"))?;
        atoms.push(if let Some(x) = o.get("points") {
            PlanarAtom::Points(point2_list(x, &format!("{p}.points"))?)
        } else if let Some(x) = o.get("segment") {
            let ends = point2_list(x, &format!("{p}.segment"))?;
            let [a, b] = <[Point2; 2]>::try_from(ends)
                .map_err(|_| bad(&p, "a segment has two endpoints"))?;
            PlanarAtom::Segment(a, b)
        } else if let Some(x) = o.get("polygon") {
            PlanarAtom::Polygon(point2_list(x, &format!("{p}.polygon"))?)
        } else {
            return Err(bad(&p, "expected points, segment or polygon"));
        });
    }
    at("$.planar", PlanarSet::new(atoms))
}

pub fn planar_to_json(s: &PlanarSet) -> Value {
    let p = |x: &Point2| json!([r(&x.0), r(&x.1)]);
    let atoms: Vec<Value> = s
        .atoms()
        .iter()
        .map(|a| match a {
            PlanarAtom::Points(v) => json!({"points": v.iter().map(p).collect::<Vec<_>>()}),
            PlanarAtom::Segment(a, b) => json!({"segment": [p(a), p(b)]}),
            PlanarAtom::Polygon(v) => json!({"polygon": v.iter().map(p).collect::<Vec<_>>()}),
        })
        .collect();
    json!({ "planar": atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn set(text: &str) -> RepSet {
        match parse_document(text).unwrap() {
            Document::Set(s) => s,
            other => panic!("not a set: {other:?}"),
        }
    }

    #[test]
    fn set_grammar() {
        assert_eq!(
            set(r#"{"interval":[0,1]}"#),
            RepSet::from_atom(Atom::interval(int(0), int(1)).unwrap())
        );
        assert_eq!(
            set(r#"{"cantor":{"t":0,"s":1}}"#),
            RepSet::from_atom(Atom::cantor(int(0), int(1)).unwrap())
        );
        let merged = set(r#"{"union":[{"interval":[0,1]},{"interval":["1/2","3/2"]}]}"#);
        assert_eq!(
            merged,
            RepSet::from_atom(Atom::interval(int(0), rat(3, 2)).unwrap())
        );
        let punctured = set(r#"{"interval":[0,1],"delete":["1/2"]}"#);
        assert!(!punctured.contains(&rat(1, 2)) && punctured.contains(&rat(1, 3)));
        let h = set(r#"{"seq":{"kind":"geometric","a":0,"b":1,"q":"1/2","start":3}}"#);
        assert!(h.contains(&rat(1, 8)) && !h.contains(&rat(1, 4)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_document("{\n  \"interval\": [0, 1\n}") {
            Err(DocError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_document(
            r#"{"terms":[{"set":{"interval":[0,2]},"expr":{"const":1}},{"set":{"interval":[1,3]},"expr":{"const":1}}]}"#,
        ) {
            Err(DocError::Validation {
                source: HError::DisjointnessViolated(_),
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_document(r#"{"interval":[1,0]}"#),
            Err(DocError::Validation { .. })
        ));
    }

    #[test]
    fn round_trips() {
        let docs = [
            r#"{"union":[{"points":["-3","7/2"]},{"interval":[0,1],"delete":["1/3"]},{"cantor":{"t":5,"s":"-2"}},{"seq":{"kind":"harmonic","a":10,"b":1}}]}"#,
            r#"{"terms":[{"set":{"points":[0,1]},"expr":{"const":"-2"}},{"set":{"interval":[2,3]},"expr":{"poly":[0,1,"1/2"]}},{"set":{"seq":{"kind":"harmonic","a":0,"b":-1}},"expr":{"series":{"kind":"geometric","a":"1/2","r":"1/2"}}}],"domain":"all"}"#,
            r#"{"terms":[{"set":{"interval":[0,1]},"expr":{"const":1}}],"right":{"above":1,"poly":[1]}}"#,
            r#"{"planar":[{"points":[[0,0],[5,5]]},{"segment":[[1,0],[2,0]]},{"polygon":[[0,2],[1,2],[0,3]]}]}"#,
            r#"{"d":"log(2)/log(3)","m":"1"}"#,
        ];
        for text in docs {
            let d = parse_document(text).unwrap();
            let again = document_from_json(&document_to_json(&d)).unwrap();
            assert_eq!(again, d, "{text}");
        }
    }
}
