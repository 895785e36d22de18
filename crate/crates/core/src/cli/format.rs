//! Structure-constant files: JSON documents (and a flat CSV form) holding a
//! group shorthand, one explicit algebra, or two algebras with a pairing.
//!
//! Scalars are strings `"p/q"` or `"p/q+r/si"` (plain integers accepted);
//! a tensor constant is an array `[label, …, label, coeff]`. Labels are
//! integers, nested arrays (tuples) or names declared in `basis`.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, Basis};
use crate::catalog::{finite_group_pair, lazy_int_group_pair, Group};
use crate::error::{Error, Result};
use crate::mha::{MhaHandle, SuiteConfig};
use crate::pairing::{PairingHandle, StarMode};
use crate::scalar::Scalar;
use crate::tensor::{key, product_keys, Functional, Key, Label, LinMap, Tensor, Vector};

/// What a file declares, which fixes the suites that apply.
#[derive(Clone, Debug)]
pub enum Loaded {
    Algebra(MhaHandle),
    Pairing(PairingHandle),
}

impl Loaded {
    pub fn name(&self) -> &str {
        match self {
            Loaded::Algebra(h) => h.name(),
            Loaded::Pairing(p) => p.name(),
        }
    }
}

/// A JSON path for error messages, e.g. `/A/t1/3/2`.
#[derive(Clone)]
struct At(String);

impl At {
    fn root() -> At {
        At(String::new())
    }

    fn key(&self, k: &str) -> At {
        At(format!("{}/{k}", self.0))
    }

    fn idx(&self, i: usize) -> At {
        At(format!("{}/{i}", self.0))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let loc = if self.0.is_empty() { "/".to_string() } else { self.0.clone() };
        Error::parse(loc, msg)
    }
}

fn scalar(v: &Value, at: &At, rational: bool) -> Result<Scalar> {
    let s = match v {
        Value::String(s) => Scalar::from_str(s).map_err(|e| at.err(e.to_string()))?,
        Value::Number(n) => match n.as_i64() {
            Some(n) => Scalar::from_int(n),
            None => return Err(at.err(format!("coefficient {n} is not exact; write it as \"p/q\""))),
        },
        other => return Err(at.err(format!("expected a scalar string, found {other}"))),
    };
    if rational && !s.is_real() {
        return Err(at.err(format!("{s} is not rational in a rational file")));
    }
    Ok(s)
}

/// Parses the text form of a label: `3`, `(0,1)`, `((0,1),2)`.
pub fn parse_label(s: &str) -> std::result::Result<Label, String> {
    fn go(s: &[u8], pos: &mut usize) -> std::result::Result<Label, String> {
        while *pos < s.len() && s[*pos] == b' ' {
            *pos += 1;
        }
        if *pos < s.len() && s[*pos] == b'(' {
            *pos += 1;
            let mut parts = Vec::new();
            loop {
                parts.push(go(s, pos)?);
                while *pos < s.len() && s[*pos] == b' ' {
                    *pos += 1;
                }
                match s.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Label::Tuple(parts.into()));
                    }
                    _ => return Err(format!("expected `,` or `)` at offset {pos}")),
                }
            }
        }
        let start = *pos;
        if *pos < s.len() && s[*pos] == b'-' {
            *pos += 1;
        }
        while *pos < s.len() && s[*pos].is_ascii_digit() {
            *pos += 1;
        }
        let text = std::str::from_utf8(&s[start..*pos]).map_err(|e| e.to_string())?;
        text.parse::<i64>()
            .map(Label::Int)
            .map_err(|_| format!("expected an integer at offset {start}"))
    }
    let bytes = s.trim().as_bytes();
    let mut pos = 0;
    let l = go(bytes, &mut pos)?;
    if pos != bytes.len() {
        return Err(format!("trailing input at offset {pos}"));
    }
    Ok(l)
}

/// Label resolution for one algebra.
struct Names {
    by_name: HashMap<String, Label>,
    declared: Vec<Label>,
}

impl Names {
    fn declare(basis: &Value, at: &At) -> Result<Names> {
        let items = basis.as_array().ok_or_else(|| at.err("`basis` must be an array"))?;
        if items.is_empty() {
            return Err(at.err("empty basis"));
        }
        let mut by_name = HashMap::new();
        let mut declared = Vec::with_capacity(items.len());
        for (i, v) in items.iter().enumerate() {
            let l = match v {
                Value::String(s) => match parse_label(s) {
                    Ok(l) => l,
                    Err(_) => {
                        by_name.insert(s.clone(), Label::Int(i as i64));
                        Label::Int(i as i64)
                    }
                },
                other => raw_label(other, &at.idx(i))?,
            };
            if declared.contains(&l) {
                return Err(at.idx(i).err(format!("label {l} declared twice")));
            }
            declared.push(l);
        }
        Ok(Names { by_name, declared })
    }

    fn label(&self, v: &Value, at: &At) -> Result<Label> {
        let l = match v {
            Value::String(s) => match self.by_name.get(s) {
                Some(l) => l.clone(),
                None => parse_label(s).map_err(|e| at.err(format!("label `{s}`: {e}")))?,
            },
            other => raw_label(other, at)?,
        };
        if !self.declared.contains(&l) {
            return Err(at.err(format!("label {l} is not declared in the basis")));
        }
        Ok(l)
    }
}

fn raw_label(v: &Value, at: &At) -> Result<Label> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Label::Int)
            .ok_or_else(|| at.err(format!("label {n} is not an integer"))),
        Value::Array(items) => {
            let parts = items
                .iter()
                .enumerate()
                .map(|(i, x)| raw_label(x, &at.idx(i)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Label::Tuple(parts.into()))
        }
        Value::String(s) => parse_label(s).map_err(|e| at.err(format!("label `{s}`: {e}"))),
        other => Err(at.err(format!("expected a label, found {other}"))),
    }
}

/// `[[l1, …, ln, coeff], …]` with `n = arity`.
fn constants(v: &Value, at: &At, names: &[&Names], rational: bool) -> Result<Vec<(Key, Scalar)>> {
    let rows = v.as_array().ok_or_else(|| at.err("expected an array of constants"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let at_row = at.idx(i);
        let items = row.as_array().ok_or_else(|| at_row.err("a constant is an array [labels…, coeff]"))?;
        if items.len() != names.len() + 1 {
            return Err(at_row.err(format!("expected {} labels and a coefficient, found {} entries", names.len(), items.len())));
        }
        let k = key(
            items[..names.len()]
                .iter()
                .enumerate()
                .map(|(j, x)| names[j].label(x, &at_row.idx(j)))
                .collect::<Result<Vec<_>>>()?,
        );
        let c = scalar(&items[names.len()], &at_row.idx(names.len()), rational)?;
        out.push((k, c));
    }
    Ok(out)
}

/// Groups constants `[in…, out…, c]` by input key into a table map.
fn table(name: &str, rows: Vec<(Key, Scalar)>, din: usize, dout: usize) -> LinMap {
    let mut t: HashMap<Key, Tensor> = HashMap::new();
    for (k, c) in rows {
        let entry = t.entry(key(k[..din].iter().cloned())).or_insert_with(|| Tensor::zero(dout));
        entry.add_term(key(k[din..].iter().cloned()), c);
    }
    LinMap::from_table(name, din, dout, t)
}

fn vector(rows: Vec<(Key, Scalar)>) -> Vector {
    Tensor::from_terms(1, rows)
}

fn functional(name: &str, rows: Vec<(Key, Scalar)>) -> Functional {
    let coeffs: BTreeMap<Label, Scalar> = rows.into_iter().map(|(k, c)| (k[0].clone(), c)).collect();
    Functional::from_coeffs(name, coeffs)
}

fn field(obj: &Map<String, Value>, at: &At) -> Result<bool> {
    match obj.get("field") {
        None => Ok(false),
        Some(Value::String(s)) if s == "rational" || s == "Q" => Ok(true),
        Some(Value::String(s)) if s == "gaussian" || s == "Q(i)" => Ok(false),
        Some(other) => Err(at.key("field").err(format!("unknown field {other}; use \"rational\" or \"gaussian\""))),
    }
}

fn algebra(v: &Value, at: &At, rational: bool, fallback: &str) -> Result<(MhaHandle, Names)> {
    let obj = v.as_object().ok_or_else(|| at.err("an algebra is an object"))?;
    const KNOWN: [&str; 15] = [
        "name", "basis", "mul", "unit", "t1", "t2", "t1_inv", "t2_inv", "counit", "antipode",
        "antipode_inv", "star", "left_integral", "right_integral", "field",
    ];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(at.key(k).err(format!("unknown key `{k}`")));
    }
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(at.key("name").err("expected a string")),
        None => fallback.to_string(),
    };
    let need = |k: &str| obj.get(k).ok_or_else(|| at.err(format!("missing `{k}`")));
    let names = Names::declare(need("basis")?, &at.key("basis"))?;
    let n = &names;
    let get = |k: &str, arity: usize| -> Result<Option<Vec<(Key, Scalar)>>> {
        obj.get(k)
            .map(|v| constants(v, &at.key(k), &vec![n; arity], rational))
            .transpose()
    };
    let mul = table(&format!("m_{name}"), get("mul", 3)?.ok_or_else(|| at.err("missing `mul`"))?, 2, 1);
    let mut alg = Algebra::from_map(name.clone(), Basis::finite(names.declared.clone()), mul);
    alg = match get("unit", 1)? {
        Some(u) => alg.with_unit(vector(u)),
        None => alg.with_solved_unit(),
    };
    if let Some(rows) = get("star", 2)? {
        let star = table("*", rows, 1, 1);
        alg = alg.with_star(move |l| star.eval_key(std::slice::from_ref(l)).expect("table lookup"));
    }
    let t1 = table("T1", get("t1", 4)?.ok_or_else(|| at.err("missing `t1`"))?, 2, 2);
    let t2 = table("T2", get("t2", 4)?.ok_or_else(|| at.err("missing `t2`"))?, 2, 2);
    let mut b = MhaHandle::builder(name.clone(), &alg, t1, t2);
    match (get("t1_inv", 4)?, get("t2_inv", 4)?) {
        (Some(x), Some(y)) => b = b.inverses(table("T1⁻¹", x, 2, 2), table("T2⁻¹", y, 2, 2)),
        (None, None) => {}
        _ => return Err(at.err("give both `t1_inv` and `t2_inv` or neither")),
    }
    if let Some(rows) = get("counit", 1)? {
        b = b.counit(functional("ε", rows));
    }
    if let Some(rows) = get("antipode", 2)? {
        let s_inv = get("antipode_inv", 2)?.map(|r| table("S⁻¹", r, 1, 1));
        b = b.antipode(table("S", rows, 1, 1), s_inv);
    }
    if let Some(rows) = get("left_integral", 1)? {
        b = b.left_integral(functional("φ", rows));
    }
    if let Some(rows) = get("right_integral", 1)? {
        b = b.right_integral(functional("ψ", rows));
    }
    // structural failures (singular T-maps, inconsistent counit) are not parse errors
    let h = b.build().map_err(|e| Error::failed(format!("build {name}"), e.to_string()))?;
    Ok((h, names))
}

fn group(v: &Value, at: &At) -> Result<Loaded> {
    let g = match v {
        Value::String(s) if s == "int" || s == "Z" => return Ok(Loaded::Pairing(lazy_int_group_pair()?)),
        Value::String(s) => Group::named(s).map_err(|e| at.err(e.to_string()))?,
        Value::Object(obj) => {
            let name = obj.get("name").and_then(Value::as_str).unwrap_or("G").to_string();
            let elements = obj
                .get("elements")
                .and_then(Value::as_array)
                .ok_or_else(|| at.err("a group needs `elements`"))?;
            let names: Vec<String> = elements
                .iter()
                .enumerate()
                .map(|(i, e)| match e {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(at.key("elements").idx(i).err("element names are strings")),
                })
                .collect::<Result<_>>()?;
            let index = |v: &Value, at: &At| -> Result<usize> {
                let s = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(at.err("expected an element name")),
                };
                names.iter().position(|x| *x == s).ok_or_else(|| at.err(format!("`{s}` is not an element")))
            };
            let rows = obj
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| at.err("a group needs `table`"))?;
            let mut table = Vec::with_capacity(rows.len());
            for (i, r) in rows.iter().enumerate() {
                let at_r = at.key("table").idx(i);
                let r = r.as_array().ok_or_else(|| at_r.err("a table row is an array"))?;
                table.push(r.iter().enumerate().map(|(j, x)| index(x, &at_r.idx(j))).collect::<Result<Vec<_>>>()?);
            }
            Group::from_table(name, names, table).map_err(|e| at.err(e.to_string()))?
        }
        other => return Err(at.err(format!("`group` is a name, \"int\" or a table object, found {other}"))),
    };
    Ok(Loaded::Pairing(finite_group_pair(&g).map_err(|e| Error::failed("certify group pairing", e.to_string()))?))
}

/// Reads a parsed JSON document.
pub fn load_value(doc: &Value) -> Result<Loaded> {
    let root = At::root();
    let obj = doc.as_object().ok_or_else(|| root.err("top level must be an object"))?;
    let rational = field(obj, &root)?;
    if let Some(g) = obj.get("group") {
        return group(g, &root.key("group"));
    }
    if let Some(a) = obj.get("algebra") {
        let (h, _) = algebra(a, &root.key("algebra"), rational, "H")?;
        return Ok(Loaded::Algebra(h));
    }
    let (Some(av), Some(bv)) = (obj.get("A"), obj.get("B")) else {
        return Err(root.err("expected `group`, `algebra`, or `A`, `B` and `pairing`"));
    };
    let (a, na) = algebra(av, &root.key("A"), rational, "A")?;
    let (b, nb) = algebra(bv, &root.key("B"), rational, "B")?;
    let at_p = root.key("pairing");
    let pv = obj.get("pairing").ok_or_else(|| root.err("missing `pairing`"))?;
    let pobj = pv.as_object().ok_or_else(|| at_p.err("`pairing` is an object"))?;
    let form = constants(
        pobj.get("form").ok_or_else(|| at_p.err("missing `form`"))?,
        &at_p.key("form"),
        &[&na, &nb],
        rational,
    )?;
    let star = match pobj.get("star") {
        None | Some(Value::Bool(false)) => StarMode::Off,
        Some(Value::Bool(true)) => StarMode::On,
        Some(_) => return Err(at_p.key("star").err("expected true or false")),
    };
    let form: HashMap<(Label, Label), Scalar> = form.into_iter().map(|(k, c)| ((k[0].clone(), k[1].clone()), c)).collect();
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .map(str::to_string)
        .unwrap_or_else(|| format!("{}/{}", a.name(), b.name()));
    let p = PairingHandle::new(
        name,
        &a,
        &b,
        move |x, y| form.get(&(x.clone(), y.clone())).cloned().unwrap_or_else(|| Scalar::from_int(0)),
        star,
    )?;
    Ok(Loaded::Pairing(p))
}

/// Reads JSON text; syntax errors carry line and column.
pub fn load_json(text: &str) -> Result<Loaded> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    load_value(&doc)
}

/// Reads the flat CSV form written by [`to_csv`] back into JSON.
pub fn csv_to_value(text: &str) -> Result<Value> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut root = Map::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| Error::parse(format!("line {line}"), e.to_string()))?;
        let cells: Vec<&str> = rec.iter().collect();
        if cells.is_empty() || cells[0].starts_with('#') {
            continue;
        }
        let loc = |c: usize| format!("line {line}, column {}", c + 1);
        let (path, rest) = (cells[0], &cells[1..]);
        let (section, map) = match path.split_once('.') {
            Some((s, m)) => (s.to_string(), m.to_string()),
            None => return Err(Error::parse(loc(0), format!("expected `section.map`, found `{path}`"))),
        };
        if section == "file" {
            root.insert(map, Value::String(rest.first().copied().unwrap_or_default().to_string()));
            continue;
        }
        let entry = root
            .entry(section.clone())
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .ok_or_else(|| Error::parse(loc(0), format!("`{section}` is not a section")))?;
        let to_label = |c: usize, s: &str| -> Result<Value> {
            parse_label(s).map(|l| label_json(&l)).map_err(|e| Error::parse(loc(c), e))
        };
        match map.as_str() {
            "name" => {
                entry.insert("name".into(), Value::String(rest.first().copied().unwrap_or_default().to_string()));
            }
            "star" if section == "pairing" => {
                entry.insert("star".into(), Value::Bool(rest.first() == Some(&"true")));
            }
            "basis" => {
                let l = to_label(1, rest.first().copied().unwrap_or_default())?;
                entry.entry("basis").or_insert_with(|| Value::Array(vec![])).as_array_mut().expect("array").push(l);
            }
            _ => {
                if rest.is_empty() {
                    return Err(Error::parse(loc(1), "a constant needs labels and a coefficient"));
                }
                let mut row = Vec::with_capacity(rest.len());
                for (c, s) in rest[..rest.len() - 1].iter().enumerate() {
                    row.push(to_label(c + 1, s)?);
                }
                row.push(Value::String(rest[rest.len() - 1].to_string()));
                entry.entry(map).or_insert_with(|| Value::Array(vec![])).as_array_mut().expect("array").push(Value::Array(row));
            }
        }
    }
    Ok(Value::Object(root))
}

pub fn label_json(l: &Label) -> Value {
    match l {
        Label::Int(n) => json!(n),
        Label::Tuple(t) => Value::Array(t.iter().map(label_json).collect()),
    }
}

fn rows_json(rows: impl IntoIterator<Item = (Key, Scalar)>) -> Value {
    Value::Array(
        rows.into_iter()
            .map(|(k, c)| {
                let mut row: Vec<Value> = k.iter().map(label_json).collect();
                row.push(Value::String(c.to_string()));
                Value::Array(row)
            })
            .collect(),
    )
}

fn map_rows(m: &LinMap, labels: &[Label], degree: usize) -> Result<Vec<(Key, Scalar)>> {
    let mut out = Vec::new();
    for k in product_keys(labels, degree) {
        for (o, c) in m.eval_key(&k)?.terms() {
            let mut full = k.clone();
            full.extend(o.iter().cloned());
            out.push((full, c.clone()));
        }
    }
    Ok(out)
}

fn functional_rows(f: &Functional, labels: &[Label]) -> Result<Vec<(Key, Scalar)>> {
    let mut out = Vec::new();
    for l in labels {
        let c = f.at(l)?;
        if c != Scalar::from_int(0) {
            out.push((key([l.clone()]), c));
        }
    }
    Ok(out)
}

/// Every structure map of a finite handle as constants.
pub fn algebra_document(h: &MhaHandle) -> Result<Value> {
    let alg = h.algebra();
    let labels = alg
        .basis()
        .labels()
        .ok_or_else(|| Error::Unavailable(format!("{} has an infinite basis; nothing finite to export", h.name())))?
        .to_vec();
    let mut doc = Map::new();
    doc.insert("name".into(), json!(h.name()));
    doc.insert("basis".into(), Value::Array(labels.iter().map(label_json).collect()));
    doc.insert("mul".into(), rows_json(map_rows(alg.mul_map(), &labels, 2)?));
    if let Some(u) = alg.unit() {
        doc.insert("unit".into(), rows_json(u.terms().map(|(k, c)| (k.clone(), c.clone()))));
    }
    doc.insert("t1".into(), rows_json(map_rows(h.t1(), &labels, 2)?));
    doc.insert("t2".into(), rows_json(map_rows(h.t2(), &labels, 2)?));
    doc.insert("t1_inv".into(), rows_json(map_rows(h.t1_inv(), &labels, 2)?));
    doc.insert("t2_inv".into(), rows_json(map_rows(h.t2_inv(), &labels, 2)?));
    doc.insert("counit".into(), rows_json(functional_rows(h.counit_functional(), &labels)?));
    doc.insert("antipode".into(), rows_json(map_rows(h.antipode_map(), &labels, 1)?));
    if let Ok(s_inv) = h.antipode_inv_map() {
        doc.insert("antipode_inv".into(), rows_json(map_rows(s_inv, &labels, 1)?));
    }
    if alg.has_star() {
        let mut rows = Vec::new();
        for l in &labels {
            for (o, c) in alg.star_label(l)?.terms() {
                rows.push((key([l.clone(), o[0].clone()]), c.clone()));
            }
        }
        doc.insert("star".into(), rows_json(rows));
    }
    if let Some(phi) = h.left_integral() {
        doc.insert("left_integral".into(), rows_json(functional_rows(&phi.functional, &labels)?));
    }
    if let Some(psi) = h.right_integral() {
        doc.insert("right_integral".into(), rows_json(functional_rows(&psi.functional, &labels)?));
    }
    Ok(Value::Object(doc))
}

/// `{"algebra": …}` for a single handle.
pub fn mha_file(h: &MhaHandle) -> Result<Value> {
    Ok(json!({ "field": "gaussian", "algebra": algebra_document(h)? }))
}

/// `{"A": …, "B": …, "pairing": …}` for a finite pairing.
pub fn pairing_file(p: &PairingHandle) -> Result<Value> {
    let (a, b) = (p.a(), p.b());
    let (la, lb) = match (a.algebra().basis().labels(), b.algebra().basis().labels()) {
        (Some(x), Some(y)) => (x.to_vec(), y.to_vec()),
        _ => return Err(Error::Unavailable(format!("{} is lazy; nothing finite to export", p.name()))),
    };
    let mut form = Vec::new();
    for x in &la {
        for y in &lb {
            let c = p.form_at(x, y);
            if c != Scalar::from_int(0) {
                form.push((key([x.clone(), y.clone()]), c));
            }
        }
    }
    Ok(json!({
        "name": p.name(),
        "field": "gaussian",
        "A": algebra_document(a)?,
        "B": algebra_document(b)?,
        "pairing": { "form": rows_json(form), "star": p.star_mode() == StarMode::On },
    }))
}

/// JSON text with one constant per line.
pub fn to_json_text(doc: &Value) -> String {
    fn go(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent + 1);
        match v {
            Value::Object(m) if !m.is_empty() => {
                out.push_str("{\n");
                for (i, (k, x)) in m.iter().enumerate() {
                    out.push_str(&format!("{pad}{}: ", Value::String(k.clone())));
                    go(x, indent + 1, out);
                    out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            Value::Array(items) if items.iter().any(|x| x.is_array()) => {
                out.push_str("[\n");
                for (i, x) in items.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str(&x.to_string());
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    go(doc, 0, &mut out);
    out.push('\n');
    out
}

fn csv_err(e: csv::Error) -> Error {
    Error::Unavailable(format!("csv: {e}"))
}

/// Flat CSV: `section.map,label,…,coeff` per row, labels in text form.
pub fn to_csv(doc: &Value) -> Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let text = |l: &Value| -> String {
        match raw_label(l, &At::root()) {
            Ok(l) => l.to_string(),
            Err(_) => l.to_string(),
        }
    };
    let obj = doc.as_object().ok_or_else(|| Error::Unavailable("document is not an object".into()))?;
    for (section, v) in obj {
        match v {
            Value::String(s) => w.write_record([format!("file.{section}"), s.clone()]).map_err(csv_err),
            Value::Object(m) => {
                for (map, rows) in m {
                    let path = format!("{section}.{map}");
                    match rows {
                        Value::String(s) => w.write_record([path, s.clone()]).map_err(csv_err)?,
                        Value::Bool(b) => w.write_record([path, b.to_string()]).map_err(csv_err)?,
                        Value::Array(items) if map == "basis" => {
                            for l in items {
                                w.write_record([path.clone(), text(l)]).map_err(csv_err)?;
                            }
                        }
                        Value::Array(items) => {
                            for row in items {
                                let cells = row.as_array().map(Vec::as_slice).unwrap_or_default();
                                let mut rec = vec![path.clone()];
                                for (i, c) in cells.iter().enumerate() {
                                    rec.push(if i + 1 == cells.len() {
                                        c.as_str().map(str::to_string).unwrap_or_else(|| c.to_string())
                                    } else {
                                        text(c)
                                    });
                                }
                                w.write_record(rec).map_err(csv_err)?;
                            }
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Unavailable(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Unavailable(e.to_string()))
}

/// Loads a file by extension: `.csv` through [`csv_to_value`], else JSON.
pub fn load_path(path: &std::path::Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        load_value(&csv_to_value(&text)?)
    } else {
        load_json(&text)
    }
}

/// The default suite configuration for a command-line window.
pub fn suite_config(window: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        window,
        seed,
        ..SuiteConfig::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_text_round_trip() {
        for s in ["3", "-2", "(0,1)", "((0,1),(2,-3))"] {
            assert_eq!(parse_label(s).unwrap().to_string(), s);
        }
        assert!(parse_label("(0,").is_err());
        assert!(parse_label("x").is_err());
    }

    #[test]
    fn errors_point_at_the_entry() {
        let bad = r#"{"algebra": {"basis": [0, 1], "mul": [[0, 0, 0, "1"], [0, 1, 7, "1"]], "t1": [], "t2": []}}"#;
        match load_json(bad) {
            Err(Error::Parse { location, message }) => {
                assert_eq!(location, "/algebra/mul/1/2");
                assert!(message.contains("not declared"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
        match load_json("{\"group\": ") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 1"), "{location}"),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match load_json(r#"{"algebra": {"basis": [0], "mul": [[0, 0, 0, "1/0"]], "t1": [], "t2": []}}"#) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "/algebra/mul/0/3"),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn group_shorthand_table() {
        let doc = r#"{"group": {"name": "C2", "elements": ["e", "a"], "table": [["e", "a"], ["a", "e"]]}}"#;
        match load_json(doc).unwrap() {
            Loaded::Pairing(p) => assert!(p.is_finite()),
            Loaded::Algebra(_) => panic!("group shorthand gives a pairing"),
        }
        let not_group = r#"{"group": {"elements": ["e", "a"], "table": [["e", "e"], ["e", "e"]]}}"#;
        assert!(matches!(load_json(not_group), Err(Error::Parse { .. })));
    }

    #[test]
    fn pairing_export_round_trips() {
        let p = finite_group_pair(&Group::cyclic(2)).unwrap();
        let doc = pairing_file(&p).unwrap();
        let back = match load_value(&doc).unwrap() {
            Loaded::Pairing(q) => q,
            Loaded::Algebra(_) => panic!("pairing expected"),
        };
        assert_eq!(pairing_file(&back).unwrap(), doc);
        let csv = to_csv(&doc).unwrap();
        let again = csv_to_value(&csv).unwrap();
        match load_value(&again).unwrap() {
            Loaded::Pairing(q) => assert_eq!(pairing_file(&q).unwrap(), doc),
            Loaded::Algebra(_) => panic!("pairing expected"),
        }
    }
}
