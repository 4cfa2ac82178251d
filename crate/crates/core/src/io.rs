//! Text formats: lattice files, value CSVs, support lists, formal contexts.
//!
//! Lattice text format:
//!
//! ```text
//! # comment
//! elem a
//! elem b
//! cover b a
//! ```
//!
//! JSON form: `{"elements":["a","b"],"covers":[["b","a"]]}`.
//! Value CSVs have the header `element,value`; complex values are written
//! as `re+imi`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::concepts::Context;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Debug, Serialize, Deserialize)]
struct LatticeJson {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

/// How to treat input edges that are implied by other edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgePolicy {
    /// Reject them with `NonCoverEdge`.
    #[default]
    Strict,
    /// Reduce the edges to the cover relation.
    Reduce,
}

fn build(elements: &[String], covers: &[(String, String)], policy: EdgePolicy) -> Result<Lattice> {
    match policy {
        EdgePolicy::Strict => Lattice::from_covers(elements, covers),
        EdgePolicy::Reduce => Lattice::from_edges_reduced(elements, covers),
    }
}

pub fn parse_lattice_text(text: &str, policy: EdgePolicy) -> Result<Lattice> {
    let mut elements = Vec::new();
    let mut covers = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["elem", id] => elements.push(id.to_string()),
            ["cover", upper, lower] => covers.push((upper.to_string(), lower.to_string())),
            [kw, ..] if *kw == "elem" || *kw == "cover" => {
                return Err(Error::parse(i + 1, format!("wrong number of fields for `{kw}`")))
            }
            [kw, ..] => return Err(Error::parse(i + 1, format!("unknown directive `{kw}`"))),
            [] => unreachable!(),
        }
    }
    build(&elements, &covers, policy)
}

pub fn parse_lattice_json(text: &str, policy: EdgePolicy) -> Result<Lattice> {
    let doc: LatticeJson = serde_json::from_str(text)?;
    build(&doc.elements, &doc.covers, policy)
}

/// Parses either format, picking JSON when the text starts with `{`.
pub fn parse_lattice(text: &str, policy: EdgePolicy) -> Result<Lattice> {
    if text.trim_start().starts_with('{') {
        parse_lattice_json(text, policy)
    } else {
        parse_lattice_text(text, policy)
    }
}

pub fn read_lattice(path: impl AsRef<Path>, policy: EdgePolicy) -> Result<Lattice> {
    parse_lattice(&std::fs::read_to_string(path)?, policy)
}

/// Lattice text format; `notes[i]`, when given, is appended as a comment to
/// the `elem` line of element `i`.
pub fn lattice_to_text(lattice: &Lattice, notes: Option<&[String]>) -> String {
    let mut out = String::new();
    for (i, id) in lattice.ids().iter().enumerate() {
        match notes.and_then(|n| n.get(i)) {
            Some(note) => writeln!(out, "elem {id}  # {note}"),
            None => writeln!(out, "elem {id}"),
        }
        .unwrap();
    }
    for (u, l) in lattice.covers_by_id() {
        writeln!(out, "cover {u} {l}").unwrap();
    }
    out
}

pub fn lattice_to_json(lattice: &Lattice) -> String {
    let doc = LatticeJson {
        elements: lattice.ids().to_vec(),
        covers: lattice
            .covers_by_id()
            .into_iter()
            .map(|(u, l)| (u.to_string(), l.to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// `%.<precision>g` formatting.
pub fn fmt_g(x: f64, precision: usize) -> String {
    let p = precision.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Scalars that can be written to and read from value CSVs.
pub trait CsvScalar: Sized {
    fn format(&self, precision: usize) -> String;
    fn parse(text: &str) -> std::result::Result<Self, String>;
}

impl CsvScalar for f64 {
    fn format(&self, precision: usize) -> String {
        fmt_g(*self, precision)
    }
    fn parse(text: &str) -> std::result::Result<Self, String> {
        let z = parse_complex(text)?;
        if z.im != 0.0 {
            return Err(format!("expected a real value, got `{text}`"));
        }
        Ok(z.re)
    }
}

impl CsvScalar for Complex64 {
    fn format(&self, precision: usize) -> String {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        format!(
            "{}{sign}{}i",
            fmt_g(self.re, precision),
            fmt_g(self.im.abs(), precision)
        )
    }
    fn parse(text: &str) -> std::result::Result<Self, String> {
        parse_complex(text)
    }
}

/// Parses `x`, `yi`, or `x+yi` / `x-yi`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let t = text.trim();
    let bad = || format!("invalid number `{text}`");
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        s => num(s),
    };
    match split {
        Some(k) => Ok(Complex64::new(num(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Writes `element,value` rows in topological order.
pub fn values_to_csv<T: CsvScalar>(lattice: &Lattice, values: &[T], precision: usize) -> String {
    write_csv(
        std::iter::once(vec!["element".to_string(), "value".to_string()]).chain(
            lattice
                .ids()
                .iter()
                .zip(values)
                .map(|(id, v)| vec![id.clone(), v.format(precision)]),
        ),
    )
}

/// Serializes rows with standard quoting (ids may contain commas).
fn write_csv(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Reads an `element,value` CSV; every element must appear exactly once.
pub fn parse_values<T: CsvScalar + Clone>(text: &str, lattice: &Lattice) -> Result<Vec<T>> {
    let rows = parse_pairs(text)?;
    let mut values: Vec<Option<T>> = vec![None; lattice.len()];
    for (line, id, raw) in rows {
        let i = lattice.index_of(&id)?;
        let v = T::parse(&raw).map_err(|m| Error::parse(line, m))?;
        if values[i].replace(v).is_some() {
            return Err(Error::parse(line, format!("duplicate row for `{id}`")));
        }
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        return Err(Error::MissingValue(lattice.id(missing).to_string()));
    }
    Ok(values.into_iter().map(Option::unwrap).collect())
}

pub fn read_values<T: CsvScalar + Clone>(path: impl AsRef<Path>, lattice: &Lattice) -> Result<Vec<T>> {
    parse_values(&std::fs::read_to_string(path)?, lattice)
}

/// Two-column CSV rows `(line, key, value)` after the header.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(Error::parse(line, format!("expected 2 fields, found {}", record.len())));
        }
        rows.push((line, record[0].to_string(), record[1].to_string()));
    }
    Ok(rows)
}

/// One element id per line; blank lines and `#` comments are skipped.
pub fn parse_id_list(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}

pub fn id_list_to_text<S: AsRef<str>>(ids: &[S]) -> String {
    ids.iter().map(|s| format!("{}\n", s.as_ref())).collect()
}

/// Context CSV: header row of attribute names (first cell ignored), then
/// one row per object; cells are `1`, `×`, `x`, `X` (incident) or `0`/blank.
pub fn parse_context(text: &str) -> Result<Context> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let attributes: Vec<String> = reader.headers()?.iter().skip(1).map(String::from).collect();
    let mut objects = Vec::new();
    let mut incidence = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() > attributes.len() + 1 {
            return Err(Error::parse(line, "more cells than attributes"));
        }
        objects.push(record[0].to_string());
        let mut row = vec![false; attributes.len()];
        for (j, cell) in record.iter().skip(1).enumerate() {
            row[j] = match cell {
                "1" | "×" | "x" | "X" => true,
                "0" | "" => false,
                other => return Err(Error::parse(line, format!("invalid incidence cell `{other}`"))),
            };
        }
        incidence.push(row);
    }
    Context::new(objects, attributes, &incidence)
}

pub fn context_to_csv(ctx: &Context) -> String {
    let header = std::iter::once("object".to_string()).chain(ctx.attributes().iter().cloned());
    let rows = ctx.objects().iter().enumerate().map(|(o, name)| {
        std::iter::once(name.clone())
            .chain((0..ctx.attributes().len()).map(|a| if ctx.has(o, a) { "1" } else { "" }.to_string()))
            .collect()
    });
    write_csv(std::iter::once(header.collect()).chain(rows))
}

/// `object,value` label CSV into a name-keyed list.
pub fn parse_labels(text: &str) -> Result<Vec<(String, f64)>> {
    parse_pairs(text)?
        .into_iter()
        .map(|(line, k, v)| {
            let x = <f64 as CsvScalar>::parse(&v).map_err(|m| Error::parse(line, m))?;
            Ok((k, x))
        })
        .collect()
}
