//! File formats: the channel-spec document and the basis export.
//!
//! # Channel spec (JSON)
//!
//! ```json
//! {
//!   "d": 2,
//!   "n": 3,
//!   "kind": "kraus",
//!   "operators": [ [[[1, 0], [0, 0]], [[0, 0], [1, 0]]] ],
//!   "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
//!   "builder": { "name": "collective_damping", "params": { "p": 0.3 } }
//! }
//! ```
//!
//! A matrix is a list of rows, each entry an `[re, im]` pair. Exactly one of
//! `operators` and `builder` must be present. `hamiltonian` is only accepted
//! for `"lindblad"` and defaults to zero. Errors name the offending field
//! path, e.g. `operators[1][0][2]: expected [re, im] pair`.
//!
//! # Basis export (text)
//!
//! ```text
//! schur-basis d=<d> n=<n> columns=<N>
//! lambda=<p1,p2,...> Y=<y> weight=<c0,c1,...> w_index=<k>
//! <letters> <re> <im>
//! ...
//! ```
//!
//! One record per column in basis order, followed by its amplitudes with
//! magnitude at least `1e-14`, in increasing letter-string order. Letters are
//! single base-36 digits (`0-9a-z`), qudit 1 first; numbers use Rust's
//! shortest round-trip exponent form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::channels::{ChannelModel, ExampleChannel, KrausChannel, Lindbladian, SuperOperatorKind};
use crate::combinatorics::{Partition, WeightVector};
use crate::error::{Error, Result};
use crate::liouville::{index_to_letters, CMatrix, QuditOperator};
use crate::schur::SuperSchurBasis;

/// Amplitudes below this magnitude are not written.
pub const AMPLITUDE_CUTOFF: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub enum SpecSource {
    Explicit { operators: Vec<CMatrix>, hamiltonian: Option<CMatrix> },
    Builder(ExampleChannel),
}

/// A parsed channel-spec document.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec {
    pub d: usize,
    pub n: usize,
    pub kind: SuperOperatorKind,
    pub source: SpecSource,
}

fn perr(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Parse { path: path.into(), reason: reason.into() }
}

fn parse_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    let v = obj.get(key).ok_or_else(|| perr(key, "missing required field"))?;
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(key, format!("expected a nonnegative integer, found {v}")))
}

fn parse_matrix(v: &Value, path: &str, dim: usize) -> Result<CMatrix> {
    let rows = v.as_array().ok_or_else(|| perr(path, "expected a list of rows"))?;
    if rows.len() != dim {
        return Err(perr(path, format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (r, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{r}]");
        let entries = row.as_array().ok_or_else(|| perr(&rpath, "expected a list of entries"))?;
        if entries.len() != dim {
            return Err(perr(&rpath, format!("expected {dim} entries, found {}", entries.len())));
        }
        for (c, e) in entries.iter().enumerate() {
            let epath = format!("{rpath}[{c}]");
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| perr(&epath, "expected [re, im] pair"))?;
            let re = pair[0].as_f64().ok_or_else(|| perr(format!("{epath}[0]"), "expected a number"))?;
            let im = pair[1].as_f64().ok_or_else(|| perr(format!("{epath}[1]"), "expected a number"))?;
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

/// Parse a channel-spec document. Only the schema is checked here; physical
/// invariants are checked by [`ChannelSpec::build`].
pub fn parse_channel_spec(text: &str) -> Result<ChannelSpec> {
    let root: Value = serde_json::from_str(text).map_err(|e| perr("$", format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| perr("$", "expected an object"))?;
    for key in obj.keys() {
        if !["d", "n", "kind", "operators", "hamiltonian", "builder"].contains(&key.as_str()) {
            return Err(perr(key, "unknown field"));
        }
    }
    let d = parse_usize(obj, "d")?;
    let n = parse_usize(obj, "n")?;
    if d < 2 {
        return Err(perr("d", "local dimension must be at least 2"));
    }
    if n < 1 {
        return Err(perr("n", "qudit count must be at least 1"));
    }
    crate::liouville::liouville_dim(d, n).map_err(|e| perr("n", e.to_string()))?;
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("kraus") => SuperOperatorKind::Channel,
        Some("lindblad") => SuperOperatorKind::Generator,
        Some(other) => return Err(perr("kind", format!("expected \"kraus\" or \"lindblad\", found \"{other}\""))),
        None => return Err(perr("kind", "missing required string field")),
    };
    let hdim = d.pow(n as u32);

    let source = match (obj.get("operators"), obj.get("builder")) {
        (Some(_), Some(_)) => return Err(perr("builder", "give either operators or builder, not both")),
        (None, None) => return Err(perr("operators", "missing: give operators or builder")),
        (Some(ops), None) => {
            let list = ops.as_array().ok_or_else(|| perr("operators", "expected a list of matrices"))?;
            let operators = list
                .iter()
                .enumerate()
                .map(|(k, m)| parse_matrix(m, &format!("operators[{k}]"), hdim))
                .collect::<Result<Vec<_>>>()?;
            let hamiltonian = match obj.get("hamiltonian") {
                None | Some(Value::Null) => None,
                Some(h) => {
                    if kind != SuperOperatorKind::Generator {
                        return Err(perr("hamiltonian", "only allowed for kind \"lindblad\""));
                    }
                    Some(parse_matrix(h, "hamiltonian", hdim)?)
                }
            };
            SpecSource::Explicit { operators, hamiltonian }
        }
        (None, Some(b)) => {
            if obj.contains_key("hamiltonian") {
                return Err(perr("hamiltonian", "not allowed together with builder"));
            }
            let b = b.as_object().ok_or_else(|| perr("builder", "expected an object"))?;
            let name = b
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| perr("builder.name", "missing required string field"))?;
            let mut params = BTreeMap::new();
            if let Some(p) = b.get("params") {
                let p = p.as_object().ok_or_else(|| perr("builder.params", "expected an object"))?;
                for (k, v) in p {
                    let x = v.as_f64().ok_or_else(|| perr(format!("builder.params.{k}"), "expected a number"))?;
                    params.insert(k.clone(), x);
                }
            }
            let example = ExampleChannel::from_params(name, &params).map_err(|e| match e {
                Error::UnknownChannel(_) => {
                    perr("builder.name", format!("unknown builder '{name}'; known: {}", ExampleChannel::NAMES.join(", ")))
                }
                Error::InvalidParameter { name: p, reason } => perr(format!("builder.params.{p}"), reason),
                other => other,
            })?;
            if d != 2 {
                return Err(perr("d", "builders are defined for qubits (d = 2)"));
            }
            if example.kind() != kind {
                return Err(perr("kind", format!("builder '{name}' does not produce kind {:?}", kind)));
            }
            SpecSource::Builder(example)
        }
    };
    Ok(ChannelSpec { d, n, kind, source })
}

impl ChannelSpec {
    /// Construct the model, validating closure / Hermiticity / orthogonality.
    pub fn build(&self) -> Result<ChannelModel> {
        match &self.source {
            SpecSource::Builder(ex) => ex.build(self.n),
            SpecSource::Explicit { operators, hamiltonian } => {
                let ops = operators
                    .iter()
                    .map(|m| QuditOperator::new(self.d, self.n, m.clone()))
                    .collect::<Result<Vec<_>>>()?;
                match self.kind {
                    SuperOperatorKind::Channel => Ok(ChannelModel::Kraus(KrausChannel::new(self.d, self.n, ops)?)),
                    SuperOperatorKind::Generator => {
                        let h = match hamiltonian {
                            Some(h) => QuditOperator::new(self.d, self.n, h.clone())?,
                            None => QuditOperator::zeros(self.d, self.n),
                        };
                        Ok(ChannelModel::Lindblad(Lindbladian::new(self.d, self.n, h, ops)?))
                    }
                }
            }
        }
    }

    /// Serialize back to the JSON document form.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("d".into(), self.d.into());
        obj.insert("n".into(), self.n.into());
        let kind = match self.kind {
            SuperOperatorKind::Channel => "kraus",
            SuperOperatorKind::Generator => "lindblad",
        };
        obj.insert("kind".into(), kind.into());
        match &self.source {
            SpecSource::Explicit { operators, hamiltonian } => {
                obj.insert("operators".into(), Value::Array(operators.iter().map(matrix_to_json).collect()));
                if let Some(h) = hamiltonian {
                    obj.insert("hamiltonian".into(), matrix_to_json(h));
                }
            }
            SpecSource::Builder(ex) => {
                obj.insert("builder".into(), serde_json::to_value(ex).expect("builder serializes"));
            }
        }
        Value::Object(obj)
    }
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| serde_json::json!([m[(r, c)].re, m[(r, c)].im])).collect()))
            .collect(),
    )
}

fn letter_char(l: usize) -> char {
    std::char::from_digit(l as u32, 36).expect("letter below 36")
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Render the basis in the text export format.
pub fn write_basis(basis: &SuperSchurBasis) -> String {
    let (d, n) = (basis.d(), basis.n());
    let mut out = String::new();
    writeln!(out, "schur-basis d={d} n={n} columns={}", basis.dim()).unwrap();
    for (label, col) in basis.labels().iter().zip(basis.columns()) {
        writeln!(
            out,
            "lambda={} Y={} weight={} w_index={}",
            join(label.lambda.parts()),
            label.y,
            join(&label.weight.counts),
            label.w_within
        )
        .unwrap();
        for &(i, x) in &col.entries {
            if x.abs() < AMPLITUDE_CUTOFF {
                continue;
            }
            let letters: String = index_to_letters(i, d * d, n).into_iter().map(letter_char).collect();
            writeln!(out, "{letters} {:e} {:e}", x, 0.0f64).unwrap();
        }
    }
    out
}

/// A basis read back from the export format.
#[derive(Clone, Debug)]
pub struct BasisFile {
    pub d: usize,
    pub n: usize,
    pub labels: Vec<(Partition, usize, WeightVector, usize)>,
    pub unitary: CMatrix,
}

fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)).and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| perr(format!("line {line}"), format!("expected {key}=...")))
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split(',').map(|x| x.parse().map_err(|_| perr(format!("line {line}"), format!("bad integer '{x}'")))).collect()
}

pub fn read_basis(text: &str) -> Result<BasisFile> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or_else(|| perr("line 1", "empty file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("schur-basis") {
        return Err(perr(format!("line {ln}"), "expected 'schur-basis' header"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| perr(format!("line {ln}"), format!("bad integer '{s}'")));
    let d = num(field(toks.next(), "d", ln)?)?;
    let n = num(field(toks.next(), "n", ln)?)?;
    let cols = num(field(toks.next(), "columns", ln)?)?;
    let dim = crate::liouville::liouville_dim(d, n)?;
    if cols != dim {
        return Err(perr(format!("line {ln}"), format!("{cols} columns for Liouville dimension {dim}")));
    }
    let mut unitary = CMatrix::zeros(dim, dim);
    let mut labels = Vec::with_capacity(dim);
    let q = d * d;
    for (ln, line) in lines {
        if line.starts_with("lambda=") {
            let mut t = line.split_whitespace();
            let lambda = Partition::new(parse_list(field(t.next(), "lambda", ln)?, ln)?)?;
            let y = num(field(t.next(), "Y", ln)?)?;
            let weight = WeightVector::new(parse_list(field(t.next(), "weight", ln)?, ln)?);
            let w = num(field(t.next(), "w_index", ln)?)?;
            labels.push((lambda, y, weight, w));
            continue;
        }
        let col = labels.len().checked_sub(1).ok_or_else(|| perr(format!("line {ln}"), "amplitude before any column record"))?;
        if col >= dim {
            return Err(perr(format!("line {ln}"), "more columns than declared"));
        }
        let mut t = line.split_whitespace();
        let (Some(letters), Some(re), Some(im), None) = (t.next(), t.next(), t.next(), t.next()) else {
            return Err(perr(format!("line {ln}"), "expected '<letters> <re> <im>'"));
        };
        if letters.chars().count() != n {
            return Err(perr(format!("line {ln}"), format!("letter string '{letters}' is not of length {n}")));
        }
        let mut index = 0;
        for ch in letters.chars() {
            let l = ch.to_digit(36).filter(|&l| (l as usize) < q).ok_or_else(|| perr(format!("line {ln}"), format!("bad letter '{ch}'")))?;
            index = index * q + l as usize;
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| perr(format!("line {ln}"), format!("bad number '{s}'")));
        unitary[(index, col)] = Complex64::new(float(re)?, float(im)?);
    }
    if labels.len() != dim {
        return Err(perr("$", format!("{} column records, expected {dim}", labels.len())));
    }
    Ok(BasisFile { d, n, labels, unitary })
}
