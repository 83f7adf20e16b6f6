//! The line-oriented structure-definition format and its parser/emitter.
//!
//! ```text
//! # comment
//! name my-setup
//! signature 2 3                     # n d
//! theta -1/2 xi1 xi2 theta3         # additive term of Theta
//! tensor J term 1 theta1 theta2     # function-form tensor, additive term
//! tensor I matrix                   # matrix-form tensor: 2d rows follow
//! row x1 0 0 0
//! ...
//! endmatrix
//! task T-04 I=I k=4
//! task classify I=I J=J
//! task courant
//! task hierarchy J=J I=I n=3 k=3
//! expect courant true
//! expect class I=I J=J poisson-nijenhuis
//! expect eta J 1/4
//! expect nijenhuis I true
//! expect poisson J true
//! ```
//!
//! Coefficients are exact rationals `p/q`; matrix entries are compact
//! polynomials in the base coordinates (`1/2*x1^2-3`). Emission is
//! deterministic and `emit . parse` is idempotent.

use crate::algebra::{format_rat, Generator, Rat, Signature, SuperPolynomial};
use crate::courant::PreCourant;
use crate::error::{Error, Result};
use crate::tensor::{PairClass, Tensor, TensorFunction};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum TensorDef {
    Terms(Vec<(Rat, Vec<Generator>)>),
    Matrix(Vec<Vec<SuperPolynomial>>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Identity {
        id: String,
        i: Option<String>,
        j: Option<String>,
        bounds: BTreeMap<String, u32>,
    },
    Classify {
        i: String,
        j: String,
    },
    Courant,
    Hierarchy {
        j: String,
        i: String,
        n: Option<u32>,
        k: Option<u32>,
    },
    Expect(Expectation),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Courant(bool),
    Class {
        i: String,
        j: String,
        class: PairClass,
    },
    Eta {
        tensor: String,
        eta: Option<Rat>,
    },
    Nijenhuis {
        tensor: String,
        value: bool,
    },
    Poisson {
        tensor: String,
        value: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetupDefinition {
    pub name: String,
    pub signature: Signature,
    pub theta_terms: Vec<(Rat, Vec<Generator>)>,
    pub tensors: Vec<(String, TensorDef)>,
    pub tasks: Vec<Task>,
}

/// A definition with its polynomials assembled.
#[derive(Debug, Clone)]
pub struct BuiltSetup {
    pub name: String,
    pub signature: Signature,
    pub theta: PreCourant,
    pub tensors: Vec<(String, Tensor)>,
    pub tasks: Vec<Task>,
}

impl BuiltSetup {
    pub fn tensor(&self, name: &str) -> Result<&Tensor> {
        self.tensors
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
            .ok_or_else(|| Error::UnknownTensor(name.to_string()))
    }
}

impl SetupDefinition {
    pub fn parse(text: &str) -> Result<SetupDefinition> {
        Parser::new(text).run()
    }

    pub fn build(&self) -> Result<BuiltSetup> {
        let sig = self.signature;
        let theta_poly = SuperPolynomial::normalize(sig, &to_raw(&self.theta_terms))?;
        let theta = PreCourant::new(theta_poly)?;
        let mut tensors = Vec::new();
        for (name, def) in &self.tensors {
            let tensor = match def {
                TensorDef::Terms(terms) => {
                    let poly = SuperPolynomial::normalize(sig, &to_raw(terms))?;
                    Tensor::Skew(TensorFunction::new(poly)?)
                }
                TensorDef::Matrix(rows) => {
                    let entries: Vec<SuperPolynomial> =
                        rows.iter().flatten().cloned().collect();
                    Tensor::General(crate::tensor::Endomorphism::from_entries(sig, entries)?)
                }
            };
            tensors.push((name.clone(), tensor));
        }
        // tasks may only reference declared tensors
        for task in &self.tasks {
            for name in task_tensor_names(task) {
                if !tensors.iter().any(|(n, _)| n == &name) {
                    return Err(Error::UnknownTensor(name));
                }
            }
        }
        Ok(BuiltSetup {
            name: self.name.clone(),
            signature: sig,
            theta,
            tensors,
            tasks: self.tasks.clone(),
        })
    }

    /// Deterministic rendering; `emit(parse(emit(parse(x))))` is byte-stable.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name {}", self.name);
        let _ = writeln!(out, "signature {} {}", self.signature.n, self.signature.d);
        for (coeff, word) in &self.theta_terms {
            let _ = writeln!(out, "theta {}", render_term(coeff, word));
        }
        for (name, def) in &self.tensors {
            match def {
                TensorDef::Terms(terms) => {
                    for (coeff, word) in terms {
                        let _ = writeln!(out, "tensor {name} term {}", render_term(coeff, word));
                    }
                }
                TensorDef::Matrix(rows) => {
                    let _ = writeln!(out, "tensor {name} matrix");
                    for row in rows {
                        let rendered: Vec<String> =
                            row.iter().map(render_poly_compact).collect();
                        let _ = writeln!(out, "row {}", rendered.join(" "));
                    }
                    let _ = writeln!(out, "endmatrix");
                }
            }
        }
        for task in &self.tasks {
            let _ = writeln!(out, "{}", render_task(task));
        }
        out
    }
}

fn to_raw(terms: &[(Rat, Vec<Generator>)]) -> Vec<(Vec<Generator>, Rat)> {
    terms
        .iter()
        .map(|(c, w)| (w.clone(), c.clone()))
        .collect()
}

fn task_tensor_names(task: &Task) -> Vec<String> {
    match task {
        Task::Identity { i, j, .. } => i.iter().chain(j.iter()).cloned().collect(),
        Task::Classify { i, j } => vec![i.clone(), j.clone()],
        Task::Courant => vec![],
        Task::Hierarchy { j, i, .. } => vec![j.clone(), i.clone()],
        Task::Expect(e) => match e {
            Expectation::Courant(_) => vec![],
            Expectation::Class { i, j, .. } => vec![i.clone(), j.clone()],
            Expectation::Eta { tensor, .. }
            | Expectation::Nijenhuis { tensor, .. }
            | Expectation::Poisson { tensor, .. } => vec![tensor.clone()],
        },
    }
}

fn render_term(coeff: &Rat, word: &[Generator]) -> String {
    let gens: Vec<String> = word.iter().map(|g| g.to_string()).collect();
    if gens.is_empty() {
        format_rat(coeff)
    } else {
        format!("{} {}", format_rat(coeff), gens.join(" "))
    }
}

fn render_task(task: &Task) -> String {
    match task {
        Task::Identity { id, i, j, bounds } => {
            let mut s = format!("task {id}");
            if let Some(i) = i {
                let _ = write!(s, " I={i}");
            }
            if let Some(j) = j {
                let _ = write!(s, " J={j}");
            }
            for (k, v) in bounds {
                let _ = write!(s, " {k}={v}");
            }
            s
        }
        Task::Classify { i, j } => format!("task classify I={i} J={j}"),
        Task::Courant => "task courant".to_string(),
        Task::Hierarchy { j, i, n, k } => {
            let mut s = format!("task hierarchy J={j} I={i}");
            if let Some(n) = n {
                let _ = write!(s, " n={n}");
            }
            if let Some(k) = k {
                let _ = write!(s, " k={k}");
            }
            s
        }
        Task::Expect(e) => match e {
            Expectation::Courant(v) => format!("expect courant {v}"),
            Expectation::Class { i, j, class } => {
                format!("expect class I={i} J={j} {class}")
            }
            Expectation::Eta { tensor, eta } => match eta {
                Some(r) => format!("expect eta {tensor} {}", format_rat(r)),
                None => format!("expect eta {tensor} none"),
            },
            Expectation::Nijenhuis { tensor, value } => {
                format!("expect nijenhuis {tensor} {value}")
            }
            Expectation::Poisson { tensor, value } => {
                format!("expect poisson {tensor} {value}")
            }
        },
    }
}

/// Compact polynomial rendering used for matrix entries (no spaces).
fn render_poly_compact(p: &SuperPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        let mut factors: Vec<String> = Vec::new();
        for &(i, e) in m.x_exponents() {
            factors.push(if e == 1 {
                format!("x{i}")
            } else {
                format!("x{i}^{e}")
            });
        }
        let coeff = format_rat(c);
        let body = if factors.is_empty() {
            coeff
        } else if c == &Rat::from_integer(1.into()) {
            factors.join("*")
        } else if c == &Rat::from_integer((-1).into()) {
            format!("-{}", factors.join("*"))
        } else {
            format!("{coeff}*{}", factors.join("*"))
        };
        if idx == 0 {
            out.push_str(&body);
        } else if let Some(stripped) = body.strip_prefix('-') {
            out.push('-');
            out.push_str(stripped);
        } else {
            out.push('+');
            out.push_str(&body);
        }
    }
    out
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .collect();
        Parser { lines, pos: 0 }
    }

    fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn run(mut self) -> Result<SetupDefinition> {
        let mut name = String::from("setup");
        let mut signature: Option<Signature> = None;
        let mut theta_terms = Vec::new();
        let mut tensors: Vec<(String, TensorDef)> = Vec::new();
        let mut tasks = Vec::new();

        while self.pos < self.lines.len() {
            let (line_no, raw) = self.lines[self.pos];
            self.pos += 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "name" => {
                    if tokens.len() != 2 {
                        return Err(Self::err(line_no, 1, "expected: name <identifier>"));
                    }
                    name = tokens[1].to_string();
                }
                "signature" => {
                    if tokens.len() != 3 {
                        return Err(Self::err(line_no, 1, "expected: signature <n> <d>"));
                    }
                    let n = tokens[1].parse::<u8>().map_err(|_| {
                        Self::err(line_no, col_of(raw, tokens[1]), "bad base count")
                    })?;
                    let d = tokens[2].parse::<u8>().map_err(|_| {
                        Self::err(line_no, col_of(raw, tokens[2]), "bad odd rank")
                    })?;
                    signature =
                        Some(Signature::new(n, d).map_err(|e| Self::err(line_no, 1, e.to_string()))?);
                }
                "theta" => {
                    let sig = signature
                        .ok_or_else(|| Self::err(line_no, 1, "signature must come first"))?;
                    theta_terms.push(parse_term(&tokens[1..], sig, line_no, raw)?);
                }
                "tensor" => {
                    let sig = signature
                        .ok_or_else(|| Self::err(line_no, 1, "signature must come first"))?;
                    if tokens.len() < 3 {
                        return Err(Self::err(
                            line_no,
                            1,
                            "expected: tensor <name> term ... | tensor <name> matrix",
                        ));
                    }
                    let tname = tokens[1].to_string();
                    match tokens[2] {
                        "term" => {
                            let term = parse_term(&tokens[3..], sig, line_no, raw)?;
                            match tensors.iter_mut().find(|(n, _)| n == &tname) {
                                Some((_, TensorDef::Terms(list))) => list.push(term),
                                Some((_, TensorDef::Matrix(_))) => {
                                    return Err(Self::err(
                                        line_no,
                                        1,
                                        format!("tensor {tname} already defined as a matrix"),
                                    ))
                                }
                                None => tensors.push((tname, TensorDef::Terms(vec![term]))),
                            }
                        }
                        "matrix" => {
                            if tensors.iter().any(|(n, _)| n == &tname) {
                                return Err(Self::err(
                                    line_no,
                                    1,
                                    format!("tensor {tname} defined twice"),
                                ));
                            }
                            let rows = self.parse_matrix(sig, line_no)?;
                            tensors.push((tname, TensorDef::Matrix(rows)));
                        }
                        other => {
                            return Err(Self::err(
                                line_no,
                                col_of(raw, other),
                                format!("unknown tensor form '{other}'"),
                            ))
                        }
                    }
                }
                "task" => tasks.push(parse_task(&tokens[1..], line_no, raw)?),
                "expect" => tasks.push(Task::Expect(parse_expect(&tokens[1..], line_no, raw)?)),
                other => {
                    return Err(Self::err(
                        line_no,
                        1,
                        format!("unknown directive '{other}'"),
                    ))
                }
            }
        }
        let signature = signature
            .ok_or_else(|| Self::err(self.lines.len().max(1), 1, "missing signature line"))?;
        Ok(SetupDefinition {
            name,
            signature,
            theta_terms,
            tensors,
            tasks,
        })
    }

    fn parse_matrix(&mut self, sig: Signature, start_line: usize) -> Result<Vec<Vec<SuperPolynomial>>> {
        let size = 2 * sig.d as usize;
        let mut rows = Vec::new();
        loop {
            if self.pos >= self.lines.len() {
                return Err(Self::err(start_line, 1, "matrix not closed by 'endmatrix'"));
            }
            let (line_no, raw) = self.lines[self.pos];
            self.pos += 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "endmatrix" {
                break;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] != "row" {
                return Err(Self::err(line_no, 1, "expected 'row ...' or 'endmatrix'"));
            }
            if tokens.len() != size + 1 {
                return Err(Self::err(
                    line_no,
                    1,
                    format!("row needs {size} entries, got {}", tokens.len() - 1),
                ));
            }
            let mut row = Vec::with_capacity(size);
            for entry in &tokens[1..] {
                row.push(parse_poly_compact(entry, sig, line_no, col_of(raw, entry))?);
            }
            rows.push(row);
        }
        if rows.len() != size {
            return Err(Self::err(
                start_line,
                1,
                format!("matrix needs {size} rows, got {}", rows.len()),
            ));
        }
        Ok(rows)
    }
}

fn col_of(raw: &str, token: &str) -> usize {
    raw.find(token).map(|i| i + 1).unwrap_or(1)
}

fn parse_rat(s: &str, line: usize, col: usize) -> Result<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num)
        .map_err(|_| Parser::err(line, col, format!("bad rational '{s}'")))?;
    let d = BigInt::from_str(den)
        .map_err(|_| Parser::err(line, col, format!("bad rational '{s}'")))?;
    if d.is_zero() {
        return Err(Parser::err(line, col, "zero denominator"));
    }
    Ok(Rat::new(n, d))
}

fn parse_generator(s: &str, sig: Signature, line: usize, col: usize) -> Result<Generator> {
    let (kind, idx) = s.split_at(
        s.find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Parser::err(line, col, format!("bad generator '{s}'")))?,
    );
    let i: u8 = idx
        .parse()
        .map_err(|_| Parser::err(line, col, format!("bad generator index in '{s}'")))?;
    let g = match kind {
        "x" => Generator::X(i),
        "p" => Generator::P(i),
        "xi" => Generator::Xi(i),
        "theta" => Generator::Theta(i),
        _ => return Err(Parser::err(line, col, format!("unknown generator '{s}'"))),
    };
    if !g.in_range(sig) {
        return Err(Parser::err(
            line,
            col,
            format!(
                "generator {s} out of range for signature ({}, {})",
                sig.n, sig.d
            ),
        ));
    }
    Ok(g)
}

fn parse_term(
    tokens: &[&str],
    sig: Signature,
    line: usize,
    raw: &str,
) -> Result<(Rat, Vec<Generator>)> {
    if tokens.is_empty() {
        return Err(Parser::err(line, 1, "term needs a coefficient"));
    }
    let coeff = parse_rat(tokens[0], line, col_of(raw, tokens[0]))?;
    let mut word = Vec::new();
    for t in &tokens[1..] {
        word.push(parse_generator(t, sig, line, col_of(raw, t))?);
    }
    Ok((coeff, word))
}

/// Compact x-polynomial: `1/2*x1^2*x2-3+x1`.
fn parse_poly_compact(s: &str, sig: Signature, line: usize, col: usize) -> Result<SuperPolynomial> {
    let mut acc = SuperPolynomial::zero(sig);
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut sign = 1i64;
    if bytes.is_empty() {
        return Err(Parser::err(line, col, "empty polynomial"));
    }
    while i < bytes.len() {
        // optional sign
        if bytes[i] == b'+' {
            sign = 1;
            i += 1;
        } else if bytes[i] == b'-' {
            sign = -1;
            i += 1;
        }
        // one term: factors separated by '*'
        let mut coeff = Rat::from_integer(sign.into());
        let mut word: Vec<Generator> = Vec::new();
        let mut factors = 0usize;
        loop {
            let start = i;
            if i < bytes.len() && bytes[i].is_ascii_digit() {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                    i += 1;
                }
                coeff *= parse_rat(&s[start..i], line, col)?;
                factors += 1;
            } else if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                let idx_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if idx_start == i {
                    return Err(Parser::err(line, col, format!("bad entry '{s}'")));
                }
                let idx: u8 = s[idx_start..i]
                    .parse()
                    .map_err(|_| Parser::err(line, col, format!("bad entry '{s}'")))?;
                let mut exp = 1u32;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let e_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = s[e_start..i]
                        .parse()
                        .map_err(|_| Parser::err(line, col, format!("bad exponent in '{s}'")))?;
                }
                let g = Generator::X(idx);
                if !g.in_range(sig) {
                    return Err(Parser::err(line, col, format!("x{idx} out of range")));
                }
                for _ in 0..exp {
                    word.push(g);
                }
                factors += 1;
            } else {
                return Err(Parser::err(line, col, format!("bad entry '{s}'")));
            }
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                continue;
            }
            break;
        }
        if factors == 0 {
            return Err(Parser::err(line, col, format!("bad entry '{s}'")));
        }
        let term = SuperPolynomial::normalize(sig, &[(word, coeff)])?;
        acc = acc.add(&term)?;
        sign = 1;
    }
    Ok(acc)
}

fn parse_kv(token: &str) -> Option<(&str, &str)> {
    token.split_once('=')
}

fn parse_task(tokens: &[&str], line: usize, raw: &str) -> Result<Task> {
    if tokens.is_empty() {
        return Err(Parser::err(line, 1, "empty task"));
    }
    match tokens[0] {
        "classify" => {
            let mut i = None;
            let mut j = None;
            for t in &tokens[1..] {
                match parse_kv(t) {
                    Some(("I", v)) => i = Some(v.to_string()),
                    Some(("J", v)) => j = Some(v.to_string()),
                    _ => {
                        return Err(Parser::err(
                            line,
                            col_of(raw, t),
                            "classify takes I=<name> J=<name>",
                        ))
                    }
                }
            }
            match (i, j) {
                (Some(i), Some(j)) => Ok(Task::Classify { i, j }),
                _ => Err(Parser::err(line, 1, "classify needs both I= and J=")),
            }
        }
        "courant" => Ok(Task::Courant),
        "hierarchy" => {
            let mut i = None;
            let mut j = None;
            let mut n = None;
            let mut k = None;
            for t in &tokens[1..] {
                match parse_kv(t) {
                    Some(("I", v)) => i = Some(v.to_string()),
                    Some(("J", v)) => j = Some(v.to_string()),
                    Some(("n", v)) => {
                        n = Some(v.parse().map_err(|_| {
                            Parser::err(line, col_of(raw, t), "bad bound")
                        })?)
                    }
                    Some(("k", v)) => {
                        k = Some(v.parse().map_err(|_| {
                            Parser::err(line, col_of(raw, t), "bad bound")
                        })?)
                    }
                    _ => return Err(Parser::err(line, col_of(raw, t), "bad hierarchy option")),
                }
            }
            match (j, i) {
                (Some(j), Some(i)) => Ok(Task::Hierarchy { j, i, n, k }),
                _ => Err(Parser::err(line, 1, "hierarchy needs J=<name> I=<name>")),
            }
        }
        id if id.starts_with("T-") => {
            let mut i = None;
            let mut j = None;
            let mut bounds = BTreeMap::new();
            for t in &tokens[1..] {
                match parse_kv(t) {
                    Some(("I", v)) => i = Some(v.to_string()),
                    Some(("J", v)) => j = Some(v.to_string()),
                    Some((key @ ("k" | "m" | "n" | "s" | "t"), v)) => {
                        let val: u32 = v.parse().map_err(|_| {
                            Parser::err(line, col_of(raw, t), "bad bound value")
                        })?;
                        bounds.insert(key.to_string(), val);
                    }
                    _ => return Err(Parser::err(line, col_of(raw, t), "bad task option")),
                }
            }
            Ok(Task::Identity {
                id: id.to_string(),
                i,
                j,
                bounds,
            })
        }
        other => Err(Parser::err(
            line,
            col_of(raw, other),
            format!("unknown task '{other}'"),
        )),
    }
}

fn parse_bool(s: &str, line: usize, col: usize) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Parser::err(line, col, format!("expected true|false, got '{s}'"))),
    }
}

fn parse_expect(tokens: &[&str], line: usize, raw: &str) -> Result<Expectation> {
    if tokens.is_empty() {
        return Err(Parser::err(line, 1, "empty expect"));
    }
    match tokens[0] {
        "courant" => {
            let v = tokens
                .get(1)
                .ok_or_else(|| Parser::err(line, 1, "expect courant <true|false>"))?;
            Ok(Expectation::Courant(parse_bool(v, line, col_of(raw, v))?))
        }
        "class" => {
            let mut i = None;
            let mut j = None;
            let mut class = None;
            for t in &tokens[1..] {
                if let Some(("I", v)) = parse_kv(t) {
                    i = Some(v.to_string());
                } else if let Some(("J", v)) = parse_kv(t) {
                    j = Some(v.to_string());
                } else {
                    class = PairClass::parse(t);
                    if class.is_none() {
                        return Err(Parser::err(
                            line,
                            col_of(raw, t),
                            format!("unknown pair class '{t}'"),
                        ));
                    }
                }
            }
            match (i, j, class) {
                (Some(i), Some(j), Some(class)) => Ok(Expectation::Class { i, j, class }),
                _ => Err(Parser::err(
                    line,
                    1,
                    "expect class needs I=, J= and a pair class",
                )),
            }
        }
        "eta" => {
            if tokens.len() != 3 {
                return Err(Parser::err(line, 1, "expect eta <tensor> <p/q|none>"));
            }
            let eta = if tokens[2] == "none" {
                None
            } else {
                Some(parse_rat(tokens[2], line, col_of(raw, tokens[2]))?)
            };
            Ok(Expectation::Eta {
                tensor: tokens[1].to_string(),
                eta,
            })
        }
        "nijenhuis" => {
            if tokens.len() != 3 {
                return Err(Parser::err(line, 1, "expect nijenhuis <tensor> <true|false>"));
            }
            Ok(Expectation::Nijenhuis {
                tensor: tokens[1].to_string(),
                value: parse_bool(tokens[2], line, col_of(raw, tokens[2]))?,
            })
        }
        "poisson" => {
            if tokens.len() != 3 {
                return Err(Parser::err(line, 1, "expect poisson <tensor> <true|false>"));
            }
            Ok(Expectation::Poisson {
                tensor: tokens[1].to_string(),
                value: parse_bool(tokens[2], line, col_of(raw, tokens[2]))?,
            })
        }
        other => Err(Parser::err(
            line,
            col_of(raw, other),
            format!("unknown expectation '{other}'"),
        )),
    }
}
