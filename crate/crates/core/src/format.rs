//! Text formats.
//!
//! ```text
//! # comment
//! vars: 3
//! ideal: x1^2*x2, x2*x3
//! u: x3^2
//! sequence: x1^2, x2*x3
//! decomposition:
//! 1 K[x2, x3]
//! x1 K[x1]
//! filtration:
//! x1 : x1, x2
//! 1 : x1
//! ```
//!
//! Monomials are `*`-joined factors `x<i>` or `x<i>^<e>`, or `1`. Prime
//! variable lists use `0` for the zero prime. Whitespace is ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::filtrations::FiltrationStep;
use crate::monomial::{Monomial, MonomialIdeal, MonomialPrime};
use crate::stanley::StanleySpace;

/// Everything a command may read from one input file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProblemFile {
    pub ambient: usize,
    pub ideal: MonomialIdeal,
    pub u: Option<Monomial>,
    pub sequence: Option<Vec<Monomial>>,
    pub decomposition: Option<Vec<StanleySpace>>,
    pub filtration: Option<Vec<FiltrationStep>>,
}

impl ProblemFile {
    pub fn new(ideal: MonomialIdeal) -> Self {
        ProblemFile {
            ambient: ideal.ambient(),
            ideal,
            u: None,
            sequence: None,
            decomposition: None,
            filtration: None,
        }
    }
}

#[derive(Clone, Copy)]
struct Span {
    line: usize,
    column: usize,
}

impl Span {
    fn err(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn advance(self, by: usize) -> Span {
        Span {
            line: self.line,
            column: self.column + by,
        }
    }
}

fn parse_var(text: &str, ambient: usize, at: Span) -> Result<usize> {
    let digits = text
        .strip_prefix('x')
        .ok_or_else(|| at.err(format!("expected a variable x<i>, found `{text}`")))?;
    let index: usize = digits
        .parse()
        .map_err(|_| at.err(format!("bad variable index `{digits}`")))?;
    if index == 0 || index > ambient {
        return Err(at.err(format!("unknown variable x{index} (vars: {ambient})")));
    }
    Ok(index - 1)
}

fn parse_monomial_at(text: &str, ambient: usize, at: Span) -> Result<Monomial> {
    let trimmed = text.trim();
    let at = at.advance(text.len() - text.trim_start().len());
    if trimmed.is_empty() {
        return Err(at.err("expected a monomial"));
    }
    if trimmed == "1" {
        return Ok(Monomial::one(ambient));
    }
    let mut exps = vec![0u32; ambient];
    let mut offset = 0;
    for factor in trimmed.split('*') {
        let here = at.advance(offset + factor.len() - factor.trim_start().len());
        offset += factor.len() + 1;
        let factor = factor.trim();
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => {
                let e: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| here.err(format!("bad exponent in `{factor}`")))?;
                (v.trim(), e)
            }
            None => (factor, 1),
        };
        let v = parse_var(var, ambient, here)?;
        exps[v] = exps[v].checked_add(exp).ok_or(Error::Overflow)?;
    }
    Ok(Monomial::new(exps))
}

/// Parse a single monomial in `x1..xn`.
pub fn parse_monomial(text: &str, ambient: usize) -> Result<Monomial> {
    parse_monomial_at(text, ambient, Span { line: 1, column: 1 })
}

fn parse_monomial_list(text: &str, ambient: usize, at: Span) -> Result<Vec<Monomial>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_monomial_at(part, ambient, at.advance(offset))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn parse_var_list(text: &str, ambient: usize, at: Span, zero_allowed: bool) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || (zero_allowed && t == "0") {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let here = at.advance(offset + part.len() - part.trim_start().len());
        offset += part.len() + 1;
        out.push(parse_var(part.trim(), ambient, here)?);
    }
    Ok(out)
}

fn parse_space_at(line: &str, ambient: usize, at: Span) -> Result<StanleySpace> {
    let open = line
        .find("K[")
        .ok_or_else(|| at.err("expected `<root> K[<vars>]`"))?;
    let close = line
        .rfind(']')
        .filter(|&c| c > open)
        .ok_or_else(|| at.err("missing `]`"))?;
    if !line[close + 1..].trim().is_empty() {
        return Err(at.advance(close + 1).err("trailing text after `]`"));
    }
    let root = parse_monomial_at(&line[..open], ambient, at)?;
    let vars = parse_var_list(&line[open + 2..close], ambient, at.advance(open + 2), false)?;
    StanleySpace::new(root, vars)
}

/// Parse `<root> K[<vars>]`.
pub fn parse_space(line: &str, ambient: usize) -> Result<StanleySpace> {
    parse_space_at(line, ambient, Span { line: 1, column: 1 })
}

fn parse_step_at(line: &str, ambient: usize, at: Span) -> Result<FiltrationStep> {
    let (z, vars) = line
        .split_once(':')
        .ok_or_else(|| at.err("expected `<monomial> : <prime variables>`"))?;
    let step = parse_monomial_at(z, ambient, at)?;
    let vars = parse_var_list(vars, ambient, at.advance(z.len() + 1), true)?;
    Ok(FiltrationStep::new(
        step,
        MonomialPrime::new(vars, ambient)?,
    ))
}

/// Parse `<z> : <prime variables>`.
pub fn parse_step(line: &str, ambient: usize) -> Result<FiltrationStep> {
    parse_step_at(line, ambient, Span { line: 1, column: 1 })
}

#[derive(PartialEq)]
enum Section {
    Header,
    Decomposition,
    Filtration,
}

const KEYS: [&str; 6] = [
    "vars",
    "ideal",
    "u",
    "sequence",
    "decomposition",
    "filtration",
];

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut ambient: Option<usize> = None;
    let mut ideal_gens: Option<Vec<Monomial>> = None;
    let mut file = ProblemFile::new(MonomialIdeal::zero(0));
    let mut section = Section::Header;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let at = Span {
            line: idx + 1,
            column: 1 + line.len() - line.trim_start().len(),
        };
        let keyed = line
            .split_once(':')
            .map(|(k, v)| (k.trim(), v))
            .filter(|(k, _)| KEYS.contains(k));
        let Some((key, value)) = keyed else {
            let n = ambient.ok_or_else(|| at.err("`vars:` must come first"))?;
            match section {
                Section::Decomposition => file
                    .decomposition
                    .get_or_insert_with(Vec::new)
                    .push(parse_space_at(line.trim(), n, at)?),
                Section::Filtration => file
                    .filtration
                    .get_or_insert_with(Vec::new)
                    .push(parse_step_at(line.trim(), n, at)?),
                Section::Header => return Err(at.err(format!("unexpected line `{}`", line.trim()))),
            }
            continue;
        };
        let value_at = at.advance(line.trim_start().find(':').unwrap_or(0) + 1);
        section = Section::Header;
        if key == "vars" {
            if ambient.is_some() {
                return Err(at.err("duplicate `vars:`"));
            }
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| value_at.err("`vars:` needs a positive integer"))?;
            if n == 0 {
                return Err(value_at.err("`vars:` needs a positive integer"));
            }
            ambient = Some(n);
            continue;
        }
        let n = ambient.ok_or_else(|| at.err("`vars:` must come first"))?;
        match key {
            "ideal" => ideal_gens = Some(parse_monomial_list(value, n, value_at)?),
            "u" => file.u = Some(parse_monomial_at(value, n, value_at)?),
            "sequence" => file.sequence = Some(parse_monomial_list(value, n, value_at)?),
            "decomposition" | "filtration" => {
                if !value.trim().is_empty() {
                    return Err(
                        value_at.err(format!("`{key}:` takes its entries on the following lines"))
                    );
                }
                if key == "decomposition" {
                    section = Section::Decomposition;
                    file.decomposition.get_or_insert_with(Vec::new);
                } else {
                    section = Section::Filtration;
                    file.filtration.get_or_insert_with(Vec::new);
                }
            }
            _ => unreachable!("key list is closed"),
        }
    }
    let n = ambient.ok_or_else(|| Span { line: 1, column: 1 }.err("missing `vars:`"))?;
    file.ambient = n;
    file.ideal = MonomialIdeal::normalize(ideal_gens.unwrap_or_default(), n)?;
    Ok(file)
}

/// Canonical text of a monomial list; empty for no monomials.
pub fn format_monomials(ms: &[Monomial]) -> String {
    ms.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn format_ideal(ideal: &MonomialIdeal) -> String {
    format_monomials(ideal.generators())
}

pub fn format_problem(file: &ProblemFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vars: {}", file.ambient);
    let _ = writeln!(out, "ideal: {}", format_ideal(&file.ideal));
    if let Some(u) = &file.u {
        let _ = writeln!(out, "u: {u}");
    }
    if let Some(seq) = &file.sequence {
        let _ = writeln!(out, "sequence: {}", format_monomials(seq));
    }
    if let Some(spaces) = &file.decomposition {
        out.push_str("decomposition:\n");
        for s in spaces {
            let _ = writeln!(out, "{s}");
        }
    }
    if let Some(steps) = &file.filtration {
        out.push_str("filtration:\n");
        for s in steps {
            let _ = writeln!(out, "{s}");
        }
    }
    out.lines()
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}
