//! Plain-text description of a dg-algebra with an optional order and
//! optional module blocks.
//!
//! ```text
//! # comments run to the end of the line
//! ring Z
//! unit 1 0 0 1
//! basis
//!   e11 0
//!   e12 1
//! mult
//!   e11 e12 e12 1        # b_i b_j has coefficient 1 at b_k
//! differential
//!   e21 e11 1            # d(e21) has coefficient 1 at e11
//! order
//!   1 0 0 0              # lattice generators in basis coordinates
//! module column
//!   basis
//!     m1 0
//!   action
//!     e11 m1 m1 1
//!   differential
//!   lattice
//!     1
//! end
//! ```
//!
//! Basis elements may be referred to by name or by 0-based index; names
//! take precedence. An optional `unit` line gives the coordinates of the
//! identity, which is otherwise solved for. Section keywords are reserved
//! and cannot be used as basis names.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::Zero;

use crate::catalog::{parse_ring, Example};
use crate::error::{Error, Result};
use crate::graded::{DgAlgebra, Differential, GradedAlgebra};
use crate::linalg::{QMatrix, ZLattice};
use crate::module::DgModule;
use crate::ring::{CoefficientRing, Q};

#[derive(Clone, Debug)]
pub struct ModuleBlock {
    pub name: String,
    pub module: DgModule,
    pub lattice: Option<ZLattice>,
}

#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub dg: Arc<DgAlgebra>,
    pub order: Option<ZLattice>,
    pub modules: Vec<ModuleBlock>,
}

impl From<Example> for AlgebraFile {
    fn from(ex: Example) -> Self {
        AlgebraFile {
            dg: Arc::new(ex.dg),
            order: ex.order,
            modules: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// dropping everything after '#'.
fn tokenize(line: &str, number: usize) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    line: number,
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Basis,
    Mult,
    Differential,
    Order,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ModuleSection {
    Basis,
    Action,
    Differential,
    Lattice,
}

#[derive(Default)]
struct RawModule<'a> {
    name: String,
    header: Option<Token<'a>>,
    basis: Vec<(Token<'a>, Token<'a>)>,
    action: Vec<[Token<'a>; 4]>,
    differential: Vec<[Token<'a>; 3]>,
    lattice: Option<Vec<Vec<Token<'a>>>>,
}

#[derive(Default)]
struct Raw<'a> {
    ring: Option<Token<'a>>,
    unit: Option<Vec<Token<'a>>>,
    basis: Vec<(Token<'a>, Token<'a>)>,
    mult: Vec<[Token<'a>; 4]>,
    differential: Vec<[Token<'a>; 3]>,
    order: Option<Vec<Vec<Token<'a>>>>,
    modules: Vec<RawModule<'a>>,
}

fn exact<'a, const N: usize>(tokens: &[Token<'a>], what: &str) -> Result<[Token<'a>; N]> {
    tokens
        .try_into()
        .map_err(|_| tokens[0].error(format!("{what} expects {N} fields, found {}", tokens.len())))
}

fn scan(text: &str) -> Result<Raw<'_>> {
    let mut raw = Raw::default();
    let mut section: Option<Section> = None;
    let mut module: Option<(RawModule, Option<ModuleSection>)> = None;
    for (k, line) in text.lines().enumerate() {
        let tokens = tokenize(line, k + 1);
        let Some(head) = tokens.first() else {
            continue;
        };
        if let Some((m, sub)) = module.as_mut() {
            let next = match (head.text, tokens.len()) {
                ("end", 1) => {
                    let (m, _) = module.take().expect("inside a module block");
                    raw.modules.push(m);
                    continue;
                }
                ("basis", 1) => Some(ModuleSection::Basis),
                ("action", 1) => Some(ModuleSection::Action),
                ("differential", 1) => Some(ModuleSection::Differential),
                ("lattice", 1) => Some(ModuleSection::Lattice),
                _ => None,
            };
            if let Some(s) = next {
                if s == ModuleSection::Lattice {
                    m.lattice = Some(Vec::new());
                }
                *sub = Some(s);
                continue;
            }
            match sub {
                None => return Err(head.error("expected a module section")),
                Some(ModuleSection::Basis) => {
                    let [n, d] = exact(&tokens, "module basis line")?;
                    m.basis.push((n, d));
                }
                Some(ModuleSection::Action) => m.action.push(exact(&tokens, "action line")?),
                Some(ModuleSection::Differential) => {
                    m.differential.push(exact(&tokens, "differential line")?)
                }
                Some(ModuleSection::Lattice) => {
                    m.lattice.get_or_insert_with(Vec::new).push(tokens.clone())
                }
            }
            continue;
        }
        match (head.text, tokens.len()) {
            ("ring", 2) => {
                if raw.ring.is_some() {
                    return Err(head.error("duplicate ring line"));
                }
                raw.ring = Some(tokens[1]);
                section = None;
            }
            ("ring", _) => return Err(head.error("ring expects one value")),
            ("unit", k) if k > 1 => {
                if raw.unit.is_some() {
                    return Err(head.error("duplicate unit line"));
                }
                raw.unit = Some(tokens[1..].to_vec());
                section = None;
            }
            ("basis", 1) => section = Some(Section::Basis),
            ("mult", 1) => section = Some(Section::Mult),
            ("differential", 1) => section = Some(Section::Differential),
            ("order", 1) => {
                if raw.order.is_some() {
                    return Err(head.error("duplicate order section"));
                }
                raw.order = Some(Vec::new());
                section = Some(Section::Order);
            }
            ("module", 2) => {
                let m = RawModule {
                    name: tokens[1].text.to_string(),
                    header: Some(*head),
                    ..RawModule::default()
                };
                module = Some((m, None));
                section = None;
            }
            ("module", _) => return Err(head.error("module expects a name")),
            ("end", 1) => return Err(head.error("end outside a module block")),
            _ => match section {
                None => return Err(head.error(format!("unexpected '{}'", head.text))),
                Some(Section::Basis) => {
                    let [n, d] = exact(&tokens, "basis line")?;
                    raw.basis.push((n, d));
                }
                Some(Section::Mult) => raw.mult.push(exact(&tokens, "mult line")?),
                Some(Section::Differential) => {
                    raw.differential.push(exact(&tokens, "differential line")?)
                }
                Some(Section::Order) => raw.order.get_or_insert_with(Vec::new).push(tokens),
            },
        }
    }
    if let Some((m, _)) = module {
        let h = m.header.expect("module header recorded");
        return Err(h.error(format!("module '{}' is missing 'end'", m.name)));
    }
    Ok(raw)
}

const KEYWORDS: [&str; 10] = [
    "ring",
    "unit",
    "basis",
    "mult",
    "differential",
    "order",
    "module",
    "action",
    "lattice",
    "end",
];

struct Names {
    index: HashMap<String, usize>,
    len: usize,
}

impl Names {
    fn new(basis: &[(Token, Token)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (n, _)) in basis.iter().enumerate() {
            if KEYWORDS.contains(&n.text) {
                return Err(n.error(format!("'{}' is a reserved word", n.text)));
            }
            if index.insert(n.text.to_string(), i).is_some() {
                return Err(n.error(format!("duplicate basis name '{}'", n.text)));
            }
        }
        Ok(Names {
            index,
            len: basis.len(),
        })
    }

    fn resolve(&self, t: &Token) -> Result<usize> {
        if let Some(&i) = self.index.get(t.text) {
            return Ok(i);
        }
        match t.text.parse::<usize>() {
            Ok(i) if i < self.len => Ok(i),
            Ok(i) => Err(t.error(format!("index {i} out of range (dimension {})", self.len))),
            Err(_) => Err(t.error(format!("unknown basis element '{}'", t.text))),
        }
    }
}

fn value(ring: &CoefficientRing, t: &Token) -> Result<Q> {
    let v: Q = t
        .text
        .parse()
        .map_err(|_| t.error(format!("'{}' is not a rational number", t.text)))?;
    ring.element(&v).map_err(|e| t.error(e.to_string()))
}

fn degree(t: &Token) -> Result<i64> {
    t.text
        .parse()
        .map_err(|_| t.error(format!("'{}' is not an integer degree", t.text)))
}

fn lattice(rows: &[Vec<Token>], n: usize, at: Token) -> Result<ZLattice> {
    let mut gens = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != n {
            return Err(row[0].error(format!("expected {n} coordinates, found {}", row.len())));
        }
        let v = row
            .iter()
            .map(|t| value(&CoefficientRing::Rationals, t))
            .collect::<Result<Vec<Q>>>()?;
        gens.push(v);
    }
    ZLattice::from_generators(n, &gens).map_err(|e| at.error(e.to_string()))
}

/// Parses the text format; errors carry the line and column of the
/// offending token.
pub fn parse(text: &str) -> Result<AlgebraFile> {
    let raw = scan(text)?;
    let origin = Token {
        text: "",
        line: 1,
        column: 1,
    };
    let ring_tok = raw.ring.ok_or_else(|| origin.error("missing ring line"))?;
    let ring = parse_ring(ring_tok.text).map_err(|e| ring_tok.error(e.to_string()))?;
    if raw.basis.is_empty() {
        return Err(origin.error("missing or empty basis section"));
    }
    let names = Names::new(&raw.basis)?;
    let n = raw.basis.len();
    let degrees = raw.basis.iter().map(|(_, d)| degree(d)).collect::<Result<Vec<_>>>()?;
    let mut mult = Vec::with_capacity(raw.mult.len());
    for [i, j, k, v] in &raw.mult {
        mult.push((names.resolve(i)?, names.resolve(j)?, names.resolve(k)?, value(&ring, v)?));
    }
    let basis_names: Vec<String> = raw.basis.iter().map(|(t, _)| t.text.to_string()).collect();
    let algebra = match &raw.unit {
        None => GradedAlgebra::new(ring, basis_names, degrees, &mult),
        Some(u) => {
            if u.len() != n {
                return Err(u[0].error(format!("unit expects {n} coordinates, found {}", u.len())));
            }
            let unit = u.iter().map(|t| value(&ring, t)).collect::<Result<Vec<Q>>>()?;
            GradedAlgebra::with_unit(ring, basis_names, degrees, &mult, unit)
        }
    }
    .map_err(|e| origin.error(format!("mult: {e}")))?;
    let mut diff = Vec::with_capacity(raw.differential.len());
    for [i, j, v] in &raw.differential {
        diff.push((names.resolve(i)?, names.resolve(j)?, value(&ring, v)?));
    }
    let dg = Arc::new(
        DgAlgebra::new(algebra, Differential::from_entries(n, &diff))
            .map_err(|e| origin.error(e.to_string()))?,
    );
    let order = match &raw.order {
        None => None,
        Some(rows) if rows.is_empty() => return Err(origin.error("empty order section")),
        Some(rows) => Some(lattice(rows, n, rows[0][0])?),
    };
    let modules = raw
        .modules
        .iter()
        .map(|m| module_block(&dg, &names, m))
        .collect::<Result<_>>()?;
    Ok(AlgebraFile { dg, order, modules })
}

fn module_block(dg: &Arc<DgAlgebra>, names: &Names, m: &RawModule) -> Result<ModuleBlock> {
    let header = m.header.expect("module header recorded");
    let ring = dg.ring();
    let local = Names::new(&m.basis)?;
    let dim = m.basis.len();
    let degrees = m.basis.iter().map(|(_, d)| degree(d)).collect::<Result<Vec<_>>>()?;
    let mut action = Vec::with_capacity(m.action.len());
    for [i, j, k, v] in &m.action {
        action.push((names.resolve(i)?, local.resolve(j)?, local.resolve(k)?, value(&ring, v)?));
    }
    let mut delta = QMatrix::zeros(dim, dim);
    for [i, j, v] in &m.differential {
        delta[(local.resolve(j)?, local.resolve(i)?)] += value(&ring, v)?;
    }
    let module = DgModule::new(Arc::clone(dg), degrees, &action, delta)
        .map_err(|e| header.error(format!("module '{}': {e}", m.name)))?
        .with_names(m.basis.iter().map(|(t, _)| t.text.to_string()).collect());
    let lattice = match &m.lattice {
        None => None,
        Some(rows) if rows.is_empty() => return Err(header.error("empty lattice section")),
        Some(rows) => Some(lattice(rows, dim, rows[0][0])?),
    };
    Ok(ModuleBlock {
        name: m.name.clone(),
        module,
        lattice,
    })
}

fn write_rows(out: &mut String, indent: &str, rows: &[Vec<Q>]) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(Q::to_string).collect();
        let _ = writeln!(out, "{indent}{}", cells.join(" "));
    }
}

/// Writes the canonical text form: entries sorted by index, zero entries
/// omitted.
pub fn write(file: &AlgebraFile) -> String {
    let a = &file.dg.algebra;
    let names = a.names();
    let mut out = String::new();
    let _ = writeln!(out, "ring {}", a.ring());
    let unit: Vec<String> = a.unit().iter().map(Q::to_string).collect();
    let _ = writeln!(out, "unit {}", unit.join(" "));
    out.push_str("basis\n");
    for (name, d) in names.iter().zip(a.degrees()) {
        let _ = writeln!(out, "  {name} {d}");
    }
    out.push_str("mult\n");
    for (i, j, k, v) in a.entries() {
        let _ = writeln!(out, "  {} {} {} {v}", names[i], names[j], names[k]);
    }
    out.push_str("differential\n");
    for (i, j, v) in file.dg.differential.entries() {
        let _ = writeln!(out, "  {} {} {v}", names[i], names[j]);
    }
    if let Some(l) = &file.order {
        out.push_str("order\n");
        write_rows(&mut out, "  ", &l.basis());
    }
    for block in &file.modules {
        let m = &block.module;
        let local = m.names();
        let _ = writeln!(out, "module {}", block.name);
        out.push_str("  basis\n");
        for (name, d) in local.iter().zip(m.degrees()) {
            let _ = writeln!(out, "    {name} {d}");
        }
        out.push_str("  action\n");
        for (i, j, k, v) in m.action_entries() {
            let _ = writeln!(out, "    {} {} {} {v}", names[i], local[j], local[k]);
        }
        out.push_str("  differential\n");
        let delta = m.differential();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let v = &delta[(j, i)];
                if !v.is_zero() {
                    let _ = writeln!(out, "    {} {} {v}", local[i], local[j]);
                }
            }
        }
        if let Some(l) = &block.lattice {
            out.push_str("  lattice\n");
            write_rows(&mut out, "    ", &l.basis());
        }
        out.push_str("end\n");
    }
    out
}
