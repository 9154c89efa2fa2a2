//! The line-oriented model format.
//!
//! A model file is a sequence of named blocks, each closed by `end`:
//!
//! ```text
//! lattice CHAIN3
//!   elements 0 1 2
//!   order 0 1
//!   order 1 2
//! end
//!
//! topology J on CHAIN3
//!   sieve 2 : 0 1 2
//!   sieve 1 : 0 1
//!   sieve 0 : 0
//! end
//! ```
//!
//! Blocks may only refer to blocks declared above them. `#` starts a comment.

#![allow(clippy::result_large_err)]

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use sieveforge::convergence::{locale_points, Point};
use sieveforge::coverage::sup_topology;
use sieveforge::{
    divisor_lattice, standard_topology, Carrier, CategorySpec, CoverAssignment, Error, FiniteCategory,
    FiniteLattice, FunctorMap, FunctorSpec, StandardKind, Witness,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: unresolved reference `{name}`")]
    UnresolvedReference { name: String, line: usize },
    #[error("line {line}: invalid {kind} `{block}`: {source}")]
    Validation {
        kind: BlockKind,
        block: String,
        line: usize,
        source: Error,
    },
}

impl ModelError {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            ModelError::Validation { source, .. } => source.witness(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Lattice,
    Category,
    Topology,
    Filter,
    Basis,
    Subbase,
    Functor,
    Point,
}

impl BlockKind {
    pub const ALL: [BlockKind; 8] = [
        BlockKind::Lattice,
        BlockKind::Category,
        BlockKind::Topology,
        BlockKind::Filter,
        BlockKind::Basis,
        BlockKind::Subbase,
        BlockKind::Functor,
        BlockKind::Point,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Lattice => "lattice",
            BlockKind::Category => "category",
            BlockKind::Topology => "topology",
            BlockKind::Filter => "filter",
            BlockKind::Basis => "basis",
            BlockKind::Subbase => "subbase",
            BlockKind::Functor => "functor",
            BlockKind::Point => "point",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

impl std::fmt::Display for BlockKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeBody {
    Explicit {
        elements: Vec<String>,
        order: Vec<(String, String)>,
    },
    Divisors(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssignmentBody {
    /// `(object, members)` rows; objects without rows have no sieves.
    Rows(Vec<(String, Vec<String>)>),
    Standard(StandardKind),
    Sup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointBody {
    Arrow(String),
    Prime(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Lattice(LatticeBody),
    Category(CategorySpec),
    Assignment {
        kind: BlockKind,
        on: String,
        body: AssignmentBody,
    },
    Functor {
        from: String,
        to: String,
        spec: FunctorSpec,
    },
    Point {
        on: String,
        body: PointBody,
    },
}

impl Body {
    pub fn kind(&self) -> BlockKind {
        match self {
            Body::Lattice(_) => BlockKind::Lattice,
            Body::Category(_) => BlockKind::Category,
            Body::Assignment { kind, .. } => *kind,
            Body::Functor { .. } => BlockKind::Functor,
            Body::Point { .. } => BlockKind::Point,
        }
    }
}

#[derive(Debug, Clone, Eq)]
pub struct Block {
    pub name: String,
    pub body: Body,
    /// Header line in the source; ignored by equality.
    pub line: usize,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.body == other.body
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelDocument {
    pub blocks: Vec<Block>,
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (i, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() || (ch == '#' && start.is_none()) {
            if let Some((s, c)) = start.take() {
                out.push(Token { text: &line[s..i], col: c + 1 });
            }
            if ch == '#' {
                return out;
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, c)) = start {
        out.push(Token { text: &line[s..], col: c + 1 });
    }
    out
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, col, message: message.into() }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s != ":" && !s.contains('#')
}

struct Open {
    name: String,
    line: usize,
    body: Body,
}

/// Parses the syntax of a model file without resolving references.
pub fn parse_document(text: &str) -> Result<ModelDocument, ModelError> {
    let mut doc = ModelDocument::default();
    let mut open: Option<Open> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        let end_col = raw.chars().count() + 1;
        let arg = |k: usize| -> Result<&str, ModelError> {
            match toks.get(k) {
                Some(t) if is_name(t.text) => Ok(t.text),
                Some(t) => Err(syntax(ln, t.col, format!("expected a name, found `{}`", t.text))),
                None => Err(syntax(ln, end_col, "unexpected end of line")),
            }
        };
        let exact = |n: usize| -> Result<(), ModelError> {
            match toks.get(n) {
                Some(t) => Err(syntax(ln, t.col, format!("unexpected `{}`", t.text))),
                None => Ok(()),
            }
        };
        let keyword = |k: usize, kw: &str| -> Result<(), ModelError> {
            match toks.get(k) {
                Some(t) if t.text == kw => Ok(()),
                Some(t) => Err(syntax(ln, t.col, format!("expected `{kw}`, found `{}`", t.text))),
                None => Err(syntax(ln, end_col, format!("expected `{kw}`"))),
            }
        };

        let Some(block) = open.as_mut() else {
            let Some(kind) = BlockKind::from_keyword(head.text) else {
                return Err(syntax(ln, head.col, format!("expected a block keyword, found `{}`", head.text)));
            };
            let name = arg(1)?.to_string();
            let body = match kind {
                BlockKind::Lattice => {
                    exact(2)?;
                    Body::Lattice(LatticeBody::Explicit { elements: Vec::new(), order: Vec::new() })
                }
                BlockKind::Category => {
                    exact(2)?;
                    Body::Category(CategorySpec::default())
                }
                BlockKind::Functor => {
                    keyword(2, "from")?;
                    let from = arg(3)?.to_string();
                    keyword(4, "to")?;
                    let to = arg(5)?.to_string();
                    exact(6)?;
                    Body::Functor { from, to, spec: FunctorSpec::default() }
                }
                BlockKind::Point => {
                    keyword(2, "on")?;
                    let on = arg(3)?.to_string();
                    exact(4)?;
                    Body::Point { on, body: PointBody::Prime(Vec::new()) }
                }
                kind => {
                    keyword(2, "on")?;
                    let on = arg(3)?.to_string();
                    exact(4)?;
                    Body::Assignment { kind, on, body: AssignmentBody::Rows(Vec::new()) }
                }
            };
            open = Some(Open { name, line: ln, body });
            continue;
        };

        if head.text == "end" {
            exact(1)?;
            let b = open.take().expect("open block");
            if let Body::Point { body: PointBody::Prime(p), .. } = &b.body {
                if p.is_empty() {
                    return Err(syntax(ln, head.col, "point block needs an `arrow` or `prime` line"));
                }
            }
            doc.blocks.push(Block { name: b.name, body: b.body, line: b.line });
            continue;
        }
        let current = block.body.kind();
        let bad = || syntax(ln, head.col, format!("unexpected `{}` in {current} block", head.text));
        match (&mut block.body, head.text) {
            (Body::Lattice(body), "elements") => {
                let LatticeBody::Explicit { elements, .. } = body else { return Err(bad()) };
                if toks.len() < 2 {
                    return Err(syntax(ln, end_col, "unexpected end of line"));
                }
                for k in 1..toks.len() {
                    elements.push(arg(k)?.to_string());
                }
            }
            (Body::Lattice(body), "order") => {
                let LatticeBody::Explicit { order, .. } = body else { return Err(bad()) };
                order.push((arg(1)?.to_string(), arg(2)?.to_string()));
                exact(3)?;
            }
            (Body::Lattice(body), "divisors") => {
                let fresh = matches!(body, LatticeBody::Explicit { elements, order } if elements.is_empty() && order.is_empty());
                if !fresh {
                    return Err(bad());
                }
                let t = &toks.get(1).ok_or_else(|| syntax(ln, end_col, "expected a positive integer"))?;
                let n: u64 = t
                    .text
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| syntax(ln, t.col, format!("expected a positive integer, found `{}`", t.text)))?;
                exact(2)?;
                *body = LatticeBody::Divisors(n);
            }
            (Body::Category(spec), "objects") => {
                if toks.len() < 2 {
                    return Err(syntax(ln, end_col, "unexpected end of line"));
                }
                for k in 1..toks.len() {
                    spec.objects.push(arg(k)?.to_string());
                }
            }
            (Body::Category(spec), "morphism") => {
                spec.morphisms.push((arg(1)?.into(), arg(2)?.into(), arg(3)?.into()));
                exact(4)?;
            }
            (Body::Category(spec), "identity") => {
                spec.identities.push((arg(1)?.into(), arg(2)?.into()));
                exact(3)?;
            }
            (Body::Category(spec), "compose") => {
                spec.compositions.push((arg(1)?.into(), arg(2)?.into(), arg(3)?.into()));
                exact(4)?;
            }
            (Body::Assignment { body, .. }, "sieve") => {
                let AssignmentBody::Rows(rows) = body else { return Err(bad()) };
                let obj = arg(1)?.to_string();
                keyword(2, ":")?;
                let members = (3..toks.len()).map(|k| arg(k).map(str::to_string)).collect::<Result<_, _>>()?;
                rows.push((obj, members));
            }
            (Body::Assignment { body, .. }, "standard") => {
                if !matches!(body, AssignmentBody::Rows(r) if r.is_empty()) {
                    return Err(bad());
                }
                let t = toks.get(1).ok_or_else(|| syntax(ln, end_col, "expected a topology kind"))?;
                let kind: StandardKind = t.text.parse().map_err(|e: String| syntax(ln, t.col, e))?;
                exact(2)?;
                *body = AssignmentBody::Standard(kind);
            }
            (Body::Assignment { body, .. }, "sup") => {
                if !matches!(body, AssignmentBody::Rows(r) if r.is_empty()) {
                    return Err(bad());
                }
                exact(1)?;
                *body = AssignmentBody::Sup;
            }
            (Body::Functor { spec, .. }, "object") => {
                spec.objects.push((arg(1)?.into(), arg(2)?.into()));
                exact(3)?;
            }
            (Body::Functor { spec, .. }, "morphism") => {
                spec.morphisms.push((arg(1)?.into(), arg(2)?.into()));
                exact(3)?;
            }
            (Body::Point { body, .. }, "arrow") => {
                if !matches!(body, PointBody::Prime(p) if p.is_empty()) {
                    return Err(bad());
                }
                *body = PointBody::Arrow(arg(1)?.to_string());
                exact(2)?;
            }
            (Body::Point { body, .. }, "prime") => {
                let PointBody::Prime(p) = body else { return Err(bad()) };
                if !p.is_empty() || toks.len() < 2 {
                    return Err(bad());
                }
                for k in 1..toks.len() {
                    p.push(arg(k)?.to_string());
                }
            }
            _ => return Err(bad()),
        }
    }
    if let Some(b) = open {
        return Err(syntax(last_line + 1, 1, format!("block `{}` opened at line {} is not closed", b.name, b.line)));
    }
    Ok(doc)
}

/// Canonical text of a document; `parse_document(&serialize(d)) == d`.
pub fn serialize(doc: &ModelDocument) -> String {
    let mut out = String::new();
    for (i, b) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let kind = b.body.kind();
        match &b.body {
            Body::Lattice(body) => {
                let _ = writeln!(out, "lattice {}", b.name);
                match body {
                    LatticeBody::Explicit { elements, order } => {
                        if !elements.is_empty() {
                            let _ = writeln!(out, "  elements {}", elements.join(" "));
                        }
                        for (a, c) in order {
                            let _ = writeln!(out, "  order {a} {c}");
                        }
                    }
                    LatticeBody::Divisors(n) => {
                        let _ = writeln!(out, "  divisors {n}");
                    }
                }
            }
            Body::Category(spec) => {
                let _ = writeln!(out, "category {}", b.name);
                if !spec.objects.is_empty() {
                    let _ = writeln!(out, "  objects {}", spec.objects.join(" "));
                }
                for (m, d, c) in &spec.morphisms {
                    let _ = writeln!(out, "  morphism {m} {d} {c}");
                }
                for (o, m) in &spec.identities {
                    let _ = writeln!(out, "  identity {o} {m}");
                }
                for (f, g, h) in &spec.compositions {
                    let _ = writeln!(out, "  compose {f} {g} {h}");
                }
            }
            Body::Assignment { on, body, .. } => {
                let _ = writeln!(out, "{kind} {} on {on}", b.name);
                match body {
                    AssignmentBody::Rows(rows) => {
                        for (o, members) in rows {
                            let _ = write!(out, "  sieve {o} :");
                            for m in members {
                                let _ = write!(out, " {m}");
                            }
                            out.push('\n');
                        }
                    }
                    AssignmentBody::Standard(k) => {
                        let name = serde_json::to_value(k).expect("kind").as_str().expect("string").to_string();
                        let _ = writeln!(out, "  standard {name}");
                    }
                    AssignmentBody::Sup => out.push_str("  sup\n"),
                }
            }
            Body::Functor { from, to, spec } => {
                let _ = writeln!(out, "functor {} from {from} to {to}", b.name);
                for (a, c) in &spec.objects {
                    let _ = writeln!(out, "  object {a} {c}");
                }
                for (a, c) in &spec.morphisms {
                    let _ = writeln!(out, "  morphism {a} {c}");
                }
            }
            Body::Point { on, body } => {
                let _ = writeln!(out, "point {} on {on}", b.name);
                match body {
                    PointBody::Arrow(m) => {
                        let _ = writeln!(out, "  arrow {m}");
                    }
                    PointBody::Prime(p) => {
                        let _ = writeln!(out, "  prime {}", p.join(" "));
                    }
                }
            }
        }
        out.push_str("end\n");
    }
    out
}

/// A resolved block.
#[derive(Debug, Clone)]
pub enum Item {
    Lattice(Arc<Carrier>),
    Category(Arc<Carrier>),
    Assignment {
        kind: BlockKind,
        on: String,
        assignment: CoverAssignment,
    },
    Functor(FunctorMap),
    Point {
        on: String,
        point: Point,
    },
}

/// Every block of a document, validated and resolved.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub document: ModelDocument,
    items: Vec<(String, Item)>,
    index: HashMap<String, usize>,
}

impl Workspace {
    pub fn get(&self, name: &str) -> Option<&Item> {
        self.index.get(name).map(|&i| &self.items[i].1)
    }

    pub fn items(&self) -> impl Iterator<Item = (&str, &Item)> {
        self.items.iter().map(|(n, i)| (n.as_str(), i))
    }

    /// Names of all blocks of `kind`, in file order.
    pub fn names_of(&self, kind: BlockKind) -> Vec<&str> {
        self.document
            .blocks
            .iter()
            .filter(|b| b.body.kind() == kind)
            .map(|b| b.name.as_str())
            .collect()
    }

    pub fn carrier(&self, name: &str) -> Option<&Arc<Carrier>> {
        match self.get(name)? {
            Item::Lattice(c) | Item::Category(c) => Some(c),
            _ => None,
        }
    }
}

/// Parses and resolves a model file.
pub fn parse_model(text: &str, max_sieves: u64) -> Result<Workspace, ModelError> {
    resolve(parse_document(text)?, max_sieves)
}

pub fn resolve(document: ModelDocument, max_sieves: u64) -> Result<Workspace, ModelError> {
    let mut items: Vec<(String, Item)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for b in &document.blocks {
        let kind = b.body.kind();
        let invalid = |source: Error| ModelError::Validation {
            kind,
            block: b.name.clone(),
            line: b.line,
            source,
        };
        if index.contains_key(&b.name) {
            return Err(invalid(Error::DuplicateId(b.name.clone())));
        }
        let lookup = |name: &str| -> Result<&Item, ModelError> {
            index
                .get(name)
                .map(|&i| &items[i].1)
                .ok_or_else(|| ModelError::UnresolvedReference { name: name.to_string(), line: b.line })
        };
        let carrier = |name: &str| -> Result<Arc<Carrier>, ModelError> {
            match lookup(name)? {
                Item::Lattice(c) | Item::Category(c) => Ok(c.clone()),
                _ => Err(ModelError::UnresolvedReference { name: name.to_string(), line: b.line }),
            }
        };
        let item = match &b.body {
            Body::Lattice(body) => {
                let l = match body {
                    LatticeBody::Explicit { elements, order } => {
                        FiniteLattice::build(elements, order).map_err(invalid)?
                    }
                    LatticeBody::Divisors(n) => divisor_lattice(*n),
                };
                Item::Lattice(Carrier::locale(l, max_sieves).map_err(invalid)?)
            }
            Body::Category(spec) => {
                let cat = FiniteCategory::build(spec).map_err(invalid)?;
                Item::Category(Carrier::category(cat, max_sieves).map_err(invalid)?)
            }
            Body::Assignment { kind, on, body } => {
                let car = carrier(on)?;
                let assignment = match body {
                    AssignmentBody::Rows(rows) => {
                        let mut a = CoverAssignment::empty(&car);
                        for (o, members) in rows {
                            let c = car.object(o).map_err(invalid)?;
                            a.insert(c, car.parse_sieve(c, members).map_err(invalid)?);
                        }
                        a
                    }
                    AssignmentBody::Standard(k) => standard_topology(*k, &car).map_err(invalid)?,
                    AssignmentBody::Sup => sup_topology(&car).map_err(invalid)?,
                };
                Item::Assignment { kind: *kind, on: on.clone(), assignment }
            }
            Body::Functor { from, to, spec } => {
                let (src, tgt) = (carrier(from)?, carrier(to)?);
                let f = if src.is_locale() && tgt.is_locale() && spec.morphisms.is_empty() {
                    FunctorMap::from_monotone(&src, &tgt, &spec.objects)
                } else {
                    FunctorMap::build(&src, &tgt, spec)
                };
                Item::Functor(f.map_err(invalid)?)
            }
            Body::Point { on, body } => {
                let car = carrier(on)?;
                let point = match body {
                    PointBody::Arrow(m) => {
                        let m = car.cat().morphism(m).map_err(invalid)?;
                        let c = car.cat().cod(m);
                        if !car.category_points(c).map_err(invalid)?.contains(&m) {
                            return Err(invalid(Error::PointMismatch { object: car.object_name(c).to_string() }));
                        }
                        Point::Arrow(m)
                    }
                    PointBody::Prime(names) => {
                        let l = car.require_lattice().map_err(invalid)?;
                        let set = sieveforge::ElementSet::from_names(l, names).map_err(invalid)?;
                        let p = locale_points(l)
                            .map_err(invalid)?
                            .into_iter()
                            .find(|p| p.dual_kernel == set)
                            .ok_or_else(|| {
                                invalid(Error::PreconditionUnmet(format!(
                                    "{{{}}} is not a prime filter",
                                    names.join(",")
                                )))
                            })?;
                        Point::Locale(p)
                    }
                };
                Item::Point { on: on.clone(), point }
            }
        };
        index.insert(b.name.clone(), items.len());
        items.push((b.name.clone(), item));
    }
    Ok(Workspace { document, items, index })
}

/// Model text for a lattice, listing covering pairs.
pub fn lattice_block(name: &str, l: &FiniteLattice) -> Block {
    Block {
        name: name.to_string(),
        body: Body::Lattice(LatticeBody::Explicit {
            elements: l.names().to_vec(),
            order: l
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| (l.name(a).to_string(), l.name(b).to_string()))
                .collect(),
        }),
        line: 0,
    }
}

/// Rows of an assignment in canonical order.
pub fn assignment_rows(a: &CoverAssignment) -> Vec<(String, Vec<String>)> {
    a.render()
        .into_iter()
        .flat_map(|(o, rows)| rows.into_iter().map(move |r| (o.clone(), r)))
        .collect()
}
