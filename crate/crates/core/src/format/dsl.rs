//! The line-oriented DSL.
//!
//! ```text
//! fibration "E1" {
//!   fiber_genus 1
//!   base_genus 0
//!   curve a nonsep (1,0)
//!   curve b nonsep (0,1)
//!   word a b a b a b a b a b a b
//! }
//! ```
//!
//! Further statements: `curve c sep 1` (side genus), `convention "..."`,
//! `handles { matrix <2g rows> ... }`, `flags { key = value, ... }`. Catalog
//! documents use the head `entry` instead of `fibration`, may omit the word,
//! and may carry an `expected { key value anchor|derived "source" }` block.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{ParseDiagnostic, Parsed};
use crate::catalog::{ExpectedField, ExpectedValue, Provenance, ProvenanceKind};
use crate::checks::{GroundTruthFlags, Tristate};
use crate::fibration::{Factorization, CONVENTION};
use crate::linalg::IntegerMatrix;
use crate::surface::{Curve, HomologyClass, SurfaceGenus, SymplecticMatrix};

/// Largest fiber or base genus accepted from text.
pub const MAX_GENUS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Slash,
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Str(_) => "string".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::Slash => "'/'".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str, diags: &mut Vec<ParseDiagnostic>) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            '\n' => {
                bump(&mut chars);
                out.push((Tok::Newline, pos));
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            '{' | '}' | '(' | ')' | '[' | ']' | ',' | '=' | '/' => {
                bump(&mut chars);
                let t = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '=' => Tok::Eq,
                    _ => Tok::Slash,
                };
                out.push((t, pos));
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                let mut closed = false;
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match chars.peek() {
                            Some(&e @ ('"' | '\\')) => {
                                bump(&mut chars);
                                s.push(e);
                            }
                            Some('n') => {
                                bump(&mut chars);
                                s.push('\n');
                            }
                            _ => {
                                diags.push(ParseDiagnostic::error(pos.line, pos.col, "invalid escape in string"));
                            }
                        },
                        c => s.push(c),
                    }
                }
                if !closed {
                    diags.push(ParseDiagnostic::error(pos.line, pos.col, "unterminated string"));
                }
                out.push((Tok::Str(s), pos));
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut s = String::new();
                s.push(c);
                bump(&mut chars);
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars).unwrap());
                }
                match s.parse::<BigInt>() {
                    Ok(v) => out.push((Tok::Int(v), pos)),
                    Err(_) => diags.push(ParseDiagnostic::error(
                        pos.line,
                        pos.col,
                        format!("malformed integer '{s}'"),
                    )),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
                {
                    s.push(bump(&mut chars).unwrap());
                }
                out.push((Tok::Ident(s), pos));
            }
            other => {
                bump(&mut chars);
                diags.push(ParseDiagnostic::error(
                    pos.line,
                    pos.col,
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    out
}

#[derive(Debug)]
enum RawCurveKind {
    NonSep(Vec<BigInt>, Pos),
    Sep(BigInt, Pos),
}

#[derive(Debug)]
struct RawCurve {
    name: String,
    pos: Pos,
    kind: RawCurveKind,
}

#[derive(Debug)]
struct RawMatrix {
    pos: Pos,
    rows: Vec<(Vec<BigInt>, Pos)>,
}

#[derive(Debug, Default)]
struct RawDoc {
    head: Option<(String, Pos)>,
    name: String,
    fiber_genus: Option<(BigInt, Pos)>,
    base_genus: Option<(BigInt, Pos)>,
    curves: Vec<RawCurve>,
    word: Option<(Vec<(String, Pos)>, Pos)>,
    handles: Option<(Vec<RawMatrix>, Pos)>,
    flags: Option<(Vec<RawFlag>, Pos)>,
    expected: Option<(Vec<RawExpected>, Pos)>,
}

type RawFlag = (String, Tok, Pos);
type RawExpected = (String, ExpectedValue, Provenance, Pos);

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    diags: Vec<ParseDiagnostic>,
}

type Step<T> = Result<T, ()>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&mut self, pos: Pos, msg: impl Into<String>) -> Step<T> {
        self.diags.push(ParseDiagnostic::error(pos.line, pos.col, msg));
        Err(())
    }

    fn unexpected<T>(&mut self, what: &str) -> Step<T> {
        let (t, p) = self.toks[self.i].clone();
        self.error(p, format!("expected {what}, found {}", t.describe()))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Step<Pos> {
        if *self.peek() == want {
            Ok(self.next().1)
        } else {
            self.unexpected(what)
        }
    }

    fn ident(&mut self, what: &str) -> Step<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.next().1;
                Ok((s, p))
            }
            _ => self.unexpected(what),
        }
    }

    fn int(&mut self, what: &str) -> Step<(BigInt, Pos)> {
        match self.peek().clone() {
            Tok::Int(v) => {
                let p = self.next().1;
                Ok((v, p))
            }
            _ => self.unexpected(what),
        }
    }

    fn string(&mut self, what: &str) -> Step<(String, Pos)> {
        match self.peek().clone() {
            Tok::Str(s) => {
                let p = self.next().1;
                Ok((s, p))
            }
            _ => self.unexpected(what),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.next();
        }
    }

    fn end_of_line(&mut self) -> Step<()> {
        match self.peek() {
            Tok::Newline => {
                self.next();
                Ok(())
            }
            Tok::RBrace | Tok::Eof => Ok(()),
            _ => self.unexpected("end of line"),
        }
    }

    /// Error recovery: drop the rest of the line, or of a braced block
    /// opened on it.
    fn recover(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace if depth == 0 => return,
                Tok::RBrace => {
                    depth -= 1;
                    if depth == 0 {
                        self.next();
                        return;
                    }
                }
                Tok::Newline if depth == 0 => {
                    self.next();
                    return;
                }
                _ => {}
            }
            self.next();
        }
    }

    fn document(&mut self) -> RawDoc {
        let mut doc = RawDoc::default();
        self.skip_newlines();
        let header = (|| -> Step<()> {
            let (head, p) = self.ident("'fibration' or 'entry'")?;
            if head != "fibration" && head != "entry" {
                return self.error(p, format!("expected 'fibration' or 'entry', found '{head}'"));
            }
            doc.head = Some((head, p));
            doc.name = self.string("a quoted name")?.0;
            self.expect(Tok::LBrace, "'{'")?;
            Ok(())
        })();
        if header.is_err() {
            return doc;
        }
        loop {
            self.skip_newlines();
            match self.peek().clone() {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Eof => {
                    let p = self.pos();
                    let _ = self.error::<()>(p, "missing '}' at end of document");
                    return doc;
                }
                _ => {
                    if self.statement(&mut doc).is_err() {
                        self.recover();
                    }
                }
            }
        }
        self.skip_newlines();
        if *self.peek() != Tok::Eof {
            let _ = self.unexpected::<()>("end of input after the closing '}'");
        }
        doc
    }

    fn statement(&mut self, doc: &mut RawDoc) -> Step<()> {
        let (kw, p) = self.ident("a statement keyword")?;
        match kw.as_str() {
            "fiber_genus" | "base_genus" => {
                let v = self.int("a genus")?;
                let slot = if kw == "fiber_genus" {
                    &mut doc.fiber_genus
                } else {
                    &mut doc.base_genus
                };
                if slot.is_some() {
                    return self.error(p, format!("duplicate '{kw}'"));
                }
                *slot = Some(v);
                self.end_of_line()
            }
            "convention" => {
                let (s, sp) = self.string("a convention string")?;
                if s != CONVENTION {
                    return self.error(
                        sp,
                        format!("unsupported convention \"{s}\" (expected \"{CONVENTION}\")"),
                    );
                }
                self.end_of_line()
            }
            "curve" => {
                let (name, np) = self.ident("a curve name")?;
                let (kind, kp) = self.ident("'nonsep' or 'sep'")?;
                let kind = match kind.as_str() {
                    "nonsep" => {
                        let lp = self.expect(Tok::LParen, "'('")?;
                        let mut coords = vec![self.int("a coordinate")?.0];
                        while *self.peek() == Tok::Comma {
                            self.next();
                            coords.push(self.int("a coordinate")?.0);
                        }
                        self.expect(Tok::RParen, "',' or ')'")?;
                        RawCurveKind::NonSep(coords, lp)
                    }
                    "sep" => {
                        let (k, kp) = self.int("a side genus")?;
                        RawCurveKind::Sep(k, kp)
                    }
                    other => return self.error(kp, format!("expected 'nonsep' or 'sep', found '{other}'")),
                };
                doc.curves.push(RawCurve { name, pos: np, kind });
                self.end_of_line()
            }
            "word" => {
                let mut letters = Vec::new();
                while let Tok::Ident(s) = self.peek().clone() {
                    letters.push((s, self.next().1));
                }
                match &mut doc.word {
                    Some((w, _)) => w.extend(letters),
                    None => doc.word = Some((letters, p)),
                }
                self.end_of_line()
            }
            "handles" => {
                if doc.handles.is_some() {
                    return self.error(p, "duplicate 'handles' block");
                }
                self.expect(Tok::LBrace, "'{'")?;
                let mut mats: Vec<RawMatrix> = Vec::new();
                loop {
                    self.skip_newlines();
                    match self.peek().clone() {
                        Tok::RBrace => {
                            self.next();
                            break;
                        }
                        Tok::Ident(s) if s == "matrix" => {
                            let mp = self.next().1;
                            self.end_of_line()?;
                            mats.push(RawMatrix {
                                pos: mp,
                                rows: Vec::new(),
                            });
                        }
                        Tok::Int(_) => {
                            let rp = self.pos();
                            let mut row = Vec::new();
                            while let Tok::Int(v) = self.peek().clone() {
                                self.next();
                                row.push(v);
                            }
                            self.end_of_line()?;
                            match mats.last_mut() {
                                Some(m) => m.rows.push((row, rp)),
                                None => return self.error(rp, "matrix row before any 'matrix' line"),
                            }
                        }
                        _ => return self.unexpected("'matrix', a matrix row or '}'"),
                    }
                }
                doc.handles = Some((mats, p));
                self.end_of_line()
            }
            "flags" => {
                if doc.flags.is_some() {
                    return self.error(p, "duplicate 'flags' block");
                }
                self.expect(Tok::LBrace, "'{'")?;
                let mut kvs = Vec::new();
                loop {
                    while matches!(self.peek(), Tok::Newline | Tok::Comma) {
                        self.next();
                    }
                    if *self.peek() == Tok::RBrace {
                        self.next();
                        break;
                    }
                    let (key, kp) = self.ident("a flag name")?;
                    self.expect(Tok::Eq, "'='")?;
                    let (value, _) = self.next();
                    if !matches!(value, Tok::Ident(_) | Tok::Int(_) | Tok::Str(_)) {
                        return self.error(kp, format!("flag '{key}' needs a value"));
                    }
                    kvs.push((key, value, kp));
                }
                doc.flags = Some((kvs, p));
                self.end_of_line()
            }
            "expected" => {
                if doc.expected.is_some() {
                    return self.error(p, "duplicate 'expected' block");
                }
                self.expect(Tok::LBrace, "'{'")?;
                let mut fields = Vec::new();
                loop {
                    self.skip_newlines();
                    if *self.peek() == Tok::RBrace {
                        self.next();
                        break;
                    }
                    let (key, kp) = self.ident("an invariant name")?;
                    let value = self.expected_value(&key, kp)?;
                    let (kind, kindp) = self.ident("'anchor' or 'derived'")?;
                    let kind = match kind.as_str() {
                        "anchor" => ProvenanceKind::Anchor,
                        "derived" => ProvenanceKind::Derived,
                        other => return self.error(kindp, format!("expected 'anchor' or 'derived', found '{other}'")),
                    };
                    let (source, _) = self.string("a provenance note")?;
                    self.end_of_line()?;
                    fields.push((key, value, Provenance { kind, source }, kp));
                }
                doc.expected = Some((fields, p));
                self.end_of_line()
            }
            other => self.error(p, format!("unknown statement '{other}'")),
        }
    }

    fn expected_value(&mut self, key: &str, kp: Pos) -> Step<ExpectedValue> {
        match key {
            "torsion" => {
                self.expect(Tok::LBracket, "'['")?;
                let mut v = Vec::new();
                if *self.peek() != Tok::RBracket {
                    v.push(self.int("an elementary divisor")?.0);
                    while *self.peek() == Tok::Comma {
                        self.next();
                        v.push(self.int("an elementary divisor")?.0);
                    }
                }
                self.expect(Tok::RBracket, "']'")?;
                Ok(ExpectedValue::List(v))
            }
            "hodge_pairing" => {
                let (num, _) = self.int("a rational")?;
                let den = if *self.peek() == Tok::Slash {
                    self.next();
                    let (d, dp) = self.int("a denominator")?;
                    if d.is_zero() {
                        return self.error(dp, "zero denominator");
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(ExpectedValue::Rational(BigRational::new(num, den)))
            }
            k if crate::catalog::INTEGER_FIELDS.contains(&k) => {
                let (v, vp) = self.int("an integer")?;
                match v.to_i64() {
                    Some(x) => Ok(ExpectedValue::Int(x)),
                    None => self.error(vp, "value out of range"),
                }
            }
            other => self.error(kp, format!("unknown invariant '{other}'")),
        }
    }
}

fn to_genus(v: &BigInt, p: Pos, what: &str, diags: &mut Vec<ParseDiagnostic>) -> Option<usize> {
    match v.to_usize() {
        Some(g) if g <= MAX_GENUS => Some(g),
        _ => {
            diags.push(ParseDiagnostic::error(
                p.line,
                p.col,
                format!("{what} {v} out of range (0..={MAX_GENUS})"),
            ));
            None
        }
    }
}

fn tristate(tok: &Tok) -> Option<Tristate> {
    match tok {
        Tok::Ident(s) => s.parse().ok(),
        _ => None,
    }
}

struct Lowered {
    name: String,
    fiber_genus: usize,
    base_genus: usize,
    factorization: Option<Factorization>,
    flags: GroundTruthFlags,
    expected: Vec<ExpectedField>,
    warnings: Vec<ParseDiagnostic>,
}

/// Semantic checks shared by both heads. `word_required` is false for
/// catalog entries.
fn lower(text: &str, want_head: &str) -> Result<Lowered, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let toks = lex(text, &mut diags);
    let mut p = Parser { toks, i: 0, diags };
    let doc = p.document();
    let mut diags = p.diags;

    let Some((head, head_pos)) = doc.head.clone() else {
        return Err(diags);
    };
    // an exported catalog entry with a word also reads as a fibration
    if head != want_head && !(want_head == "fibration" && doc.word.is_some()) {
        diags.push(ParseDiagnostic::error(
            head_pos.line,
            head_pos.col,
            format!("expected a '{want_head}' document, found '{head}'"),
        ));
    }
    let word_required = want_head == "fibration";

    let g = match &doc.fiber_genus {
        Some((v, p)) => to_genus(v, *p, "fiber genus", &mut diags),
        None => {
            diags.push(ParseDiagnostic::error(
                head_pos.line,
                head_pos.col,
                "missing 'fiber_genus'",
            ));
            None
        }
    };
    let h = match &doc.base_genus {
        Some((v, p)) => to_genus(v, *p, "base genus", &mut diags),
        None => {
            diags.push(ParseDiagnostic::error(
                head_pos.line,
                head_pos.col,
                "missing 'base_genus'",
            ));
            None
        }
    };

    let mut flags = GroundTruthFlags::default();
    let mut relatively_minimal = None;
    if let Some((kvs, _)) = &doc.flags {
        let mut seen = Vec::new();
        for (key, value, kp) in kvs {
            if seen.contains(key) {
                diags.push(ParseDiagnostic::error(
                    kp.line,
                    kp.col,
                    format!("duplicate flag '{key}'"),
                ));
                continue;
            }
            seen.push(key.clone());
            let bad = |d: &mut Vec<ParseDiagnostic>, want: &str| {
                d.push(ParseDiagnostic::error(
                    kp.line,
                    kp.col,
                    format!("flag '{key}' expects {want}, found {}", value.describe()),
                ))
            };
            match key.as_str() {
                "rational_or_ruled" => match tristate(value) {
                    Some(t) => flags.rational_or_ruled = t,
                    None => bad(&mut diags, "true, false or unknown"),
                },
                "blowup_of_sphere_bundle" => match tristate(value) {
                    Some(t) => flags.blowup_of_sphere_bundle = t,
                    None => bad(&mut diags, "true, false or unknown"),
                },
                "ruling_base_genus" => match value {
                    Tok::Int(v) => match v.to_usize() {
                        Some(x) if x <= MAX_GENUS => flags.ruled_base_genus = Some(x),
                        _ => bad(&mut diags, "a genus"),
                    },
                    _ => bad(&mut diags, "a genus"),
                },
                "known_manifold" => match value {
                    Tok::Str(s) => flags.known_manifold = Some(s.clone()),
                    _ => bad(&mut diags, "a string"),
                },
                "relatively_minimal" => match tristate(value) {
                    Some(Tristate::True) => relatively_minimal = Some(true),
                    Some(Tristate::False) => relatively_minimal = Some(false),
                    _ => bad(&mut diags, "true or false"),
                },
                other => diags.push(ParseDiagnostic::error(
                    kp.line,
                    kp.col,
                    format!("unknown flag '{other}'"),
                )),
            }
        }
        if flags.ruled_base_genus.is_some() && flags.rational_or_ruled != Tristate::True {
            let (_, fp) = doc.flags.as_ref().unwrap();
            diags.push(ParseDiagnostic::error(
                fp.line,
                fp.col,
                "ruling_base_genus requires rational_or_ruled = true",
            ));
        }
    }

    let mut expected = Vec::new();
    if let Some((fields, ep)) = doc.expected {
        if head == "fibration" {
            diags.push(ParseDiagnostic::error(
                ep.line,
                ep.col,
                "'expected' is only allowed in catalog entries",
            ));
        }
        for (key, value, provenance, kp) in fields {
            if expected.iter().any(|f: &ExpectedField| f.key == key) {
                diags.push(ParseDiagnostic::error(
                    kp.line,
                    kp.col,
                    format!("duplicate expected field '{key}'"),
                ));
                continue;
            }
            expected.push(ExpectedField { key, value, provenance });
        }
    }

    let mut curves: Vec<(String, Curve)> = Vec::new();
    let mut warnings = Vec::new();
    if let Some(g) = g {
        let genus = SurfaceGenus(g);
        let mut seen: Vec<&str> = Vec::new();
        for rc in &doc.curves {
            if seen.contains(&rc.name.as_str()) {
                diags.push(ParseDiagnostic::error(
                    rc.pos.line,
                    rc.pos.col,
                    format!("duplicate curve name '{}'", rc.name),
                ));
                continue;
            }
            seen.push(&rc.name);
            let (curve, vp) = match &rc.kind {
                RawCurveKind::NonSep(coords, cp) => {
                    if coords.len() != genus.rank() {
                        diags.push(ParseDiagnostic::error(
                            cp.line,
                            cp.col,
                            format!(
                                "curve '{}': expected {} coordinates for genus {g}, got {}",
                                rc.name,
                                genus.rank(),
                                coords.len()
                            ),
                        ));
                        continue;
                    }
                    (Curve::NonSeparating(HomologyClass::new(coords.clone())), *cp)
                }
                RawCurveKind::Sep(k, kp) => match k.to_usize() {
                    Some(k) => (Curve::Separating { side_genus: k }, *kp),
                    None => {
                        diags.push(ParseDiagnostic::error(
                            kp.line,
                            kp.col,
                            format!("curve '{}': side genus {k} out of range", rc.name),
                        ));
                        continue;
                    }
                },
            };
            if let Err(e) = curve.validate(genus) {
                let msg = match &curve {
                    Curve::NonSeparating(v) => format!("curve '{}': class {v} not primitive", rc.name),
                    Curve::Separating { .. } => format!("curve '{}': {e}", rc.name.as_str()),
                };
                diags.push(ParseDiagnostic::error(vp.line, vp.col, msg));
                continue;
            }
            curves.push((rc.name.clone(), curve));
        }
    }

    let mut word = Vec::new();
    match &doc.word {
        Some((letters, wp)) => {
            if letters.is_empty() {
                diags.push(ParseDiagnostic::error(wp.line, wp.col, "word is empty"));
            }
            for (name, lp) in letters {
                if !doc.curves.iter().any(|c| c.name == *name) {
                    diags.push(ParseDiagnostic::error(
                        lp.line,
                        lp.col,
                        format!("undeclared curve '{name}'"),
                    ));
                }
                word.push(name.clone());
            }
        }
        None if word_required => {
            diags.push(ParseDiagnostic::error(head_pos.line, head_pos.col, "missing 'word'"));
        }
        None => {
            if let Some(c) = doc.curves.first() {
                diags.push(ParseDiagnostic::error(
                    c.pos.line,
                    c.pos.col,
                    "curves declared without a word",
                ));
            }
        }
    }
    for rc in &doc.curves {
        if doc.word.is_some() && !word.contains(&rc.name) {
            warnings.push(ParseDiagnostic::warning(
                rc.pos.line,
                rc.pos.col,
                format!("curve '{}' is never used in the word", rc.name),
            ));
        }
    }

    let mut handles = None;
    if let Some((mats, hp)) = &doc.handles {
        match (g, h) {
            (_, Some(0)) => diags.push(ParseDiagnostic::error(
                hp.line,
                hp.col,
                "handle monodromies need base_genus >= 1",
            )),
            (Some(g), Some(h)) => {
                if mats.len() != 2 * h {
                    diags.push(ParseDiagnostic::error(
                        hp.line,
                        hp.col,
                        format!(
                            "expected {} handle matrices for base genus {h}, got {}",
                            2 * h,
                            mats.len()
                        ),
                    ));
                }
                let n = 2 * g;
                let mut out = Vec::new();
                for m in mats {
                    let shape_ok = m.rows.len() == n && m.rows.iter().all(|(r, _)| r.len() == n);
                    if !shape_ok {
                        let bad = m.rows.iter().find(|(r, _)| r.len() != n).map_or(m.pos, |(_, p)| *p);
                        diags.push(ParseDiagnostic::error(
                            bad.line,
                            bad.col,
                            format!("handle matrix must be {n}x{n}"),
                        ));
                        continue;
                    }
                    let rows: Vec<Vec<BigInt>> = m.rows.iter().map(|(r, _)| r.clone()).collect();
                    let matrix = IntegerMatrix::from_rows(rows).expect("shape checked");
                    match SymplecticMatrix::new(SurfaceGenus(g), matrix) {
                        Ok(s) => out.push(s),
                        Err(e) => diags.push(ParseDiagnostic::error(m.pos.line, m.pos.col, e.to_string())),
                    }
                }
                handles = Some(out);
            }
            _ => {}
        }
    }

    if diags.iter().any(ParseDiagnostic::is_error) {
        diags.extend(warnings);
        return Err(diags);
    }
    let (g, h) = (g.expect("checked"), h.expect("checked"));

    let factorization = if doc.word.is_some() {
        let mut b = Factorization::builder(doc.name.clone(), g, h)
            .word(word)
            .relatively_minimal(relatively_minimal)
            .flags(flags.clone());
        for (name, c) in curves {
            b = b.curve(name, c);
        }
        if let Some(hs) = handles {
            b = b.handles(hs);
        }
        match b.build() {
            Ok(f) => Some(f),
            Err(e) => {
                diags.push(ParseDiagnostic::error(head_pos.line, head_pos.col, e.to_string()));
                return Err(diags);
            }
        }
    } else {
        None
    };

    Ok(Lowered {
        name: doc.name,
        fiber_genus: g,
        base_genus: h,
        factorization,
        flags,
        expected,
        warnings,
    })
}

pub(super) fn parse_document(text: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let lowered = lower(text, "fibration")?;
    Ok(Parsed {
        factorization: lowered.factorization.expect("word required for fibration documents"),
        warnings: lowered.warnings,
    })
}

/// A catalog entry document before it is attached to a [`crate::catalog::CatalogEntry`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedEntry {
    pub name: String,
    pub fiber_genus: usize,
    pub base_genus: usize,
    pub factorization: Option<Factorization>,
    pub flags: GroundTruthFlags,
    pub expected: Vec<ExpectedField>,
}

pub fn parse_entry_document(text: &str) -> Result<ParsedEntry, Vec<ParseDiagnostic>> {
    let l = lower(text, "entry")?;
    Ok(ParsedEntry {
        name: l.name,
        fiber_genus: l.fiber_genus,
        base_genus: l.base_genus,
        factorization: l.factorization,
        flags: l.flags,
        expected: l.expected,
    })
}

pub(super) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub(super) fn write_document(f: &Factorization) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fibration {} {{", quote(f.name()));
    let _ = writeln!(out, "  fiber_genus {}", f.fiber_genus());
    let _ = writeln!(out, "  base_genus {}", f.base_genus());
    let _ = writeln!(out, "  convention {}", quote(CONVENTION));
    for (name, c) in f.curves() {
        match c {
            Curve::NonSeparating(v) => {
                let _ = writeln!(out, "  curve {name} nonsep {v}");
            }
            Curve::Separating { side_genus } => {
                let _ = writeln!(out, "  curve {name} sep {side_genus}");
            }
        }
    }
    let _ = writeln!(out, "  word {}", f.word().join(" "));
    if let Some(hs) = f.handle_monodromies() {
        out.push_str("  handles {\n");
        for m in hs {
            out.push_str("    matrix\n");
            for row in m.matrix().row_iter() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "      {}", cells.join(" "));
            }
        }
        out.push_str("  }\n");
    }
    let flags = f.flags();
    let mut kv = Vec::new();
    if flags.rational_or_ruled != Tristate::Unknown {
        kv.push(format!("rational_or_ruled = {}", flags.rational_or_ruled));
    }
    if let Some(hr) = flags.ruled_base_genus {
        kv.push(format!("ruling_base_genus = {hr}"));
    }
    if flags.blowup_of_sphere_bundle != Tristate::Unknown {
        kv.push(format!("blowup_of_sphere_bundle = {}", flags.blowup_of_sphere_bundle));
    }
    if let Some(m) = &flags.known_manifold {
        kv.push(format!("known_manifold = {}", quote(m)));
    }
    if let Some(rm) = f.relatively_minimal() {
        kv.push(format!("relatively_minimal = {rm}"));
    }
    if !kv.is_empty() {
        let _ = writeln!(out, "  flags {{ {} }}", kv.join(", "));
    }
    out.push_str("}\n");
    out
}
