//! Built-in anchor examples, their validation, and fiber sums.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::checks::{run_checks, GroundTruthFlags, InvariantFacts, Selection};
use crate::error::CatalogError;
use crate::fibration::{verify_closure, ClosureVerdict, Factorization};
use crate::format::parse_entry_document;
use crate::invariants::{compute_report, InvariantReport};
use crate::serde_util;

/// Integer-valued keys accepted in an `expected` block.
pub const INTEGER_FIELDS: [&str; 10] = [
    "l",
    "n",
    "s",
    "e",
    "b1",
    "b2",
    "b_plus",
    "b_minus",
    "sigma",
    "c1_squared",
];

/// Embedded entry documents, in catalog order.
const SOURCES: [(&str, &str); 8] = [
    ("E1", include_str!("catalog/e1.lf")),
    ("E2", include_str!("catalog/e2.lf")),
    ("E3", include_str!("catalog/e3.lf")),
    ("MATSUMOTO_G2", include_str!("catalog/matsumoto_g2.lf")),
    ("K3_PENCIL_1", include_str!("catalog/k3_pencil_1.lf")),
    ("K3_PENCIL_2", include_str!("catalog/k3_pencil_2.lf")),
    ("K3_PENCIL_3", include_str!("catalog/k3_pencil_3.lf")),
    ("K3_PENCIL_4", include_str!("catalog/k3_pencil_4.lf")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpectedValue {
    Int(i64),
    Rational(BigRational),
    List(Vec<BigInt>),
}

impl fmt::Display for ExpectedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedValue::Int(x) => write!(f, "{x}"),
            ExpectedValue::Rational(x) => write!(f, "{x}"),
            ExpectedValue::List(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl Serialize for ExpectedValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExpectedValue::Int(x) => s.serialize_i64(*x),
            ExpectedValue::Rational(x) => serde_util::rational(x, s),
            ExpectedValue::List(v) => serde_util::bigint_seq(v, s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProvenanceKind {
    /// Quoted from the literature.
    Anchor,
    /// Obtained from anchors by arithmetic.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub kind: ProvenanceKind,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedField {
    pub key: String,
    pub value: ExpectedValue,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub fiber_genus: usize,
    pub base_genus: usize,
    pub factorization: Option<Factorization>,
    pub expected: Vec<ExpectedField>,
    pub flags: GroundTruthFlags,
    /// The embedded document, byte for byte.
    pub source: &'static str,
}

impl CatalogEntry {
    pub fn expected_value(&self, key: &str) -> Option<&ExpectedValue> {
        self.expected.iter().find(|f| f.key == key).map(|f| &f.value)
    }

    /// Integer expectations as checker input.
    pub fn expected_facts(&self) -> InvariantFacts {
        let get = |k: &str| match self.expected_value(k) {
            Some(ExpectedValue::Int(x)) => Some(*x),
            _ => None,
        };
        InvariantFacts {
            l: get("l"),
            n: get("n"),
            s: get("s"),
            e: get("e"),
            b1: get("b1"),
            b2: get("b2"),
            b_plus: get("b_plus"),
            b_minus: get("b_minus"),
            sigma: get("sigma"),
            c1_squared: get("c1_squared"),
        }
    }

    /// Replaces the word with a user-supplied one, keeping the entry's
    /// flags. Only for entries of matching genera.
    pub fn with_factorization(&self, f: Factorization) -> Result<Self, CatalogError> {
        if f.fiber_genus().get() != self.fiber_genus {
            return Err(CatalogError::GenusMismatch(self.fiber_genus, f.fiber_genus().get()));
        }
        if f.base_genus() != self.base_genus {
            return Err(CatalogError::WrongBaseGenus(f.name().to_string()));
        }
        let f = f.with_flags(self.flags.clone());
        Ok(CatalogEntry {
            factorization: Some(f),
            ..self.clone()
        })
    }
}

/// One mismatch found by [`validate_entry`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn load() -> Vec<CatalogEntry> {
    SOURCES
        .iter()
        .map(|(name, text)| {
            let p = parse_entry_document(text).unwrap_or_else(|d| {
                let msgs: Vec<String> = d.iter().map(ToString::to_string).collect();
                panic!("embedded catalog entry {name} is malformed: {}", msgs.join("; "))
            });
            assert_eq!(p.name, *name, "embedded entry name");
            CatalogEntry {
                name: p.name,
                fiber_genus: p.fiber_genus,
                base_genus: p.base_genus,
                factorization: p.factorization,
                expected: p.expected,
                flags: p.flags,
                source: text,
            }
        })
        .collect()
}

/// All built-in entries, parsed once.
pub fn catalog() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(load)
}

pub fn lookup(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    catalog()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::NotFound(name.to_string()))
}

fn report_value(r: &InvariantReport, key: &str) -> Option<ExpectedValue> {
    let int = |x: i64| Some(ExpectedValue::Int(x));
    match key {
        "l" => int(r.l as i64),
        "n" => int(r.n as i64),
        "s" => int(r.s as i64),
        "e" => int(r.e),
        "b1" => int(r.b1 as i64),
        "b2" => int(r.b2),
        "b_plus" => int(r.b_plus),
        "b_minus" => int(r.b_minus),
        "sigma" => int(r.sigma),
        "c1_squared" => int(r.c1_squared),
        "hodge_pairing" => Some(ExpectedValue::Rational(r.hodge_pairing.clone())),
        "torsion" => Some(ExpectedValue::List(r.torsion.clone())),
        _ => None,
    }
}

fn push(out: &mut Vec<Discrepancy>, field: &str, message: impl Into<String>) {
    let d = Discrepancy {
        field: field.to_string(),
        message: message.into(),
    };
    if !out.contains(&d) {
        out.push(d);
    }
}

/// Compares a word's computed invariants with the expectations, or, for
/// invariant-only entries, the expectations with each other. Every
/// applicable inequality check must also hold. Empty means consistent.
pub fn validate_entry(entry: &CatalogEntry) -> Vec<Discrepancy> {
    let (g, h) = (entry.fiber_genus, entry.base_genus);
    let mut out = Vec::new();
    let facts = match &entry.factorization {
        Some(f) => {
            let verdict = verify_closure(f);
            if verdict != ClosureVerdict::Closed {
                push(&mut out, "closure", format!("word is {verdict}"));
                return out;
            }
            let report = match compute_report(f) {
                Ok(r) => r,
                Err(e) => {
                    push(&mut out, "report", e.to_string());
                    return out;
                }
            };
            for field in &entry.expected {
                match report_value(&report, &field.key) {
                    Some(found) if found == field.value => {}
                    Some(found) => push(
                        &mut out,
                        &field.key,
                        format!("expected {}, computed {found}", field.value),
                    ),
                    None => push(&mut out, &field.key, "not a report field"),
                }
            }
            InvariantFacts::from(&report)
        }
        None => {
            let raw = entry.expected_facts();
            let full = raw.completed(g, h);
            for (field, msg) in raw
                .identity_violations(g, h)
                .into_iter()
                .chain(full.identity_violations(g, h))
            {
                push(&mut out, field, msg);
            }
            if let (Some(ExpectedValue::Rational(q)), Some(l), Some(sig)) =
                (entry.expected_value("hodge_pairing"), full.l, full.sigma)
            {
                let want = crate::invariants::hodge_pairing(l as usize, sig);
                if *q != want {
                    push(
                        &mut out,
                        "hodge_pairing",
                        format!("expected {q}, identities give {want}"),
                    );
                }
            }
            full
        }
    };
    match run_checks(&facts, g, h, &entry.flags, &Selection::All) {
        Ok(results) => {
            for r in results.iter().filter(|r| r.is_failure()) {
                push(&mut out, r.check_id.as_str(), format!("check fails: {}", r.note));
            }
        }
        Err(e) => push(&mut out, "checks", e.to_string()),
    }
    out
}

/// Concatenates two closed words over the sphere. Curves with the same
/// name and class are shared; other name clashes in `f2` get a numeric
/// suffix.
pub fn fiber_sum(f1: &Factorization, f2: &Factorization) -> Result<Factorization, CatalogError> {
    let g = f1.fiber_genus();
    if f2.fiber_genus() != g {
        return Err(CatalogError::GenusMismatch(g.get(), f2.fiber_genus().get()));
    }
    for f in [f1, f2] {
        if f.base_genus() != 0 {
            return Err(CatalogError::WrongBaseGenus(f.name().to_string()));
        }
        if verify_closure(f) != ClosureVerdict::Closed {
            return Err(CatalogError::NotClosed(f.name().to_string()));
        }
    }
    let mut table = f1.curves().clone();
    let mut rename = std::collections::HashMap::new();
    for (name, c) in f2.curves() {
        let target = match table.get(name) {
            None => name.clone(),
            Some(existing) if existing == c => name.clone(),
            Some(_) => (2..)
                .map(|i| format!("{name}_{i}"))
                .find(|n| !table.contains_key(n) && !f2.curves().contains_key(n))
                .expect("unbounded suffixes"),
        };
        table.entry(target.clone()).or_insert_with(|| c.clone());
        rename.insert(name.clone(), target);
    }
    let mut b = Factorization::builder(format!("{}+{}", f1.name(), f2.name()), g.get(), 0)
        .word(f1.word().iter().cloned())
        .word(f2.word().iter().map(|w| rename[w].clone()));
    for (name, c) in table {
        b = b.curve(name, c);
    }
    Ok(b.build().expect("sum of valid factorizations is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{Curve, HomologyClass};

    #[test]
    fn lookup_examples() {
        assert_eq!(lookup("E1").unwrap().factorization.as_ref().unwrap().word().len(), 12);
        let k3 = lookup("K3_PENCIL_2").unwrap();
        assert_eq!(k3.fiber_genus, 3);
        assert_eq!(k3.expected_value("c1_squared"), Some(&ExpectedValue::Int(-4)));
        assert!(k3.factorization.is_none());
        assert_eq!(lookup("E9"), Err(CatalogError::NotFound("E9".into())));
    }

    #[test]
    fn every_entry_validates() {
        for e in catalog() {
            assert_eq!(validate_entry(e), vec![], "{}", e.name);
        }
    }

    #[test]
    fn tampered_sigma_is_named() {
        let mut e = lookup("E1").unwrap().clone();
        for f in &mut e.expected {
            if f.key == "sigma" {
                f.value = ExpectedValue::Int(-4);
            }
        }
        let d = validate_entry(&e);
        assert!(d.iter().any(|d| d.field == "sigma"), "{d:?}");
        assert!(d.iter().all(|d| d.field == "sigma"), "{d:?}");
    }

    #[test]
    fn identity_chain_catches_bad_invariant_only_entries() {
        let mut e = lookup("K3_PENCIL_1").unwrap().clone();
        for f in &mut e.expected {
            if f.key == "l" {
                f.value = ExpectedValue::Int(31);
            }
        }
        assert!(!validate_entry(&e).is_empty());
    }

    #[test]
    fn sums() {
        let e1 = lookup("E1").unwrap().factorization.clone().unwrap();
        let e2 = lookup("E2").unwrap().factorization.clone().unwrap();
        let s = fiber_sum(&e1, &e1).unwrap();
        assert_eq!(s.word().len(), 24);
        assert_eq!(s.curves().len(), 2);
        let r = compute_report(&s).unwrap();
        assert_eq!((r.sigma, r.e, r.c1_squared), (-16, 24, 0));
        let r = compute_report(&fiber_sum(&e1, &e2).unwrap()).unwrap();
        assert_eq!((r.l, r.sigma), (36, -24));
    }

    #[test]
    fn sum_renames_clashing_curves() {
        let e1 = lookup("E1").unwrap().factorization.clone().unwrap();
        let swapped = Factorization::builder("swapped", 1, 0)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[0, 1])))
            .curve("b", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .word(e1.word().iter().cloned())
            .build()
            .unwrap();
        let s = fiber_sum(&e1, &swapped).unwrap();
        assert_eq!(s.curves().len(), 4);
        assert_eq!(&s.word()[12..14], ["a_2", "b_2"]);
        assert_eq!(verify_closure(&s), ClosureVerdict::Closed);
    }

    #[test]
    fn sum_errors() {
        let e1 = lookup("E1").unwrap().factorization.clone().unwrap();
        let g2 = Factorization::builder("sep", 2, 0)
            .curve("c", Curve::Separating { side_genus: 1 })
            .word(["c"])
            .build()
            .unwrap();
        assert_eq!(fiber_sum(&e1, &g2), Err(CatalogError::GenusMismatch(1, 2)));
        let open = Factorization::builder("open", 1, 0)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .word(["a"])
            .build()
            .unwrap();
        assert_eq!(fiber_sum(&e1, &open), Err(CatalogError::NotClosed("open".into())));
    }

    #[test]
    fn matsumoto_with_a_homological_word() {
        let f = Factorization::builder("m", 2, 0)
            .curve("b0", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0, -1, 0])))
            .curve("b1", Curve::NonSeparating(HomologyClass::from_i64(&[0, 1, 0, -1])))
            .curve("b2", Curve::NonSeparating(HomologyClass::from_i64(&[1, -1, -1, 1])))
            .curve("c", Curve::Separating { side_genus: 1 })
            .word(["b0", "b1", "b2", "c", "b0", "b1", "b2", "c"])
            .build()
            .unwrap();
        let entry = lookup("MATSUMOTO_G2").unwrap().with_factorization(f).unwrap();
        assert_eq!(validate_entry(&entry), vec![]);
    }

    #[test]
    fn export_is_verbatim() {
        for e in catalog() {
            assert!(e.source.starts_with('#'));
            assert!(e.source.ends_with("}\n"));
        }
    }
}
