//! JSON mirror of the DSL. Field names match the DSL keywords.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::dsl::MAX_GENUS;
use super::ParseDiagnostic;
use crate::checks::{GroundTruthFlags, Tristate};
use crate::fibration::{Factorization, CONVENTION};
use crate::linalg::IntegerMatrix;
use crate::serde_util::JsonInt;
use crate::surface::{Curve, HomologyClass, SurfaceGenus, SymplecticMatrix};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    format_version: u32,
    name: String,
    fiber_genus: usize,
    base_genus: usize,
    convention: String,
    curves: Vec<JsonCurve>,
    word: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    handles: Option<Vec<Vec<Vec<JsonInt>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flags: Option<JsonFlags>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonCurve {
    name: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side_genus: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFlags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rational_or_ruled: Option<Tristate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ruling_base_genus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blowup_of_sphere_bundle: Option<Tristate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    known_manifold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relatively_minimal: Option<bool>,
}

fn semantic(msg: impl Into<String>) -> Vec<ParseDiagnostic> {
    vec![ParseDiagnostic::error(1, 1, msg)]
}

fn ints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub(super) fn parse_json(text: &str) -> Result<Factorization, Vec<ParseDiagnostic>> {
    let doc: JsonDoc = serde_json::from_str(text).map_err(|e| {
        vec![ParseDiagnostic::error(
            e.line().max(1),
            e.column().max(1),
            e.to_string(),
        )]
    })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(semantic(format!("unsupported format_version {}", doc.format_version)));
    }
    if doc.convention != CONVENTION {
        return Err(semantic(format!("unsupported convention \"{}\"", doc.convention)));
    }
    for (what, v) in [("fiber genus", doc.fiber_genus), ("base genus", doc.base_genus)] {
        if v > MAX_GENUS {
            return Err(semantic(format!("{what} {v} out of range (0..={MAX_GENUS})")));
        }
    }
    let genus = SurfaceGenus(doc.fiber_genus);
    let flags_in = doc.flags.unwrap_or_default();
    let flags = GroundTruthFlags {
        rational_or_ruled: flags_in.rational_or_ruled.unwrap_or_default(),
        ruled_base_genus: flags_in.ruling_base_genus,
        blowup_of_sphere_bundle: flags_in.blowup_of_sphere_bundle.unwrap_or_default(),
        known_manifold: flags_in.known_manifold,
    };
    let mut b = Factorization::builder(doc.name, doc.fiber_genus, doc.base_genus)
        .word(doc.word)
        .relatively_minimal(flags_in.relatively_minimal)
        .flags(flags);
    for c in doc.curves {
        let curve = match (c.kind.as_str(), c.class, c.side_genus) {
            ("nonsep", Some(class), None) => {
                if class.len() != genus.rank() {
                    return Err(semantic(format!(
                        "curve '{}': expected {} coordinates for genus {}, got {}",
                        c.name,
                        genus.rank(),
                        genus.get(),
                        class.len()
                    )));
                }
                Curve::NonSeparating(HomologyClass::new(ints(&class)))
            }
            ("sep", None, Some(k)) => Curve::Separating { side_genus: k },
            ("nonsep", ..) => return Err(semantic(format!("curve '{}': 'nonsep' needs exactly 'class'", c.name))),
            ("sep", ..) => {
                return Err(semantic(format!(
                    "curve '{}': 'sep' needs exactly 'side_genus'",
                    c.name
                )))
            }
            (other, ..) => return Err(semantic(format!("curve '{}': unknown kind '{other}'", c.name))),
        };
        b = b.curve(c.name, curve);
    }
    if let Some(hs) = doc.handles {
        let n = genus.rank();
        let mut mats = Vec::with_capacity(hs.len());
        for (k, rows) in hs.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(semantic(format!("handle matrix {k} must be {n}x{n}")));
            }
            let m = IntegerMatrix::from_rows(rows.iter().map(|r| ints(r)).collect()).expect("shape checked");
            mats.push(SymplecticMatrix::new(genus, m).map_err(|e| semantic(format!("handle matrix {k}: {e}")))?);
        }
        b = b.handles(mats);
    }
    b.build().map_err(|e| semantic(e.to_string()))
}

pub(super) fn write_json(f: &Factorization) -> String {
    let flags = f.flags();
    let json_flags = JsonFlags {
        rational_or_ruled: (flags.rational_or_ruled != Tristate::Unknown).then_some(flags.rational_or_ruled),
        ruling_base_genus: flags.ruled_base_genus,
        blowup_of_sphere_bundle: (flags.blowup_of_sphere_bundle != Tristate::Unknown)
            .then_some(flags.blowup_of_sphere_bundle),
        known_manifold: flags.known_manifold.clone(),
        relatively_minimal: f.relatively_minimal(),
    };
    let has_flags = !flags.is_default() || f.relatively_minimal().is_some();
    let doc = JsonDoc {
        format_version: FORMAT_VERSION,
        name: f.name().to_string(),
        fiber_genus: f.fiber_genus().get(),
        base_genus: f.base_genus(),
        convention: CONVENTION.to_string(),
        curves: f
            .curves()
            .iter()
            .map(|(name, c)| match c {
                Curve::NonSeparating(v) => JsonCurve {
                    name: name.clone(),
                    kind: "nonsep".into(),
                    class: Some(v.coords().iter().cloned().map(JsonInt).collect()),
                    side_genus: None,
                },
                Curve::Separating { side_genus } => JsonCurve {
                    name: name.clone(),
                    kind: "sep".into(),
                    class: None,
                    side_genus: Some(*side_genus),
                },
            })
            .collect(),
        word: f.word().to_vec(),
        handles: f.handle_monodromies().map(|hs| {
            hs.iter()
                .map(|m| {
                    m.matrix()
                        .row_iter()
                        .map(|r| r.iter().cloned().map(JsonInt).collect())
                        .collect()
                })
                .collect()
        }),
        flags: has_flags.then_some(json_flags),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
