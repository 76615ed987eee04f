//! Round trips through both document formats, golden files, and parser
//! robustness against corrupted input.

mod common;

use std::path::PathBuf;

use lefschetz::fibration::Factorization;
use lefschetz::format::{parse, parse_str, serialize, Format, SourceDocument};
use lefschetz::surface::{Curve, HomologyClass};
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn e1() -> Factorization {
    Factorization::builder("E1", 1, 0)
        .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
        .curve("b", Curve::NonSeparating(HomologyClass::from_i64(&[0, 1])))
        .word(std::iter::repeat_n(["a", "b"], 6).flatten())
        .build()
        .unwrap()
}

/// Compares against a checked-in file; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{} is stale", path.display());
}

#[test]
fn golden_e1_dsl() {
    golden("e1.lf", &serialize(&e1(), Format::Dsl));
    assert_eq!(
        parse_str(&std::fs::read_to_string(fixture("e1.lf")).unwrap()).unwrap(),
        e1()
    );
}

#[test]
fn golden_e1_json() {
    golden("e1.json", &serialize(&e1(), Format::Json));
    assert_eq!(
        parse_str(&std::fs::read_to_string(fixture("e1.json")).unwrap()).unwrap(),
        e1()
    );
}

fn assert_positioned(text: &str) -> Result<(), TestCaseError> {
    let lines = text.split('\n').count();
    if let Err(diags) = parse(&SourceDocument::new("noise", text)) {
        prop_assert!(!diags.is_empty());
        for d in &diags {
            prop_assert!(d.line >= 1 && d.column >= 1, "{d}");
            prop_assert!(d.line <= lines + 1, "{d} beyond {lines} lines");
        }
        prop_assert!(diags.iter().any(|d| d.is_error()));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dsl_round_trip(f in common::factorization()) {
        let text = serialize(&f, Format::Dsl);
        let back = parse_str(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize(&back, Format::Dsl), text);
    }

    #[test]
    fn json_round_trip(f in common::factorization()) {
        let text = serialize(&f, Format::Json);
        let back = parse_str(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize(&back, Format::Json), text);
    }

    #[test]
    fn formats_agree(f in common::factorization()) {
        let via_json = parse_str(&serialize(&f, Format::Json)).unwrap();
        prop_assert_eq!(serialize(&via_json, Format::Dsl), serialize(&f, Format::Dsl));
    }

    #[test]
    fn corrupted_dsl_is_diagnosed(
        f in common::factorization(),
        edits in prop::collection::vec((any::<prop::sample::Index>(), "[{}()\"#,=a-z0-9 \n-]{0,3}", 0usize..4), 1..4),
    ) {
        let mut text = serialize(&f, Format::Dsl);
        for (at, insert, delete) in edits {
            let mut i = at.index(text.len() + 1);
            while !text.is_char_boundary(i) { i -= 1; }
            let mut j = (i + delete).min(text.len());
            while !text.is_char_boundary(j) { j += 1; }
            text.replace_range(i..j, &insert);
        }
        assert_positioned(&text)?;
    }

    #[test]
    fn corrupted_json_is_diagnosed(f in common::factorization(), cut in any::<prop::sample::Index>(), junk in "[{}\\[\\]\":,a-z0-9 \n]{0,4}") {
        let mut text = serialize(&f, Format::Json);
        let mut i = cut.index(text.len());
        while !text.is_char_boundary(i) { i -= 1; }
        text.insert_str(i, &junk);
        assert_positioned(&text)?;
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,200}") {
        assert_positioned(&text)?;
    }
}

#[test]
fn invalid_utf8_is_positioned() {
    let d = SourceDocument::from_bytes("x", b"fibration \"a\" {\n  fiber_genus \xff\n").unwrap_err();
    assert_eq!((d.line, d.column), (2, 15));
}
