//! Strategies shared by the integration tests.
#![allow(dead_code)]

use lefschetz::checks::{GroundTruthFlags, Tristate};
use lefschetz::fibration::Factorization;
use lefschetz::surface::{is_primitive, transvection, Curve, HomologyClass, SurfaceGenus, SymplecticMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn primitive(g: usize) -> impl Strategy<Value = HomologyClass> {
    let small = prop::collection::vec(-5i64..=5, 2 * g).prop_map(|v| HomologyClass::from_i64(&v));
    // one huge coordinate next to a unit keeps the class primitive
    let huge = (any::<i64>(), 0..2 * g).prop_map(move |(x, i)| {
        let mut c = vec![BigInt::from(0); 2 * g];
        c[i] = BigInt::from(x) * BigInt::from(u64::MAX);
        c[(i + 1) % (2 * g)] = BigInt::from(1);
        HomologyClass::new(c)
    });
    prop_oneof![9 => small, 1 => huge].prop_filter("primitive", is_primitive)
}

pub fn curve(g: usize) -> BoxedStrategy<Curve> {
    let nonsep = primitive(g).prop_map(Curve::NonSeparating);
    if g >= 2 {
        prop_oneof![3 => nonsep, 1 => (1..g).prop_map(|k| Curve::Separating { side_genus: k })].boxed()
    } else {
        nonsep.boxed()
    }
}

pub fn symplectic(g: usize) -> impl Strategy<Value = SymplecticMatrix> {
    prop::collection::vec((primitive(g), any::<bool>()), 0..4).prop_map(move |fs| {
        fs.iter()
            .fold(SymplecticMatrix::identity(SurfaceGenus(g)), |acc, (v, inv)| {
                let t = transvection(&Curve::NonSeparating(v.clone()), SurfaceGenus(g)).unwrap();
                acc.compose(&if *inv { t.inverse() } else { t })
            })
    })
}

fn tristate() -> impl Strategy<Value = Tristate> {
    prop_oneof![Just(Tristate::True), Just(Tristate::False), Just(Tristate::Unknown)]
}

fn flags() -> impl Strategy<Value = GroundTruthFlags> {
    (
        tristate(),
        prop::option::of(0usize..4),
        tristate(),
        prop::option::of("[ -~é]{0,10}"),
    )
        .prop_map(
            |(rational_or_ruled, ruled, blowup_of_sphere_bundle, known_manifold)| GroundTruthFlags {
                rational_or_ruled,
                ruled_base_genus: ruled.filter(|_| rational_or_ruled == Tristate::True),
                blowup_of_sphere_bundle,
                known_manifold,
            },
        )
}

/// Valid factorizations of fiber genus 1..=3 over a base of genus 0 or 1.
pub fn factorization() -> impl Strategy<Value = Factorization> {
    factorization_with(3, 11)
}

/// Fiber genus `1..=max_genus`, words of length `1..=max_word`.
pub fn factorization_with(max_genus: usize, max_word: usize) -> impl Strategy<Value = Factorization> {
    (1usize..=max_genus, 0usize..=1)
        .prop_flat_map(move |(g, h)| {
            (
                Just(g),
                Just(h),
                "[ -~é]{0,12}",
                prop::collection::vec(curve(g), 1..5),
                prop::collection::vec(0usize..16, 1..=max_word),
                flags(),
                prop::option::of(any::<bool>()),
                prop::option::of(prop::collection::vec(symplectic(g), 2 * h)),
            )
        })
        .prop_map(|(g, h, name, curves, letters, flags, minimal, handles)| {
            let names: Vec<String> = (0..curves.len()).map(|i| format!("c{i}")).collect();
            let mut b = Factorization::builder(name, g, h)
                .word(letters.iter().map(|&i| names[i % names.len()].clone()))
                .flags(flags)
                .relatively_minimal(minimal);
            for (n, c) in names.iter().zip(curves) {
                b = b.curve(n.clone(), c);
            }
            if let Some(hs) = handles.filter(|_| h > 0) {
                b = b.handles(hs);
            }
            b.build().expect("generated factorization is valid")
        })
}
