//! Positive Dehn-twist factorizations and their homological monodromy.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::checks::GroundTruthFlags;
use crate::error::FibrationError;
use crate::surface::{transvection, Curve, SurfaceGenus, SymplecticMatrix};

/// Composition convention recorded in every serialized output.
pub const CONVENTION: &str = "basis a1,b1,...,ag,bg; <a_i,b_i>=+1; twist x -> x+<x,v>v on column vectors; \
     monodromy = T(w1)*T(w2)*...*T(wl); closure is tested on H1 only";

/// Homology-level closure of the monodromy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureVerdict {
    /// `h = 0` and the product is the identity.
    Closed,
    /// `h > 0` and the product equals the product of handle commutators.
    ClosedUpToCommutators,
    /// `h > 0` without handle monodromies.
    Unverified,
    Violated,
}

impl ClosureVerdict {
    pub fn is_closed(self) -> bool {
        matches!(self, ClosureVerdict::Closed | ClosureVerdict::ClosedUpToCommutators)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClosureVerdict::Closed => "closed",
            ClosureVerdict::ClosedUpToCommutators => "closed-up-to-commutators",
            ClosureVerdict::Unverified => "unverified",
            ClosureVerdict::Violated => "violated",
        }
    }
}

impl fmt::Display for ClosureVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiberCounts {
    /// Singular fibers.
    pub l: usize,
    /// Irreducible ones (non-separating vanishing cycle).
    pub n: usize,
    /// Reducible ones (separating vanishing cycle).
    pub s: usize,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A word of right-handed Dehn twists over a base of genus `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    name: String,
    fiber_genus: SurfaceGenus,
    base_genus: usize,
    curves: IndexMap<String, Curve>,
    word: Vec<String>,
    handle_monodromies: Option<Vec<SymplecticMatrix>>,
    relatively_minimal: Option<bool>,
    flags: GroundTruthFlags,
}

/// Collects the parts of a [`Factorization`]; all validation happens in
/// [`FactorizationBuilder::build`].
#[derive(Debug, Clone)]
pub struct FactorizationBuilder {
    name: String,
    fiber_genus: SurfaceGenus,
    base_genus: usize,
    curves: Vec<(String, Curve)>,
    word: Vec<String>,
    handle_monodromies: Option<Vec<SymplecticMatrix>>,
    relatively_minimal: Option<bool>,
    flags: GroundTruthFlags,
}

impl FactorizationBuilder {
    pub fn curve(mut self, name: impl Into<String>, curve: Curve) -> Self {
        self.curves.push((name.into(), curve));
        self
    }

    pub fn word<I, S>(mut self, letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.word.extend(letters.into_iter().map(Into::into));
        self
    }

    pub fn handles(mut self, handles: Vec<SymplecticMatrix>) -> Self {
        self.handle_monodromies = Some(handles);
        self
    }

    pub fn relatively_minimal(mut self, value: Option<bool>) -> Self {
        self.relatively_minimal = value;
        self
    }

    pub fn flags(mut self, flags: GroundTruthFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn build(self) -> Result<Factorization, FibrationError> {
        let g = self.fiber_genus;
        let mut curves = IndexMap::with_capacity(self.curves.len());
        for (name, curve) in self.curves {
            if !is_identifier(&name) {
                return Err(FibrationError::InvalidCurve {
                    name,
                    reason: "curve names must be identifiers".into(),
                });
            }
            if let Err(e) = curve.validate(g) {
                return Err(FibrationError::InvalidCurve {
                    name,
                    reason: e.to_string(),
                });
            }
            if curves.contains_key(&name) {
                return Err(FibrationError::DuplicateCurve(name));
            }
            curves.insert(name, curve);
        }
        if self.word.is_empty() {
            return Err(FibrationError::EmptyWord);
        }
        if let Some(bad) = self.word.iter().find(|w| !curves.contains_key(*w)) {
            return Err(FibrationError::UndeclaredCurve(bad.clone()));
        }
        if let Some(handles) = &self.handle_monodromies {
            if self.base_genus == 0 {
                return Err(FibrationError::Handles(
                    "handle monodromies given for a sphere base".into(),
                ));
            }
            if handles.len() != 2 * self.base_genus {
                return Err(FibrationError::Handles(format!(
                    "expected {} matrices for base genus {}, got {}",
                    2 * self.base_genus,
                    self.base_genus,
                    handles.len()
                )));
            }
            if let Some(m) = handles.iter().find(|m| m.genus() != g) {
                return Err(FibrationError::Handles(format!(
                    "matrix for genus {} in a genus {g} fibration",
                    m.genus()
                )));
            }
        }
        if self.flags.ruled_base_genus.is_some() && self.flags.rational_or_ruled != crate::checks::Tristate::True {
            return Err(FibrationError::Flags(
                "ruling_base_genus requires rational_or_ruled = true".into(),
            ));
        }
        Ok(Factorization {
            name: self.name,
            fiber_genus: g,
            base_genus: self.base_genus,
            curves,
            word: self.word,
            handle_monodromies: self.handle_monodromies,
            relatively_minimal: self.relatively_minimal,
            flags: self.flags,
        })
    }
}

impl Factorization {
    pub fn builder(name: impl Into<String>, fiber_genus: usize, base_genus: usize) -> FactorizationBuilder {
        FactorizationBuilder {
            name: name.into(),
            fiber_genus: SurfaceGenus(fiber_genus),
            base_genus,
            curves: Vec::new(),
            word: Vec::new(),
            handle_monodromies: None,
            relatively_minimal: None,
            flags: GroundTruthFlags::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fiber_genus(&self) -> SurfaceGenus {
        self.fiber_genus
    }

    pub fn base_genus(&self) -> usize {
        self.base_genus
    }

    pub fn curves(&self) -> &IndexMap<String, Curve> {
        &self.curves
    }

    pub fn word(&self) -> &[String] {
        &self.word
    }

    pub fn handle_monodromies(&self) -> Option<&[SymplecticMatrix]> {
        self.handle_monodromies.as_deref()
    }

    pub fn relatively_minimal(&self) -> Option<bool> {
        self.relatively_minimal
    }

    pub fn flags(&self) -> &GroundTruthFlags {
        &self.flags
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_flags(mut self, flags: GroundTruthFlags) -> Self {
        self.flags = flags;
        self
    }

    /// Curves in word order.
    pub fn letters(&self) -> impl Iterator<Item = &Curve> {
        self.word.iter().map(|w| &self.curves[w])
    }

    /// Transvection matrices in word order.
    pub fn twist_matrices(&self) -> Vec<SymplecticMatrix> {
        self.letters()
            .map(|c| transvection(c, self.fiber_genus).expect("curves validated at construction"))
            .collect()
    }

    /// `P_j = T(w_1) ... T(w_j)` for `j = 1..=l`.
    pub fn prefix_products(&self) -> Vec<SymplecticMatrix> {
        let mut acc = SymplecticMatrix::identity(self.fiber_genus);
        self.twist_matrices()
            .iter()
            .map(|t| {
                acc = acc.compose(t);
                acc.clone()
            })
            .collect()
    }

    /// The word rotated left by `k` letters.
    pub fn rotated(&self, k: usize) -> Self {
        let mut f = self.clone();
        let l = f.word.len();
        f.word.rotate_left(k % l);
        f
    }
}

pub fn counts(f: &Factorization) -> FiberCounts {
    let s = f.letters().filter(|c| c.is_separating()).count();
    let l = f.word.len();
    FiberCounts { l, n: l - s, s }
}

pub fn monodromy_product(f: &Factorization) -> SymplecticMatrix {
    f.twist_matrices()
        .iter()
        .fold(SymplecticMatrix::identity(f.fiber_genus), |acc, t| acc.compose(t))
}

/// Homology-level closure test. This is necessary, not sufficient, for the
/// word to be a relator in the mapping class group.
pub fn verify_closure(f: &Factorization) -> ClosureVerdict {
    let product = monodromy_product(f);
    if f.base_genus == 0 {
        return if product.is_identity() {
            ClosureVerdict::Closed
        } else {
            ClosureVerdict::Violated
        };
    }
    let Some(handles) = &f.handle_monodromies else {
        return ClosureVerdict::Unverified;
    };
    let commutators = handles
        .chunks(2)
        .map(|pair| pair[0].commutator(&pair[1]))
        .fold(SymplecticMatrix::identity(f.fiber_genus), |acc, c| acc.compose(&c));
    if product == commutators {
        ClosureVerdict::ClosedUpToCommutators
    } else {
        ClosureVerdict::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntegerMatrix;
    use crate::surface::HomologyClass;

    pub(crate) fn elliptic(k: usize) -> Factorization {
        Factorization::builder(format!("E{k}"), 1, 0)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .curve("b", Curve::NonSeparating(HomologyClass::from_i64(&[0, 1])))
            .word(std::iter::repeat_n(["a", "b"], 6 * k).flatten())
            .build()
            .unwrap()
    }

    fn separating(m: usize) -> Factorization {
        Factorization::builder("sep", 2, 0)
            .curve("c", Curve::Separating { side_genus: 1 })
            .word(std::iter::repeat_n("c", m))
            .build()
            .unwrap()
    }

    #[test]
    fn counts_of_anchor_words() {
        assert_eq!(counts(&elliptic(1)), FiberCounts { l: 12, n: 12, s: 0 });
        assert_eq!(counts(&separating(1)), FiberCounts { l: 1, n: 0, s: 1 });
    }

    #[test]
    fn elliptic_word_closes() {
        assert!(monodromy_product(&elliptic(1)).is_identity());
        assert_eq!(verify_closure(&elliptic(1)), ClosureVerdict::Closed);
        assert!(monodromy_product(&separating(3)).is_identity());
    }

    #[test]
    fn two_letter_product() {
        // [[1,-1],[0,1]] * [[1,0],[1,1]]
        let f = Factorization::builder("ab", 1, 0)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .curve("b", Curve::NonSeparating(HomologyClass::from_i64(&[0, 1])))
            .word(["a", "b"])
            .build()
            .unwrap();
        assert_eq!(
            *monodromy_product(&f).matrix(),
            IntegerMatrix::from_i64_rows(&[&[0, -1], &[1, 1]]).unwrap()
        );
        assert_eq!(verify_closure(&f), ClosureVerdict::Violated);
    }

    #[test]
    fn single_twist_is_violated() {
        let f = Factorization::builder("a", 1, 0)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .word(["a"])
            .build()
            .unwrap();
        assert_eq!(verify_closure(&f), ClosureVerdict::Violated);
        assert_eq!(counts(&f).l, 1);
    }

    #[test]
    fn positive_base_genus() {
        let g = SurfaceGenus(1);
        let base = Factorization::builder("h1", 1, 1)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .curve("b", Curve::NonSeparating(HomologyClass::from_i64(&[0, 1])))
            .word(std::iter::repeat_n(["a", "b"], 6).flatten());
        assert_eq!(
            verify_closure(&base.clone().build().unwrap()),
            ClosureVerdict::Unverified
        );
        let t = transvection(&Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])), g).unwrap();
        let f = base.clone().handles(vec![t.clone(), t.clone()]).build().unwrap();
        assert_eq!(verify_closure(&f), ClosureVerdict::ClosedUpToCommutators);

        let single = Factorization::builder("h1", 1, 1)
            .curve("a", Curve::NonSeparating(HomologyClass::from_i64(&[1, 0])))
            .word(["a"])
            .handles(vec![t.clone(), t])
            .build()
            .unwrap();
        assert_eq!(verify_closure(&single), ClosureVerdict::Violated);
    }

    #[test]
    fn builder_errors() {
        let a = Curve::NonSeparating(HomologyClass::from_i64(&[1, 0]));
        let err = Factorization::builder("x", 1, 0).curve("a", a.clone()).build();
        assert_eq!(err, Err(FibrationError::EmptyWord));
        let err = Factorization::builder("x", 1, 0)
            .curve("a", a.clone())
            .word(["x"])
            .build();
        assert_eq!(err, Err(FibrationError::UndeclaredCurve("x".into())));
        let err = Factorization::builder("x", 1, 0)
            .curve("a", a.clone())
            .curve("a", a.clone())
            .word(["a"])
            .build();
        assert_eq!(err, Err(FibrationError::DuplicateCurve("a".into())));
        let err = Factorization::builder("x", 1, 0)
            .curve("a", a)
            .word(["a"])
            .handles(vec![])
            .build();
        assert!(matches!(err, Err(FibrationError::Handles(_))));
    }

    #[test]
    fn rotation_preserves_closure() {
        let e = elliptic(1);
        for k in 0..12 {
            let r = e.rotated(k);
            assert_eq!(counts(&r), counts(&e));
            assert!(monodromy_product(&r).is_identity());
        }
    }
}
