//! First homology of a closed genus-g surface, simple closed curves by their
//! homological data, and Dehn twists acting as symplectic transvections.
//!
//! Conventions: the basis is ordered `a_1, b_1, ..., a_g, b_g` with
//! `<a_i, b_i> = +1`; a right-handed twist about a curve of class `v` acts by
//! `x -> x + <x, v> v`. Matrices act on column vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::SurfaceError;
use crate::linalg::{is_symplectic, IntegerMatrix};

/// Genus of a closed orientable surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurfaceGenus(pub usize);

impl SurfaceGenus {
    pub fn get(self) -> usize {
        self.0
    }

    /// Rank of `H_1`, i.e. `2g`.
    pub fn rank(self) -> usize {
        2 * self.0
    }
}

impl fmt::Display for SurfaceGenus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A class in `H_1(F; Z)` in the basis `a_1, b_1, ..., a_g, b_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    coords: Vec<BigInt>,
}

impl HomologyClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        HomologyClass { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        HomologyClass::new(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(genus: SurfaceGenus) -> Self {
        HomologyClass::new(vec![BigInt::zero(); genus.rank()])
    }

    /// The basis vector `a_i` (1-based `i`).
    pub fn a(genus: SurfaceGenus, i: usize) -> Self {
        let mut c = Self::zero(genus);
        c.coords[2 * (i - 1)] = BigInt::one();
        c
    }

    /// The basis vector `b_i` (1-based `i`).
    pub fn b(genus: SurfaceGenus, i: usize) -> Self {
        let mut c = Self::zero(genus);
        c.coords[2 * (i - 1) + 1] = BigInt::one();
        c
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        HomologyClass::new(self.coords.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        HomologyClass::new(self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect())
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Nonzero with coprime coordinates.
pub fn is_primitive(v: &HomologyClass) -> bool {
    let g = v.coords.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    g.is_one()
}

/// The Gram matrix `J` of the intersection form.
pub fn standard_form(genus: usize) -> IntegerMatrix {
    let mut j = IntegerMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j[(2 * i, 2 * i + 1)] = BigInt::one();
        j[(2 * i + 1, 2 * i)] = -BigInt::one();
    }
    j
}

/// Intersection pairing `<x, y>`.
pub fn pairing(x: &HomologyClass, y: &HomologyClass, genus: SurfaceGenus) -> Result<BigInt, SurfaceError> {
    let n = genus.rank();
    for v in [x, y] {
        if v.len() != n {
            return Err(crate::error::LinalgError::DimensionMismatch {
                expected: format!("{n} coordinates"),
                found: format!("{}", v.len()),
            }
            .into());
        }
    }
    Ok((0..genus.get())
        .map(|i| &x.coords[2 * i] * &y.coords[2 * i + 1] - &x.coords[2 * i + 1] * &y.coords[2 * i])
        .sum())
}

/// A vanishing cycle, identified by its homological data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Curve {
    NonSeparating(HomologyClass),
    /// Separates off a subsurface of the given genus; null-homologous.
    Separating {
        side_genus: usize,
    },
}

impl Curve {
    /// Checks primitivity and arity, or the side-genus range.
    pub fn validate(&self, genus: SurfaceGenus) -> Result<(), SurfaceError> {
        match self {
            Curve::NonSeparating(v) => {
                if v.len() != genus.rank() {
                    return Err(SurfaceError::InvalidCurve(format!(
                        "expected {} coordinates, got {}",
                        genus.rank(),
                        v.len()
                    )));
                }
                if !is_primitive(v) {
                    return Err(SurfaceError::InvalidCurve(format!("class {v} not primitive")));
                }
                Ok(())
            }
            Curve::Separating { side_genus } => {
                if genus.get() < 2 || *side_genus < 1 || *side_genus > genus.get() - 1 {
                    return Err(SurfaceError::InvalidCurve(format!(
                        "side genus {side_genus} out of range for fiber genus {genus} (need 1..=g-1)"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn is_separating(&self) -> bool {
        matches!(self, Curve::Separating { .. })
    }

    pub fn class(&self, genus: SurfaceGenus) -> HomologyClass {
        match self {
            Curve::NonSeparating(v) => v.clone(),
            Curve::Separating { .. } => HomologyClass::zero(genus),
        }
    }
}

/// An element of `Sp(2g, Z)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix {
    genus: SurfaceGenus,
    matrix: IntegerMatrix,
}

impl SymplecticMatrix {
    pub fn new(genus: SurfaceGenus, matrix: IntegerMatrix) -> Result<Self, SurfaceError> {
        if !is_symplectic(&matrix, genus.get())? {
            return Err(SurfaceError::NotSymplectic(genus.get()));
        }
        Ok(SymplecticMatrix { genus, matrix })
    }

    pub fn identity(genus: SurfaceGenus) -> Self {
        SymplecticMatrix {
            genus,
            matrix: IntegerMatrix::identity(genus.rank()),
        }
    }

    pub fn genus(&self) -> SurfaceGenus {
        self.genus
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntegerMatrix {
        self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Product `self * rhs`. Panics if the genera differ.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.genus, rhs.genus, "genus mismatch in symplectic product");
        SymplecticMatrix {
            genus: self.genus,
            matrix: &self.matrix * &rhs.matrix,
        }
    }

    /// `M^{-1} = -J Mᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = standard_form(self.genus.get());
        let inv = (&(&j * &self.matrix.transpose()) * &j).map(|x| -x);
        SymplecticMatrix {
            genus: self.genus,
            matrix: inv,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.genus), |acc, _| acc.compose(self))
    }

    /// Commutator `[self, other] = self * other * self^{-1} * other^{-1}`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).compose(&self.inverse()).compose(&other.inverse())
    }
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sp(g={}){:?}", self.genus, self.matrix)
    }
}

/// Homological action of the right-handed Dehn twist about `c`.
pub fn transvection(c: &Curve, genus: SurfaceGenus) -> Result<SymplecticMatrix, SurfaceError> {
    c.validate(genus)?;
    let Curve::NonSeparating(v) = c else {
        return Ok(SymplecticMatrix::identity(genus));
    };
    // T = I + v (J v)ᵀ, so that T x = x + <x, v> v
    let n = genus.rank();
    let j = standard_form(genus.get());
    let jv = j.mul_vec(v.coords())?;
    let mut m = IntegerMatrix::identity(n);
    for r in 0..n {
        for s in 0..n {
            m[(r, s)] += &v.coords()[r] * &jv[s];
        }
    }
    Ok(SymplecticMatrix { genus, matrix: m })
}

#[cfg(test)]
mod tests {
    use super::*;

    const G1: SurfaceGenus = SurfaceGenus(1);
    const G2: SurfaceGenus = SurfaceGenus(2);

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn pairing_convention() {
        let a = HomologyClass::a(G1, 1);
        let bb = HomologyClass::b(G1, 1);
        assert_eq!(pairing(&a, &bb, G1).unwrap(), b(1));
        assert_eq!(pairing(&bb, &a, G1).unwrap(), b(-1));
        let x = HomologyClass::a(G2, 1).add(&HomologyClass::b(G2, 2));
        assert_eq!(pairing(&x, &HomologyClass::b(G2, 1), G2).unwrap(), b(1));
    }

    #[test]
    fn pairing_rejects_wrong_length() {
        let x = HomologyClass::from_i64(&[1, 0, 0]);
        assert!(pairing(&x, &x, G1).is_err());
    }

    #[test]
    fn transvection_of_a() {
        let t = transvection(&Curve::NonSeparating(HomologyClass::a(G1, 1)), G1).unwrap();
        assert_eq!(*t.matrix(), IntegerMatrix::from_i64_rows(&[&[1, -1], &[0, 1]]).unwrap());
    }

    #[test]
    fn separating_twist_is_trivial_on_homology() {
        let t = transvection(&Curve::Separating { side_genus: 1 }, G2).unwrap();
        assert!(t.is_identity());
        assert_eq!(t.matrix().rows(), 4);
    }

    #[test]
    fn powers_of_a_twist_never_return() {
        let t = transvection(&Curve::NonSeparating(HomologyClass::a(G1, 1)), G1).unwrap();
        let bvec = HomologyClass::b(G1, 1);
        for k in 1..=20u32 {
            let p = t.pow(k);
            assert!(!p.is_identity());
            let image = p.matrix().mul_vec(bvec.coords()).unwrap();
            assert_eq!(image, vec![b(-(k as i64)), b(1)]);
        }
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&HomologyClass::from_i64(&[1, 0])));
        assert!(!is_primitive(&HomologyClass::from_i64(&[2, 4])));
        assert!(!is_primitive(&HomologyClass::from_i64(&[0, 0])));
        assert!(is_primitive(&HomologyClass::from_i64(&[-3, 2])));
    }

    #[test]
    fn curve_validation() {
        assert!(Curve::Separating { side_genus: 1 }.validate(G1).is_err());
        assert!(Curve::Separating { side_genus: 0 }.validate(G2).is_err());
        assert!(Curve::Separating { side_genus: 2 }.validate(G2).is_err());
        assert!(Curve::Separating { side_genus: 1 }.validate(G2).is_ok());
        assert!(Curve::NonSeparating(HomologyClass::from_i64(&[2, 4]))
            .validate(G1)
            .is_err());
        assert!(Curve::NonSeparating(HomologyClass::from_i64(&[1, 0, 0]))
            .validate(G1)
            .is_err());
    }

    #[test]
    fn inverse_and_commutator() {
        let t = transvection(&Curve::NonSeparating(HomologyClass::from_i64(&[1, 1, 0, 1])), G2).unwrap();
        assert!(t.compose(&t.inverse()).is_identity());
        assert!(t.commutator(&t).is_identity());
        assert!(SymplecticMatrix::new(G2, t.matrix().clone()).is_ok());
    }
}
