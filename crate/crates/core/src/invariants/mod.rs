//! Invariants of the total space of a Lefschetz fibration.

mod kodaira;

pub use kodaira::{
    curve_kodaira, kneser_max_degree, kodaira_dimension, subadditivity_holds, DegreeBound, KodairaDim, KodairaInput,
    Sign,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::InvariantError;
use crate::fibration::{counts, verify_closure, ClosureVerdict, Factorization, CONVENTION};
use crate::linalg::{smith_normal_form, IntegerMatrix};
use crate::meyer::{sigma_over_sphere, SignatureBreakdown};
use crate::serde_util;
use crate::surface::Curve;

/// Everything derived from one factorization over the sphere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub l: usize,
    pub n: usize,
    pub s: usize,
    pub e: i64,
    pub b1: usize,
    #[serde(serialize_with = "serde_util::bigint_seq")]
    pub torsion: Vec<BigInt>,
    pub b2: i64,
    pub b_plus: i64,
    pub b_minus: i64,
    pub sigma: i64,
    pub c1_squared: i64,
    #[serde(serialize_with = "serde_util::rational")]
    pub hodge_pairing: BigRational,
    pub closure: ClosureVerdict,
    pub convention: String,
}

/// `e = 4(g-1)(h-1) + l`.
pub fn euler_number(g: usize, h: usize, l: usize) -> i64 {
    4 * (g as i64 - 1) * (h as i64 - 1) + l as i64
}

/// `c_1^2 = 2e + 3σ`.
pub fn chern_square(e: i64, sigma: i64) -> i64 {
    2 * e + 3 * sigma
}

/// Degree of the Hodge bundle along the moduli map: `(l + σ) / 4`.
pub fn hodge_pairing(l: usize, sigma: i64) -> BigRational {
    BigRational::new(BigInt::from(l as i64 + sigma), BigInt::from(4))
}

/// Betti data of the total space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyData {
    pub b1: usize,
    #[serde(serialize_with = "serde_util::bigint_seq")]
    pub torsion: Vec<BigInt>,
    pub b2: i64,
    pub b_plus: i64,
    pub b_minus: i64,
}

fn require_closed_sphere(f: &Factorization) -> Result<(), InvariantError> {
    if f.base_genus() != 0 {
        return Err(InvariantError::WrongBaseGenus(f.base_genus()));
    }
    match verify_closure(f) {
        ClosureVerdict::Closed => Ok(()),
        v => Err(InvariantError::NotClosed(v)),
    }
}

/// `H_1(M) = Z^{2g} / <non-separating vanishing classes>`, then
/// `b2 = l + 2 - 2(2g - b1)` from the handle count and `b± = (b2 ± σ)/2`.
pub fn homology_with_sigma(f: &Factorization, sigma: i64) -> Result<HomologyData, InvariantError> {
    require_closed_sphere(f)?;
    let rank_h1 = f.fiber_genus().rank();
    let classes: Vec<_> = f
        .letters()
        .filter_map(|c| match c {
            Curve::NonSeparating(v) => Some(v),
            Curve::Separating { .. } => None,
        })
        .collect();
    let (rank, torsion) = if classes.is_empty() {
        (0, Vec::new())
    } else {
        let mut m = IntegerMatrix::zeros(rank_h1, classes.len());
        for (j, v) in classes.iter().enumerate() {
            for (i, x) in v.coords().iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        let snf = smith_normal_form(&m);
        (snf.rank(), snf.torsion())
    };
    let b1 = rank_h1 - rank;
    let l = f.word().len() as i64;
    let b2 = l + 2 - 2 * (rank_h1 as i64 - b1 as i64);
    if (b2 + sigma).rem_euclid(2) != 0 {
        return Err(InvariantError::ParityError { b2, sigma });
    }
    Ok(HomologyData {
        b1,
        torsion,
        b2,
        b_plus: (b2 + sigma) / 2,
        b_minus: (b2 - sigma) / 2,
    })
}

pub fn homology_over_sphere(f: &Factorization) -> Result<HomologyData, InvariantError> {
    require_closed_sphere(f)?;
    let sigma = sigma_over_sphere(f)?.total;
    homology_with_sigma(f, sigma)
}

/// Full report together with the signature breakdown it was built from.
pub fn compute_report_with_breakdown(
    f: &Factorization,
) -> Result<(InvariantReport, SignatureBreakdown), InvariantError> {
    require_closed_sphere(f)?;
    let breakdown = sigma_over_sphere(f)?;
    let sigma = breakdown.total;
    let hom = homology_with_sigma(f, sigma)?;
    let c = counts(f);
    let e = euler_number(f.fiber_genus().get(), 0, c.l);
    let report = InvariantReport {
        l: c.l,
        n: c.n,
        s: c.s,
        e,
        b1: hom.b1,
        torsion: hom.torsion,
        b2: hom.b2,
        b_plus: hom.b_plus,
        b_minus: hom.b_minus,
        sigma,
        c1_squared: chern_square(e, sigma),
        hodge_pairing: hodge_pairing(c.l, sigma),
        closure: ClosureVerdict::Closed,
        convention: CONVENTION.to_string(),
    };
    Ok((report, breakdown))
}

pub fn compute_report(f: &Factorization) -> Result<InvariantReport, InvariantError> {
    compute_report_with_breakdown(f).map(|(r, _)| r)
}
