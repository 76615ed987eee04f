//! Exhaustive enumeration of short positive words over a fixed generator
//! set, keeping those whose homological monodromy is trivial.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::CatalogError;
use crate::fibration::{ClosureVerdict, Factorization};
use crate::invariants::{compute_report, InvariantReport};
use crate::linalg::{rank, IntegerMatrix};
use crate::surface::{transvection, Curve, SurfaceGenus, SymplecticMatrix};

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "LEFSCHETZ_SEARCH_BUDGET";
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub g: usize,
    pub generators: Vec<(String, Curve)>,
    pub max_length: usize,
    /// Keep only closed words. When false every word up to `max_length`
    /// is listed with its verdict.
    pub require_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub word: Vec<String>,
    pub closure: ClosureVerdict,
    /// Present for closed words whose invariants are consistent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<InvariantReport>,
}

/// Budget from [`BUDGET_ENV`], or the default when unset.
pub fn budget_from_env() -> Result<u128, CatalogError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CatalogError::InvalidSearch(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `|generators|^max_length`, saturating.
pub fn state_count(generators: usize, max_length: usize) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..max_length {
        n = n.saturating_mul(generators as u128);
    }
    n
}

struct Ctx<'a> {
    spec: &'a SearchSpec,
    twists: Vec<SymplecticMatrix>,
    identity: IntegerMatrix,
}

impl Ctx<'_> {
    /// Each transvection changes `rank(P - I)` by at most one.
    fn can_close(&self, p: &SymplecticMatrix, remaining: usize) -> bool {
        if !self.spec.require_closed {
            return true;
        }
        let diff = p.matrix().checked_sub(&self.identity).expect("same shape");
        rank(&diff) <= remaining
    }

    fn dfs(&self, word: &mut Vec<usize>, p: &SymplecticMatrix, out: &mut Vec<(Vec<usize>, bool)>) {
        let closed = p.is_identity();
        if !word.is_empty() && (closed || !self.spec.require_closed) {
            out.push((word.clone(), closed));
        }
        let remaining = self.spec.max_length - word.len();
        if remaining == 0 {
            return;
        }
        for (i, t) in self.twists.iter().enumerate() {
            let q = p.compose(t);
            if self.can_close(&q, remaining - 1) {
                word.push(i);
                self.dfs(word, &q, out);
                word.pop();
            }
        }
    }
}

fn validate(spec: &SearchSpec) -> Result<(), CatalogError> {
    if spec.max_length == 0 {
        return Err(CatalogError::InvalidSearch("max_length must be at least 1".into()));
    }
    if spec.generators.is_empty() {
        return Err(CatalogError::InvalidSearch("no generators".into()));
    }
    for (i, (name, c)) in spec.generators.iter().enumerate() {
        if !crate::fibration::is_identifier(name) {
            return Err(CatalogError::InvalidSearch(format!(
                "'{name}' is not a valid curve name"
            )));
        }
        if spec.generators[..i].iter().any(|(n, _)| n == name) {
            return Err(CatalogError::InvalidSearch(format!("duplicate generator '{name}'")));
        }
        c.validate(SurfaceGenus(spec.g))
            .map_err(|e| CatalogError::InvalidSearch(format!("generator '{name}': {e}")))?;
    }
    Ok(())
}

/// Runs the search with an explicit budget and optional worker count.
/// Output is sorted lexicographically by word and does not depend on
/// `workers`.
pub fn search_with_budget(
    spec: &SearchSpec,
    budget: u128,
    workers: Option<usize>,
) -> Result<Vec<SearchHit>, CatalogError> {
    validate(spec)?;
    let states = state_count(spec.generators.len(), spec.max_length);
    if states > budget {
        return Err(CatalogError::BudgetExceeded { states, budget });
    }
    let genus = SurfaceGenus(spec.g);
    let ctx = Ctx {
        spec,
        twists: spec
            .generators
            .iter()
            .map(|(_, c)| transvection(c, genus).expect("validated"))
            .collect(),
        identity: IntegerMatrix::identity(genus.rank()),
    };
    let shard = |first: usize| {
        let mut out = Vec::new();
        let p = ctx.twists[first].clone();
        if ctx.can_close(&p, spec.max_length - 1) {
            ctx.dfs(&mut vec![first], &p, &mut out);
        }
        out
    };
    let run = || -> Vec<(Vec<usize>, bool)> { (0..ctx.twists.len()).into_par_iter().flat_map_iter(shard).collect() };
    let raw = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CatalogError::InvalidSearch(e.to_string()))?
            .install(run),
        None => run(),
    };

    let names: Vec<&str> = spec.generators.iter().map(|(n, _)| n.as_str()).collect();
    let mut hits: Vec<SearchHit> = raw
        .into_par_iter()
        .map(|(w, closed)| {
            let word: Vec<String> = w.iter().map(|&i| names[i].to_string()).collect();
            let report = if closed { report_for(spec, &word) } else { None };
            SearchHit {
                word,
                closure: if closed {
                    ClosureVerdict::Closed
                } else {
                    ClosureVerdict::Violated
                },
                report,
            }
        })
        .collect();
    hits.sort_by(|a, b| a.word.cmp(&b.word));
    Ok(hits)
}

fn report_for(spec: &SearchSpec, word: &[String]) -> Option<InvariantReport> {
    let mut b = Factorization::builder("search", spec.g, 0).word(word.iter().cloned());
    for (n, c) in &spec.generators {
        if word.contains(n) {
            b = b.curve(n.clone(), c.clone());
        }
    }
    compute_report(&b.build().ok()?).ok()
}

/// All words of length `1..=max_length` meeting the spec, using the budget
/// from the environment.
pub fn search_min_relators(spec: &SearchSpec) -> Result<Vec<SearchHit>, CatalogError> {
    search_with_budget(spec, budget_from_env()?, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::HomologyClass;

    fn torus(gens: &[(&str, [i64; 2])], max_length: usize) -> SearchSpec {
        SearchSpec {
            g: 1,
            generators: gens
                .iter()
                .map(|(n, v)| (n.to_string(), Curve::NonSeparating(HomologyClass::from_i64(v))))
                .collect(),
            max_length,
            require_closed: true,
        }
    }

    #[test]
    fn no_short_relators_on_the_torus() {
        let spec = torus(&[("a", [1, 0]), ("b", [0, 1])], 11);
        assert!(search_with_budget(&spec, DEFAULT_BUDGET, None).unwrap().is_empty());
    }

    #[test]
    fn length_twelve_relators() {
        let spec = torus(&[("a", [1, 0]), ("b", [0, 1])], 12);
        let hits = search_with_budget(&spec, DEFAULT_BUDGET, None).unwrap();
        let ab6: Vec<String> = "abababababab".chars().map(|c| c.to_string()).collect();
        assert!(hits.iter().any(|h| h.word == ab6));
        for h in &hits {
            assert_eq!(h.word.len(), 12);
            let r = h.report.as_ref().unwrap();
            assert_eq!((r.sigma, r.e), (-8, 12));
        }
        let mut sorted = hits.clone();
        sorted.sort_by(|a, b| a.word.cmp(&b.word));
        assert_eq!(sorted, hits);
    }

    #[test]
    fn single_transvection_never_closes() {
        let spec = torus(&[("a", [1, 0])], 10);
        assert!(search_with_budget(&spec, DEFAULT_BUDGET, None).unwrap().is_empty());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let spec = torus(&[("a", [1, 0]), ("b", [0, 1])], 12);
        let one = search_with_budget(&spec, DEFAULT_BUDGET, Some(1)).unwrap();
        let four = search_with_budget(&spec, DEFAULT_BUDGET, Some(4)).unwrap();
        assert!(!one.is_empty());
        assert_eq!(one, four);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = torus(&[("a", [1, 0]), ("b", [0, 1])], 12);
        assert_eq!(
            search_with_budget(&spec, 4095, None),
            Err(CatalogError::BudgetExceeded {
                states: 4096,
                budget: 4095
            })
        );
    }

    #[test]
    fn open_words_listed_when_not_required() {
        let mut spec = torus(&[("a", [1, 0]), ("b", [0, 1])], 3);
        spec.require_closed = false;
        let hits = search_with_budget(&spec, DEFAULT_BUDGET, None).unwrap();
        assert_eq!(hits.len(), 2 + 4 + 8);
        assert!(hits.iter().all(|h| h.closure == ClosureVerdict::Violated));
        assert_eq!(hits[0].word, ["a"]);
    }

    #[test]
    fn invalid_specs() {
        assert!(search_with_budget(&torus(&[("a", [2, 0])], 3), DEFAULT_BUDGET, None).is_err());
        assert!(search_with_budget(&torus(&[("a", [1, 0])], 0), DEFAULT_BUDGET, None).is_err());
    }
}
