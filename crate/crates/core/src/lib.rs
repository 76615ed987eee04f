//! Lefschetz fibrations as positive Dehn-twist factorizations: exact
//! homological monodromy, signature via the Meyer cocycle, total-space
//! invariants, and audits of the inequalities they satisfy.
//!
//! ```
//! use lefschetz::format::parse_str;
//! use lefschetz::invariants::compute_report;
//!
//! let f = parse_str(
//!     "fibration \"E1\" {\n fiber_genus 1\n base_genus 0\n curve a nonsep (1,0)\n curve b nonsep (0,1)\n word a b a b a b a b a b a b\n}\n",
//! )
//! .unwrap();
//! let r = compute_report(&f).unwrap();
//! assert_eq!((r.l, r.sigma, r.b2), (12, -8, 10));
//! ```

pub mod catalog;
pub mod checks;
pub mod cli;
pub mod error;
pub mod fibration;
pub mod format;
pub mod invariants;
pub mod linalg;
pub mod meyer;
pub mod search;
pub mod serde_util;
pub mod surface;
