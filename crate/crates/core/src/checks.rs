//! Audits of the known inequalities and identities for Lefschetz fibrations.
//!
//! Every comparison is an exact rational comparison. Hypotheses the tool
//! cannot decide (rational or ruled, blowup of a sphere bundle) arrive as
//! [`GroundTruthFlags`]; an unknown hypothesis makes the check inapplicable.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CheckError;
use crate::invariants::{euler_number, InvariantReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tristate {
    True,
    False,
    #[default]
    Unknown,
}

impl Tristate {
    pub fn as_str(self) -> &'static str {
        match self {
            Tristate::True => "true",
            Tristate::False => "false",
            Tristate::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Tristate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tristate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "true" => Ok(Tristate::True),
            "false" => Ok(Tristate::False),
            "unknown" => Ok(Tristate::Unknown),
            other => Err(format!("expected true, false or unknown, found '{other}'")),
        }
    }
}

/// Facts about the total space that no computation here decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroundTruthFlags {
    pub rational_or_ruled: Tristate,
    /// Genus of the base of the ruling; only with `rational_or_ruled = true`.
    pub ruled_base_genus: Option<usize>,
    pub blowup_of_sphere_bundle: Tristate,
    pub known_manifold: Option<String>,
}

impl GroundTruthFlags {
    pub fn is_default(&self) -> bool {
        *self == GroundTruthFlags::default()
    }
}

/// Possibly incomplete numerical invariants; the input to [`run_checks`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct InvariantFacts {
    pub l: Option<i64>,
    pub n: Option<i64>,
    pub s: Option<i64>,
    pub e: Option<i64>,
    pub b1: Option<i64>,
    pub b2: Option<i64>,
    pub b_plus: Option<i64>,
    pub b_minus: Option<i64>,
    pub sigma: Option<i64>,
    pub c1_squared: Option<i64>,
}

impl From<&InvariantReport> for InvariantFacts {
    fn from(r: &InvariantReport) -> Self {
        InvariantFacts {
            l: Some(r.l as i64),
            n: Some(r.n as i64),
            s: Some(r.s as i64),
            e: Some(r.e),
            b1: Some(r.b1 as i64),
            b2: Some(r.b2),
            b_plus: Some(r.b_plus),
            b_minus: Some(r.b_minus),
            sigma: Some(r.sigma),
            c1_squared: Some(r.c1_squared),
        }
    }
}

fn exact_div(num: i64, den: i64) -> Option<i64> {
    (num.rem_euclid(den) == 0).then(|| num.div_euclid(den))
}

impl InvariantFacts {
    /// Fills fields that follow from the standard identities
    /// `l = n + s`, `e = 4(g-1)(h-1) + l`, `c1^2 = 2e + 3σ`, and over the
    /// sphere `b2 = l + 2 - 2(2g - b1)`, `b± = (b2 ± σ)/2`. Non-integral
    /// derivations are left unfilled; [`InvariantFacts::identity_violations`]
    /// reports them.
    pub fn completed(mut self, g: usize, h: usize) -> Self {
        let defect = euler_number(g, h, 0);
        let two_g = 2 * g as i64;
        for _ in 0..4 {
            match (self.l, self.n, self.s) {
                (None, Some(n), Some(s)) => self.l = Some(n + s),
                (Some(l), None, Some(s)) => self.n = Some(l - s),
                (Some(l), Some(n), None) => self.s = Some(l - n),
                _ => {}
            }
            match (self.e, self.l) {
                (None, Some(l)) => self.e = Some(defect + l),
                (Some(e), None) => self.l = Some(e - defect),
                _ => {}
            }
            match (self.c1_squared, self.e, self.sigma) {
                (None, Some(e), Some(sig)) => self.c1_squared = Some(2 * e + 3 * sig),
                (Some(c), Some(e), None) => self.sigma = exact_div(c - 2 * e, 3),
                (Some(c), None, Some(sig)) => self.e = exact_div(c - 3 * sig, 2),
                _ => {}
            }
            if h == 0 {
                match (self.b2, self.l, self.b1) {
                    (None, Some(l), Some(b1)) => self.b2 = Some(l + 2 - 2 * (two_g - b1)),
                    (Some(b2), Some(l), None) => self.b1 = exact_div(b2 - l - 2, 2).map(|x| x + two_g),
                    _ => {}
                }
            }
            match (self.b2, self.sigma, self.b_plus, self.b_minus) {
                (Some(b2), Some(sig), None, _) => self.b_plus = exact_div(b2 + sig, 2),
                (None, _, Some(p), Some(m)) => self.b2 = Some(p + m),
                (_, None, Some(p), Some(m)) => self.sigma = Some(p - m),
                _ => {}
            }
            if let (Some(b2), Some(sig), None) = (self.b2, self.sigma, self.b_minus) {
                self.b_minus = exact_div(b2 - sig, 2);
            }
        }
        self
    }

    /// Identities among the known fields that fail, as `(field, message)`.
    pub fn identity_violations(&self, g: usize, h: usize) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let defect = euler_number(g, h, 0);
        if let (Some(l), Some(n), Some(s)) = (self.l, self.n, self.s) {
            if l != n + s {
                out.push(("l", format!("l = {l} but n + s = {}", n + s)));
            }
        }
        if let (Some(e), Some(l)) = (self.e, self.l) {
            if e != defect + l {
                out.push(("e", format!("e = {e} but 4(g-1)(h-1) + l = {}", defect + l)));
            }
        }
        if let (Some(c), Some(e), Some(sig)) = (self.c1_squared, self.e, self.sigma) {
            if c != 2 * e + 3 * sig {
                out.push((
                    "c1_squared",
                    format!("c1^2 = {c} but 2e + 3 sigma = {}", 2 * e + 3 * sig),
                ));
            }
        }
        if let (Some(c), Some(e), None) = (self.c1_squared, self.e, self.sigma) {
            if (c - 2 * e).rem_euclid(3) != 0 {
                out.push((
                    "sigma",
                    format!("(c1^2 - 2e)/3 = ({c} - {})/3 is not an integer", 2 * e),
                ));
            }
        }
        if let (Some(sig), Some(l)) = (self.sigma, self.l) {
            if h == 0 && (sig + l).rem_euclid(4) != 0 {
                out.push(("sigma", format!("sigma = {sig} is not congruent to -l = {} mod 4", -l)));
            }
        }
        if h == 0 {
            if let (Some(b2), Some(l), Some(b1)) = (self.b2, self.l, self.b1) {
                let expected = l + 2 - 2 * (2 * g as i64 - b1);
                if b2 != expected {
                    out.push(("b2", format!("b2 = {b2} but l + 2 - 2(2g - b1) = {expected}")));
                }
            }
        }
        if let (Some(p), Some(m), Some(b2)) = (self.b_plus, self.b_minus, self.b2) {
            if p + m != b2 {
                out.push(("b2", format!("b+ + b- = {} but b2 = {b2}", p + m)));
            }
        }
        if let (Some(p), Some(m), Some(sig)) = (self.b_plus, self.b_minus, self.sigma) {
            if p - m != sig {
                out.push(("sigma", format!("b+ - b- = {} but sigma = {sig}", p - m)));
            }
        }
        out
    }
}

/// Registry of audited statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    Thm1,
    StipsiczLb,
    L24P1,
    L24P2,
    L24P3,
    L25,
    P41,
    C43,
    L42P44,
    C45,
    C46,
    Thm2,
    P47,
    P49,
    L48,
    C410,
    BasePairing,
    InfoStipsiczL,
    InfoGompf,
}

impl CheckId {
    pub const ALL: [CheckId; 19] = [
        CheckId::Thm1,
        CheckId::StipsiczLb,
        CheckId::L24P1,
        CheckId::L24P2,
        CheckId::L24P3,
        CheckId::L25,
        CheckId::P41,
        CheckId::C43,
        CheckId::L42P44,
        CheckId::C45,
        CheckId::C46,
        CheckId::Thm2,
        CheckId::P47,
        CheckId::P49,
        CheckId::L48,
        CheckId::C410,
        CheckId::BasePairing,
        CheckId::InfoStipsiczL,
        CheckId::InfoGompf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Thm1 => "thm1",
            CheckId::StipsiczLb => "stipsicz_lb",
            CheckId::L24P1 => "l24_p1",
            CheckId::L24P2 => "l24_p2",
            CheckId::L24P3 => "l24_p3",
            CheckId::L25 => "l25",
            CheckId::P41 => "p41",
            CheckId::C43 => "c43",
            CheckId::L42P44 => "l42_p44",
            CheckId::C45 => "c45",
            CheckId::C46 => "c46",
            CheckId::Thm2 => "thm2",
            CheckId::P47 => "p47",
            CheckId::P49 => "p49",
            CheckId::L48 => "l48",
            CheckId::C410 => "c410",
            CheckId::BasePairing => "base_pairing",
            CheckId::InfoStipsiczL => "info_stipsicz_l",
            CheckId::InfoGompf => "info_gompf",
        }
    }

    /// Informational checks never affect exit codes.
    pub fn is_informational(self) -> bool {
        matches!(self, CheckId::InfoStipsiczL | CheckId::InfoGompf)
    }

    pub fn citation(self) -> &'static str {
        match self {
            CheckId::Thm1 => {
                "c1^2 >= 2(g-1)(h-1) for relatively minimal fibrations on manifolds that are not rational or ruled"
            }
            CheckId::StipsiczLb => "c1^2 >= 4-4g for every Lefschetz fibration (Stipsicz, self fiber sum)",
            CheckId::L24P1 => {
                "n >= b1(F) - b1(M), and n = 0 iff b1(M) = b1(F): vanishing cycles generate ker H1(F) -> H1(M)"
            }
            CheckId::L24P2 => "s+1 <= b- <= l+1 and 1 <= b+ <= n+1 over the sphere",
            CheckId::L24P3 => "sigma = 4k - l for some k >= 0; sigma = -l when every singular fiber is reducible",
            CheckId::L25 => "if sigma >= -l+4 then b1 <= 2g-2, b2 <= l-2, b+ <= n-3, sigma <= n-s-4",
            CheckId::P41 => "no fibration over the sphere with g >= 2 has sigma = -l",
            CheckId::C43 => "every fibration over the sphere has an irreducible singular fiber",
            CheckId::L42P44 => {
                "a fibration on a ruled surface over a genus h surface has g >= 2h-1, and in fact g >= 2h"
            }
            CheckId::C45 => "on a blowup of a sphere bundle: at least 2g singular fibers and g irreducible ones",
            CheckId::C46 => "not rational or ruled: n >= (6g+6)/5 + s/5",
            CheckId::Thm2 => "a genus g fibration over the sphere has at least g irreducible singular fibers",
            CheckId::P47 => "at least four irreducible singular fibers, and six when g >= 3",
            CheckId::P49 => "at least (6g+6)/5 singular fibers over the sphere",
            CheckId::L48 => "sigma = -l+4 forces g <= 2, and for g = 1 the rational elliptic surface",
            CheckId::C410 => "Hodge pairing (l+sigma)/4 >= l/12 + (g-1)/3 >= (3g-2)/6",
            CheckId::BasePairing => "Hodge pairing over a genus h base >= -(h-1)(g-1)/2 + l/12",
            CheckId::InfoStipsiczL => "informational: l >= 8g/5 (Stipsicz)",
            CheckId::InfoGompf => "informational, conditional on Gompf's conjecture: l >= 4g-4 off sphere bundles",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check '{s}'"))
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Which checks to run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    All,
    /// Everything except the informational checks.
    Core,
    Informational,
    Only(Vec<CheckId>),
}

impl Selection {
    pub fn includes(&self, id: CheckId) -> bool {
        match self {
            Selection::All => true,
            Selection::Core => !id.is_informational(),
            Selection::Informational => id.is_informational(),
            Selection::Only(ids) => ids.contains(&id),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Selection::All),
            "core" => Ok(Selection::Core),
            "info" => Ok(Selection::Informational),
            list => list
                .split(',')
                .map(|t| t.trim().parse())
                .collect::<Result<Vec<_>, _>>()
                .map(Selection::Only),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "= (mod 4)")]
    CongruentMod4,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::CongruentMod4 => "= (mod 4)",
        }
    }

    fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::CongruentMod4 => {
                let d = lhs - rhs;
                d.is_integer() && d.to_integer().is_multiple_of(&BigInt::from(4))
            }
        }
    }
}

fn rational_str<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Verdict of one audited statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check_id: CheckId,
    pub citation: &'static str,
    pub applicable: bool,
    /// Why the check does not apply.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Present iff `applicable`.
    pub holds: Option<bool>,
    /// The first failing comparison, or the headline one when all hold.
    #[serde(serialize_with = "rational_str")]
    pub lhs: Option<BigRational>,
    pub relation: Option<Relation>,
    #[serde(serialize_with = "rational_str")]
    pub rhs: Option<BigRational>,
    /// Every comparison evaluated, with its values.
    pub note: String,
    pub informational: bool,
}

impl CheckResult {
    /// Applicable, non-informational and violated.
    pub fn is_failure(&self) -> bool {
        !self.informational && self.holds == Some(false)
    }

    fn not_applicable(id: CheckId, reason: impl Into<String>) -> Self {
        CheckResult {
            check_id: id,
            citation: id.citation(),
            applicable: false,
            reason: Some(reason.into()),
            holds: None,
            lhs: None,
            relation: None,
            rhs: None,
            note: String::new(),
            informational: id.is_informational(),
        }
    }

    fn evaluate(id: CheckId, parts: Vec<Comparison>) -> Self {
        let failing = parts.iter().find(|p| !p.holds());
        let headline = failing.or(parts.first()).expect("at least one comparison");
        let note = parts
            .iter()
            .map(|p| {
                format!(
                    "{} {} {} [{} {} {}]",
                    p.lhs_label,
                    p.relation.symbol(),
                    p.rhs_label,
                    p.lhs,
                    p.relation.symbol(),
                    p.rhs
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        CheckResult {
            check_id: id,
            citation: id.citation(),
            applicable: true,
            reason: None,
            holds: Some(failing.is_none()),
            lhs: Some(headline.lhs.clone()),
            relation: Some(headline.relation),
            rhs: Some(headline.rhs.clone()),
            note,
            informational: id.is_informational(),
        }
    }

    /// `[PASS|FAIL|N/A] check_id lhs ⋈ rhs | citation`
    pub fn render_line(&self) -> String {
        let tag = match self.holds {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "N/A",
        };
        match (&self.lhs, self.relation, &self.rhs) {
            (Some(l), Some(rel), Some(r)) => {
                format!("[{tag}] {} {l} {} {r} | {}", self.check_id, rel.symbol(), self.citation)
            }
            _ => format!(
                "[{tag}] {} ({}) | {}",
                self.check_id,
                self.reason.as_deref().unwrap_or("not evaluated"),
                self.citation
            ),
        }
    }
}

struct Comparison {
    lhs_label: &'static str,
    lhs: BigRational,
    relation: Relation,
    rhs_label: &'static str,
    rhs: BigRational,
}

impl Comparison {
    fn holds(&self) -> bool {
        self.relation.holds(&self.lhs, &self.rhs)
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cmp(
    lhs_label: &'static str,
    lhs: BigRational,
    relation: Relation,
    rhs_label: &'static str,
    rhs: BigRational,
) -> Comparison {
    Comparison {
        lhs_label,
        lhs,
        relation,
        rhs_label,
        rhs,
    }
}

fn bool_val(b: bool) -> BigRational {
    int(b as i64)
}

struct Ctx<'a> {
    facts: &'a InvariantFacts,
    g: i64,
    h: usize,
    flags: &'a GroundTruthFlags,
    /// Hodge pairing supplied by the caller for positive-genus bases.
    external_pairing: Option<&'a BigRational>,
}

macro_rules! need {
    ($id:expr, $ctx:expr, $($field:ident),+) => {
        ($(match $ctx.facts.$field {
            Some(v) => v,
            None => return CheckResult::not_applicable($id, concat!("invariant unknown: ", stringify!($field))),
        }),+)
    };
}

fn sphere_only(id: CheckId, ctx: &Ctx) -> Option<CheckResult> {
    (ctx.h != 0).then(|| CheckResult::not_applicable(id, "stated for fibrations over the sphere"))
}

fn hypothesis(id: CheckId, flag: Tristate, required: Tristate, name: &str) -> Option<CheckResult> {
    match flag {
        Tristate::Unknown => Some(CheckResult::not_applicable(id, format!("hypothesis unknown: {name}"))),
        f if f != required => Some(CheckResult::not_applicable(
            id,
            format!("hypothesis not met: {name} = {f}"),
        )),
        _ => None,
    }
}

fn run_one(id: CheckId, ctx: &Ctx) -> CheckResult {
    use Relation::*;
    let g = ctx.g;
    let flags = ctx.flags;
    match id {
        CheckId::Thm1 => {
            if let Some(r) = hypothesis(id, flags.rational_or_ruled, Tristate::False, "rational_or_ruled") {
                return r;
            }
            let c1 = need!(id, ctx, c1_squared);
            let bound = 2 * (g - 1) * (ctx.h as i64 - 1);
            CheckResult::evaluate(id, vec![cmp("c1^2", int(c1), Ge, "2(g-1)(h-1)", int(bound))])
        }
        CheckId::StipsiczLb => {
            let c1 = need!(id, ctx, c1_squared);
            CheckResult::evaluate(id, vec![cmp("c1^2", int(c1), Ge, "4-4g", int(4 - 4 * g))])
        }
        CheckId::L24P1 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let (n, b1) = need!(id, ctx, n, b1);
            CheckResult::evaluate(
                id,
                vec![
                    cmp("n", int(n), Ge, "2g-b1", int(2 * g - b1)),
                    cmp("[n=0]", bool_val(n == 0), Eq, "[b1=2g]", bool_val(b1 == 2 * g)),
                ],
            )
        }
        CheckId::L24P2 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let (l, n, s, bp, bm) = need!(id, ctx, l, n, s, b_plus, b_minus);
            CheckResult::evaluate(
                id,
                vec![
                    cmp("b-", int(bm), Ge, "s+1", int(s + 1)),
                    cmp("b-", int(bm), Le, "l+1", int(l + 1)),
                    cmp("b+", int(bp), Ge, "1", int(1)),
                    cmp("b+", int(bp), Le, "n+1", int(n + 1)),
                ],
            )
        }
        CheckId::L24P3 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let (l, s, sigma) = need!(id, ctx, l, s, sigma);
            let mut parts = vec![cmp("sigma", int(sigma), CongruentMod4, "-l", int(-l))];
            if s == l {
                parts.push(cmp("sigma", int(sigma), Eq, "-l", int(-l)));
            }
            CheckResult::evaluate(id, parts)
        }
        CheckId::L25 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let (l, n, s, sigma, b1, b2, bp) = need!(id, ctx, l, n, s, sigma, b1, b2, b_plus);
            if sigma < -l + 4 {
                return CheckResult::not_applicable(
                    id,
                    format!("hypothesis not met: sigma = {sigma} < -l+4 = {}", -l + 4),
                );
            }
            CheckResult::evaluate(
                id,
                vec![
                    cmp("b1", int(b1), Le, "2g-2", int(2 * g - 2)),
                    cmp("b2", int(b2), Le, "l-2", int(l - 2)),
                    cmp("b+", int(bp), Le, "n-3", int(n - 3)),
                    cmp("sigma", int(sigma), Le, "n-s-4", int(n - s - 4)),
                ],
            )
        }
        CheckId::P41 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            if g < 2 {
                return CheckResult::not_applicable(id, "requires g >= 2");
            }
            let (l, sigma) = need!(id, ctx, l, sigma);
            CheckResult::evaluate(id, vec![cmp("sigma", int(sigma), Ne, "-l", int(-l))])
        }
        CheckId::C43 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let n = need!(id, ctx, n);
            CheckResult::evaluate(id, vec![cmp("n", int(n), Ge, "1", int(1))])
        }
        CheckId::L42P44 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            if let Some(r) = hypothesis(id, flags.rational_or_ruled, Tristate::True, "rational_or_ruled") {
                return r;
            }
            let Some(hr) = flags.ruled_base_genus else {
                return CheckResult::not_applicable(id, "hypothesis unknown: ruled_base_genus");
            };
            let hr = hr as i64;
            CheckResult::evaluate(
                id,
                vec![
                    cmp("g", int(g), Ge, "2h_r-1", int(2 * hr - 1)),
                    cmp("g", int(g), Ge, "2h_r", int(2 * hr)),
                ],
            )
        }
        CheckId::C45 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            if let Some(r) = hypothesis(
                id,
                flags.blowup_of_sphere_bundle,
                Tristate::True,
                "blowup_of_sphere_bundle",
            ) {
                return r;
            }
            let (l, n) = need!(id, ctx, l, n);
            CheckResult::evaluate(
                id,
                vec![
                    cmp("l", int(l), Ge, "2g", int(2 * g)),
                    cmp("n", int(n), Ge, "g", int(g)),
                ],
            )
        }
        CheckId::C46 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            if let Some(r) = hypothesis(id, flags.rational_or_ruled, Tristate::False, "rational_or_ruled") {
                return r;
            }
            let (n, s) = need!(id, ctx, n, s);
            CheckResult::evaluate(id, vec![cmp("n", int(n), Ge, "(6g+6)/5+s/5", frac(6 * g + 6 + s, 5))])
        }
        CheckId::Thm2 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            if g < 2 {
                return CheckResult::not_applicable(id, "requires g >= 2");
            }
            let n = need!(id, ctx, n);
            CheckResult::evaluate(id, vec![cmp("n", int(n), Ge, "g", int(g))])
        }
        CheckId::P47 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let n = need!(id, ctx, n);
            let mut parts = vec![cmp("n", int(n), Ge, "4", int(4))];
            if g >= 3 {
                parts.push(cmp("n", int(n), Ge, "6", int(6)));
            }
            CheckResult::evaluate(id, parts)
        }
        CheckId::P49 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let l = need!(id, ctx, l);
            CheckResult::evaluate(id, vec![cmp("l", int(l), Ge, "(6g+6)/5", frac(6 * g + 6, 5))])
        }
        CheckId::L48 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let (l, sigma) = need!(id, ctx, l, sigma);
            if sigma != -l + 4 {
                return CheckResult::not_applicable(
                    id,
                    format!("hypothesis not met: sigma = {sigma} != -l+4 = {}", -l + 4),
                );
            }
            let mut parts = vec![cmp("g", int(g), Le, "2", int(2))];
            if g == 1 {
                parts.push(cmp("sigma", int(sigma), Eq, "-8", int(-8)));
                parts.push(cmp("l", int(l), Eq, "12", int(12)));
            }
            CheckResult::evaluate(id, parts)
        }
        CheckId::C410 => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let (l, sigma) = need!(id, ctx, l, sigma);
            let pairing = frac(l + sigma, 4);
            let middle = frac(l, 12) + frac(g - 1, 3);
            CheckResult::evaluate(
                id,
                vec![
                    cmp("(l+sigma)/4", pairing, Ge, "l/12+(g-1)/3", middle.clone()),
                    cmp("l/12+(g-1)/3", middle, Ge, "(3g-2)/6", frac(3 * g - 2, 6)),
                ],
            )
        }
        CheckId::BasePairing => {
            if ctx.h == 0 {
                return CheckResult::not_applicable(id, "requires base genus h >= 1");
            }
            let l = need!(id, ctx, l);
            let pairing = match (ctx.external_pairing, ctx.facts.sigma) {
                (Some(p), _) => p.clone(),
                (None, Some(sigma)) => frac(l + sigma, 4),
                (None, None) => {
                    return CheckResult::not_applicable(id, "needs a caller-supplied sigma or Hodge pairing")
                }
            };
            let h = ctx.h as i64;
            let bound = frac(-(h - 1) * (g - 1), 2) + frac(l, 12);
            CheckResult::evaluate(id, vec![cmp("pairing", pairing, Ge, "-(h-1)(g-1)/2+l/12", bound)])
        }
        CheckId::InfoStipsiczL => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            let l = need!(id, ctx, l);
            CheckResult::evaluate(id, vec![cmp("l", int(l), Ge, "8g/5", frac(8 * g, 5))])
        }
        CheckId::InfoGompf => {
            if let Some(r) = sphere_only(id, ctx) {
                return r;
            }
            if let Some(r) = hypothesis(
                id,
                flags.blowup_of_sphere_bundle,
                Tristate::False,
                "blowup_of_sphere_bundle",
            ) {
                return r;
            }
            let l = need!(id, ctx, l);
            CheckResult::evaluate(id, vec![cmp("l", int(l), Ge, "4g-4", int(4 * g - 4))])
        }
    }
}

fn check_consistency(facts: &InvariantFacts, g: usize, h: usize) -> Result<(), CheckError> {
    let mismatch = |reason: String| CheckError::MismatchedReport { g, h, reason };
    if let (Some(e), Some(l)) = (facts.e, facts.l) {
        if e != euler_number(g, h, 0) + l {
            return Err(mismatch(format!("e = {e} with l = {l}")));
        }
    }
    if let Some(b1) = facts.b1 {
        if h == 0 && !(0..=2 * g as i64).contains(&b1) {
            return Err(mismatch(format!("b1 = {b1} exceeds 2g")));
        }
    }
    for v in [facts.l, facts.n, facts.s].into_iter().flatten() {
        if v.is_negative() {
            return Err(mismatch(format!("negative fiber count {v}")));
        }
    }
    Ok(())
}

/// Runs the selected checks; results are sorted by check id.
pub fn run_checks(
    facts: &InvariantFacts,
    g: usize,
    h: usize,
    flags: &GroundTruthFlags,
    selection: &Selection,
) -> Result<Vec<CheckResult>, CheckError> {
    run_checks_with_pairing(facts, g, h, flags, selection, None)
}

/// As [`run_checks`], with a caller-supplied Hodge pairing for `h > 0`.
pub fn run_checks_with_pairing(
    facts: &InvariantFacts,
    g: usize,
    h: usize,
    flags: &GroundTruthFlags,
    selection: &Selection,
    pairing: Option<&BigRational>,
) -> Result<Vec<CheckResult>, CheckError> {
    check_consistency(facts, g, h)?;
    let ctx = Ctx {
        facts,
        g: g as i64,
        h,
        flags,
        external_pairing: pairing,
    };
    let mut out: Vec<CheckResult> = CheckId::ALL
        .into_iter()
        .filter(|id| selection.includes(*id))
        .map(|id| run_one(id, &ctx))
        .collect();
    out.sort_by(|a, b| a.check_id.as_str().cmp(b.check_id.as_str()));
    Ok(out)
}

pub fn run_report_checks(
    report: &InvariantReport,
    g: usize,
    flags: &GroundTruthFlags,
    selection: &Selection,
) -> Result<Vec<CheckResult>, CheckError> {
    run_checks(&InvariantFacts::from(report), g, 0, flags, selection)
}

pub fn any_failure(results: &[CheckResult]) -> bool {
    results.iter().any(CheckResult::is_failure)
}

pub fn render_text(results: &[CheckResult]) -> String {
    results.iter().map(|r| r.render_line() + "\n").collect()
}
