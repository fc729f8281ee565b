//! Batch verification of the sequence identities over parameter pools.
//!
//! Exact identities (determinant forms, matrix forms, the `U`-decomposition)
//! are checked with integer equality and report a worst residual of zero.
//! Floating identities (closed forms, quadratic identities) report the worst
//! relative residual seen and fail when it exceeds the configured tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{big_to_f64, has_positive_delta, quad_approx_with, BinetEvaluator};
use crate::error::{Error, Result};
use crate::matrix::Mat3;
use crate::quaternion::quaternion_binet_with;
use crate::sequence::{cassini_form, Preset, SequenceParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "cassini_u")]
    CassiniU,
    #[serde(rename = "cassini_v")]
    CassiniV,
    #[serde(rename = "matrix_form_12")]
    PowerUForm,
    #[serde(rename = "matrix_form_14")]
    ShiftedForms,
    #[serde(rename = "quad_approx")]
    QuadApprox,
    #[serde(rename = "binet_v")]
    BinetV,
    #[serde(rename = "binet_quaternion")]
    BinetQuaternion,
    #[serde(rename = "lemma_9")]
    UDecomposition,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::CassiniU,
        IdentityId::CassiniV,
        IdentityId::PowerUForm,
        IdentityId::ShiftedForms,
        IdentityId::QuadApprox,
        IdentityId::BinetV,
        IdentityId::BinetQuaternion,
        IdentityId::UDecomposition,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::CassiniU => "cassini_u",
            IdentityId::CassiniV => "cassini_v",
            IdentityId::PowerUForm => "matrix_form_12",
            IdentityId::ShiftedForms => "matrix_form_14",
            IdentityId::QuadApprox => "quad_approx",
            IdentityId::BinetV => "binet_v",
            IdentityId::BinetQuaternion => "binet_quaternion",
            IdentityId::UDecomposition => "lemma_9",
        }
    }

    /// Smallest index at which the identity is stated.
    pub fn min_index(&self) -> u64 {
        match self {
            IdentityId::CassiniU | IdentityId::PowerUForm | IdentityId::UDecomposition => 2,
            _ => 0,
        }
    }

    /// Floating identities need one real and two complex roots.
    pub fn is_floating(&self) -> bool {
        matches!(
            self,
            IdentityId::QuadApprox | IdentityId::BinetV | IdentityId::BinetQuaternion
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown identity `{s}`")))
    }
}

/// Inclusive index range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: u64,
    pub hi: u64,
}

impl IndexRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub n: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub identity_id: IdentityId,
    pub params: SequenceParams,
    pub range: IndexRange,
    pub status: Status,
    /// Worst relative residual for floating checks; 0 for exact checks.
    pub worst_residual: f64,
    pub failures: Vec<Failure>,
    /// Sub-identities skipped or indices clamped, if any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(identity_id: IdentityId, params: SequenceParams, range: IndexRange) -> Self {
        Self {
            identity_id,
            params,
            range,
            status: Status::Pass,
            worst_residual: 0.0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, n: u64, detail: impl Into<String>) {
        self.failures.push(Failure {
            n,
            detail: detail.into(),
        });
        self.status = Status::Fail;
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 1e-8, abs: 1e-12 }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel), ("abs_tol", self.abs)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    fn accepts(&self, abs: f64, rel: f64) -> bool {
        rel <= self.rel || abs <= self.abs
    }
}

fn require_floor(range: IndexRange, min: u64) -> Result<()> {
    if range.lo < min {
        Err(Error::IndexTooSmall { n: range.lo, min })
    } else {
        Ok(())
    }
}

fn prefix_through(p: &SequenceParams, last: u64) -> Vec<BigInt> {
    p.prefix(last as usize + 1)
}

/// `U(n)^3 + U(n-1)^2 U(n+2) + U(n-2) U(n+1)^2 - 2 U(n-1) U(n) U(n+1) - U(n-2) U(n) U(n+2) = t^(n-2)`.
pub fn check_cassini_u(r: &BigInt, s: &BigInt, t: &BigInt, range: IndexRange) -> Result<CheckReport> {
    require_floor(range, 2)?;
    let u_params = SequenceParams::fundamental_of(r.clone(), s.clone(), t.clone());
    let u = prefix_through(&u_params, range.hi + 2);
    let mut report = CheckReport::new(IdentityId::CassiniU, u_params, range);
    let mut rhs = crate::sequence::int_pow(t, range.lo - 2);
    for n in range.indices() {
        let k = n as usize;
        let lhs = cassini_form(&u[k - 2], &u[k - 1], &u[k], &u[k + 1], &u[k + 2]);
        if lhs != rhs {
            report.fail(n, format!("lhs {lhs} != t^(n-2) = {rhs}"));
        }
        rhs *= t;
    }
    Ok(report)
}

/// `V(n+2)^3 + V(n+1)^2 V(n+4) + V(n) V(n+3)^2 - V(n+2) (2 V(n+1) V(n+3) + V(n) V(n+4)) = t^n g(0)`.
pub fn check_cassini_v(p: &SequenceParams, range: IndexRange) -> CheckReport {
    let v = prefix_through(p, range.hi + 4);
    let g0 = cassini_form(&v[0], &v[1], &v[2], &v[3], &v[4]);
    let mut report = CheckReport::new(IdentityId::CassiniV, p.clone(), range);
    let mut rhs = crate::sequence::int_pow(&p.t, range.lo) * &g0;
    for n in range.indices() {
        let k = n as usize;
        let lhs = cassini_form(&v[k], &v[k + 1], &v[k + 2], &v[k + 3], &v[k + 4]);
        if lhs != rhs {
            report.fail(n, format!("lhs {lhs} != t^n g(0) = {rhs}"));
        }
        rhs *= &p.t;
    }
    report
}

/// `M^n` against its `U`-form, entrywise. Indices below 2 are clamped away
/// and noted.
pub fn check_power_u_form(p: &SequenceParams, range: IndexRange) -> CheckReport {
    let mut report = CheckReport::new(IdentityId::PowerUForm, p.fundamental(), range);
    let lo = range.lo.max(2);
    if lo > range.lo {
        report.notes.push(format!("indices below 2 skipped; checked from n = {lo}"));
    }
    let m = Mat3::companion(p);
    for n in lo..=range.hi {
        let u_form = Mat3::u_form(&p.r, &p.s, &p.t, n).expect("n >= 2");
        let power = m.pow(n);
        if power != u_form {
            report.fail(n, format!("M^n = {power} but U-form = {u_form}"));
        }
    }
    report
}

/// Shifted matrix forms: `M^n * S(0) = S(n)` for the sum form (only when
/// `t != 0`) and for the `(s, t)` form (always), plus the factorization
/// `st_form(n) = v_shift(n) * F`.
pub fn check_shifted_forms(p: &SequenceParams, range: IndexRange) -> CheckReport {
    let mut report = CheckReport::new(IdentityId::ShiftedForms, p.clone(), range);
    let sum_form = !p.t.is_zero();
    if !sum_form {
        report
            .notes
            .push("t = 0: sum-form skipped (factor matrix singular); st-form checked".to_string());
    }
    let m = Mat3::companion(p);
    let factor = Mat3::st_factor(&p.s, &p.t);
    let v_shift0 = Mat3::v_shift(p, 0);
    let st0 = Mat3::st_form(p, 0);
    let mut power = m.pow(range.lo);
    for n in range.indices() {
        let v_shift = Mat3::v_shift(p, n);
        let st = Mat3::st_form(p, n);
        if sum_form {
            let lhs = &power * &v_shift0;
            if lhs != v_shift {
                report.fail(n, format!("sum form: M^n S(0) = {lhs} != S(n) = {v_shift}"));
            }
        }
        let lhs = &power * &st0;
        if lhs != st {
            report.fail(n, format!("st form: M^n S(0) = {lhs} != S(n) = {st}"));
        }
        let factored = &v_shift * &factor;
        if factored != st {
            report.fail(n, format!("factorization: S(n) F = {factored} != {st}"));
        }
        power = &m * &power;
    }
    report
}

/// Both matrix-form reports, `U`-form first.
pub fn check_matrix_forms(p: &SequenceParams, range: IndexRange) -> Vec<CheckReport> {
    vec![check_power_u_form(p, range), check_shifted_forms(p, range)]
}

pub fn check_quad_approx(p: &SequenceParams, range: IndexRange, tol: Tolerances) -> Result<CheckReport> {
    let eval = BinetEvaluator::new(p)?;
    let mut report = CheckReport::new(IdentityId::QuadApprox, p.clone(), range);
    for n in range.indices() {
        let q = quad_approx_with(&eval, p, n);
        let rel = q.relative();
        for (i, name) in ["alpha", "omega1", "omega2"].into_iter().enumerate() {
            report.worst_residual = report.worst_residual.max(rel[i]);
            if !tol.accepts(q.absolute[i], rel[i]) {
                report.fail(n, format!("{name}: residual {:e} (relative {:e})", q.absolute[i], rel[i]));
            }
        }
    }
    Ok(report)
}

/// Relative error `|closed - exact| / max(1, |exact|)`.
fn closed_form_error(closed: f64, exact: &BigInt) -> (f64, f64) {
    let e = big_to_f64(exact);
    let abs = (closed - e).abs();
    (abs, abs / e.abs().max(1.0))
}

pub fn check_binet(p: &SequenceParams, range: IndexRange, tol: Tolerances) -> Result<CheckReport> {
    let eval = BinetEvaluator::new(p)?;
    let exact = p.terms_range(range.lo, range.hi)?;
    let mut report = CheckReport::new(IdentityId::BinetV, p.clone(), range);
    for (n, v) in range.indices().zip(&exact) {
        let closed = eval.term(n).value;
        let (abs, rel) = closed_form_error(closed, v);
        report.worst_residual = report.worst_residual.max(rel);
        if !tol.accepts(abs, rel) {
            report.fail(n, format!("closed form {closed:e} vs exact {v} (relative {rel:e})"));
        }
    }
    Ok(report)
}

pub fn check_quaternion_binet(p: &SequenceParams, range: IndexRange, tol: Tolerances) -> Result<CheckReport> {
    let eval = BinetEvaluator::new(p)?;
    let exact = p.terms_range(range.lo, range.hi + 3)?;
    let mut report = CheckReport::new(IdentityId::BinetQuaternion, p.clone(), range);
    for (i, n) in range.indices().enumerate() {
        let closed = quaternion_binet_with(&eval, n).real_parts();
        let closed = [closed.w, closed.x, closed.y, closed.z];
        for (c, (got, want)) in closed.iter().zip(&exact[i..i + 4]).enumerate() {
            let (abs, rel) = closed_form_error(*got, want);
            report.worst_residual = report.worst_residual.max(rel);
            if !tol.accepts(abs, rel) {
                report.fail(n, format!("component {c}: {got:e} vs exact {want} (relative {rel:e})"));
            }
        }
    }
    Ok(report)
}

/// `V(n) = V2 U(n) + (s V1 + t V0) U(n-1) + t V1 U(n-2)`, exactly.
pub fn check_u_decomposition(p: &SequenceParams, range: IndexRange) -> Result<CheckReport> {
    require_floor(range, 2)?;
    let v = prefix_through(p, range.hi);
    let u = prefix_through(&p.fundamental(), range.hi);
    let c1 = &p.s * &p.v1 + &p.t * &p.v0;
    let c2 = &p.t * &p.v1;
    let mut report = CheckReport::new(IdentityId::UDecomposition, p.clone(), range);
    for n in range.indices() {
        let k = n as usize;
        let rhs = &p.v2 * &u[k] + &c1 * &u[k - 1] + &c2 * &u[k - 2];
        if rhs != v[k] {
            report.fail(n, format!("decomposition {rhs} != V(n) = {}", v[k]));
        }
    }
    Ok(report)
}

/// Dispatch a single identity over one parameter set.
pub fn check_identity(
    id: IdentityId,
    p: &SequenceParams,
    range: IndexRange,
    tol: Tolerances,
) -> Result<CheckReport> {
    match id {
        IdentityId::CassiniU => check_cassini_u(&p.r, &p.s, &p.t, range),
        IdentityId::CassiniV => Ok(check_cassini_v(p, range)),
        IdentityId::PowerUForm => Ok(check_power_u_form(p, range)),
        IdentityId::ShiftedForms => Ok(check_shifted_forms(p, range)),
        IdentityId::QuadApprox => check_quad_approx(p, range, tol),
        IdentityId::BinetV => check_binet(p, range, tol),
        IdentityId::BinetQuaternion => check_quaternion_binet(p, range, tol),
        IdentityId::UDecomposition => check_u_decomposition(p, range),
    }
}

/// Seeded random parameter sets: `r, s, t` uniform in
/// `[-coef_bound, coef_bound]`, seeds uniform in `[-init_bound, init_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomPool {
    pub count: usize,
    pub seed: u64,
    pub coef_bound: i64,
    pub init_bound: i64,
}

impl Default for RandomPool {
    fn default() -> Self {
        Self {
            count: 25,
            seed: 20_240_917,
            coef_bound: 5,
            init_bound: 9,
        }
    }
}

impl RandomPool {
    pub fn generate(&self) -> Vec<SequenceParams> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (cb, ib) = (self.coef_bound, self.init_bound);
        (0..self.count)
            .map(|_| {
                let v0 = rng.random_range(-ib..=ib);
                let v1 = rng.random_range(-ib..=ib);
                let v2 = rng.random_range(-ib..=ib);
                let r = rng.random_range(-cb..=cb);
                let s = rng.random_range(-cb..=cb);
                let t = rng.random_range(-cb..=cb);
                SequenceParams::new(v0, v1, v2, r, s, t)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Parameter sets checked as given; a floating identity on one of these
    /// with non-positive delta is an error.
    pub explicit: Vec<SequenceParams>,
    /// Random parameter sets; floating identities skip members with
    /// non-positive delta.
    pub random: Option<RandomPool>,
    pub range: IndexRange,
    pub tolerances: Tolerances,
    pub identities: Vec<IdentityId>,
}

impl Default for SuiteConfig {
    /// Presets plus 25 seeded random parameter sets over `0..=40`, every identity.
    fn default() -> Self {
        Self {
            explicit: default_presets(),
            random: Some(RandomPool::default()),
            range: IndexRange { lo: 0, hi: 40 },
            tolerances: Tolerances::default(),
            identities: IdentityId::ALL.to_vec(),
        }
    }
}

pub fn default_presets() -> Vec<SequenceParams> {
    [
        Preset::Tribonacci,
        Preset::Padovan,
        Preset::Narayana(1),
        Preset::Narayana(2),
        Preset::Narayana(3),
    ]
    .iter()
    .map(Preset::params)
    .collect()
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        IndexRange::new(self.range.lo, self.range.hi)?;
        self.tolerances.validate()?;
        if let Some(pool) = &self.random {
            if pool.coef_bound < 0 || pool.init_bound < 0 {
                return Err(Error::Config("random pool bounds must be nonnegative".into()));
            }
        }
        Ok(())
    }

    /// Explicit parameter sets followed by the random ones.
    pub fn pool(&self) -> Vec<(SequenceParams, bool)> {
        let mut pool: Vec<_> = self.explicit.iter().cloned().map(|p| (p, true)).collect();
        if let Some(random) = &self.random {
            pool.extend(random.generate().into_iter().map(|p| (p, false)));
        }
        pool
    }
}

/// Run every requested identity over the pool.
///
/// Checks run in parallel; the output order is identity-major, then pool
/// order, and does not depend on scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let pool = cfg.pool();
    let mut tasks = Vec::new();
    for &id in &cfg.identities {
        let lo = cfg.range.lo.max(id.min_index());
        if lo > cfg.range.hi {
            continue;
        }
        let range = IndexRange { lo, hi: cfg.range.hi };
        for (p, explicit) in &pool {
            if id.is_floating() && !has_positive_delta(p) {
                if *explicit {
                    return Err(Error::DeltaNotPositive {
                        delta: crate::analytic::discriminant(&p.r, &p.s, &p.t).to_string(),
                    });
                }
                continue;
            }
            tasks.push((id, p, range));
        }
    }
    tasks
        .par_iter()
        .map(|(id, p, range)| check_identity(*id, p, *range, cfg.tolerances))
        .collect()
}

/// True when every report passed.
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}
