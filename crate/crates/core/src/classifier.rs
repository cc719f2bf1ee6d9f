//! Proper / good / satisfactory / ugly verdicts for `S_{n,k}` and its dual.
//!
//! Two independent certified routes decide the properties:
//!
//! * the sparse route proves nonnegativity of the target functions in
//!   [`crate::targets`] by interval branch-and-bound ([`crate::sparse`]);
//! * the dense route isolates the real roots of the derivative numerator as
//!   an integer polynomial ([`crate::dense`]) and, for good/satisfactory,
//!   bounds `P_ue` on every isolating interval of a critical point.
//!
//! Cheap sufficient conditions are tried first by [`classify`].

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certified::{decide_sign, isqrt, log2_int, CertifiedReal};
use crate::construction::CodeParams;
use crate::dense::{isolate_unit, odd_multiplicity_part, refine, IntPoly, Isolation};
use crate::error::{param, Error, Result};
use crate::sparse::{check_nonneg, SearchOptions, SignCheck};
use crate::targets::{self, Property};
use crate::uepoly::{pow_rat, UePolynomial};
use crate::weights::{a_d, first_row_weight, min_distance, weight_distribution, WeightDistribution};

/// Three-valued answer; `Unknown` only when a work budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Tri::Yes => Some(true),
            Tri::No => Some(false),
            Tri::Unknown => None,
        }
    }
}

/// What settled a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecidedBy {
    /// `n = 2^k - 2^(k-m-1)`: minimum distance `n/2`.
    PowerGapEnd,
    /// Within `tau` of a band end, single copy.
    EdgeInterval,
    /// Within `tau` of a band end, with prepended copies.
    EdgeIntervalCopies,
    /// The whole band is proper, single copy.
    WholeBand,
    /// The whole band (or block tail) is proper, with prepended copies.
    WholeBandCopies,
    /// The minimum-weight term alone exceeds `2^(k-n)`.
    MinWeightTerm,
    /// Another low-weight term alone exceeds `2^(k-n)`.
    WeightRefinement,
    /// Certified sign analysis of the derivative.
    RootIsolation,
    /// Lifted from a shorter code whose `P_ue` minus its first-row term is increasing.
    Lifting,
    /// Enumeration of the code.
    Oracle,
}

/// Classification of one code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub k: u32,
    pub n: u64,
    pub dual: bool,
    pub proper: Tri,
    pub good: Tri,
    pub satisfactory: Tri,
    pub ugly_by_per: bool,
    pub ugly_witness_weight: Option<u64>,
    pub decided_by: DecidedBy,
}

impl Verdict {
    /// Checks proper => good => satisfactory and the ugliness implications.
    pub fn check_chain(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Invariant(format!("verdict ({}, {}): {what}", self.k, self.n)));
        if self.proper == Tri::Yes && self.good == Tri::No {
            return bad("proper but not good");
        }
        if self.good == Tri::Yes && self.satisfactory == Tri::No {
            return bad("good but not satisfactory");
        }
        if self.ugly_by_per && (self.satisfactory == Tri::Yes || self.proper == Tri::Yes) {
            return bad("ugly by the minimum-weight term but satisfactory");
        }
        if self.ugly_witness_weight.is_some() && self.satisfactory == Tri::Yes {
            return bad("ugly witness on a satisfactory code");
        }
        Ok(())
    }
}

/// Which certified route to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Sparse first, dense as a fallback when the degree allows.
    Auto,
    Sparse,
    Dense,
}

/// Work limits for one decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_boxes: u64,
    pub max_nodes: usize,
    /// Largest derivative degree the dense route will attempt.
    pub max_dense_degree: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_boxes: 400_000, max_nodes: 20_000, max_dense_degree: 4096 }
    }
}

/// A decided property with the route that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub value: Tri,
    pub route: Route,
    /// A point `p` where the property fails, when one was found.
    pub witness: Option<String>,
}

/// `Q(p)` with `dP_ue/dp = p^(d-1) (1-p)^(n-W-1) Q(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativePolynomial {
    pub d: u64,
    pub max_weight: u64,
    pub coeffs: Vec<BigInt>,
}

fn binomial_row(e: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..e {
        let c = &row[i as usize] * BigInt::from(e - i) / BigInt::from(i + 1);
        row.push(c);
    }
    row
}

/// Coefficients of `Q(p) = sum_w A_w p^(w-d) (1-p)^(W-w) (w - n p)`.
pub fn derivative_polynomial(poly: &UePolynomial) -> Result<DerivativePolynomial> {
    let (Some(d), Some(big_w)) = (poly.min_weight(), poly.max_weight()) else {
        return param("derivative of an empty polynomial");
    };
    let n = poly.n;
    let deg = (big_w - d + 1) as usize;
    let mut q = vec![BigInt::zero(); deg + 1];
    for (c, w) in poly.terms() {
        let c = BigInt::from(c.clone());
        let row = binomial_row(big_w - w);
        let off = (w - d) as usize;
        for (j, b) in row.iter().enumerate() {
            let v = &c * b;
            let v = if j % 2 == 1 { -v } else { v };
            q[off + j] += &v * BigInt::from(*w);
            q[off + j + 1] -= v * BigInt::from(n);
        }
    }
    Ok(DerivativePolynomial { d, max_weight: big_w, coeffs: IntPoly::new(q).coeffs().to_vec() })
}

/// `G(x) = sum_w A_w x^(w-d) (w - (n-w) x)`, so that
/// `G(x) = (1+x)^(W-d+1) Q(x / (1+x))` and `p in (0,1/2)` maps to `x in (0,1)`.
pub fn x_form_polynomial(dist: &WeightDistribution) -> IntPoly {
    let d = dist.min_weight().unwrap_or(0);
    let big_w = dist.max_weight().unwrap_or(0);
    let mut c = vec![BigInt::zero(); (big_w - d + 2) as usize];
    for (w, a) in dist.iter() {
        let a = BigInt::from(a.clone());
        c[(w - d) as usize] += &a * BigInt::from(w);
        c[(w - d + 1) as usize] -= a * BigInt::from(dist.n - w);
    }
    IntPoly::new(c)
}

fn x_to_p(x: &BigRational) -> BigRational {
    x / (BigRational::one() + x)
}

fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn sparse_decision(dist: &WeightDistribution, prop: Property, dual: bool, budget: &Budget) -> Decision {
    let t = targets::target(dist, prop, dual);
    let opts = SearchOptions { max_boxes: budget.max_boxes, anchor: t.anchor, ..Default::default() };
    match check_nonneg(&t.f, t.domain, &opts).0 {
        SignCheck::NonNegative { .. } => Decision { value: Tri::Yes, route: Route::Sparse, witness: None },
        SignCheck::Negative { num, depth, .. } => Decision {
            value: Tri::No,
            route: Route::Sparse,
            witness: Some(rat_string(&targets::witness_p(num, depth, dual))),
        },
        SignCheck::Unknown { .. } => Decision { value: Tri::Unknown, route: Route::Sparse, witness: None },
    }
}

fn dense_degree(dist: &WeightDistribution) -> u64 {
    dist.max_weight().unwrap_or(0) - dist.min_weight().unwrap_or(0) + 1
}

fn dense_proper(dist: &WeightDistribution, budget: &Budget) -> Decision {
    let r = odd_multiplicity_part(&x_form_polynomial(dist));
    match isolate_unit(&r, budget.max_nodes, Some(1)) {
        Isolation::Done(v) if v.is_empty() => Decision { value: Tri::Yes, route: Route::Dense, witness: None },
        Isolation::Done(v) | Isolation::Partial(v) if !v.is_empty() => Decision {
            value: Tri::No,
            route: Route::Dense,
            witness: Some(rat_string(&x_to_p(&v[0].lo()))),
        },
        _ => Decision { value: Tri::Unknown, route: Route::Dense, witness: None },
    }
}

/// `sum_w A_w x^w` and `level * (1+x)^n` at rational `x`; `P_ue <= level` iff the first is at most the second.
fn level_sides(dist: &WeightDistribution, x: &BigRational, level: &BigRational) -> (BigRational, BigRational) {
    let s = dist
        .iter()
        .map(|(w, a)| BigRational::from_integer(BigInt::from(a.clone())) * pow_rat(x, w))
        .fold(BigRational::zero(), |a, b| a + b);
    (s, level * pow_rat(&(BigRational::one() + x), dist.n))
}

/// `P_ue <= level` on `[0, 1/2]`, by bounding `P_ue` at every critical point.
fn dense_level(dist: &WeightDistribution, level: &BigRational, budget: &Budget) -> Decision {
    let g = odd_multiplicity_part(&x_form_polynomial(dist));
    let roots = match isolate_unit(&g, budget.max_nodes, None) {
        Isolation::Done(v) => v,
        Isolation::Partial(_) => return Decision { value: Tri::Unknown, route: Route::Dense, witness: None },
    };
    let one = BigRational::one();
    let (s1, l1) = level_sides(dist, &one, level);
    if s1 > l1 {
        return Decision { value: Tri::No, route: Route::Dense, witness: Some("1/2".into()) };
    }
    for iv in roots {
        let mut iv = iv;
        loop {
            let (a, b) = (iv.lo(), iv.hi());
            let (sb, _) = level_sides(dist, &b, level);
            let (_, la) = level_sides(dist, &a, level);
            if sb <= la {
                break;
            }
            for x in [&a, &b] {
                let (s, l) = level_sides(dist, x, level);
                if s > l {
                    return Decision { value: Tri::No, route: Route::Dense, witness: Some(rat_string(&x_to_p(x))) };
                }
            }
            if iv.exact || iv.depth > 400 {
                return Decision { value: Tri::Unknown, route: Route::Dense, witness: None };
            }
            iv = refine(&g, &iv, iv.depth + 8);
        }
    }
    Decision { value: Tri::Yes, route: Route::Dense, witness: None }
}

/// `P_ue(1/2) = (2^k - 1) 2^-n` for good, `2^(k-n)` for satisfactory.
fn level_of(dist: &WeightDistribution, prop: Property) -> BigRational {
    let two_k = BigInt::one() << dist.k;
    let num = match prop {
        Property::Good => two_k - 1,
        _ => two_k,
    };
    BigRational::new(num, BigInt::one() << dist.n)
}

/// Decides a property of the code with weight distribution `dist`.
pub fn decide(dist: &WeightDistribution, prop: Property, dual: bool, route: Route, budget: &Budget) -> Decision {
    let dense_ok = !dual && dense_degree(dist) <= budget.max_dense_degree;
    let dense = |b: &Budget| match prop {
        Property::Proper => dense_proper(dist, b),
        _ => dense_level(dist, &level_of(dist, prop), b),
    };
    match route {
        Route::Sparse => sparse_decision(dist, prop, dual, budget),
        Route::Dense if dense_ok => dense(budget),
        Route::Dense => Decision { value: Tri::Unknown, route: Route::Dense, witness: None },
        Route::Auto => {
            let s = sparse_decision(dist, prop, dual, budget);
            if s.value == Tri::Unknown && dense_ok {
                dense(budget)
            } else {
                s
            }
        }
    }
}

fn require(d: Decision, what: &str, k: u32, n: u64) -> Result<bool> {
    d.value
        .known()
        .ok_or_else(|| Error::Budget(format!("{what} undecided for (k, n) = ({k}, {n}) on the {:?} route", d.route)))
}

/// Distribution with the first-row codeword removed.
pub fn skip_first_row(k: u32, n: u64) -> Result<WeightDistribution> {
    weight_distribution(k, n)?.without_one(first_row_weight(k, n)?)
}

fn check_length(k: u32, n: u64) -> Result<()> {
    if k < 2 || n < (1u64 << (k - 1)) + 1 {
        return param(format!("need n >= 2^(k-1) + 1, got (k, n) = ({k}, {n})"));
    }
    Ok(())
}

/// Is `P_ue` (optionally minus the first-row term) nondecreasing on `[0, 1/2]`?
pub fn check_proper(k: u32, n: u64, skip_first: bool, route: Route, budget: &Budget) -> Result<Decision> {
    check_length(k, n)?;
    let dist = if skip_first { skip_first_row(k, n)? } else { weight_distribution(k, n)? };
    Ok(decide(&dist, Property::Proper, false, route, budget))
}

pub fn is_proper(k: u32, n: u64, skip_first: bool) -> Result<bool> {
    require(check_proper(k, n, skip_first, Route::Auto, &Budget::default())?, "properness", k, n)
}

pub fn is_good(k: u32, n: u64) -> Result<bool> {
    check_length(k, n)?;
    let d = decide(&weight_distribution(k, n)?, Property::Good, false, Route::Auto, &Budget::default());
    require(d, "goodness", k, n)
}

pub fn is_satisfactory(k: u32, n: u64) -> Result<bool> {
    check_length(k, n)?;
    let d = decide(&weight_distribution(k, n)?, Property::Satisfactory, false, Route::Auto, &Budget::default());
    require(d, "satisfactoriness", k, n)
}

/// Property of the dual `C_{n,n-k}`.
pub fn is_dual(k: u32, n: u64, prop: Property) -> Result<bool> {
    check_length(k, n)?;
    let d = decide(&weight_distribution(k, n)?, prop, true, Route::Sparse, &Budget::default());
    require(d, "dual property", k, n)
}

/// `log2` of `A_w (w/n)^w (1-w/n)^(n-w) / 2^(k-n)` evaluated at `p = num/den`
/// instead of `w/n` when `at` is given.
fn term_log2_ratio(k: u32, n: u64, w: u64, count: &BigUint, at: Option<(u64, u64)>, prec: u32) -> Result<CertifiedReal> {
    let (pn, pd) = at.unwrap_or((w, n));
    let l = |v: u64| log2_int(&BigInt::from(v), prec);
    let a = log2_int(&BigInt::from(count.clone()), prec)?;
    // w log2 pn + (n-w) log2 (pd-pn) - n log2 pd + n - k
    let mut acc = a;
    if w > 0 {
        acc = acc.add(&l(pn)?.mul_int(w));
    }
    if n > w {
        acc = acc.add(&l(pd - pn)?.mul_int(n - w));
    }
    acc = acc.sub(&l(pd)?.mul_int(n));
    Ok(acc.add(&CertifiedReal::from_int(n as i64 - k as i64, prec)))
}

/// Exact sign of `A_w w^w (n-w)^(n-w) 2^(n-k) - n^n`.
fn exact_term_sign(k: u32, n: u64, w: u64, count: &BigUint) -> Ordering {
    let pw = |b: u64, e: u64| num_traits::pow(BigUint::from(b), e as usize);
    let lhs = count * pw(w, w) * pw(n - w, n - w) << (n - k as u64);
    lhs.cmp(&pw(n, n))
}

fn term_exceeds(k: u32, n: u64, w: u64, count: &BigUint) -> Result<bool> {
    if count.is_zero() {
        return Ok(false);
    }
    let s = decide_sign(128, 1024, |prec| term_log2_ratio(k, n, w, count, None, prec))?;
    Ok(match s {
        Some(o) => o == Ordering::Greater,
        None => exact_term_sign(k, n, w, count) == Ordering::Greater,
    })
}

/// `A_d d^d (n-d)^(n-d) > 2^(k-n) n^n`: the minimum-weight term alone
/// exceeds `2^(k-n)` at `p = d/n`.
pub fn ugly_by_per(k: u32, n: u64) -> Result<bool> {
    let d = min_distance(k, n)?;
    term_exceeds(k, n, d, &a_d(k, n)?)
}

/// The same comparison for the term of weight `w`.
pub fn ugly_by_weight(k: u32, n: u64, w: u64) -> Result<bool> {
    let dist = weight_distribution(k, n)?;
    let c = dist.count(w);
    if c.is_zero() {
        return param(format!("no codeword of weight {w} in S_({n},{k})"));
    }
    term_exceeds(k, n, w, &c)
}

/// `A_w (w/n)^w (1 - w/n)^(n-w) / 2^(k-n)` evaluated at `p = d/n`, or at
/// `p = w/n` when `at_own_weight` is set.
pub fn term_ratio(k: u32, n: u64, w: u64, at_own_weight: bool, prec: u32) -> Result<CertifiedReal> {
    let dist = weight_distribution(k, n)?;
    let d = dist.min_weight().unwrap_or(0);
    let at = if at_own_weight { None } else { Some((d, n)) };
    term_log2_ratio(k, n, w, &dist.count(w), at, prec)?.exp2()
}

/// `2^(k - n + n h(d/n))`, the threshold `A_d` must exceed.
pub fn per_threshold(k: u32, n: u64, prec: u32) -> Result<CertifiedReal> {
    let d = min_distance(k, n)?;
    let one = BigUint::one();
    term_log2_ratio(k, n, d, &one, None, prec)?.neg().exp2()
}

fn floor_half(v: &BigInt) -> BigInt {
    v.div_floor(&BigInt::from(2))
}

/// `floor(tau_upper)` and `floor(tau_lower)` for band `m` with `t` blocks.
pub fn tau_floors(k: u32, m: u32, t: u64) -> Result<(i64, i64)> {
    if m < 1 || m >= k || t < 1 {
        return param(format!("tau needs t >= 1 and 1 <= m < k, got (k, m, t) = ({k}, {m}, {t})"));
    }
    let big = |v: u64| BigInt::from(v);
    let base = (big(1) << (k + 1)) * big(t + 1) + 1;
    let s_up = isqrt(&(&base - (big(1) << (k - m + 2))));
    let s_lo = isqrt(&(&base - (big(1) << (k - m + 1))));
    let up_sqrt = floor_half(&(s_up + 1)).to_i64().expect("fits");
    let lo_sqrt = floor_half(&(s_lo - 1)).to_i64().expect("fits");
    // 2^(k-m-2) and 2^(k-m-2) - 1, floored; m = k - 1 gives 1/2 and -1/2.
    let (cap_up, cap_lo) = if m + 2 <= k {
        let c = 1i64 << (k - m - 2);
        (c, c - 1)
    } else {
        (0, -1)
    };
    Ok((up_sqrt.min(cap_up), lo_sqrt.min(cap_lo)))
}

/// The two closed intervals near the ends of band `m` of block `t` on
/// which `S_{n,k}` is proper. Empty intervals have `lo > hi`.
pub fn sufficient_proper_interval(k: u32, m: u32, t: u64) -> Result<((u64, u64), (u64, u64))> {
    let (up, lo) = tau_floors(k, m, t)?;
    let top = (1u64 << (k - 1)) * (t + 1);
    let left = top - (1u64 << (k - m));
    let right = top - (1u64 << (k - m - 1));
    let i2_lo = (right as i64 - lo) as u64;
    Ok(((left, left + up as u64), (i2_lo, right)))
}

/// Least integer `m` with `m >= (k - 3 - log2 t) / 2`, at least 1.
pub fn whole_band_start(k: u32, t: u64) -> Result<u32> {
    if t < 1 || k < 3 {
        return param("whole-band bound needs t >= 1 and k >= 3");
    }
    // m works iff k - 3 - 2m <= 0 or 2^(k-3-2m) <= t.
    let mut m = 1u32;
    while (k as i64 - 3 - 2 * m as i64) > 0 && (1u128 << (k - 3 - 2 * m)) > t as u128 {
        m += 1;
    }
    Ok(m)
}

/// Sufficient conditions for properness, without computing `P_ue`.
pub fn proper_shortcut(k: u32, n: u64) -> Result<Option<DecidedBy>> {
    let p = CodeParams::new(k, n)?;
    let single = p.t == 1;
    let Some(m) = p.m else {
        // Repeated Reed-Muller: two terms, both nondecreasing.
        return Ok(Some(if single { DecidedBy::PowerGapEnd } else { DecidedBy::WholeBandCopies }));
    };
    if single && m + 1 < k && n == (1u64 << k) - (1u64 << (k - m - 1)) {
        return Ok(Some(DecidedBy::PowerGapEnd));
    }
    if k >= 3 {
        let mm = whole_band_start(k, p.t)?;
        let top = (1u64 << (k - 1)) * (p.t + 1);
        if m >= mm || n >= top - (1u64 << (k - mm)) {
            return Ok(Some(if single { DecidedBy::WholeBand } else { DecidedBy::WholeBandCopies }));
        }
    }
    let ((a1, b1), (a2, b2)) = sufficient_proper_interval(k, m, p.t)?;
    if (a1..=b1).contains(&n) || (a2..=b2).contains(&n) {
        return Ok(Some(if single { DecidedBy::EdgeInterval } else { DecidedBy::EdgeIntervalCopies }));
    }
    Ok(None)
}

/// Looks up whether `P_ue(S_{n,k})` minus its first-row term is known to be
/// increasing, typically from a cache of earlier results.
pub trait SkipProperLookup {
    fn skip_proper(&self, k: u32, n: u64) -> Option<bool>;
}

/// Options for [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub budget: Budget,
    pub route: Route,
    /// Lowest weights tried by the refinement step.
    pub refine_weights: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { budget: Budget::default(), route: Route::Auto, refine_weights: 3 }
    }
}

fn all_yes(k: u32, n: u64, dual: bool, by: DecidedBy) -> Verdict {
    Verdict {
        k,
        n,
        dual,
        proper: Tri::Yes,
        good: Tri::Yes,
        satisfactory: Tri::Yes,
        ugly_by_per: false,
        ugly_witness_weight: None,
        decided_by: by,
    }
}

/// Decision cascade: sufficient conditions, the minimum-weight criterion,
/// low-weight refinement, lifting, and finally certified sign analysis.
pub fn classify(k: u32, n: u64, dual: bool, opts: &ClassifyOptions, lookup: Option<&dyn SkipProperLookup>) -> Result<Verdict> {
    check_length(k, n)?;
    let dist = weight_distribution(k, n)?;
    let per = ugly_by_per(k, n)?;
    let ugly = |by: DecidedBy, w: Option<u64>| Verdict {
        k,
        n,
        dual,
        proper: Tri::No,
        good: Tri::No,
        satisfactory: Tri::No,
        ugly_by_per: per,
        ugly_witness_weight: w,
        decided_by: by,
    };
    if per {
        return Ok(ugly(DecidedBy::MinWeightTerm, dist.min_weight()));
    }
    if !dual {
        if let Some(by) = proper_shortcut(k, n)? {
            return Ok(all_yes(k, n, dual, by));
        }
    }
    for (w, c) in dist.iter().take(opts.refine_weights).skip(1) {
        if 2 * w <= n && term_exceeds(k, n, w, c)? {
            return Ok(ugly(DecidedBy::WeightRefinement, Some(w)));
        }
    }
    if !dual {
        if let Some(l) = lookup {
            let half = 1u64 << (k - 1);
            let mut m = n;
            while m >= 2 * half + 1 {
                m -= half;
                if l.skip_proper(k, m) == Some(true) {
                    return Ok(all_yes(k, n, dual, DecidedBy::Lifting));
                }
            }
        }
    }
    let b = &opts.budget;
    let proper = decide(&dist, Property::Proper, dual, opts.route, b).value;
    if proper == Tri::Yes {
        return Ok(all_yes(k, n, dual, DecidedBy::RootIsolation));
    }
    let satisfactory = decide(&dist, Property::Satisfactory, dual, opts.route, b).value;
    let good = if satisfactory == Tri::No {
        Tri::No
    } else {
        decide(&dist, Property::Good, dual, opts.route, b).value
    };
    Ok(Verdict {
        k,
        n,
        dual,
        proper,
        good,
        satisfactory,
        ugly_by_per: false,
        ugly_witness_weight: None,
        decided_by: DecidedBy::RootIsolation,
    })
}

/// Signed `x` as a rational, for callers holding `u64` pairs.
pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Sign of the exact derivative of `P_ue` at rational `p`, from `Q`.
pub fn derivative_sign_at(q: &DerivativePolynomial, p: &BigRational) -> Ordering {
    let v = IntPoly::new(q.coeffs.clone()).eval(p);
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}
