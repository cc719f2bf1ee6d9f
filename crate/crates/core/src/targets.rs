//! The properties as nonnegativity of sparse functions.
//!
//! With `x = p / (1 - p)`, the interval `p in [0, 1/2]` becomes `x in [0, 1]`
//! and `P_ue(p) = (1 + x)^-n sum_w A_w x^w`. The dual forms stay in `p`.

use num_bigint::{BigInt, BigUint};

use crate::certified::Dyadic;
use crate::sparse::{Anchor, Base, DyBox, SparseFn};
use crate::weights::WeightDistribution;

/// What a target certifies when it is nonnegative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Property {
    Proper,
    Good,
    Satisfactory,
}

/// A function whose nonnegativity on `domain` is equivalent to a property.
#[derive(Clone, Debug)]
pub struct Target {
    pub f: SparseFn,
    pub domain: DyBox,
    pub anchor: Option<Anchor>,
}

fn count(c: &BigUint) -> Dyadic {
    Dyadic::from_int(BigInt::from(c.clone()))
}

/// `sum_w A_w x^(w-d) (w - (n-w) x)`, a positive multiple of `dP/dp`.
pub fn proper(dist: &WeightDistribution) -> Target {
    let d = dist.min_weight().unwrap_or(0);
    let n = dist.n;
    let mut f = SparseFn::new();
    for (w, c) in dist.iter() {
        let c = count(c);
        f.push(c.mul(&Dyadic::from_int(w)), Base::X, w - d);
        f.push(c.mul(&Dyadic::from_int(n - w)).neg(), Base::X, w - d + 1);
    }
    Target { f, domain: DyBox::UNIT, anchor: None }
}

/// `level * (1+x)^n - sum_w A_w x^w`, nonnegative iff `P_ue <= level * 2^-n`.
fn below_level(dist: &WeightDistribution, level: Dyadic) -> SparseFn {
    let mut f = SparseFn::new();
    f.push(level, Base::OnePlusX, dist.n);
    for (w, c) in dist.iter() {
        f.push(count(c).neg(), Base::X, w);
    }
    f
}

/// `P_ue <= 2^(k-n)`.
pub fn satisfactory(dist: &WeightDistribution) -> Target {
    let level = Dyadic::pow2(dist.k as i64 - dist.n as i64);
    Target { f: below_level(dist, level), domain: DyBox::UNIT, anchor: None }
}

/// `P_ue <= P_ue(1/2) = (2^k - 1) 2^-n`; equality at `x = 1`.
pub fn good(dist: &WeightDistribution) -> Target {
    let level = Dyadic::new((BigInt::from(1) << dist.k) - 1, -(dist.n as i64));
    Target {
        f: below_level(dist, level),
        domain: DyBox::UNIT,
        anchor: Some(Anchor { at_right: true, order: 1 }),
    }
}

/// Derivative of the dual's `P_ue` times `2^(k-1)`:
/// `2^(k-1) n (1-p)^(n-1) - sum_w A_w w (1-2p)^(w-1)`.
/// It vanishes at `p = 0` to order `d(dual) - 1`, which is at least two.
pub fn dual_proper(dist: &WeightDistribution) -> Target {
    let mut f = SparseFn::new();
    f.push(Dyadic::new(BigInt::from(dist.n), dist.k as i64 - 1), Base::OneMinusX, dist.n - 1);
    for (w, c) in dist.iter() {
        f.push(count(c).mul(&Dyadic::from_int(w)).neg(), Base::OneMinusTwoX, w - 1);
    }
    Target { f, domain: DyBox::LOWER_HALF, anchor: Some(Anchor { at_right: false, order: 4 }) }
}

/// `2^k (1-p)^n - offset - sum_w A_w (1-2p)^w` on `[0, 1/2]`.
fn dual_below(dist: &WeightDistribution, offset: Option<Dyadic>) -> SparseFn {
    let mut f = SparseFn::new();
    f.push(Dyadic::pow2(dist.k as i64), Base::OneMinusX, dist.n);
    if let Some(o) = offset {
        f.push(o.neg(), Base::X, 0);
    }
    for (w, c) in dist.iter() {
        f.push(count(c).neg(), Base::OneMinusTwoX, w);
    }
    f
}

/// Dual `P_ue <= 2^-k`.
pub fn dual_satisfactory(dist: &WeightDistribution) -> Target {
    Target { f: dual_below(dist, None), domain: DyBox::LOWER_HALF, anchor: None }
}

/// Dual `P_ue <= 2^-k - 2^-n`; equality at `p = 1/2`.
pub fn dual_good(dist: &WeightDistribution) -> Target {
    let off = Dyadic::pow2(dist.k as i64 - dist.n as i64);
    Target {
        f: dual_below(dist, Some(off)),
        domain: DyBox::LOWER_HALF,
        anchor: Some(Anchor { at_right: true, order: 1 }),
    }
}

/// Target for a property of the code or of its dual.
pub fn target(dist: &WeightDistribution, prop: Property, dual: bool) -> Target {
    match (prop, dual) {
        (Property::Proper, false) => proper(dist),
        (Property::Good, false) => good(dist),
        (Property::Satisfactory, false) => satisfactory(dist),
        (Property::Proper, true) => dual_proper(dist),
        (Property::Good, true) => dual_good(dist),
        (Property::Satisfactory, true) => dual_satisfactory(dist),
    }
}

/// Converts a witness point of a primal target (in `x`) to `p = x / (1 + x)`.
pub fn witness_p(num: u64, depth: u32, dual: bool) -> num_rational::BigRational {
    use num_rational::BigRational;
    let x = BigRational::new(BigInt::from(num), BigInt::from(1) << depth);
    if dual {
        x
    } else {
        &x / (BigRational::from_integer(1.into()) + &x)
    }
}
