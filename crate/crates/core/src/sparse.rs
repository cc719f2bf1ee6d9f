//! Certified sign checks for sparse sums `sum c_i * b_i(x)^e_i` on a dyadic
//! interval, where each base `b_i` is one of `x`, `1+x`, `1-x`, `1-2x`.
//!
//! Every base is monotone, so on a box `[a, b]` each term is bracketed by its
//! values at the endpoints. A branch-and-bound over dyadic boxes combines
//! that enclosure with a mean-value form and either proves the sum
//! nonnegative on the whole domain, exhibits a point where it is certainly
//! negative, or gives up after its budget.
//!
//! Arithmetic runs first on [`Xf`] (an `f64` mantissa with a 64-bit
//! exponent, rounded outward after every operation) and is repeated on
//! [`BigMag`] with wider mantissas when that is not enough.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certified::Dyadic;

/// Base of a power term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    X,
    OnePlusX,
    OneMinusX,
    OneMinusTwoX,
}

impl Base {
    fn increasing(self) -> bool {
        matches!(self, Base::X | Base::OnePlusX)
    }

    fn slope(self) -> i64 {
        match self {
            Base::X | Base::OnePlusX => 1,
            Base::OneMinusX => -1,
            Base::OneMinusTwoX => -2,
        }
    }

    fn numerator_signed(self, num: i128, depth: u32) -> i128 {
        let one = 1i128 << depth;
        match self {
            Base::X => num,
            Base::OnePlusX => one + num,
            Base::OneMinusX => one - num,
            Base::OneMinusTwoX => one - 2 * num,
        }
    }

    /// Numerator of the base at `num / 2^depth`, over the same denominator.
    fn numerator(self, num: u128, depth: u32) -> u128 {
        let one = 1u128 << depth;
        match self {
            Base::X => num,
            Base::OnePlusX => one + num,
            Base::OneMinusX => one - num,
            Base::OneMinusTwoX => one - 2 * num,
        }
    }
}

/// `coeff * base^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Dyadic,
    pub base: Base,
    pub exp: u64,
}

/// A finite sum of [`Term`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseFn {
    pub terms: Vec<Term>,
}

impl SparseFn {
    pub fn new() -> Self {
        SparseFn { terms: Vec::new() }
    }

    pub fn push(&mut self, coeff: Dyadic, base: Base, exp: u64) {
        if !coeff.is_zero() {
            self.terms.push(Term { coeff, base, exp });
        }
    }

    pub fn derivative(&self) -> SparseFn {
        let mut d = SparseFn::new();
        for t in &self.terms {
            if t.exp == 0 {
                continue;
            }
            let f = BigInt::from(t.exp) * BigInt::from(t.base.slope());
            d.push(t.coeff.mul(&Dyadic::from_int(f)), t.base, t.exp - 1);
        }
        d
    }

    /// Exact value at `num / 2^depth`, when every base there is zero or a
    /// power of two, or the exponents are small.
    pub fn exact_value_at(&self, num: u64, depth: u32) -> Option<Dyadic> {
        let mut acc = Dyadic::zero();
        for t in &self.terms {
            let bn = t.base.numerator_signed(num as i128, depth);
            let v = if t.exp == 0 {
                Dyadic::one()
            } else if bn == 0 {
                Dyadic::zero()
            } else if bn.unsigned_abs().is_power_of_two() {
                let e = (bn.unsigned_abs().trailing_zeros() as i64 - depth as i64).checked_mul(t.exp as i64)?;
                let v = Dyadic::pow2(e);
                if bn < 0 && t.exp % 2 == 1 {
                    v.neg()
                } else {
                    v
                }
            } else if t.exp <= 4096 {
                let b = Dyadic::new(BigInt::from(bn), -(depth as i64));
                let mut v = Dyadic::one();
                for _ in 0..t.exp {
                    v = v.mul(&b);
                }
                v
            } else {
                return None;
            };
            acc = acc.add(&t.coeff.mul(&v));
        }
        Some(acc)
    }

    /// Largest exponent, used to size budgets.
    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|t| t.exp).max().unwrap_or(0)
    }
}

/// Nonnegative magnitudes with directed rounding.
pub trait Mag: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    /// `|d|` rounded in the requested direction.
    fn from_dyadic(d: &Dyadic, up: bool) -> Self;
    /// `num / 2^depth`.
    fn from_ratio(num: u128, depth: u32, up: bool) -> Self;
    fn mul(&self, o: &Self, up: bool) -> Self;
    fn add(&self, o: &Self, up: bool) -> Self;
    /// `self - o` for `self >= o`, clamped at zero.
    fn sub(&self, o: &Self, up: bool) -> Self;
    fn cmp_mag(&self, o: &Self) -> Ordering;
    fn is_zero(&self) -> bool;

    fn pow(&self, mut e: u64, up: bool) -> Self {
        let mut acc = Self::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, up);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, up);
            }
        }
        acc
    }
}

/// `m * 2^e` with `m` in `[0.5, 1)` or `m == 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Xf {
    m: f64,
    e: i64,
}

fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let mut x = x;
    let mut adj = 0i64;
    if x < f64::MIN_POSITIVE {
        x *= 2f64.powi(64);
        adj = -64;
    }
    let bits = x.to_bits();
    let field = ((bits >> 52) & 0x7ff) as i64;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, field - 1022 + adj)
}

impl Xf {
    fn norm(m: f64, e: i64) -> Xf {
        if m == 0.0 {
            return Xf { m: 0.0, e: 0 };
        }
        let (mm, de) = frexp(m);
        Xf { m: mm, e: e + de }
    }

    fn dir(v: f64, up: bool) -> f64 {
        if up {
            v.next_up()
        } else {
            v.next_down().max(0.0)
        }
    }

    /// Approximate `log2` of the value.
    pub fn log2(&self) -> f64 {
        if self.m == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.m.log2() + self.e as f64
        }
    }
}

impl Mag for Xf {
    fn zero() -> Self {
        Xf { m: 0.0, e: 0 }
    }

    fn one() -> Self {
        Xf { m: 0.5, e: 1 }
    }

    fn from_dyadic(d: &Dyadic, up: bool) -> Self {
        if d.is_zero() {
            return Self::zero();
        }
        let mant = d.mant().magnitude();
        let b = mant.bits();
        if b <= 53 {
            return Xf::norm(mant.to_f64().expect("fits"), d.exp());
        }
        let s = b - 53;
        let top = mant >> s;
        let exact = (&top << s) == *mant;
        let mut v = top.to_f64().expect("53 bits fit");
        if up && !exact {
            v += 1.0;
        }
        Xf::norm(v, d.exp() + s as i64)
    }

    fn from_ratio(num: u128, depth: u32, up: bool) -> Self {
        if num == 0 {
            return Self::zero();
        }
        let f = num as f64;
        let exact = f < 3.4e38 && f as u128 == num;
        let f = if exact { f } else { Xf::dir(f, up) };
        Xf::norm(f, -(depth as i64))
    }

    fn mul(&self, o: &Self, up: bool) -> Self {
        if self.m == 0.0 || o.m == 0.0 {
            return Self::zero();
        }
        let p = self.m * o.m;
        let (pm, pe) = frexp(p);
        // Products of two 53-bit mantissas are exact only by accident; always widen.
        Xf::norm(Xf::dir(pm, up), self.e + o.e + pe)
    }

    fn add(&self, o: &Self, up: bool) -> Self {
        if self.m == 0.0 {
            return *o;
        }
        if o.m == 0.0 {
            return *self;
        }
        let (big, small) = if (self.e, self.m) >= (o.e, o.m) { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 60 {
            return if up { Xf::norm(big.m.next_up(), big.e) } else { *big };
        }
        let s = small.m * 2f64.powi(-(d as i32));
        Xf::norm(Xf::dir(big.m + s, up), big.e)
    }

    fn sub(&self, o: &Self, up: bool) -> Self {
        if o.m == 0.0 {
            return *self;
        }
        if self.cmp_mag(o) != Ordering::Greater {
            return Self::zero();
        }
        let d = self.e - o.e;
        if d > 60 {
            return if up { *self } else { Xf::norm(self.m.next_down(), self.e) };
        }
        let s = o.m * 2f64.powi(-(d as i32));
        let diff = self.m - s;
        if diff <= 0.0 {
            return Self::zero();
        }
        Xf::norm(Xf::dir(diff, up), self.e)
    }

    fn cmp_mag(&self, o: &Self) -> Ordering {
        match (self.m == 0.0, o.m == 0.0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&o.e).then(self.m.partial_cmp(&o.m).expect("finite")),
        }
    }

    fn is_zero(&self) -> bool {
        self.m == 0.0
    }
}

/// Magnitude with a `P`-bit BigInt mantissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMag<const P: u32>(pub Dyadic);

impl<const P: u32> Mag for BigMag<P> {
    fn zero() -> Self {
        BigMag(Dyadic::zero())
    }

    fn one() -> Self {
        BigMag(Dyadic::one())
    }

    fn from_dyadic(d: &Dyadic, up: bool) -> Self {
        BigMag(d.abs().round(P, up))
    }

    fn from_ratio(num: u128, depth: u32, up: bool) -> Self {
        BigMag(Dyadic::new(BigInt::from(num), -(depth as i64)).round(P, up))
    }

    fn mul(&self, o: &Self, up: bool) -> Self {
        BigMag(self.0.mul_round(&o.0, P, up))
    }

    fn add(&self, o: &Self, up: bool) -> Self {
        BigMag(self.0.add_round(&o.0, P, up))
    }

    fn sub(&self, o: &Self, up: bool) -> Self {
        let d = self.0.add_round(&o.0.neg(), P, up);
        if d.sign() == Ordering::Less {
            BigMag(Dyadic::zero())
        } else {
            BigMag(d)
        }
    }

    fn cmp_mag(&self, o: &Self) -> Ordering {
        self.0.cmp(&o.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// A signed value `sign * mag`.
#[derive(Clone, Debug)]
struct SVal<M: Mag> {
    neg: bool,
    mag: M,
}

impl<M: Mag> SVal<M> {
    /// `a - b`, rounded in the requested direction.
    fn diff(a: &M, b: &M, up: bool) -> Self {
        if a.cmp_mag(b) != Ordering::Less {
            SVal { neg: false, mag: a.sub(b, up) }
        } else {
            SVal { neg: true, mag: b.sub(a, !up) }
        }
    }

    fn nonneg(&self) -> bool {
        !self.neg || self.mag.is_zero()
    }

    fn nonpos(&self) -> bool {
        self.neg || self.mag.is_zero()
    }

    fn negative(&self) -> bool {
        self.neg && !self.mag.is_zero()
    }

    /// `self - m` rounded down.
    fn minus_down(&self, m: &M) -> Self {
        if self.neg {
            SVal { neg: true, mag: self.mag.add(m, true) }
        } else {
            SVal::diff(&self.mag, m, false)
        }
    }

    fn max(self, o: Self) -> Self {
        let ge = match (self.neg, o.neg) {
            (false, true) => true,
            (true, false) => false,
            (false, false) => self.mag.cmp_mag(&o.mag) != Ordering::Less,
            (true, true) => self.mag.cmp_mag(&o.mag) != Ordering::Greater,
        };
        if ge {
            self
        } else {
            o
        }
    }
}

struct PreparedTerm<M> {
    c_lo: M,
    c_hi: M,
    negative: bool,
    base: Base,
    exp: u64,
}

struct Prepared<M> {
    terms: Vec<PreparedTerm<M>>,
}

impl<M: Mag> Prepared<M> {
    fn new(f: &SparseFn) -> Self {
        Prepared {
            terms: f
                .terms
                .iter()
                .map(|t| PreparedTerm {
                    c_lo: M::from_dyadic(&t.coeff, false),
                    c_hi: M::from_dyadic(&t.coeff, true),
                    negative: t.coeff.sign() == Ordering::Less,
                    base: t.base,
                    exp: t.exp,
                })
                .collect(),
        }
    }

    /// Enclosures `[p_lo, p_hi]` of the positive part and `[n_lo, n_hi]` of
    /// the negative part over the box `[a, b] = [num_a, num_b] / 2^depth`.
    fn enclose(&self, num_a: u128, num_b: u128, depth: u32) -> (M, M, M, M) {
        let mut p = (M::zero(), M::zero());
        let mut n = (M::zero(), M::zero());
        for t in &self.terms {
            let (lo_at, hi_at) = if t.base.increasing() { (num_a, num_b) } else { (num_b, num_a) };
            let lo = M::from_ratio(t.base.numerator(lo_at, depth), depth, false).pow(t.exp, false);
            let hi = M::from_ratio(t.base.numerator(hi_at, depth), depth, true).pow(t.exp, true);
            let lo = lo.mul(&t.c_lo, false);
            let hi = hi.mul(&t.c_hi, true);
            let acc = if t.negative { &mut n } else { &mut p };
            acc.0 = acc.0.add(&lo, false);
            acc.1 = acc.1.add(&hi, true);
        }
        (p.0, p.1, n.0, n.1)
    }
}

/// Outcome of a nonnegativity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCheck {
    /// The function is `>= 0` on the whole domain.
    NonNegative { boxes: u64 },
    /// The function is `< 0` at `num / 2^depth`.
    Negative { num: u64, depth: u32, boxes: u64 },
    /// Budget or resolution exhausted.
    Unknown { boxes: u64 },
}

/// A possible zero at one end of the domain.
///
/// If the first `j` derivatives vanish at the end `e`, Taylor's theorem
/// gives `f(x) = f^(j)(xi) (x - e)^j / j!`, so a box touching `e` is settled
/// once the `j`-th derivative has the right sign on it. `j` is found by exact
/// evaluation at `e` and capped by `order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub at_right: bool,
    pub order: u32,
}

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_boxes: u64,
    pub max_depth: u32,
    pub anchor: Option<Anchor>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_boxes: 200_000, max_depth: 56, anchor: None }
    }
}

/// A dyadic box `[idx, idx+1] / 2^depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyBox {
    pub idx: u64,
    pub depth: u32,
}

impl DyBox {
    pub const UNIT: DyBox = DyBox { idx: 0, depth: 0 };
    pub const LOWER_HALF: DyBox = DyBox { idx: 0, depth: 1 };
}

/// Number of leading derivatives (up to `cap`) that vanish exactly at the
/// anchored end, or `None` when they cannot be evaluated exactly.
fn vanishing_order(f: &SparseFn, dom: DyBox, anchor: Anchor) -> Option<u32> {
    let num = if anchor.at_right { dom.idx + 1 } else { dom.idx };
    let mut g = f.clone();
    for j in 0..anchor.order {
        if !g.exact_value_at(num, dom.depth)?.is_zero() {
            return Some(j);
        }
        g = g.derivative();
    }
    Some(anchor.order)
}

fn check_with<M: Mag>(f: &SparseFn, dom: DyBox, opts: &SearchOptions) -> SignCheck {
    let max_depth = opts.max_depth.min(62);
    let pf = Prepared::<M>::new(f);
    let pd = Prepared::<M>::new(&f.derivative());
    let anchor = match opts.anchor {
        Some(a) if a.order > 0 => match vanishing_order(f, dom, a) {
            None => return SignCheck::Unknown { boxes: 0 },
            Some(0) => None,
            Some(j) => {
                let mut g = f.clone();
                for _ in 0..j {
                    g = g.derivative();
                }
                // Sign flips for odd order at the right end.
                let flip = a.at_right && j % 2 == 1;
                Some((a.at_right, flip, Prepared::<M>::new(&g)))
            }
        },
        _ => None,
    };
    let mut stack = vec![dom];
    let mut boxes = 0u64;
    let mut unresolved = false;
    while let Some(bx) = stack.pop() {
        boxes += 1;
        if boxes > opts.max_boxes {
            return SignCheck::Unknown { boxes };
        }
        let d = bx.depth;
        let (a, b) = (bx.idx as u128, bx.idx as u128 + 1);
        let (p_lo, _, _, n_hi) = pf.enclose(a, b, d);
        let naive = SVal::diff(&p_lo, &n_hi, false);
        if naive.nonneg() {
            continue;
        }
        if let Some((at_right, flip, pg)) = &anchor {
            let scale = d - dom.depth;
            let touches = if *at_right {
                b == (dom.idx as u128 + 1) << scale
            } else {
                a == (dom.idx as u128) << scale
            };
            if touches {
                let (g_plo, g_phi, g_nlo, g_nhi) = pg.enclose(a, b, d);
                let ok = if *flip {
                    SVal::diff(&g_phi, &g_nlo, true).nonpos()
                } else {
                    SVal::diff(&g_plo, &g_nhi, false).nonneg()
                };
                if ok {
                    continue;
                }
            }
        }
        let c = 2 * a + 1;
        let (cp_lo, cp_hi, cn_lo, cn_hi) = pf.enclose(c, c, d + 1);
        if SVal::diff(&cp_hi, &cn_lo, true).negative() {
            return SignCheck::Negative { num: c as u64, depth: d + 1, boxes };
        }
        // Mean-value bound: f(x) >= f(c) - r * max(0, -D_lo, D_hi).
        let (dp_lo, dp_hi, dn_lo, dn_hi) = pd.enclose(a, b, d);
        let d_lo = SVal::diff(&dp_lo, &dn_hi, false);
        let d_hi = SVal::diff(&dp_hi, &dn_lo, true);
        let mut slope = M::zero();
        if d_lo.neg {
            slope = d_lo.mag.clone();
        }
        if !d_hi.neg && d_hi.mag.cmp_mag(&slope) == Ordering::Greater {
            slope = d_hi.mag.clone();
        }
        let r = M::from_ratio(1, d + 1, true);
        let mv = SVal::diff(&cp_lo, &cn_hi, false).minus_down(&slope.mul(&r, true));
        if mv.max(naive).nonneg() {
            continue;
        }
        if d >= max_depth {
            unresolved = true;
            continue;
        }
        stack.push(DyBox { idx: 2 * bx.idx + 1, depth: d + 1 });
        stack.push(DyBox { idx: 2 * bx.idx, depth: d + 1 });
    }
    if unresolved {
        SignCheck::Unknown { boxes }
    } else {
        SignCheck::NonNegative { boxes }
    }
}

/// Which arithmetic settled a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arithmetic {
    Float,
    Big128,
    Big320,
}

/// Proves `f >= 0` on `dom` or finds a point where `f < 0`, escalating the
/// arithmetic while the answer is unknown.
pub fn check_nonneg(f: &SparseFn, dom: DyBox, opts: &SearchOptions) -> (SignCheck, Arithmetic) {
    let r = check_with::<Xf>(f, dom, opts);
    if !matches!(r, SignCheck::Unknown { .. }) {
        return (r, Arithmetic::Float);
    }
    let r = check_with::<BigMag<128>>(f, dom, opts);
    if !matches!(r, SignCheck::Unknown { .. }) {
        return (r, Arithmetic::Big128);
    }
    (check_with::<BigMag<320>>(f, dom, opts), Arithmetic::Big320)
}

/// Runs the check on a single arithmetic, for tests that pin a route.
pub fn check_nonneg_with<M: Mag>(f: &SparseFn, dom: DyBox, opts: &SearchOptions) -> SignCheck {
    check_with::<M>(f, dom, opts)
}

/// Outward enclosure of `f` at the point `num / 2^depth`, as `f64` bounds on
/// `log2 |.|` are not meaningful for signed values; returns `(lo, hi)` of the
/// value scaled by `2^-shift` where `shift` keeps the result in `f64` range.
pub fn enclose_point_f64(f: &SparseFn, num: u64, depth: u32) -> (f64, f64) {
    let pf = Prepared::<Xf>::new(f);
    let (p_lo, p_hi, n_lo, n_hi) = pf.enclose(num as u128, num as u128, depth);
    let to = |x: &Xf| if x.m == 0.0 { 0.0 } else { x.m * 2f64.powi(x.e.clamp(-1074, 1023) as i32) };
    (to(&p_lo) - to(&n_hi), to(&p_hi) - to(&n_lo))
}

/// Nonzero check for zero-coefficient functions.
pub fn is_trivial(f: &SparseFn) -> bool {
    f.terms.iter().all(|t| t.coeff.mant().is_zero())
}
