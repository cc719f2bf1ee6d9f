//! Dense integer polynomials and exact real-root isolation on `(0, 1)`.
//!
//! Isolation is the Vincent-Collins-Akritas bisection: the number of sign
//! variations of `(1+x)^D P(1/(1+x))` bounds the roots of `P` in `(0, 1)`
//! and has their parity; zero or one variation settles the interval.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomial, coefficient `i` of `x^i`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divided by its content, with a positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().expect("nonzero").is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign at `num / 2^depth`, via the integer `2^(depth D) P(num / 2^depth)`.
    pub fn sign_at_dyadic(&self, num: &BigInt, depth: u64) -> Ordering {
        let mut acc = BigInt::zero();
        let mut scale = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &scale;
            if i > 0 {
                scale <<= depth;
            }
        }
        acc.cmp(&BigInt::zero())
    }

    /// Number of sign changes in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for c in &self.coeffs {
            let s = c.sign();
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// `P(x + 1)`.
    pub fn taylor_shift_one(&self) -> IntPoly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let (lo, hi) = a.split_at_mut(j + 1);
                lo[j] += &hi[0];
            }
        }
        IntPoly::new(a)
    }

    /// `x^D P(1/x)`.
    pub fn reversed(&self) -> IntPoly {
        let mut a = self.coeffs.clone();
        a.reverse();
        IntPoly::new(a)
    }

    /// `2^D P(x/2)`.
    pub fn halve_argument(&self) -> IntPoly {
        let d = self.coeffs.len().saturating_sub(1);
        IntPoly::new(self.coeffs.iter().enumerate().map(|(i, c)| c << (d - i)).collect())
    }

    /// Divided by `x^j` where `x^j` is the largest power dividing it.
    pub fn strip_zero_root(&self) -> (IntPoly, usize) {
        let j = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (IntPoly::new(self.coeffs[j..].to_vec()), j)
    }

    fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut r = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        IntPoly::new(r)
    }

    /// Pseudo-remainder `lc(o)^(deg - deg o + 1) self mod o`.
    fn pseudo_rem(&self, o: &IntPoly) -> IntPoly {
        let db = o.degree().expect("nonzero divisor");
        let lb = o.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let lr = r.last().expect("nonempty").clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, b) in o.coeffs.iter().enumerate() {
                r[i + shift] -= &lr * b;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        IntPoly::new(r)
    }

    /// Exact division, erroring if the remainder is nonzero.
    pub fn div_exact(&self, o: &IntPoly) -> Result<IntPoly> {
        let db = o.degree().ok_or_else(|| Error::Invariant("division by zero polynomial".into()))?;
        let lb = o.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return if self.is_zero() {
                Ok(IntPoly::zero())
            } else {
                Err(Error::Invariant("inexact polynomial division".into()))
            };
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        for s in (0..q.len()).rev() {
            let top = r[s + db].clone();
            let (qc, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return Err(Error::Invariant("inexact polynomial division".into()));
            }
            for (i, b) in o.coeffs.iter().enumerate() {
                r[s + i] -= &qc * b;
            }
            q[s] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(IntPoly::new(q))
    }
}

/// Greatest common divisor (primitive, positive leading coefficient) by the
/// primitive remainder sequence.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = (a.primitive(), b.primitive());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.pseudo_rem(&b).primitive();
        a = b;
        b = r;
    }
    a.primitive()
}

const MOD_PRIMES: [u64; 3] = [2305843009213693951, 4611686018427387847, 1152921504606846883];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn reduce(p: &IntPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut v: Vec<u64> = p.coeffs.iter().map(|c| c.mod_floor(&mb).to_u64().expect("reduced")).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        let inv = powmod(*b.last().expect("nonempty"), p - 2, p);
        while a.len() >= b.len() && !a.is_empty() {
            let f = mulmod(*a.last().expect("nonempty"), inv, p);
            let s = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                a[s + i] = (a[s + i] + p - mulmod(f, c, p)) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True if the polynomial is square-free, decided modulo a prime that does
/// not divide the leading coefficient. `None` if every trial prime is
/// inconclusive.
pub fn squarefree_modular(p: &IntPoly) -> Option<bool> {
    let d = p.degree()?;
    if d == 0 {
        return Some(true);
    }
    let dp = p.derivative();
    for &m in &MOD_PRIMES {
        let lc = p.leading().expect("nonzero").mod_floor(&BigInt::from(m));
        if lc.is_zero() || (d as u64) % m == 0 {
            continue;
        }
        if gcd_degree_mod(reduce(p, m), reduce(&dp, m), m) == 0 {
            return Some(true);
        }
    }
    None
}

/// Yun's square-free decomposition: `p = c * prod f_i^i` with `f_i`
/// square-free and pairwise coprime. Index `i - 1` holds `f_i`.
pub fn yun(p: &IntPoly) -> Vec<IntPoly> {
    // Quotients by primitive divisors stay integral (Gauss), so the field
    // recurrence runs over the integers without rescaling.
    let p = p.primitive();
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let dp = p.derivative();
    let a0 = gcd(&p, &dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let c = dp.div_exact(&a0).expect("gcd divides");
    let mut d = sub(&c, &b.derivative());
    let mut out = Vec::new();
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        b = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = sub(&c, &b.derivative());
        out.push(a);
    }
    while out.last().is_some_and(|f| f.degree() == Some(0)) {
        out.pop();
    }
    out
}

fn sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let z = BigInt::zero();
    IntPoly::new(
        (0..n)
            .map(|i| a.coeffs.get(i).unwrap_or(&z) - b.coeffs.get(i).unwrap_or(&z))
            .collect(),
    )
}

/// Product of the factors of odd multiplicity, which has exactly the roots
/// where the polynomial changes sign.
pub fn odd_multiplicity_part(p: &IntPoly) -> IntPoly {
    if squarefree_modular(p) == Some(true) {
        return p.primitive();
    }
    let mut r = IntPoly::new(vec![BigInt::one()]);
    for (i, f) in yun(p).iter().enumerate() {
        if i % 2 == 0 {
            r = r.mul(f);
        }
    }
    r.primitive()
}

/// Open dyadic interval `(num, num + 1) / 2^depth`, or the exact point
/// `num / 2^depth` when `exact` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    pub num: BigInt,
    pub depth: u64,
    pub exact: bool,
}

impl RootInterval {
    pub fn lo(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.depth)
    }

    pub fn hi(&self) -> BigRational {
        if self.exact {
            self.lo()
        } else {
            BigRational::new(&self.num + 1, BigInt::one() << self.depth)
        }
    }
}

/// Isolation outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Isolation {
    Done(Vec<RootInterval>),
    /// Node budget exhausted; roots isolated so far.
    Partial(Vec<RootInterval>),
}

fn descartes_unit(p: &IntPoly) -> usize {
    p.reversed().taylor_shift_one().sign_variations()
}

/// Isolates the roots in `(0, 1)` of a square-free polynomial, stopping early
/// once `stop_after` roots are found.
pub fn isolate_unit(p: &IntPoly, max_nodes: usize, stop_after: Option<usize>) -> Isolation {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return Isolation::Done(out);
    }
    let mut stack = vec![(p.primitive(), BigInt::zero(), 0u64)];
    let mut nodes = 0usize;
    while let Some((q, num, depth)) = stack.pop() {
        if stop_after.is_some_and(|s| out.len() >= s) {
            return Isolation::Done(out);
        }
        nodes += 1;
        if nodes > max_nodes {
            return Isolation::Partial(out);
        }
        match descartes_unit(&q) {
            0 => continue,
            1 => {
                out.push(RootInterval { num, depth, exact: false });
                continue;
            }
            _ => {}
        }
        let left = q.halve_argument().primitive();
        let mut right = left.taylor_shift_one();
        let cnum = &num << 1;
        if right.coeffs.first().is_some_and(|c| c.is_zero()) {
            out.push(RootInterval { num: &cnum + 1, depth: depth + 1, exact: true });
            right = right.strip_zero_root().0;
        }
        stack.push((right.primitive(), &cnum + 1, depth + 1));
        stack.push((left, cnum, depth + 1));
    }
    out.sort_by(|a, b| {
        (a.lo(), a.exact).partial_cmp(&(b.lo(), b.exact)).expect("total")
    });
    Isolation::Done(out)
}

/// Number of roots in `(0, 1)` of a square-free polynomial, if decided.
pub fn count_unit_roots(p: &IntPoly, max_nodes: usize) -> Option<usize> {
    match isolate_unit(p, max_nodes, None) {
        Isolation::Done(v) => Some(v.len()),
        Isolation::Partial(_) => None,
    }
}

/// Narrows a single-root interval of a square-free `p` until its width is at
/// most `2^-target_depth`.
pub fn refine(p: &IntPoly, iv: &RootInterval, target_depth: u64) -> RootInterval {
    let mut iv = iv.clone();
    if iv.exact {
        return iv;
    }
    let lo_sign = p.sign_at_dyadic(&iv.num, iv.depth);
    while iv.depth < target_depth {
        let mid = (&iv.num << 1) + 1;
        let d = iv.depth + 1;
        let s = p.sign_at_dyadic(&mid, d);
        if s == Ordering::Equal {
            return RootInterval { num: mid, depth: d, exact: true };
        }
        iv = if s == lo_sign {
            RootInterval { num: mid, depth: d, exact: false }
        } else {
            RootInterval { num: mid - 1, depth: d, exact: false }
        };
    }
    iv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn isolates_simple_roots() {
        // (3x - 1)(4x - 3)(x - 2) = 12x^3 - 37x^2 + 29x - 6
        let p = poly(&[-6, 29, -37, 12]);
        let Isolation::Done(r) = isolate_unit(&p, 1000, None) else { panic!() };
        assert_eq!(r.len(), 2);
        let third = BigRational::new(1.into(), 3.into());
        assert!(r[0].lo() < third && third < r[0].hi());
    }

    #[test]
    fn root_at_half_is_exact() {
        let p = poly(&[-1, 2]);
        let Isolation::Done(r) = isolate_unit(&p.primitive(), 100, None) else { panic!() };
        assert_eq!(r.len(), 1);
        // A single variation settles the unit interval before any bisection.
        let q = poly(&[1, -6, 8]); // (2x-1)(4x-1)
        let Isolation::Done(r) = isolate_unit(&q, 100, None) else { panic!() };
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|iv| iv.exact && iv.lo() == BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn yun_splits_multiplicities() {
        // (x - 1)^2 (2x + 1)^3 (x + 5)
        let a = poly(&[-1, 1]);
        let b = poly(&[1, 2]);
        let c = poly(&[5, 1]);
        let p = a.mul(&a).mul(&b).mul(&b).mul(&b).mul(&c);
        let f = yun(&p);
        assert_eq!(f.len(), 3);
        assert_eq!(f[0], c);
        assert_eq!(f[1], a);
        assert_eq!(f[2], b);
        assert_eq!(squarefree_modular(&p), None);
        assert_eq!(odd_multiplicity_part(&p), b.mul(&c));
    }

    #[test]
    fn taylor_shift_matches_binomials() {
        let p = poly(&[0, 0, 0, 1]);
        assert_eq!(p.taylor_shift_one(), poly(&[1, 3, 3, 1]));
    }

    #[test]
    fn refine_narrows() {
        let p = poly(&[-1, 0, 2]); // 2x^2 - 1, root 1/sqrt 2
        let Isolation::Done(r) = isolate_unit(&p, 100, None) else { panic!() };
        let iv = refine(&p, &r[0], 30);
        let v = iv.lo().to_f64().unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    }
}
