//! Arbitrary-precision dyadic interval arithmetic and certified complex
//! embeddings of cyclotomic numbers.
//!
//! Values are mid-rad balls whose midpoint is a dyadic `mant * 2^exp` with a
//! `BigInt` mantissa. Every operation rounds the midpoint to the working
//! precision and absorbs the rounding error into the radius, so containment of
//! the true value is preserved at any precision.
//!
//! Signs of field elements are decided in two stages: an exact zero test in
//! the field, then interval refinement (doubling the precision) until the ball
//! excludes zero. The refinement loop terminates because the element has
//! already been proven nonzero.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{CycNum, Embedding, Rational};

/// A dyadic number `mant * 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        Dyadic { mant, exp }
    }

    pub fn from_int(k: i64) -> Dyadic {
        Dyadic { mant: BigInt::from(k), exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Round to `prec` mantissa bits, returning the rounded value and a bound
    /// on the absolute rounding error.
    fn round(&self, prec: u32) -> (Dyadic, Dyadic) {
        let bits = self.bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let drop = (bits - prec as u64) as u64;
        let mant = &self.mant >> drop;
        let rounded = Dyadic { mant, exp: self.exp + drop as i64 };
        // Truncation toward zero drops less than one ulp.
        let err = Dyadic { mant: BigInt::one(), exp: self.exp + drop as i64 };
        (rounded, err)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        Dyadic {
            mant: &lo.mant + (&hi.mant << shift),
            exp: lo.exp,
        }
    }

    fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    fn cmp_abs(&self, other: &Dyadic) -> Ordering {
        self.abs().sub(&other.abs()).mant.sign().partial_cmp(&Sign::NoSign).unwrap()
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    /// Approximate as f64 (for rendering only; not certified).
    pub fn to_f64(&self) -> f64 {
        let (d, _) = self.round(53);
        let m: f64 = match i64::try_from(&d.mant) {
            Ok(v) => v as f64,
            Err(_) => {
                // Out of i64 range after rounding to 64 bits only if huge.
                if d.mant.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        };
        m * libm_exp2(d.exp)
    }
}

fn libm_exp2(e: i64) -> f64 {
    // 2^e without std; exact for the exponent range we meet.
    if e >= 0 {
        let mut v = 1.0f64;
        for _ in 0..e.min(2048) {
            v *= 2.0;
        }
        v
    } else {
        let mut v = 1.0f64;
        for _ in 0..(-e).min(2048) {
            v *= 0.5;
        }
        v
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        if d.mant.is_negative() {
            Ordering::Less
        } else if d.mant.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A real ball `mid +/- rad`.
#[derive(Debug, Clone)]
pub struct RealBall {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

impl RealBall {
    pub fn exact(d: Dyadic) -> RealBall {
        RealBall { mid: d, rad: Dyadic::zero() }
    }

    pub fn zero() -> RealBall {
        RealBall::exact(Dyadic::zero())
    }

    fn normalize(mid: Dyadic, rad: Dyadic, prec: u32) -> RealBall {
        let (m, e1) = mid.round(prec);
        let (r, e2) = rad.round(32.max(prec / 4));
        // Both rounding errors go outward into the radius.
        let r = r.add(&e1).add(&e2).add(&e2);
        debug_assert!(!r.is_negative());
        RealBall { mid: m, rad: r }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> RealBall {
        if q.is_zero() {
            return RealBall::zero();
        }
        let num = q.numer();
        let den = q.denom();
        // Scale so the quotient keeps `prec` significant bits.
        let shift = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let scaled = if shift >= 0 {
            num << (shift as u64)
        } else {
            num >> ((-shift) as u64)
        };
        let mant = &scaled / den;
        let mid = Dyadic { mant, exp: -shift };
        let rad = Dyadic { mant: BigInt::one(), exp: -shift };
        RealBall::normalize(mid, rad, prec)
    }

    pub fn add(&self, other: &RealBall, prec: u32) -> RealBall {
        RealBall::normalize(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &RealBall, prec: u32) -> RealBall {
        RealBall::normalize(self.mid.sub(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn mul(&self, other: &RealBall, prec: u32) -> RealBall {
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        RealBall::normalize(mid, rad, prec)
    }

    pub fn div_int(&self, k: i64, prec: u32) -> RealBall {
        // Multiply by a ball enclosing 1/k.
        let shift = prec as i64 + 8;
        let mant = (BigInt::one() << (shift as u64)) / BigInt::from(k);
        let inv = RealBall {
            mid: Dyadic { mant, exp: -shift },
            rad: Dyadic { mant: BigInt::one(), exp: -shift },
        };
        self.mul(&inv, prec)
    }

    pub fn scale2(&self, e: i64) -> RealBall {
        RealBall {
            mid: Dyadic { mant: self.mid.mant.clone(), exp: self.mid.exp + e },
            rad: Dyadic { mant: self.rad.mant.clone(), exp: self.rad.exp + e },
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs().cmp_abs(&self.rad) != Ordering::Greater
    }

    /// Sign of every point of the ball, if uniform.
    pub fn certain_sign(&self) -> Option<i32> {
        if self.contains_zero() {
            if self.mid.is_zero() && self.rad.is_zero() {
                Some(0)
            } else {
                None
            }
        } else if self.mid.is_negative() {
            Some(-1)
        } else {
            Some(1)
        }
    }

    /// An upper bound on the magnitude of any point in the ball.
    fn mag_bound(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }
}

/// A complex ball with independent real and imaginary components.
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn zero() -> ComplexBall {
        ComplexBall { re: RealBall::zero(), im: RealBall::zero() }
    }

    pub fn add(&self, other: &ComplexBall, prec: u32) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&other.re, prec),
            im: self.im.add(&other.im, prec),
        }
    }

    pub fn mul(&self, other: &ComplexBall, prec: u32) -> ComplexBall {
        ComplexBall {
            re: self.re.mul(&other.re, prec).sub(&self.im.mul(&other.im, prec), prec),
            im: self.re.mul(&other.im, prec).add(&self.im.mul(&other.re, prec), prec),
        }
    }

    pub fn mul_real(&self, r: &RealBall, prec: u32) -> ComplexBall {
        ComplexBall {
            re: self.re.mul(r, prec),
            im: self.im.mul(r, prec),
        }
    }
}

/// A ball containing pi, by Machin's formula in fixed point.
pub fn pi_ball(prec: u32) -> RealBall {
    let scale = prec as i64 + 16;
    let a = arctan_recip_fixed(5, scale);
    let b = arctan_recip_fixed(239, scale);
    let mant = a.0 * 16 - b.0 * 4;
    let err = a.1 * 16 + b.1 * 4 + 4;
    RealBall::normalize(
        Dyadic { mant, exp: -scale },
        Dyadic { mant: BigInt::from(err), exp: -scale },
    prec)
}

/// `floor(arctan(1/x) * 2^scale)` with an error bound in ulps.
fn arctan_recip_fixed(x: i64, scale: i64) -> (BigInt, i64) {
    let x2 = BigInt::from(x * x);
    let mut term = (BigInt::one() << (scale as u64)) / BigInt::from(x);
    let mut sum = term.clone();
    let mut k: i64 = 1;
    let mut err: i64 = 2;
    while !term.is_zero() {
        term = &term / &x2;
        let contrib = &term / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= &contrib;
        } else {
            sum += &contrib;
        }
        err += 1;
        k += 1;
        if contrib.is_zero() {
            break;
        }
    }
    (sum, err)
}

/// cos and sin of a ball (|theta| <= 2 pi in practice) by Taylor series with a
/// certified remainder.
pub fn cos_sin(theta: &RealBall, prec: u32) -> (RealBall, RealBall) {
    let work = prec + 16;
    let one = RealBall::exact(Dyadic::from_int(1));
    let t2 = theta.mul(theta, work);
    let mut cos = one.clone();
    let mut sin = theta.clone();
    let mut term_c = one;
    let mut term_s = theta.clone();
    let mut k: i64 = 0;
    loop {
        // term_c: (-1)^k theta^(2k) / (2k)!; advance both one step.
        term_c = term_c.mul(&t2, work).div_int((2 * k + 1) * (2 * k + 2), work).neg();
        term_s = term_s.mul(&t2, work).div_int((2 * k + 2) * (2 * k + 3), work).neg();
        cos = cos.add(&term_c, work);
        sin = sin.add(&term_s, work);
        k += 1;
        let bound_c = term_c.mag_bound();
        let bound_s = term_s.mag_bound();
        let tiny = Dyadic::pow2(-(prec as i64) - 8);
        // Past k where theta^2 < (2k+1)(2k+2)/2 the tail is bounded by twice
        // the last term.
        let ratio_ok = t2
            .mag_bound()
            .cmp_abs(&Dyadic::from_int((2 * k + 1) * (2 * k + 2) / 2))
            == Ordering::Less;
        if ratio_ok && bound_c.cmp_abs(&tiny) == Ordering::Less && bound_s.cmp_abs(&tiny) == Ordering::Less {
            let slack = RealBall {
                mid: Dyadic::zero(),
                rad: Dyadic::pow2(-(prec as i64) - 6),
            };
            cos = cos.add(&slack, prec);
            sin = sin.add(&slack, prec);
            return (cos, sin);
        }
        assert!(k < 10_000, "cos_sin failed to converge");
    }
}

/// Certified evaluator for one embedding: caches root-of-unity balls per
/// precision so repeated sign queries stay cheap.
pub struct Evaluator {
    embedding: Embedding,
    start_prec: u32,
    roots: BTreeMap<u32, Vec<ComplexBall>>,
}

/// Process-wide floor for interval start precision, settable by front ends.
static PRECISION_FLOOR: core::sync::atomic::AtomicU32 =
    core::sync::atomic::AtomicU32::new(64);

/// Raise (or lower) the starting precision used by `Evaluator::new`.
/// Clamped to at least 16 bits; refinement still doubles from there.
pub fn set_precision_floor(bits: u32) {
    PRECISION_FLOOR.store(bits.max(16), core::sync::atomic::Ordering::Relaxed);
}

pub fn precision_floor() -> u32 {
    PRECISION_FLOOR.load(core::sync::atomic::Ordering::Relaxed)
}

impl Evaluator {
    pub fn new(embedding: Embedding) -> Evaluator {
        Evaluator::with_precision(embedding, precision_floor())
    }

    pub fn with_precision(embedding: Embedding, start_prec: u32) -> Evaluator {
        Evaluator {
            embedding,
            start_prec: start_prec.max(16),
            roots: BTreeMap::new(),
        }
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    fn root_table(&mut self, prec: u32) -> &[ComplexBall] {
        let e = self.embedding;
        self.roots.entry(prec).or_insert_with(|| {
            let n = e.field_order();
            let phi = crate::cyclotomic::euler_phi(n) as usize;
            let pi = pi_ball(prec + 8);
            let mut table = Vec::with_capacity(phi);
            for j in 0..phi {
                let k = (j as u64 * e.root_index() as u64) % n as u64;
                // theta = 2 pi k / n
                let theta = pi
                    .scale2(1)
                    .mul(&RealBall::exact(Dyadic::from_int(k as i64)), prec + 8)
                    .div_int(n as i64, prec + 8);
                let (c, s) = cos_sin(&theta, prec);
                table.push(ComplexBall { re: c, im: s });
            }
            table
        })
    }

    /// A ball containing the embedded value of `a`, at `prec` bits.
    pub fn embed(&mut self, a: &CycNum, prec: u32) -> ComplexBall {
        assert_eq!(a.order(), self.embedding.field_order(), "field order mismatch");
        let prec = prec.max(16);
        let coeffs: Vec<RealBall> = a
            .coeffs()
            .iter()
            .map(|q| RealBall::from_rational(q, prec))
            .collect();
        let table = self.root_table(prec);
        let mut acc = ComplexBall::zero();
        for (c, root) in coeffs.iter().zip(table) {
            if c.mid.is_zero() && c.rad.is_zero() {
                continue;
            }
            acc = acc.add(&root.mul_real(c, prec), prec);
        }
        acc
    }

    /// Exact sign of the real part of the embedded value.
    pub fn sign_re(&mut self, a: &CycNum) -> i32 {
        let w = a.two_re();
        if w.is_zero() {
            return 0;
        }
        let mut prec = self.start_prec;
        loop {
            let ball = self.embed(&w, prec);
            if let Some(s) = ball.re.certain_sign() {
                if s != 0 {
                    return s;
                }
            }
            prec *= 2;
            assert!(prec <= 1 << 24, "sign refinement exceeded precision bound");
        }
    }

    /// Exact sign of the imaginary part of the embedded value.
    pub fn sign_im(&mut self, a: &CycNum) -> i32 {
        let w = a.two_i_im();
        if w.is_zero() {
            return 0;
        }
        let mut prec = self.start_prec;
        loop {
            let ball = self.embed(&w, prec);
            if let Some(s) = ball.im.certain_sign() {
                if s != 0 {
                    return s;
                }
            }
            prec *= 2;
            assert!(prec <= 1 << 24, "sign refinement exceeded precision bound");
        }
    }

    /// Lexicographic comparison of embedded values by (Re, Im).
    pub fn cmp_re_im(&mut self, a: &CycNum, b: &CycNum) -> Ordering {
        let d = a.sub(b);
        match self.sign_re(&d) {
            -1 => Ordering::Less,
            1 => Ordering::Greater,
            _ => match self.sign_im(&d) {
                -1 => Ordering::Less,
                1 => Ordering::Greater,
                _ => Ordering::Equal,
            },
        }
    }

    /// Sign of an element known to be real under the embedding. Embeds the
    /// element directly, with no symmetrization.
    pub fn sign_real_element(&mut self, a: &CycNum) -> i32 {
        debug_assert!(a.two_i_im().is_zero(), "element is not real");
        if a.is_zero() {
            return 0;
        }
        let mut prec = self.start_prec;
        loop {
            let ball = self.embed(a, prec);
            if let Some(s) = ball.re.certain_sign() {
                if s != 0 {
                    return s;
                }
            }
            prec *= 2;
            assert!(prec <= 1 << 24, "sign refinement exceeded precision bound");
        }
    }
}

/// Which part of the embedded value a sign query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Real,
    Imaginary,
}

/// Exact sign (`-1 | 0 | +1`) of the chosen part of the embedded value.
///
/// The zero case is decided exactly in the field; interval refinement only
/// separates provably-nonzero values from zero.
pub fn certified_sign(a: &CycNum, part: Part, e: Embedding) -> i32 {
    let mut ev = Evaluator::new(e);
    match part {
        Part::Real => ev.sign_re(a),
        Part::Imaginary => ev.sign_im(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycNum;

    #[test]
    fn pi_is_pi() {
        let p = pi_ball(128);
        let v = p.mid.to_f64();
        assert!((v - core::f64::consts::PI).abs() < 1e-12);
        assert!(p.rad.to_f64() < 1e-30);
    }

    #[test]
    fn embed_alpha_n_plus() {
        // root_index 3: alpha ~ -0.30902 + 0.95106i
        let e = Embedding::new(10, 3).unwrap();
        let mut ev = Evaluator::new(e);
        let ball = ev.embed(&CycNum::zeta(10), 64);
        assert!((ball.re.mid.to_f64() + 0.30902).abs() < 1e-4);
        assert!((ball.im.mid.to_f64() - 0.95106).abs() < 1e-4);
    }

    #[test]
    fn embed_alpha_m_plus() {
        // root_index 1: alpha ~ 0.80902 + 0.58779i
        let e = Embedding::new(10, 1).unwrap();
        let mut ev = Evaluator::new(e);
        let ball = ev.embed(&CycNum::zeta(10), 64);
        assert!((ball.re.mid.to_f64() - 0.80902).abs() < 1e-4);
        assert!((ball.im.mid.to_f64() - 0.58779).abs() < 1e-4);
    }

    #[test]
    fn embed_one_is_exactly_representable() {
        let e = Embedding::new(10, 3).unwrap();
        let mut ev = Evaluator::new(e);
        let ball = ev.embed(&CycNum::one(10), 64);
        assert!((ball.re.mid.to_f64() - 1.0).abs() < 1e-15);
        assert!(ball.im.mid.to_f64().abs() < 1e-15);
    }

    #[test]
    fn signs_of_alpha() {
        let e = Embedding::new(10, 3).unwrap();
        let a = CycNum::zeta(10);
        assert_eq!(certified_sign(&a, Part::Imaginary, e), 1);
        assert_eq!(certified_sign(&a, Part::Real, e), -1);
        assert_eq!(certified_sign(&CycNum::zero(10), Part::Real, e), 0);
        // 2 Re(alpha) < 0 under root_index 3
        let two_re = a.two_re();
        assert_eq!(certified_sign(&two_re, Part::Real, e), -1);
        assert_eq!(certified_sign(&two_re, Part::Imaginary, e), 0);
    }

    #[test]
    fn embed_respects_products() {
        let e = Embedding::new(10, 3).unwrap();
        let mut ev = Evaluator::new(e);
        let a = CycNum::root_power(3, 10).sub(&CycNum::from_integer(2, 10));
        let b = CycNum::zeta(10).add(&CycNum::one(10));
        let pr = ev.embed(&a.mul(&b), 96);
        let pa = ev.embed(&a, 96);
        let pb = ev.embed(&b, 96);
        let prod = pa.mul(&pb, 96);
        // The two balls must overlap (both contain the true value).
        assert!((pr.re.mid.to_f64() - prod.re.mid.to_f64()).abs() < 1e-20);
        assert!((pr.im.mid.to_f64() - prod.im.mid.to_f64()).abs() < 1e-20);
    }

    #[test]
    fn i_maps_to_plus_i_under_lifted_embedding() {
        let e = Embedding::new(10, 3).unwrap().lift_to(40).unwrap();
        let mut ev = Evaluator::new(e);
        let i = CycNum::root_power(10, 40);
        let ball = ev.embed(&i, 64);
        assert!(ball.re.mid.to_f64().abs() < 1e-15);
        assert!((ball.im.mid.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_shrinks_radius() {
        let e = Embedding::new(10, 3).unwrap();
        let mut ev = Evaluator::new(e);
        let a = CycNum::zeta(10);
        let r64 = ev.embed(&a, 64).re.rad.to_f64();
        let r256 = ev.embed(&a, 256).re.rad.to_f64();
        assert!(r256 < r64 * 1e-20);
    }
}
