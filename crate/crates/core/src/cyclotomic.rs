//! Exact arithmetic in the cyclotomic field `Q(zeta_n)`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(n)-1)`,
//! reduced modulo the n-th cyclotomic polynomial, so equality is coefficient
//! comparison. The embedding into `C` is a separate, named choice
//! ([`Embedding`]); all field arithmetic is embedding-free.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Euler totient, by trial-division factorization. Orders here are tiny.
pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
///
/// Computed as `(X^n - 1) / prod_{d | n, d < n} Phi_d(X)` by exact division.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // X^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "non-exact polynomial division");
    quot
}

/// Error type for field operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycError {
    DivisionByZero,
    /// `galois_apply` with an exponent not coprime to the field order.
    NotCoprime { k: i64, order: u32 },
    MixedOrders { left: u32, right: u32 },
    /// Target order of a lift is not a multiple of the current order.
    BadLift { from: u32, to: u32 },
    Parse(String),
}

impl fmt::Display for CycError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycError::DivisionByZero => write!(f, "division by zero"),
            CycError::NotCoprime { k, order } => {
                write!(f, "exponent {k} is not coprime to the field order {order}")
            }
            CycError::MixedOrders { left, right } => {
                write!(f, "mixed field orders {left} and {right}")
            }
            CycError::BadLift { from, to } => {
                write!(f, "cannot lift Q(zeta_{from}) into Q(zeta_{to})")
            }
            CycError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for CycError {}

/// An element of `Q(zeta_n)` in the canonical power basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    order: u32,
    /// Length `phi(order)`, basis `1, zeta, ..., zeta^(phi-1)`.
    coeffs: Vec<Rational>,
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({}; {})", self.order, self.to_poly_string())
    }
}

impl CycNum {
    /// Reduce an arbitrary polynomial in `zeta` modulo `Phi_n`.
    pub fn from_poly(raw: &[Rational], n: u32) -> CycNum {
        assert!(n >= 1);
        let phi = euler_phi(n) as usize;
        let mut rem: Vec<Rational> = raw.to_vec();
        if rem.len() < phi {
            rem.resize(phi, Rational::zero());
        }
        if rem.iter().skip(phi).any(|c| !c.is_zero()) {
            // Divide by the monic Phi_n, keep the remainder; Phi_n is sparse
            // so only its nonzero terms are touched.
            let terms: Vec<(usize, Rational)> = cyclotomic_polynomial(n)
                .into_iter()
                .take(phi)
                .enumerate()
                .filter(|(_, d)| !d.is_zero())
                .map(|(i, d)| (i, Rational::from(d)))
                .collect();
            for k in (phi..rem.len()).rev() {
                let c = core::mem::replace(&mut rem[k], Rational::zero());
                if !c.is_zero() {
                    for (i, d) in &terms {
                        rem[k - phi + i] -= &c * d;
                    }
                }
            }
        }
        rem.truncate(phi);
        CycNum { order: n, coeffs: rem }
    }

    pub fn zero(n: u32) -> CycNum {
        CycNum {
            order: n,
            coeffs: vec![Rational::zero(); euler_phi(n) as usize],
        }
    }

    pub fn one(n: u32) -> CycNum {
        CycNum::from_rational(Rational::one(), n)
    }

    pub fn from_rational(q: Rational, n: u32) -> CycNum {
        let mut c = CycNum::zero(n);
        c.coeffs[0] = q;
        c
    }

    pub fn from_integer(k: i64, n: u32) -> CycNum {
        CycNum::from_rational(Rational::from(BigInt::from(k)), n)
    }

    /// `zeta_n^k` (k may be any integer; it is taken modulo n).
    pub fn root_power(k: i64, n: u32) -> CycNum {
        let k = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![Rational::zero(); k + 1];
        raw[k] = Rational::one();
        CycNum::from_poly(&raw, n)
    }

    /// `zeta_n` itself.
    pub fn zeta(n: u32) -> CycNum {
        CycNum::root_power(1, n)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &CycNum) -> Result<(), CycError> {
        if self.order != other.order {
            Err(CycError::MixedOrders {
                left: self.order,
                right: other.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        self.check_order(other).expect("mixed field orders");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycNum { order: self.order, coeffs }
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.check_order(other).expect("mixed field orders");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycNum { order: self.order, coeffs }
    }

    pub fn neg(&self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &CycNum) -> CycNum {
        self.check_order(other).expect("mixed field orders");
        let mut raw = vec![Rational::zero(); 2 * self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        CycNum::from_poly(&raw, self.order)
    }

    pub fn scale(&self, q: &Rational) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_n` over `Q`.
    pub fn inverse(&self) -> Result<CycNum, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        // Extended gcd of self (as a polynomial) and Phi_n.
        let phin: Vec<Rational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(Rational::from)
            .collect();
        let mut r0 = phin;
        let mut r1: Vec<Rational> = self.coeffs.clone();
        trim(&mut r0);
        trim(&mut r1);
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant gcd; s0 * self == r0 (mod Phi_n).
        assert_eq!(r0.len(), 1, "element shares a factor with Phi_n");
        let inv_c = r0[0].recip();
        let scaled: Vec<Rational> = s0.iter().map(|c| c * &inv_c).collect();
        Ok(CycNum::from_poly(&scaled, self.order))
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum, CycError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Image under the Galois automorphism `zeta -> zeta^k`, `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Result<CycNum, CycError> {
        let n = self.order as i64;
        if k.rem_euclid(n).gcd(&n) != 1 {
            return Err(CycError::NotCoprime { k, order: self.order });
        }
        let mut raw = vec![Rational::zero(); self.order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = ((i as i64) * k).rem_euclid(n) as usize;
            raw[e] += c;
        }
        Ok(CycNum::from_poly(&raw, self.order))
    }

    /// The automorphism `zeta -> zeta^(-1)`. Under every embedding this is
    /// complex conjugation.
    pub fn conj(&self) -> CycNum {
        self.galois(self.order as i64 - 1).expect("n-1 is coprime to n")
    }

    /// Twice the real part, `self + conj(self)`: an element fixed by
    /// conjugation, hence real under every embedding.
    pub fn two_re(&self) -> CycNum {
        self.add(&self.conj())
    }

    /// `self - conj(self)`: purely imaginary under every embedding
    /// (this is `2i * Im` of the embedded value).
    pub fn two_i_im(&self) -> CycNum {
        self.sub(&self.conj())
    }

    /// Inclusion `Q(zeta_m) -> Q(zeta_n)` for `m | n`, `zeta_m -> zeta_n^(n/m)`.
    pub fn lift_to(&self, n: u32) -> Result<CycNum, CycError> {
        if n % self.order != 0 {
            return Err(CycError::BadLift { from: self.order, to: n });
        }
        let step = (n / self.order) as usize;
        let mut raw = vec![Rational::zero(); self.coeffs.len() * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Ok(CycNum::from_poly(&raw, n))
    }

    /// Polynomial string in the variable `a`, e.g. `-a^3`, `a - 1`, `1/2*a^2`.
    pub fn to_poly_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let unit_coeff = mag.is_one() && i > 0;
            if !unit_coeff {
                out.push_str(&format!("{mag}"));
            }
            if i > 0 {
                if !unit_coeff {
                    out.push('*');
                }
                out.push('a');
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parse the polynomial form produced by [`CycNum::to_poly_string`].
    ///
    /// Accepts sums of terms `[p[/q]][*][a[^e]]` with optional surrounding
    /// parentheses, e.g. `-a^3`, `(a-1)`, `1/2*a^2 - 3`.
    pub fn parse(input: &str, n: u32) -> Result<CycNum, CycError> {
        let mut s: &str = input.trim();
        while s.starts_with('(') && s.ends_with(')') && balanced(&s[1..s.len() - 1]) {
            s = s[1..s.len() - 1].trim();
        }
        if s.is_empty() {
            return Err(CycError::Parse(String::from("empty expression")));
        }
        let mut raw: Vec<Rational> = vec![Rational::zero(); n as usize + 1];
        let mut rest = s;
        let mut sign = 1i64;
        // Leading sign.
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        loop {
            let (term, tail) = split_term(rest);
            let (coeff, exp) = parse_term(term.trim())?;
            let e = exp;
            if e as usize >= raw.len() {
                raw.resize(e as usize + 1, Rational::zero());
            }
            raw[e as usize] += coeff * Rational::from(BigInt::from(sign));
            match tail {
                None => break,
                Some((next_sign, t)) => {
                    sign = next_sign;
                    rest = t.trim_start();
                }
            }
        }
        Ok(CycNum::from_poly(&raw, n))
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Split off the first additive term; returns the term and, if more follows,
/// the sign of the next term plus the remainder.
fn split_term(s: &str) -> (&str, Option<(i64, &str)>) {
    for (idx, ch) in s.char_indices() {
        if idx == 0 {
            continue;
        }
        if ch == '+' || ch == '-' {
            // Not a sign inside an exponent like `a^-1` (not produced, but be safe).
            let prev = s[..idx].chars().next_back().unwrap();
            if prev == '^' || prev == '/' || prev == '*' {
                continue;
            }
            let sign = if ch == '+' { 1 } else { -1 };
            return (&s[..idx], Some((sign, &s[idx + 1..])));
        }
    }
    (s, None)
}

/// Parse a single term `p[/q][*][a[^e]]` into (coefficient, exponent of a).
fn parse_term(t: &str) -> Result<(Rational, u32), CycError> {
    let err = |m: &str| CycError::Parse(format!("{m}: `{t}`"));
    if t.is_empty() {
        return Err(err("empty term"));
    }
    let (coeff_str, var_str) = match t.find('a') {
        None => (t, ""),
        Some(i) => (&t[..i], &t[i..]),
    };
    let coeff_str = coeff_str.trim().trim_end_matches('*').trim();
    let coeff = if coeff_str.is_empty() {
        if var_str.is_empty() {
            return Err(err("missing coefficient"));
        }
        Rational::one()
    } else {
        parse_rational(coeff_str).ok_or_else(|| err("bad coefficient"))?
    };
    let exp = if var_str.is_empty() {
        0
    } else if var_str == "a" {
        1
    } else {
        let e = var_str
            .strip_prefix("a^")
            .ok_or_else(|| err("bad variable part"))?;
        e.trim().parse::<u32>().map_err(|_| err("bad exponent"))?
    };
    Ok((coeff, exp))
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

// -- dense rational polynomial helpers (for the extended gcd) --

fn trim(p: &mut Vec<Rational>) {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if !c.is_zero() {
            for (i, d) in b.iter().enumerate() {
                let t = &c * d;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    trim(&mut quot);
    trim(&mut rem);
    (quot, rem)
}

/// A named complex embedding `zeta_n -> exp(2 pi i k / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Embedding {
    field_order: u32,
    root_index: u32,
}

impl Embedding {
    pub fn new(field_order: u32, root_index: u32) -> Result<Embedding, CycError> {
        if (root_index as i64).gcd(&(field_order as i64)) != 1 {
            return Err(CycError::NotCoprime {
                k: root_index as i64,
                order: field_order,
            });
        }
        Ok(Embedding {
            field_order,
            root_index: root_index % field_order,
        })
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn root_index(&self) -> u32 {
        self.root_index
    }

    /// The complex-conjugate embedding, `k -> n - k`.
    pub fn conjugate(&self) -> Embedding {
        Embedding {
            field_order: self.field_order,
            root_index: self.field_order - self.root_index,
        }
    }

    /// Lift to an embedding of `Q(zeta_n)` for `m | n` that restricts to this
    /// one, normalized so that when `4 | n` the lift sends `zeta_n^(n/4)` to
    /// `+i`. Used by the wiring pipeline, which adjoins `i` (and the chart
    /// rotation) to the coefficient field.
    pub fn lift_to(&self, n: u32) -> Result<Embedding, CycError> {
        let m = self.field_order;
        if n % m != 0 {
            return Err(CycError::BadLift { from: m, to: n });
        }
        for k in 0..n {
            if k % m == self.root_index
                && (k as i64).gcd(&(n as i64)) == 1
                && (n % 4 != 0 || k % 4 == 1)
            {
                return Ok(Embedding {
                    field_order: n,
                    root_index: k,
                });
            }
        }
        Err(CycError::BadLift { from: m, to: n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(10), 4);
        assert_eq!(euler_phi(20), 8);
        assert_eq!(euler_phi(40), 16);
    }

    #[test]
    fn phi10_polynomial() {
        // X^4 - X^3 + X^2 - X + 1
        let p = cyclotomic_polynomial(10);
        let want: Vec<BigInt> = [1i64, -1, 1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(p, want);
    }

    #[test]
    fn normalize_zeta4_in_q10() {
        // zeta^4 = zeta^3 - zeta^2 + zeta - 1
        let z4 = CycNum::root_power(4, 10);
        let want: Vec<Rational> = [-1i64, 1, -1, 1].iter().map(|&c| q(c, 1)).collect();
        assert_eq!(z4.coeffs(), &want[..]);
    }

    #[test]
    fn normalize_identity() {
        let one = CycNum::one(10);
        assert_eq!(one.coeffs()[0], q(1, 1));
        assert!(one.coeffs()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn zeta10_pow5_is_minus_one() {
        let z5 = CycNum::root_power(5, 10);
        assert_eq!(z5, CycNum::from_integer(-1, 10));
    }

    #[test]
    fn normalize_idempotent() {
        let z = CycNum::root_power(7, 10);
        let again = CycNum::from_poly(z.coeffs(), 10);
        assert_eq!(z, again);
    }

    #[test]
    fn mul_alpha_alpha3() {
        let a = CycNum::zeta(10);
        let a3 = CycNum::root_power(3, 10);
        assert_eq!(a.mul(&a3), CycNum::root_power(4, 10));
    }

    #[test]
    fn div_self_is_one() {
        let a = CycNum::zeta(10).sub(&CycNum::from_integer(3, 10));
        assert_eq!(a.div(&a).unwrap(), CycNum::one(10));
    }

    #[test]
    fn div_by_zero_errors() {
        let a = CycNum::one(10);
        assert_eq!(a.div(&CycNum::zero(10)), Err(CycError::DivisionByZero));
    }

    #[test]
    fn galois_identity_and_involution() {
        let a = CycNum::zeta(10);
        assert_eq!(a.galois(1).unwrap(), a);
        assert_eq!(a.galois(9).unwrap().galois(9).unwrap(), a);
        assert!(a.galois(5).is_err());
        assert!(a.galois(2).is_err());
    }

    #[test]
    fn galois_is_field_automorphism() {
        let a = CycNum::root_power(3, 10).add(&CycNum::from_integer(2, 10));
        let b = CycNum::root_power(2, 10).sub(&CycNum::one(10));
        for k in [1i64, 3, 7, 9] {
            assert_eq!(
                a.mul(&b).galois(k).unwrap(),
                a.galois(k).unwrap().mul(&b.galois(k).unwrap())
            );
            assert_eq!(
                a.add(&b).galois(k).unwrap(),
                a.galois(k).unwrap().add(&b.galois(k).unwrap())
            );
        }
    }

    #[test]
    fn conj_fixed_parts() {
        let a = CycNum::zeta(10).add(&CycNum::from_integer(5, 10));
        assert_eq!(a.two_re().conj(), a.two_re());
        assert_eq!(a.two_i_im().conj(), a.two_i_im().neg());
    }

    #[test]
    fn lift_and_mul_commute() {
        let a = CycNum::zeta(10);
        let b = CycNum::root_power(3, 10).sub(&CycNum::one(10));
        let la = a.lift_to(40).unwrap();
        let lb = b.lift_to(40).unwrap();
        assert_eq!(a.mul(&b).lift_to(40).unwrap(), la.mul(&lb));
        // zeta_10 lifts to zeta_40^4
        assert_eq!(la, CycNum::root_power(4, 40));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["-a^3", "(a-1)", "1/2*a^2 - 3", "0", "a", "2/3", "-1 + a - a^2"] {
            let v = CycNum::parse(s, 10).unwrap();
            let back = CycNum::parse(&v.to_poly_string(), 10).unwrap();
            assert_eq!(v, back, "roundtrip failed for `{s}`");
        }
        assert!(CycNum::parse("", 10).is_err());
        assert!(CycNum::parse("b+1", 10).is_err());
    }

    #[test]
    fn embedding_lift_normalizes_i() {
        // root indices used by the built-ins, and their lifts to order 40
        for (k, want) in [(3u32, 13u32), (7, 17), (1, 1), (9, 9)] {
            let e = Embedding::new(10, k).unwrap();
            let l = e.lift_to(40).unwrap();
            assert_eq!(l.root_index(), want);
            assert_eq!(l.root_index() % 4, 1);
        }
        assert!(Embedding::new(10, 2).is_err());
    }
}
