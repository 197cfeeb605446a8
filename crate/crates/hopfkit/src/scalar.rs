//! Exact scalars in Q and in cyclotomic fields Q(q), q a primitive n-th root of unity.
//!
//! A value is a vector of φ(n) rationals, the coefficients of its reduced
//! residue modulo Φ_n. Order 1 is plain Q and embeds into every other order.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rational polynomial, lowest degree first, no trailing zeros.
type QPoly = Vec<BigRational>;

struct Field {
    phi: usize,
    /// Φ_n as a monic polynomial of degree φ.
    cyclo: QPoly,
    /// q^k reduced, for k in 0..2φ.
    powers: Vec<Vec<BigRational>>,
}

fn fields() -> &'static RwLock<HashMap<u32, Arc<Field>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn field(n: u32) -> Arc<Field> {
    if let Some(f) = fields().read().unwrap().get(&n) {
        return f.clone();
    }
    let f = Arc::new(build_field(n));
    fields().write().unwrap().entry(n).or_insert(f).clone()
}

fn qp_trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn qp_int(coeffs: &[i64]) -> QPoly {
    let mut p: QPoly = coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    qp_trim(&mut p);
    p
}

fn qp_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qp_trim(&mut out);
    out
}

fn qp_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    qp_trim(&mut out);
    out
}

/// Quotient and remainder; b must be nonzero.
fn qp_divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    qp_trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        q[shift] = c;
        qp_trim(&mut r);
    }
    qp_trim(&mut q);
    (q, r)
}

fn cyclotomic_poly(n: u32) -> QPoly {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![BigRational::zero(); n as usize + 1];
    p[0] = -BigRational::one();
    p[n as usize] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = qp_divrem(&p, &cyclotomic_poly(d));
            debug_assert!(r.is_empty());
            p = q;
        }
    }
    p
}

fn build_field(n: u32) -> Field {
    let cyclo = cyclotomic_poly(n);
    let phi = cyclo.len() - 1;
    let mut powers = Vec::with_capacity(2 * phi);
    for k in 0..(2 * phi).max(1) {
        let mut mono = vec![BigRational::zero(); k + 1];
        mono[k] = BigRational::one();
        let (_, mut r) = qp_divrem(&mono, &cyclo);
        r.resize(phi, BigRational::zero());
        powers.push(r);
    }
    Field { phi, cyclo, powers }
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    field(n).phi
}

/// Exact element of Q(q), q a primitive `order`-th root of unity.
#[derive(Clone, Debug)]
pub struct Scalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn rational(r: BigRational) -> Self {
        Scalar { order: 1, coeffs: vec![r] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(v.into()))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The generator q of Q(q) for the given order.
    pub fn root(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::Scalar("root order must be positive".into()));
        }
        if order <= 2 {
            return Ok(Self::from_int(if order == 1 { 1 } else { -1 }));
        }
        let f = field(order);
        let mut coeffs = vec![BigRational::zero(); f.phi];
        coeffs[1] = BigRational::one();
        Ok(Scalar { order, coeffs })
    }

    /// Build from raw coefficients of 1, q, q², … (any length), reducing mod Φ_n.
    pub fn from_poly(order: u32, poly: &[BigRational]) -> Self {
        if order <= 2 {
            let mut acc = BigRational::zero();
            let q = if order == 1 { BigRational::one() } else { -BigRational::one() };
            let mut pw = BigRational::one();
            for c in poly {
                acc += c * &pw;
                pw *= &q;
            }
            return Self::rational(acc);
        }
        let f = field(order);
        let mut p: QPoly = poly.to_vec();
        qp_trim(&mut p);
        let (_, mut r) = qp_divrem(&p, &f.cyclo);
        r.resize(f.phi, BigRational::zero());
        Scalar { order, coeffs: r }.normalized()
    }

    fn normalized(self) -> Self {
        if self.order > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            return Self::rational(self.coeffs[0].clone());
        }
        self
    }

    /// Root order the value genuinely needs (1 when rational).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn common(&self, other: &Self) -> Result<u32> {
        match (self.order, other.order) {
            (1, m) | (m, 1) => Ok(m),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::Scalar(format!("incompatible root orders {a} and {b}"))),
        }
    }

    fn padded(&self, order: u32) -> Vec<BigRational> {
        if self.order == order {
            return self.coeffs.clone();
        }
        let mut v = vec![BigRational::zero(); euler_phi(order)];
        v[0] = self.coeffs[0].clone();
        v
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.order == 1 && other.order == 1 {
            return Ok(Self::rational(&self.coeffs[0] + &other.coeffs[0]));
        }
        let n = self.common(other)?;
        let mut a = self.padded(n);
        for (x, y) in a.iter_mut().zip(other.padded(n)) {
            *x += y;
        }
        Ok(Scalar { order: n, coeffs: a }.normalized())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.order == 1 || other.order == 1 {
            let (r, s) = if self.order == 1 { (&self.coeffs[0], other) } else { (&other.coeffs[0], self) };
            self.common(other)?;
            if r.is_zero() {
                return Ok(Self::zero());
            }
            let coeffs = s.coeffs.iter().map(|c| c * r).collect();
            return Ok(Scalar { order: s.order, coeffs }.normalized());
        }
        let n = self.common(other)?;
        let f = field(n);
        let mut out = vec![BigRational::zero(); f.phi];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                for (o, p) in out.iter_mut().zip(&f.powers[i + j]) {
                    if !p.is_zero() {
                        *o += &t * p;
                    }
                }
            }
        }
        Ok(Scalar { order: n, coeffs: out }.normalized())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Self::rational(self.coeffs[0].recip()));
        }
        // extended Euclid: s·a + t·Φ = gcd (a nonzero constant since Φ is irreducible)
        let f = field(self.order);
        let mut a = self.coeffs.clone();
        qp_trim(&mut a);
        let (mut r0, mut r1) = (f.cyclo.clone(), a);
        let (mut s0, mut s1): (QPoly, QPoly) = (vec![], qp_int(&[1]));
        while r1.len() > 1 {
            let (q, r) = qp_divrem(&r0, &r1);
            let s = qp_sub(&s0, &qp_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1[0].clone();
        let inv: QPoly = s1.iter().map(|x| x / &c).collect();
        Ok(Self::from_poly(self.order, &inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.try_mul(&b)?;
            }
        }
        Ok(acc)
    }

    pub fn factorial(n: u64) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= k;
        }
        Self::rational(BigRational::from_integer(acc))
    }

    pub fn binomial(n: u64, k: u64) -> Self {
        if k > n {
            return Self::zero();
        }
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        Self::rational(BigRational::from_integer(acc))
    }

    fn rat_string(r: &BigRational) -> String {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = Self::rat_string(&c.abs());
            let body = match k {
                0 => mag,
                _ => {
                    let var = if k == 1 { "q".to_string() } else { format!("q^{k}") };
                    if mag == "1" {
                        var
                    } else {
                        format!("{mag}*{var}")
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(if neg { format!("- {body}") } else { format!("+ {body}") });
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! std_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$f(rhs).expect("scalar arithmetic")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs).expect("scalar arithmetic")
            }
        }
    };
}
std_op!(Add, add, try_add);
std_op!(Sub, sub, try_sub);
std_op!(Mul, mul, try_mul);
std_op!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

/// Polynomial conditions on a parameter, checked exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootCondition {
    SquareIsOne,
    FourthIsMinusOne,
    NonZero,
    PowerIsOne(u32),
}

pub fn check_root_condition(cond: RootCondition, v: &Scalar) -> bool {
    match cond {
        RootCondition::NonZero => !v.is_zero(),
        RootCondition::SquareIsOne => v.pow(2).map(|x| x.is_one()).unwrap_or(false),
        RootCondition::FourthIsMinusOne => v.pow(4).map(|x| x == -Scalar::one()).unwrap_or(false),
        RootCondition::PowerIsOne(k) => v.pow(k as i64).map(|x| x.is_one()).unwrap_or(false),
    }
}

const MAX_EXPONENT: i64 = 100_000;

/// Parse a scalar expression in `q` with rational coefficients.
///
/// Grammar: sums and differences of products/quotients of factors, where a
/// factor is a rational literal, `q`, or a parenthesized expression, with an
/// optional `^` integer exponent. Unary minus is allowed.
pub fn parse_scalar(text: &str, order: u32) -> Result<Scalar> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, order };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    order: u32,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.try_add(&t)? } else { acc.try_sub(&t)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            let c = match self.peek() {
                Some(c @ (b'*' | b'/')) => {
                    self.pos += 1;
                    c
                }
                // juxtaposition such as 2q or 3(q+1)
                Some(b'q' | b'(' | b'0'..=b'9') => b'*',
                _ => break,
            };
            let t = self.unary()?;
            acc = if c == b'*' {
                acc.try_mul(&t)?
            } else {
                acc.try_div(&t).map_err(|_| self.err("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_int()?;
            if e.abs() > MAX_EXPONENT {
                return Err(self.err("exponent overflow"));
            }
            return base.pow(e).map_err(|_| self.err("zero raised to a negative power"));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let v = self.signed_int()?;
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            return Ok(if neg { -v } else { v });
        }
        let digits = self.digits().ok_or_else(|| self.err("expected integer exponent"))?;
        let v = digits.to_i64().filter(|v| *v <= MAX_EXPONENT).ok_or_else(|| self.err("exponent overflow"))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Scalar::root(self.order)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits().unwrap();
                Ok(Scalar::rational(BigRational::from_integer(n)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: u32) -> Scalar {
        parse_scalar(s, n).unwrap()
    }

    #[test]
    fn cyclotomic_reductions() {
        let q = Scalar::root(8).unwrap();
        assert_eq!(&q * &q.pow(3).unwrap(), Scalar::from_int(-1));
        assert_eq!(p("q^4", 8), Scalar::from_int(-1));
        assert_eq!(p("q^2+q^6", 8), Scalar::zero());
        assert_eq!(p("q^8", 8), Scalar::one());
        assert_eq!(Scalar::root(6).unwrap().pow(3).unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn inverse_by_euclid() {
        let q = Scalar::root(8).unwrap();
        let inv = Scalar::one().try_div(&q).unwrap();
        assert_eq!(inv, -q.pow(3).unwrap());
        let x = p("1 + 2q - q^3/3", 8);
        assert!((&x * &x.inv().unwrap()).is_one());
        let y = p("q - q^-1", 4);
        assert_eq!(&y * &y.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn parsing() {
        assert_eq!(p("-3/2", 1), Scalar::from_frac(-3, 2));
        assert_eq!(p("(1/2)*2", 1), Scalar::one());
        assert_eq!(p("2*(q+1) - 2q", 8), Scalar::from_int(2));
        assert!(matches!(parse_scalar("1 +", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("q^99999999999", 8), Err(Error::Parse { .. })));
        assert!(parse_scalar("1/0", 1).is_err());
    }

    #[test]
    fn root_conditions() {
        let q = Scalar::root(8).unwrap();
        assert!(check_root_condition(RootCondition::FourthIsMinusOne, &q));
        assert!(check_root_condition(RootCondition::SquareIsOne, &Scalar::from_int(-1)));
        assert!(!check_root_condition(RootCondition::SquareIsOne, &q));
        assert!(check_root_condition(RootCondition::PowerIsOne(8), &q));
        assert!(!check_root_condition(RootCondition::NonZero, &Scalar::zero()));
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = Scalar::root(8).unwrap();
        let b = Scalar::root(6).unwrap();
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&Scalar::from_int(3)).is_ok());
    }

    #[test]
    fn powers_independent() {
        // 1, q, q², q³ are independent over Q for n = 8: only the zero combination vanishes
        for mask in 1u32..16 {
            let poly: Vec<BigRational> =
                (0..4).map(|i| BigRational::from_integer(((mask >> i) & 1).into())).collect();
            assert!(!Scalar::from_poly(8, &poly).is_zero());
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["q^3 - 1/2*q + 3", "-q", "0", "7/3"] {
            let v = p(s, 8);
            assert_eq!(p(&v.to_string(), 8), v);
        }
    }
}
