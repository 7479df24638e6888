//! Exact coefficient arithmetic: arbitrary-precision rationals and the
//! cyclotomic fields Q(zeta_N).
//!
//! A [`CycloNum`] is an element of Q(zeta_N) stored in the power basis
//! `1, z, ..., z^{phi(N)-1}` of `Q[z]/(Phi_N(z))`, where `Phi_N` is the
//! N-th cyclotomic polynomial. All arithmetic reduces modulo `Phi_N`, so
//! equality is exact and structural. The default field used by the
//! identity catalog is Q(zeta_6), which contains every constant the
//! cataloged specializations need: rationals, -1, and `(1 +- sqrt(3) i)/2`.
//!
//! Textual forms: rationals render as `p/q` (or `p` for integers);
//! cyclotomic values render as polynomials in `z`, e.g. `1/2 + z`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

// ===========================================================================
// Rational
// ===========================================================================

/// An arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Rational(BigRational);

impl Rational {
    /// Build `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// True when the value is an integer (denominator 1).
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero rational");
        Rational(self.0.recip())
    }

    /// Integer power, with negative exponents via the reciprocal.
    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Rational::one();
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Rational::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // BigRational prints `p` when the denominator is 1 and `p/q` otherwise.
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: BigRational = s
            .trim()
            .parse()
            .map_err(|e| format!("invalid rational {s:?}: {e}"))?;
        Ok(Rational(r))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(std::ops::$trait::$method(&self.0, &rhs.0))
            }
        }
        impl std::ops::$trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl std::ops::Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::ops::Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

// ===========================================================================
// Polynomial helpers over Rational (dense, ascending, private)
// ===========================================================================

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo `b` (`b` nonzero). Quotient is discarded.
fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = &r[dr] / lead;
        for k in 0..=db {
            let idx = dr - db + k;
            r[idx] = &r[idx] - &(&factor * &b[k]);
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Exact division `a / b` when `b` divides `a`. Panics otherwise.
fn poly_div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r: Vec<Rational> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = &r[dr] / lead;
        q[dr - db] = factor.clone();
        for k in 0..=db {
            let idx = dr - db + k;
            r[idx] = &r[idx] - &(&factor * &b[k]);
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Extended Euclid in Q[x]: returns `(g, u)` with `u*a = g (mod b)` and
/// `g = gcd(a, b)` normalized monic.
fn poly_half_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    // Invariants: r0 = u0*a (mod b), r1 = u1*a (mod b).
    let mut r0: Vec<Rational> = a.to_vec();
    let mut r1: Vec<Rational> = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut u0 = vec![Rational::one()];
    let mut u1: Vec<Rational> = Vec::new();
    while !r1.is_empty() {
        // r0 = q*r1 + r2
        let mut r2 = r0.clone();
        let db = r1.len() - 1;
        let lead = r1[db].clone();
        let mut q = vec![Rational::zero(); r2.len().saturating_sub(db).max(1)];
        while r2.len() > db {
            let dr = r2.len() - 1;
            let factor = &r2[dr] / &lead;
            if q.len() <= dr - db {
                q.resize(dr - db + 1, Rational::zero());
            }
            q[dr - db] = factor.clone();
            for k in 0..=db {
                let idx = dr - db + k;
                r2[idx] = &r2[idx] - &(&factor * &r1[k]);
            }
            poly_trim(&mut r2);
            if r2.is_empty() {
                break;
            }
        }
        poly_trim(&mut q);
        // u2 = u0 - q*u1
        let qu1 = poly_mul(&q, &u1);
        let len = u0.len().max(qu1.len());
        let mut u2 = vec![Rational::zero(); len];
        for (i, c) in u0.iter().enumerate() {
            u2[i] = u2[i].clone() + c.clone();
        }
        for (i, c) in qu1.iter().enumerate() {
            u2[i] = &u2[i] - c;
        }
        poly_trim(&mut u2);
        r0 = std::mem::take(&mut r1);
        u0 = std::mem::take(&mut u1);
        r1 = r2;
        u1 = u2;
    }
    // Normalize gcd monic.
    if let Some(lead) = r0.last().cloned() {
        if !lead.is_one() {
            for c in &mut r0 {
                *c = &*c / &lead;
            }
            for c in &mut u0 {
                *c = &*c / &lead;
            }
        }
    }
    (r0, u0)
}

// ===========================================================================
// Cyclotomic polynomials
// ===========================================================================

/// Euler's totient function.
pub fn euler_phi(n: u32) -> u32 {
    assert!(n >= 1, "euler_phi of 0");
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The N-th cyclotomic polynomial `Phi_N`, monic with integer coefficients,
/// returned dense ascending (length `phi(N) + 1`).
///
/// Computed as `(x^N - 1) / prod_{d | N, d < N} Phi_d(x)` and cached.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Rational> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Vec<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![Rational::from_int(-1), Rational::one()]
    } else {
        // x^N - 1
        let mut num = vec![Rational::zero(); (n + 1) as usize];
        num[0] = Rational::from_int(-1);
        num[n as usize] = Rational::one();
        let mut den = vec![Rational::one()];
        for d in 1..n {
            if n.is_multiple_of(d) {
                den = poly_mul(&den, &cyclotomic_polynomial(d));
            }
        }
        poly_div_exact(&num, &den)
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

// ===========================================================================
// CycloNum
// ===========================================================================

/// An element of the cyclotomic field Q(zeta_N), in the power basis
/// `1, z, ..., z^{phi(N)-1}` modulo `Phi_N(z)`.
///
/// Values of different orders are incomparable; mixing them in arithmetic
/// is a usage error and panics. Rational numbers embed with zero higher
/// coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloNum {
    order: u32,
    coords: Vec<Rational>,
}

impl CycloNum {
    fn from_coords(order: u32, mut coords: Vec<Rational>) -> Self {
        let phi = euler_phi(order) as usize;
        coords.resize(phi, Rational::zero());
        CycloNum { order, coords }
    }

    pub fn zero(order: u32) -> Self {
        Self::from_coords(order, Vec::new())
    }

    pub fn one(order: u32) -> Self {
        Self::from_coords(order, vec![Rational::one()])
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        Self::from_coords(order, vec![r])
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, Rational::from_int(n))
    }

    /// The primitive N-th root of unity as a field element: the class of
    /// `z` modulo `Phi_N`. For N = 1 this is 1, for N = 2 it is -1.
    pub fn zeta(order: u32) -> Self {
        assert!(order >= 1, "zeta of order 0");
        let phi = euler_phi(order) as usize;
        if phi == 1 {
            // Phi_1 = z - 1, Phi_2 = z + 1: z reduces to a rational.
            let v = if order == 1 { 1 } else { -1 };
            Self::from_int(order, v)
        } else {
            let mut coords = vec![Rational::zero(); phi];
            coords[1] = Rational::one();
            CycloNum { order, coords }
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Rational::is_zero)
    }

    /// True when all coordinates beyond the rational one vanish.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Rational::is_zero)
    }

    /// The rational part if the value is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    fn check_order(&self, other: &Self, op: &str) {
        assert!(
            self.order == other.order,
            "cyclotomic order mismatch in {op}: {} vs {}",
            self.order,
            other.order
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other, "add");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        CycloNum {
            order: self.order,
            coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_order(other, "sub");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        CycloNum {
            order: self.order,
            coords,
        }
    }

    pub fn neg(&self) -> Self {
        CycloNum {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other, "mul");
        let prod = poly_mul(&self.coords, &other.coords);
        let reduced = poly_rem(&prod, &cyclotomic_polynomial(self.order));
        Self::from_coords(self.order, reduced)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNum {
            order: self.order,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via extended Euclid against `Phi_N`.
    /// Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(
            !self.is_zero(),
            "division by zero in Q(zeta_{})",
            self.order
        );
        let mut a = self.coords.clone();
        poly_trim(&mut a);
        let phi_n = cyclotomic_polynomial(self.order);
        let (g, u) = poly_half_ext_gcd(&a, &phi_n);
        // Phi_N is irreducible over Q, so the gcd with a nonzero element is 1.
        assert!(
            g.len() == 1 && g[0].is_one(),
            "cyclotomic gcd is not a unit"
        );
        let reduced = poly_rem(&u, &phi_n);
        Self::from_coords(self.order, reduced)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.order);
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one(self.order);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }
}

// ===========================================================================
// Text form: polynomials in `z`
// ===========================================================================

fn fmt_power_term(f: &mut fmt::Formatter<'_>, coeff: &Rational, power: usize) -> fmt::Result {
    if power == 0 {
        return write!(f, "{coeff}");
    }
    let var = if power == 1 {
        "z".to_string()
    } else {
        format!("z^{power}")
    };
    if coeff.is_one() {
        write!(f, "{var}")
    } else if (-coeff).is_one() {
        write!(f, "-{var}")
    } else {
        write!(f, "{coeff}*{var}")
    }
}

impl fmt::Display for CycloNum {
    /// Canonical polynomial form in `z`, ascending powers:
    /// `0`, `1/2`, `z`, `1/2 + z`, `1 - 2*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                fmt_power_term(f, c, k)?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
                fmt_power_term(f, &-c, k)?;
            } else {
                write!(f, " + ")?;
                fmt_power_term(f, c, k)?;
            }
        }
        Ok(())
    }
}

/// Parse the canonical polynomial-in-`z` form produced by `Display`,
/// e.g. `"0"`, `"-1/2"`, `"1/2 + z"`, `"1 - 2*z^2"`.
pub fn parse_cyclo(order: u32, s: &str) -> Result<CycloNum, String> {
    let phi = euler_phi(order) as usize;
    let mut coords = vec![Rational::zero(); phi];
    // Split into signed terms.
    let s = s.trim();
    if s.is_empty() {
        return Err("empty cyclotomic literal".into());
    }
    let mut terms: Vec<(Ordering, String)> = Vec::new();
    let mut sign = Ordering::Greater;
    let mut cur = String::new();
    let mut chars = s.chars().peekable();
    // A leading sign belongs to the first term.
    while let Some(&c) = chars.peek() {
        match c {
            '+' | '-' if cur.trim().is_empty() && terms.is_empty() => {
                sign = if c == '-' {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
                chars.next();
            }
            '+' | '-' => {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = if c == '-' {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
                chars.next();
            }
            _ => {
                cur.push(c);
                chars.next();
            }
        }
    }
    terms.push((sign, cur));

    for (sgn, raw) in terms {
        let t = raw.trim();
        if t.is_empty() {
            return Err(format!("malformed cyclotomic literal {s:?}"));
        }
        let (coeff_str, power) = if let Some(idx) = t.find('z') {
            let coeff_part = t[..idx].trim().trim_end_matches('*').trim();
            let pow_part = t[idx + 1..].trim();
            let power = if pow_part.is_empty() {
                1usize
            } else {
                let rest = pow_part
                    .strip_prefix('^')
                    .ok_or_else(|| format!("malformed power in {t:?}"))?;
                rest.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("malformed power in {t:?}: {e}"))?
            };
            let cs = if coeff_part.is_empty() {
                "1".to_string()
            } else {
                coeff_part.to_string()
            };
            (cs, power)
        } else {
            (t.to_string(), 0usize)
        };
        if power >= phi {
            return Err(format!(
                "power z^{power} out of range for Q(zeta_{order}) (basis size {phi})"
            ));
        }
        let mut c: Rational = coeff_str.parse()?;
        if sgn == Ordering::Less {
            c = -c;
        }
        coords[power] = &coords[power] + &c;
    }
    Ok(CycloNum { order, coords })
}

// ===========================================================================
// JSON form: {"order": N, "coords": ["1/2", "0", ...]}
// ===========================================================================

impl serde::Serialize for CycloNum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("CycloNum", 2)?;
        st.serialize_field("order", &self.order)?;
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coords", &coords)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for CycloNum {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            order: u32,
            coords: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.order == 0 {
            return Err(serde::de::Error::custom("cyclotomic order must be >= 1"));
        }
        let phi = euler_phi(raw.order) as usize;
        if raw.coords.len() != phi {
            return Err(serde::de::Error::custom(format!(
                "coords length {} does not match phi({}) = {}",
                raw.coords.len(),
                raw.order,
                phi
            )));
        }
        let coords = raw
            .coords
            .iter()
            .map(|s| s.parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(CycloNum {
            order: raw.order,
            coords,
        })
    }
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta6() -> CycloNum {
        CycloNum::zeta(6)
    }

    #[test]
    fn phi_values() {
        let expected = [
            (1u32, 1u32),
            (2, 1),
            (3, 2),
            (4, 2),
            (5, 4),
            (6, 2),
            (12, 4),
        ];
        for (n, phi) in expected {
            assert_eq!(euler_phi(n), phi, "phi({n})");
        }
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        // Phi_1 = z - 1, Phi_2 = z + 1, Phi_4 = z^2 + 1, Phi_6 = z^2 - z + 1
        let to_i64 = |p: &[Rational]| -> Vec<String> { p.iter().map(|c| c.to_string()).collect() };
        assert_eq!(to_i64(&cyclotomic_polynomial(1)), ["-1", "1"]);
        assert_eq!(to_i64(&cyclotomic_polynomial(2)), ["1", "1"]);
        assert_eq!(to_i64(&cyclotomic_polynomial(4)), ["1", "0", "1"]);
        assert_eq!(to_i64(&cyclotomic_polynomial(6)), ["1", "-1", "1"]);
        assert_eq!(
            to_i64(&cyclotomic_polynomial(12)),
            ["1", "0", "-1", "0", "1"]
        );
    }

    #[test]
    fn zeta_is_root_of_cyclotomic_and_of_unity() {
        for n in [1u32, 2, 3, 4, 6] {
            let z = CycloNum::zeta(n);
            // Phi_N(zeta_N) = 0
            let phi = cyclotomic_polynomial(n);
            let mut acc = CycloNum::zero(n);
            for (k, c) in phi.iter().enumerate() {
                acc = acc.add(&z.pow(k as i64).scale(c));
            }
            assert!(acc.is_zero(), "Phi_{n}(zeta_{n}) != 0");
            // zeta_N^N = 1
            assert!(z.pow(n as i64).is_one(), "zeta_{n}^{n} != 1");
        }
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = CycloNum::from_int(6, 1);
        let b = CycloNum::from_int(6, -1);
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn zeta6_plus_conjugate_is_one() {
        // conj(zeta_6) = 1 - zeta_6 since Phi_6(z) = z^2 - z + 1.
        let z = zeta6();
        let conj = CycloNum::one(6).sub(&z);
        assert!(z.add(&conj).is_one());
    }

    #[test]
    fn coordinatewise_add() {
        // (1/2 + z) + (1/2 + z) = 1 + 2z
        let half_plus_z = CycloNum::from_rational(6, Rational::new(1, 2)).add(&zeta6());
        let sum = half_plus_z.add(&half_plus_z);
        assert_eq!(sum.coords()[0], Rational::one());
        assert_eq!(sum.coords()[1], Rational::from_int(2));
    }

    #[test]
    fn zeta6_squared_reduces() {
        // z^2 = z - 1 mod Phi_6
        let z = zeta6();
        let z2 = z.mul(&z);
        assert_eq!(z2.coords()[0], Rational::from_int(-1));
        assert_eq!(z2.coords()[1], Rational::one());
    }

    #[test]
    fn zeta6_times_conjugate_is_one() {
        // zeta * (1 - zeta) = |zeta|^2 = 1; verified through the reduction.
        let z = zeta6();
        let conj = CycloNum::one(6).sub(&z);
        assert!(z.mul(&conj).is_one());
    }

    #[test]
    fn mul_identity() {
        let x = CycloNum::from_rational(6, Rational::new(-7, 3))
            .add(&zeta6().scale(&Rational::new(2, 5)));
        assert_eq!(x.mul(&CycloNum::one(6)), x);
    }

    #[test]
    fn inv_of_zeta6() {
        // inv(zeta_6) = 1 - zeta_6; check zeta * (1 - zeta) reduces to 1.
        let z = zeta6();
        let inv = z.inv();
        assert_eq!(inv, CycloNum::one(6).sub(&z));
        assert!(z.mul(&inv).is_one());
    }

    #[test]
    fn inv_of_rationals() {
        assert_eq!(
            CycloNum::from_int(6, 2).inv(),
            CycloNum::from_rational(6, Rational::new(1, 2))
        );
        assert_eq!(CycloNum::from_int(6, -1).inv(), CycloNum::from_int(6, -1));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn inv_of_zero_panics() {
        let _ = CycloNum::zero(6).inv();
    }

    #[test]
    #[should_panic(expected = "order mismatch")]
    fn order_mismatch_panics() {
        let _ = CycloNum::one(6).add(&CycloNum::one(4));
    }

    #[test]
    fn zeta_small_orders() {
        assert!(CycloNum::zeta(1).is_one());
        assert_eq!(CycloNum::zeta(2), CycloNum::from_int(2, -1));
        // zeta_6^3 = -1 via repeated multiplication (e^{i pi} = -1)
        let z = zeta6();
        let z3 = z.mul(&z).mul(&z);
        assert_eq!(z3, CycloNum::from_int(6, -1));
    }

    #[test]
    fn rational_embedding_is_ring_hom() {
        let cases = [(3, 4), (-2, 5), (7, 1), (0, 1), (-9, 2)];
        for (pn, pd) in cases {
            for (qn, qd) in cases {
                let p = Rational::new(pn, pd);
                let q = Rational::new(qn, qd);
                let lhs = CycloNum::from_rational(6, &p * &q);
                let rhs = CycloNum::from_rational(6, p.clone())
                    .mul(&CycloNum::from_rational(6, q.clone()));
                assert_eq!(lhs, rhs);
                let lhs_add = CycloNum::from_rational(6, &p + &q);
                let rhs_add = CycloNum::from_rational(6, p).add(&CycloNum::from_rational(6, q));
                assert_eq!(lhs_add, rhs_add);
            }
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let samples = [
            CycloNum::zero(6),
            CycloNum::one(6),
            CycloNum::from_rational(6, Rational::new(-1, 2)),
            zeta6(),
            zeta6().neg(),
            CycloNum::from_rational(6, Rational::new(1, 2)).add(&zeta6()),
            CycloNum::from_int(6, 1).sub(&zeta6().scale(&Rational::from_int(2))),
            zeta6().scale(&Rational::new(-3, 7)),
        ];
        for x in samples {
            let s = x.to_string();
            let back = parse_cyclo(6, &s).unwrap_or_else(|e| panic!("parse {s:?}: {e}"));
            assert_eq!(back, x, "round trip of {s:?}");
        }
    }

    #[test]
    fn display_examples() {
        assert_eq!(CycloNum::zero(6).to_string(), "0");
        assert_eq!(
            CycloNum::from_rational(6, Rational::new(1, 2))
                .add(&zeta6())
                .to_string(),
            "1/2 + z"
        );
        assert_eq!(zeta6().neg().to_string(), "-z");
        assert_eq!(
            CycloNum::one(6)
                .sub(&zeta6().scale(&Rational::from_int(2)))
                .to_string(),
            "1 - 2*z"
        );
    }

    #[test]
    fn json_round_trip() {
        let x = CycloNum::from_rational(6, Rational::new(1, 2)).add(&zeta6());
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"order":6,"coords":["1/2","1"]}"#);
        let back: CycloNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn json_rejects_bad_coords_length() {
        let bad = r#"{"order":6,"coords":["1"]}"#;
        assert!(serde_json::from_str::<CycloNum>(bad).is_err());
    }
}
