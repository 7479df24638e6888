//! Truncated Laurent series in one variable `q` over cyclotomic coefficients.
//!
//! A [`QSeries`] stores a sparse map from integer exponents to nonzero
//! [`CycloNum`] coefficients together with a truncation order `trunc`:
//! every coefficient with exponent `<= trunc` is exact, exponents beyond
//! `trunc` are unknown. Arithmetic propagates the largest truncation at
//! which the result is provably exact, so precision loss is never silent:
//!
//! - `add`: `trunc = min(a.trunc, b.trunc)`
//! - `mul`: `trunc = min(a.trunc + min_exp(b), b.trunc + min_exp(a))`
//! - `invert`: `trunc = a.trunc - 2 * min_exp(a)`
//!
//! Laurent support (finitely many negative exponents) is required because
//! specializations like `lambda -> q^{-1}` introduce negative exponents in
//! intermediate factors. Zero coefficients are pruned after every
//! operation, so equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::{euler_phi, parse_cyclo, CycloNum, Rational};

/// Saturation bound for truncation bookkeeping. Truncations are clamped to
/// `[-TRUNC_CAP, TRUNC_CAP]`; a series whose truncation reaches the cap is
/// effectively exact for every practical purpose.
const TRUNC_CAP: i64 = i64::MAX / 4;

fn sat(v: i64) -> i64 {
    v.clamp(-TRUNC_CAP, TRUNC_CAP)
}

fn sat_add(a: i64, b: i64) -> i64 {
    sat(a.saturating_add(b))
}

/// A truncated Laurent series over Q(zeta_N).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: BTreeMap<i64, CycloNum>,
    trunc: i64,
    order: u32,
}

impl QSeries {
    /// The zero series, exact through `trunc`.
    pub fn zero(order: u32, trunc: i64) -> Self {
        QSeries {
            coeffs: BTreeMap::new(),
            trunc: sat(trunc),
            order,
        }
    }

    /// The constant series 1.
    pub fn one(order: u32, trunc: i64) -> Self {
        Self::monomial(CycloNum::one(order), 0, trunc)
    }

    /// The single-term series `c * q^exp`.
    pub fn monomial(c: CycloNum, exp: i64, trunc: i64) -> Self {
        let mut s = Self::zero(c.order(), trunc);
        if exp <= s.trunc && !c.is_zero() {
            s.coeffs.insert(exp, c);
        }
        s
    }

    /// The binomial `1 - c * q^m`.
    pub fn binomial(c: &CycloNum, m: i64, trunc: i64) -> Self {
        let order = c.order();
        let mut s = Self::zero(order, trunc);
        if 0 <= s.trunc {
            s.coeffs.insert(0, CycloNum::one(order));
        }
        if m <= s.trunc && !c.is_zero() {
            match s.coeffs.remove(&m) {
                Some(prev) => {
                    let v = prev.sub(c);
                    if !v.is_zero() {
                        s.coeffs.insert(m, v);
                    }
                }
                None => {
                    s.coeffs.insert(m, c.neg());
                }
            }
        }
        s
    }

    /// The generalized finite q-Pochhammer product
    /// `prod_{i=0}^{n-1} (1 - c * q^{j0 + i})`, with the empty product 1.
    pub fn pochhammer(c: &CycloNum, j0: i64, n: u32, trunc: i64) -> Self {
        let order = c.order();
        // Exact minimal exponent of the product; factors with j0 + i < 0
        // contribute their own exponent.
        let mut min_total = 0i64;
        if !c.is_zero() {
            for i in 0..n as i64 {
                min_total += (j0 + i).min(0);
            }
        }
        let rel = sat(trunc).saturating_sub(min_total);
        let mut acc = Self::one(order, sat(trunc));
        if n == 0 {
            return acc;
        }
        // Build each factor at its own minimal exponent plus the shared
        // relative precision so the product truncation telescopes to `trunc`.
        acc = Self::one(order, sat_add(0, rel));
        for i in 0..n as i64 {
            let m = j0 + i;
            let f = Self::binomial(c, m, sat_add(m.min(0), rel));
            acc = acc.mul(&f);
        }
        acc.truncated(trunc)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// The smallest stored exponent, or `None` when no nonzero coefficient
    /// is known within the truncation window.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// True when no nonzero coefficient is known through the truncation.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient of `q^exp` (zero when absent). Exponents beyond the
    /// truncation are unknown; callers are expected to stay within it.
    pub fn coeff(&self, exp: i64) -> CycloNum {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| CycloNum::zero(self.order))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &CycloNum)> {
        self.coeffs.iter()
    }

    fn check_order(&self, other: &Self, op: &str) {
        assert!(
            self.order == other.order,
            "coefficient field mismatch in {op}: Q(zeta_{}) vs Q(zeta_{})",
            self.order,
            other.order
        );
    }

    /// Coefficientwise sum; truncation is the meet of the operands'.
    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other, "add");
        let trunc = self.trunc.min(other.trunc);
        let mut coeffs: BTreeMap<i64, CycloNum> = BTreeMap::new();
        for (&e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if e > trunc {
                continue;
            }
            match coeffs.remove(&e) {
                Some(prev) => {
                    let v = prev.add(c);
                    if !v.is_zero() {
                        coeffs.insert(e, v);
                    }
                }
                None => {
                    coeffs.insert(e, c.clone());
                }
            }
        }
        QSeries {
            coeffs,
            trunc,
            order: self.order,
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c.neg())).collect(),
            trunc: self.trunc,
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Truncated convolution. The result's truncation is
    /// `min(a.trunc + min_exp(b), b.trunc + min_exp(a))`, so every reported
    /// coefficient is exact.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other, "mul");
        let ma = self.min_exp().unwrap_or(TRUNC_CAP);
        let mb = other.min_exp().unwrap_or(TRUNC_CAP);
        let trunc = sat_add(self.trunc, mb).min(sat_add(other.trunc, ma));
        let mut coeffs: BTreeMap<i64, CycloNum> = BTreeMap::new();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &other.coeffs {
                let e = e1 + e2;
                if e > trunc {
                    break; // exponents ascend within the inner map
                }
                let prod = c1.mul(c2);
                if prod.is_zero() {
                    continue;
                }
                match coeffs.remove(&e) {
                    Some(prev) => {
                        let v = prev.add(&prod);
                        if !v.is_zero() {
                            coeffs.insert(e, v);
                        }
                    }
                    None => {
                        coeffs.insert(e, prod);
                    }
                }
            }
        }
        QSeries {
            coeffs,
            trunc,
            order: self.order,
        }
    }

    /// Multiply by the scalar `c`.
    pub fn scale(&self, c: &CycloNum) -> Self {
        if c.is_zero() {
            return Self::zero(self.order, self.trunc);
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v.mul(c))).collect(),
            trunc: self.trunc,
            order: self.order,
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
            trunc: sat_add(self.trunc, k),
            order: self.order,
        }
    }

    /// Multiplicative inverse up to truncation. The lowest stored monomial
    /// `c_m q^m` is factored out first, so Laurent units invert cleanly:
    /// the result has truncation `trunc - 2m`.
    ///
    /// Panics when no nonzero coefficient is known (the zero series is not
    /// invertible, and a series that vanishes through its truncation gives
    /// the inverse no known coefficient to start from).
    pub fn invert(&self) -> Self {
        let m = self
            .min_exp()
            .expect("cannot invert a series with no known nonzero coefficient");
        let lead = self.coeff(m);
        let lead_inv = lead.inv();
        // Unit part u = (self / (lead * q^m)) has u_0 = 1 and is exact to
        // relative order rel = trunc - m.
        let rel = self.trunc.saturating_sub(m);
        let mut u: BTreeMap<i64, CycloNum> = BTreeMap::new();
        for (&e, c) in &self.coeffs {
            let k = e - m;
            if k > rel {
                break;
            }
            if k > 0 {
                u.insert(k, c.mul(&lead_inv));
            }
        }
        // Recurrence for v = u^{-1}: v_0 = 1, v_k = -sum_{j>=1} u_j v_{k-j}.
        let mut v: BTreeMap<i64, CycloNum> = BTreeMap::new();
        v.insert(0, CycloNum::one(self.order));
        for k in 1..=rel.max(0) {
            let mut acc = CycloNum::zero(self.order);
            for (&j, uj) in u.range(1..=k) {
                if let Some(vkj) = v.get(&(k - j)) {
                    acc = acc.add(&uj.mul(vkj));
                }
            }
            if !acc.is_zero() {
                v.insert(k, acc.neg());
            }
        }
        // inverse = lead^{-1} q^{-m} * v
        let trunc = sat(self.trunc.saturating_sub(2 * m));
        let mut coeffs = BTreeMap::new();
        for (k, c) in v {
            let e = k - m;
            if e > trunc {
                continue;
            }
            let val = c.mul(&lead_inv);
            if !val.is_zero() {
                coeffs.insert(e, val);
            }
        }
        QSeries {
            coeffs,
            trunc,
            order: self.order,
        }
    }

    /// The substitution `q -> q^d` for `d >= 1`. The truncation becomes
    /// `d * trunc` (conservative).
    pub fn subst_power(&self, d: u32) -> Self {
        assert!(d >= 1, "substitution power must be >= 1");
        let d = d as i64;
        let trunc = sat(self.trunc.saturating_mul(d));
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&e, c)| (e * d, c.clone()))
            .filter(|(e, _)| *e <= trunc)
            .collect();
        QSeries {
            coeffs,
            trunc,
            order: self.order,
        }
    }

    /// Restrict to exponents `<= t`; the truncation becomes `min(trunc, t)`.
    pub fn truncated(&self, t: i64) -> Self {
        let trunc = self.trunc.min(sat(t));
        QSeries {
            coeffs: self
                .coeffs
                .range(..=trunc)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
            trunc,
            order: self.order,
        }
    }

    /// True when both series are exact through `through` and agree on every
    /// coefficient up to it.
    pub fn agrees_with(&self, other: &Self, through: i64) -> bool {
        self.first_mismatch(other, through).is_none()
    }

    /// The smallest exponent `<= through` where the series differ, with both
    /// coefficients. Panics if either side is not exact through `through`.
    pub fn first_mismatch(&self, other: &Self, through: i64) -> Option<(i64, CycloNum, CycloNum)> {
        self.check_order(other, "compare");
        assert!(
            self.trunc >= through && other.trunc >= through,
            "comparison through q^{through} needs truncations {} and {} to reach it",
            self.trunc,
            other.trunc
        );
        let mut exps: Vec<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|&e| e <= through)
            .collect();
        exps.sort_unstable();
        exps.dedup();
        for e in exps {
            let a = self.coeff(e);
            let b = other.coeff(e);
            if a != b {
                return Some((e, a, b));
            }
        }
        None
    }
}

// ===========================================================================
// Canonical text form
// ===========================================================================

fn fmt_q_power(exp: i64) -> String {
    match exp {
        0 => String::new(),
        1 => "q".to_string(),
        e => format!("q^{e}"),
    }
}

impl fmt::Display for QSeries {
    /// Canonical form, ascending exponents: `1 + q - 2*q^2 + 3*q^3`.
    /// Coefficients with nonzero higher cyclotomic coordinates are
    /// parenthesized: `(1/2 + z)*q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            let qp = fmt_q_power(e);
            match c.as_rational() {
                Some(r) => {
                    let (sign_neg, mag) = if r.is_negative() {
                        (true, -&r)
                    } else {
                        (false, r)
                    };
                    if first {
                        if sign_neg {
                            write!(f, "-")?;
                        }
                    } else if sign_neg {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    if qp.is_empty() {
                        write!(f, "{mag}")?;
                    } else if mag.is_one() {
                        write!(f, "{qp}")?;
                    } else {
                        write!(f, "{mag}*{qp}")?;
                    }
                }
                None => {
                    if !first {
                        write!(f, " + ")?;
                    }
                    if qp.is_empty() {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "({c})*{qp}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

// ===========================================================================
// JSON form: {"trunc": T, "field_order": N, "coeffs": [[exp, "coeff"], ...]}
// ===========================================================================

impl serde::Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("QSeries", 3)?;
        st.serialize_field("trunc", &self.trunc)?;
        st.serialize_field("field_order", &self.order)?;
        let coeffs: Vec<(i64, String)> = self
            .coeffs
            .iter()
            .map(|(&e, c)| (e, c.to_string()))
            .collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            trunc: i64,
            field_order: u32,
            coeffs: Vec<(i64, String)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.field_order == 0 {
            return Err(serde::de::Error::custom("field_order must be >= 1"));
        }
        let _ = euler_phi(raw.field_order);
        let mut coeffs = BTreeMap::new();
        for (e, s) in raw.coeffs {
            if e > raw.trunc {
                return Err(serde::de::Error::custom(format!(
                    "coeffs: exponent {e} exceeds trunc {}",
                    raw.trunc
                )));
            }
            let c = parse_cyclo(raw.field_order, &s).map_err(serde::de::Error::custom)?;
            if c.is_zero() {
                continue;
            }
            if coeffs.insert(e, c).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "coeffs: duplicate exponent {e}"
                )));
            }
        }
        Ok(QSeries {
            coeffs,
            trunc: sat(raw.trunc),
            order: raw.field_order,
        })
    }
}

// ===========================================================================
// Convenience constructors for tests and oracles
// ===========================================================================

impl QSeries {
    /// Build a series from `(exponent, integer coefficient)` pairs.
    pub fn from_int_terms(order: u32, terms: &[(i64, i64)], trunc: i64) -> Self {
        let mut s = Self::zero(order, trunc);
        for &(e, c) in terms {
            if e <= s.trunc && c != 0 {
                s.coeffs.insert(e, CycloNum::from_int(order, c));
            }
        }
        s
    }

    /// Build a series from `(exponent, rational)` pairs.
    pub fn from_terms(order: u32, terms: &[(i64, Rational)], trunc: i64) -> Self {
        let mut s = Self::zero(order, trunc);
        for (e, c) in terms {
            if *e <= s.trunc && !c.is_zero() {
                s.coeffs
                    .insert(*e, CycloNum::from_rational(order, c.clone()));
            }
        }
        s
    }
}
