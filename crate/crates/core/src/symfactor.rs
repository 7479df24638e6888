//! Symbolic per-degree terms and their specialization into numeric series.
//!
//! A [`DegreeTerm`] denotes `prefix * prod(factors) * prod_a Q_a^{f_a}`
//! where the prefix is a [`ParamMonomial`] (rational coefficient, power of
//! the internal series variable, and integer exponents of the model's
//! symbols) and each factor is a binomial `(1 - M q^j)^{±k}` whose monomial
//! `M q^j` is again a `ParamMonomial`.
//!
//! A [`Specialization`] maps every symbol to an exact monomial `c * q^e` in
//! the FINAL series variable and raises the internal variable to a power
//! `d` (`series_power`). Substitution semantics, in order:
//!
//! 1. internal q-exponents of the prefix and of every factor are multiplied
//!    by `d`;
//! 2. each symbol is replaced by its `c * q^e` (final-variable exponents,
//!    applied after step 1);
//! 3. a binomial that specializes to `(1 - q^0)` kills the whole term when
//!    it sits in the numerator and is a hard pole error in a denominator;
//! 4. binomials with negative specialized exponent are rewritten
//!    `(1 - c q^m) = (-c q^m)(1 - c^{-1} q^{-m})` to expose a Laurent unit
//!    before inversion (this happens inside [`QSeries::invert`]);
//! 5. the Novikov monomial `prod_a Q_a^{f_a}` is replaced through the
//!    Novikov map, and everything is multiplied at a working truncation
//!    that makes the result exact through the requested order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CycloNum, Rational};
use crate::qlaurent::QSeries;

// ===========================================================================
// Symbols
// ===========================================================================

/// Ordered, distinct symbol names of a model: parameter symbols (line
/// bundle generators and equivariant weights) and Novikov variables.
/// Indices are stable for the lifetime of the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    params: Vec<String>,
    novikov: Vec<String>,
}

impl SymbolTable {
    pub fn new(params: Vec<String>, novikov: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for name in params.iter().chain(novikov.iter()) {
            if !seen.insert(name.clone()) {
                return Err(Error::Validation(format!("duplicate symbol name {name:?}")));
            }
        }
        Ok(SymbolTable { params, novikov })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn novikov(&self) -> &[String] {
        &self.novikov
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|n| n == name)
    }
}

// ===========================================================================
// Monomials, factors, terms
// ===========================================================================

/// A monomial `coeff * q^{q_exp} * prod_s sym_s^{e_s}` with a nonzero
/// rational coefficient. The `q_exp` refers to the INTERNAL series variable
/// of the formula the monomial came from; symbol exponents are arbitrary
/// integers (Laurent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMonomial {
    coeff: Rational,
    q_exp: i64,
    sym_exps: BTreeMap<usize, i64>,
}

impl ParamMonomial {
    pub fn new(coeff: Rational, q_exp: i64) -> Self {
        assert!(!coeff.is_zero(), "zero monomial coefficient");
        ParamMonomial {
            coeff,
            q_exp,
            sym_exps: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), 0)
    }

    /// Multiply in `sym^e` (by symbol index).
    pub fn with_sym(mut self, sym: usize, e: i64) -> Self {
        if e != 0 {
            let cur = self.sym_exps.remove(&sym).unwrap_or(0) + e;
            if cur != 0 {
                self.sym_exps.insert(sym, cur);
            }
        }
        self
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn q_exp(&self) -> i64 {
        self.q_exp
    }

    pub fn sym_exps(&self) -> &BTreeMap<usize, i64> {
        &self.sym_exps
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ParamMonomial {
            coeff: &self.coeff * &other.coeff,
            q_exp: self.q_exp + other.q_exp,
            sym_exps: self.sym_exps.clone(),
        };
        for (&s, &e) in &other.sym_exps {
            let cur = out.sym_exps.remove(&s).unwrap_or(0) + e;
            if cur != 0 {
                out.sym_exps.insert(s, cur);
            }
        }
        out
    }
}

/// One binomial factor `(1 - M q^j)^{power}`; the internal exponent `j`
/// is carried by the monomial's `q_exp`. Positive powers are numerator
/// multiplicities, negative powers denominators. `power != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomFactor {
    pub mono: ParamMonomial,
    pub power: i32,
}

impl BinomFactor {
    pub fn new(mono: ParamMonomial, power: i32) -> Self {
        assert!(power != 0, "binomial factor with zero power");
        BinomFactor { mono, power }
    }
}

/// A symbolic per-degree summand of an I-function: a Novikov degree tuple,
/// a monomial prefix, and a product of binomial factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTerm {
    pub degree: Vec<i64>,
    pub prefix: ParamMonomial,
    pub factors: Vec<BinomFactor>,
}

impl DegreeTerm {
    /// The symbolic product: prefixes multiply, factor lists concatenate,
    /// degrees add componentwise.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree.len(),
            other.degree.len(),
            "degree tuples of different lengths"
        );
        let degree = self
            .degree
            .iter()
            .zip(&other.degree)
            .map(|(a, b)| a + b)
            .collect();
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        DegreeTerm {
            degree,
            prefix: self.prefix.mul(&other.prefix),
            factors,
        }
    }

    /// JSON encoding with symbol names resolved through the table.
    pub fn to_json(&self, table: &SymbolTable) -> serde_json::Value {
        let mono_json = |m: &ParamMonomial| {
            let syms: serde_json::Map<String, serde_json::Value> = m
                .sym_exps
                .iter()
                .map(|(&i, &e)| (table.params()[i].clone(), serde_json::json!(e)))
                .collect();
            serde_json::json!({
                "coeff": m.coeff.to_string(),
                "q_exp": m.q_exp,
                "syms": syms,
            })
        };
        serde_json::json!({
            "degree": self.degree,
            "prefix": mono_json(&self.prefix),
            "factors": self
                .factors
                .iter()
                .map(|f| serde_json::json!({"mono": mono_json(&f.mono), "power": f.power}))
                .collect::<Vec<_>>(),
        })
    }
}

// ===========================================================================
// Specialization
// ===========================================================================

/// An exact monomial value `c * q^e` in the final series variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecValue {
    pub c: CycloNum,
    pub e: i64,
}

impl SpecValue {
    pub fn new(c: CycloNum, e: i64) -> Self {
        SpecValue { c, e }
    }

    pub fn from_int(order: u32, c: i64, e: i64) -> Self {
        SpecValue {
            c: CycloNum::from_int(order, c),
            e,
        }
    }
}

/// An exact substitution: every parameter symbol and every Novikov variable
/// maps to a monomial `c * q^e` in the final variable, and the formula's
/// internal `q` becomes `q^series_power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub series_power: u32,
    pub sym_map: BTreeMap<String, SpecValue>,
    pub novikov_map: BTreeMap<String, SpecValue>,
}

impl Specialization {
    pub fn new(series_power: u32) -> Self {
        Specialization {
            series_power,
            sym_map: BTreeMap::new(),
            novikov_map: BTreeMap::new(),
        }
    }

    pub fn with_sym(mut self, name: &str, value: SpecValue) -> Self {
        self.sym_map.insert(name.to_string(), value);
        self
    }

    pub fn with_novikov(mut self, name: &str, value: SpecValue) -> Self {
        self.novikov_map.insert(name.to_string(), value);
        self
    }

    /// The common coefficient field order of all mapped values, if any
    /// value is present.
    pub fn field_order(&self) -> Option<u32> {
        self.sym_map
            .values()
            .chain(self.novikov_map.values())
            .map(|v| v.c.order())
            .next()
    }

    /// Structural validation against a symbol table: series_power >= 1,
    /// every symbol mapped, no stray names, all values nonzero and over the
    /// same coefficient field.
    pub fn validate_for(&self, table: &SymbolTable) -> Result<()> {
        if self.series_power == 0 {
            return Err(Error::Validation("series_power must be >= 1".into()));
        }
        for name in table.params() {
            if !self.sym_map.contains_key(name) {
                return Err(Error::UnmappedSymbol(name.clone()));
            }
        }
        for name in table.novikov() {
            if !self.novikov_map.contains_key(name) {
                return Err(Error::UnmappedSymbol(name.clone()));
            }
        }
        for name in self.sym_map.keys() {
            if !table.params().contains(name) {
                return Err(Error::Validation(format!(
                    "sym_map entry {name:?} is not a symbol of the model"
                )));
            }
        }
        for name in self.novikov_map.keys() {
            if !table.novikov().contains(name) {
                return Err(Error::Validation(format!(
                    "novikov_map entry {name:?} is not a Novikov variable of the model"
                )));
            }
        }
        let mut order = None;
        for (name, v) in self.sym_map.iter().chain(self.novikov_map.iter()) {
            if v.c.is_zero() {
                return Err(Error::ZeroSpecValue(name.clone()));
            }
            match order {
                None => order = Some(v.c.order()),
                Some(n) if n == v.c.order() => {}
                Some(n) => {
                    return Err(Error::Validation(format!(
                        "mixed coefficient fields in specialization: Q(zeta_{n}) vs Q(zeta_{}) at {name:?}",
                        v.c.order()
                    )));
                }
            }
        }
        Ok(())
    }
}

// ===========================================================================
// Specialization engine
// ===========================================================================

/// A factor after substitution: `(1 - c q^m)^{power}` in the final variable.
struct SpecializedFactor {
    c: CycloNum,
    m: i64,
    power: i32,
}

impl SpecializedFactor {
    /// Exact minimal final-variable exponent contributed by this factor:
    /// `power * min(0, m)` covers numerators and (through unit extraction)
    /// denominators alike.
    fn min_order(&self) -> i64 {
        i64::from(self.power) * self.m.min(0)
    }
}

/// Substitute a parameter monomial: returns the exact `(c, e)` of its value
/// in the final variable.
fn specialize_monomial(
    table: &SymbolTable,
    mono: &ParamMonomial,
    spec: &Specialization,
    order: u32,
) -> Result<(CycloNum, i64)> {
    let mut c = CycloNum::from_rational(order, mono.coeff().clone());
    let mut e = mono.q_exp() * i64::from(spec.series_power);
    for (&idx, &exp) in mono.sym_exps() {
        let name = table
            .params()
            .get(idx)
            .ok_or_else(|| Error::Validation(format!("symbol index {idx} out of range")))?;
        let v = spec
            .sym_map
            .get(name)
            .ok_or_else(|| Error::UnmappedSymbol(name.clone()))?;
        c = c.mul(&v.c.pow(exp));
        e += v.e * exp;
    }
    Ok((c, e))
}

/// Substitute the Novikov monomial `prod_a Q_a^{f_a}`.
fn specialize_novikov(
    table: &SymbolTable,
    degree: &[i64],
    spec: &Specialization,
    order: u32,
) -> Result<(CycloNum, i64)> {
    if degree.len() != table.novikov().len() {
        return Err(Error::Validation(format!(
            "degree tuple length {} does not match the {} Novikov variables",
            degree.len(),
            table.novikov().len()
        )));
    }
    let mut c = CycloNum::one(order);
    let mut e = 0i64;
    for (name, &f) in table.novikov().iter().zip(degree) {
        let v = spec
            .novikov_map
            .get(name)
            .ok_or_else(|| Error::UnmappedSymbol(name.clone()))?;
        c = c.mul(&v.c.pow(f));
        e += v.e * f;
    }
    Ok((c, e))
}

/// Specialize all binomial factors. `Ok(None)` means a numerator factor
/// became `(1 - q^0)` and the whole term vanishes.
fn specialize_factors(
    table: &SymbolTable,
    term: &DegreeTerm,
    spec: &Specialization,
    order: u32,
) -> Result<Option<Vec<SpecializedFactor>>> {
    let mut out = Vec::with_capacity(term.factors.len());
    for f in &term.factors {
        let (c, m) = specialize_monomial(table, &f.mono, spec, order)?;
        if c.is_one() && m == 0 {
            if f.power > 0 {
                return Ok(None);
            }
            return Err(Error::Pole {
                context: format!(
                    "degree {:?}, binomial with internal exponent {}",
                    term.degree,
                    f.mono.q_exp()
                ),
            });
        }
        out.push(SpecializedFactor {
            c,
            m,
            power: f.power,
        });
    }
    Ok(Some(out))
}

fn spec_order(spec: &Specialization) -> u32 {
    spec.field_order().unwrap_or(crate::DEFAULT_FIELD_ORDER)
}

/// The exact minimal final-variable exponent of the specialized term, or
/// `None` when the term vanishes under the specialization.
pub(crate) fn term_min_order(
    table: &SymbolTable,
    term: &DegreeTerm,
    spec: &Specialization,
) -> Result<Option<i64>> {
    let order = spec_order(spec);
    let factors = match specialize_factors(table, term, spec, order)? {
        Some(fs) => fs,
        None => return Ok(None),
    };
    let (_, e_pre) = specialize_monomial(table, &term.prefix, spec, order)?;
    let (_, e_nov) = specialize_novikov(table, &term.degree, spec, order)?;
    let m = e_pre
        + e_nov
        + factors
            .iter()
            .map(SpecializedFactor::min_order)
            .sum::<i64>();
    Ok(Some(m))
}

/// An exact lower bound (in fact the exact minimum) for the lowest
/// final-variable exponent of [`specialize_term`].
///
/// Errors on unmapped symbols, on denominator poles, and on terms that
/// vanish under the specialization (a vanished term has no minimal order).
pub fn min_q_order(table: &SymbolTable, term: &DegreeTerm, spec: &Specialization) -> Result<i64> {
    term_min_order(table, term, spec)?.ok_or(Error::TermVanishes)
}

/// Expand one degree term into an exact [`QSeries`] through `trunc`.
///
/// Returns the zero series when the term vanishes (a numerator binomial
/// specialized to `1 - q^0`) or when its minimal order lies beyond `trunc`.
pub fn specialize_term(
    table: &SymbolTable,
    term: &DegreeTerm,
    spec: &Specialization,
    trunc: i64,
) -> Result<QSeries> {
    spec.validate_for(table)?;
    let order = spec_order(spec);
    let factors = match specialize_factors(table, term, spec, order)? {
        Some(fs) => fs,
        None => return Ok(QSeries::zero(order, trunc)),
    };
    let (c_pre, e_pre) = specialize_monomial(table, &term.prefix, spec, order)?;
    let (c_nov, e_nov) = specialize_novikov(table, &term.degree, spec, order)?;

    let min_total = e_pre
        + e_nov
        + factors
            .iter()
            .map(SpecializedFactor::min_order)
            .sum::<i64>();
    if min_total > trunc {
        return Ok(QSeries::zero(order, trunc));
    }
    // Each piece is computed at its own minimal exponent plus the shared
    // relative precision, so the product truncation telescopes to `trunc`.
    let rel = trunc - min_total;

    let lead = c_pre.mul(&c_nov);
    let mut acc = QSeries::monomial(lead, e_pre + e_nov, e_pre + e_nov + rel);
    for f in &factors {
        let base = QSeries::binomial(&f.c, f.m, f.m.min(0) + rel);
        if f.power > 0 {
            for _ in 0..f.power {
                acc = acc.mul(&base);
            }
        } else {
            let inv = base.invert();
            for _ in 0..(-f.power) {
                acc = acc.mul(&inv);
            }
        }
    }
    debug_assert!(acc.trunc() >= trunc, "working truncation fell short");
    Ok(acc.truncated(trunc))
}

// ===========================================================================
// Tests
// ===========================================================================
