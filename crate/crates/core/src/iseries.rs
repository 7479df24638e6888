//! Series generators: toric I-function terms from charge data, the
//! determinantal level modification, and general q-hypergeometric series.
//!
//! A toric target is described by a [`ChargeModel`]: an `s x m` integer
//! charge matrix `Q_{a rho}`, per-coordinate equivariant flags, a list of
//! representation charge vectors (one per Chern root `L_i`), and a level
//! `l`. For a degree tuple `f` the pairing with coordinate `rho` is
//! `beta_rho = sum_a Q_{a rho} f_a`, and the degree summand of the small
//! I-function is
//!
//! ```text
//!   (level prefix) * prod_{beta_rho > 0} prod_{j=1}^{beta_rho}   (1 - U_rho q^j)^{-1}
//!                  * prod_{beta_rho < 0} prod_{j=beta_rho+1}^{0} (1 - U_rho q^j)
//! ```
//!
//! with `U_rho = prod_a P_a^{Q_{a rho}} * Lambda_rho^{-1}` (the equivariant
//! weight present only when the coordinate's flag is set). Coordinates with
//! `beta_rho = 0` contribute nothing. The level prefix per Chern root, with
//! `beta_i = sum_a r^{(i)}_a f_a` and `L_i = prod_a P_a^{r^{(i)}_a}`, comes
//! in two conventions:
//!
//! - [`PrefixConvention::PropLiteral`]:   `(L_i^{beta_i}  q^{beta_i (beta_i - 1)/2})^l`
//! - [`PrefixConvention::ThmDetModify`]:  `(L_i^{-beta_i} q^{(beta_i + 1) beta_i/2})^l`
//!
//! The two are reconcilable under dualization but are kept distinct;
//! [`det_modify`] applies either one to an existing term, and applying it
//! to a level-0 term must reproduce the direct level-l term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CycloNum, Rational};
use crate::qlaurent::QSeries;
use crate::symfactor::{
    specialize_term, term_min_order, BinomFactor, DegreeTerm, ParamMonomial, Specialization,
    SymbolTable,
};

/// Default degree cap for automatic (s = 1) enumeration.
pub const DEFAULT_DEGREE_CAP: usize = 256;

/// Degree cap for q-hypergeometric summation.
const QHYPER_DEGREE_CAP: usize = 256;

/// Consecutive out-of-window degrees required before summation stops.
const STOP_STREAK: usize = 3;

// ===========================================================================
// Charge models
// ===========================================================================

/// Which level-prefix form a generator uses. The displayed I-function
/// formulas and the determinantal modification statement carry different
/// (dual) prefix normalizations; the catalog pins one per identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrefixConvention {
    #[serde(rename = "prop_literal")]
    PropLiteral,
    #[serde(rename = "thm_detmodify")]
    ThmDetModify,
}

/// Degree enumeration of a model: automatic `n = 1..n_max` for rank-1
/// torus models, or an explicit list of degree tuples otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeEnum {
    Auto { n_max: usize },
    List(Vec<Vec<i64>>),
}

impl Default for DegreeEnum {
    fn default() -> Self {
        DegreeEnum::Auto {
            n_max: DEFAULT_DEGREE_CAP,
        }
    }
}

/// Charge-matrix description of a toric target together with the
/// representation data and level defining its I-function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeModel {
    /// Rank of the torus `G = (C^*)^s`.
    pub s: usize,
    /// Number of coordinates.
    pub m: usize,
    /// The `s x m` charge matrix, row-major.
    pub charges: Vec<Vec<i64>>,
    /// One integer s-tuple per Chern root of the representation bundle.
    pub rep_charges: Vec<Vec<i64>>,
    /// The level `l`.
    pub level: i64,
    /// Whether coordinate `rho` carries an equivariant parameter.
    pub lambda_flags: Vec<bool>,
    #[serde(default)]
    pub degree_enum: DegreeEnum,
    /// Optional display names for the equivariant parameters, one per
    /// coordinate (entries for unflagged coordinates are ignored).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_names: Option<Vec<String>>,
}

impl ChargeModel {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        if self.s == 0 {
            return fail("s must be >= 1".into());
        }
        if self.m == 0 {
            return fail("m must be >= 1".into());
        }
        if self.charges.len() != self.s {
            return fail(format!(
                "charges has {} rows, expected s = {}",
                self.charges.len(),
                self.s
            ));
        }
        for (a, row) in self.charges.iter().enumerate() {
            if row.len() != self.m {
                return fail(format!(
                    "charges row {a} has length {}, expected m = {}",
                    row.len(),
                    self.m
                ));
            }
        }
        if self.lambda_flags.len() != self.m {
            return fail(format!(
                "lambda_flags has length {}, expected m = {}",
                self.lambda_flags.len(),
                self.m
            ));
        }
        if let Some(names) = &self.lambda_names {
            if names.len() != self.m {
                return fail(format!(
                    "lambda_names has length {}, expected m = {}",
                    names.len(),
                    self.m
                ));
            }
        }
        for (i, r) in self.rep_charges.iter().enumerate() {
            if r.len() != self.s {
                return fail(format!(
                    "rep_charges entry {i} has length {}, expected s = {}",
                    r.len(),
                    self.s
                ));
            }
        }
        if self.level != 0 && self.rep_charges.is_empty() {
            return fail("rep_charges must be nonempty when level != 0".into());
        }
        match &self.degree_enum {
            DegreeEnum::Auto { n_max } => {
                if self.s != 1 {
                    return fail("automatic degree enumeration requires s = 1".into());
                }
                if *n_max == 0 {
                    return fail("n_max must be >= 1".into());
                }
            }
            DegreeEnum::List(list) => {
                let mut seen = std::collections::BTreeSet::new();
                for f in list {
                    if f.len() != self.s {
                        return fail(format!(
                            "degree tuple {f:?} has length {}, expected s = {}",
                            f.len(),
                            self.s
                        ));
                    }
                    if f.iter().all(|&x| x == 0) {
                        return fail("degree list must not contain the zero tuple".into());
                    }
                    if !seen.insert(f.clone()) {
                        return fail(format!("duplicate degree tuple {f:?}"));
                    }
                }
            }
        }
        // Symbol names must be constructible and distinct.
        self.symbol_table()?;
        Ok(())
    }

    /// True when `f` belongs to the model's degree enumeration.
    pub fn degree_in_enumeration(&self, f: &[i64]) -> bool {
        if f.len() != self.s {
            return false;
        }
        match &self.degree_enum {
            DegreeEnum::Auto { n_max } => f[0] >= 1 && f[0] <= *n_max as i64,
            DegreeEnum::List(list) => list.iter().any(|g| g == f),
        }
    }

    fn p_names(&self) -> Vec<String> {
        if self.s == 1 {
            vec!["p".to_string()]
        } else {
            (1..=self.s).map(|a| format!("p_{a}")).collect()
        }
    }

    fn lambda_name(&self, rho: usize) -> String {
        match &self.lambda_names {
            Some(names) => names[rho].clone(),
            None => format!("lambda_{}", rho + 1),
        }
    }

    fn novikov_names(&self) -> Vec<String> {
        if self.s == 1 {
            vec!["Q".to_string()]
        } else {
            (1..=self.s).map(|a| format!("Q_{a}")).collect()
        }
    }

    /// The model's symbol table: line bundle generators first, then the
    /// equivariant parameters of flagged coordinates, plus the Novikov
    /// variables.
    pub fn symbol_table(&self) -> Result<SymbolTable> {
        let mut params = self.p_names();
        for rho in 0..self.m {
            if self.lambda_flags[rho] {
                params.push(self.lambda_name(rho));
            }
        }
        SymbolTable::new(params, self.novikov_names())
    }

    /// Symbol index of the equivariant parameter of coordinate `rho`
    /// within the model's table (flagged coordinates only).
    fn lambda_index(&self, rho: usize) -> usize {
        let before = self.lambda_flags[..rho].iter().filter(|&&b| b).count();
        self.s + before
    }
}

/// A model file as consumed by the CLI: the charge data plus the prefix
/// convention to expand with.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(flatten)]
    pub model: ChargeModel,
    pub convention: PrefixConvention,
}

// ===========================================================================
// Term generator and determinantal modification
// ===========================================================================

/// The symbolic degree-`f` summand of the model's small I-function.
pub fn i_term(model: &ChargeModel, f: &[i64], conv: PrefixConvention) -> Result<DegreeTerm> {
    if !model.degree_in_enumeration(f) {
        return Err(Error::DegreeOutOfRange(f.to_vec()));
    }
    let mut prefix = ParamMonomial::one();
    for rep in &model.rep_charges {
        let beta_r: i64 = rep.iter().zip(f).map(|(r, x)| r * x).sum();
        let (q_exp, bundle_sign) = match conv {
            PrefixConvention::PropLiteral => (model.level * beta_r * (beta_r - 1) / 2, 1),
            PrefixConvention::ThmDetModify => (model.level * (beta_r + 1) * beta_r / 2, -1),
        };
        let mut piece = ParamMonomial::new(Rational::one(), q_exp);
        for (a, r) in rep.iter().enumerate() {
            piece = piece.with_sym(a, bundle_sign * r * beta_r * model.level);
        }
        prefix = prefix.mul(&piece);
    }

    let mut factors = Vec::new();
    for rho in 0..model.m {
        let beta_rho: i64 = (0..model.s).map(|a| model.charges[a][rho] * f[a]).sum();
        if beta_rho == 0 {
            continue;
        }
        let u_mono = |j: i64| {
            let mut mono = ParamMonomial::new(Rational::one(), j);
            for a in 0..model.s {
                mono = mono.with_sym(a, model.charges[a][rho]);
            }
            if model.lambda_flags[rho] {
                mono = mono.with_sym(model.lambda_index(rho), -1);
            }
            mono
        };
        if beta_rho > 0 {
            for j in 1..=beta_rho {
                factors.push(BinomFactor::new(u_mono(j), -1));
            }
        } else {
            for j in (beta_rho + 1)..=0 {
                factors.push(BinomFactor::new(u_mono(j), 1));
            }
        }
    }

    Ok(DegreeTerm {
        degree: f.to_vec(),
        prefix,
        factors,
    })
}

/// Multiply a term's prefix by the level factor of the given convention,
/// computed from the representation charges and the term's own degree.
/// Factors are untouched. Applying this to a level-0 term reproduces the
/// direct level-l term of the same convention.
pub fn det_modify(
    term: &DegreeTerm,
    rep_charges: &[Vec<i64>],
    level: i64,
    conv: PrefixConvention,
) -> DegreeTerm {
    let mut modifier = ParamMonomial::one();
    for rep in rep_charges {
        assert_eq!(
            rep.len(),
            term.degree.len(),
            "representation charge tuple length must match the degree tuple"
        );
        let beta_r: i64 = rep.iter().zip(&term.degree).map(|(r, x)| r * x).sum();
        let piece = match conv {
            PrefixConvention::PropLiteral => {
                let mut p = ParamMonomial::new(Rational::one(), level * beta_r * (beta_r - 1) / 2);
                for (a, r) in rep.iter().enumerate() {
                    p = p.with_sym(a, r * beta_r * level);
                }
                p
            }
            PrefixConvention::ThmDetModify => {
                let mut p = ParamMonomial::new(Rational::one(), level * (beta_r + 1) * beta_r / 2);
                for (a, r) in rep.iter().enumerate() {
                    p = p.with_sym(a, -r * beta_r * level);
                }
                p
            }
        };
        modifier = modifier.mul(&piece);
    }
    DegreeTerm {
        degree: term.degree.clone(),
        prefix: term.prefix.mul(&modifier),
        factors: term.factors.clone(),
    }
}

// ===========================================================================
// I-function expansion
// ===========================================================================

/// Expand the model's small I-function under the specialization, exactly
/// through `trunc`.
///
/// The constant term is 1. Degree terms that vanish (the `(1 - q^0)`
/// numerator mechanism) or start beyond `trunc` are skipped. Automatic
/// enumeration stops once three consecutive degrees fall outside
/// the truncation window and errors at the cap otherwise; explicit degree
/// lists are summed in full.
pub fn i_function(
    model: &ChargeModel,
    conv: PrefixConvention,
    spec: &Specialization,
    trunc: i64,
) -> Result<QSeries> {
    model.validate()?;
    let table = model.symbol_table()?;
    spec.validate_for(&table)?;
    let order = spec.field_order().unwrap_or(crate::DEFAULT_FIELD_ORDER);

    // Select contributing degrees by their (cheap) minimal orders first;
    // expansion happens only after convergence of the enumeration is
    // established, so a divergent request fails fast at the cap.
    let mut selected: Vec<DegreeTerm> = Vec::new();
    match &model.degree_enum {
        DegreeEnum::List(list) => {
            for f in list {
                let term = i_term(model, f, conv)?;
                match term_min_order(&table, &term, spec)? {
                    None => {}
                    Some(m) if m > trunc => {}
                    Some(_) => selected.push(term),
                }
            }
        }
        DegreeEnum::Auto { n_max } => {
            let mut streak = 0usize;
            let mut done = false;
            for n in 1..=*n_max {
                let term = i_term(model, &[n as i64], conv)?;
                match term_min_order(&table, &term, spec)? {
                    None => streak += 1,
                    Some(m) if m > trunc => streak += 1,
                    Some(_) => {
                        streak = 0;
                        selected.push(term);
                    }
                }
                if streak >= STOP_STREAK {
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::NonConvergence { cap: *n_max, trunc });
            }
        }
    }
    let mut acc = QSeries::one(order, trunc);
    for term in &selected {
        acc = acc.add(&specialize_term(&table, term, spec, trunc)?);
    }
    Ok(acc)
}

// ===========================================================================
// q-hypergeometric series
// ===========================================================================

/// Exact minimal exponent of `prod_{i=0}^{n-1} (1 - c q^{j0+i})`.
fn poch_min_order(c: &CycloNum, j0: i64, n: i64) -> i64 {
    if c.is_zero() {
        return 0;
    }
    (0..n).map(|i| (j0 + i).min(0)).sum()
}

/// The general q-hypergeometric series
///
/// ```text
///   sum_{n>=0}  (a_1;q)_n ... (a_r;q)_n
///              ---------------------------- z^n [(-1)^n q^{n(n-1)/2}]^{1+s-r}
///              (b_1;q)_n ... (b_s;q)_n (q;q)_n
/// ```
///
/// with all parameters given as exact final-variable monomials `c * q^e`
/// and `(a;q)_n = (1-a)(1-aq)...(1-aq^{n-1})`. Summation stops by the same
/// minimal-order rule as [`i_function`] and errors at the degree cap when
/// the terms never leave the truncation window.
pub fn q_hypergeometric(
    r: usize,
    s: usize,
    alphas: &[(CycloNum, i64)],
    betas: &[(CycloNum, i64)],
    z: (CycloNum, i64),
    trunc: i64,
) -> Result<QSeries> {
    if alphas.len() != r {
        return Err(Error::Validation(format!(
            "expected {r} alpha parameters, got {}",
            alphas.len()
        )));
    }
    if betas.len() != s {
        return Err(Error::Validation(format!(
            "expected {s} beta parameters, got {}",
            betas.len()
        )));
    }
    let order = z.0.order();
    for (c, _) in alphas.iter().chain(betas.iter()) {
        if c.order() != order {
            return Err(Error::Validation(
                "mixed coefficient fields among hypergeometric parameters".into(),
            ));
        }
    }
    let bracket = 1 + s as i64 - r as i64;
    let one = CycloNum::one(order);

    // First pass: select contributing summands by minimal order (cheap),
    // so a divergent parameter set errors at the cap without any series
    // arithmetic.
    let mut selected: Vec<(i64, i64)> = Vec::new(); // (n, min_order)
    let mut streak = 0usize;
    let mut done = false;
    for n in 0..=QHYPER_DEGREE_CAP as i64 {
        // Poles of the denominator Pochhammers appear as soon as the factor
        // (1 - c q^{e+i}) with c = 1, e + i = 0 enters the product.
        for (c, e) in betas {
            if c.is_one() && *e <= 0 && -e < n {
                return Err(Error::Pole {
                    context: format!("(beta; q)_{n} contains the factor (1 - q^0)"),
                });
            }
        }
        // A numerator parameter hitting 1 * q^0 zeroes this and all later
        // summands.
        let numer_vanishes = alphas.iter().any(|(c, e)| c.is_one() && *e <= 0 && -e < n);

        let min_order = n * z.1
            + bracket * (n * (n - 1) / 2)
            + alphas
                .iter()
                .map(|(c, e)| poch_min_order(c, *e, n))
                .sum::<i64>()
            - betas
                .iter()
                .map(|(c, e)| poch_min_order(c, *e, n))
                .sum::<i64>();

        if numer_vanishes || min_order > trunc {
            streak += 1;
            if streak >= STOP_STREAK {
                done = true;
                break;
            }
            continue;
        }
        streak = 0;
        selected.push((n, min_order));
    }
    if !done {
        return Err(Error::NonConvergence {
            cap: QHYPER_DEGREE_CAP,
            trunc,
        });
    }

    let mut acc = QSeries::zero(order, trunc);
    for (n, min_order) in selected {
        let rel = trunc - min_order;
        let sign = if (bracket * n).rem_euclid(2) == 1 {
            CycloNum::from_int(order, -1)
        } else {
            one.clone()
        };
        let lead_c = sign.mul(&z.0.pow(n));
        let lead_e = n * z.1 + bracket * (n * (n - 1) / 2);
        let mut term = QSeries::monomial(lead_c, lead_e, lead_e + rel);
        for (c, e) in alphas {
            let m = poch_min_order(c, *e, n);
            term = term.mul(&QSeries::pochhammer(c, *e, n as u32, m + rel));
        }
        for (c, e) in betas {
            let m = poch_min_order(c, *e, n);
            term = term.mul(&QSeries::pochhammer(c, *e, n as u32, m + rel).invert());
        }
        term = term.mul(&QSeries::pochhammer(&one, 1, n as u32, rel).invert());
        acc = acc.add(&term.truncated(trunc));
    }
    Ok(acc)
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfactor::SpecValue;
    use crate::DEFAULT_FIELD_ORDER as N;

    /// One coordinate of charge 1, standard representation, level l.
    fn charge_one_model(level: i64, rep: i64) -> ChargeModel {
        ChargeModel {
            s: 1,
            m: 1,
            charges: vec![vec![1]],
            rep_charges: vec![vec![rep]],
            level,
            lambda_flags: vec![true],
            degree_enum: DegreeEnum::default(),
            lambda_names: Some(vec!["lambda".into()]),
        }
    }

    /// Charges (2, -1), standard representation, level 3 (the order-7 target).
    fn order7_model() -> ChargeModel {
        ChargeModel {
            s: 1,
            m: 2,
            charges: vec![vec![2, -1]],
            rep_charges: vec![vec![1]],
            level: 3,
            lambda_flags: vec![true, true],
            degree_enum: DegreeEnum::default(),
            lambda_names: Some(vec!["lambda".into(), "mu".into()]),
        }
    }

    #[test]
    fn charge_one_term_structure() {
        // Degree n: prefix p^n q^{n(n-1)/2}, denominators (1 - p lambda^{-1} q^j), j = 1..n.
        let model = charge_one_model(1, 1);
        let table = model.symbol_table().unwrap();
        let p = table.param_index("p").unwrap();
        let lam = table.param_index("lambda").unwrap();
        for n in 1..=4i64 {
            let t = i_term(&model, &[n], PrefixConvention::PropLiteral).unwrap();
            assert_eq!(t.prefix.q_exp(), n * (n - 1) / 2);
            assert_eq!(t.prefix.sym_exps().get(&p), Some(&n));
            assert_eq!(t.factors.len(), n as usize);
            for (k, f) in t.factors.iter().enumerate() {
                assert_eq!(f.power, -1);
                assert_eq!(f.mono.q_exp(), k as i64 + 1);
                assert_eq!(f.mono.sym_exps().get(&p), Some(&1));
                assert_eq!(f.mono.sym_exps().get(&lam), Some(&-1));
            }
        }
    }

    #[test]
    fn order7_term_structure() {
        // Degree n: beta_1 = 2n denominators with U_1 = p^2 lambda^{-1},
        // beta_2 = -n numerators j = 1-n..0 with U_2 = p^{-1} mu^{-1},
        // prefix p^{3n} q^{3n(n-1)/2}.
        let model = order7_model();
        let table = model.symbol_table().unwrap();
        let p = table.param_index("p").unwrap();
        let lam = table.param_index("lambda").unwrap();
        let mu = table.param_index("mu").unwrap();
        for n in 1..=3i64 {
            let t = i_term(&model, &[n], PrefixConvention::PropLiteral).unwrap();
            assert_eq!(t.prefix.q_exp(), 3 * n * (n - 1) / 2);
            assert_eq!(t.prefix.sym_exps().get(&p), Some(&(3 * n)));
            let denoms: Vec<_> = t.factors.iter().filter(|f| f.power == -1).collect();
            let numers: Vec<_> = t.factors.iter().filter(|f| f.power == 1).collect();
            assert_eq!(denoms.len(), 2 * n as usize);
            assert_eq!(numers.len(), n as usize);
            for (k, f) in denoms.iter().enumerate() {
                assert_eq!(f.mono.q_exp(), k as i64 + 1);
                assert_eq!(f.mono.sym_exps().get(&p), Some(&2));
                assert_eq!(f.mono.sym_exps().get(&lam), Some(&-1));
            }
            for (k, f) in numers.iter().enumerate() {
                assert_eq!(f.mono.q_exp(), 1 - n + k as i64);
                assert_eq!(f.mono.sym_exps().get(&p), Some(&-1));
                assert_eq!(f.mono.sym_exps().get(&mu), Some(&-1));
            }
        }
    }

    #[test]
    fn level_zero_prefix_is_unit() {
        let model = charge_one_model(0, 1);
        let t = i_term(&model, &[3], PrefixConvention::PropLiteral).unwrap();
        assert_eq!(t.prefix, ParamMonomial::one());
    }

    #[test]
    fn degree_outside_enumeration_is_rejected() {
        let mut model = charge_one_model(1, 1);
        model.degree_enum = DegreeEnum::Auto { n_max: 5 };
        assert!(matches!(
            i_term(&model, &[9], PrefixConvention::PropLiteral),
            Err(Error::DegreeOutOfRange(_))
        ));
        assert!(matches!(
            i_term(&model, &[0], PrefixConvention::PropLiteral),
            Err(Error::DegreeOutOfRange(_))
        ));
    }

    #[test]
    fn det_modify_level_zero_is_identity() {
        let model = order7_model();
        let t = i_term(&model, &[2], PrefixConvention::PropLiteral).unwrap();
        let modified = det_modify(&t, &model.rep_charges, 0, PrefixConvention::PropLiteral);
        assert_eq!(modified, t);
    }

    #[test]
    fn det_modify_reproduces_direct_level_term() {
        for conv in [
            PrefixConvention::PropLiteral,
            PrefixConvention::ThmDetModify,
        ] {
            for level in 0..=3 {
                let mut base = order7_model();
                base.level = 0;
                let mut leveled = order7_model();
                leveled.level = level;
                for n in 1..=6i64 {
                    let t0 = i_term(&base, &[n], conv).unwrap();
                    let tl = i_term(&leveled, &[n], conv).unwrap();
                    assert_eq!(det_modify(&t0, &leveled.rep_charges, level, conv), tl);
                }
            }
        }
    }

    #[test]
    fn det_modify_rank_two_dual_prefix() {
        // Two identical Chern roots (1), s = 1, THM_DETMODIFY:
        // prefix (L^{-n} q^{n(n+1)/2})^{2l}.
        let level = 2;
        let model = ChargeModel {
            s: 1,
            m: 1,
            charges: vec![vec![1]],
            rep_charges: vec![vec![1], vec![1]],
            level: 0,
            lambda_flags: vec![true],
            degree_enum: DegreeEnum::default(),
            lambda_names: None,
        };
        let n = 3i64;
        let t0 = i_term(&model, &[n], PrefixConvention::ThmDetModify).unwrap();
        let t = det_modify(
            &t0,
            &model.rep_charges,
            level,
            PrefixConvention::ThmDetModify,
        );
        assert_eq!(t.prefix.q_exp(), 2 * level * n * (n + 1) / 2);
        assert_eq!(t.prefix.sym_exps().get(&0), Some(&(-2 * level * n)));
    }

    #[test]
    fn det_modify_is_additive_in_level() {
        let model = order7_model();
        let t = i_term(&model, &[3], PrefixConvention::PropLiteral).unwrap();
        for conv in [
            PrefixConvention::PropLiteral,
            PrefixConvention::ThmDetModify,
        ] {
            let twice = det_modify(
                &det_modify(&t, &model.rep_charges, 1, conv),
                &model.rep_charges,
                2,
                conv,
            );
            let once = det_modify(&t, &model.rep_charges, 3, conv);
            assert_eq!(twice, once);
        }
    }

    fn order3_first_spec() -> Specialization {
        Specialization::new(2)
            .with_sym("p", SpecValue::from_int(N, 1, 0))
            .with_sym("lambda", SpecValue::from_int(N, -1, 0))
            .with_novikov("Q", SpecValue::from_int(N, 1, 1))
    }

    #[test]
    fn i_function_at_trunc_zero_is_one() {
        let model = charge_one_model(1, 1);
        let s = i_function(
            &model,
            PrefixConvention::PropLiteral,
            &order3_first_spec(),
            0,
        )
        .unwrap();
        assert_eq!(s, QSeries::one(N, 0));
    }

    #[test]
    fn i_function_matches_direct_sum() {
        // 1 + sum_n q^{n^2} / prod_{j=1}^n (1 + q^{2j}), summed directly.
        let trunc = 16i64;
        let mut expected = QSeries::one(N, trunc);
        let minus_one = CycloNum::from_int(N, -1);
        for n in 1..=4i64 {
            let mut denom = QSeries::one(N, trunc);
            for j in 1..=n {
                denom = denom.mul(&QSeries::binomial(&minus_one, 2 * j, trunc));
            }
            let term = QSeries::monomial(CycloNum::one(N), n * n, trunc).mul(&denom.invert());
            expected = expected.add(&term.truncated(trunc));
        }
        let model = charge_one_model(1, 1);
        let got = i_function(
            &model,
            PrefixConvention::PropLiteral,
            &order3_first_spec(),
            trunc,
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn i_function_errors_at_degree_cap_without_convergence() {
        // Q -> 1 with no level growth: the minimal order never increases.
        let mut model = charge_one_model(0, 1);
        model.rep_charges = vec![];
        model.degree_enum = DegreeEnum::Auto { n_max: 16 };
        let spec = Specialization::new(1)
            .with_sym("p", SpecValue::from_int(N, 1, 0))
            .with_sym("lambda", SpecValue::from_int(N, 2, 0))
            .with_novikov("Q", SpecValue::from_int(N, 1, 0));
        assert!(matches!(
            i_function(&model, PrefixConvention::PropLiteral, &spec, 8),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn vanishing_coordinate_drops_terms() {
        // Second coordinate: charge -1, no equivariant parameter, so
        // U_2 = p^{-1}; with p -> 1 every degree term vanishes and the
        // I-function is exactly 1.
        let model = ChargeModel {
            s: 1,
            m: 2,
            charges: vec![vec![1, -1]],
            rep_charges: vec![vec![1]],
            level: 1,
            lambda_flags: vec![true, false],
            degree_enum: DegreeEnum::default(),
            lambda_names: None,
        };
        let spec = Specialization::new(1)
            .with_sym("p", SpecValue::from_int(N, 1, 0))
            .with_sym("lambda_1", SpecValue::from_int(N, -1, 0))
            .with_novikov("Q", SpecValue::from_int(N, 1, 1));
        let s = i_function(&model, PrefixConvention::PropLiteral, &spec, 12).unwrap();
        assert_eq!(s, QSeries::one(N, 12));
    }

    #[test]
    fn general_charges_match_a_direct_sum() {
        // Charges (2, 3): degree n has beta_1 = 2n and beta_2 = 3n, with
        // U_1 = p^2 lambda_1^{-1} and U_2 = p^3 lambda_2^{-1}. Under
        // p -> 1, lambda_1 -> -1, lambda_2 -> 2, Q -> q^3 the expansion
        // must equal the directly built sum
        // 1 + sum_n q^{n(n-1)/2 + 3n} / (prod_{j<=2n}(1+q^j) prod_{j<=3n}(1-q^j/2)).
        let trunc = 14i64;
        let model = ChargeModel {
            s: 1,
            m: 2,
            charges: vec![vec![2, 3]],
            rep_charges: vec![vec![1]],
            level: 1,
            lambda_flags: vec![true, true],
            degree_enum: DegreeEnum::default(),
            lambda_names: None,
        };
        let spec = Specialization::new(1)
            .with_sym("p", SpecValue::from_int(N, 1, 0))
            .with_sym("lambda_1", SpecValue::from_int(N, -1, 0))
            .with_sym("lambda_2", SpecValue::from_int(N, 2, 0))
            .with_novikov("Q", SpecValue::from_int(N, 1, 3));
        let got = i_function(&model, PrefixConvention::PropLiteral, &spec, trunc).unwrap();

        let minus_one = CycloNum::from_int(N, -1);
        let half = CycloNum::from_rational(N, Rational::new(1, 2));
        let mut expected = QSeries::one(N, trunc);
        for n in 1..=4i64 {
            let lead = n * (n - 1) / 2 + 3 * n;
            if lead > trunc {
                break;
            }
            let mut denom = QSeries::one(N, trunc);
            for j in 1..=2 * n {
                denom = denom.mul(&QSeries::binomial(&minus_one, j, trunc));
            }
            for j in 1..=3 * n {
                denom = denom.mul(&QSeries::binomial(&half, j, trunc));
            }
            let term = QSeries::monomial(CycloNum::one(N), lead, trunc).mul(&denom.invert());
            expected = expected.add(&term.truncated(trunc));
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn rank_two_model_with_explicit_degree_list() {
        // Product of two charge-1 coordinates under independent torus
        // factors: beta_1 = f_1, beta_2 = f_2. With p_a -> 1,
        // lambda_a -> -1, Q_1 -> q, Q_2 -> q^2 the listed degrees give
        // 1 + q/(1+q) + q^2/(1+q) + q^3/(1+q)^2.
        let model = ChargeModel {
            s: 2,
            m: 2,
            charges: vec![vec![1, 0], vec![0, 1]],
            rep_charges: vec![],
            level: 0,
            lambda_flags: vec![true, true],
            degree_enum: DegreeEnum::List(vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
            lambda_names: None,
        };
        let table = model.symbol_table().unwrap();
        assert_eq!(table.params(), ["p_1", "p_2", "lambda_1", "lambda_2"]);
        assert_eq!(table.novikov(), ["Q_1", "Q_2"]);
        let spec = Specialization::new(1)
            .with_sym("p_1", SpecValue::from_int(N, 1, 0))
            .with_sym("p_2", SpecValue::from_int(N, 1, 0))
            .with_sym("lambda_1", SpecValue::from_int(N, -1, 0))
            .with_sym("lambda_2", SpecValue::from_int(N, -1, 0))
            .with_novikov("Q_1", SpecValue::from_int(N, 1, 1))
            .with_novikov("Q_2", SpecValue::from_int(N, 1, 2));
        let trunc = 10i64;
        let got = i_function(&model, PrefixConvention::PropLiteral, &spec, trunc).unwrap();

        let minus_one = CycloNum::from_int(N, -1);
        let one_plus_q_inv = QSeries::binomial(&minus_one, 1, trunc).invert();
        let expected = QSeries::one(N, trunc)
            .add(
                &QSeries::monomial(CycloNum::one(N), 1, trunc)
                    .mul(&one_plus_q_inv)
                    .truncated(trunc),
            )
            .add(
                &QSeries::monomial(CycloNum::one(N), 2, trunc)
                    .mul(&one_plus_q_inv)
                    .truncated(trunc),
            )
            .add(
                &QSeries::monomial(CycloNum::one(N), 3, trunc)
                    .mul(&one_plus_q_inv)
                    .mul(&one_plus_q_inv)
                    .truncated(trunc),
            );
        assert_eq!(got, expected);
    }

    #[test]
    fn degree_list_membership() {
        let model = ChargeModel {
            s: 2,
            m: 2,
            charges: vec![vec![1, 0], vec![0, 1]],
            rep_charges: vec![],
            level: 0,
            lambda_flags: vec![true, true],
            degree_enum: DegreeEnum::List(vec![vec![1, 0], vec![2, 1]]),
            lambda_names: None,
        };
        assert!(i_term(&model, &[2, 1], PrefixConvention::PropLiteral).is_ok());
        assert!(matches!(
            i_term(&model, &[1, 1], PrefixConvention::PropLiteral),
            Err(Error::DegreeOutOfRange(_))
        ));
    }

    #[test]
    fn hypergeometric_zeroth_summand_is_one() {
        // Any parameters: the n = 0 summand is the empty product.
        let a = vec![(CycloNum::from_rational(N, Rational::new(2, 3)), 0)];
        let b = vec![(CycloNum::from_rational(N, Rational::new(3, 5)), 0)];
        let z = (CycloNum::from_int(N, 1), 1);
        let s = q_hypergeometric(1, 1, &a, &b, z, 0).unwrap();
        assert_eq!(s, QSeries::one(N, 0));
    }

    #[test]
    fn hypergeometric_euler_type_series() {
        // r = s = 0, z = q: sum_n q^n q^{n(n-1)/2} / (q;q)_n, summed directly.
        let trunc = 12i64;
        let z = (CycloNum::one(N), 1);
        let got = q_hypergeometric(0, 0, &[], &[], z, trunc).unwrap();
        let one = CycloNum::one(N);
        let mut expected = QSeries::zero(N, trunc);
        for n in 0..=4i64 {
            let lead = n + n * (n - 1) / 2;
            if lead > trunc {
                break;
            }
            let sign = if n % 2 == 1 {
                CycloNum::from_int(N, -1)
            } else {
                one.clone()
            };
            let mut denom = QSeries::one(N, trunc);
            for j in 1..=n {
                denom = denom.mul(&QSeries::binomial(&one, j, trunc));
            }
            let term = QSeries::monomial(sign, lead, trunc).mul(&denom.invert());
            expected = expected.add(&term.truncated(trunc));
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn hypergeometric_beta_pole() {
        let b = vec![(CycloNum::one(N), 0)];
        let z = (CycloNum::one(N), 1);
        assert!(matches!(
            q_hypergeometric(0, 1, &[], &b, z, 6),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn hypergeometric_divergent_input_errors() {
        // r = 2, s = 0 makes the bracket exponent negative; with constant z
        // the minimal orders decrease and the cap is hit.
        let a = vec![(CycloNum::from_int(N, 2), 0), (CycloNum::from_int(N, 3), 0)];
        let z = (CycloNum::one(N), 0);
        assert!(matches!(
            q_hypergeometric(2, 0, &a, &[], z, 2),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn model_file_json_round_trip() {
        let mf = ModelFile {
            model: charge_one_model(1, 1),
            convention: PrefixConvention::PropLiteral,
        };
        let s = serde_json::to_string(&mf).unwrap();
        assert!(s.contains("\"convention\":\"prop_literal\""));
        let back: ModelFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back.model, mf.model);
        assert_eq!(back.convention, mf.convention);
    }

    #[test]
    fn model_validation_catches_shape_errors() {
        let mut bad = charge_one_model(1, 1);
        bad.charges = vec![vec![1, 2]];
        assert!(bad.validate().is_err());
        let mut bad = charge_one_model(1, 1);
        bad.lambda_flags = vec![];
        assert!(bad.validate().is_err());
        let mut bad = charge_one_model(1, 1);
        bad.rep_charges = vec![];
        assert!(bad.validate().is_err()); // level 1 needs representation data
        let mut bad = charge_one_model(1, 1);
        bad.degree_enum = DegreeEnum::List(vec![vec![0]]);
        assert!(bad.validate().is_err());
    }
}
