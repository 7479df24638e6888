//! The identity catalog: a registry of verifiable specialization
//! identities, their exact parameter substitutions, literal prefactors,
//! and independent right-hand-side oracles.
//!
//! Each [`IdentitySpec`] pins one displayed equality
//!
//! ```text
//!   prefactor * I(q^d, Q) |_{symbols -> c q^e}  =  oracle series
//! ```
//!
//! with the left side expanded by the charge-model engine and the right
//! side by a directly coded classical sum (see [`oracles`]). Verification
//! compares the two expansions coefficient by coefficient over Q(zeta_6);
//! there is no tolerance, equality is exact or the report carries the
//! first mismatching exponent.
//!
//! Alongside the fixed registry there is one randomized family
//! ([`verify_prop4_family`]): seeded random rational parameter sets for
//! which a level-(1+s) I-function specialization must reproduce the
//! general q-hypergeometric series.

pub mod oracles;

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{CycloNum, Rational};
use crate::iseries::{i_function, q_hypergeometric, ChargeModel, DegreeEnum, PrefixConvention};
use crate::qlaurent::QSeries;
use crate::rng::SplitMix64;
use crate::symfactor::{SpecValue, Specialization};
use crate::DEFAULT_FIELD_ORDER;

pub use oracles::{mock_theta, ORACLE_IDS};

/// Default truncation for identity verification: large enough to
/// distinguish every cataloged series, small enough for sub-second runs.
pub const DEFAULT_VERIFY_TRUNC: i64 = 30;

// ===========================================================================
// Prefactors
// ===========================================================================

/// The literal final-variable prefactor applied to the engine expansion
/// after full specialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefactor {
    Unit,
    /// `1/(1-q)^2`
    InvOneMinusQSquared,
    /// `1/(1-q)`
    InvOneMinusQ,
    /// `q/(1-q)`
    QOverOneMinusQ,
    /// `1/(1+q+q^2)`
    InvOnePlusQPlusQSquared,
}

impl Prefactor {
    pub fn series(&self, order: u32, trunc: i64) -> QSeries {
        let one = CycloNum::one(order);
        match self {
            Prefactor::Unit => QSeries::one(order, trunc),
            Prefactor::InvOneMinusQSquared => {
                let inv = QSeries::binomial(&one, 1, trunc).invert();
                inv.mul(&inv).truncated(trunc)
            }
            Prefactor::InvOneMinusQ => QSeries::binomial(&one, 1, trunc).invert(),
            Prefactor::QOverOneMinusQ => QSeries::binomial(&one, 1, trunc)
                .invert()
                .shift(1)
                .truncated(trunc),
            Prefactor::InvOnePlusQPlusQSquared => {
                QSeries::from_int_terms(order, &[(0, 1), (1, 1), (2, 1)], trunc).invert()
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Prefactor::Unit => "1",
            Prefactor::InvOneMinusQSquared => "1/(1-q)^2",
            Prefactor::InvOneMinusQ => "1/(1-q)",
            Prefactor::QOverOneMinusQ => "q/(1-q)",
            Prefactor::InvOnePlusQPlusQSquared => "1/(1+q+q^2)",
        }
    }
}

// ===========================================================================
// Identity records
// ===========================================================================

/// One verifiable identity: model, convention, specialization, prefactor,
/// and the id of its independently coded right-hand side.
#[derive(Clone, Debug)]
pub struct IdentitySpec {
    pub name: String,
    pub family: String,
    pub description: String,
    pub model: ChargeModel,
    pub convention: PrefixConvention,
    pub spec: Specialization,
    pub prefactor: Prefactor,
    pub rhs_oracle: String,
    /// First summation index of the displayed right-hand side.
    pub rhs_offset: u32,
    pub default_trunc: i64,
}

fn rank_one_model(charges: Vec<i64>, rep: i64, level: i64, lambda_names: Vec<&str>) -> ChargeModel {
    let m = charges.len();
    ChargeModel {
        s: 1,
        m,
        charges: vec![charges],
        rep_charges: vec![vec![rep]],
        level,
        lambda_flags: vec![true; m],
        degree_enum: DegreeEnum::default(),
        lambda_names: Some(lambda_names.into_iter().map(String::from).collect()),
    }
}

fn sv(c: i64, e: i64) -> SpecValue {
    SpecValue::from_int(DEFAULT_FIELD_ORDER, c, e)
}

fn zeta() -> CycloNum {
    CycloNum::zeta(DEFAULT_FIELD_ORDER)
}

struct Entry {
    name: &'static str,
    family: &'static str,
    description: &'static str,
    model: ChargeModel,
    spec: Specialization,
    prefactor: Prefactor,
    rhs_offset: u32,
}

fn entries() -> Vec<Entry> {
    let z = zeta();
    let z_conj = CycloNum::one(DEFAULT_FIELD_ORDER).sub(&z); // zeta^5 = conj(zeta)
    let z2 = z.mul(&z); // zeta^2 = (-1 + sqrt(3) i)/2
    let z4 = z.neg(); // zeta^4 = conj(zeta^2)

    vec![
        Entry {
            name: "prop1.order3.a",
            family: "prop1",
            description: "third-order mock theta phi(q)",
            model: rank_one_model(vec![1], 1, 1, vec!["lambda"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(-1, 0))
                .with_novikov("Q", sv(1, 1)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop1.order3.b",
            family: "prop1",
            description: "1 + third-order mock theta psi(q)",
            model: rank_one_model(vec![1], 1, 1, vec!["lambda"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(1, 1))
                .with_novikov("Q", sv(1, 1)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop1.order3.c",
            family: "prop1",
            description: "third-order series over (-q;q^2)_n with exponents n(n-1)",
            model: rank_one_model(vec![1], 1, 1, vec!["lambda"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(-1, 1))
                .with_novikov("Q", sv(1, 0)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop1.order5.a",
            family: "prop1",
            description: "fifth-order mock theta f0(q)",
            model: rank_one_model(vec![1], 1, 2, vec!["lambda"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(-1, 0))
                .with_novikov("Q", sv(1, 1)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop1.order5.b",
            family: "prop1",
            description: "fifth-order mock theta F0(q)",
            model: rank_one_model(vec![1], 1, 2, vec!["lambda"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(1, 1))
                .with_novikov("Q", sv(1, 2)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop1.order5.c",
            family: "prop1",
            description: "fifth-order mock theta f1(q)",
            model: rank_one_model(vec![1], -1, 2, vec!["lambda"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(-1, 0))
                .with_novikov("Q", sv(1, 0)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop1.order5.d",
            family: "prop1",
            description: "fifth-order series over (q;q^2)_n with exponents 2n(n+1)",
            model: rank_one_model(vec![1], -1, 2, vec!["lambda"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(1, 1))
                .with_novikov("Q", sv(1, 0)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop2.order3.a",
            family: "prop2",
            description: "third-order mock theta f(q)",
            model: rank_one_model(vec![1, 1], 1, 2, vec!["lambda_1", "lambda_2"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda_1", sv(-1, 0))
                .with_sym("lambda_2", sv(-1, 0))
                .with_novikov("Q", sv(1, 1)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop2.order3.b",
            family: "prop2",
            description: "third-order mock theta chi(q); conjugate parameters (1 +- sqrt(3) i)/2",
            model: rank_one_model(vec![1, 1], 1, 2, vec!["lambda_1", "lambda_2"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda_1", SpecValue::new(z.clone(), 0))
                .with_sym("lambda_2", SpecValue::new(z_conj.clone(), 0))
                .with_novikov("Q", sv(1, 1)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop2.order3.c",
            family: "prop2",
            description: "third-order mock theta omega(q)",
            model: rank_one_model(vec![1, 1], -1, 2, vec!["lambda_1", "lambda_2"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda_1", sv(1, -1))
                .with_sym("lambda_2", sv(1, -1))
                .with_novikov("Q", sv(1, 0)),
            prefactor: Prefactor::InvOneMinusQSquared,
            rhs_offset: 0,
        },
        Entry {
            name: "prop2.order3.d",
            family: "prop2",
            description:
                "third-order mock theta rho(q); conjugate parameters (-1 +- sqrt(3) i)/2 * q^-1",
            model: rank_one_model(vec![1, 1], -1, 2, vec!["lambda_1", "lambda_2"]),
            spec: Specialization::new(2)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda_1", SpecValue::new(z2, -1))
                .with_sym("lambda_2", SpecValue::new(z4, -1))
                .with_novikov("Q", sv(1, 0)),
            prefactor: Prefactor::InvOnePlusQPlusQSquared,
            rhs_offset: 0,
        },
        Entry {
            name: "prop3.order7.a",
            family: "prop3",
            description: "seventh-order mock theta F0(q)",
            model: rank_one_model(vec![2, -1], 1, 3, vec!["lambda", "mu"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(1, 0))
                .with_sym("mu", sv(1, 1))
                .with_novikov("Q", sv(-1, 2)),
            prefactor: Prefactor::Unit,
            rhs_offset: 1,
        },
        Entry {
            name: "prop3.order7.b",
            family: "prop3",
            description: "seventh-order mock theta F1(q)",
            model: rank_one_model(vec![2, -1], 1, 3, vec!["lambda", "mu"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(1, -1))
                .with_sym("mu", sv(1, 1))
                .with_novikov("Q", sv(-1, 4)),
            prefactor: Prefactor::QOverOneMinusQ,
            rhs_offset: 1,
        },
        Entry {
            name: "prop3.order7.c",
            family: "prop3",
            description: "seventh-order mock theta F2(q), index-shifted form",
            model: rank_one_model(vec![2, -1], 1, 3, vec!["lambda", "mu"]),
            spec: Specialization::new(1)
                .with_sym("p", sv(1, 0))
                .with_sym("lambda", sv(1, -1))
                .with_sym("mu", sv(1, 1))
                .with_novikov("Q", sv(-1, 3)),
            prefactor: Prefactor::InvOneMinusQ,
            rhs_offset: 1,
        },
    ]
}

/// The fixed registry: one record per displayed identity, in display order.
pub fn registry() -> Vec<IdentitySpec> {
    entries()
        .into_iter()
        .map(|e| IdentitySpec {
            name: e.name.to_string(),
            family: e.family.to_string(),
            description: e.description.to_string(),
            model: e.model,
            convention: PrefixConvention::PropLiteral,
            spec: e.spec,
            prefactor: e.prefactor,
            rhs_oracle: e.name.to_string(),
            rhs_offset: e.rhs_offset,
            default_trunc: DEFAULT_VERIFY_TRUNC,
        })
        .collect()
}

pub fn lookup(name: &str) -> Option<IdentitySpec> {
    registry().into_iter().find(|id| id.name == name)
}

/// A catalog listing row.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityInfo {
    pub name: String,
    pub family: String,
    pub description: String,
}

/// The full registry listing: the fixed identities plus the randomized
/// q-hypergeometric family.
pub fn list_identities() -> Vec<IdentityInfo> {
    let mut out: Vec<IdentityInfo> = registry()
        .iter()
        .map(|id| IdentityInfo {
            name: id.name.clone(),
            family: id.family.clone(),
            description: id.description.clone(),
        })
        .collect();
    out.push(IdentityInfo {
        name: "prop4.family".to_string(),
        family: "prop4".to_string(),
        description:
            "randomized q-hypergeometric equivalence, (r,s) in {(1,1),(2,1),(1,2)}, 5 seeded trials each"
                .to_string(),
    });
    out
}

// ===========================================================================
// Verification
// ===========================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub exp: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub status: VerifyStatus,
    pub trunc: i64,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed_ms: u128,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == VerifyStatus::Pass
    }
}

/// The fully specialized left-hand side: prefactor times the engine
/// expansion of the model, exact through `trunc`.
pub fn identity_lhs(id: &IdentitySpec, trunc: i64) -> Result<QSeries> {
    let base = i_function(&id.model, id.convention, &id.spec, trunc)?;
    let pre = id.prefactor.series(DEFAULT_FIELD_ORDER, trunc);
    Ok(pre.mul(&base).truncated(trunc))
}

/// Verify one identity: expand both sides independently through `trunc`
/// and compare every coefficient.
pub fn verify_identity(id: &IdentitySpec, trunc: i64) -> Result<VerifyReport> {
    if trunc < 0 {
        return Err(Error::Validation(
            "verification truncation must be >= 0".into(),
        ));
    }
    let start = Instant::now();
    let lhs = identity_lhs(id, trunc)?;
    let rhs = mock_theta(&id.rhs_oracle, trunc)?;
    let first_mismatch = lhs.first_mismatch(&rhs, trunc).map(|(exp, a, b)| Mismatch {
        exp,
        lhs: a.to_string(),
        rhs: b.to_string(),
    });
    Ok(VerifyReport {
        name: id.name.clone(),
        status: if first_mismatch.is_none() {
            VerifyStatus::Pass
        } else {
            VerifyStatus::Fail
        },
        trunc,
        first_mismatch,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn verify_by_name(name: &str, trunc: i64) -> Result<VerifyReport> {
    let id = lookup(name).ok_or_else(|| Error::UnknownIdentity(name.to_string()))?;
    verify_identity(&id, trunc)
}

/// A deliberately corrupted copy of `prop1.order3.a` (`lambda -> +1`
/// instead of `-1`), used as the negative control: verification must fail
/// with a definite first mismatch.
pub fn corrupted_control() -> IdentitySpec {
    let mut id = lookup("prop1.order3.a").expect("registry entry");
    id.name = "prop1.order3.a(corrupted)".to_string();
    id.description = "negative control: lambda -> +1 instead of -1".to_string();
    id.spec = id.spec.with_sym("lambda", sv(1, 0));
    id
}

// ===========================================================================
// The randomized q-hypergeometric family
// ===========================================================================

/// The charge model whose level-(1+s) I-function reproduces the general
/// q-hypergeometric series with r upper and s lower parameters: s+1
/// coordinates of charge +1 (the extra one, specialized to weight 1,
/// supplies the (q;q)_n factor) and r coordinates of charge -1.
pub fn prop4_model(r: usize, s: usize) -> ChargeModel {
    let m = s + 1 + r;
    let mut charges = vec![1i64; s + 1];
    charges.extend(std::iter::repeat_n(-1, r));
    let mut names: Vec<String> = (1..=s + 1).map(|i| format!("lambda_{i}")).collect();
    names.extend((1..=r).map(|j| format!("mu_{j}")));
    ChargeModel {
        s: 1,
        m,
        charges: vec![charges],
        rep_charges: vec![vec![1]],
        level: 1 + s as i64,
        lambda_flags: vec![true; m],
        degree_enum: DegreeEnum::default(),
        lambda_names: Some(names),
    }
}

/// The substitution recovering `r_phi_s(alphas; betas; q, z)` from the
/// model of [`prop4_model`]: `p -> 1`, `lambda_i^{-1} q -> beta_i`,
/// `lambda_{s+1} -> 1`, `mu_j -> alpha_j`,
/// `Q -> (-1)^{1+s} z prod_j alpha_j`.
pub fn prop4_specialization(
    alphas: &[Rational],
    betas: &[Rational],
    z_coeff: &Rational,
    z_exp: i64,
) -> Specialization {
    let order = DEFAULT_FIELD_ORDER;
    let s = betas.len();
    let mut spec = Specialization::new(1).with_sym("p", sv(1, 0));
    for (i, b) in betas.iter().enumerate() {
        // lambda_i = q / beta_i
        spec = spec.with_sym(
            &format!("lambda_{}", i + 1),
            SpecValue::new(CycloNum::from_rational(order, b.recip()), 1),
        );
    }
    spec = spec.with_sym(&format!("lambda_{}", s + 1), sv(1, 0));
    for (j, a) in alphas.iter().enumerate() {
        spec = spec.with_sym(
            &format!("mu_{}", j + 1),
            SpecValue::new(CycloNum::from_rational(order, a.clone()), 0),
        );
    }
    let mut q_coeff = z_coeff.clone();
    for a in alphas {
        q_coeff = &q_coeff * a;
    }
    if (1 + s) % 2 == 1 {
        q_coeff = -q_coeff;
    }
    spec.with_novikov(
        "Q",
        SpecValue::new(CycloNum::from_rational(order, q_coeff), z_exp),
    )
}

/// One randomized trial of the family.
#[derive(Clone, Debug, Serialize)]
pub struct Prop4Trial {
    pub r: usize,
    pub s: usize,
    pub trial: usize,
    pub alphas: Vec<String>,
    pub betas: Vec<String>,
    pub z: String,
    pub status: VerifyStatus,
    pub first_mismatch: Option<Mismatch>,
}

/// Run one parameter set: expand the specialized I-function and the
/// q-hypergeometric sum independently and compare through `trunc`.
pub fn prop4_trial(
    r: usize,
    s: usize,
    alphas: &[Rational],
    betas: &[Rational],
    z_coeff: &Rational,
    z_exp: i64,
    trunc: i64,
) -> Result<Option<Mismatch>> {
    let order = DEFAULT_FIELD_ORDER;
    let model = prop4_model(r, s);
    let spec = prop4_specialization(alphas, betas, z_coeff, z_exp);
    let lhs = i_function(&model, PrefixConvention::PropLiteral, &spec, trunc)?;
    let a: Vec<(CycloNum, i64)> = alphas
        .iter()
        .map(|x| (CycloNum::from_rational(order, x.clone()), 0))
        .collect();
    let b: Vec<(CycloNum, i64)> = betas
        .iter()
        .map(|x| (CycloNum::from_rational(order, x.clone()), 0))
        .collect();
    let z = (CycloNum::from_rational(order, z_coeff.clone()), z_exp);
    let rhs = q_hypergeometric(r, s, &a, &b, z, trunc)?;
    Ok(lhs.first_mismatch(&rhs, trunc).map(|(exp, x, y)| Mismatch {
        exp,
        lhs: x.to_string(),
        rhs: y.to_string(),
    }))
}

/// Draw a small rational avoiding 0 and 1 (1 would be a Pochhammer pole in
/// a lower parameter and a degenerate vanishing in an upper one).
fn draw_parameter(rng: &mut SplitMix64) -> Rational {
    loop {
        let v = rng.nonzero_rational(4, 4);
        if !v.is_one() {
            return v;
        }
    }
}

/// Seeded randomized verification of the q-hypergeometric family:
/// `trials` parameter sets per (r, s) in {(1,1), (2,1), (1,2)}.
///
/// `z` is drawn as a nonzero rational times `q` or `q^2`; a positive
/// exponent keeps every summand's minimal order growing even when the
/// quadratic factor cancels (r = s + 1).
pub fn verify_prop4_family(seed: u64, trunc: i64, trials: usize) -> Result<Vec<Prop4Trial>> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::new();
    for (r, s) in [(1usize, 1usize), (2, 1), (1, 2)] {
        for trial in 0..trials {
            let alphas: Vec<Rational> = (0..r).map(|_| draw_parameter(&mut rng)).collect();
            let betas: Vec<Rational> = (0..s).map(|_| draw_parameter(&mut rng)).collect();
            let z_coeff = rng.nonzero_rational(3, 3);
            let z_exp = rng.range_i64(1, 2);
            let first_mismatch = prop4_trial(r, s, &alphas, &betas, &z_coeff, z_exp, trunc)?;
            out.push(Prop4Trial {
                r,
                s,
                trial,
                alphas: alphas.iter().map(Rational::to_string).collect(),
                betas: betas.iter().map(Rational::to_string).collect(),
                z: format!("{z_coeff}*q^{z_exp}"),
                status: if first_mismatch.is_none() {
                    VerifyStatus::Pass
                } else {
                    VerifyStatus::Fail
                },
                first_mismatch,
            });
        }
    }
    Ok(out)
}

// ===========================================================================
// Tests
// ===========================================================================
