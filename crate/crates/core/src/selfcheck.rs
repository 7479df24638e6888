//! Seeded randomized property suites for every module's invariants.
//!
//! Each suite draws its cases from a [`SplitMix64`] stream, so a fixed
//! seed reproduces the identical report. The suites are library functions
//! shared by unit tests, the acceptance suite, and the CLI `selfcheck`
//! command (which runs them at reduced sizes).

use serde::Serialize;

use crate::catalog;
use crate::exactnum::CycloNum;
use crate::iseries::{det_modify, i_function, i_term, ChargeModel, DegreeEnum, PrefixConvention};
use crate::qlaurent::QSeries;
use crate::rng::SplitMix64;
use crate::symfactor::{min_q_order, specialize_term, SpecValue, Specialization};
use crate::DEFAULT_FIELD_ORDER;

/// Case-count profile for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Reduced sizes for interactive runs.
    Quick,
    /// The full contract sizes.
    Full,
}

impl Scale {
    fn cases(&self, quick: usize, full: usize) -> usize {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case, when any.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn clean(&self) -> bool {
        self.failures == 0
    }
}

struct Suite {
    name: &'static str,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

// ===========================================================================
// Random generators
// ===========================================================================

const N: u32 = DEFAULT_FIELD_ORDER;

fn rand_cyclo(rng: &mut SplitMix64) -> CycloNum {
    let a = CycloNum::from_rational(N, rng.nonzero_rational(3, 3));
    if rng.chance(30) {
        let b = CycloNum::zeta(N).scale(&rng.nonzero_rational(2, 2));
        a.add(&b)
    } else {
        a
    }
}

fn rand_nonzero_cyclo(rng: &mut SplitMix64) -> CycloNum {
    loop {
        let c = rand_cyclo(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

fn rand_series(rng: &mut SplitMix64) -> QSeries {
    let trunc = rng.range_i64(4, 10);
    let mut s = QSeries::zero(N, trunc);
    for _ in 0..rng.range_usize(0, 5) {
        let exp = rng.range_i64(-4, 8);
        let c = rand_cyclo(rng);
        s = s.add(&QSeries::monomial(c, exp, trunc));
    }
    s
}

fn rand_nonzero_series(rng: &mut SplitMix64) -> QSeries {
    loop {
        let s = rand_series(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Agreement of two series through the largest order both certify.
fn agree(a: &QSeries, b: &QSeries) -> bool {
    let t = a.trunc().min(b.trunc());
    a.first_mismatch(b, t).is_none()
}

// ===========================================================================
// Suites
// ===========================================================================

/// Field axioms of Q(zeta_6) on random samples: associativity,
/// commutativity, distributivity, multiplicative inverses.
pub fn cyclo_field_axioms(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("cyclo_field_axioms");
    for _ in 0..cases {
        let a = rand_cyclo(&mut rng);
        let b = rand_cyclo(&mut rng);
        let c = rand_cyclo(&mut rng);
        let ok = a.add(&b).add(&c) == a.add(&b.add(&c))
            && a.add(&b) == b.add(&a)
            && a.mul(&b) == b.mul(&a)
            && a.mul(&b).mul(&c) == a.mul(&b.mul(&c))
            && a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c))
            && (a.is_zero() || a.mul(&a.inv()).is_one());
        suite.case(ok, || format!("a = {a}, b = {b}, c = {c}"));
    }
    suite.finish()
}

/// Ring axioms of the truncated series ring, compared through the largest
/// order both evaluation routes certify.
pub fn qseries_ring_axioms(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("qseries_ring_axioms");
    for _ in 0..cases {
        let a = rand_series(&mut rng);
        let b = rand_series(&mut rng);
        let c = rand_series(&mut rng);
        let ok = agree(&a.add(&b).add(&c), &a.add(&b.add(&c)))
            && agree(&a.add(&b), &b.add(&a))
            && agree(&a.mul(&b), &b.mul(&a))
            && agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)))
            && agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)));
        suite.case(ok, || format!("a = {a}, b = {b}, c = {c}"));
    }
    suite.finish()
}

/// Truncating a product equals multiplying pre-truncated operands whenever
/// the operand truncations still cover the requested window.
pub fn truncation_consistency(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("truncation_consistency");
    for _ in 0..cases {
        let a = rand_nonzero_series(&mut rng);
        let b = rand_nonzero_series(&mut rng);
        let full = a.mul(&b);
        let t = full.trunc() - rng.range_i64(0, 3);
        // Contract-required operand orders for the product to be exact to t.
        let ta = t - b.min_exp().unwrap();
        let tb = t - a.min_exp().unwrap();
        let pre = a
            .truncated(ta.min(a.trunc()))
            .mul(&b.truncated(tb.min(b.trunc())));
        let ok = pre.trunc() >= t
            && full
                .truncated(t)
                .first_mismatch(&pre.truncated(t), t)
                .is_none();
        suite.case(ok, || format!("a = {a}, b = {b}, t = {t}"));
    }
    suite.finish()
}

/// `poch(c, j0, n+1) = poch(c, j0, n) * (1 - c q^{j0+n})`.
pub fn pochhammer_recursion(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("pochhammer_recursion");
    for _ in 0..cases {
        let c = rand_cyclo(&mut rng);
        let j0 = rng.range_i64(-3, 3);
        let n = rng.range_i64(0, 6) as u32;
        let t = rng.range_i64(4, 12);
        let lhs = QSeries::pochhammer(&c, j0, n + 1, t);
        let rhs = QSeries::pochhammer(&c, j0, n, t).mul(&QSeries::binomial(&c, j0 + n as i64, t));
        let ok = agree(&lhs, &rhs);
        suite.case(ok, || format!("c = {c}, j0 = {j0}, n = {n}, t = {t}"));
    }
    suite.finish()
}

/// `q -> q^d` is a ring homomorphism.
pub fn substitution_homomorphism(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("substitution_homomorphism");
    for _ in 0..cases {
        let a = rand_series(&mut rng);
        let b = rand_series(&mut rng);
        let d = rng.range_i64(1, 3) as u32;
        let ok = agree(
            &a.mul(&b).subst_power(d),
            &a.subst_power(d).mul(&b.subst_power(d)),
        ) && agree(
            &a.add(&b).subst_power(d),
            &a.subst_power(d).add(&b.subst_power(d)),
        );
        suite.case(ok, || format!("a = {a}, b = {b}, d = {d}"));
    }
    suite.finish()
}

/// `a * invert(a) = 1` and `invert(a) * a = 1` up to truncation.
pub fn invert_two_sided(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("invert_two_sided");
    for _ in 0..cases {
        let a = rand_nonzero_series(&mut rng);
        let inv = a.invert();
        let left = a.mul(&inv);
        let right = inv.mul(&a);
        let t = left.trunc().min(right.trunc());
        let one = QSeries::one(N, t);
        let ok = left.first_mismatch(&one, t).is_none() && right.first_mismatch(&one, t).is_none();
        suite.case(ok, || format!("a = {a}"));
    }
    suite.finish()
}

fn rand_charge_model(rng: &mut SplitMix64, all_flags: bool) -> ChargeModel {
    let m = rng.range_usize(1, 4);
    let charges: Vec<i64> = (0..m).map(|_| rng.range_i64(-3, 3)).collect();
    let roots = rng.range_usize(1, 2);
    let rep_charges: Vec<Vec<i64>> = (0..roots).map(|_| vec![rng.range_i64(-3, 3)]).collect();
    let lambda_flags = (0..m).map(|_| all_flags || rng.chance(70)).collect();
    ChargeModel {
        s: 1,
        m,
        charges: vec![charges],
        rep_charges,
        level: rng.range_i64(0, 3),
        lambda_flags,
        degree_enum: DegreeEnum::Auto { n_max: 10 },
        lambda_names: None,
    }
}

/// Determinantal-modification consistency: applying [`det_modify`] to the
/// level-0 term reproduces the direct level-l term, structurally, at every
/// degree and under both prefix conventions.
pub fn det_modify_oracle(seed: u64, models: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("det_modify_oracle");
    for _ in 0..models {
        let leveled = rand_charge_model(&mut rng, false);
        let mut base = leveled.clone();
        base.level = 0;
        let mut ok = true;
        'outer: for conv in [
            PrefixConvention::PropLiteral,
            PrefixConvention::ThmDetModify,
        ] {
            for n in 1..=10i64 {
                let direct = match i_term(&leveled, &[n], conv) {
                    Ok(t) => t,
                    Err(_) => {
                        ok = false;
                        break 'outer;
                    }
                };
                let lifted = det_modify(
                    &i_term(&base, &[n], conv).unwrap(),
                    &leveled.rep_charges,
                    leveled.level,
                    conv,
                );
                if direct != lifted {
                    ok = false;
                    break 'outer;
                }
            }
        }
        suite.case(ok, || format!("model = {leveled:?}"));
    }
    suite.finish()
}

/// The `(1 - q^0)` vanishing: a coordinate with negative pairing whose
/// weight specializes to 1 kills every degree term, so the I-function
/// collapses to 1.
pub fn vanishing_mechanism(seed: u64, models: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("vanishing_mechanism");
    for _ in 0..models {
        let extra = rng.range_usize(1, 3);
        let mut charges = vec![rng.range_i64(-3, -1)];
        let mut flags = vec![false]; // U_0 = p^{c_0}, which is 1 under p -> 1
        for _ in 0..extra {
            charges.push(rng.range_i64(0, 3));
            flags.push(true);
        }
        let m = charges.len();
        let model = ChargeModel {
            s: 1,
            m,
            charges: vec![charges],
            rep_charges: vec![vec![1]],
            level: rng.range_i64(0, 2),
            lambda_flags: flags,
            degree_enum: DegreeEnum::Auto { n_max: 16 },
            lambda_names: None,
        };
        let table = model.symbol_table().unwrap();
        let mut spec = Specialization::new(1)
            .with_sym("p", SpecValue::from_int(N, 1, 0))
            .with_novikov("Q", SpecValue::from_int(N, 1, 1));
        for name in table.params() {
            if name != "p" {
                let c = loop {
                    let v = rng.nonzero_rational(3, 2);
                    if !v.is_one() {
                        break v;
                    }
                };
                spec = spec.with_sym(name, SpecValue::new(CycloNum::from_rational(N, c), 0));
            }
        }
        let mut ok = true;
        for n in 1..=6i64 {
            let term = i_term(&model, &[n], PrefixConvention::PropLiteral).unwrap();
            match specialize_term(&table, &term, &spec, 10) {
                Ok(s) if s.is_zero() => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            ok = match i_function(&model, PrefixConvention::PropLiteral, &spec, 10) {
                Ok(s) => s == QSeries::one(N, 10),
                Err(_) => false,
            };
        }
        suite.case(ok, || format!("model = {model:?}"));
    }
    suite.finish()
}

/// The expansion of a specialized term attains its predicted minimal
/// order exactly and has no coefficient below it.
pub fn specialize_min_order(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut suite = Suite::new("specialize_min_order");
    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < cases && attempts < cases * 20 {
        attempts += 1;
        let model = rand_charge_model(&mut rng, true);
        let table = model.symbol_table().unwrap();
        let mut spec = Specialization::new(rng.range_i64(1, 2) as u32);
        for name in table.params() {
            spec = spec.with_sym(
                name,
                SpecValue::new(rand_nonzero_cyclo(&mut rng), rng.range_i64(-1, 1)),
            );
        }
        spec = spec.with_novikov(
            "Q",
            SpecValue::new(rand_nonzero_cyclo(&mut rng), rng.range_i64(0, 2)),
        );
        let n = rng.range_i64(1, 5);
        let term = match i_term(&model, &[n], PrefixConvention::PropLiteral) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let m = match min_q_order(&table, &term, &spec) {
            Ok(m) => m,
            Err(_) => continue, // pole or vanishing under this draw; redraw
        };
        let s = match specialize_term(&table, &term, &spec, m + 6) {
            Ok(s) => s,
            Err(_) => continue,
        };
        produced += 1;
        let ok = s.min_exp() == Some(m);
        suite.case(ok, || {
            format!("model = {model:?}, n = {n}, predicted = {m}")
        });
    }
    suite.finish()
}

/// The negative control: a corrupted specialization must fail verification
/// with the known first mismatch.
pub fn negative_control(_seed: u64, _cases: usize) -> SuiteReport {
    let mut suite = Suite::new("negative_control");
    let report = catalog::verify_identity(&catalog::corrupted_control(), 12);
    let ok = match &report {
        Ok(r) => !r.passed() && r.first_mismatch.as_ref().map(|m| m.exp) == Some(3),
        Err(_) => false,
    };
    suite.case(ok, || format!("report = {report:?}"));
    suite.finish()
}

// ===========================================================================
// Runner
// ===========================================================================

/// Run every suite with sizes given by `scale`, deterministically in
/// `seed`. Suites are seeded independently so their case streams do not
/// interleave.
pub fn run_all(seed: u64, scale: Scale) -> Vec<SuiteReport> {
    vec![
        cyclo_field_axioms(seed ^ 0x01, scale.cases(200, 1000)),
        qseries_ring_axioms(seed ^ 0x02, scale.cases(150, 1000)),
        truncation_consistency(seed ^ 0x03, scale.cases(150, 1000)),
        pochhammer_recursion(seed ^ 0x04, scale.cases(60, 200)),
        substitution_homomorphism(seed ^ 0x05, scale.cases(60, 200)),
        invert_two_sided(seed ^ 0x06, scale.cases(60, 200)),
        det_modify_oracle(seed ^ 0x07, scale.cases(12, 50)),
        vanishing_mechanism(seed ^ 0x08, scale.cases(10, 25)),
        specialize_min_order(seed ^ 0x09, scale.cases(40, 200)),
        negative_control(seed ^ 0x0A, 1),
    ]
}
