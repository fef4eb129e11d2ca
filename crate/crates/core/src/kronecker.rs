//! Executable checks for the Kronecker cluster algebra `B = [[0,−2],[2,0]]`:
//! the `z`-identities, the potential bracket and its Casimir, the cluster
//! recursion with its four exceptional points, and the root-of-unity
//! presentation.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use crate::acyclic::quantum_presentation;
use crate::azumaya::pi_degree;
use crate::compat::{check_compatible, CompatiblePair};
use crate::cyclo::{root_power, CycloContext, CycloNumber};
use crate::error::{Error, Result};
use crate::exchange::ExchangeData;
use crate::intlin::IntMatrix;
use crate::poisson::{gsv_bracket, GsvContext};
use crate::porder::central_ell_power_mutation_check;
use crate::scalar::{rat, Scalar};
use crate::seeds::{ClassicalSeed, QuantumSeed};
use crate::tlaurent::{ClassicalPoly, LaurentRing, TwistMatrix, TwistedLaurentPoly};

pub const GROUPS: [&str; 5] = ["z-identities", "casimir", "recursion", "exceptional-points", "quantum"];

pub const DEFAULT_ELLS: [u64; 3] = [3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((ok, detail)) => Check::new(name, ok, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// The exchange matrix and the skew form used for brackets and twists.
#[derive(Debug, Clone)]
pub struct KroneckerFixture {
    pub exchange: ExchangeData,
    pub lambda: IntMatrix,
}

impl Default for KroneckerFixture {
    /// `Λ = [[0,1],[−1,0]]`, which reproduces `{x₁,x₂} = x₁x₂` and the
    /// commutation `y₁y₂ = εy₂y₁`. Its pair with `B` has `BᵀΛ = −2I`; the
    /// strictly compatible lift used for the central identity is `−Λ`.
    fn default() -> Self {
        KroneckerFixture {
            exchange: kronecker_exchange(),
            lambda: IntMatrix::from_rows(&[[0, 1], [-1, 0]]),
        }
    }
}

pub fn kronecker_exchange() -> ExchangeData {
    ExchangeData::unfrozen(IntMatrix::from_rows(&[[0, -2], [2, 0]])).expect("valid matrix")
}

fn poly(ring: &Arc<LaurentRing<BigRational>>, terms: &[(&[i64], i64)]) -> ClassicalPoly {
    ClassicalPoly::from_terms(ring, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))))
        .expect("well-formed terms")
}

fn show(ok: bool, lhs: &ClassicalPoly, rhs: &ClassicalPoly) -> (bool, String) {
    let detail = if ok {
        format!("{} = {}", lhs.pretty(), rhs.pretty())
    } else {
        format!("{} != {}", lhs.pretty(), rhs.pretty())
    };
    (ok, detail)
}

fn eq_check(lhs: ClassicalPoly, rhs: ClassicalPoly) -> (bool, String) {
    show(lhs == rhs, &lhs, &rhs)
}

/// `x'₁ = (x₂²+1)/x₁`, `x'₂ = (x₁²+1)/x₂`.
fn primes(seed: &ClassicalSeed) -> Result<(ClassicalPoly, ClassicalPoly)> {
    Ok((seed.mutate(0)?.vars()[0].clone(), seed.mutate(1)?.vars()[1].clone()))
}

/// `z = x'₁x'₂ − x₁x₂` and its three identities.
pub fn verify_z_identities() -> Vec<Check> {
    let seed = ClassicalSeed::classical(kronecker_exchange());
    let ring = seed.ring().clone();
    let (x1, x2) = (seed.vars()[0].clone(), seed.vars()[1].clone());
    let run = || -> Result<Vec<(&'static str, (bool, String))>> {
        let (x1p, x2p) = primes(&seed)?;
        let z = x1p.mul(&x2p)?.sub(&x1.mul(&x2)?)?;
        let sum = poly(&ring, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], 1)]);
        let x12 = x1.mul(&x2)?;
        Ok(vec![
            ("z-identities/z-closed-form", eq_check(z.clone(), sum.exact_divide_right(&x12)?)),
            ("z-identities/x1x2z", eq_check(x12.mul(&z)?, sum)),
            ("z-identities/x1z", eq_check(x1.mul(&z)?, x2.add(&x2p)?)),
            ("z-identities/x2z", eq_check(x2.mul(&z)?, x1.add(&x1p)?)),
        ])
    };
    match run() {
        Ok(v) => v.into_iter().map(|(n, r)| Check::from_result(n, Ok(r))).collect(),
        Err(e) => vec![Check::new("z-identities", false, format!("error: {e}"))],
    }
}

/// `∂p/∂x_i` for a classical (polynomial or Laurent) element.
pub fn partial(p: &ClassicalPoly, i: usize) -> ClassicalPoly {
    let terms = p.terms().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
        let mut d = e.to_vec();
        d[i] -= 1;
        (d, c * rat(e[i]))
    });
    ClassicalPoly::from_terms(p.ring(), terms.collect::<Vec<_>>()).expect("same rank")
}

/// Evaluates a polynomial at a point of `ℚ(ζ)ᴺ`.
pub fn evaluate(p: &ClassicalPoly, point: &[CycloNumber], ctx: &Arc<CycloContext>) -> Result<CycloNumber> {
    let mut acc = CycloNumber::zero_of(ctx);
    for (e, c) in p.terms() {
        let mut t = CycloNumber::from_rational(ctx, c);
        for (x, &k) in point.iter().zip(e) {
            let base = if k < 0 { CycloNumber::one_of(ctx).try_div(x)? } else { x.clone() };
            for _ in 0..k.unsigned_abs() {
                t = t.times(&base);
            }
        }
        acc = acc.plus(&t);
    }
    Ok(acc)
}

/// Substitutes `z ↦ value` (a Laurent element of the rank-2 ring) into a
/// polynomial in `(x₁, x₂, z)`.
fn substitute_z(p: &ClassicalPoly, value: &ClassicalPoly) -> Result<ClassicalPoly> {
    let ring = value.ring();
    let mut acc = ClassicalPoly::zero(ring);
    for (e, c) in p.terms() {
        let head = ClassicalPoly::monomial(ring, &e[..2], c.clone())?;
        acc = acc.add(&head.mul(&value.pow(e[2] as u32))?)?;
    }
    Ok(acc)
}

/// The four points `(0, ±i, 0)`, `(±i, 0, 0)` in `ℚ(i)³`.
pub fn base_points(ctx: &Arc<CycloContext>) -> Vec<[CycloNumber; 3]> {
    let i = root_power(ctx, 1);
    let mi = i.negated();
    let o = CycloNumber::zero_of(ctx);
    vec![
        [o.clone(), i.clone(), o.clone()],
        [o.clone(), mi.clone(), o.clone()],
        [i, o.clone(), o.clone()],
        [mi, o.clone(), o],
    ]
}

/// The potential `f = x₁x₂z − x₁² − x₂² − 1`, its brackets, the Casimir
/// identity and the nonvanishing of `df` at the base points.
pub fn verify_casimir_and_potential(fixture: &KroneckerFixture) -> Vec<Check> {
    let r3 = LaurentRing::classical(3);
    let f = poly(
        &r3,
        &[(&[1, 1, 1], 1), (&[2, 0, 0], -1), (&[0, 2, 0], -1), (&[0, 0, 0], -1)],
    );
    let (fx1, fx2, fz) = (partial(&f, 0), partial(&f, 1), partial(&f, 2));
    let mut out = Vec::new();

    out.push(Check::from_result(
        "casimir/f_z",
        Ok(eq_check(fz.clone(), poly(&r3, &[(&[1, 1, 0], 1)]))),
    ));
    let gsv = (|| -> Result<(bool, String)> {
        let seed = ClassicalSeed::classical(fixture.exchange.clone());
        let ctx = GsvContext::from_skew(&fixture.lambda)?;
        let (x1, x2) = (&seed.vars()[0], &seed.vars()[1]);
        let br = gsv_bracket(x1, x2, &ctx)?;
        let fz2 = substitute_z(&fz, &ClassicalPoly::zero(seed.ring()))?;
        Ok(show(br == fz2, &br, &fz2))
    })();
    out.push(Check::from_result("casimir/gsv-bracket-x1x2", gsv));
    out.push(Check::from_result(
        "casimir/bracket-x1-z",
        Ok(eq_check(fx2.neg(), poly(&r3, &[(&[0, 1, 0], 2), (&[1, 0, 1], -1)]))),
    ));
    out.push(Check::from_result(
        "casimir/bracket-x2-z",
        Ok(eq_check(fx1.clone(), poly(&r3, &[(&[0, 1, 1], 1), (&[1, 0, 0], -2)]))),
    ));
    // GSV brackets with z on Y agree with the potential brackets
    let on_y = (|| -> Result<(bool, String)> {
        let seed = ClassicalSeed::classical(fixture.exchange.clone());
        let ctx = GsvContext::from_skew(&fixture.lambda)?;
        let (x1, x2) = (seed.vars()[0].clone(), seed.vars()[1].clone());
        let (x1p, x2p) = primes(&seed)?;
        let z = x1p.mul(&x2p)?.sub(&x1.mul(&x2)?)?;
        let a = gsv_bracket(&x1, &z, &ctx)?;
        let b = gsv_bracket(&x2, &z, &ctx)?;
        let pa = substitute_z(&fx2.neg(), &z)?;
        let pb = substitute_z(&fx1, &z)?;
        let ok = a == pa && b == pb;
        Ok((ok, format!("{{x1,z}} = {}, {{x2,z}} = {}", a.pretty(), b.pretty())))
    })();
    out.push(Check::from_result("casimir/brackets-on-Y", on_y));
    let identity = (|| -> Result<(bool, String)> {
        // x₁f_{x₁} + x₂f_{x₂} = 2x₁x₂z − 2x₁² − 2x₂² = 2f + 2
        let x1 = ClassicalPoly::var(&r3, 0);
        let x2 = ClassicalPoly::var(&r3, 1);
        let lhs = x1.mul(&fx1)?.add(&x2.mul(&fx2)?)?;
        let expanded = poly(&r3, &[(&[1, 1, 1], 2), (&[2, 0, 0], -2), (&[0, 2, 0], -2)]);
        let two = ClassicalPoly::constant(&r3, rat(2));
        let twice_f = f.scale(&rat(2));
        let ok = lhs == expanded && expanded.sub(&two)? == twice_f && lhs.sub(&twice_f)? == two;
        Ok((ok, "x1*f_x1 + x2*f_x2 = 2*f + 2, hence 2 on V(f)".to_string()))
    })();
    out.push(Check::from_result("casimir/identity-2f", identity));
    let smooth = (|| -> Result<(bool, String)> {
        let ctx = CycloContext::new(4)?;
        let mut ok = true;
        for p in base_points(&ctx) {
            let on_curve = evaluate(&f, &p, &ctx)?.is_zero_elt();
            let grad: Vec<CycloNumber> = [&fx1, &fx2, &fz]
                .iter()
                .map(|g| evaluate(g, &p, &ctx))
                .collect::<Result<_>>()?;
            ok &= on_curve && grad.iter().any(|g| !g.is_zero_elt());
        }
        Ok((ok, "f = 0 and df != 0 at (0,±i,0), (±i,0,0)".to_string()))
    })();
    out.push(Check::from_result("casimir/df-at-base-points", smooth));
    out
}

/// `x₁, …, x₈` by alternating mutations, starting in direction 1.
pub fn kronecker_sequence(count: usize) -> Result<Vec<ClassicalPoly>> {
    let mut seed = ClassicalSeed::classical(kronecker_exchange());
    let mut xs = vec![seed.vars()[0].clone(), seed.vars()[1].clone()];
    let mut k = 0;
    while xs.len() < count {
        seed = seed.mutate(k)?;
        xs.push(seed.vars()[k].clone());
        k = 1 - k;
    }
    Ok(xs)
}

pub fn verify_recursion() -> Vec<Check> {
    let xs = match kronecker_sequence(8) {
        Ok(v) => v,
        Err(e) => return vec![Check::new("recursion", false, format!("error: {e}"))],
    };
    let ring = xs[0].ring().clone();
    let one = ClassicalPoly::one(&ring);
    let mut out = Vec::new();
    let x3 = poly(&ring, &[(&[0, 2], 1), (&[0, 0], 1)]).exact_divide_right(&xs[0]);
    out.push(Check::from_result(
        "recursion/x3",
        x3.map(|x3| eq_check(xs[2].clone(), x3)),
    ));
    for n in 1..7 {
        let r = (|| -> Result<(bool, String)> {
            let lhs = xs[n - 1].mul(&xs[n + 1])?;
            let rhs = xs[n].pow(2).add(&one)?;
            Ok(show(lhs == rhs, &lhs, &rhs))
        })();
        out.push(Check::from_result(format!("recursion/x{}x{}", n, n + 2), r));
    }
    for (n, x) in xs.iter().enumerate().skip(2) {
        let (lo, _) = x.exponent_bounds().expect("nonzero");
        let den: Vec<i64> = lo.iter().map(|v| -v.min(&0)).collect();
        // with the denominator cleared, the numerator is a polynomial not
        // divisible by either variable
        let ok = lo.iter().all(|&v| v <= 0) && den.iter().any(|&d| d > 0);
        out.push(Check::new(
            format!("recursion/denominator-x{}", n + 1),
            ok,
            format!("x{} has denominator x1^{} x2^{}", n + 1, den[0], den[1]),
        ));
    }
    out
}

/// The four points off every cluster torus: the sequence of cluster
/// variables cycles through `(0, i, 0, −i)` up to shift.
pub fn verify_exceptional_points() -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let ctx = CycloContext::new(4)?;
        let i = root_power(&ctx, 1);
        let o = CycloNumber::zero_of(&ctx);
        let one = CycloNumber::one_of(&ctx);
        let cycle = [o.clone(), i.clone(), o.clone(), i.negated()];
        let mut out = Vec::new();
        let mut images = Vec::new();
        for shift in 0..4 {
            let x = |n: usize| cycle[(n + shift) % 4].clone();
            let mut ok = true;
            for n in 1..=16 {
                ok &= x(n - 1).times(&x(n + 1)) == x(n).times(&x(n)).plus(&one);
            }
            // (x₁, x₂, z) with x'₁ = x₃, x'₂ = x₀
            let (x1, x2) = (x(1), x(2));
            let z = x(3).times(&x(0)).minus(&x1.times(&x2));
            images.push([x1.render(), x2.render(), z.render()]);
            out.push(Check::new(
                format!("exceptional-points/shift-{shift}"),
                ok,
                format!("x_n = cycle[(n + {shift}) mod 4] satisfies every recursion instance"),
            ));
        }
        let mut want: Vec<[String; 3]> = base_points(&ctx)
            .iter()
            .map(|p| [p[0].render(), p[1].render(), p[2].render()])
            .collect();
        want.sort();
        images.sort();
        out.push(Check::new(
            "exceptional-points/images",
            images == want,
            "the four assignments map to (0,±i,0), (±i,0,0)",
        ));
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Check::new("exceptional-points", false, format!("error: {e}"))])
}

/// The compatible lift (`Λ` or `−Λ`, whichever has positive `D`).
pub fn strict_lift(fixture: &KroneckerFixture) -> Result<CompatiblePair> {
    check_compatible(&fixture.lambda, &fixture.exchange)
        .or_else(|_| check_compatible(&fixture.lambda.neg(), &fixture.exchange))
}

/// Root-of-unity checks for one odd `ℓ`.
pub fn verify_quantum_kronecker(fixture: &KroneckerFixture, ell: u64) -> Result<Vec<Check>> {
    if ell % 2 == 0 {
        return Err(Error::HypothesisViolated(format!("ell = {ell} is even")));
    }
    let tag = format!("quantum-l{ell}");
    let mut out = Vec::new();
    let rel = (|| -> Result<(bool, String)> {
        let seed = QuantumSeed::quantum(fixture.exchange.clone(), &fixture.lambda, ell)?;
        let ctx = seed.ring().ctx().clone();
        let eps = |k: i64| root_power(&ctx, 2 * k);
        let (y1, y2) = (&seed.vars()[0], &seed.vars()[1]);
        let y1p = seed.mutate(0)?.vars()[0].clone();
        let y2p = seed.mutate(1)?.vars()[1].clone();
        let one = TwistedLaurentPoly::one(seed.ring());
        let c = y1.mul(y2)? == y2.mul(y1)?.scale(&eps(1));
        let e1 = y1p.mul(y1)? == y2.pow(2).scale(&eps(-1)).add(&one)?;
        let e2 = y2p.mul(y2)? == y1.pow(2).scale(&eps(1)).add(&one)?;
        Ok((
            c && e1 && e2,
            format!(
                "y1*y2 = eps*y2*y1: {c}; y1'*y1 = eps^-1*y2^2 + 1: {e1}; y2'*y2 = eps*y1^2 + 1: {e2}"
            ),
        ))
    })();
    out.push(Check::from_result(format!("{tag}/relations"), rel));
    let pres = quantum_presentation(&fixture.exchange, &fixture.lambda, ell).map(|p| {
        let rels: Vec<String> = p
            .commutations
            .iter()
            .map(|r| r.render())
            .chain(p.exchanges.iter().map(|r| r.render()))
            .collect();
        (true, format!("{} ({})", rels.join("; "), p.reading.describe()))
    });
    out.push(Check::from_result(format!("{tag}/presentation"), pres));
    for k in 0..2 {
        let r = (|| -> Result<(bool, String)> {
            let strict = strict_lift(fixture)?;
            let seed = QuantumSeed::quantum(fixture.exchange.clone(), strict.lambda(), ell)?;
            let rep = central_ell_power_mutation_check(&seed, k, &strict)?;
            Ok((rep.holds, format!("lhs = {}", rep.lhs.pretty())))
        })();
        out.push(Check::from_result(format!("{tag}/central-power-k{}", k + 1), r));
    }
    let pi = (|| -> Result<(bool, String)> {
        let d = pi_degree(&TwistMatrix::modular(&fixture.lambda, ell)?)?;
        Ok((d == ell.into(), format!("PI degree {d}")))
    })();
    out.push(Check::from_result(format!("{tag}/pi-degree"), pi));
    Ok(out)
}

fn matches(only: Option<&str>, name: &str) -> bool {
    match only {
        None => true,
        Some(o) => {
            name == o
                || name.starts_with(&format!("{o}/"))
                || (o == "quantum" && name.starts_with("quantum-l"))
        }
    }
}

/// Runs the selected checks. `only` names a group (`z-identities`,
/// `casimir`, `recursion`, `exceptional-points`, `quantum`, `quantum-l5`)
/// or a single check.
pub fn run_suite(fixture: &KroneckerFixture, only: Option<&str>, ells: &[u64]) -> Result<SuiteReport> {
    let head = only.map(|o| o.split('/').next().unwrap_or(o));
    let wants = |group: &str| head.is_none_or(|h| h == group || (group == "quantum" && h.starts_with("quantum")));
    let mut checks = Vec::new();
    if wants("z-identities") {
        checks.extend(verify_z_identities());
    }
    if wants("casimir") {
        checks.extend(verify_casimir_and_potential(fixture));
    }
    if wants("recursion") {
        checks.extend(verify_recursion());
    }
    if wants("exceptional-points") {
        checks.extend(verify_exceptional_points());
    }
    if wants("quantum") {
        for &ell in ells {
            if matches(head, &format!("quantum-l{ell}/")) || head == Some("quantum") || head.is_none() {
                checks.extend(verify_quantum_kronecker(fixture, ell)?);
            }
        }
    }
    checks.retain(|c| matches(only, &c.name));
    if checks.is_empty() {
        return Err(Error::Parse(format!("no check matches `{}`", only.unwrap_or(""))));
    }
    let notes = vec![
        "exchange relations are checked in the order y'_k*y_k; in the order y_k*y'_k the scalars become eps and eps^-1".to_string(),
        "the central-power identity uses the strictly compatible lift -Lambda (B^T Lambda = -2I for the fixture)".to_string(),
        "the printed run 0, i, 0, -i, 0, -i, 0, i breaks the recursion at its fifth term; the assignment is periodic with period 4".to_string(),
    ];
    Ok(SuiteReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        notes,
    })
}
