//! Named verification checks, suite runners, and deterministic reports.
//!
//! Every module-level invariant in this crate appears here exactly once per
//! configured order `p`, under a stable kebab-case identifier, so that a
//! report line can be traced to one mathematical statement. Deviations are
//! compared against per-check tolerances; the suite passes only when every
//! check does.
//!
//! Serialization is deterministic: fixed check order, floats rendered as
//! decimal strings with 17 significant digits, no timestamps.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{self, ParaAlgebra};
use crate::amplifier::{self, AmplifierConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polynomials::{self, ExactPoly, Family};
use crate::squeeze;

/// Render a float as a decimal string with 17 significant digits
/// (round-trip safe for `f64`).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One named check: a measured deviation against its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Stable identifier naming the mathematical statement being checked.
    pub id: String,
    /// Which suite the check belongs to.
    pub scope: String,
    /// The parameter point, pre-formatted (`"p=2 dim=64 ..."`).
    pub params: String,
    /// Measured deviation, 17-significant-digit decimal string.
    pub deviation: String,
    /// Tolerance, same format.
    pub tol: String,
    /// `"pass"` or `"fail"`.
    pub status: String,
}

impl Check {
    fn measure(id: &str, scope: &str, params: String, deviation: f64, tol: f64) -> Self {
        let passed = deviation.is_finite() && deviation <= tol;
        Check {
            id: id.to_string(),
            scope: scope.to_string(),
            params,
            deviation: fmt_float(deviation),
            tol: fmt_float(tol),
            status: if passed { "pass" } else { "fail" }.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// A finished suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failed_ids(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.id.clone())
            .collect()
    }

    /// One JSON object per line, fields in declaration order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&serde_json::to_string(c).expect("check serialization cannot fail"));
            out.push('\n');
        }
        out
    }

    /// CSV with a header row. `params` contains spaces, never commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,scope,params,deviation,tol,status\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.id, c.scope, c.params, c.deviation, c.tol, c.status
            ));
        }
        out
    }
}

/// Which suites to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Algebra,
    Polynomials,
    Squeeze,
    Amplifier,
    All,
}

impl std::str::FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Scope::Algebra),
            "polynomials" => Ok(Scope::Polynomials),
            "squeeze" => Ok(Scope::Squeeze),
            "amplifier" => Ok(Scope::Amplifier),
            "all" => Ok(Scope::All),
            other => Err(Error::InvalidParameter(format!(
                "unknown scope '{other}' (expected algebra|polynomials|squeeze|amplifier|all)"
            ))),
        }
    }
}

/// Parameters for one suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub scope: Scope,
    pub p_list: Vec<u32>,
    pub dim: usize,
    pub guard: usize,
    /// Comparison tolerance for floating-point cross-checks.
    pub tol: f64,
    /// Squeeze parameter used by the squeeze-scope checks.
    pub r: f64,
    /// Largest polynomial / state index exercised.
    pub nmax: usize,
    /// Integrator tolerance for the amplifier-scope checks.
    pub ode_tol: f64,
    /// Testing hook: corrupt the named check's deviation so it must fail.
    /// Exercises the failure-reporting path end to end.
    pub inject_fault: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            scope: Scope::All,
            p_list: vec![crate::DEFAULT_P],
            dim: crate::DEFAULT_DIM,
            guard: crate::default_guard(crate::DEFAULT_DIM),
            tol: crate::DEFAULT_TOL,
            r: 0.5,
            nmax: 12,
            ode_tol: crate::DEFAULT_ODE_TOL,
            inject_fault: None,
        }
    }
}

struct Recorder<'a> {
    checks: Vec<Check>,
    inject: Option<&'a str>,
}

impl<'a> Recorder<'a> {
    fn push(&mut self, id: &str, scope: &str, params: String, deviation: f64, tol: f64) {
        let deviation = if self.inject == Some(id) {
            // Simulated corruption: guaranteed to exceed any tolerance.
            deviation + 10.0 * tol + 1.0
        } else {
            deviation
        };
        self.checks.push(Check::measure(id, scope, params, deviation, tol));
    }
}

/// Run the configured suites and collect every check.
///
/// Module-level failures (invalid parameters, truncation shortfalls reported
/// by preconditions) propagate as errors — they are usage problems, not
/// failed identities.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.p_list.is_empty() {
        return Err(Error::InvalidParameter("empty p list".into()));
    }
    if cfg.nmax < 1 || cfg.nmax > 32 {
        return Err(Error::InvalidParameter(format!(
            "nmax = {} out of the supported range 1..=32",
            cfg.nmax
        )));
    }
    let mut rec = Recorder {
        checks: Vec::new(),
        inject: cfg.inject_fault.as_deref(),
    };
    for &p in &cfg.p_list {
        if matches!(cfg.scope, Scope::Algebra | Scope::All) {
            algebra_checks(&mut rec, cfg, p)?;
        }
        if matches!(cfg.scope, Scope::Polynomials | Scope::All) {
            polynomial_checks(&mut rec, cfg, p)?;
        }
        if matches!(cfg.scope, Scope::Squeeze | Scope::All) {
            squeeze_checks(&mut rec, cfg, p)?;
        }
        if matches!(cfg.scope, Scope::Amplifier | Scope::All) {
            amplifier_checks(&mut rec, cfg, p)?;
        }
    }
    Ok(SuiteReport { checks: rec.checks })
}

fn algebra_params(p: u32, cfg: &SuiteConfig) -> String {
    format!("p={p} dim={} guard={}", cfg.dim, cfg.guard)
}

fn algebra_checks(rec: &mut Recorder, cfg: &SuiteConfig, p: u32) -> Result<()> {
    const SCOPE: &str = "algebra";
    let alg = ParaAlgebra::new(p, cfg.dim, cfg.guard)?;
    let params = algebra_params(p, cfg);

    // Bracket recombination [2n−1] = 2[n−1] + 1 + (p−1)(−1)^{n−1}, exact
    // integers; deviation counts violations.
    let bracket_bad = (1..=400_u64)
        .filter(|&n| !algebra::bracket_identity_holds(n, p))
        .count() as f64;
    rec.push("algebra-bracket-identity", SCOPE, params.clone(), bracket_bad, 0.0);

    rec.push(
        "algebra-vacuum-order",
        SCOPE,
        params.clone(),
        alg.vacuum_order_residual(),
        1e-12,
    );

    let refl = alg.reflection_residuals();
    rec.push("algebra-canonical-deformed", SCOPE, params.clone(), refl.canonical, 1e-12);
    rec.push("algebra-reflection-a", SCOPE, params.clone(), refl.r_anticommutes_a, 1e-12);
    rec.push("algebra-reflection-adag", SCOPE, params.clone(), refl.r_anticommutes_adag, 1e-12);
    rec.push("algebra-reflection-involution", SCOPE, params.clone(), refl.r_involution, 1e-12);

    let tri = alg.trilinear_residuals();
    rec.push("algebra-trilinear-number", SCOPE, params.clone(), tri.a_with_number, 1e-12);
    rec.push("algebra-trilinear-adag-sq", SCOPE, params.clone(), tri.a_with_adag_sq, 1e-12);
    rec.push("algebra-trilinear-a-sq", SCOPE, params.clone(), tri.a_with_a_sq, 1e-12);

    let su = alg.su11_residuals();
    rec.push("algebra-su11-k0-kplus", SCOPE, params.clone(), su.k0_kplus, 1e-12);
    rec.push("algebra-su11-k0-kminus", SCOPE, params.clone(), su.k0_kminus, 1e-12);
    rec.push("algebra-su11-kplus-kminus", SCOPE, params.clone(), su.kplus_kminus, 1e-12);

    let mut ladder = 0.0_f64;
    for n in 1..=6 {
        ladder = ladder.max(alg.ladder_power_commutator_residual(n)?);
    }
    rec.push("algebra-ladder-power", SCOPE, params.clone(), ladder, 1e-10);

    // Coherent state is an eigenvector of the annihilator.
    let z = Complex64::new(0.3, 0.2);
    let coh = alg.coherent_state(z, 1e-14)?;
    let mut eig = 0.0_f64;
    let applied = alg.apply_annihilator(&coh);
    for i in 0..alg.retained() {
        eig = eig.max((applied[i] - z * coh[i]).norm());
    }
    rec.push("algebra-coherent-eigenstate", SCOPE, params, eig, 1e-10);
    Ok(())
}

fn polynomial_checks(rec: &mut Recorder, cfg: &SuiteConfig, p: u32) -> Result<()> {
    const SCOPE: &str = "polynomials";
    let p_rat = polynomials::rat(p as i64);
    let nmax = cfg.nmax;
    let params = format!("p={p} nmax={nmax}");

    // Closed sum, three-term recursion, and the derivative-operator
    // construction must agree coefficient by coefficient, in exact
    // arithmetic; deviations count mismatching members.
    let mut herm_bad = 0.0;
    let mut leg_bad = 0.0;
    for n in 0..=nmax {
        let h = polynomials::hermite(n, &p_rat)?;
        if h != polynomials::hermite_by_recursion(n, &p_rat)?
            || h != polynomials::hermite_by_rodrigues(n, &p_rat)?
        {
            herm_bad += 1.0;
        }
        let l = polynomials::legendre(n, &p_rat)?;
        if l != polynomials::legendre_by_recursion(n, &p_rat)?
            || l != polynomials::legendre_by_rodrigues(n, &p_rat)?
        {
            leg_bad += 1.0;
        }
    }
    rec.push("poly-hermite-triple-route", SCOPE, params.clone(), herm_bad, 0.0);
    rec.push("poly-legendre-triple-route", SCOPE, params.clone(), leg_bad, 0.0);

    let gen_bad = polynomials::hermite_generating_mismatches(12, &p_rat)? as f64;
    rec.push("poly-hermite-generating", SCOPE, params.clone(), gen_bad, 0.0);

    let mut herm_ode = 0.0;
    let mut leg_ode = 0.0;
    for n in 0..=nmax {
        if !polynomials::ode_residual(Family::Hermite, n, &p_rat)?.is_zero() {
            herm_ode += 1.0;
        }
        if !polynomials::ode_residual(Family::Legendre, n, &p_rat)?.is_zero() {
            leg_ode += 1.0;
        }
    }
    rec.push("poly-hermite-ode", SCOPE, params.clone(), herm_ode, 0.0);
    rec.push("poly-legendre-ode", SCOPE, params.clone(), leg_ode, 0.0);

    let mut identity_bad = [0.0_f64; 5];
    for n in 1..=nmax {
        let residuals = polynomials::derivative_recursion_residuals(n, &p_rat)?;
        for (slot, res) in identity_bad.iter_mut().zip(residuals.iter()) {
            if !res.is_zero() {
                *slot += 1.0;
            }
        }
    }
    for (id, bad) in polynomials::DERIVATIVE_IDENTITY_IDS.iter().zip(identity_bad) {
        rec.push(&format!("poly-{id}"), SCOPE, params.clone(), bad, 0.0);
    }

    // Hand-written low-order tables in bracket form.
    let table_bad = low_order_table_mismatches(&p_rat)? as f64;
    rec.push("poly-low-order-tables", SCOPE, params.clone(), table_bad, 0.0);

    let mut parity_bad = 0.0;
    for n in 0..=nmax {
        if !polynomials::hermite(n, &p_rat)?.has_parity_of(n)
            || !polynomials::legendre(n, &p_rat)?.has_parity_of(n)
        {
            parity_bad += 1.0;
        }
    }
    rec.push("poly-parity", SCOPE, params.clone(), parity_bad, 0.0);

    if p == 1 {
        // At p = 1 the deformed families collapse to the classical ones.
        let mut classical_bad = 0.0;
        for n in 0..=nmax {
            if polynomials::hermite(n, &p_rat)? != polynomials::classical_hermite(n) {
                classical_bad += 1.0;
            }
            if polynomials::legendre(n, &p_rat)? != polynomials::classical_legendre(n) {
                classical_bad += 1.0;
            }
        }
        rec.push("poly-classical-degeneration", SCOPE, params, classical_bad, 0.0);
    }
    Ok(())
}

/// Mismatch count of the n ≤ 3 closed forms against hand-expanded tables.
fn low_order_table_mismatches(p: &polynomials::Rat) -> Result<usize> {
    use polynomials::{bracket_rat, rat};
    let b = |n: usize| bracket_rat(n, p);
    let expected_h: [ExactPoly; 4] = [
        ExactPoly::new(vec![rat(1)]),
        ExactPoly::new(vec![rat(0), rat(2)]),
        ExactPoly::new(vec![-(rat(2) * b(1)), rat(0), rat(4)]),
        ExactPoly::new(vec![rat(0), -(rat(4) * b(1) + rat(4) * b(2)), rat(0), rat(8)]),
    ];
    let expected_l: [ExactPoly; 4] = [
        ExactPoly::new(vec![rat(1)]),
        ExactPoly::new(vec![rat(0), rat(1)]),
        ExactPoly::new(vec![-b(1) / rat(2), rat(0), b(3) / rat(2)]),
        ExactPoly::new(vec![
            rat(0),
            -((b(1) * b(5) + rat(2) * b(2)) / (rat(2) * b(3))),
            rat(0),
            b(3) * b(5) / (rat(2) * b(3)),
        ]),
    ];
    let mut bad = 0;
    for n in 0..=3 {
        if polynomials::hermite(n, p)? != expected_h[n] {
            bad += 1;
        }
        if polynomials::legendre(n, p)? != expected_l[n] {
            bad += 1;
        }
    }
    Ok(bad)
}

fn squeeze_checks(rec: &mut Recorder, cfg: &SuiteConfig, p: u32) -> Result<()> {
    const SCOPE: &str = "squeeze";
    let alg = ParaAlgebra::new(p, cfg.dim, cfg.guard)?;
    let r = cfg.r;
    let params = format!(
        "p={p} dim={} guard={} r={}",
        cfg.dim,
        cfg.guard,
        fmt_float(r)
    );
    let z = Complex64::new(0.0, -r);

    rec.push(
        "squeeze-two-path",
        SCOPE,
        params.clone(),
        squeeze::two_path_deviation(&alg, z, 1e-10)?,
        cfg.tol,
    );
    rec.push(
        "squeeze-vacuum-element",
        SCOPE,
        params.clone(),
        squeeze::vacuum_element_deviation(&alg, r)?,
        1e-9,
    );

    let op = squeeze::operator(&alg, z, cfg.tol)?;
    rec.push(
        "squeeze-unitarity",
        SCOPE,
        params.clone(),
        linalg::unitarity_defect(&op),
        1e-12,
    );
    rec.push(
        "squeeze-parity-structure",
        SCOPE,
        params.clone(),
        squeeze::parity_mixing(&op),
        0.0,
    );

    let mut state_dev = 0.0_f64;
    for n in 0..=cfg.nmax.min(10) {
        state_dev = state_dev.max(squeeze::closed_numeric_deviation(&alg, n, r, cfg.tol)?);
    }
    rec.push("squeeze-state-agreement", SCOPE, params.clone(), state_dev, cfg.tol);

    rec.push(
        "squeeze-orthonormality",
        SCOPE,
        params.clone(),
        squeeze::orthonormality_defect(p, 6, r, cfg.tol)?,
        cfg.tol,
    );

    let norms = squeeze::excitation_norms(p, cfg.nmax, r, cfg.dim)?;
    let worst_rel = norms.iter().map(|n| n.rel_diff).fold(0.0, f64::max);
    rec.push("squeeze-norms", SCOPE, params.clone(), worst_rel, cfg.tol);

    let first = &norms[1.min(norms.len() - 1)];
    let expected = p as f64 * r.cosh() * r.cosh();
    rec.push(
        "squeeze-first-moment",
        SCOPE,
        params.clone(),
        (first.closed_form - expected).abs() / expected,
        1e-12,
    );

    rec.push(
        "squeeze-norm-recursion",
        SCOPE,
        params.clone(),
        squeeze::norm_recursion_defect(p, cfg.nmax, r)?,
        1e-10,
    );
    rec.push(
        "squeeze-eigenrelation",
        SCOPE,
        params.clone(),
        squeeze::eigenrelation_residual(&alg, r)?,
        1e-12,
    );

    let bogo = squeeze::bogoliubov_residuals(&alg, r)?;
    rec.push(
        "squeeze-bogoliubov",
        SCOPE,
        params,
        bogo.annihilator.max(bogo.creator),
        cfg.tol,
    );
    Ok(())
}

fn amplifier_checks(rec: &mut Recorder, cfg: &SuiteConfig, p: u32) -> Result<()> {
    const SCOPE: &str = "amplifier";
    let alg = ParaAlgebra::new(p, cfg.dim, cfg.guard)?;
    let (omega, k, t0) = (1.0, 0.2, 0.0);
    let params = format!(
        "p={p} dim={} guard={} omega={} k={} ode_tol={}",
        cfg.dim,
        cfg.guard,
        fmt_float(omega),
        fmt_float(k),
        fmt_float(cfg.ode_tol)
    );
    let full = AmplifierConfig::new(omega, k, t0, 1.0, cfg.ode_tol)?;

    let h = amplifier::hamiltonian_schrodinger(&alg, &full, 0.7);
    rec.push(
        "amp-hermiticity",
        SCOPE,
        params.clone(),
        linalg::max_abs(&(&h - &linalg::dagger(&h))),
        0.0,
    );
    rec.push(
        "amp-rotating-frame",
        SCOPE,
        params.clone(),
        amplifier::conjugation_residual(&alg, &full, 0.7),
        1e-10,
    );

    // Pump off: |2⟩ only picks up the free phase.
    let free = AmplifierConfig::new(omega, 0.0, t0, 1.0, cfg.ode_tol)?;
    let psi0 = alg.fock_state(2)?;
    let psi = amplifier::evolve_schrodinger(&alg, &free, &psi0)?;
    let h0 = amplifier::free_hamiltonian_diag(&alg, omega);
    let expected = Complex64::from_polar(1.0, -h0[2]);
    let mut free_dev = (psi[2] - expected).norm();
    for i in (0..alg.dim()).filter(|&i| i != 2) {
        free_dev = free_dev.max(psi[i].norm());
    }
    rec.push("amp-free-phase", SCOPE, params.clone(), free_dev, 1e-8);

    // Norm preservation along the strongest configured pump.
    let coh = alg.coherent_state(Complex64::new(0.3, 0.0), 1e-14)?;
    let evolved = amplifier::evolve_schrodinger(&alg, &full, &coh)?;
    let drift = (evolved.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs();
    rec.push(
        "amp-norm-preservation",
        SCOPE,
        params.clone(),
        drift,
        10.0 * cfg.ode_tol,
    );

    // Closed form against the ODE oracle over the demo grid.
    let labels = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, 0.5),
    ];
    let samples = amplifier::propagator_grid(&alg, omega, k, t0, &[0.5, 1.0], &labels, cfg.ode_tol)?;
    let worst = samples.iter().map(|s| s.abs_diff).fold(0.0, f64::max);
    rec.push("amp-propagator", SCOPE, params.clone(), worst, 1e-6);

    let boundary = AmplifierConfig::new(omega, k, 0.4, 0.4, cfg.ode_tol)?;
    let sample = amplifier::propagator_sample(
        &alg,
        &boundary,
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, 0.5),
    )?;
    rec.push("amp-boundary", SCOPE, params.clone(), sample.abs_diff, 1e-10);

    let eq_cfg = AmplifierConfig::new(omega, k, t0, 0.8, cfg.ode_tol)?;
    rec.push(
        "amp-picture-equivalence",
        SCOPE,
        params.clone(),
        amplifier::picture_equivalence_residual(&alg, &eq_cfg)?,
        1e-6,
    );

    let h_step = 1e-3;
    let fd = amplifier::squeeze_derivative_check(&alg, 0.3, h_step)?;
    rec.push(
        "amp-flow-derivative-residual",
        SCOPE,
        params.clone(),
        fd.residual,
        1.2e4 * h_step * h_step,
    );
    rec.push(
        "amp-flow-derivative-order",
        SCOPE,
        params.clone(),
        (fd.order_ratio - 4.0).abs(),
        0.8,
    );

    let (sample, change) = amplifier::refinement_change(
        &alg,
        &full,
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, 0.5),
    )?;
    rec.push(
        "amp-refinement",
        SCOPE,
        params,
        change / sample.abs_diff.max(1e-9),
        1.0,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes_all_scopes() {
        let cfg = SuiteConfig::default();
        let report = run_suite(&cfg).unwrap();
        let failed = report.failed_ids();
        assert!(report.passed(), "failed checks: {failed:?}");
        // Every scope contributed.
        for scope in ["algebra", "polynomials", "squeeze", "amplifier"] {
            assert!(
                report.checks.iter().any(|c| c.scope == scope),
                "no checks from scope {scope}"
            );
        }
    }

    #[test]
    fn single_scope_runs_only_that_scope() {
        let cfg = SuiteConfig {
            scope: Scope::Polynomials,
            p_list: vec![1, 2],
            ..SuiteConfig::default()
        };
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed(), "failed: {:?}", report.failed_ids());
        assert!(report.checks.iter().all(|c| c.scope == "polynomials"));
        // p=1 adds the classical-degeneration check.
        assert!(report
            .checks
            .iter()
            .any(|c| c.id == "poly-classical-degeneration"));
    }

    #[test]
    fn injected_fault_fails_exactly_one_check() {
        let cfg = SuiteConfig {
            scope: Scope::Algebra,
            inject_fault: Some("algebra-vacuum-order".into()),
            ..SuiteConfig::default()
        };
        let report = run_suite(&cfg).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failed_ids(), vec!["algebra-vacuum-order"]);
    }

    #[test]
    fn serialization_is_deterministic_and_well_formed() {
        let cfg = SuiteConfig {
            scope: Scope::Algebra,
            ..SuiteConfig::default()
        };
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        assert_eq!(a.to_csv(), b.to_csv());
        for line in a.to_json_lines().lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("id").is_some() && v.get("status").is_some());
        }
        let csv = a.to_csv();
        let cols = csv.lines().next().unwrap().split(',').count();
        for line in csv.lines().skip(1) {
            assert_eq!(line.split(',').count(), cols, "ragged CSV row: {line}");
        }
    }

    #[test]
    fn float_formatting_has_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        let x = 1.2345678901234567e-10;
        let round_trip: f64 = fmt_float(x).parse().unwrap();
        assert_eq!(x, round_trip);
    }
}
