//! Degenerate parametric amplifier for the order-`p` parabose oscillator.
//!
//! With a constant pump of strength `k` at twice the oscillator frequency,
//! the Schrödinger-picture Hamiltonian is
//!
//! ```text
//! H_S(t) = (ω/2){a†, a} + k (a² e^{2iωt} + a†² e^{−2iωt}),
//! ```
//!
//! whose free part `H₀ = (ω/2){a†, a}` is diagonal with entries
//! `ω([n] + [n+1])/2 = ω(2n + p)/2`. Rotating the explicit pump phases away
//! with `H₀` leaves the time-independent interaction `k(a² + a†²)`, so the
//! flow is a free rotation times a squeeze with accumulated parameter
//! `r(t) = 2k(t − t₀)`. That structure gives a closed-form coherent-state
//! transition amplitude, which this module evaluates and cross-validates
//! against a direct numerical integration of `i dψ/dt = H_S(t) ψ` — the two
//! routes share nothing beyond the bracket, so their agreement is an
//! end-to-end test of both.
//!
//! The closed-form amplitude is treated as the hypothesis and the ODE
//! solution as ground truth: any discrepancy is reported, never absorbed
//! into a convention.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{bracket_f64, deformed_exp, ParaAlgebra};
use crate::error::{Error, Result};
use crate::linalg;
use crate::ode::{self, OdeOptions};
use crate::squeeze;

/// Pump and schedule parameters for one evolution interval.
///
/// The truncation parameters live in the [`ParaAlgebra`] passed alongside;
/// keeping them in one place avoids two copies that could disagree.
#[derive(Debug, Clone, Copy)]
pub struct AmplifierConfig {
    /// Oscillator frequency (the pump runs at `2ω`).
    pub omega: f64,
    /// Constant pump strength.
    pub k: f64,
    /// Start of the evolution interval.
    pub t0: f64,
    /// End of the evolution interval (`t ≥ t0`).
    pub t: f64,
    /// Local error tolerance for the adaptive integrator.
    pub ode_tol: f64,
}

impl AmplifierConfig {
    pub fn new(omega: f64, k: f64, t0: f64, t: f64, ode_tol: f64) -> Result<Self> {
        for (name, v) in [("omega", omega), ("k", k), ("t0", t0), ("t", t)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("amplifier config field {name}")));
            }
        }
        if t < t0 {
            return Err(Error::InvalidParameter(format!(
                "amplifier evolves forward in time, got t = {t} < t0 = {t0}"
            )));
        }
        if !(ode_tol.is_finite() && ode_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ode_tol must be positive and finite, got {ode_tol:e}"
            )));
        }
        Ok(Self {
            omega,
            k,
            t0,
            t,
            ode_tol,
        })
    }

    /// Squeeze parameter accumulated by the constant pump over the interval:
    /// `r = 2k(t − t0)`.
    pub fn squeeze_parameter(&self) -> f64 {
        2.0 * self.k * (self.t - self.t0)
    }
}

/// Diagonal of the free Hamiltonian: `ω([n] + [n+1])/2`.
pub fn free_hamiltonian_diag(alg: &ParaAlgebra, omega: f64) -> Array1<f64> {
    Array1::from_iter(
        (0..alg.dim()).map(|n| 0.5 * omega * (bracket_f64(n, alg.p()) + bracket_f64(n + 1, alg.p()))),
    )
}

/// Off-diagonal pump couplings `√([n+1][n+2])` shared by `a²` and `a†²`.
fn pump_couplings(alg: &ParaAlgebra) -> Vec<f64> {
    (0..alg.dim().saturating_sub(2))
        .map(|n| (bracket_f64(n + 1, alg.p()) * bracket_f64(n + 2, alg.p())).sqrt())
        .collect()
}

/// Full Schrödinger-picture Hamiltonian `H_S(tcur)`. Hermitian by
/// construction: the `a²` and `a†²` entries are placed as exact conjugates.
pub fn hamiltonian_schrodinger(
    alg: &ParaAlgebra,
    cfg: &AmplifierConfig,
    tcur: f64,
) -> Array2<Complex64> {
    let dim = alg.dim();
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    let h0 = free_hamiltonian_diag(alg, cfg.omega);
    for n in 0..dim {
        h[[n, n]] = Complex64::new(h0[n], 0.0);
    }
    let phase = Complex64::from_polar(cfg.k, 2.0 * cfg.omega * tcur);
    for (n, w) in pump_couplings(alg).iter().enumerate() {
        h[[n, n + 2]] = phase * w;
        h[[n + 2, n]] = phase.conj() * w;
    }
    h
}

/// Time-independent interaction `k (a² + a†²)` — what the pump term becomes
/// once the free rotation is removed.
pub fn hamiltonian_interaction(alg: &ParaAlgebra, k: f64) -> Array2<Complex64> {
    let dim = alg.dim();
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    for (n, w) in pump_couplings(alg).iter().enumerate() {
        h[[n, n + 2]] = Complex64::new(k * w, 0.0);
        h[[n + 2, n]] = Complex64::new(k * w, 0.0);
    }
    h
}

/// Deviation, on the retained block, between `H_S(tcur)` and
/// `e^{−iH₀ tcur} (H₀ + k(a² + a†²)) e^{iH₀ tcur}`.
///
/// The conjugation is evaluated entrywise as phases
/// `e^{−i(h₀[i]−h₀[j]) tcur}`, so the identity holds at machine precision
/// even on the truncated space — the two sides differ only by rounding in
/// the phase arithmetic.
pub fn conjugation_residual(alg: &ParaAlgebra, cfg: &AmplifierConfig, tcur: f64) -> f64 {
    let h0 = free_hamiltonian_diag(alg, cfg.omega);
    let mut rotated = hamiltonian_interaction(alg, cfg.k);
    let dim = alg.dim();
    for i in 0..dim {
        rotated[[i, i]] += Complex64::new(h0[i], 0.0);
    }
    for i in 0..dim {
        for j in 0..dim {
            if rotated[[i, j]] != Complex64::new(0.0, 0.0) {
                rotated[[i, j]] *= Complex64::from_polar(1.0, -(h0[i] - h0[j]) * tcur);
            }
        }
    }
    let diff = &hamiltonian_schrodinger(alg, cfg, tcur) - &rotated;
    let keep = alg.retained();
    linalg::max_abs_leading(&diff, keep, keep)
}

/// Reject configurations whose accumulated squeeze would push the squeezed
/// vacuum's population at the guard-band boundary above `1e−12` — beyond
/// that, truncation error contaminates every comparison this module makes.
/// The estimate uses the asymptotic per-level decay `tanh r` of the squeezed
/// vacuum beyond its spread `cosh 2r`.
fn leakage_precheck(alg: &ParaAlgebra, r: f64) -> Result<()> {
    let th = r.abs().tanh();
    if th == 0.0 {
        return Ok(());
    }
    let boundary = alg.retained() as f64;
    let spread = (2.0 * r.abs()).cosh();
    let ln_pop = (boundary - spread) * th.ln();
    if ln_pop > 1e-12_f64.ln() {
        return Err(Error::TruncationInadequate {
            required: squeeze::recommended_dim(0, r, 1e-12) + alg.guard(),
            detail: format!(
                "accumulated squeeze r = {r:.3} would populate the guard band \
                 (estimated population {:.1e} at level {boundary})",
                ln_pop.exp()
            ),
        });
    }
    Ok(())
}

/// Integrate `i dψ/dt = H_S(t) ψ` from `cfg.t0` to `cfg.t`.
///
/// The right-hand side is applied matrix-free in O(dim) per evaluation.
/// After integration the result must still look like unitary evolution:
/// the norm may drift by at most `10·ode_tol`, and the population that
/// reached the guard band must stay below `1e−9`; both violations are
/// errors, because a state that fails them is not worth returning.
pub fn evolve_schrodinger(
    alg: &ParaAlgebra,
    cfg: &AmplifierConfig,
    initial: &Array1<Complex64>,
) -> Result<Array1<Complex64>> {
    if initial.len() != alg.dim() {
        return Err(Error::InvalidDimensions {
            dim: alg.dim(),
            guard: alg.guard(),
            detail: format!("initial state has length {}", initial.len()),
        });
    }
    leakage_precheck(alg, cfg.squeeze_parameter())?;

    let dim = alg.dim();
    let h0 = free_hamiltonian_diag(alg, cfg.omega);
    let w = pump_couplings(alg);
    let (omega, k) = (cfg.omega, cfg.k);
    let minus_i = Complex64::new(0.0, -1.0);

    let rhs = move |t: f64, y: &Array1<Complex64>, dy: &mut Array1<Complex64>| {
        let pump = Complex64::from_polar(k, 2.0 * omega * t);
        for i in 0..dim {
            let mut acc = Complex64::new(h0[i], 0.0) * y[i];
            if i + 2 < dim {
                acc += pump * w[i] * y[i + 2];
            }
            if i >= 2 {
                acc += pump.conj() * w[i - 2] * y[i - 2];
            }
            dy[i] = minus_i * acc;
        }
    };

    let norm0: f64 = initial.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let opts = OdeOptions::with_tol(cfg.ode_tol);
    let final_state = ode::integrate(rhs, cfg.t0, cfg.t, initial.clone(), &opts)?;

    let norm1: f64 = final_state.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let drift = (norm1 - norm0).abs();
    if drift > 10.0 * cfg.ode_tol {
        return Err(Error::AccuracyLoss {
            what: "norm drift of the unitary flow".into(),
            measured: drift,
            budget: 10.0 * cfg.ode_tol,
        });
    }
    let leak: f64 = (alg.retained()..dim).map(|i| final_state[i].norm_sqr()).sum();
    if leak > 1e-9 {
        return Err(Error::TruncationInadequate {
            required: squeeze::recommended_dim(0, cfg.squeeze_parameter(), 1e-12) + alg.guard(),
            detail: format!("evolved state carries population {leak:.3e} in the guard band"),
        });
    }
    Ok(final_state)
}

/// Closed-form coherent-state transition amplitude `⟨z| U(t, t0) |z0⟩` for
/// the constant pump, with `r = 2k(t − t0)` and `E` the deformed
/// exponential series:
///
/// ```text
/// e^{−ipω(t−t0)/2} · E(|z|²)^{−1/2} E(|z0|²)^{−1/2} · (sech r)^{p/2}
///   · E(z̄ z0 e^{−iω(t−t0)} sech r)
///   · exp(−(i/2) tanh r · (z0² e^{2iωt0} + z̄² e^{−2iωt}))
/// ```
pub fn propagator_analytic(
    p: u32,
    cfg: &AmplifierConfig,
    z: Complex64,
    z0: Complex64,
) -> Result<Complex64> {
    if !(z.is_finite() && z0.is_finite()) {
        return Err(Error::NonFinite("coherent labels z, z0".into()));
    }
    let dt = cfg.t - cfg.t0;
    let r = cfg.squeeze_parameter();
    let sech = 1.0 / r.cosh();
    let th = r.tanh();
    let series_tol = 1e-16;

    let norm_z = deformed_exp(Complex64::new(z.norm_sqr(), 0.0), p, series_tol)?
        .re
        .powf(-0.5);
    let norm_z0 = deformed_exp(Complex64::new(z0.norm_sqr(), 0.0), p, series_tol)?
        .re
        .powf(-0.5);
    let free_phase = Complex64::from_polar(1.0, -(p as f64) * cfg.omega * dt / 2.0);
    let cross = deformed_exp(
        z.conj() * z0 * Complex64::from_polar(sech, -cfg.omega * dt),
        p,
        series_tol,
    )?;
    let quad = z0 * z0 * Complex64::from_polar(1.0, 2.0 * cfg.omega * cfg.t0)
        + z.conj() * z.conj() * Complex64::from_polar(1.0, -2.0 * cfg.omega * cfg.t);
    let gaussian = (Complex64::new(0.0, -0.5) * th * quad).exp();

    Ok(free_phase * norm_z * norm_z0 * sech.powf(p as f64 / 2.0) * cross * gaussian)
}

/// The same amplitude from the numerical side: build `|z0⟩`, integrate it
/// under `H_S(t)`, and project onto `|z⟩`. Serves as the oracle for
/// [`propagator_analytic`].
pub fn propagator_numeric(
    alg: &ParaAlgebra,
    cfg: &AmplifierConfig,
    z: Complex64,
    z0: Complex64,
) -> Result<Complex64> {
    let ket = alg.coherent_state(z0, 1e-14)?;
    let bra = alg.coherent_state(z, 1e-14)?;
    let evolved = evolve_schrodinger(alg, cfg, &ket)?;
    Ok(bra
        .iter()
        .zip(evolved.iter())
        .map(|(b, v)| b.conj() * v)
        .sum())
}

/// One cross-validated sample of the transition amplitude.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PropagatorSample {
    pub p: u32,
    pub omega: f64,
    pub k: f64,
    pub t0: f64,
    pub t: f64,
    pub re_z: f64,
    pub im_z: f64,
    pub re_z0: f64,
    pub im_z0: f64,
    pub re_analytic: f64,
    pub im_analytic: f64,
    pub re_numeric: f64,
    pub im_numeric: f64,
    pub abs_diff: f64,
}

impl PropagatorSample {
    pub const CSV_HEADER: &'static str = "p,omega,k,t0,t,re_z,im_z,re_z0,im_z0,\
                                          re_analytic,im_analytic,re_numeric,im_numeric,abs_diff";

    fn fields(&self) -> [f64; 13] {
        [
            self.omega,
            self.k,
            self.t0,
            self.t,
            self.re_z,
            self.im_z,
            self.re_z0,
            self.im_z0,
            self.re_analytic,
            self.im_analytic,
            self.re_numeric,
            self.im_numeric,
            self.abs_diff,
        ]
    }

    /// One JSON object, floats as 17-significant-digit decimal strings.
    pub fn json_line(&self) -> String {
        let names = [
            "omega",
            "k",
            "t0",
            "t",
            "re_z",
            "im_z",
            "re_z0",
            "im_z0",
            "re_analytic",
            "im_analytic",
            "re_numeric",
            "im_numeric",
            "abs_diff",
        ];
        let mut out = format!("{{\"p\":{}", self.p);
        for (name, value) in names.iter().zip(self.fields()) {
            out.push_str(&format!(
                ",\"{name}\":\"{}\"",
                crate::report::fmt_float(value)
            ));
        }
        out.push('}');
        out
    }

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let mut out = self.p.to_string();
        for value in self.fields() {
            out.push(',');
            out.push_str(&crate::report::fmt_float(value));
        }
        out
    }
}

/// Evaluate both routes for one `(z, z0)` pair.
pub fn propagator_sample(
    alg: &ParaAlgebra,
    cfg: &AmplifierConfig,
    z: Complex64,
    z0: Complex64,
) -> Result<PropagatorSample> {
    let analytic = propagator_analytic(alg.p(), cfg, z, z0)?;
    let numeric = propagator_numeric(alg, cfg, z, z0)?;
    Ok(PropagatorSample {
        p: alg.p(),
        omega: cfg.omega,
        k: cfg.k,
        t0: cfg.t0,
        t: cfg.t,
        re_z: z.re,
        im_z: z.im,
        re_z0: z0.re,
        im_z0: z0.im,
        re_analytic: analytic.re,
        im_analytic: analytic.im,
        re_numeric: numeric.re,
        im_numeric: numeric.im,
        abs_diff: (analytic - numeric).norm(),
    })
}

/// Cross-validate the two routes over a grid of times and coherent labels.
///
/// Each starting label `z0` is integrated once through the ascending time
/// grid (the evolution is resumed segment by segment rather than restarted),
/// then projected onto every `z`. Times must be `≥ t0` and ascending.
pub fn propagator_grid(
    alg: &ParaAlgebra,
    omega: f64,
    k: f64,
    t0: f64,
    times: &[f64],
    labels: &[Complex64],
    ode_tol: f64,
) -> Result<Vec<PropagatorSample>> {
    if times.is_empty() || labels.is_empty() {
        return Err(Error::InvalidParameter(
            "propagator grid needs at least one time and one label".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times[0] < t0 {
        return Err(Error::InvalidParameter(
            "propagator grid times must be ascending and start at or after t0".into(),
        ));
    }
    // The *accumulated* squeeze at the last time decides truncation safety.
    let full = AmplifierConfig::new(omega, k, t0, *times.last().unwrap(), ode_tol)?;
    leakage_precheck(alg, full.squeeze_parameter())?;

    let bras: Vec<Array1<Complex64>> = labels
        .iter()
        .map(|&z| alg.coherent_state(z, 1e-14))
        .collect::<Result<_>>()?;

    let mut samples = Vec::with_capacity(times.len() * labels.len() * labels.len());
    for (&z0, _) in labels.iter().zip(bras.iter()) {
        let mut state = alg.coherent_state(z0, 1e-14)?;
        let mut t_prev = t0;
        for &t in times {
            let seg = AmplifierConfig::new(omega, k, t_prev, t, ode_tol)?;
            state = evolve_schrodinger(alg, &seg, &state)?;
            t_prev = t;
            let cfg = AmplifierConfig::new(omega, k, t0, t, ode_tol)?;
            for (&z, bra) in labels.iter().zip(bras.iter()) {
                let numeric: Complex64 = bra
                    .iter()
                    .zip(state.iter())
                    .map(|(b, v)| b.conj() * v)
                    .sum();
                let analytic = propagator_analytic(alg.p(), &cfg, z, z0)?;
                samples.push(PropagatorSample {
                    p: alg.p(),
                    omega,
                    k,
                    t0,
                    t,
                    re_z: z.re,
                    im_z: z.im,
                    re_z0: z0.re,
                    im_z0: z0.im,
                    re_analytic: analytic.re,
                    im_analytic: analytic.im,
                    re_numeric: numeric.re,
                    im_numeric: numeric.im,
                    abs_diff: (analytic - numeric).norm(),
                });
            }
        }
    }
    Ok(samples)
}

/// Refinement check for one sample: recompute the numeric route with the
/// tolerance halved and the space doubled, and report how much it moves.
/// A trustworthy sample moves by less than its own `abs_diff`.
pub fn refinement_change(
    alg: &ParaAlgebra,
    cfg: &AmplifierConfig,
    z: Complex64,
    z0: Complex64,
) -> Result<(PropagatorSample, f64)> {
    let sample = propagator_sample(alg, cfg, z, z0)?;
    let finer_alg = ParaAlgebra::new(alg.p(), alg.dim() * 2, alg.guard())?;
    let finer_cfg = AmplifierConfig::new(cfg.omega, cfg.k, cfg.t0, cfg.t, cfg.ode_tol / 2.0)?;
    let refined = propagator_numeric(&finer_alg, &finer_cfg, z, z0)?;
    let numeric = Complex64::new(sample.re_numeric, sample.im_numeric);
    Ok((sample, (refined - numeric).norm()))
}

/// Deviation, on the retained block, between the numerically integrated
/// time-displacement operator `U(t, t0)` and its factored form
/// `e^{−iH₀t} · S(−ir) · e^{iH₀t0}` with `r = 2k(t − t0)`.
///
/// The squeeze factor is the exponential of the *same* truncated generator,
/// so the identity holds at matched truncation up to integrator error; the
/// matrix ODE is integrated column by column in one flattened system.
pub fn picture_equivalence_residual(alg: &ParaAlgebra, cfg: &AmplifierConfig) -> Result<f64> {
    let dim = alg.dim();
    let h0 = free_hamiltonian_diag(alg, cfg.omega);
    let w = pump_couplings(alg);
    let (omega, k) = (cfg.omega, cfg.k);
    let minus_i = Complex64::new(0.0, -1.0);

    // Column-major flattening: column j occupies [j·dim, (j+1)·dim).
    let mut u0 = Array1::<Complex64>::zeros(dim * dim);
    for j in 0..dim {
        u0[j * dim + j] = Complex64::new(1.0, 0.0);
    }
    let h0_rhs = h0.clone();
    let rhs = move |t: f64, y: &Array1<Complex64>, dy: &mut Array1<Complex64>| {
        let pump = Complex64::from_polar(k, 2.0 * omega * t);
        for j in 0..dim {
            let base = j * dim;
            for i in 0..dim {
                let mut acc = Complex64::new(h0_rhs[i], 0.0) * y[base + i];
                if i + 2 < dim {
                    acc += pump * w[i] * y[base + i + 2];
                }
                if i >= 2 {
                    acc += pump.conj() * w[i - 2] * y[base + i - 2];
                }
                dy[base + i] = minus_i * acc;
            }
        }
    };
    let opts = OdeOptions::with_tol(cfg.ode_tol);
    let uf = ode::integrate(rhs, cfg.t0, cfg.t, u0, &opts)?;

    let r = cfg.squeeze_parameter();
    let mut factored = linalg::expm_parity(&squeeze::generator(
        alg.p(),
        dim,
        Complex64::new(0.0, -r),
    ))?;
    for i in 0..dim {
        let row_phase = Complex64::from_polar(1.0, -h0[i] * cfg.t);
        for j in 0..dim {
            let col_phase = Complex64::from_polar(1.0, h0[j] * cfg.t0);
            factored[[i, j]] *= row_phase * col_phase;
        }
    }

    let keep = alg.retained();
    let mut dev = 0.0_f64;
    for j in 0..keep {
        for i in 0..keep {
            dev = dev.max((uf[j * dim + i] - factored[[i, j]]).norm());
        }
    }
    Ok(dev)
}

/// Finite-difference check that the squeeze family solves its own flow
/// equation: `dS(−ir)/dr = −(i/2)(a² + a†²) · S(−ir)`.
#[derive(Debug, Clone, Copy)]
pub struct DerivativeCheck {
    /// Step used for the central difference.
    pub h: f64,
    /// Residual at step `h`.
    pub residual: f64,
    /// Residual at step `h/2`.
    pub residual_half: f64,
    /// `residual / residual_half`; a second-order difference gives ≈ 4.
    pub order_ratio: f64,
}

pub fn squeeze_derivative_check(alg: &ParaAlgebra, r: f64, h: f64) -> Result<DerivativeCheck> {
    if !(h.is_finite() && h > 0.0 && h < r.abs().max(1.0)) {
        return Err(Error::InvalidParameter(format!(
            "central difference step must be small and positive, got h = {h:e}"
        )));
    }
    let dim = alg.dim();
    let p = alg.p();
    let s_at = |rr: f64| -> Result<Array2<Complex64>> {
        linalg::expm_parity(&squeeze::generator(p, dim, Complex64::new(0.0, -rr)))
    };
    // The generator of the family: z = −i gives (z a² − z̄ a†²)/2 = −(i/2)(a² + a†²).
    let gen = squeeze::generator(p, dim, Complex64::new(0.0, -1.0));
    let s_mid = s_at(r)?;
    let exact = gen.dot(&s_mid);
    let keep = alg.retained();

    let residual_at = |hh: f64| -> Result<f64> {
        let plus = s_at(r + hh)?;
        let minus = s_at(r - hh)?;
        let fd = (&plus - &minus).mapv(|x| x / (2.0 * hh));
        Ok(linalg::max_abs_leading(&(&fd - &exact), keep, keep))
    };
    let residual = residual_at(h)?;
    let residual_half = residual_at(h / 2.0)?;
    Ok(DerivativeCheck {
        h,
        residual,
        residual_half,
        order_ratio: residual / residual_half.max(f64::MIN_POSITIVE),
    })
}
