//! Adaptive Dormand–Prince 5(4) integration for complex state vectors.
//!
//! This is the classic explicit embedded pair behind `ode45`/`dopri5`: seven
//! stages, fifth-order propagation with a fourth-order error estimate, and
//! the first-same-as-last property so each accepted step costs six fresh
//! right-hand-side evaluations. States are `Array1<Complex64>`; a matrix
//! equation is integrated by flattening it.
//!
//! The right-hand side writes its result into a caller-provided buffer, so
//! the hot loop performs no allocation beyond the fixed stage storage.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes `c₂..c₆` of the Dormand–Prince tableau (c₁ = 0, c₇ = 1).
const C: [f64; 5] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];

/// Stage coupling coefficients `a_ij` (row i uses stages 1..i).
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];

/// Fifth-order solution weights (also row 7 of the tableau — FSAL).
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];

/// Error weights `b⁵ − b⁴` applied to the seven stages.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integration controls.
#[derive(Debug, Clone)]
pub struct OdeOptions {
    /// Relative tolerance per component.
    pub rtol: f64,
    /// Absolute tolerance per component.
    pub atol: f64,
    /// Initial step; `None` picks `(t1 − t0)/100`.
    pub h_initial: Option<f64>,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
}

impl OdeOptions {
    /// Both tolerances set to `tol`, defaults elsewhere.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            h_initial: None,
            max_steps: 10_000_000,
        }
    }
}

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t1 ≥ t0`.
///
/// `rhs(t, y, out)` must fill `out` completely. Returns the state at `t1`.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: Array1<Complex64>,
    opts: &OdeOptions,
) -> Result<Array1<Complex64>>
where
    F: FnMut(f64, &Array1<Complex64>, &mut Array1<Complex64>),
{
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::NonFinite("integration endpoints".into()));
    }
    if t1 < t0 {
        return Err(Error::InvalidParameter(format!(
            "integration runs forward only: t0 = {t0}, t1 = {t1}"
        )));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidParameter(
            "ode tolerances must be positive".into(),
        ));
    }
    if t1 == t0 {
        return Ok(y0);
    }

    let n = y0.len();
    let mut y = y0;
    let mut t = t0;
    let mut h = opts.h_initial.unwrap_or((t1 - t0) / 100.0).min(t1 - t0);

    // Stage storage; k[0] doubles as the FSAL carry-over.
    let mut k: Vec<Array1<Complex64>> = (0..7).map(|_| Array1::zeros(n)).collect();
    let mut y_stage = Array1::<Complex64>::zeros(n);
    let mut y_next = Array1::<Complex64>::zeros(n);
    let mut k0_fresh = false;

    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(y);
        }
        h = h.min(t1 - t);
        if h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }

        if !k0_fresh {
            let (k0, rest) = k.split_at_mut(1);
            let _ = rest;
            rhs(t, &y, &mut k0[0]);
            k0_fresh = true;
        }

        // Stages 2..6.
        let a_rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
        for (stage, a_row) in a_rows.iter().enumerate() {
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &aij) in a_row.iter().enumerate() {
                    if aij != 0.0 {
                        acc += k[j][i] * aij;
                    }
                }
                y_stage[i] = y[i] + acc * h;
            }
            let (done, cur) = k.split_at_mut(stage + 1);
            let _ = done;
            rhs(t + C[stage] * h, &y_stage, &mut cur[0]);
        }

        // Fifth-order advance, which is also the seventh stage point.
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &bj) in B5.iter().enumerate() {
                if bj != 0.0 {
                    acc += k[j][i] * bj;
                }
            }
            y_next[i] = y[i] + acc * h;
        }
        {
            let (done, last) = k.split_at_mut(6);
            let _ = done;
            rhs(t + h, &y_next, &mut last[0]);
        }

        // Error estimate against the embedded fourth-order solution.
        let mut err_ratio: f64 = 0.0;
        for i in 0..n {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, &ej) in E.iter().enumerate() {
                if ej != 0.0 {
                    e += k[j][i] * ej;
                }
            }
            let scale = opts.atol + opts.rtol * y[i].norm().max(y_next[i].norm());
            err_ratio = err_ratio.max((e * h).norm() / scale);
        }
        if !err_ratio.is_finite() {
            return Err(Error::NonFinite(format!(
                "ode error estimate at t = {t:.6e}"
            )));
        }

        if err_ratio <= 1.0 {
            // Accept; the last stage is the next step's first (FSAL).
            t += h;
            std::mem::swap(&mut y, &mut y_next);
            k.swap(0, 6);
            let grow = 0.9 * err_ratio.max(1e-10).powf(-0.2);
            h *= grow.clamp(0.2, 5.0);
        } else {
            let shrink = 0.9 * err_ratio.powf(-0.2);
            h *= shrink.clamp(0.2, 0.9);
            // k[0] still holds rhs(t, y); reuse it on the retry.
        }
    }
    Err(Error::InvalidParameter(format!(
        "ode integration exceeded {} steps",
        opts.max_steps
    )))
}
