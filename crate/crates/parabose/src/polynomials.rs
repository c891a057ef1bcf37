//! Deformed Hermite and Legendre polynomials in exact rational arithmetic.
//!
//! The deformation replaces the ordinary derivative with
//!
//! ```text
//! (D f)(x) = f′(x) + (p − 1)/(2x) · (f(x) − f(−x)),
//! ```
//!
//! which acts on monomials as `D xⁿ = [n] x^{n−1}` with the same bracket
//! `[n]` as the ladder algebra — so on polynomials `D` is a coefficient
//! reweighting and everything here stays in `BigRational`, no floating point
//! until a caller explicitly evaluates.
//!
//! Each family is constructed three independent ways — explicit closed sum,
//! three-term recursion, and a Rodrigues-type formula — precisely so the
//! routes can be compared coefficient-by-coefficient. The deformed order `p`
//! may be any positive rational here, not just an integer; the integer case
//! is what the operator modules consume.

use num::{BigInt, BigRational};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exact rational scalar used throughout this module.
pub type Rat = BigRational;

/// `Rat` from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse a positive rational from `"7"`, `"-3/4"`, etc., rejecting
/// non-positive values (the deformation parameter must be > 0).
pub fn parse_positive_rational(s: &str) -> Result<Rat> {
    let value = Rat::from_str(s.trim()).map_err(|e| {
        Error::InvalidParameter(format!("cannot parse rational from {s:?}: {e}"))
    })?;
    if value <= Rat::zero() {
        return Err(Error::InvalidParameter(format!(
            "deformation order must be positive, got {value}"
        )));
    }
    Ok(value)
}

/// Deformed integer `[n]` over a rational order: `n` for even `n`,
/// `n + p − 1` for odd `n`.
pub fn bracket_rat(n: usize, p: &Rat) -> Rat {
    let base = rat(n as i64);
    if n.is_multiple_of(2) {
        base
    } else {
        base + p - Rat::one()
    }
}

/// Deformed factorial `[n]!` over a rational order.
pub fn bracket_factorial_rat(n: usize, p: &Rat) -> Rat {
    let mut acc = Rat::one();
    for k in 1..=n {
        acc *= bracket_rat(k, p);
    }
    acc
}

/// Ordinary factorial as a rational.
fn factorial_rat(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// Binomial coefficient as a rational.
fn binomial_rat(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    Rat::from_integer(acc) / factorial_rat(k)
}

// ---------------------------------------------------------------------------
// Exact polynomials
// ---------------------------------------------------------------------------

/// Dense polynomial with exact rational coefficients, `coeffs[k] · x^k`.
/// Trailing zero coefficients are always stripped, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPoly {
    coeffs: Vec<Rat>,
}

impl ExactPoly {
    /// Build from ascending-power coefficients, normalizing trailing zeros.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![Rat::one()])
    }

    /// `c · x^k`.
    pub fn monomial(k: usize, c: Rat) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Ascending-power coefficient slice (no trailing zeros).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// The deformed derivative `D`: on coefficients,
    /// `(D f)_k = [k+1] f_{k+1}`.
    pub fn deformed_derivative(&self, p: &Rat) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = (1..self.coeffs.len())
            .map(|k| bracket_rat(k, p) * &self.coeffs[k])
            .collect();
        Self::new(out)
    }

    /// True when every nonzero coefficient sits at an index of the same
    /// parity as `n` — both deformed families alternate strictly.
    pub fn has_parity_of(&self, n: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| c.is_zero() || k % 2 == n % 2)
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Floating-point evaluation at a complex point (Horner). Coefficients
    /// are converted individually, so precision is the usual 1-ulp per
    /// coefficient, not compounded.
    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            acc = acc * x + Complex64::new(cf, 0.0);
        }
        acc
    }

    /// Coefficients rendered as exact strings (`"-4"`, `"7/2"`), ascending
    /// powers, zeros included; the zero polynomial renders as `["0"]`.
    pub fn coeff_strings(&self) -> Vec<String> {
        if self.coeffs.is_empty() {
            return vec!["0".to_string()];
        }
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}·")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        ExactPoly::new(coeffs)
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        ExactPoly::new(coeffs)
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        if self.is_zero() || rhs.is_zero() {
            return ExactPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ExactPoly::new(coeffs)
    }
}

// ---------------------------------------------------------------------------
// Formal power series (for the Rodrigues-type Hermite construction)
// ---------------------------------------------------------------------------

/// Truncated formal power series with exact rational coefficients: all
/// coefficients through `x^order` are stored and exact; everything above is
/// deliberately unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<Rat>, // length order + 1
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    /// Highest exactly-known power.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `e^{−x²}` through the given order: coefficient of `x^{2k}` is
    /// `(−1)^k / k!`.
    pub fn exp_neg_x_squared(order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut k = 0;
        while 2 * k <= order {
            let mut c = factorial_rat(k).recip();
            if k % 2 == 1 {
                c = -c;
            }
            s.coeffs[2 * k] = c;
            k += 1;
        }
        s
    }

    /// `e^{x²}` through the given order.
    pub fn exp_x_squared(order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut k = 0;
        while 2 * k <= order {
            s.coeffs[2 * k] = factorial_rat(k).recip();
            k += 1;
        }
        s
    }

    /// Product, truncated to the smaller order. Coefficients up to that
    /// order only involve factor coefficients up to it, so they stay exact.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = Self::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &rhs.coeffs[j];
                out.coeffs[i + j] += prod;
            }
        }
        out
    }

    /// Deformed derivative; the top coefficient's image is no longer known,
    /// so the order drops by one.
    pub fn deformed_derivative(&self, p: &Rat) -> Self {
        let order = self.order().saturating_sub(1);
        let mut out = Self::zero(order);
        for k in 0..=order {
            out.coeffs[k] = bracket_rat(k + 1, p) * &self.coeffs[k + 1];
        }
        out
    }

    /// Extract the polynomial part of degree ≤ `deg`, verifying that every
    /// retained coefficient above `deg` is exactly zero. `None` means the
    /// series does not actually terminate within the known window.
    pub fn polynomial_part(&self, deg: usize) -> Option<ExactPoly> {
        if self.coeffs.iter().skip(deg + 1).any(|c| !c.is_zero()) {
            return None;
        }
        Some(ExactPoly::new(
            self.coeffs.iter().take(deg + 1).cloned().collect(),
        ))
    }
}

// ---------------------------------------------------------------------------
// The two deformed families, three constructions each
// ---------------------------------------------------------------------------

fn validate_order(p: &Rat) -> Result<()> {
    if *p <= Rat::zero() {
        return Err(Error::InvalidParameter(format!(
            "deformation order must be positive, got {p}"
        )));
    }
    Ok(())
}

/// Deformed Hermite polynomial by its explicit closed sum:
/// `H_n = [n]! Σ_k (−1)^k (2x)^{n−2k} / (k! [n−2k]!)`.
pub fn hermite(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let nfact = bracket_factorial_rat(n, p);
    let mut coeffs = vec![Rat::zero(); n + 1];
    for k in 0..=(n / 2) {
        let m = n - 2 * k; // power of x
        let mut c = &nfact * rat(2).pow(m as i32);
        c /= factorial_rat(k) * bracket_factorial_rat(m, p);
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[m] = c;
    }
    Ok(ExactPoly::new(coeffs))
}

/// Deformed Legendre polynomial by its explicit closed sum:
/// `P_n = Σ_k (−1)^k [2n−2k]! x^{n−2k} / (2ⁿ k! (n−k)! [n−2k]!)`.
pub fn legendre(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let two_pow_n = rat(2).pow(n as i32);
    let mut coeffs = vec![Rat::zero(); n + 1];
    for k in 0..=(n / 2) {
        let m = n - 2 * k;
        let mut c = bracket_factorial_rat(2 * n - 2 * k, p);
        c /= &two_pow_n * factorial_rat(k) * factorial_rat(n - k) * bracket_factorial_rat(m, p);
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[m] = c;
    }
    Ok(ExactPoly::new(coeffs))
}

/// Deformed Hermite by the three-term recursion
/// `H_{n+1} = 2x·H_n − 2[n]·H_{n−1}`, `H_0 = 1`, `H_1 = 2x`.
pub fn hermite_by_recursion(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let two_x = ExactPoly::monomial(1, rat(2));
    let mut prev = ExactPoly::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = two_x.clone();
    for m in 1..n {
        let next = &(&two_x * &cur) - &prev.scale(&(rat(2) * bracket_rat(m, p)));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Deformed Legendre by the three-term recursion
/// `[n+1]·P_{n+1} = [2n+1]·x·P_n − [n]·P_{n−1}`, `P_0 = 1`, `P_1 = x`.
pub fn legendre_by_recursion(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let x = ExactPoly::monomial(1, Rat::one());
    let mut prev = ExactPoly::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = x.clone();
    for m in 1..n {
        let lead = (&x * &cur).scale(&bracket_rat(2 * m + 1, p));
        let next = (&lead - &prev.scale(&bracket_rat(m, p)))
            .scale(&bracket_rat(m + 1, p).recip());
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Deformed Hermite by the Rodrigues-type formula
/// `H_n = (−1)ⁿ e^{x²} Dⁿ e^{−x²}`, carried out on truncated formal series.
///
/// The working order starts at `2n + 8`; if the coefficients above degree
/// `n` fail to vanish identically (they cannot, mathematically, but the
/// window check is the whole point of this route) the order doubles, a few
/// times, before giving up.
pub fn hermite_by_rodrigues(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let mut order = 2 * n + 8;
    for _ in 0..4 {
        // Dⁿ e^{−x²}, keeping n extra orders so the result is exact to `order`.
        let mut series = FormalSeries::exp_neg_x_squared(order + n);
        for _ in 0..n {
            series = series.deformed_derivative(p);
        }
        let mut product = FormalSeries::exp_x_squared(order).mul(&series);
        if n % 2 == 1 {
            for c in &mut product.coeffs {
                *c = -c.clone();
            }
        }
        if let Some(poly) = product.polynomial_part(n) {
            return Ok(poly);
        }
        order *= 2;
    }
    Err(Error::SeriesTruncation {
        order,
        detail: format!("Rodrigues-type Hermite construction at n = {n} never terminated"),
    })
}

/// Deformed Legendre by the Rodrigues-type formula
/// `P_n = Dⁿ (x² − 1)ⁿ / (2ⁿ n!)` — pure polynomial arithmetic, no series.
pub fn legendre_by_rodrigues(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let base = ExactPoly::new(vec![rat(-1), Rat::zero(), Rat::one()]); // x² − 1
    let mut power = ExactPoly::one();
    for _ in 0..n {
        power = &power * &base;
    }
    let mut result = power;
    for _ in 0..n {
        result = result.deformed_derivative(p);
    }
    let scale = (rat(2).pow(n as i32) * factorial_rat(n)).recip();
    Ok(result.scale(&scale))
}

/// Coefficient of `tⁿ` in the generating function `e^{−t²} E(2tx)`,
/// assembled directly: `Σ_k (−1)^k/k! · (2x)^{n−2k}/[n−2k]!`.
pub fn generating_coefficient(n: usize, p: &Rat) -> Result<ExactPoly> {
    validate_order(p)?;
    let mut coeffs = vec![Rat::zero(); n + 1];
    for k in 0..=(n / 2) {
        let m = n - 2 * k;
        let mut c = rat(2).pow(m as i32)
            / (factorial_rat(k) * bracket_factorial_rat(m, p));
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[m] = c;
    }
    Ok(ExactPoly::new(coeffs))
}

/// Count the orders `n ≤ order` at which the generating function's `tⁿ`
/// coefficient fails to equal `H_n/[n]!` exactly. Zero means the generating
/// identity holds through the requested order.
pub fn hermite_generating_mismatches(order: usize, p: &Rat) -> Result<usize> {
    validate_order(p)?;
    let mut mismatches = 0;
    for n in 0..=order {
        let lhs = generating_coefficient(n, p)?;
        let rhs = hermite(n, p)?.scale(&bracket_factorial_rat(n, p).recip());
        if lhs != rhs {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

/// Which polynomial family a routine should act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Hermite,
    Legendre,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hermite => "hermite",
            Family::Legendre => "legendre",
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermite" => Ok(Family::Hermite),
            "legendre" => Ok(Family::Legendre),
            other => Err(Error::InvalidParameter(format!(
                "unknown polynomial family {other:?} (expected hermite or legendre)"
            ))),
        }
    }
}

/// Construct family member `n` by the closed sum.
pub fn family_member(family: Family, n: usize, p: &Rat) -> Result<ExactPoly> {
    match family {
        Family::Hermite => hermite(n, p),
        Family::Legendre => legendre(n, p),
    }
}

/// Exact residual of the defining differential equation:
/// `D²H − 2x·DH + 2[n]·H` for Hermite,
/// `(1 − x²)·D²P − 2x·DP + [n][n+1]·P` for Legendre.
/// A correct member yields the zero polynomial.
pub fn ode_residual(family: Family, n: usize, p: &Rat) -> Result<ExactPoly> {
    let f = family_member(family, n, p)?;
    let df = f.deformed_derivative(p);
    let ddf = df.deformed_derivative(p);
    let two_x = ExactPoly::monomial(1, rat(2));
    Ok(match family {
        Family::Hermite => {
            let term = f.scale(&(rat(2) * bracket_rat(n, p)));
            &(&ddf - &(&two_x * &df)) + &term
        }
        Family::Legendre => {
            let one_minus_x2 = ExactPoly::new(vec![Rat::one(), Rat::zero(), rat(-1)]);
            let term = f.scale(&(bracket_rat(n, p) * bracket_rat(n + 1, p)));
            &(&(&one_minus_x2 * &ddf) - &(&two_x * &df)) + &term
        }
    })
}

/// Identifiers for the five derivative/recursion cross-identities, in the
/// order their residuals are returned by [`derivative_recursion_residuals`].
pub const DERIVATIVE_IDENTITY_IDS: [&str; 5] = [
    "hermite-derivative-lowering",
    "legendre-derivative-raising",
    "legendre-derivative-lowering",
    "legendre-derivative-skip",
    "legendre-weighted-derivative",
];

/// Exact residual polynomials of the five derivative identities at index `n`:
///
/// 1. `D H_n − 2[n] H_{n−1}`
/// 2. `D P_{n+1} − x·D P_n − [n+1] P_n`
/// 3. `x·D P_n − D P_{n−1} − [n] P_n`
/// 4. `D P_{n+1} − D P_{n−1} − [2n+1] P_n`
/// 5. `(x²−1)·D P_n − [n]·x·P_n + [n]·P_{n−1}`
///
/// Valid for `n ≥ 1`; every residual must be the zero polynomial.
pub fn derivative_recursion_residuals(n: usize, p: &Rat) -> Result<[ExactPoly; 5]> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "derivative identities start at n = 1".into(),
        ));
    }
    let x = ExactPoly::monomial(1, Rat::one());
    let x2m1 = ExactPoly::new(vec![rat(-1), Rat::zero(), Rat::one()]);

    let h_n = hermite(n, p)?;
    let h_nm1 = hermite(n - 1, p)?;
    let p_np1 = legendre(n + 1, p)?;
    let p_n = legendre(n, p)?;
    let p_nm1 = legendre(n - 1, p)?;
    let dh_n = h_n.deformed_derivative(p);
    let dp_np1 = p_np1.deformed_derivative(p);
    let dp_n = p_n.deformed_derivative(p);
    let dp_nm1 = p_nm1.deformed_derivative(p);

    let r1 = &dh_n - &h_nm1.scale(&(rat(2) * bracket_rat(n, p)));
    let r2 = &(&dp_np1 - &(&x * &dp_n)) - &p_n.scale(&bracket_rat(n + 1, p));
    let r3 = &(&(&x * &dp_n) - &dp_nm1) - &p_n.scale(&bracket_rat(n, p));
    let r4 = &(&dp_np1 - &dp_nm1) - &p_n.scale(&bracket_rat(2 * n + 1, p));
    let r5 = &(&(&x2m1 * &dp_n) - &(&x * &p_n).scale(&bracket_rat(n, p)))
        + &p_nm1.scale(&bracket_rat(n, p));

    Ok([r1, r2, r3, r4, r5])
}

/// Classical Hermite polynomial (ordinary, physicists' convention), built
/// from plain factorials only — an oracle for the `p = 1` degeneration.
pub fn classical_hermite(n: usize) -> ExactPoly {
    let nfact = factorial_rat(n);
    let mut coeffs = vec![Rat::zero(); n + 1];
    for k in 0..=(n / 2) {
        let m = n - 2 * k;
        let mut c = &nfact * rat(2).pow(m as i32);
        c /= factorial_rat(k) * factorial_rat(m);
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[m] = c;
    }
    ExactPoly::new(coeffs)
}

/// Classical Legendre polynomial via `P_n = 2^{−n} Σ_k (−1)^k C(n,k)
/// C(2n−2k, n) x^{n−2k}` — an oracle for the `p = 1` degeneration.
pub fn classical_legendre(n: usize) -> ExactPoly {
    let two_pow_n = rat(2).pow(n as i32);
    let mut coeffs = vec![Rat::zero(); n + 1];
    for k in 0..=(n / 2) {
        let m = n - 2 * k;
        let mut c = binomial_rat(n, k) * binomial_rat(2 * n - 2 * k, n) / &two_pow_n;
        if k % 2 == 1 {
            c = -c;
        }
        coeffs[m] = c;
    }
    ExactPoly::new(coeffs)
}

/// JSON record for one polynomial: `{p, n, family, coeffs}` with exact
/// rational strings and ascending powers.
pub fn poly_json(family: Family, n: usize, p: &Rat, poly: &ExactPoly) -> serde_json::Value {
    serde_json::json!({
        "p": p.to_string(),
        "n": n,
        "family": family.name(),
        "coeffs": poly.coeff_strings(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_of(v: i64) -> Rat {
        rat(v)
    }

    #[test]
    fn monomial_derivative_rule() {
        // D xⁿ = [n] x^{n−1}, the defining property.
        for p in [p_of(1), p_of(3), Rat::new(BigInt::from(5), BigInt::from(2))] {
            for n in 1..10 {
                let xn = ExactPoly::monomial(n, Rat::one());
                let d = xn.deformed_derivative(&p);
                assert_eq!(d, ExactPoly::monomial(n - 1, bracket_rat(n, &p)));
            }
        }
    }

    #[test]
    fn low_order_tables_are_exact() {
        // H_0 = 1, H_1 = 2x, H_2 = 4x² − 2[1], H_3 = 8x³ − (4[1] + 4[2])x.
        for pv in [1_i64, 2, 3, 7] {
            let p = p_of(pv);
            let b1 = bracket_rat(1, &p);
            let b2 = bracket_rat(2, &p);
            let b3 = bracket_rat(3, &p);
            let b5 = bracket_rat(5, &p);

            assert_eq!(hermite(0, &p).unwrap(), ExactPoly::one());
            assert_eq!(hermite(1, &p).unwrap(), ExactPoly::monomial(1, rat(2)));
            let h2 = ExactPoly::new(vec![rat(-2) * &b1, Rat::zero(), rat(4)]);
            assert_eq!(hermite(2, &p).unwrap(), h2);
            let h3 = ExactPoly::new(vec![
                Rat::zero(),
                rat(-4) * (&b1 + &b2),
                Rat::zero(),
                rat(8),
            ]);
            assert_eq!(hermite(3, &p).unwrap(), h3);

            // P_0 = 1, P_1 = x, P_2 = ([3]x² − [1])/2,
            // P_3 = ([3][5]x³ − ([1][5] + 2[2])x) / (2[3]).
            assert_eq!(legendre(0, &p).unwrap(), ExactPoly::one());
            assert_eq!(legendre(1, &p).unwrap(), ExactPoly::monomial(1, Rat::one()));
            let p2 = ExactPoly::new(vec![-&b1 / rat(2), Rat::zero(), &b3 / rat(2)]);
            assert_eq!(legendre(2, &p).unwrap(), p2);
            let p3_lead = &b3 * &b5 / rat(2);
            let p3_low = -(&b1 * &b5 + rat(2) * &b2) / rat(2);
            let p3 = ExactPoly::new(vec![
                Rat::zero(),
                p3_low / &b3,
                Rat::zero(),
                p3_lead / &b3,
            ]);
            assert_eq!(legendre(3, &p).unwrap(), p3);
        }
    }

    #[test]
    fn three_constructions_agree() {
        let orders = [
            p_of(1),
            p_of(2),
            p_of(5),
            Rat::new(BigInt::from(5), BigInt::from(2)),
        ];
        for p in &orders {
            for n in 0..=10 {
                let h_sum = hermite(n, p).unwrap();
                assert_eq!(h_sum, hermite_by_recursion(n, p).unwrap(), "H rec n={n}");
                assert_eq!(h_sum, hermite_by_rodrigues(n, p).unwrap(), "H rod n={n}");
                let l_sum = legendre(n, p).unwrap();
                assert_eq!(l_sum, legendre_by_recursion(n, p).unwrap(), "P rec n={n}");
                assert_eq!(l_sum, legendre_by_rodrigues(n, p).unwrap(), "P rod n={n}");
            }
        }
    }

    #[test]
    fn degenerates_to_classical_families_at_p1() {
        let p = p_of(1);
        for n in 0..=12 {
            assert_eq!(hermite(n, &p).unwrap(), classical_hermite(n), "H n={n}");
            assert_eq!(legendre(n, &p).unwrap(), classical_legendre(n), "P n={n}");
        }
    }

    #[test]
    fn classical_oracles_match_textbook_values() {
        // H_4 = 16x⁴ − 48x² + 12, P_4 = (35x⁴ − 30x² + 3)/8.
        let h4 = ExactPoly::new(vec![rat(12), rat(0), rat(-48), rat(0), rat(16)]);
        assert_eq!(classical_hermite(4), h4);
        let p4 = ExactPoly::new(vec![
            Rat::new(BigInt::from(3), BigInt::from(8)),
            rat(0),
            Rat::new(BigInt::from(-30), BigInt::from(8)),
            rat(0),
            Rat::new(BigInt::from(35), BigInt::from(8)),
        ]);
        assert_eq!(classical_legendre(4), p4);
    }

    #[test]
    fn members_have_strict_parity() {
        let p = Rat::new(BigInt::from(7), BigInt::from(3));
        for n in 0..=12 {
            assert!(hermite(n, &p).unwrap().has_parity_of(n));
            assert!(legendre(n, &p).unwrap().has_parity_of(n));
        }
    }

    #[test]
    fn generating_function_matches_through_order_12() {
        for pv in [1, 2, 3] {
            assert_eq!(hermite_generating_mismatches(12, &p_of(pv)).unwrap(), 0);
        }
    }

    #[test]
    fn ode_residuals_are_zero_polynomials() {
        for pv in [1_i64, 2, 5] {
            let p = p_of(pv);
            for n in 0..=10 {
                assert!(ode_residual(Family::Hermite, n, &p).unwrap().is_zero());
                assert!(ode_residual(Family::Legendre, n, &p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn derivative_identities_hold_exactly() {
        let orders = [p_of(2), Rat::new(BigInt::from(3), BigInt::from(2))];
        for p in &orders {
            for n in 1..=8 {
                let residuals = derivative_recursion_residuals(n, p).unwrap();
                for (id, r) in DERIVATIVE_IDENTITY_IDS.iter().zip(residuals.iter()) {
                    assert!(r.is_zero(), "{id} fails at n = {n}, p = {p}: {r}");
                }
            }
        }
    }

    #[test]
    fn evaluation_routes_agree() {
        let p = p_of(3);
        let h5 = hermite(5, &p).unwrap();
        // Rational Horner against naive power summation.
        let x = Rat::new(BigInt::from(7), BigInt::from(11));
        let naive: Rat = h5
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * x.pow(k as i32))
            .sum();
        assert_eq!(h5.eval_rat(&x), naive);

        // Complex Horner against the same rational value.
        let xf = 7.0 / 11.0;
        let via_complex = h5.eval_complex(Complex64::new(xf, 0.0));
        let exact = h5.eval_rat(&x).to_f64().unwrap();
        assert!((via_complex.re - exact).abs() < 1e-12 * exact.abs().max(1.0));
        assert!(via_complex.im.abs() < 1e-15);
    }

    #[test]
    fn series_product_of_exponentials_is_one()  {
        let a = FormalSeries::exp_neg_x_squared(20);
        let b = FormalSeries::exp_x_squared(20);
        let prod = a.mul(&b);
        assert_eq!(prod.coeff(0), Rat::one());
        for k in 1..=20 {
            assert!(prod.coeff(k).is_zero(), "coefficient {k} should vanish");
        }
    }

    #[test]
    fn series_derivative_matches_polynomial_derivative() {
        let p = Rat::new(BigInt::from(5), BigInt::from(2));
        let poly = ExactPoly::new(vec![rat(3), rat(-1), rat(0), rat(2), rat(7)]);
        let mut series = FormalSeries::zero(10);
        for (k, c) in poly.coeffs().iter().enumerate() {
            series.coeffs[k] = c.clone();
        }
        let ds = series.deformed_derivative(&p);
        let dp = poly.deformed_derivative(&p);
        for k in 0..=9 {
            assert_eq!(ds.coeff(k), dp.coeff(k));
        }
    }

    #[test]
    fn json_record_shape() {
        let p = p_of(2);
        let h2 = hermite(2, &p).unwrap();
        let v = poly_json(Family::Hermite, 2, &p, &h2);
        assert_eq!(v["family"], "hermite");
        assert_eq!(v["n"], 2);
        assert_eq!(v["p"], "2");
        // H_2 = 4x² − 2[1] = 4x² − 4 at p = 2.
        let coeffs: Vec<String> = v["coeffs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_string())
            .collect();
        assert_eq!(coeffs, vec!["-4", "0", "4"]);
    }

    #[test]
    fn rejects_nonpositive_order() {
        assert!(hermite(3, &rat(0)).is_err());
        assert!(legendre(3, &rat(-2)).is_err());
        assert!(parse_positive_rational("0").is_err());
        assert!(parse_positive_rational("-1/2").is_err());
        assert!(parse_positive_rational("abc").is_err());
        assert_eq!(
            parse_positive_rational("5/2").unwrap(),
            Rat::new(BigInt::from(5), BigInt::from(2))
        );
    }

    #[test]
    fn family_parses_from_str() {
        assert_eq!("hermite".parse::<Family>().unwrap(), Family::Hermite);
        assert_eq!("Legendre".parse::<Family>().unwrap(), Family::Legendre);
        assert!("laguerre".parse::<Family>().is_err());
    }
}
