//! The parabose bracket, deformed exponential, and truncated Fock-space
//! realization of the order-`p` ladder algebra.
//!
//! The deformed integer ("bracket") is
//!
//! ```text
//! [n] = n            for even n,
//! [n] = n + p − 1    for odd n,
//! ```
//!
//! equivalently `[n] = n + ((p − 1)/2)(1 − (−1)ⁿ)`. The ladder operators act
//! on number states as `a|n⟩ = √[n] |n−1⟩` and `a†|n⟩ = √[n+1] |n+1⟩`, which
//! reproduces the ordinary oscillator at `p = 1` and gives `a a†|0⟩ = p|0⟩`
//! in general. The reflection operator `R = diag((−1)ⁿ)` closes the algebra:
//! `[a, a†] = 1 + (p − 1)R` with `{R, a} = {R, a†} = 0` and `R² = 1`.
//!
//! Everything here is resolutely finite-dimensional: a [`ParaAlgebra`] holds
//! dense `dim × dim` matrices plus a guard band, and the identity checks
//! report residuals measured away from the truncation edge.

use ndarray::{Array1, Array2};
use num::BigUint;
use num_complex::Complex64;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg;

/// Deformed integer `[n]` for parabose order `p ≥ 1`.
pub fn bracket(n: u64, p: u32) -> u64 {
    if n.is_multiple_of(2) {
        n
    } else {
        n + (p as u64 - 1)
    }
}

/// `[n]` as a float, for building matrix entries.
pub fn bracket_f64(n: usize, p: u32) -> f64 {
    bracket(n as u64, p) as f64
}

/// Deformed factorial `[n]! = [1][2]⋯[n]`, with `[0]! = 1`, exactly.
pub fn bracket_factorial(n: u64, p: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 1..=n {
        acc *= BigUint::from(bracket(k, p));
    }
    acc
}

/// `ln [n]!` — usable far beyond where `[n]!` overflows a float.
pub fn ln_bracket_factorial(n: usize, p: u32) -> f64 {
    (1..=n).map(|k| bracket_f64(k, p).ln()).sum()
}

/// Check the integer identity `2[n−1] + 1 + (p−1)(−1)^{n−1} = [2n−1]`
/// exactly. It is what collapses the squeezed-state norm recursion onto the
/// deformed Legendre recursion, so it gets its own verifier.
pub fn bracket_identity_holds(n: u64, p: u32) -> bool {
    if n == 0 {
        return true; // vacuous: the recursion it feeds starts at n = 1
    }
    let sign = if (n - 1).is_multiple_of(2) { 1_i128 } else { -1_i128 };
    let lhs = 2 * bracket(n - 1, p) as i128 + 1 + (p as i128 - 1) * sign;
    let rhs = bracket(2 * n - 1, p) as i128;
    lhs == rhs
}

/// Deformed exponential `E(x) = Σ xⁿ/[n]!`, summed until the magnitude bound
/// for the next term drops below `tol · (|sum| + 1)`.
///
/// At `p = 1` this is the ordinary exponential. The series converges for all
/// finite `x`; the iteration cap only trips on non-finite input slipping
/// through, which is rejected up front anyway.
pub fn deformed_exp(x: Complex64, p: u32, tol: f64) -> Result<Complex64> {
    if p == 0 {
        return Err(Error::InvalidParameter("deformed_exp: p must be ≥ 1".into()));
    }
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::NonFinite("deformed_exp argument".into()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "deformed_exp: tol must be positive and finite, got {tol:e}"
        )));
    }

    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut term_mag = 1.0_f64; // |x|ⁿ/[n]!, tracked exactly alongside
    let abs_x = x.norm();
    for n in 1..1_000_000_u64 {
        let b = bracket(n, p) as f64;
        term = term * x / b;
        term_mag = term_mag * abs_x / b;
        sum += term;
        // Bound on the next term: |x|^{n+1}/[n+1]!.
        let next_bound = term_mag * abs_x / bracket(n + 1, p) as f64;
        if next_bound < tol * (sum.norm() + 1.0) {
            return Ok(sum);
        }
    }
    Err(Error::NonFinite(
        "deformed_exp failed to converge within 10^6 terms".into(),
    ))
}

/// Residuals of the three trilinear relations that define the parabose
/// algebra, measured guard-banded:
/// `[a, {a†, a}] = 2a`, `[a, a†²] = 2a†`, `[a, a²] = 0`.
#[derive(Debug, Clone, Copy)]
pub struct TrilinearResiduals {
    pub a_with_number: f64,
    pub a_with_adag_sq: f64,
    pub a_with_a_sq: f64,
}

/// Residuals of the reflection-operator relations:
/// `[a, a†] = 1 + (p−1)R`, `{R, a} = 0`, `{R, a†} = 0`, `R² = 1`.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionResiduals {
    pub canonical: f64,
    pub r_anticommutes_a: f64,
    pub r_anticommutes_adag: f64,
    pub r_involution: f64,
}

/// Residuals of the su(1,1) relations for `K₊ = a†²/2`, `K₋ = a²/2`,
/// `K₀ = {a†, a}/4`: `[K₀, K±] = ±K±` and `[K₊, K₋] = −2K₀`.
#[derive(Debug, Clone, Copy)]
pub struct Su11Residuals {
    pub k0_kplus: f64,
    pub k0_kminus: f64,
    pub kplus_kminus: f64,
}

/// The su(1,1) generators realized on the truncated space.
#[derive(Debug, Clone)]
pub struct Su11Generators {
    pub kplus: Array2<Complex64>,
    pub kminus: Array2<Complex64>,
    pub k0: Array2<Complex64>,
}

/// Truncated Fock-space realization of the order-`p` parabose algebra.
///
/// Holds the dense ladder matrices together with the truncation bookkeeping
/// (`dim`, `guard`). All residual reporters measure on the leading
/// `dim − guard` block (widened where an operator product needs extra
/// headroom), because entries near the truncation edge are wrong by
/// construction, not by bug.
#[derive(Debug, Clone)]
pub struct ParaAlgebra {
    p: u32,
    dim: usize,
    guard: usize,
    sqrt_bracket: Vec<f64>,
    a: Array2<Complex64>,
    adag: Array2<Complex64>,
    reflection: Array2<Complex64>,
}

impl ParaAlgebra {
    /// Build the truncated algebra. Requires `p ≥ 1`, `dim ≥ 4`, and
    /// `0 < guard < dim`.
    pub fn new(p: u32, dim: usize, guard: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter(
                "parabose order p must be ≥ 1".into(),
            ));
        }
        if dim < 4 {
            return Err(Error::InvalidDimensions {
                dim,
                guard,
                detail: "dimension must be at least 4".into(),
            });
        }
        if guard == 0 || guard >= dim {
            return Err(Error::InvalidDimensions {
                dim,
                guard,
                detail: "guard band must satisfy 0 < guard < dim".into(),
            });
        }

        let sqrt_bracket: Vec<f64> = (0..=dim).map(|n| bracket_f64(n, p).sqrt()).collect();

        let mut a = Array2::<Complex64>::zeros((dim, dim));
        let mut adag = Array2::<Complex64>::zeros((dim, dim));
        for n in 1..dim {
            // a|n⟩ = √[n] |n−1⟩ and a†|n−1⟩ = √[n] |n⟩.
            a[[n - 1, n]] = Complex64::new(sqrt_bracket[n], 0.0);
            adag[[n, n - 1]] = Complex64::new(sqrt_bracket[n], 0.0);
        }
        let reflection = Array2::from_diag(&Array1::from_iter((0..dim).map(|n| {
            Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })));

        Ok(Self {
            p,
            dim,
            guard,
            sqrt_bracket,
            a,
            adag,
            reflection,
        })
    }

    /// Build with the default guard band `max(2, dim/8)`.
    pub fn with_default_guard(p: u32, dim: usize) -> Result<Self> {
        Self::new(p, dim, crate::default_guard(dim))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Number of levels outside the guard band.
    pub fn retained(&self) -> usize {
        self.dim - self.guard
    }

    /// Annihilation operator `a`.
    pub fn annihilator(&self) -> &Array2<Complex64> {
        &self.a
    }

    /// Creation operator `a†`.
    pub fn creator(&self) -> &Array2<Complex64> {
        &self.adag
    }

    /// Reflection (parity) operator `R = diag((−1)ⁿ)`.
    pub fn reflection(&self) -> &Array2<Complex64> {
        &self.reflection
    }

    /// `√[n]` for `0 ≤ n ≤ dim`.
    pub fn sqrt_bracket(&self, n: usize) -> f64 {
        self.sqrt_bracket[n]
    }

    /// Number-state basis vector `|n⟩`.
    pub fn fock_state(&self, n: usize) -> Result<Array1<Complex64>> {
        if n >= self.dim {
            return Err(Error::InvalidParameter(format!(
                "fock_state: level {n} outside dimension {}",
                self.dim
            )));
        }
        let mut v = Array1::zeros(self.dim);
        v[n] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Apply `a` to a state vector in O(dim) without touching the matrix.
    pub fn apply_annihilator(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        let mut out = Array1::zeros(self.dim);
        for i in 0..self.dim - 1 {
            out[i] = v[i + 1] * self.sqrt_bracket[i + 1];
        }
        out
    }

    /// Apply `a†` to a state vector in O(dim). The amplitude that would leave
    /// the truncated space is dropped, exactly as the matrix drops it.
    pub fn apply_creator(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        let mut out = Array1::zeros(self.dim);
        for i in 1..self.dim {
            out[i] = v[i - 1] * self.sqrt_bracket[i];
        }
        out
    }

    /// Diagonal of the anticommutator `{a†, a}`: entry `n` is `[n] + [n+1]`.
    pub fn anticommutator_diag(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|n| bracket_f64(n, self.p) + bracket_f64(n + 1, self.p))
            .collect()
    }

    /// Deformed coherent state `|z⟩ = E(|z|²)^{−1/2} Σ zⁿ/√[n]! |n⟩`.
    ///
    /// Errors with [`Error::TruncationInadequate`] if the dropped tail is not
    /// comfortably below `tol`; the reported `required` dimension is found by
    /// doubling until the tail bound `|z|^{2N}/[N]!` falls under `tol`.
    pub fn coherent_state(&self, z: Complex64, tol: f64) -> Result<Array1<Complex64>> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("coherent_state amplitude".into()));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coherent_state: tol must be positive and finite, got {tol:e}"
            )));
        }

        let tail_ok = |n: usize| -> bool {
            // ln(|z|^{2n}/[n]!) < ln tol, evaluated in logs so huge n is fine.
            let abs_z = z.norm();
            if abs_z == 0.0 {
                return true;
            }
            2.0 * n as f64 * abs_z.ln() - ln_bracket_factorial(n, self.p) < tol.ln()
        };
        if !tail_ok(self.dim) {
            let mut required = self.dim;
            while !tail_ok(required) {
                required *= 2;
                if required > (1 << 24) {
                    return Err(Error::InvalidParameter(format!(
                        "coherent_state: |z| = {:.3e} is unreasonably large",
                        z.norm()
                    )));
                }
            }
            return Err(Error::TruncationInadequate {
                required,
                detail: format!(
                    "coherent amplitude |z| = {:.3e} leaves tail weight above {tol:.1e} at dimension {}",
                    z.norm(),
                    self.dim
                ),
            });
        }

        let norm = deformed_exp(Complex64::new(z.norm_sqr(), 0.0), self.p, 1e-16)?
            .re
            .sqrt()
            .recip();
        let mut v = Array1::<Complex64>::zeros(self.dim);
        let mut amp = Complex64::new(1.0, 0.0);
        v[0] = amp;
        for n in 1..self.dim {
            amp = amp * z / self.sqrt_bracket[n];
            v[n] = amp;
        }
        Ok(v.mapv(|x| x * norm))
    }

    /// Smallest power-of-two-ish dimension at which [`Self::coherent_state`]
    /// would accept this amplitude — useful as a sizing diagnostic.
    pub fn required_dim_for_coherent(z: Complex64, tol: f64, p: u32) -> usize {
        let abs_z = z.norm();
        if abs_z == 0.0 {
            return 4;
        }
        let mut n = 8;
        while 2.0 * n as f64 * abs_z.ln() - ln_bracket_factorial(n, p) >= tol.ln() {
            n *= 2;
            if n > (1 << 24) {
                break;
            }
        }
        n
    }

    /// Columns on which a product of `span` ladder factors is still exact,
    /// never wider than the configured guard band allows.
    fn check_cols(&self, span: usize) -> usize {
        self.dim - self.guard.max(span)
    }

    /// Guard-banded residuals of the three trilinear defining relations.
    pub fn trilinear_residuals(&self) -> TrilinearResiduals {
        let a = &self.a;
        let adag = &self.adag;
        let two = Complex64::new(2.0, 0.0);

        // [a, {a†, a}] − 2a: three ladder factors deep.
        let number = linalg::anticommutator(adag, a);
        let lhs1 = linalg::commutator(a, &number) - a.mapv(|x| x * two);
        // [a, a†²] − 2a†.
        let adag2 = adag.dot(adag);
        let lhs2 = linalg::commutator(a, &adag2) - adag.mapv(|x| x * two);
        // [a, a²].
        let a2 = a.dot(a);
        let lhs3 = linalg::commutator(a, &a2);

        let keep = self.check_cols(3);
        TrilinearResiduals {
            a_with_number: linalg::max_abs_leading(&lhs1, self.dim, keep),
            a_with_adag_sq: linalg::max_abs_leading(&lhs2, self.dim, keep),
            a_with_a_sq: linalg::max_abs_leading(&lhs3, self.dim, keep),
        }
    }

    /// Guard-banded residuals of the reflection-operator relations.
    pub fn reflection_residuals(&self) -> ReflectionResiduals {
        let a = &self.a;
        let adag = &self.adag;
        let r = &self.reflection;
        let id = linalg::eye(self.dim);
        let pm1 = Complex64::new(self.p as f64 - 1.0, 0.0);

        let canonical = linalg::commutator(a, adag) - &id - &r.mapv(|x| x * pm1);
        let anti_a = linalg::anticommutator(r, a);
        let anti_adag = linalg::anticommutator(r, adag);
        let invol = r.dot(r) - &id;

        let keep = self.check_cols(2);
        ReflectionResiduals {
            canonical: linalg::max_abs_leading(&canonical, self.dim, keep),
            r_anticommutes_a: linalg::max_abs_leading(&anti_a, self.dim, keep),
            r_anticommutes_adag: linalg::max_abs_leading(&anti_adag, self.dim, keep),
            r_involution: linalg::max_abs_leading(&invol, self.dim, self.dim),
        }
    }

    /// The su(1,1) generators `K₊ = a†²/2`, `K₋ = a²/2`, `K₀ = {a†, a}/4`,
    /// built directly from the bracket (band structure, no matmul).
    pub fn su11_generators(&self) -> Su11Generators {
        let mut kplus = Array2::<Complex64>::zeros((self.dim, self.dim));
        let mut kminus = Array2::<Complex64>::zeros((self.dim, self.dim));
        for n in 0..self.dim - 2 {
            // a†²|n⟩ = √([n+1][n+2]) |n+2⟩, a²|n+2⟩ = √([n+1][n+2]) |n⟩.
            let w = self.sqrt_bracket[n + 1] * self.sqrt_bracket[n + 2];
            kplus[[n + 2, n]] = Complex64::new(0.5 * w, 0.0);
            kminus[[n, n + 2]] = Complex64::new(0.5 * w, 0.0);
        }
        let diag = self.anticommutator_diag();
        let k0 = Array2::from_diag(&Array1::from_iter(
            diag.iter().map(|&d| Complex64::new(0.25 * d, 0.0)),
        ));
        Su11Generators { kplus, kminus, k0 }
    }

    /// Guard-banded residuals of the su(1,1) relations.
    pub fn su11_residuals(&self) -> Su11Residuals {
        let g = self.su11_generators();
        let lhs1 = linalg::commutator(&g.k0, &g.kplus) - &g.kplus;
        let lhs2 = linalg::commutator(&g.k0, &g.kminus) + &g.kminus;
        let lhs3 =
            linalg::commutator(&g.kplus, &g.kminus) + &g.k0.mapv(|x| x * 2.0);

        let keep = self.check_cols(4);
        Su11Residuals {
            k0_kplus: linalg::max_abs_leading(&lhs1, self.dim, keep),
            k0_kminus: linalg::max_abs_leading(&lhs2, self.dim, keep),
            kplus_kminus: linalg::max_abs_leading(&lhs3, self.dim, keep),
        }
    }

    /// Guard-banded *relative* residual of
    /// `[a, a†ⁿ] = a†^{n−1} (n + ((p−1)/2)(1 − (−1)ⁿ) R)` for `1 ≤ n ≤ 6`.
    ///
    /// Entries of `a†ⁿ` grow like `[dim]^{n/2}` (∼10⁶ at `n = 6`, `dim = 64`),
    /// so the difference is scaled by the magnitude of the right-hand side to
    /// stay meaningful across `n`.
    pub fn ladder_power_commutator_residual(&self, n: usize) -> Result<f64> {
        if n == 0 || n > 6 {
            return Err(Error::InvalidParameter(format!(
                "ladder power commutator is checked for 1 ≤ n ≤ 6, got {n}"
            )));
        }
        let mut adag_n = linalg::eye(self.dim);
        for _ in 0..n {
            adag_n = adag_n.dot(&self.adag);
        }
        let mut adag_nm1 = linalg::eye(self.dim);
        for _ in 0..n - 1 {
            adag_nm1 = adag_nm1.dot(&self.adag);
        }

        let r_coeff = (self.p as f64 - 1.0) / 2.0 * (1.0 - (-1.0_f64).powi(n as i32));
        let inner = linalg::eye(self.dim).mapv(|x| x * n as f64)
            + self.reflection.mapv(|x| x * r_coeff);
        let rhs = adag_nm1.dot(&inner);
        let lhs = linalg::commutator(&self.a, &adag_n);
        let keep = self.check_cols(n + 1);
        let scale = linalg::max_abs_leading(&rhs, self.dim, keep).max(1.0);
        Ok(linalg::max_abs_leading(&(lhs - rhs), self.dim, keep) / scale)
    }

    /// `|⟨0| a a† |0⟩ − p|`: the canonical relation pins the vacuum
    /// expectation to the parabose order itself.
    pub fn vacuum_order_residual(&self) -> f64 {
        let aad = self.a.dot(&self.adag);
        (aad[[0, 0]].re - self.p as f64).abs() + aad[[0, 0]].im.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn bracket_matches_parity_table() {
        // p = 1 is the undeformed integer.
        for n in 0..20 {
            assert_eq!(bracket(n, 1), n);
        }
        // p = 3 shifts odd entries by 2.
        let expected = [0, 3, 2, 5, 4, 7, 6, 9];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(bracket(n as u64, 3), e);
        }
    }

    #[test]
    fn bracket_factorial_small_values() {
        // p = 2: [1] = 2, [2] = 2, [3] = 4, so [3]! = 16.
        assert_eq!(bracket_factorial(0, 2), BigUint::from(1_u32));
        assert_eq!(bracket_factorial(1, 2), BigUint::from(2_u32));
        assert_eq!(bracket_factorial(2, 2), BigUint::from(4_u32));
        assert_eq!(bracket_factorial(3, 2), BigUint::from(16_u32));
        // p = 1 degenerates to the ordinary factorial.
        assert_eq!(bracket_factorial(6, 1), BigUint::from(720_u32));
    }

    #[test]
    fn ln_bracket_factorial_matches_exact_log() {
        for p in [1, 2, 5] {
            for n in [0, 1, 7, 40] {
                let exact = bracket_factorial(n as u64, p).to_f64().unwrap().ln();
                let viasum = ln_bracket_factorial(n, p);
                assert!((exact - viasum).abs() < 1e-10 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn bracket_identity_exhaustive_small_range() {
        for p in 1..=7 {
            for n in 1..=50 {
                assert!(
                    bracket_identity_holds(n, p),
                    "identity failed at n = {n}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn deformed_exp_reduces_to_exp_at_p1() {
        for &x in &[0.0, 0.3, -1.7, 4.0] {
            let e = deformed_exp(Complex64::new(x, 0.0), 1, 1e-15).unwrap();
            assert!((e.re - x.exp()).abs() < 1e-12 * x.exp());
            assert!(e.im.abs() < 1e-15);
        }
        let z = Complex64::new(0.4, -1.1);
        let e = deformed_exp(z, 1, 1e-15).unwrap();
        assert!((e - z.exp()).norm() < 1e-13);
    }

    #[test]
    fn deformed_exp_matches_direct_factorial_sum() {
        // Independent route: sum xⁿ/[n]! with [n]! taken from the exact
        // big-integer factorial.
        for p in [2, 3, 5] {
            for &x in &[0.25_f64, 1.5, -0.8] {
                let direct: f64 = (0..60)
                    .map(|n| {
                        x.powi(n) / bracket_factorial(n as u64, p).to_f64().unwrap()
                    })
                    .sum();
                let e = deformed_exp(Complex64::new(x, 0.0), p, 1e-16).unwrap();
                assert!(
                    (e.re - direct).abs() < 1e-12 * direct.abs().max(1.0),
                    "p = {p}, x = {x}: {} vs {direct}",
                    e.re
                );
            }
        }
    }

    #[test]
    fn deformed_exp_rejects_bad_input() {
        assert!(matches!(
            deformed_exp(Complex64::new(1.0, 0.0), 0, 1e-10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            deformed_exp(Complex64::new(f64::NAN, 0.0), 2, 1e-10),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            deformed_exp(Complex64::new(1.0, 0.0), 2, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn constructor_validates_inputs() {
        assert!(matches!(
            ParaAlgebra::new(0, 16, 2),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            ParaAlgebra::new(2, 3, 1),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(matches!(
            ParaAlgebra::new(2, 16, 0),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(matches!(
            ParaAlgebra::new(2, 16, 16),
            Err(Error::InvalidDimensions { .. })
        ));
    }

    #[test]
    fn ladder_matrices_reduce_to_oscillator_at_p1() {
        let alg = ParaAlgebra::new(1, 8, 2).unwrap();
        for n in 1..8 {
            let expected = (n as f64).sqrt();
            assert!((alg.annihilator()[[n - 1, n]].re - expected).abs() < 1e-15);
            assert!((alg.creator()[[n, n - 1]].re - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn vacuum_sees_order_p() {
        for p in [1, 2, 3, 5] {
            let alg = ParaAlgebra::new(p, 16, 2).unwrap();
            assert!(alg.vacuum_order_residual() < 1e-14);
        }
    }

    #[test]
    fn trilinear_and_reflection_residuals_vanish() {
        for p in [1, 2, 3, 5] {
            let alg = ParaAlgebra::with_default_guard(p, 64).unwrap();
            let t = alg.trilinear_residuals();
            assert!(t.a_with_number < 1e-12, "p = {p}: {t:?}");
            assert!(t.a_with_adag_sq < 1e-12);
            assert!(t.a_with_a_sq < 1e-12);
            let r = alg.reflection_residuals();
            assert!(r.canonical < 1e-12, "p = {p}: {r:?}");
            assert!(r.r_anticommutes_a < 1e-12);
            assert!(r.r_anticommutes_adag < 1e-12);
            assert!(r.r_involution < 1e-15);
        }
    }

    #[test]
    fn su11_relations_hold() {
        for p in [1, 2, 3, 5] {
            let alg = ParaAlgebra::with_default_guard(p, 64).unwrap();
            let s = alg.su11_residuals();
            assert!(s.k0_kplus < 1e-12, "p = {p}: {s:?}");
            assert!(s.k0_kminus < 1e-12);
            assert!(s.kplus_kminus < 1e-12);
        }
    }

    #[test]
    fn su11_generators_match_operator_products() {
        // Independent route: build K± and K₀ from explicit matrix products.
        let alg = ParaAlgebra::with_default_guard(3, 32).unwrap();
        let g = alg.su11_generators();
        let adag2 = alg.creator().dot(alg.creator()).mapv(|x| x * 0.5);
        let a2 = alg.annihilator().dot(alg.annihilator()).mapv(|x| x * 0.5);
        let k0 = linalg::anticommutator(alg.creator(), alg.annihilator()).mapv(|x| x * 0.25);
        // Products are truncation-exact except in the top two rows/columns;
        // the two routes differ only by (√x)² rounding.
        assert!(linalg::max_abs_leading(&(&g.kplus - &adag2), 30, 30) < 1e-13);
        assert!(linalg::max_abs_leading(&(&g.kminus - &a2), 30, 30) < 1e-13);
        assert!(linalg::max_abs_leading(&(&g.k0 - &k0), 30, 30) < 1e-13);
    }

    #[test]
    fn ladder_power_commutator_holds_up_to_six() {
        for p in [1, 2, 3] {
            let alg = ParaAlgebra::with_default_guard(p, 64).unwrap();
            for n in 1..=6 {
                let res = alg.ladder_power_commutator_residual(n).unwrap();
                assert!(res < 1e-10, "p = {p}, n = {n}: residual {res:.3e}");
            }
        }
        let alg = ParaAlgebra::with_default_guard(2, 64).unwrap();
        assert!(alg.ladder_power_commutator_residual(7).is_err());
        assert!(alg.ladder_power_commutator_residual(0).is_err());
    }

    #[test]
    fn coherent_state_is_normalized_eigenvector() {
        for p in [1, 2, 3] {
            let alg = ParaAlgebra::with_default_guard(p, 64).unwrap();
            let z = Complex64::new(0.4, -0.3);
            let v = alg.coherent_state(z, 1e-10).unwrap();

            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-10, "p = {p}: norm {norm}");

            // a|z⟩ = z|z⟩ on the retained levels.
            let av = alg.apply_annihilator(&v);
            let residual = (&av - &v.mapv(|x| x * z)).mapv(|x| x.norm());
            let max_res = residual
                .iter()
                .take(alg.retained())
                .fold(0.0_f64, |m, &x| m.max(x));
            assert!(max_res < 1e-10, "p = {p}: eigen residual {max_res:.3e}");
        }
    }

    #[test]
    fn coherent_state_zero_amplitude_is_vacuum() {
        let alg = ParaAlgebra::with_default_guard(2, 16).unwrap();
        let v = alg.coherent_state(Complex64::new(0.0, 0.0), 1e-12).unwrap();
        assert!((v[0].re - 1.0).abs() < 1e-15);
        assert!(v.iter().skip(1).all(|x| x.norm() == 0.0));
    }

    #[test]
    fn coherent_state_reports_required_dimension() {
        let alg = ParaAlgebra::new(2, 8, 2).unwrap();
        let z = Complex64::new(3.0, 0.0);
        match alg.coherent_state(z, 1e-12) {
            Err(Error::TruncationInadequate { required, .. }) => {
                // The suggested dimension must actually be adequate.
                let bigger = ParaAlgebra::new(2, required, 2).unwrap();
                assert!(bigger.coherent_state(z, 1e-12).is_ok());
            }
            other => panic!("expected TruncationInadequate, got {other:?}"),
        }
    }

    #[test]
    fn apply_ladder_matches_matrix_action() {
        let alg = ParaAlgebra::with_default_guard(3, 24).unwrap();
        let v = Array1::from_shape_fn(24, |i| {
            Complex64::new((i as f64 * 0.31).sin(), (i as f64 * 0.17).cos())
        });
        let via_matrix_a = alg.annihilator().dot(&v);
        let via_apply_a = alg.apply_annihilator(&v);
        let via_matrix_c = alg.creator().dot(&v);
        let via_apply_c = alg.apply_creator(&v);
        for i in 0..24 {
            assert!((via_matrix_a[i] - via_apply_a[i]).norm() < 1e-14);
            assert!((via_matrix_c[i] - via_apply_c[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn fock_state_bounds_checked() {
        let alg = ParaAlgebra::with_default_guard(2, 8).unwrap();
        assert!(alg.fock_state(7).is_ok());
        assert!(alg.fock_state(8).is_err());
    }
}
