//! Dense complex linear algebra: matrix exponential, linear solves, and the
//! small set of norm/comparison helpers the rest of the crate leans on.
//!
//! The exponential uses Padé order-13 approximation with scaling and squaring
//! (Higham 2005, "The Scaling and Squaring Method for the Matrix Exponential
//! Revisited"), the same algorithm behind `scipy.linalg.expm`. For the matrix
//! sizes used here (≤ 1024) a dense implementation with partial-pivot
//! Gaussian elimination is plenty.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Padé order-13 coefficients `b_i / b_0` (Higham 2005, Table 2.3 scaled so
/// the constant term is 1).
const PADE_COEFFS: [f64; 14] = [
    1.0,
    0.5,
    0.12,
    1.833_333_333_333_333_3e-2,
    1.992_753_623_188_405_8e-3,
    1.630_434_782_608_695_6e-4,
    1.035_196_687_370_600_4e-5,
    5.175_983_436_853_002e-7,
    2.043_151_356_652_500_8e-8,
    6.306_022_705_717_595e-10,
    1.483_770_048_404_139_6e-11,
    2.529_153_491_597_965_3e-13,
    2.810_170_546_219_962_3e-15,
    1.544_049_750_670_308_8e-17,
];

/// Scaling threshold θ₁₃ for the order-13 approximant.
const THETA_13: f64 = 5.371_920_351_148_152;

/// Maximum absolute 1-norm (maximum absolute column sum) of a matrix.
pub fn matrix_1_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0_f64;
    for col in a.columns() {
        let sum: f64 = col.iter().map(|x| x.norm()).sum();
        max = max.max(sum);
    }
    max
}

/// Largest entry magnitude of a matrix.
pub fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.norm()))
}

/// Largest entry magnitude over the leading `rows × cols` block.
///
/// This is the guard-banded residual measure used throughout: truncation
/// error piles up near the top of a truncated Fock space, so identity checks
/// are evaluated on the leading block only.
pub fn max_abs_leading(a: &Array2<Complex64>, rows: usize, cols: usize) -> f64 {
    let rows = rows.min(a.nrows());
    let cols = cols.min(a.ncols());
    let mut max = 0.0_f64;
    for i in 0..rows {
        for j in 0..cols {
            max = max.max(a[[i, j]].norm());
        }
    }
    max
}

/// Largest entry magnitude over the leading `len` entries of a vector.
pub fn max_abs_leading_vec(v: &Array1<Complex64>, len: usize) -> f64 {
    v.iter()
        .take(len)
        .fold(0.0_f64, |m, x| m.max(x.norm()))
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|x| x.conj())
}

/// Commutator `[a, b] = ab − ba`.
pub fn commutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) - b.dot(a)
}

/// Anticommutator `{a, b} = ab + ba`.
pub fn anticommutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) + b.dot(a)
}

/// Identity matrix of dimension `n`.
pub fn eye(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

/// `‖U†U − I‖_max`: how far `u` is from unitary.
pub fn unitarity_defect(u: &Array2<Complex64>) -> f64 {
    let gram = dagger(u).dot(u);
    let n = gram.nrows();
    let mut max = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            max = max.max((gram[[i, j]] - expected).norm());
        }
    }
    max
}

/// Solve `a · x = b` for the matrix `x` by Gaussian elimination with partial
/// pivoting. Returns [`Error::SingularMatrix`] when a pivot falls below a
/// scale-aware threshold — a silent wrong answer would defeat every check
/// built on top of this.
pub fn solve(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::InvalidParameter(format!(
            "solve: incompatible shapes {:?} and {:?}",
            a.dim(),
            b.dim()
        )));
    }
    let m = b.ncols();

    // Build the augmented matrix [a | b] and eliminate in place.
    let mut aug = Array2::<Complex64>::zeros((n, n + m));
    aug.slice_mut(ndarray::s![.., ..n]).assign(a);
    aug.slice_mut(ndarray::s![.., n..]).assign(b);

    let pivot_floor = f64::EPSILON * matrix_1_norm(a).max(1.0);

    for col in 0..n {
        // Partial pivoting: bring the largest remaining entry of this column
        // to the diagonal.
        let mut pivot_row = col;
        let mut pivot_mag = aug[[col, col]].norm();
        for row in (col + 1)..n {
            let mag = aug[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= pivot_floor {
            return Err(Error::SingularMatrix(format!(
                "pivot {pivot_mag:.3e} at column {col} below threshold {pivot_floor:.3e}"
            )));
        }
        if pivot_row != col {
            for k in 0..(n + m) {
                let tmp = aug[[col, k]];
                aug[[col, k]] = aug[[pivot_row, k]];
                aug[[pivot_row, k]] = tmp;
            }
        }

        let inv_pivot = Complex64::new(1.0, 0.0) / aug[[col, col]];
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = aug[[row, col]] * inv_pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..(n + m) {
                let sub = factor * aug[[col, k]];
                aug[[row, k]] -= sub;
            }
        }
    }

    // Back out the solution from the (now diagonal) left block.
    let mut x = Array2::<Complex64>::zeros((n, m));
    for row in 0..n {
        let inv_pivot = Complex64::new(1.0, 0.0) / aug[[row, row]];
        for k in 0..m {
            x[[row, k]] = aug[[row, n + k]] * inv_pivot;
        }
    }
    Ok(x)
}

/// Order-13 Padé approximant numerator/denominator split:
/// `U = A·(odd part)`, `V = even part`, so that `exp(A) ≈ (V − U)⁻¹(V + U)`.
fn pade13(
    a: &Array2<Complex64>,
    a2: &Array2<Complex64>,
    a4: &Array2<Complex64>,
    a6: &Array2<Complex64>,
) -> (Array2<Complex64>, Array2<Complex64>) {
    let n = a.nrows();
    let id = eye(n);
    let b = &PADE_COEFFS;

    // U = A · (A6·(b13·A6 + b11·A4 + b9·A2) + b7·A6 + b5·A4 + b3·A2 + b1·I)
    let inner_u = a6.mapv(|x| x * b[13]) + &a4.mapv(|x| x * b[11]) + &a2.mapv(|x| x * b[9]);
    let u_poly = a6.dot(&inner_u)
        + &a6.mapv(|x| x * b[7])
        + &a4.mapv(|x| x * b[5])
        + &a2.mapv(|x| x * b[3])
        + &id.mapv(|x| x * b[1]);
    let u = a.dot(&u_poly);

    // V = A6·(b12·A6 + b10·A4 + b8·A2) + b6·A6 + b4·A4 + b2·A2 + b0·I
    let inner_v = a6.mapv(|x| x * b[12]) + &a4.mapv(|x| x * b[10]) + &a2.mapv(|x| x * b[8]);
    let v = a6.dot(&inner_v)
        + &a6.mapv(|x| x * b[6])
        + &a4.mapv(|x| x * b[4])
        + &a2.mapv(|x| x * b[2])
        + &id.mapv(|x| x * b[0]);

    (u, v)
}

/// Matrix exponential by Padé order-13 scaling and squaring.
///
/// Accuracy is at the level of the unit roundoff times a modest condition
/// factor for the well-scaled anti-Hermitian and shifted-Hermitian generators
/// used in this crate; the test suite pins it against plain Taylor summation.
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "expm: matrix must be square, got {:?}",
            a.dim()
        )));
    }
    if a.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NonFinite("expm input".into()));
    }

    let norm = matrix_1_norm(a);
    if norm == 0.0 {
        return Ok(eye(n));
    }

    // Scale A down by 2^s until its norm is within the order-13 comfort zone.
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scale = (0.5_f64).powi(s as i32);
    let a_scaled = a.mapv(|x| x * scale);

    let a2 = a_scaled.dot(&a_scaled);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let (u, v) = pade13(&a_scaled, &a2, &a4, &a6);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve(&q, &p)?;

    // Undo the scaling: exp(A) = (exp(A/2^s))^(2^s).
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}

/// Matrix exponential by plain Taylor summation, no scaling.
///
/// Only suitable for small, moderately normed matrices; it exists as an
/// independent oracle for [`expm`] in the tests. Terms are added until the
/// next term's 1-norm drops below `tol` relative to the running sum.
pub fn expm_taylor(a: &Array2<Complex64>, tol: f64) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "expm_taylor: matrix must be square, got {:?}",
            a.dim()
        )));
    }
    let mut sum = eye(n);
    let mut term = eye(n);
    for k in 1..10_000 {
        term = term.dot(a).mapv(|x| x / k as f64);
        let term_norm = matrix_1_norm(&term);
        if !term_norm.is_finite() {
            return Err(Error::NonFinite("expm_taylor term".into()));
        }
        sum += &term;
        if term_norm <= tol * matrix_1_norm(&sum).max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::NonFinite(
        "expm_taylor failed to converge in 10000 terms".into(),
    ))
}

/// Matrix exponential specialized to matrices that preserve index parity
/// (all entries with `i + j` odd are zero, as for any quadratic-in-ladder
/// generator). The even and odd sub-blocks are exponentiated independently,
/// which quarters the flop count without changing the result.
pub fn expm_parity(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "expm_parity: matrix must be square, got {:?}",
            a.dim()
        )));
    }
    // The parity structure is a hard precondition; a cross-parity entry means
    // the caller handed us the wrong kind of matrix.
    for i in 0..n {
        for j in 0..n {
            if (i + j) % 2 == 1 && a[[i, j]].norm() != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "expm_parity: entry ({i}, {j}) breaks parity structure"
                )));
            }
        }
    }

    let n_even = n.div_ceil(2);
    let n_odd = n / 2;
    let mut even = Array2::<Complex64>::zeros((n_even, n_even));
    let mut odd = Array2::<Complex64>::zeros((n_odd, n_odd));
    for i in 0..n_even {
        for j in 0..n_even {
            even[[i, j]] = a[[2 * i, 2 * j]];
        }
    }
    for i in 0..n_odd {
        for j in 0..n_odd {
            odd[[i, j]] = a[[2 * i + 1, 2 * j + 1]];
        }
    }

    let exp_even = expm(&even)?;
    let exp_odd = expm(&odd)?;

    let mut out = Array2::<Complex64>::zeros((n, n));
    for i in 0..n_even {
        for j in 0..n_even {
            out[[2 * i, 2 * j]] = exp_even[[i, j]];
        }
    }
    for i in 0..n_odd {
        for j in 0..n_odd {
            out[[2 * i + 1, 2 * j + 1]] = exp_odd[[i, j]];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_matrix_close(a: &Array2<Complex64>, b: &Array2<Complex64>, tol: f64) {
        assert_eq!(a.dim(), b.dim());
        let diff = max_abs(&(a - b));
        assert!(
            diff <= tol,
            "matrices differ by {diff:.3e} (tolerance {tol:.1e})"
        );
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = Array2::<Complex64>::zeros((4, 4));
        let e = expm(&z).unwrap();
        assert_matrix_close(&e, &eye(4), 0.0);
    }

    #[test]
    fn exp_of_diagonal_matches_scalar_exp() {
        let mut d = Array2::<Complex64>::zeros((3, 3));
        d[[0, 0]] = c(0.3, 0.0);
        d[[1, 1]] = c(-1.2, 0.7);
        d[[2, 2]] = c(0.0, -2.0);
        let e = expm(&d).unwrap();
        for i in 0..3 {
            let expected = d[[i, i]].exp();
            assert!((e[[i, i]] - expected).norm() < 1e-14);
        }
        assert!(e[[0, 1]].norm() < 1e-15);
        assert!(e[[2, 0]].norm() < 1e-15);
    }

    #[test]
    fn exp_of_nilpotent_is_exact() {
        // exp([[0, 1], [0, 0]]) = [[1, 1], [0, 1]]
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 1]] = c(1.0, 0.0);
        let e = expm(&a).unwrap();
        let mut expected = eye(2);
        expected[[0, 1]] = c(1.0, 0.0);
        assert_matrix_close(&e, &expected, 1e-15);
    }

    #[test]
    fn exp_inverse_is_exp_of_negation() {
        let a = Array2::from_shape_fn((6, 6), |(i, j)| {
            c(
                ((i * 7 + j * 3) as f64 * 0.11).sin() * 0.4,
                ((i as f64) - (j as f64)) * 0.05,
            )
        });
        let e_pos = expm(&a).unwrap();
        let e_neg = expm(&a.mapv(|x| -x)).unwrap();
        assert_matrix_close(&e_pos.dot(&e_neg), &eye(6), 1e-13);
    }

    #[test]
    fn pade_matches_plain_taylor() {
        // Independent oracle: straightforward series summation on a matrix
        // large enough in norm to force one or two scaling steps.
        let a = Array2::from_shape_fn((12, 12), |(i, j)| {
            c(
                ((i + 2 * j) as f64 * 0.17).cos() * 0.9,
                ((3 * i + j) as f64 * 0.13).sin() * 0.6,
            )
        });
        let pade = expm(&a).unwrap();
        let taylor = expm_taylor(&a, 1e-18).unwrap();
        let scale = max_abs(&taylor).max(1.0);
        let diff = max_abs(&(&pade - &taylor));
        assert!(
            diff / scale < 1e-13,
            "relative difference {:.3e}",
            diff / scale
        );
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = Array2::from_shape_fn((5, 5), |(i, j)| {
            c(
                if i == j { 3.0 } else { 0.2 * ((i + j) as f64).sin() },
                0.1 * (i as f64 - j as f64),
            )
        });
        let x_true = Array2::from_shape_fn((5, 2), |(i, j)| c((i + j) as f64, (i as f64) * 0.5));
        let b = a.dot(&x_true);
        let x = solve(&a, &b).unwrap();
        assert_matrix_close(&x, &x_true, 1e-13);
    }

    #[test]
    fn solve_rejects_singular_systems() {
        let mut a = Array2::<Complex64>::zeros((3, 3));
        // Rank-deficient: third row is the sum of the first two.
        a[[0, 0]] = c(1.0, 0.0);
        a[[0, 1]] = c(2.0, 0.0);
        a[[1, 1]] = c(1.0, 0.0);
        a[[1, 2]] = c(1.0, 0.0);
        a[[2, 0]] = c(1.0, 0.0);
        a[[2, 1]] = c(3.0, 0.0);
        a[[2, 2]] = c(1.0, 0.0);
        let b = eye(3);
        match solve(&a, &b) {
            Err(Error::SingularMatrix(_)) => {}
            other => panic!("expected SingularMatrix, got {other:?}"),
        }
    }

    #[test]
    fn one_norm_is_max_column_sum() {
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 0]] = c(3.0, 4.0); // magnitude 5
        a[[1, 0]] = c(0.0, 2.0); // column 0 sums to 7
        a[[0, 1]] = c(1.0, 0.0); // column 1 sums to 1
        assert!((matrix_1_norm(&a) - 7.0).abs() < 1e-15);
    }

    #[test]
    fn parity_split_matches_full_exponential() {
        // Build a parity-preserving matrix (entries only where i+j is even).
        let n = 9;
        let a = Array2::from_shape_fn((n, n), |(i, j)| {
            if (i + j) % 2 == 0 {
                c(
                    ((i * 3 + j) as f64 * 0.21).sin() * 0.7,
                    ((i + 5 * j) as f64 * 0.19).cos() * 0.3,
                )
            } else {
                c(0.0, 0.0)
            }
        });
        let full = expm(&a).unwrap();
        let split = expm_parity(&a).unwrap();
        assert_matrix_close(&full, &split, 1e-13);
    }

    #[test]
    fn parity_split_rejects_cross_parity_entries() {
        let mut a = Array2::<Complex64>::zeros((4, 4));
        a[[0, 1]] = c(1.0, 0.0);
        assert!(matches!(
            expm_parity(&a),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn unitarity_defect_detects_nonunitary() {
        assert!(unitarity_defect(&eye(4)) < 1e-15);
        let mut a = eye(4);
        a[[0, 0]] = c(1.1, 0.0);
        assert!(unitarity_defect(&a) > 0.1);
    }
}
