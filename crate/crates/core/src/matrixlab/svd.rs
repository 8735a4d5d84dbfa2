//! Singular value extremes of complex square matrices, from scratch:
//! complex Householder bidiagonalization followed by Sturm bisection on the
//! Golub-Kahan permuted tridiagonal (eigenvalues ±σᵢ). The bisection carries
//! absolute accuracy at the level of machine epsilon times the largest
//! singular value.

use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexMatrix};

/// Householder bidiagonalization; returns (|diagonal|, |superdiagonal|).
/// Unitary two-sided transforms preserve singular values, and diagonal phase
/// scalings let us keep only the moduli.
fn bidiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.rows();
    let mut a: Vec<C64> = m.data().to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    let mut alpha = vec![0.0f64; n];
    let mut beta = vec![0.0f64; n.saturating_sub(1)];

    let phase_of = |z: C64| -> C64 {
        let r = z.norm();
        if r == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            z / r
        }
    };

    for k in 0..n {
        // Column reflector on a[k.., k].
        let col_norm: f64 = (k..n).map(|i| a[idx(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if col_norm > 0.0 {
            let ph = phase_of(a[idx(k, k)]);
            let mut v: Vec<C64> = (k..n).map(|i| a[idx(i, k)]).collect();
            v[0] += ph * col_norm;
            let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm_sq > 0.0 {
                let tau = 2.0 / vnorm_sq;
                for j in k..n {
                    let mut coef = C64::new(0.0, 0.0);
                    for (l, vi) in v.iter().enumerate() {
                        coef += vi.conj() * a[idx(k + l, j)];
                    }
                    coef *= tau;
                    for (l, vi) in v.iter().enumerate() {
                        let e = idx(k + l, j);
                        a[e] -= coef * vi;
                    }
                }
            }
            alpha[k] = a[idx(k, k)].norm();
        }

        // Row reflector on a[k, k+1..].
        if k + 2 <= n {
            let row_norm: f64 =
                (k + 1..n).map(|j| a[idx(k, j)].norm_sqr()).sum::<f64>().sqrt();
            if row_norm > 0.0 && k + 2 < n {
                let ph = phase_of(a[idx(k, k + 1)]);
                let mut w: Vec<C64> = (k + 1..n).map(|j| a[idx(k, j)].conj()).collect();
                w[0] += ph.conj() * row_norm;
                let wnorm_sq: f64 = w.iter().map(|z| z.norm_sqr()).sum();
                if wnorm_sq > 0.0 {
                    let tau = 2.0 / wnorm_sq;
                    for i in k..n {
                        let mut coef = C64::new(0.0, 0.0);
                        for (l, wj) in w.iter().enumerate() {
                            coef += a[idx(i, k + 1 + l)] * wj;
                        }
                        coef *= tau;
                        for (l, wj) in w.iter().enumerate() {
                            let e = idx(i, k + 1 + l);
                            a[e] -= coef * wj.conj();
                        }
                    }
                }
            }
            beta[k] = a[idx(k, k + 1)].norm();
        }
    }
    (alpha, beta)
}

/// Number of eigenvalues of the Golub-Kahan tridiagonal strictly below x,
/// by the standard LDLᵀ pivot count with a pivot floor.
fn sturm_count(c: &[f64], x: f64, pivmin: f64) -> usize {
    let size = c.len() + 1;
    let mut count = 0usize;
    let mut d = -x;
    if d.abs() < pivmin {
        d = -pivmin;
    }
    if d < 0.0 {
        count += 1;
    }
    for i in 1..size {
        d = -x - c[i - 1] * c[i - 1] / d;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// k-th smallest eigenvalue (1-indexed) of the Golub-Kahan tridiagonal with
/// off-diagonal sequence `c`.
fn bisect_eigenvalue(c: &[f64], k: usize) -> f64 {
    let gersh = c
        .windows(2)
        .map(|w| w[0].abs() + w[1].abs())
        .chain(c.first().map(|&x| x.abs()))
        .chain(c.last().map(|&x| x.abs()))
        .fold(0.0f64, f64::max);
    let max_c2 = c.iter().map(|&x| x * x).fold(0.0f64, f64::max);
    let pivmin = 1e-300 * (1.0 + max_c2);
    let (mut lo, mut hi) = (-gersh - pivmin, gersh + pivmin);
    for _ in 0..110 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(c, mid, pivmin) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * gersh * 0.25 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn golub_kahan_offdiags(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    let mut c = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        c.push(alpha[i]);
        if i + 1 < n {
            c.push(beta[i]);
        }
    }
    c
}

/// (smallest, largest) singular values. `tol` controls only the
/// numerical-singularity snap of the smallest value: when
/// s_min² ≤ tol·s_max², the matrix counts as numerically singular and the
/// smallest singular value is reported as exactly 0.
pub fn singular_extremes(m: &ComplexMatrix, tol: f64) -> Result<(f64, f64)> {
    if !m.is_square() {
        return Err(Error::precondition("singular values of the extremes need a square matrix"));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::precondition("matrix must be nonempty"));
    }
    let (alpha, beta) = bidiagonalize(m);
    let c = golub_kahan_offdiags(&alpha, &beta);
    let s_max = bisect_eigenvalue(&c, 2 * n).max(0.0);
    let s_min = bisect_eigenvalue(&c, n + 1).max(0.0);
    let s_min = if s_min * s_min <= tol * s_max * s_max { 0.0 } else { s_min };
    Ok((s_min, s_max))
}

/// s_n(M) = inf over unit x of ‖Mx‖₂.
pub fn smallest_singular_value(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(singular_extremes(m, tol)?.0)
}

/// ‖M‖ = s₁(M).
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_extremes(m, 0.0)?.1)
}
