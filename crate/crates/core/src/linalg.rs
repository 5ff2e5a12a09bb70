//! Small dense linear algebra over `f64` and `Complex<f64>`.
//!
//! Everything here works on tiny matrices (dimension ≤ 6): eigenvalues of a
//! 3×3 via the characteristic cubic, nullspaces by Gauss–Jordan
//! elimination, and a cyclic Jacobi eigensolver for symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
#[cfg(not(feature = "std"))]
use num_traits::Float;

pub type C = Complex<f64>;

/// Roots of `λ³ + a₂λ² + a₁λ + a₀` (Cardano, complex-safe), refined by a
/// few Newton steps.
pub fn cubic_roots(a2: C, a1: C, a0: C) -> [C; 3] {
    // depressed cubic t³ + p t + q, λ = t − a₂/3
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = a0 - a1 * a2 / 3.0 + a2 * a2 * a2 * (2.0 / 27.0);
    let mut roots = if p.norm() < 1e-14 && q.norm() < 1e-14 {
        [-shift; 3]
    } else {
        let d = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
        let s = d.sqrt();
        let mut u = (-q / 2.0 + s).cbrt();
        if u.norm() < 1e-30 {
            u = (-q / 2.0 - s).cbrt();
        }
        let v = -p / (u * 3.0);
        let w = C::new(-0.5, 0.75f64.sqrt());
        let wb = w.conj();
        [
            u + v - shift,
            u * w + v * wb - shift,
            u * wb + v * w - shift,
        ]
    };
    // Newton polish on the original cubic
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + a2) * *r + a1) * *r + a0;
            let df = (*r * 3.0 + a2 * 2.0) * *r + a1;
            if df.norm() > 1e-30 {
                *r -= f / df;
            }
        }
    }
    roots
}

/// Eigenvalues of a complex 3×3 matrix.
pub fn eigenvalues3(m: &[[C; 3]; 3]) -> [C; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = det3(m);
    // char poly: λ³ − tr λ² + minors λ − det
    cubic_roots(-tr, minors, -det)
}

pub fn det3(m: &[[C; 3]; 3]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Nullspace basis of a complex matrix given as `rows` (each of length
/// `ncols`). `tol` is the pivot threshold relative to the largest entry.
pub fn nullspace(rows: &[Vec<C>], ncols: usize, tol: f64) -> Vec<Vec<C>> {
    let mut a: Vec<Vec<C>> = rows.to_vec();
    let nrows = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(|v| v.norm()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let thresh = tol * scale;
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        // partial pivot by modulus
        let mut best = row;
        for r in row..nrows {
            if a[r][col].norm() > a[best][col].norm() {
                best = r;
            }
        }
        if row >= nrows || a[best][col].norm() <= thresh {
            continue;
        }
        a.swap(row, best);
        let inv = C::new(1.0, 0.0) / a[row][col];
        for c in col..ncols {
            a[row][c] *= inv;
        }
        for r in 0..nrows {
            if r != row {
                let factor = a[r][col];
                if factor.norm() > 0.0 {
                    for c in col..ncols {
                        let sub = factor * a[row][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![C::new(0.0, 0.0); ncols];
        v[free] = C::new(1.0, 0.0);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Real nullspace of a real matrix.
pub fn real_nullspace(rows: &[Vec<f64>], ncols: usize, tol: f64) -> Vec<Vec<f64>> {
    let crows: Vec<Vec<C>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| C::new(v, 0.0)).collect())
        .collect();
    nullspace(&crows, ncols, tol)
        .into_iter()
        .map(|v| v.into_iter().map(|z| z.re).collect())
        .collect()
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Returns `(eigenvalues, eigenvectors)` with eigenvalues
/// ascending and eigenvectors as rows of the second result, matched by
/// index.
pub fn jacobi_eigen(m: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0, f64::max)
        .max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[i][j].abs());
            }
        }
        if off < 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let evals = order.iter().map(|&i| a[i][i]).collect();
    let evecs = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (evals, evecs)
}
