use nalgebra::{DMatrix, SymmetricEigen};

use super::{AlgebraError, BasisLabel, SparseTensor, TensorError};
use crate::numeric::{C64, ZERO};

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Q` with `Qᵀ Q = M` (plain transpose) for a symmetric matrix `M`.
///
/// Real input goes through the symmetric eigendecomposition
/// `M = U Λ Uᵀ`, `Q = Λ^{1/2} Uᵀ`, taking principal square roots of negative
/// eigenvalues. Genuinely complex input is diagonalized by congruence with
/// pivoted symmetric elimination.
pub fn symmetric_factor(m: &DMatrix<C64>, tol: f64) -> Result<DMatrix<C64>, AlgebraError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(AlgebraError::NotSquare { rows, cols });
    }
    let bound = tol * max_abs(m).max(1.0);
    for i in 0..rows {
        for j in i + 1..rows {
            if (m[(i, j)] - m[(j, i)]).norm() > bound {
                return Err(AlgebraError::MatrixNotSymmetric { i, j });
            }
        }
    }
    let sym = (m + m.transpose()) * C64::new(0.5, 0.0);
    if sym.iter().all(|z| z.im.abs() <= bound) {
        Ok(real_factor(&sym.map(|z| z.re)))
    } else {
        Ok(congruence_factor(&sym))
    }
}

fn real_factor(m: &DMatrix<f64>) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    DMatrix::from_fn(n, n, |r, c| {
        C64::new(eig.eigenvalues[r], 0.0).sqrt() * eig.eigenvectors[(c, r)]
    })
}

/// Finds `E` with `E M Eᵀ = D` diagonal, then `Q = D^{1/2} E⁻ᵀ`.
fn congruence_factor(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut e = DMatrix::<C64>::identity(n, n);
    let tiny = 1e-14 * max_abs(m).max(1.0);
    for k in 0..n {
        // pivot: largest remaining diagonal entry
        let (p, pv) = (k..n)
            .map(|i| (i, a[(i, i)].norm()))
            .fold((k, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if pv <= tiny {
            // zero diagonal: mix in the row with the largest off-diagonal
            let mut best = (k, k, 0.0);
            for i in k..n {
                for j in k..n {
                    if i != j && a[(i, j)].norm() > best.2 {
                        best = (i, j, a[(i, j)].norm());
                    }
                }
            }
            if best.2 <= tiny {
                break;
            }
            let (i, j) = (best.0, best.1);
            add_row_col(&mut a, &mut e, i, j, C64::new(1.0, 0.0));
            swap_row_col(&mut a, &mut e, k, i);
        } else {
            swap_row_col(&mut a, &mut e, k, p);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = -a[(i, k)] / piv;
            if f != ZERO {
                add_row_col(&mut a, &mut e, i, k, f);
            }
        }
    }
    let e_inv_t = e
        .clone()
        .try_inverse()
        .expect("elementary operations are invertible")
        .transpose();
    DMatrix::from_fn(n, n, |r, c| a[(r, r)].sqrt() * e_inv_t[(r, c)])
}

/// Row `i += f * row j`, column likewise, tracked in `e`.
fn add_row_col(a: &mut DMatrix<C64>, e: &mut DMatrix<C64>, i: usize, j: usize, f: C64) {
    let row_j = a.row(j).clone_owned();
    let mut row_i = a.row_mut(i);
    row_i += row_j * f;
    let col_j = a.column(j).clone_owned();
    let mut col_i = a.column_mut(i);
    col_i += col_j * f;
    let erow_j = e.row(j).clone_owned();
    let mut erow_i = e.row_mut(i);
    erow_i += erow_j * f;
}

fn swap_row_col(a: &mut DMatrix<C64>, e: &mut DMatrix<C64>, i: usize, j: usize) {
    if i != j {
        a.swap_rows(i, j);
        a.swap_columns(i, j);
        e.swap_rows(i, j);
    }
}

/// Contracts `q` (`d' x d`) against one mode: `out[.., a, ..] = Σ_b q[a, b] t[.., b, ..]`.
pub fn mode_apply(
    q: &DMatrix<C64>,
    t: &SparseTensor,
    mode: usize,
) -> Result<SparseTensor, TensorError> {
    if mode >= t.order() {
        return Err(TensorError::ModeOutOfRange {
            mode,
            order: t.order(),
        });
    }
    let mut out = SparseTensor::zeros(t.order());
    for (idx, value) in t.entries() {
        let b = idx[mode].dense_index().ok_or(TensorError::NotDense)?;
        if b >= q.ncols() {
            return Err(TensorError::ShapeMismatch {
                cols: q.ncols(),
                index: b,
            });
        }
        for a in 0..q.nrows() {
            let c = q[(a, b)];
            if c != ZERO {
                let mut key = idx.to_vec();
                key[mode] = BasisLabel::Dense(a);
                out.accumulate(key, c * value);
            }
        }
    }
    Ok(out)
}
