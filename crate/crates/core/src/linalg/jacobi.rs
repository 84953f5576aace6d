use crate::error::{Error, Result};

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymDenseMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymDenseMatrix {
    /// Rejects matrices whose asymmetry exceeds `1e-15` relative to the
    /// largest entry; the accepted matrix is exactly symmetrised.
    pub fn new(order: usize, mut entries: Vec<f64>) -> Result<Self> {
        if order == 0 || entries.len() != order * order {
            return Err(Error::domain(
                "SymDenseMatrix::new",
                format!("{} entries for order {order}", entries.len()),
            ));
        }
        let scale = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..order {
            for j in 0..i {
                let (a, b) = (entries[i * order + j], entries[j * order + i]);
                if (a - b).abs() > 1e-15 * scale {
                    return Err(Error::domain(
                        "SymDenseMatrix::new",
                        format!("entries ({i},{j}) = {a} and ({j},{i}) = {b} differ"),
                    ));
                }
                let avg = 0.5 * (a + b);
                entries[i * order + j] = avg;
                entries[j * order + i] = avg;
            }
        }
        Ok(SymDenseMatrix { order, entries })
    }

    /// Builds the matrix from a function of the (row, column) indices,
    /// evaluating only the lower triangle.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("SymDenseMatrix::from_fn", "order 0"));
        }
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            for j in 0..=i {
                let v = f(i, j);
                entries[i * order + j] = v;
                entries[j * order + i] = v;
            }
        }
        Ok(SymDenseMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Full spectrum, sorted descending, with orthonormal eigenvectors
/// (`vectors[k]` belongs to `values[k]`).
#[derive(Debug, Clone)]
pub struct DenseEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps rotate away every off-diagonal entry that is not already negligible
/// against its diagonal pair; iteration stops once the off-diagonal Frobenius
/// norm is below `1e-15·‖A‖_F` or a whole sweep performs no rotation.
pub fn dense_sym_eigen(matrix: &SymDenseMatrix) -> Result<DenseEigen> {
    jacobi(matrix, true)
}

/// Eigenvalues only (descending); skips accumulating the rotations.
pub fn dense_sym_eigenvalues(matrix: &SymDenseMatrix) -> Result<Vec<f64>> {
    jacobi(matrix, false).map(|e| e.values)
}

fn jacobi(matrix: &SymDenseMatrix, want_vectors: bool) -> Result<DenseEigen> {
    let n = matrix.order;
    let mut a = matrix.entries.clone();
    let mut v = vec![0.0; if want_vectors { n * n } else { 0 }];
    if want_vectors {
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    let total = matrix.frobenius();
    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total || n == 1 {
            break;
        }
        if sweeps == 100 {
            return Err(Error::Convergence {
                what: "Jacobi eigensolver",
                diagnostics: format!("off-diagonal norm {off:e} after 100 sweeps (order {n})"),
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq == 0.0 {
                    continue;
                }
                // negligible against both diagonal entries: set to zero
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, n, p, q, c, s, t);
                if !want_vectors {
                    continue;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = if want_vectors {
        order
            .iter()
            .map(|&col| (0..n).map(|k| v[k * n + col]).collect())
            .collect()
    } else {
        Vec::new()
    };
    Ok(DenseEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Applies the Jacobi rotation zeroing `a[p][q]` to both sides of `a`.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let apq = a[p * n + q];
    let tau = s / (1.0 + c);
    a[p * n + p] -= t * apq;
    a[q * n + q] += t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = akp - s * (akq + tau * akp);
        let new_kq = akq + s * (akp - tau * akq);
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp;
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let mut e = vec![0.0; 25];
        for i in 0..5 {
            e[i * 5 + i] = 1.0;
        }
        let r = dense_sym_eigen(&SymDenseMatrix::new(5, e).unwrap()).unwrap();
        assert!(r.values.iter().all(|&v| v == 1.0));

        let d = SymDenseMatrix::new(3, vec![1.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        let r = dense_sym_eigen(&d).unwrap();
        assert_eq!(r.values, vec![3.0, 1.0, -2.0]);
    }

    #[test]
    fn asymmetric_input_rejected() {
        assert!(SymDenseMatrix::new(2, vec![1.0, 2.0, 2.5, 1.0]).is_err());
    }

    #[test]
    fn two_by_two_rotation() {
        let m = SymDenseMatrix::new(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let r = dense_sym_eigen(&m).unwrap();
        assert!((r.values[0] - 3.0).abs() < 1e-15 && (r.values[1] - 1.0).abs() < 1e-15);
        let v = &r.vectors[0];
        assert!((v[0].abs() - v[1].abs()).abs() < 1e-15);
    }
}
