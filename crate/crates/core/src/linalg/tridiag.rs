use std::ops::Range;

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

/// Eigenvalues (ascending) and, optionally, the matching orthonormal vectors.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::domain("SymTridiagonal::new", "empty diagonal"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::domain(
                "SymTridiagonal::new",
                format!(
                    "offdiag has {} entries, expected {}",
                    offdiag.len(),
                    diag.len() - 1
                ),
            ));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm(&self) -> f64 {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt() * self.norm().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.order() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection, to full
    /// working precision.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        if self.order() == 1 {
            return self.diag[0];
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm().max(f64::MIN_POSITIVE) * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an accurately known isolated eigenvalue, from a
    /// twisted factorisation of `T - λI`.
    ///
    /// The top-down and bottom-up `LDLᵀ` sweeps are joined at the index where
    /// the twist element is smallest; components are then propagated outward
    /// with the stable recurrences, which keeps small components accurate in a
    /// relative sense.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.order();
        if n == 1 {
            return vec![1.0];
        }
        let tiny = f64::EPSILON * self.norm().max(f64::MIN_POSITIVE);
        let guard = |v: f64| if v == 0.0 { tiny } else { v };

        let mut dplus = vec![0.0; n];
        dplus[0] = guard(self.diag[0] - lambda);
        for i in 1..n {
            let e = self.offdiag[i - 1];
            dplus[i] = guard(self.diag[i] - lambda - e * e / dplus[i - 1]);
        }
        let mut dminus = vec![0.0; n];
        dminus[n - 1] = guard(self.diag[n - 1] - lambda);
        for i in (0..n - 1).rev() {
            let e = self.offdiag[i];
            dminus[i] = guard(self.diag[i] - lambda - e * e / dminus[i + 1]);
        }
        let mut twist = 0;
        let mut best = f64::INFINITY;
        for r in 0..n {
            let gamma = (dplus[r] + dminus[r] - (self.diag[r] - lambda)).abs();
            if gamma < best {
                best = gamma;
                twist = r;
            }
        }

        let mut x = vec![0.0; n];
        x[twist] = 1.0;
        for i in (0..twist).rev() {
            x[i] = -(self.offdiag[i] / dplus[i]) * x[i + 1];
        }
        for i in twist + 1..n {
            x[i] = -(self.offdiag[i - 1] / dminus[i]) * x[i - 1];
        }
        normalize(&mut x);
        x
    }

    /// `(T - shift·I) y = rhs` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.order();
        let tiny = f64::EPSILON * self.norm().max(f64::MIN_POSITIVE);
        // row i of U holds columns i, i+1, i+2 (the last is pivoting fill-in)
        let mut main: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        let mut sup: Vec<f64> = self.offdiag.iter().copied().chain([0.0]).collect();
        let mut sup2 = vec![0.0; n];
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            let mut lower = self.offdiag[i];
            if lower.abs() > main[i].abs() {
                let (m, s) = (main[i], sup[i]);
                main[i] = lower;
                sup[i] = main[i + 1];
                sup2[i] = sup[i + 1];
                lower = m;
                main[i + 1] = s;
                sup[i + 1] = 0.0;
                b.swap(i, i + 1);
            }
            if main[i] == 0.0 {
                main[i] = tiny;
            }
            let factor = lower / main[i];
            main[i + 1] -= factor * sup[i];
            sup[i + 1] -= factor * sup2[i];
            b[i + 1] -= factor * b[i];
        }
        if main[n - 1] == 0.0 {
            main[n - 1] = tiny;
        }
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= sup[i] * y[i + 1];
            }
            if i + 2 < n {
                s -= sup2[i] * y[i + 2];
            }
            y[i] = s / main[i];
        }
        y
    }

    /// `T v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues with indices in `index_range` (ascending order), by Sturm
/// bisection; vectors on request.
///
/// Isolated eigenvalues get their vector from a twisted factorisation.
/// Members of a cluster (gap below `1e-3·‖T‖`) are computed by inverse
/// iteration from a fixed starting pattern, orthogonalised against the
/// earlier members of the same cluster after every step.
pub fn tridiag_eigen(
    t: &SymTridiagonal,
    want_vectors: bool,
    index_range: Range<usize>,
) -> Result<TridiagEigen> {
    let n = t.order();
    if index_range.is_empty() || index_range.end > n {
        return Err(Error::domain(
            "tridiag_eigen",
            format!("index range {index_range:?} invalid for order {n}"),
        ));
    }
    let values: Vec<f64> = index_range.clone().map(|i| t.eigenvalue(i)).collect();
    if !want_vectors {
        return Ok(TridiagEigen {
            values,
            vectors: None,
        });
    }

    let norm = t.norm().max(f64::MIN_POSITIVE);
    let cluster_gap = 1e-3 * norm;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut cluster_start = 0;
    for (j, &lambda) in values.iter().enumerate() {
        if j > 0 && lambda - values[j - 1] > cluster_gap {
            cluster_start = j;
        }
        let in_cluster = j > cluster_start
            || values
                .get(j + 1)
                .is_some_and(|&next| next - lambda <= cluster_gap);
        let v = if !in_cluster {
            t.eigenvector(lambda)
        } else {
            // deterministic start, perturbed by position in the cluster
            let mut v: Vec<f64> = (0..n)
                .map(|i| 1.0 + 0.5 * (((i * 7919 + j * 104_729) % 97) as f64 / 97.0))
                .collect();
            normalize(&mut v);
            let shift = lambda + 4.0 * f64::EPSILON * norm * (j - cluster_start) as f64;
            for _ in 0..5 {
                v = t.shifted_solve(shift, &v);
                for prev in &vectors[cluster_start..j] {
                    let d = dot(&v, prev);
                    v.iter_mut().zip(prev).for_each(|(a, b)| *a -= d * b);
                }
                normalize(&mut v);
            }
            v
        };
        vectors.push(v);
    }
    Ok(TridiagEigen {
        values,
        vectors: Some(vectors),
    })
}
