/// Normalised Legendre polynomial `P̄_k = √(k+½)·P_k` and its derivative at `x`.
pub fn legendre_eval(k: usize, x: f64) -> (f64, f64) {
    let (p, dp) = legendre_values(k, x);
    (p[k], dp[k])
}

/// `P̄_0(x) ..= P̄_kmax(x)` and their derivatives.
///
/// Uses `(j+1)P_{j+1} = (2j+1)xP_j − jP_{j−1}` and
/// `P'_{j+1} = P'_{j−1} + (2j+1)P_j`, which stays finite at `x = ±1`.
pub fn legendre_values(kmax: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; kmax + 1];
    let mut dp = vec![0.0; kmax + 1];
    p[0] = 1.0;
    if kmax >= 1 {
        p[1] = x;
        dp[1] = 1.0;
    }
    for j in 1..kmax {
        let jf = j as f64;
        p[j + 1] = ((2.0 * jf + 1.0) * x * p[j] - jf * p[j - 1]) / (jf + 1.0);
        dp[j + 1] = dp[j - 1] + (2.0 * jf + 1.0) * p[j];
    }
    for (k, (pk, dpk)) in p.iter_mut().zip(dp.iter_mut()).enumerate() {
        let s = (k as f64 + 0.5).sqrt();
        *pk *= s;
        *dpk *= s;
    }
    (p, dp)
}
