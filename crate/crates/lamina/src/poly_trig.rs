//! Closed-form integrals of polynomial × trigonometric products.
//!
//! Everything in the projection machinery reduces to
//! `int_0^w u^k cos(lambda u) du` and the sine analogue, which satisfy the
//! usual integration-by-parts recurrences. The `lambda = 0` limit is handled
//! exactly (pure monomial integrals) so zero modes never divide by lambda.

/// `J_k^c = int_0^w u^k cos(lambda u) du` for `k = 0..=deg`.
fn cos_moments(deg: usize, lambda: f64, w: f64) -> Vec<f64> {
    let mut jc = vec![0.0; deg + 1];
    let mut js = vec![0.0; deg + 1];
    if lambda == 0.0 {
        let mut pw = w;
        for k in 0..=deg {
            jc[k] = pw / (k as f64 + 1.0);
            pw *= w;
        }
        return jc;
    }
    let (s, c) = (lambda * w).sin_cos();
    jc[0] = s / lambda;
    js[0] = (1.0 - c) / lambda;
    let mut wk = w; // w^k
    for k in 1..=deg {
        jc[k] = wk * s / lambda - (k as f64 / lambda) * js[k - 1];
        js[k] = -wk * c / lambda + (k as f64 / lambda) * jc[k - 1];
        wk *= w;
    }
    jc
}

/// `J_k^s = int_0^w u^k sin(lambda u) du` for `k = 0..=deg`.
fn sin_moments(deg: usize, lambda: f64, w: f64) -> Vec<f64> {
    let mut jc = vec![0.0; deg + 1];
    let mut js = vec![0.0; deg + 1];
    if lambda == 0.0 {
        return js;
    }
    let (s, c) = (lambda * w).sin_cos();
    jc[0] = s / lambda;
    js[0] = (1.0 - c) / lambda;
    let mut wk = w;
    for k in 1..=deg {
        jc[k] = wk * s / lambda - (k as f64 / lambda) * js[k - 1];
        js[k] = -wk * c / lambda + (k as f64 / lambda) * jc[k - 1];
        wk *= w;
    }
    js
}

/// Re-expand a polynomial in `x` (ascending coefficients) around `x = c`,
/// returning ascending coefficients in `u = x - c`.
pub(crate) fn shift_polynomial(coeffs: &[f64], c: f64) -> Vec<f64> {
    let n = coeffs.len().max(1);
    let mut acc = vec![0.0; n];
    for &a in coeffs.iter().rev() {
        // acc <- acc * (u + c) + a, as a polynomial in u
        let mut next = vec![0.0; n];
        for (k, &v) in acc.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            next[k] += v * c;
            if k + 1 < n {
                next[k + 1] += v;
            }
        }
        next[0] += a;
        acc = next;
    }
    acc
}

/// `int_{x0}^{x0+w} poly(x) (p cos(lambda (x - x0)) + q sin(lambda (x - x0))) dx`
/// with `poly` given by ascending coefficients in the absolute coordinate.
pub(crate) fn integral_poly_wave(
    coeffs: &[f64],
    x0: f64,
    w: f64,
    lambda: f64,
    p: f64,
    q: f64,
) -> f64 {
    let local = shift_polynomial(coeffs, x0);
    let deg = local.len() - 1;
    let jc = cos_moments(deg, lambda, w);
    let js = sin_moments(deg, lambda, w);
    let mut total = 0.0;
    for (k, &a) in local.iter().enumerate() {
        if a != 0.0 {
            total += a * (p * jc[k] + q * js[k]);
        }
    }
    total
}
