//! Classical separation-of-variables solution (time-independent boundary
//! data), used as the high-accuracy reference for small layer counts.
//!
//! The field splits into a piecewise-affine steady state plus a series over
//! globally coupled eigenfunctions
//!
//! ```text
//!   phi_i(lambda; x) = zeta_i sin(k_i (x - l_{i-1})) + xi_i cos(k_i (x - l_{i-1})),
//!   k_i = lambda / sqrt(D_i),
//! ```
//!
//! whose eigenvalues are roots of `det A(lambda) = 0` for the 2m x 2m matrix
//! collecting both external BCs and both conditions per interface. The scan
//! works on a row-rescaled determinant (spurious factors of lambda divided
//! out) so brackets touching lambda = 0 stay meaningful; the determinant is
//! evaluated by partially pivoted elimination with sign tracking, never by
//! cofactor expansion. Eigenfunctions are orthogonal under the weight
//! `p_i = gamma_i / D_i * prod_{k<i} theta_k` and are normalized in that
//! weighted norm.
//!
//! The determinant approach degrades for many layers, so eigenvalue
//! extraction is guarded at m <= 6.

use crate::assembly::{Grid, SolutionField};
use crate::error::{Error, Result};
use crate::model::ValidatedProblem;
use crate::poly_trig::integral_poly_wave;
use crate::quad;

/// Piecewise-affine steady state `w_i(x) = a_i + b_i (x - l_{i-1})`.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pieces: Vec<(f64, f64)>,
    lefts: Vec<f64>,
}

impl SteadyState {
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        let (a, b) = self.pieces[i];
        a + b * (x - self.lefts[i])
    }

    /// Slope within layer `i`.
    pub fn slope(&self, i: usize) -> f64 {
        self.pieces[i].1
    }
}

/// One global eigenpair, normalized in the weighted norm, together with its
/// series coefficient.
#[derive(Debug, Clone)]
pub struct GlobalEigenpair {
    pub lambda: f64,
    /// `(zeta_i, xi_i)` per layer.
    pub coeffs: Vec<(f64, f64)>,
    /// Projection of the shifted initial data onto this eigenfunction.
    pub series_coeff: f64,
}

impl GlobalEigenpair {
    /// Evaluate `phi_i(x)` (layer-local wave).
    pub fn eval(&self, problem: &ValidatedProblem, i: usize, x: f64) -> f64 {
        let (zeta, xi) = self.coeffs[i];
        let k = self.lambda / problem.diffusivity(i).sqrt();
        let u = x - problem.layer_left(i);
        if self.lambda == 0.0 {
            return xi;
        }
        zeta * (k * u).sin() + xi * (k * u).cos()
    }

    /// Evaluate `phi_i'(x)`.
    pub fn eval_deriv(&self, problem: &ValidatedProblem, i: usize, x: f64) -> f64 {
        let (zeta, xi) = self.coeffs[i];
        let k = self.lambda / problem.diffusivity(i).sqrt();
        let u = x - problem.layer_left(i);
        k * (zeta * (k * u).cos() - xi * (k * u).sin())
    }
}

/// Output of the eigenvalue scan.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub pairs: Vec<GlobalEigenpair>,
    /// Suspected missed roots (gap larger than twice the asymptotic
    /// spacing), reported as human-readable notes.
    pub warnings: Vec<String>,
}

/// Orthogonality weight `p_i = gamma_i D_i^{-1} prod_{k<i} theta_k`.
pub fn weight(problem: &ValidatedProblem, i: usize) -> f64 {
    let mut p = problem.gamma(i) / problem.diffusivity(i);
    for k in 0..i {
        p *= problem.interface(k).theta;
    }
    p
}

/// Solve for the steady state; requires constant boundary data and a
/// problem that pins the constant mode (not Neumann at both ends).
pub fn steady_state(problem: &ValidatedProblem) -> Result<SteadyState> {
    if !problem.constant_boundary_data() {
        return Err(Error::unsupported(
            "steady state requires time-independent boundary data",
        ));
    }
    let m = problem.layer_count();
    let n = 2 * m;
    // unknowns per layer: (a_i, b_i)
    let mut a = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    let (al, bl) = (problem.left_bc().a, problem.left_bc().b);
    let (ar, br) = (problem.right_bc().a, problem.right_bc().b);
    a[0][0] = al;
    a[0][1] = -bl;
    rhs[0] = problem.left_bc().g.at(0.0);
    for j in 0..m - 1 {
        let w_j = problem.layer_width(j);
        let iface = problem.interface(j);
        // flux: gamma_j b_j = gamma_{j+1} b_{j+1}
        let r = 1 + 2 * j;
        a[r][2 * j + 1] = iface.gamma_left;
        a[r][2 * (j + 1) + 1] = -iface.gamma_right;
        // constraint: w_j(l_j) - theta w_{j+1}(l_j) + (1/H) gamma_j b_j = 0
        let r = 2 + 2 * j;
        a[r][2 * j] = 1.0;
        a[r][2 * j + 1] = w_j + iface.transfer.inverse() * iface.gamma_left;
        a[r][2 * (j + 1)] = -iface.theta;
    }
    let wm = problem.layer_width(m - 1);
    a[n - 1][2 * (m - 1)] = ar;
    a[n - 1][2 * (m - 1) + 1] = ar * wm + br;
    rhs[n - 1] = problem.right_bc().g.at(0.0);

    let x = dense_solve(&mut a, &mut rhs).map_err(|_| {
        Error::numerical(
            "steady state is undetermined: with Neumann conditions at both ends the \
             constant mode is free (fluxes fix only the gradient)",
        )
    })?;
    let pieces = (0..m).map(|i| (x[2 * i], x[2 * i + 1])).collect();
    let lefts = (0..m).map(|i| problem.layer_left(i)).collect();
    Ok(SteadyState { pieces, lefts })
}

/// Dense partially pivoted solve used for the steady state; errors on a
/// (near-)singular matrix.
fn dense_solve(a: &mut [Vec<f64>], b: &mut [f64]) -> std::result::Result<Vec<f64>, ()> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[piv][col].abs() <= 1e-13 * scale {
            return Err(());
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

/// Build the (row-rescaled) 2m x 2m eigencondition matrix at `lambda`.
fn eigen_matrix(problem: &ValidatedProblem, lambda: f64) -> Vec<Vec<f64>> {
    let m = problem.layer_count();
    let n = 2 * m;
    let mut a = vec![vec![0.0f64; n]; n];
    let (al, bl) = (problem.left_bc().a, problem.left_bc().b);
    let (ar, br) = (problem.right_bc().a, problem.right_bc().b);
    let sd: Vec<f64> = (0..m).map(|i| problem.diffusivity(i).sqrt()).collect();
    // left BC row; divided by lambda when a_L = 0
    if al != 0.0 {
        a[0][0] = -bl * lambda / sd[0];
        a[0][1] = al;
    } else {
        a[0][0] = -bl / sd[0];
    }
    for j in 0..m - 1 {
        let k = lambda / sd[j];
        let mu = k * problem.layer_width(j);
        let (s, c) = mu.sin_cos();
        let iface = problem.interface(j);
        let hinv = iface.transfer.inverse();
        // constraint row
        let r = 1 + 2 * j;
        a[r][2 * j] = s + hinv * iface.gamma_left * k * c;
        a[r][2 * j + 1] = c - hinv * iface.gamma_left * k * s;
        a[r][2 * (j + 1) + 1] = -iface.theta;
        // flux row, divided by lambda
        let r = 2 + 2 * j;
        a[r][2 * j] = iface.gamma_left / sd[j] * c;
        a[r][2 * j + 1] = -iface.gamma_left / sd[j] * s;
        a[r][2 * (j + 1)] = -iface.gamma_right / sd[j + 1];
    }
    let k = lambda / sd[m - 1];
    let mu = k * problem.layer_width(m - 1);
    let (s, c) = mu.sin_cos();
    let r = n - 1;
    if ar != 0.0 {
        a[r][2 * (m - 1)] = ar * s + br * k * c;
        a[r][2 * (m - 1) + 1] = ar * c - br * k * s;
    } else {
        // divided by lambda
        a[r][2 * (m - 1)] = br / sd[m - 1] * c;
        a[r][2 * (m - 1) + 1] = -br / sd[m - 1] * s;
    }
    a
}

/// Determinant by partially pivoted elimination with sign tracking.
fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0f64;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Null-space vector via elimination with the last free variable set to 1.
fn null_vector(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n.saturating_sub(1) {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        if a[col][col] == 0.0 {
            continue;
        }
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    x[n - 1] = 1.0;
    for r in (0..n - 1).rev() {
        let mut acc = 0.0;
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = if a[r][r] != 0.0 { acc / a[r][r] } else { 0.0 };
    }
    x
}

/// Weighted norm squared of an eigenfunction candidate.
fn weighted_norm_sq(problem: &ValidatedProblem, lambda: f64, coeffs: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for (i, &(zeta, xi)) in coeffs.iter().enumerate() {
        let w = problem.layer_width(i);
        let p = weight(problem, i);
        if lambda == 0.0 {
            total += p * xi * xi * w;
            continue;
        }
        let k = lambda / problem.diffusivity(i).sqrt();
        let s2 = (2.0 * k * w).sin();
        let sw = (k * w).sin();
        total += p
            * ((zeta * zeta + xi * xi) * 0.5 * w + (xi * xi - zeta * zeta) * s2 / (4.0 * k)
                + zeta * xi * sw * sw / k);
    }
    total
}

/// Whether the constant function is a global eigenfunction (lambda = 0).
fn has_zero_mode(problem: &ValidatedProblem) -> bool {
    problem.left_bc().a == 0.0 && problem.right_bc().a == 0.0
}

/// Scan for the first `count` global eigenvalues and build normalized
/// eigenpairs (series coefficients are filled by [`ClassicalSolution`]).
pub fn global_eigenvalues(problem: &ValidatedProblem, count: usize) -> Result<Spectrum> {
    let m = problem.layer_count();
    if m > 6 {
        return Err(Error::unsupported(format!(
            "global eigenvalue scan is limited to m <= 6 layers (got {m}); the determinant \
             method degrades beyond that"
        )));
    }
    let mut pairs: Vec<GlobalEigenpair> = Vec::with_capacity(count);
    let mut warnings = Vec::new();
    if has_zero_mode(problem) {
        // Constant mode: xi_i follows the theta chain, zeta_i = 0.
        let mut coeffs = vec![(0.0, 0.0); m];
        let mut xi = 1.0;
        coeffs[m - 1] = (0.0, 1.0);
        for i in (0..m - 1).rev() {
            xi *= problem.interface(i).theta;
            coeffs[i] = (0.0, xi);
        }
        let norm = weighted_norm_sq(problem, 0.0, &coeffs).sqrt();
        for c in coeffs.iter_mut() {
            c.1 /= norm;
        }
        pairs.push(GlobalEigenpair {
            lambda: 0.0,
            coeffs,
            series_coeff: 0.0,
        });
    }
    // Scan step: 1/20 of the smallest per-layer asymptotic spacing.
    let step = (0..m)
        .map(|i| std::f64::consts::PI * problem.diffusivity(i).sqrt() / problem.layer_width(i))
        .fold(f64::INFINITY, f64::min)
        / 20.0;
    // Mean asymptotic spacing of the full spectrum, for the missed-root check.
    let mean_spacing = std::f64::consts::PI
        / (0..m)
            .map(|i| problem.layer_width(i) / problem.diffusivity(i).sqrt())
            .sum::<f64>();
    let det_at = |lambda: f64| determinant(eigen_matrix(problem, lambda));
    let mut lo = step * 1e-6;
    let mut f_lo = det_at(lo);
    let mut last_root: Option<f64> = None;
    let mut guard = 0usize;
    while pairs.len() < count {
        guard += 1;
        if guard > 2_000_000 {
            return Err(Error::numerical(
                "global eigenvalue scan exceeded its search budget",
            ));
        }
        let hi = lo + step;
        let f_hi = det_at(hi);
        if f_lo == 0.0 {
            // exactly on a root; nudge
            lo += step * 1e-9;
            f_lo = det_at(lo);
            continue;
        }
        if f_lo.signum() != f_hi.signum() {
            let root = bisect(&det_at, lo, hi, f_lo)?;
            if let Some(prev) = last_root {
                if root - prev > 2.0 * mean_spacing {
                    warnings.push(format!(
                        "possible missed eigenvalue in ({prev:.6}, {root:.6}): gap exceeds twice \
                         the asymptotic spacing {mean_spacing:.6}"
                    ));
                }
            }
            last_root = Some(root);
            let coeffs_raw = null_vector(eigen_matrix(problem, root));
            let mut coeffs: Vec<(f64, f64)> = (0..m)
                .map(|i| (coeffs_raw[2 * i], coeffs_raw[2 * i + 1]))
                .collect();
            let norm = weighted_norm_sq(problem, root, &coeffs).sqrt();
            for c in coeffs.iter_mut() {
                c.0 /= norm;
                c.1 /= norm;
            }
            pairs.push(GlobalEigenpair {
                lambda: root,
                coeffs,
                series_coeff: 0.0,
            });
        }
        lo = hi;
        f_lo = f_hi;
    }
    pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(Spectrum { pairs, warnings })
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * mid.max(1.0) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::numerical(format!(
        "bisection failed to converge in [{lo}, {hi}]"
    )))
}

/// Steady state plus eigenpairs with series coefficients: the complete
/// classical solution.
#[derive(Debug, Clone)]
pub struct ClassicalSolution {
    problem: ValidatedProblem,
    steady: SteadyState,
    pairs: Vec<GlobalEigenpair>,
    pub warnings: Vec<String>,
}

impl ClassicalSolution {
    pub fn new(problem: ValidatedProblem, count: usize) -> Result<Self> {
        let steady = steady_state(&problem)?;
        let spectrum = global_eigenvalues(&problem, count)?;
        let mut pairs = spectrum.pairs;
        for pair in pairs.iter_mut() {
            pair.series_coeff = project_initial(&problem, &steady, pair)?;
        }
        Ok(ClassicalSolution {
            problem,
            steady,
            pairs,
            warnings: spectrum.warnings,
        })
    }

    pub fn steady(&self) -> &SteadyState {
        &self.steady
    }

    pub fn eigenpairs(&self) -> &[GlobalEigenpair] {
        &self.pairs
    }

    pub fn problem(&self) -> &ValidatedProblem {
        &self.problem
    }

    /// Pointwise field value with the first `n_terms` eigenpairs.
    pub fn eval_truncated(&self, i: usize, x: f64, t: f64, n_terms: usize) -> f64 {
        if t <= 0.0 {
            return self.problem.initial(i).eval(x);
        }
        let mut u = self.steady.eval(i, x);
        for pair in self.pairs.iter().take(n_terms) {
            u += pair.series_coeff * (-t * pair.lambda * pair.lambda).exp()
                * pair.eval(&self.problem, i, x);
        }
        u
    }

    pub fn eval(&self, i: usize, x: f64, t: f64) -> f64 {
        self.eval_truncated(i, x, t, self.pairs.len())
    }

    /// Evaluate on a grid in the same field layout the semi-analytical
    /// solver produces.
    pub fn evaluate(&self, grid: &Grid) -> Result<SolutionField> {
        let m = self.problem.layer_count();
        let mut values = Vec::with_capacity(grid.times.len());
        let mut interface_g = Vec::with_capacity(grid.times.len());
        for &t in &grid.times {
            let field_t: Vec<Vec<f64>> = (0..m)
                .map(|i| grid.xs[i].iter().map(|&x| self.eval(i, x, t)).collect())
                .collect();
            let mut g_row = vec![0.0; m + 1];
            g_row[0] = self.problem.left_bc().g.at(t);
            g_row[m] = self.problem.right_bc().g.at(t);
            for j in 1..m {
                let x_if = self.problem.layer_right(j - 1);
                let mut flux = self.problem.gamma(j - 1) * self.steady.slope(j - 1);
                if t > 0.0 {
                    for pair in &self.pairs {
                        flux += self.problem.gamma(j - 1)
                            * pair.series_coeff
                            * (-t * pair.lambda * pair.lambda).exp()
                            * pair.eval_deriv(&self.problem, j - 1, x_if);
                    }
                }
                g_row[j] = flux;
            }
            interface_g.push(g_row);
            values.push(field_t);
        }
        Ok(SolutionField {
            times: grid.times.clone(),
            xs: grid.xs.clone(),
            values,
            interface_g,
            n_modes: self.pairs.len(),
            inversion_order: 0,
        })
    }
}

/// `c_n = sum_i int p_i (f_i - w_i) phi_i dx` (the weighted norm is 1).
fn project_initial(
    problem: &ValidatedProblem,
    steady: &SteadyState,
    pair: &GlobalEigenpair,
) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..problem.layer_count() {
        let p = weight(problem, i);
        let (l, w) = (problem.layer_left(i), problem.layer_width(i));
        let (zeta, xi) = pair.coeffs[i];
        let k = pair.lambda / problem.diffusivity(i).sqrt();
        let (a0, b0) = (steady.eval(i, l), steady.slope(i));
        // steady state as absolute-x polynomial
        let w_poly = [a0 - b0 * l, b0];
        let contrib = match problem.initial(i).as_polynomial() {
            Some(mut f_poly) => {
                // f - w as one polynomial
                if f_poly.len() < 2 {
                    f_poly.resize(2, 0.0);
                }
                f_poly[0] -= w_poly[0];
                f_poly[1] -= w_poly[1];
                integral_poly_wave(&f_poly, l, w, k, xi, zeta)
            }
            None => {
                let f = problem.initial(i).clone();
                let steady_i = move |x: f64| w_poly[0] + w_poly[1] * x;
                quad::integrate(
                    |x| {
                        let u = x - l;
                        let phi = if pair.lambda == 0.0 {
                            xi
                        } else {
                            zeta * (k * u).sin() + xi * (k * u).cos()
                        };
                        (f.eval(x) - steady_i(x)) * phi
                    },
                    l,
                    l + w,
                    1e-13,
                )?
            }
        };
        total += p * contrib;
    }
    Ok(total)
}
