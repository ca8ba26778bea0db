//! Laplace-domain recovery of the interface functions.
//!
//! Constraining the truncated per-layer transforms to satisfy the interface
//! condition at every internal breakpoint produces, for each Laplace
//! variable `s`, a complex tridiagonal system `A(s) x = b(s)` whose unknowns
//! are the transformed interface functions `gbar_1 .. gbar_{m-1}`. The
//! entries combine the lifting polynomials and the eigenfunction endpoint
//! values (precomputed, the only places eigenfunctions are ever evaluated
//! here) through the split coefficients of the transformed expansion
//! coefficients `cbar_{i,n}(s)`.
//!
//! The solve is a complex Thomas elimination without pivoting; systems at
//! the inversion nodes are strongly diagonally dominant in practice, and a
//! residual check upgrades to a dense partially pivoted solve if that
//! assumption ever fails.

use num_complex::Complex64;

use crate::eigenbasis::EigenBasis;
use crate::error::{Error, Result};
use crate::liftings::{BetaTable, LiftingPair};
use crate::model::ValidatedProblem;

/// Split form of `cbar_{i,n}(s) = c1 + c2 gbar_{i-1}(s) + c3 gbar_i(s)`.
///
/// `i`, `n` are 0-based layer and mode indices.
pub fn split_coefficients(
    problem: &ValidatedProblem,
    basis: &EigenBasis,
    betas: &BetaTable,
    i: usize,
    n: usize,
    s: Complex64,
) -> (Complex64, Complex64, Complex64) {
    let d = problem.diffusivity(i);
    let lambda = basis.lambda(i, n);
    let l2 = lambda * lambda;
    let denom = s + d * l2;
    let c1 = betas.beta5[i][n] / denom;
    let c2 = d * (betas.beta3[i][n] + l2 * betas.beta1[i][n]) / denom - betas.beta1[i][n];
    let c3 = d * (betas.beta4[i][n] + l2 * betas.beta2[i][n]) / denom - betas.beta2[i][n];
    (c1, c2, c3)
}

/// The assembled tridiagonal system at one `s`.
#[derive(Debug, Clone)]
pub struct InterfaceSystem {
    pub s: Complex64,
    /// `a_{j, j-1}` for rows `j = 1..order`
    pub sub: Vec<Complex64>,
    /// `a_{j, j}` for rows `j = 0..order`
    pub diag: Vec<Complex64>,
    /// `a_{j, j+1}` for rows `j = 0..order-1`
    pub sup: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
}

impl InterfaceSystem {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// `max_j |(Ax - b)_j| / max_j |b_j|`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        let n = self.order();
        let mut worst = 0.0f64;
        let mut bscale = 0.0f64;
        for j in 0..n {
            let mut ax = self.diag[j] * x[j];
            if j > 0 {
                ax += self.sub[j - 1] * x[j - 1];
            }
            if j + 1 < n {
                ax += self.sup[j] * x[j + 1];
            }
            worst = worst.max((ax - self.rhs[j]).norm());
            bscale = bscale.max(self.rhs[j].norm());
        }
        if bscale == 0.0 {
            worst
        } else {
            worst / bscale
        }
    }
}

/// Per-layer sums of split coefficients against endpoint eigenfunction
/// values: `(S1, S2, S3)` at the requested endpoint.
fn endpoint_sums(
    problem: &ValidatedProblem,
    basis: &EigenBasis,
    betas: &BetaTable,
    i: usize,
    s: Complex64,
    right_end: bool,
) -> (Complex64, Complex64, Complex64) {
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut s3 = Complex64::new(0.0, 0.0);
    for n in 0..basis.n_modes() {
        let phi = if right_end {
            basis.at_right(i, n)
        } else {
            basis.at_left(i, n)
        };
        let (c1, c2, c3) = split_coefficients(problem, basis, betas, i, n, s);
        s1 += c1 * phi;
        s2 += c2 * phi;
        s3 += c3 * phi;
    }
    (s1, s2, s3)
}

/// Assemble `A(s) x = b(s)` given the transformed boundary data
/// `gbar0 = gbar_0(s)` and `gbarm = gbar_m(s)`.
///
/// For `m = 1` the system is empty (no internal interfaces); for `m = 2`
/// the single row carries both boundary loadings.
pub fn assemble(
    problem: &ValidatedProblem,
    basis: &EigenBasis,
    betas: &BetaTable,
    liftings: &[LiftingPair],
    s: Complex64,
    gbar0: Complex64,
    gbarm: Complex64,
) -> InterfaceSystem {
    let m = problem.layer_count();
    let order = m.saturating_sub(1);
    let mut sub = Vec::with_capacity(order.saturating_sub(1));
    let mut diag = Vec::with_capacity(order);
    let mut sup = Vec::with_capacity(order.saturating_sub(1));
    let mut rhs = Vec::with_capacity(order);
    if order == 0 {
        return InterfaceSystem {
            s,
            sub,
            diag,
            sup,
            rhs,
        };
    }

    // Endpoint sums: right end of layers 0..m-2, left end of layers 1..m-1.
    let right_sums: Vec<_> = (0..m - 1)
        .map(|i| endpoint_sums(problem, basis, betas, i, s, true))
        .collect();
    let left_sums: Vec<_> = (1..m)
        .map(|i| endpoint_sums(problem, basis, betas, i, s, false))
        .collect();

    for j in 0..order {
        let x_if = problem.layer_right(j); // interface position
        let iface = problem.interface(j);
        let theta = iface.theta;
        let (r1, r2, r3) = right_sums[j];
        let (l1, l2, l3) = left_sums[j];

        if j > 0 {
            sub.push(liftings[j].psi1.eval(x_if) + r2);
        }
        let d = liftings[j].psi2.eval(x_if) - theta * liftings[j + 1].psi1.eval(x_if)
            + iface.transfer.inverse()
            + r3
            - theta * l2;
        diag.push(d);
        if j + 1 < order {
            sup.push(-theta * liftings[j + 1].psi2.eval(x_if) - theta * l3);
        }

        let mut b = theta * l1 - r1;
        if j == 0 {
            b -= (liftings[0].psi1.eval(x_if) + r2) * gbar0;
        }
        if j == order - 1 {
            b += theta * (liftings[j + 1].psi2.eval(x_if) + l3) * gbarm;
        }
        rhs.push(b);
    }

    InterfaceSystem {
        s,
        sub,
        diag,
        sup,
        rhs,
    }
}

/// Solve the tridiagonal system; returns `gbar_1 .. gbar_{m-1}`.
///
/// Thomas elimination without pivoting, guarded by a residual check that
/// falls back to a dense partially pivoted solve.
pub fn solve(system: &InterfaceSystem) -> Result<Vec<Complex64>> {
    let n = system.order();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = system
        .diag
        .iter()
        .chain(&system.sub)
        .chain(&system.sup)
        .fold(0.0f64, |m, z| m.max(z.norm()));
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut pivot = system.diag[0];
    if pivot.norm() <= 1e-300 * scale.max(1.0) {
        return Err(Error::numerical(format!(
            "zero pivot at interface 1, s = {}",
            system.s
        )));
    }
    if n == 1 {
        return Ok(vec![system.rhs[0] / pivot]);
    }
    c_prime[0] = system.sup[0] / pivot;
    d_prime[0] = system.rhs[0] / pivot;
    for j in 1..n {
        pivot = system.diag[j] - system.sub[j - 1] * c_prime[j - 1];
        if pivot.norm() <= 1e-300 * scale.max(1.0) {
            return Err(Error::numerical(format!(
                "zero pivot at interface {}, s = {}",
                j + 1,
                system.s
            )));
        }
        if j + 1 < n {
            c_prime[j] = system.sup[j] / pivot;
        }
        d_prime[j] = (system.rhs[j] - system.sub[j - 1] * d_prime[j - 1]) / pivot;
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[n - 1] = d_prime[n - 1];
    for j in (0..n - 1).rev() {
        x[j] = d_prime[j] - c_prime[j] * x[j + 1];
    }
    if system.residual(&x) > 1e-10 {
        return dense_solve(system);
    }
    Ok(x)
}

/// Dense complex LU with partial pivoting; the safety net for
/// non-diagonally-dominant systems.
fn dense_solve(system: &InterfaceSystem) -> Result<Vec<Complex64>> {
    let n = system.order();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        a[j][j] = system.diag[j];
        if j > 0 {
            a[j][j - 1] = system.sub[j - 1];
        }
        if j + 1 < n {
            a[j][j + 1] = system.sup[j];
        }
    }
    let mut b = system.rhs.clone();
    for col in 0..n {
        let (piv_row, piv_norm) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if piv_norm == 0.0 {
            return Err(Error::numerical(format!(
                "singular interface system at s = {} (column {})",
                system.s,
                col + 1
            )));
        }
        a.swap(col, piv_row);
        b.swap(col, piv_row);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let bc = b[col];
            b[r] -= f * bc;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok(x)
}

/// Transformed field `ubar_i(x, s)` evaluated from the truncated expansion,
/// given the full set of transformed interface values
/// `gbars = [gbar_0, .., gbar_m]`.
pub fn laplace_field_at(
    problem: &ValidatedProblem,
    basis: &EigenBasis,
    betas: &BetaTable,
    liftings: &[LiftingPair],
    gbars: &[Complex64],
    i: usize,
    x: f64,
    s: Complex64,
) -> Complex64 {
    let mut u = gbars[i] * liftings[i].psi1.eval(x) + gbars[i + 1] * liftings[i].psi2.eval(x);
    for n in 0..basis.n_modes() {
        let (c1, c2, c3) = split_coefficients(problem, basis, betas, i, n, s);
        let cbar = c1 + c2 * gbars[i] + c3 * gbars[i + 1];
        u += cbar * basis.mode(i, n).eval(x);
    }
    u
}

/// Max over interfaces of the transformed constraint residual
/// `|ubar_i(l_i) - theta_i ubar_{i+1}(l_i) + gbar_i / H_i|`, with the field
/// evaluated independently of the assembly path.
pub fn laplace_constraint_residual(
    problem: &ValidatedProblem,
    basis: &EigenBasis,
    betas: &BetaTable,
    liftings: &[LiftingPair],
    gbars: &[Complex64],
    s: Complex64,
) -> f64 {
    let m = problem.layer_count();
    let mut worst = 0.0f64;
    for j in 0..m - 1 {
        let x_if = problem.layer_right(j);
        let iface = problem.interface(j);
        let u_left = laplace_field_at(problem, basis, betas, liftings, gbars, j, x_if, s);
        let u_right = laplace_field_at(problem, basis, betas, liftings, gbars, j + 1, x_if, s);
        let resid = u_left - iface.theta * u_right + iface.transfer.inverse() * gbars[j + 1];
        worst = worst.max(resid.norm());
    }
    worst
}
