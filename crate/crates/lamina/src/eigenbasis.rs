//! Per-layer eigenvalues and orthonormal eigenfunctions.
//!
//! Splitting off the interface functions leaves each layer with a homogeneous
//! single-layer problem: the first layer keeps the (homogenized) external BC
//! on the left and gets a Neumann condition on the right, middle layers are
//! Neumann–Neumann, the last layer is mirrored, and a single-layer problem
//! keeps both external BCs. Every eigenfunction is a pure wave
//!
//! ```text
//!   phi(x) = p cos(lambda (x - l_left)) + q sin(lambda (x - l_left))
//! ```
//!
//! with `(p, q)` pinned by the left end condition and `lambda` by the right
//! one. The Neumann–Neumann combination has closed-form eigenvalues
//! `n pi / width`; mixed Dirichlet cases are also closed form; Robin ends
//! produce a tangent-type transcendental condition solved by bracketed
//! bisection (one root per bracket by Sturm oscillation) plus one safeguarded
//! Newton polish. Normalization constants are closed form in all cases.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::ValidatedProblem;

/// Homogeneous end condition of a single-layer eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndCondition {
    Dirichlet,
    Neumann,
    /// `a phi -/+ b phi' = 0` with `a > 0`, `b > 0` (sign per side).
    Robin { a: f64, b: f64 },
}

impl EndCondition {
    fn from_bc(a: f64, b: f64) -> Self {
        if b == 0.0 {
            EndCondition::Dirichlet
        } else if a == 0.0 {
            EndCondition::Neumann
        } else {
            EndCondition::Robin { a, b }
        }
    }
}

/// One eigenmode: `phi_hat(x) = p cos(lambda (x - anchor)) + q sin(lambda (x - anchor))`.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    /// Left endpoint of the layer.
    pub anchor: f64,
}

impl Mode {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if self.lambda == 0.0 {
            return self.p;
        }
        let (s, c) = (self.lambda * (x - self.anchor)).sin_cos();
        self.p * c + self.q * s
    }

    /// Derivative `phi_hat'(x)`.
    #[inline]
    pub fn eval_deriv(&self, x: f64) -> f64 {
        if self.lambda == 0.0 {
            return 0.0;
        }
        let (s, c) = (self.lambda * (x - self.anchor)).sin_cos();
        self.lambda * (-self.p * s + self.q * c)
    }
}

#[derive(Debug, Clone)]
pub struct LayerBasis {
    pub left_kind: EndCondition,
    pub right_kind: EndCondition,
    left: f64,
    right: f64,
    lambdas: Vec<f64>,
    /// `(p, q)` already scaled by `1 / ||phi||`.
    coeffs: Vec<(f64, f64)>,
    norms: Vec<f64>,
    at_left: Vec<f64>,
    at_right: Vec<f64>,
}

/// Per-layer eigenpairs for the reformulated problem, truncated at `N` modes.
///
/// Immutable after construction; evaluation is pure.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    n_modes: usize,
    layers: Vec<LayerBasis>,
}

/// Raw (unnormalized) shape from the left end condition:
/// Dirichlet -> sin, Neumann -> cos, Robin(a,b) -> b lambda cos + a sin.
fn left_shape(kind: EndCondition, lambda: f64) -> (f64, f64) {
    match kind {
        EndCondition::Dirichlet => (0.0, 1.0),
        EndCondition::Neumann => (1.0, 0.0),
        EndCondition::Robin { a, b } => (b * lambda, a),
    }
}

/// Eigenvalue condition G(lambda) = 0 imposed by the right end on the
/// left-shape wave, with spurious factors of lambda stripped so brackets
/// touching lambda = 0 do not see a fake root. Only the Robin-involving
/// combinations reach this function; the rest are closed form.
fn eigen_condition(left: EndCondition, right: EndCondition, width: f64, lambda: f64) -> f64 {
    use EndCondition::*;
    let mu = lambda * width;
    let (s, c) = mu.sin_cos();
    match (left, right) {
        // tan(mu) = a / (b lambda); G = dphi / lambda up to sign conventions
        (Robin { a, b }, Neumann) | (Neumann, Robin { a, b }) => a * c - b * lambda * s,
        // tan(mu) = -b lambda / a
        (Dirichlet, Robin { a, b }) | (Robin { a, b }, Dirichlet) => a * s + b * lambda * c,
        (Robin { a: a0, b: b0 }, Robin { a: a1, b: b1 }) => {
            // (a1 phi + b1 phi') / lambda with phi = b0 lambda cos + a0 sin
            if lambda == 0.0 {
                (a1 * b0 + b1 * a0) + a1 * a0 * width
            } else {
                (a1 * b0 + b1 * a0) * c + (a1 * a0 - b1 * b0 * lambda * lambda) * s / lambda
            }
        }
        _ => unreachable!("closed-form case reached the transcendental path"),
    }
}

/// Bracket `(lo, hi)` in units of `pi / width` containing the n-th root.
fn bracket(left: EndCondition, right: EndCondition, n: usize) -> (f64, f64) {
    let n = n as f64;
    match (left, right) {
        // tan(mu) = a/(b lambda): roots in (n pi, (n + 1/2) pi)
        (EndCondition::Neumann, EndCondition::Robin { .. })
        | (EndCondition::Robin { .. }, EndCondition::Neumann) => (n, n + 0.5),
        // tan(mu) = -b lambda / a: roots in ((n + 1/2) pi, (n + 1) pi)
        (EndCondition::Dirichlet, EndCondition::Robin { .. })
        | (EndCondition::Robin { .. }, EndCondition::Dirichlet) => (n + 0.5, n + 1.0),
        // Robin both ends: one root per (n pi, (n + 1) pi)
        (EndCondition::Robin { .. }, EndCondition::Robin { .. }) => (n, n + 1.0),
        _ => unreachable!("closed-form case reached the bracketing path"),
    }
}

/// n-th eigenvalue (n = 0, 1, ...) of the single-layer problem.
fn nth_eigenvalue(
    left: EndCondition,
    right: EndCondition,
    width: f64,
    n: usize,
    layer: usize,
) -> Result<f64> {
    use EndCondition::*;
    let base = std::f64::consts::PI / width;
    match (left, right) {
        (Neumann, Neumann) => Ok(n as f64 * base),
        (Dirichlet, Neumann) | (Neumann, Dirichlet) => Ok((n as f64 + 0.5) * base),
        (Dirichlet, Dirichlet) => Ok((n as f64 + 1.0) * base),
        _ => {
            let (lo_k, hi_k) = bracket(left, right, n);
            let mut lo = lo_k * base;
            let mut hi = hi_k * base;
            let g = |lam: f64| eigen_condition(left, right, width, lam);
            let mut glo = g(lo);
            let ghi = g(hi);
            if glo == 0.0 {
                return Ok(lo);
            }
            if ghi == 0.0 {
                return Ok(hi);
            }
            if glo.signum() == ghi.signum() {
                return Err(Error::numerical(format!(
                    "eigenvalue bracket without sign change: layer {layer}, mode {n}, bracket [{lo}, {hi}]"
                )));
            }
            // Bisection to 1e-14 relative.
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (hi - lo) <= 1e-14 * mid.max(base) {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    return Ok(mid);
                }
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            let mid = 0.5 * (lo + hi);
            // One safeguarded Newton polish with a numerical derivative.
            let h = 1e-7 * mid.max(base);
            let d = (g(mid + h) - g(mid - h)) / (2.0 * h);
            let newton = mid - g(mid) / d;
            if d != 0.0 && newton > lo && newton < hi {
                Ok(newton)
            } else {
                Ok(mid)
            }
        }
    }
}

/// Closed-form `||phi||^2` for `phi = p cos(lambda u) + q sin(lambda u)` on `[0, w]`.
fn norm_squared(p: f64, q: f64, lambda: f64, w: f64) -> f64 {
    if lambda == 0.0 {
        return p * p * w;
    }
    let s2 = (2.0 * lambda * w).sin();
    let sw = (lambda * w).sin();
    (p * p + q * q) * 0.5 * w + (p * p - q * q) * s2 / (4.0 * lambda) + p * q * sw * sw / lambda
}

/// The end conditions of layer `i`'s homogeneous problem.
fn layer_conditions(problem: &ValidatedProblem, i: usize) -> (EndCondition, EndCondition) {
    let m = problem.layer_count();
    let left = if i == 0 {
        EndCondition::from_bc(problem.left_bc().a, problem.left_bc().b)
    } else {
        EndCondition::Neumann
    };
    let right = if i == m - 1 {
        EndCondition::from_bc(problem.right_bc().a, problem.right_bc().b)
    } else {
        EndCondition::Neumann
    };
    (left, right)
}

/// Build the truncated eigenbasis for every layer.
pub fn build_basis(problem: &ValidatedProblem, n_modes: usize) -> Result<EigenBasis> {
    if n_modes == 0 {
        return Err(Error::Domain("eigenvalue count N must be >= 1".into()));
    }
    let mut layers = Vec::with_capacity(problem.layer_count());
    for i in 0..problem.layer_count() {
        let (lk, rk) = layer_conditions(problem, i);
        let l = problem.layer_left(i);
        let r = problem.layer_right(i);
        let w = r - l;
        let mut lambdas = Vec::with_capacity(n_modes);
        let mut coeffs = Vec::with_capacity(n_modes);
        let mut norms = Vec::with_capacity(n_modes);
        let mut at_left = Vec::with_capacity(n_modes);
        let mut at_right = Vec::with_capacity(n_modes);
        for n in 0..n_modes {
            let lambda = nth_eigenvalue(lk, rk, w, n, i)?;
            let (p, q) = if lambda == 0.0 {
                (1.0, 0.0)
            } else {
                left_shape(lk, lambda)
            };
            let ns = norm_squared(p, q, lambda, w);
            let norm = ns.sqrt();
            let (ph, qh) = (p / norm, q / norm);
            let mode = Mode {
                lambda,
                p: ph,
                q: qh,
                anchor: l,
            };
            lambdas.push(lambda);
            coeffs.push((ph, qh));
            norms.push(norm);
            at_left.push(mode.eval(l));
            at_right.push(mode.eval(r));
        }
        layers.push(LayerBasis {
            left_kind: lk,
            right_kind: rk,
            left: l,
            right: r,
            lambdas,
            coeffs,
            norms,
            at_left,
            at_right,
        });
    }
    Ok(EigenBasis { n_modes, layers })
}

impl EigenBasis {
    /// Truncation count `N`.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, i: usize) -> &LayerBasis {
        &self.layers[i]
    }

    pub fn lambda(&self, i: usize, n: usize) -> f64 {
        self.layers[i].lambdas[n]
    }

    /// Pre-normalization `||phi_{i,n}||_2`.
    pub fn norm(&self, i: usize, n: usize) -> f64 {
        self.layers[i].norms[n]
    }

    pub fn mode(&self, i: usize, n: usize) -> Mode {
        let layer = &self.layers[i];
        let (p, q) = layer.coeffs[n];
        Mode {
            lambda: layer.lambdas[n],
            p,
            q,
            anchor: layer.left,
        }
    }

    /// `phi_hat_{i,n}(l_{i-1})`, precomputed.
    #[inline]
    pub fn at_left(&self, i: usize, n: usize) -> f64 {
        self.layers[i].at_left[n]
    }

    /// `phi_hat_{i,n}(l_i)`, precomputed.
    #[inline]
    pub fn at_right(&self, i: usize, n: usize) -> f64 {
        self.layers[i].at_right[n]
    }

    /// Evaluate `phi_hat_{i,n}(x)`; `x` must lie inside layer `i`.
    pub fn eval(&self, i: usize, n: usize, x: f64) -> Result<f64> {
        let layer = &self.layers[i];
        if x < layer.left || x > layer.right {
            return Err(Error::Domain(format!(
                "x = {x} outside layer {i} = [{}, {}]",
                layer.left, layer.right
            )));
        }
        Ok(self.mode(i, n).eval(x))
    }

    /// CSV dump `(layer, n, lambda, norm)` for inspection.
    pub fn write_debug_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "layer,n,lambda,norm")?;
        for (i, layer) in self.layers.iter().enumerate() {
            for n in 0..self.n_modes {
                writeln!(
                    out,
                    "{},{},{:.17e},{:.17e}",
                    i, n, layer.lambdas[n], layer.norms[n]
                )?;
            }
        }
        Ok(())
    }
}
