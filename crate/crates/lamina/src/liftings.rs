//! Boundary-lifting polynomials and their eigenfunction projections.
//!
//! Each layer gets a pair `psi_1`, `psi_2` of (at most quadratic)
//! polynomials absorbing the unit loads of its two boundary conditions, so
//! that `w_i(x,t) = g_{i-1}(t) psi_{i,1}(x) + g_i(t) psi_{i,2}(x)` carries the
//! nonhomogeneous data and the remainder satisfies homogeneous BCs:
//!
//! * interior ends absorb a unit weighted flux: `gamma psi' = 1` at the
//!   loaded end and `psi' = 0` at the other;
//! * external ends absorb a unit load of the Robin form,
//!   e.g. `a_L psi(l_0) - b_L psi'(l_0) = 1`.
//!
//! The projection constants `beta_{i,k,n}` are the inner products of the
//! liftings (k = 1, 2), their exact second derivatives (k = 3, 4) and the
//! initial data (k = 5) against the normalized eigenfunctions. All but the
//! non-polynomial initial-data case are evaluated in closed form.

use crate::eigenbasis::EigenBasis;
use crate::error::{Error, Result};
use crate::model::ValidatedProblem;
use crate::poly_trig::integral_poly_wave;
use crate::quad;

/// A lifting polynomial: ascending coefficients in the absolute coordinate,
/// plus its exact (constant) second derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingPoly {
    pub coeffs: [f64; 3],
    pub second_deriv: f64,
}

impl LiftingPoly {
    fn affine(c0: f64, c1: f64) -> Self {
        LiftingPoly {
            coeffs: [c0, c1, 0.0],
            second_deriv: 0.0,
        }
    }

    fn quadratic(c0: f64, c1: f64, c2: f64) -> Self {
        LiftingPoly {
            coeffs: [c0, c1, c2],
            second_deriv: 2.0 * c2,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs[0] + x * (self.coeffs[1] + x * self.coeffs[2])
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.coeffs[1] + 2.0 * x * self.coeffs[2]
    }
}

/// The lifting pair of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingPair {
    pub psi1: LiftingPoly,
    pub psi2: LiftingPoly,
}

/// Build the lifting pair for every layer.
pub fn build_liftings(problem: &ValidatedProblem) -> Vec<LiftingPair> {
    let m = problem.layer_count();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let l = problem.layer_left(i);
        let r = problem.layer_right(i);
        let w = r - l;
        let gamma = problem.gamma(i);
        let pair = if m == 1 {
            single_layer_pair(problem, l, r)
        } else if i == 0 {
            let (a, b) = (problem.left_bc().a, problem.left_bc().b);
            if a != 0.0 {
                LiftingPair {
                    psi1: LiftingPoly::affine(1.0 / a, 0.0),
                    psi2: LiftingPoly::affine((b - a * l) / (gamma * a), 1.0 / gamma),
                }
            } else {
                LiftingPair {
                    psi1: LiftingPoly::quadratic(0.0, -r / (b * w), 1.0 / (2.0 * b * w)),
                    psi2: LiftingPoly::quadratic(0.0, -l / (gamma * w), 1.0 / (2.0 * gamma * w)),
                }
            }
        } else if i == m - 1 {
            let (a, b) = (problem.right_bc().a, problem.right_bc().b);
            if a != 0.0 {
                LiftingPair {
                    psi1: LiftingPoly::affine((-a * r - b) / (gamma * a), 1.0 / gamma),
                    psi2: LiftingPoly::affine(1.0 / a, 0.0),
                }
            } else {
                LiftingPair {
                    psi1: LiftingPoly::quadratic(0.0, r / (gamma * w), -1.0 / (2.0 * gamma * w)),
                    psi2: LiftingPoly::quadratic(0.0, -l / (b * w), 1.0 / (2.0 * b * w)),
                }
            }
        } else {
            LiftingPair {
                psi1: LiftingPoly::quadratic(0.0, r / (gamma * w), -1.0 / (2.0 * gamma * w)),
                psi2: LiftingPoly::quadratic(0.0, -l / (gamma * w), 1.0 / (2.0 * gamma * w)),
            }
        };
        out.push(pair);
    }
    out
}

/// `m = 1`: both loads are external BCs. An affine lifting works unless both
/// ends are Neumann, where a quadratic is needed per load.
fn single_layer_pair(problem: &ValidatedProblem, l: f64, r: f64) -> LiftingPair {
    let (al, bl) = (problem.left_bc().a, problem.left_bc().b);
    let (ar, br) = (problem.right_bc().a, problem.right_bc().b);
    let w = r - l;
    let det = al * (ar * w + br) + ar * bl;
    if det != 0.0 {
        // psi = c + d (x - l): left load al*c - bl*d, right load ar*(c + d w) + br*d
        let solve = |load_l: f64, load_r: f64| {
            let c = (load_l * (ar * w + br) + bl * load_r) / det;
            let d = (al * load_r - ar * load_l) / det;
            LiftingPoly::affine(c - d * l, d)
        };
        LiftingPair {
            psi1: solve(1.0, 0.0),
            psi2: solve(0.0, 1.0),
        }
    } else {
        // Pure Neumann at both ends: -bl psi'(l) = load_l, br psi'(r) = load_r.
        LiftingPair {
            psi1: LiftingPoly::quadratic(
                r * r / (2.0 * bl * w),
                -r / (bl * w),
                1.0 / (2.0 * bl * w),
            ),
            psi2: LiftingPoly::quadratic(
                l * l / (2.0 * br * w),
                -l / (br * w),
                1.0 / (2.0 * br * w),
            ),
        }
    }
}

/// Projection constants `beta_{i,k,n}`, `k = 1..=5`.
#[derive(Debug, Clone)]
pub struct BetaTable {
    /// `beta{k}[i][n]`
    pub beta1: Vec<Vec<f64>>,
    pub beta2: Vec<Vec<f64>>,
    pub beta3: Vec<Vec<f64>>,
    pub beta4: Vec<Vec<f64>>,
    pub beta5: Vec<Vec<f64>>,
}

/// Compute every projection constant.
///
/// `beta_1..4` use the closed polynomial-times-wave forms; `beta_5` does too
/// when the initial data is polynomial, and falls back to adaptive
/// quadrature (absolute tolerance 1e-12) otherwise.
pub fn compute_betas(
    problem: &ValidatedProblem,
    basis: &EigenBasis,
    liftings: &[LiftingPair],
) -> Result<BetaTable> {
    let m = problem.layer_count();
    let n_modes = basis.n_modes();
    let mut beta1 = vec![vec![0.0; n_modes]; m];
    let mut beta2 = vec![vec![0.0; n_modes]; m];
    let mut beta3 = vec![vec![0.0; n_modes]; m];
    let mut beta4 = vec![vec![0.0; n_modes]; m];
    let mut beta5 = vec![vec![0.0; n_modes]; m];
    for i in 0..m {
        let l = problem.layer_left(i);
        let w = problem.layer_width(i);
        let pair = &liftings[i];
        let poly_f = problem.initial(i).as_polynomial();
        for n in 0..n_modes {
            let mode = basis.mode(i, n);
            let wave = |coeffs: &[f64]| {
                integral_poly_wave(coeffs, l, w, mode.lambda, mode.p, mode.q)
            };
            let phi_integral = wave(&[1.0]);
            beta1[i][n] = wave(&pair.psi1.coeffs);
            beta2[i][n] = wave(&pair.psi2.coeffs);
            beta3[i][n] = pair.psi1.second_deriv * phi_integral;
            beta4[i][n] = pair.psi2.second_deriv * phi_integral;
            beta5[i][n] = match &poly_f {
                Some(coeffs) => wave(coeffs),
                None => {
                    let f = problem.initial(i).clone();
                    quad::integrate(|x| f.eval(x) * mode.eval(x), l, l + w, 1e-12).map_err(
                        |e| {
                            Error::numerical(format!(
                                "initial-data projection failed in layer {i}, mode {n}: {e}"
                            ))
                        },
                    )?
                }
            };
        }
    }
    Ok(BetaTable {
        beta1,
        beta2,
        beta3,
        beta4,
        beta5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::build_basis;
    use crate::model::{
        BoundaryFunction, BoundarySpec, InitialCondition, InterfaceSpec, LayerSpec, ProblemSpec,
        ValidatedProblem,
    };

    fn make_problem(
        m: usize,
        left: (f64, f64),
        right: (f64, f64),
        initial: InitialCondition,
    ) -> ValidatedProblem {
        let width = 1.0 / m as f64;
        let layers = (0..m)
            .map(|i| LayerSpec {
                left: i as f64 * width,
                right: (i + 1) as f64 * width,
                diffusivity: 0.5 + i as f64,
                gamma: Some(0.1 + 0.3 * i as f64),
                initial: initial.clone(),
            })
            .collect();
        ProblemSpec {
            layers,
            interfaces: vec![InterfaceSpec::PerfectContact; m.saturating_sub(1)],
            left: BoundarySpec {
                a: left.0,
                b: left.1,
                g: BoundaryFunction::zero(),
            },
            right: BoundarySpec {
                a: right.0,
                b: right.1,
                g: BoundaryFunction::zero(),
            },
        }
        .validate()
        .unwrap()
    }

    /// The four unit-load residuals defining each layer's lifting pair.
    fn check_unit_loads(p: &ValidatedProblem) {
        let liftings = build_liftings(p);
        let m = p.layer_count();
        for (i, pair) in liftings.iter().enumerate() {
            let l = p.layer_left(i);
            let r = p.layer_right(i);
            let gamma = p.gamma(i);
            let left_load = |psi: &LiftingPoly| {
                if m == 1 || i == 0 {
                    p.left_bc().a * psi.eval(l) - p.left_bc().b * psi.deriv(l)
                } else {
                    gamma * psi.deriv(l)
                }
            };
            let right_load = |psi: &LiftingPoly| {
                if m == 1 || i == m - 1 {
                    p.right_bc().a * psi.eval(r) + p.right_bc().b * psi.deriv(r)
                } else {
                    gamma * psi.deriv(r)
                }
            };
            assert!((left_load(&pair.psi1) - 1.0).abs() < 1e-13, "layer {i} psi1 left");
            assert!(right_load(&pair.psi1).abs() < 1e-13, "layer {i} psi1 right");
            assert!(left_load(&pair.psi2).abs() < 1e-13, "layer {i} psi2 left");
            assert!((right_load(&pair.psi2) - 1.0).abs() < 1e-13, "layer {i} psi2 right");
        }
    }

    #[test]
    fn unit_loads_all_bc_cases() {
        for &left in &[(1.0, 0.0), (0.0, 1.0), (2.0, 0.7)] {
            for &right in &[(1.0, 0.0), (0.0, 1.0), (0.5, 1.1)] {
                for m in [1, 2, 4] {
                    if m == 1 && left == (0.0, 1.0) && right == (0.0, 1.0) {
                        // both-Neumann single layer exercises the quadratic path
                    }
                    let p = make_problem(m, left, right, InitialCondition::Constant(0.0));
                    check_unit_loads(&p);
                }
            }
        }
    }

    #[test]
    fn first_layer_constant_lifting() {
        let p = make_problem(2, (4.0, 0.0), (0.0, 1.0), InitialCondition::Constant(0.0));
        let liftings = build_liftings(&p);
        assert_eq!(liftings[0].psi1, LiftingPoly::affine(0.25, 0.0));
    }

    #[test]
    fn middle_layer_flux_conditions() {
        // middle layer [0.5, 1.0] with gamma = 0.1 in a 3-layer unit-ish setup
        let layers = vec![
            LayerSpec {
                left: 0.0,
                right: 0.5,
                diffusivity: 1.0,
                gamma: Some(1.0),
                initial: InitialCondition::Constant(0.0),
            },
            LayerSpec {
                left: 0.5,
                right: 1.0,
                diffusivity: 1.0,
                gamma: Some(0.1),
                initial: InitialCondition::Constant(0.0),
            },
            LayerSpec {
                left: 1.0,
                right: 1.5,
                diffusivity: 1.0,
                gamma: Some(1.0),
                initial: InitialCondition::Constant(0.0),
            },
        ];
        let p = ProblemSpec {
            layers,
            interfaces: vec![InterfaceSpec::PerfectContact; 2],
            left: BoundarySpec::dirichlet(BoundaryFunction::zero()),
            right: BoundarySpec::neumann(BoundaryFunction::zero()),
        }
        .validate()
        .unwrap();
        let liftings = build_liftings(&p);
        let psi1 = &liftings[1].psi1;
        // psi1 = x (2 l_i - x) / (2 gamma w) = x (2 - x) / 0.1
        assert!((psi1.eval(0.75) - 0.75 * 1.25 / 0.1).abs() < 1e-12);
        assert!((0.1 * psi1.deriv(0.5) - 1.0).abs() < 1e-13);
        assert!(psi1.deriv(1.0).abs() < 1e-13);
    }

    #[test]
    fn dirichlet_first_layer_beta_closed_forms() {
        // a_L = 1, b_L = 0: psi1 = 1/a_L, phi_hat = sqrt(2/w) sin(lambda (x - l0))
        // => beta3 = 0 and |beta1| = sqrt(2/w) / (a_L lambda).
        let a_l = 1.0;
        let p = make_problem(2, (a_l, 0.0), (0.0, 1.0), InitialCondition::Constant(0.0));
        let basis = build_basis(&p, 10).unwrap();
        let liftings = build_liftings(&p);
        let betas = compute_betas(&p, &basis, &liftings).unwrap();
        let w = p.layer_width(0);
        for n in 0..10 {
            assert_eq!(betas.beta3[0][n], 0.0);
            let lambda = basis.lambda(0, n);
            let expect = (2.0 / w).sqrt() / (a_l * lambda);
            assert!(
                (betas.beta1[0][n].abs() - expect).abs() < 1e-13 * expect,
                "n = {n}"
            );
        }
    }

    #[test]
    fn betas_match_quadrature() {
        let p = make_problem(
            3,
            (2.0, 0.7),
            (0.0, 1.0),
            InitialCondition::Polynomial(vec![0.3, -1.0, 2.0]),
        );
        let basis = build_basis(&p, 12).unwrap();
        let liftings = build_liftings(&p);
        let betas = compute_betas(&p, &basis, &liftings).unwrap();
        for i in 0..3 {
            let (l, r) = (p.layer_left(i), p.layer_right(i));
            for n in [0, 1, 5, 11] {
                let mode = basis.mode(i, n);
                let q1 = quad::integrate(|x| liftings[i].psi1.eval(x) * mode.eval(x), l, r, 1e-14)
                    .unwrap();
                let q2 = quad::integrate(|x| liftings[i].psi2.eval(x) * mode.eval(x), l, r, 1e-14)
                    .unwrap();
                let q5 = quad::integrate(
                    |x| p.initial(i).eval(x) * mode.eval(x),
                    l,
                    r,
                    1e-14,
                )
                .unwrap();
                assert!((betas.beta1[i][n] - q1).abs() < 1e-11, "beta1 {i},{n}");
                assert!((betas.beta2[i][n] - q2).abs() < 1e-11, "beta2 {i},{n}");
                assert!((betas.beta5[i][n] - q5).abs() < 1e-11, "beta5 {i},{n}");
            }
        }
    }

    #[test]
    fn beta_decay_is_one_over_lambda() {
        let p = make_problem(2, (1.0, 0.0), (0.0, 1.0), InitialCondition::Constant(0.0));
        let n_modes = 40;
        let basis = build_basis(&p, n_modes).unwrap();
        let liftings = build_liftings(&p);
        let betas = compute_betas(&p, &basis, &liftings).unwrap();
        for i in 0..2 {
            let mut bound = 0.0f64;
            for n in 5..n_modes {
                let lam = basis.lambda(i, n);
                bound = bound.max(lam * betas.beta1[i][n].abs());
                bound = bound.max(lam * betas.beta2[i][n].abs());
            }
            // bounded, not growing: compare the tail against the head
            let head = (5..10)
                .map(|n| basis.lambda(i, n) * betas.beta1[i][n].abs())
                .fold(0.0f64, f64::max);
            assert!(bound <= 10.0 * head.max(1e-12), "layer {i}: {bound} vs {head}");
        }
    }

    #[test]
    fn modified_initial_data_projection_converges() {
        // f_tilde = f - [g_{i-1}(0) psi1 + g_i(0) psi2] re-summed from its
        // projections converges in discrete L2.
        let p = make_problem(
            2,
            (1.0, 0.0),
            (0.0, 1.0),
            InitialCondition::Polynomial(vec![1.0, 0.5]),
        );
        let liftings = build_liftings(&p);
        let (g_left0, g_right0) = (0.7, -0.3);
        let i = 0;
        let (l, r) = (p.layer_left(i), p.layer_right(i));
        let f_tilde = |x: f64| {
            p.initial(i).eval(x)
                - (g_left0 * liftings[i].psi1.eval(x) + g_right0 * liftings[i].psi2.eval(x))
        };
        let grid: Vec<f64> = (0..200).map(|k| l + (r - l) * k as f64 / 199.0).collect();
        let mut prev_err = f64::INFINITY;
        for n_modes in [8, 32, 128] {
            let basis = build_basis(&p, n_modes).unwrap();
            let coeffs: Vec<f64> = (0..n_modes)
                .map(|n| {
                    let mode = basis.mode(i, n);
                    quad::integrate(|x| f_tilde(x) * mode.eval(x), l, r, 1e-12).unwrap()
                })
                .collect();
            let err: f64 = grid
                .iter()
                .map(|&x| {
                    let s: f64 = (0..n_modes)
                        .map(|n| coeffs[n] * basis.mode(i, n).eval(x))
                        .sum();
                    (s - f_tilde(x)).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            assert!(err < prev_err, "L2 error should fall: {err} vs {prev_err}");
            prev_err = err;
        }
    }
}
