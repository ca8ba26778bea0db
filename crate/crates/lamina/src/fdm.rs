//! Crank–Nicolson finite-difference reference solver.
//!
//! Verification-only: second order in space and time, all interface
//! families, time-dependent boundary data, and nothing clever. Each
//! interface carries two unknowns (left and right limits) because the
//! solution is genuinely discontinuous there for finite transfer or
//! partition conditions.
//!
//! Space is discretized by finite volumes: interior nodes own full cells,
//! end and interface nodes own half cells, and all fluxes are midpoint
//! differences. That makes the discrete (gamma/D)-weighted mass telescopic,
//! so for continuity interfaces with `gamma = D` and no-flux external
//! conditions total mass is conserved to roundoff per step. With an
//! infinite transfer coefficient the left limit is eliminated through
//! `uL = theta uR`, keeping the system tridiagonal; finite transfer keeps
//! both unknowns and couples them through the jump law.
//!
//! Time stepping is Crank–Nicolson with boundary data averaged over each
//! step, with the first two steps replaced by four backward-Euler half
//! steps to damp the ringing a discontinuous start would otherwise feed
//! into the trapezoidal rule.

use crate::assembly::{Grid, SolutionField};
use crate::error::{Error, Result};
use crate::model::{ContactTransfer, ValidatedProblem};

/// Node bookkeeping: each (layer, node) either owns an unknown or mirrors
/// the right-limit unknown scaled by theta.
#[derive(Debug, Clone, Copy)]
enum NodeRef {
    Own(usize),
    Scaled(usize, f64),
}

/// Assembled spatial discretization.
#[derive(Debug, Clone)]
pub struct Discretization {
    problem: ValidatedProblem,
    divisions: Vec<usize>,
    h: Vec<f64>,
    index: Vec<Vec<NodeRef>>,
    n_unknowns: usize,
    /// diagonal mass (FV cell volume, possibly gamma/D-weighted); zero for
    /// algebraic rows
    mass: Vec<f64>,
    /// tridiagonal stiffness: K u + r(t)
    k_sub: Vec<f64>,
    k_diag: Vec<f64>,
    k_sup: Vec<f64>,
    /// boundary-data injection: r(t) = r_left * g0(t) + r_right * gm(t)
    r_left: Vec<f64>,
    r_right: Vec<f64>,
}

impl Discretization {
    /// Build the mesh and operator; `divisions[i]` cells in layer `i`.
    pub fn new(problem: &ValidatedProblem, divisions: &[usize]) -> Result<Self> {
        let m = problem.layer_count();
        if divisions.len() != m {
            return Err(Error::Domain(format!(
                "need one division count per layer ({m}), got {}",
                divisions.len()
            )));
        }
        if divisions.iter().any(|&k| k < 2) {
            return Err(Error::Domain("at least 2 cells per layer".into()));
        }
        let h: Vec<f64> = (0..m)
            .map(|i| problem.layer_width(i) / divisions[i] as f64)
            .collect();

        // Assign unknown indices; eliminate uL where the transfer is
        // infinite (uL = theta uR).
        let mut index: Vec<Vec<NodeRef>> = Vec::with_capacity(m);
        let mut next = 0usize;
        for i in 0..m {
            let mut layer = Vec::with_capacity(divisions[i] + 1);
            for j in 0..=divisions[i] {
                let is_right_interface = i + 1 < m && j == divisions[i];
                if is_right_interface && problem.interface(i).transfer.is_infinite() {
                    // right-limit unknown will be the next layer's node 0,
                    // which is `next` after this loop ends
                    layer.push(NodeRef::Scaled(next, problem.interface(i).theta));
                } else {
                    layer.push(NodeRef::Own(next));
                    next += 1;
                }
            }
            index.push(layer);
        }
        let n = next;

        let mut mass = vec![0.0; n];
        let mut k_sub = vec![0.0; n];
        let mut k_diag = vec![0.0; n];
        let mut k_sup = vec![0.0; n];
        let mut r_left = vec![0.0; n];
        let mut r_right = vec![0.0; n];

        let own = |nr: NodeRef| -> usize {
            match nr {
                NodeRef::Own(k) => k,
                NodeRef::Scaled(k, _) => k,
            }
        };

        // Interior rows: full cells, midpoint fluxes. A right neighbour that
        // is an eliminated interface node contributes theta * uR.
        for i in 0..m {
            let d = problem.diffusivity(i);
            for j in 1..divisions[i] {
                let row = own(index[i][j]);
                mass[row] = h[i];
                let c = d / h[i];
                k_diag[row] += -2.0 * c;
                k_sub[row] += c;
                match index[i][j + 1] {
                    NodeRef::Own(_) => k_sup[row] += c,
                    NodeRef::Scaled(_, theta) => k_sup[row] += c * theta,
                }
            }
        }

        // External ends.
        let (al, bl) = (problem.left_bc().a, problem.left_bc().b);
        {
            let left_dirichlet = bl == 0.0;
            let d = problem.diffusivity(0);
            let row = own(index[0][0]);
            if left_dirichlet {
                // algebraic: u0 = g0(t) / aL
                k_diag[row] = 1.0;
                r_left[row] = 1.0 / al;
            } else {
                // (h/2) u0' = D (u1 - u0)/h - D (aL u0 - g0)/bL
                mass[row] = 0.5 * h[0];
                let c = d / h[0];
                k_diag[row] += -c - d * al / bl;
                k_sup[row] += c;
                r_left[row] = d / bl;
            }
        }
        let (ar, br) = (problem.right_bc().a, problem.right_bc().b);
        {
            let right_dirichlet = br == 0.0;
            let i = m - 1;
            let d = problem.diffusivity(i);
            let row = own(index[i][divisions[i]]);
            if right_dirichlet {
                k_diag[row] = 1.0;
                r_right[row] = 1.0 / ar;
            } else {
                // (h/2) uK' = D (g - aR uK)/bR - D (uK - u_{K-1})/h
                mass[row] = 0.5 * h[i];
                let c = d / h[i];
                k_diag[row] += -c - d * ar / br;
                k_sub[row] += c;
                r_right[row] = d / br;
            }
        }

        // Interface rows.
        for iface_idx in 0..m.saturating_sub(1) {
            let i = iface_idx;
            let iface = problem.interface(i);
            let (dl, dr) = (problem.diffusivity(i), problem.diffusivity(i + 1));
            let (gl, gr) = (iface.gamma_left, iface.gamma_right);
            let theta = iface.theta;
            let p_right = own(index[i + 1][0]);
            match iface.transfer {
                ContactTransfer::Finite(hc) => {
                    let p_left = own(index[i][divisions[i]]);
                    debug_assert_eq!(p_left + 1, p_right);
                    // left half cell: (h/2) uL' = (D/g) H (theta uR - uL) - D (uL - prev)/h
                    mass[p_left] = 0.5 * h[i];
                    let c = dl / h[i];
                    k_sub[p_left] += c;
                    k_diag[p_left] += -c - dl / gl * hc;
                    k_sup[p_left] += dl / gl * hc * theta;
                    // right half cell: (h'/2) uR' = D'(next - uR)/h' - (D'/g') H (theta uR - uL)
                    mass[p_right] = 0.5 * h[i + 1];
                    let c = dr / h[i + 1];
                    k_sup[p_right] += c;
                    k_diag[p_right] += -c - dr / gr * hc * theta;
                    k_sub[p_right] += dr / gr * hc;
                }
                ContactTransfer::Infinite => {
                    // uL eliminated: weighted sum of the two half-cell
                    // balances (the interface flux cancels):
                    // (gl h/(2 dl)) uL' + (gr h'/(2 dr)) uR'
                    //   = gr (next - uR)/h' - gl (uL - prev)/h,  uL = theta uR
                    mass[p_right] =
                        gl * h[i] / (2.0 * dl) * theta + gr * h[i + 1] / (2.0 * dr);
                    k_sub[p_right] += gl / h[i];
                    k_diag[p_right] += -gl / h[i] * theta - gr / h[i + 1];
                    k_sup[p_right] += gr / h[i + 1];
                }
            }
        }

        Ok(Discretization {
            problem: problem.clone(),
            divisions: divisions.to_vec(),
            h,
            index,
            n_unknowns: n,
            mass,
            k_sub,
            k_diag,
            k_sup,
            r_left,
            r_right,
        })
    }

    fn initial_state(&self) -> Vec<f64> {
        let m = self.problem.layer_count();
        let mut u = vec![0.0; self.n_unknowns];
        for i in 0..m {
            for j in 0..=self.divisions[i] {
                if let NodeRef::Own(k) = self.index[i][j] {
                    let x = self.problem.layer_left(i) + j as f64 * self.h[i];
                    u[k] = self.problem.initial(i).eval(x);
                }
            }
        }
        u
    }

    /// One implicit step `(M/dt - w K) u+ = M/dt u + (rest)`; `w = 1` is
    /// backward Euler, `w = 1/2` Crank–Nicolson (with the explicit half
    /// added to the right side by the caller through `rhs`).
    fn step(
        &self,
        u: &[f64],
        dt: f64,
        t_old: f64,
        t_new: f64,
        crank_nicolson: bool,
    ) -> Result<Vec<f64>> {
        let n = self.n_unknowns;
        let w = if crank_nicolson { 0.5 } else { 1.0 };
        let g0_old = self.problem.left_bc().g.at(t_old);
        let g0_new = self.problem.left_bc().g.at(t_new);
        let gm_old = self.problem.right_bc().g.at(t_old);
        let gm_new = self.problem.right_bc().g.at(t_new);
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for row in 0..n {
            if self.mass[row] == 0.0 {
                // algebraic (Dirichlet) row, imposed at the new time
                sub[row] = self.k_sub[row];
                diag[row] = self.k_diag[row];
                sup[row] = self.k_sup[row];
                rhs[row] = self.r_left[row] * g0_new + self.r_right[row] * gm_new;
                continue;
            }
            let mdt = self.mass[row] / dt;
            sub[row] = -w * self.k_sub[row];
            diag[row] = mdt - w * self.k_diag[row];
            sup[row] = -w * self.k_sup[row];
            let mut explicit = mdt * u[row];
            if crank_nicolson {
                if row > 0 {
                    explicit += 0.5 * self.k_sub[row] * u[row - 1];
                }
                explicit += 0.5 * self.k_diag[row] * u[row];
                if row + 1 < n {
                    explicit += 0.5 * self.k_sup[row] * u[row + 1];
                }
                explicit += 0.5 * (self.r_left[row] * (g0_old + g0_new))
                    + 0.5 * (self.r_right[row] * (gm_old + gm_new));
            } else {
                explicit += self.r_left[row] * g0_new + self.r_right[row] * gm_new;
            }
            rhs[row] = explicit;
        }
        // Thomas solve.
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        let mut piv = diag[0];
        if piv == 0.0 {
            return Err(Error::numerical("singular step matrix at row 0"));
        }
        if n > 1 {
            c_prime[0] = sup[0] / piv;
        }
        d_prime[0] = rhs[0] / piv;
        for r in 1..n {
            piv = diag[r] - sub[r] * c_prime[r - 1];
            if piv == 0.0 {
                return Err(Error::numerical(format!(
                    "singular step matrix at row {r} (inconsistent interface row?)"
                )));
            }
            if r + 1 < n {
                c_prime[r] = sup[r] / piv;
            }
            d_prime[r] = (rhs[r] - sub[r] * d_prime[r - 1]) / piv;
        }
        let mut out = vec![0.0; n];
        out[n - 1] = d_prime[n - 1];
        for r in (0..n - 1).rev() {
            out[r] = d_prime[r] - c_prime[r] * out[r + 1];
        }
        Ok(out)
    }

    /// Node coordinates per layer.
    pub fn grid_xs(&self) -> Vec<Vec<f64>> {
        (0..self.problem.layer_count())
            .map(|i| {
                (0..=self.divisions[i])
                    .map(|j| {
                        self.problem.layer_left(i)
                            + self.problem.layer_width(i) * j as f64 / self.divisions[i] as f64
                    })
                    .collect()
            })
            .collect()
    }

    fn state_to_layers(&self, u: &[f64]) -> Vec<Vec<f64>> {
        self.index
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|nr| match *nr {
                        NodeRef::Own(k) => u[k],
                        NodeRef::Scaled(k, theta) => theta * u[k],
                    })
                    .collect()
            })
            .collect()
    }

    /// Discrete total mass: FV cell volumes applied to node values
    /// (trapezoid within each layer).
    pub fn total_mass(&self, layers: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        for (i, vals) in layers.iter().enumerate() {
            let k = self.divisions[i];
            total += 0.5 * self.h[i] * (vals[0] + vals[k]);
            for v in &vals[1..k] {
                total += self.h[i] * v;
            }
        }
        total
    }
}

/// March the Crank–Nicolson scheme and sample the field at `times`
/// (each must be a non-negative multiple of `dt`).
pub fn solve_fdm(
    problem: &ValidatedProblem,
    divisions: &[usize],
    dt: f64,
    times: &[f64],
) -> Result<SolutionField> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive: {dt}")));
    }
    let disc = Discretization::new(problem, divisions)?;
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("duplicate output times".into()));
    }
    if times != sorted {
        return Err(Error::Domain("output times must be ascending".into()));
    }
    for &t in times {
        let steps = t / dt;
        if (steps - steps.round()).abs() > 1e-8 * steps.max(1.0) {
            return Err(Error::Domain(format!(
                "output time {t} is not a multiple of dt = {dt}"
            )));
        }
    }
    let total_steps = times.last().map(|&t| (t / dt).round() as usize).unwrap_or(0);

    let mut u = disc.initial_state();
    let mut out_values = Vec::with_capacity(times.len());
    let mut out_g = Vec::with_capacity(times.len());
    let mut record = |disc: &Discretization, u: &[f64], out_values: &mut Vec<Vec<Vec<f64>>>, out_g: &mut Vec<Vec<f64>>, t: f64| {
        let layers = disc.state_to_layers(u);
        let m = disc.problem.layer_count();
        let mut g_row = vec![0.0; m + 1];
        g_row[0] = disc.problem.left_bc().g.at(t);
        g_row[m] = disc.problem.right_bc().g.at(t);
        for j in 1..m {
            // weighted flux from the right side, second-order one-sided
            let vals = &layers[j];
            let gamma = disc.problem.interface(j - 1).gamma_right;
            g_row[j] =
                gamma * (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * disc.h[j]);
        }
        out_values.push(layers);
        out_g.push(g_row);
    };

    let mut next_out = 0usize;
    if times.first() == Some(&0.0) {
        record(&disc, &u, &mut out_values, &mut out_g, 0.0);
        next_out = 1;
    }
    // Rannacher start: the first two steps as four backward-Euler halves.
    let rannacher_steps = 2usize.min(total_steps);
    for step_idx in 0..total_steps {
        let t_old = step_idx as f64 * dt;
        let t_new = (step_idx + 1) as f64 * dt;
        if step_idx < rannacher_steps {
            let t_half = t_old + 0.5 * dt;
            u = disc.step(&u, 0.5 * dt, t_old, t_half, false)?;
            u = disc.step(&u, 0.5 * dt, t_half, t_new, false)?;
        } else {
            u = disc.step(&u, dt, t_old, t_new, true)?;
        }
        if next_out < times.len() {
            let target_steps = (times[next_out] / dt).round() as usize;
            if step_idx + 1 == target_steps {
                record(&disc, &u, &mut out_values, &mut out_g, t_new);
                next_out += 1;
            }
        }
    }

    Ok(SolutionField {
        times: times.to_vec(),
        xs: disc.grid_xs(),
        values: out_values,
        interface_g: out_g,
        n_modes: 0,
        inversion_order: 0,
    })
}

/// Run coarse and 2x-refined grids; return the fine field restricted to the
/// coarse nodes, the Richardson-extrapolated field, and the per-time
/// relative error estimate of the fine solution.
pub fn richardson(
    problem: &ValidatedProblem,
    divisions: &[usize],
    dt: f64,
    times: &[f64],
) -> Result<RichardsonResult> {
    let coarse = solve_fdm(problem, divisions, dt, times)?;
    let fine_div: Vec<usize> = divisions.iter().map(|&k| 2 * k).collect();
    let fine = solve_fdm(problem, &fine_div, 0.5 * dt, times)?;
    let m = problem.layer_count();
    let mut restricted = coarse.clone();
    let mut extrapolated = coarse.clone();
    let mut estimates = Vec::with_capacity(times.len());
    for (k, _) in times.iter().enumerate() {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..m {
            for (j, _) in coarse.xs[i].iter().enumerate() {
                let uc = coarse.values[k][i][j];
                let uf = fine.values[k][i][2 * j];
                restricted.values[k][i][j] = uf;
                extrapolated.values[k][i][j] = (4.0 * uf - uc) / 3.0;
                num = num.max((uf - uc).abs());
                den = den.max(uf.abs());
            }
        }
        estimates.push(if den == 0.0 { num } else { num / (3.0 * den) });
    }
    Ok(RichardsonResult {
        fine_on_coarse: restricted,
        extrapolated,
        estimates,
    })
}

/// Output of [`richardson`].
#[derive(Debug, Clone)]
pub struct RichardsonResult {
    /// Fine-grid solution restricted to the coarse nodes.
    pub fine_on_coarse: SolutionField,
    /// `(4 u_fine - u_coarse) / 3` on the coarse nodes.
    pub extrapolated: SolutionField,
    /// Per-time relative error estimate of the fine solution.
    pub estimates: Vec<f64>,
}

/// Two-grid error estimate per output time (relative, of the fine grid).
pub fn richardson_error_estimate(
    problem: &ValidatedProblem,
    divisions: &[usize],
    dt: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    Ok(richardson(problem, divisions, dt, times)?.estimates)
}

/// Helper for building a uniformly divided grid spec.
pub fn uniform_divisions(problem: &ValidatedProblem, per_layer: usize) -> Vec<usize> {
    vec![per_layer; problem.layer_count()]
}

/// Evaluate a semi-analytical or classical field on the FDM grid for
/// comparison: re-evaluates `solver` on this discretization's nodes.
pub fn comparison_grid(problem: &ValidatedProblem, divisions: &[usize], times: &[f64]) -> Grid {
    let disc_xs: Vec<Vec<f64>> = (0..problem.layer_count())
        .map(|i| {
            (0..=divisions[i])
                .map(|j| {
                    problem.layer_left(i)
                        + problem.layer_width(i) * j as f64 / divisions[i] as f64
                })
                .collect()
        })
        .collect();
    Grid {
        times: times.to_vec(),
        xs: disc_xs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        BoundaryFunction, BoundarySpec, InitialCondition, InterfaceSpec, LayerSpec, ProblemSpec,
    };
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn single_layer_neumann() -> ValidatedProblem {
        ProblemSpec {
            layers: vec![LayerSpec {
                left: 0.0,
                right: 1.0,
                diffusivity: 0.5,
                gamma: None,
                initial: InitialCondition::Custom(Arc::new(|x| (PI * x).cos())),
            }],
            interfaces: vec![],
            left: BoundarySpec::neumann(BoundaryFunction::zero()),
            right: BoundarySpec::neumann(BoundaryFunction::zero()),
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn manufactured_decay_mode_order_two() {
        let p = single_layer_neumann();
        let d = 0.5;
        let t_end = 0.25;
        let exact = |x: f64, t: f64| (-d * PI * PI * t).exp() * (PI * x).cos();
        let mut errors = Vec::new();
        for &(div, dt) in &[(40usize, 1.0 / 160.0), (80, 1.0 / 320.0)] {
            let field = solve_fdm(&p, &[div], dt, &[t_end]).unwrap();
            let mut worst = 0.0f64;
            for (j, &x) in field.xs[0].iter().enumerate() {
                worst = worst.max((field.values[0][0][j] - exact(x, t_end)).abs());
            }
            errors.push(worst);
        }
        let order = (errors[0] / errors[1]).log2();
        assert!(order >= 1.8, "observed order {order} ({errors:?})");
    }

    #[test]
    fn equilibrium_is_preserved() {
        let spec = ProblemSpec {
            layers: vec![
                LayerSpec {
                    left: 0.0,
                    right: 0.5,
                    diffusivity: 1.0,
                    gamma: None,
                    initial: InitialCondition::Constant(0.7),
                },
                LayerSpec {
                    left: 0.5,
                    right: 1.0,
                    diffusivity: 0.1,
                    gamma: None,
                    initial: InitialCondition::Constant(0.7),
                },
            ],
            interfaces: vec![InterfaceSpec::Implicit],
            left: BoundarySpec::neumann(BoundaryFunction::zero()),
            right: BoundarySpec::neumann(BoundaryFunction::zero()),
        };
        let p = spec.validate().unwrap();
        let field = solve_fdm(&p, &[20, 20], 0.01, &[0.5]).unwrap();
        for layer in &field.values[0] {
            for &v in layer {
                assert!((v - 0.7).abs() < 1e-12, "{v}");
            }
        }
    }

    #[test]
    fn mass_conserved_per_step() {
        // no-flux + continuity interfaces: drift per step at roundoff
        let spec = ProblemSpec {
            layers: vec![
                LayerSpec {
                    left: -1.0,
                    right: 0.0,
                    diffusivity: 0.2,
                    gamma: None,
                    initial: InitialCondition::DiracApprox {
                        center: -0.5,
                        width: 0.2,
                    },
                },
                LayerSpec {
                    left: 0.0,
                    right: 1.0,
                    diffusivity: 1.0,
                    gamma: None,
                    initial: InitialCondition::Constant(0.0),
                },
            ],
            interfaces: vec![InterfaceSpec::Implicit],
            left: BoundarySpec::neumann(BoundaryFunction::zero()),
            right: BoundarySpec::neumann(BoundaryFunction::zero()),
        };
        let p = spec.validate().unwrap();
        let disc = Discretization::new(&p, &[60, 60]).unwrap();
        let dt = 0.005;
        let mut u = disc.initial_state();
        let mut mass_prev = disc.total_mass(&disc.state_to_layers(&u));
        for step in 0..100 {
            let t_old = step as f64 * dt;
            u = disc.step(&u, dt, t_old, t_old + dt, true).unwrap();
            let mass = disc.total_mass(&disc.state_to_layers(&u));
            assert!(
                (mass - mass_prev).abs() < 1e-10 * mass.abs().max(1.0),
                "step {step}: drift {}",
                mass - mass_prev
            );
            mass_prev = mass;
        }
    }

    #[test]
    fn richardson_estimate_tracks_true_error() {
        let p = single_layer_neumann();
        let d = 0.5;
        let t_end = 0.25;
        let exact = |x: f64, t: f64| (-d * PI * PI * t).exp() * (PI * x).cos();
        let result = richardson(&p, &[30], 1.0 / 120.0, &[t_end]).unwrap();
        // true error of the fine solution
        let fine = &result.fine_on_coarse;
        let mut true_err = 0.0f64;
        let mut scale = 0.0f64;
        for (j, &x) in fine.xs[0].iter().enumerate() {
            true_err = true_err.max((fine.values[0][0][j] - exact(x, t_end)).abs());
            scale = scale.max(exact(x, t_end).abs());
        }
        let true_rel = true_err / scale;
        let est = result.estimates[0];
        assert!(
            est > true_rel / 3.0 && est < 3.0 * true_rel,
            "estimate {est} vs true {true_rel}"
        );
    }

    #[test]
    fn richardson_estimate_identical_grids_is_zero_and_shrinks() {
        let p = single_layer_neumann();
        let e1 = richardson_error_estimate(&p, &[20], 0.01, &[0.2]).unwrap()[0];
        let e2 = richardson_error_estimate(&p, &[40], 0.005, &[0.2]).unwrap()[0];
        let ratio = e1 / e2;
        assert!(
            (2.5..8.0).contains(&ratio),
            "second-order shrink expected, got {ratio}"
        );
    }

    #[test]
    fn output_time_validation() {
        let p = single_layer_neumann();
        assert!(solve_fdm(&p, &[10], 0.01, &[0.015]).is_err());
        assert!(solve_fdm(&p, &[10], 0.01, &[0.2, 0.1]).is_err());
        assert!(solve_fdm(&p, &[10], -0.01, &[0.1]).is_err());
    }

    #[test]
    fn jump_interface_against_semi_analytical() {
        // Case B at t = 0.2: FDM vs the semi-analytical field.
        let spec = ProblemSpec {
            layers: vec![
                LayerSpec {
                    left: 0.0,
                    right: 0.5,
                    diffusivity: 1.0,
                    gamma: None,
                    initial: InitialCondition::Constant(0.0),
                },
                LayerSpec {
                    left: 0.5,
                    right: 1.0,
                    diffusivity: 0.1,
                    gamma: None,
                    initial: InitialCondition::Constant(0.0),
                },
            ],
            interfaces: vec![InterfaceSpec::Jump { transfer: 0.5 }],
            left: BoundarySpec::dirichlet(BoundaryFunction::constant(1.0)),
            right: BoundarySpec::neumann(BoundaryFunction::zero()),
        };
        let p = spec.validate().unwrap();
        let times = [0.2];
        let divisions = [400usize, 400];
        let dt = 1.0 / 4000.0;
        let fdm_field = solve_fdm(&p, &divisions, dt, &times).unwrap();
        let solver = crate::assembly::Solver::new(
            p.clone(),
            crate::assembly::SolverSettings {
                n_modes: 300,
                inversion_order: 14,
            },
        )
        .unwrap();
        let grid = comparison_grid(&p, &divisions, &times);
        let semi = solver.evaluate(&grid).unwrap();
        let eps = SolutionField::relative_error(&fdm_field, &semi).unwrap();
        assert!(eps[0] < 5e-5, "cross-method difference {} too large", eps[0]);
    }
}
