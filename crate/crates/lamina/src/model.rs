//! Problem definition and validation.
//!
//! A diffusion problem on `[l_0, l_m]` split into `m` layers, each with its
//! own diffusivity `D_i` and flux weight `gamma_i`. Adjacent layers are
//! coupled through interface conditions which all normalize to the general
//! two-equation form
//!
//! ```text
//!   gamma_i  du_i/dx(l_i)  =  H_i (theta_i u_{i+1}(l_i) - u_i(l_i))
//!   gamma_i  du_i/dx(l_i)  =  gamma_{i+1} du_{i+1}/dx(l_i)
//! ```
//!
//! with `H_i = Infinite` an explicit sentinel (the `1/H_i` term is dropped
//! exactly, never divided out of a large float). External boundary conditions
//! are Robin-type, `a_L u - b_L u_x = g_0(t)` on the left and
//! `a_R u + b_R u_x = g_m(t)` on the right, with time-varying boundary data
//! supplied together with its Laplace transform.
//!
//! The library is unit-agnostic: lengths, times, diffusivities and boundary
//! data must simply be expressed in one mutually consistent unit system.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result, Violation};

/// Contact transfer coefficient of an interface.
///
/// `Infinite` means a continuous (up to partition scaling) solution across
/// the interface; it is kept as a sentinel so the `1/H` contribution to the
/// interface constraint can be dropped exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactTransfer {
    Finite(f64),
    Infinite,
}

impl ContactTransfer {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ContactTransfer::Infinite)
    }

    /// The `1/H` coefficient appearing in the interface constraint.
    pub fn inverse(&self) -> f64 {
        match self {
            ContactTransfer::Finite(h) => 1.0 / h,
            ContactTransfer::Infinite => 0.0,
        }
    }
}

impl fmt::Display for ContactTransfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContactTransfer::Finite(h) => write!(f, "{h}"),
            ContactTransfer::Infinite => write!(f, "inf"),
        }
    }
}

/// Interface condition between two adjacent layers, as a user states it.
#[derive(Debug, Clone, PartialEq)]
pub enum InterfaceSpec {
    /// Continuity of solution and of the diffusive flux `D u_x`.
    /// Requires the adjacent layers' flux weights to equal their
    /// diffusivities.
    Implicit,
    /// Continuity of solution and of the weighted flux `gamma u_x`.
    PerfectContact,
    /// Finite contact transfer `H`: flux-proportional solution jump.
    Jump { transfer: f64 },
    /// Fixed ratio `u_i = theta u_{i+1}` with continuous weighted flux.
    Partition { theta: f64 },
    /// Already in general form.
    General {
        transfer: ContactTransfer,
        theta: f64,
    },
}

/// An interface condition in the general form, together with the flux
/// weights of the two layers it joins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralInterface {
    pub gamma_left: f64,
    pub gamma_right: f64,
    pub transfer: ContactTransfer,
    pub theta: f64,
}

impl InterfaceSpec {
    /// Normalize this interface description into the general form.
    ///
    /// `d_left`/`d_right` are the adjacent diffusivities, `gamma_left`/
    /// `gamma_right` the adjacent flux weights. Implicit conditions use the
    /// diffusivities as flux weights; every other family keeps the supplied
    /// weights. Normalizing an already-general description returns it
    /// unchanged.
    pub fn normalize(
        &self,
        d_left: f64,
        d_right: f64,
        gamma_left: f64,
        gamma_right: f64,
    ) -> GeneralInterface {
        match *self {
            InterfaceSpec::Implicit => GeneralInterface {
                gamma_left: d_left,
                gamma_right: d_right,
                transfer: ContactTransfer::Infinite,
                theta: 1.0,
            },
            InterfaceSpec::PerfectContact => GeneralInterface {
                gamma_left,
                gamma_right,
                transfer: ContactTransfer::Infinite,
                theta: 1.0,
            },
            InterfaceSpec::Jump { transfer } => GeneralInterface {
                gamma_left,
                gamma_right,
                transfer: ContactTransfer::Finite(transfer),
                theta: 1.0,
            },
            InterfaceSpec::Partition { theta } => GeneralInterface {
                gamma_left,
                gamma_right,
                transfer: ContactTransfer::Infinite,
                theta,
            },
            InterfaceSpec::General { transfer, theta } => GeneralInterface {
                gamma_left,
                gamma_right,
                transfer,
                theta,
            },
        }
    }
}

/// Time-dependent boundary data `g(t)` together with its Laplace transform.
///
/// The transform must be evaluable at complex `s` (the numerical inversion
/// nodes lie off the real axis) for `Re(s) > 0`.
#[derive(Clone)]
pub struct BoundaryFunction {
    time: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    laplace: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    constant_in_time: bool,
    descriptor: Option<NamedBoundary>,
}

/// Config-representable boundary functions.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedBoundary {
    /// `g(t) = value`
    Constant { value: f64 },
    /// `g(t) = scale (1 - e^{-rate t})`
    ExpApproach { scale: f64, rate: f64 },
    /// `g(t) = cmax exp(-(t - mu)^2 / sigma^2)`, transformed on `[0, inf)`.
    GaussianPulse { cmax: f64, mu: f64, sigma: f64 },
}

impl BoundaryFunction {
    pub fn constant(value: f64) -> Self {
        BoundaryFunction {
            time: Arc::new(move |_| value),
            laplace: Arc::new(move |s| value / s),
            constant_in_time: true,
            descriptor: Some(NamedBoundary::Constant { value }),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// `g(t) = scale (1 - e^{-rate t})`, `gbar(s) = scale rate / (s (s + rate))`.
    pub fn exp_approach(scale: f64, rate: f64) -> Self {
        BoundaryFunction {
            time: Arc::new(move |t| scale * (1.0 - (-rate * t).exp())),
            laplace: Arc::new(move |s| scale * rate / (s * (s + rate))),
            constant_in_time: false,
            descriptor: Some(NamedBoundary::ExpApproach { scale, rate }),
        }
    }

    /// Gaussian inlet pulse with its closed-form transform on `[0, inf)`.
    pub fn gaussian_pulse(cmax: f64, mu: f64, sigma: f64) -> Self {
        BoundaryFunction {
            time: Arc::new(move |t| cmax * (-(t - mu) * (t - mu) / (sigma * sigma)).exp()),
            laplace: Arc::new(move |s| {
                crate::laplace::gaussian_transform(s, cmax, mu, sigma)
                    .expect("gaussian transform overflow")
            }),
            constant_in_time: false,
            descriptor: Some(NamedBoundary::GaussianPulse { cmax, mu, sigma }),
        }
    }

    /// Arbitrary boundary data; not representable in config files.
    pub fn from_fns(
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gbar: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        constant_in_time: bool,
    ) -> Self {
        BoundaryFunction {
            time: Arc::new(g),
            laplace: Arc::new(gbar),
            constant_in_time,
            descriptor: None,
        }
    }

    pub fn from_named(named: &NamedBoundary) -> Self {
        match *named {
            NamedBoundary::Constant { value } => Self::constant(value),
            NamedBoundary::ExpApproach { scale, rate } => Self::exp_approach(scale, rate),
            NamedBoundary::GaussianPulse { cmax, mu, sigma } => {
                Self::gaussian_pulse(cmax, mu, sigma)
            }
        }
    }

    /// Evaluate `g(t)`.
    pub fn at(&self, t: f64) -> f64 {
        (self.time)(t)
    }

    /// Evaluate the Laplace transform `gbar(s)`.
    pub fn laplace(&self, s: Complex64) -> Complex64 {
        (self.laplace)(s)
    }

    pub fn constant_in_time(&self) -> bool {
        self.constant_in_time
    }

    pub fn descriptor(&self) -> Option<&NamedBoundary> {
        self.descriptor.as_ref()
    }
}

impl fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.descriptor {
            Some(d) => write!(f, "BoundaryFunction({d:?})"),
            None => write!(f, "BoundaryFunction(<custom>)"),
        }
    }
}

/// Initial condition within one layer.
#[derive(Clone)]
pub enum InitialCondition {
    Constant(f64),
    /// Coefficients in ascending powers of the absolute coordinate `x`.
    Polynomial(Vec<f64>),
    /// Narrow Gaussian `exp(-((x-center)/width)^2) / (width sqrt(pi))`
    /// approximating a unit Dirac pulse.
    DiracApprox { center: f64, width: f64 },
    /// Arbitrary initial data; not representable in config files.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl InitialCondition {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialCondition::Constant(c) => *c,
            InitialCondition::Polynomial(coeffs) => {
                let mut v = 0.0;
                for &c in coeffs.iter().rev() {
                    v = v * x + c;
                }
                v
            }
            InitialCondition::DiracApprox { center, width } => {
                let z = (x - center) / width;
                (-z * z).exp() / (width * std::f64::consts::PI.sqrt())
            }
            InitialCondition::Custom(f) => f(x),
        }
    }

    /// Polynomial coefficients if this condition is exactly polynomial.
    pub(crate) fn as_polynomial(&self) -> Option<Vec<f64>> {
        match self {
            InitialCondition::Constant(c) => Some(vec![*c]),
            InitialCondition::Polynomial(c) => Some(c.clone()),
            _ => None,
        }
    }
}

impl fmt::Debug for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialCondition::Constant(c) => write!(f, "Constant({c})"),
            InitialCondition::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            InitialCondition::DiracApprox { center, width } => {
                write!(f, "DiracApprox {{ center: {center}, width: {width} }}")
            }
            InitialCondition::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// One layer of the problem.
#[derive(Debug, Clone)]
pub struct LayerSpec {
    pub left: f64,
    pub right: f64,
    pub diffusivity: f64,
    /// Flux weight `gamma`; defaults to the diffusivity when `None`.
    pub gamma: Option<f64>,
    pub initial: InitialCondition,
}

/// External boundary condition `a u -/+ b u_x = g(t)` (sign per side).
#[derive(Debug, Clone)]
pub struct BoundarySpec {
    pub a: f64,
    pub b: f64,
    pub g: BoundaryFunction,
}

impl BoundarySpec {
    pub fn dirichlet(g: BoundaryFunction) -> Self {
        BoundarySpec { a: 1.0, b: 0.0, g }
    }

    pub fn neumann(g: BoundaryFunction) -> Self {
        BoundarySpec { a: 0.0, b: 1.0, g }
    }
}

/// Complete problem description prior to validation.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub layers: Vec<LayerSpec>,
    pub interfaces: Vec<InterfaceSpec>,
    pub left: BoundarySpec,
    pub right: BoundarySpec,
}

impl ProblemSpec {
    /// Validate every invariant; on success returns the immutable handle the
    /// solvers consume, otherwise the full list of violations.
    pub fn validate(&self) -> Result<ValidatedProblem> {
        let mut violations = Vec::new();
        let m = self.layers.len();
        if m == 0 {
            violations.push(Violation {
                constraint: "layer count".into(),
                index: None,
                detail: "at least one layer is required".into(),
            });
            return Err(Error::Invalid(violations));
        }
        if self.interfaces.len() != m - 1 {
            violations.push(Violation {
                constraint: "interface count".into(),
                index: None,
                detail: format!(
                    "{} layers require {} interfaces, got {}",
                    m,
                    m - 1,
                    self.interfaces.len()
                ),
            });
            return Err(Error::Invalid(violations));
        }

        let mut breakpoints = Vec::with_capacity(m + 1);
        breakpoints.push(self.layers[0].left);
        for (i, layer) in self.layers.iter().enumerate() {
            if !(layer.left < layer.right) {
                violations.push(Violation {
                    constraint: "breakpoints strictly increasing".into(),
                    index: Some(i),
                    detail: format!("l_{} = {} must be < l_{} = {}", i, layer.left, i + 1, layer.right),
                });
            }
            if i > 0 && layer.left != self.layers[i - 1].right {
                violations.push(Violation {
                    constraint: "layers contiguous".into(),
                    index: Some(i),
                    detail: format!(
                        "layer {} starts at {} but layer {} ends at {}",
                        i,
                        layer.left,
                        i - 1,
                        self.layers[i - 1].right
                    ),
                });
            }
            if !(layer.diffusivity > 0.0 && layer.diffusivity.is_finite()) {
                violations.push(Violation {
                    constraint: "diffusivity positive".into(),
                    index: Some(i),
                    detail: format!("D_{} = {}", i + 1, layer.diffusivity),
                });
            }
            let gamma = layer.gamma.unwrap_or(layer.diffusivity);
            if !(gamma > 0.0 && gamma.is_finite()) {
                violations.push(Violation {
                    constraint: "flux weight positive".into(),
                    index: Some(i),
                    detail: format!("gamma_{} = {}", i + 1, gamma),
                });
            }
            breakpoints.push(layer.right);
        }

        for (i, iface) in self.interfaces.iter().enumerate() {
            match iface {
                InterfaceSpec::Jump { transfer } => {
                    if !(*transfer > 0.0 && transfer.is_finite()) {
                        violations.push(Violation {
                            constraint: "contact transfer positive".into(),
                            index: Some(i),
                            detail: format!("H_{} = {}", i + 1, transfer),
                        });
                    }
                }
                InterfaceSpec::Partition { theta } => {
                    if !(*theta > 0.0 && theta.is_finite()) {
                        violations.push(Violation {
                            constraint: "partition coefficient positive".into(),
                            index: Some(i),
                            detail: format!("theta_{} = {}", i + 1, theta),
                        });
                    }
                }
                InterfaceSpec::General { transfer, theta } => {
                    if let ContactTransfer::Finite(h) = transfer {
                        if !(*h > 0.0 && h.is_finite()) {
                            violations.push(Violation {
                                constraint: "contact transfer positive".into(),
                                index: Some(i),
                                detail: format!("H_{} = {}", i + 1, h),
                            });
                        }
                    }
                    if !(*theta > 0.0 && theta.is_finite()) {
                        violations.push(Violation {
                            constraint: "partition coefficient positive".into(),
                            index: Some(i),
                            detail: format!("theta_{} = {}", i + 1, theta),
                        });
                    }
                }
                InterfaceSpec::Implicit => {
                    // Flux weights must coincide with the diffusivities.
                    let gl = self.layers[i].gamma.unwrap_or(self.layers[i].diffusivity);
                    let gr = self.layers[i + 1]
                        .gamma
                        .unwrap_or(self.layers[i + 1].diffusivity);
                    if gl != self.layers[i].diffusivity || gr != self.layers[i + 1].diffusivity {
                        violations.push(Violation {
                            constraint: "implicit interface flux weights".into(),
                            index: Some(i),
                            detail: "implicit conditions require gamma = D in adjacent layers"
                                .into(),
                        });
                    }
                }
                InterfaceSpec::PerfectContact => {}
            }
        }

        let check_bc = |which: &str, a: f64, b: f64, violations: &mut Vec<Violation>| {
            if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
                violations.push(Violation {
                    constraint: format!("{which} coefficients non-negative"),
                    index: None,
                    detail: format!("a = {a}, b = {b}"),
                });
            } else if a + b <= 0.0 {
                violations.push(Violation {
                    constraint: format!("{which} coefficients not both zero"),
                    index: None,
                    detail: format!("a + b = {}", a + b),
                });
            }
        };
        check_bc("left BC", self.left.a, self.left.b, &mut violations);
        check_bc("right BC", self.right.a, self.right.b, &mut violations);

        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }

        let gammas: Vec<f64> = self
            .layers
            .iter()
            .map(|l| l.gamma.unwrap_or(l.diffusivity))
            .collect();
        let interfaces: Vec<GeneralInterface> = self
            .interfaces
            .iter()
            .enumerate()
            .map(|(i, iface)| {
                iface.normalize(
                    self.layers[i].diffusivity,
                    self.layers[i + 1].diffusivity,
                    gammas[i],
                    gammas[i + 1],
                )
            })
            .collect();
        // Implicit interfaces rewrite the flux weights of their layers.
        let mut gammas = gammas;
        for (i, iface) in self.interfaces.iter().enumerate() {
            if matches!(iface, InterfaceSpec::Implicit) {
                gammas[i] = interfaces[i].gamma_left;
                gammas[i + 1] = interfaces[i].gamma_right;
            }
        }

        Ok(ValidatedProblem {
            breakpoints,
            diffusivities: self.layers.iter().map(|l| l.diffusivity).collect(),
            gammas,
            initials: self.layers.iter().map(|l| l.initial.clone()).collect(),
            interfaces,
            left: self.left.clone(),
            right: self.right.clone(),
        })
    }
}

/// A validated, immutable problem. Construct through [`ProblemSpec::validate`].
///
/// Safe to share across threads; all accessors are read-only.
#[derive(Debug, Clone)]
pub struct ValidatedProblem {
    breakpoints: Vec<f64>,
    diffusivities: Vec<f64>,
    gammas: Vec<f64>,
    initials: Vec<InitialCondition>,
    interfaces: Vec<GeneralInterface>,
    left: BoundarySpec,
    right: BoundarySpec,
}

impl ValidatedProblem {
    /// Number of layers `m`.
    pub fn layer_count(&self) -> usize {
        self.diffusivities.len()
    }

    /// Breakpoints `l_0 ..= l_m`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Left endpoint of layer `i` (0-based).
    pub fn layer_left(&self, i: usize) -> f64 {
        self.breakpoints[i]
    }

    /// Right endpoint of layer `i` (0-based).
    pub fn layer_right(&self, i: usize) -> f64 {
        self.breakpoints[i + 1]
    }

    pub fn layer_width(&self, i: usize) -> f64 {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }

    pub fn diffusivity(&self, i: usize) -> f64 {
        self.diffusivities[i]
    }

    pub fn gamma(&self, i: usize) -> f64 {
        self.gammas[i]
    }

    pub fn initial(&self, i: usize) -> &InitialCondition {
        &self.initials[i]
    }

    /// Interface `i` joins layers `i` and `i+1` (0-based, `i < m-1`).
    pub fn interface(&self, i: usize) -> &GeneralInterface {
        &self.interfaces[i]
    }

    pub fn interfaces(&self) -> &[GeneralInterface] {
        &self.interfaces
    }

    pub fn left_bc(&self) -> &BoundarySpec {
        &self.left
    }

    pub fn right_bc(&self) -> &BoundarySpec {
        &self.right
    }

    /// Both boundary functions are constant in time (premise of the
    /// classical separation-of-variables solution).
    pub fn constant_boundary_data(&self) -> bool {
        self.left.g.constant_in_time() && self.right.g.constant_in_time()
    }

    /// Which layer contains `x`, clamping interface points to the left layer.
    pub fn layer_of(&self, x: f64) -> Option<usize> {
        if x < self.breakpoints[0] || x > self.breakpoints[self.layer_count()] {
            return None;
        }
        let mut i = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(k) => k.saturating_sub(1),
            Err(k) => k - 1,
        };
        if i >= self.layer_count() {
            i = self.layer_count() - 1;
        }
        Some(i)
    }
}

/// Scaling applied pointwise after evaluation, `c(x,t) = e^{rate t} u(x,t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostScaling {
    rate: f64,
}

impl PostScaling {
    pub fn identity() -> Self {
        PostScaling { rate: 0.0 }
    }

    pub fn exp_time() -> Self {
        PostScaling { rate: 1.0 }
    }

    pub fn factor(&self, t: f64) -> f64 {
        (self.rate * t).exp()
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// A reaction–diffusion problem `du/dt = D u_xx + rate * u` with a constant
/// unit-or-zero reaction rate.
#[derive(Debug, Clone)]
pub struct ReactionDiffusionSpec {
    pub diffusion: ProblemSpec,
    pub reaction_rate: f64,
}

/// Rewrite a linear reaction–diffusion problem as pure diffusion plus a
/// post-scaling rule `c = e^{rate t} u`.
///
/// Only the rates `0` (identity) and `1` are supported; anything else (and
/// in particular any spatially varying rate, which this type cannot even
/// express) is rejected.
pub fn reaction_substitution_wrap(
    spec: &ReactionDiffusionSpec,
) -> Result<(ProblemSpec, PostScaling)> {
    if spec.reaction_rate == 0.0 {
        Ok((spec.diffusion.clone(), PostScaling::identity()))
    } else if spec.reaction_rate == 1.0 {
        Ok((spec.diffusion.clone(), PostScaling::exp_time()))
    } else {
        Err(Error::unsupported(format!(
            "reaction rate {} is not supported; only 0 or 1 (rescale time to make the rate unity)",
            spec.reaction_rate
        )))
    }
}
