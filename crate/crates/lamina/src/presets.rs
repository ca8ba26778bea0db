//! Compiled-in application presets.
//!
//! Two-layer interface-condition studies (cases A–D), the 8-layer
//! stress case, and four applications: contaminant diffusion through a
//! layered aquitard with a Gaussian inlet, heat conduction in a three-layer
//! composite wall, analyte transport with a partition coefficient, and a
//! brain-tumour growth model handled through the `c = e^t u` substitution.
//!
//! Presets are code, not data files, so tests can pin their constants;
//! `preset-dump` in the CLI serializes any of them to an editable config.

use crate::model::{
    BoundaryFunction, BoundarySpec, InitialCondition, InterfaceSpec, LayerSpec, PostScaling,
    ProblemSpec,
};
use crate::error::{Error, Result};

/// Extra output column derived from the raw field.
#[derive(Debug, Clone, PartialEq)]
pub enum PostColumn {
    None,
    /// `label = u * factors[layer]`
    PerLayerFactor {
        label: &'static str,
        factors: Vec<f64>,
    },
    /// `label = u * e^t` (reaction-substitution rescale)
    ExpTime { label: &'static str },
}

/// A named, fully resolved problem plus its display times.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: ProblemSpec,
    pub times: Vec<f64>,
    pub post: PostColumn,
}

impl Preset {
    /// The post-scaling (if any) as a field transform.
    pub fn scaling(&self) -> PostScaling {
        match self.post {
            PostColumn::ExpTime { .. } => PostScaling::exp_time(),
            _ => PostScaling::identity(),
        }
    }
}

pub const PRESET_NAMES: [&str; 10] = [
    "case-a",
    "case-b",
    "case-c",
    "case-c-d100",
    "case-d",
    "eight-layer",
    "liu-contaminant",
    "mikhailov-heat",
    "trefry-analyte",
    "brain-tumour",
];

/// Seconds per (365-day) year; unit conversion for the aquitard preset.
pub const SECONDS_PER_YEAR: f64 = 3.1536e7;

fn layer(left: f64, right: f64, d: f64, gamma: Option<f64>, initial: InitialCondition) -> LayerSpec {
    LayerSpec {
        left,
        right,
        diffusivity: d,
        gamma,
        initial,
    }
}

fn two_layer_base(d1: f64, d2: f64, iface: InterfaceSpec) -> ProblemSpec {
    ProblemSpec {
        layers: vec![
            layer(0.0, 0.5, d1, None, InitialCondition::Constant(0.0)),
            layer(0.5, 1.0, d2, None, InitialCondition::Constant(0.0)),
        ],
        interfaces: vec![iface],
        left: BoundarySpec::dirichlet(BoundaryFunction::constant(1.0)),
        right: BoundarySpec::neumann(BoundaryFunction::zero()),
    }
}

const CASE_TIMES: [f64; 5] = [0.01, 0.05, 0.2, 1.0, 5.0];

/// Look up a preset by name.
pub fn preset(name: &str) -> Result<Preset> {
    let p = match name {
        "case-a" => Preset {
            name: "case-a",
            description: "two layers, perfect contact with gamma = D (continuous solution, \
                          discontinuous gradient)",
            spec: two_layer_base(1.0, 0.1, InterfaceSpec::PerfectContact),
            times: CASE_TIMES.to_vec(),
            post: PostColumn::None,
        },
        "case-b" => Preset {
            name: "case-b",
            description: "two layers, jump conditions with H = 0.5 (flux-proportional \
                          solution jump)",
            spec: two_layer_base(1.0, 0.1, InterfaceSpec::Jump { transfer: 0.5 }),
            times: CASE_TIMES.to_vec(),
            post: PostColumn::None,
        },
        "case-c" => Preset {
            name: "case-c",
            description: "two layers, partition conditions with theta = 1.2",
            spec: two_layer_base(1.0, 0.1, InterfaceSpec::Partition { theta: 1.2 }),
            times: CASE_TIMES.to_vec(),
            post: PostColumn::None,
        },
        "case-c-d100" => Preset {
            name: "case-c-d100",
            description: "partition case with a large diffusivity contrast (D1 = 100)",
            spec: two_layer_base(100.0, 0.1, InterfaceSpec::Partition { theta: 1.2 }),
            times: CASE_TIMES.to_vec(),
            post: PostColumn::None,
        },
        "case-d" => Preset {
            name: "case-d",
            description: "two layers, perfect contact with gamma_1 = gamma_2 = 2 \
                          (continuous solution and gradient)",
            spec: {
                let mut s = two_layer_base(1.0, 0.1, InterfaceSpec::PerfectContact);
                s.layers[0].gamma = Some(2.0);
                s.layers[1].gamma = Some(2.0);
                s
            },
            times: CASE_TIMES.to_vec(),
            post: PostColumn::None,
        },
        "eight-layer" => Preset {
            name: "eight-layer",
            description: "eight alternating layers (D = 1 / 0.1) on [0, 1], Dirichlet 1 on \
                          the left, no-flux on the right",
            spec: {
                let m = 8;
                let layers = (0..m)
                    .map(|i| {
                        let d = if i % 2 == 0 { 1.0 } else { 0.1 };
                        layer(
                            i as f64 / m as f64,
                            (i + 1) as f64 / m as f64,
                            d,
                            None,
                            InitialCondition::Constant(0.0),
                        )
                    })
                    .collect();
                ProblemSpec {
                    layers,
                    interfaces: vec![InterfaceSpec::Implicit; m - 1],
                    left: BoundarySpec::dirichlet(BoundaryFunction::constant(1.0)),
                    right: BoundarySpec::neumann(BoundaryFunction::zero()),
                }
            },
            times: vec![0.01, 0.2, 3.0],
            post: PostColumn::None,
        },
        "liu-contaminant" => {
            // Aquitard diffusion with retardation R, porosity eps and a
            // Gaussian inlet concentration. Canonical form: effective
            // diffusivity D/R, flux weight eps * D. Units: metres and
            // years (D converted from m^2/s).
            let (r1, r2) = (42.42, 1.67);
            let (d1, d2) = (1.6e-10 * SECONDS_PER_YEAR, 2.13e-10 * SECONDS_PER_YEAR);
            let eps = 0.54;
            let rho_b = 1.4;
            Preset {
                name: "liu-contaminant",
                description: "aquitard contaminant diffusion: Gaussian inlet pulse \
                              (peak 2.15 yr, width 1 yr), retardation 42.42 / 1.67; x in m, \
                              t in yr",
                spec: ProblemSpec {
                    layers: vec![
                        layer(
                            0.0,
                            0.02,
                            d1 / r1,
                            Some(eps * d1),
                            InitialCondition::Constant(0.0),
                        ),
                        layer(
                            0.02,
                            0.30,
                            d2 / r2,
                            Some(eps * d2),
                            InitialCondition::Constant(0.0),
                        ),
                    ],
                    interfaces: vec![InterfaceSpec::PerfectContact],
                    left: BoundarySpec::dirichlet(BoundaryFunction::gaussian_pulse(
                        1.0, 2.15, 1.0,
                    )),
                    right: BoundarySpec::neumann(BoundaryFunction::zero()),
                },
                times: vec![1.0, 2.15, 5.0, 10.0],
                post: PostColumn::PerLayerFactor {
                    label: "c_total",
                    factors: vec![eps * r1 / rho_b, eps * r2 / rho_b],
                },
            }
        }
        "mikhailov-heat" => {
            // Three-layer composite wall, perfect thermal contact: the flux
            // weight is the conductivity k, the diffusivity k / (rho c_p).
            // Units: cm, hours, degrees C.
            let k = [297.64, 1741.18, 565.51];
            let rho = [11.08, 2.71, 7.4];
            let cp = [0.031, 0.181, 0.054];
            let breaks = [0.0, 2.0, 4.0, 6.0];
            let layers = (0..3)
                .map(|i| {
                    layer(
                        breaks[i],
                        breaks[i + 1],
                        k[i] / (rho[i] * cp[i]),
                        Some(k[i]),
                        InitialCondition::Constant(0.0),
                    )
                })
                .collect();
            Preset {
                name: "mikhailov-heat",
                description: "three-layer composite wall heated to 400 C on the left, held \
                              at 0 C on the right; x in cm, t in h",
                spec: ProblemSpec {
                    layers,
                    interfaces: vec![InterfaceSpec::PerfectContact; 2],
                    left: BoundarySpec::dirichlet(BoundaryFunction::constant(400.0)),
                    right: BoundarySpec::dirichlet(BoundaryFunction::constant(0.0)),
                },
                times: vec![0.001, 0.005, 0.01, 0.02, 0.05],
                post: PostColumn::None,
            }
        }
        "trefry-analyte" => Preset {
            name: "trefry-analyte",
            description: "analyte partitioning between two media (alpha = 2): medium 1 \
                          initially saturated, no-flux left, zero concentration right",
            spec: ProblemSpec {
                layers: vec![
                    layer(0.0, 1.0, 5.0, Some(5.0), InitialCondition::Constant(1.0)),
                    layer(1.0, 2.0, 0.05, Some(0.05), InitialCondition::Constant(0.0)),
                ],
                interfaces: vec![InterfaceSpec::Partition { theta: 2.0 }],
                left: BoundarySpec::neumann(BoundaryFunction::zero()),
                right: BoundarySpec::dirichlet(BoundaryFunction::zero()),
            },
            times: vec![0.02, 0.1, 0.5, 1.0, 2.0],
            post: PostColumn::None,
        },
        "brain-tumour" => Preset {
            name: "brain-tumour",
            description: "reaction-diffusion tumour growth across grey/white/grey matter, \
                          solved as pure diffusion with the e^t rescale; point sources \
                          approximated by width-0.1 Gaussians",
            spec: ProblemSpec {
                layers: vec![
                    layer(
                        -5.0,
                        -1.0,
                        0.2,
                        None,
                        InitialCondition::DiracApprox {
                            center: -4.0,
                            width: 0.1,
                        },
                    ),
                    layer(-1.0, 1.0, 1.0, None, InitialCondition::Constant(0.0)),
                    layer(
                        1.0,
                        5.0,
                        0.2,
                        None,
                        InitialCondition::DiracApprox {
                            center: 2.0,
                            width: 0.1,
                        },
                    ),
                ],
                interfaces: vec![InterfaceSpec::Implicit; 2],
                left: BoundarySpec::neumann(BoundaryFunction::zero()),
                right: BoundarySpec::neumann(BoundaryFunction::zero()),
            },
            times: (1..=20).map(|k| 0.2 * k as f64).collect(),
            post: PostColumn::ExpTime { label: "c" },
        },
        other => {
            return Err(Error::Config(format!(
                "unknown preset '{other}'; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}
