//! TOML problem configuration.
//!
//! Schema (keys follow the problem notation):
//!
//! ```toml
//! [[layers]]
//! left = 0.0
//! right = 0.5
//! diffusivity = 1.0
//! gamma = 1.0                    # optional, defaults to the diffusivity
//! initial = { kind = "constant", value = 0.0 }
//!
//! [[interfaces]]                 # one per adjacent layer pair
//! kind = "partition"             # implicit | perfect-contact | jump | partition | general
//! theta = 1.2                    # partition / general
//! # H = 0.5                      # jump / general (inf allowed for general)
//!
//! [boundary_left]
//! aL = 1.0
//! bL = 0.0
//! g = { kind = "constant", value = 1.0 }
//!
//! [boundary_right]
//! aR = 0.0
//! bR = 1.0
//! g = { kind = "constant", value = 0.0 }
//!
//! [solver]
//! N = 50
//! Np = 14
//! ```
//!
//! Initial conditions: `constant {value}`, `polynomial {coeffs}` (ascending
//! powers of x), `dirac {center, width}`. Boundary functions: `constant
//! {value}`, `exp-approach {scale, rate}` for `scale (1 - e^{-rate t})`,
//! `gaussian {cmax, mu, sigma}`. Closure-backed problems built in code are
//! not representable and fail serialization with a clear error.

use serde::{Deserialize, Serialize};

use crate::assembly::SolverSettings;
use crate::error::{Error, Result};
use crate::model::{
    BoundaryFunction, BoundarySpec, ContactTransfer, InitialCondition, InterfaceSpec, LayerSpec,
    NamedBoundary, ProblemSpec, ValidatedProblem,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialConfig {
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    Dirac { center: f64, width: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundaryFnConfig {
    Constant { value: f64 },
    ExpApproach { scale: f64, rate: f64 },
    Gaussian { cmax: f64, mu: f64, sigma: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InterfaceConfig {
    Implicit,
    PerfectContact,
    Jump {
        #[serde(rename = "H")]
        h: f64,
    },
    Partition {
        theta: f64,
    },
    General {
        #[serde(rename = "H", default = "f64_infinity")]
        h: f64,
        theta: f64,
    },
}

fn f64_infinity() -> f64 {
    f64::INFINITY
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub left: f64,
    pub right: f64,
    pub diffusivity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub initial: InitialConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LeftBoundaryConfig {
    #[serde(rename = "aL")]
    pub a: f64,
    #[serde(rename = "bL")]
    pub b: f64,
    pub g: BoundaryFnConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RightBoundaryConfig {
    #[serde(rename = "aR")]
    pub a: f64,
    #[serde(rename = "bR")]
    pub b: f64,
    pub g: BoundaryFnConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(rename = "Np", default = "default_np")]
    pub np: usize,
}

fn default_n() -> usize {
    SolverSettings::default().n_modes
}

fn default_np() -> usize {
    SolverSettings::default().inversion_order
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: default_n(),
            np: default_np(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub layers: Vec<LayerConfig>,
    #[serde(default)]
    pub interfaces: Vec<InterfaceConfig>,
    pub boundary_left: LeftBoundaryConfig,
    pub boundary_right: RightBoundaryConfig,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl InitialConfig {
    fn to_model(&self) -> InitialCondition {
        match self {
            InitialConfig::Constant { value } => InitialCondition::Constant(*value),
            InitialConfig::Polynomial { coeffs } => InitialCondition::Polynomial(coeffs.clone()),
            InitialConfig::Dirac { center, width } => InitialCondition::DiracApprox {
                center: *center,
                width: *width,
            },
        }
    }

    fn from_model(ic: &InitialCondition) -> Result<Self> {
        Ok(match ic {
            InitialCondition::Constant(value) => InitialConfig::Constant { value: *value },
            InitialCondition::Polynomial(coeffs) => InitialConfig::Polynomial {
                coeffs: coeffs.clone(),
            },
            InitialCondition::DiracApprox { center, width } => InitialConfig::Dirac {
                center: *center,
                width: *width,
            },
            InitialCondition::Custom(_) => {
                return Err(Error::Config(
                    "closure-backed initial conditions are not representable in config files"
                        .into(),
                ))
            }
        })
    }
}

impl BoundaryFnConfig {
    fn to_model(&self) -> BoundaryFunction {
        match self {
            BoundaryFnConfig::Constant { value } => BoundaryFunction::constant(*value),
            BoundaryFnConfig::ExpApproach { scale, rate } => {
                BoundaryFunction::exp_approach(*scale, *rate)
            }
            BoundaryFnConfig::Gaussian { cmax, mu, sigma } => {
                BoundaryFunction::gaussian_pulse(*cmax, *mu, *sigma)
            }
        }
    }

    fn from_model(g: &BoundaryFunction) -> Result<Self> {
        match g.descriptor() {
            Some(NamedBoundary::Constant { value }) => {
                Ok(BoundaryFnConfig::Constant { value: *value })
            }
            Some(NamedBoundary::ExpApproach { scale, rate }) => Ok(BoundaryFnConfig::ExpApproach {
                scale: *scale,
                rate: *rate,
            }),
            Some(NamedBoundary::GaussianPulse { cmax, mu, sigma }) => {
                Ok(BoundaryFnConfig::Gaussian {
                    cmax: *cmax,
                    mu: *mu,
                    sigma: *sigma,
                })
            }
            None => Err(Error::Config(
                "closure-backed boundary functions are not representable in config files".into(),
            )),
        }
    }
}

impl InterfaceConfig {
    fn to_model(&self) -> InterfaceSpec {
        match self {
            InterfaceConfig::Implicit => InterfaceSpec::Implicit,
            InterfaceConfig::PerfectContact => InterfaceSpec::PerfectContact,
            InterfaceConfig::Jump { h } => InterfaceSpec::Jump { transfer: *h },
            InterfaceConfig::Partition { theta } => InterfaceSpec::Partition { theta: *theta },
            InterfaceConfig::General { h, theta } => InterfaceSpec::General {
                transfer: if h.is_infinite() {
                    ContactTransfer::Infinite
                } else {
                    ContactTransfer::Finite(*h)
                },
                theta: *theta,
            },
        }
    }

    fn from_model(spec: &InterfaceSpec) -> Self {
        match spec {
            InterfaceSpec::Implicit => InterfaceConfig::Implicit,
            InterfaceSpec::PerfectContact => InterfaceConfig::PerfectContact,
            InterfaceSpec::Jump { transfer } => InterfaceConfig::Jump { h: *transfer },
            InterfaceSpec::Partition { theta } => InterfaceConfig::Partition { theta: *theta },
            InterfaceSpec::General { transfer, theta } => InterfaceConfig::General {
                h: match transfer {
                    ContactTransfer::Finite(h) => *h,
                    ContactTransfer::Infinite => f64::INFINITY,
                },
                theta: *theta,
            },
        }
    }
}

impl Config {
    /// Parse from TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Serialize to TOML text.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Lower to the model types.
    pub fn to_problem(&self) -> Result<(ProblemSpec, SolverSettings)> {
        let layers = self
            .layers
            .iter()
            .map(|l| LayerSpec {
                left: l.left,
                right: l.right,
                diffusivity: l.diffusivity,
                gamma: l.gamma,
                initial: l.initial.to_model(),
            })
            .collect();
        let interfaces = self.interfaces.iter().map(|i| i.to_model()).collect();
        let spec = ProblemSpec {
            layers,
            interfaces,
            left: BoundarySpec {
                a: self.boundary_left.a,
                b: self.boundary_left.b,
                g: self.boundary_left.g.to_model(),
            },
            right: BoundarySpec {
                a: self.boundary_right.a,
                b: self.boundary_right.b,
                g: self.boundary_right.g.to_model(),
            },
        };
        Ok((
            spec,
            SolverSettings {
                n_modes: self.solver.n,
                inversion_order: self.solver.np,
            },
        ))
    }

    /// Build from an (unvalidated) problem spec.
    pub fn from_spec(spec: &ProblemSpec, settings: SolverSettings) -> Result<Self> {
        Ok(Config {
            layers: spec
                .layers
                .iter()
                .map(|l| {
                    Ok(LayerConfig {
                        left: l.left,
                        right: l.right,
                        diffusivity: l.diffusivity,
                        gamma: l.gamma,
                        initial: InitialConfig::from_model(&l.initial)?,
                    })
                })
                .collect::<Result<_>>()?,
            interfaces: spec.interfaces.iter().map(InterfaceConfig::from_model).collect(),
            boundary_left: LeftBoundaryConfig {
                a: spec.left.a,
                b: spec.left.b,
                g: BoundaryFnConfig::from_model(&spec.left.g)?,
            },
            boundary_right: RightBoundaryConfig {
                a: spec.right.a,
                b: spec.right.b,
                g: BoundaryFnConfig::from_model(&spec.right.g)?,
            },
            solver: SolverConfig {
                n: settings.n_modes,
                np: settings.inversion_order,
            },
        })
    }

    /// Build from a validated problem (interfaces come out in general form).
    pub fn from_validated(problem: &ValidatedProblem, settings: SolverSettings) -> Result<Self> {
        let layers = (0..problem.layer_count())
            .map(|i| {
                Ok(LayerConfig {
                    left: problem.layer_left(i),
                    right: problem.layer_right(i),
                    diffusivity: problem.diffusivity(i),
                    gamma: Some(problem.gamma(i)),
                    initial: InitialConfig::from_model(problem.initial(i))?,
                })
            })
            .collect::<Result<_>>()?;
        let interfaces = problem
            .interfaces()
            .iter()
            .map(|g| InterfaceConfig::General {
                h: match g.transfer {
                    ContactTransfer::Finite(h) => h,
                    ContactTransfer::Infinite => f64::INFINITY,
                },
                theta: g.theta,
            })
            .collect();
        Ok(Config {
            layers,
            interfaces,
            boundary_left: LeftBoundaryConfig {
                a: problem.left_bc().a,
                b: problem.left_bc().b,
                g: BoundaryFnConfig::from_model(&problem.left_bc().g)?,
            },
            boundary_right: RightBoundaryConfig {
                a: problem.right_bc().a,
                b: problem.right_bc().b,
                g: BoundaryFnConfig::from_model(&problem.right_bc().g)?,
            },
            solver: SolverConfig {
                n: settings.n_modes,
                np: settings.inversion_order,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_config() {
        let text = r#"
[[layers]]
left = 0.0
right = 0.5
diffusivity = 1.0
initial = { kind = "constant", value = 0.0 }

[[layers]]
left = 0.5
right = 1.0
diffusivity = 0.1
initial = { kind = "constant", value = 0.0 }

[[interfaces]]
kind = "jump"
H = 0.5

[boundary_left]
aL = 1.0
bL = 0.0
g = { kind = "constant", value = 1.0 }

[boundary_right]
aR = 0.0
bR = 1.0
g = { kind = "constant", value = 0.0 }

[solver]
N = 128
Np = 14
"#;
        let cfg = Config::from_toml(text).unwrap();
        let (spec, settings) = cfg.to_problem().unwrap();
        let v = spec.validate().unwrap();
        assert_eq!(v.layer_count(), 2);
        assert_eq!(v.interface(0).transfer, ContactTransfer::Finite(0.5));
        assert_eq!(settings.n_modes, 128);
    }

    #[test]
    fn validated_roundtrip_is_bit_exact() {
        // awkward binary-unfriendly numbers everywhere
        let text = r#"
[[layers]]
left = 0.0
right = 0.3333333333333333
diffusivity = 0.1
gamma = 0.7071067811865476
initial = { kind = "polynomial", coeffs = [0.1, -0.3, 2.5e-3] }

[[layers]]
left = 0.3333333333333333
right = 1.1
diffusivity = 12.250000000000004
initial = { kind = "dirac", center = 0.9, width = 0.013 }

[[interfaces]]
kind = "general"
H = 1234.5678901234567
theta = 1.1999999999999997

[boundary_left]
aL = 0.30000000000000004
bL = 1.7
g = { kind = "exp-approach", scale = 1.05, rate = 0.3333333333333333 }

[boundary_right]
aR = 1.0
bR = 0.0
g = { kind = "gaussian", cmax = 1.0, mu = 2.15, sigma = 1.0 }

[solver]
N = 75
Np = 12
"#;
        let cfg = Config::from_toml(text).unwrap();
        let (spec, settings) = cfg.to_problem().unwrap();
        let validated = spec.validate().unwrap();
        let emitted = Config::from_validated(&validated, settings).unwrap();
        let toml_text = emitted.to_toml().unwrap();
        let reparsed = Config::from_toml(&toml_text).unwrap();
        let (spec2, settings2) = reparsed.to_problem().unwrap();
        let validated2 = spec2.validate().unwrap();
        assert_eq!(settings, settings2);
        assert_eq!(validated.breakpoints(), validated2.breakpoints());
        for i in 0..validated.layer_count() {
            assert!(validated.diffusivity(i).to_bits() == validated2.diffusivity(i).to_bits());
            assert!(validated.gamma(i).to_bits() == validated2.gamma(i).to_bits());
        }
        for (a, b) in validated.interfaces().iter().zip(validated2.interfaces()) {
            assert_eq!(a, b);
        }
        assert_eq!(validated.left_bc().a.to_bits(), validated2.left_bc().a.to_bits());
        assert_eq!(validated.left_bc().b.to_bits(), validated2.left_bc().b.to_bits());
        // boundary-function parameters survive exactly: sample both
        for &t in &[0.1, 1.0, 8.5] {
            assert_eq!(
                validated.left_bc().g.at(t).to_bits(),
                validated2.left_bc().g.at(t).to_bits()
            );
        }
    }

    #[test]
    fn infinite_transfer_roundtrips_through_toml() {
        let cfg = Config {
            layers: vec![
                LayerConfig {
                    left: 0.0,
                    right: 1.0,
                    diffusivity: 1.0,
                    gamma: None,
                    initial: InitialConfig::Constant { value: 0.0 },
                },
                LayerConfig {
                    left: 1.0,
                    right: 2.0,
                    diffusivity: 2.0,
                    gamma: None,
                    initial: InitialConfig::Constant { value: 0.0 },
                },
            ],
            interfaces: vec![InterfaceConfig::General {
                h: f64::INFINITY,
                theta: 0.8,
            }],
            boundary_left: LeftBoundaryConfig {
                a: 1.0,
                b: 0.0,
                g: BoundaryFnConfig::Constant { value: 0.0 },
            },
            boundary_right: RightBoundaryConfig {
                a: 1.0,
                b: 0.0,
                g: BoundaryFnConfig::Constant { value: 0.0 },
            },
            solver: SolverConfig::default(),
        };
        let text = cfg.to_toml().unwrap();
        assert!(text.contains("inf"));
        let back = Config::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
        let (spec, _) = back.to_problem().unwrap();
        let v = spec.validate().unwrap();
        assert!(v.interface(0).transfer.is_infinite());
    }

    #[test]
    fn custom_closure_is_not_serializable() {
        let spec = ProblemSpec {
            layers: vec![LayerSpec {
                left: 0.0,
                right: 1.0,
                diffusivity: 1.0,
                gamma: None,
                initial: InitialCondition::Custom(std::sync::Arc::new(|x| x)),
            }],
            interfaces: vec![],
            left: BoundarySpec::dirichlet(BoundaryFunction::zero()),
            right: BoundarySpec::dirichlet(BoundaryFunction::zero()),
        };
        assert!(matches!(
            Config::from_spec(&spec, SolverSettings::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn missing_required_key_is_reported() {
        let text = r#"
[[layers]]
left = 0.0
right = 1.0
initial = { kind = "constant", value = 0.0 }

[boundary_left]
aL = 1.0
bL = 0.0
g = { kind = "constant", value = 1.0 }

[boundary_right]
aR = 1.0
bR = 0.0
g = { kind = "constant", value = 0.0 }
"#;
        match Config::from_toml(text) {
            Err(Error::Config(msg)) => assert!(msg.contains("diffusivity"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn presets_serialize_to_config() {
        for name in crate::presets::PRESET_NAMES {
            let p = crate::presets::preset(name).unwrap();
            let cfg = Config::from_spec(&p.spec, SolverSettings::default())
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            let text = cfg.to_toml().unwrap();
            let back = Config::from_toml(&text).unwrap();
            let (spec, _) = back.to_problem().unwrap();
            spec.validate().unwrap();
        }
    }
}
