use std::path::PathBuf;

use k3dyn::ball::Precision;
use k3dyn::mapclass::TrackConfig;
use k3dyn::shadowing::{CertifyConfig, MIN_BITS};
use k3dyn::surface::{OrbitConfig, PseudoOrbit};
use serde::Serialize;

use crate::error::CliError;

/// Validated settings shared by all stages.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    pub precision: u32,
    pub orbit: OrbitConfig,
    /// Where the orbit came from; `None` for the built-in one.
    pub orbit_path: Option<PathBuf>,
    pub certify: CertifyConfig,
    pub track: TrackConfig,
    pub out: PathBuf,
}

pub struct Overrides {
    pub precision: u32,
    pub orbit: Option<PathBuf>,
    pub parameter: Option<String>,
    pub eps: Option<f64>,
    pub eps_prime: Option<f64>,
    pub max_segment: Option<f64>,
    pub out: PathBuf,
}

impl PipelineConfig {
    pub fn build(o: Overrides) -> Result<PipelineConfig, CliError> {
        if o.precision < MIN_BITS {
            return Err(CliError::Precision { bits: o.precision, min: MIN_BITS });
        }
        Precision::new(o.precision).map_err(|e| CliError::Config(e.to_string()))?;
        let mut orbit = match &o.orbit {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(CliError::io(p))?;
                OrbitConfig::from_json(&text).map_err(|e| CliError::Config(e.to_string()))?
            }
            None => OrbitConfig::default_orbit(),
        };
        if let Some(a) = o.parameter {
            orbit.parameter = a;
        }
        match orbit.parameter.trim().parse::<f64>() {
            Ok(a) if a == 0.0 => return Err(CliError::Config("parameter A must be nonzero".into())),
            Ok(a) if a.is_finite() => {}
            _ => return Err(CliError::Config(format!("parameter A = {:?} is not a number", orbit.parameter))),
        }
        let mut certify = CertifyConfig::default();
        if let Some(e) = o.eps {
            certify.eps = positive("--eps", e)?;
        }
        if let Some(e) = o.eps_prime {
            certify.eps_prime = positive("--eps-prime", e)?;
        }
        let mut track = TrackConfig::default();
        if let Some(h) = o.max_segment {
            track.max_segment = positive("--max-segment", h)?;
        }
        Ok(PipelineConfig {
            precision: o.precision,
            orbit,
            orbit_path: o.orbit,
            certify,
            track,
            out: o.out,
        })
    }

    pub fn prec(&self) -> Precision {
        Precision::new(self.precision).expect("validated in build")
    }

    pub fn pseudo_orbit(&self) -> Result<PseudoOrbit, CliError> {
        PseudoOrbit::from_config(&self.orbit, self.prec()).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{flag} must be positive, got {v}")))
    }
}
