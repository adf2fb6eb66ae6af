//! Eigenvalue configurations of the symplectic ensembles, from quaternionic
//! Ginibre matrices or from a Metropolis chain on the joint density.
//!
//! Every configuration stores the `N` representatives in the upper half-plane;
//! the conjugate partners are implicit.

mod density;
mod matrix;
mod mcmc;

pub use density::{annulus_integrals, empirical_density, radial_histogram, DensityField, DensityGrid, Histogram};
pub use matrix::{sample_matrix_ginibre, MAX_MATRIX_COUNT, MAX_MATRIX_N};
pub use mcmc::{acceptance_probability, log_density, sample_mcmc, sample_mcmc_with, McmcOptions, MAX_MCMC_N};

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::skew::{fmt_f64, SCHEMA_VERSION};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const SAMPLE_HEADER: [&str; 3] = ["config_id", "re(z)", "im(z)"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Matrix,
    Mcmc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub configs: Vec<Vec<Complex64>>,
    pub ensemble: EnsembleSpec,
    pub method: Method,
    pub rng_seed: u64,
    /// Number of independent chains; configurations are stored chain after chain.
    pub chains: usize,
    /// Post burn-in acceptance rate of the Metropolis chains.
    pub acceptance: Option<f64>,
    /// Frozen proposal step of each chain.
    pub steps: Vec<f64>,
}

#[derive(Serialize)]
struct SampleMeta<'a> {
    schema_version: &'a str,
    ensemble: &'a EnsembleSpec,
    method: Method,
    seed: u64,
    #[serde(rename = "N")]
    n: usize,
    configs: usize,
    chains: usize,
    acceptance: Option<f64>,
    step: Vec<String>,
}

impl SampleSet {
    /// Points per configuration.
    pub fn n(&self) -> usize {
        self.configs.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.configs.iter().flatten().copied()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(SAMPLE_HEADER).map_err(io)?;
        for (id, cfg) in self.configs.iter().enumerate() {
            for z in cfg {
                out.write_record([id.to_string(), fmt_f64(z.re), fmt_f64(z.im)]).map_err(io)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn meta_json(&self) -> Result<String> {
        let meta = SampleMeta {
            schema_version: SCHEMA_VERSION,
            ensemble: &self.ensemble,
            method: self.method,
            seed: self.rng_seed,
            n: self.n(),
            configs: self.len(),
            chains: self.chains,
            acceptance: self.acceptance,
            step: self.steps.iter().map(|&s| fmt_f64(s)).collect(),
        };
        serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngExt;

    #[test]
    fn streams_differ_and_repeat() {
        let a: f64 = stream_rng(7, 0).random();
        let b: f64 = stream_rng(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, stream_rng(7, 0).random::<f64>());
    }

    #[test]
    fn csv_and_meta() {
        let s = SampleSet {
            configs: vec![vec![Complex64::new(0.5, 1.0)], vec![Complex64::new(-1.0, 0.25)]],
            ensemble: EnsembleSpec::Ginibre,
            method: Method::Mcmc,
            rng_seed: 3,
            chains: 1,
            acceptance: Some(0.35),
            steps: vec![0.5],
        };
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("config_id,re(z),im(z)\n0,5.0000000000000000e-1,1.0000000000000000e0\n1,"));
        let meta = s.meta_json().unwrap();
        assert!(meta.contains("\"method\": \"mcmc\"") && meta.contains("\"seed\": 3") && meta.contains("\"acceptance\": 0.35"));
    }
}
