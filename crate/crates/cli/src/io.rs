//! State and projector files.

use std::fs;
use std::path::Path;

use blockcoh::st::{to_st_basis, Basis};
use blockcoh::{ComplexMatrix, ProjectorSet, QuantumState};
use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// JSON density matrix with separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    /// Coordinates of `re`/`im`; singlet/triplet when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A parsed state and the distance moved by the density projection.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub state: QuantumState,
    pub projection_distance: f64,
}

impl StateFile {
    #[cfg(test)]
    pub fn from_state(rho: &QuantumState, note: Option<String>) -> Self {
        let m = rho.matrix();
        StateFile {
            dim: m.dim(),
            re: m.real_parts(),
            im: m.imag_parts(),
            basis: Some(Basis::SingletTriplet),
            note,
        }
    }

    /// Matrix in singlet/triplet coordinates (for `dim = 4`) or as written.
    pub fn matrix(&self) -> blockcoh::Result<ComplexMatrix> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(blockcoh::Error::DimensionMismatch {
                expected: self.dim,
                found: self.re.len().max(self.im.len()),
            });
        }
        let m = ComplexMatrix::from_real_imag(&self.re, &self.im)?;
        match self.basis {
            Some(Basis::Product) => {
                if self.dim != 4 {
                    return Err(blockcoh::Error::InvalidParameter(
                        "product basis requires dim = 4".into(),
                    ));
                }
                Ok(to_st_basis(&m))
            }
            _ => Ok(m),
        }
    }

    pub fn to_state(&self) -> blockcoh::Result<LoadedState> {
        let m = self.matrix()?;
        if !m.is_hermitian(1e-9) {
            return Err(blockcoh::Error::NotHermitian {
                deviation: m.hermiticity_defect(),
            });
        }
        let (state, projection_distance) = match QuantumState::new(m.clone()) {
            Ok(s) => {
                let d = s.matrix().max_abs_diff(&m);
                (s, d)
            }
            Err(_) => QuantumState::nearest_density(&m)?,
        };
        Ok(LoadedState {
            state,
            projection_distance,
        })
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_state(path: &Path) -> CliResult<LoadedState> {
    let text = read(path)?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::parse(path, &e))?;
    let loaded = file.to_state()?;
    info!(
        "{}: projection distance {:.3e}",
        path.display(),
        loaded.projection_distance
    );
    Ok(loaded)
}

#[derive(Debug, Deserialize)]
struct ProjectorMatrix {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
struct ProjectorFile {
    projectors: Vec<ProjectorMatrix>,
}

/// `"st"`, an index partition such as `"0|1,2,3"`, or a JSON file of
/// explicit projector matrices. Without `dim` the dimension is taken from
/// the string itself.
pub fn parse_projectors(spec: &str, dim: Option<usize>) -> CliResult<ProjectorSet> {
    if spec.eq_ignore_ascii_case("st") {
        let dim = dim.unwrap_or(4);
        if dim != 4 {
            return Err(CliError::Usage(format!(
                "singlet/triplet projectors need dim 4, state has dim {dim}"
            )));
        }
        return Ok(ProjectorSet::singlet_triplet());
    }
    if spec.contains('|') {
        let dim = dim.unwrap_or_else(|| spec.split(['|', ',']).count());
        return Ok(ProjectorSet::parse_partition(dim, spec)?);
    }
    let path = Path::new(spec);
    let text = read(path)?;
    let file: ProjectorFile = serde_json::from_str(&text).map_err(|e| CliError::parse(path, &e))?;
    let projectors = file
        .projectors
        .iter()
        .map(|p| ComplexMatrix::from_real_imag(&p.re, &p.im))
        .collect::<blockcoh::Result<Vec<_>>>()?;
    let set = ProjectorSet::new(projectors)?;
    if let Some(dim) = dim.filter(|&d| d != set.dim()) {
        return Err(blockcoh::Error::DimensionMismatch {
            expected: dim,
            found: set.dim(),
        }
        .into());
    }
    Ok(set)
}
