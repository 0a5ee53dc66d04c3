use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Parse,
    Io,
    InvalidInput,
    Lattice,
    Surface,
    Heisenberg,
    Modular,
    Theta,
    Fock,
    Internal,
}

#[derive(Clone, Debug, Error)]
#[error("{kind:?}: {detail}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub detail: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, detail: impl Into<String>) -> Self {
        CliError { kind, detail: detail.into() }
    }

    pub fn parse(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::Parse, detail)
    }

    pub fn invalid(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::InvalidInput, detail)
    }
}

macro_rules! from_core {
    ($t:ty, $k:ident) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(ErrorKind::$k, e.to_string())
            }
        }
    };
}

from_core!(lattice_cft_core::LatticeError, Lattice);
from_core!(lattice_cft_core::SurfaceError, Surface);
from_core!(lattice_cft_core::heisenberg::HeisenbergError, Heisenberg);
from_core!(lattice_cft_core::modular::ModularError, Modular);
from_core!(lattice_cft_core::theta::ThetaError, Theta);
from_core!(lattice_cft_core::fock::FockError, Fock);

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(ErrorKind::Io, e.to_string())
    }
}
