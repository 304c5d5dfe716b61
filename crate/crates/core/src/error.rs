use thiserror::Error;

use crate::braid_presentations::BraidError;
use crate::desing::DesingError;
use crate::free_tower::FreeError;
use crate::k_group::KError;
use crate::surface_group::SurfaceError;
use crate::trace_monoid::TraceError;

/// Any error raised by the library, tagged with its module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Desing(#[from] DesingError),
}

impl Error {
    /// Module-qualified code such as `k_group::action_undefined`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Surface(e) => e.code(),
            Error::Free(e) => e.code(),
            Error::Braid(e) => e.code(),
            Error::K(e) => e.code(),
            Error::Trace(e) => e.code(),
            Error::Desing(e) => e.code(),
        }
    }
}
