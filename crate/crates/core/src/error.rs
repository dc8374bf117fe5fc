use thiserror::Error;

use crate::numerics::NumericsError;
use crate::skeleton::SkeletonError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("not a 3-cocycle: {0}")]
    NotACocycle(String),
    #[error("actions do not commute: {0}")]
    ActionsDoNotCommute(String),
    #[error("module category has no labels")]
    EmptyModule,
    #[error("structure data unavailable: {0}")]
    MissingStructure(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
