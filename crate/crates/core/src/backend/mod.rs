//! Pluggable planner/critic backends.
//!
//! The engine drives every backend through one trait: plan proposal,
//! program repair, plan revision, and an optional critique override of the
//! geometric critic. The shipped [`template::TemplateBackend`] is fully
//! deterministic; [`remote::RemoteBackend`] speaks the same contract over
//! JSON/HTTP and surfaces every transport or schema problem as a budgeted
//! attempt failure instead of a crash.

pub mod remote;
pub mod template;

pub use remote::{RemoteBackend, RemoteConfig};
pub use template::TemplateBackend;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::AssetRequest;
use crate::plan::ObjectPlan;
use crate::program::{CritiqueVerdict, ExecError, ObjectAsset, PartProgram};
use crate::router::{CategoryOntology, Strategy};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BackendError {
    #[error("backend does not support {0}")]
    Unsupported(String),
    #[error("no template for category '{0}'")]
    NoTemplate(String),
    #[error("remote transport error: {0}")]
    Transport(String),
    #[error("remote call timed out after {0} ms")]
    Timeout(u64),
    #[error("remote response violates schema: {0}")]
    SchemaViolation(String),
}

/// What a backend implementation can do. Capabilities the backend lacks
/// surface as failed (budget-consuming) attempts in the repair loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendCaps {
    pub can_propose: bool,
    pub can_repair: bool,
    pub can_revise: bool,
    pub can_critique: bool,
}

/// Planner backend contract. Implementations must be deterministic for a
/// declared seed, or document themselves as nondeterministic (which forfeits
/// byte-identical rebuild guarantees for their assets). All methods may be
/// called from multiple threads.
pub trait PlannerBackend: Send + Sync {
    fn capabilities(&self) -> BackendCaps;

    /// Ontology used to re-verify revised plans.
    fn ontology(&self) -> &CategoryOntology;

    fn propose_plan(
        &self,
        req: &AssetRequest,
        strategy: Strategy,
    ) -> Result<ObjectPlan, BackendError>;

    fn repair_program(
        &self,
        prog: &PartProgram,
        err: &ExecError,
    ) -> Result<PartProgram, BackendError>;

    fn revise_plan(
        &self,
        plan: &ObjectPlan,
        reasons: &[String],
    ) -> Result<ObjectPlan, BackendError>;

    /// Optional critique override; `None` delegates to the geometric
    /// critic.
    fn critique(&self, _asset: &ObjectAsset) -> Option<CritiqueVerdict> {
        None
    }
}
