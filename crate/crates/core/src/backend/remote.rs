//! Remote planner backend: the same `PlannerBackend` contract served over a
//! synchronous JSON/HTTP wire protocol.
//!
//! Requests carry the schema version, a deterministic seed, and an
//! idempotency key (`<object id or part>:<attempt counter>`) so retries are
//! safe on the server side. Responses are schema-validated on receipt;
//! anything malformed, unreachable, or slow is returned as a normal
//! [`BackendError`] and therefore consumed as a budgeted attempt by the
//! build loop rather than crashing the pipeline.
//!
//! Endpoints, rooted at the configured base URL:
//!
//! - `POST /propose_plan`  `{schema_version, seed, idempotency_key,
//!   request, strategy}` -> `{plan}`
//! - `POST /repair_program` `{schema_version, seed, idempotency_key,
//!   program, error}` -> `{program}`
//! - `POST /revise_plan`   `{schema_version, seed, idempotency_key,
//!   plan, reasons}` -> `{plan}`
//!
//! Credentials, when required, are read from the environment variable
//! named by `RemoteConfig::auth_env` and sent as a bearer token; the value
//! is never logged.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::{BackendCaps, BackendError, PlannerBackend};
use crate::model::AssetRequest;
use crate::plan::ObjectPlan;
use crate::program::{ExecError, PartProgram};
use crate::router::{default_ontology, CategoryOntology, Strategy};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RemoteConfig {
    /// Base URL, e.g. `http://127.0.0.1:8731`.
    pub endpoint: String,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    /// Transport-level retries per call (idempotency keys make them safe).
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default)]
    pub seed: u64,
    /// Name of the environment variable holding the bearer token.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auth_env: Option<String>,
}

fn default_timeout_ms() -> u64 {
    10_000
}

fn default_retries() -> u32 {
    1
}

pub struct RemoteBackend {
    config: RemoteConfig,
    client: reqwest::blocking::Client,
    ontology: CategoryOntology,
    call_counter: AtomicU64,
}

#[derive(Serialize)]
struct ProposeRequest<'a> {
    schema_version: u32,
    seed: u64,
    idempotency_key: String,
    request: &'a AssetRequest,
    strategy: String,
}

#[derive(Deserialize)]
struct PlanResponse {
    plan: ObjectPlan,
}

#[derive(Serialize)]
struct RepairRequest<'a> {
    schema_version: u32,
    seed: u64,
    idempotency_key: String,
    program: &'a PartProgram,
    error: &'a ExecError,
}

#[derive(Deserialize)]
struct ProgramResponse {
    program: PartProgram,
}

#[derive(Serialize)]
struct ReviseRequest<'a> {
    schema_version: u32,
    seed: u64,
    idempotency_key: String,
    plan: &'a ObjectPlan,
    reasons: &'a [String],
}

impl RemoteBackend {
    pub fn new(config: RemoteConfig) -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(config.timeout_ms))
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(Self {
            config,
            client,
            ontology: default_ontology(),
            call_counter: AtomicU64::new(0),
        })
    }

    fn next_key(&self, tag: &str) -> String {
        let n = self.call_counter.fetch_add(1, Ordering::Relaxed);
        format!("{tag}:{n}")
    }

    fn post<B: Serialize, R: DeserializeOwned>(
        &self,
        path: &str,
        body: &B,
    ) -> Result<R, BackendError> {
        let url = format!("{}/{}", self.config.endpoint.trim_end_matches('/'), path);
        let mut last_err = BackendError::Transport("no attempt made".into());
        for _ in 0..=self.config.retries {
            let mut req = self.client.post(&url).json(body);
            if let Some(var) = &self.config.auth_env {
                if let Ok(token) = std::env::var(var) {
                    req = req.bearer_auth(token);
                }
            }
            match req.send() {
                Ok(resp) => {
                    let status = resp.status();
                    if !status.is_success() {
                        last_err =
                            BackendError::Transport(format!("{url}: HTTP {}", status.as_u16()));
                        continue;
                    }
                    return resp
                        .json::<R>()
                        .map_err(|e| BackendError::SchemaViolation(e.to_string()));
                }
                Err(e) if e.is_timeout() => {
                    last_err = BackendError::Timeout(self.config.timeout_ms);
                }
                Err(e) => {
                    last_err = BackendError::Transport(e.to_string());
                }
            }
        }
        Err(last_err)
    }
}

impl PlannerBackend for RemoteBackend {
    fn capabilities(&self) -> BackendCaps {
        BackendCaps {
            can_propose: true,
            can_repair: true,
            can_revise: true,
            can_critique: false,
        }
    }

    fn ontology(&self) -> &CategoryOntology {
        &self.ontology
    }

    fn propose_plan(
        &self,
        req: &AssetRequest,
        strategy: Strategy,
    ) -> Result<ObjectPlan, BackendError> {
        let body = ProposeRequest {
            schema_version: SCHEMA_VERSION,
            seed: self.config.seed,
            idempotency_key: self.next_key(&req.id),
            request: req,
            strategy: strategy.to_string(),
        };
        let resp: PlanResponse = self.post("propose_plan", &body)?;
        resp.plan
            .validate_structure()
            .map_err(|e| BackendError::SchemaViolation(e.to_string()))?;
        Ok(resp.plan)
    }

    fn repair_program(
        &self,
        prog: &PartProgram,
        err: &ExecError,
    ) -> Result<PartProgram, BackendError> {
        let body = RepairRequest {
            schema_version: SCHEMA_VERSION,
            seed: self.config.seed,
            idempotency_key: self.next_key(&prog.part_name),
            program: prog,
            error: err,
        };
        let resp: ProgramResponse = self.post("repair_program", &body)?;
        resp.program
            .validate()
            .map_err(BackendError::SchemaViolation)?;
        if resp.program.part_name != prog.part_name {
            return Err(BackendError::SchemaViolation(format!(
                "repair renamed part '{}' to '{}'",
                prog.part_name, resp.program.part_name
            )));
        }
        Ok(resp.program)
    }

    fn revise_plan(
        &self,
        plan: &ObjectPlan,
        reasons: &[String],
    ) -> Result<ObjectPlan, BackendError> {
        let body = ReviseRequest {
            schema_version: SCHEMA_VERSION,
            seed: self.config.seed,
            idempotency_key: self.next_key(&plan.category),
            plan,
            reasons,
        };
        let resp: PlanResponse = self.post("revise_plan", &body)?;
        resp.plan
            .validate_structure()
            .map_err(|e| BackendError::SchemaViolation(e.to_string()))?;
        Ok(resp.plan)
    }
}
