//! Stateless JSON HTTP service over the cluster model.
//!
//! | Method | Path              | Body                 |
//! |--------|-------------------|----------------------|
//! | GET    | `/healthz`        |                      |
//! | GET    | `/api/presets`    |                      |
//! | POST   | `/api/evaluate`   | [`EvaluateRequest`]  |
//! | POST   | `/api/sweep`      | [`SweepRequest`]     |
//! | POST   | `/api/crossover`  | [`CrossoverRequest`] |
//!
//! Every POST body may carry a `config` document whose overrides are
//! layered on the service's scenario for that request only.

#![forbid(unsafe_code)]

mod error;
mod wire;

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, Uri};
use axum::routing::{get, post};
use axum::{Json, Router};
use stackplan_core::analysis::{run_sweep, CrossoverResult, SweepSpec};
use stackplan_core::config::Scenario;
use stackplan_core::provision::Provisioning;
use stackplan_core::query::CrossoverQuery;
use stackplan_core::report::{evaluate_request, EvaluationReport};
use tower_http::cors::CorsLayer;

pub use error::ApiError;
pub use wire::*;

/// Largest number of rows (systems times values) one sweep may request.
pub const MAX_SWEEP_POINTS: usize = 10_000;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    pub scenario: Scenario,
    /// Origin allowed to call the service from a browser.
    pub cors_origin: Option<String>,
}

type AppState = Arc<Scenario>;
type Body<T> = Result<Json<T>, JsonRejection>;

pub fn router(config: ServiceConfig) -> Result<Router, ApiError> {
    let app = Router::new()
        .route("/healthz", get(health))
        .route("/api/presets", get(presets))
        .route("/api/evaluate", post(evaluate))
        .route("/api/sweep", post(sweep))
        .route("/api/crossover", post(crossover))
        .fallback(|uri: Uri| async move { ApiError::not_found(uri.path()) })
        .method_not_allowed_fallback(|| async { ApiError::method_not_allowed() })
        .with_state(Arc::new(config.scenario));
    let Some(origin) = config.cors_origin else {
        return Ok(app);
    };
    let origin =
        HeaderValue::from_str(&origin).map_err(|_| ApiError::internal(format!("invalid CORS origin {origin:?}")))?;
    Ok(app.layer(
        CorsLayer::new()
            .allow_origin(origin)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE]),
    ))
}

/// Serves `app` on `listener` until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn scenario_for(base: &Scenario, doc: Option<&stackplan_core::config::ConfigDocument>) -> Result<Scenario, ApiError> {
    Ok(match doc {
        Some(doc) => base.apply(doc)?,
        None => base.clone(),
    })
}

async fn run_blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(format!("worker failed: {e}")))?
}

async fn health() -> Json<Health> {
    Json(Health { status: "ok", name: "stackplan", version: env!("CARGO_PKG_VERSION") })
}

async fn presets(State(scenario): State<AppState>) -> Json<Vec<PresetEntry>> {
    let mut doc = scenario.to_document();
    let shared = doc.shared.take().unwrap_or_default();
    let entries = scenario
        .systems
        .iter()
        .map(|c| PresetEntry {
            name: c.name.clone(),
            system: doc.systems.remove(&c.name).unwrap_or_default(),
            shared: shared.clone(),
        })
        .collect();
    Json(entries)
}

async fn evaluate(
    State(base): State<AppState>,
    body: Body<EvaluateRequest>,
) -> Result<Json<EvaluationReport>, ApiError> {
    let Json(req) = body?;
    let scenario = scenario_for(&base, req.config.as_ref())?;
    let sla = req.sla.as_ref().map(Quantity::seconds).transpose()?;
    let budget = req.budget.as_ref().map(Quantity::watts).transpose()?;
    let request = Provisioning::from_parts(req.mode, sla, budget, req.core_policy)?;
    Ok(Json(evaluate_request(&scenario, &req.system, &request)?))
}

fn sweep_spec(req: &SweepRequest, scenario: &Scenario) -> Result<SweepSpec, ApiError> {
    let systems = req.systems.clone().unwrap_or_else(|| scenario.system_names());
    let values = match (&req.values, &req.log_range) {
        (Some(values), None) => {
            if values.len() * systems.len() > MAX_SWEEP_POINTS {
                return Err(limit_error(values.len() * systems.len(), MAX_SWEEP_POINTS));
            }
            values.iter().map(|q| q.value_of(req.variable)).collect::<Result<Vec<_>, _>>()?
        }
        (None, Some(r)) => {
            let points = r.points.saturating_mul(systems.len());
            if points > MAX_SWEEP_POINTS {
                return Err(limit_error(points, MAX_SWEEP_POINTS));
            }
            stackplan_core::analysis::log_space(
                r.start.value_of(req.variable)?,
                r.stop.value_of(req.variable)?,
                r.points,
            )?
        }
        _ => {
            return Err(ApiError::bad_request(
                "give exactly one of values and log_range",
                serde_json::json!({"field": "values"}),
            ))
        }
    };
    let mode = match (req.mode, req.variable.implied_mode()) {
        (Some(mode), _) | (None, Some(mode)) => mode,
        (None, None) => {
            return Err(ApiError::bad_request(
                format!("mode is required when sweeping {}", req.variable.as_str()),
                serde_json::json!({"field": "mode"}),
            ))
        }
    };
    Ok(SweepSpec {
        variable: req.variable,
        values,
        systems,
        mode,
        sla: req.sla.as_ref().map(Quantity::seconds).transpose()?,
        power_budget: req.budget.as_ref().map(Quantity::watts).transpose()?,
        core_policy: req.core_policy,
    })
}

async fn sweep(State(base): State<AppState>, body: Body<SweepRequest>) -> Result<Json<SweepResponse>, ApiError> {
    let Json(req) = body?;
    let scenario = scenario_for(&base, req.config.as_ref())?;
    let spec = sweep_spec(&req, &scenario)?;
    let mode = spec.mode;
    let rows =
        run_blocking(move || Ok(run_sweep(&spec, &scenario.systems, &scenario.shared, &scenario.workload)?)).await?;
    Ok(Json(SweepResponse { variable: req.variable, mode, rows }))
}

async fn crossover(
    State(base): State<AppState>,
    body: Body<CrossoverRequest>,
) -> Result<Json<CrossoverResult>, ApiError> {
    let Json(req) = body?;
    let scenario = scenario_for(&base, req.config.as_ref())?;
    let query = CrossoverQuery {
        a: req.a,
        b: req.b,
        accessed_percent: req.accessed_percent,
        density_factor: req.density_factor.unwrap_or(1.0),
        core_power_factor: req.core_power_factor.unwrap_or(1.0),
        range: match &req.range {
            Some(r) => r.resolve()?,
            None => stackplan_core::analysis::DEFAULT_SLA_RANGE,
        },
    };
    let result = run_blocking(move || Ok(query.run(&scenario)?)).await?;
    Ok(Json(result))
}
