use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::units::UnitError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown system {name:?}; valid systems: {}", valid.join(", "))]
    UnknownSystem { name: String, valid: Vec<String> },

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error(transparent)]
    Unit(#[from] UnitError),

    #[error("design does not fit the system configuration: {0}")]
    DesignMismatch(String),

    #[error("power budget {budget_w} W is infeasible for {system}; minimum feasible budget is {min_budget_w} W")]
    Infeasible { system: String, budget_w: f64, min_budget_w: f64 },

    #[error("no crossover between {a} and {b} in [{lo_s} s, {hi_s} s]: {lo_order} at the low end, {hi_order} at the high end")]
    NoCrossover { a: String, b: String, lo_s: f64, hi_s: f64, lo_order: String, hi_order: String },
}

/// Machine-readable class of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadRequest,
    Infeasible,
    NoCrossover,
    Internal,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::BadRequest => "bad_request",
            ErrorCode::Infeasible => "infeasible",
            ErrorCode::NoCrossover => "no_crossover",
            ErrorCode::Internal => "internal",
        }
    }
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::UnknownSystem { .. } | Error::Invalid { .. } | Error::Unit(_) => ErrorCode::BadRequest,
            Error::Infeasible { .. } => ErrorCode::Infeasible,
            Error::NoCrossover { .. } => ErrorCode::NoCrossover,
            Error::DesignMismatch(_) => ErrorCode::Internal,
        }
    }

    /// Structured context for the error, suitable for a JSON body.
    pub fn detail(&self) -> Value {
        match self {
            Error::UnknownSystem { name, valid } => json!({"system": name, "valid": valid}),
            Error::Invalid { field, reason } => json!({"field": field, "reason": reason}),
            Error::Unit(e) => json!({"input": e.input, "kind": e.kind, "reason": e.reason}),
            Error::DesignMismatch(reason) => json!({"reason": reason}),
            Error::Infeasible { system, budget_w, min_budget_w } => {
                json!({"system": system, "budget_w": budget_w, "min_budget_w": min_budget_w})
            }
            Error::NoCrossover { a, b, lo_s, hi_s, lo_order, hi_order } => json!({
                "a": a, "b": b, "range_s": [lo_s, hi_s], "low_end": lo_order, "high_end": hi_order,
            }),
        }
    }

    /// `{"code", "message", "detail"}`, the error body used by every front end.
    pub fn to_json(&self) -> Value {
        json!({"code": self.code(), "message": self.to_string(), "detail": self.detail()})
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid { field: field.into(), reason: reason.into() }
    }
}
