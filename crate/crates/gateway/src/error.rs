use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use cnlwiki_core::grammar::Prediction;
use cnlwiki_core::wiki::WikiError;
use serde::Serialize;
use thiserror::Error;

/// The JSON body of every failed request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[error("{code}: {message}")]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<Prediction>,
}

impl ApiError {
    pub fn new(code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            code: code.to_string(),
            message: message.into(),
            position: None,
            prediction: None,
        }
    }

    pub fn status(&self) -> StatusCode {
        match self.code.as_str() {
            "unknown-article" | "unknown-statement" => StatusCode::NOT_FOUND,
            "word-in-use" | "not-reassertable" | "duplicate-lemma" | "form-collision" => {
                StatusCode::CONFLICT
            }
            "io-error" | "load-failure" | "inconsistent-ontology" | "internal-error" => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            _ => StatusCode::BAD_REQUEST,
        }
    }
}

impl From<WikiError> for ApiError {
    fn from(e: WikiError) -> ApiError {
        ApiError {
            code: e.code().to_string(),
            message: e.to_string(),
            position: e.position(),
            prediction: e.prediction().cloned(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self)).into_response()
    }
}
