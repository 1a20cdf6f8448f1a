//! HTTP+JSON access to a wiki, plus the operations behind the `cnlwiki`
//! command line.

mod api;
pub mod commands;
mod error;

pub use api::router;
pub use error::ApiError;
