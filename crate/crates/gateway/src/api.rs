use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use cnlwiki_core::grammar::Prediction;
use cnlwiki_core::lexicon::WordEntry;
use cnlwiki_core::wiki::{
    Answer, HierarchyView, MembershipView, SharedWiki, Statement, WikiError, WikiState,
};
use serde::{Deserialize, Serialize};

use crate::ApiError;

type Shared = Arc<SharedWiki>;
type ApiResult<T> = Result<T, ApiError>;

pub fn router(wiki: Shared) -> Router {
    Router::new()
        .route("/api/words", get(list_words).post(add_word))
        .route("/api/articles/{lemma}", get(article))
        .route("/api/articles/{lemma}/statements", post(add_statement))
        .route("/api/articles/{lemma}/statements/{id}", delete(remove_statement))
        .route("/api/articles/{lemma}/statements/{id}/reassert", post(reassert))
        .route("/api/predict", get(predict))
        .route("/api/hierarchy", get(hierarchy))
        .route("/api/individuals/{lemma}/classes", get(memberships))
        .route("/api/ask", post(ask))
        .route("/api/export", get(export))
        .with_state(wiki)
}

/// Runs a read against the current snapshot off the async workers.
async fn read<T: Send + 'static>(
    wiki: &Shared,
    f: impl FnOnce(&WikiState) -> Result<T, WikiError> + Send + 'static,
) -> ApiResult<T> {
    let snapshot = wiki.snapshot();
    run(move || f(&snapshot)).await
}

/// Runs a write through the wiki's single writer.
async fn write<T: Send + 'static>(
    wiki: &Shared,
    f: impl FnOnce(&mut WikiState) -> Result<T, WikiError> + Send + 'static,
) -> ApiResult<T> {
    let wiki = wiki.clone();
    run(move || wiki.update(f)).await
}

async fn run<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, WikiError> + Send + 'static,
) -> ApiResult<T> {
    match tokio::task::spawn_blocking(f).await {
        Ok(result) => Ok(result?),
        Err(e) => Err(ApiError::new("internal-error", e.to_string())),
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| ApiError::new("bad-request", e.body_text()))
}

async fn list_words(State(wiki): State<Shared>) -> ApiResult<Json<Vec<WordEntry>>> {
    read(&wiki, |w| Ok(w.lexicon().entries().cloned().collect())).await.map(Json)
}

async fn add_word(
    State(wiki): State<Shared>,
    payload: Result<Json<WordEntry>, JsonRejection>,
) -> ApiResult<impl IntoResponse> {
    let entry = body(payload)?;
    let added = entry.clone();
    write(&wiki, move |w| w.add_word(entry)).await?;
    Ok((StatusCode::CREATED, Json(added)))
}

#[derive(Serialize)]
struct ArticleView {
    word: WordEntry,
    statements: Vec<Statement>,
}

async fn article(
    State(wiki): State<Shared>,
    Path(lemma): Path<String>,
) -> ApiResult<Json<ArticleView>> {
    read(&wiki, move |w| {
        let statements = w.article(&lemma)?.into_iter().cloned().collect();
        let word = w.lexicon().get(&lemma).cloned();
        let word = word.ok_or(WikiError::UnknownArticle(lemma))?;
        Ok(ArticleView { word, statements })
    })
    .await
    .map(Json)
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum StatementKind {
    #[default]
    Sentence,
    Comment,
}

#[derive(Deserialize)]
struct NewStatement {
    text: String,
    #[serde(default)]
    kind: StatementKind,
}

async fn add_statement(
    State(wiki): State<Shared>,
    Path(lemma): Path<String>,
    payload: Result<Json<NewStatement>, JsonRejection>,
) -> ApiResult<Json<Statement>> {
    let new = body(payload)?;
    write(&wiki, move |w| match new.kind {
        StatementKind::Sentence => w.add_statement(&lemma, &new.text),
        StatementKind::Comment => w.add_comment(&lemma, &new.text),
    })
    .await
    .map(Json)
}

/// Fails unless statement `id` belongs to article `lemma`.
fn owned(w: &WikiState, lemma: &str, id: u64) -> Result<(), WikiError> {
    match w.statement(id) {
        Some(s) if s.article == lemma => Ok(()),
        _ => Err(WikiError::UnknownStatement(id)),
    }
}

async fn remove_statement(
    State(wiki): State<Shared>,
    Path((lemma, id)): Path<(String, u64)>,
) -> ApiResult<Json<Statement>> {
    write(&wiki, move |w| {
        owned(w, &lemma, id)?;
        w.remove_statement(id)
    })
    .await
    .map(Json)
}

async fn reassert(
    State(wiki): State<Shared>,
    Path((lemma, id)): Path<(String, u64)>,
) -> ApiResult<Json<Statement>> {
    write(&wiki, move |w| {
        owned(w, &lemma, id)?;
        w.reassert_statement(id)
    })
    .await
    .map(Json)
}

#[derive(Deserialize)]
struct PrefixQuery {
    #[serde(default)]
    prefix: String,
}

async fn predict(
    State(wiki): State<Shared>,
    Query(q): Query<PrefixQuery>,
) -> ApiResult<Json<Prediction>> {
    read(&wiki, move |w| w.predict(&q.prefix)).await.map(Json)
}

async fn hierarchy(State(wiki): State<Shared>) -> ApiResult<Json<HierarchyView>> {
    read(&wiki, |w| w.hierarchy_view()).await.map(Json)
}

async fn memberships(
    State(wiki): State<Shared>,
    Path(lemma): Path<String>,
) -> ApiResult<Json<MembershipView>> {
    read(&wiki, move |w| w.membership_view(&lemma)).await.map(Json)
}

#[derive(Deserialize)]
struct Question {
    question: String,
}

async fn ask(
    State(wiki): State<Shared>,
    payload: Result<Json<Question>, JsonRejection>,
) -> ApiResult<Json<Answer>> {
    let q = body(payload)?;
    read(&wiki, move |w| w.ask(&q.question)).await.map(Json)
}

async fn export(State(wiki): State<Shared>) -> ApiResult<impl IntoResponse> {
    let text = read(&wiki, |w| Ok(w.export_ontology())).await?;
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text))
}
