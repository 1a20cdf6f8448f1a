use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use cnlwiki_core::wiki::{DataFiles, SharedWiki, WikiState};
use cnlwiki_gateway::router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/geography")
}

struct Server {
    app: Router,
    wiki: Arc<SharedWiki>,
    dir: tempfile::TempDir,
}

fn server() -> Server {
    let dir = tempfile::tempdir().unwrap();
    DataFiles::read(&fixture()).unwrap().write(dir.path()).unwrap();
    let wiki = Arc::new(SharedWiki::new(
        WikiState::load(dir.path()).unwrap(),
        Some(dir.path().to_path_buf()),
    ));
    Server {
        app: router(wiki.clone()),
        wiki,
        dir,
    }
}

impl Server {
    async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let (status, bytes) = self.raw(method, uri, body).await;
        let value = serde_json::from_slice(&bytes).unwrap_or_else(|_| {
            panic!("{uri}: not JSON: {}", String::from_utf8_lossy(&bytes))
        });
        (status, value)
    }

    async fn raw(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
        let mut req = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(v) => {
                req = req.header("content-type", "application/json");
                Body::from(v.to_string())
            }
            None => Body::empty(),
        };
        let resp = self.app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        (status, bytes)
    }

    async fn get(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::GET, uri, None).await
    }

    async fn post(&self, uri: &str, body: Value) -> (StatusCode, Value) {
        self.call(Method::POST, uri, Some(body)).await
    }
}

#[tokio::test]
async fn prediction_after_every() {
    let s = server();
    let (status, body) = s.get("/api/predict?prefix=every").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"function_words": [], "categories": ["noun-singular"]}));
}

#[tokio::test]
async fn prediction_takes_plus_joined_tokens() {
    let s = server();
    let w = s.wiki.snapshot();
    for prefix in ["", "every+country", "switzerland+borders+at+least", "which+countries+border"] {
        let (status, body) = s.get(&format!("/api/predict?prefix={prefix}")).await;
        assert_eq!(status, StatusCode::OK);
        let expected = w.predict(&prefix.replace('+', " ")).unwrap();
        assert_eq!(body, serde_json::to_value(expected).unwrap(), "{prefix}");
    }
    let (_, body) = s.get("/api/predict").await;
    assert_eq!(body["function_words"], json!(["every", "no", "a", "an", "is", "which"]));
}

#[tokio::test]
async fn prediction_of_unknown_word() {
    let s = server();
    let (status, body) = s.get("/api/predict?prefix=every+unicorn").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "unknown-word");
    assert_eq!(body["position"], 1);
}

#[tokio::test]
async fn words_are_listed_and_added() {
    let s = server();
    let (_, words) = s.get("/api/words").await;
    let before = words.as_array().unwrap().len();
    assert_eq!(before, s.wiki.snapshot().lexicon().len());
    let lake = json!({"lemma": "lake", "word_class": "noun", "forms": {"singular": "lake", "plural": "lakes"}});
    let (status, body) = s.post("/api/words", lake.clone()).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body, lake);
    let (status, body) = s.post("/api/words", lake).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "duplicate-lemma");
    let (_, words) = s.get("/api/words").await;
    assert_eq!(words.as_array().unwrap().len(), before + 1);
    let (status, body) = s.get("/api/articles/lake").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["statements"], json!([]));
    let bad = json!({"lemma": "Lake", "word_class": "noun", "forms": {"singular": "lake"}});
    let (status, body) = s.post("/api/words", bad).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "malformed-forms");
}

#[tokio::test]
async fn unknown_article_is_not_found() {
    let s = server();
    let (status, body) = s.get("/api/articles/atlantis").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown-article");
    assert!(body["message"].is_string());
}

#[tokio::test]
async fn article_renders_its_statements() {
    let s = server();
    let (status, body) = s.get("/api/articles/liechtenstein").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["word"]["word_class"], "proper-name");
    let w = s.wiki.snapshot();
    let expected: Vec<Value> = w
        .article("liechtenstein")
        .unwrap()
        .iter()
        .map(|st| serde_json::to_value(st).unwrap())
        .collect();
    assert_eq!(body["statements"], Value::Array(expected));
    let last = body["statements"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["status"], "conflict");
    assert_eq!(last["text"], "liechtenstein borders north-sea .");
}

#[tokio::test]
async fn gating_results_are_ordinary_responses() {
    let s = server();
    let (status, body) = s
        .post("/api/articles/switzerland/statements", json!({"text": "switzerland borders north-sea ."}))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "conflict");
    let (status, body) = s
        .post("/api/articles/sea/statements", json!({"text": "every sea must border a country ."}))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "nonowl");
    assert_eq!(body["reason"], "modality");
    let (status, body) = s
        .post("/api/articles/switzerland/statements", json!({"text": "Landlocked since ever.", "kind": "comment"}))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["kind"], "comment");
    let (status, body) = s
        .post("/api/articles/city/statements", json!({"text": "every city is a city ."}))
        .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
    assert_eq!(body["axioms"], json!(["SubClassOf(city city)"]));
    assert_eq!(WikiState::load(s.dir.path()).unwrap(), *s.wiki.snapshot());
}

#[tokio::test]
async fn malformed_sentences_are_rejected_with_a_prediction() {
    let s = server();
    let (status, body) = s
        .post("/api/articles/switzerland/statements", json!({"text": "switzerland borders ."}))
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "syntax-error");
    assert_eq!(body["position"], 2);
    assert!(body["prediction"]["categories"].as_array().unwrap().contains(&json!("proper-name")));
    let (status, body) = s
        .post("/api/articles/switzerland/statements", json!({"text": "is switzerland a country ?"}))
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "not-a-statement");
    let (status, body) = s.post("/api/articles/switzerland/statements", json!({"sentence": "x"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "bad-request");
    let before = s.wiki.snapshot();
    assert_eq!(*before, WikiState::load(s.dir.path()).unwrap());
}

#[tokio::test]
async fn remove_then_reassert() {
    let s = server();
    let add = |text: &'static str, article: &'static str| {
        let s = &s;
        async move {
            s.post(&format!("/api/articles/{article}/statements"), json!({ "text": text }))
                .await
                .1
        }
    };
    add("bern is a city .", "bern").await;
    let border = add("bern borders baltic-sea .", "bern").await;
    let rule = add("no city borders a sea .", "city").await;
    assert_eq!(rule["status"], "conflict");
    let rule_id = rule["id"].as_u64().unwrap();
    let (status, body) = s.post(&format!("/api/articles/city/statements/{rule_id}/reassert"), json!({})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "conflict");
    let border_id = border["id"].as_u64().unwrap();
    let (status, body) = s.call(Method::DELETE, &format!("/api/articles/city/statements/{border_id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown-statement");
    let (status, body) = s.call(Method::DELETE, &format!("/api/articles/bern/statements/{border_id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["id"], border_id);
    let (status, body) = s.post(&format!("/api/articles/city/statements/{rule_id}/reassert"), json!({})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
    assert_eq!(body["id"], rule_id);
    let (status, body) = s.post(&format!("/api/articles/city/statements/{rule_id}/reassert"), json!({})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "not-reassertable");
    assert_eq!(WikiState::load(s.dir.path()).unwrap(), *s.wiki.snapshot());
}

#[tokio::test]
async fn views_render_core_results() {
    let s = server();
    let w = s.wiki.snapshot();
    let (status, body) = s.get("/api/hierarchy").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, serde_json::to_value(w.hierarchy_view().unwrap()).unwrap());
    let (status, body) = s.get("/api/individuals/switzerland/classes").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, serde_json::to_value(w.membership_view("switzerland").unwrap()).unwrap());
    assert!(body["classes"].as_array().unwrap().contains(&json!("landlocked-country")));
    let (status, body) = s.get("/api/individuals/sea/classes").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "not-an-individual");
    let (status, body) = s.get("/api/individuals/atlantis/classes").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown-article");
}

#[tokio::test]
async fn questions() {
    let s = server();
    let (status, body) = s.post("/api/ask", json!({"question": "which countries border switzerland ?"})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["answer"], "individuals");
    assert_eq!(body["individuals"], json!(["austria", "france", "italy", "liechtenstein"]));
    assert_eq!(body["sentences"][0], "austria is a country .");
    let (_, body) = s.post("/api/ask", json!({"question": "is germany a coastal-country ?"})).await;
    assert_eq!(body, json!({"answer": "yes"}));
    let (_, body) = s.post("/api/ask", json!({"question": "which countries can border a sea ?"})).await;
    assert_eq!(body, json!({"answer": "outside", "reason": "modality"}));
    let (status, body) = s.post("/api/ask", json!({"question": "switzerland is a country ."})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "not-a-question");
}

#[tokio::test]
async fn export_is_the_core_export() {
    let s = server();
    let (status, bytes) = s.raw(Method::GET, "/api/export", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(String::from_utf8(bytes).unwrap(), s.wiki.snapshot().export_ontology());
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_writes_get_distinct_ids() {
    let s = server();
    let first = s.wiki.snapshot().next_id();
    let tasks: Vec<_> = (0..16)
        .map(|_| {
            let app = s.app.clone();
            tokio::spawn(async move {
                let req = Request::post("/api/articles/bern/statements")
                    .header("content-type", "application/json")
                    .body(Body::from(json!({"text": "bern is a city ."}).to_string()))
                    .unwrap();
                let resp = app.oneshot(req).await.unwrap();
                assert_eq!(resp.status(), StatusCode::OK);
                let bytes = resp.into_body().collect().await.unwrap().to_bytes();
                serde_json::from_slice::<Value>(&bytes).unwrap()["id"].as_u64().unwrap()
            })
        })
        .collect();
    let mut ids = Vec::new();
    for t in tasks {
        ids.push(t.await.unwrap());
    }
    ids.sort();
    assert_eq!(ids, (first..first + 16).collect::<Vec<_>>());
    assert_eq!(WikiState::load(s.dir.path()).unwrap(), *s.wiki.snapshot());
}
