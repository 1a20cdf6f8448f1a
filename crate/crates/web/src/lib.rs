//! The wiki in the browser. A [`Demo`] starts from the geography wiki and
//! keeps every change in memory. Each method returns a JSON document: the
//! result on success, or `{"error": {...}}` with the same fields the HTTP
//! API uses.

use cnlwiki_core::wiki::{DataFiles, WikiError, WikiState};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const FIXTURE: &[(&str, &str)] = include!(concat!(env!("OUT_DIR"), "/fixture.rs"));

fn error(e: WikiError) -> Value {
    let mut body = json!({ "code": e.code(), "message": e.to_string() });
    if let Some(p) = e.position() {
        body["position"] = json!(p);
    }
    if let Some(p) = e.prediction() {
        body["prediction"] = json!(p);
    }
    json!({ "error": body })
}

fn render<T: serde::Serialize>(result: Result<T, WikiError>) -> String {
    match result {
        Ok(v) => json!(v),
        Err(e) => error(e),
    }
    .to_string()
}

#[wasm_bindgen]
pub struct Demo {
    wiki: WikiState,
}

#[wasm_bindgen]
impl Demo {
    /// Loads the bundled geography wiki.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        let mut files = DataFiles::default();
        for (path, content) in FIXTURE {
            files.insert(path, content);
        }
        let wiki = WikiState::from_files(&files).expect("bundled wiki is valid");
        Demo { wiki }
    }

    /// Possible next words after a space-separated prefix.
    pub fn predict(&self, prefix: &str) -> String {
        render(self.wiki.predict(prefix))
    }

    /// Runs a sentence through the consistency gate and stores it.
    pub fn assert(&mut self, article: &str, sentence: &str) -> String {
        render(self.wiki.add_statement(article, sentence))
    }

    pub fn ask(&self, question: &str) -> String {
        render(self.wiki.ask(question))
    }

    /// Every word, for expanding the categories of a prediction.
    pub fn words(&self) -> String {
        json!(self.wiki.lexicon().entries().collect::<Vec<_>>()).to_string()
    }

    pub fn article(&self, lemma: &str) -> String {
        render(self.wiki.article(lemma))
    }

    pub fn export(&self) -> String {
        self.wiki.export_ontology()
    }
}

impl Default for Demo {
    fn default() -> Demo {
        Demo::new()
    }
}
