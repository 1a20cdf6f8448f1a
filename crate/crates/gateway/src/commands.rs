//! Batch operations on a data directory.

use std::path::Path;

use cnlwiki_core::grammar::Prediction;
use cnlwiki_core::wiki::{Answer, WikiError, WikiState};

/// Loads and verifies the wiki; returns a one-line summary.
pub fn check(dir: &Path) -> Result<String, WikiError> {
    let w = WikiState::load(dir)?;
    let red = w.statements().filter(|s| s.status.is_red()).count();
    Ok(format!(
        "ok: {} words, {} statements ({red} red), {} axioms",
        w.lexicon().len(),
        w.statements().count(),
        w.ontology().len()
    ))
}

pub fn export(dir: &Path) -> Result<String, WikiError> {
    Ok(WikiState::load(dir)?.export_ontology())
}

/// One answer lemma per line for `which` questions; `yes`, `no` or
/// `unknown` otherwise.
pub fn ask(dir: &Path, question: &str) -> Result<String, WikiError> {
    let answer = WikiState::load(dir)?.ask(question)?;
    Ok(match answer {
        Answer::Individuals { individuals, .. } => {
            individuals.iter().map(|i| format!("{i}\n")).collect()
        }
        Answer::Yes => "yes\n".into(),
        Answer::No => "no\n".into(),
        Answer::Unknown => "unknown\n".into(),
        Answer::Outside { reason } => format!("outside: {}\n", reason.as_str()),
    })
}

pub fn predict(dir: &Path, prefix: &str) -> Result<Prediction, WikiError> {
    WikiState::load(dir)?.predict(prefix)
}

/// Outcome of one line of an import file.
#[derive(Debug)]
pub enum ImportLine {
    Added { line: usize, id: u64, status: String },
    Failed { line: usize, error: WikiError },
}

impl ImportLine {
    pub fn render(&self) -> String {
        match self {
            ImportLine::Added { line, id, status } => format!("line {line}: {id} {status}"),
            ImportLine::Failed { line, error } => {
                format!("line {line}: {}: {error}", error.code())
            }
        }
    }
}

/// Adds `<article>\t<sentence>` lines in order and saves the result.
/// Blank lines and lines starting with `#` are skipped. A failing line is
/// reported and the rest are still added.
pub fn import(dir: &Path, text: &str) -> Result<Vec<ImportLine>, WikiError> {
    let mut w = WikiState::load(dir)?;
    let mut report = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let outcome = match raw.split_once('\t') {
            Some((article, sentence)) => w.add_statement(article.trim(), sentence),
            None => Err(WikiError::Load {
                file: "import".into(),
                line,
                reason: "expected `<article>\\t<sentence>`".into(),
            }),
        };
        report.push(match outcome {
            Ok(s) => ImportLine::Added {
                line,
                id: s.id,
                status: s.status.to_string(),
            },
            Err(error) => ImportLine::Failed { line, error },
        });
    }
    w.save(dir)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cnlwiki_core::lexicon::WordEntry;

    fn wiki_dir() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        let mut w = WikiState::new();
        for e in [
            WordEntry::proper_name("switzerland"),
            WordEntry::proper_name("baltic-sea"),
            WordEntry::noun("landlocked-country", "landlocked-country", "landlocked-countries"),
            WordEntry::noun("sea", "sea", "seas"),
            WordEntry::transitive_verb("borders", "borders", "border", "bordered"),
        ] {
            w.add_word(e).unwrap();
        }
        w.save(dir.path()).unwrap();
        dir
    }

    #[test]
    fn import_reports_each_line() {
        let dir = wiki_dir();
        let text = "# geography\n\
            switzerland\tswitzerland is a landlocked-country .\n\
            baltic-sea\tbaltic-sea is a sea .\n\
            \n\
            switzerland\tswitzerland borders baltic-sea .\n\
            landlocked-country\tevery landlocked-country borders no sea .\n\
            sea\ta sea can border switzerland .\n\
            sea\tevery sea .\n\
            no tab here\n\
            atlantis\tswitzerland is a sea .\n";
        let lines: Vec<String> = import(dir.path(), text).unwrap().iter().map(ImportLine::render).collect();
        assert_eq!(lines[..5], [
            "line 2: 1 ok",
            "line 3: 2 ok",
            "line 5: 3 ok",
            "line 6: 4 conflict",
            "line 7: 5 nonowl:modality",
        ]);
        assert!(lines[5].starts_with("line 8: syntax-error:"));
        assert!(lines[6].starts_with("line 9: load-failure:"));
        assert!(lines[7].starts_with("line 10: unknown-article:"));
        assert_eq!(WikiState::load(dir.path()).unwrap().statements().count(), 5);
    }

    #[test]
    fn empty_wiki_exports_only_the_notice() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(export(dir.path()).unwrap().lines().count(), 1);
        assert!(check(dir.path()).unwrap().starts_with("ok: 0 words"));
    }

    #[test]
    fn ask_prints_one_lemma_per_line() {
        let dir = wiki_dir();
        import(
            dir.path(),
            "switzerland\tswitzerland borders baltic-sea .\n\
             switzerland\tswitzerland is a landlocked-country .\n\
             sea\tbaltic-sea is a sea .\n",
        )
        .unwrap();
        assert_eq!(
            ask(dir.path(), "which landlocked-countries border baltic-sea ?").unwrap(),
            "switzerland\n"
        );
        assert_eq!(ask(dir.path(), "which seas border switzerland ?").unwrap(), "");
        assert_eq!(
            ask(dir.path(), "which seas are bordered by switzerland ?").unwrap(),
            "outside: passive-class-agent-unsupported\n"
        );
        assert_eq!(ask(dir.path(), "is baltic-sea a sea ?").unwrap(), "yes\n");
        assert_eq!(ask(dir.path(), "is switzerland a sea ?").unwrap(), "unknown\n");
        assert_eq!(ask(dir.path(), "is switzerland a sea .").unwrap_err().code(), "syntax-error");
    }
}
