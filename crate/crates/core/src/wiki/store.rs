//! The on-disk layout: `vocabulary.tsv`, `next-id` and one
//! `articles/<lemma>.article` file per word.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use super::{check_comment, Statement, Status, WikiError, WikiState};
use crate::grammar;
use crate::lexicon::{detokenize, Lexicon};
use crate::reasoner::Ontology;
use crate::translator::{self, TranslationResult};

const VOCABULARY: &str = "vocabulary.tsv";
const NEXT_ID: &str = "next-id";
const ARTICLES: &str = "articles";
const EXTENSION: &str = ".article";

/// File contents keyed by relative path with `/` separators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataFiles {
    pub files: BTreeMap<String, String>,
}

impl DataFiles {
    pub fn insert(&mut self, path: &str, content: &str) {
        self.files.insert(path.to_string(), content.to_string());
    }

    /// Reads the wiki files under `dir`. Missing files are treated as empty.
    pub fn read(dir: &Path) -> io::Result<DataFiles> {
        let mut out = DataFiles::default();
        for name in [VOCABULARY, NEXT_ID] {
            match fs::read_to_string(dir.join(name)) {
                Ok(text) => out.insert(name, &text),
                Err(e) if e.kind() == io::ErrorKind::NotFound => {}
                Err(e) => return Err(e),
            }
        }
        let articles = dir.join(ARTICLES);
        if articles.is_dir() {
            for entry in fs::read_dir(&articles)? {
                let entry = entry?;
                let name = entry.file_name().to_string_lossy().into_owned();
                if name.ends_with(EXTENSION) {
                    let text = fs::read_to_string(entry.path())?;
                    out.insert(&format!("{ARTICLES}/{name}"), &text);
                }
            }
        }
        Ok(out)
    }

    /// Writes every file and deletes article files that are no longer
    /// present. Each file is replaced atomically.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        let articles = dir.join(ARTICLES);
        fs::create_dir_all(&articles)?;
        for (path, content) in &self.files {
            let target = dir.join(path);
            let tmp = target.with_extension("tmp");
            fs::write(&tmp, content)?;
            fs::rename(&tmp, &target)?;
        }
        for entry in fs::read_dir(&articles)? {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().into_owned();
            let key = format!("{ARTICLES}/{name}");
            if name.ends_with(EXTENSION) && !self.files.contains_key(&key) {
                fs::remove_file(entry.path())?;
            }
        }
        Ok(())
    }
}

fn load_error(file: &str, line: usize, reason: impl Into<String>) -> WikiError {
    WikiError::Load {
        file: file.to_string(),
        line,
        reason: reason.into(),
    }
}

impl WikiState {
    pub fn to_files(&self) -> DataFiles {
        let mut out = DataFiles::default();
        out.insert(VOCABULARY, &self.lexicon.to_tsv());
        out.insert(NEXT_ID, &format!("{}\n", self.next_id));
        for (lemma, ids) in &self.articles {
            let mut text = String::new();
            for id in ids {
                let s = &self.statements[id];
                text.push_str(&format!("{}\t{}\t{}\n", s.id, s.status, s.text));
            }
            out.insert(&format!("{ARTICLES}/{lemma}{EXTENSION}"), &text);
        }
        out
    }

    /// Rebuilds a wiki from its files and runs [`WikiState::verify`].
    pub fn from_files(files: &DataFiles) -> Result<WikiState, WikiError> {
        let get = |name: &str| files.files.get(name).map(String::as_str);
        let lexicon = match get(VOCABULARY) {
            Some(text) => Lexicon::from_tsv(text)?,
            None => Lexicon::new(),
        };
        let mut articles: BTreeMap<String, Vec<u64>> = lexicon
            .entries()
            .map(|e| (e.lemma.clone(), Vec::new()))
            .collect();
        let mut statements = BTreeMap::new();
        for (path, text) in &files.files {
            let Some(lemma) = path
                .strip_prefix(&format!("{ARTICLES}/"))
                .and_then(|p| p.strip_suffix(EXTENSION))
            else {
                continue;
            };
            let Some(ids) = articles.get_mut(lemma) else {
                return Err(load_error(path, 0, format!("`{lemma}` is not in the vocabulary")));
            };
            for (n, line) in text.lines().enumerate() {
                let s = parse_line(&lexicon, lemma, line).map_err(|r| load_error(path, n + 1, r))?;
                if statements.contains_key(&s.id) {
                    return Err(load_error(path, n + 1, format!("duplicate id {}", s.id)));
                }
                ids.push(s.id);
                statements.insert(s.id, s);
            }
        }
        let highest = statements.keys().next_back().copied().unwrap_or(0);
        let next_id = match get(NEXT_ID) {
            Some(text) => text
                .trim()
                .parse::<u64>()
                .map_err(|_| load_error(NEXT_ID, 1, "not a number"))?,
            None => highest + 1,
        };
        if next_id <= highest {
            return Err(load_error(NEXT_ID, 1, format!("must exceed the highest id {highest}")));
        }
        let mut state = WikiState {
            lexicon,
            articles,
            statements,
            ontology: Ontology::new(),
            next_id,
        };
        state.rebuild_ontology();
        state.verify()?;
        Ok(state)
    }

    pub fn save(&self, dir: &Path) -> Result<(), WikiError> {
        Ok(self.to_files().write(dir)?)
    }

    pub fn load(dir: &Path) -> Result<WikiState, WikiError> {
        WikiState::from_files(&DataFiles::read(dir)?)
    }
}

fn parse_line(lexicon: &Lexicon, article: &str, line: &str) -> Result<Statement, String> {
    let mut fields = line.splitn(3, '\t');
    let (Some(id), Some(status), Some(payload)) = (fields.next(), fields.next(), fields.next())
    else {
        return Err("expected `<id>\\t<status>\\t<text>`".into());
    };
    let id: u64 = id.parse().map_err(|_| format!("bad id `{id}`"))?;
    let status = Status::parse(status).ok_or_else(|| format!("bad status `{status}`"))?;
    if status == Status::Comment {
        check_comment(payload).map_err(|e| e.to_string())?;
        return Ok(Statement {
            id,
            article: article.to_string(),
            text: payload.to_string(),
            tokens: Vec::new(),
            ast: None,
            status,
            axioms: Vec::new(),
        });
    }
    let tokens = lexicon.tokenize(payload).map_err(|e| e.to_string())?;
    let ast = grammar::parse(&tokens).map_err(|e| e.to_string())?;
    if ast.is_question() {
        return Err("questions cannot be statements".into());
    }
    let axioms = match (status, translator::translate(&ast, id).map_err(|e| e.to_string())?) {
        (Status::Committed, TranslationResult::Blue(axioms)) => axioms,
        _ => Vec::new(),
    };
    Ok(Statement {
        id,
        article: article.to_string(),
        text: detokenize(&tokens),
        tokens,
        ast: Some(ast),
        status,
        axioms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiki::tests::geography;

    fn sample() -> WikiState {
        let mut w = geography();
        w.add_statement("switzerland", "switzerland is a landlocked-country .").unwrap();
        w.add_comment("switzerland", "Alpine\tstate.").unwrap();
        w.add_statement("country", "a country can border a sea .").unwrap();
        w.add_statement("baltic-sea", "baltic-sea is a sea .").unwrap();
        w.add_statement("switzerland", "switzerland borders baltic-sea .").unwrap();
        w.add_statement("landlocked-country", "every landlocked-country borders no sea .")
            .unwrap();
        w.add_statement("country", "a country borders switzerland .").unwrap();
        w
    }

    #[test]
    fn article_lines() {
        let files = sample().to_files();
        assert_eq!(
            files.files["articles/switzerland.article"],
            "1\tok\tswitzerland is a landlocked-country .\n2\tcomment\tAlpine\tstate.\n5\tok\tswitzerland borders baltic-sea .\n"
        );
        assert_eq!(
            files.files["articles/landlocked-country.article"],
            "6\tconflict\tevery landlocked-country borders no sea .\n"
        );
        assert_eq!(files.files["articles/austria.article"], "");
        assert_eq!(files.files["next-id"], "8\n");
        assert!(files.files["articles/country.article"].starts_with("3\tnonowl:modality\t"));
    }

    #[test]
    fn files_round_trip() {
        let w = sample();
        let files = w.to_files();
        let back = WikiState::from_files(&files).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_files(), files);
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = sample();
        w.save(dir.path()).unwrap();
        let back = WikiState::load(dir.path()).unwrap();
        assert_eq!(back, w);
        w.remove_word("austria").unwrap();
        w.save(dir.path()).unwrap();
        assert!(!dir.path().join("articles/austria.article").exists());
        assert_eq!(DataFiles::read(dir.path()).unwrap(), w.to_files());
    }

    #[test]
    fn empty_directory_is_an_empty_wiki() {
        let dir = tempfile::tempdir().unwrap();
        let w = WikiState::load(dir.path()).unwrap();
        assert_eq!(w, WikiState::new());
    }

    #[test]
    fn status_must_match_the_sentence() {
        let mut files = sample().to_files();
        files.insert("articles/austria.article", "9\tok\ta country can border a sea .\n");
        files.insert("next-id", "10\n");
        assert_eq!(WikiState::from_files(&files).unwrap_err().code(), "load-failure");
    }

    #[test]
    fn committed_contradictions_are_rejected() {
        let mut files = sample().to_files();
        let text = files.files["articles/landlocked-country.article"].replace("conflict", "ok");
        files.insert("articles/landlocked-country.article", &text);
        assert_eq!(
            WikiState::from_files(&files).unwrap_err().code(),
            "inconsistent-ontology"
        );
    }

    #[test]
    fn malformed_files_are_rejected() {
        let base = sample().to_files();
        for (path, content) in [
            ("articles/atlantis.article", ""),
            ("articles/austria.article", "x\tok\tswitzerland is a country .\n"),
            ("articles/austria.article", "1\tok\tswitzerland is a country .\n"),
            ("articles/austria.article", "9\tmaybe\tswitzerland is a country .\n"),
            ("articles/austria.article", "9\tok\tswitzerland is .\n"),
            ("articles/austria.article", "9\tok\tis switzerland a country ?\n"),
            ("articles/austria.article", "9 ok switzerland is a country .\n"),
            ("articles/austria.article", "20\tok\tswitzerland is a country .\n"),
            ("next-id", "three\n"),
            ("vocabulary.tsv", "verb\tx\n"),
        ] {
            let mut files = base.clone();
            files.insert(path, content);
            let err = WikiState::from_files(&files).unwrap_err();
            assert_eq!(err.code(), "load-failure", "{path}: {content:?}: {err}");
        }
    }
}
