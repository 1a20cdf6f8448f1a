use std::env;
use std::fs;
use std::path::{Path, PathBuf};

fn main() {
    let root = Path::new(&env::var("CARGO_MANIFEST_DIR").unwrap())
        .join("../core/fixtures/geography")
        .canonicalize()
        .unwrap();
    println!("cargo:rerun-if-changed={}", root.display());
    let mut files: Vec<(String, PathBuf)> = Vec::new();
    for name in ["vocabulary.tsv", "next-id"] {
        files.push((name.to_string(), root.join(name)));
    }
    let articles = root.join("articles");
    println!("cargo:rerun-if-changed={}", articles.display());
    for entry in fs::read_dir(&articles).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        files.push((format!("articles/{name}"), path));
    }
    files.sort();
    let mut out = String::from("&[\n");
    for (name, path) in files {
        out.push_str(&format!("    ({name:?}, include_str!({:?})),\n", path.display().to_string()));
    }
    out.push_str("]\n");
    let dest = Path::new(&env::var("OUT_DIR").unwrap()).join("fixture.rs");
    fs::write(dest, out).unwrap();
}
