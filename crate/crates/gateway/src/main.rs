use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use cnlwiki_core::wiki::{SharedWiki, WikiError, WikiState};
use cnlwiki_gateway::{commands, router, ApiError};

#[derive(Parser)]
#[command(name = "cnlwiki", version, about = "A wiki written in controlled English")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "CNLWIKI_DATA")]
        data: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
    /// Load a wiki and verify that its ontology is consistent.
    Check {
        #[arg(env = "CNLWIKI_DATA")]
        dir: PathBuf,
    },
    /// Write the ontology as axioms, one per line.
    Export {
        #[arg(env = "CNLWIKI_DATA")]
        dir: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Answer a question.
    Ask {
        #[arg(value_names = ["DIR", "QUESTION"], num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    /// Print the words that may follow a partial sentence, as JSON.
    Predict {
        #[arg(value_names = ["DIR", "PREFIX"], num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    /// Add sentences from a file of `<article>\t<sentence>` lines.
    Import {
        #[arg(value_names = ["DIR", "FILE"], num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
}

/// Splits `[DIR] ARG`, taking the directory from `CNLWIKI_DATA` when it is
/// left out.
fn dir_and(mut args: Vec<String>) -> anyhow::Result<(PathBuf, String)> {
    let last = args.pop().unwrap_or_default();
    let dir = match args.pop() {
        Some(dir) => PathBuf::from(dir),
        None => std::env::var_os("CNLWIKI_DATA")
            .map(PathBuf::from)
            .context("no data directory given and CNLWIKI_DATA is not set")?,
    };
    Ok((dir, last))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            let api = match e.downcast_ref::<WikiError>() {
                Some(w) => ApiError::new(w.code(), w.to_string()),
                None => match e.downcast_ref::<ApiError>() {
                    Some(a) => a.clone(),
                    None => ApiError::new("io-error", format!("{e:#}")),
                },
            };
            eprintln!("{}: {}", api.code, api.message);
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Serve { data, port } => serve(data, port)?,
        Command::Check { dir } => println!("{}", commands::check(&dir)?),
        Command::Export { dir, output } => {
            let text = commands::export(&dir)?;
            match output {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Ask { args } => {
            let (dir, question) = dir_and(args)?;
            print!("{}", commands::ask(&dir, &question)?)
        }
        Command::Predict { args } => {
            let (dir, prefix) = dir_and(args)?;
            println!("{}", serde_json::to_string(&commands::predict(&dir, &prefix)?)?)
        }
        Command::Import { args } => {
            let (dir, file) = dir_and(args)?;
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {file}"))?;
            let report = commands::import(&dir, &text)?;
            let mut failed = false;
            for line in &report {
                println!("{}", line.render());
                failed |= matches!(line, commands::ImportLine::Failed { .. });
            }
            if failed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[tokio::main]
async fn serve(data: PathBuf, port: u16) -> anyhow::Result<()> {
    let state = WikiState::load(&data)?;
    let wiki = Arc::new(SharedWiki::new(state, Some(data)));
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port))
        .await
        .map_err(|e| ApiError::new("port-in-use", format!("port {port}: {e}")))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(wiki)).await?;
    Ok(())
}
