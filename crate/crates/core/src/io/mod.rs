//! Input documents are TOML. Graphs go out as DOT, reports as JSON.

mod document;
pub mod dot;
pub mod report;

pub use document::{
    crucial_to_toml, net_to_toml, parse_crucial, parse_marking, parse_net, parse_word, read_crucial, read_net,
};
pub use report::{Report, ReportOptions};

use std::path::PathBuf;

use thiserror::Error;

/// Problems with a document, each tied to a line of the input when one is
/// known.
#[derive(Debug, Error)]
pub enum DocError {
    #[error("{}: {message}", at(*line))]
    Syntax { line: Option<usize>, message: String },

    #[error("{}: undeclared place `{place}`", at(Some(*line)))]
    UndeclaredPlace { place: String, line: usize },

    #[error("{}: multiplicity of `{place}` must be {min} or more, found {value}", at(Some(*line)))]
    Multiplicity {
        place: String,
        value: i64,
        min: i64,
        line: usize,
    },

    #[error("{}: {message}", at(*line))]
    Invalid { line: Option<usize>, message: String },

    #[error(transparent)]
    Net(#[from] crate::error::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn at(line: Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}"),
        None => "document".to_string(),
    }
}
