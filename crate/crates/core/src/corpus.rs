//! Built-in example problems, embedded at compile time.

use crate::problem::{Problem, ProblemError};

pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! entry {
    ($name:literal) => {
        CorpusEntry {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".json")),
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("koszul"),
    entry!("koszul_connection"),
    entry!("contractible_xy"),
    entry!("contractible_cusp"),
    entry!("x_squared"),
    entry!("tensor_koszul"),
    entry!("p1_o1"),
    entry!("punctured_plane"),
    entry!("punctured_space"),
];

/// Loads a corpus problem by name.
pub fn load(name: &str) -> Option<Result<Problem, ProblemError>> {
    CORPUS
        .iter()
        .find(|e| e.name == name)
        .map(|e| Problem::from_json_str(e.source))
}
