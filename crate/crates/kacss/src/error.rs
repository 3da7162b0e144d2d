use crate::flow::CutCertificate;
use crate::rational::{format_rat, Rat};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance is not {k}-arc-connected: cut {{{}}} has only {} leaving arcs", fmt_cut(&.cut.cut_set), format_rat(&.cut.value))]
    NotKArcConnected { k: usize, cut: CutCertificate },

    #[error("arc set contains no {k}-arborescence rooted at {root} ({direction})")]
    ArborescenceInfeasible {
        root: usize,
        k: usize,
        direction: &'static str,
    },

    #[error("vector is outside the {direction} k-arborescence polytope for root {root}: cut {{{}}} carries {}", fmt_cut(&.cut.cut_set), format_rat(&.cut.value))]
    NotInPolytope {
        root: usize,
        direction: &'static str,
        cut: CutCertificate,
    },

    #[error("search budget exhausted; best incumbent {}", format_rat(.incumbent))]
    BudgetExceeded { incumbent: Rat },

    #[error("generator failed: {0}")]
    Generator(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

fn fmt_cut(cut: &std::collections::BTreeSet<usize>) -> String {
    cut.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub type Result<T> = std::result::Result<T, Error>;
