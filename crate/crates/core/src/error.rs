use thiserror::Error;

use crate::net::{Marking, PtNode};

/// Errors raised by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("transition index {index} out of range (net has {count} transitions)")]
    TransitionOutOfRange { index: usize, count: usize },

    #[error("event index {index} out of range (alphabet has {count} symbols)")]
    EventOutOfRange { index: usize, count: usize },

    #[error("vector has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown place `{0}`")]
    UnknownPlace(String),

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("transition {transition} is not enabled at {marking}")]
    NotEnabled { transition: usize, marking: Marking },

    #[error("firing sequence blocked at position {position}: transition {transition} is not enabled at {marking}")]
    SequenceBlocked {
        position: usize,
        transition: usize,
        marking: Marking,
    },

    #[error("transition {0} is unobservable; an observable transition is required")]
    UnobservableTransition(usize),

    #[error("the unobservable subnet has a directed cycle{}", cycle_text(witness))]
    TuSubnetCyclic { witness: Vec<PtNode> },

    #[error("unobservable transition {0} has no input place and can fire forever")]
    UnobservableSource(usize),

    #[error("net is unbounded: {dominating} strictly covers its ancestor {ancestor}")]
    Unbounded { ancestor: Marking, dominating: Marking },

    #[error("budget of {limit} states exceeded while building the {what}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("reachable marking {marking} enables no transition")]
    NotDeadlockFree { marking: Marking },

    #[error("verdict {verdict:?} violates the implication order between the four properties")]
    LatticeViolation { verdict: [bool; 4] },

    #[error("basis-graph verdict {basis:?} differs from reachability-graph verdict {oracle:?}")]
    OracleMismatch { basis: [bool; 4], oracle: [bool; 4] },
}

fn cycle_text(witness: &[PtNode]) -> String {
    if witness.is_empty() {
        return String::new();
    }
    let nodes: Vec<String> = witness
        .iter()
        .map(|n| match n {
            PtNode::Place(p) => format!("place {p}"),
            PtNode::Transition(t) => format!("transition {t}"),
        })
        .collect();
    format!(": {} -> back", nodes.join(" -> "))
}

pub type Result<T> = std::result::Result<T, Error>;
