//! Observer of the basis reachability graph and the four C-detectability
//! verdicts.

pub mod checks;
pub mod cycles;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use checks::{check_all, lattice_ok, verdicts_by_enumeration, Property, PropertyVerdict, Verdict, Witness};
pub use cycles::{classify_cycles, simple_cycles, CycleClass, CycleClassification, ObserverPath};

use crate::basis::{build_brg, BasisGraph, BrgOptions};
use crate::crucial::{CrucialSet, FlagMethod};
use crate::error::{Error, Result};
use crate::net::{LabeledPetriNet, Marking};
use crate::observer::Observer;
use crate::reachability::{build_rg, check_event, rg_observer, ReachabilityGraph};

/// Marked-state rule for basis observers: a singleton whose only member has
/// β = 0, or a set all of whose members have α = 0.
pub fn basis_state_marked(brg: &BasisGraph, members: &[usize]) -> bool {
    let singleton_exact = members.len() == 1 && !brg.node(members[0]).beta;
    singleton_exact || members.iter().all(|&u| !brg.node(u).alpha)
}

/// Subset construction over the basis graph, starting from the set of all
/// basis markings.
pub fn build_observer(brg: &BasisGraph, events: usize, max_states: usize) -> Result<Observer> {
    Observer::determinize(
        (0..brg.len()).collect(),
        events,
        max_states,
        |set, e| brg.step(set, e),
        |set| Ok(basis_state_marked(brg, set)),
    )
}

/// Re-evaluates the marked states after the basis graph was reflagged.
pub fn refresh_marks(obs: &mut Observer, brg: &BasisGraph) {
    obs.remark(|set| Ok(basis_state_marked(brg, set)))
        .expect("marking rule is infallible");
}

/// Basis markings in the observer state reached on `word`; empty if the
/// word cannot be generated.
pub fn basis_consistent(
    net: &LabeledPetriNet,
    obs: &Observer,
    brg: &BasisGraph,
    word: &[usize],
) -> Result<BTreeSet<Marking>> {
    for &e in word {
        check_event(net, e)?;
    }
    Ok(match obs.run(word) {
        Some(s) => obs.members(s).iter().map(|&u| brg.node(u).marking.clone()).collect(),
        None => BTreeSet::new(),
    })
}

/// The four verdicts on a reachability-graph observer. The observer's
/// marked states come from the definition of C-detectability directly, so
/// this is independent of the basis-graph route.
pub fn oracle_verify_all(rg_obs: &Observer) -> Verdict {
    check_all(rg_obs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Budget for reachability-graph markings and basis-graph nodes.
    pub max_states: usize,
    /// Budget for observer states (both routes).
    pub max_observer_states: usize,
    /// Build the reachability graph to confirm boundedness and deadlock
    /// freedom before the basis route runs.
    pub check_assumptions: bool,
    /// Report a deadlock as a warning instead of failing.
    pub allow_deadlock: bool,
    /// Also decide the four properties on the reachability-graph observer
    /// and fail on any disagreement.
    pub oracle: bool,
    pub flag_method: FlagMethod,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_states: 100_000,
            max_observer_states: 100_000,
            check_assumptions: true,
            allow_deadlock: false,
            oracle: false,
            flag_method: FlagMethod::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumptions {
    pub tu_acyclic: bool,
    /// `None` when the reachability graph was not built.
    pub bounded: Option<bool>,
    pub deadlock_free: Option<bool>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub observer: Observer,
    pub verdict: Verdict,
}

/// Everything `verify_all` computed.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub assumptions: Assumptions,
    pub rg: Option<ReachabilityGraph>,
    pub brg: BasisGraph,
    pub observer: Observer,
    pub verdict: Verdict,
    pub oracle: Option<OracleRun>,
    /// Wall time per stage, in execution order.
    pub timings: Vec<(&'static str, Duration)>,
}

/// Runs the whole basis-graph pipeline on `net` once the structural
/// assumptions have been checked.
pub fn verify_all(net: &LabeledPetriNet, crucial: &CrucialSet, options: &Options) -> Result<Analysis> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, Duration)>| {
        timings.push((name, clock.elapsed()));
        clock = Instant::now();
    };

    crucial.check_dimension(net.place_count())?;
    net.check_unobservable_structure()?;
    let mut assumptions = Assumptions {
        tu_acyclic: true,
        bounded: None,
        deadlock_free: None,
        warnings: Vec::new(),
    };

    let rg = if options.check_assumptions || options.oracle {
        let rg = build_rg(net, options.max_states)?;
        assumptions.bounded = Some(true);
        match rg.check_deadlock_free() {
            Ok(()) => assumptions.deadlock_free = Some(true),
            Err(e) if options.allow_deadlock => {
                assumptions.deadlock_free = Some(false);
                assumptions.warnings.push(e.to_string());
            }
            Err(e) => return Err(e),
        }
        lap("reachability graph", &mut timings);
        Some(rg)
    } else {
        assumptions
            .warnings
            .push("boundedness and deadlock freedom were not checked".to_string());
        None
    };

    let brg = build_brg(
        net,
        crucial,
        BrgOptions {
            max_nodes: options.max_states,
            flag_method: options.flag_method,
        },
    )?;
    lap("basis reachability graph", &mut timings);

    let observer = build_observer(&brg, net.alphabet().len(), options.max_observer_states)?;
    lap("basis observer", &mut timings);

    let verdict = check_all(&observer);
    // Without any cycle in the observer the language has no infinite word
    // and the four properties hold or fail vacuously, so the implications
    // between them need not hold.
    let live = !cycles::cycle_states(&observer).is_empty();
    if !live {
        assumptions
            .warnings
            .push("the net generates no infinite observation".to_string());
    }
    if live && !verdict.respects_lattice() {
        return Err(Error::LatticeViolation {
            verdict: verdict.holds(),
        });
    }
    lap("verdicts", &mut timings);

    let oracle = match (&rg, options.oracle) {
        (Some(rg), true) => {
            let obs = rg_observer(net, rg, crucial, options.max_observer_states)?;
            let v = oracle_verify_all(&obs);
            if v.holds() != verdict.holds() {
                return Err(Error::OracleMismatch {
                    basis: verdict.holds(),
                    oracle: v.holds(),
                });
            }
            lap("oracle", &mut timings);
            Some(OracleRun {
                observer: obs,
                verdict: v,
            })
        }
        _ => None,
    };

    Ok(Analysis {
        assumptions,
        rg,
        brg,
        observer,
        verdict,
        oracle,
        timings,
    })
}
