//! The four detectability checks on an observer with marked states.
//!
//! Each check reduces a quantified statement over simple cycles to a
//! polynomial graph test:
//!
//! - strong: every state reachable from a nontrivial SCC is marked;
//! - weak: the subgraph induced by marked states has a cycle;
//! - periodically strong: the subgraph induced by unmarked states is acyclic;
//! - periodically weak: some nontrivial SCC contains a marked state.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::cycles::{
    classify_cycles, cycle_states, cycle_through, forward_closure, induced_cycle, nontrivial_sccs, shortest_path,
    CycleClass, ObserverPath,
};
use crate::error::Result;
use crate::observer::Observer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Strong,
    Weak,
    PeriodicallyStrong,
    PeriodicallyWeak,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Strong,
        Property::Weak,
        Property::PeriodicallyStrong,
        Property::PeriodicallyWeak,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Property::Strong => "strong",
            Property::Weak => "weak",
            Property::PeriodicallyStrong => "ps",
            Property::PeriodicallyWeak => "pw",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Strong => "strong",
            Property::Weak => "weak",
            Property::PeriodicallyStrong => "periodically strong",
            Property::PeriodicallyWeak => "periodically weak",
        })
    }
}

/// Evidence attached to a property result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A cycle reached from the initial state by `stem`.
    Lasso { stem: ObserverPath, cycle: ObserverPath },
    /// An unmarked state reached by `path` from a state of `cycle`.
    Escape { cycle: ObserverPath, path: ObserverPath },
    /// The universal claim holds, or no existential witness exists.
    Absence { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Witness,
    /// Conservative detection horizon when the property holds: the number
    /// of observer states.
    pub horizon_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub strong: PropertyVerdict,
    pub weak: PropertyVerdict,
    pub periodically_strong: PropertyVerdict,
    pub periodically_weak: PropertyVerdict,
}

impl Verdict {
    pub fn get(&self, p: Property) -> &PropertyVerdict {
        match p {
            Property::Strong => &self.strong,
            Property::Weak => &self.weak,
            Property::PeriodicallyStrong => &self.periodically_strong,
            Property::PeriodicallyWeak => &self.periodically_weak,
        }
    }

    /// `[strong, weak, periodically strong, periodically weak]`.
    pub fn holds(&self) -> [bool; 4] {
        Property::ALL.map(|p| self.get(p).holds)
    }

    /// strong ⇒ weak, strong ⇒ PS, weak ⇒ PW, PS ⇒ PW.
    pub fn respects_lattice(&self) -> bool {
        lattice_ok(self.holds())
    }
}

pub fn lattice_ok([s, w, ps, pw]: [bool; 4]) -> bool {
    (!s || w) && (!s || ps) && (!w || pw) && (!ps || pw)
}

fn verdict(holds: bool, witness: Witness, obs: &Observer) -> PropertyVerdict {
    PropertyVerdict {
        holds,
        witness,
        horizon_bound: holds.then_some(obs.len()),
    }
}

fn lasso(obs: &Observer, cycle: ObserverPath) -> Witness {
    let stem = shortest_path(obs, &[obs.initial()], cycle.start(), |_| true).expect("observer states are reachable");
    Witness::Lasso { stem, cycle }
}

fn absence(reason: &str) -> Witness {
    Witness::Absence {
        reason: reason.to_string(),
    }
}

pub fn check_strong(obs: &Observer) -> PropertyVerdict {
    let on_cycle = cycle_states(obs);
    let reach = forward_closure(obs, on_cycle.iter().copied());
    match reach.iter().copied().find(|&s| !obs.is_marked(s)) {
        None => verdict(true, absence("every state reachable from a cycle is marked"), obs),
        Some(bad) => {
            let sources: Vec<usize> = on_cycle.iter().copied().collect();
            let path = shortest_path(obs, &sources, bad, |_| true).expect("reachable from a cycle");
            let cycle = cycle_through(obs, path.start(), |_| true).expect("state on a cycle");
            verdict(false, Witness::Escape { cycle, path }, obs)
        }
    }
}

pub fn check_weak(obs: &Observer) -> PropertyVerdict {
    match induced_cycle(obs, |s| obs.is_marked(s)) {
        Some(cycle) => verdict(true, lasso(obs, cycle), obs),
        None => verdict(false, absence("no cycle consists of marked states only"), obs),
    }
}

pub fn check_periodically_strong(obs: &Observer) -> PropertyVerdict {
    match induced_cycle(obs, |s| !obs.is_marked(s)) {
        Some(cycle) => verdict(false, lasso(obs, cycle), obs),
        None => verdict(true, absence("every cycle visits a marked state"), obs),
    }
}

pub fn check_periodically_weak(obs: &Observer) -> PropertyVerdict {
    let on_marked_cycle = nontrivial_sccs(obs, |_| true)
        .into_iter()
        .flatten()
        .filter(|&s| obs.is_marked(s))
        .min();
    match on_marked_cycle {
        Some(s) => {
            let scc: BTreeSet<usize> = nontrivial_sccs(obs, |_| true)
                .into_iter()
                .find(|c| c.contains(&s))
                .expect("state is in a component")
                .into_iter()
                .collect();
            let cycle = cycle_through(obs, s, |t| scc.contains(&t)).expect("nontrivial component");
            verdict(true, lasso(obs, cycle), obs)
        }
        None => verdict(false, absence("no cycle visits a marked state"), obs),
    }
}

pub fn check_all(obs: &Observer) -> Verdict {
    Verdict {
        strong: check_strong(obs),
        weak: check_weak(obs),
        periodically_strong: check_periodically_strong(obs),
        periodically_weak: check_periodically_weak(obs),
    }
}

/// The four verdicts computed from an explicit enumeration of simple
/// cycles, following the cycle-quantified characterizations literally.
/// Fails if the observer has more than `budget` simple cycles.
pub fn verdicts_by_enumeration(obs: &Observer, budget: usize) -> Result<[bool; 4]> {
    let cycles = classify_cycles(obs, budget)?;
    let on_cycles: BTreeSet<usize> = cycles.iter().flat_map(|c| c.cycle.cycle_states().to_vec()).collect();
    let strong = forward_closure(obs, on_cycles).into_iter().all(|s| obs.is_marked(s));
    let weak = cycles.iter().any(|c| c.class == CycleClass::Unambiguous);
    let ps = cycles.iter().all(|c| c.class.is_semi_unambiguous());
    let pw = cycles.iter().any(|c| c.class.is_semi_unambiguous());
    Ok([strong, weak, ps, pw])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(edges: &[(usize, usize, usize)], n: usize, marked: &[usize]) -> Observer {
        let events = edges.iter().map(|e| e.1 + 1).max().unwrap_or(1);
        let mut delta = vec![vec![None; events]; n];
        for &(s, e, t) in edges {
            delta[s][e] = Some(t);
        }
        Observer::from_parts(
            (0..n).map(|s| vec![s]).collect(),
            delta,
            (0..n).map(|s| marked.contains(&s)).collect(),
            events,
        )
    }

    #[test]
    fn all_marked_with_cycle() {
        let o = obs(&[(0, 0, 1), (1, 0, 1)], 2, &[0, 1]);
        assert_eq!(check_all(&o).holds(), [true; 4]);
        assert_eq!(verdicts_by_enumeration(&o, 10).unwrap(), [true; 4]);
    }

    #[test]
    fn all_unmarked() {
        let o = obs(&[(0, 0, 1), (1, 0, 0)], 2, &[]);
        let v = check_all(&o);
        assert_eq!(v.holds(), [false; 4]);
        assert!(matches!(v.periodically_strong.witness, Witness::Lasso { .. }));
        assert!(matches!(v.strong.witness, Witness::Escape { .. }));
    }

    #[test]
    fn unmarked_start_outside_cycles_is_ignored() {
        // 0 (unmarked) -> 1 (marked, self-loop).
        let o = obs(&[(0, 0, 1), (1, 0, 1)], 2, &[1]);
        let v = check_all(&o);
        assert_eq!(v.holds(), [true; 4]);
        assert_eq!(v.strong.horizon_bound, Some(2));
    }

    #[test]
    fn escape_witness_points_at_unmarked_state() {
        // 0 loops (marked), 0 -b-> 1 loops (unmarked).
        let o = obs(&[(0, 0, 0), (0, 1, 1), (1, 0, 1)], 2, &[0]);
        let v = check_all(&o);
        assert_eq!(v.holds(), [false, true, false, true]);
        match &v.strong.witness {
            Witness::Escape { cycle, path } => {
                assert_eq!(cycle.states, vec![1, 1]);
                assert_eq!(path.states, vec![1]);
                assert!(!o.is_marked(path.end()));
            }
            w => panic!("unexpected witness {w:?}"),
        }
        match &v.weak.witness {
            Witness::Lasso { stem, cycle } => {
                assert_eq!(stem.states, vec![0]);
                assert_eq!(cycle.states, vec![0, 0]);
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn lattice() {
        assert!(lattice_ok([true, true, true, true]));
        assert!(lattice_ok([false, false, false, false]));
        assert!(lattice_ok([false, true, false, true]));
        assert!(!lattice_ok([true, false, true, true]));
        assert!(!lattice_ok([false, false, true, false]));
    }
}
