//! Cycle structure of observers: strongly connected components, shortest
//! cycles and paths for witnesses, and exhaustive simple-cycle enumeration
//! (Johnson's algorithm) used to cross-check the polynomial checks.

use std::collections::{BTreeSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::observer::Observer;

/// An alternating sequence of observer states and events. For a cycle the
/// last state equals the first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObserverPath {
    pub states: Vec<usize>,
    pub events: Vec<usize>,
}

impl ObserverPath {
    pub fn single(state: usize) -> Self {
        ObserverPath {
            states: vec![state],
            events: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.states[0]
    }

    pub fn end(&self) -> usize {
        *self.states.last().expect("nonempty path")
    }

    /// States of a cycle without the repeated closing state.
    pub fn cycle_states(&self) -> &[usize] {
        &self.states[..self.states.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleClass {
    /// Every state is marked.
    Unambiguous,
    /// Some but not all states are marked.
    SemiUnambiguous,
    /// No state is marked.
    Ambiguous,
}

impl CycleClass {
    /// At least one marked state (unambiguous cycles qualify too).
    pub fn is_semi_unambiguous(self) -> bool {
        self != CycleClass::Ambiguous
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleClassification {
    pub cycle: ObserverPath,
    pub class: CycleClass,
}

fn successor_states(obs: &Observer, s: usize) -> BTreeSet<usize> {
    obs.successors(s).map(|(_, t)| t).collect()
}

/// Strongly connected components of the subgraph induced by `allowed`
/// states, keeping only nontrivial ones (two or more states, or a
/// self-loop). Each component is sorted; components are ordered by their
/// smallest state.
pub fn nontrivial_sccs(obs: &Observer, allowed: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(obs.len(), obs.edge_count());
    for _ in 0..obs.len() {
        g.add_node(());
    }
    let mut self_loop = vec![false; obs.len()];
    for s in (0..obs.len()).filter(|&s| allowed(s)) {
        for t in successor_states(obs, s) {
            if allowed(t) {
                g.add_edge(NodeIndex::new(s), NodeIndex::new(t), ());
                if s == t {
                    self_loop[s] = true;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| allowed(c[0]) && (c.len() > 1 || self_loop[c[0]]))
        .collect();
    out.sort();
    out
}

/// States lying on at least one cycle.
pub fn cycle_states(obs: &Observer) -> BTreeSet<usize> {
    nontrivial_sccs(obs, |_| true).into_iter().flatten().collect()
}

/// States reachable (in zero or more steps) from `sources`.
pub fn forward_closure(obs: &Observer, sources: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for s in sources {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for (_, t) in obs.successors(s) {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Shortest path from any of `sources` to `target` through `allowed`
/// states (sources and target must be allowed).
pub fn shortest_path(
    obs: &Observer,
    sources: &[usize],
    target: usize,
    allowed: impl Fn(usize) -> bool,
) -> Option<ObserverPath> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; obs.len()];
    let mut seen = vec![false; obs.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if allowed(s) && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        if s == target {
            let mut states = vec![s];
            let mut events = Vec::new();
            let mut cur = s;
            while let Some((p, e)) = prev[cur] {
                states.push(p);
                events.push(e);
                cur = p;
            }
            states.reverse();
            events.reverse();
            return Some(ObserverPath { states, events });
        }
        for (e, t) in obs.successors(s) {
            if allowed(t) && !seen[t] {
                seen[t] = true;
                prev[t] = Some((s, e));
                queue.push_back(t);
            }
        }
    }
    None
}

/// Shortest cycle through `state` staying within `allowed` states.
pub fn cycle_through(obs: &Observer, state: usize, allowed: impl Fn(usize) -> bool) -> Option<ObserverPath> {
    let mut best: Option<ObserverPath> = None;
    for (e, t) in obs.successors(state) {
        if !allowed(t) {
            continue;
        }
        let tail = if t == state {
            ObserverPath::single(state)
        } else {
            match shortest_path(obs, &[t], state, &allowed) {
                Some(p) => p,
                None => continue,
            }
        };
        if best.as_ref().is_none_or(|b| tail.events.len() + 1 < b.events.len()) {
            let mut states = vec![state];
            states.extend(tail.states);
            let mut events = vec![e];
            events.extend(tail.events);
            best = Some(ObserverPath { states, events });
        }
    }
    best
}

/// Some cycle whose states all satisfy `allowed`, if one exists.
pub fn induced_cycle(obs: &Observer, allowed: impl Fn(usize) -> bool) -> Option<ObserverPath> {
    let scc = nontrivial_sccs(obs, &allowed).into_iter().next()?;
    let members: BTreeSet<usize> = scc.iter().copied().collect();
    cycle_through(obs, scc[0], |s| members.contains(&s))
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    blocked: Vec<bool>,
    blocked_by: Vec<BTreeSet<usize>>,
    stack: Vec<usize>,
    found: Vec<Vec<usize>>,
    budget: usize,
    exceeded: bool,
}

impl Johnson<'_> {
    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(v) = work.pop() {
            if !self.blocked[v] {
                continue;
            }
            self.blocked[v] = false;
            work.extend(std::mem::take(&mut self.blocked_by[v]));
        }
    }

    fn circuit(&mut self, v: usize, start: usize, component: &BTreeSet<usize>) -> bool {
        if self.exceeded {
            return false;
        }
        let adj = self.adj;
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &adj[v] {
            if !component.contains(&w) {
                continue;
            }
            if w == start {
                if self.found.len() >= self.budget {
                    self.exceeded = true;
                    break;
                }
                self.found.push(self.stack.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w, start, component) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &adj[v] {
                if component.contains(&w) {
                    self.blocked_by[w].insert(v);
                }
            }
        }
        self.stack.pop();
        closed
    }
}

/// All simple cycles of the observer as state lists (without the closing
/// repetition), each listed once starting from its smallest state. Fails if
/// more than `budget` cycles exist.
pub fn simple_cycles(obs: &Observer, budget: usize) -> Result<Vec<Vec<usize>>> {
    let n = obs.len();
    let adj: Vec<Vec<usize>> = (0..n).map(|s| successor_states(obs, s).into_iter().collect()).collect();
    let mut j = Johnson {
        adj: &adj,
        blocked: vec![false; n],
        blocked_by: vec![BTreeSet::new(); n],
        stack: Vec::new(),
        found: Vec::new(),
        budget,
        exceeded: false,
    };
    for start in 0..n {
        let Some(component) = nontrivial_sccs(obs, |s| s >= start)
            .into_iter()
            .find(|c| c.contains(&start))
        else {
            continue;
        };
        let component: BTreeSet<usize> = component.into_iter().collect();
        for &v in &component {
            j.blocked[v] = false;
            j.blocked_by[v].clear();
        }
        j.circuit(start, start, &component);
        if j.exceeded {
            return Err(Error::BudgetExceeded {
                what: "simple cycle enumeration",
                limit: budget,
            });
        }
    }
    Ok(j.found)
}

fn classify(obs: &Observer, states: &[usize]) -> CycleClass {
    let marked = states.iter().filter(|&&s| obs.is_marked(s)).count();
    if marked == states.len() {
        CycleClass::Unambiguous
    } else if marked > 0 {
        CycleClass::SemiUnambiguous
    } else {
        CycleClass::Ambiguous
    }
}

/// Enumerates and classifies every simple cycle. Each hop is labeled with
/// the smallest event between the two states.
pub fn classify_cycles(obs: &Observer, budget: usize) -> Result<Vec<CycleClassification>> {
    Ok(simple_cycles(obs, budget)?
        .into_iter()
        .map(|states| {
            let mut events = Vec::with_capacity(states.len());
            for (i, &s) in states.iter().enumerate() {
                let next = states[(i + 1) % states.len()];
                let e = obs
                    .successors(s)
                    .find(|&(_, t)| t == next)
                    .map(|(e, _)| e)
                    .expect("cycle edge exists");
                events.push(e);
            }
            let class = classify(obs, &states);
            let mut closed = states.clone();
            closed.push(states[0]);
            CycleClassification {
                cycle: ObserverPath { states: closed, events },
                class,
            }
        })
        .collect())
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
    fn sccs_and_self_loops() {
        let o = obs(&[(0, 0, 1), (1, 0, 2), (2, 0, 1), (0, 1, 3), (3, 0, 3)], 4, &[]);
        assert_eq!(nontrivial_sccs(&o, |_| true), vec![vec![1, 2], vec![3]]);
        assert_eq!(cycle_states(&o), BTreeSet::from([1, 2, 3]));
        assert_eq!(nontrivial_sccs(&o, |s| s != 2), vec![vec![3]]);
    }

    #[test]
    fn johnson_counts_cycles() {
        // Complete digraph on 3 vertices with self-loops: 3 loops, 3 two-cycles, 2 three-cycles.
        let mut edges = Vec::new();
        for s in 0..3 {
            for (e, t) in (0..3).enumerate() {
                edges.push((s, e, t));
            }
        }
        let o = obs(&edges, 3, &[]);
        let cycles = simple_cycles(&o, 100).unwrap();
        assert_eq!(cycles.len(), 8);
        let distinct: BTreeSet<Vec<usize>> = cycles.iter().cloned().collect();
        assert_eq!(distinct.len(), 8);
        assert!(matches!(simple_cycles(&o, 5), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn acyclic_observer_has_no_cycles() {
        let o = obs(&[(0, 0, 1), (1, 0, 2)], 3, &[0]);
        assert!(classify_cycles(&o, 10).unwrap().is_empty());
        assert!(induced_cycle(&o, |_| true).is_none());
    }

    #[test]
    fn classification_and_witness_paths() {
        let o = obs(&[(0, 0, 1), (1, 0, 1), (1, 1, 2), (2, 0, 1)], 3, &[2]);
        let classes = classify_cycles(&o, 10).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].class, CycleClass::Ambiguous);
        assert_eq!(classes[0].cycle.states, vec![1, 1]);
        assert_eq!(classes[1].class, CycleClass::SemiUnambiguous);
        assert_eq!(classes[1].cycle.states, vec![1, 2, 1]);
        assert_eq!(classes[1].cycle.events, vec![1, 0]);

        let c = cycle_through(&o, 2, |_| true).unwrap();
        assert_eq!(c.states, vec![2, 1, 2]);
        let p = shortest_path(&o, &[0], 2, |_| true).unwrap();
        assert_eq!(p.states, vec![0, 1, 2]);
        assert_eq!(p.events, vec![0, 1]);
        let loop_ = cycle_through(&o, 1, |_| true).unwrap();
        assert_eq!(loop_.states, vec![1, 1]);
        assert_eq!(loop_.events, vec![0]);
    }
}
