//! The full reachability graph and the observer built on it. This route
//! never looks at basis markings, so it serves as the oracle for them.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::crucial::CrucialSet;
use crate::error::{Error, Result};
use crate::net::{LabeledPetriNet, Marking};
use crate::observer::Observer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RgEdge {
    pub source: usize,
    pub transition: usize,
    pub target: usize,
}

/// The reachability graph of a bounded net. Nodes are numbered in
/// lexicographic marking order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachabilityGraph {
    markings: Vec<Marking>,
    edges: Vec<RgEdge>,
    successors: Vec<Vec<(usize, usize)>>,
    initial: usize,
}

impl ReachabilityGraph {
    pub fn len(&self) -> usize {
        self.markings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markings.is_empty()
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn marking(&self, node: usize) -> &Marking {
        &self.markings[node]
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.markings.binary_search(m).ok()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Edges sorted by `(source, transition, target)`.
    pub fn edges(&self) -> &[RgEdge] {
        &self.edges
    }

    /// `(transition, target)` pairs leaving `node`, by transition index.
    pub fn successors(&self, node: usize) -> &[(usize, usize)] {
        &self.successors[node]
    }

    /// Largest token count of any place over all reachable markings.
    pub fn max_tokens(&self) -> u32 {
        self.markings
            .iter()
            .flat_map(|m| m.tokens().iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// A reachable marking that enables no transition, if any.
    pub fn deadlock(&self) -> Option<&Marking> {
        (0..self.len())
            .find(|&u| self.successors[u].is_empty())
            .map(|u| &self.markings[u])
    }

    pub fn is_deadlock_free(&self) -> bool {
        self.deadlock().is_none()
    }

    pub fn check_deadlock_free(&self) -> Result<()> {
        match self.deadlock() {
            Some(m) => Err(Error::NotDeadlockFree { marking: m.clone() }),
            None => Ok(()),
        }
    }
}

/// Breadth-first exploration from the initial marking, each frontier level
/// visited in lexicographic marking order.
///
/// Fails with [`Error::Unbounded`] as soon as a new marking strictly covers
/// a marking on its own generation path, and with
/// [`Error::BudgetExceeded`] if more than `max_states` markings are found.
pub fn build_rg(net: &LabeledPetriNet, max_states: usize) -> Result<ReachabilityGraph> {
    let mut markings: Vec<Marking> = vec![net.initial().clone()];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut index: HashMap<Marking, usize> = HashMap::from([(net.initial().clone(), 0)]);
    let mut raw_edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut frontier = vec![0usize];

    if max_states == 0 {
        return Err(Error::BudgetExceeded {
            what: "reachability graph",
            limit: max_states,
        });
    }

    while !frontier.is_empty() {
        let mut next_level = Vec::new();
        for &u in &frontier {
            for t in 0..net.transition_count() {
                if !markings[u].covers(net.pre(t)) {
                    continue;
                }
                let m = net.fire_unchecked(&markings[u], t);
                let v = match index.get(&m) {
                    Some(&v) => v,
                    None => {
                        let mut anc = Some(u);
                        while let Some(a) = anc {
                            if m.strictly_covers(&markings[a]) {
                                return Err(Error::Unbounded {
                                    ancestor: markings[a].clone(),
                                    dominating: m,
                                });
                            }
                            anc = parent[a];
                        }
                        if markings.len() >= max_states {
                            return Err(Error::BudgetExceeded {
                                what: "reachability graph",
                                limit: max_states,
                            });
                        }
                        let v = markings.len();
                        index.insert(m.clone(), v);
                        markings.push(m);
                        parent.push(Some(u));
                        next_level.push(v);
                        v
                    }
                };
                raw_edges.push((u, t, v));
            }
        }
        next_level.sort_by(|&a, &b| markings[a].cmp(&markings[b]));
        frontier = next_level;
    }

    // Renumber nodes lexicographically.
    let mut order: Vec<usize> = (0..markings.len()).collect();
    order.sort_by(|&a, &b| markings[a].cmp(&markings[b]));
    let mut rank = vec![0; markings.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let initial = rank[0];
    let mut edges: Vec<RgEdge> = raw_edges
        .into_iter()
        .map(|(s, t, d)| RgEdge {
            source: rank[s],
            transition: t,
            target: rank[d],
        })
        .collect();
    edges.sort();
    let mut sorted_markings: Vec<Marking> = vec![Marking::default(); markings.len()];
    for (old, m) in markings.into_iter().enumerate() {
        sorted_markings[rank[old]] = m;
    }
    let mut successors = vec![Vec::new(); sorted_markings.len()];
    for e in &edges {
        successors[e.source].push((e.transition, e.target));
    }
    Ok(ReachabilityGraph {
        markings: sorted_markings,
        edges,
        successors,
        initial,
    })
}

/// All markings reachable from `m` by firing unobservable transitions only.
pub fn unobservable_reach(net: &LabeledPetriNet, m: &Marking) -> Result<BTreeSet<Marking>> {
    net.check_marking(m)?;
    net.check_unobservable_structure()?;
    let tu: Vec<usize> = net.unobservable_transitions().collect();
    let mut seen = BTreeSet::from([m.clone()]);
    let mut stack = vec![m.clone()];
    while let Some(cur) = stack.pop() {
        for &t in &tu {
            if cur.covers(net.pre(t)) {
                let next = net.fire_unchecked(&cur, t);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    Ok(seen)
}

/// Observation-driven state estimation over a complete reachability graph,
/// where the observed run may start at any reachable marking.
#[derive(Debug, Clone)]
pub struct OracleEstimator<'a> {
    net: &'a LabeledPetriNet,
    rg: &'a ReachabilityGraph,
}

impl<'a> OracleEstimator<'a> {
    pub fn new(net: &'a LabeledPetriNet, rg: &'a ReachabilityGraph) -> Self {
        OracleEstimator { net, rg }
    }

    /// Estimate before any observation: every reachable node.
    pub fn initial(&self) -> Vec<usize> {
        (0..self.rg.len()).collect()
    }

    fn close(&self, nodes: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = nodes.iter().copied().collect();
        while let Some(u) = stack.pop() {
            for &(t, v) in self.rg.successors(u) {
                if !self.net.is_observable(t) && nodes.insert(v) {
                    stack.push(v);
                }
            }
        }
    }

    /// Nodes reachable from `set` by one transition labeled `event` followed
    /// by any number of unobservable transitions.
    pub fn step(&self, set: &[usize], event: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &u in set {
            for &(t, v) in self.rg.successors(u) {
                if self.net.label(t) == Some(event) {
                    out.insert(v);
                }
            }
        }
        self.close(&mut out);
        out.into_iter().collect()
    }

    pub fn estimate(&self, word: &[usize]) -> Result<Vec<usize>> {
        let mut set = self.initial();
        for &e in word {
            check_event(self.net, e)?;
            if set.is_empty() {
                break;
            }
            set = self.step(&set, e);
        }
        Ok(set)
    }
}

pub(crate) fn check_event(net: &LabeledPetriNet, e: usize) -> Result<()> {
    if e < net.alphabet().len() {
        Ok(())
    } else {
        Err(Error::EventOutOfRange {
            index: e,
            count: net.alphabet().len(),
        })
    }
}

/// Markings consistent with `word` (event indices) when the observed run
/// may start at any reachable marking. Empty if `word` cannot be generated.
pub fn consistent_markings_oracle(
    net: &LabeledPetriNet,
    rg: &ReachabilityGraph,
    word: &[usize],
) -> Result<BTreeSet<Marking>> {
    let est = OracleEstimator::new(net, rg);
    Ok(est.estimate(word)?.into_iter().map(|u| rg.marking(u).clone()).collect())
}

/// Observer of the reachability graph with ε-closure, initial state = all
/// reachable markings. A state is marked iff it contains no crucial marking
/// or contains exactly one marking.
pub fn rg_observer(
    net: &LabeledPetriNet,
    rg: &ReachabilityGraph,
    crucial: &CrucialSet,
    max_states: usize,
) -> Result<Observer> {
    net.check_unobservable_structure()?;
    crucial.check_dimension(net.place_count())?;
    let est = OracleEstimator::new(net, rg);
    Observer::determinize(
        est.initial(),
        net.alphabet().len(),
        max_states,
        |set, e| est.step(set, e),
        |set| oracle_marked(rg, crucial, set),
    )
}

fn oracle_marked(rg: &ReachabilityGraph, crucial: &CrucialSet, set: &[usize]) -> Result<bool> {
    if set.len() == 1 {
        return Ok(true);
    }
    for &u in set {
        if crucial.contains(rg.marking(u))? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::net::NetBuilder;

    fn m(v: &[u32]) -> Marking {
        Marking::new(v.to_vec())
    }

    fn set(ms: &[&[u32]]) -> BTreeSet<Marking> {
        ms.iter().map(|v| m(v)).collect()
    }

    #[test]
    fn relay_rg() {
        let net = fixtures::relay();
        let rg = build_rg(&net, 100).unwrap();
        assert_eq!(rg.markings(), &[m(&[0, 0, 1]), m(&[0, 1, 0]), m(&[1, 0, 0])]);
        assert_eq!(rg.initial(), 2);
        assert_eq!(rg.edges().len(), 4);
        assert!(rg.is_deadlock_free());
        assert_eq!(rg.max_tokens(), 1);
    }

    #[test]
    fn fork_join_rg() {
        let net = fixtures::fork_join();
        let rg = build_rg(&net, 100).unwrap();
        assert_eq!(rg.len(), 6);
        assert!(rg.is_deadlock_free());
    }

    #[test]
    fn unbounded_is_detected() {
        let net = NetBuilder::new(["p"])
            .transition("src", &[], &[("p", 1)], None)
            .build()
            .unwrap();
        assert_eq!(
            build_rg(&net, 100),
            Err(Error::Unbounded {
                ancestor: m(&[0]),
                dominating: m(&[1])
            })
        );
        // Covering needs a path, not just any smaller marking.
        let pump = NetBuilder::new(["p", "q"])
            .transition("t", &[("p", 1)], &[("p", 1), ("q", 1)], Some("a"))
            .initial(&[("p", 1)])
            .build()
            .unwrap();
        assert!(matches!(build_rg(&pump, 100), Err(Error::Unbounded { .. })));
    }

    #[test]
    fn budget_is_reported() {
        let net = fixtures::fork_join();
        assert_eq!(
            build_rg(&net, 3),
            Err(Error::BudgetExceeded {
                what: "reachability graph",
                limit: 3
            })
        );
    }

    #[test]
    fn deadlock_witness() {
        let net = NetBuilder::new(["p"])
            .transition("t", &[("p", 1)], &[], Some("a"))
            .initial(&[("p", 1)])
            .build()
            .unwrap();
        let rg = build_rg(&net, 10).unwrap();
        assert_eq!(rg.deadlock(), Some(&m(&[0])));
        assert_eq!(
            rg.check_deadlock_free(),
            Err(Error::NotDeadlockFree { marking: m(&[0]) })
        );
    }

    #[test]
    fn unobservable_reach_examples() {
        let net = fixtures::fork_join();
        assert_eq!(
            unobservable_reach(&net, &m(&[1, 0, 0, 0, 0, 0])).unwrap(),
            set(&[&[1, 0, 0, 0, 0, 0]])
        );
        let rg = build_rg(&net, 100).unwrap();
        let all: BTreeSet<Marking> = rg.markings().iter().cloned().collect();
        assert_eq!(unobservable_reach(&net, &m(&[0, 1, 1, 0, 0, 0])).unwrap(), all);

        let relay = fixtures::relay();
        assert_eq!(unobservable_reach(&relay, &m(&[0, 0, 1])).unwrap(), set(&[&[0, 0, 1]]));
    }

    #[test]
    fn unobservable_reach_needs_acyclic_subnet() {
        let net = NetBuilder::new(["p", "q"])
            .transition("a", &[("p", 1)], &[("q", 1)], None)
            .transition("b", &[("q", 1)], &[("p", 1)], None)
            .build()
            .unwrap();
        assert!(matches!(
            unobservable_reach(&net, &m(&[1, 0])),
            Err(Error::TuSubnetCyclic { .. })
        ));
    }

    #[test]
    fn oracle_consistency_examples() {
        let net = fixtures::relay();
        let rg = build_rg(&net, 100).unwrap();
        let b = net.event_index("b").unwrap();
        let a = net.event_index("a").unwrap();
        assert_eq!(
            consistent_markings_oracle(&net, &rg, &[b]).unwrap(),
            set(&[&[0, 1, 0], &[0, 0, 1]])
        );
        assert_eq!(
            consistent_markings_oracle(&net, &rg, &[b, b, b]).unwrap(),
            set(&[&[0, 1, 0], &[0, 0, 1]])
        );
        assert_eq!(consistent_markings_oracle(&net, &rg, &[a]).unwrap(), set(&[&[1, 0, 0]]));
        assert_eq!(consistent_markings_oracle(&net, &rg, &[]).unwrap().len(), 3);
        assert!(consistent_markings_oracle(&net, &rg, &[b, a]).unwrap().is_empty());
        assert!(matches!(
            consistent_markings_oracle(&net, &rg, &[7]),
            Err(Error::EventOutOfRange { index: 7, count: 2 })
        ));
    }

    fn member_sets(
        net: &LabeledPetriNet,
        rg: &ReachabilityGraph,
        crucial: &CrucialSet,
    ) -> Vec<(BTreeSet<Marking>, bool)> {
        let obs = rg_observer(net, rg, crucial, 1000).unwrap();
        (0..obs.len())
            .map(|s| {
                (
                    obs.members(s).iter().map(|&u| rg.marking(u).clone()).collect(),
                    obs.is_marked(s),
                )
            })
            .collect()
    }

    #[test]
    fn relay_observer() {
        let net = fixtures::relay();
        let rg = build_rg(&net, 100).unwrap();
        let states = member_sets(&net, &rg, &fixtures::explicit(&[&[1, 0, 0]]));
        assert_eq!(
            states,
            vec![
                (set(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), false),
                (set(&[&[1, 0, 0]]), true),
                (set(&[&[0, 1, 0], &[0, 0, 1]]), true),
            ]
        );
        let states = member_sets(&net, &rg, &fixtures::explicit(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(states[2], (set(&[&[0, 1, 0], &[0, 0, 1]]), false));
    }

    #[test]
    fn alternator_observer() {
        let net = fixtures::alternator();
        let rg = build_rg(&net, 100).unwrap();
        let states = member_sets(&net, &rg, &fixtures::explicit(&[&[0, 0, 1, 0]]));
        let front = set(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let back = set(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(states.len(), 3);
        assert!(states.contains(&(front, true)));
        assert!(states.contains(&(back, false)));
    }
}
