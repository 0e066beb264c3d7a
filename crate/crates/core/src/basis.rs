//! Minimal explanations and the basis reachability graph built from them.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::crucial::{flags, CrucialSet, FlagMethod, Flags};
use crate::error::{Error, Result};
use crate::net::{LabeledPetriNet, Marking, ParikhVector};
use crate::reachability::{check_event, unobservable_reach};

/// Pareto-minimal firing vectors of the unobservable subnet that enable a
/// given observable transition, each with one firing sequence realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MinimalExplanationSet {
    /// Vectors over the unobservable subnet columns, sorted.
    pub evectors: Vec<ParikhVector>,
    /// Witness sequences (original transition indices), aligned with `evectors`.
    pub witnesses: Vec<Vec<usize>>,
}

impl MinimalExplanationSet {
    pub fn len(&self) -> usize {
        self.evectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evectors.is_empty()
    }
}

/// Minimal explanations of observable transition `t` at marking `m`.
///
/// Breadth-first search over unobservable firings, one level per firing, so
/// vectors are discovered in order of increasing size. A vector whose
/// marking enables `t` is recorded and not expanded; a vector covering an
/// already recorded one is pruned.
pub fn minimal_explanations(net: &LabeledPetriNet, m: &Marking, t: usize) -> Result<MinimalExplanationSet> {
    net.enabled(m, t)?;
    if !net.is_observable(t) {
        return Err(Error::UnobservableTransition(t));
    }
    net.check_unobservable_structure()?;
    let sub = net.unobservable_subnet();
    let pre_t = net.pre(t);

    let mut found: Vec<(ParikhVector, Vec<usize>)> = Vec::new();
    let mut level: Vec<(ParikhVector, Marking, Vec<usize>)> =
        vec![(ParikhVector::zeros(sub.len()), m.clone(), Vec::new())];
    let mut seen: HashSet<ParikhVector> = HashSet::new();

    while !level.is_empty() {
        let mut next = Vec::new();
        for (y, marking, seq) in level {
            if found.iter().any(|(f, _)| f.le(&y)) {
                continue;
            }
            if marking.covers(pre_t) {
                found.push((y, seq));
                continue;
            }
            for (j, &tj) in sub.transitions.iter().enumerate() {
                if !marking.covers(&sub.pre[j]) {
                    continue;
                }
                let y2 = y.incremented(j);
                if !seen.insert(y2.clone()) {
                    continue;
                }
                let m2 = marking.offset(&sub.incidence[j]).expect("enabled");
                let mut s2 = seq.clone();
                s2.push(tj);
                next.push((y2, m2, s2));
            }
        }
        level = next;
    }

    // Same-size vectors are pairwise incomparable and smaller ones were found
    // first, so the filter below only guards the invariant.
    let mut minimal: Vec<(ParikhVector, Vec<usize>)> = found
        .iter()
        .filter(|(y, _)| !found.iter().any(|(z, _)| z != y && z.le(y)))
        .cloned()
        .collect();
    minimal.sort();
    let (evectors, witnesses) = minimal.into_iter().unzip();
    Ok(MinimalExplanationSet { evectors, witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisNode {
    pub marking: Marking,
    pub alpha: bool,
    pub beta: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrgEdge {
    pub source: usize,
    pub event: usize,
    pub target: usize,
    /// Observable transition that produced the edge (first one found).
    pub transition: usize,
    /// Minimal explanation fired before `transition`.
    pub explanation: ParikhVector,
    /// Unobservable sequence realizing `explanation`.
    pub witness: Vec<usize>,
}

/// Basis reachability graph annotated with α/β flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisGraph {
    nodes: Vec<BasisNode>,
    edges: Vec<BrgEdge>,
    successors: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrgOptions {
    pub max_nodes: usize,
    pub flag_method: FlagMethod,
}

impl Default for BrgOptions {
    fn default() -> Self {
        BrgOptions {
            max_nodes: 100_000,
            flag_method: FlagMethod::Auto,
        }
    }
}

impl BasisGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[BasisNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &BasisNode {
        &self.nodes[i]
    }

    pub fn edges(&self) -> &[BrgEdge] {
        &self.edges
    }

    /// `(event, target)` pairs leaving `node`, sorted and deduplicated.
    pub fn successors(&self, node: usize) -> &[(usize, usize)] {
        &self.successors[node]
    }

    /// Index of the initial marking's node.
    pub fn initial(&self) -> usize {
        0
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.nodes.iter().position(|n| &n.marking == m)
    }

    pub fn markings(&self) -> impl Iterator<Item = &Marking> {
        self.nodes.iter().map(|n| &n.marking)
    }

    /// Recomputes α/β for another crucial set. Nodes and edges do not depend
    /// on the crucial set and are kept.
    pub fn reflag(&mut self, net: &LabeledPetriNet, crucial: &CrucialSet, method: FlagMethod) -> Result<()> {
        for node in &mut self.nodes {
            let Flags { alpha, beta } = flags(net, crucial, &node.marking, method)?;
            node.alpha = alpha;
            node.beta = beta;
        }
        Ok(())
    }

    /// Basis nodes reached from `set` on `event`.
    pub fn step(&self, set: &[usize], event: usize) -> Vec<usize> {
        let out: BTreeSet<usize> = set
            .iter()
            .flat_map(|&u| self.successors[u].iter())
            .filter(|&&(e, _)| e == event)
            .map(|&(_, v)| v)
            .collect();
        out.into_iter().collect()
    }
}

/// Worklist construction of the basis reachability graph, FIFO from the
/// initial marking. Nodes are numbered in discovery order; for each node,
/// observable transitions are tried in index order and their minimal
/// explanations in sorted order.
pub fn build_brg(net: &LabeledPetriNet, crucial: &CrucialSet, options: BrgOptions) -> Result<BasisGraph> {
    net.check_unobservable_structure()?;
    crucial.check_dimension(net.place_count())?;
    let sub = net.unobservable_subnet();
    let observable: Vec<usize> = net.observable_transitions().collect();

    let mut markings = vec![net.initial().clone()];
    let mut index: HashMap<Marking, usize> = HashMap::from([(net.initial().clone(), 0)]);
    let mut edges: Vec<BrgEdge> = Vec::new();
    let mut seen_edges: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut work = VecDeque::from([0usize]);

    while let Some(x) = work.pop_front() {
        let m = markings[x].clone();
        for &t in &observable {
            let expl = minimal_explanations(net, &m, t)?;
            for (y, witness) in expl.evectors.iter().zip(&expl.witnesses) {
                let after_u = sub.apply(&m, y).expect("explanation is firable");
                let next = after_u.offset(net.incidence(t)).expect("explanation enables t");
                let target = match index.get(&next) {
                    Some(&v) => v,
                    None => {
                        if markings.len() >= options.max_nodes {
                            return Err(Error::BudgetExceeded {
                                what: "basis reachability graph",
                                limit: options.max_nodes,
                            });
                        }
                        let v = markings.len();
                        index.insert(next.clone(), v);
                        markings.push(next);
                        work.push_back(v);
                        v
                    }
                };
                let event = net.label(t).expect("observable");
                if seen_edges.insert((x, event, target)) {
                    edges.push(BrgEdge {
                        source: x,
                        event,
                        target,
                        transition: t,
                        explanation: y.clone(),
                        witness: witness.clone(),
                    });
                }
            }
        }
    }

    let mut nodes = Vec::with_capacity(markings.len());
    for marking in markings {
        let Flags { alpha, beta } = flags(net, crucial, &marking, options.flag_method)?;
        nodes.push(BasisNode { marking, alpha, beta });
    }
    let mut successors = vec![Vec::new(); nodes.len()];
    for e in &edges {
        successors[e.source].push((e.event, e.target));
    }
    for s in &mut successors {
        s.sort_unstable();
    }
    Ok(BasisGraph {
        nodes,
        edges,
        successors,
    })
}

/// Basis markings reached on `word` from the set of all basis markings,
/// as node indices. Empty if `word` cannot be generated.
pub fn consistent_basis_nodes(net: &LabeledPetriNet, brg: &BasisGraph, word: &[usize]) -> Result<Vec<usize>> {
    let mut set: Vec<usize> = (0..brg.len()).collect();
    for &e in word {
        check_event(net, e)?;
        set = brg.step(&set, e);
    }
    Ok(set)
}

/// Markings consistent with `word`: the union of the unobservable reaches
/// of the consistent basis markings.
pub fn consistent_markings_basis(net: &LabeledPetriNet, brg: &BasisGraph, word: &[usize]) -> Result<BTreeSet<Marking>> {
    let mut out = BTreeSet::new();
    for u in consistent_basis_nodes(net, brg, word)? {
        out.extend(unobservable_reach(net, &brg.node(u).marking)?);
    }
    Ok(out)
}
