//! Labeled Petri net model and firing semantics.
//!
//! Places and transitions are identified by their index in declaration
//! order. Names only matter for I/O.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Token counts per place, in place-declaration order.
///
/// The derived `Ord` is lexicographic over the place ordering, which is the
/// canonical order used everywhere markings are stored or reported.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn new(tokens: Vec<u32>) -> Self {
        Marking(tokens)
    }

    pub fn zeros(places: usize) -> Self {
        Marking(vec![0; places])
    }

    pub fn tokens(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    /// Componentwise `self >= other`.
    pub fn covers(&self, other: &[u32]) -> bool {
        self.0.iter().zip(other).all(|(a, b)| a >= b)
    }

    /// `self >= other` and `self != other`.
    pub fn strictly_covers(&self, other: &Marking) -> bool {
        self.covers(&other.0) && self.0 != other.0
    }

    /// `self + delta`, or `None` if some place would go negative.
    pub fn offset(&self, delta: &[i64]) -> Option<Marking> {
        self.0
            .iter()
            .zip(delta)
            .map(|(&x, &d)| u32::try_from(i64::from(x) + d).ok())
            .collect::<Option<Vec<_>>>()
            .map(Marking)
    }

    fn check_len(&self, expected: usize) -> Result<()> {
        if self.0.len() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.0.len(),
            })
        }
    }
}

impl From<Vec<u32>> for Marking {
    fn from(v: Vec<u32>) -> Self {
        Marking(v)
    }
}

impl std::ops::Index<usize> for Marking {
    type Output = u32;
    fn index(&self, p: usize) -> &u32 {
        &self.0[p]
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Firing counts per transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParikhVector(Vec<u32>);

impl ParikhVector {
    pub fn new(counts: Vec<u32>) -> Self {
        ParikhVector(counts)
    }

    pub fn zeros(len: usize) -> Self {
        ParikhVector(vec![0; len])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &ParikhVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn incremented(&self, index: usize) -> ParikhVector {
        let mut v = self.0.clone();
        v[index] += 1;
        ParikhVector(v)
    }
}

impl std::ops::Add for &ParikhVector {
    type Output = ParikhVector;
    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        ParikhVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Marking(self.0.clone()).fmt(f)
    }
}

/// A node of the place/transition bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PtNode {
    Place(usize),
    Transition(usize),
}

/// A Petri net system with a labeling that maps each transition to an
/// observable event or to the empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPetriNet {
    places: Vec<String>,
    transitions: Vec<String>,
    // Columns indexed by transition, each of length |P|.
    pre: Vec<Vec<u32>>,
    post: Vec<Vec<u32>>,
    incidence: Vec<Vec<i64>>,
    initial: Marking,
    labels: Vec<Option<usize>>,
    alphabet: Vec<String>,
}

impl LabeledPetriNet {
    /// Builds a net from `|P| x |T|` matrices (row = place, column = transition).
    pub fn from_matrices(
        places: Vec<String>,
        transitions: Vec<String>,
        pre: &[Vec<u32>],
        post: &[Vec<u32>],
        initial: Marking,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        let m = places.len();
        let n = transitions.len();
        for matrix in [pre, post] {
            if matrix.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: matrix.len(),
                });
            }
            if let Some(row) = matrix.iter().find(|r| r.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        initial.check_len(m)?;
        check_unique(&places)?;
        check_unique(&transitions)?;

        let column = |mat: &[Vec<u32>], t: usize| (0..m).map(|p| mat[p][t]).collect::<Vec<_>>();
        let pre: Vec<Vec<u32>> = (0..n).map(|t| column(pre, t)).collect();
        let post: Vec<Vec<u32>> = (0..n).map(|t| column(post, t)).collect();
        let incidence = pre
            .iter()
            .zip(&post)
            .map(|(i, o)| i.iter().zip(o).map(|(&a, &b)| i64::from(b) - i64::from(a)).collect())
            .collect();

        let alphabet: Vec<String> = labels
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let labels = labels
            .iter()
            .map(|l| {
                l.as_ref()
                    .map(|s| alphabet.binary_search(s).expect("label in alphabet"))
            })
            .collect();

        Ok(LabeledPetriNet {
            places,
            transitions,
            pre,
            post,
            incidence,
            initial,
            labels,
            alphabet,
        })
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.places.iter().position(|p| p == name)
    }

    pub fn transition_index(&self, name: &str) -> Option<usize> {
        self.transitions.iter().position(|t| t == name)
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    /// Sorted observable event symbols. Event indices refer to this list.
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn event_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.binary_search_by(|s| s.as_str().cmp(symbol)).ok()
    }

    /// Event index of `t`, `None` for unobservable transitions.
    pub fn label(&self, t: usize) -> Option<usize> {
        self.labels[t]
    }

    pub fn label_symbol(&self, t: usize) -> Option<&str> {
        self.labels[t].map(|e| self.alphabet[e].as_str())
    }

    pub fn is_observable(&self, t: usize) -> bool {
        self.labels[t].is_some()
    }

    pub fn observable_transitions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.transition_count()).filter(|&t| self.is_observable(t))
    }

    pub fn unobservable_transitions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.transition_count()).filter(|&t| !self.is_observable(t))
    }

    pub fn pre(&self, t: usize) -> &[u32] {
        &self.pre[t]
    }

    pub fn post(&self, t: usize) -> &[u32] {
        &self.post[t]
    }

    pub fn incidence(&self, t: usize) -> &[i64] {
        &self.incidence[t]
    }

    /// The `|P| x |T|` pre-incidence matrix, row-major.
    pub fn pre_matrix(&self) -> Vec<Vec<u32>> {
        transpose(&self.pre, self.place_count())
    }

    pub fn post_matrix(&self) -> Vec<Vec<u32>> {
        transpose(&self.post, self.place_count())
    }

    fn check_transition(&self, t: usize) -> Result<()> {
        if t < self.transition_count() {
            Ok(())
        } else {
            Err(Error::TransitionOutOfRange {
                index: t,
                count: self.transition_count(),
            })
        }
    }

    pub fn check_marking(&self, m: &Marking) -> Result<()> {
        m.check_len(self.place_count())
    }

    pub fn enabled(&self, m: &Marking, t: usize) -> Result<bool> {
        self.check_transition(t)?;
        self.check_marking(m)?;
        Ok(m.covers(&self.pre[t]))
    }

    pub fn fire(&self, m: &Marking, t: usize) -> Result<Marking> {
        if !self.enabled(m, t)? {
            return Err(Error::NotEnabled {
                transition: t,
                marking: m.clone(),
            });
        }
        Ok(self.fire_unchecked(m, t))
    }

    /// Fires `t` assuming it is enabled at `m`.
    pub(crate) fn fire_unchecked(&self, m: &Marking, t: usize) -> Marking {
        m.offset(&self.incidence[t]).expect("transition enabled")
    }

    pub fn fire_sequence(&self, m: &Marking, seq: &[usize]) -> Result<Marking> {
        self.check_marking(m)?;
        let mut current = m.clone();
        for (position, &t) in seq.iter().enumerate() {
            if !self.enabled(&current, t)? {
                return Err(Error::SequenceBlocked {
                    position,
                    transition: t,
                    marking: current,
                });
            }
            current = self.fire_unchecked(&current, t);
        }
        Ok(current)
    }

    pub fn parikh(&self, seq: &[usize]) -> Result<ParikhVector> {
        let mut counts = vec![0; self.transition_count()];
        for &t in seq {
            self.check_transition(t)?;
            counts[t] += 1;
        }
        Ok(ParikhVector(counts))
    }

    /// State equation `m + C * y`, or `None` if the result is negative somewhere.
    pub fn apply_state_equation(&self, m: &Marking, y: &ParikhVector) -> Option<Marking> {
        let mut delta = vec![0i64; self.place_count()];
        for (t, &k) in y.counts().iter().enumerate() {
            for (d, &c) in delta.iter_mut().zip(&self.incidence[t]) {
                *d += c * i64::from(k);
            }
        }
        m.offset(&delta)
    }

    pub fn unobservable_subnet(&self) -> UnobservableSubnet {
        UnobservableSubnet::new(self)
    }

    /// A directed cycle of the place/transition graph restricted to
    /// unobservable transitions, if one exists. The witness alternates
    /// places and transitions, starting at a place.
    pub fn tu_cycle(&self) -> Option<Vec<PtNode>> {
        let m = self.place_count();
        let tu: Vec<usize> = self.unobservable_transitions().collect();
        // Node ids: places 0..m, unobservable transitions m.. in Tu order.
        let node_count = m + tu.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for (k, &t) in tu.iter().enumerate() {
            for p in 0..m {
                if self.pre[t][p] > 0 {
                    succ[p].push(m + k);
                }
                if self.post[t][p] > 0 {
                    succ[m + k].push(p);
                }
            }
        }
        let to_pt = |v: usize| {
            if v < m {
                PtNode::Place(v)
            } else {
                PtNode::Transition(tu[v - m])
            }
        };

        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Grey,
            Black,
        }
        let mut color = vec![Color::White; node_count];
        for root in 0..node_count {
            if color[root] != Color::White {
                continue;
            }
            // Iterative DFS; `stack` holds (node, next successor slot).
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = Color::Grey;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&w) = succ[v].get(*next) {
                    *next += 1;
                    match color[w] {
                        Color::White => {
                            color[w] = Color::Grey;
                            stack.push((w, 0));
                        }
                        Color::Grey => {
                            let start = stack.iter().position(|&(u, _)| u == w).expect("grey on stack");
                            let mut cycle: Vec<usize> = stack[start..].iter().map(|&(u, _)| u).collect();
                            // Rotate so the witness starts at a place.
                            if let Some(first_place) = cycle.iter().position(|&u| u < m) {
                                cycle.rotate_left(first_place);
                            }
                            return Some(cycle.into_iter().map(to_pt).collect());
                        }
                        Color::Black => {}
                    }
                } else {
                    color[v] = Color::Black;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn is_tu_acyclic(&self) -> bool {
        self.tu_cycle().is_none()
    }

    /// Structural precondition of every unobservable-reach computation: the
    /// unobservable subnet is acyclic and has no source transition.
    pub fn check_unobservable_structure(&self) -> Result<()> {
        if let Some(witness) = self.tu_cycle() {
            return Err(Error::TuSubnetCyclic { witness });
        }
        if let Some(t) = self
            .unobservable_transitions()
            .find(|&t| self.pre[t].iter().all(|&x| x == 0))
        {
            return Err(Error::UnobservableSource(t));
        }
        Ok(())
    }

    /// Place name -> token count for the nonzero entries of `m`.
    pub fn marking_map(&self, m: &Marking) -> BTreeMap<usize, u32> {
        m.tokens()
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(p, &x)| (p, x))
            .collect()
    }

    /// Renders `m` as `{p1:1, p3:2}`, omitting empty places.
    pub fn format_marking(&self, m: &Marking) -> String {
        let parts: Vec<String> = self
            .marking_map(m)
            .into_iter()
            .map(|(p, x)| format!("{}:{}", self.places[p], x))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn transpose(cols: &[Vec<u32>], rows: usize) -> Vec<Vec<u32>> {
    (0..rows).map(|p| cols.iter().map(|c| c[p]).collect()).collect()
}

fn check_unique(names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

type NamedArcs = Vec<(String, u32)>;

/// Name-based construction of a [`LabeledPetriNet`].
#[derive(Debug, Clone, Default)]
pub struct NetBuilder {
    places: Vec<String>,
    transitions: Vec<(String, NamedArcs, NamedArcs, Option<String>)>,
    initial: Vec<(String, u32)>,
}

impl NetBuilder {
    pub fn new<I, S>(places: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        NetBuilder {
            places: places.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    /// Adds a transition; `label = None` makes it unobservable.
    pub fn transition(mut self, name: &str, pre: &[(&str, u32)], post: &[(&str, u32)], label: Option<&str>) -> Self {
        let owned = |arcs: &[(&str, u32)]| arcs.iter().map(|&(p, w)| (p.to_string(), w)).collect();
        self.transitions
            .push((name.to_string(), owned(pre), owned(post), label.map(str::to_string)));
        self
    }

    pub fn initial(mut self, tokens: &[(&str, u32)]) -> Self {
        self.initial = tokens.iter().map(|&(p, w)| (p.to_string(), w)).collect();
        self
    }

    pub fn build(self) -> Result<LabeledPetriNet> {
        check_unique(&self.places)?;
        let index: HashMap<&str, usize> = self.places.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownPlace(name.to_string()))
        };
        let m = self.places.len();
        let n = self.transitions.len();
        let mut pre = vec![vec![0u32; n]; m];
        let mut post = vec![vec![0u32; n]; m];
        let mut names = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (t, (name, inputs, outputs, label)) in self.transitions.into_iter().enumerate() {
            for (p, w) in inputs {
                pre[lookup(&p)?][t] += w;
            }
            for (p, w) in outputs {
                post[lookup(&p)?][t] += w;
            }
            names.push(name);
            labels.push(label);
        }
        let mut initial = vec![0u32; m];
        for (p, w) in &self.initial {
            initial[lookup(p)?] += w;
        }
        LabeledPetriNet::from_matrices(self.places, names, &pre, &post, Marking(initial), labels)
    }
}

/// The net restricted to its unobservable transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnobservableSubnet {
    /// Original index of each subnet column.
    pub transitions: Vec<usize>,
    pub pre: Vec<Vec<u32>>,
    pub post: Vec<Vec<u32>>,
    /// `Cu`, one column per unobservable transition.
    pub incidence: Vec<Vec<i64>>,
    places: usize,
}

impl UnobservableSubnet {
    fn new(net: &LabeledPetriNet) -> Self {
        let transitions: Vec<usize> = net.unobservable_transitions().collect();
        UnobservableSubnet {
            pre: transitions.iter().map(|&t| net.pre[t].clone()).collect(),
            post: transitions.iter().map(|&t| net.post[t].clone()).collect(),
            incidence: transitions.iter().map(|&t| net.incidence[t].clone()).collect(),
            transitions,
            places: net.place_count(),
        }
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn place_count(&self) -> usize {
        self.places
    }

    /// `Cu` as a `|P| x |Tu|` matrix.
    pub fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.places)
            .map(|p| self.incidence.iter().map(|c| c[p]).collect())
            .collect()
    }

    /// `m + Cu * y`, or `None` if negative somewhere.
    pub fn apply(&self, m: &Marking, y: &ParikhVector) -> Option<Marking> {
        let mut delta = vec![0i64; self.places];
        for (col, &k) in self.incidence.iter().zip(y.counts()) {
            for (d, &c) in delta.iter_mut().zip(col) {
                *d += c * i64::from(k);
            }
        }
        m.offset(&delta)
    }

    /// Subnet columns in an order where every producer of a place comes
    /// before its consumers; `None` if the subnet is cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let k = self.len();
        let mut indegree = vec![0usize; k];
        let mut succ = vec![Vec::new(); k];
        for (i, out) in self.post.iter().enumerate() {
            for (j, inp) in self.pre.iter().enumerate() {
                if out.iter().zip(inp).any(|(&o, &x)| o > 0 && x > 0) {
                    if i == j {
                        return None;
                    }
                    succ[i].push(j);
                    indegree[j] += 1;
                }
            }
        }
        let mut ready: BTreeSet<usize> = (0..k).filter(|&j| indegree[j] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        (order.len() == k).then_some(order)
    }
}
