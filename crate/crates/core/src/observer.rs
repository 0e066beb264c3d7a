//! Deterministic observers produced by subset construction.
//!
//! Both the basis-graph observer and the reachability-graph oracle observer
//! use this representation: each state is a sorted set of member node ids
//! of the underlying graph, and a state is either marked or not.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observer {
    members: Vec<Vec<usize>>,
    delta: Vec<Vec<Option<usize>>>,
    marked: Vec<bool>,
    events: usize,
}

impl Observer {
    /// Subset construction from `initial`. `step(set, e)` returns the sorted
    /// successor set on event `e` (empty when undefined). States are numbered
    /// in breadth-first discovery order with events tried in index order.
    pub fn determinize<S, M>(
        initial: Vec<usize>,
        events: usize,
        max_states: usize,
        mut step: S,
        mut is_marked: M,
    ) -> Result<Self>
    where
        S: FnMut(&[usize], usize) -> Vec<usize>,
        M: FnMut(&[usize]) -> Result<bool>,
    {
        let mut members = vec![initial.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(initial, 0)]);
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut next = 0;
        while next < members.len() {
            let mut row = vec![None; events];
            for (e, slot) in row.iter_mut().enumerate() {
                let succ = step(&members[next], e);
                if succ.is_empty() {
                    continue;
                }
                let id = match index.get(&succ) {
                    Some(&id) => id,
                    None => {
                        if members.len() >= max_states {
                            return Err(Error::BudgetExceeded {
                                what: "observer",
                                limit: max_states,
                            });
                        }
                        let id = members.len();
                        index.insert(succ.clone(), id);
                        members.push(succ);
                        id
                    }
                };
                *slot = Some(id);
            }
            delta.push(row);
            next += 1;
        }
        let marked = members.iter().map(|s| is_marked(s)).collect::<Result<Vec<_>>>()?;
        Ok(Observer {
            members,
            delta,
            marked,
            events,
        })
    }

    /// Builds an observer directly from its parts. Panics on inconsistent
    /// dimensions.
    pub fn from_parts(
        members: Vec<Vec<usize>>,
        delta: Vec<Vec<Option<usize>>>,
        marked: Vec<bool>,
        events: usize,
    ) -> Self {
        assert_eq!(members.len(), delta.len());
        assert_eq!(members.len(), marked.len());
        assert!(delta.iter().all(|r| r.len() == events));
        assert!(delta.iter().flatten().flatten().all(|&s| s < members.len()));
        Observer {
            members,
            delta,
            marked,
            events,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn event_count(&self) -> usize {
        self.events
    }

    pub fn members(&self, state: usize) -> &[usize] {
        &self.members[state]
    }

    pub fn is_marked(&self, state: usize) -> bool {
        self.marked[state]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&s| self.marked[s])
    }

    pub fn step(&self, state: usize, event: usize) -> Option<usize> {
        self.delta[state][event]
    }

    /// Outgoing `(event, target)` pairs in event order.
    pub fn successors(&self, state: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.delta[state]
            .iter()
            .enumerate()
            .filter_map(|(e, t)| t.map(|t| (e, t)))
    }

    pub fn edge_count(&self) -> usize {
        self.delta.iter().flatten().flatten().count()
    }

    /// State reached from the initial state on `word`, if defined.
    pub fn run(&self, word: &[usize]) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        word.iter()
            .try_fold(self.initial(), |s, &e| self.delta[s].get(e).copied().flatten())
    }

    /// Replaces the marking predicate, keeping states and transitions.
    pub fn remark<M>(&mut self, mut is_marked: M) -> Result<()>
    where
        M: FnMut(&[usize]) -> Result<bool>,
    {
        self.marked = self.members.iter().map(|s| is_marked(s)).collect::<Result<Vec<_>>>()?;
        Ok(())
    }
}
