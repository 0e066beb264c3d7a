//! Crucial-marking sets and the α/β flags of basis markings.
//!
//! α(M) = 1 iff some crucial marking is unobservably reachable from M.
//! β(M) = 1 iff more than one marking is unobservably reachable from M.
//! Both have an enumeration decider and an integer-feasibility decider.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{integer_feasible, ConstraintSystem};
use crate::net::{LabeledPetriNet, Marking};
use crate::reachability::unobservable_reach;

/// A system of GMECs `W * M <= K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gmec {
    weights: Vec<Vec<i64>>,
    bounds: Vec<i64>,
}

impl Gmec {
    pub fn new(weights: Vec<Vec<i64>>, bounds: Vec<i64>) -> Result<Self> {
        if weights.len() != bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: bounds.len(),
            });
        }
        if let Some(width) = weights.first().map(Vec::len) {
            if let Some(row) = weights.iter().find(|r| r.len() != width) {
                return Err(Error::DimensionMismatch {
                    expected: width,
                    found: row.len(),
                });
            }
        }
        Ok(Gmec { weights, bounds })
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn bounds(&self) -> &[i64] {
        &self.bounds
    }

    pub fn rows(&self) -> usize {
        self.bounds.len()
    }

    /// Number of places the constraints range over, if any row exists.
    pub fn width(&self) -> Option<usize> {
        self.weights.first().map(Vec::len)
    }

    pub fn satisfied_by(&self, m: &Marking) -> bool {
        self.weights.iter().zip(&self.bounds).all(|(w, &k)| {
            let lhs: i64 = w.iter().zip(m.tokens()).map(|(&a, &x)| a * i64::from(x)).sum();
            lhs <= k
        })
    }

    /// The equality `M = target` as a pair of inequalities per place.
    pub fn pinning(target: &Marking) -> Gmec {
        let m = target.len();
        let mut weights = Vec::with_capacity(2 * m);
        let mut bounds = Vec::with_capacity(2 * m);
        for p in 0..m {
            let mut up = vec![0; m];
            up[p] = 1;
            let mut down = vec![0; m];
            down[p] = -1;
            weights.push(up);
            bounds.push(i64::from(target[p]));
            weights.push(down);
            bounds.push(-i64::from(target[p]));
        }
        Gmec { weights, bounds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrucialSet {
    Explicit(BTreeSet<Marking>),
    Gmec(Gmec),
}

impl CrucialSet {
    pub fn empty() -> Self {
        CrucialSet::Explicit(BTreeSet::new())
    }

    /// Checks that every vector in the set has `places` entries.
    pub fn check_dimension(&self, places: usize) -> Result<()> {
        let found = match self {
            CrucialSet::Explicit(set) => set.iter().map(Marking::len).find(|&l| l != places),
            CrucialSet::Gmec(g) => g.width().filter(|&w| w != places),
        };
        match found {
            Some(found) => Err(Error::DimensionMismatch {
                expected: places,
                found,
            }),
            None => Ok(()),
        }
    }

    pub fn contains(&self, m: &Marking) -> Result<bool> {
        self.check_dimension(m.len())?;
        Ok(match self {
            CrucialSet::Explicit(set) => set.contains(m),
            CrucialSet::Gmec(g) => g.satisfied_by(m),
        })
    }
}

/// Which decider computes α and β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagMethod {
    /// Enumeration for explicit sets, feasibility for GMEC sets.
    #[default]
    Auto,
    Enumeration,
    Feasibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flags {
    pub alpha: bool,
    pub beta: bool,
}

fn resolve(method: FlagMethod, crucial: &CrucialSet) -> FlagMethod {
    match (method, crucial) {
        (FlagMethod::Auto, CrucialSet::Explicit(_)) => FlagMethod::Enumeration,
        (FlagMethod::Auto, CrucialSet::Gmec(_)) => FlagMethod::Feasibility,
        (m, _) => m,
    }
}

pub fn alpha_flag(net: &LabeledPetriNet, crucial: &CrucialSet, mb: &Marking, method: FlagMethod) -> Result<bool> {
    crucial.check_dimension(net.place_count())?;
    net.check_marking(mb)?;
    match resolve(method, crucial) {
        FlagMethod::Feasibility => alpha_by_feasibility(net, crucial, mb),
        _ => {
            for m in unobservable_reach(net, mb)? {
                if crucial.contains(&m)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn alpha_by_feasibility(net: &LabeledPetriNet, crucial: &CrucialSet, mb: &Marking) -> Result<bool> {
    net.check_unobservable_structure()?;
    let subnet = net.unobservable_subnet();
    match crucial {
        CrucialSet::Gmec(g) => Ok(integer_feasible(&ConstraintSystem::crucial_reach(&subnet, mb, g)?).is_some()),
        CrucialSet::Explicit(set) => {
            for target in set {
                let pin = Gmec::pinning(target);
                if integer_feasible(&ConstraintSystem::crucial_reach(&subnet, mb, &pin)?).is_some() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

pub fn beta_flag(net: &LabeledPetriNet, mb: &Marking, method: FlagMethod) -> Result<bool> {
    net.check_marking(mb)?;
    match method {
        FlagMethod::Feasibility => {
            net.check_unobservable_structure()?;
            let subnet = net.unobservable_subnet();
            Ok(integer_feasible(&ConstraintSystem::nontrivial_reach(&subnet, mb)?).is_some())
        }
        _ => Ok(unobservable_reach(net, mb)?.len() > 1),
    }
}

/// Both flags; with enumeration the unobservable reach is computed once.
pub fn flags(net: &LabeledPetriNet, crucial: &CrucialSet, mb: &Marking, method: FlagMethod) -> Result<Flags> {
    match resolve(method, crucial) {
        FlagMethod::Feasibility => Ok(Flags {
            alpha: alpha_flag(net, crucial, mb, FlagMethod::Feasibility)?,
            beta: beta_flag(net, mb, FlagMethod::Feasibility)?,
        }),
        _ => {
            crucial.check_dimension(net.place_count())?;
            let reach = unobservable_reach(net, mb)?;
            let mut alpha = false;
            for m in &reach {
                if crucial.contains(m)? {
                    alpha = true;
                    break;
                }
            }
            Ok(Flags {
                alpha,
                beta: reach.len() > 1,
            })
        }
    }
}
