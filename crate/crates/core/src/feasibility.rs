//! Integer feasibility over the unobservable state equation
//! `M' = M + Cu * y`, `M' >= 0`, `y >= 0`, optionally with GMEC rows on `M'`
//! and a `y != 0` requirement.
//!
//! The search is a depth-first branch and bound over `y`, one coordinate at
//! a time in topological order of the (acyclic) unobservable subnet. Every
//! coordinate has a finite upper bound: a transition cannot fire more often
//! than its input places can ever be supplied, and in an acyclic subnet the
//! supply of a place only depends on transitions that come earlier.

use crate::crucial::Gmec;
use crate::error::{Error, Result};
use crate::net::{Marking, ParikhVector, UnobservableSubnet};

#[derive(Debug, Clone)]
pub struct ConstraintSystem<'a> {
    subnet: &'a UnobservableSubnet,
    base: Marking,
    gmec: Option<Gmec>,
    require_nonzero: bool,
    order: Vec<usize>,
    upper: Vec<u64>,
}

impl<'a> ConstraintSystem<'a> {
    pub fn new(
        subnet: &'a UnobservableSubnet,
        base: &Marking,
        gmec: Option<&Gmec>,
        require_nonzero: bool,
    ) -> Result<Self> {
        let m = subnet.place_count();
        if base.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: base.len(),
            });
        }
        if let Some(width) = gmec.and_then(Gmec::width) {
            if width != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: width,
                });
            }
        }
        let order = subnet
            .topological_order()
            .ok_or(Error::TuSubnetCyclic { witness: Vec::new() })?;

        let mut upper = vec![0u64; subnet.len()];
        for &j in &order {
            let mut bound: Option<u64> = None;
            for p in 0..m {
                let need = u64::from(subnet.pre[j][p]);
                if need == 0 {
                    continue;
                }
                let supply = (0..subnet.len())
                    .filter(|&i| subnet.post[i][p] > 0)
                    .fold(u64::from(base[p]), |acc, i| {
                        acc.saturating_add(u64::from(subnet.post[i][p]).saturating_mul(upper[i]))
                    });
                let b = supply / need;
                bound = Some(bound.map_or(b, |x| x.min(b)));
            }
            upper[j] = bound.ok_or(Error::UnobservableSource(subnet.transitions[j]))?;
        }

        Ok(ConstraintSystem {
            subnet,
            base: base.clone(),
            gmec: gmec.cloned(),
            require_nonzero,
            order,
            upper,
        })
    }

    /// Some marking satisfying `gmec` is unobservably reachable from `base`.
    pub fn crucial_reach(subnet: &'a UnobservableSubnet, base: &Marking, gmec: &Gmec) -> Result<Self> {
        Self::new(subnet, base, Some(gmec), false)
    }

    /// Some marking other than `base` is unobservably reachable from `base`.
    pub fn nontrivial_reach(subnet: &'a UnobservableSubnet, base: &Marking) -> Result<Self> {
        Self::new(subnet, base, None, true)
    }

    pub fn base(&self) -> &Marking {
        &self.base
    }

    pub fn gmec(&self) -> Option<&Gmec> {
        self.gmec.as_ref()
    }

    pub fn requires_nonzero(&self) -> bool {
        self.require_nonzero
    }

    /// Per-column upper bounds on `y` used by the search.
    pub fn upper_bounds(&self) -> &[u64] {
        &self.upper
    }

    /// Whether `y` satisfies every constraint of the system.
    pub fn accepts(&self, y: &ParikhVector) -> bool {
        if self.require_nonzero && y.is_zero() {
            return false;
        }
        match self.subnet.apply(&self.base, y) {
            Some(reached) => self.gmec.as_ref().is_none_or(|g| g.satisfied_by(&reached)),
            None => false,
        }
    }
}

struct Search<'s, 'a> {
    sys: &'s ConstraintSystem<'a>,
    // pos_rem[d][p]: largest possible future increase of place p from depth d on.
    pos_rem: Vec<Vec<i64>>,
    // row_rem[d][r]: smallest possible future change of GMEC row r from depth d on.
    row_rem: Vec<Vec<i64>>,
    // Effect of one firing of each subnet column on each GMEC row.
    row_effect: Vec<Vec<i64>>,
    cur: Vec<i64>,
    rows: Vec<i64>,
    y: Vec<u32>,
}

impl Search<'_, '_> {
    fn run(&mut self, depth: usize) -> bool {
        let sys = self.sys;
        if self.cur.iter().zip(&self.pos_rem[depth]).any(|(&c, &r)| c + r < 0) {
            return false;
        }
        if let Some(g) = &sys.gmec {
            if self
                .rows
                .iter()
                .zip(&self.row_rem[depth])
                .zip(g.bounds())
                .any(|((&v, &r), &k)| v + r > k)
            {
                return false;
            }
        }
        if depth == sys.order.len() {
            return !sys.require_nonzero || self.y.iter().any(|&v| v > 0);
        }
        let j = sys.order[depth];
        let column = &sys.subnet.incidence[j];
        for value in 0..=sys.upper[j] {
            if value > 0 {
                for (c, &d) in self.cur.iter_mut().zip(column) {
                    *c += d;
                }
                for (r, &d) in self.rows.iter_mut().zip(&self.row_effect[j]) {
                    *r += d;
                }
            }
            self.y[j] = value as u32;
            if self.run(depth + 1) {
                return true;
            }
        }
        // Undo this coordinate.
        let total = sys.upper[j] as i64;
        for (c, &d) in self.cur.iter_mut().zip(column) {
            *c -= d * total;
        }
        for (r, &d) in self.rows.iter_mut().zip(&self.row_effect[j]) {
            *r -= d * total;
        }
        self.y[j] = 0;
        false
    }
}

/// Searches for `y` satisfying the system. Returns a witness over the
/// subnet columns, or `None` if the system is infeasible.
pub fn integer_feasible(sys: &ConstraintSystem<'_>) -> Option<ParikhVector> {
    let subnet = sys.subnet;
    let m = subnet.place_count();
    let k = sys.order.len();
    let empty_rows: &[Vec<i64>] = &[];
    let weights = sys.gmec.as_ref().map_or(empty_rows, |g| g.weights());

    let row_effect: Vec<Vec<i64>> = subnet
        .incidence
        .iter()
        .map(|col| {
            weights
                .iter()
                .map(|w| w.iter().zip(col).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();

    let mut pos_rem = vec![vec![0i64; m]; k + 1];
    let mut row_rem = vec![vec![0i64; weights.len()]; k + 1];
    for d in (0..k).rev() {
        let j = sys.order[d];
        let ub = sys.upper[j] as i64;
        pos_rem[d] = pos_rem[d + 1]
            .iter()
            .zip(&subnet.incidence[j])
            .map(|(&acc, &c)| acc.saturating_add(c.max(0).saturating_mul(ub)))
            .collect();
        row_rem[d] = row_rem[d + 1]
            .iter()
            .zip(&row_effect[j])
            .map(|(&acc, &e)| acc.saturating_add(e.min(0).saturating_mul(ub)))
            .collect();
    }

    let cur: Vec<i64> = sys.base.tokens().iter().map(|&x| i64::from(x)).collect();
    let rows = weights
        .iter()
        .map(|w| w.iter().zip(&cur).map(|(a, b)| a * b).sum())
        .collect();

    let mut search = Search {
        sys,
        pos_rem,
        row_rem,
        row_effect,
        cur,
        rows,
        y: vec![0; subnet.len()],
    };
    search.run(0).then(|| ParikhVector::new(search.y))
}

/// A firing sequence (original transition indices) of the unobservable
/// subnet from `base` whose firing counts are `y`, if `base + Cu * y >= 0`.
/// Columns are fired in topological order, which always succeeds for
/// acyclic subnets.
pub fn realize(subnet: &UnobservableSubnet, base: &Marking, y: &ParikhVector) -> Option<Vec<usize>> {
    subnet.apply(base, y)?;
    let order = subnet.topological_order()?;
    let mut current = base.clone();
    let mut seq = Vec::new();
    for j in order {
        for _ in 0..y.counts()[j] {
            if !current.covers(&subnet.pre[j]) {
                return None;
            }
            current = current.offset(&subnet.incidence[j])?;
            seq.push(subnet.transitions[j]);
        }
    }
    Some(seq)
}
