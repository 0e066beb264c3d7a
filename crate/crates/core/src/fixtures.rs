//! Small reference nets with hand-checked behaviour.
//!
//! The same nets ship as documents under `crates/core/fixtures/`.

use std::collections::BTreeSet;

use crate::crucial::{CrucialSet, Gmec};
use crate::net::{LabeledPetriNet, Marking, NetBuilder};

/// Three places. `t1` (a) loops on `p1`, `t2` (b) moves `p1 -> p2`,
/// unobservable `t3` moves `p2 -> p3`, `t4` (b) moves `p3 -> p2`.
/// Reachable markings: `p1`, `p2`, `p3` with one token each.
pub fn relay() -> LabeledPetriNet {
    NetBuilder::new(["p1", "p2", "p3"])
        .transition("t1", &[("p1", 1)], &[("p1", 1)], Some("a"))
        .transition("t2", &[("p1", 1)], &[("p2", 1)], Some("b"))
        .transition("t3", &[("p2", 1)], &[("p3", 1)], None)
        .transition("t4", &[("p3", 1)], &[("p2", 1)], Some("b"))
        .initial(&[("p1", 1)])
        .build()
        .expect("valid fixture")
}

/// Four places, one token. Observer states after any observation are
/// `{p1, p2}` and `{p3, p4}`; `a` loops on the former, `b` leads to the
/// latter and `a` leads back.
pub fn alternator() -> LabeledPetriNet {
    NetBuilder::new(["p1", "p2", "p3", "p4"])
        .transition("t1", &[("p1", 1)], &[("p1", 1)], Some("a"))
        .transition("t2", &[("p1", 1)], &[("p2", 1)], None)
        .transition("t3", &[("p2", 1)], &[("p3", 1)], Some("b"))
        .transition("t4", &[("p3", 1)], &[("p4", 1)], None)
        .transition("t5", &[("p4", 1)], &[("p1", 1)], Some("a"))
        .initial(&[("p1", 1)])
        .build()
        .expect("valid fixture")
}

/// Six places. `t1` (a) forks `p1` into `p2 + p3`, two unobservable
/// branches `t2`, `t3` feed a join `t4` into `p6`, and `p6` returns to `p1`
/// either observably (`t5`, b) or silently (`t6`).
/// Six reachable markings, two basis markings.
pub fn fork_join() -> LabeledPetriNet {
    NetBuilder::new(["p1", "p2", "p3", "p4", "p5", "p6"])
        .transition("t1", &[("p1", 1)], &[("p2", 1), ("p3", 1)], Some("a"))
        .transition("t2", &[("p2", 1)], &[("p4", 1)], None)
        .transition("t3", &[("p3", 1)], &[("p5", 1)], None)
        .transition("t4", &[("p4", 1), ("p5", 1)], &[("p6", 1)], None)
        .transition("t5", &[("p6", 1)], &[("p1", 1)], Some("b"))
        .transition("t6", &[("p6", 1)], &[("p1", 1)], None)
        .initial(&[("p1", 1)])
        .build()
        .expect("valid fixture")
}

/// Place `p3` has two unobservable producers, so the observable `t` has two
/// incomparable minimal explanations at the initial marking.
pub fn merge() -> LabeledPetriNet {
    NetBuilder::new(["p1", "p2", "p3", "p4"])
        .transition("u1", &[("p1", 1)], &[("p3", 1)], None)
        .transition("u2", &[("p2", 1)], &[("p3", 1)], None)
        .transition("t", &[("p3", 1)], &[("p4", 1)], Some("a"))
        .transition("back", &[("p4", 1)], &[("p1", 1)], Some("b"))
        .initial(&[("p1", 1), ("p2", 1)])
        .build()
        .expect("valid fixture")
}

/// `{M | M(p1) >= 1}` over six places, written `-M(p1) <= -1`.
pub fn p1_marked_gmec() -> CrucialSet {
    CrucialSet::Gmec(Gmec::new(vec![vec![-1, 0, 0, 0, 0, 0]], vec![-1]).expect("one row"))
}

pub fn explicit(markings: &[&[u32]]) -> CrucialSet {
    CrucialSet::Explicit(
        markings
            .iter()
            .map(|m| Marking::new(m.to_vec()))
            .collect::<BTreeSet<_>>(),
    )
}
