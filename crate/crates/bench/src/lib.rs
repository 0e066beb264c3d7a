//! Named workloads shared by the benchmarks.

use cdetect::corpus::{corpus, parallel_fork_join, CorpusConfig, Sample};
use cdetect::{fixtures, CrucialSet, LabeledPetriNet};

pub struct Workload {
    pub name: String,
    pub net: LabeledPetriNet,
    pub crucial: CrucialSet,
}

/// The fork/join family at the given widths, with the idle marking crucial.
pub fn fork_join_family(widths: &[usize]) -> Vec<Workload> {
    widths
        .iter()
        .map(|&w| {
            let net = parallel_fork_join(w);
            let crucial = CrucialSet::Explicit([net.initial().clone()].into());
            Workload {
                name: format!("width {w}"),
                net,
                crucial,
            }
        })
        .collect()
}

pub fn fixture_workloads() -> Vec<Workload> {
    vec![
        Workload {
            name: "relay".into(),
            net: fixtures::relay(),
            crucial: fixtures::explicit(&[&[1, 0, 0], &[0, 1, 0]]),
        },
        Workload {
            name: "fork_join gmec".into(),
            net: fixtures::fork_join(),
            crucial: fixtures::p1_marked_gmec(),
        },
    ]
}

pub fn random_samples(count: usize) -> Vec<Sample> {
    corpus(1, count, &CorpusConfig::default())
}
