//! Machine-readable verdict report.
//!
//! Everything except the `timings` block depends only on the inputs, so two
//! runs with timings disabled produce identical bytes.

use serde::Serialize;

use crate::crucial::CrucialSet;
use crate::detect::{Analysis, Assumptions, ObserverPath, Property, Witness};
use crate::net::LabeledPetriNet;
use crate::observer::Observer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    /// Properties the caller asked about; all four are reported either way.
    pub queried: Vec<Property>,
    pub timings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            queried: Property::ALL.to_vec(),
            timings: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NetSummary {
    pub places: usize,
    pub transitions: usize,
    pub unobservable: usize,
    pub alphabet: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrucialSummary {
    pub kind: &'static str,
    /// Markings for an explicit set, constraint rows for a GMEC set.
    pub size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObserverSummary {
    pub states: usize,
    pub marked: usize,
    pub edges: usize,
}

impl ObserverSummary {
    fn of(obs: &Observer) -> Self {
        ObserverSummary {
            states: obs.len(),
            marked: obs.marked_states().count(),
            edges: obs.edge_count(),
        }
    }
}

/// One element of an alternating state/event path.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Step {
    State { state: usize, markings: Vec<String> },
    Event { event: String },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessReport {
    Lasso { stem: Vec<Step>, cycle: Vec<Step> },
    Escape { cycle: Vec<Step>, path: Vec<Step> },
    Absence { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: &'static str,
    pub name: String,
    pub queried: bool,
    pub holds: bool,
    pub horizon_bound: Option<usize>,
    pub witness: WitnessReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub stage: &'static str,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub net: NetSummary,
    pub crucial: CrucialSummary,
    pub assumptions: Assumptions,
    pub reachable_markings: Option<usize>,
    pub basis_markings: usize,
    pub basis_edges: usize,
    pub observer: ObserverSummary,
    pub oracle_observer: Option<ObserverSummary>,
    /// Whether the reachability-graph route agreed; `None` when not run.
    pub oracle_agrees: Option<bool>,
    pub properties: Vec<PropertyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl Report {
    pub fn new(net: &LabeledPetriNet, crucial: &CrucialSet, analysis: &Analysis, options: &ReportOptions) -> Self {
        let path = |p: &ObserverPath| -> Vec<Step> {
            let mut steps = Vec::with_capacity(2 * p.states.len());
            for (i, &s) in p.states.iter().enumerate() {
                if i > 0 {
                    steps.push(Step::Event {
                        event: net.alphabet()[p.events[i - 1]].clone(),
                    });
                }
                steps.push(Step::State {
                    state: s,
                    markings: analysis
                        .observer
                        .members(s)
                        .iter()
                        .map(|&u| net.format_marking(&analysis.brg.node(u).marking))
                        .collect(),
                });
            }
            steps
        };
        let properties = Property::ALL
            .iter()
            .map(|&p| {
                let v = analysis.verdict.get(p);
                PropertyReport {
                    property: p.short_name(),
                    name: p.to_string(),
                    queried: options.queried.contains(&p),
                    holds: v.holds,
                    horizon_bound: v.horizon_bound,
                    witness: match &v.witness {
                        Witness::Lasso { stem, cycle } => WitnessReport::Lasso {
                            stem: path(stem),
                            cycle: path(cycle),
                        },
                        Witness::Escape { cycle, path: p } => WitnessReport::Escape {
                            cycle: path(cycle),
                            path: path(p),
                        },
                        Witness::Absence { reason } => WitnessReport::Absence { reason: reason.clone() },
                    },
                }
            })
            .collect();
        let crucial = match crucial {
            CrucialSet::Explicit(set) => CrucialSummary {
                kind: "explicit",
                size: set.len(),
            },
            CrucialSet::Gmec(g) => CrucialSummary {
                kind: "gmec",
                size: g.rows(),
            },
        };
        Report {
            net: NetSummary {
                places: net.place_count(),
                transitions: net.transition_count(),
                unobservable: net.unobservable_transitions().count(),
                alphabet: net.alphabet().to_vec(),
            },
            crucial,
            assumptions: analysis.assumptions.clone(),
            reachable_markings: analysis.rg.as_ref().map(|rg| rg.len()),
            basis_markings: analysis.brg.len(),
            basis_edges: analysis.brg.edges().len(),
            observer: ObserverSummary::of(&analysis.observer),
            oracle_observer: analysis.oracle.as_ref().map(|o| ObserverSummary::of(&o.observer)),
            oracle_agrees: analysis
                .oracle
                .as_ref()
                .map(|o| o.verdict.holds() == analysis.verdict.holds()),
            properties,
            timings: options.timings.then(|| {
                analysis
                    .timings
                    .iter()
                    .map(|&(stage, d)| Timing {
                        stage,
                        seconds: d.as_secs_f64(),
                    })
                    .collect()
            }),
        }
    }

    /// `true` when every queried property holds.
    pub fn passed(&self) -> bool {
        self.properties.iter().filter(|p| p.queried).all(|p| p.holds)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{verify_all, Options};
    use crate::fixtures;

    fn report(timings: bool) -> Report {
        let net = fixtures::fork_join();
        let crucial = fixtures::p1_marked_gmec();
        let opts = Options {
            oracle: true,
            ..Default::default()
        };
        let analysis = verify_all(&net, &crucial, &opts).unwrap();
        Report::new(
            &net,
            &crucial,
            &analysis,
            &ReportOptions {
                timings,
                ..Default::default()
            },
        )
    }

    #[test]
    fn fork_join_report() {
        let r = report(false);
        assert_eq!(r.reachable_markings, Some(6));
        assert_eq!(r.basis_markings, 2);
        assert_eq!(r.oracle_agrees, Some(true));
        let holds: Vec<bool> = r.properties.iter().map(|p| p.holds).collect();
        assert_eq!(holds, vec![false, false, false, true]);
        assert!(!r.passed());
        let json = r.to_json();
        assert!(json.contains("\"kind\": \"lasso\""));
        assert!(json.contains("{p1:1}"));
        assert!(!json.contains("timings"));
    }

    #[test]
    fn deterministic_without_timings() {
        assert_eq!(report(false).to_json(), report(false).to_json());
        assert!(report(true).to_json().contains("\"timings\""));
    }
}
