//! Graphviz export. Node ids follow the graph's own numbering, so output is
//! deterministic.

use std::fmt::Write;

use crate::basis::BasisGraph;
use crate::net::LabeledPetriNet;
use crate::observer::Observer;
use crate::reachability::ReachabilityGraph;

fn quote(s: &str) -> String {
    format!(
        "\"{}\"",
        s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
    )
}

fn header(name: &str) -> String {
    format!("digraph {name} {{\n  rankdir=LR;\n")
}

/// Nodes are labeled with marking vectors; the initial marking is drawn bold.
pub fn rg_to_dot(net: &LabeledPetriNet, rg: &ReachabilityGraph) -> String {
    let mut out = header("rg");
    for (i, m) in rg.markings().iter().enumerate() {
        let style = if i == rg.initial() { ", style=bold" } else { "" };
        writeln!(out, "  n{i} [label={}{style}];", quote(&m.to_string())).unwrap();
    }
    for e in rg.edges() {
        let label = format!(
            "{}/{}",
            net.transitions()[e.transition],
            net.label_symbol(e.transition).unwrap_or("ε")
        );
        writeln!(out, "  n{} -> n{} [label={}];", e.source, e.target, quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Nodes carry `(M, α, β)`; edges carry the event and the observable
/// transition behind it.
pub fn brg_to_dot(net: &LabeledPetriNet, brg: &BasisGraph) -> String {
    let mut out = header("brg");
    for (i, node) in brg.nodes().iter().enumerate() {
        let label = format!("({}, {}, {})", node.marking, u8::from(node.alpha), u8::from(node.beta));
        let style = if i == brg.initial() { ", style=bold" } else { "" };
        writeln!(out, "  n{i} [label={}{style}];", quote(&label)).unwrap();
    }
    for e in brg.edges() {
        let label = format!("{} ({})", net.alphabet()[e.event], net.transitions()[e.transition]);
        writeln!(out, "  n{} -> n{} [label={}];", e.source, e.target, quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Observer states are labeled by `member` applied to each member id;
/// marked states are double circles.
pub fn observer_to_dot(alphabet: &[String], obs: &Observer, member: impl Fn(usize) -> String) -> String {
    let mut out = header("observer");
    for s in 0..obs.len() {
        let names: Vec<String> = obs.members(s).iter().map(|&u| member(u)).collect();
        let shape = if obs.is_marked(s) { "doublecircle" } else { "circle" };
        writeln!(
            out,
            "  s{s} [label={}, shape={shape}];",
            quote(&format!("{{{}}}", names.join(", ")))
        )
        .unwrap();
    }
    for s in 0..obs.len() {
        for (e, t) in obs.successors(s) {
            writeln!(out, "  s{s} -> s{t} [label={}];", quote(&alphabet[e])).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn basis_observer_to_dot(net: &LabeledPetriNet, brg: &BasisGraph, obs: &Observer) -> String {
    observer_to_dot(net.alphabet(), obs, |u| {
        let n = brg.node(u);
        format!("({}, {}, {})", n.marking, u8::from(n.alpha), u8::from(n.beta))
    })
}

pub fn rg_observer_to_dot(net: &LabeledPetriNet, rg: &ReachabilityGraph, obs: &Observer) -> String {
    observer_to_dot(net.alphabet(), obs, |u| rg.marking(u).to_string())
}
