//! C-detectability of bounded labeled Petri nets, decided on the basis
//! reachability graph, with a reachability-graph route kept as an oracle.

pub mod basis;
pub mod corpus;
pub mod crucial;
pub mod detect;
pub mod error;
pub mod feasibility;
pub mod fixtures;
pub mod io;
pub mod net;
pub mod observer;
pub mod reachability;

pub use basis::{build_brg, minimal_explanations, BasisGraph, BasisNode, BrgEdge, BrgOptions, MinimalExplanationSet};
pub use crucial::{alpha_flag, beta_flag, flags, CrucialSet, FlagMethod, Flags, Gmec};
pub use detect::{verify_all, Analysis, Options, Property, Verdict, Witness};
pub use error::{Error, Result};
pub use net::{LabeledPetriNet, Marking, NetBuilder, ParikhVector, PtNode, UnobservableSubnet};
pub use observer::Observer;
pub use reachability::{build_rg, unobservable_reach, ReachabilityGraph};
