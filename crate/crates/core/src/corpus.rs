//! Seeded random nets for property tests and benchmarks.
//!
//! Candidates are drawn from a small family of arc patterns. A candidate
//! is kept only if its unobservable subnet is acyclic with no source
//! transition and its reachability graph stays within the token limit
//! without deadlocks.

use std::collections::BTreeSet;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crucial::CrucialSet;
use crate::net::{LabeledPetriNet, Marking};
use crate::reachability::{build_rg, ReachabilityGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_places: usize,
    pub max_transitions: usize,
    /// Largest token count allowed in any place of any reachable marking.
    pub max_tokens: u32,
    pub alphabet: usize,
    /// Draws per accepted net before giving up.
    pub attempts: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_places: 6,
            max_transitions: 8,
            max_tokens: 3,
            alphabet: 3,
            attempts: 10_000,
        }
    }
}

/// An accepted net together with its reachability graph and crucial set.
#[derive(Debug, Clone)]
pub struct Sample {
    pub seed: u64,
    pub net: LabeledPetriNet,
    pub rg: ReachabilityGraph,
    pub crucial: CrucialSet,
}

const SYMBOLS: [&str; 4] = ["a", "b", "c", "d"];

fn candidate(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> Option<LabeledPetriNet> {
    let m = rng.random_range(2..=cfg.max_places);
    let n = rng.random_range(2..=cfg.max_transitions);
    let mut pre = vec![vec![0u32; n]; m];
    let mut post = vec![vec![0u32; n]; m];
    let silent: Vec<bool> = {
        let mut s: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        // At least one silent and one observable transition.
        let u = rng.random_range(0..n);
        s[u] = true;
        let o = (u + rng.random_range(1..n)) % n;
        s[o] = false;
        s
    };
    for t in 0..n {
        let inputs = if rng.random_bool(0.2) { 2 } else { 1 };
        let outputs = match rng.random_range(0..10) {
            0 => 0,
            1 | 2 => 2,
            _ => 1,
        };
        for p in (0..m).choose_multiple(rng, inputs.min(m)) {
            pre[p][t] = if rng.random_bool(0.1) { 2 } else { 1 };
        }
        for p in (0..m).choose_multiple(rng, outputs.min(m)) {
            post[p][t] = 1;
        }
    }
    let mut initial = vec![0u32; m];
    for _ in 0..rng.random_range(1..=cfg.max_tokens.min(3)) {
        initial[rng.random_range(0..m)] += 1;
    }
    let alphabet = cfg.alphabet.clamp(1, SYMBOLS.len());
    let labels = silent
        .iter()
        .map(|&s| (!s).then(|| SYMBOLS[rng.random_range(0..alphabet)].to_string()))
        .collect();
    LabeledPetriNet::from_matrices(
        (1..=m).map(|i| format!("p{i}")).collect(),
        (1..=n).map(|i| format!("t{i}")).collect(),
        &pre,
        &post,
        Marking::new(initial),
        labels,
    )
    .ok()
}

fn accept(net: &LabeledPetriNet, cfg: &CorpusConfig) -> Option<ReachabilityGraph> {
    net.check_unobservable_structure().ok()?;
    let rg = build_rg(net, 2_000).ok()?;
    (rg.max_tokens() <= cfg.max_tokens && rg.is_deadlock_free()).then_some(rg)
}

/// A random explicit crucial set: up to three reachable markings, and now
/// and then one unreachable marking.
pub fn random_crucial(rng: &mut impl Rng, net: &LabeledPetriNet, rg: &ReachabilityGraph) -> CrucialSet {
    let k = rng.random_range(0..=3usize.min(rg.len()));
    let mut set: BTreeSet<Marking> = rg
        .markings()
        .iter()
        .cloned()
        .choose_multiple(rng, k)
        .into_iter()
        .collect();
    if rng.random_bool(0.2) {
        let junk = Marking::new((0..net.place_count()).map(|_| rng.random_range(0..=4)).collect());
        set.insert(junk);
    }
    CrucialSet::Explicit(set)
}

/// Draws one accepted sample from `seed`.
pub fn sample(seed: u64, cfg: &CorpusConfig) -> Option<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.attempts {
        if let Some(net) = candidate(&mut rng, cfg) {
            if let Some(rg) = accept(&net, cfg) {
                let crucial = random_crucial(&mut rng, &net, &rg);
                return Some(Sample { seed, net, rg, crucial });
            }
        }
    }
    None
}

/// `count` samples from consecutive seeds starting at `first_seed`.
pub fn corpus(first_seed: u64, count: usize, cfg: &CorpusConfig) -> Vec<Sample> {
    (first_seed..)
        .take(count)
        .map(|seed| sample(seed, cfg).expect("attempt budget is large enough for the default config"))
        .collect()
}

/// A cycle whose fork spawns `width` silent branches that meet again at an
/// observable join. The reachability graph grows as `2^width` while the
/// basis graph keeps two nodes.
pub fn parallel_fork_join(width: usize) -> LabeledPetriNet {
    assert!(width >= 1);
    let m = 1 + 2 * width;
    let n = 2 + width;
    let mut pre = vec![vec![0u32; n]; m];
    let mut post = vec![vec![0u32; n]; m];
    // Place 0 is idle; 1..=width are branch heads; width+1.. are branch tails.
    pre[0][0] = 1;
    for i in 0..width {
        post[1 + i][0] = 1;
        pre[1 + i][1 + i] = 1;
        post[1 + width + i][1 + i] = 1;
        pre[1 + width + i][n - 1] = 1;
    }
    post[0][n - 1] = 1;
    let mut places = vec!["idle".to_string()];
    places.extend((1..=width).map(|i| format!("head{i}")));
    places.extend((1..=width).map(|i| format!("tail{i}")));
    let mut transitions = vec!["fork".to_string()];
    transitions.extend((1..=width).map(|i| format!("u{i}")));
    transitions.push("join".to_string());
    let mut labels = vec![Some("a".to_string())];
    labels.extend((0..width).map(|_| None));
    labels.push(Some("b".to_string()));
    let mut initial = vec![0; m];
    initial[0] = 1;
    LabeledPetriNet::from_matrices(places, transitions, &pre, &post, Marking::new(initial), labels)
        .expect("well-formed family")
}
