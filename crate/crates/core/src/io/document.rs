//! TOML documents for nets and crucial sets.
//!
//! A net document:
//!
//! ```toml
//! places = ["p1", "p2"]
//! initial = { p1 = 1 }
//!
//! [[transition]]
//! name = "t1"
//! pre = { p1 = 1 }
//! post = { p2 = 1 }
//! label = "a"        # omit for an unobservable transition
//! ```
//!
//! A crucial-set document is either `kind = "explicit"` with
//! `markings = [[1, 0], ...]`, or `kind = "gmec"` with
//! `rows = [[w1, ..., wm, k], ...]` meaning `w · M <= k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::DocError;
use crate::crucial::{CrucialSet, Gmec};
use crate::net::{LabeledPetriNet, Marking};

type Arcs = BTreeMap<Spanned<String>, Spanned<i64>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNet {
    places: Vec<Spanned<String>>,
    #[serde(default)]
    initial: Arcs,
    #[serde(default, rename = "transition")]
    transitions: Vec<RawTransition>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    name: Spanned<String>,
    #[serde(default)]
    pre: Arcs,
    #[serde(default)]
    post: Arcs,
    label: Option<Spanned<String>>,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())].matches('\n').count() + 1
    }
}

fn syntax(text: &str, e: toml::de::Error) -> DocError {
    DocError::Syntax {
        line: e.span().map(|s| Lines(text).of(s.start)),
        message: e.message().trim().to_string(),
    }
}

/// Parses a net document. Places and transitions keep declaration order.
pub fn parse_net(text: &str) -> Result<LabeledPetriNet, DocError> {
    let raw: RawNet = toml::from_str(text).map_err(|e| syntax(text, e))?;
    let lines = Lines(text);

    let mut index = HashMap::new();
    for (p, name) in raw.places.iter().enumerate() {
        if index.insert(name.get_ref().clone(), p).is_some() {
            return Err(DocError::Invalid {
                line: Some(lines.of(name.span().start)),
                message: format!("duplicate place `{}`", name.get_ref()),
            });
        }
    }
    let m = raw.places.len();
    let vector = |arcs: &Arcs, min: i64| -> Result<Vec<u32>, DocError> {
        let mut v = vec![0u32; m];
        for (place, value) in arcs {
            let line = lines.of(place.span().start);
            let &p = index.get(place.get_ref()).ok_or_else(|| DocError::UndeclaredPlace {
                place: place.get_ref().clone(),
                line,
            })?;
            let x = *value.get_ref();
            if x < min {
                return Err(DocError::Multiplicity {
                    place: place.get_ref().clone(),
                    value: x,
                    min,
                    line,
                });
            }
            v[p] = u32::try_from(x).map_err(|_| DocError::Invalid {
                line: Some(line),
                message: format!("multiplicity {x} is too large"),
            })?;
        }
        Ok(v)
    };

    let initial = Marking::new(vector(&raw.initial, 0)?);
    let n = raw.transitions.len();
    let mut pre = vec![vec![0u32; n]; m];
    let mut post = vec![vec![0u32; n]; m];
    let mut names = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    for (t, tr) in raw.transitions.iter().enumerate() {
        if !seen.insert(tr.name.get_ref().as_str()) {
            return Err(DocError::Invalid {
                line: Some(lines.of(tr.name.span().start)),
                message: format!("duplicate transition `{}`", tr.name.get_ref()),
            });
        }
        for (p, x) in vector(&tr.pre, 1)?.into_iter().enumerate() {
            pre[p][t] = x;
        }
        for (p, x) in vector(&tr.post, 1)?.into_iter().enumerate() {
            post[p][t] = x;
        }
        if let Some(label) = &tr.label {
            if label.get_ref().is_empty() {
                return Err(DocError::Invalid {
                    line: Some(lines.of(label.span().start)),
                    message: "empty label; omit the field for an unobservable transition".to_string(),
                });
            }
        }
        names.push(tr.name.get_ref().clone());
        labels.push(tr.label.as_ref().map(|l| l.get_ref().clone()));
    }
    let places = raw.places.into_iter().map(Spanned::into_inner).collect();
    Ok(LabeledPetriNet::from_matrices(
        places, names, &pre, &post, initial, labels,
    )?)
}

#[derive(Serialize)]
struct NetOut<'a> {
    places: &'a [String],
    initial: BTreeMap<&'a str, u32>,
    transition: Vec<TransitionOut<'a>>,
}

#[derive(Serialize)]
struct TransitionOut<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    pre: BTreeMap<&'a str, u32>,
    post: BTreeMap<&'a str, u32>,
}

/// Serializes `net` as a document that [`parse_net`] reads back to an
/// equal net.
pub fn net_to_toml(net: &LabeledPetriNet) -> String {
    let names = net.places();
    let sparse = |v: &[u32]| -> BTreeMap<&str, u32> {
        v.iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(p, &x)| (names[p].as_str(), x))
            .collect()
    };
    let doc = NetOut {
        places: names,
        initial: sparse(net.initial().tokens()),
        transition: (0..net.transition_count())
            .map(|t| TransitionOut {
                name: &net.transitions()[t],
                label: net.label_symbol(t),
                pre: sparse(net.pre(t)),
                post: sparse(net.post(t)),
            })
            .collect(),
    };
    toml::to_string(&doc).expect("net document serializes")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrucial {
    kind: Spanned<String>,
    markings: Option<Vec<Spanned<Vec<i64>>>>,
    rows: Option<Vec<Spanned<Vec<i64>>>>,
}

/// Parses a crucial-set document for a net with `places` places.
pub fn parse_crucial(text: &str, places: usize) -> Result<CrucialSet, DocError> {
    let raw: RawCrucial = toml::from_str(text).map_err(|e| syntax(text, e))?;
    let lines = Lines(text);
    let check_len = |v: &Spanned<Vec<i64>>, want: usize| {
        if v.get_ref().len() == want {
            Ok(())
        } else {
            Err(DocError::Invalid {
                line: Some(lines.of(v.span().start)),
                message: format!("expected {want} entries, found {}", v.get_ref().len()),
            })
        }
    };
    let missing = |field: &str| DocError::Invalid {
        line: Some(lines.of(raw.kind.span().start)),
        message: format!("`kind = \"{}\"` requires `{field}`", raw.kind.get_ref()),
    };
    let stray = |field: &str| DocError::Invalid {
        line: Some(lines.of(raw.kind.span().start)),
        message: format!("`{field}` is not allowed with `kind = \"{}\"`", raw.kind.get_ref()),
    };

    match raw.kind.get_ref().as_str() {
        "explicit" => {
            if raw.rows.is_some() {
                return Err(stray("rows"));
            }
            let mut set = BTreeSet::new();
            for v in raw.markings.as_ref().ok_or_else(|| missing("markings"))? {
                check_len(v, places)?;
                let tokens = v
                    .get_ref()
                    .iter()
                    .map(|&x| u32::try_from(x))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| DocError::Invalid {
                        line: Some(lines.of(v.span().start)),
                        message: "token counts must be non-negative".to_string(),
                    })?;
                set.insert(Marking::new(tokens));
            }
            Ok(CrucialSet::Explicit(set))
        }
        "gmec" => {
            if raw.markings.is_some() {
                return Err(stray("markings"));
            }
            let mut weights = Vec::new();
            let mut bounds = Vec::new();
            for row in raw.rows.as_ref().ok_or_else(|| missing("rows"))? {
                check_len(row, places + 1)?;
                let (w, k) = row.get_ref().split_at(places);
                weights.push(w.to_vec());
                bounds.push(k[0]);
            }
            Ok(CrucialSet::Gmec(Gmec::new(weights, bounds)?))
        }
        other => Err(DocError::Invalid {
            line: Some(lines.of(raw.kind.span().start)),
            message: format!("unknown kind `{other}`; expected `explicit` or `gmec`"),
        }),
    }
}

#[derive(Serialize)]
struct CrucialOut {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    markings: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<Vec<i64>>>,
}

pub fn crucial_to_toml(crucial: &CrucialSet) -> String {
    let doc = match crucial {
        CrucialSet::Explicit(set) => CrucialOut {
            kind: "explicit",
            markings: Some(set.iter().map(|m| m.tokens().to_vec()).collect()),
            rows: None,
        },
        CrucialSet::Gmec(g) => CrucialOut {
            kind: "gmec",
            markings: None,
            rows: Some(
                g.weights()
                    .iter()
                    .zip(g.bounds())
                    .map(|(w, &k)| w.iter().copied().chain([k]).collect())
                    .collect(),
            ),
        },
    };
    toml::to_string(&doc).expect("crucial document serializes")
}

fn read(path: &Path) -> Result<String, DocError> {
    std::fs::read_to_string(path).map_err(|source| DocError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_net(path: impl AsRef<Path>) -> Result<LabeledPetriNet, DocError> {
    parse_net(&read(path.as_ref())?)
}

pub fn read_crucial(path: impl AsRef<Path>, places: usize) -> Result<CrucialSet, DocError> {
    parse_crucial(&read(path.as_ref())?, places)
}

/// Reads a marking either as a token vector (`[0,1,0]`, `0 1 0`) or as a
/// place map (`{p2:1}`, `p2=1, p3=2`).
pub fn parse_marking(net: &LabeledPetriNet, text: &str) -> Result<Marking, DocError> {
    let body = text.trim().trim_start_matches(['[', '{']).trim_end_matches([']', '}']);
    let items: Vec<&str> = body.split([',', ' ', '\t']).filter(|s| !s.is_empty()).collect();
    let bad = |msg: String| DocError::Invalid {
        line: None,
        message: msg,
    };
    let count = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| bad(format!("invalid token count `{s}`")))
    };

    let mut tokens = vec![0u32; net.place_count()];
    if items.iter().any(|s| s.contains([':', '='])) {
        for item in items {
            let (name, value) = item
                .split_once([':', '='])
                .ok_or_else(|| bad(format!("expected `place:count`, found `{item}`")))?;
            let p = net
                .place_index(name.trim())
                .ok_or_else(|| bad(format!("unknown place `{}`", name.trim())))?;
            tokens[p] = count(value)?;
        }
    } else {
        if items.len() != tokens.len() {
            return Err(bad(format!(
                "expected {} token counts, found {}",
                tokens.len(),
                items.len()
            )));
        }
        for (slot, item) in tokens.iter_mut().zip(items) {
            *slot = count(item)?;
        }
    }
    Ok(Marking::new(tokens))
}

/// Splits an observation on commas or whitespace into event indices.
pub fn parse_word(net: &LabeledPetriNet, text: &str) -> Result<Vec<usize>, DocError> {
    text.split([',', ' ', '\t'])
        .filter(|s| !s.is_empty())
        .map(|s| {
            net.event_index(s).ok_or_else(|| DocError::Invalid {
                line: None,
                message: format!("`{s}` is not an observable label of the net"),
            })
        })
        .collect()
}
