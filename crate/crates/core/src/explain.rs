//! Justification sets for the acceptance or rejection of an argument.
//!
//! An accepted topic is explained by its defenders within the extension:
//! extension members at even attack distance from the topic. A rejected
//! topic is explained by its undefended attackers: arguments at odd
//! distance that no extension member attacks. The topic itself is always
//! part of the set.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::dataset::Facts;
use crate::framework::{bipolar_extension, grounded, ArgId, ContextualGraph, Extension, Labelling, RelationMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Semantics {
    #[serde(rename = "grounded")]
    Grounded,
    #[serde(rename = "bipolar-grounded")]
    BipolarGrounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Topic,
    Defender,
    /// Extension member supporting a defender.
    Supporter,
    UndefendedAttacker,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Member {
    pub id: ArgId,
    pub name: String,
    pub role: Role,
    /// Shortest attack distance to the topic with the member's parity.
    /// Supporters get the distance of the defender they support.
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplanationSet {
    pub topic: ArgId,
    pub verdict: Verdict,
    pub semantics: Semantics,
    /// Topic first, then by distance and index.
    pub members: Vec<Member>,
}

impl ExplanationSet {
    pub fn ids(&self) -> Vec<ArgId> {
        self.members.iter().map(|m| m.id).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.members.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn contains(&self, id: ArgId) -> bool {
        self.members.iter().any(|m| m.id == id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn build(
        graph: &ContextualGraph,
        topic: ArgId,
        verdict: Verdict,
        semantics: Semantics,
        found: BTreeMap<ArgId, (Role, usize)>,
    ) -> ExplanationSet {
        let mut members: Vec<Member> = found
            .into_iter()
            .filter(|&(id, _)| id != topic)
            .map(|(id, (role, distance))| Member {
                id,
                name: graph.name(id).to_string(),
                role,
                distance,
            })
            .collect();
        members.sort_by_key(|m| (m.distance, m.id));
        members.insert(
            0,
            Member {
                id: topic,
                name: graph.name(topic).to_string(),
                role: Role::Topic,
                distance: 0,
            },
        );
        ExplanationSet {
            topic,
            verdict,
            semantics,
            members,
        }
    }
}

/// Shortest even and odd attack distances from every argument to `topic`,
/// following attack edges backwards. Index 0 is even, 1 is odd.
fn parity_distances(graph: &ContextualGraph, topic: ArgId) -> Vec<[Option<usize>; 2]> {
    let mut dist = vec![[None, None]; graph.len()];
    dist[topic.0][0] = Some(0);
    let mut queue = VecDeque::from([(topic, 0usize)]);
    while let Some((x, parity)) = queue.pop_front() {
        let d = dist[x.0][parity].expect("queued states have a distance");
        for &a in graph.attackers(x) {
            let p = 1 - parity;
            if dist[a.0][p].is_none() {
                dist[a.0][p] = Some(d + 1);
                queue.push_back((a, p));
            }
        }
    }
    dist
}

fn check_topic(graph: &ContextualGraph, topic: ArgId) -> Result<()> {
    if topic.0 >= graph.len() || !graph.is_active(topic) {
        return Err(Error::Precondition(format!("argument {} is not present", topic.0)));
    }
    Ok(())
}

/// Defenders of an accepted `topic` within `extension`.
pub fn def_by(graph: &ContextualGraph, extension: &Extension, topic: ArgId) -> Result<ExplanationSet> {
    check_topic(graph, topic)?;
    if !extension.contains(topic) {
        return Err(Error::Precondition(format!(
            "`{}` is not in the extension; explain its rejection instead",
            graph.name(topic)
        )));
    }
    let found = parity_distances(graph, topic)
        .iter()
        .enumerate()
        .filter_map(|(i, d)| {
            let d = d[0]?;
            (d >= 2 && extension.contains(ArgId(i))).then_some((ArgId(i), (Role::Defender, d)))
        })
        .collect();
    Ok(ExplanationSet::build(graph, topic, Verdict::Accepted, Semantics::Grounded, found))
}

/// Direct and indirect attackers of a rejected `topic` that no member of
/// `extension` attacks.
pub fn not_def(graph: &ContextualGraph, extension: &Extension, topic: ArgId) -> Result<ExplanationSet> {
    check_topic(graph, topic)?;
    if extension.contains(topic) {
        return Err(Error::Precondition(format!(
            "`{}` is in the extension; explain its acceptance instead",
            graph.name(topic)
        )));
    }
    Ok(ExplanationSet::build(
        graph,
        topic,
        Verdict::Rejected,
        Semantics::Grounded,
        undefended(graph, extension, topic),
    ))
}

fn undefended(graph: &ContextualGraph, extension: &Extension, topic: ArgId) -> BTreeMap<ArgId, (Role, usize)> {
    parity_distances(graph, topic)
        .iter()
        .enumerate()
        .filter_map(|(i, d)| {
            let d = d[1]?;
            let countered = graph.attackers(ArgId(i)).iter().any(|&c| extension.contains(c));
            (!countered).then_some((ArgId(i), (Role::UndefendedAttacker, d)))
        })
        .collect()
}

/// Union of [`not_def`] over several extensions, each of which must reject
/// the topic.
pub fn not_acc(graph: &ContextualGraph, extensions: &[Extension], topic: ArgId) -> Result<ExplanationSet> {
    check_topic(graph, topic)?;
    if extensions.is_empty() {
        return Err(Error::Precondition("no extension given".into()));
    }
    let mut found = BTreeMap::new();
    for ext in extensions {
        for (id, (role, d)) in not_def(graph, ext, topic)?
            .members
            .into_iter()
            .map(|m| (m.id, (m.role, m.distance)))
        {
            found
                .entry(id)
                .and_modify(|e: &mut (Role, usize)| e.1 = e.1.min(d))
                .or_insert((role, d));
        }
    }
    Ok(ExplanationSet::build(graph, topic, Verdict::Rejected, Semantics::Grounded, found))
}

/// How a counter-attack must be backed to count as a defence when
/// supports are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefenceMode {
    /// The counter-attacker has a supporter in the extension. Unless
    /// `strict`, a counter-attacker without any supporter is accepted as is.
    Supported { strict: bool },
    /// Every supporter of the attacker is itself attacked from the
    /// extension.
    Attacking,
}

impl Default for DefenceMode {
    fn default() -> Self {
        DefenceMode::Supported { strict: false }
    }
}

/// Defenders of an accepted `topic` in a bipolar framework. A defender is
/// an extension member `c` at even distance that attacks some attacker `b`
/// on a path to the topic, with the pair `(b, c)` satisfying `mode`. In
/// supported mode the extension members supporting `c` are reported too.
pub fn def_by_bipolar(
    graph: &ContextualGraph,
    extension: &Extension,
    topic: ArgId,
    mode: DefenceMode,
) -> Result<ExplanationSet> {
    check_topic(graph, topic)?;
    if !extension.contains(topic) {
        return Err(Error::Precondition(format!(
            "`{}` is not in the extension; explain its rejection instead",
            graph.name(topic)
        )));
    }
    let dist = parity_distances(graph, topic);
    let mut found: BTreeMap<ArgId, (Role, usize)> = BTreeMap::new();
    for b in graph.active() {
        let Some(db) = dist[b.0][1] else { continue };
        for &c in graph.attackers(b) {
            if !extension.contains(c) || c == topic {
                continue;
            }
            let backed = match mode {
                DefenceMode::Supported { strict } => {
                    let supporters = graph.supporters(c);
                    (supporters.is_empty() && !strict)
                        || supporters.iter().any(|&d| extension.contains(d))
                }
                DefenceMode::Attacking => graph
                    .supporters(b)
                    .iter()
                    .all(|&d| graph.attackers(d).iter().any(|&e| extension.contains(e))),
            };
            if !backed {
                continue;
            }
            let d = db + 1;
            let entry = found.entry(c).or_insert((Role::Defender, d));
            *entry = (Role::Defender, entry.1.min(d));
            if matches!(mode, DefenceMode::Supported { .. }) {
                for &s in graph.supporters(c) {
                    if extension.contains(s) && s != topic {
                        found.entry(s).or_insert((Role::Supporter, d));
                    }
                }
            }
        }
    }
    Ok(ExplanationSet::build(
        graph,
        topic,
        Verdict::Accepted,
        Semantics::BipolarGrounded,
        found,
    ))
}

/// A classified row with its explanation.
#[derive(Debug, Clone)]
pub struct Explained {
    pub graph: ContextualGraph,
    pub labelling: Labelling,
    pub set: ExplanationSet,
}

/// Explains the classification of `facts` by `matrix`: the contextual
/// graph is labelled, then its target explained by defenders when
/// accepted and by undefended attackers when rejected. Frameworks with
/// supports use the bipolar labelling and `mode`.
pub fn explain_prediction(matrix: &RelationMatrix, facts: &Facts, mode: DefenceMode) -> Result<Explained> {
    let graph = matrix.project(facts);
    let bipolar = matrix.universe().variant().supports;
    let labelling = if bipolar {
        bipolar_extension(&graph)
    } else {
        grounded(&graph)?
    };
    let extension = labelling.extension();
    let target = ArgId::TARGET;
    let mut set = match (extension.contains(target), bipolar) {
        (true, true) => def_by_bipolar(&graph, &extension, target, mode)?,
        (true, false) => def_by(&graph, &extension, target)?,
        (false, _) => not_def(&graph, &extension, target)?,
    };
    if bipolar {
        set.semantics = Semantics::BipolarGrounded;
    }
    Ok(Explained { graph, labelling, set })
}

/// Plain-text rendering, one line per member.
pub fn render(set: &ExplanationSet) -> String {
    let mut out = String::new();
    let topic = &set.members[0].name;
    let rest = &set.members[1..];
    match (set.verdict, rest.is_empty()) {
        (Verdict::Accepted, true) => {
            let _ = writeln!(out, "{topic}: accepted; no attackers present");
        }
        (Verdict::Accepted, false) => {
            let _ = writeln!(out, "{topic}: accepted, defended by");
        }
        (Verdict::Rejected, true) => {
            let _ = writeln!(out, "{topic}: rejected; every attacker is countered");
        }
        (Verdict::Rejected, false) => {
            let _ = writeln!(out, "{topic}: rejected, undefended attackers");
        }
    }
    for m in rest {
        let role = match m.role {
            Role::Topic => "topic",
            Role::Defender => "defender",
            Role::Supporter => "supporter",
            Role::UndefendedAttacker => "attacker",
        };
        let _ = writeln!(out, "  {:<9} {} (distance {})", role, m.name, m.distance);
    }
    out
}

impl fmt::Display for ExplanationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
