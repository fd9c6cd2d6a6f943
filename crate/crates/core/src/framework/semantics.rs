use std::fmt;

use serde::{Deserialize, Serialize};

use crate::framework::{ArgId, ContextualGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    In,
    Out,
    Undec,
    Sup,
    MustSup,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "IN",
            Label::Out => "OUT",
            Label::Undec => "UNDEC",
            Label::Sup => "SUP",
            Label::MustSup => "MUST_SUP",
        })
    }
}

/// One label per argument of the index space. Absent arguments are `Out`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labelling(pub Vec<Label>);

impl Labelling {
    pub fn label(&self, id: ArgId) -> Label {
        self.0[id.0]
    }

    pub fn is_accepted(&self, id: ArgId) -> bool {
        matches!(self.0[id.0], Label::In | Label::Sup)
    }

    /// Arguments labelled `In` or `Sup`.
    pub fn extension(&self) -> Extension {
        Extension(self.0.iter().map(|l| matches!(l, Label::In | Label::Sup)).collect())
    }
}

/// A set of arguments as a membership mask over the index space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Extension(pub Vec<bool>);

impl Extension {
    pub fn from_members(len: usize, members: impl IntoIterator<Item = ArgId>) -> Self {
        let mut mask = vec![false; len];
        for m in members {
            mask[m.0] = true;
        }
        Extension(mask)
    }

    pub fn contains(&self, id: ArgId) -> bool {
        self.0[id.0]
    }

    pub fn members(&self) -> impl Iterator<Item = ArgId> + '_ {
        self.0.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| ArgId(i))
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Grounded labelling of the attack graph.
///
/// The attack graph must be acyclic: arguments are labelled in topological
/// order, `In` when every attacker is `Out` and `Out` otherwise, which is
/// the least fixed point of the characteristic function on a DAG. A cycle
/// is reported as an error rather than resolved.
pub fn grounded(graph: &ContextualGraph) -> Result<Labelling> {
    let n = graph.len();
    let mut pending: Vec<usize> = (0..n)
        .map(|i| graph.attackers(ArgId(i)).len())
        .collect();
    let mut labels = vec![Label::Out; n];
    let mut ready: Vec<ArgId> = graph.active().filter(|&a| pending[a.0] == 0).collect();
    let mut done = 0;
    while let Some(x) = ready.pop() {
        done += 1;
        let attacked_by_in = graph
            .attackers(x)
            .iter()
            .any(|&a| labels[a.0] == Label::In);
        labels[x.0] = if attacked_by_in { Label::Out } else { Label::In };
        for &y in graph.attacked_by(x) {
            pending[y.0] -= 1;
            if pending[y.0] == 0 {
                ready.push(y);
            }
        }
    }
    let active = graph.active().count();
    if done < active {
        let stuck = graph.active().find(|a| pending[a.0] > 0).map_or(0, |a| a.0);
        return Err(Error::Cycle(stuck));
    }
    Ok(Labelling(labels))
}

/// Adjacency in a compact index space, shared by the public labelling
/// function and the search evaluator.
pub(crate) struct BipolarView<'a> {
    pub present: &'a [bool],
    pub attackers: &'a [Vec<usize>],
    pub attacked: &'a [Vec<usize>],
    pub supported: &'a [Vec<usize>],
}

pub(crate) fn bipolar_labels(view: &BipolarView<'_>) -> Vec<Label> {
    let n = view.present.len();
    let mut lab: Vec<Label> = view
        .present
        .iter()
        .map(|&p| if p { Label::Undec } else { Label::Out })
        .collect();
    loop {
        let next = (0..n).find(|&x| {
            lab[x] == Label::MustSup
                || (lab[x] == Label::Undec
                    && view.attackers[x].iter().all(|&a| lab[a] == Label::Out))
        });
        let Some(x) = next else { break };
        lab[x] = if lab[x] == Label::MustSup {
            Label::Sup
        } else {
            Label::In
        };
        for &y in view.attacked[x].iter().filter(|&&y| view.present[y]) {
            if !matches!(lab[y], Label::Sup | Label::MustSup) {
                lab[y] = Label::Out;
            }
        }
        for &y in view.supported[x].iter().filter(|&&y| view.present[y]) {
            // an already supported argument stays SUP, so support cycles
            // cannot re-trigger each other forever
            if lab[y] != Label::Sup {
                lab[y] = Label::MustSup;
            }
        }
    }
    lab
}

/// Labelling of a bipolar framework.
///
/// Present arguments start `Undec`, absent ones `Out`. Repeatedly pick the
/// lowest-index argument that is `MustSup`, or `Undec` with every attacker
/// `Out`: it becomes `Sup` (resp. `In`), the arguments it attacks become
/// `Out` unless supported, and the arguments it supports become `MustSup`.
/// The extension is the set of `In` and `Sup` arguments. Without supports
/// this coincides with [`grounded`] on acyclic graphs.
pub fn bipolar_extension(graph: &ContextualGraph) -> Labelling {
    let n = graph.len();
    let present: Vec<bool> = (0..n).map(|i| graph.is_active(ArgId(i))).collect();
    let index = |l: &[ArgId]| l.iter().map(|a| a.0).collect::<Vec<_>>();
    let attackers: Vec<Vec<usize>> = (0..n).map(|i| index(graph.attackers(ArgId(i)))).collect();
    let attacked: Vec<Vec<usize>> = (0..n).map(|i| index(graph.attacked_by(ArgId(i)))).collect();
    let supported: Vec<Vec<usize>> = (0..n).map(|i| index(graph.supported_by(ArgId(i)))).collect();
    Labelling(bipolar_labels(&BipolarView {
        present: &present,
        attackers: &attackers,
        attacked: &attacked,
        supported: &supported,
    }))
}
