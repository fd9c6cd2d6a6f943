#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use crate::dataset::{Dataset, Facts};
use crate::framework::{semantics, ArgId, Argument, ArgumentUniverse, ContextualGraph};
use crate::{Error, Result};

/// One cell of the relation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Entry {
    Forbidden = -1,
    NoEdge = 0,
    Attack = 1,
    Support = 2,
}

impl Entry {
    pub fn code(self) -> i8 {
        self as i8
    }

    pub fn from_code(code: i8) -> Option<Entry> {
        match code {
            -1 => Some(Entry::Forbidden),
            0 => Some(Entry::NoEdge),
            1 => Some(Entry::Attack),
            2 => Some(Entry::Support),
            _ => None,
        }
    }

    pub fn is_edge(self) -> bool {
        matches!(self, Entry::Attack | Entry::Support)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Attack,
    Support,
}

impl EdgeKind {
    pub fn entry(self) -> Entry {
        match self {
            EdgeKind::Attack => Entry::Attack,
            EdgeKind::Support => Entry::Support,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: ArgId,
    pub to: ArgId,
    pub kind: EdgeKind,
}

/// The universal graph: an |A|×|A| grid indexed (source, destination).
///
/// Cells that can never hold an edge (reflexive, out of the target, out of
/// top towards anything but the target, between two arguments of the same
/// attribute) are stored as [`Entry::Forbidden`]. Cells forbidden because
/// of the current edges (reverse edge present, or the edge would close a
/// cycle) are reported by [`RelationMatrix::effective_entry`].
///
/// Every edge lies on a directed path to the target and the edge graph is
/// acyclic; the mutators maintain both.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationMatrix {
    universe: Arc<ArgumentUniverse>,
    grid: Vec<Entry>,
}

impl RelationMatrix {
    /// The start graph: the target alone, no edge.
    pub fn new(universe: Arc<ArgumentUniverse>) -> Self {
        let n = universe.len();
        let mut grid = vec![Entry::NoEdge; n * n];
        for i in universe.ids() {
            for j in universe.ids() {
                if Self::statically_forbidden(&universe, i, j) {
                    grid[i.0 * n + j.0] = Entry::Forbidden;
                }
            }
        }
        RelationMatrix { universe, grid }
    }

    fn statically_forbidden(universe: &ArgumentUniverse, from: ArgId, to: ArgId) -> bool {
        from == to
            || from == ArgId::TARGET
            || (from == ArgId::TOP && to != ArgId::TARGET)
            || universe.same_attribute(from, to)
    }

    /// Builds a matrix from a list of edges, checking each addition.
    pub fn from_edges(
        universe: Arc<ArgumentUniverse>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut m = RelationMatrix::new(universe);
        let mut pending: Vec<Edge> = edges.into_iter().collect();
        // edges may arrive in any order; insert those whose head is already
        // connected until nothing changes
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for e in pending {
                if m.legal_target(e.from, e.to, e.kind) {
                    m.set(e.from, e.to, e.kind.entry());
                } else {
                    rest.push(e);
                }
            }
            if rest.len() == before {
                let e = rest[0];
                return Err(Error::Model(format!(
                    "illegal edge {} -> {}",
                    m.universe.name(e.from),
                    m.universe.name(e.to)
                )));
            }
            pending = rest;
        }
        Ok(m)
    }

    /// Rebuilds a matrix from its materialized grid (see [`Self::to_grid`])
    /// and checks that every cell agrees with the invariants.
    pub fn from_grid(universe: Arc<ArgumentUniverse>, grid: &[Vec<i8>]) -> Result<Self> {
        let n = universe.len();
        if grid.len() != n || grid.iter().any(|r| r.len() != n) {
            return Err(Error::Model(format!("relation matrix must be {n}x{n}")));
        }
        let mut edges = Vec::new();
        for (i, row) in grid.iter().enumerate() {
            for (j, &code) in row.iter().enumerate() {
                let entry = Entry::from_code(code)
                    .ok_or_else(|| Error::Model(format!("invalid entry {code} at ({i}, {j})")))?;
                let kind = match entry {
                    Entry::Attack => EdgeKind::Attack,
                    Entry::Support => EdgeKind::Support,
                    _ => continue,
                };
                edges.push(Edge {
                    from: ArgId(i),
                    to: ArgId(j),
                    kind,
                });
            }
        }
        let m = Self::from_edges(universe, edges)?;
        if m.to_grid() != grid {
            return Err(Error::Model(
                "forbidden cells disagree with the argument table".into(),
            ));
        }
        Ok(m)
    }

    pub fn universe(&self) -> &Arc<ArgumentUniverse> {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn get(&self, from: ArgId, to: ArgId) -> Entry {
        self.grid[from.0 * self.size() + to.0]
    }

    fn set(&mut self, from: ArgId, to: ArgId, entry: Entry) {
        let n = self.size();
        self.grid[from.0 * n + to.0] = entry;
    }

    /// Stored entries in row-major order.
    pub fn entries(&self) -> &[Entry] {
        &self.grid
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.size();
        self.grid
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                let kind = match e {
                    Entry::Attack => EdgeKind::Attack,
                    Entry::Support => EdgeKind::Support,
                    _ => return None,
                };
                Some(Edge {
                    from: ArgId(k / n),
                    to: ArgId(k % n),
                    kind,
                })
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.grid.iter().filter(|e| e.is_edge()).count()
    }

    pub fn has_out_edge(&self, id: ArgId) -> bool {
        let n = self.size();
        self.grid[id.0 * n..(id.0 + 1) * n].iter().any(|e| e.is_edge())
    }

    fn has_in_edge(&self, id: ArgId) -> bool {
        let n = self.size();
        (0..n).any(|i| self.grid[i * n + id.0].is_edge())
    }

    /// Whether `to` can be reached from `from` following edges of any kind.
    pub fn reaches(&self, from: ArgId, to: ArgId) -> bool {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut stack = vec![from.0];
        while let Some(v) = stack.pop() {
            if v == to.0 {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for w in 0..n {
                if self.grid[v * n + w].is_edge() && !seen[w] {
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Whether adding the edge `from -> to` of the given kind keeps every
    /// invariant and lies on a path to the target.
    pub fn legal_target(&self, from: ArgId, to: ArgId, kind: EdgeKind) -> bool {
        let n = self.size();
        if from.0 >= n || to.0 >= n || self.get(from, to) != Entry::NoEdge {
            return false;
        }
        if kind == EdgeKind::Support
            && (!self.universe.variant().supports || from == ArgId::TOP)
        {
            return false;
        }
        if self.get(to, from).is_edge() {
            return false;
        }
        if to != ArgId::TARGET && !self.has_out_edge(to) {
            return false;
        }
        !self.reaches(to, from)
    }

    /// Whether removing the edge `from -> to` leaves every remaining edge on
    /// a path to the target.
    pub fn can_remove(&self, from: ArgId, to: ArgId) -> bool {
        if !self.get(from, to).is_edge() {
            return false;
        }
        let n = self.size();
        let other_out = (0..n).any(|j| j != to.0 && self.grid[from.0 * n + j].is_edge());
        other_out || !self.has_in_edge(from)
    }

    pub fn add_edge(&mut self, from: ArgId, to: ArgId, kind: EdgeKind) -> Result<()> {
        if !self.legal_target(from, to, kind) {
            return Err(Error::Precondition(format!(
                "edge {} -> {} is not allowed",
                self.universe.name(from),
                self.universe.name(to)
            )));
        }
        self.set(from, to, kind.entry());
        Ok(())
    }

    pub fn remove_edge(&mut self, from: ArgId, to: ArgId) -> Result<()> {
        if !self.can_remove(from, to) {
            return Err(Error::Precondition(format!(
                "edge {} -> {} cannot be removed",
                self.universe.name(from),
                self.universe.name(to)
            )));
        }
        self.set(from, to, Entry::NoEdge);
        Ok(())
    }

    /// Applies an edge change without checks. Used by the search, which
    /// only generates legal moves.
    pub(crate) fn set_unchecked(&mut self, from: ArgId, to: ArgId, entry: Entry) {
        self.set(from, to, entry);
    }

    /// The entry with dynamic bans folded in: an empty cell becomes
    /// `Forbidden` when its reverse holds an edge or when the edge would
    /// close a cycle.
    pub fn effective_entry(&self, from: ArgId, to: ArgId) -> Entry {
        match self.get(from, to) {
            Entry::NoEdge if self.get(to, from).is_edge() || self.reaches(to, from) => {
                Entry::Forbidden
            }
            e => e,
        }
    }

    /// The full −1/0/1/2 grid with dynamic bans materialized.
    pub fn to_grid(&self) -> Vec<Vec<i8>> {
        let n = self.size();
        // descendants of every node, for the cycle ban
        let order = self.topological_order().expect("relation matrix is acyclic");
        let mut reach = vec![vec![false; n]; n];
        for &v in order.iter().rev() {
            let mut row = vec![false; n];
            row[v] = true;
            for w in 0..n {
                if self.grid[v * n + w].is_edge() {
                    for (r, &x) in row.iter_mut().zip(&reach[w]) {
                        *r |= x;
                    }
                }
            }
            reach[v] = row;
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match self.grid[i * n + j] {
                        Entry::NoEdge if self.grid[j * n + i].is_edge() || reach[j][i] => -1,
                        e => e.code(),
                    })
                    .collect()
            })
            .collect()
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.size();
        let mut indegree = vec![0usize; n];
        for k in 0..n * n {
            if self.grid[k].is_edge() {
                indegree[k % n] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            order.push(v);
            for w in 0..n {
                if self.grid[v * n + w].is_edge() {
                    indegree[w] -= 1;
                    if indegree[w] == 0 {
                        queue.push(w);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Checks every structural invariant: no statically forbidden edge, no
    /// symmetric pair, no support outside the bipolar variant, acyclicity,
    /// and every edge on a path to the target.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Precondition(msg));
        let supports = self.universe.variant().supports;
        for e in self.edges() {
            let (i, j) = (e.from, e.to);
            if Self::statically_forbidden(&self.universe, i, j) {
                return fail(format!("forbidden edge {} -> {}", i, j));
            }
            if self.get(j, i).is_edge() {
                return fail(format!("symmetric edges between {} and {}", i, j));
            }
            if e.kind == EdgeKind::Support && (!supports || i == ArgId::TOP) {
                return fail(format!("support {} -> {} not allowed", i, j));
            }
            if j != ArgId::TARGET && !self.has_out_edge(j) {
                return fail(format!("edge {} -> {} does not reach the target", i, j));
            }
        }
        if self.topological_order().is_none() {
            return Err(Error::Cycle(
                self.edges().first().map(|e| e.from.0).unwrap_or_default(),
            ));
        }
        for i in self.universe.ids() {
            if self.has_out_edge(i) && !self.reaches(i, ArgId::TARGET) {
                return fail(format!("{} has edges but no path to the target", i));
            }
        }
        Ok(())
    }

    /// Projection onto a fact set: keeps target, top and the arguments
    /// active under the facts, and the edges between kept arguments.
    pub fn project(&self, facts: &Facts) -> ContextualGraph {
        let active = self.universe.active_mask(facts);
        let mut attacks = Vec::new();
        let mut supports = Vec::new();
        for e in self.edges() {
            if active[e.from.0] && active[e.to.0] {
                match e.kind {
                    EdgeKind::Attack => attacks.push((e.from, e.to)),
                    EdgeKind::Support => supports.push((e.from, e.to)),
                }
            }
        }
        ContextualGraph::new(self.universe.names(), active, attacks, supports)
    }

    /// Target acceptance on the contextual graph of `facts`: grounded
    /// semantics, or the bipolar labelling when supports are enabled.
    pub fn predict(&self, facts: &Facts) -> bool {
        let graph = self.project(facts);
        let labelling = if self.universe.variant().supports {
            semantics::bipolar_extension(&graph)
        } else {
            semantics::grounded(&graph).expect("relation matrix is acyclic")
        };
        labelling.is_accepted(ArgId::TARGET)
    }

    pub fn predictions(&self, data: &Dataset) -> Vec<bool> {
        data.instances.iter().map(|i| self.predict(&i.facts)).collect()
    }

    /// Fraction of correctly classified instances; 1 on an empty dataset.
    pub fn accuracy(&self, data: &Dataset) -> f64 {
        if data.is_empty() {
            return 1.0;
        }
        let correct = data
            .instances
            .iter()
            .filter(|i| self.predict(&i.facts) == i.label)
            .count();
        correct as f64 / data.len() as f64
    }

    /// Arguments incident to at least one edge.
    pub fn involved(&self) -> Vec<ArgId> {
        self.universe
            .ids()
            .filter(|&id| self.has_out_edge(id) || self.has_in_edge(id))
            .collect()
    }

    pub fn argument(&self, id: ArgId) -> Argument {
        self.universe.argument(id)
    }
}
