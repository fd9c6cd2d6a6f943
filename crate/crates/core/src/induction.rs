//! Best-first search over relation matrices.
//!
//! Nodes are universal graphs; two nodes are neighbours when their matrices
//! differ in one cell (one edge added or removed). The search starts from
//! the target alone and pops nodes by increasing `(errors, edges)`, which
//! is the order induced by `h = edges / |A|² + errors` since the edge term
//! stays below one. Ties go to the node generated first.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::dataset::Dataset;
use crate::framework::semantics::{bipolar_labels, BipolarView};
use crate::framework::{ArgId, ArgumentUniverse, Edge, EdgeKind, Entry, Label, RelationMatrix, Variant};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Number of node expansions before giving up.
    pub max_iterations: usize,
    pub variant: Variant,
    /// Recorded with the model. The search itself has no random choice.
    pub seed: u64,
    /// Display name of the target argument.
    pub target_name: String,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_iterations: 100,
            variant: Variant::BASE,
            seed: 0,
            target_name: "target".to_string(),
        }
    }
}

/// Heuristic value of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Score {
    pub errors: usize,
    pub edge_count: usize,
    /// |A|, only used to render `h`.
    pub arguments: usize,
}

impl Score {
    pub fn h(&self) -> f64 {
        self.edge_count as f64 / (self.arguments * self.arguments) as f64 + self.errors as f64
    }
}

/// Misclassification count and edge count of `matrix` on `train`.
pub fn heuristic(matrix: &RelationMatrix, train: &Dataset) -> Score {
    let errors = train
        .instances
        .iter()
        .filter(|i| matrix.predict(&i.facts) != i.label)
        .count();
    Score {
        errors,
        edge_count: matrix.edge_count(),
        arguments: matrix.size(),
    }
}

/// A single-cell change of the relation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Add(Edge),
    Remove(Edge),
}

/// Every legal single-cell change, in row-major order of the cell. Within
/// a cell, an attack comes before a support.
pub fn neighbours(matrix: &RelationMatrix) -> Vec<Move> {
    let n = matrix.size();
    let ids = |k: usize| ArgId(k);
    let mut out_degree = vec![0usize; n];
    let mut in_degree = vec![0usize; n];
    for e in matrix.edges() {
        out_degree[e.from.0] += 1;
        in_degree[e.to.0] += 1;
    }
    let reach = descendants(matrix);
    let supports = matrix.universe().variant().supports;
    let mut moves = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (from, to) = (ids(i), ids(j));
            match matrix.get(from, to) {
                Entry::Forbidden => {}
                Entry::Attack | Entry::Support => {
                    if out_degree[i] > 1 || in_degree[i] == 0 {
                        let kind = if matrix.get(from, to) == Entry::Attack {
                            EdgeKind::Attack
                        } else {
                            EdgeKind::Support
                        };
                        moves.push(Move::Remove(Edge { from, to, kind }));
                    }
                }
                Entry::NoEdge => {
                    let open = !matrix.get(to, from).is_edge()
                        && (to == ArgId::TARGET || out_degree[j] > 0)
                        && !reach[j][i];
                    if !open {
                        continue;
                    }
                    moves.push(Move::Add(Edge {
                        from,
                        to,
                        kind: EdgeKind::Attack,
                    }));
                    if supports && from != ArgId::TOP {
                        moves.push(Move::Add(Edge {
                            from,
                            to,
                            kind: EdgeKind::Support,
                        }));
                    }
                }
            }
        }
    }
    moves
}

/// `reach[a][b]`: b is reachable from a (reflexive).
fn descendants(matrix: &RelationMatrix) -> Vec<Vec<bool>> {
    let n = matrix.size();
    let mut children = vec![Vec::new(); n];
    for e in matrix.edges() {
        children[e.from.0].push(e.to.0);
    }
    let mut reach = vec![vec![false; n]; n];
    let mut state = vec![0u8; n];
    fn visit(v: usize, children: &[Vec<usize>], reach: &mut [Vec<bool>], state: &mut [u8]) {
        if state[v] == 2 {
            return;
        }
        state[v] = 2;
        reach[v][v] = true;
        for &w in &children[v] {
            visit(w, children, reach, state);
            let (row_v, row_w) = if v < w {
                let (a, b) = reach.split_at_mut(w);
                (&mut a[v], &b[0])
            } else {
                let (a, b) = reach.split_at_mut(v);
                (&mut b[0], &a[w])
            };
            for (x, &y) in row_v.iter_mut().zip(row_w.iter()) {
                *x |= y;
            }
        }
    }
    for v in 0..n {
        visit(v, &children, &mut reach, &mut state);
    }
    reach
}

/// 128-bit digest of the row-major edge list, which determines the
/// matrix within a universe.
pub fn node_hash(matrix: &RelationMatrix) -> u128 {
    hash_edges(&matrix.edges())
}

fn hash_edges(edges: &[Edge]) -> u128 {
    let mut hasher = Sha256::new();
    for e in edges {
        hasher.update((e.from.0 as u32).to_le_bytes());
        hasher.update((e.to.0 as u32).to_le_bytes());
        hasher.update([match e.kind {
            EdgeKind::Attack => 1u8,
            EdgeKind::Support => 2u8,
        }]);
    }
    let digest = hasher.finalize();
    let mut bytes = [0u8; 16];
    bytes.copy_from_slice(&digest[..16]);
    u128::from_le_bytes(bytes)
}

/// True when the child (parent plus one edge) classifies every instance
/// exactly as the parent does, in which case the branch is not explored.
pub fn prune_check(parent: &RelationMatrix, child: &RelationMatrix, train: &Dataset) -> bool {
    parent.predictions(train) == child.predictions(train)
}

/// Per-instance predictions packed 64 to a word.
pub(crate) type Bits = Vec<u64>;

/// Precomputed argument activity, for fast prediction of candidate graphs
/// given as edge lists. Attack-only graphs are evaluated for all instances
/// at once on bitsets; graphs with supports are labelled one instance at a
/// time.
pub(crate) struct Evaluator {
    n: usize,
    instances: usize,
    /// `columns[a]`: instances where argument `a` is active.
    columns: Vec<Bits>,
    labels: Bits,
}

/// A candidate graph restricted to the arguments it involves, in
/// increasing universe order.
struct Compiled {
    nodes: Vec<usize>,
    attackers: Vec<Vec<usize>>,
    attacked: Vec<Vec<usize>>,
    supported: Vec<Vec<usize>>,
    has_supports: bool,
    order: Vec<usize>,
    target: Option<usize>,
}

impl Compiled {
    fn new(n: usize, edges: &[Edge]) -> Compiled {
        let mut local = vec![usize::MAX; n];
        let mut nodes: Vec<usize> = edges.iter().flat_map(|e| [e.from.0, e.to.0]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let m = nodes.len();
        let mut attackers = vec![Vec::new(); m];
        let mut attacked = vec![Vec::new(); m];
        let mut supported = vec![Vec::new(); m];
        let mut children = vec![Vec::new(); m];
        let mut indegree = vec![0usize; m];
        let mut has_supports = false;
        for e in edges {
            let (a, b) = (local[e.from.0], local[e.to.0]);
            match e.kind {
                EdgeKind::Attack => {
                    attackers[b].push(a);
                    attacked[a].push(b);
                }
                EdgeKind::Support => {
                    supported[a].push(b);
                    has_supports = true;
                }
            }
            children[a].push(b);
            indegree[b] += 1;
        }
        let mut ready: Vec<usize> = (0..m).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(m);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &w in &children[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        debug_assert_eq!(order.len(), m, "candidate graphs are acyclic");
        let target = nodes.first().filter(|&&v| v == ArgId::TARGET.0).map(|_| 0);
        Compiled {
            nodes,
            attackers,
            attacked,
            supported,
            has_supports,
            order,
            target,
        }
    }
}

fn pack(values: impl IntoIterator<Item = bool>, len: usize) -> Bits {
    let mut bits = vec![0u64; len.div_ceil(64)];
    for (i, v) in values.into_iter().enumerate() {
        if v {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

impl Evaluator {
    pub(crate) fn new(universe: &ArgumentUniverse, data: &Dataset) -> Evaluator {
        let instances = data.len();
        let columns = universe
            .ids()
            .map(|id| {
                pack(
                    data.instances.iter().map(|i| universe.is_active(id, &i.facts)),
                    instances,
                )
            })
            .collect();
        Evaluator {
            n: universe.len(),
            instances,
            columns,
            labels: pack(data.instances.iter().map(|i| i.label), instances),
        }
    }

    fn all(&self) -> Bits {
        let mut bits = vec![u64::MAX; self.instances.div_ceil(64)];
        if let Some(last) = bits.last_mut() {
            if !self.instances.is_multiple_of(64) {
                *last = (1u64 << (self.instances % 64)) - 1;
            }
        }
        bits
    }

    pub(crate) fn predictions(&self, edges: &[Edge]) -> Bits {
        let g = Compiled::new(self.n, edges);
        let Some(target) = g.target else {
            return self.all();
        };
        if !g.has_supports {
            let mut accepted: Vec<Bits> = vec![Vec::new(); g.nodes.len()];
            for &v in &g.order {
                let mut bits = self.columns[g.nodes[v]].clone();
                for &a in &g.attackers[v] {
                    for (x, y) in bits.iter_mut().zip(&accepted[a]) {
                        *x &= !y;
                    }
                }
                accepted[v] = bits;
            }
            return std::mem::take(&mut accepted[target]);
        }
        let bit = |col: &Bits, i: usize| col[i / 64] >> (i % 64) & 1 == 1;
        let mut present = vec![false; g.nodes.len()];
        let accepted = (0..self.instances).map(|i| {
            for (p, &v) in present.iter_mut().zip(&g.nodes) {
                *p = bit(&self.columns[v], i);
            }
            let lab = bipolar_labels(&BipolarView {
                present: &present,
                attackers: &g.attackers,
                attacked: &g.attacked,
                supported: &g.supported,
            });
            matches!(lab[target], Label::In | Label::Sup)
        });
        let accepted: Vec<bool> = accepted.collect();
        pack(accepted, self.instances)
    }

    pub(crate) fn errors(&self, predictions: &Bits) -> usize {
        predictions
            .iter()
            .zip(&self.labels)
            .map(|(p, l)| (p ^ l).count_ones() as usize)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Every training instance is classified correctly.
    Perfect,
    FrontierExhausted,
    IterationLimit,
}

/// One line of search progress, reported after each expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub iteration: usize,
    pub frontier: usize,
    pub current: Score,
    pub best: Score,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub matrix: RelationMatrix,
    pub score: Score,
    pub train_accuracy: f64,
    pub iterations: usize,
    /// Nodes evaluated, pruned ones included.
    pub evaluated: usize,
    pub pruned: usize,
    pub stop: StopReason,
}

struct Node {
    edges: Vec<Edge>,
    errors: usize,
}

fn apply(edges: &[Edge], mv: Move) -> Vec<Edge> {
    let mut out = edges.to_vec();
    let key = |e: &Edge| (e.from, e.to);
    match mv {
        Move::Add(e) => {
            let pos = out.partition_point(|x| key(x) < key(&e));
            out.insert(pos, e);
        }
        Move::Remove(e) => out.retain(|x| key(x) != key(&e)),
    }
    out
}

pub fn search(train: &Dataset, config: &SearchConfig) -> Result<SearchOutcome> {
    search_with_progress(train, config, |_| {})
}

/// Runs the search, calling `progress` after every expansion.
pub fn search_with_progress(
    train: &Dataset,
    config: &SearchConfig,
    mut progress: impl FnMut(&Progress),
) -> Result<SearchOutcome> {
    if config.max_iterations == 0 {
        return Err(Error::Config("max_iterations must be at least 1".into()));
    }
    let universe = Arc::new(ArgumentUniverse::new(
        Arc::clone(&train.schema),
        config.variant,
        config.target_name.clone(),
    ));
    let n = universe.len();
    let score_of = |node: &Node| Score {
        errors: node.errors,
        edge_count: node.edges.len(),
        arguments: n,
    };
    let evaluator = Evaluator::new(&universe, train);
    let start = Node {
        edges: Vec::new(),
        errors: evaluator.errors(&evaluator.predictions(&[])),
    };
    let mut visited: HashSet<u128> = HashSet::new();
    visited.insert(hash_edges(&start.edges));
    let mut nodes = vec![start];
    let mut queue = BinaryHeap::new();
    queue.push(Reverse((nodes[0].errors, 0usize, 0usize)));
    let (mut current, mut best) = (0usize, 0usize);
    let (mut iteration, mut evaluated, mut pruned) = (0usize, 0usize, 0usize);
    let mut stop = StopReason::IterationLimit;

    while !train.is_empty() {
        if queue.is_empty() {
            stop = StopReason::FrontierExhausted;
            break;
        }
        if nodes[current].errors == 0 {
            stop = StopReason::Perfect;
            break;
        }
        if iteration >= config.max_iterations {
            break;
        }
        iteration += 1;

        let parent_edges = nodes[current].edges.clone();
        let parent = RelationMatrix::from_search_edges(Arc::clone(&universe), &parent_edges);
        let parent_predictions = evaluator.predictions(&parent_edges);
        let mut fresh = Vec::new();
        for mv in neighbours(&parent) {
            let edges = apply(&parent_edges, mv);
            if visited.insert(hash_edges(&edges)) {
                fresh.push((mv, edges));
            }
        }
        let outcomes: Vec<Bits> = fresh
            .par_iter()
            .map(|(_, edges)| evaluator.predictions(edges))
            .collect();
        evaluated += fresh.len();
        for ((mv, edges), predictions) in fresh.into_iter().zip(outcomes) {
            if matches!(mv, Move::Add(_)) && predictions == parent_predictions {
                pruned += 1;
                continue;
            }
            let errors = evaluator.errors(&predictions);
            let serial = nodes.len();
            queue.push(Reverse((errors, edges.len(), serial)));
            nodes.push(Node { edges, errors });
        }

        let Some(Reverse((_, _, next))) = queue.pop() else {
            stop = StopReason::FrontierExhausted;
            break;
        };
        current = next;
        if nodes[current].errors < nodes[best].errors {
            best = current;
        }
        progress(&Progress {
            iteration,
            frontier: queue.len(),
            current: score_of(&nodes[current]),
            best: score_of(&nodes[best]),
        });
    }
    if train.is_empty() {
        stop = StopReason::Perfect;
    }

    let matrix = RelationMatrix::from_search_edges(Arc::clone(&universe), &nodes[best].edges);
    let score = score_of(&nodes[best]);
    let train_accuracy = if train.is_empty() {
        1.0
    } else {
        (train.len() - score.errors) as f64 / train.len() as f64
    };
    Ok(SearchOutcome {
        matrix,
        score,
        train_accuracy,
        iterations: iteration,
        evaluated,
        pruned,
        stop,
    })
}

impl RelationMatrix {
    /// Matrix for an edge list produced by the search.
    fn from_search_edges(universe: Arc<ArgumentUniverse>, edges: &[Edge]) -> RelationMatrix {
        let mut m = RelationMatrix::new(universe);
        for e in edges {
            m.set_unchecked(e.from, e.to, e.kind.entry());
        }
        m
    }
}
