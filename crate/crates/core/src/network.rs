//! Labelled level-1 networks.
//!
//! A [`NetworkDraft`] is a freely editable rooted digraph whose leaves carry
//! blocks of taxa and whose interior vertices may carry symbols. Calling
//! [`NetworkDraft::finish`] validates it into an immutable
//! [`LabelledNetwork`], which caches offspring sets and the cycle structure.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::dissim::{Sym3Dissimilarity, Symbol, SymbolAlphabet, Taxon, TaxonSet};

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("network has {0} vertices of indegree 0 (expected exactly one)")]
    NotRooted(usize),
    #[error("network contains a directed cycle")]
    NotAcyclic,
    #[error("network is not level-1")]
    NotLevelOne,
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("parallel edges {0} -> {1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("vertex {0} has more than two parents")]
    TooManyParents(VertexId),
    #[error("vertex {0} has indegree 1 and outdegree 1")]
    DegreeTwo(VertexId),
    #[error("hybrid vertex {0} must have exactly one child")]
    HybridOutdegree(VertexId),
    #[error("hybrid vertex {0} carries a label")]
    LabelOnHybrid(VertexId),
    #[error("interior vertex {0} has no label")]
    MissingLabel(VertexId),
    #[error("label on vertex {0} is not in the alphabet")]
    UnknownLabel(VertexId),
    #[error("leaf {0} carries a label")]
    LabelOnLeaf(VertexId),
    #[error("leaf {0} has two parents")]
    HybridLeaf(VertexId),
    #[error("leaf {0} has no taxa")]
    EmptyLeaf(VertexId),
    #[error("interior vertex {0} carries taxa")]
    TaxaOnInterior(VertexId),
    #[error("leaf blocks do not partition the taxa: {0}")]
    BlocksNotPartition(String),
    #[error("leaf {0} holds more than one taxon")]
    CompoundLeaf(VertexId),
    #[error("subset of size {0} is too small")]
    SubsetTooSmall(usize),
    #[error("unknown taxon {0:?}")]
    UnknownTaxon(String),
}

#[derive(Clone, Debug, Default)]
struct Node {
    parents: Vec<VertexId>,
    children: Vec<VertexId>,
    label: Option<Symbol>,
    block: Vec<Taxon>,
    alive: bool,
}

/// One cycle of a level-1 network: its root, its hybrid, and the interior
/// vertices of its two sides listed from the root downwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub root: VertexId,
    pub hybrid: VertexId,
    pub sides: [Vec<VertexId>; 2],
}

impl Cycle {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        [self.root, self.hybrid]
            .into_iter()
            .chain(self.sides[0].iter().copied())
            .chain(self.sides[1].iter().copied())
    }

    /// The cycle vertex right below `v` on the same side (or the first
    /// vertex of each side when `v` is the root).
    fn cycle_children(&self, v: VertexId) -> Vec<VertexId> {
        if v == self.root {
            return self
                .sides
                .iter()
                .map(|s| s.first().copied().unwrap_or(self.hybrid))
                .collect();
        }
        for side in &self.sides {
            if let Some(pos) = side.iter().position(|&u| u == v) {
                return vec![side.get(pos + 1).copied().unwrap_or(self.hybrid)];
            }
        }
        Vec::new()
    }
}

/// Mutable network under construction.
#[derive(Clone, Debug)]
pub struct NetworkDraft {
    taxa: TaxonSet,
    symbols: SymbolAlphabet,
    nodes: Vec<Node>,
}

impl NetworkDraft {
    pub fn new(taxa: TaxonSet, symbols: SymbolAlphabet) -> Self {
        NetworkDraft {
            taxa,
            symbols,
            nodes: Vec::new(),
        }
    }

    pub fn from_network(net: &LabelledNetwork) -> Self {
        let nodes = (0..net.vertex_count())
            .map(|v| Node {
                parents: net.parents(v).to_vec(),
                children: net.children(v).to_vec(),
                label: net.label(v),
                block: net.block(v).to_vec(),
                alive: true,
            })
            .collect();
        NetworkDraft {
            taxa: net.taxa.clone(),
            symbols: net.symbols.clone(),
            nodes,
        }
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn symbols(&self) -> &SymbolAlphabet {
        &self.symbols
    }

    pub fn add_interior(&mut self, label: Option<Symbol>) -> VertexId {
        self.nodes.push(Node {
            label,
            alive: true,
            ..Node::default()
        });
        self.nodes.len() - 1
    }

    pub fn add_leaf(&mut self, block: Vec<Taxon>) -> VertexId {
        self.nodes.push(Node {
            block,
            alive: true,
            ..Node::default()
        });
        self.nodes.len() - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        self.nodes[u].children.push(v);
        self.nodes[v].parents.push(u);
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        if let Some(i) = self.nodes[u].children.iter().position(|&c| c == v) {
            self.nodes[u].children.remove(i);
        }
        if let Some(i) = self.nodes[v].parents.iter().position(|&p| p == u) {
            self.nodes[v].parents.remove(i);
        }
    }

    pub fn set_label(&mut self, v: VertexId, label: Option<Symbol>) {
        self.nodes[v].label = label;
    }

    pub fn set_block(&mut self, v: VertexId, block: Vec<Taxon>) {
        self.nodes[v].block = block;
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.nodes[v].children
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.nodes[v].parents
    }

    pub fn label(&self, v: VertexId) -> Option<Symbol> {
        self.nodes[v].label
    }

    pub fn block(&self, v: VertexId) -> &[Taxon] {
        &self.nodes[v].block
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.nodes[v].alive
    }

    pub fn alive(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].alive)
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        for p in std::mem::take(&mut self.nodes[v].parents) {
            self.nodes[p].children.retain(|&c| c != v);
        }
        for c in std::mem::take(&mut self.nodes[v].children) {
            self.nodes[c].parents.retain(|&p| p != v);
        }
        self.nodes[v].alive = false;
    }

    /// Replaces the leaf `leaf` by the subgraph rooted at `sub_root`
    /// (already present in this draft): the leaf's parent edges are moved
    /// to `sub_root`.
    pub fn replace_leaf(&mut self, leaf: VertexId, sub_root: VertexId) {
        for p in std::mem::take(&mut self.nodes[leaf].parents) {
            for c in self.nodes[p].children.iter_mut() {
                if *c == leaf {
                    *c = sub_root;
                }
            }
            self.nodes[sub_root].parents.push(p);
        }
        self.nodes[leaf].alive = false;
        self.nodes[leaf].block.clear();
    }

    /// Merges `v` into its parent `u`: `u` inherits the children of `v`.
    fn contract(&mut self, u: VertexId, v: VertexId) {
        self.nodes[u].children.retain(|&c| c != v);
        for c in std::mem::take(&mut self.nodes[v].children) {
            for p in self.nodes[c].parents.iter_mut() {
                if *p == v {
                    *p = u;
                }
            }
            self.nodes[u].children.push(c);
        }
        self.nodes[v].parents.clear();
        self.nodes[v].alive = false;
    }

    /// Removes parallel edges, dead ends, vertices of indegree 1 and
    /// outdegree 1, and a root with a single child. Returns whether
    /// anything changed.
    pub fn normalize(&mut self) -> bool {
        let mut changed_any = false;
        loop {
            let mut changed = false;
            for v in 0..self.nodes.len() {
                if !self.nodes[v].alive {
                    continue;
                }
                let node = &mut self.nodes[v];
                let before = node.children.len();
                let mut seen = HashSet::new();
                node.children.retain(|c| seen.insert(*c));
                if node.children.len() != before {
                    changed = true;
                    let kids = node.children.clone();
                    for c in kids {
                        let ps = &mut self.nodes[c].parents;
                        let mut seen = HashSet::new();
                        ps.retain(|p| seen.insert(*p));
                    }
                }
            }
            for v in 0..self.nodes.len() {
                let node = &self.nodes[v];
                if !node.alive {
                    continue;
                }
                if node.children.is_empty() && node.block.is_empty() {
                    self.remove_vertex(v);
                    changed = true;
                } else if node.parents.len() == 1 && node.children.len() == 1 {
                    let p = node.parents[0];
                    let c = node.children[0];
                    self.remove_vertex(v);
                    self.add_edge(p, c);
                    changed = true;
                } else if node.parents.is_empty()
                    && node.children.len() == 1
                    && node.block.is_empty()
                {
                    self.remove_vertex(v);
                    changed = true;
                }
            }
            if !changed {
                return changed_any;
            }
            changed_any = true;
        }
    }

    /// Cycles derived from the hybrid vertices. Fails when the cycles are
    /// not vertex-disjoint or a hybrid's two parent chains never meet.
    pub fn cycles(&self) -> Result<Vec<Cycle>, NetworkError> {
        let mut cycles = Vec::new();
        for h in self.alive() {
            if self.nodes[h].parents.len() != 2 {
                continue;
            }
            let chain = |start: VertexId| {
                let mut out = vec![start];
                let mut v = start;
                while self.nodes[v].parents.len() == 1 {
                    v = self.nodes[v].parents[0];
                    out.push(v);
                }
                out
            };
            let c1 = chain(self.nodes[h].parents[0]);
            let c2 = chain(self.nodes[h].parents[1]);
            let set2: HashSet<VertexId> = c2.iter().copied().collect();
            let i1 = c1
                .iter()
                .position(|v| set2.contains(v))
                .ok_or(NetworkError::NotLevelOne)?;
            let root = c1[i1];
            let i2 = c2.iter().position(|&v| v == root).unwrap();
            let side = |c: &[VertexId], i: usize| c[..i].iter().rev().copied().collect();
            cycles.push(Cycle {
                root,
                hybrid: h,
                sides: [side(&c1, i1), side(&c2, i2)],
            });
        }
        let mut owner = vec![usize::MAX; self.nodes.len()];
        for (i, cyc) in cycles.iter().enumerate() {
            for v in cyc.vertices() {
                if owner[v] != usize::MAX {
                    return Err(NetworkError::NotLevelOne);
                }
                owner[v] = i;
            }
        }
        Ok(cycles)
    }

    pub fn is_level_one(&self) -> bool {
        self.cycles().is_ok()
    }

    fn membership(&self, cycles: &[Cycle]) -> Vec<Option<usize>> {
        let mut member = vec![None; self.nodes.len()];
        for (i, c) in cycles.iter().enumerate() {
            for v in c.vertices() {
                member[v] = Some(i);
            }
        }
        member
    }

    fn topological_order(&self) -> Vec<VertexId> {
        let mut indeg: Vec<usize> = self.nodes.iter().map(|n| n.parents.len()).collect();
        let mut queue: VecDeque<VertexId> = self
            .alive()
            .filter(|&v| self.nodes[v].parents.is_empty())
            .collect();
        let mut order = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.nodes[v].children {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        order
    }

    /// One pass of the canonicalization: collapse equal-label edges inside a
    /// cycle or outside all cycles, split overfull cycle vertices, drop
    /// root-hybrid chords, then normalize. Returns whether anything changed.
    fn transform_pass(&mut self) -> bool {
        let mut changed = self.normalize();
        let cycles = self.cycles().expect("transform keeps the network level-1");
        let member = self.membership(&cycles);

        let mut merged: Vec<VertexId> = (0..self.nodes.len()).collect();
        fn find(merged: &mut [VertexId], mut v: VertexId) -> VertexId {
            while merged[v] != v {
                merged[v] = merged[merged[v]];
                v = merged[v];
            }
            v
        }
        let mut collapse = Vec::new();
        for v in self.topological_order() {
            let node = &self.nodes[v];
            if node.parents.len() != 1 || node.label.is_none() {
                continue;
            }
            let u = node.parents[0];
            if self.nodes[u].label != node.label {
                continue;
            }
            let same_cycle = member[u].is_some() && member[u] == member[v];
            let outside = member[u].is_none() && member[v].is_none();
            if same_cycle || outside {
                collapse.push((u, v));
            }
        }
        for (u, v) in collapse {
            let top = find(&mut merged, u);
            self.contract(top, v);
            merged[v] = top;
            changed = true;
        }
        if self.normalize() {
            changed = true;
        }

        let cycles = self.cycles().expect("transform keeps the network level-1");
        for cyc in &cycles {
            let mut overfull = Vec::new();
            if self.nodes[cyc.root].children.len() > 2 {
                overfull.push(cyc.root);
            }
            for side in &cyc.sides {
                for &v in side {
                    if self.nodes[v].children.len() > 2 {
                        overfull.push(v);
                    }
                }
            }
            for v in overfull {
                let inside = cyc.cycle_children(v);
                let label = self.nodes[v].label;
                let w = self.add_interior(label);
                let moved: Vec<VertexId> = if v == cyc.root {
                    inside.clone()
                } else {
                    self.nodes[v]
                        .children
                        .iter()
                        .copied()
                        .filter(|c| !inside.contains(c))
                        .collect()
                };
                for c in moved {
                    self.remove_edge(v, c);
                    self.add_edge(w, c);
                }
                self.add_edge(v, w);
                changed = true;
            }
        }

        let cycles = self.cycles().expect("transform keeps the network level-1");
        for cyc in &cycles {
            if cyc.sides.iter().any(|s| s.is_empty()) {
                self.remove_edge(cyc.root, cyc.hybrid);
                changed = true;
            }
        }
        if self.normalize() {
            changed = true;
        }
        changed
    }

    /// Validates the draft and freezes it.
    pub fn finish(self) -> Result<LabelledNetwork, NetworkError> {
        LabelledNetwork::from_draft(self)
    }
}

/// Validated labelled level-1 network.
#[derive(Clone, Debug)]
pub struct LabelledNetwork {
    taxa: TaxonSet,
    symbols: SymbolAlphabet,
    nodes: Vec<Node>,
    root: VertexId,
    cycles: Vec<Cycle>,
    cycle_of: Vec<Option<usize>>,
    offspring: Vec<FixedBitSet>,
    leaf_of: Vec<VertexId>,
}

/// First structural witness that a predicate fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Edge(VertexId, VertexId),
    Vertex(VertexId),
    Cycle(usize),
}

/// Read-only description of one cycle and the taxa hanging from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleView {
    pub root: VertexId,
    pub hybrid: VertexId,
    pub sides: [Vec<VertexId>; 2],
    /// Taxa below the cycle root.
    pub below_root: Vec<Taxon>,
    /// Taxa below the hybrid.
    pub below_hybrid: Vec<Taxon>,
    /// For every taxon below the root but not below the hybrid, its last
    /// ancestor on the cycle.
    pub attachment: BTreeMap<Taxon, VertexId>,
}

impl LabelledNetwork {
    fn from_draft(draft: NetworkDraft) -> Result<Self, NetworkError> {
        let NetworkDraft {
            taxa,
            symbols,
            nodes: raw,
        } = draft;
        let mut remap = vec![usize::MAX; raw.len()];
        let mut nodes = Vec::new();
        for (old, node) in raw.iter().enumerate() {
            if node.alive {
                remap[old] = nodes.len();
                nodes.push(node.clone());
            }
        }
        for node in nodes.iter_mut() {
            node.parents = node.parents.iter().map(|&p| remap[p]).collect();
            node.children = node.children.iter().map(|&c| remap[c]).collect();
            debug_assert!(node
                .parents
                .iter()
                .chain(&node.children)
                .all(|&v| v != usize::MAX));
        }
        let draft = NetworkDraft {
            taxa,
            symbols,
            nodes,
        };

        let roots: Vec<VertexId> = draft
            .alive()
            .filter(|&v| draft.nodes[v].parents.is_empty())
            .collect();
        if roots.len() != 1 {
            return Err(NetworkError::NotRooted(roots.len()));
        }
        let root = roots[0];
        for (v, node) in draft.nodes.iter().enumerate() {
            let mut seen = HashSet::new();
            for &c in &node.children {
                if c == v {
                    return Err(NetworkError::SelfLoop(v));
                }
                if !seen.insert(c) {
                    return Err(NetworkError::ParallelEdge(v, c));
                }
            }
        }
        let order = draft.topological_order();
        if order.len() != draft.nodes.len() {
            return Err(NetworkError::NotAcyclic);
        }
        for (v, node) in draft.nodes.iter().enumerate() {
            let (indeg, outdeg) = (node.parents.len(), node.children.len());
            if indeg > 2 {
                return Err(NetworkError::TooManyParents(v));
            }
            if outdeg == 0 {
                if node.block.is_empty() {
                    return Err(NetworkError::EmptyLeaf(v));
                }
                if indeg == 2 {
                    return Err(NetworkError::HybridLeaf(v));
                }
                if node.label.is_some() {
                    return Err(NetworkError::LabelOnLeaf(v));
                }
                continue;
            }
            if !node.block.is_empty() {
                return Err(NetworkError::TaxaOnInterior(v));
            }
            if indeg == 1 && outdeg == 1 {
                return Err(NetworkError::DegreeTwo(v));
            }
            if indeg == 2 {
                if outdeg != 1 {
                    return Err(NetworkError::HybridOutdegree(v));
                }
                if node.label.is_some() {
                    return Err(NetworkError::LabelOnHybrid(v));
                }
            } else {
                match node.label {
                    None => return Err(NetworkError::MissingLabel(v)),
                    Some(s) if s.index() >= draft.symbols.len() => {
                        return Err(NetworkError::UnknownLabel(v))
                    }
                    _ => {}
                }
            }
        }
        let n = draft.taxa.len();
        let mut leaf_of = vec![usize::MAX; n];
        for (v, node) in draft.nodes.iter().enumerate() {
            for &t in &node.block {
                if t >= n {
                    return Err(NetworkError::BlocksNotPartition(format!(
                        "taxon index {t} out of range"
                    )));
                }
                if leaf_of[t] != usize::MAX {
                    return Err(NetworkError::BlocksNotPartition(format!(
                        "taxon {:?} appears twice",
                        draft.taxa.name(t)
                    )));
                }
                leaf_of[t] = v;
            }
        }
        if let Some(t) = leaf_of.iter().position(|&v| v == usize::MAX) {
            return Err(NetworkError::BlocksNotPartition(format!(
                "taxon {:?} missing",
                draft.taxa.name(t)
            )));
        }
        let cycles = draft.cycles()?;
        let cycle_of = draft.membership(&cycles);

        let mut offspring = vec![FixedBitSet::with_capacity(n); draft.nodes.len()];
        for &v in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            for &t in &draft.nodes[v].block {
                set.insert(t);
            }
            for &c in &draft.nodes[v].children {
                set.union_with(&offspring[c]);
            }
            offspring[v] = set;
        }

        Ok(LabelledNetwork {
            taxa: draft.taxa,
            symbols: draft.symbols,
            nodes: draft.nodes,
            root,
            cycles,
            cycle_of,
            offspring,
            leaf_of,
        })
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn symbols(&self) -> &SymbolAlphabet {
        &self.symbols
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).sum()
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.nodes[v].children
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.nodes[v].parents
    }

    pub fn label(&self, v: VertexId) -> Option<Symbol> {
        self.nodes[v].label
    }

    pub fn block(&self, v: VertexId) -> &[Taxon] {
        &self.nodes[v].block
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.nodes[v].children.is_empty()
    }

    pub fn is_hybrid(&self, v: VertexId) -> bool {
        self.nodes[v].parents.len() == 2
    }

    /// Leaf vertex holding `taxon`.
    pub fn leaf_of(&self, taxon: Taxon) -> VertexId {
        self.leaf_of[taxon]
    }

    pub fn offspring(&self, v: VertexId) -> &FixedBitSet {
        &self.offspring[v]
    }

    pub fn offspring_taxa(&self, v: VertexId) -> Vec<Taxon> {
        self.offspring[v].ones().collect()
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn cycle_of(&self, v: VertexId) -> Option<usize> {
        self.cycle_of[v]
    }

    pub fn has_singleton_leaves(&self) -> bool {
        self.nodes
            .iter()
            .all(|n| !n.children.is_empty() || n.block.len() == 1)
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].children.is_empty())
    }

    fn descend_to_lca(&self, subset: &[Taxon]) -> VertexId {
        let mut v = self.root;
        'descend: loop {
            for &c in &self.nodes[v].children {
                let off = &self.offspring[c];
                if subset.iter().all(|&t| off.contains(t)) {
                    v = c;
                    continue 'descend;
                }
            }
            return v;
        }
    }

    /// Lowest common ancestor of at least two taxa: the unique vertex whose
    /// offspring contains `subset` while no child's offspring does.
    pub fn lca(&self, subset: &[Taxon]) -> Result<VertexId, NetworkError> {
        if subset.len() < 2 {
            return Err(NetworkError::SubsetTooSmall(subset.len()));
        }
        if let Some(&t) = subset.iter().find(|&&t| t >= self.taxa.len()) {
            return Err(NetworkError::UnknownTaxon(format!("#{t}")));
        }
        Ok(self.descend_to_lca(subset))
    }

    /// The symbolic 3-dissimilarity induced by the labels: every 2- and
    /// 3-subset maps to the label of its lowest common ancestor.
    pub fn induce(&self) -> Result<Sym3Dissimilarity, NetworkError> {
        if let Some(v) = self.leaves().find(|&v| self.nodes[v].block.len() != 1) {
            return Err(NetworkError::CompoundLeaf(v));
        }
        // A lowest common ancestor always has two or more children, so it is
        // never a hybrid and always carries a label.
        Ok(Sym3Dissimilarity::from_fn(
            self.taxa.clone(),
            self.symbols.clone(),
            |subset| {
                let v = self.descend_to_lca(subset);
                self.nodes[v].label.expect("lca is labelled")
            },
        ))
    }

    pub fn cycle_view(&self, index: usize) -> CycleView {
        let cyc = &self.cycles[index];
        let mut attachment = BTreeMap::new();
        let attach_vertices = std::iter::once(cyc.root)
            .chain(cyc.sides[0].iter().copied())
            .chain(cyc.sides[1].iter().copied());
        for v in attach_vertices {
            let inside = cyc.cycle_children(v);
            for &c in &self.nodes[v].children {
                if !inside.contains(&c) {
                    for t in self.offspring[c].ones() {
                        attachment.insert(t, v);
                    }
                }
            }
        }
        CycleView {
            root: cyc.root,
            hybrid: cyc.hybrid,
            sides: cyc.sides.clone(),
            below_root: self.offspring_taxa(cyc.root),
            below_hybrid: self.offspring_taxa(cyc.hybrid),
            attachment,
        }
    }

    /// Taxa hanging directly (through non-cycle children) from a side vertex.
    fn pendant_taxa(&self, cyc: &Cycle, v: VertexId) -> Vec<Taxon> {
        let inside = cyc.cycle_children(v);
        let mut out: Vec<Taxon> = self.nodes[v]
            .children
            .iter()
            .filter(|c| !inside.contains(c))
            .flat_map(|&c| self.offspring[c].ones())
            .collect();
        out.sort_unstable();
        out
    }

    /// A cycle is weakly labelled when each side has a vertex whose label
    /// differs from the cycle root's label.
    pub fn weakly_labelled_cycle(&self, index: usize) -> bool {
        let cyc = &self.cycles[index];
        let root_label = self.nodes[cyc.root].label;
        cyc.sides
            .iter()
            .all(|side| side.iter().any(|&v| self.nodes[v].label != root_label))
    }

    /// A tricycle `x||yz` certifying that the cycle is weakly labelled:
    /// `x` below the hybrid, `y` and `z` hanging from the topmost vertex of
    /// each side whose label differs from the root's.
    pub fn tricycle_witness(&self, index: usize) -> Option<(Taxon, Taxon, Taxon)> {
        if !self.weakly_labelled_cycle(index) {
            return None;
        }
        let cyc = &self.cycles[index];
        let root_label = self.nodes[cyc.root].label;
        let x = self.offspring[cyc.hybrid].ones().next()?;
        let mut ends = Vec::with_capacity(2);
        for side in &cyc.sides {
            let v = *side
                .iter()
                .find(|&&v| self.nodes[v].label != root_label)
                .expect("weakly labelled");
            ends.push(self.pendant_taxa(cyc, v)[0]);
        }
        ends.sort_unstable();
        Some((x, ends[0], ends[1]))
    }

    pub fn weakly_labelled_cycle_count(&self) -> usize {
        (0..self.cycles.len())
            .filter(|&i| self.weakly_labelled_cycle(i))
            .count()
    }

    pub fn is_level_one(&self) -> bool {
        NetworkDraft::from_network(self).is_level_one()
    }

    /// No equal-label edge, except edges with exactly one end on some cycle.
    pub fn semi_discriminating_violation(&self) -> Option<Violation> {
        for u in 0..self.nodes.len() {
            let Some(lu) = self.nodes[u].label else {
                continue;
            };
            for &v in &self.nodes[u].children {
                if self.nodes[v].label != Some(lu) {
                    continue;
                }
                let crosses = match (self.cycle_of[u], self.cycle_of[v]) {
                    (Some(a), Some(b)) => a != b,
                    (None, None) => false,
                    _ => true,
                };
                if !crosses {
                    return Some(Violation::Edge(u, v));
                }
            }
        }
        None
    }

    pub fn is_semi_discriminating(&self) -> bool {
        self.semi_discriminating_violation().is_none()
    }

    /// Every cycle vertex has degree three. The cycle root counts as having
    /// a parent edge even when it is the root of the network, so it must
    /// have exactly its two cycle children.
    pub fn partially_resolved_violation(&self) -> Option<Violation> {
        for cyc in &self.cycles {
            if self.nodes[cyc.root].children.len() != 2 {
                return Some(Violation::Vertex(cyc.root));
            }
            if self.nodes[cyc.hybrid].children.len() != 1 {
                return Some(Violation::Vertex(cyc.hybrid));
            }
            for side in &cyc.sides {
                for &v in side {
                    if self.nodes[v].children.len() != 2 {
                        return Some(Violation::Vertex(v));
                    }
                }
            }
        }
        None
    }

    pub fn is_partially_resolved(&self) -> bool {
        self.partially_resolved_violation().is_none()
    }

    pub fn weakly_labelled_violation(&self) -> Option<Violation> {
        (0..self.cycles.len())
            .find(|&i| !self.weakly_labelled_cycle(i))
            .map(Violation::Cycle)
    }

    pub fn is_weakly_labelled(&self) -> bool {
        self.weakly_labelled_violation().is_none()
    }

    /// Partially resolved with a single cycle carrying every non-leaf vertex.
    pub fn is_simple(&self) -> bool {
        self.cycles.len() == 1
            && self.is_partially_resolved()
            && (0..self.nodes.len()).all(|v| self.is_leaf(v) || self.cycle_of[v].is_some())
    }

    /// Restriction to the taxa in `subset`: other leaves are deleted,
    /// dead ends and degree-2 vertices suppressed, and the result is passed
    /// through [`LabelledNetwork::transform`].
    pub fn restrict(&self, subset: &[Taxon]) -> Result<LabelledNetwork, NetworkError> {
        let mut keep = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&t) = keep.iter().find(|&&t| t >= self.taxa.len()) {
            return Err(NetworkError::UnknownTaxon(format!("#{t}")));
        }
        if keep.len() < 3 {
            return Err(NetworkError::SubsetTooSmall(keep.len()));
        }
        if let Some(v) = self.leaves().find(|&v| self.nodes[v].block.len() != 1) {
            return Err(NetworkError::CompoundLeaf(v));
        }
        let mut local = vec![usize::MAX; self.taxa.len()];
        for (i, &t) in keep.iter().enumerate() {
            local[t] = i;
        }
        let mut draft = NetworkDraft::from_network(self);
        draft.taxa = self.taxa.subset(&keep);
        for v in 0..draft.nodes.len() {
            if let [t] = draft.nodes[v].block[..] {
                if local[t] == usize::MAX {
                    draft.remove_vertex(v);
                } else {
                    draft.nodes[v].block = vec![local[t]];
                }
            }
        }
        draft.normalize();
        Ok(draft.finish()?.transform())
    }

    pub fn restrict_names<S: AsRef<str>>(
        &self,
        names: &[S],
    ) -> Result<LabelledNetwork, NetworkError> {
        let subset = names
            .iter()
            .map(|n| {
                self.taxa
                    .get(n.as_ref())
                    .ok_or_else(|| NetworkError::UnknownTaxon(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.restrict(&subset)
    }

    /// Rewrites the network into the equivalent semi-discriminating, weakly
    /// labelled, partially resolved network inducing the same dissimilarity.
    pub fn transform(&self) -> LabelledNetwork {
        let mut draft = NetworkDraft::from_network(self);
        let bound = {
            let v = self.nodes.len() + 4;
            v * v
        };
        let mut passes = 0;
        while draft.transform_pass() {
            passes += 1;
            assert!(passes <= bound, "transform failed to converge");
        }
        let out = draft.finish().expect("transform preserves validity");
        debug_assert!(out.is_semi_discriminating());
        debug_assert!(out.is_weakly_labelled());
        debug_assert!(out.is_partially_resolved());
        out
    }

    fn encode(&self, v: VertexId, labels: bool, out: &mut String) {
        let node = &self.nodes[v];
        if node.children.is_empty() {
            let mut names: Vec<&str> = node.block.iter().map(|&t| self.taxa.name(t)).collect();
            names.sort_unstable();
            out.push('<');
            for name in names {
                out.push_str(&format!("{}:{}", name.len(), name));
            }
            out.push('>');
            return;
        }
        let label = |out: &mut String, u: VertexId| {
            if labels {
                if let Some(s) = self.nodes[u].label {
                    let name = self.symbols.name(s);
                    out.push_str(&format!("{}:{}", name.len(), name));
                }
            }
        };
        label(out, v);
        let cycle = self.cycle_of[v]
            .map(|i| &self.cycles[i])
            .filter(|c| c.root == v);
        let inside = cycle.map(|c| c.cycle_children(v)).unwrap_or_default();
        let mut parts: Vec<String> = node
            .children
            .iter()
            .filter(|c| !inside.contains(c))
            .map(|&c| {
                let mut s = String::new();
                self.encode(c, labels, &mut s);
                s
            })
            .collect();
        parts.sort_unstable();
        out.push('(');
        out.push_str(&parts.join(","));
        if let Some(cyc) = cycle {
            let mut sides: Vec<String> = cyc
                .sides
                .iter()
                .map(|side| {
                    let mut s = String::from("[");
                    for &u in side {
                        s.push('{');
                        label(&mut s, u);
                        let mut pend: Vec<String> = self.nodes[u]
                            .children
                            .iter()
                            .filter(|c| !cyc.cycle_children(u).contains(c))
                            .map(|&c| {
                                let mut p = String::new();
                                self.encode(c, labels, &mut p);
                                p
                            })
                            .collect();
                        pend.sort_unstable();
                        s.push_str(&pend.join(","));
                        s.push('}');
                    }
                    s.push(']');
                    s
                })
                .collect();
            sides.sort_unstable();
            out.push_str("|cycle");
            out.push_str(&sides.join(""));
            out.push_str("->");
            let h_child = self.nodes[cyc.hybrid].children[0];
            self.encode(h_child, labels, out);
        }
        out.push(')');
    }

    /// Canonical string of the underlying digraph with leaves named by
    /// their taxa. Equal strings mean a leaf-preserving digraph isomorphism
    /// exists.
    pub fn canonical_structure(&self) -> String {
        let mut s = String::new();
        self.encode(self.root, false, &mut s);
        s
    }

    /// Canonical string including vertex labels.
    pub fn canonical_form(&self) -> String {
        let mut s = String::new();
        self.encode(self.root, true, &mut s);
        s
    }

    /// Isomorphic as labelled networks: a leaf-preserving digraph
    /// isomorphism exists and both networks induce the same dissimilarity.
    pub fn isomorphic(&self, other: &LabelledNetwork) -> bool {
        if self.canonical_structure() != other.canonical_structure() {
            return false;
        }
        match (self.induce(), other.induce()) {
            (Ok(a), Ok(b)) => a.same_values(&b),
            _ => self.canonical_form() == other.canonical_form(),
        }
    }
}

impl fmt::Display for LabelledNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_network(self))
    }
}
