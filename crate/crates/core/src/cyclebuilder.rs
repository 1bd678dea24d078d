//! TopDown and CheckLabels graphs, and reconstruction of one simple cycle
//! from a component of the tricycle graph.

use std::collections::BTreeSet;

use crate::dissim::{Sym3Dissimilarity, Symbol, Taxon};
use crate::network::{NetworkDraft, VertexId};
use crate::property::{NotRepresentable, Property};
use crate::trinet::{is_tricycle, is_triplet, CyclePair, Tricycle};

/// Simple directed graph on a set of integer vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    vertices: Vec<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertices: Vec<usize>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        let edges = edges.into_iter().filter(|(u, v)| u != v).collect();
        Digraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((u, 0)..=(u, usize::MAX)).map(|&(_, v)| v)
    }

    /// Vertices reachable from `u` by a non-empty directed path.
    pub fn reachable_from(&self, u: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = self.successors(u).collect();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(self.successors(v));
            }
        }
        seen
    }

    /// Some directed cycle, found by depth-first search.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let idx = |v: usize| self.vertices.binary_search(&v).unwrap();
        let mut mark = vec![Mark::New; self.vertices.len()];
        for &s in &self.vertices {
            if mark[idx(s)] != Mark::New {
                continue;
            }
            let mut path = vec![s];
            let mut iters = vec![self.successors(s).collect::<Vec<_>>().into_iter()];
            mark[idx(s)] = Mark::Open;
            while let Some(it) = iters.last_mut() {
                match it.next() {
                    Some(v) => match mark[idx(v)] {
                        Mark::Open => {
                            let start = path.iter().position(|&p| p == v).unwrap();
                            return Some(path[start..].to_vec());
                        }
                        Mark::New => {
                            mark[idx(v)] = Mark::Open;
                            path.push(v);
                            iters.push(self.successors(v).collect::<Vec<_>>().into_iter());
                        }
                        Mark::Done => {}
                    },
                    None => {
                        let v = path.pop().unwrap();
                        mark[idx(v)] = Mark::Done;
                        iters.pop();
                    }
                }
            }
        }
        None
    }
}

/// `TD(S, x)`: edge `(u, v)` whenever `u|v x` is a δ-triplet.
pub fn topdown(delta: &Sym3Dissimilarity, s: &[Taxon], x: Taxon) -> Digraph {
    let mut edges = Vec::new();
    for &u in s {
        for &v in s {
            if u != v && is_triplet(delta, u, v, x) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(s.to_vec(), edges)
}

/// Result of repeatedly deleting all vertices of indegree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeling {
    pub layers: Vec<Vec<usize>>,
    pub residual: Digraph,
}

pub fn strip_sources(g: &Digraph) -> Peeling {
    let idx = |v: usize| g.vertices.binary_search(&v).unwrap();
    let mut indeg = vec![0usize; g.vertices.len()];
    for &(_, b) in &g.edges {
        indeg[idx(b)] += 1;
    }
    let mut removed = vec![false; g.vertices.len()];
    let mut layer: Vec<usize> = g
        .vertices
        .iter()
        .copied()
        .filter(|&v| indeg[idx(v)] == 0)
        .collect();
    let mut layers = Vec::new();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &v in &layer {
            removed[idx(v)] = true;
            for w in g.successors(v) {
                let i = idx(w);
                indeg[i] -= 1;
                if indeg[i] == 0 {
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        layers.push(std::mem::replace(&mut layer, next));
    }
    let remaining: Vec<usize> = g
        .vertices
        .iter()
        .copied()
        .filter(|&v| !removed[idx(v)])
        .collect();
    let residual = Digraph::new(
        remaining.clone(),
        g.edges
            .iter()
            .copied()
            .filter(|(a, b)| !removed[idx(*a)] && !removed[idx(*b)]),
    );
    Peeling { layers, residual }
}

/// The CheckLabels graph on three disjoint taxon sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLabelsGraph {
    pub y0: Vec<Taxon>,
    pub y1: Vec<Taxon>,
    pub y2: Vec<Taxon>,
    /// Edges between `y1` and `y2` with their labels.
    pub undirected: Vec<(Taxon, Taxon, Symbol)>,
    /// Edges from `y1 ∪ y2` into `y0`, and within `y1` or `y2` along
    /// TopDown paths, with their labels.
    pub directed: Vec<(Taxon, Taxon, Symbol)>,
}

/// Builds the CheckLabels graph, taking TopDown graphs relative to the
/// smallest taxon of `y0`.
pub fn checklabels(
    delta: &Sym3Dissimilarity,
    y0: &[Taxon],
    y1: &[Taxon],
    y2: &[Taxon],
) -> CheckLabelsGraph {
    let anchor = y0.iter().copied().min();
    checklabels_at(delta, y0, y1, y2, anchor)
}

/// Builds the CheckLabels graph with TopDown graphs taken relative to
/// `anchor`.
pub fn checklabels_at(
    delta: &Sym3Dissimilarity,
    y0: &[Taxon],
    y1: &[Taxon],
    y2: &[Taxon],
    anchor: Option<Taxon>,
) -> CheckLabelsGraph {
    let mut undirected = Vec::new();
    for &u in y1 {
        for &v in y2 {
            if u != v {
                undirected.push((u, v, delta.pair(u, v)));
            }
        }
    }
    let mut directed = Vec::new();
    for side in [y1, y2] {
        let td = anchor.map(|x| topdown(delta, side, x));
        for &u in side {
            for &v in y0 {
                if u != v {
                    directed.push((u, v, delta.pair(u, v)));
                }
            }
            if let Some(td) = &td {
                for v in td.reachable_from(u) {
                    if v != u {
                        directed.push((u, v, delta.pair(u, v)));
                    }
                }
            }
        }
    }
    CheckLabelsGraph {
        y0: y0.to_vec(),
        y1: y1.to_vec(),
        y2: y2.to_vec(),
        undirected,
        directed,
    }
}

impl CheckLabelsGraph {
    /// Two undirected edges with different labels.
    pub fn undirected_violation(&self) -> Option<[Taxon; 4]> {
        let (a, b, l) = *self.undirected.first()?;
        self.undirected
            .iter()
            .find(|e| e.2 != l)
            .map(|&(c, d, _)| [a, b, c, d])
    }

    /// A tail with two outgoing directed edges of different labels.
    pub fn directed_violation(&self) -> Option<[Taxon; 3]> {
        for (i, &(u, v, l)) in self.directed.iter().enumerate() {
            if let Some(&(_, w, _)) = self.directed[i + 1..].iter().find(|e| e.0 == u && e.2 != l) {
                return Some([u, v, w]);
            }
        }
        None
    }
}

/// One vertex on a side of a simple cycle and the block hanging from it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SideVertex {
    pub label: Symbol,
    pub block: Vec<Taxon>,
}

/// Labelled simple level-1 network on a partition of a taxon subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCycle {
    pub root_label: Symbol,
    /// Side vertices from the root downwards.
    pub sides: [Vec<SideVertex>; 2],
    pub hybrid_block: Vec<Taxon>,
}

impl SimpleCycle {
    /// All taxa of the cycle, sorted.
    pub fn leaves(&self) -> Vec<Taxon> {
        let mut out = self.hybrid_block.clone();
        for side in &self.sides {
            for sv in side {
                out.extend(&sv.block);
            }
        }
        out.sort_unstable();
        out
    }

    /// The same cycle with its sides in a canonical order.
    pub fn normalized(&self) -> SimpleCycle {
        let mut c = self.clone();
        if c.sides[0] > c.sides[1] {
            c.sides.swap(0, 1);
        }
        c
    }

    /// Adds the cycle to `draft`. Returns the cycle root and all new leaves.
    pub fn graft(&self, draft: &mut NetworkDraft) -> (VertexId, Vec<VertexId>) {
        let root = draft.add_interior(Some(self.root_label));
        let hybrid = draft.add_interior(None);
        let hleaf = draft.add_leaf(self.hybrid_block.clone());
        draft.add_edge(hybrid, hleaf);
        let mut leaves = vec![hleaf];
        for side in &self.sides {
            let mut prev = root;
            for sv in side {
                let v = draft.add_interior(Some(sv.label));
                draft.add_edge(prev, v);
                let leaf = draft.add_leaf(sv.block.clone());
                draft.add_edge(v, leaf);
                leaves.push(leaf);
                prev = v;
            }
            draft.add_edge(prev, hybrid);
        }
        (root, leaves)
    }
}

/// The sets computed by the cycle builder for one tricycle choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSets {
    pub choice: Tricycle,
    pub hybrids: Vec<Taxon>,
    /// Value of the chosen tricycle's 3-subset, the cycle root's label.
    pub root_label: Symbol,
    /// Side seeds `S'_y`, `S'_z` inside the component's region.
    pub seeds: [Vec<Taxon>; 2],
    /// Seeds extended by taxa outside the region lying below a seed.
    pub sides: [Vec<Taxon>; 2],
}

impl CycleSets {
    /// `H ∪ S_y ∪ S_z`, sorted.
    pub fn region(&self) -> Vec<Taxon> {
        let mut r: Vec<Taxon> = self
            .hybrids
            .iter()
            .chain(&self.sides[0])
            .chain(&self.sides[1])
            .copied()
            .collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn x(&self) -> Taxon {
        self.choice.hybrid
    }
}

/// Tricycles of the component usable as the starting choice: hybrid in
/// `H`, both other leaves outside `H`. Lexicographic order.
pub fn valid_choices(pair: &CyclePair) -> Vec<Tricycle> {
    pair.tricycles
        .iter()
        .copied()
        .filter(|t| {
            pair.hybrids.binary_search(&t.hybrid).is_ok()
                && t.ends
                    .iter()
                    .all(|e| pair.hybrids.binary_search(e).is_err())
        })
        .collect()
}

pub fn cycle_sets(delta: &Sym3Dissimilarity, pair: &CyclePair, choice: Tricycle) -> CycleSets {
    let x = choice.hybrid;
    let [y, z] = choice.ends;
    let seeds = [
        pair.region
            .iter()
            .copied()
            .filter(|&u| is_tricycle(delta, x, u, z))
            .collect::<Vec<_>>(),
        pair.region
            .iter()
            .copied()
            .filter(|&u| is_tricycle(delta, x, y, u))
            .collect::<Vec<_>>(),
    ];
    let sides = seeds.clone().map(|seed| {
        let mut side = seed.clone();
        for u in 0..delta.n() {
            if pair.region.binary_search(&u).is_err()
                && seed.iter().any(|&s| is_triplet(delta, s, u, x))
            {
                side.push(u);
            }
        }
        side.sort_unstable();
        side
    });
    CycleSets {
        choice,
        hybrids: pair.hybrids.clone(),
        root_label: delta.triple(x, y, z),
        seeds,
        sides,
    }
}

fn reject(property: Property, witness: Vec<Taxon>, reason: &'static str) -> NotRepresentable {
    NotRepresentable::new(property, witness, reason)
}

/// All cross combinations of hybrids and seeds must form tricycles with the
/// root value.
fn check_cross_tricycles(
    delta: &Sym3Dissimilarity,
    sets: &CycleSets,
) -> Result<(), NotRepresentable> {
    for &x1 in &sets.hybrids {
        for &y1 in &sets.seeds[0] {
            for &z1 in &sets.seeds[1] {
                if y1 == z1 || x1 == y1 || x1 == z1 {
                    return Err(reject(
                        Property::P4,
                        vec![x1, y1, z1],
                        "hybrid and side seeds overlap",
                    ));
                }
                if !is_tricycle(delta, x1, y1, z1) {
                    return Err(reject(
                        Property::P4,
                        vec![x1, y1, z1],
                        "hybrid and side seeds do not form a tricycle",
                    ));
                }
                if delta.triple(x1, y1, z1) != sets.root_label {
                    return Err(reject(
                        Property::P3,
                        vec![x1, y1, z1],
                        "tricycles of one cycle carry different values",
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every tricycle of the component has its hybrid in `H` and one end on
/// each side.
pub fn placement_violation(pair: &CyclePair, sets: &CycleSets) -> Option<Vec<Taxon>> {
    let on = |i: usize, t: Taxon| sets.sides[i].binary_search(&t).is_ok();
    pair.tricycles
        .iter()
        .find(|t| {
            let [a, b] = t.ends;
            sets.hybrids.binary_search(&t.hybrid).is_err()
                || !((on(0, a) && on(1, b)) || (on(1, a) && on(0, b)))
        })
        .map(|t| vec![t.hybrid, t.ends[0], t.ends[1]])
}

/// Seeds are the side taxa whose value towards the hybrid differs from the
/// root value, and hybrids and sides are pairwise disjoint.
pub fn side_set_violation(delta: &Sym3Dissimilarity, sets: &CycleSets) -> Option<Vec<Taxon>> {
    let x = sets.x();
    let [y, z] = sets.choice.ends;
    let t = delta.pair(y, z);
    for i in 0..2 {
        for &u in &sets.sides[i] {
            let differs = delta.pair(u, x) != t;
            let seeded = sets.seeds[i].binary_search(&u).is_ok();
            if differs != seeded {
                return Some(vec![x, y, z, u]);
            }
        }
        if let Some(&u) = sets.seeds[i]
            .iter()
            .find(|u| sets.sides[i].binary_search(u).is_err())
        {
            return Some(vec![x, y, z, u]);
        }
        if let Some(&u) = sets.sides[i]
            .iter()
            .find(|u| sets.hybrids.binary_search(u).is_ok())
        {
            return Some(vec![x, u]);
        }
    }
    if let Some(&u) = sets.sides[0]
        .iter()
        .find(|u| sets.sides[1].binary_search(u).is_ok())
    {
        return Some(vec![x, y, z, u]);
    }
    None
}

/// Two taxa on different sides whose value differs from the root value.
pub fn cross_value_violation(delta: &Sym3Dissimilarity, sets: &CycleSets) -> Option<Vec<Taxon>> {
    for &u1 in &sets.sides[0] {
        for &u2 in &sets.sides[1] {
            if u1 != u2 && delta.pair(u1, u2) != sets.root_label {
                return Some(vec![u1, u2]);
            }
        }
    }
    None
}

/// TopDown graphs of a side disagree between two hybrids, or contain a
/// directed cycle.
pub fn topdown_violation(
    delta: &Sym3Dissimilarity,
    sets: &CycleSets,
    side: usize,
) -> Option<Vec<Taxon>> {
    let x = sets.x();
    let s = &sets.sides[side];
    let g = topdown(delta, s, x);
    for &x1 in &sets.hybrids {
        if x1 == x {
            continue;
        }
        let g1 = topdown(delta, s, x1);
        if let Some(&(u, v)) = g.edges().symmetric_difference(g1.edges()).next() {
            return Some(vec![x, x1, u, v]);
        }
    }
    g.find_cycle().map(|mut c| {
        c.insert(0, x);
        c
    })
}

/// Peels one side into its layers, checking that every layer sees one
/// value towards the hybrids and all lower taxa.
fn peel_side(
    delta: &Sym3Dissimilarity,
    sets: &CycleSets,
    side: usize,
) -> Result<Vec<SideVertex>, NotRepresentable> {
    let x = sets.x();
    let g = topdown(delta, &sets.sides[side], x);
    let peeling = strip_sources(&g);
    debug_assert!(peeling.residual.vertices().is_empty());
    let mut out = Vec::with_capacity(peeling.layers.len());
    for (k, layer) in peeling.layers.iter().enumerate() {
        let u0 = layer[0];
        let label = delta.pair(x, u0);
        let below = peeling.layers[k + 1..].iter().flatten();
        let targets: Vec<Taxon> = sets.hybrids.iter().chain(below).copied().collect();
        for &u in layer {
            for &t in &targets {
                if delta.pair(u, t) != label {
                    return Err(reject(
                        Property::P8,
                        vec![u0, x, u, t],
                        "side block sees different values below it",
                    ));
                }
            }
        }
        out.push(SideVertex {
            label,
            block: layer.clone(),
        });
    }
    Ok(out)
}

/// Builds the cycle for the given starting tricycle.
pub fn build_cycle_with_choice(
    delta: &Sym3Dissimilarity,
    pair: &CyclePair,
    choice: Tricycle,
) -> Result<SimpleCycle, NotRepresentable> {
    let sets = cycle_sets(delta, pair, choice);
    check_cross_tricycles(delta, &sets)?;
    if let Some(t) = pair
        .tricycles
        .iter()
        .find(|t| delta.triple(t.hybrid, t.ends[0], t.ends[1]) != sets.root_label)
    {
        return Err(reject(
            Property::P3,
            vec![t.hybrid, t.ends[0], t.ends[1]],
            "tricycles of one cycle carry different values",
        ));
    }
    if let Some(w) = placement_violation(pair, &sets) {
        return Err(reject(
            Property::P4,
            w,
            "a tricycle of the component does not straddle the two sides",
        ));
    }
    if let Some(w) = side_set_violation(delta, &sets) {
        return Err(reject(Property::P4, w, "side sets are inconsistent"));
    }
    if let Some(w) = cross_value_violation(delta, &sets) {
        return Err(reject(
            Property::P7,
            w,
            "taxa on different sides disagree with the root value",
        ));
    }
    for side in 0..2 {
        if let Some(w) = topdown_violation(delta, &sets, side) {
            return Err(reject(
                Property::P6,
                w,
                "TopDown graphs differ between hybrids or are cyclic",
            ));
        }
    }
    let sides = [peel_side(delta, &sets, 0)?, peel_side(delta, &sets, 1)?];
    Ok(SimpleCycle {
        root_label: sets.root_label,
        sides,
        hybrid_block: sets.hybrids.clone(),
    })
}

/// Builds the cycle of one component, starting from the lexicographically
/// smallest usable tricycle.
pub fn build_cycle(
    delta: &Sym3Dissimilarity,
    pair: &CyclePair,
) -> Result<SimpleCycle, NotRepresentable> {
    match valid_choices(pair).first() {
        Some(&choice) => build_cycle_with_choice(delta, pair, choice),
        None => {
            let t = pair.tricycles[0];
            Err(reject(
                Property::P4,
                vec![t.hybrid, t.ends[0], t.ends[1]],
                "no tricycle has its side taxa outside the hybrid set",
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trinet::find_cycles;

    #[test]
    fn worked_cycle() {
        let d = fixtures::worked_dissimilarity();
        let pair = &find_cycles(&d).unwrap()[0];
        let c = build_cycle(&d, pair).unwrap();
        let s = |n| d.symbols().get(n).unwrap();
        assert_eq!(c.root_label, s("A"));
        assert_eq!(c.hybrid_block, vec![0, 2]);
        assert_eq!(
            c.sides,
            [
                vec![SideVertex {
                    label: s("B"),
                    block: vec![1]
                }],
                vec![SideVertex {
                    label: s("C"),
                    block: vec![3]
                }],
            ]
        );
    }

    #[test]
    fn worked_topdown_and_checklabels() {
        let d = fixtures::worked_dissimilarity();
        let td = topdown(&d, &[1], 0);
        assert_eq!(td.vertices(), &[1]);
        assert!(td.edges().is_empty());
        assert!(topdown(&d, &[], 0).vertices().is_empty());

        let s = |n| d.symbols().get(n).unwrap();
        let cl = checklabels(&d, &[0, 2], &[1], &[3]);
        assert_eq!(cl.undirected, vec![(1, 3, s("A"))]);
        assert_eq!(
            cl.directed,
            vec![
                (1, 0, s("B")),
                (1, 2, s("B")),
                (3, 0, s("C")),
                (3, 2, s("C"))
            ]
        );
        assert_eq!(cl.undirected_violation(), None);
        assert_eq!(cl.directed_violation(), None);
        assert!(checklabels(&d, &[0, 2], &[], &[3]).undirected.is_empty());
    }

    #[test]
    fn strip_sources_examples() {
        let chain = Digraph::new(vec![0, 1, 2], [(0, 1), (1, 2)]);
        let p = strip_sources(&chain);
        assert_eq!(p.layers, vec![vec![0], vec![1], vec![2]]);
        assert!(p.residual.vertices().is_empty());

        let tri = Digraph::new(vec![0, 1, 2], [(0, 1), (1, 2), (2, 0)]);
        let p = strip_sources(&tri);
        assert!(p.layers.is_empty());
        assert_eq!(p.residual, tri);
        assert!(tri.find_cycle().is_some());
        assert!(chain.find_cycle().is_none());
    }
}
