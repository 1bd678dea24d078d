//! Trinet classification of 3-subsets, the tricycle graph and cycle
//! detection.

use crate::dissim::{Sym3Dissimilarity, Symbol, Taxon};
use crate::property::{NotRepresentable, Property};

/// Shape of the unique semi-discriminating representation of δ on a
/// 3-subset, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrinetKind {
    Fork,
    /// `apex|bc`: the apex is the outgroup.
    Triplet {
        apex: Taxon,
    },
    /// `hybrid||bc`: the hybrid sits below the cycle's hybrid vertex.
    Tricycle {
        hybrid: Taxon,
    },
    Unrepresentable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Trinet {
    pub taxa: [Taxon; 3],
    pub kind: TrinetKind,
}

/// Classifies the 3-subset `{x, y, z}` by its four values.
pub fn classify(delta: &Sym3Dissimilarity, x: Taxon, y: Taxon, z: Taxon) -> TrinetKind {
    classify_values(
        [x, y, z],
        delta.pair(x, y),
        delta.pair(x, z),
        delta.pair(y, z),
        delta.triple(x, y, z),
    )
}

/// Same as [`classify`] on explicit values `δ(x,y), δ(x,z), δ(y,z), δ(x,y,z)`.
pub fn classify_values(
    [x, y, z]: [Taxon; 3],
    xy: Symbol,
    xz: Symbol,
    yz: Symbol,
    xyz: Symbol,
) -> TrinetKind {
    let hits = [xy == xyz, xz == xyz, yz == xyz];
    match hits {
        [false, false, false] => TrinetKind::Unrepresentable,
        [true, true, true] => TrinetKind::Fork,
        // Two pairs carry the triple value; their common element is the apex.
        [true, true, false] => TrinetKind::Triplet { apex: x },
        [true, false, true] => TrinetKind::Triplet { apex: y },
        [false, true, true] => TrinetKind::Triplet { apex: z },
        // One pair carries the triple value; the third element is the hybrid.
        [false, false, true] => TrinetKind::Tricycle { hybrid: x },
        [false, true, false] => TrinetKind::Tricycle { hybrid: y },
        [true, false, false] => TrinetKind::Tricycle { hybrid: z },
    }
}

pub fn trinet(delta: &Sym3Dissimilarity, x: Taxon, y: Taxon, z: Taxon) -> Trinet {
    Trinet {
        taxa: [x, y, z],
        kind: classify(delta, x, y, z),
    }
}

/// Whether `apex|b c` is a δ-triplet.
pub fn is_triplet(delta: &Sym3Dissimilarity, apex: Taxon, b: Taxon, c: Taxon) -> bool {
    if apex == b || apex == c || b == c {
        return false;
    }
    let t = delta.triple(apex, b, c);
    delta.pair(apex, b) == t && delta.pair(apex, c) == t && delta.pair(b, c) != t
}

/// Whether `hybrid||b c` is a δ-tricycle.
pub fn is_tricycle(delta: &Sym3Dissimilarity, hybrid: Taxon, b: Taxon, c: Taxon) -> bool {
    if hybrid == b || hybrid == c || b == c {
        return false;
    }
    let t = delta.triple(hybrid, b, c);
    delta.pair(b, c) == t && delta.pair(hybrid, b) != t && delta.pair(hybrid, c) != t
}

/// A δ-tricycle `hybrid||ends[0] ends[1]` with `ends[0] < ends[1]`. The
/// derived order is the lexicographic order on `(hybrid, ends)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tricycle {
    pub hybrid: Taxon,
    pub ends: [Taxon; 2],
}

impl Tricycle {
    pub fn new(hybrid: Taxon, a: Taxon, b: Taxon) -> Self {
        Tricycle {
            hybrid,
            ends: [a.min(b), a.max(b)],
        }
    }

    pub fn leaves(&self) -> [Taxon; 3] {
        let mut l = [self.hybrid, self.ends[0], self.ends[1]];
        l.sort_unstable();
        l
    }
}

/// First 3-subset whose triple value differs from all three pair values.
pub fn p1_violation(delta: &Sym3Dissimilarity) -> Option<[Taxon; 3]> {
    let n = delta.n();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if classify(delta, x, y, z) == TrinetKind::Unrepresentable {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

fn all_tricycles(delta: &Sym3Dissimilarity) -> Vec<Tricycle> {
    let n = delta.n();
    let per_x = |x: Taxon| {
        let mut out = Vec::new();
        for y in x + 1..n {
            for z in y + 1..n {
                if let TrinetKind::Tricycle { hybrid } = classify(delta, x, y, z) {
                    let mut others = [x, y, z].into_iter().filter(|&t| t != hybrid);
                    let (a, b) = (others.next().unwrap(), others.next().unwrap());
                    out.push(Tricycle::new(hybrid, a, b));
                }
            }
        }
        out
    };
    #[cfg(feature = "parallel")]
    let mut all: Vec<Tricycle> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().flat_map_iter(per_x).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut all: Vec<Tricycle> = (0..n).flat_map(per_x).collect();
    all.sort_unstable();
    all
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The graph whose vertices are the δ-tricycles, two tricycles being
/// adjacent when they share exactly two leaves.
#[derive(Clone, Debug)]
pub struct TricycleGraph {
    /// Tricycles in lexicographic order.
    pub tricycles: Vec<Tricycle>,
    /// Component index of each tricycle; components are numbered by their
    /// smallest tricycle.
    pub component: Vec<usize>,
    pub component_count: usize,
}

impl TricycleGraph {
    /// Adjacent tricycle index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.tricycles.len() {
            let a = self.tricycles[i].leaves();
            for j in i + 1..self.tricycles.len() {
                let b = self.tricycles[j].leaves();
                if a.iter().filter(|t| b.contains(t)).count() == 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Tricycles of component `c`, in lexicographic order.
    pub fn members(&self, c: usize) -> impl Iterator<Item = &Tricycle> {
        self.tricycles
            .iter()
            .zip(&self.component)
            .filter(move |(_, &k)| k == c)
            .map(|(t, _)| t)
    }
}

pub fn build_tricycle_graph(delta: &Sym3Dissimilarity) -> TricycleGraph {
    let tricycles = all_tricycles(delta);
    let n = delta.n();
    let mut uf = UnionFind::new(tricycles.len());
    // Tricycles sharing two leaves share a pair; link all tricycles through
    // the first one seen on each pair.
    let mut first_on_pair = vec![usize::MAX; n * n];
    for (i, t) in tricycles.iter().enumerate() {
        let [a, b, c] = t.leaves();
        for (p, q) in [(a, b), (a, c), (b, c)] {
            let slot = &mut first_on_pair[p * n + q];
            if *slot == usize::MAX {
                *slot = i;
            } else {
                uf.union(*slot, i);
            }
        }
    }
    let mut index = vec![usize::MAX; tricycles.len()];
    let mut component = Vec::with_capacity(tricycles.len());
    let mut count = 0;
    for i in 0..tricycles.len() {
        let root = uf.find(i);
        if index[root] == usize::MAX {
            index[root] = count;
            count += 1;
        }
        component.push(index[root]);
    }
    TricycleGraph {
        tricycles,
        component,
        component_count: count,
    }
}

/// Hybrid taxa and region of one component of the tricycle graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePair {
    pub component: usize,
    /// Taxa occurring as the hybrid of some tricycle in the component.
    pub hybrids: Vec<Taxon>,
    /// Hybrids together with all other taxa occurring in the component.
    pub region: Vec<Taxon>,
    /// The component's tricycles in lexicographic order.
    pub tricycles: Vec<Tricycle>,
}

/// One pair per component of the tricycle graph; empty when δ has no
/// tricycles.
pub fn cycle_pairs(graph: &TricycleGraph) -> Vec<CyclePair> {
    let mut pairs: Vec<CyclePair> = (0..graph.component_count)
        .map(|component| CyclePair {
            component,
            hybrids: Vec::new(),
            region: Vec::new(),
            tricycles: Vec::new(),
        })
        .collect();
    for (t, &c) in graph.tricycles.iter().zip(&graph.component) {
        let p = &mut pairs[c];
        p.tricycles.push(*t);
        p.hybrids.push(t.hybrid);
        p.region.extend([t.hybrid, t.ends[0], t.ends[1]]);
    }
    for p in pairs.iter_mut() {
        p.hybrids.sort_unstable();
        p.hybrids.dedup();
        p.region.sort_unstable();
        p.region.dedup();
    }
    pairs
}

/// Checks the Helly-type property and returns the cycle pairs.
pub fn find_cycles(delta: &Sym3Dissimilarity) -> Result<Vec<CyclePair>, NotRepresentable> {
    if let Some(w) = p1_violation(delta) {
        return Err(NotRepresentable::new(
            Property::P1,
            w.to_vec(),
            "triple value differs from all its pair values",
        ));
    }
    Ok(cycle_pairs(&build_tricycle_graph(delta)))
}
