//! Block partitions, quotient 2-dissimilarities, symbolic ultrametrics and
//! their discriminating trees.

use thiserror::Error;

use crate::dissim::{
    PairTable, Sym2Dissimilarity, Sym3Dissimilarity, Symbol, SymbolAlphabet, Taxon, TaxonSet,
};
use crate::network::{LabelledNetwork, NetworkDraft, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    /// Two representative pairs of the same pair of blocks disagree.
    #[error("quotient not well defined between blocks {blocks:?}")]
    NotConstant {
        blocks: (usize, usize),
        pairs: [(Taxon, Taxon); 2],
    },
    #[error("not a symbolic ultrametric: {0:?}")]
    NotUltrametric(UltrametricViolation),
    #[error("sets {0:?} and {1:?} overlap without nesting")]
    NotHierarchy(Vec<Taxon>, Vec<Taxon>),
}

/// Items (indices into a block list) exhibiting a failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UltrametricViolation {
    /// Three items whose three pair values are pairwise distinct.
    U1([usize; 3]),
    /// Four items `x, y, z, u` with
    /// `δ(x,y)=δ(y,z)=δ(z,u) ≠ δ(z,x)=δ(x,u)=δ(u,y)`.
    U2([usize; 4]),
}

/// A family of taxon sets in which any two members are nested or disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hierarchy {
    sets: Vec<Vec<Taxon>>,
}

impl Hierarchy {
    pub fn new(sets: Vec<Vec<Taxon>>) -> Result<Self, TreeError> {
        let mut sets: Vec<Vec<Taxon>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        sets.sort();
        sets.dedup();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                let common = a.iter().filter(|t| b.binary_search(t).is_ok()).count();
                if common != 0 && common != a.len() && common != b.len() {
                    return Err(TreeError::NotHierarchy(a.clone(), b.clone()));
                }
            }
        }
        Ok(Hierarchy { sets })
    }

    pub fn sets(&self) -> &[Vec<Taxon>] {
        &self.sets
    }

    /// Members contained in `y`.
    pub fn within(&self, y: &[Taxon]) -> Vec<Vec<Taxon>> {
        self.sets
            .iter()
            .filter(|s| s.iter().all(|t| y.contains(t)))
            .cloned()
            .collect()
    }
}

/// Partition of `y` into the maximal members of `sets` (all assumed to be
/// subsets of `y`) and singletons for the remaining taxa. Blocks are sorted
/// and ordered by their smallest taxon.
pub fn partition(y: &[Taxon], sets: &[Vec<Taxon>]) -> Vec<Vec<Taxon>> {
    let mut by_size: Vec<&Vec<Taxon>> = sets.iter().filter(|s| !s.is_empty()).collect();
    by_size.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let mut blocks: Vec<Vec<Taxon>> = Vec::new();
    let mut covered: Vec<Taxon> = Vec::new();
    for s in by_size {
        if s.iter().any(|t| covered.contains(t)) {
            continue;
        }
        let mut b = s.clone();
        b.sort_unstable();
        covered.extend(&b);
        blocks.push(b);
    }
    for &t in y {
        if !covered.contains(&t) {
            blocks.push(vec![t]);
        }
    }
    blocks.sort_by_key(|b| b[0]);
    blocks
}

/// The quotient of δ on a block partition: the common pair value between
/// any two blocks.
pub fn quotient(delta: &Sym3Dissimilarity, blocks: &[Vec<Taxon>]) -> Result<PairTable, TreeError> {
    let k = blocks.len();
    let mut table = PairTable::filled(k, Symbol(0));
    for p in 0..k {
        for q in p + 1..k {
            let (x0, y0) = (blocks[p][0], blocks[q][0]);
            let value = delta.pair(x0, y0);
            for &x in &blocks[p] {
                for &y in &blocks[q] {
                    if delta.pair(x, y) != value {
                        return Err(TreeError::NotConstant {
                            blocks: (p, q),
                            pairs: [(x0, y0), (x, y)],
                        });
                    }
                }
            }
            table.set(p, q, value);
        }
    }
    Ok(table)
}

/// Checks the two symbolic-ultrametric conditions exhaustively on `items`
/// (indices into `table`).
pub fn ultrametric_violation_on(
    table: &PairTable,
    items: &[usize],
) -> Option<UltrametricViolation> {
    let d = |a: usize, b: usize| table.get(items[a], items[b]);
    let k = items.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let (ab, ac, bc) = (d(a, b), d(a, c), d(b, c));
                if ab != ac && ab != bc && ac != bc {
                    return Some(UltrametricViolation::U1([items[a], items[b], items[c]]));
                }
            }
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for e in c + 1..k {
                    if let Some(path) = alternating_path([a, b, c, e], &d) {
                        return Some(UltrametricViolation::U2(path.map(|i| items[i])));
                    }
                }
            }
        }
    }
    None
}

/// If the six pair values on four items take two values, each forming a
/// path through all four items, returns one of the paths.
pub(crate) fn alternating_path<F>(q: [usize; 4], d: &F) -> Option<[usize; 4]>
where
    F: Fn(usize, usize) -> Symbol,
{
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let first = d(q[0], q[1]);
    let mut degree = [0usize; 4];
    let mut edges = Vec::with_capacity(3);
    let mut other = None;
    for &(i, j) in &pairs {
        let v = d(q[i], q[j]);
        if v == first {
            degree[i] += 1;
            degree[j] += 1;
            edges.push((i, j));
        } else {
            match other {
                None => other = Some(v),
                Some(o) if o != v => return None,
                _ => {}
            }
        }
    }
    if edges.len() != 3 {
        return None;
    }
    let mut sorted = degree;
    sorted.sort_unstable();
    if sorted != [1, 1, 2, 2] {
        return None;
    }
    let start = (0..4).find(|&i| degree[i] == 1).unwrap();
    let mut path = [start; 4];
    let mut prev = usize::MAX;
    for step in 1..4 {
        let cur = path[step - 1];
        let next = edges
            .iter()
            .find_map(|&(i, j)| {
                if i == cur && j != prev {
                    Some(j)
                } else if j == cur && i != prev {
                    Some(i)
                } else {
                    None
                }
            })
            .unwrap();
        prev = cur;
        path[step] = next;
    }
    Some(path.map(|i| q[i]))
}

pub fn is_symbolic_ultrametric(d2: &Sym2Dissimilarity) -> Result<(), UltrametricViolation> {
    let items: Vec<usize> = (0..d2.taxa().len()).collect();
    match ultrametric_violation_on(d2.table(), &items) {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Rooted tree over item indices with labelled interior vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(usize),
    Interior {
        label: Symbol,
        children: Vec<TreeNode>,
    },
}

impl TreeNode {
    fn min_item(&self) -> usize {
        match self {
            TreeNode::Leaf(i) => *i,
            TreeNode::Interior { children, .. } => children[0].min_item(),
        }
    }

    /// Adds this tree to `draft`; leaf `i` receives `blocks[i]`. Returns
    /// the vertex id of the tree's root and the new leaves.
    pub fn graft(
        &self,
        draft: &mut NetworkDraft,
        blocks: &[Vec<Taxon>],
        leaves: &mut Vec<VertexId>,
    ) -> VertexId {
        match self {
            TreeNode::Leaf(i) => {
                let v = draft.add_leaf(blocks[*i].clone());
                leaves.push(v);
                v
            }
            TreeNode::Interior { label, children } => {
                let v = draft.add_interior(Some(*label));
                for c in children {
                    let cv = c.graft(draft, blocks, leaves);
                    draft.add_edge(v, cv);
                }
                v
            }
        }
    }
}

fn components_without(table: &PairTable, items: &[usize], m: Symbol) -> Vec<Vec<usize>> {
    let k = items.len();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..k {
                if !seen[b] && table.get(items[a], items[b]) != m {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp.into_iter().map(|j| items[j]).collect());
    }
    out
}

fn build(table: &PairTable, items: &[usize]) -> Result<TreeNode, UltrametricViolation> {
    if items.len() == 1 {
        return Ok(TreeNode::Leaf(items[0]));
    }
    let mut candidates: Vec<Symbol> = Vec::new();
    for (i, &a) in items.iter().enumerate() {
        for &b in &items[i + 1..] {
            let v = table.get(a, b);
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
    }
    candidates.sort_unstable();
    for m in candidates {
        let parts = components_without(table, items, m);
        if parts.len() < 2 {
            continue;
        }
        let mut children = Vec::with_capacity(parts.len());
        for part in &parts {
            match build(table, part)? {
                TreeNode::Interior {
                    label,
                    children: sub,
                } if label == m => children.extend(sub),
                node => children.push(node),
            }
        }
        children.sort_by_key(TreeNode::min_item);
        return Ok(TreeNode::Interior { label: m, children });
    }
    Err(ultrametric_violation_on(table, items)
        .expect("a connected split graph for every symbol implies a violated condition"))
}

/// The discriminating tree of a symbolic ultrametric over `k` items, built
/// top-down: the root label is the unique value whose removal disconnects
/// the items.
pub fn discriminating_tree_table(table: &PairTable) -> Result<TreeNode, UltrametricViolation> {
    let items: Vec<usize> = (0..table.size()).collect();
    build(table, &items)
}

/// Discriminating labelled tree representing a 2-dissimilarity.
pub fn discriminating_tree(d2: &Sym2Dissimilarity) -> Result<LabelledNetwork, TreeError> {
    let tree = discriminating_tree_table(d2.table()).map_err(TreeError::NotUltrametric)?;
    let blocks: Vec<Vec<Taxon>> = (0..d2.taxa().len()).map(|t| vec![t]).collect();
    Ok(tree_network(
        d2.taxa().clone(),
        d2.symbols().clone(),
        &tree,
        &blocks,
    ))
}

/// Tree on a block partition as a network with (possibly compound) leaves.
pub fn tree_network(
    taxa: TaxonSet,
    symbols: SymbolAlphabet,
    tree: &TreeNode,
    blocks: &[Vec<Taxon>],
) -> LabelledNetwork {
    let mut draft = NetworkDraft::new(taxa, symbols);
    tree.graft(&mut draft, blocks, &mut Vec::new());
    draft
        .finish()
        .expect("discriminating trees are valid networks")
}

/// Result of growing a tree on `Y`: the blocks and a tree over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrownTree {
    pub blocks: Vec<Vec<Taxon>>,
    pub tree: TreeNode,
}

/// Partition of `y` by `sets`, quotient, and its discriminating tree.
pub fn vertex_growing(
    delta: &Sym3Dissimilarity,
    y: &[Taxon],
    sets: &[Vec<Taxon>],
) -> Result<GrownTree, TreeError> {
    let blocks = partition(y, sets);
    let table = quotient(delta, &blocks)?;
    let tree = discriminating_tree_table(&table).map_err(TreeError::NotUltrametric)?;
    Ok(GrownTree { blocks, tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn induce2(tree: &TreeNode, k: usize) -> PairTable {
        fn walk(node: &TreeNode, out: &mut Vec<usize>) {
            match node {
                TreeNode::Leaf(i) => out.push(*i),
                TreeNode::Interior { children, .. } => children.iter().for_each(|c| walk(c, out)),
            }
        }
        fn fill(node: &TreeNode, t: &mut PairTable) {
            if let TreeNode::Interior { label, children } = node {
                let sets: Vec<Vec<usize>> = children
                    .iter()
                    .map(|c| {
                        let mut v = Vec::new();
                        walk(c, &mut v);
                        v
                    })
                    .collect();
                for i in 0..sets.len() {
                    for j in i + 1..sets.len() {
                        for &a in &sets[i] {
                            for &b in &sets[j] {
                                t.set(a, b, *label);
                            }
                        }
                    }
                }
                children.iter().for_each(|c| fill(c, t));
            }
        }
        let mut t = PairTable::filled(k, Symbol(u32::MAX));
        fill(tree, &mut t);
        t
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition(&[0, 2], &[]), vec![vec![0], vec![2]]);
        let y: Vec<usize> = (0..11).collect();
        let sets = vec![(1..7).collect::<Vec<_>>(), vec![2], vec![4, 5, 6]];
        let blocks = partition(&y, &sets);
        assert_eq!(blocks.len(), 6);
        assert_eq!(blocks[1], (1..7).collect::<Vec<_>>());
    }

    #[test]
    fn worked_quotient() {
        let d = fixtures::worked_dissimilarity();
        let blocks = vec![vec![0, 2], vec![1], vec![3]];
        let q = quotient(&d, &blocks).unwrap();
        let s = |n| d.symbols().get(n).unwrap();
        assert_eq!(q.get(0, 1), s("B"));
        assert_eq!(q.get(0, 2), s("C"));
        assert_eq!(q.get(1, 2), s("A"));
        // B, C and A are pairwise distinct on three blocks.
        assert_eq!(
            ultrametric_violation_on(&q, &[0, 1, 2]),
            Some(UltrametricViolation::U1([0, 1, 2]))
        );
        assert!(discriminating_tree_table(&q).is_err());
    }

    #[test]
    fn quotient_detects_conflict() {
        let mut d = fixtures::worked_dissimilarity();
        d.set_pair(2, 1, d.symbols().get("C").unwrap());
        let err = quotient(&d, &[vec![0, 2], vec![1], vec![3]]).unwrap_err();
        assert!(matches!(err, TreeError::NotConstant { blocks: (0, 1), .. }));
    }

    #[test]
    fn all_singletons_is_project2() {
        let d = fixtures::worked_dissimilarity();
        let blocks: Vec<Vec<Taxon>> = (0..4).map(|t| vec![t]).collect();
        assert_eq!(&quotient(&d, &blocks).unwrap(), d.pair_table());
    }

    #[test]
    fn u2_pattern_detected() {
        let d = fixtures::independence_p2();
        let v = is_symbolic_ultrametric(&d.project2()).unwrap_err();
        let UltrametricViolation::U2(path) = v else {
            panic!("expected a four-point violation")
        };
        let dd = |a: usize, b: usize| d.pair(a, b);
        assert_eq!(dd(path[0], path[1]), dd(path[1], path[2]));
        assert_eq!(dd(path[1], path[2]), dd(path[2], path[3]));
        assert_ne!(dd(path[0], path[1]), dd(path[0], path[2]));
        assert_eq!(dd(path[0], path[2]), dd(path[0], path[3]));
        assert_eq!(dd(path[0], path[3]), dd(path[1], path[3]));
        assert!(discriminating_tree(&d.project2()).is_err());
    }

    #[test]
    fn constant_map_gives_star() {
        let d = fixtures::constant(5, 2).project2();
        assert!(is_symbolic_ultrametric(&d).is_ok());
        let t = discriminating_tree_table(d.table()).unwrap();
        let TreeNode::Interior { children, .. } = &t else {
            panic!()
        };
        assert_eq!(children.len(), 5);
    }

    #[test]
    fn single_block_is_a_leaf() {
        let t = discriminating_tree_table(&PairTable::filled(1, Symbol(0))).unwrap();
        assert_eq!(t, TreeNode::Leaf(0));
    }

    #[test]
    fn tree_induces_input() {
        // ((0,1)B,(2,3)C)A with 4 joined at the root.
        let (a, b, c) = (Symbol(0), Symbol(1), Symbol(2));
        let mut t = PairTable::filled(5, a);
        t.set(0, 1, b);
        t.set(2, 3, c);
        let tree = discriminating_tree_table(&t).unwrap();
        let back = induce2(&tree, 5);
        for p in 0..5 {
            for q in p + 1..5 {
                assert_eq!(back.get(p, q), t.get(p, q));
            }
        }
    }

    #[test]
    fn hierarchy_rejects_overlap() {
        assert!(Hierarchy::new(vec![vec![0, 1], vec![1, 2]]).is_err());
        let h = Hierarchy::new(vec![vec![0, 1, 2], vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(h.within(&[0, 1, 2]).len(), 2);
    }
}
