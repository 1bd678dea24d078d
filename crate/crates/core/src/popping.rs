//! Reconstruction of a level-1 representation from a symbolic
//! 3-dissimilarity, the property report, and subset characterizations.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclebuilder::{
    build_cycle, checklabels_at, cycle_sets, side_set_violation, topdown_violation, valid_choices,
    SimpleCycle,
};
use crate::dissim::{PairTable, Sym3Dissimilarity, Taxon};
use crate::network::{LabelledNetwork, NetworkDraft, VertexId};
use crate::property::{NotRepresentable, Property};
use crate::treebuilder::{
    alternating_path, discriminating_tree_table, partition, quotient, ultrametric_violation_on,
    Hierarchy, TreeError, UltrametricViolation,
};
use crate::trinet::{
    build_tricycle_graph, classify, cycle_pairs, find_cycles, p1_violation, CyclePair, TrinetKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsetError {
    #[error("need at least {needed} taxa, got {got}")]
    SetTooSmall { needed: usize, got: usize },
}

fn build_all(
    delta: &Sym3Dissimilarity,
    pairs: &[CyclePair],
) -> Vec<Result<SimpleCycle, NotRepresentable>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs.par_iter().map(|p| build_cycle(delta, p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pairs.iter().map(|p| build_cycle(delta, p)).collect()
    }
}

/// Regions must form a hierarchy of distinct sets.
fn hierarchy_violation(regions: &[Vec<Taxon>]) -> Option<Vec<Taxon>> {
    for (i, a) in regions.iter().enumerate() {
        for b in &regions[i + 1..] {
            if a == b {
                return Some(a.iter().copied().take(3).collect());
            }
        }
    }
    if let Err(TreeError::NotHierarchy(a, b)) = Hierarchy::new(regions.to_vec()) {
        let common = *a.iter().find(|t| b.contains(t)).unwrap();
        let only_a = *a.iter().find(|t| !b.contains(t)).unwrap();
        let only_b = *b.iter().find(|t| !a.contains(t)).unwrap();
        return Some(vec![common, only_a, only_b]);
    }
    None
}

/// Every taxon outside a region sees all of the region with one value.
fn region_violation(delta: &Sym3Dissimilarity, region: &[Taxon]) -> Option<Vec<Taxon>> {
    let y0 = region[0];
    for w in 0..delta.n() {
        if region.binary_search(&w).is_ok() {
            continue;
        }
        let v = delta.pair(w, y0);
        if let Some(&y) = region.iter().find(|&&y| delta.pair(w, y) != v) {
            return Some(vec![y0, y, w]);
        }
    }
    None
}

/// Outcome of one vertex-growing step, reported to observers.
struct Quotient<'a> {
    blocks: &'a [Vec<Taxon>],
    table: &'a PairTable,
}

/// Replaces compound leaves until every leaf is a single taxon. Returns the
/// number of expansions performed.
fn expand(
    delta: &Sym3Dissimilarity,
    cycles: &[(Vec<Taxon>, SimpleCycle)],
    draft: &mut NetworkDraft,
    start: VertexId,
    keep_going: bool,
    observe: &mut dyn FnMut(Quotient<'_>),
) -> Result<usize, NotRepresentable> {
    let regions: Vec<Vec<Taxon>> = cycles.iter().map(|(r, _)| r.clone()).collect();
    let mut queue: BTreeMap<Taxon, VertexId> = BTreeMap::new();
    queue.insert(draft.block(start)[0], start);
    let mut expansions = 0;
    while let Some((_, leaf)) = queue.pop_first() {
        let block = draft.block(leaf).to_vec();
        let new_leaves = if let Some((_, cycle)) = cycles.iter().find(|(r, _)| *r == block) {
            let (root, leaves) = cycle.graft(draft);
            draft.replace_leaf(leaf, root);
            leaves
        } else {
            let inner: Vec<Vec<Taxon>> = regions
                .iter()
                .filter(|r| {
                    r.len() < block.len() && r.iter().all(|t| block.binary_search(t).is_ok())
                })
                .cloned()
                .collect();
            let blocks = partition(&block, &inner);
            let table = match quotient(delta, &blocks) {
                Ok(t) => t,
                Err(TreeError::NotConstant { pairs, .. }) => {
                    if keep_going {
                        continue;
                    }
                    let [(a, b), (c, d)] = pairs;
                    return Err(NotRepresentable::new(
                        Property::P5,
                        vec![a, b, c, d],
                        "blocks are not separated by a single value",
                    ));
                }
                Err(e) => unreachable!("quotient error {e:?}"),
            };
            observe(Quotient {
                blocks: &blocks,
                table: &table,
            });
            let tree = match discriminating_tree_table(&table) {
                Ok(t) => t,
                Err(v) => {
                    if keep_going {
                        continue;
                    }
                    let items: Vec<usize> = match v {
                        UltrametricViolation::U1(i) => i.to_vec(),
                        UltrametricViolation::U2(i) => i.to_vec(),
                    };
                    return Err(NotRepresentable::new(
                        Property::P2,
                        items.iter().map(|&i| blocks[i][0]).collect(),
                        "blocks admit no discriminating tree",
                    ));
                }
            };
            let mut leaves = Vec::new();
            let root = tree.graft(draft, &blocks, &mut leaves);
            draft.replace_leaf(leaf, root);
            leaves
        };
        expansions += 1;
        for l in new_leaves {
            if draft.block(l).len() >= 2 {
                queue.insert(draft.block(l)[0], l);
            }
        }
    }
    Ok(expansions)
}

/// Reconstructs the semi-discriminating level-1 representation of δ, or
/// reports the first violated property.
pub fn network_popping(delta: &Sym3Dissimilarity) -> Result<LabelledNetwork, NotRepresentable> {
    let pairs = find_cycles(delta)?;
    let mut cycles = Vec::with_capacity(pairs.len());
    for built in build_all(delta, &pairs) {
        let c = built?;
        cycles.push((c.leaves(), c));
    }
    let regions: Vec<Vec<Taxon>> = cycles.iter().map(|(r, _)| r.clone()).collect();
    if let Some(w) = hierarchy_violation(&regions) {
        return Err(NotRepresentable::new(
            Property::P5,
            w,
            "cycle regions neither nest nor separate",
        ));
    }
    for r in &regions {
        if let Some(w) = region_violation(delta, r) {
            return Err(NotRepresentable::new(
                Property::P5,
                w,
                "a taxon outside a cycle region tells region members apart",
            ));
        }
    }
    let mut draft = NetworkDraft::new(delta.taxa().clone(), delta.symbols().clone());
    let start = draft.add_leaf((0..delta.n()).collect());
    let expansions = expand(delta, &cycles, &mut draft, start, false, &mut |_| {})?;
    if expansions == 0 {
        return Err(NotRepresentable::new(
            Property::P1,
            Vec::new(),
            "nothing to expand",
        ));
    }
    let net = draft
        .finish()
        .expect("popping assembles a valid level-1 network");
    debug_assert!(net.is_semi_discriminating());
    Ok(net)
}

pub fn is_representable(delta: &Sym3Dissimilarity) -> bool {
    network_popping(delta).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub pass: bool,
    pub witness: Vec<Taxon>,
}

impl PropertyVerdict {
    fn pass() -> Self {
        PropertyVerdict {
            pass: true,
            witness: Vec::new(),
        }
    }

    fn fail(witness: Vec<Taxon>) -> Self {
        PropertyVerdict {
            pass: false,
            witness,
        }
    }
}

/// Verdicts for P1 through P8, U1 and U2, and the popping outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub verdicts: BTreeMap<Property, PropertyVerdict>,
    pub rejection: Option<NotRepresentable>,
}

impl PropertyReport {
    pub fn verdict(&self, p: Property) -> &PropertyVerdict {
        &self.verdicts[&p]
    }

    pub fn passes(&self, p: Property) -> bool {
        self.verdicts[&p].pass
    }

    /// Whether P1 through P8 all hold.
    pub fn all_pass(&self) -> bool {
        Property::REPRESENTABILITY.iter().all(|&p| self.passes(p))
    }

    pub fn failing(&self) -> Vec<Property> {
        Property::REPRESENTABILITY
            .iter()
            .copied()
            .filter(|&p| !self.passes(p))
            .collect()
    }

    pub fn representable(&self) -> bool {
        self.rejection.is_none()
    }
}

fn p2_violation(delta: &Sym3Dissimilarity) -> Option<Vec<Taxon>> {
    let n = delta.n();
    let d = |a: usize, b: usize| delta.pair(a, b);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let Some(path) = alternating_path([a, b, c, e], &d) else {
                        continue;
                    };
                    let tricycles = [[a, b, c], [a, b, e], [a, c, e], [b, c, e]]
                        .iter()
                        .filter(|t| {
                            matches!(
                                classify(delta, t[0], t[1], t[2]),
                                TrinetKind::Tricycle { .. }
                            )
                        })
                        .count();
                    if tricycles != 1 {
                        return Some(path.to_vec());
                    }
                }
            }
        }
    }
    None
}

fn p3_violation(pairs: &[CyclePair], delta: &Sym3Dissimilarity) -> Option<Vec<Taxon>> {
    for p in pairs {
        let first = p.tricycles[0];
        let [a, b, c] = first.leaves();
        let value = delta.triple(a, b, c);
        if let Some(t) = p.tricycles.iter().find(|t| {
            let [x, y, z] = t.leaves();
            delta.triple(x, y, z) != value
        }) {
            let mut w = first.leaves().to_vec();
            w.extend(t.leaves().iter().filter(|l| !first.leaves().contains(l)));
            return Some(w);
        }
    }
    None
}

/// Evaluates every property by its definition. P4 to P8 refer to the sets
/// the cycle builder derives from each usable starting tricycle of each
/// component, and fail if they fail for any of them.
pub fn check_properties(delta: &Sym3Dissimilarity) -> PropertyReport {
    let mut verdicts: BTreeMap<Property, PropertyVerdict> = Property::ALL
        .iter()
        .map(|&p| (p, PropertyVerdict::pass()))
        .collect();
    let mut fail = |p: Property, w: Vec<Taxon>| {
        let v = verdicts.get_mut(&p).unwrap();
        if v.pass {
            *v = PropertyVerdict::fail(w);
        }
    };

    if let Some(w) = p1_violation(delta) {
        fail(Property::P1, w.to_vec());
    }
    if let Some(w) = p2_violation(delta) {
        fail(Property::P2, w);
    }
    let pairs = cycle_pairs(&build_tricycle_graph(delta));
    if let Some(w) = p3_violation(&pairs, delta) {
        fail(Property::P3, w);
    }
    for pair in &pairs {
        let choices = valid_choices(pair);
        if choices.is_empty() {
            let t = pair.tricycles[0];
            fail(Property::P4, vec![t.hybrid, t.ends[0], t.ends[1]]);
            continue;
        }
        let mut seen = HashSet::new();
        for choice in choices {
            let sets = cycle_sets(delta, pair, choice);
            if !seen.insert((sets.x(), sets.seeds.clone())) {
                continue;
            }
            if let Some(w) = side_set_violation(delta, &sets) {
                fail(Property::P4, w);
            }
            if let Some(w) = region_violation(delta, &sets.region()) {
                fail(Property::P5, w);
            }
            for side in 0..2 {
                if let Some(w) = topdown_violation(delta, &sets, side) {
                    fail(Property::P6, w);
                }
            }
            let cl = checklabels_at(
                delta,
                &sets.hybrids,
                &sets.sides[0],
                &sets.sides[1],
                Some(sets.x()),
            );
            if let Some(w) = cl.undirected_violation() {
                fail(Property::P7, w.to_vec());
            }
            if let Some(w) = cl.directed_violation() {
                fail(Property::P8, w.to_vec());
            }
        }
    }

    // U1 and U2 on every quotient the reconstruction forms.
    let built: Vec<(Vec<Taxon>, SimpleCycle)> = build_all(delta, &pairs)
        .into_iter()
        .filter_map(Result::ok)
        .map(|c| (c.leaves(), c))
        .collect();
    let mut draft = NetworkDraft::new(delta.taxa().clone(), delta.symbols().clone());
    let start = draft.add_leaf((0..delta.n()).collect());
    let mut u_fail: Vec<(Property, Vec<Taxon>)> = Vec::new();
    let _ = expand(delta, &built, &mut draft, start, true, &mut |q| {
        let items: Vec<usize> = (0..q.blocks.len()).collect();
        match ultrametric_violation_on(q.table, &items) {
            Some(UltrametricViolation::U1(i)) => {
                u_fail.push((Property::U1, i.iter().map(|&k| q.blocks[k][0]).collect()))
            }
            Some(UltrametricViolation::U2(i)) => {
                u_fail.push((Property::U2, i.iter().map(|&k| q.blocks[k][0]).collect()))
            }
            None => {}
        }
    });
    for (p, w) in u_fail {
        fail(p, w);
    }

    PropertyReport {
        verdicts,
        rejection: network_popping(delta).err(),
    }
}

/// Lexicographic `k`-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// A smallest non-representable restriction of size 3 to 5, searched by
/// size and then lexicographically.
pub fn subset_witness(delta: &Sym3Dissimilarity) -> Result<Option<Vec<Taxon>>, SubsetError> {
    let n = delta.n();
    if n < 6 {
        return Err(SubsetError::SetTooSmall { needed: 6, got: n });
    }
    for k in 3..=5 {
        for subset in combinations(n, k) {
            let sub = delta.restrict(&subset).expect("subset of size at least 3");
            if !is_representable(&sub) {
                return Ok(Some(subset));
            }
        }
    }
    Ok(None)
}

/// Whether every restriction to all taxa but one is representable.
pub fn leave_one_out_check(delta: &Sym3Dissimilarity) -> Result<bool, SubsetError> {
    let n = delta.n();
    if n < 6 {
        return Err(SubsetError::SetTooSmall { needed: 6, got: n });
    }
    Ok((0..n).all(|skip| {
        let subset: Vec<Taxon> = (0..n).filter(|&t| t != skip).collect();
        is_representable(&delta.restrict(&subset).expect("at least 5 taxa"))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn worked_network_round_trip() {
        let d = fixtures::worked_dissimilarity();
        let net = network_popping(&d).unwrap();
        assert!(net.isomorphic(&fixtures::worked_network()));
        assert!(net.induce().unwrap().same_values(&d));
    }

    #[test]
    fn constant_map_gives_star() {
        let d = fixtures::constant(5, 1);
        let net = network_popping(&d).unwrap();
        assert_eq!(net.children(net.root()).len(), 5);
        assert!(net.cycles().is_empty());
    }

    #[test]
    fn table_two_rows_rejected() {
        for d in [
            fixtures::independence_p1(),
            fixtures::independence_p2(),
            fixtures::independence_p3(),
            fixtures::independence_p4(),
        ] {
            assert!(!is_representable(&d));
        }
    }

    #[test]
    fn four_taxon_gap() {
        let d = fixtures::independence_p2();
        assert!(!is_representable(&d));
        for subset in combinations(4, 3) {
            assert!(is_representable(&d.restrict(&subset).unwrap()));
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 3).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn small_sets_are_refused() {
        let d = fixtures::independence_p2();
        assert_eq!(
            subset_witness(&d),
            Err(SubsetError::SetTooSmall { needed: 6, got: 4 })
        );
        assert!(leave_one_out_check(&fixtures::constant(5, 1)).is_err());
    }
}
