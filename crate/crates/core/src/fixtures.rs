//! Small named instances used in tests, examples and the demo.

use crate::dissim::{Sym3Dissimilarity, Symbol, SymbolAlphabet, TaxonSet};
use crate::network::{LabelledNetwork, NetworkDraft};

/// Dissimilarity equal to `default` everywhere except on the listed subsets.
pub fn with_exceptions(
    taxa: &[&str],
    symbols: &[&str],
    default: &str,
    exceptions: &[(&[&str], &str)],
) -> Sym3Dissimilarity {
    let taxa = TaxonSet::new(taxa.iter().copied()).expect("valid taxon names");
    let symbols = SymbolAlphabet::new(symbols.iter().copied()).expect("valid symbols");
    let default = symbols.get(default).expect("default symbol in alphabet");
    let mut d = Sym3Dissimilarity::from_fn(taxa, symbols, |_| default);
    for (subset, value) in exceptions {
        let ids: Vec<_> = subset
            .iter()
            .map(|n| d.taxa().lookup(n).expect("known taxon"))
            .collect();
        let s = d.symbols().get(value).expect("known symbol");
        match ids[..] {
            [x, y] => d.set_pair(x, y, s),
            [x, y, z] => d.set_triple(x, y, z, s),
            _ => panic!("subsets have two or three taxa"),
        }
    }
    d
}

/// Four taxa `a..d` over `A..D`: root `A` with sides `B` (leaf `b`) and
/// `C` (leaf `d`) meeting in a hybrid above a `D`-cherry on `a, c`.
pub fn worked_network() -> LabelledNetwork {
    let taxa = TaxonSet::new(["a", "b", "c", "d"]).unwrap();
    let symbols = SymbolAlphabet::new(["A", "B", "C", "D"]).unwrap();
    let mut g = NetworkDraft::new(taxa, symbols);
    let root = g.add_interior(Some(Symbol(0)));
    let u = g.add_interior(Some(Symbol(1)));
    let v = g.add_interior(Some(Symbol(2)));
    let h = g.add_interior(None);
    let w = g.add_interior(Some(Symbol(3)));
    g.add_edge(root, u);
    g.add_edge(root, v);
    g.add_edge(u, h);
    g.add_edge(v, h);
    g.add_edge(h, w);
    for (parent, taxon) in [(w, 0), (u, 1), (w, 2), (v, 3)] {
        let leaf = g.add_leaf(vec![taxon]);
        g.add_edge(parent, leaf);
    }
    g.finish().expect("worked network is valid")
}

/// The dissimilarity induced by [`worked_network`], written out by hand.
pub fn worked_dissimilarity() -> Sym3Dissimilarity {
    with_exceptions(
        &["a", "b", "c", "d"],
        &["A", "B", "C", "D"],
        "A",
        &[
            (&["a", "c"], "D"),
            (&["a", "b"], "B"),
            (&["b", "c"], "B"),
            (&["a", "d"], "C"),
            (&["c", "d"], "C"),
            (&["a", "b", "c"], "B"),
            (&["a", "c", "d"], "C"),
        ],
    )
}

/// Constant dissimilarity on `n` taxa `t1..tn` over `m` symbols, valued at
/// the first symbol.
pub fn constant(n: usize, m: usize) -> Sym3Dissimilarity {
    let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let syms: Vec<String> = (0..m).map(|i| format!("S{i}")).collect();
    Sym3Dissimilarity::from_fn(
        TaxonSet::new(names).unwrap(),
        SymbolAlphabet::new(syms).unwrap(),
        |_| Symbol(0),
    )
}

/// Independence row for the Helly-type property.
pub fn independence_p1() -> Sym3Dissimilarity {
    with_exceptions(
        &["x", "y", "z"],
        &["D", "S"],
        "D",
        &[(&["x", "y", "z"], "S")],
    )
}

/// Independence row for the four-point tricycle property. It is also the
/// four-taxon map whose 3-subsets are all representable.
pub fn independence_p2() -> Sym3Dissimilarity {
    with_exceptions(
        &["x", "y", "z", "u"],
        &["D", "S"],
        "S",
        &[
            (&["x", "y", "z"], "D"),
            (&["y", "z", "u"], "D"),
            (&["x", "y"], "D"),
            (&["y", "z"], "D"),
            (&["z", "u"], "D"),
        ],
    )
}

/// Independence row for the component-constancy property. It breaks the
/// Helly-type property instead and has no tricycle.
pub fn independence_p3() -> Sym3Dissimilarity {
    with_exceptions(
        &["x1", "x2", "y", "z"],
        &["D", "S1", "S2"],
        "D",
        &[(&["x1", "y", "z"], "S1"), (&["x2", "y", "z"], "S2")],
    )
}

/// Independence row for the side-set property.
pub fn independence_p4() -> Sym3Dissimilarity {
    with_exceptions(
        &["x", "y", "z", "u"],
        &["D", "S"],
        "S",
        &[
            (&["x", "y", "u"], "D"),
            (&["x", "u"], "D"),
            (&["y", "z"], "D"),
            (&["x", "y", "z"], "D"),
        ],
    )
}

/// Two adjacent tricycles `x||yz` and `x||yu` with different triple values.
pub fn component_constancy_violation() -> Sym3Dissimilarity {
    with_exceptions(
        &["x", "y", "z", "u"],
        &["D", "S1", "S2"],
        "D",
        &[
            (&["y", "z"], "S1"),
            (&["x", "y", "z"], "S1"),
            (&["y", "u"], "S2"),
            (&["x", "y", "u"], "S2"),
        ],
    )
}

/// Fails only the region-separation property.
pub fn independence_p5() -> Sym3Dissimilarity {
    with_exceptions(
        &["a", "b", "c", "d"],
        &["A", "B"],
        "A",
        &[
            (&["a", "b"], "B"),
            (&["a", "b", "d"], "B"),
            (&["b", "c"], "B"),
            (&["b", "c", "d"], "B"),
            (&["b", "d"], "B"),
        ],
    )
}

/// Fails only the side-block property.
pub fn independence_p8() -> Sym3Dissimilarity {
    with_exceptions(
        &["a", "b", "c", "d"],
        &["A", "B", "C"],
        "C",
        &[
            (&["a", "b"], "B"),
            (&["a", "b", "c"], "A"),
            (&["a", "c"], "A"),
            (&["a", "c", "d"], "A"),
            (&["c", "d"], "B"),
        ],
    )
}

/// Tricycles `b||ac` and `b||de` in two components whose regions overlap.
/// Every property holds but no level-1 network represents the map.
pub fn overlapping_regions() -> Sym3Dissimilarity {
    with_exceptions(
        &["a", "b", "c", "d", "e"],
        &["A", "B", "C"],
        "B",
        &[
            (&["a", "c"], "A"),
            (&["d", "e"], "C"),
            (&["a", "b", "c"], "A"),
            (&["b", "d", "e"], "C"),
        ],
    )
}

/// Two symbols; tricycles `c||ab`, `c||be`, `d||ae`, `d||be` in one component
/// pull `a` and `e` onto opposite sides and onto the same side at once.
/// Every property holds but no level-1 network represents the map.
pub fn conflicting_sides() -> Sym3Dissimilarity {
    with_exceptions(
        &["a", "b", "c", "d", "e"],
        &["A", "B"],
        "B",
        &[
            (&["a", "b"], "A"),
            (&["a", "e"], "A"),
            (&["b", "e"], "A"),
            (&["a", "b", "c"], "A"),
            (&["a", "b", "e"], "A"),
            (&["a", "d", "e"], "A"),
            (&["b", "c", "e"], "A"),
            (&["b", "d", "e"], "A"),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_dissimilarity_matches_network() {
        let induced = worked_network().induce().unwrap();
        assert!(induced.same_values(&worked_dissimilarity()));
    }
}
