//! Random labelled level-1 networks and random perturbation of maps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dissim::{Sym3Dissimilarity, Symbol, SymbolAlphabet, Taxon, TaxonSet};
use crate::network::{LabelledNetwork, NetworkDraft, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("need at least 3 taxa, got {0}")]
    TooFewTaxa(usize),
    #[error("need at least one symbol")]
    NoSymbols,
    #[error("weak_label_bias must lie in [0, 1], got {0}")]
    BadBias(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub m: usize,
    /// Upper bound on the number of cycles.
    pub cycle_budget: usize,
    pub seed: u64,
    /// Upper bound on the number of vertices strictly inside one side.
    pub max_side_len: usize,
    /// Probability that a cycle is forced to be weakly labelled.
    pub weak_label_bias: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 10,
            m: 3,
            cycle_budget: 2,
            seed: 0,
            max_side_len: 3,
            weak_label_bias: 1.0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.n < 3 {
            return Err(GenError::TooFewTaxa(self.n));
        }
        if self.m == 0 {
            return Err(GenError::NoSymbols);
        }
        if !(0.0..=1.0).contains(&self.weak_label_bias) {
            return Err(GenError::BadBias(self.weak_label_bias));
        }
        Ok(())
    }
}

/// Taxon names `t01, t02, ...`, zero-padded to a common width.
pub fn taxon_names(n: usize) -> Vec<String> {
    let width = n.to_string().len().max(2);
    (1..=n).map(|i| format!("t{i:0width$}")).collect()
}

/// Symbol names `A..Z`, then `S26, S27, ...`.
pub fn symbol_names(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            if i < 26 {
                char::from(b'A' + i as u8).to_string()
            } else {
                format!("S{i}")
            }
        })
        .collect()
}

struct Builder<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    draft: NetworkDraft,
    budget: usize,
}

impl Builder<'_> {
    fn symbol(&mut self) -> Symbol {
        Symbol(self.rng.gen_range(0..self.cfg.m) as u32)
    }

    fn other_symbol(&mut self, not: Symbol) -> Symbol {
        let s = self.rng.gen_range(0..self.cfg.m - 1) as u32;
        Symbol(if s >= not.0 { s + 1 } else { s })
    }

    /// Splits `taxa` into `k` non-empty random groups.
    fn split(&mut self, mut taxa: Vec<Taxon>, k: usize) -> Vec<Vec<Taxon>> {
        taxa.shuffle(&mut self.rng);
        let mut cuts: Vec<usize> = (1..taxa.len()).collect();
        cuts.shuffle(&mut self.rng);
        cuts.truncate(k - 1);
        cuts.sort_unstable();
        let mut groups = Vec::with_capacity(k);
        let mut start = 0;
        for cut in cuts.into_iter().chain(std::iter::once(taxa.len())) {
            groups.push(taxa[start..cut].to_vec());
            start = cut;
        }
        groups
    }

    fn subnetwork(&mut self, taxa: Vec<Taxon>) -> VertexId {
        if taxa.len() == 1 {
            return self.draft.add_leaf(taxa);
        }
        if self.budget > 0 && self.rng.gen_bool(0.6) {
            let weak = self.rng.gen_bool(self.cfg.weak_label_bias);
            if !weak || (self.cfg.m >= 2 && taxa.len() >= 3) {
                self.budget -= 1;
                return self.cycle(taxa, weak);
            }
        }
        let k = if taxa.len() >= 3 && self.rng.gen_bool(0.3) {
            3
        } else {
            2
        };
        let label = self.symbol();
        let v = self.draft.add_interior(Some(label));
        for group in self.split(taxa, k) {
            let c = self.subnetwork(group);
            self.draft.add_edge(v, c);
        }
        v
    }

    fn cycle(&mut self, taxa: Vec<Taxon>, weak: bool) -> VertexId {
        let cap = self.cfg.max_side_len.max(1);
        let room = taxa.len() - 1;
        let (s0, s1) = loop {
            let a = self.rng.gen_range(0..=cap.min(room));
            let b = self.rng.gen_range(0..=cap.min(room - a));
            let ok = if weak { a >= 1 && b >= 1 } else { a + b >= 1 };
            if ok {
                break (a, b);
            }
        };
        let mut groups = self.split(taxa, 1 + s0 + s1);
        let root_label = self.symbol();
        let root = self.draft.add_interior(Some(root_label));
        let hybrid = self.draft.add_interior(None);
        let hybrid_group = groups.pop().unwrap();
        for len in [s0, s1] {
            let mut above = root;
            let mut side = Vec::with_capacity(len);
            for _ in 0..len {
                let label = self.symbol();
                let v = self.draft.add_interior(Some(label));
                self.draft.add_edge(above, v);
                let pendant = self.subnetwork(groups.pop().unwrap());
                self.draft.add_edge(v, pendant);
                side.push(v);
                above = v;
            }
            self.draft.add_edge(above, hybrid);
            if weak
                && side
                    .iter()
                    .all(|&v| self.draft.label(v) == Some(root_label))
            {
                let v = side[self.rng.gen_range(0..side.len())];
                let label = self.other_symbol(root_label);
                self.draft.set_label(v, Some(label));
            }
        }
        let child = self.subnetwork(hybrid_group);
        self.draft.add_edge(hybrid, child);
        root
    }
}

/// Random labelled level-1 network on taxa [`taxon_names`] over symbols
/// [`symbol_names`]. With `weak_label_bias = 1` and `m >= 2` every cycle is
/// weakly labelled.
pub fn random_network(cfg: &GenConfig) -> Result<LabelledNetwork, GenError> {
    cfg.validate()?;
    let taxa = TaxonSet::new(taxon_names(cfg.n)).expect("generated names are valid");
    let symbols = SymbolAlphabet::new(symbol_names(cfg.m)).expect("generated names are valid");
    let mut b = Builder {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        draft: NetworkDraft::new(taxa, symbols),
        budget: cfg.cycle_budget,
    };
    b.subnetwork((0..cfg.n).collect());
    Ok(b.draft
        .finish()
        .expect("generator builds valid level-1 networks"))
}

/// Rewrites each entry, independently with probability `rate`, to a
/// uniformly chosen different symbol. Maps over one symbol are unchanged.
pub fn perturb(delta: &Sym3Dissimilarity, rate: f64, seed: u64) -> Sym3Dissimilarity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = delta.symbols().len();
    let mut out = delta.clone();
    if m < 2 || rate <= 0.0 {
        return out;
    }
    let rate = rate.min(1.0);
    for s in delta.subsets() {
        if !rng.gen_bool(rate) {
            continue;
        }
        let old = delta.value(&s);
        let r = rng.gen_range(0..m - 1) as u32;
        let new = Symbol(if r >= old.0 { r + 1 } else { r });
        match s[..] {
            [x, y] => out.set_pair(x, y, new),
            [x, y, z] => out.set_triple(x, y, z, new),
            _ => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::print_network;

    fn cfg(n: usize, m: usize, cycles: usize, seed: u64) -> GenConfig {
        GenConfig {
            n,
            m,
            cycle_budget: cycles,
            seed,
            ..GenConfig::default()
        }
    }

    #[test]
    fn tree_on_three_leaves() {
        let net = random_network(&cfg(3, 1, 0, 5)).unwrap();
        assert!(net.cycles().is_empty());
        assert_eq!(net.leaves().count(), 3);
    }

    #[test]
    fn twelve_taxa_network() {
        let net = random_network(&cfg(12, 3, 3, 7)).unwrap();
        assert!(net.is_level_one());
        assert!(net.cycles().len() <= 3);
        assert!(net.induce().is_ok());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = print_network(&random_network(&cfg(20, 4, 4, 11)).unwrap());
        let b = print_network(&random_network(&cfg(20, 4, 4, 11)).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn full_bias_gives_weak_labels() {
        for seed in 0..50 {
            let net = random_network(&cfg(15, 2, 4, seed)).unwrap();
            assert!(net.is_weakly_labelled(), "seed {seed}");
        }
    }

    #[test]
    fn perturb_extremes() {
        let d = random_network(&cfg(8, 2, 2, 3)).unwrap().induce().unwrap();
        assert_eq!(perturb(&d, 0.0, 1), d);
        let flipped = perturb(&d, 1.0, 1);
        assert!(d.subsets().all(|s| d.value(&s) != flipped.value(&s)));
    }

    #[test]
    fn bad_config() {
        assert_eq!(
            random_network(&cfg(2, 1, 0, 0)).unwrap_err(),
            GenError::TooFewTaxa(2)
        );
        assert_eq!(
            random_network(&cfg(5, 0, 0, 0)).unwrap_err(),
            GenError::NoSymbols
        );
    }
}
