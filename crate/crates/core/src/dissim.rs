//! Taxon sets, symbol alphabets and symbolic 2-/3-dissimilarities.
//!
//! A symbolic 3-dissimilarity assigns one symbol to every 2-subset and every
//! 3-subset of a taxon set. Singletons implicitly map to the reserved
//! "no value" marker and are never stored.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a taxon inside its [`TaxonSet`].
pub type Taxon = usize;

/// Index of a symbol inside its [`SymbolAlphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DissimError {
    #[error("invalid name {0:?} (names must be non-empty and free of whitespace and '#')")]
    InvalidName(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("taxon set is empty")]
    EmptyTaxonSet,
    #[error("unknown taxon {0:?}")]
    UnknownTaxon(String),
    #[error("unknown symbol {symbol:?} for {{{}}}", .subset.join(","))]
    UnknownSymbol { subset: Vec<String>, symbol: String },
    #[error("missing value for {{{}}}", .0.join(","))]
    MissingEntry(Vec<String>),
    #[error("conflicting values for {{{}}}", .0.join(","))]
    ConflictingEntry(Vec<String>),
    #[error("subset of size {0} is too small (need at least 3 taxa)")]
    SubsetTooSmall(usize),
    #[error("taxon {0:?} repeated in subset")]
    RepeatedTaxon(String),
}

fn check_name(name: &str) -> Result<(), DissimError> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '#') {
        return Err(DissimError::InvalidName(name.to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn new<I, S>(names: I) -> Result<Self, DissimError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Names::default();
        for name in names {
            let name = name.into();
            check_name(&name)?;
            if out.index.contains_key(&name) {
                return Err(DissimError::DuplicateName(name));
            }
            out.index.insert(name.clone(), out.names.len());
            out.names.push(name);
        }
        Ok(out)
    }
}

/// Ordered list of distinct taxon names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaxonSet(Names);

impl TaxonSet {
    pub fn new<I, S>(names: I) -> Result<Self, DissimError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names = Names::new(names)?;
        if names.names.is_empty() {
            return Err(DissimError::EmptyTaxonSet);
        }
        Ok(TaxonSet(names))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, taxon: Taxon) -> &str {
        &self.0.names[taxon]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn get(&self, name: &str) -> Option<Taxon> {
        self.0.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<Taxon, DissimError> {
        self.get(name)
            .ok_or_else(|| DissimError::UnknownTaxon(name.to_string()))
    }

    /// Names of `taxa`, in the order given.
    pub fn names_of(&self, taxa: &[Taxon]) -> Vec<String> {
        taxa.iter().map(|&t| self.name(t).to_string()).collect()
    }

    /// Sub-collection of taxa, keeping this set's order.
    pub fn subset(&self, taxa: &[Taxon]) -> TaxonSet {
        let mut sorted = taxa.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        TaxonSet::new(sorted.into_iter().map(|t| self.name(t).to_string()))
            .expect("names already validated")
    }
}

/// Ordered list of distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolAlphabet(Names);

impl SymbolAlphabet {
    pub fn new<I, S>(names: I) -> Result<Self, DissimError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Ok(SymbolAlphabet(Names::new(names)?))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.0.names[symbol.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.0.index.get(name).map(|&i| Symbol(i as u32))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.len() as u32).map(Symbol)
    }
}

/// Position of the 3-subset `{a, b, c}` (a < b < c) in colex order.
#[inline]
pub(crate) fn triple_index(a: usize, b: usize, c: usize) -> usize {
    debug_assert!(a < b && b < c);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

#[inline]
fn sort3(x: usize, y: usize, z: usize) -> (usize, usize, usize) {
    let (mut a, mut b, mut c) = (x, y, z);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    (a, b, c)
}

fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Dense symmetric table of symbols indexed by pairs of points `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTable {
    k: usize,
    values: Vec<Symbol>,
}

impl PairTable {
    pub fn filled(k: usize, value: Symbol) -> Self {
        PairTable {
            k,
            values: vec![value; k * k],
        }
    }

    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> Symbol {
        debug_assert!(p != q);
        self.values[p * self.k + q]
    }

    pub fn set(&mut self, p: usize, q: usize, value: Symbol) {
        self.values[p * self.k + q] = value;
        self.values[q * self.k + p] = value;
    }
}

/// Total symbolic 3-dissimilarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sym3Dissimilarity {
    taxa: TaxonSet,
    symbols: SymbolAlphabet,
    pairs: PairTable,
    triples: Vec<Symbol>,
}

impl Sym3Dissimilarity {
    /// Builds a total map by evaluating `value` on every 2- and 3-subset.
    /// Subsets are passed sorted by taxon index.
    pub fn from_fn<F>(taxa: TaxonSet, symbols: SymbolAlphabet, mut value: F) -> Self
    where
        F: FnMut(&[Taxon]) -> Symbol,
    {
        let n = taxa.len();
        let mut pairs = PairTable::filled(n, Symbol(0));
        for b in 0..n {
            for a in 0..b {
                pairs.set(a, b, value(&[a, b]));
            }
        }
        let mut triples = vec![Symbol(0); choose3(n)];
        for c in 0..n {
            for b in 0..c {
                for a in 0..b {
                    triples[triple_index(a, b, c)] = value(&[a, b, c]);
                }
            }
        }
        Sym3Dissimilarity {
            taxa,
            symbols,
            pairs,
            triples,
        }
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn symbols(&self) -> &SymbolAlphabet {
        &self.symbols
    }

    pub fn n(&self) -> usize {
        self.taxa.len()
    }

    #[inline]
    pub fn pair(&self, x: Taxon, y: Taxon) -> Symbol {
        self.pairs.get(x, y)
    }

    #[inline]
    pub fn triple(&self, x: Taxon, y: Taxon, z: Taxon) -> Symbol {
        let (a, b, c) = sort3(x, y, z);
        self.triples[triple_index(a, b, c)]
    }

    /// Value on a 2- or 3-subset.
    pub fn value(&self, subset: &[Taxon]) -> Symbol {
        match *subset {
            [x, y] => self.pair(x, y),
            [x, y, z] => self.triple(x, y, z),
            _ => panic!("dissimilarity is defined on 2- and 3-subsets only"),
        }
    }

    pub fn set_pair(&mut self, x: Taxon, y: Taxon, value: Symbol) {
        assert!(value.index() < self.symbols.len());
        self.pairs.set(x, y, value);
    }

    pub fn set_triple(&mut self, x: Taxon, y: Taxon, z: Taxon, value: Symbol) {
        assert!(value.index() < self.symbols.len());
        let (a, b, c) = sort3(x, y, z);
        self.triples[triple_index(a, b, c)] = value;
    }

    pub fn pair_table(&self) -> &PairTable {
        &self.pairs
    }

    /// Every 2-subset followed by every 3-subset, each sorted by taxon index.
    pub fn subsets(&self) -> impl Iterator<Item = Vec<Taxon>> + '_ {
        let n = self.n();
        let pairs = (0..n).flat_map(move |a| ((a + 1)..n).map(move |b| vec![a, b]));
        let triples = (0..n).flat_map(move |a| {
            ((a + 1)..n).flat_map(move |b| ((b + 1)..n).map(move |c| vec![a, b, c]))
        });
        pairs.chain(triples)
    }

    /// Restriction to the taxa in `subset` (at least three of them).
    pub fn restrict(&self, subset: &[Taxon]) -> Result<Sym3Dissimilarity, DissimError> {
        let mut keep = subset.to_vec();
        keep.sort_unstable();
        for w in keep.windows(2) {
            if w[0] == w[1] {
                return Err(DissimError::RepeatedTaxon(self.taxa.name(w[0]).to_string()));
            }
        }
        if let Some(&bad) = keep.iter().find(|&&t| t >= self.n()) {
            return Err(DissimError::UnknownTaxon(format!("#{bad}")));
        }
        if keep.len() < 3 {
            return Err(DissimError::SubsetTooSmall(keep.len()));
        }
        let taxa = self.taxa.subset(&keep);
        Ok(Sym3Dissimilarity::from_fn(
            taxa,
            self.symbols.clone(),
            |local| {
                let global: Vec<Taxon> = local.iter().map(|&i| keep[i]).collect();
                self.value(&global)
            },
        ))
    }

    pub fn restrict_names<S: AsRef<str>>(
        &self,
        names: &[S],
    ) -> Result<Sym3Dissimilarity, DissimError> {
        let subset = names
            .iter()
            .map(|n| self.taxa.lookup(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.restrict(&subset)
    }

    /// Drops the 3-subset values.
    pub fn project2(&self) -> Sym2Dissimilarity {
        Sym2Dissimilarity {
            taxa: self.taxa.clone(),
            symbols: self.symbols.clone(),
            table: self.pairs.clone(),
        }
    }

    /// Equality of the underlying maps by taxon and symbol *names*,
    /// independent of the order of taxa or symbols in either alphabet.
    pub fn same_values(&self, other: &Sym3Dissimilarity) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let mut map = Vec::with_capacity(self.n());
        for name in self.taxa.names() {
            match other.taxa.get(name) {
                Some(t) => map.push(t),
                None => return false,
            }
        }
        self.subsets().all(|s| {
            let mapped: Vec<Taxon> = s.iter().map(|&t| map[t]).collect();
            self.symbols.name(self.value(&s)) == other.symbols.name(other.value(&mapped))
        })
    }

    /// Taxon names of a subset, for diagnostics.
    pub fn names_of(&self, subset: &[Taxon]) -> Vec<String> {
        self.taxa.names_of(subset)
    }
}

/// Total symbolic 2-dissimilarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sym2Dissimilarity {
    taxa: TaxonSet,
    symbols: SymbolAlphabet,
    table: PairTable,
}

impl Sym2Dissimilarity {
    pub fn new(taxa: TaxonSet, symbols: SymbolAlphabet, table: PairTable) -> Self {
        assert_eq!(taxa.len(), table.size());
        Sym2Dissimilarity {
            taxa,
            symbols,
            table,
        }
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn symbols(&self) -> &SymbolAlphabet {
        &self.symbols
    }

    pub fn table(&self) -> &PairTable {
        &self.table
    }

    pub fn pair(&self, x: Taxon, y: Taxon) -> Symbol {
        self.table.get(x, y)
    }

    pub fn restrict(&self, subset: &[Taxon]) -> Sym2Dissimilarity {
        let mut keep = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut table = PairTable::filled(keep.len(), Symbol(0));
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate().skip(i + 1) {
                table.set(i, j, self.table.get(a, b));
            }
        }
        Sym2Dissimilarity {
            taxa: self.taxa.subset(&keep),
            symbols: self.symbols.clone(),
            table,
        }
    }
}

/// A possibly incomplete symbolic 3-dissimilarity, filled entry by entry
/// and turned into a total map by [`PartialDissimilarity::validate`].
#[derive(Clone, Debug)]
pub struct PartialDissimilarity {
    taxa: TaxonSet,
    symbols: SymbolAlphabet,
    pairs: Vec<Option<Symbol>>,
    triples: Vec<Option<Symbol>>,
}

impl PartialDissimilarity {
    pub fn new(taxa: TaxonSet, symbols: SymbolAlphabet) -> Self {
        let n = taxa.len();
        PartialDissimilarity {
            taxa,
            symbols,
            pairs: vec![None; n * n],
            triples: vec![None; choose3(n)],
        }
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn symbols(&self) -> &SymbolAlphabet {
        &self.symbols
    }

    fn slot(&mut self, subset: &[Taxon]) -> &mut Option<Symbol> {
        let n = self.taxa.len();
        match *subset {
            [x, y] => {
                let (a, b) = if x < y { (x, y) } else { (y, x) };
                &mut self.pairs[a * n + b]
            }
            [x, y, z] => {
                let (a, b, c) = sort3(x, y, z);
                &mut self.triples[triple_index(a, b, c)]
            }
            _ => unreachable!(),
        }
    }

    /// Sets the value of a 2- or 3-subset given by names. Re-setting an
    /// entry to the same value is accepted; a different value is a conflict.
    pub fn set(&mut self, subset: &[&str], symbol: &str) -> Result<(), DissimError> {
        let names: Vec<String> = subset.iter().map(|s| s.to_string()).collect();
        if !(2..=3).contains(&subset.len()) {
            return Err(DissimError::MissingEntry(names));
        }
        let mut taxa = Vec::with_capacity(subset.len());
        for name in subset {
            let t = self.taxa.lookup(name)?;
            if taxa.contains(&t) {
                return Err(DissimError::RepeatedTaxon(name.to_string()));
            }
            taxa.push(t);
        }
        let value = self
            .symbols
            .get(symbol)
            .ok_or_else(|| DissimError::UnknownSymbol {
                subset: names.clone(),
                symbol: symbol.to_string(),
            })?;
        let slot = self.slot(&taxa);
        match *slot {
            Some(existing) if existing != value => {
                let mut sorted = names;
                sorted.sort();
                Err(DissimError::ConflictingEntry(sorted))
            }
            _ => {
                *slot = Some(value);
                Ok(())
            }
        }
    }

    /// Checks totality and returns the total map. The error names the first
    /// missing subset in taxon order (pairs before triples).
    pub fn validate(self) -> Result<Sym3Dissimilarity, DissimError> {
        let n = self.taxa.len();
        let mut pairs = PairTable::filled(n, Symbol(0));
        for a in 0..n {
            for b in (a + 1)..n {
                match self.pairs[a * n + b] {
                    Some(v) => pairs.set(a, b, v),
                    None => return Err(DissimError::MissingEntry(self.taxa.names_of(&[a, b]))),
                }
            }
        }
        let mut triples = vec![Symbol(0); self.triples.len()];
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let i = triple_index(a, b, c);
                    match self.triples[i] {
                        Some(v) => triples[i] = v,
                        None => {
                            return Err(DissimError::MissingEntry(self.taxa.names_of(&[a, b, c])))
                        }
                    }
                }
            }
        }
        Ok(Sym3Dissimilarity {
            taxa: self.taxa,
            symbols: self.symbols,
            pairs,
            triples,
        })
    }
}

impl fmt::Display for Sym3Dissimilarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_dissimilarity(self))
    }
}
