use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dissim::{DissimError, SymbolAlphabet, TaxonSet};
use crate::network::{LabelledNetwork, NetworkDraft, NetworkError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkFileError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("hybrid tag #{0} does not appear exactly twice with one definition")]
    DanglingHybridTag(String),
    #[error("network is not level-1")]
    NotLevelOne,
    #[error("invalid network: {0}")]
    Invalid(NetworkError),
    #[error(transparent)]
    Names(#[from] DissimError),
}

impl From<NetworkError> for NetworkFileError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::NotLevelOne => NetworkFileError::NotLevelOne,
            other => NetworkFileError::Invalid(other),
        }
    }
}

#[derive(Debug)]
enum Node {
    Leaf {
        name: Option<String>,
        tag: Option<String>,
    },
    Interior {
        children: Vec<Node>,
        label: Option<String>,
        tag: Option<String>,
    },
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> NetworkFileError {
        NetworkFileError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn peek(&mut self) -> Option<char> {
        loop {
            let c = self.text[self.pos..].chars().next()?;
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == '[' {
                self.pos += self.text[self.pos..].find(']')? + 1;
            } else {
                return Some(c);
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<Option<(String, bool)>, NetworkFileError> {
        match self.peek() {
            Some('\'') => {
                self.pos += 1;
                let mut out = String::new();
                loop {
                    let Some(c) = self.text[self.pos..].chars().next() else {
                        return Err(self.error("unterminated quoted name"));
                    };
                    self.pos += c.len_utf8();
                    if c == '\'' {
                        if self.text[self.pos..].starts_with('\'') {
                            self.pos += 1;
                            out.push('\'');
                        } else {
                            return Ok(Some((out, true)));
                        }
                    } else {
                        out.push(c);
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.text[self.pos..].chars().next() {
                    if c.is_whitespace() || "(),:;[]'".contains(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                if self.pos == start {
                    Ok(None)
                } else {
                    Ok(Some((self.text[start..self.pos].to_string(), false)))
                }
            }
            None => Ok(None),
        }
    }

    /// Name and hybrid tag following a subtree or forming a leaf.
    fn name_and_tag(&mut self) -> Result<(Option<String>, Option<String>), NetworkFileError> {
        let mut name = None;
        let mut tag = None;
        if let Some((word, quoted)) = self.word()? {
            match word.split_once('#') {
                Some((before, after)) if !quoted => {
                    if after.is_empty() {
                        return Err(self.error("empty hybrid tag"));
                    }
                    name = (!before.is_empty()).then(|| before.to_string());
                    tag = Some(after.to_string());
                }
                _ => name = Some(word),
            }
        }
        while self.eat(':') {
            self.word()?;
        }
        Ok((name, tag))
    }

    fn subtree(&mut self) -> Result<Node, NetworkFileError> {
        if self.eat('(') {
            let mut children = vec![self.subtree()?];
            while self.eat(',') {
                children.push(self.subtree()?);
            }
            if !self.eat(')') {
                return Err(self.error("expected ',' or ')'"));
            }
            let (label, tag) = self.name_and_tag()?;
            Ok(Node::Interior {
                children,
                label,
                tag,
            })
        } else {
            let (name, tag) = self.name_and_tag()?;
            if name.is_none() && tag.is_none() {
                return Err(self.error("expected a name, a hybrid tag or '('"));
            }
            Ok(Node::Leaf { name, tag })
        }
    }
}

fn collect(node: &Node, leaves: &mut Vec<String>, labels: &mut BTreeSet<String>) {
    match node {
        Node::Leaf { name, .. } => leaves.extend(name.iter().cloned()),
        Node::Interior {
            children, label, ..
        } => {
            labels.extend(label.iter().cloned());
            for child in children {
                collect(child, leaves, labels);
            }
        }
    }
}

#[derive(Default)]
struct Tags {
    vertex: BTreeMap<String, VertexId>,
    definitions: BTreeMap<String, usize>,
    occurrences: BTreeMap<String, usize>,
}

impl Tags {
    fn vertex(&mut self, draft: &mut NetworkDraft, tag: &str, defines: bool) -> VertexId {
        *self.occurrences.entry(tag.to_string()).or_default() += 1;
        if defines {
            *self.definitions.entry(tag.to_string()).or_default() += 1;
        }
        *self
            .vertex
            .entry(tag.to_string())
            .or_insert_with(|| draft.add_interior(None))
    }
}

fn build(
    node: &Node,
    draft: &mut NetworkDraft,
    tags: &mut Tags,
) -> Result<VertexId, NetworkFileError> {
    match node {
        Node::Leaf { name, tag } => {
            let leaf = match name {
                Some(name) => Some(draft.add_leaf(vec![draft.taxa().lookup(name)?])),
                None => None,
            };
            match (leaf, tag) {
                (Some(leaf), None) => Ok(leaf),
                (leaf, Some(tag)) => {
                    let h = tags.vertex(draft, tag, leaf.is_some());
                    if let Some(leaf) = leaf {
                        draft.add_edge(h, leaf);
                    }
                    Ok(h)
                }
                (None, None) => unreachable!(),
            }
        }
        Node::Interior {
            children,
            label,
            tag,
        } => {
            let v = match tag {
                Some(tag) => {
                    let h = tags.vertex(draft, tag, true);
                    if let Some(label) = label {
                        let s = draft.symbols().get(label).unwrap();
                        draft.set_label(h, Some(s));
                    }
                    h
                }
                None => {
                    let s = label.as_ref().map(|l| draft.symbols().get(l).unwrap());
                    draft.add_interior(s)
                }
            };
            for child in children {
                let c = build(child, draft, tags)?;
                draft.add_edge(v, c);
            }
            Ok(v)
        }
    }
}

/// Parses an extended Newick network. Taxa and symbols are ordered by name.
pub fn parse_network(text: &str) -> Result<LabelledNetwork, NetworkFileError> {
    let mut parser = Parser { text, pos: 0 };
    let tree = parser.subtree()?;
    if !parser.eat(';') {
        return Err(parser.error("expected ';'"));
    }
    if parser.peek().is_some() {
        return Err(parser.error("trailing text after ';'"));
    }

    let mut leaves = Vec::new();
    let mut labels = BTreeSet::new();
    collect(&tree, &mut leaves, &mut labels);
    leaves.sort();
    if let Some(w) = leaves.windows(2).find(|w| w[0] == w[1]) {
        return Err(DissimError::DuplicateName(w[0].clone()).into());
    }
    let taxa = TaxonSet::new(leaves)?;
    let symbols = SymbolAlphabet::new(labels)?;
    let mut draft = NetworkDraft::new(taxa, symbols);
    let mut tags = Tags::default();
    build(&tree, &mut draft, &mut tags)?;
    for (tag, &count) in &tags.occurrences {
        if count != 2 || tags.definitions.get(tag).copied().unwrap_or(0) != 1 {
            return Err(NetworkFileError::DanglingHybridTag(tag.clone()));
        }
    }
    Ok(draft.finish()?)
}

fn quoted(name: &str) -> String {
    if name.chars().any(|c| "(),:;[]'".contains(c)) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Prints a network in extended Newick. Children are ordered by their
/// sorted descendant taxa and hybrid tags are numbered in visiting order.
pub fn print_network(net: &LabelledNetwork) -> String {
    let mut tags: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = String::new();
    write_vertex(net, net.root(), &mut tags, &mut out);
    out.push(';');
    out
}

fn write_vertex(
    net: &LabelledNetwork,
    v: VertexId,
    tags: &mut BTreeMap<VertexId, usize>,
    out: &mut String,
) {
    if net.is_leaf(v) {
        let names: Vec<String> = net
            .block(v)
            .iter()
            .map(|&t| net.taxa().name(t).to_string())
            .collect();
        out.push_str(&quoted(&names.join("+")));
        return;
    }
    if net.is_hybrid(v) {
        if let Some(k) = tags.get(&v) {
            out.push_str(&format!("#H{k}"));
            return;
        }
        let k = tags.len() + 1;
        tags.insert(v, k);
        write_children(net, v, tags, out);
        out.push_str(&format!("#H{k}"));
        return;
    }
    write_children(net, v, tags, out);
    if let Some(s) = net.label(v) {
        out.push_str(&quoted(net.symbols().name(s)));
    }
}

fn write_children(
    net: &LabelledNetwork,
    v: VertexId,
    tags: &mut BTreeMap<VertexId, usize>,
    out: &mut String,
) {
    let mut children = net.children(v).to_vec();
    children.sort_by_cached_key(|&c| net.offspring(c).ones().collect::<Vec<_>>());
    out.push('(');
    for (i, &c) in children.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_vertex(net, c, tags, out);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::worked_network;

    #[test]
    fn worked_network_text() {
        let text = print_network(&worked_network());
        assert_eq!(text, "((((a,c)D)#H1,b)B,(#H1,d)C)A;");
        let back = parse_network(&text).unwrap();
        assert!(back.isomorphic(&worked_network()));
        assert_eq!(print_network(&back), text);
    }

    #[test]
    fn plain_newick_tree() {
        let net = parse_network("((a:1.0,b:2)X:0.5,'c')Y;").unwrap();
        assert_eq!(net.cycles().len(), 0);
        assert_eq!(net.taxa().len(), 3);
        assert_eq!(print_network(&net), "((a,b)X,c)Y;");
    }

    #[test]
    fn dangling_tag() {
        assert_eq!(
            parse_network("((a,b)#H1,c)A;").unwrap_err(),
            NetworkFileError::DanglingHybridTag("H1".into())
        );
        assert!(matches!(
            parse_network("(#H1,#H1,c)A;").unwrap_err(),
            NetworkFileError::DanglingHybridTag(_)
        ));
    }

    #[test]
    fn leaf_hybrid_shorthand() {
        let net = parse_network("((a#H1,b)B,(#H1,c)C)A;").unwrap();
        assert_eq!(net.cycles().len(), 1);
        assert_eq!(print_network(&net), "(((a)#H1,b)B,(#H1,c)C)A;");
    }

    #[test]
    fn overlapping_cycles_are_not_level_one() {
        let text = "((((a)#H1,b)B,(#H1,(c)#H2)C)A,(#H2,d)D)E;";
        assert!(matches!(
            parse_network(text),
            Err(NetworkFileError::NotLevelOne)
        ));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_network("(a,b)A"),
            Err(NetworkFileError::Syntax { .. })
        ));
        assert!(matches!(
            parse_network("(a,b;"),
            Err(NetworkFileError::Syntax { .. })
        ));
        assert!(matches!(
            parse_network("(a,b)A; x"),
            Err(NetworkFileError::Syntax { .. })
        ));
    }

    #[test]
    fn quoting() {
        assert_eq!(quoted("a(b)"), "'a(b)'");
        assert_eq!(quoted("it's"), "'it''s'");
        assert_eq!(quoted("plain"), "plain");
    }
}
