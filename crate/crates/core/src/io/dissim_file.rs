use thiserror::Error;

use crate::dissim::{
    DissimError, PartialDissimilarity, Sym3Dissimilarity, SymbolAlphabet, TaxonSet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DissimFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Entry {
        line: usize,
        #[source]
        source: DissimError,
    },
    #[error(transparent)]
    Dissim(#[from] DissimError),
}

impl DissimFileError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        DissimFileError::Syntax {
            line,
            message: message.into(),
        }
    }

    /// The underlying map error, if any.
    pub fn dissim_error(&self) -> Option<&DissimError> {
        match self {
            DissimFileError::Syntax { .. } => None,
            DissimFileError::Entry { source, .. } => Some(source),
            DissimFileError::Dissim(e) => Some(e),
        }
    }
}

/// Parses the line-oriented dissimilarity format.
///
/// ```text
/// # comment
/// taxa: a b c
/// symbols: A B
/// a b A
/// a c B
/// b c B
/// a b c A
/// ```
pub fn parse_dissimilarity(text: &str) -> Result<Sym3Dissimilarity, DissimFileError> {
    let mut taxa: Option<TaxonSet> = None;
    let mut symbols: Option<SymbolAlphabet> = None;
    let mut partial: Option<PartialDissimilarity> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some(&first) = tokens.first() else {
            continue;
        };
        if let Some(rest) = header(first, "taxa:") {
            if taxa.is_some() {
                return Err(DissimFileError::syntax(line, "repeated taxa header"));
            }
            let names = rest.into_iter().chain(tokens[1..].iter().copied());
            taxa = Some(
                TaxonSet::new(names).map_err(|source| DissimFileError::Entry { line, source })?,
            );
        } else if let Some(rest) = header(first, "symbols:") {
            if symbols.is_some() {
                return Err(DissimFileError::syntax(line, "repeated symbols header"));
            }
            let names = rest.into_iter().chain(tokens[1..].iter().copied());
            symbols = Some(
                SymbolAlphabet::new(names)
                    .map_err(|source| DissimFileError::Entry { line, source })?,
            );
        } else {
            if partial.is_none() {
                match (&taxa, &symbols) {
                    (Some(t), Some(s)) => {
                        partial = Some(PartialDissimilarity::new(t.clone(), s.clone()))
                    }
                    _ => {
                        return Err(DissimFileError::syntax(
                            line,
                            "entry before taxa and symbols headers",
                        ))
                    }
                }
            }
            if tokens.len() != 3 && tokens.len() != 4 {
                return Err(DissimFileError::syntax(
                    line,
                    format!(
                        "expected 2 or 3 taxa and a symbol, found {} fields",
                        tokens.len()
                    ),
                ));
            }
            let (subset, symbol) = tokens.split_at(tokens.len() - 1);
            partial
                .as_mut()
                .unwrap()
                .set(subset, symbol[0])
                .map_err(|source| DissimFileError::Entry { line, source })?;
        }
    }

    match partial {
        Some(p) => Ok(p.validate()?),
        None => match (taxa, symbols) {
            (Some(t), Some(s)) => Ok(PartialDissimilarity::new(t, s).validate()?),
            (None, _) => Err(DissimFileError::syntax(0, "missing taxa header")),
            (_, None) => Err(DissimFileError::syntax(0, "missing symbols header")),
        },
    }
}

fn header<'a>(token: &'a str, key: &str) -> Option<Option<&'a str>> {
    let rest = token.strip_prefix(key)?;
    Some(if rest.is_empty() { None } else { Some(rest) })
}

/// Prints headers in alphabet order and entries sorted by their name tuples.
pub fn print_dissimilarity(delta: &Sym3Dissimilarity) -> String {
    let taxa = delta.taxa();
    let mut out = String::new();
    out.push_str("taxa:");
    for name in taxa.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push_str("\nsymbols:");
    for name in delta.symbols().names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');

    let mut entries: Vec<(Vec<&str>, &str)> = delta
        .subsets()
        .map(|s| {
            let mut names: Vec<&str> = s.iter().map(|&t| taxa.name(t)).collect();
            names.sort_unstable();
            (names, delta.symbols().name(delta.value(&s)))
        })
        .collect();
    entries.sort_unstable();
    for (names, symbol) in entries {
        out.push_str(&names.join(" "));
        out.push(' ');
        out.push_str(symbol);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::worked_dissimilarity;

    #[test]
    fn minimal_file() {
        let d =
            parse_dissimilarity("taxa: a b c\nsymbols: A B\na b A\na c B # note\nb c B\na b c A\n")
                .unwrap();
        assert_eq!(d.n(), 3);
        let (a, c) = (d.taxa().get("a").unwrap(), d.taxa().get("c").unwrap());
        assert_eq!(d.symbols().name(d.pair(a, c)), "B");
    }

    #[test]
    fn worked_map_prints_sorted() {
        let text = print_dissimilarity(&worked_dissimilarity());
        let body: Vec<&str> = text.lines().skip(2).collect();
        let expected = [
            "a b B", "a b c B", "a b d A", "a c D", "a c d C", "a d C", "b c B", "b c d A",
            "b d A", "c d C",
        ];
        assert_eq!(body, expected);
        let again = parse_dissimilarity(&text).unwrap();
        assert_eq!(again, worked_dissimilarity());
        assert_eq!(print_dissimilarity(&again), text);
    }

    #[test]
    fn conflicting_entry() {
        let err = parse_dissimilarity("taxa: a b c\nsymbols: X Y\na b X\na b Y\n").unwrap_err();
        assert!(matches!(
            err.dissim_error(),
            Some(DissimError::ConflictingEntry(_))
        ));
    }

    #[test]
    fn duplicate_identical_entry() {
        let d =
            parse_dissimilarity("taxa: a b c\nsymbols: X\na b X\nb a X\na c X\nb c X\nc b a X\n");
        assert!(d.is_ok());
    }

    #[test]
    fn missing_entry() {
        let err =
            parse_dissimilarity("taxa: a b c\nsymbols: X\na b X\na c X\nb c X\n").unwrap_err();
        assert_eq!(
            err.dissim_error(),
            Some(&DissimError::MissingEntry(vec![
                "a".into(),
                "b".into(),
                "c".into()
            ]))
        );
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = parse_dissimilarity("taxa: a b\nsymbols: X\na X\n").unwrap_err();
        assert!(matches!(err, DissimFileError::Syntax { line: 3, .. }));
        let err = parse_dissimilarity("a b X\n").unwrap_err();
        assert!(matches!(err, DissimFileError::Syntax { line: 1, .. }));
    }
}
