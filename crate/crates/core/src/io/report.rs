use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::dissim::TaxonSet;
use crate::popping::PropertyReport;
use crate::property::Property;

#[derive(Serialize)]
struct NamedVerdict {
    pass: bool,
    witness: Vec<String>,
}

/// JSON object keyed by property name with `pass` and `witness` fields.
pub fn report_json(report: &PropertyReport, taxa: &TaxonSet) -> String {
    let map: BTreeMap<&str, NamedVerdict> = Property::ALL
        .iter()
        .map(|&p| {
            let v = report.verdict(p);
            (
                p.name(),
                NamedVerdict {
                    pass: v.pass,
                    witness: taxa.names_of(&v.witness),
                },
            )
        })
        .collect();
    serde_json::to_string_pretty(&map).expect("report serializes")
}

/// Human-readable table, one property per line.
pub fn report_table(report: &PropertyReport, taxa: &TaxonSet) -> String {
    let mut out = String::new();
    for p in Property::ALL {
        let v = report.verdict(p);
        let status = if v.pass { "pass" } else { "FAIL" };
        if v.witness.is_empty() {
            let _ = writeln!(out, "{:<3} {status}", p.name());
        } else {
            let _ = writeln!(
                out,
                "{:<3} {status}  {{{}}}",
                p.name(),
                taxa.names_of(&v.witness).join(",")
            );
        }
    }
    match &report.rejection {
        None => out.push_str("representable\n"),
        Some(e) => {
            let _ = writeln!(out, "rejected: {}", e.describe(taxa));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::independence_p1;
    use crate::popping::check_properties;

    #[test]
    fn json_has_stable_keys() {
        let d = independence_p1();
        let json = report_json(&check_properties(&d), d.taxa());
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 10);
        assert_eq!(value["P1"]["pass"], false);
        assert_eq!(value["P1"]["witness"], serde_json::json!(["x", "y", "z"]));
    }
}
