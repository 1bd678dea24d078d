use std::fmt::Write;

use crate::network::LabelledNetwork;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering with one cluster per cycle.
pub fn export_dot(net: &LabelledNetwork) -> String {
    let mut out = String::from("digraph network {\n  node [shape=circle, fontsize=10];\n");
    let mut stack = vec![net.root()];
    let mut seen = vec![false; net.vertex_count()];
    let mut order = Vec::new();
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        order.push(v);
        stack.extend(net.children(v).iter().rev());
    }
    for &v in &order {
        if net.is_leaf(v) {
            let names: Vec<&str> = net.block(v).iter().map(|&t| net.taxa().name(t)).collect();
            let _ = writeln!(
                out,
                "  v{v} [shape=plaintext, label=\"{}\"];",
                escape(&names.join(","))
            );
        } else if net.is_hybrid(v) {
            let _ = writeln!(out, "  v{v} [shape=square, label=\"\"];");
        } else {
            let label = net.label(v).map(|s| net.symbols().name(s)).unwrap_or("");
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", escape(label));
        }
    }
    for (i, cycle) in net.cycles().iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(out, "    style=dashed; label=\"cycle {}\";", i + 1);
        for v in cycle.vertices() {
            let _ = writeln!(out, "    v{v};");
        }
        out.push_str("  }\n");
    }
    for &v in &order {
        for &c in net.children(v) {
            let _ = writeln!(out, "  v{v} -> v{c};");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::worked_network;

    #[test]
    fn one_cluster_per_cycle() {
        let dot = export_dot(&worked_network());
        assert_eq!(dot.matches("subgraph cluster_").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), worked_network().edge_count());
        assert!(dot.starts_with("digraph network {"));
    }
}
