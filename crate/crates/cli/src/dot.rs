//! DOT rendering of stratification lattices.

use std::fmt::Write;

use stratakit_core::StratLattice;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Digraph with one node per piece and an arrow `R -> S` for each Hasse
/// edge `R ⊆ ∂S`.
pub fn render(lattice: &StratLattice) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&lattice.kind.to_string())).unwrap();
    out.push_str("  rankdir=BT;\n");
    for n in &lattice.nodes {
        let label = format!("{} ({})", n.label, n.dim);
        writeln!(
            out,
            "  {} [dim={}, label={}];",
            quote(&n.label),
            n.dim,
            quote(&label)
        )
        .unwrap();
    }
    for (r, s) in lattice.edge_labels() {
        writeln!(out, "  {} -> {};", quote(&r), quote(&s)).unwrap();
    }
    out.push_str("}\n");
    out
}
