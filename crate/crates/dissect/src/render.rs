//! DOT and TikZ drawings of (decorated) diagrams.

use crate::decoration::DecoratedDiagram;
use std::fmt::Write;

/// Γ(D) as a DOT digraph: chords i→t_i are solid, sides j→j+1 are dashed.
pub fn to_dot(d: &DecoratedDiagram) -> String {
    let n = d.degree();
    let mut s = String::from("digraph D {\n  node [shape=circle];\n  0 [shape=doublecircle];\n");
    for i in 1..=n {
        let _ = writeln!(s, "  {i};");
    }
    for i in 1..=n {
        let _ = writeln!(
            s,
            "  {i} -> {} [kind=chord, label=\"a{i}={}\"];",
            d.diagram.parent(i),
            escape(&d.a[i - 1].to_string())
        );
    }
    for j in 0..=n {
        let (u, v) = d.diagram.side_endpoints(j);
        let _ = writeln!(s, "  {u} -> {v} [kind=side, style=dashed, label=\"b{j}={}\"];", escape(&d.b[j].to_string()));
    }
    s.push_str("}\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Vertices on a circle, counterclockwise from the bottom, with the root drawn hollow.
pub fn to_tikz(d: &DecoratedDiagram) -> String {
    let n = d.degree();
    let mut s = String::from("\\begin{tikzpicture}[scale=1.5]\n  \\draw (0,0) circle (1);\n");
    let angle = |v: usize| -90.0 + 360.0 * v as f64 / (n + 1) as f64;
    for i in 1..=n {
        let label = if d.is_undecorated() { String::new() } else { format!("$a_{{{i}}}$") };
        let _ = writeln!(
            s,
            "  \\draw[thick] ({:.2}:1) -- node[midway, fill=white, inner sep=1pt] {{\\scriptsize {label}}} ({:.2}:1);",
            angle(i),
            angle(d.diagram.parent(i))
        );
    }
    for v in 0..=n {
        let style = if v == 0 { "draw, fill=white" } else { "fill=black" };
        let _ = writeln!(s, "  \\node[circle, {style}, inner sep=1.5pt] (v{v}) at ({:.2}:1) {{}};", angle(v));
        let _ = writeln!(s, "  \\node at ({:.2}:1.25) {{\\scriptsize ${v}$}};", angle(v));
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DissectionDiagram;

    #[test]
    fn dot_counts_edges() {
        let d = DecoratedDiagram::symbolic(DissectionDiagram::path_tree(3));
        let dot = to_dot(&d);
        assert_eq!(dot.matches("kind=chord").count(), 3);
        assert_eq!(dot.matches("kind=side").count(), 4);
        assert!(dot.contains("3 -> 0 [kind=side"));
    }
}
