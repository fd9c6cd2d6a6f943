//! Labels a small bipolar framework under two sets of facts.
//!
//! `a` supports `b`, `d` attacks `b`, and `c` and `d` attack each other.

use argrule::framework::bipolar_extension;
use argrule::ContextualGraph;

fn main() {
    let names = ["a", "b", "c", "d"];
    let attacks = [(3, 1), (2, 3), (3, 2)];
    let supports = [(0, 1)];
    let full = ContextualGraph::framework(&names, &attacks, &supports);

    let mut without_d = vec![true; 4];
    without_d[3] = false;
    let partial = full.restrict(&without_d);

    for (title, g) in [("all facts", &full), ("without d", &partial)] {
        let labels = bipolar_extension(g);
        let line: Vec<String> = g
            .active()
            .map(|id| format!("{}={}", g.name(id), labels.0[id.0]))
            .collect();
        println!("{title:10} {}", line.join(" "));
    }
}
