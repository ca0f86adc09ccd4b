use alloc::string::String;
use core::fmt::Write;

use super::Pdfa;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DotOptions {
    /// Edge labels `g<symbol> : <probability>` and termination annotations.
    /// When off, edges are unlabeled and accepting nodes carry only their set.
    pub probabilities: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        Self { probabilities: true }
    }
}

/// Graphviz rendering. Nodes are labeled with their completed set, accepting
/// nodes are double circles, probabilities have four decimals. Nodes and
/// edges are emitted in state-id then symbol order.
pub fn export_dot(pdfa: &Pdfa, options: DotOptions) -> String {
    let dfa = pdfa.dfa();
    let mut out = String::new();
    // writing into a String cannot fail
    let _ = writeln!(out, "digraph pdfa {{");
    let _ = writeln!(out, "    rankdir=LR;");
    let _ = writeln!(out, "    node [shape=circle];");
    let _ = writeln!(out, "    start [shape=point];");
    let _ = writeln!(out, "    start -> {};", dfa.initial());
    for q in dfa.states() {
        let set = dfa.completed(q);
        if dfa.is_accepting(q) {
            if options.probabilities {
                let _ = writeln!(
                    out,
                    "    {q} [label=\"{set}\\nF_P={:.4}\", shape=doublecircle];",
                    pdfa.accept_probability(q)
                );
            } else {
                let _ = writeln!(out, "    {q} [label=\"{set}\", shape=doublecircle];");
            }
        } else {
            let _ = writeln!(out, "    {q} [label=\"{set}\"];");
        }
    }
    for (q, s, t) in dfa.transitions() {
        if options.probabilities {
            let _ = writeln!(out, "    {q} -> {t} [label=\"g{s} : {:.4}\"];", pdfa.transition_probability(q, s));
        } else {
            let _ = writeln!(out, "    {q} -> {t};");
        }
    }
    out.push_str("}\n");
    out
}
