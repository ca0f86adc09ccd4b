use std::fmt::Write;

use pdfa_core::{Event, ExecutionTrace, Plan};

/// Plan as TOML: start and end state, symbol ids, expected probability.
pub fn format_plan(plan: &Plan) -> String {
    let ids: Vec<String> = plan.symbols.iter().map(|s| s.0.to_string()).collect();
    format!(
        "start = {}\nend = {}\nsymbols = [{}]\nprobability = {:?}\n",
        plan.start.0,
        plan.end.0,
        ids.join(", "),
        plan.expected_probability
    )
}

/// One event per line, tab-separated: kind, DFA state, symbol (`-` when
/// none), commands issued so far, and for plan events the planned word.
pub fn format_trace(trace: &ExecutionTrace) -> String {
    let mut out = String::from("# kind\tstate\tsymbol\tstep\tplan\n");
    for e in &trace.events {
        let symbol = e.event.symbol().map_or_else(|| "-".to_string(), |s| s.to_string());
        let _ = write!(out, "{}\t{}\t{}\t{}", e.event.kind(), e.event.state().0, symbol, e.step);
        if let Event::Planned(p) | Event::Replanned(p) = &e.event {
            let _ = write!(out, "\t{}", p.word());
        }
        out.push('\n');
    }
    out
}
