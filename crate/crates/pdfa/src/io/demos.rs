use std::fmt::Write;
use std::path::Path;

use pdfa_core::{Corpus, Demonstration, WorldState};

use super::Error;

/// Parses a demonstration file: one state per line,
/// `demo,time,f0,...,f{n-1}`, each feature a decimal or `undef`. Lines must
/// be sorted by `(demo, time)`. Blank lines and `#` comments are skipped.
///
/// With `num_features` unset, the first record fixes the dimension.
pub fn parse_demos(text: &str, num_features: Option<usize>) -> Result<Corpus, Error> {
    let mut demos = Vec::new();
    let mut current: Vec<WorldState> = Vec::new();
    let mut last: Option<(u64, u64)> = None;
    let mut dim = num_features;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        let n = *dim.get_or_insert(fields.len().saturating_sub(2));
        if fields.len() != n + 2 {
            return Err(Error::parse(
                line,
                format!("expected {} fields (demo, time and {n} features), found {}", n + 2, fields.len()),
            ));
        }
        let demo: u64 = fields[0].parse().map_err(|_| Error::parse(line, format!("bad demo index {:?}", fields[0])))?;
        let time: u64 = fields[1].parse().map_err(|_| Error::parse(line, format!("bad time index {:?}", fields[1])))?;
        if let Some(prev) = last {
            if (demo, time) <= prev {
                return Err(Error::parse(line, "records are not sorted by (demo, time)"));
            }
            if demo != prev.0 {
                demos.push(Demonstration::new(std::mem::take(&mut current)).expect("non-empty"));
            }
        }
        last = Some((demo, time));

        let values = fields[2..]
            .iter()
            .enumerate()
            .map(|(k, f)| parse_feature(f).map_err(|m| Error::parse(line, format!("feature {k}: {m}"))))
            .collect::<Result<Vec<_>, _>>()?;
        current.push(WorldState::new(values).map_err(|e| Error::parse(line, e.to_string()))?);
    }

    if current.is_empty() {
        return Err(Error::parse(text.lines().count().max(1), "no demonstration records"));
    }
    demos.push(Demonstration::new(current).expect("non-empty"));
    Corpus::new(dim.unwrap_or(0), demos).map_err(|e| Error::invalid(e.to_string()))
}

fn parse_feature(field: &str) -> Result<Option<f64>, String> {
    if field == "undef" {
        return Ok(None);
    }
    // Rust's float parser accepts "nan" and "inf"; the format does not
    let plain = field.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    match field.parse::<f64>() {
        Ok(v) if plain && v.is_finite() => Ok(Some(v)),
        _ => Err(format!("expected a finite decimal or `undef`, found {field:?}")),
    }
}

pub fn format_demos(corpus: &Corpus) -> String {
    let mut out = String::new();
    let _ = write!(out, "# demo,time");
    for f in 0..corpus.num_features() {
        let _ = write!(out, ",f{f}");
    }
    out.push('\n');
    for (d, demo) in corpus.demos().iter().enumerate() {
        for (t, state) in demo.states().iter().enumerate() {
            let _ = write!(out, "{d},{t}");
            for v in state.values() {
                match v {
                    Some(x) => {
                        let _ = write!(out, ",{x:?}");
                    }
                    None => out.push_str(",undef"),
                }
            }
            out.push('\n');
        }
    }
    out
}

pub fn load_demos(path: &Path, num_features: Option<usize>) -> Result<Corpus, Error> {
    super::load_with(path, |text| parse_demos(text, num_features))
}
