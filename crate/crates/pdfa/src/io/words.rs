use pdfa_core::Word;

use super::Error;

/// One word per line, symbols as space-separated ids, `e` for the empty word.
pub fn format_words(words: &[Word]) -> String {
    words.iter().map(|w| format!("{w}\n")).collect()
}

pub fn parse_words(text: &str) -> Result<Vec<Word>, Error> {
    let mut words = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if body == "e" {
            words.push(Word::empty());
            continue;
        }
        let ids = body
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(i + 1, format!("bad symbol {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        words.push(Word::from(ids.as_slice()));
    }
    Ok(words)
}
