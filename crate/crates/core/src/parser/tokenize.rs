/// Lowercased word and punctuation tokens. Sentence punctuation and
/// possessive `'s` are split off.
pub fn tokenize(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in line.split_whitespace() {
        let lower = raw.to_lowercase();
        let mut word = lower.as_str();
        let mut tail = Vec::new();
        while let Some(last) = word.chars().last() {
            if matches!(last, '.' | '?' | ',' | '!') {
                tail.push(last.to_string());
                word = &word[..word.len() - 1];
            } else {
                break;
            }
        }
        if let Some(stem) = word.strip_suffix("'s") {
            if !stem.is_empty() {
                out.push(stem.to_string());
            }
            out.push("'s".to_string());
        } else if !word.is_empty() {
            out.push(word.to_string());
        }
        out.extend(tail.into_iter().rev());
    }
    out
}
