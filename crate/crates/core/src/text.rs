//! Helpers for pulling structured fragments out of free-form model output.

/// Removes markdown emphasis, code ticks, and simple LaTeX wrappers from one line.
pub fn strip_markdown(line: &str) -> String {
    let mut s = line
        .replace("\\times", "*")
        .replace("\\cdot", "*")
        .replace("\\div", "/")
        .replace("\\left", "")
        .replace("\\right", "")
        .replace("\\(", "")
        .replace("\\)", "")
        .replace("\\[", "")
        .replace("\\]", "");
    s.retain(|c| !matches!(c, '`' | '$' | '#'));
    // `*` is multiplication inside expressions, so only runs of two or more are emphasis.
    let s = s.replace("***", "").replace("**", "");
    let s = s.trim_start_matches(['>', '-', ' ']).trim();
    s.trim_end_matches('.').trim().to_string()
}

/// Text following the last case-insensitive occurrence of `keyword:` up to the end of its line.
pub fn after_last_keyword(text: &str, keyword: &str) -> Option<String> {
    let lower = text.to_ascii_lowercase();
    let needle = keyword.to_ascii_lowercase();
    let mut found = None;
    let mut from = 0;
    while let Some(pos) = lower[from..].find(&needle) {
        let start = from + pos;
        let mut rest = start + needle.len();
        // Allow markdown between the keyword and the colon, e.g. `**Answer**:`.
        while rest < lower.len() && matches!(lower.as_bytes()[rest], b'*' | b' ' | b'`') {
            rest += 1;
        }
        if lower.as_bytes().get(rest) == Some(&b':') {
            found = Some(rest + 1);
        }
        from = start + needle.len();
    }
    let start = found?;
    let line = text[start..].lines().next().unwrap_or_default();
    Some(line.to_string())
}
