//! Readers for model output. Every parser is total: a value or `None`, never a panic.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;

use crate::advisor::Bucket;
use crate::text::strip_markdown;

fn regex(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("valid parser regex"))
}

/// Text following the last `keyword:` (markdown around the keyword allowed), to the end of input.
fn tail_after<'t>(re: &Regex, text: &'t str) -> Option<&'t str> {
    re.find_iter(text).last().map(|m| &text[m.end()..])
}

fn first_word(text: &str) -> String {
    let line = strip_markdown(text.lines().next().unwrap_or(""));
    line.trim_start_matches(|c: char| !c.is_ascii_alphabetic())
        .chars()
        .take_while(|c| c.is_ascii_alphabetic())
        .collect::<String>()
        .to_ascii_lowercase()
}

/// Reads `Answer: yes; Reason: State 1 ...` into the verdict and the state indices it names.
pub fn parse_validity(text: &str) -> Option<(bool, BTreeSet<usize>)> {
    static ANSWER: OnceLock<Regex> = OnceLock::new();
    static STATE: OnceLock<Regex> = OnceLock::new();
    let rest = tail_after(regex(&ANSWER, r"(?i)answer[*_\s`]*:"), text)?;
    let verdict = match first_word(rest).as_str() {
        "yes" => true,
        "no" => false,
        _ => return None,
    };
    let states = regex(&STATE, r"(?i)state\s*#?\s*(\d+)")
        .captures_iter(rest)
        .filter_map(|c| c[1].parse().ok())
        .collect();
    Some((verdict, states))
}

/// Reads the bucket named by the last `Conclusion:`; `maybe` is the middle bucket.
pub fn parse_value(text: &str) -> Option<Bucket> {
    static CONCLUSION: OnceLock<Regex> = OnceLock::new();
    let rest = tail_after(regex(&CONCLUSION, r"(?i)conclusion[*_\s`]*:"), text)?;
    match first_word(rest).as_str() {
        "sure" => Some(Bucket::Sure),
        "likely" | "maybe" => Some(Bucket::Likely),
        "impossible" => Some(Bucket::Impossible),
        _ => None,
    }
}

/// Content of the last `<solution>...</solution>` span, trimmed.
pub fn extract_solution_tag(text: &str) -> Option<String> {
    static TAG: OnceLock<Regex> = OnceLock::new();
    let m = regex(&TAG, r"(?is)<solution>(.*?)</solution>").captures_iter(text).last()?;
    let inner = m[1].trim();
    (!inner.is_empty()).then(|| inner.to_string())
}

/// Per-state votes from one validity reply over `n` states.
///
/// `yes` with no named state keeps everything; `no` prunes everything.
pub fn validity_votes(text: &str, n: usize) -> Vec<Option<bool>> {
    match parse_validity(text) {
        None => vec![None; n],
        Some((false, _)) => vec![Some(false); n],
        Some((true, named)) if named.iter().all(|i| *i >= n) => vec![Some(true); n],
        Some((true, named)) => (0..n).map(|i| Some(named.contains(&i))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_examples() {
        assert_eq!(
            parse_validity("Answer: yes; Reason: State 1 is likely to reach 24"),
            Some((true, BTreeSet::from([1])))
        );
        assert_eq!(parse_validity("Answer: no;"), Some((false, BTreeSet::new())));
        assert_eq!(parse_validity(""), None);
        assert_eq!(parse_validity("**Answer:** Yes; Reason: state 0 and State 2"), Some((true, BTreeSet::from([0, 2]))));
    }

    #[test]
    fn votes_from_reply() {
        assert_eq!(validity_votes("Answer: yes; Reason: State 1", 3), [Some(false), Some(true), Some(false)]);
        assert_eq!(validity_votes("Answer: yes", 2), [Some(true), Some(true)]);
        assert_eq!(validity_votes("Answer: no;", 2), [Some(false), Some(false)]);
        assert_eq!(validity_votes("garbage", 2), [None, None]);
    }

    #[test]
    fn value_examples() {
        assert_eq!(parse_value("Comment: ...; Conclusion: sure"), Some(Bucket::Sure));
        assert_eq!(parse_value("Conclusion: likely\nConclusion: impossible"), Some(Bucket::Impossible));
        assert_eq!(parse_value("CONCLUSION: Maybe."), Some(Bucket::Likely));
        assert_eq!(parse_value("no verdict here"), None);
    }

    #[test]
    fn solution_tags() {
        assert_eq!(extract_solution_tag("<solution> 2 + 3 * 5 + 7 = 24 </solution>").as_deref(), Some("2 + 3 * 5 + 7 = 24"));
        assert_eq!(extract_solution_tag("<solution>1</solution> then <SOLUTION>2</solution>").as_deref(), Some("2"));
        assert_eq!(extract_solution_tag("<solution>  </solution>"), None);
        assert_eq!(extract_solution_tag("none"), None);
    }
}
