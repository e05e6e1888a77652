use crate::index::Document;
use crate::ontology::ExpandedQuery;

pub const DEFAULT_SNIPPET_LEN: usize = 160;
pub const MARK_OPEN: char = '«';
pub const MARK_CLOSE: char = '»';

/// Body spans (char offsets) of tokens matching any expanded-query term.
fn matches(doc: &Document, eq: &ExpandedQuery) -> Vec<(usize, usize)> {
    doc.body_tokens
        .iter()
        .filter(|t| eq.contains(&t.normalized))
        .map(|t| (t.char_offset, t.char_end()))
        .collect()
}

/// Body window of at most `max_len` chars holding the most query-term
/// matches, with each match wrapped in `«»`. Falls back to the body prefix
/// when nothing matches.
pub fn generate_snippet(doc: &Document, eq: &ExpandedQuery, max_len: usize) -> String {
    let body: Vec<char> = doc.body.chars().collect();
    let spans = matches(doc, eq);

    // best cluster: most matches whose full extent fits in max_len
    let mut best: Option<(usize, usize, usize)> = None;
    let mut j = 0;
    for i in 0..spans.len() {
        j = j.max(i);
        while j + 1 < spans.len() && spans[j + 1].1 - spans[i].0 <= max_len {
            j += 1;
        }
        if spans[j].1 - spans[i].0 > max_len {
            continue;
        }
        let count = j - i + 1;
        if best.is_none_or(|(c, _, _)| count > c) {
            best = Some((count, spans[i].0, spans[j].1));
        }
    }

    let Some((_, start, end)) = best else {
        return body.iter().take(max_len).collect::<String>().trim().to_string();
    };
    let slack = max_len - (end - start);
    let max_start = body.len().saturating_sub(max_len);
    let win_start = start.saturating_sub(slack / 2).min(max_start);
    let win_end = (win_start + max_len).min(body.len());
    // snap to word boundaries where the text has them (Khmer often does not)
    let win_start = (win_start..=start)
        .find(|&i| i == 0 || body[i - 1].is_whitespace())
        .unwrap_or(win_start);
    let win_end = (end..=win_end)
        .rev()
        .find(|&j| j == body.len() || body[j].is_whitespace())
        .unwrap_or(win_end);

    let mut out = String::new();
    let mut k = 0;
    for (pos, ch) in body.iter().enumerate().take(win_end).skip(win_start) {
        while k < spans.len() && spans[k].0 < win_start {
            k += 1;
        }
        let inside = |s: &(usize, usize)| s.0 >= win_start && s.1 <= win_end;
        if let Some(s) = spans[k..].iter().find(|s| s.0 == pos) {
            if inside(s) {
                out.push(MARK_OPEN);
            }
        }
        out.push(*ch);
        if spans.iter().any(|s| s.1 == pos + 1 && inside(s)) {
            out.push(MARK_CLOSE);
        }
    }
    out.trim().to_string()
}
