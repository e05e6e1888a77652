use scraper::{ElementRef, Html, Node, Selector};

use crate::error::{Error, Result};

const SKIPPED: &[&str] = &["script", "style", "noscript", "template"];

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Elements that break a line when rendered; inline ones (b, a, span, ...)
/// join their text to the neighbours without a space.
const BLOCK: &[&str] = &[
    "address", "article", "blockquote", "br", "dd", "div", "dl", "dt", "figcaption", "footer",
    "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "ol", "p", "pre", "section",
    "table", "td", "th", "tr", "ul",
];

fn visible_text(el: ElementRef<'_>) -> String {
    let mut out = String::new();
    for node in el.descendants() {
        let hidden = node.ancestors().any(|a| {
            a.value()
                .as_element()
                .is_some_and(|e| SKIPPED.contains(&e.name()))
        });
        match node.value() {
            _ if hidden => {}
            Node::Text(text) => out.push_str(text),
            Node::Element(e) if BLOCK.contains(&e.name()) => out.push(' '),
            _ => {}
        }
    }
    collapse(&out)
}

fn first_text(doc: &Html, selector: &str) -> Option<String> {
    let sel = Selector::parse(selector).expect("static selector");
    doc.select(&sel)
        .map(visible_text)
        .find(|t| !t.is_empty())
}

/// Split an article page into `(title, body)`.
///
/// The title is the first non-empty `<title>`, falling back to the first
/// `<h1>`. The body is the text of every `<p>` and `<article>` element (an
/// element nested in one already taken is not repeated), with script and
/// style content dropped and whitespace collapsed.
pub fn extract_article(html: &str) -> Result<(String, String)> {
    let doc = Html::parse_document(html);
    let title = first_text(&doc, "title")
        .or_else(|| first_text(&doc, "h1"))
        .ok_or(Error::NoTitle)?;

    let sel = Selector::parse("p, article").expect("static selector");
    let mut parts = Vec::new();
    for el in doc.select(&sel) {
        let nested = el.ancestors().any(|a| {
            a.value()
                .as_element()
                .is_some_and(|e| e.name() == "p" || e.name() == "article")
        });
        if nested {
            continue;
        }
        let text = visible_text(el);
        if !text.is_empty() {
            parts.push(text);
        }
    }
    let body = parts.join(" ");
    if body.is_empty() {
        return Err(Error::EmptyBody);
    }
    Ok((title, body))
}

/// Extract title and body from a page already fetched from `url`.
///
/// Fetching is left to the caller; this function only looks at the HTML.
pub fn ingest_url(_url: &str, fetched_html: &str) -> Result<(String, String)> {
    extract_article(fetched_html)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_page() {
        assert_eq!(
            ingest_url("http://x", "<title>T</title><p>B</p>").unwrap(),
            ("T".to_string(), "B".to_string())
        );
    }

    #[test]
    fn h1_fallback() {
        let (t, b) = extract_article("<html><body><h1> Only  heading </h1><p>text</p></body></html>").unwrap();
        assert_eq!(t, "Only heading");
        assert_eq!(b, "text");
    }

    #[test]
    fn no_title() {
        assert!(matches!(extract_article("<p>body only</p>"), Err(Error::NoTitle)));
    }

    #[test]
    fn empty_body() {
        assert!(matches!(
            extract_article("<title>T</title><div>not a paragraph</div>"),
            Err(Error::EmptyBody)
        ));
    }

    #[test]
    fn scripts_and_nesting() {
        let html = r#"<html><head><title>Wat Phnom</title><style>p{color:red}</style></head>
            <body><nav><p>menu</p></nav>
            <article>Intro <script>var x = 1;</script><p>First   para.</p><p>Second
            para.</p></article>
            <p>Footer <b>bold</b></p></body></html>"#;
        let (t, b) = extract_article(html).unwrap();
        assert_eq!(t, "Wat Phnom");
        assert_eq!(b, "menu Intro First para. Second para. Footer bold");
    }

    #[test]
    fn khmer_page() {
        let html = "<title>វត្តភ្នំ</title><p>វត្តភ្នំស្ថិតនៅលើកំពូលភ្នំ។</p>";
        let (t, b) = extract_article(html).unwrap();
        assert_eq!(t, "វត្តភ្នំ");
        assert_eq!(b, "វត្តភ្នំស្ថិតនៅលើកំពូលភ្នំ។");
    }
}
