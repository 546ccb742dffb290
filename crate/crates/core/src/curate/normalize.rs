use unicode_normalization::UnicodeNormalization;

/// Canonical text form used by every downstream scorer.
///
/// CRLF and lone CR become LF, control characters other than LF and TAB are
/// dropped, horizontal whitespace runs become one space, each line is
/// trimmed, runs of three or more blank lines shrink to one, and the result
/// is NFC-composed. Idempotent.
pub fn normalize(text: &str) -> String {
    let unified = text.replace("\r\n", "\n").replace('\r', "\n");
    let mut lines: Vec<String> = Vec::new();
    for raw in unified.split('\n') {
        let mut line = String::with_capacity(raw.len());
        let mut pending_space = false;
        for ch in raw.chars() {
            if ch.is_whitespace() {
                pending_space = true;
            } else if ch.is_control() {
                continue;
            } else {
                if pending_space && !line.is_empty() {
                    line.push(' ');
                }
                pending_space = false;
                line.push(ch);
            }
        }
        lines.push(line);
    }

    let mut out: Vec<&str> = Vec::with_capacity(lines.len());
    let mut i = 0;
    while i < lines.len() {
        if lines[i].is_empty() {
            let run = lines[i..].iter().take_while(|l| l.is_empty()).count();
            let keep = if run >= 3 { 1 } else { run };
            out.extend(std::iter::repeat("").take(keep));
            i += run;
        } else {
            out.push(&lines[i]);
            i += 1;
        }
    }
    out.join("\n").nfc().collect()
}
