//! A strict RFC 4180 reader. Unterminated quotes, stray quotes inside
//! unquoted fields and ragged rows are errors, never silently repaired.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CsvError {
    #[error("input is not valid UTF-8 (byte offset {offset})")]
    NotUtf8 { offset: usize },
    #[error("row {row} (line {line}): unterminated quoted field")]
    UnterminatedQuote { row: usize, line: usize },
    #[error("row {row} (line {line}): unexpected character after closing quote")]
    TextAfterQuote { row: usize, line: usize },
    #[error("row {row} (line {line}): quote inside unquoted field")]
    StrayQuote { row: usize, line: usize },
    #[error("row {row} (line {line}): expected {expected} fields, found {found}")]
    Arity { row: usize, line: usize, expected: usize, found: usize },
    #[error("header {0:?} appears more than once")]
    DuplicateHeader(String),
    #[error("header row is missing")]
    NoHeader,
}

/// One physical record with the line it starts on. `row` is 1-based over
/// data rows, so the header itself is row 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRecord {
    pub row: usize,
    pub line: usize,
    pub fields: Vec<String>,
}

pub fn decode(bytes: &[u8]) -> Result<&str, CsvError> {
    std::str::from_utf8(bytes).map_err(|e| CsvError::NotUtf8 { offset: e.valid_up_to() })
}

/// Header names (trimmed) plus data records. Blank lines are skipped.
pub fn read(text: &str) -> Result<(Vec<String>, Vec<RawRecord>), CsvError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut records = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while chars.peek().is_some() {
        let start_line = line;
        let row = records.len();
        if matches!(chars.peek(), Some('\n')) {
            chars.next();
            line += 1;
            continue;
        }
        if matches!(chars.peek(), Some('\r')) {
            chars.next();
            if matches!(chars.peek(), Some('\n')) {
                chars.next();
            }
            line += 1;
            continue;
        }
        let mut fields = Vec::new();
        let mut field = String::new();
        loop {
            match chars.peek().copied() {
                Some('"') if field.is_empty() => {
                    chars.next();
                    loop {
                        match chars.next() {
                            None => return Err(CsvError::UnterminatedQuote { row, line: start_line }),
                            Some('"') if chars.peek() == Some(&'"') => {
                                chars.next();
                                field.push('"');
                            }
                            Some('"') => break,
                            Some(c) => {
                                if c == '\n' {
                                    line += 1;
                                }
                                field.push(c);
                            }
                        }
                    }
                    match chars.peek() {
                        None | Some(',') | Some('\n') | Some('\r') => {}
                        Some(_) => return Err(CsvError::TextAfterQuote { row, line: start_line }),
                    }
                }
                Some('"') => return Err(CsvError::StrayQuote { row, line: start_line }),
                Some(',') => {
                    chars.next();
                    fields.push(std::mem::take(&mut field));
                }
                Some('\r') | Some('\n') | None => {
                    if chars.next() == Some('\r') && chars.peek() == Some(&'\n') {
                        chars.next();
                    }
                    line += 1;
                    fields.push(std::mem::take(&mut field));
                    break;
                }
                Some(c) => {
                    chars.next();
                    field.push(c);
                }
            }
        }
        records.push(RawRecord { row, line: start_line, fields });
    }

    let mut records = records.into_iter();
    let header = records.next().ok_or(CsvError::NoHeader)?;
    let names: Vec<String> = header.fields.iter().map(|h| h.trim().to_string()).collect();
    for (i, name) in names.iter().enumerate() {
        if !name.is_empty() && names[..i].contains(name) {
            return Err(CsvError::DuplicateHeader(name.clone()));
        }
    }
    let rows: Vec<RawRecord> = records.collect();
    for r in &rows {
        if r.fields.len() != names.len() {
            return Err(CsvError::Arity { row: r.row, line: r.line, expected: names.len(), found: r.fields.len() });
        }
    }
    Ok((names, rows))
}
