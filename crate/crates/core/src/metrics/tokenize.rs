//! International (mteval-v14 `intl`) tokenization.
//!
//! Three left-to-right, non-overlapping substitution passes over the
//! segment, identical to the regular-expression rewrites of the reference
//! scorer:
//!
//! 1. `([^\d])([\p{P}])` → `$1 $2 `
//! 2. `([\p{P}])([^\d])` → ` $1 $2`
//! 3. `([\p{S}])` → ` $1 `
//!
//! followed by a whitespace split. `\d` is a Unicode decimal digit (`Nd`).

use unicode_general_category::{get_general_category, GeneralCategory as Gc};

/// A tokenized segment. Tokens are non-empty and contain no whitespace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenizedSegment {
    tokens: Vec<String>,
}

impl TokenizedSegment {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn join(&self) -> String {
        self.tokens.join(" ")
    }
}

impl From<Vec<&str>> for TokenizedSegment {
    fn from(tokens: Vec<&str>) -> Self {
        split_whitespace(&tokens.join(" "))
    }
}

fn is_digit(c: char) -> bool {
    get_general_category(c) == Gc::DecimalNumber
}

fn is_punct(c: char) -> bool {
    matches!(
        get_general_category(c),
        Gc::ConnectorPunctuation
            | Gc::DashPunctuation
            | Gc::OpenPunctuation
            | Gc::ClosePunctuation
            | Gc::InitialPunctuation
            | Gc::FinalPunctuation
            | Gc::OtherPunctuation
    )
}

fn is_symbol(c: char) -> bool {
    matches!(
        get_general_category(c),
        Gc::MathSymbol | Gc::CurrencySymbol | Gc::ModifierSymbol | Gc::OtherSymbol
    )
}

/// Whitespace as understood by the reference scorer's `str.split()`:
/// Unicode `White_Space` plus the ASCII information separators.
fn is_split_space(c: char) -> bool {
    c.is_whitespace() || ('\u{1c}'..='\u{1f}').contains(&c)
}

fn split_whitespace(s: &str) -> TokenizedSegment {
    TokenizedSegment {
        tokens: s
            .split(is_split_space)
            .filter(|t| !t.is_empty())
            .map(str::to_owned)
            .collect(),
    }
}

// Pass 1: a non-digit followed by punctuation.
fn pad_nondigit_punct(chars: &[char]) -> Vec<char> {
    let mut out = Vec::with_capacity(chars.len() * 2);
    let mut i = 0;
    while i < chars.len() {
        if i + 1 < chars.len() && !is_digit(chars[i]) && is_punct(chars[i + 1]) {
            out.extend([chars[i], ' ', chars[i + 1], ' ']);
            i += 2;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

// Pass 2: punctuation followed by a non-digit.
fn pad_punct_nondigit(chars: &[char]) -> Vec<char> {
    let mut out = Vec::with_capacity(chars.len() * 2);
    let mut i = 0;
    while i < chars.len() {
        if i + 1 < chars.len() && is_punct(chars[i]) && !is_digit(chars[i + 1]) {
            out.extend([' ', chars[i], ' ', chars[i + 1]]);
            i += 2;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

fn pad_symbols(chars: &[char]) -> String {
    let mut out = String::with_capacity(chars.len() * 2);
    for &c in chars {
        if is_symbol(c) {
            out.push(' ');
            out.push(c);
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out
}

/// Tokenizes a segment with the international rules. Case is preserved.
pub fn tokenize_intl(segment: &str) -> TokenizedSegment {
    let chars: Vec<char> = segment.chars().collect();
    let pass1 = pad_nondigit_punct(&chars);
    let pass2 = pad_punct_nondigit(&pass1);
    split_whitespace(&pad_symbols(&pass2))
}
