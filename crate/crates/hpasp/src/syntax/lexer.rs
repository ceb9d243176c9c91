//! Tokenizer for the program syntax.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Float(f64),
    ColonColon,
    ColonDash,
    Colon,
    Dot,
    DotDot,
    Comma,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Not,
    Count,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    let err = |line: usize, col: usize, msg: String| Error::Syntax { line, col, msg };

    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let mut push = |tok: Tok| out.push(Spanned { tok, line: tline, col: tcol });
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            'a'..='z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                if word == "not" {
                    push(Tok::Not);
                } else {
                    push(Tok::Ident(word));
                }
            }
            'A'..='Z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                push(Tok::Var(word));
            }
            '_' => {
                return Err(err(
                    line,
                    col,
                    "identifiers starting with '_' are reserved for internal use".into(),
                ));
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // A '.' continues the number only when followed by a digit;
                // "1..4" is Int(1) DotDot Int(4) and "3." is Int(3) Dot.
                let mut is_float = false;
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    is_float = true;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        is_float = true;
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                if is_float {
                    let v: f64 = word
                        .parse()
                        .map_err(|_| err(tline, tcol, format!("bad numeric literal '{word}'")))?;
                    push(Tok::Float(v));
                } else {
                    let v: i64 = word.parse().map_err(|_| {
                        err(tline, tcol, format!("integer literal '{word}' out of range"))
                    })?;
                    push(Tok::Int(v));
                }
            }
            ':' => {
                if i + 1 < chars.len() && chars[i + 1] == ':' {
                    push(Tok::ColonColon);
                    i += 2;
                    col += 2;
                } else if i + 1 < chars.len() && chars[i + 1] == '-' {
                    push(Tok::ColonDash);
                    i += 2;
                    col += 2;
                } else {
                    push(Tok::Colon);
                    i += 1;
                    col += 1;
                }
            }
            '.' => {
                if i + 1 < chars.len() && chars[i + 1] == '.' {
                    push(Tok::DotDot);
                    i += 2;
                    col += 2;
                } else {
                    push(Tok::Dot);
                    i += 1;
                    col += 1;
                }
            }
            ',' => {
                push(Tok::Comma);
                i += 1;
                col += 1;
            }
            ';' => {
                push(Tok::Semi);
                i += 1;
                col += 1;
            }
            '(' => {
                push(Tok::LParen);
                i += 1;
                col += 1;
            }
            ')' => {
                push(Tok::RParen);
                i += 1;
                col += 1;
            }
            '{' => {
                push(Tok::LBrace);
                i += 1;
                col += 1;
            }
            '}' => {
                push(Tok::RBrace);
                i += 1;
                col += 1;
            }
            '=' => {
                push(Tok::Eq);
                i += 1;
                col += 1;
            }
            '!' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    push(Tok::Ne);
                    i += 2;
                    col += 2;
                } else {
                    return Err(err(line, col, "expected '=' after '!'".into()));
                }
            }
            '<' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    push(Tok::Le);
                    i += 2;
                    col += 2;
                } else {
                    push(Tok::Lt);
                    i += 1;
                    col += 1;
                }
            }
            '>' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    push(Tok::Ge);
                    i += 2;
                    col += 2;
                } else {
                    push(Tok::Gt);
                    i += 1;
                    col += 1;
                }
            }
            '+' => {
                push(Tok::Plus);
                i += 1;
                col += 1;
            }
            '-' => {
                push(Tok::Minus);
                i += 1;
                col += 1;
            }
            '*' => {
                push(Tok::Star);
                i += 1;
                col += 1;
            }
            '#' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_alphabetic() {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                if word == "count" {
                    push(Tok::Count);
                    col += j - i;
                    i = j;
                } else {
                    return Err(err(line, col, format!("unknown aggregate '#{word}'")));
                }
            }
            other => {
                return Err(err(line, col, format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(out)
}
