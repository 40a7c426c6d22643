//! Tokenizer for `.surf` scripts. Comments run from `#` to end of line.

use std::fmt;

use super::{DiagCode, Diagnostic};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TokKind {
    Ident(String),
    Int(String),
    Str(String),
    // keywords
    Base,
    Pic0,
    Points,
    Relation,
    Ruled,
    Blowup,
    At,
    Point,
    On,
    General,
    Divisor,
    Contract,
    Cover,
    Cyclic,
    Over,
    Fiber,
    Assert,
    Query,
    Report,
    Verdict,
    // punctuation
    Semi,
    Comma,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Star,
    Plus,
    Minus,
    Dot,
    Slash,
    Eq,
    EqEq,
    BangEq,
    Eof,
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokKind::Int(s) => write!(f, "number `{s}`"),
            TokKind::Str(_) => write!(f, "string literal"),
            TokKind::Base => write!(f, "`base`"),
            TokKind::Pic0 => write!(f, "`pic0`"),
            TokKind::Points => write!(f, "`points`"),
            TokKind::Relation => write!(f, "`relation`"),
            TokKind::Ruled => write!(f, "`ruled`"),
            TokKind::Blowup => write!(f, "`blowup`"),
            TokKind::At => write!(f, "`at`"),
            TokKind::Point => write!(f, "`point`"),
            TokKind::On => write!(f, "`on`"),
            TokKind::General => write!(f, "`general`"),
            TokKind::Divisor => write!(f, "`divisor`"),
            TokKind::Contract => write!(f, "`contract`"),
            TokKind::Cover => write!(f, "`cover`"),
            TokKind::Cyclic => write!(f, "`cyclic`"),
            TokKind::Over => write!(f, "`over`"),
            TokKind::Fiber => write!(f, "`fiber`"),
            TokKind::Assert => write!(f, "`assert`"),
            TokKind::Query => write!(f, "`query`"),
            TokKind::Report => write!(f, "`report`"),
            TokKind::Verdict => write!(f, "`verdict`"),
            TokKind::Semi => write!(f, "`;`"),
            TokKind::Comma => write!(f, "`,`"),
            TokKind::Colon => write!(f, "`:`"),
            TokKind::LParen => write!(f, "`(`"),
            TokKind::RParen => write!(f, "`)`"),
            TokKind::LBrace => write!(f, "`{{`"),
            TokKind::RBrace => write!(f, "`}}`"),
            TokKind::LBracket => write!(f, "`[`"),
            TokKind::RBracket => write!(f, "`]`"),
            TokKind::Star => write!(f, "`*`"),
            TokKind::Plus => write!(f, "`+`"),
            TokKind::Minus => write!(f, "`-`"),
            TokKind::Dot => write!(f, "`.`"),
            TokKind::Slash => write!(f, "`/`"),
            TokKind::Eq => write!(f, "`=`"),
            TokKind::EqEq => write!(f, "`==`"),
            TokKind::BangEq => write!(f, "`!=`"),
            TokKind::Eof => write!(f, "end of input"),
        }
    }
}

/// Source position, 1-based.
#[derive(Clone, Copy, Eq, Debug)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

// Spans never participate in structural AST equality: two parses of the
// same text are equal even when whitespace moved.
impl PartialEq for Span {
    fn eq(&self, _other: &Span) -> bool {
        true
    }
}

impl Span {
    pub fn start() -> Span {
        Span { line: 1, col: 1 }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Token {
    pub kind: TokKind,
    pub span: Span,
}

fn keyword(word: &str) -> Option<TokKind> {
    Some(match word {
        "base" => TokKind::Base,
        "pic0" => TokKind::Pic0,
        "points" => TokKind::Points,
        "relation" => TokKind::Relation,
        "ruled" => TokKind::Ruled,
        "blowup" => TokKind::Blowup,
        "at" => TokKind::At,
        "point" => TokKind::Point,
        "on" => TokKind::On,
        "general" => TokKind::General,
        "divisor" => TokKind::Divisor,
        "contract" => TokKind::Contract,
        "cover" => TokKind::Cover,
        "cyclic" => TokKind::Cyclic,
        "over" => TokKind::Over,
        "fiber" => TokKind::Fiber,
        "assert" => TokKind::Assert,
        "query" => TokKind::Query,
        "report" => TokKind::Report,
        "verdict" => TokKind::Verdict,
        _ => return None,
    })
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(ch) = c {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let span = Span { line, col };
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => {
                out.push(Token {
                    kind: TokKind::Eof,
                    span,
                });
                return Ok(out);
            }
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while let Some(&ch) = chars.peek() {
                if ch == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    word.push(ch);
                    bump!();
                } else {
                    break;
                }
            }
            let kind = keyword(&word).unwrap_or(TokKind::Ident(word));
            out.push(Token { kind, span });
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_ascii_digit() {
                    digits.push(ch);
                    bump!();
                } else {
                    break;
                }
            }
            out.push(Token {
                kind: TokKind::Int(digits),
                span,
            });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                match bump!() {
                    Some('"') => break,
                    Some('\\') => match bump!() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        other => {
                            return Err(Diagnostic::new(
                                DiagCode::Lexical,
                                format!("unknown escape {other:?} in string literal"),
                                span,
                            ))
                        }
                    },
                    Some(ch) => s.push(ch),
                    None => {
                        return Err(Diagnostic::new(
                            DiagCode::Lexical,
                            "unterminated string literal".to_string(),
                            span,
                        ))
                    }
                }
            }
            out.push(Token {
                kind: TokKind::Str(s),
                span,
            });
            continue;
        }
        let kind = match c {
            ';' => TokKind::Semi,
            ',' => TokKind::Comma,
            ':' => TokKind::Colon,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            '{' => TokKind::LBrace,
            '}' => TokKind::RBrace,
            '[' => TokKind::LBracket,
            ']' => TokKind::RBracket,
            '*' => TokKind::Star,
            '+' => TokKind::Plus,
            '-' => TokKind::Minus,
            '.' => TokKind::Dot,
            '/' => TokKind::Slash,
            '=' => {
                bump!();
                let kind = if chars.peek() == Some(&'=') {
                    bump!();
                    TokKind::EqEq
                } else {
                    TokKind::Eq
                };
                out.push(Token { kind, span });
                continue;
            }
            '!' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Token {
                        kind: TokKind::BangEq,
                        span,
                    });
                    continue;
                }
                return Err(Diagnostic::new(
                    DiagCode::Lexical,
                    "stray `!` (did you mean `!=`?)".to_string(),
                    span,
                ));
            }
            other => {
                return Err(Diagnostic::new(
                    DiagCode::Lexical,
                    format!("unexpected character {other:?}"),
                    span,
                ))
            }
        };
        bump!();
        out.push(Token { kind, span });
    }
}
