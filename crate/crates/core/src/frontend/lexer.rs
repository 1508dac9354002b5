use super::ast::Span;
use super::FrontendError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Kw(Kw),
    Punct(&'static str),
    /// `#pragma omp parallel sections`
    PragmaSections,
    /// `#pragma omp section`
    PragmaSection,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kw {
    Int,
    Void,
    If,
    Else,
    While,
    For,
    Return,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const PUNCTS: &[&str] = &[
    "&&", "||", "==", "!=", "<=", ">=", "++", "--", "+=", "-=", "*=", "(", ")", "{", "}", "[", "]",
    ";", ",", "=", "+", "-", "*", "<", ">", "!",
];

const UNSUPPORTED_WORDS: &[(&str, &str)] = &[
    ("float", "floating-point type"),
    ("double", "floating-point type"),
    ("char", "char type"),
    ("long", "long type"),
    ("short", "short type"),
    ("unsigned", "unsigned type"),
    ("signed", "signed type"),
    ("struct", "struct"),
    ("union", "union"),
    ("enum", "enum"),
    ("goto", "goto"),
    ("break", "break"),
    ("continue", "continue"),
    ("do", "do-while loop"),
    ("switch", "switch"),
    ("case", "switch"),
    ("static", "storage class"),
    ("extern", "storage class"),
    ("const", "const qualifier"),
    ("sizeof", "sizeof"),
    ("typedef", "typedef"),
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, FrontendError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(FrontendError::syntax(span, "unterminated comment"));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }
        if c == '#' {
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            let text: String = chars[start..i].iter().collect();
            let words: Vec<&str> = text[1..].split_whitespace().collect();
            let tok = match words.as_slice() {
                ["pragma", "omp", "parallel", "sections"] => Tok::PragmaSections,
                ["pragma", "omp", "section"] => Tok::PragmaSection,
                _ => {
                    return Err(FrontendError::unsupported(span, "preprocessor directive"));
                }
            };
            out.push(Token { tok, span });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                bump!();
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(FrontendError::unsupported(span, "floating-point literal"));
            }
            let text: String = chars[start..i].iter().collect();
            let v: i64 = text.parse().map_err(|_| {
                FrontendError::syntax(span, format!("bad integer literal `{text}`"))
            })?;
            out.push(Token {
                tok: Tok::Int(v),
                span,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            if let Some((_, what)) = UNSUPPORTED_WORDS.iter().find(|(w, _)| *w == word) {
                return Err(FrontendError::unsupported(span, *what));
            }
            let tok = match word.as_str() {
                "int" => Tok::Kw(Kw::Int),
                "void" => Tok::Kw(Kw::Void),
                "if" => Tok::Kw(Kw::If),
                "else" => Tok::Kw(Kw::Else),
                "while" => Tok::Kw(Kw::While),
                "for" => Tok::Kw(Kw::For),
                "return" => Tok::Kw(Kw::Return),
                _ => Tok::Ident(word),
            };
            out.push(Token { tok, span });
            continue;
        }
        match c {
            '/' | '%' => return Err(FrontendError::unsupported(span, "division")),
            '&' if chars.get(i + 1) != Some(&'&') => {
                return Err(FrontendError::unsupported(span, "pointer"))
            }
            '.' => return Err(FrontendError::unsupported(span, "floating-point literal")),
            '"' | '\'' => return Err(FrontendError::unsupported(span, "string or char literal")),
            _ => {}
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                for _ in 0..p.len() {
                    bump!();
                }
                out.push(Token {
                    tok: Tok::Punct(p),
                    span,
                });
            }
            None => {
                return Err(FrontendError::syntax(
                    span,
                    format!("unexpected character `{c}`"),
                ))
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col),
    });
    Ok(out)
}
