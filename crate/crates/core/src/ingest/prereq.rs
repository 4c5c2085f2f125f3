//! Prerequisite clause grammar: recursive-descent parser, canonical printer,
//! and flattening of expression trees into requirement edges.
//!
//! ```text
//! expr      := term ( OR term )*
//! term      := factor ( AND factor )*
//! factor    := "(" expr ")" | courseref
//! courseref := code-pattern | bare-title
//! ```
//!
//! `and` / `or` are case-insensitive, whitespace-delimited keywords; `&` is a
//! literal title character. AND binds tighter than OR. A courseref immediately
//! followed by `(concurrent)` or preceded by `corequisite:` is a corequisite.

use thiserror::Error;

use crate::model::{CourseCode, CourseRef, EdgeKind, PrereqEdge, PrereqExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct PrereqSyntaxError {
    pub offset: usize,
    pub message: String,
}

impl PrereqSyntaxError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        PrereqSyntaxError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    LParen,
    RParen,
    Word(&'a str),
}

#[derive(Debug, Clone, Copy)]
struct Spanned<'a> {
    tok: Tok<'a>,
    offset: usize,
}

fn lex(clause: &str) -> Vec<Spanned<'_>> {
    let mut out = Vec::new();
    let mut word_start: Option<usize> = None;
    for (i, c) in clause.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(start) = word_start.take() {
                out.push(Spanned {
                    tok: Tok::Word(&clause[start..i]),
                    offset: start,
                });
            }
            if c == '(' {
                out.push(Spanned {
                    tok: Tok::LParen,
                    offset: i,
                });
            } else if c == ')' {
                out.push(Spanned {
                    tok: Tok::RParen,
                    offset: i,
                });
            }
        } else if word_start.is_none() {
            word_start = Some(i);
        }
    }
    if let Some(start) = word_start {
        out.push(Spanned {
            tok: Tok::Word(&clause[start..]),
            offset: start,
        });
    }
    out
}

fn is_keyword(word: &str, kw: &str) -> bool {
    word.eq_ignore_ascii_case(kw)
}

struct Parser<'a> {
    toks: Vec<Spanned<'a>>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned<'a>> {
        self.toks.get(self.pos)
    }

    fn peek_word(&self) -> Option<&'a str> {
        match self.peek() {
            Some(Spanned {
                tok: Tok::Word(w), ..
            }) => Some(w),
            _ => None,
        }
    }

    fn next_offset(&self) -> usize {
        self.peek().map_or(self.end, |s| s.offset)
    }

    fn bump(&mut self) -> Spanned<'a> {
        let t = self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<PrereqExpr, PrereqSyntaxError> {
        let mut terms = vec![self.term()?];
        while self.peek_word().is_some_and(|w| is_keyword(w, "or")) {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            PrereqExpr::Any(terms)
        })
    }

    fn term(&mut self) -> Result<PrereqExpr, PrereqSyntaxError> {
        let mut factors = vec![self.factor()?];
        while self.peek_word().is_some_and(|w| is_keyword(w, "and")) {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            PrereqExpr::All(factors)
        })
    }

    fn factor(&mut self) -> Result<PrereqExpr, PrereqSyntaxError> {
        match self.peek() {
            Some(Spanned {
                tok: Tok::LParen,
                offset,
            }) => {
                let open = *offset;
                self.bump();
                let inner = self.expr()?;
                match self.peek() {
                    Some(Spanned {
                        tok: Tok::RParen, ..
                    }) => {
                        self.bump();
                        Ok(inner)
                    }
                    Some(other) => Err(PrereqSyntaxError::new(
                        other.offset,
                        "expected closing parenthesis",
                    )),
                    None => Err(PrereqSyntaxError::new(open, "unclosed parenthesis")),
                }
            }
            _ => self.courseref(),
        }
    }

    fn courseref(&mut self) -> Result<PrereqExpr, PrereqSyntaxError> {
        let mut kind = EdgeKind::Prerequisite;
        if self.peek_word().is_some_and(|w| is_keyword(w, "corequisite:")) {
            self.bump();
            kind = EdgeKind::Corequisite;
        }

        let mut words: Vec<&str> = Vec::new();
        while let Some(w) = self.peek_word() {
            if is_keyword(w, "and") || is_keyword(w, "or") {
                break;
            }
            words.push(w);
            self.bump();
        }
        if words.is_empty() {
            let offset = self.next_offset();
            let what = match self.peek() {
                Some(Spanned { tok: Tok::Word(w), .. }) => format!("found keyword {w:?}"),
                Some(Spanned { tok: Tok::LParen, .. }) => "found '('".to_string(),
                Some(Spanned { tok: Tok::RParen, .. }) => "found ')'".to_string(),
                None => "found end of clause".to_string(),
            };
            return Err(PrereqSyntaxError::new(
                offset,
                format!("expected course reference, {what}"),
            ));
        }

        // A trailing "(concurrent)" marks the reference as a corequisite.
        if self.marker_ahead() {
            self.bump();
            self.bump();
            self.bump();
            kind = EdgeKind::Corequisite;
        }

        let joined = words.join(" ");
        let course = match CourseCode::parse(&joined) {
            Ok(code) => CourseRef::ByCode(code),
            Err(_) => CourseRef::ByTitle(joined),
        };
        Ok(PrereqExpr::Ref { course, kind })
    }

    fn marker_ahead(&self) -> bool {
        matches!(self.toks.get(self.pos), Some(Spanned { tok: Tok::LParen, .. }))
            && matches!(
                self.toks.get(self.pos + 1),
                Some(Spanned { tok: Tok::Word(w), .. }) if is_keyword(w, "concurrent")
            )
            && matches!(self.toks.get(self.pos + 2), Some(Spanned { tok: Tok::RParen, .. }))
    }
}

/// Parse a prerequisite clause into its canonical expression tree.
///
/// A blank clause yields `PrereqExpr::None`.
pub fn parse_prereq_expr(clause: &str) -> Result<PrereqExpr, PrereqSyntaxError> {
    let toks = lex(clause);
    if toks.is_empty() {
        return Ok(PrereqExpr::None);
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: clause.len(),
    };
    let expr = parser.expr()?;
    if let Some(trailing) = parser.peek() {
        let what = match trailing.tok {
            Tok::RParen => "unmatched ')'".to_string(),
            Tok::LParen => "unexpected '('".to_string(),
            Tok::Word(w) => format!("unexpected {w:?}"),
        };
        return Err(PrereqSyntaxError::new(trailing.offset, what));
    }
    Ok(expr.canonicalize())
}

/// Render a canonical expression as a clause that parses back to an equal
/// tree. Parentheses appear exactly where precedence requires: around an
/// `Any` that sits inside an `All`.
pub fn print_prereq_expr(expr: &PrereqExpr) -> String {
    fn render(expr: &PrereqExpr, under_all: bool, out: &mut String) {
        match expr {
            PrereqExpr::None => {}
            PrereqExpr::Ref { course, kind } => {
                out.push_str(&course.display_text());
                if *kind == EdgeKind::Corequisite {
                    out.push_str(" (concurrent)");
                }
            }
            PrereqExpr::All(children) => {
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" and ");
                    }
                    render(child, true, out);
                }
            }
            PrereqExpr::Any(children) => {
                if under_all {
                    out.push('(');
                }
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" or ");
                    }
                    render(child, false, out);
                }
                if under_all {
                    out.push(')');
                }
            }
        }
    }
    let mut out = String::new();
    render(expr, false, &mut out);
    out
}

/// Flatten a canonical expression into one edge per `Ref` leaf.
///
/// `requirement_index` is the 0-based position of the leaf's top-level
/// conjunct (0 when the root is not an `All`); `alternative_group` is the
/// 1-based disjunct position under the nearest enclosing `Any` (0 outside any
/// `Any`). Leaves resolving to the target itself are dropped and returned
/// separately. Duplicate (from, to, kind) triples keep the first occurrence.
pub fn flatten_edges<R>(
    expr: &PrereqExpr,
    target: &CourseCode,
    resolve: R,
) -> (Vec<PrereqEdge>, Vec<CourseRef>)
where
    R: Fn(&CourseRef) -> CourseCode,
{
    struct Walk<'a, R> {
        target: &'a CourseCode,
        resolve: R,
        edges: Vec<PrereqEdge>,
        dropped: Vec<CourseRef>,
    }

    impl<R: Fn(&CourseRef) -> CourseCode> Walk<'_, R> {
        fn visit(&mut self, expr: &PrereqExpr, req: u32, alt: u32) {
            match expr {
                PrereqExpr::None => {}
                PrereqExpr::Ref { course, kind } => {
                    let from = (self.resolve)(course);
                    if from == *self.target {
                        self.dropped.push(course.clone());
                        return;
                    }
                    self.edges.push(PrereqEdge {
                        from,
                        to: self.target.clone(),
                        kind: *kind,
                        requirement_index: req,
                        alternative_group: alt,
                    });
                }
                PrereqExpr::All(children) => {
                    for child in children {
                        self.visit(child, req, alt);
                    }
                }
                PrereqExpr::Any(children) => {
                    for (j, child) in children.iter().enumerate() {
                        self.visit(child, req, j as u32 + 1);
                    }
                }
            }
        }
    }

    let mut walk = Walk {
        target,
        resolve,
        edges: Vec::new(),
        dropped: Vec::new(),
    };
    match expr {
        PrereqExpr::All(children) => {
            for (i, child) in children.iter().enumerate() {
                walk.visit(child, i as u32, 0);
            }
        }
        other => walk.visit(other, 0, 0),
    }

    let mut seen = std::collections::BTreeSet::new();
    let edges = walk
        .edges
        .into_iter()
        .filter(|e| seen.insert((e.from.clone(), e.to.clone(), e.kind)))
        .collect();
    (edges, walk.dropped)
}
