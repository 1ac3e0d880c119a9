//! Text formats for graphs.
//!
//! Three inputs are understood:
//!
//! * plain edge lists, one `u v` pair per line with an optional `n=<int>`
//!   header ([`parse_edge_list`]);
//! * LCF codes `[j_1,...,j_m]^r` ([`parse_lcf`]);
//! * composition expressions ([`parse_expr`]):
//!
//! ```text
//! expr  := union
//! union := boxed ('+' boxed)*          disjoint union
//! boxed := joined ('box' joined)*      cartesian product
//! joined := atom ('*' atom)*           join
//! atom  := NAME | NAME '(' ints ')'
//!        | '[' edges ']' | '[' ints ']' '^' int | 'lcf(' lcf ')'
//!        | 'wedge(' expr ',' int ',' expr ',' int ')'
//!        | '(' expr ')'
//! edges := (int '-' int | 'n' '=' int) (',' ...)*
//! ```
//!
//! All binary operators are left-associative. Note that `*` is the join,
//! not a product.

use std::fmt;

use thiserror::Error;

use crate::families::{build_named, canonical_family, family_arity, lcf_graph};
use crate::graph::{box_product, disjoint_union, join, wedge, Graph, GraphError};

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown graph family `{name}`")]
    UnknownFamily {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphExpr {
    /// A named family with its integer parameters, name as written.
    Named { name: String, args: Vec<i64> },
    EdgeList {
        n: Option<usize>,
        edges: Vec<(usize, usize)>,
    },
    Lcf { offsets: Vec<i64>, repeats: usize },
    Union(Box<GraphExpr>, Box<GraphExpr>),
    Box(Box<GraphExpr>, Box<GraphExpr>),
    Join(Box<GraphExpr>, Box<GraphExpr>),
    Wedge {
        left: Box<GraphExpr>,
        left_base: usize,
        right: Box<GraphExpr>,
        right_base: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            let v = s.parse().map_err(|_| DslError::Syntax {
                line: l0,
                column: c0,
                message: format!("integer `{s}` is too large"),
            })?;
            Tok::Int(v)
        } else if "()[],+*^-=".contains(c) {
            bump(&mut chars);
            Tok::Sym(c)
        } else {
            return Err(DslError::Syntax {
                line: l0,
                column: c0,
                message: format!("unexpected character `{c}`"),
            });
        };
        out.push(Token {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

enum ListItem {
    Int(i64),
    Edge(usize, usize),
    Size(usize),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> DslError {
        DslError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expected(&self, what: &str) -> DslError {
        let t = self.peek();
        Self::error_at(t, format!("expected {what}, found {}", t.tok))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), DslError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{c}`")))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s.eq_ignore_ascii_case(kw))
    }

    fn unsigned(&mut self) -> Result<u64, DslError> {
        match self.peek().tok {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.expected("a nonnegative integer")),
        }
    }

    fn index(&mut self) -> Result<usize, DslError> {
        let t = self.peek().clone();
        let v = self.unsigned()?;
        usize::try_from(v).map_err(|_| Self::error_at(&t, "integer out of range"))
    }

    fn signed(&mut self) -> Result<i64, DslError> {
        let t = self.peek().clone();
        let neg = self.eat_sym('-');
        let v = self.unsigned()?;
        let v = i64::try_from(v).map_err(|_| Self::error_at(&t, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<GraphExpr, DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Self::error_at(self.peek(), "expression nested too deeply"));
        }
        let mut left = self.boxed()?;
        while self.eat_sym('+') {
            let right = self.boxed()?;
            left = GraphExpr::Union(Box::new(left), Box::new(right));
        }
        self.depth -= 1;
        Ok(left)
    }

    fn boxed(&mut self) -> Result<GraphExpr, DslError> {
        let mut left = self.joined()?;
        while self.is_keyword("box") {
            self.pos += 1;
            let right = self.joined()?;
            left = GraphExpr::Box(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn joined(&mut self) -> Result<GraphExpr, DslError> {
        let mut left = self.atom()?;
        while self.eat_sym('*') {
            let right = self.atom()?;
            left = GraphExpr::Join(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<GraphExpr, DslError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => self.bracket(),
            Tok::Ident(name) if name.eq_ignore_ascii_case("box") => {
                Err(Self::error_at(&t, "expected a graph, found `box`"))
            }
            Tok::Ident(name)
                if name.eq_ignore_ascii_case("wedge") && self.toks[self.pos + 1].tok == Tok::Sym('(') =>
            {
                self.pos += 2;
                let left = self.expr()?;
                self.expect_sym(',')?;
                let left_base = self.index()?;
                self.expect_sym(',')?;
                let right = self.expr()?;
                self.expect_sym(',')?;
                let right_base = self.index()?;
                self.expect_sym(')')?;
                Ok(GraphExpr::Wedge {
                    left: Box::new(left),
                    left_base,
                    right: Box::new(right),
                    right_base,
                })
            }
            Tok::Ident(name)
                if name.eq_ignore_ascii_case("lcf") && self.toks[self.pos + 1].tok == Tok::Sym('(') =>
            {
                self.pos += 2;
                if self.peek().tok != Tok::Sym('[') {
                    return Err(self.expected("`[`"));
                }
                let e = self.bracket()?;
                if !matches!(e, GraphExpr::Lcf { .. }) {
                    return Err(Self::error_at(&t, "lcf(...) needs an LCF code `[j,...]^r`"));
                }
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.pos += 1;
                let Some(canon) = canonical_family(&name) else {
                    return Err(DslError::UnknownFamily {
                        line: t.line,
                        column: t.column,
                        name,
                    });
                };
                let mut args = Vec::new();
                if self.eat_sym('(')
                    && !self.eat_sym(')') {
                        loop {
                            args.push(self.signed()?);
                            if self.eat_sym(')') {
                                break;
                            }
                            self.expect_sym(',')?;
                        }
                    }
                let arity = family_arity(canon);
                if args.len() != arity {
                    return Err(Self::error_at(
                        &t,
                        format!("`{name}` takes {arity} argument(s), got {}", args.len()),
                    ));
                }
                Ok(GraphExpr::Named { name, args })
            }
            _ => Err(self.expected("a graph")),
        }
    }

    fn list_item(&mut self) -> Result<ListItem, DslError> {
        if self.is_keyword("n") && self.toks[self.pos + 1].tok == Tok::Sym('=') {
            self.pos += 2;
            return Ok(ListItem::Size(self.index()?));
        }
        let t = self.peek().clone();
        let v = self.signed()?;
        if self.eat_sym('-') {
            let u = usize::try_from(v).map_err(|_| Self::error_at(&t, "negative vertex index"))?;
            let w = self.index()?;
            return Ok(ListItem::Edge(u, w));
        }
        Ok(ListItem::Int(v))
    }

    fn bracket(&mut self) -> Result<GraphExpr, DslError> {
        let open = self.next();
        let mut items = Vec::new();
        if !self.eat_sym(']') {
            loop {
                let t = self.peek().clone();
                items.push((t, self.list_item()?));
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        if self.eat_sym('^') {
            let repeats = self.index()?;
            let mut offsets = Vec::with_capacity(items.len());
            for (t, item) in items {
                match item {
                    ListItem::Int(v) => offsets.push(v),
                    _ => return Err(Self::error_at(&t, "LCF codes contain only integers")),
                }
            }
            if offsets.is_empty() {
                return Err(Self::error_at(&open, "empty LCF code"));
            }
            return Ok(GraphExpr::Lcf { offsets, repeats });
        }
        let mut n = None;
        let mut edges = Vec::new();
        for (t, item) in items {
            match item {
                ListItem::Edge(u, v) => edges.push((u, v)),
                ListItem::Size(s) if n.is_none() => n = Some(s),
                ListItem::Size(_) => return Err(Self::error_at(&t, "repeated `n=`")),
                ListItem::Int(_) => {
                    return Err(Self::error_at(
                        &t,
                        "expected an edge `u-v`; LCF codes need `^r`",
                    ))
                }
            }
        }
        Ok(GraphExpr::EdgeList { n, edges })
    }
}

/// Parses a composition expression.
pub fn parse_expr(text: &str) -> Result<GraphExpr, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.expected("an operator or end of input"));
    }
    Ok(e)
}

/// Parses `[j_1,...,j_m]^r` into the LCF graph on `m*r` vertices.
pub fn parse_lcf(text: &str) -> Result<Graph, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        depth: 0,
    };
    if p.peek().tok != Tok::Sym('[') {
        return Err(p.expected("`[`"));
    }
    let open = p.peek().clone();
    let e = p.bracket()?;
    if p.peek().tok != Tok::End {
        return Err(p.expected("end of input"));
    }
    match e {
        GraphExpr::Lcf { .. } => evaluate(&e),
        _ => Err(Parser::error_at(&open, "expected an LCF code `[j,...]^r`")),
    }
}

/// Parses a whitespace-separated edge list. Blank lines and `#` comments
/// are skipped. The vertex count is one more than the largest index unless
/// an `n=<int>` line asks for more.
pub fn parse_edge_list(text: &str) -> Result<Graph, DslError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| DslError::EdgeList { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("n") {
            let rest = rest.trim_start();
            if let Some(value) = rest.strip_prefix('=') {
                if header.is_some() {
                    return Err(err("repeated `n=` header".into()));
                }
                let n = value
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad vertex count `{}`", value.trim())))?;
                header = Some((line, n));
                continue;
            }
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(format!("expected `u v`, found `{content}`")));
        }
        let mut ends = [0usize; 2];
        for (slot, f) in ends.iter_mut().zip(&fields) {
            if f.starts_with('-') {
                return Err(err(format!("negative vertex index `{f}`")));
            }
            *slot = f.parse().map_err(|_| err(format!("bad vertex index `{f}`")))?;
        }
        let (u, v) = (ends[0], ends[1]);
        if u == v {
            return Err(err(format!("loop at vertex {u}")));
        }
        edges.push((line, u, v));
    }
    let needed = edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match header {
        Some((line, n)) if n < needed => {
            return Err(DslError::EdgeList {
                line,
                message: format!("n={n} but the edges use vertex {}", needed - 1),
            })
        }
        Some((_, n)) => n,
        None => needed,
    };
    let mut seen = std::collections::HashSet::new();
    for &(line, u, v) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(DslError::EdgeList {
                line,
                message: format!("duplicate edge {{{u}, {v}}}"),
            });
        }
    }
    Ok(Graph::from_edges(n, edges.iter().map(|&(_, u, v)| (u, v)))?)
}

/// Builds the graph an expression denotes.
pub fn evaluate(expr: &GraphExpr) -> Result<Graph, DslError> {
    Ok(match expr {
        GraphExpr::Named { name, args } => build_named(name, args)?,
        GraphExpr::EdgeList { n, edges } => {
            let needed = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
            let n = n.unwrap_or(needed);
            Graph::from_edges(n, edges.iter().copied())?
        }
        GraphExpr::Lcf { offsets, repeats } => lcf_graph(offsets, *repeats)?,
        GraphExpr::Union(a, b) => disjoint_union(&evaluate(a)?, &evaluate(b)?),
        GraphExpr::Box(a, b) => box_product(&evaluate(a)?, &evaluate(b)?),
        GraphExpr::Join(a, b) => join(&evaluate(a)?, &evaluate(b)?),
        GraphExpr::Wedge {
            left,
            left_base,
            right,
            right_base,
        } => wedge(&evaluate(left)?, *left_base, &evaluate(right)?, *right_base)?,
    })
}

/// Parses and evaluates an expression.
pub fn parse_graph(text: &str) -> Result<Graph, DslError> {
    evaluate(&parse_expr(text)?)
}

impl GraphExpr {
    fn level(&self) -> u8 {
        match self {
            GraphExpr::Union(..) => 1,
            GraphExpr::Box(..) => 2,
            GraphExpr::Join(..) => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.level() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            GraphExpr::Named { name, args } => {
                f.write_str(name)?;
                if !args.is_empty() {
                    let args: Vec<String> = args.iter().map(i64::to_string).collect();
                    write!(f, "({})", args.join(", "))?;
                }
            }
            GraphExpr::EdgeList { n, edges } => {
                let mut items: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                if let Some(n) = n {
                    items.push(format!("n={n}"));
                }
                write!(f, "[{}]", items.join(", "))?;
            }
            GraphExpr::Lcf { offsets, repeats } => {
                let items: Vec<String> = offsets.iter().map(i64::to_string).collect();
                write!(f, "[{}]^{repeats}", items.join(","))?;
            }
            GraphExpr::Union(a, b) | GraphExpr::Box(a, b) | GraphExpr::Join(a, b) => {
                let op = match self {
                    GraphExpr::Union(..) => " + ",
                    GraphExpr::Box(..) => " box ",
                    _ => " * ",
                };
                let l = self.level();
                a.write(f, l)?;
                f.write_str(op)?;
                b.write(f, l + 1)?;
            }
            GraphExpr::Wedge {
                left,
                left_base,
                right,
                right_base,
            } => {
                f.write_str("wedge(")?;
                left.write(f, 0)?;
                write!(f, ", {left_base}, ")?;
                right.write(f, 0)?;
                write!(f, ", {right_base})")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for GraphExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
