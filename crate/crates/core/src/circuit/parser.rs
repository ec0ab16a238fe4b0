use std::collections::HashSet;

use super::{CircuitError, Expr, Param, Program, Span, Stmt, Visibility};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u128),
    Sym(&'static str),
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

const SYMBOLS: &[&str] = &["->", "(", ")", "{", "}", ",", ";", "=", "+", "-", "*", "/"];

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, CircuitError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '/' && self.chars.clone().nth(1) == Some('/') {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let span = Span {
                line: self.line,
                col: self.col,
            };
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, span));
                return Ok(out);
            };
            if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), span));
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                let v = s
                    .parse::<u128>()
                    .map_err(|_| syntax(span, "integer literal too large"))?;
                out.push((Tok::Int(v), span));
            } else {
                let rest: String = self.chars.clone().take(2).collect();
                let sym = SYMBOLS
                    .iter()
                    .find(|s| rest.starts_with(**s))
                    .ok_or_else(|| syntax(span, &format!("unexpected character {:?}", c)))?;
                for _ in 0..sym.len() {
                    self.bump();
                }
                out.push((Tok::Sym(sym), span));
            }
        }
    }
}

fn syntax(span: Span, msg: &str) -> CircuitError {
    CircuitError::Syntax {
        line: span.line,
        col: span.col,
        msg: msg.to_string(),
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("identifier {:?}", s),
            Tok::Int(v) => format!("integer {}", v),
            Tok::Sym(s) => format!("{:?}", s),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, sym: &'static str) -> Result<Span, CircuitError> {
        let (t, span) = self.next();
        if t == Tok::Sym(sym) {
            Ok(span)
        } else {
            Err(syntax(
                span,
                &format!("expected {:?}, found {}", sym, Self::describe(&t)),
            ))
        }
    }

    fn eat(&mut self, sym: &'static str) -> bool {
        if *self.peek() == Tok::Sym(sym) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Span), CircuitError> {
        match self.next() {
            (Tok::Ident(s), span) => Ok((s, span)),
            (t, span) => Err(syntax(
                span,
                &format!("expected identifier, found {}", Self::describe(&t)),
            )),
        }
    }

    fn program(&mut self) -> Result<Program, CircuitError> {
        let (kw, span) = self.ident()?;
        if kw != "def" {
            return Err(syntax(span, "expected \"def\""));
        }
        let (name, _) = self.ident()?;
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.eat(")") {
            loop {
                let (first, span) = self.ident()?;
                let (vis, name, span) = match first.as_str() {
                    "pub" => {
                        let (n, s) = self.ident()?;
                        (Visibility::Public, n, s)
                    }
                    "priv" => {
                        let (n, s) = self.ident()?;
                        (Visibility::Private, n, s)
                    }
                    _ => (Visibility::Private, first, span),
                };
                params.push(Param { name, vis, span });
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        self.expect("->")?;
        let mut outputs = Vec::new();
        if self.eat("(") {
            loop {
                outputs.push(self.ident()?);
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        } else {
            outputs.push(self.ident()?);
        }
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.eat("}") {
            stmts.push(self.stmt()?);
        }
        if *self.peek() != Tok::Eof {
            return Err(syntax(self.span(), "unexpected input after program body"));
        }
        Ok(Program {
            name,
            params,
            outputs: outputs.into_iter().map(|o| o.0).collect(),
            stmts,
        })
    }

    fn stmt(&mut self) -> Result<Stmt, CircuitError> {
        let (name, span) = self.ident()?;
        match name.as_str() {
            "assert_bool" => {
                self.expect("(")?;
                let (var, vspan) = self.ident()?;
                self.expect(")")?;
                self.expect(";")?;
                Ok(Stmt::AssertBool { var, span: vspan })
            }
            "assert_range" => {
                self.expect("(")?;
                let (var, vspan) = self.ident()?;
                self.expect(",")?;
                let (bits, bspan) = match self.next() {
                    (Tok::Int(v), s) => (v, s),
                    (t, s) => {
                        return Err(syntax(
                            s,
                            &format!("expected bit count, found {}", Self::describe(&t)),
                        ))
                    }
                };
                self.expect(")")?;
                self.expect(";")?;
                let bits = u32::try_from(bits).map_err(|_| CircuitError::InvalidRange {
                    bits: u32::MAX,
                    line: bspan.line,
                    col: bspan.col,
                })?;
                Ok(Stmt::AssertRange {
                    var,
                    bits,
                    span: vspan,
                })
            }
            _ => {
                self.expect("=")?;
                let expr = self.expr()?;
                self.expect(";")?;
                Ok(Stmt::Assign {
                    target: name,
                    expr,
                    span,
                })
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, CircuitError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CircuitError> {
        let mut lhs = self.unary()?;
        loop {
            let span = self.span();
            if self.eat("*") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("/") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), span);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, CircuitError> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        match self.next() {
            (Tok::Int(v), _) => Ok(Expr::Const(v)),
            (Tok::Ident(name), span) => Ok(Expr::Var(name, span)),
            (Tok::Sym("("), _) => {
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            (t, span) => Err(syntax(
                span,
                &format!("expected expression, found {}", Self::describe(&t)),
            )),
        }
    }
}

/// Parses and checks single assignment, definition before use and that
/// every output is assigned.
pub fn parse(src: &str) -> Result<Program, CircuitError> {
    let toks = Lexer {
        chars: src.chars().peekable(),
        line: 1,
        col: 1,
    }
    .tokens()?;
    let prog = Parser { toks, pos: 0 }.program()?;
    check(&prog)?;
    Ok(prog)
}

const KEYWORDS: &[&str] = &["def", "pub", "priv", "assert_bool", "assert_range"];

fn check(prog: &Program) -> Result<(), CircuitError> {
    let mut defined: HashSet<&str> = HashSet::new();
    let dup = |name: &str, span: Span| CircuitError::DuplicateAssignment {
        name: name.to_string(),
        line: span.line,
        col: span.col,
    };
    for p in &prog.params {
        if KEYWORDS.contains(&p.name.as_str()) {
            return Err(syntax(p.span, &format!("{:?} is a keyword", p.name)));
        }
        if !defined.insert(&p.name) {
            return Err(dup(&p.name, p.span));
        }
    }
    let mut seen_out = HashSet::new();
    for o in &prog.outputs {
        if !seen_out.insert(o.as_str()) {
            return Err(CircuitError::DuplicateOutput(o.clone()));
        }
    }
    for stmt in &prog.stmts {
        match stmt {
            Stmt::Assign { target, expr, span } => {
                check_expr(expr, &defined)?;
                if KEYWORDS.contains(&target.as_str()) {
                    return Err(syntax(*span, &format!("{:?} is a keyword", target)));
                }
                if !defined.insert(target) {
                    return Err(dup(target, *span));
                }
            }
            Stmt::AssertBool { var, span } | Stmt::AssertRange { var, span, .. } => {
                if !defined.contains(var.as_str()) {
                    return Err(undefined(var, *span));
                }
            }
        }
    }
    for o in &prog.outputs {
        let assigned = prog
            .stmts
            .iter()
            .any(|s| matches!(s, Stmt::Assign { target, .. } if target == o));
        if !assigned {
            return Err(CircuitError::UnassignedOutput(o.clone()));
        }
    }
    Ok(())
}

fn undefined(name: &str, span: Span) -> CircuitError {
    CircuitError::UndefinedVariable {
        name: name.to_string(),
        line: span.line,
        col: span.col,
    }
}

fn check_expr(e: &Expr, defined: &HashSet<&str>) -> Result<(), CircuitError> {
    match e {
        Expr::Const(_) => Ok(()),
        Expr::Var(name, span) => {
            if defined.contains(name.as_str()) {
                Ok(())
            } else {
                Err(undefined(name, *span))
            }
        }
        Expr::Neg(a) => check_expr(a, defined),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            check_expr(a, defined)?;
            check_expr(b, defined)
        }
    }
}
