//! The session language: ring, ideal and filtration declarations plus
//! commands, with a hand-rolled lexer and recursive-descent parser. Every
//! error carries a line and column.

use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Assign,
    Slash,
    Caret,
    Star,
    Plus,
    Minus,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{}'", s),
            Tok::Int(n) => write!(f, "'{}'", n),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::Semi => write!(f, "';'"),
            Tok::Assign => write!(f, "'='"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut lx = Lexer {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = lx.peek() {
        let (tl, tc) = (lx.line, lx.col);
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = lx.peek() {
                lx.bump();
                if c == '\n' {
                    break;
                }
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = lx.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(lx.bump());
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while let Some(c) = lx.peek() {
                if let Some(d) = c.to_digit(10) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64))
                        .ok_or(Error::Parse {
                            line: tl,
                            col: tc,
                            msg: "integer literal overflows".into(),
                        })?;
                    lx.bump();
                } else {
                    break;
                }
            }
            Tok::Int(n)
        } else {
            match lx.bump() {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Assign,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                other => {
                    return Err(Error::Parse {
                        line: tl,
                        col: tc,
                        msg: format!("unexpected character '{}'", other),
                    })
                }
            }
        };
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token {
        tok: Tok::Eof,
        line: lx.line,
        col: lx.col,
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingDecl {
    pub name: String,
    pub ring: PolyRing,
    pub defining: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdealExpr {
    Named(String),
    MaxIdeal(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdealSource {
    Gens(Vec<Polynomial>),
    MaxIdeal(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealDecl {
    pub name: String,
    pub ring_name: String,
    pub source: IdealSource,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FiltSpec {
    Adic(IdealExpr),
    Table {
        members: Vec<IdealExpr>,
        ext: IdealExpr,
        r: usize,
    },
    RatliffRush(IdealExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltDecl {
    pub name: String,
    pub spec: FiltSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    CertifyBuchsbaum(String),
    Hilbert(String, usize),
    Invariant(String, IdealExpr),
    Dseq(String, Vec<Polynomial>),
    Corso(String),
    Cohomology(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Ring(RingDecl),
    Ideal(IdealDecl),
    Filtration(FiltDecl),
    Command(Command),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Session {
    pub stmts: Vec<Stmt>,
}

impl Session {
    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.stmts.iter().filter_map(|s| match s {
            Stmt::Command(c) => Some(c),
            _ => None,
        })
    }
}

struct Parser {
    toks: Vec<Token>,
    idx: usize,
    rings: Vec<RingDecl>,
    ideal_names: Vec<String>,
    filt_names: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.idx]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn err<T>(&self, tok: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: tok.line,
            col: tok.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<Token> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            self.err(&t, format!("expected {}, found {}", want, t.tok))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected identifier, found {}", other)),
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<()> {
        let (s, t) = self.expect_ident()?;
        if s == word {
            Ok(())
        } else {
            self.err(&t, format!("expected '{}', found '{}'", word, s))
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(n),
            ref other => self.err(&t, format!("expected integer, found {}", other)),
        }
    }

    fn current_ring(&self, at: &Token) -> Result<&RingDecl> {
        match self.rings.last() {
            Some(r) => Ok(r),
            None => self.err(at, "no ring declared yet"),
        }
    }

    fn ring_named(&self, name: &str, at: &Token) -> Result<&RingDecl> {
        match self.rings.iter().find(|r| r.name == name) {
            Some(r) => Ok(r),
            None => self.err(at, format!("unknown ring '{}'", name)),
        }
    }

    fn check_ideal_expr(&self, e: &IdealExpr, at: &Token) -> Result<()> {
        match e {
            IdealExpr::Named(n) => {
                if self.ideal_names.iter().any(|s| s == n) {
                    Ok(())
                } else {
                    self.err(at, format!("unknown ideal '{}'", n))
                }
            }
            IdealExpr::MaxIdeal(r) => self.ring_named(r, at).map(|_| ()),
        }
    }

    fn parse_ideal_expr(&mut self) -> Result<(IdealExpr, Token)> {
        let (name, t) = self.expect_ident()?;
        if name == "maxideal" {
            self.expect(Tok::LParen)?;
            let (r, _) = self.expect_ident()?;
            self.expect(Tok::RParen)?;
            Ok((IdealExpr::MaxIdeal(r), t))
        } else {
            Ok((IdealExpr::Named(name), t))
        }
    }

    fn parse_poly(&mut self, ring: &PolyRing) -> Result<Polynomial> {
        let mut acc = ring.zero();
        let mut negate = false;
        if self.peek().tok == Tok::Minus {
            self.next();
            negate = true;
        }
        loop {
            let term = self.parse_term(ring)?;
            acc = if negate {
                ring.sub(&acc, &term)
            } else {
                ring.add(&acc, &term)
            };
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    negate = false;
                }
                Tok::Minus => {
                    self.next();
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self, ring: &PolyRing) -> Result<Polynomial> {
        let mut acc = self.parse_factor(ring)?;
        while self.peek().tok == Tok::Star {
            self.next();
            let f = self.parse_factor(ring)?;
            acc = ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self, ring: &PolyRing) -> Result<Polynomial> {
        let t = self.next();
        let base = match &t.tok {
            Tok::Int(n) => ring.constant(*n),
            Tok::Ident(name) => match ring.var_index(name) {
                Some(i) => ring.var(i),
                None => return self.err(&t, format!("unknown variable '{}'", name)),
            },
            Tok::LParen => {
                let inner = self.parse_poly(ring)?;
                self.expect(Tok::RParen)?;
                inner
            }
            other => return self.err(&t, format!("expected a polynomial factor, found {}", other)),
        };
        if self.peek().tok == Tok::Caret {
            self.next();
            let e = self.expect_int()?;
            let mut acc = ring.one();
            for _ in 0..e {
                acc = ring.mul(&acc, &base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    fn parse_poly_list(&mut self, ring: &PolyRing) -> Result<Vec<Polynomial>> {
        let mut out = vec![self.parse_poly(ring)?];
        while self.peek().tok == Tok::Comma {
            self.next();
            out.push(self.parse_poly(ring)?);
        }
        Ok(out)
    }

    fn parse_ring_decl(&mut self) -> Result<RingDecl> {
        let (name, t) = self.expect_ident()?;
        if self.rings.iter().any(|r| r.name == name) {
            return self.err(&t, format!("ring '{}' already declared", name));
        }
        self.expect(Tok::Assign)?;
        self.expect_keyword("F")?;
        self.expect(Tok::LParen)?;
        let prime_tok = self.peek().clone();
        let prime = self.expect_int()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::LBracket)?;
        let mut vars = Vec::new();
        loop {
            let (v, vt) = self.expect_ident()?;
            if vars.contains(&v) {
                return self.err(&vt, format!("duplicate variable '{}'", v));
            }
            vars.push(v);
            match self.next().tok {
                Tok::Comma => continue,
                Tok::RBracket => break,
                other => {
                    let t = self.toks[self.idx - 1].clone();
                    return self.err(&t, format!("expected ',' or ']', found {}", other));
                }
            }
        }
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let ring = PolyRing::new(prime, &var_refs).map_err(|e| Error::Parse {
            line: prime_tok.line,
            col: prime_tok.col,
            msg: e.to_string(),
        })?;
        let mut defining = Vec::new();
        if self.peek().tok == Tok::Slash {
            self.next();
            self.expect(Tok::LParen)?;
            defining = self.parse_poly_list(&ring)?;
            self.expect(Tok::RParen)?;
        }
        self.expect(Tok::Semi)?;
        Ok(RingDecl {
            name,
            ring,
            defining,
        })
    }

    fn parse_ideal_decl(&mut self) -> Result<IdealDecl> {
        let (name, t) = self.expect_ident()?;
        if self.ideal_names.contains(&name) {
            return self.err(&t, format!("ideal '{}' already declared", name));
        }
        self.expect(Tok::Assign)?;
        let decl = if let Tok::Ident(word) = self.peek().tok.clone() {
            if word != "maxideal" {
                let t = self.peek().clone();
                return self.err(&t, format!("expected '(' or 'maxideal', found '{}'", word));
            }
            self.next();
            self.expect(Tok::LParen)?;
            let (rname, rt) = self.expect_ident()?;
            self.ring_named(&rname, &rt)?;
            self.expect(Tok::RParen)?;
            IdealDecl {
                name,
                ring_name: rname.clone(),
                source: IdealSource::MaxIdeal(rname),
            }
        } else {
            let at = self.peek().clone();
            self.expect(Tok::LParen)?;
            let ring = self.current_ring(&at)?.clone();
            let gens = self.parse_poly_list(&ring.ring)?;
            self.expect(Tok::RParen)?;
            IdealDecl {
                name,
                ring_name: ring.name,
                source: IdealSource::Gens(gens),
            }
        };
        self.expect(Tok::Semi)?;
        Ok(decl)
    }

    fn parse_filt_decl(&mut self) -> Result<FiltDecl> {
        let (name, t) = self.expect_ident()?;
        if self.filt_names.contains(&name) {
            return self.err(&t, format!("filtration '{}' already declared", name));
        }
        self.expect(Tok::Assign)?;
        let (word, wt) = self.expect_ident()?;
        let spec = match word.as_str() {
            "adic" => {
                self.expect(Tok::LParen)?;
                let (e, et) = self.parse_ideal_expr()?;
                self.check_ideal_expr(&e, &et)?;
                self.expect(Tok::RParen)?;
                FiltSpec::Adic(e)
            }
            "rr" => {
                self.expect(Tok::LParen)?;
                let (e, et) = self.parse_ideal_expr()?;
                self.check_ideal_expr(&e, &et)?;
                self.expect(Tok::RParen)?;
                FiltSpec::RatliffRush(e)
            }
            "table" => {
                self.expect(Tok::LParen)?;
                let mut members = Vec::new();
                loop {
                    let (e, et) = self.parse_ideal_expr()?;
                    self.check_ideal_expr(&e, &et)?;
                    members.push(e);
                    match self.next().tok {
                        Tok::Comma => continue,
                        Tok::Semi => break,
                        other => {
                            let t = self.toks[self.idx - 1].clone();
                            return self.err(&t, format!("expected ',' or ';', found {}", other));
                        }
                    }
                }
                self.expect_keyword("Q")?;
                self.expect(Tok::Assign)?;
                let (ext, et) = self.parse_ideal_expr()?;
                self.check_ideal_expr(&ext, &et)?;
                self.expect(Tok::Comma)?;
                self.expect_keyword("r")?;
                self.expect(Tok::Assign)?;
                let r = self.expect_int()? as usize;
                self.expect(Tok::RParen)?;
                FiltSpec::Table { members, ext, r }
            }
            other => {
                return self.err(&wt, format!("expected adic, table or rr, found '{}'", other))
            }
        };
        self.expect(Tok::Semi)?;
        Ok(FiltDecl { name, spec })
    }

    fn check_filt_name(&self, name: &str, at: &Token) -> Result<()> {
        if self.filt_names.iter().any(|s| s == name) {
            Ok(())
        } else {
            self.err(at, format!("unknown filtration '{}'", name))
        }
    }

    fn parse_command(&mut self, word: &str, at: &Token) -> Result<Command> {
        Ok(match word {
            "certify" => {
                self.expect_keyword("buchsbaum")?;
                let (f, ft) = self.expect_ident()?;
                self.check_filt_name(&f, &ft)?;
                self.expect(Tok::Semi)?;
                Command::CertifyBuchsbaum(f)
            }
            "hilbert" => {
                let (f, ft) = self.expect_ident()?;
                self.check_filt_name(&f, &ft)?;
                let n = self.expect_int()? as usize;
                self.expect(Tok::Semi)?;
                Command::Hilbert(f, n)
            }
            "invariant" => {
                let (r, rt) = self.expect_ident()?;
                self.ring_named(&r, &rt)?;
                let (e, et) = self.parse_ideal_expr()?;
                self.check_ideal_expr(&e, &et)?;
                self.expect(Tok::Semi)?;
                Command::Invariant(r, e)
            }
            "dseq" => {
                let (r, rt) = self.expect_ident()?;
                let ring = self.ring_named(&r, &rt)?.clone();
                self.expect(Tok::LParen)?;
                let seq = self.parse_poly_list(&ring.ring)?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Semi)?;
                Command::Dseq(r, seq)
            }
            "corso" => {
                let (f, ft) = self.expect_ident()?;
                self.check_filt_name(&f, &ft)?;
                self.expect(Tok::Semi)?;
                Command::Corso(f)
            }
            "cohomology" => {
                let (r, rt) = self.expect_ident()?;
                self.ring_named(&r, &rt)?;
                self.expect(Tok::Semi)?;
                Command::Cohomology(r)
            }
            other => return self.err(at, format!("unknown statement '{}'", other)),
        })
    }

    fn parse_session(&mut self) -> Result<Session> {
        let mut stmts = Vec::new();
        loop {
            let t = self.peek().clone();
            let word = match &t.tok {
                Tok::Eof => break,
                Tok::Ident(s) => s.clone(),
                other => return self.err(&t, format!("expected a statement, found {}", other)),
            };
            match word.as_str() {
                "ring" => {
                    self.next();
                    let d = self.parse_ring_decl()?;
                    self.rings.push(d.clone());
                    stmts.push(Stmt::Ring(d));
                }
                "ideal" => {
                    self.next();
                    let d = self.parse_ideal_decl()?;
                    self.ideal_names.push(d.name.clone());
                    stmts.push(Stmt::Ideal(d));
                }
                "filtration" => {
                    self.next();
                    let d = self.parse_filt_decl()?;
                    self.filt_names.push(d.name.clone());
                    stmts.push(Stmt::Filtration(d));
                }
                _ => {
                    self.next();
                    let c = self.parse_command(&word, &t)?;
                    stmts.push(Stmt::Command(c));
                }
            }
        }
        Ok(Session { stmts })
    }
}

pub fn parse_session(text: &str) -> Result<Session> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        rings: Vec::new(),
        ideal_names: Vec::new(),
        filt_names: Vec::new(),
    };
    p.parse_session()
}

/// Parse one polynomial over `ring`, consuming the whole input.
pub fn parse_polynomial(ring: &PolyRing, text: &str) -> Result<Polynomial> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        rings: Vec::new(),
        ideal_names: Vec::new(),
        filt_names: Vec::new(),
    };
    let poly = p.parse_poly(ring)?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return p.err(&t, format!("trailing input {}", t.tok));
    }
    Ok(poly)
}

fn print_ideal_expr(e: &IdealExpr) -> String {
    match e {
        IdealExpr::Named(n) => n.clone(),
        IdealExpr::MaxIdeal(r) => format!("maxideal({})", r),
    }
}

/// Canonical text form; re-parsing yields an identical Session.
pub fn print_session(s: &Session) -> String {
    let mut out = String::new();
    let mut rings: Vec<&RingDecl> = Vec::new();
    for stmt in &s.stmts {
        match stmt {
            Stmt::Ring(d) => {
                rings.push(d);
                let vars = d.ring.vars().join(",");
                let mut line = format!(
                    "ring {} = F({})[{}]",
                    d.name,
                    d.ring.field().modulus(),
                    vars
                );
                if !d.defining.is_empty() {
                    let gens: Vec<String> =
                        d.defining.iter().map(|g| d.ring.fmt_poly(g)).collect();
                    line.push_str(&format!(" / ({})", gens.join(", ")));
                }
                out.push_str(&line);
                out.push_str(";\n");
            }
            Stmt::Ideal(d) => match &d.source {
                IdealSource::MaxIdeal(r) => {
                    out.push_str(&format!("ideal {} = maxideal({});\n", d.name, r));
                }
                IdealSource::Gens(gens) => {
                    let ring = rings
                        .iter()
                        .find(|r| r.name == d.ring_name)
                        .expect("ideal references a declared ring");
                    let gens: Vec<String> =
                        gens.iter().map(|g| ring.ring.fmt_poly(g)).collect();
                    out.push_str(&format!("ideal {} = ({});\n", d.name, gens.join(", ")));
                }
            },
            Stmt::Filtration(d) => {
                let body = match &d.spec {
                    FiltSpec::Adic(e) => format!("adic({})", print_ideal_expr(e)),
                    FiltSpec::RatliffRush(e) => format!("rr({})", print_ideal_expr(e)),
                    FiltSpec::Table { members, ext, r } => {
                        let ms: Vec<String> = members.iter().map(print_ideal_expr).collect();
                        format!(
                            "table({}; Q={}, r={})",
                            ms.join(", "),
                            print_ideal_expr(ext),
                            r
                        )
                    }
                };
                out.push_str(&format!("filtration {} = {};\n", d.name, body));
            }
            Stmt::Command(c) => {
                let line = match c {
                    Command::CertifyBuchsbaum(f) => format!("certify buchsbaum {}", f),
                    Command::Hilbert(f, n) => format!("hilbert {} {}", f, n),
                    Command::Invariant(r, e) => {
                        format!("invariant {} {}", r, print_ideal_expr(e))
                    }
                    Command::Dseq(r, seq) => {
                        let ring = rings
                            .iter()
                            .find(|d| d.name == *r)
                            .expect("command references a declared ring");
                        let polys: Vec<String> =
                            seq.iter().map(|g| ring.ring.fmt_poly(g)).collect();
                        format!("dseq {} ({})", r, polys.join(", "))
                    }
                    Command::Corso(f) => format!("corso {}", f),
                    Command::Cohomology(r) => format!("cohomology {}", r),
                };
                out.push_str(&line);
                out.push_str(";\n");
            }
        }
    }
    out
}
