//! Model files.
//!
//! Grammar:
//! ```txt
//! file       ::= ( "vb" INT ";" )? statement*
//! statement  ::= "base" INT ";"
//!              | ( "even" | "odd" ) decl ( "," decl )* ( "charge" "-"? INT )? ";"
//!              | "structure" table ( "gauge" IDENT "ghost" IDENT )? ";"
//!              | ( "lagrangian" | "form" ) IDENT "=" expr ";"
//!              | "symmetry" IDENT "=" "brst" ";"
//!              | "symmetry" IDENT ( "even" | "odd" ) "{" ( target "=" expr ";" )* "}" ";"?
//! decl       ::= IDENT ( "[" INT "]" )?
//! table      ::= "eps" | "levi_civita" "(" INT ")" | "abelian" "(" INT ")"
//!              | "table" "(" INT ")" ( entry ( "," entry )* )?
//! entry      ::= "[" INT "," INT "," INT "]" "=" "-"? INT ( "/" INT )?
//! target     ::= "dx" INT | field
//!
//! expr       ::= term ( ( "+" | "-" ) term )*
//! term       ::= unary ( ( "*" | "^" | "/" ) unary )*
//! unary      ::= "-" unary | power
//! power      ::= atom ( "^" INT )?
//! atom       ::= INT | "(" expr ")" | "x" INT | "dx" INT | "omega" ( "(" INT ")" )?
//!              | "theta" "(" field ( "," "{" ints "}" )? ")" | IDENT | jet
//! jet        ::= field ( "_" "{" ints "}" )?
//! field      ::= IDENT ( "[" ints "]" )?
//! ```
//!
//! `*` and `^` both denote the graded wedge product, which on functions is
//! the ordinary product. A bare `IDENT` that is not a field refers to an
//! earlier named item. Multi-indices are multisets: `y_{2,1}` is `y_{1,2}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::lexer::{error_at, tokenize, Tok, Token};
use super::{Item, ItemKind, ModelFile};
use crate::brst::{BrstModel, StructureConstants};
use crate::error::Result;
use crate::forms::Form;
use crate::kernel::{Dir, FieldId, GradedPoly, Jet, MultiIndex, Parity, Rational, Universe};
use crate::symmetry::SuperSymmetry;
use crate::variational::Lagrangian;

const KEYWORDS: &[&str] = &[
    "vb", "base", "even", "odd", "charge", "structure", "gauge", "ghost", "lagrangian", "form", "symmetry",
    "brst", "theta", "omega", "eps", "levi_civita", "abelian", "table",
];

fn is_coordinate(word: &str, prefix: &str) -> Option<u64> {
    let rest = word.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn reserved(word: &str) -> bool {
    KEYWORDS.contains(&word) || is_coordinate(word, "x").is_some() || is_coordinate(word, "dx").is_some()
}

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    universe: &'a Universe,
    items: &'a [Item],
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, universe: &'a Universe, items: &'a [Item]) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            universe,
            items,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, t: &Token, message: impl Into<String>) -> Result<T> {
        Err(error_at(t.line, t.column, message))
    }

    fn expect(&mut self, want: Tok) -> Result<Token> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            let msg = format!("expected {}, found {}", want.describe(), t.tok.describe());
            self.fail(&t, msg)
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if &self.peek().tok == want {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => {
                let msg = format!("expected identifier, found {}", other.describe());
                self.fail(&t, msg)
            }
        }
    }

    fn int(&mut self) -> Result<(u64, Token)> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok((n, t)),
            ref other => {
                let msg = format!("expected integer, found {}", other.describe());
                self.fail(&t, msg)
            }
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Token> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == word => Ok(t),
            other => {
                let msg = format!("expected `{}`, found {}", word, other.describe());
                self.fail(&t, msg)
            }
        }
    }

    fn at_end(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn n(&self) -> Dir {
        self.universe.n
    }

    fn direction(&mut self) -> Result<Dir> {
        let (d, t) = self.int()?;
        if d == 0 || d > self.n() as u64 {
            return self.fail(&t, format!("direction {} out of range 1..={}", d, self.n()));
        }
        Ok(d as Dir)
    }

    /// `{ i, j, ... }` with every entry a direction.
    fn multi_index(&mut self) -> Result<MultiIndex> {
        self.expect(Tok::LBrace)?;
        if self.peek().tok == Tok::RBrace {
            let t = self.peek().clone();
            return self.fail(&t, "empty multi-index");
        }
        let mut dirs = vec![self.direction()?];
        while self.eat(&Tok::Comma) {
            dirs.push(self.direction()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(MultiIndex::new(dirs))
    }

    fn subscript(&mut self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if self.eat(&Tok::LBracket) {
            out.push(self.int()?.0 as u32);
            while self.eat(&Tok::Comma) {
                out.push(self.int()?.0 as u32);
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(out)
    }

    fn field_named(&mut self, name: &str, at: &Token) -> Result<FieldId> {
        let sub = self.subscript()?;
        match self.universe.lookup(name, &sub) {
            Some(f) => Ok(f),
            None if self.universe.has_family(name) => {
                let label: Vec<String> = sub.iter().map(u32::to_string).collect();
                self.fail(at, format!("index [{}] out of range for `{}`", label.join(","), name))
            }
            None => self.fail(at, format!("unknown field `{}`", name)),
        }
    }

    fn field(&mut self) -> Result<FieldId> {
        let (name, t) = self.ident()?;
        self.field_named(&name, &t)
    }

    pub(crate) fn expr(&mut self) -> Result<Form> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc += &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Form> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star | Tok::Caret => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = acc.wedge(&rhs);
                }
                Tok::Slash => {
                    let t = self.next();
                    let rhs = self.unary()?;
                    let c = constant_of(&rhs)
                        .ok_or_else(|| error_at(t.line, t.column + 1, "division by a non-constant"))?;
                    if c.is_zero() {
                        return self.fail(&t, "division by zero");
                    }
                    acc = acc.scale(&(Rational::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Form> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Form> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            if let Tok::Int(e) = *self.peek_at(1) {
                self.next();
                let t = self.next();
                if e > 64 {
                    return self.fail(&t, "exponent larger than 64");
                }
                let mut out = Form::one();
                for _ in 0..e {
                    out = out.wedge(&base);
                }
                return Ok(out);
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Form> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(Form::function(GradedPoly::constant(Rational::from_integer((*n).into())))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(word) => self.word(word.clone(), &t),
            other => {
                let msg = format!("expected an expression, found {}", other.describe());
                self.fail(&t, msg)
            }
        }
    }

    fn word(&mut self, word: String, t: &Token) -> Result<Form> {
        let n = self.n();
        let check = |d: u64, p: &Parser| -> Result<Dir> {
            if d == 0 || d > n as u64 {
                p.fail(t, format!("direction {} out of range 1..={}", d, n))
            } else {
                Ok(d as Dir)
            }
        };
        if let Some(d) = is_coordinate(&word, "dx") {
            return Ok(Form::dx(check(d, self)?));
        }
        if let Some(d) = is_coordinate(&word, "x") {
            return Ok(Form::function(GradedPoly::base(check(d, self)?)));
        }
        match word.as_str() {
            "theta" => {
                self.expect(Tok::LParen)?;
                let f = self.field()?;
                let index = if self.eat(&Tok::Comma) {
                    self.multi_index()?
                } else {
                    MultiIndex::empty()
                };
                self.expect(Tok::RParen)?;
                return Ok(Form::theta(Jet::new(f, index)));
            }
            "omega" => {
                if self.eat(&Tok::LParen) {
                    let d = self.direction()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Form::omega_lambda(n, d));
                }
                return Ok(Form::omega(n));
            }
            _ => {}
        }
        if self.universe.has_family(&word) {
            let f = self.field_named(&word, t)?;
            let index = if self.eat(&Tok::Underscore) {
                self.multi_index()?
            } else {
                MultiIndex::empty()
            };
            return Ok(Form::function(GradedPoly::jet(Jet::new(f, index))));
        }
        if let Some(item) = self.items.iter().find(|i| i.name == word) {
            return match &item.kind {
                ItemKind::Lagrangian(l) => Ok(l.form()),
                ItemKind::Form(f) => Ok(f.clone()),
                ItemKind::Symmetry(_) => self.fail(t, format!("`{}` is a symmetry, not a form", word)),
            };
        }
        self.fail(t, format!("unknown identifier `{}`", word))
    }
}

fn constant_of(f: &Form) -> Option<Rational> {
    if f.is_zero() {
        return Some(Rational::zero());
    }
    if f.terms().len() != 1 || f.degrees() != vec![(0, 0)] {
        return None;
    }
    f.function_part().as_constant()
}

/// Parses a complete model file.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let toks = tokenize(text)?;
    let mut model = ModelFile {
        version: 1,
        universe: Universe::new(0),
        brst: None,
        items: Vec::new(),
    };
    let mut pos = 0;
    let mut have_base = false;
    let mut first = true;
    while toks[pos].tok != Tok::Eof {
        let rest: Vec<Token> = toks[pos..].to_vec();
        let mut p = Parser {
            toks: rest,
            pos: 0,
            universe: &model.universe,
            items: &model.items,
        };
        let (word, wt) = p.ident()?;
        if word != "vb" && word != "base" && !have_base {
            return p.fail(&wt, "`base n;` must come before any other statement");
        }
        enum Action {
            Base(Dir),
            Fields(Parity, Vec<(String, usize, Token)>, i64),
            Structure(StructureConstants, String, String, Token),
            Item(Item),
            Version,
        }
        let action = match word.as_str() {
            "vb" => {
                if !first {
                    return p.fail(&wt, "the `vb` header must be the first statement");
                }
                let (v, vt) = p.int()?;
                if v != 1 {
                    return p.fail(&vt, format!("unsupported format version {}", v));
                }
                Action::Version
            }
            "base" => {
                if have_base {
                    return p.fail(&wt, "base dimension declared twice");
                }
                let (n, nt) = p.int()?;
                if n == 0 || n > 8 {
                    return p.fail(&nt, "base dimension must lie in 1..=8");
                }
                Action::Base(n as Dir)
            }
            "even" | "odd" => {
                let parity = if word == "odd" { Parity::Odd } else { Parity::Even };
                let mut decls = Vec::new();
                loop {
                    let (name, nt) = p.ident()?;
                    if reserved(&name) {
                        return p.fail(&nt, format!("`{}` is reserved", name));
                    }
                    let count = if p.eat(&Tok::LBracket) {
                        let (k, kt) = p.int()?;
                        if k == 0 || k > 64 {
                            return p.fail(&kt, "family size must lie in 1..=64");
                        }
                        p.expect(Tok::RBracket)?;
                        k as usize
                    } else {
                        0
                    };
                    decls.push((name, count, nt));
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                let mut charge = if parity.is_odd() { 1 } else { 0 };
                if let Tok::Ident(w) = &p.peek().tok {
                    if w == "charge" {
                        p.next();
                        let neg = p.eat(&Tok::Minus);
                        let (k, _) = p.int()?;
                        charge = if neg { -(k as i64) } else { k as i64 };
                    }
                }
                Action::Fields(parity, decls, charge)
            }
            "structure" => {
                let table = p.structure()?;
                let (mut gauge, mut ghost) = ("a".to_string(), "C".to_string());
                if let Tok::Ident(w) = &p.peek().tok {
                    if w == "gauge" {
                        p.next();
                        gauge = p.ident()?.0;
                        p.keyword("ghost")?;
                        ghost = p.ident()?.0;
                    }
                }
                Action::Structure(table, gauge, ghost, wt.clone())
            }
            "lagrangian" | "form" => {
                let (name, nt) = p.ident()?;
                p.check_new_name(&name, &nt)?;
                p.expect(Tok::Eq)?;
                let et = p.peek().clone();
                let value = p.expr()?;
                let kind = if word == "lagrangian" {
                    match Lagrangian::from_form(&value, p.n()) {
                        Ok(l) => ItemKind::Lagrangian(l),
                        Err(e) => return p.fail(&et, format!("not a Lagrangian: {}", e)),
                    }
                } else {
                    ItemKind::Form(value)
                };
                Action::Item(Item {
                    name,
                    kind,
                    line: nt.line,
                })
            }
            "symmetry" => {
                let (name, nt) = p.ident()?;
                p.check_new_name(&name, &nt)?;
                let sym = if p.eat(&Tok::Eq) {
                    let bt = p.keyword("brst")?;
                    match &model.brst {
                        Some(m) => m.build(),
                        None => return p.fail(&bt, "`brst` needs a `structure` declaration"),
                    }
                } else {
                    p.symmetry_block(&nt)?
                };
                Action::Item(Item {
                    name,
                    kind: ItemKind::Symmetry(sym),
                    line: nt.line,
                })
            }
            other => return p.fail(&wt, format!("unknown statement `{}`", other)),
        };
        if p.pos > 0 && p.toks[p.pos - 1].tok == Tok::RBrace {
            p.eat(&Tok::Semi);
        } else {
            p.expect(Tok::Semi)?;
        }
        pos += p.pos;
        first = false;
        match action {
            Action::Version => {}
            Action::Base(n) => {
                model.universe = Universe::new(n);
                have_base = true;
            }
            Action::Fields(parity, decls, charge) => {
                for (name, count, nt) in decls {
                    if model.universe.has_family(&name) || model.items.iter().any(|i| i.name == name) {
                        return Err(error_at(nt.line, nt.column, format!("`{}` declared twice", name)));
                    }
                    let subs: Vec<Vec<u32>> = if count == 0 {
                        vec![vec![]]
                    } else {
                        (1..=count as u32).map(|i| vec![i]).collect()
                    };
                    for sub in subs {
                        match parity {
                            Parity::Odd => {
                                model.universe.add_odd(&name, sub, charge);
                            }
                            Parity::Even => {
                                let id = model.universe.add_even(&name, sub);
                                if charge != 0 {
                                    model.universe.set_charge(id, charge);
                                }
                            }
                        }
                    }
                }
            }
            Action::Structure(table, gauge, ghost, st) => {
                if model.brst.is_some() {
                    return Err(error_at(st.line, st.column, "structure declared twice"));
                }
                for name in [&gauge, &ghost] {
                    if reserved(name) || model.items.iter().any(|i| &i.name == name) {
                        return Err(error_at(st.line, st.column, format!("`{}` cannot name a field", name)));
                    }
                }
                let m = BrstModel::install(&mut model.universe, table, &gauge, &ghost)
                    .map_err(|e| error_at(st.line, st.column, e.to_string()))?;
                model.brst = Some(m);
            }
            Action::Item(item) => model.items.push(item),
        }
    }
    if !have_base {
        let t = &toks[pos];
        return Err(error_at(t.line, t.column, "missing `base n;` declaration"));
    }
    Ok(model)
}

impl<'a> Parser<'a> {
    fn check_new_name(&self, name: &str, t: &Token) -> Result<()> {
        if reserved(name) {
            return self.fail(t, format!("`{}` is reserved", name));
        }
        if self.universe.has_family(name) || self.items.iter().any(|i| i.name == name) {
            return self.fail(t, format!("`{}` declared twice", name));
        }
        Ok(())
    }

    fn rational(&mut self) -> Result<Rational> {
        let neg = self.eat(&Tok::Minus);
        let (num, _) = self.int()?;
        let mut v = Rational::from_integer(num.into());
        if self.eat(&Tok::Slash) {
            let (den, dt) = self.int()?;
            if den == 0 {
                return self.fail(&dt, "division by zero");
            }
            v /= Rational::from_integer(den.into());
        }
        Ok(if neg { -v } else { v })
    }

    fn structure(&mut self) -> Result<StructureConstants> {
        let (kind, kt) = self.ident()?;
        let mut dim = || -> Result<usize> {
            self.expect(Tok::LParen)?;
            let (d, dt) = self.int()?;
            self.expect(Tok::RParen)?;
            if d == 0 || d > 16 {
                return Err(error_at(dt.line, dt.column, "algebra dimension must lie in 1..=16"));
            }
            Ok(d as usize)
        };
        match kind.as_str() {
            "eps" => Ok(StructureConstants::levi_civita()),
            "levi_civita" => {
                let d = dim()?;
                if d != 3 {
                    return self.fail(&kt, "levi_civita is defined in dimension 3");
                }
                Ok(StructureConstants::levi_civita())
            }
            "abelian" => Ok(StructureConstants::abelian(dim()?)),
            "table" => {
                let d = dim()?;
                let mut entries = Vec::new();
                if self.peek().tok == Tok::LBracket {
                    loop {
                        self.expect(Tok::LBracket)?;
                        let mut idx = [0usize; 3];
                        for (k, slot) in idx.iter_mut().enumerate() {
                            if k > 0 {
                                self.expect(Tok::Comma)?;
                            }
                            *slot = self.int()?.0 as usize;
                        }
                        self.expect(Tok::RBracket)?;
                        self.expect(Tok::Eq)?;
                        entries.push(((idx[0], idx[1], idx[2]), self.rational()?));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                StructureConstants::new(d, &entries).or_else(|e| self.fail(&kt, e.to_string()))
            }
            other => self.fail(&kt, format!("unknown structure `{}`", other)),
        }
    }

    fn symmetry_block(&mut self, at: &Token) -> Result<SuperSymmetry> {
        let (word, wt) = self.ident()?;
        let parity = match word.as_str() {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            _ => return self.fail(&wt, "expected `even` or `odd`"),
        };
        self.expect(Tok::LBrace)?;
        let n = self.n();
        let mut base = vec![GradedPoly::zero(); n as usize];
        let mut chars: BTreeMap<FieldId, GradedPoly> = BTreeMap::new();
        while !self.eat(&Tok::RBrace) {
            let (target, tt) = self.ident()?;
            let slot = if let Some(d) = is_coordinate(&target, "dx") {
                if d == 0 || d > n as u64 {
                    return self.fail(&tt, format!("direction {} out of range 1..={}", d, n));
                }
                Err(d as usize - 1)
            } else if self.universe.has_family(&target) {
                Ok(self.field_named(&target, &tt)?)
            } else {
                return self.fail(&tt, format!("unknown field `{}`", target));
            };
            self.expect(Tok::Eq)?;
            let et = self.peek().clone();
            let value = self.expr()?;
            if value.degrees().iter().any(|d| *d != (0, 0)) {
                return self.fail(&et, "symmetry components must be functions");
            }
            let f = value.function_part();
            match slot {
                Err(d) => base[d] = f,
                Ok(id) => {
                    chars.insert(id, f);
                }
            }
            self.expect(Tok::Semi)?;
            if self.at_end() {
                let t = self.peek().clone();
                return self.fail(&t, "unterminated symmetry block");
            }
        }
        SuperSymmetry::new(n, parity, base, chars).or_else(|e| self.fail(at, e.to_string()))
    }
}

/// Parses a single expression against a universe and earlier items.
pub fn parse_expr(text: &str, universe: &Universe, items: &[Item]) -> Result<Form> {
    let mut p = Parser::new(text, universe, items)?;
    let e = p.expr()?;
    if !p.at_end() {
        let t = p.peek().clone();
        return p.fail(&t, format!("unexpected {}", t.tok.describe()));
    }
    Ok(e)
}
