//! Text forms: polynomials, expressions, and the grammar DSL.
//!
//! One expression syntax serves all three. Commutative variables are bare
//! identifiers (`q`, `x`, `beta`), letters are `m[i]`, products need an
//! explicit `*`, and `^` takes an integer exponent. Inside grammar rules the
//! index variable `j` may appear in letter indices (`x[j+1]`) and in
//! exponents of `q` (`q^j`, `q^(j+1)`).
//!
//! A grammar file is a sequence of `;`-terminated clauses; `#` starts a
//! comment:
//!
//! ```text
//! grammar G_tan;
//! masters x;
//! order DIO;
//! rule x[j] -> q^j * (1 + x[j]*x[j+1]);
//! eval x[j] -> x * q^j;
//! seed x[0];
//! ```

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::evalmap::{EvalImage, EvalMap};
use crate::freealg::{Expr, Letter, Sign, Word};
use crate::grammar::{reduce_template, Grammar, GrammarError, IndexSpec, Order, RuleTemplate, TemplateLetter};
use crate::qpoly::{q_symbol, Monomial, QPoly};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("semantic error at line {line}, column {column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
}

impl ParseError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, ParseError::Syntax { .. })
    }

    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::Semantic { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: pos.line, column: pos.col, message: message.into() }
}

fn semantic(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Semantic { line: pos.line, column: pos.col, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(syntax(pos, "unterminated string"));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' if i < chars.len() && chars[i] == '>' => {
                    i += 1;
                    Tok::Arrow
                }
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            }
        };
        col += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Int(BigInt),
    Var(String, Pos),
    Letter(String, Box<Ast>, Pos),
    Sum(Vec<(bool, Ast)>),
    Prod(Vec<Ast>),
    Pow(Box<Ast>, Box<Ast>, Pos),
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: tokenize(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == t {
            Ok(self.bump().pos)
        } else {
            Err(syntax(self.pos(), format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().pos)),
            other => Err(syntax(self.pos(), format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut terms = Vec::new();
        let mut neg = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                neg = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        terms.push((neg, self.term()?));
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push((false, self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 && !terms[0].0 { terms.pop().unwrap().1 } else { Ast::Sum(terms) })
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Ast::Prod(factors) })
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            let pos = self.bump().pos;
            let exp = if *self.peek() == Tok::Minus {
                self.bump();
                Ast::Sum(vec![(true, self.atom()?)])
            } else {
                self.atom()?
            };
            return Ok(Ast::Pow(Box::new(base), Box::new(exp), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Ast::Int(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LBrack {
                    self.bump();
                    let idx = self.expr()?;
                    self.expect(Tok::RBrack)?;
                    Ok(Ast::Letter(name, Box::new(idx), pos))
                } else {
                    Ok(Ast::Var(name, pos))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(syntax(pos, format!("expected a term, found {}", other.describe()))),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(syntax(self.pos(), format!("unexpected {}", other.describe()))),
        }
    }
}

/// Evaluation context for an expression.
struct Ctx<'a> {
    /// Rule mode: `j` is the index variable.
    rule: bool,
    /// Letters must use one of these masters, when given.
    masters: Option<&'a HashSet<Symbol>>,
}

/// `a*j + b`.
fn to_linear(ast: &Ast, ctx: &Ctx, pos: Pos) -> Result<(i64, i64), ParseError> {
    let small = |n: &BigInt| n.to_i64().ok_or_else(|| semantic(pos, "integer out of range"));
    match ast {
        Ast::Int(n) => Ok((0, small(n)?)),
        Ast::Var(s, p) if s == "j" && ctx.rule => {
            let _ = p;
            Ok((1, 0))
        }
        Ast::Var(s, p) => Err(semantic(*p, format!("expected an integer{}, found `{s}`", if ctx.rule { " or j" } else { "" }))),
        Ast::Sum(ts) => {
            let mut acc = (0i64, 0i64);
            for (neg, t) in ts {
                let (a, b) = to_linear(t, ctx, pos)?;
                let s = if *neg { -1 } else { 1 };
                acc = (acc.0 + s * a, acc.1 + s * b);
            }
            Ok(acc)
        }
        Ast::Prod(fs) => {
            let mut acc = (0i64, 1i64);
            for f in fs {
                let (a, b) = to_linear(f, ctx, pos)?;
                if acc.0 != 0 && a != 0 {
                    return Err(semantic(pos, "index expression is not linear in j"));
                }
                acc = (acc.0 * b + a * acc.1, acc.1 * b);
            }
            Ok(acc)
        }
        Ast::Pow(_, _, p) => Err(semantic(*p, "powers are not allowed here")),
        Ast::Letter(_, _, p) => Err(semantic(*p, "letters are not allowed here")),
    }
}

/// Terms keyed by (power of `q^j`, template word).
type TExpr = BTreeMap<(i64, Vec<TemplateLetter>), QPoly>;

fn t_add_term(t: &mut TExpr, key: (i64, Vec<TemplateLetter>), c: QPoly) {
    let entry = t.entry(key.clone()).or_default();
    *entry += &c;
    if entry.is_zero() {
        t.remove(&key);
    }
}

fn t_const(c: QPoly) -> TExpr {
    let mut t = TExpr::new();
    t_add_term(&mut t, (0, vec![]), c);
    t
}

fn t_mul(a: &TExpr, b: &TExpr) -> TExpr {
    let mut out = TExpr::new();
    for ((ja, wa), ca) in a {
        for ((jb, wb), cb) in b {
            let w = reduce_template(wa.iter().chain(wb.iter()).copied());
            t_add_term(&mut out, (ja + jb, w), ca * cb);
        }
    }
    out
}

fn t_pow(base: &TExpr, k: i64, pos: Pos) -> Result<TExpr, ParseError> {
    if k >= 0 {
        let mut out = t_const(QPoly::one());
        for _ in 0..k {
            out = t_mul(&out, base);
        }
        return Ok(out);
    }
    if base.len() != 1 {
        return Err(semantic(pos, "negative power of something other than a single monomial term"));
    }
    let ((j, w), c) = base.iter().next().unwrap();
    let inv_c = c.invert_monomial().map_err(|e| semantic(pos, e.to_string()))?;
    let inv_w: Vec<TemplateLetter> = w.iter().rev().map(|l| l.inverse()).collect();
    let mut inv = TExpr::new();
    t_add_term(&mut inv, (-j, inv_w), inv_c);
    t_pow(&inv, -k, pos)
}

fn eval(ast: &Ast, ctx: &Ctx) -> Result<TExpr, ParseError> {
    match ast {
        Ast::Int(n) => Ok(t_const(QPoly::constant(n.clone()))),
        Ast::Var(s, p) => {
            if ctx.rule && s == "j" {
                return Err(semantic(*p, "`j` may only appear in an index or in an exponent of q"));
            }
            Ok(t_const(QPoly::var(s)))
        }
        Ast::Letter(m, idx, p) => {
            let master = Symbol::new(m);
            if let Some(ms) = ctx.masters {
                if !ms.contains(&master) {
                    return Err(semantic(*p, format!("unknown master `{m}`")));
                }
            }
            let (a, b) = to_linear(idx, ctx, *p)?;
            let index = match a {
                0 if b >= 0 && b <= u32::MAX as i64 => IndexSpec::Abs(b),
                1 if b >= 0 => IndexSpec::Rel(b),
                _ => return Err(semantic(*p, format!("malformed index in `{m}[...]`"))),
            };
            let mut t = TExpr::new();
            t_add_term(&mut t, (0, vec![TemplateLetter { master, index, sign: Sign::Pos }]), QPoly::one());
            Ok(t)
        }
        Ast::Sum(ts) => {
            let mut out = TExpr::new();
            for (neg, t) in ts {
                for (k, c) in eval(t, ctx)? {
                    t_add_term(&mut out, k, if *neg { -c } else { c });
                }
            }
            Ok(out)
        }
        Ast::Prod(fs) => {
            let mut out = t_const(QPoly::one());
            for f in fs {
                out = t_mul(&out, &eval(f, ctx)?);
            }
            Ok(out)
        }
        Ast::Pow(base, exp, p) => {
            let (a, b) = to_linear(exp, ctx, *p)?;
            if a != 0 {
                match base.as_ref() {
                    Ast::Var(s, _) if s == "q" => {
                        let e = i32::try_from(b).map_err(|_| semantic(*p, "exponent out of range"))?;
                        let mut t = TExpr::new();
                        t_add_term(&mut t, (a, vec![]), QPoly::q_pow(e));
                        Ok(t)
                    }
                    _ => Err(semantic(*p, "only q may carry an exponent depending on j")),
                }
            } else {
                t_pow(&eval(base, ctx)?, b, *p)
            }
        }
    }
}

fn texpr_to_qpoly(t: TExpr, pos: Pos) -> Result<QPoly, ParseError> {
    let mut out = QPoly::zero();
    for ((j, w), c) in t {
        if j != 0 || !w.is_empty() {
            return Err(semantic(pos, "expected a polynomial, found a word"));
        }
        out += &c;
    }
    Ok(out)
}

fn texpr_to_expr(t: TExpr, pos: Pos) -> Result<Expr, ParseError> {
    let mut out = Expr::zero();
    for ((j, w), c) in t {
        if j != 0 {
            return Err(semantic(pos, "unexpected dependence on j"));
        }
        let mut letters = Vec::with_capacity(w.len());
        for l in w {
            match l.index {
                IndexSpec::Abs(i) => letters.push(Letter::new(l.master, i as u32, l.sign)),
                IndexSpec::Rel(_) => return Err(semantic(pos, "relative index outside a rule")),
            }
        }
        out.add_term(Word::from_letters(letters), c);
    }
    Ok(out)
}

fn texpr_to_rule(master: Symbol, t: TExpr, pos: Pos) -> Result<RuleTemplate, ParseError> {
    let j_power = t.keys().next().map_or(0, |k| k.0);
    let mut r = RuleTemplate::new(master, j_power);
    for ((j, w), c) in t {
        if j != j_power {
            return Err(semantic(pos, "all terms of a rule must share the same power of q^j"));
        }
        r.add_term(c, w);
    }
    Ok(r)
}

/// Parses a Laurent polynomial such as `(1+q)*x^-1*y`.
pub fn parse_qpoly(src: &str) -> Result<QPoly, ParseError> {
    let mut p = Parser::new(src)?;
    let pos = p.pos();
    let ast = p.expr()?;
    p.finish()?;
    texpr_to_qpoly(eval(&ast, &Ctx { rule: false, masters: None })?, pos)
}

/// Parses an expression such as `(1+q)*x[1] + x[1]^2*x[0]`.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let pos = p.pos();
    let ast = p.expr()?;
    p.finish()?;
    texpr_to_expr(eval(&ast, &Ctx { rule: false, masters: None })?, pos)
}

/// A parsed grammar file: the grammar plus optional evaluation map and seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarFile {
    pub grammar: Grammar,
    pub eval: Option<EvalMap>,
    pub seed: Option<Expr>,
}

fn grammar_err(pos: Pos, e: GrammarError) -> ParseError {
    semantic(pos, e.to_string())
}

/// Parses a grammar file.
pub fn parse_grammar(src: &str) -> Result<GrammarFile, ParseError> {
    let mut p = Parser::new(src)?;
    let mut name: Option<String> = None;
    let mut masters: Option<(Vec<Symbol>, Pos)> = None;
    let mut order = Order::Kso;
    let mut rules: Vec<(Symbol, Ast, Pos)> = Vec::new();
    let mut evals: Vec<(Symbol, Ast, Pos)> = Vec::new();
    let mut seed: Option<(Ast, Pos)> = None;
    let mut first_pos = p.pos();

    while *p.peek() != Tok::Eof {
        let (kw, kpos) = p.ident()?;
        if rules.is_empty() && masters.is_none() {
            first_pos = kpos;
        }
        match kw.as_str() {
            "grammar" => {
                let n = match p.peek().clone() {
                    Tok::Ident(s) | Tok::Str(s) => {
                        p.bump();
                        s
                    }
                    other => return Err(syntax(p.pos(), format!("expected grammar name, found {}", other.describe()))),
                };
                name = Some(n);
            }
            "masters" => {
                let mut ms = Vec::new();
                loop {
                    let (m, mpos) = p.ident()?;
                    let s = Symbol::new(&m);
                    if ms.contains(&s) {
                        return Err(semantic(mpos, format!("master `{m}` declared twice")));
                    }
                    ms.push(s);
                    if *p.peek() == Tok::Comma {
                        p.bump();
                    } else {
                        break;
                    }
                }
                masters = Some((ms, kpos));
            }
            "order" => {
                let (o, opos) = p.ident()?;
                order = o.parse().map_err(|e| grammar_err(opos, e))?;
            }
            "rule" | "eval" => {
                let lpos = p.pos();
                let lhs = p.atom()?;
                let master = match &lhs {
                    Ast::Letter(m, idx, _) if matches!(idx.as_ref(), Ast::Var(v, _) if v == "j") => Symbol::new(m),
                    _ => return Err(semantic(lpos, format!("left side of `{kw}` must have the form m[j]"))),
                };
                p.expect(Tok::Arrow)?;
                let rpos = p.pos();
                let rhs = p.expr()?;
                if kw == "rule" {
                    if rules.iter().any(|r| r.0 == master) {
                        return Err(semantic(lpos, format!("more than one rule for master `{master}`")));
                    }
                    rules.push((master, rhs, rpos));
                } else {
                    evals.push((master, rhs, rpos));
                }
            }
            "seed" => {
                let spos = p.pos();
                seed = Some((p.expr()?, spos));
            }
            other => return Err(syntax(kpos, format!("unknown clause `{other}`"))),
        }
        p.expect(Tok::Semi)?;
    }

    let (masters, mpos) = masters.unwrap_or_else(|| (rules.iter().map(|r| r.0).collect(), first_pos));
    let known: HashSet<Symbol> = masters.iter().copied().collect();
    let rule_ctx = Ctx { rule: true, masters: Some(&known) };

    let mut templates = Vec::new();
    for (m, rhs, pos) in &rules {
        if !known.contains(m) {
            return Err(semantic(*pos, format!("rule for unknown master `{m}`")));
        }
        templates.push(texpr_to_rule(*m, eval(rhs, &rule_ctx)?, *pos)?);
    }
    for m in &masters {
        if !rules.iter().any(|r| r.0 == *m) {
            return Err(semantic(mpos, format!("no rule for master `{m}`")));
        }
    }
    let grammar = Grammar::new(name.unwrap_or_else(|| "unnamed".into()), masters, templates, order)
        .map_err(|e| grammar_err(mpos, e))?;

    let eval_map = if evals.is_empty() {
        None
    } else {
        let mut map = EvalMap::new();
        let ctx = Ctx { rule: true, masters: Some(&known) };
        for (m, rhs, pos) in &evals {
            if !known.contains(m) {
                return Err(semantic(*pos, format!("eval for unknown master `{m}`")));
            }
            let t = eval(rhs, &ctx)?;
            let bad = || semantic(*pos, format!("image of `{m}` is not a monomial with coefficient +1 or -1"));
            if t.len() != 1 {
                return Err(bad());
            }
            let ((j, w), c) = t.into_iter().next().unwrap();
            if !w.is_empty() {
                return Err(bad());
            }
            let (sign, mono) = c.as_unit_monomial().ok_or_else(bad)?;
            map.insert(*m, EvalImage::new(sign, mono.clone(), j));
        }
        Some(map)
    };

    let seed = match seed {
        None => None,
        Some((ast, pos)) => {
            let ctx = Ctx { rule: false, masters: Some(&known) };
            Some(texpr_to_expr(eval(&ast, &ctx)?, pos)?)
        }
    };

    Ok(GrammarFile { grammar, eval: eval_map, seed })
}

/// Exponent text for `q^(a*j + b)`.
fn fmt_linear_exponent(a: i64, b: i64) -> String {
    if a == 0 {
        return b.to_string();
    }
    let mut s = match a {
        1 => "j".to_string(),
        -1 => "-j".to_string(),
        _ => format!("{a}*j"),
    };
    if b > 0 {
        s.push_str(&format!("+{b}"));
    } else if b < 0 {
        s.push_str(&format!("-{}", -b));
    }
    if s == "j" {
        s
    } else {
        format!("({s})")
    }
}

/// Factors of `m * q^(a*j)` in name order.
fn monomial_factors(m: &Monomial, a: i64) -> Vec<String> {
    let q = q_symbol();
    let mut pairs: Vec<(Symbol, i32)> = m.factors().to_vec();
    if a != 0 && m.exponent(q) == 0 {
        pairs.push((q, 0));
        pairs.sort();
    }
    pairs
        .into_iter()
        .map(|(s, e)| {
            if s == q && a != 0 {
                format!("q^{}", fmt_linear_exponent(a, e as i64))
            } else if e == 1 {
                s.to_string()
            } else {
                format!("{s}^{e}")
            }
        })
        .collect()
}

fn template_word_factors(w: &[TemplateLetter]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut run = 1;
        while i + run < w.len() && w[i + run] == w[i] {
            run += 1;
        }
        let l = w[i];
        let e = run as i64 * l.sign.as_i8() as i64;
        let base = format!("{}[{}]", l.master, l.index);
        out.push(if e == 1 { base } else { format!("{base}^{e}") });
        i += run;
    }
    out
}

/// Right-hand side of a rule in DSL syntax.
pub fn format_rule_rhs(r: &RuleTemplate) -> String {
    if r.terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (w, c)) in r.terms.iter().enumerate() {
        let mut factors = Vec::new();
        let mut negative = false;
        if let Some((a, m)) = c.as_single_term() {
            negative = a.is_negative();
            let abs = a.abs();
            if !abs.is_one() {
                factors.push(abs.to_string());
            }
            factors.extend(monomial_factors(m, r.j_power));
        } else {
            if r.j_power != 0 {
                factors.push(format!("q^{}", fmt_linear_exponent(r.j_power, 0)));
            }
            factors.push(format!("({c})"));
        }
        factors.extend(template_word_factors(w));
        if factors.is_empty() {
            factors.push("1".into());
        }
        match (k, negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&factors.join("*"));
    }
    s
}

fn format_eval_image(im: &EvalImage) -> String {
    let mut factors = monomial_factors(&im.monomial, im.q_step);
    if factors.is_empty() {
        factors.push("1".into());
    }
    let body = factors.join("*");
    if im.sign < 0 {
        format!("-{body}")
    } else {
        body
    }
}

fn format_name(name: &str) -> String {
    let plain = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    let keyword = matches!(name, "grammar" | "masters" | "order" | "rule" | "eval" | "seed");
    if plain && !keyword {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

/// Prints a grammar file in DSL syntax. `parse_grammar` inverts this.
pub fn format_grammar(g: &GrammarFile) -> String {
    let gr = &g.grammar;
    let mut s = String::new();
    s.push_str(&format!("grammar {};\n", format_name(gr.name())));
    let ms: Vec<String> = gr.masters().iter().map(|m| m.to_string()).collect();
    s.push_str(&format!("masters {};\n", ms.join(", ")));
    s.push_str(&format!("order {};\n", gr.order()));
    for r in gr.rules() {
        s.push_str(&format!("rule {}[j] -> {};\n", r.master, format_rule_rhs(r)));
    }
    if let Some(map) = &g.eval {
        for (m, im) in map.images() {
            s.push_str(&format!("eval {m}[j] -> {};\n", format_eval_image(im)));
        }
    }
    if let Some(seed) = &g.seed {
        s.push_str(&format!("seed {seed};\n"));
    }
    s
}

impl GrammarFile {
    pub fn parse(src: &str) -> Result<GrammarFile, ParseError> {
        parse_grammar(src)
    }
}

impl std::fmt::Display for GrammarFile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_grammar(self))
    }
}

/// Checks that every letter of `a` uses a master of `g`.
pub fn check_masters(g: &Grammar, a: &Expr) -> Result<(), GrammarError> {
    for w in a.words() {
        for l in w.letters() {
            if !g.masters().contains(&l.master) {
                return Err(GrammarError::UnknownMaster(l.master.to_string()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAN: &str = "
        # tangent numbers
        grammar G_tan;
        masters x;
        order DIO;
        rule x[j] -> q^j * (1 + x[j]*x[j+1]);
        eval x[j] -> x * q^j;
        seed x[0];
    ";

    #[test]
    fn parses_polynomials() {
        assert_eq!(parse_qpoly("(1+q)*x^-1*y").unwrap().to_string(), "x^-1*y+q*x^-1*y");
        assert_eq!(parse_qpoly("(x-y)^3").unwrap(), parse_qpoly("x^3-3*x^2*y+3*x*y^2-y^3").unwrap());
        assert_eq!(parse_qpoly("q^-2*q^2").unwrap(), QPoly::one());
        assert!(parse_qpoly("x[0]").is_err());
    }

    #[test]
    fn parses_expressions() {
        let e = parse_expr("x[2]*y[2]^-1*x[1]*x[3]^2*y[3] + (1+q)*y[1]^2*x[1]^-1*x[2]").unwrap();
        assert_eq!(e.omega(), 2);
        let inv = parse_expr("(x[0]*y[1])^-1").unwrap();
        assert_eq!(inv, parse_expr("y[1]^-1*x[0]^-1").unwrap());
        assert!(parse_expr("x[0]*x[0]^-1 - 1").unwrap().is_zero());
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_expr("x[0] + \n  * y[1]").unwrap_err();
        assert_eq!(err.position(), (2, 3));
        assert!(err.is_syntax());
        assert!(parse_qpoly("1 +").unwrap_err().is_syntax());
        assert!(parse_qpoly("x $ y").unwrap_err().is_syntax());
    }

    #[test]
    fn grammar_file_round_trip() {
        let g = parse_grammar(TAN).unwrap();
        assert_eq!(g.grammar.order(), Order::Dio);
        assert_eq!(g.seed, Some(parse_expr("x[0]").unwrap()));
        let printed = format_grammar(&g);
        assert_eq!(parse_grammar(&printed).unwrap(), g);
        assert!(printed.contains("rule x[j] -> q^j + q^j*x[j]*x[j+1];"), "{printed}");
    }

    #[test]
    fn shifted_powers_of_q() {
        let g = parse_grammar("masters x, y; rule x[j] -> q^j*x[j]*y[j+1]; rule y[j] -> q^(j+1)*x[j+1];").unwrap();
        let r = g.grammar.rule(Symbol::new("y")).unwrap();
        assert_eq!(r.j_power, 1);
        assert_eq!(r.instantiate(2), parse_expr("q^3*x[3]").unwrap());
        assert_eq!(format_rule_rhs(r), "q^(j+1)*x[j+1]");
    }

    #[test]
    fn semantic_errors() {
        let unknown = parse_grammar("masters x; rule x[j] -> q^j*z[j];").unwrap_err();
        assert!(!unknown.is_syntax(), "{unknown}");
        let missing = parse_grammar("masters x, y; rule x[j] -> q^j;").unwrap_err();
        assert!(missing.to_string().contains("no rule"));
        let bad_index = parse_grammar("masters x; rule x[j] -> q^j*x[2*j];").unwrap_err();
        assert!(bad_index.to_string().contains("malformed index"));
        let bad_eval = parse_grammar("masters x; rule x[j] -> q^j; eval x[j] -> 1 + x;").unwrap_err();
        assert!(bad_eval.to_string().contains("not a monomial"));
        let mixed = parse_grammar("masters x; rule x[j] -> q^j + x[j];").unwrap_err();
        assert!(mixed.to_string().contains("same power"));
        assert!(parse_grammar("masters x; rule x[j] -> 1; frobnicate;").unwrap_err().is_syntax());
    }

    #[test]
    fn quoted_names() {
        let src = "grammar \"G_tan∪sec\"; masters x; rule x[j] -> q^j;";
        let g = parse_grammar(src).unwrap();
        assert_eq!(g.grammar.name(), "G_tan∪sec");
        assert_eq!(parse_grammar(&format_grammar(&g)).unwrap(), g);
    }
}
