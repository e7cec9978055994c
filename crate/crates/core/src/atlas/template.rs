//! Integer expressions and text templates for parametrized table rows.
//!
//! A template is text with `{expr}` holes and `[i=A..B|body]` repeats; the
//! body of a repeat is emitted once per value of `i` (none if `B < A`).

use std::collections::BTreeMap;

pub type Assignment = BTreeMap<String, i64>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, String> {
        let toks = lex(s)?;
        let mut p = P { toks, pos: 0 };
        let e = p.cmp()?;
        if p.pos != p.toks.len() {
            return Err(format!("trailing input in '{s}'"));
        }
        Ok(e)
    }

    pub fn eval(&self, a: &Assignment) -> Result<i64, String> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(n) => *a.get(n).ok_or_else(|| format!("unbound name '{n}'"))?,
            Expr::Neg(e) => -e.eval(a)?,
            Expr::Bin(op, l, r) => {
                let (x, y) = (l.eval(a)?, r.eval(a)?);
                match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Lt => (x < y) as i64,
                    Op::Le => (x <= y) as i64,
                    Op::Gt => (x > y) as i64,
                    Op::Ge => (x >= y) as i64,
                    Op::Eq => (x == y) as i64,
                    Op::Ne => (x != y) as i64,
                }
            }
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Num(i64),
    Id(String),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(s[st..i].parse().map_err(|_| format!("bad number in '{s}'"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Id(s[st..i].to_string()));
        } else {
            let two = s.get(i..i + 2).unwrap_or("");
            let sym = match two {
                "<=" => Some("<="),
                ">=" => Some(">="),
                "==" => Some("=="),
                "!=" => Some("!="),
                _ => None,
            };
            if let Some(t) = sym {
                out.push(Tok::Sym(t));
                i += 2;
                continue;
            }
            let t = match c {
                '+' => "+",
                '-' => "-",
                '*' => "*",
                '(' => "(",
                ')' => ")",
                '<' => "<",
                '>' => ">",
                _ => return Err(format!("unexpected '{c}' in '{s}'")),
            };
            out.push(Tok::Sym(t));
            i += 1;
        }
    }
    Ok(out)
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
}

impl P {
    fn peek_sym(&self) -> Option<&'static str> {
        match self.toks.get(self.pos) {
            Some(Tok::Sym(s)) => Some(s),
            _ => None,
        }
    }

    fn cmp(&mut self) -> Result<Expr, String> {
        let l = self.sum()?;
        let op = match self.peek_sym() {
            Some("<") => Op::Lt,
            Some("<=") => Op::Le,
            Some(">") => Op::Gt,
            Some(">=") => Op::Ge,
            Some("==") => Op::Eq,
            Some("!=") => Op::Ne,
            _ => return Ok(l),
        };
        self.pos += 1;
        let r = self.sum()?;
        Ok(Expr::Bin(op, Box::new(l), Box::new(r)))
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut l = self.product()?;
        loop {
            let op = match self.peek_sym() {
                Some("+") => Op::Add,
                Some("-") => Op::Sub,
                _ => return Ok(l),
            };
            self.pos += 1;
            let r = self.product()?;
            l = Expr::Bin(op, Box::new(l), Box::new(r));
        }
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut l = self.atom()?;
        while self.peek_sym() == Some("*") {
            self.pos += 1;
            let r = self.atom()?;
            l = Expr::Bin(Op::Mul, Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let t = self.toks.get(self.pos).cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match t {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Id(n) => Ok(Expr::Var(n)),
            Tok::Sym("-") => Ok(Expr::Neg(Box::new(self.atom()?))),
            Tok::Sym("(") => {
                let e = self.sum()?;
                if self.peek_sym() != Some(")") {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Sym(s) => Err(format!("unexpected '{s}'")),
        }
    }
}

/// Expand holes and repeats. Names listed in `signs` expand to `+` or `-`
/// according to the sign of their value.
pub fn expand(t: &str, a: &Assignment, signs: &[String]) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = t;
    while let Some(i) = rest.find(['{', '[']) {
        out.push_str(&rest[..i]);
        let open = rest.as_bytes()[i];
        let close = if open == b'{' { '}' } else { ']' };
        let end = matching(&rest[i..], open as char, close).ok_or_else(|| format!("unbalanced template '{t}'"))? + i;
        let inner = &rest[i + 1..end];
        if open == b'{' {
            if signs.iter().any(|s| s == inner.trim()) {
                let v = *a.get(inner.trim()).ok_or_else(|| format!("unbound sign '{inner}'"))?;
                out.push(if v < 0 { '-' } else { '+' });
            } else {
                out.push_str(&Expr::parse(inner)?.eval(a)?.to_string());
            }
        } else {
            let (head, body) = inner.split_once('|').ok_or_else(|| format!("repeat without body in '{t}'"))?;
            let (var, range) = head.split_once('=').ok_or_else(|| format!("bad repeat head '{head}'"))?;
            let (lo, hi) = range.split_once("..").ok_or_else(|| format!("bad repeat range '{range}'"))?;
            let (lo, hi) = (Expr::parse(lo)?.eval(a)?, Expr::parse(hi)?.eval(a)?);
            let mut b = a.clone();
            for v in lo..=hi {
                b.insert(var.trim().to_string(), v);
                out.push_str(&expand(body, &b, signs)?);
            }
        }
        rest = &rest[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn matching(s: &str, open: char, close: char) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}
