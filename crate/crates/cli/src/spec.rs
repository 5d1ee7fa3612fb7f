//! Potential mini-language: sums of terms such as `0.5*cos(2*pi*x)`,
//! `-sin(4*pi*x)`, `i*sin(2*pi*x)` and `(0.1,-0.2)*exp(2*pi*i*3*x)`.
//! The literal `0` is the zero potential.

use hill_spectra::{HillError, Potential64, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Star,
    Plus,
    Minus,
}

fn err(msg: impl Into<String>) -> HillError {
    HillError::Parse(msg.into())
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            ',' => out.push(Tok::Comma),
            '*' => out.push(Tok::Star),
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // exponent only when digits follow, so `2exp` is not misread
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse::<f64>().map_err(|_| err(format!("bad number '{text}'")))?;
                out.push(Tok::Num(v));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
                continue;
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum Func {
    Cos,
    Sin,
    Exp,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(err(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn signed_num(&mut self) -> Result<f64> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(v)) => Ok(if neg { -v } else { v }),
            got => Err(err(format!("expected a number, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Potential64> {
        let mut q = Potential64::zero();
        let mut first = true;
        while self.peek().is_some() {
            let sign = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    1.0
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    -1.0
                }
                _ if first => 1.0,
                got => return Err(err(format!("expected '+' or '-', found {got:?}"))),
            };
            first = false;
            q = q.add(&self.term(sign)?);
        }
        if first {
            return Err(err("empty potential"));
        }
        Ok(q)
    }

    fn term(&mut self, sign: f64) -> Result<Potential64> {
        let mut coef = Complex64::new(sign, 0.0);
        let mut func: Option<(Func, i64)> = None;
        loop {
            match self.next() {
                Some(Tok::Num(v)) => coef *= v,
                Some(Tok::LParen) => {
                    let re = self.signed_num()?;
                    self.expect(Tok::Comma)?;
                    let im = self.signed_num()?;
                    self.expect(Tok::RParen)?;
                    coef *= Complex64::new(re, im);
                }
                Some(Tok::Ident(name)) => match name.as_str() {
                    "i" => coef *= Complex64::i(),
                    "cos" | "sin" | "exp" => {
                        if func.is_some() {
                            return Err(err("a term may contain one function"));
                        }
                        let f = match name.as_str() {
                            "cos" => Func::Cos,
                            "sin" => Func::Sin,
                            _ => Func::Exp,
                        };
                        self.expect(Tok::LParen)?;
                        let k = self.argument(f)?;
                        self.expect(Tok::RParen)?;
                        func = Some((f, k));
                    }
                    other => return Err(err(format!("unknown name '{other}'"))),
                },
                got => return Err(err(format!("unexpected token {got:?}"))),
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        match func {
            None if coef == Complex64::new(0.0, 0.0) => Ok(Potential64::zero()),
            None => Err(err("constant terms are not allowed (potentials have zero mean)")),
            Some((Func::Cos, k)) => Potential64::cos_term(coef, k.abs()),
            Some((Func::Sin, k)) => Potential64::sin_term(coef * k.signum() as f64, k.abs()),
            Some((Func::Exp, k)) => Potential64::exp_term(coef, k),
        }
    }

    /// Parses `2*pi*k*x` (with `i` for exp) in any factor order; returns k.
    fn argument(&mut self, f: Func) -> Result<i64> {
        let mut num = 1.0;
        let (mut pis, mut xs, mut is) = (0, 0, 0);
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            num = -1.0;
        }
        loop {
            match self.next() {
                Some(Tok::Num(v)) => num *= v,
                Some(Tok::Ident(name)) => match name.as_str() {
                    "pi" => pis += 1,
                    "x" => xs += 1,
                    "i" => is += 1,
                    other => return Err(err(format!("unknown name '{other}' in argument"))),
                },
                got => return Err(err(format!("unexpected token {got:?} in argument"))),
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let want_i = matches!(f, Func::Exp) as i32;
        if pis != 1 || xs != 1 || is != want_i {
            return Err(err(if want_i == 1 {
                "exp argument must read 2*pi*i*k*x"
            } else {
                "cos/sin argument must read 2*pi*k*x"
            }));
        }
        let k = num / 2.0;
        if k.fract() != 0.0 || k == 0.0 || k.abs() > 1e6 {
            return Err(err(format!("frequency {k} is not a nonzero integer")));
        }
        Ok(k as i64)
    }
}

/// Parses a potential written in the mini-language.
pub fn parse_potential(src: &str) -> Result<Potential64> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    p.expr()
}

/// Resolves `-q`: inline JSON when it starts with `{`, a JSON file when it
/// starts with `@`, the mini-language otherwise.
pub fn load_potential(arg: &str) -> Result<Potential64> {
    let t = arg.trim();
    if t.starts_with('{') {
        Potential64::from_json(t)
    } else if let Some(path) = t.strip_prefix('@') {
        let s = std::fs::read_to_string(path).map_err(|e| err(format!("{path}: {e}")))?;
        Potential64::from_json(&s)
    } else {
        parse_potential(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basic_terms() {
        let q = parse_potential("2*cos(2*pi*x)").unwrap();
        assert_eq!(q.coeff(1), c(1.0, 0.0));
        assert_eq!(q.coeff(-1), c(1.0, 0.0));
        let q = parse_potential("sin(2*pi*x) + 0.5*sin(4*pi*x)").unwrap();
        assert_eq!(q.coeff(2), c(0.0, -0.25));
        assert!(q.is_real());
        let q = parse_potential("i*sin(2*pi*x)").unwrap();
        assert!(!q.is_real());
        let q = parse_potential("(0.1,-0.2)*exp(2*pi*i*3*x)").unwrap();
        assert_eq!(q.coeff(3), c(0.1, -0.2));
        assert_eq!(q.coeff(-3), c(0.0, 0.0));
        assert!(parse_potential("0").unwrap().is_zero());
    }

    #[test]
    fn signs_and_exponents() {
        let q = parse_potential("-1e-1*cos(2*pi*2*x) - sin(-2*pi*x)").unwrap();
        assert_eq!(q.coeff(2), c(-0.05, 0.0));
        assert_eq!(q, parse_potential("sin(2*pi*x) - 0.1*cos(4*pi*x)").unwrap());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1", "cos(pi*x)", "cos(2*pi*x", "tan(2*pi*x)", "exp(2*pi*x)", "cos(3*pi*x)", "2*cos(2*pi*x)*sin(2*pi*x)"] {
            assert!(parse_potential(bad).is_err(), "{bad}");
        }
    }
}
