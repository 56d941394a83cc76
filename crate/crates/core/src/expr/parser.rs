use super::ast::Expr;
use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Tokens paired with their 1-based column.
fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // optional exponent: e[+-]digits
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| ExprError::Syntax {
                column: col,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((Tok::Num(v), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ExprError::Syntax {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            column: self.column(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ExprError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            // a negated literal is a negative literal, as derivatives produce them
            return Ok(match self.factor()? {
                Expr::Num(c) => Expr::Num(-c),
                e => Expr::Neg(Box::new(e)),
            });
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let c = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), c));
        }
        Ok(base)
    }

    fn signed_number(&mut self) -> Result<f64, ExprError> {
        let sign = if *self.peek() == Tok::Minus {
            self.bump();
            -1.0
        } else {
            1.0
        };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(sign * v)
            }
            _ => self.unexpected("a numeric exponent"),
        }
    }

    fn exponent(&mut self) -> Result<f64, ExprError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let c = self.signed_number()?;
            self.expect(Tok::RParen, "`)`")?;
            Ok(c)
        } else {
            self.signed_number()
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, col) = (self.peek().clone(), self.column());
        match tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "u" => Ok(Expr::Var),
                    "ln" | "exp" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let arg = Box::new(self.expr()?);
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(if name == "ln" { Expr::Ln(arg) } else { Expr::Exp(arg) })
                    }
                    _ => Err(ExprError::UnknownIdentifier { name, column: col }),
                }
            }
            _ => self.unexpected("a number, `u`, `ln`, `exp` or `(`"),
        }
    }
}

/// Parses an expression in `u`.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    if src.trim().is_empty() {
        return Err(ExprError::Syntax { column: 1, message: "empty expression".into() });
    }
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}
