//! Text syntax for exponent sequences.
//!
//! ```text
//! expr    := number                           constant
//!          | "inf"                            constant inf
//!          | number ("+"|"-") number "/n" ["^" number]     drift
//!          | [number "*"] "n" [("+"|"-") number]           linear
//!          | number "+" expr                  shift
//!          | "blocks"
//!          | "merge(" set ":" expr "," expr ")"
//!          | "prefix(" index "=" value {[","] index "=" value} ";" expr ")"
//!          | ("absdiff"|"rn"|"nakexp") "(" expr "," expr ")"
//!          | "recip(" expr ")"
//! set     := "even" | "odd" | "all" | "stride(" step "," start ")"
//!          | "{" index {"," index} "}" | "not(" set ")"
//! ```

use std::fmt;

use nakano::{ExponentSequence, IndexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DslErrorKind {
    Parse,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Offending source line followed by a caret line.
    pub excerpt: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            DslErrorKind::Parse => "parse error",
            DslErrorKind::Semantic => "invalid sequence",
        };
        write!(f, "{what} at {}:{}: {}\n{}", self.line, self.column, self.message, self.excerpt)
    }
}

impl std::error::Error for DslError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl<'a> Parser<'a> {
    fn error_at(&self, kind: DslErrorKind, at: usize, message: impl Into<String>) -> DslError {
        let at = at.min(self.src.len());
        let line_start = self.src[..at].rfind('\n').map_or(0, |i| i + 1);
        let line_end = self.src[at..].find('\n').map_or(self.src.len(), |i| at + i);
        let line = self.src[..at].matches('\n').count() + 1;
        let column = self.src[line_start..at].chars().count() + 1;
        let text = &self.src[line_start..line_end];
        DslError {
            kind,
            line,
            column,
            message: message.into(),
            excerpt: format!("{text}\n{}^", " ".repeat(column - 1)),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(self.error_at(DslErrorKind::Parse, self.pos, message))
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphabetic() || c == '_')).unwrap_or(rest.len());
        (len > 0).then(|| {
            self.pos += len;
            &rest[..len]
        })
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        let save = self.pos;
        let id = self.ident();
        self.pos = save;
        id
    }

    fn at_number(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.')
    }

    fn number(&mut self) -> PResult<f64> {
        self.skip_ws();
        if self.peek_ident() == Some("inf") {
            self.ident();
            return Ok(f64::INFINITY);
        }
        let rest = &self.src[self.pos..];
        let bytes = rest.as_bytes();
        let mut len = 0;
        while len < bytes.len() && (bytes[len].is_ascii_digit() || bytes[len] == b'.') {
            len += 1;
        }
        if len < bytes.len() && (bytes[len] == b'e' || bytes[len] == b'E') {
            let mut k = len + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                len = k;
            }
        }
        match rest[..len].parse::<f64>() {
            Ok(v) if len > 0 => {
                self.pos += len;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn index(&mut self) -> PResult<u64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        match rest[..len].parse::<u64>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("expected an index"),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        let at = self.pos;
        match self.ident() {
            Some(w) if w == word => Ok(()),
            _ => {
                self.pos = at;
                self.err(format!("expected '{word}'"))
            }
        }
    }

    /// Consumes `"/n" ["^" number]` if present and returns the power.
    fn per_n(&mut self) -> PResult<Option<f64>> {
        if !self.eat('/') {
            return Ok(None);
        }
        self.keyword("n")?;
        if self.eat('^') {
            Ok(Some(self.number()?))
        } else {
            Ok(Some(1.0))
        }
    }

    fn checked(&self, start: usize, seq: ExponentSequence) -> PResult<ExponentSequence> {
        seq.validate()
            .map_err(|e| self.error_at(DslErrorKind::Semantic, start, e.to_string()))?;
        Ok(seq)
    }

    fn linear_tail(&mut self, start: usize, slope: f64) -> PResult<ExponentSequence> {
        let save = self.pos;
        let intercept = if self.eat('+') {
            if !self.at_number() {
                self.pos = save;
                return self.err("expected a number after 'n +'");
            }
            self.number()?
        } else if self.eat('-') {
            -self.number()?
        } else {
            0.0
        };
        self.checked(start, ExponentSequence::Linear { slope, intercept })
    }

    fn expr(&mut self) -> PResult<ExponentSequence> {
        self.skip_ws();
        let start = self.pos;
        if self.at_number() {
            return self.numeric_expr(start);
        }
        let Some(word) = self.ident() else {
            return match self.peek() {
                Some(c) => self.err(format!("unexpected '{c}'")),
                None => self.err("unexpected end of input"),
            };
        };
        match word {
            "inf" => Ok(ExponentSequence::infinity()),
            "blocks" => Ok(ExponentSequence::blocks()),
            "n" => self.linear_tail(start, 1.0),
            "merge" => {
                self.expect('(')?;
                let set = self.set()?;
                self.expect(':')?;
                let on = self.expr()?;
                self.expect(',')?;
                let off = self.expr()?;
                self.expect(')')?;
                self.checked(
                    start,
                    ExponentSequence::Merge {
                        set,
                        on_set: Box::new(on),
                        off_set: Box::new(off),
                    },
                )
            }
            "prefix" => {
                self.expect('(')?;
                let mut overrides = Vec::new();
                loop {
                    let i = self.index()?;
                    self.expect('=')?;
                    overrides.push((i, self.number()?));
                    if self.eat(';') {
                        break;
                    }
                    self.eat(',');
                }
                let tail = self.expr()?;
                self.expect(')')?;
                let mut sorted = overrides.clone();
                sorted.sort_by_key(|o| o.0);
                self.checked(
                    start,
                    ExponentSequence::Prefix {
                        overrides: sorted,
                        tail: Box::new(tail),
                    },
                )
            }
            "absdiff" | "rn" | "nakexp" => {
                self.expect('(')?;
                let p = self.expr()?;
                self.expect(',')?;
                let q = self.expr()?;
                self.expect(')')?;
                Ok(match word {
                    "absdiff" => ExponentSequence::abs_diff(p, q),
                    "rn" => ExponentSequence::rn_of(p, q),
                    _ => ExponentSequence::nakano_exponent(p, q),
                })
            }
            "recip" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(ExponentSequence::recip(inner))
            }
            other => {
                self.pos = start;
                self.err(format!("unknown name '{other}'"))
            }
        }
    }

    fn numeric_expr(&mut self, start: usize) -> PResult<ExponentSequence> {
        let a = self.number()?;
        if self.eat('*') {
            self.keyword("n")?;
            return self.linear_tail(start, a);
        }
        let save = self.pos;
        let sign = if self.eat('+') {
            1.0
        } else if self.eat('-') {
            -1.0
        } else {
            return self.checked(start, ExponentSequence::Const { value: a });
        };
        // drift: L +- c/n[^b]
        if self.at_number() {
            let after_sign = self.pos;
            let c = self.number()?;
            if let Some(power) = self.per_n()? {
                return self.checked(
                    start,
                    ExponentSequence::RationalDrift {
                        limit: a,
                        coeff: sign * c,
                        power,
                    },
                );
            }
            self.pos = after_sign;
        }
        if sign < 0.0 {
            self.pos = save;
            return self.err("'-' is only allowed in drift terms 'L - c/n'");
        }
        let inner = self.expr()?;
        self.checked(
            start,
            ExponentSequence::Shift {
                offset: a,
                inner: Box::new(inner),
            },
        )
    }

    fn set(&mut self) -> PResult<IndexSet> {
        if self.eat('{') {
            let mut indices = vec![self.index()?];
            while self.eat(',') {
                indices.push(self.index()?);
            }
            self.expect('}')?;
            let set = IndexSet::list(indices);
            return self.valid_set(set);
        }
        let start = self.pos;
        match self.ident() {
            Some("even") => Ok(IndexSet::Evens),
            Some("odd") => Ok(IndexSet::Odds),
            Some("all") => Ok(IndexSet::All),
            Some("stride") => {
                self.expect('(')?;
                let step = self.index()?;
                self.expect(',')?;
                let first = self.index()?;
                self.expect(')')?;
                self.valid_set(IndexSet::stride(step, first))
            }
            Some("not") => {
                self.expect('(')?;
                let inner = self.set()?;
                self.expect(')')?;
                Ok(IndexSet::Complement { set: Box::new(inner) })
            }
            _ => {
                self.pos = start;
                self.err("expected an index set (even, odd, all, stride(k, s), {i, ...}, not(...))")
            }
        }
    }

    fn valid_set(&self, set: IndexSet) -> PResult<IndexSet> {
        set.validate()
            .map_err(|m| self.error_at(DslErrorKind::Semantic, self.pos, m))?;
        Ok(set)
    }
}

pub fn parse_dsl(text: &str) -> Result<ExponentSequence, DslError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Prints a descriptor in the syntax accepted by [`parse_dsl`].
pub struct Dsl<'a>(pub &'a ExponentSequence);

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn signed(x: f64) -> String {
    if x.is_sign_negative() {
        format!("- {}", num(-x))
    } else {
        format!("+ {}", num(x))
    }
}

struct SetDsl<'a>(&'a IndexSet);

impl fmt::Display for SetDsl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            IndexSet::All => f.write_str("all"),
            IndexSet::Evens => f.write_str("even"),
            IndexSet::Odds => f.write_str("odd"),
            IndexSet::Stride { step, start } => write!(f, "stride({step}, {start})"),
            IndexSet::List { indices } => {
                let items: Vec<String> = indices.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
            IndexSet::Complement { set } => write!(f, "not({})", SetDsl(set)),
        }
    }
}

impl fmt::Display for Dsl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExponentSequence as E;
        match self.0 {
            E::Const { value } => f.write_str(&num(*value)),
            E::RationalDrift { limit, coeff, power } => {
                write!(f, "{} {}/n", num(*limit), signed(*coeff))?;
                if *power != 1.0 {
                    write!(f, "^{}", num(*power))?;
                }
                Ok(())
            }
            E::Linear { slope, intercept } => {
                if *slope != 1.0 {
                    write!(f, "{}*", num(*slope))?;
                }
                f.write_str("n")?;
                if *intercept != 0.0 {
                    write!(f, " {}", signed(*intercept))?;
                }
                Ok(())
            }
            E::BlockRepeat => f.write_str("blocks"),
            E::Prefix { overrides, tail } => {
                let items: Vec<String> = overrides.iter().map(|(i, v)| format!("{i}={}", num(*v))).collect();
                write!(f, "prefix({}; {})", items.join(", "), Dsl(tail))
            }
            E::Merge { set, on_set, off_set } => {
                write!(f, "merge({}: {}, {})", SetDsl(set), Dsl(on_set), Dsl(off_set))
            }
            E::AbsDiff { p, q } => write!(f, "absdiff({}, {})", Dsl(p), Dsl(q)),
            E::RnOf { p, q } => write!(f, "rn({}, {})", Dsl(p), Dsl(q)),
            E::NakanoExponent { p, q } => write!(f, "nakexp({}, {})", Dsl(p), Dsl(q)),
            E::Recip { inner } => write!(f, "recip({})", Dsl(inner)),
            E::Shift { offset, inner } => write!(f, "{} + {}", num(*offset), Dsl(inner)),
        }
    }
}

pub fn print_dsl(e: &ExponentSequence) -> String {
    Dsl(e).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = ExponentSequence;

    #[test]
    fn paper_expressions() {
        assert_eq!(parse_dsl("1 + 1/n").unwrap(), E::drift(1.0, 1.0, 1.0).unwrap());
        assert_eq!(parse_dsl("n").unwrap(), E::linear(1.0, 0.0).unwrap());
        assert_eq!(parse_dsl("blocks").unwrap(), E::blocks());
        assert_eq!(parse_dsl("inf").unwrap(), E::infinity());
        assert_eq!(
            parse_dsl("2 + recip(blocks)").unwrap(),
            E::shift(2.0, E::recip(E::blocks())).unwrap()
        );
    }

    #[test]
    fn assorted_forms() {
        assert_eq!(parse_dsl("2 - 0.5/n^2").unwrap(), E::drift(2.0, -0.5, 2.0).unwrap());
        assert_eq!(parse_dsl("3*n - 1").unwrap(), E::linear(3.0, -1.0).unwrap());
        assert_eq!(
            parse_dsl("prefix(1=1; 2)").unwrap(),
            E::prefix(vec![(1, 1.0)], E::constant(2.0).unwrap()).unwrap()
        );
        assert_eq!(
            parse_dsl("prefix(3=inf 1=2; 2)").unwrap(),
            E::prefix(vec![(1, 2.0), (3, f64::INFINITY)], E::constant(2.0).unwrap()).unwrap()
        );
        assert_eq!(
            parse_dsl(" merge( even : 2 , n+1 ) ").unwrap(),
            E::merge(IndexSet::Evens, E::constant(2.0).unwrap(), E::linear(1.0, 1.0).unwrap()).unwrap()
        );
        assert_eq!(
            parse_dsl("merge(not({2, 5}): 1, stride(3,1) )").unwrap_err().kind,
            DslErrorKind::Parse
        );
        assert!(parse_dsl("merge(not(stride(3, 1)): 1, 4)").is_ok());
    }

    #[test]
    fn errors_point_at_the_problem() {
        let e = parse_dsl("1 + x").unwrap_err();
        assert_eq!(e.kind, DslErrorKind::Parse);
        assert_eq!((e.line, e.column), (1, 5));
        assert_eq!(e.excerpt, "1 + x\n    ^");
        let e = parse_dsl("merge(even: 2,\n  0.5)").unwrap_err();
        assert_eq!(e.kind, DslErrorKind::Semantic);
        assert_eq!((e.line, e.column), (2, 3));
        assert!(parse_dsl("2 3").is_err());
        assert!(parse_dsl("").is_err());
        assert!(parse_dsl("0*n").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "1 + 1/n",
            "2 - 0.25/n^0.5",
            "n",
            "2.5*n - 1",
            "blocks",
            "inf",
            "2 + recip(blocks)",
            "2 + 1 + 1/n",
            "prefix(1=1, 4=inf; merge(not(stride(3, 2)): 2, n + 1))",
            "merge({1, 7}: 3, inf)",
            "nakexp(absdiff(2, n), rn(blocks, 1))",
        ] {
            let e = parse_dsl(src).unwrap();
            assert_eq!(print_dsl(&e), src);
            assert_eq!(parse_dsl(&print_dsl(&e)).unwrap(), e);
        }
    }
}
