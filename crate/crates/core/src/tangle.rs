//! The tangle expression language: Conway coefficient lists, fractions,
//! sums, mirrors, flips, pretzels, braid words and the two closures, with
//! extended-rational slope arithmetic.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := '-' term | 'flip(' expr ')' | 'N(' expr ')' | 'D(' expr ')'
//!          | 't(' args ')' | frac | 'pretzel(' int (',' int)* ')'
//!          | 'braid("' [a-zA-Z]+ '")'
//! args    := int (',' int)* | frac
//! frac    := int '/' posint | 'inf'
//! ```

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TangleError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("interior continued-fraction coefficient must be nonzero (position {0})")]
    InteriorZero(usize),
    #[error("fraction must not be 0/0")]
    ZeroOverZero,
    #[error("slope is infinite")]
    InfiniteSlope,
    #[error("expansion requires a nonnegative slope; mirror the tangle instead")]
    NegativeSlope,
    #[error("expression is not a rational tangle")]
    NotRational,
}

/// A slope p/q ∈ Q ∪ {∞}, stored reduced with q ≥ 0; ∞ is 1/0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slope {
    pub p: BigInt,
    pub q: BigInt,
}

impl Slope {
    pub fn new(p: BigInt, q: BigInt) -> Result<Self, TangleError> {
        if p.is_zero() && q.is_zero() {
            return Err(TangleError::ZeroOverZero);
        }
        let g = num_integer::gcd(p.clone(), q.clone());
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn from_ints(p: i64, q: i64) -> Self {
        Slope::new(BigInt::from(p), BigInt::from(q)).unwrap()
    }

    pub fn infinity() -> Self {
        Slope {
            p: BigInt::from(1),
            q: BigInt::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.p.is_negative()
    }

    pub fn neg(&self) -> Slope {
        Slope::new(-self.p.clone(), self.q.clone()).unwrap()
    }

    pub fn abs(&self) -> Slope {
        Slope::new(self.p.abs(), self.q.clone()).unwrap()
    }

    /// 1/s in the extended sense.
    pub fn recip(&self) -> Slope {
        Slope::new(self.q.clone(), self.p.clone()).unwrap()
    }

    fn add_int(&self, a: &BigInt) -> Slope {
        Slope::new(&self.p + a * &self.q, self.q.clone()).unwrap()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.q == BigInt::from(1) {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// Evaluate a continued fraction a₁ + 1/(a₂ + 1/(… + 1/aₙ)) in extended
/// rational arithmetic (division by zero yields ∞, which collapses back on
/// the next step). Interior coefficients must be nonzero.
pub fn cf_eval(coeffs: &[i64]) -> Result<Slope, TangleError> {
    for (i, &a) in coeffs.iter().enumerate() {
        if i > 0 && a == 0 {
            return Err(TangleError::InteriorZero(i));
        }
    }
    let mut acc = Slope::infinity(); // empty tail: a + 1/∞ = a
    for &a in coeffs.iter().rev() {
        acc = acc.recip().add_int(&BigInt::from(a));
    }
    Ok(acc)
}

/// Canonical nonnegative continued-fraction expansion of s = p/q ≥ 0:
/// a₁ ≥ 0, interior aᵢ ≥ 1, and the last coefficient ≥ 2 whenever n > 1.
/// `cf_eval` of the result reproduces s.
pub fn cf_expand(s: &Slope) -> Result<Vec<i64>, TangleError> {
    if s.is_infinite() {
        return Err(TangleError::InfiniteSlope);
    }
    if s.is_negative() {
        return Err(TangleError::NegativeSlope);
    }
    let mut out = Vec::new();
    let mut p = s.p.clone();
    let mut q = s.q.clone();
    loop {
        let (d, r) = num_integer::div_rem(p.clone(), q.clone());
        out.push(i64::try_from(&d).expect("continued-fraction coefficient overflow"));
        if r.is_zero() {
            break;
        }
        p = q;
        q = r;
    }
    Ok(out)
}

/// Tangle expression AST.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangleExpr {
    /// the three distinguished small tangles
    Elementary(Elementary),
    /// Conway coefficient list t(a₁,…,aₙ)
    Rational(Vec<i64>),
    /// explicit slope t(p/q) or bare fraction
    Fraction(Slope),
    Sum(Box<TangleExpr>, Box<TangleExpr>),
    Neg(Box<TangleExpr>),
    Flip(Box<TangleExpr>),
    Pretzel(Vec<i64>),
    ClosureN(Box<TangleExpr>),
    ClosureD(Box<TangleExpr>),
    Braid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Zero,
    Infinity,
    One,
}

impl TangleExpr {
    /// Pretty-print in the concrete syntax accepted by [`parse`].
    pub fn print(&self) -> String {
        match self {
            TangleExpr::Elementary(Elementary::Zero) => "t(0)".into(),
            TangleExpr::Elementary(Elementary::Infinity) => "inf".into(),
            TangleExpr::Elementary(Elementary::One) => "t(1)".into(),
            TangleExpr::Rational(cs) => format!(
                "t({})",
                cs.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            TangleExpr::Fraction(s) => {
                if s.is_infinite() {
                    "inf".into()
                } else {
                    format!("t({}/{})", s.p, s.q)
                }
            }
            TangleExpr::Sum(l, r) => format!("{} + {}", l.print(), r.print()),
            TangleExpr::Neg(x) => match **x {
                TangleExpr::Sum(..) => format!("-({})", x.print()),
                _ => format!("-{}", x.print()),
            },
            TangleExpr::Flip(x) => format!("flip({})", x.print()),
            TangleExpr::Pretzel(qs) => format!(
                "pretzel({})",
                qs.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            TangleExpr::ClosureN(x) => format!("N({})", x.print()),
            TangleExpr::ClosureD(x) => format!("D({})", x.print()),
            TangleExpr::Braid(w) => format!("braid(\"{w}\")"),
        }
    }

    /// Structural JSON form of the AST, for tooling.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            TangleExpr::Elementary(Elementary::Zero) => json!({"kind": "zero"}),
            TangleExpr::Elementary(Elementary::Infinity) => json!({"kind": "infinity"}),
            TangleExpr::Elementary(Elementary::One) => json!({"kind": "one"}),
            TangleExpr::Rational(cs) => json!({"kind": "rational", "coefficients": cs}),
            TangleExpr::Fraction(s) => json!({
                "kind": "fraction",
                "p": s.p.to_string(),
                "q": s.q.to_string(),
            }),
            TangleExpr::Sum(l, r) => json!({"kind": "sum", "left": l.to_json(), "right": r.to_json()}),
            TangleExpr::Neg(x) => json!({"kind": "mirror", "of": x.to_json()}),
            TangleExpr::Flip(x) => json!({"kind": "flip", "of": x.to_json()}),
            TangleExpr::Pretzel(qs) => json!({"kind": "pretzel", "coefficients": qs}),
            TangleExpr::ClosureN(x) => json!({"kind": "numerator", "of": x.to_json()}),
            TangleExpr::ClosureD(x) => json!({"kind": "denominator", "of": x.to_json()}),
            TangleExpr::Braid(w) => json!({"kind": "braid", "word": w}),
        }
    }

    /// Slope of a rational subtree: coefficient lists evaluate through the
    /// continued fraction, fractions are immediate, mirrors negate and
    /// flips invert. Non-rational shapes are rejected.
    pub fn slope(&self) -> Result<Slope, TangleError> {
        match self {
            TangleExpr::Elementary(Elementary::Zero) => Ok(Slope::from_ints(0, 1)),
            TangleExpr::Elementary(Elementary::Infinity) => Ok(Slope::infinity()),
            TangleExpr::Elementary(Elementary::One) => Ok(Slope::from_ints(1, 1)),
            TangleExpr::Rational(cs) => cf_eval(cs),
            TangleExpr::Fraction(s) => Ok(s.clone()),
            TangleExpr::Neg(x) => Ok(x.slope()?.neg()),
            TangleExpr::Flip(x) => Ok(x.slope()?.recip()),
            _ => Err(TangleError::NotRational),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse(text: &str) -> Result<TangleExpr, TangleError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> TangleError {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..self.pos.min(self.src.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        TangleError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), TangleError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<TangleExpr, TangleError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = TangleExpr::Sum(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<TangleExpr, TangleError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                // distinguish a negated term from a negative number literal
                if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos -= 1;
                    return self.frac_term();
                }
                Ok(TangleExpr::Neg(Box::new(self.term()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(e)
            }
            Some(b'f') if self.eat_keyword("flip") => {
                self.eat(b'(')?;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(TangleExpr::Flip(Box::new(e)))
            }
            Some(b'N') => {
                self.pos += 1;
                self.eat(b'(')?;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(TangleExpr::ClosureN(Box::new(e)))
            }
            Some(b'D') => {
                self.pos += 1;
                self.eat(b'(')?;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(TangleExpr::ClosureD(Box::new(e)))
            }
            Some(b'p') if self.eat_keyword("pretzel") => {
                self.eat(b'(')?;
                let qs = self.int_list()?;
                self.eat(b')')?;
                Ok(TangleExpr::Pretzel(qs))
            }
            Some(b'b') if self.eat_keyword("braid") => {
                self.eat(b'(')?;
                self.eat(b'"')?;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .to_string();
                if word.is_empty() {
                    return Err(self.err("empty braid word"));
                }
                self.eat(b'"')?;
                self.eat(b')')?;
                Ok(TangleExpr::Braid(word))
            }
            Some(b't') => {
                self.pos += 1;
                self.eat(b'(')?;
                let first = self.int()?;
                match self.peek() {
                    Some(b'/') => {
                        self.pos += 1;
                        let q = self.int()?;
                        if q <= 0 {
                            return Err(self.err("fraction denominator must be positive"));
                        }
                        self.eat(b')')?;
                        Ok(TangleExpr::Fraction(Slope::from_ints(first, q)))
                    }
                    Some(b',') => {
                        let mut cs = vec![first];
                        while self.peek() == Some(b',') {
                            self.pos += 1;
                            cs.push(self.int()?);
                        }
                        self.eat(b')')?;
                        for (i, &a) in cs.iter().enumerate() {
                            if i > 0 && a == 0 {
                                return Err(TangleError::InteriorZero(i));
                            }
                        }
                        Ok(TangleExpr::Rational(cs))
                    }
                    _ => {
                        self.eat(b')')?;
                        Ok(TangleExpr::Rational(vec![first]))
                    }
                }
            }
            Some(b'i') if self.eat_keyword("inf") => {
                Ok(TangleExpr::Fraction(Slope::infinity()))
            }
            Some(b) if b.is_ascii_digit() => self.frac_term(),
            _ => Err(self.err("expected a tangle term")),
        }
    }

    /// A bare fraction or integer slope literal.
    fn frac_term(&mut self) -> Result<TangleExpr, TangleError> {
        let p = self.int()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let q = self.int()?;
            if q <= 0 {
                return Err(self.err("fraction denominator must be positive"));
            }
            Ok(TangleExpr::Fraction(Slope::from_ints(p, q)))
        } else {
            Ok(TangleExpr::Fraction(Slope::from_ints(p, 1)))
        }
    }

    fn int(&mut self) -> Result<i64, TangleError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn int_list(&mut self) -> Result<Vec<i64>, TangleError> {
        let mut out = vec![self.int()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(self.int()?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_structural_examples() {
        assert_eq!(
            parse("N(t(3))").unwrap(),
            TangleExpr::ClosureN(Box::new(TangleExpr::Rational(vec![3])))
        );
        let p = parse("N(t(1/3) + t(-1/2) + t(1/3))").unwrap();
        let third = TangleExpr::Fraction(Slope::from_ints(1, 3));
        let neg_half = TangleExpr::Fraction(Slope::from_ints(-1, 2));
        assert_eq!(
            p,
            TangleExpr::ClosureN(Box::new(TangleExpr::Sum(
                Box::new(TangleExpr::Sum(Box::new(third.clone()), Box::new(neg_half))),
                Box::new(third)
            )))
        );
    }

    #[test]
    fn interior_zero_rejected() {
        assert_eq!(parse("t(2,0,3)"), Err(TangleError::InteriorZero(1)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("N(t(0") {
            Err(TangleError::Syntax { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col >= 5, "column was {col}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn cf_eval_goldens() {
        assert_eq!(cf_eval(&[2, -2, -3]).unwrap(), Slope::from_ints(11, 7));
        assert_eq!(cf_eval(&[1, 1, 1, 3]).unwrap(), Slope::from_ints(11, 7));
        assert_eq!(cf_eval(&[3]).unwrap(), Slope::from_ints(3, 1));
        assert_eq!(cf_eval(&[0, 2]).unwrap(), Slope::from_ints(1, 2));
        assert_eq!(cf_eval(&[]).unwrap(), Slope::infinity());
    }

    #[test]
    fn cf_expand_goldens() {
        assert_eq!(cf_expand(&Slope::from_ints(5, 2)).unwrap(), vec![2, 2]);
        assert_eq!(cf_expand(&Slope::from_ints(3, 2)).unwrap(), vec![1, 2]);
        assert_eq!(cf_expand(&Slope::from_ints(3, 1)).unwrap(), vec![3]);
        assert_eq!(cf_expand(&Slope::from_ints(1, 3)).unwrap(), vec![0, 3]);
        assert!(cf_expand(&Slope::infinity()).is_err());
        assert!(cf_expand(&Slope::from_ints(-1, 2)).is_err());
    }

    #[test]
    fn cf_roundtrip_all_coprime_up_to_100() {
        for p in 1i64..=100 {
            for q in 1i64..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let s = Slope::from_ints(p, q);
                let cs = cf_expand(&s).unwrap();
                assert_eq!(cf_eval(&cs).unwrap(), s, "{p}/{q} -> {cs:?}");
                // canonical form: interior coefficients ≥ 1, last ≥ 2 for n>1
                for (i, &a) in cs.iter().enumerate() {
                    if i > 0 {
                        assert!(a >= 1);
                    }
                }
                if cs.len() > 1 {
                    assert!(*cs.last().unwrap() >= 2, "{p}/{q} -> {cs:?}");
                }
            }
        }
    }

    #[test]
    fn slope_examples() {
        assert_eq!(
            TangleExpr::Rational(vec![2, 2]).slope().unwrap(),
            Slope::from_ints(5, 2)
        );
        assert_eq!(
            TangleExpr::Neg(Box::new(TangleExpr::Fraction(Slope::from_ints(1, 2))))
                .slope()
                .unwrap(),
            Slope::from_ints(-1, 2)
        );
        assert_eq!(
            TangleExpr::Elementary(Elementary::Infinity).slope().unwrap(),
            Slope::infinity()
        );
        assert!(parse("N(t(3))").unwrap().slope().is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        let samples = [
            "N(t(3))",
            "t(2,-2,-3)",
            "N(t(1/3) + t(-1/2) + t(1/3))",
            "D(flip(t(2,2)))",
            "pretzel(3,2,3)",
            "braid(\"aaa\")",
            "N(-t(1/2) + t(3))",
            "inf",
        ];
        for s in samples {
            let e = parse(s).unwrap();
            let printed = e.print();
            assert_eq!(parse(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }

    #[test]
    fn ast_json_is_structural() {
        let e = parse("N(t(1/3) + -t(2,2))").unwrap();
        let v = e.to_json();
        assert_eq!(v["kind"], "numerator");
        assert_eq!(v["of"]["kind"], "sum");
        assert_eq!(v["of"]["right"]["kind"], "mirror");
    }

    #[test]
    fn extended_arithmetic_is_total() {
        // an interior value may make a tail vanish: 1/(1 + 1/(-1)) collapses
        // through ∞ without error
        let s = cf_eval(&[1, 1, -1]).unwrap();
        assert!(s.is_infinite());
    }
}
