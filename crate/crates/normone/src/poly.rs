//! Sparse polynomials and rational functions in two variables over a
//! prime field: exact evaluation at closed points, vanishing and
//! factor-extraction along linear primes, and an infix parser with
//! implicit multiplication (so `xy(x+y-1)` reads naturally).

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, PrimeField};
use std::collections::BTreeMap;

/// A polynomial in x, y with FieldElement coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyXY {
    field: PrimeField,
    /// (deg_x, deg_y) -> coefficient, zero coefficients pruned.
    terms: BTreeMap<(u32, u32), FieldElement>,
}

impl PolyXY {
    pub fn zero(field: PrimeField) -> Self {
        PolyXY {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, c: i64) -> Self {
        let mut p = Self::zero(field);
        p.insert(0, 0, field.elt(c));
        p
    }

    pub fn var_x(field: PrimeField) -> Self {
        let mut p = Self::zero(field);
        p.insert(1, 0, field.one());
        p
    }

    pub fn var_y(field: PrimeField) -> Self {
        let mut p = Self::zero(field);
        p.insert(0, 1, field.one());
        p
    }

    /// a*x + b*y + c.
    pub fn linear(field: PrimeField, a: i64, b: i64, c: i64) -> Self {
        let mut p = Self::zero(field);
        p.insert(1, 0, field.elt(a));
        p.insert(0, 1, field.elt(b));
        p.insert(0, 0, field.elt(c));
        p
    }

    fn insert(&mut self, dx: u32, dy: u32, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((dx, dy))
            .or_insert_with(|| self.field.zero());
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&(dx, dy));
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &PolyXY) -> PolyXY {
        let mut out = self.clone();
        for (&(dx, dy), c) in &rhs.terms {
            out.insert(dx, dy, *c);
        }
        out
    }

    pub fn neg(&self) -> PolyXY {
        PolyXY {
            field: self.field,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &PolyXY) -> PolyXY {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &PolyXY) -> PolyXY {
        let mut out = PolyXY::zero(self.field);
        for (&(ax, ay), ac) in &self.terms {
            for (&(bx, by), bc) in &rhs.terms {
                out.insert(ax + bx, ay + by, ac.mul(bc));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> PolyXY {
        let mut out = PolyXY::constant(self.field, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for (&(dx, dy), c) in &self.terms {
            acc = acc.add(&c.mul(&x.pow(dx as u64)).mul(&y.pow(dy as u64)));
        }
        acc
    }

    /// True when the polynomial vanishes identically on the line
    /// a x + b y + c = 0 (a, b not both zero).
    pub fn vanishes_on_line(&self, a: i64, b: i64, c: i64) -> bool {
        self.restrict_to_line(a, b, c).iter().all(|c| c.is_zero())
    }

    /// Coefficients of the single-variable restriction to the line,
    /// parametrized by x when b != 0 and by y otherwise.
    fn restrict_to_line(&self, a: i64, b: i64, c: i64) -> Vec<FieldElement> {
        let fa = self.field.elt(a);
        let fb = self.field.elt(b);
        let fc = self.field.elt(c);
        assert!(!fa.is_zero() || !fb.is_zero(), "degenerate line");
        let max_deg = self
            .terms
            .keys()
            .map(|&(dx, dy)| dx + dy)
            .max()
            .unwrap_or(0) as usize;
        let mut out = vec![self.field.zero(); max_deg + 1];
        for (&(dx, dy), coeff) in &self.terms {
            // substitute the solved variable: y = -(a x + c)/b or x = -(b y + c)/a
            let (pow_free, pow_sub, neg_lin) = if !fb.is_zero() {
                (dx, dy, (fa, fc, fb))
            } else {
                (dy, dx, (fb, fc, fa))
            };
            let (lin_slope, lin_const, denom) = neg_lin;
            let di = denom.inverse();
            // (-(slope * v + const)/denom)^pow_sub expanded over v
            let s = lin_slope.mul(&di).neg();
            let k = lin_const.mul(&di).neg();
            let mut expansion = vec![self.field.zero(); pow_sub as usize + 1];
            expansion[0] = self.field.one();
            for _ in 0..pow_sub {
                let mut next = vec![self.field.zero(); expansion.len()];
                for (i, e) in expansion.iter().enumerate() {
                    if e.is_zero() {
                        continue;
                    }
                    next[i] = next[i].add(&e.mul(&k));
                    if i + 1 < next.len() {
                        next[i + 1] = next[i + 1].add(&e.mul(&s));
                    }
                }
                expansion = next;
            }
            for (i, e) in expansion.iter().enumerate() {
                let deg = pow_free as usize + i;
                out[deg] = out[deg].add(&coeff.mul(e));
            }
        }
        out
    }

    /// Exact division by the linear form a x + b y + c; the form must
    /// divide (check with [`PolyXY::vanishes_on_line`] first).
    pub fn divide_by_linear(&self, a: i64, b: i64, c: i64) -> Result<PolyXY> {
        let fa = self.field.elt(a);
        let fb = self.field.elt(b);
        if fa.is_zero() && fb.is_zero() {
            return Err(Error::ParseError("degenerate linear form".into()));
        }
        // long division in the variable with nonzero slope
        let divide_in_y = !fb.is_zero();
        let mut rem = self.clone();
        let mut quot = PolyXY::zero(self.field);
        let lead_inv = if divide_in_y { fb } else { fa }.inverse();
        // peel the highest term in the division variable
        while let Some((&(dx, dy), &coeff)) =
            rem.terms
                .iter()
                .max_by_key(|(&(dx, dy), _)| if divide_in_y { (dy, dx) } else { (dx, dy) })
        {
            let sub_deg = if divide_in_y { dy } else { dx };
            if sub_deg == 0 {
                return Err(Error::ParseError(
                    "linear form does not divide the polynomial".into(),
                ));
            }
            let mut mono = PolyXY::zero(self.field);
            let (qx, qy) = if divide_in_y {
                (dx, dy - 1)
            } else {
                (dx - 1, dy)
            };
            mono.insert(qx, qy, coeff.mul(&lead_inv));
            quot = quot.add(&mono);
            let lin = PolyXY::linear(self.field, a, b, c);
            rem = rem.sub(&mono.mul(&lin));
        }
        if !rem.is_zero() {
            return Err(Error::ParseError(
                "linear form does not divide the polynomial".into(),
            ));
        }
        Ok(quot)
    }

    /// Multiplicity of the linear prime in the polynomial.
    pub fn multiplicity_along_line(&self, a: i64, b: i64, c: i64) -> Result<(u32, PolyXY)> {
        if self.is_zero() {
            return Err(Error::ZeroInput("multiplicity of zero polynomial"));
        }
        let mut mult = 0;
        let mut cur = self.clone();
        while cur.vanishes_on_line(a, b, c) {
            cur = cur.divide_by_linear(a, b, c)?;
            mult += 1;
        }
        Ok((mult, cur))
    }
}

impl std::fmt::Display for PolyXY {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dx, dy), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if !c.is_one() || (dx == 0 && dy == 0) {
                parts.push(format!("{c}"));
            }
            if dx == 1 {
                parts.push("x".into());
            } else if dx > 1 {
                parts.push(format!("x^{dx}"));
            }
            if dy == 1 {
                parts.push("y".into());
            } else if dy > 1 {
                parts.push(format!("y^{dy}"));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// num / den; no common-factor reduction is performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: PolyXY,
    pub den: PolyXY,
}

impl RationalFunction {
    pub fn from_poly(p: PolyXY) -> Self {
        let one = PolyXY::constant(p.field(), 1);
        RationalFunction { num: p, den: one }
    }

    pub fn field(&self) -> PrimeField {
        self.num.field()
    }

    pub fn mul(&self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.num.mul(&rhs.num),
            den: self.den.mul(&rhs.den),
        }
    }

    pub fn div(&self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.num.mul(&rhs.den),
            den: self.den.mul(&rhs.num),
        }
    }

    pub fn add(&self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            den: self.den.mul(&rhs.den),
        }
    }

    pub fn sub(&self, rhs: &RationalFunction) -> RationalFunction {
        self.add(&RationalFunction {
            num: rhs.num.neg(),
            den: rhs.den.clone(),
        })
    }

    /// f - 1, as a rational function.
    pub fn minus_one(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.sub(&self.den),
            den: self.den.clone(),
        }
    }

    /// Exact evaluation at a closed point of the affine plane.
    pub fn eval(&self, x: i64, y: i64) -> Result<FieldElement> {
        let field = self.field();
        let (fx, fy) = (field.elt(x), field.elt(y));
        let d = self.den.eval(&fx, &fy);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(x, y));
        }
        Ok(self.num.eval(&fx, &fy).div(&d))
    }
}

/// Exact evaluation f(a, b) in kappa; errors at poles.
pub fn rational_point_residue(f: &RationalFunction, point: (i64, i64)) -> Result<FieldElement> {
    f.eval(point.0, point.1)
}

/// Parses standard infix notation over x, y with +, -, *, /, ^, parentheses
/// and implicit multiplication.
pub fn parse_rational(input: &str, field: PrimeField) -> Result<RationalFunction> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        field,
    };
    let value = parser.sum()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::ParseError(format!(
            "unexpected trailing input at token {} in {input:?}",
            parser.pos
        )));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            'x' => {
                out.push(Tok::X);
                i += 1;
            }
            'y' => {
                out.push(Tok::Y);
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text
                    .parse()
                    .map_err(|_| Error::ParseError(format!("bad integer {text:?}")))?;
                out.push(Tok::Int(v));
            }
            other => {
                return Err(Error::ParseError(format!(
                    "unexpected character {other:?} at byte {i} in {input:?}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    field: PrimeField,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn sum(&mut self) -> Result<RationalFunction> {
        let mut acc = self.product()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?);
                }
                // implicit multiplication: xy, 2x, x(x+1)
                Some(Tok::X) | Some(Tok::Y) | Some(Tok::Int(_)) | Some(Tok::Open) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(RationalFunction {
                num: f.num.neg(),
                den: f.den,
            });
        }
        let mut base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(v)) if *v >= 0 => *v as u32,
                _ => {
                    return Err(Error::ParseError(
                        "expected a nonnegative exponent after '^'".into(),
                    ))
                }
            };
            self.pos += 1;
            base = RationalFunction {
                num: base.num.pow(e),
                den: base.den.pow(e),
            };
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RationalFunction> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(PolyXY::constant(self.field, v)))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(PolyXY::var_x(self.field)))
            }
            Some(Tok::Y) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(PolyXY::var_y(self.field)))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !matches!(self.peek(), Some(Tok::Close)) {
                    return Err(Error::ParseError("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::ParseError(format!(
                "expected a factor, found {other:?}"
            ))),
        }
    }
}
