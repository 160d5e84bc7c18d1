//! Precision-tracked Laurent series over a prime field: the desk model of
//! the complete discretely valued field kappa((t)).
//!
//! A series knows its terms on a window [valuation, cutoff); everything at
//! or above the cutoff is unknown. Arithmetic propagates the pessimistic
//! minimum precision and never fabricates unknown terms. The exact zero is
//! the one series with infinite cutoff.

use crate::error::{Error, Result};
use crate::finite_field::{gcd, FieldElement, PrimeField};

pub const DEFAULT_PRECISION: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: PrimeField,
    /// Exponent of the leading known nonzero term. Equal to `cutoff` when
    /// no nonzero term is known.
    valuation: i64,
    /// Coefficients of t^valuation, t^(valuation+1), ...; first entry
    /// nonzero whenever nonempty.
    coeffs: Vec<FieldElement>,
    /// First unknown exponent; i64::MAX for the exact zero.
    cutoff: i64,
}

fn sat(a: i64, b: i64) -> i64 {
    a.saturating_add(b)
}

impl LaurentSeries {
    fn normalized(
        field: PrimeField,
        mut valuation: i64,
        mut coeffs: Vec<FieldElement>,
        cutoff: i64,
    ) -> Self {
        while let Some(first) = coeffs.first() {
            if first.is_zero() {
                coeffs.remove(0);
                valuation += 1;
            } else {
                break;
            }
        }
        if coeffs.is_empty() {
            valuation = cutoff;
        } else {
            debug_assert_eq!(valuation + coeffs.len() as i64, cutoff);
        }
        LaurentSeries {
            field,
            valuation,
            coeffs,
            cutoff,
        }
    }

    /// The exact zero series.
    pub fn zero(field: PrimeField) -> Self {
        LaurentSeries {
            field,
            valuation: i64::MAX,
            coeffs: Vec::new(),
            cutoff: i64::MAX,
        }
    }

    /// The constant 1 known through t^(prec-1).
    pub fn one(field: PrimeField, prec: usize) -> Self {
        Self::monomial(field.one(), 0, prec)
    }

    /// c * t^k with prec known terms.
    pub fn monomial(c: FieldElement, k: i64, prec: usize) -> Self {
        let field = c.field();
        assert!(prec > 0, "precision must be positive");
        let mut coeffs = vec![field.zero(); prec];
        coeffs[0] = c;
        Self::normalized(field, k, coeffs, k + prec as i64)
    }

    /// Builds a series from (exponent, coefficient) terms with at least
    /// `prec` known terms from the lowest exponent.
    pub fn from_terms(field: PrimeField, terms: &[(i64, i64)], prec: usize) -> Self {
        let reduced: Vec<(i64, FieldElement)> = terms
            .iter()
            .map(|&(e, c)| (e, field.elt(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if reduced.is_empty() {
            // all-zero literal: known zero through the window
            return LaurentSeries {
                field,
                valuation: prec as i64,
                coeffs: Vec::new(),
                cutoff: prec as i64,
            };
        }
        let lo = reduced.iter().map(|&(e, _)| e).min().unwrap();
        let hi = reduced.iter().map(|&(e, _)| e).max().unwrap();
        let len = ((hi - lo + 1) as usize).max(prec);
        let mut coeffs = vec![field.zero(); len];
        for (e, c) in reduced {
            let idx = (e - lo) as usize;
            coeffs[idx] = coeffs[idx].add(&c);
        }
        Self::normalized(field, lo, coeffs, lo + len as i64)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.cutoff == i64::MAX
    }

    /// True when no nonzero term is known (includes the exact zero).
    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of known terms counted from the leading term.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Valuation of the leading known term.
    pub fn valuation(&self) -> Result<i64> {
        if self.is_exact_zero() {
            return Err(Error::ZeroInput("valuation of exact zero"));
        }
        if self.coeffs.is_empty() {
            return Err(Error::PrecisionExhausted(format!(
                "no nonzero term known below t^{}",
                self.cutoff
            )));
        }
        Ok(self.valuation)
    }

    /// Leading coefficient.
    pub fn leading(&self) -> Result<FieldElement> {
        self.valuation()?;
        Ok(self.coeffs[0])
    }

    /// Image in the residue field: the coefficient of t^0 for series of
    /// valuation >= 0 (zero if valuation > 0).
    pub fn residue(&self) -> Result<FieldElement> {
        let v = self.valuation()?;
        if v < 0 {
            return Err(Error::PrecisionExhausted(
                "negative valuation has no residue".into(),
            ));
        }
        Ok(if v > 0 {
            self.field.zero()
        } else {
            self.coeffs[0]
        })
    }

    /// Coefficient of t^e, or None when the term is beyond the cutoff.
    pub fn coeff(&self, e: i64) -> Option<FieldElement> {
        if e >= self.cutoff {
            return None;
        }
        if self.coeffs.is_empty() || e < self.valuation {
            return Some(self.field.zero());
        }
        Some(self.coeffs[(e - self.valuation) as usize])
    }

    pub fn add(&self, rhs: &LaurentSeries) -> LaurentSeries {
        let cutoff = self.cutoff.min(rhs.cutoff);
        if cutoff == i64::MAX {
            // both exactly zero
            return LaurentSeries::zero(self.field);
        }
        let lo = match (self.coeffs.is_empty(), rhs.coeffs.is_empty()) {
            (true, true) => cutoff,
            (false, true) => self.valuation.min(cutoff),
            (true, false) => rhs.valuation.min(cutoff),
            (false, false) => self.valuation.min(rhs.valuation).min(cutoff),
        };
        let mut coeffs = Vec::with_capacity((cutoff - lo).max(0) as usize);
        let mut e = lo;
        while e < cutoff {
            let a = self.coeff(e).unwrap_or_else(|| self.field.zero());
            let b = rhs.coeff(e).unwrap_or_else(|| self.field.zero());
            coeffs.push(a.add(&b));
            e += 1;
        }
        Self::normalized(self.field, lo, coeffs, cutoff)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries {
            field: self.field,
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn sub(&self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentSeries) -> LaurentSeries {
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return LaurentSeries::zero(self.field);
        }
        // valuation of a product is the sum of valuations; unknown leading
        // parts only lower the guaranteed window
        let av = if self.coeffs.is_empty() {
            self.cutoff
        } else {
            self.valuation
        };
        let bv = if rhs.coeffs.is_empty() {
            rhs.cutoff
        } else {
            rhs.valuation
        };
        let cutoff = sat(av, rhs.cutoff).min(sat(bv, self.cutoff));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LaurentSeries {
                field: self.field,
                valuation: cutoff,
                coeffs: Vec::new(),
                cutoff,
            };
        }
        let lo = av + bv;
        let len = (cutoff - lo) as usize;
        let mut coeffs = vec![self.field.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::normalized(self.field, lo, coeffs, cutoff)
    }

    /// Multiplies every coefficient by a constant; exact, keeps the window.
    pub fn scaled(&self, c: &FieldElement) -> LaurentSeries {
        if self.is_exact_zero() {
            return self.clone();
        }
        if c.is_zero() {
            return LaurentSeries {
                field: self.field,
                valuation: self.cutoff,
                coeffs: Vec::new(),
                cutoff: self.cutoff,
            };
        }
        LaurentSeries {
            field: self.field,
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            cutoff: self.cutoff,
        }
    }

    /// Multiplies by t^k.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        if self.is_exact_zero() {
            return self.clone();
        }
        LaurentSeries {
            field: self.field,
            valuation: sat(self.valuation, k),
            coeffs: self.coeffs.clone(),
            cutoff: sat(self.cutoff, k),
        }
    }

    pub fn inverse(&self) -> Result<LaurentSeries> {
        if self.is_exact_zero() {
            return Err(Error::ZeroInput("inverse of exact zero"));
        }
        if self.coeffs.is_empty() {
            return Err(Error::PrecisionExhausted(
                "cannot invert a series with no known leading term".into(),
            ));
        }
        let len = self.coeffs.len();
        let c0inv = self.coeffs[0].inverse();
        let mut inv = vec![self.field.zero(); len];
        inv[0] = c0inv;
        for k in 1..len {
            // sum_{j=1..k} a_j * b_{k-j} = -a_0 * b_k
            let mut s = self.field.zero();
            for j in 1..=k {
                s = s.add(&self.coeffs[j].mul(&inv[k - j]));
            }
            inv[k] = s.neg().mul(&c0inv);
        }
        let v = -self.valuation;
        Ok(Self::normalized(self.field, v, inv, v + len as i64))
    }

    pub fn div(&self, rhs: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(self.mul(&rhs.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Result<LaurentSeries> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if e == 0 {
            let prec = self.coeffs.len().max(1);
            return Ok(LaurentSeries::one(self.field, prec));
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc: Option<LaurentSeries> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.unwrap())
    }

    /// Truncates the known window to end at `cutoff`.
    pub fn truncate(&self, cutoff: i64) -> LaurentSeries {
        if cutoff >= self.cutoff {
            return self.clone();
        }
        let keep = if self.coeffs.is_empty() {
            Vec::new()
        } else {
            let n = (cutoff - self.valuation).max(0) as usize;
            self.coeffs[..n.min(self.coeffs.len())].to_vec()
        };
        let val = if keep.is_empty() {
            cutoff
        } else {
            self.valuation
        };
        Self::normalized(self.field, val, keep, cutoff)
    }

    /// Equality of all coefficients on the common known window.
    pub fn eq_to_precision(&self, rhs: &LaurentSeries) -> bool {
        self.sub(rhs).is_zero_to_precision()
    }
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.valuation + i as i64;
            match (c.is_one(), e) {
                (_, 0) => write!(f, "{}", c)?,
                (true, 1) => write!(f, "t")?,
                (true, _) => write!(f, "t^{}", e)?,
                (false, 1) => write!(f, "{}*t", c)?,
                (false, _) => write!(f, "{}*t^{}", c, e)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses the series literal grammar `term ('+' term)*` with
/// `term = [coeff '*'] 't' ['^' int] | coeff`, e.g. `t^-1 + 2 + 3*t^2`.
/// Coefficients are integers reduced mod q. A leading `-` and `-` as a
/// separator are accepted.
pub fn parse_series(literal: &str, field: PrimeField, prec: usize) -> Result<LaurentSeries> {
    let s = literal.trim();
    if s.is_empty() {
        return Err(Error::ParseError("empty series literal".into()));
    }
    let mut terms: Vec<(i64, i64)> = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    let mut sign = 1i64;
    loop {
        // one term
        skip_ws(&bytes, &mut pos);
        let mut coeff: Option<i64> = None;
        if let Some(v) = read_int(&bytes, &mut pos) {
            coeff = Some(v);
        }
        skip_ws(&bytes, &mut pos);
        let mut exp = 0i64;
        let mut saw_t = false;
        if pos < bytes.len() && (bytes[pos] == '*' || bytes[pos] == 't') {
            if bytes[pos] == '*' {
                pos += 1;
                skip_ws(&bytes, &mut pos);
                if pos >= bytes.len() || bytes[pos] != 't' {
                    return Err(Error::ParseError(format!(
                        "expected 't' after '*' at column {pos} in {literal:?}"
                    )));
                }
            }
            // consume 't'
            pos += 1;
            saw_t = true;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == '^' {
                pos += 1;
                exp = read_int(&bytes, &mut pos).ok_or_else(|| {
                    Error::ParseError(format!("expected exponent at column {pos} in {literal:?}"))
                })?;
            }
        }
        if coeff.is_none() && !saw_t {
            return Err(Error::ParseError(format!(
                "expected a term at column {pos} in {literal:?}"
            )));
        }
        terms.push((exp, sign * coeff.unwrap_or(1)));
        skip_ws(&bytes, &mut pos);
        if pos >= bytes.len() {
            break;
        }
        sign = match bytes[pos] {
            '+' => 1,
            '-' => -1,
            other => {
                return Err(Error::ParseError(format!(
                    "expected '+' or '-', found {other:?} at column {pos} in {literal:?}"
                )))
            }
        };
        pos += 1;
    }
    Ok(LaurentSeries::from_terms(field, &terms, prec))
}

fn skip_ws(bytes: &[char], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn read_int(bytes: &[char], pos: &mut usize) -> Option<i64> {
    let start = *pos;
    let mut p = *pos;
    if p < bytes.len() && (bytes[p] == '-' || bytes[p] == '+') {
        p += 1;
    }
    let digits_start = p;
    while p < bytes.len() && bytes[p].is_ascii_digit() {
        p += 1;
    }
    if p == digits_start {
        return None;
    }
    let text: String = bytes[start..p].iter().collect();
    *pos = p;
    text.parse().ok()
}

/// Hensel lift of an n-th root: given z of valuation 0 with residue 1 and
/// gcd(n, q) = 1, returns the unique w with residue 1 and w^n = z through
/// the input precision.
pub fn hensel_nth_root(z: &LaurentSeries, n: u64) -> Result<LaurentSeries> {
    let q = z.field().modulus();
    if gcd(n, q) != 1 {
        return Err(Error::WildCharacteristic { n, q });
    }
    let v = z.valuation().map_err(|e| match e {
        Error::ZeroInput(_) => Error::ResidueNotOne("exact zero has no root".into()),
        other => other,
    })?;
    if v != 0 {
        return Err(Error::ResidueNotOne(format!("valuation {v} != 0")));
    }
    if !z.coeffs[0].is_one() {
        return Err(Error::ResidueNotOne(format!("residue {}", z.coeffs[0])));
    }
    let field = z.field();
    let prec = z.precision();
    let n_inv = field.elt(n as i64).inverse();
    let mut w = LaurentSeries::one(field, prec);
    for k in 1..prec as i64 {
        let err = z.sub(&w.pow(n as i64).expect("nonneg power"));
        let c = match err.coeff(k) {
            Some(c) => c,
            None => break,
        };
        if c.is_zero() {
            continue;
        }
        w = w.add(&LaurentSeries::monomial(c.mul(&n_inv), k, prec));
        w = w.truncate(prec as i64);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn parse_example() {
        let s = parse_series("t^-1 + 2", f5(), 16).unwrap();
        assert_eq!(s.valuation().unwrap(), -1);
        assert_eq!(s.coeff(-1).unwrap().value(), 1);
        assert_eq!(s.coeff(0).unwrap().value(), 2);
        assert_eq!(s.coeff(1).unwrap().value(), 0);
        assert_eq!(s.precision(), 16);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_series("", f5(), 8).is_err());
        assert!(parse_series("t^", f5(), 8).is_err());
        assert!(parse_series("2 & t", f5(), 8).is_err());
        assert!(parse_series("3*", f5(), 8).is_err());
    }

    #[test]
    fn display_round_trip() {
        for lit in ["t^-1 + 2 + 3*t^2", "1 + t", "4*t^3", "2"] {
            let s = parse_series(lit, f5(), 12).unwrap();
            let shown = s.to_string();
            let back = parse_series(&shown, f5(), 12).unwrap();
            assert!(s.eq_to_precision(&back), "{lit} -> {shown}");
        }
    }

    #[test]
    fn product_valuations_add() {
        let a = parse_series("t^-2 + 1", f5(), 8).unwrap();
        let b = parse_series("3*t + t^2", f5(), 8).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.valuation().unwrap(), -1);
        assert_eq!(p.precision(), 8);
    }

    #[test]
    fn pessimistic_precision() {
        let a = parse_series("1 + t", f5(), 8).unwrap();
        let b = parse_series("1 + t", f5(), 4).unwrap();
        assert_eq!(a.mul(&b).precision(), 4);
        assert_eq!(a.add(&b).precision(), 4);
    }

    #[test]
    fn inverse_inverts() {
        let a = parse_series("2 + t + 4*t^3", f5(), 10).unwrap();
        let inv = a.inverse().unwrap();
        let one = LaurentSeries::one(f5(), 10);
        assert!(a.mul(&inv).eq_to_precision(&one));

        let m = parse_series("3*t^2", f5(), 6).unwrap();
        let minv = m.inverse().unwrap();
        assert_eq!(minv.valuation().unwrap(), -2);
        assert!(m.mul(&minv).eq_to_precision(&LaurentSeries::one(f5(), 6)));
    }

    #[test]
    fn zero_to_precision_after_cancellation() {
        let a = parse_series("1 + t", f5(), 8).unwrap();
        let d = a.sub(&a);
        assert!(d.is_zero_to_precision());
        assert!(!d.is_exact_zero());
        assert!(d.valuation().is_err());
    }

    #[test]
    fn hensel_root_trivial() {
        let one = LaurentSeries::one(f5(), 8);
        let w = hensel_nth_root(&one, 3).unwrap();
        assert!(w.eq_to_precision(&one));
    }

    #[test]
    fn hensel_root_constructed_cube() {
        let f7 = PrimeField::new(7).unwrap();
        let base = parse_series("1 + t", f7, 8).unwrap();
        let z = base.pow(3).unwrap();
        let w = hensel_nth_root(&z, 3).unwrap();
        assert!(w.eq_to_precision(&base));
    }

    #[test]
    fn hensel_root_sqrt_one_plus_t() {
        let z = parse_series("1 + t", f5(), 8).unwrap();
        let w = hensel_nth_root(&z, 2).unwrap();
        // oracle: square the output and compare truncations
        assert!(w.pow(2).unwrap().eq_to_precision(&z));
        // 1/2 = 3 in F_5
        assert_eq!(w.coeff(0).unwrap().value(), 1);
        assert_eq!(w.coeff(1).unwrap().value(), 3);
    }

    #[test]
    fn hensel_root_rejects_bad_inputs() {
        let t = parse_series("t + 1", f5(), 8).unwrap();
        assert!(hensel_nth_root(&t.shift(1), 2).is_err());
        let two = parse_series("2 + t", f5(), 8).unwrap();
        assert!(matches!(
            hensel_nth_root(&two, 2),
            Err(Error::ResidueNotOne(_))
        ));
        let one = LaurentSeries::one(f5(), 8);
        assert!(matches!(
            hensel_nth_root(&one, 5),
            Err(Error::WildCharacteristic { .. })
        ));
    }
}
