//! Elements of the two-dimensional local field F_{pi1}: Laurent series in
//! pi1 whose coefficients are Laurent series in pi2, on a rectangular
//! precision window, with the monomial normal form x = u pi1^s pi2^t b^m.

use crate::error::{Error, Result};
use crate::finite_field::{gcd, FieldElement, PrimeField};
use crate::laurent::{hensel_nth_root, LaurentSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiLocalElement {
    field: PrimeField,
    /// pi1-exponent of coeffs[0].
    valuation: i64,
    /// pi2-series coefficients of pi1^valuation, pi1^(valuation+1), ...
    coeffs: Vec<LaurentSeries>,
    /// First unknown pi1-exponent; i64::MAX for the exact zero.
    cutoff: i64,
}

impl BiLocalElement {
    pub fn zero(field: PrimeField) -> Self {
        BiLocalElement {
            field,
            valuation: i64::MAX,
            coeffs: Vec::new(),
            cutoff: i64::MAX,
        }
    }

    /// Builds from pi2-series coefficients starting at pi1^valuation.
    pub fn from_coeffs(field: PrimeField, valuation: i64, coeffs: Vec<LaurentSeries>) -> Self {
        let cutoff = valuation + coeffs.len() as i64;
        Self::normalized(field, valuation, coeffs, cutoff)
    }

    fn normalized(
        field: PrimeField,
        mut valuation: i64,
        mut coeffs: Vec<LaurentSeries>,
        cutoff: i64,
    ) -> Self {
        while let Some(first) = coeffs.first() {
            if first.is_exact_zero() {
                coeffs.remove(0);
                valuation += 1;
            } else {
                break;
            }
        }
        if coeffs.is_empty() {
            valuation = cutoff;
        }
        BiLocalElement {
            field,
            valuation,
            coeffs,
            cutoff,
        }
    }

    /// u * pi1^e1 * pi2^e2, with prec1 x prec2 known window.
    pub fn monomial(u: FieldElement, e1: i64, e2: i64, prec1: usize, prec2: usize) -> Self {
        let field = u.field();
        let mut coeffs = vec![LaurentSeries::zero(field); prec1];
        coeffs[0] = LaurentSeries::monomial(u, e2, prec2);
        Self::from_coeffs(field, e1, coeffs)
    }

    pub fn one(field: PrimeField, prec1: usize, prec2: usize) -> Self {
        Self::monomial(field.one(), 0, 0, prec1, prec2)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_to_precision())
    }

    pub fn coeff(&self, e1: i64) -> Option<&LaurentSeries> {
        if e1 < self.valuation || e1 >= self.cutoff {
            return None;
        }
        self.coeffs.get((e1 - self.valuation) as usize)
    }

    /// pi1-valuation and leading pi2-coefficient; errors when the leading
    /// coefficient cannot be determined at this precision.
    pub fn leading(&self) -> Result<(i64, &LaurentSeries)> {
        if self.cutoff == i64::MAX && self.coeffs.is_empty() {
            return Err(Error::ZeroInput("leading term of exact zero"));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_to_precision() {
                if c.is_exact_zero() {
                    continue;
                }
                return Err(Error::PrecisionExhausted(format!(
                    "pi1-coefficient at index {i} is zero only to precision"
                )));
            }
            return Ok((self.valuation + i as i64, c));
        }
        Err(Error::PrecisionExhausted(
            "no nonzero pi1-coefficient known".into(),
        ))
    }

    pub fn add(&self, rhs: &BiLocalElement) -> BiLocalElement {
        let cutoff = self.cutoff.min(rhs.cutoff);
        if cutoff == i64::MAX {
            return BiLocalElement::zero(self.field);
        }
        let lo = self.valuation.min(rhs.valuation).min(cutoff);
        let mut coeffs = Vec::new();
        for e in lo..cutoff {
            let zero = LaurentSeries::zero(self.field);
            let a = self.coeff(e).unwrap_or(&zero).clone();
            let b = rhs.coeff(e).unwrap_or(&zero).clone();
            coeffs.push(a.add(&b));
        }
        Self::normalized(self.field, lo, coeffs, cutoff)
    }

    pub fn neg(&self) -> BiLocalElement {
        BiLocalElement {
            field: self.field,
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn sub(&self, rhs: &BiLocalElement) -> BiLocalElement {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &BiLocalElement) -> BiLocalElement {
        if self.coeffs.is_empty() && self.cutoff == i64::MAX {
            return BiLocalElement::zero(self.field);
        }
        if rhs.coeffs.is_empty() && rhs.cutoff == i64::MAX {
            return BiLocalElement::zero(self.field);
        }
        let lo = self.valuation.saturating_add(rhs.valuation);
        let cutoff = (self.valuation.saturating_add(rhs.cutoff))
            .min(rhs.valuation.saturating_add(self.cutoff));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return BiLocalElement {
                field: self.field,
                valuation: cutoff,
                coeffs: Vec::new(),
                cutoff,
            };
        }
        let len = (cutoff - lo) as usize;
        let mut coeffs = vec![LaurentSeries::zero(self.field); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
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

    pub fn pow(&self, e: u32) -> BiLocalElement {
        let mut acc: Option<BiLocalElement> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| {
            let prec2 = self
                .coeffs
                .first()
                .map(|c| c.precision().max(1))
                .unwrap_or(1);
            BiLocalElement::one(self.field, self.coeffs.len().max(1), prec2)
        })
    }

    pub fn inverse(&self) -> Result<BiLocalElement> {
        let (v, lead) = self.leading()?;
        let offset = (v - self.valuation) as usize;
        let lead_inv = lead.inverse()?;
        let len = self.coeffs.len() - offset;
        let mut inv = vec![LaurentSeries::zero(self.field); len];
        inv[0] = lead_inv.clone();
        for k in 1..len {
            let mut s = LaurentSeries::zero(self.field);
            for j in 1..=k {
                s = s.add(&self.coeffs[offset + j].mul(&inv[k - j]));
            }
            inv[k] = s.neg().mul(&lead_inv);
        }
        Ok(Self::normalized(self.field, -v, inv, -v + len as i64))
    }

    pub fn div(&self, rhs: &BiLocalElement) -> Result<BiLocalElement> {
        Ok(self.mul(&rhs.inverse()?))
    }

    pub fn eq_to_precision(&self, rhs: &BiLocalElement) -> bool {
        self.sub(rhs).is_zero_to_precision()
    }

    /// Multiplies by u^{-1} pi1^{-s} pi2^{-t}.
    fn strip_monomial(&self, u: &FieldElement, s: i64, t: i64) -> BiLocalElement {
        let ui = u.inverse();
        BiLocalElement {
            field: self.field,
            valuation: self.valuation - s,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.scaled(&ui).shift(-t))
                .collect(),
            cutoff: self.cutoff - s,
        }
    }
}

/// Writes x as u * pi1^s * pi2^t * b^m with u a residue unit, s and t the
/// valuations of the leading data, and b produced by Hensel lifting.
pub fn monomial_normal_form(
    x: &BiLocalElement,
    m: u64,
) -> Result<(FieldElement, i64, i64, BiLocalElement)> {
    let q = x.field().modulus();
    if gcd(m, q) != 1 {
        return Err(Error::WildCharacteristic { n: m, q });
    }
    let (s, lead) = x.leading().map_err(|e| match e {
        Error::ZeroInput(_) => Error::ZeroInput("normal form of exact zero"),
        other => other,
    })?;
    let t = lead.valuation()?;
    let u = lead.leading()?;
    let z = x.strip_monomial(&u, s, t);

    // first root the constant pi2-coefficient, then correct pi1-adically
    let z0 = z.coeff(0).ok_or_else(|| {
        Error::PrecisionExhausted("no constant coefficient after stripping".into())
    })?;
    let b0 = hensel_nth_root(z0, m)?;
    let mut b = BiLocalElement::from_coeffs(
        x.field(),
        0,
        std::iter::once(b0)
            .chain((1..z.coeffs.len()).map(|_| LaurentSeries::zero(x.field())))
            .collect(),
    );
    let m_scalar = x.field().elt(m as i64);
    for _ in 0..64 {
        let err = b.pow(m as u32).sub(&z);
        if err.is_zero_to_precision() {
            return Ok((u, s, t, b));
        }
        // b <- b - (b^m - z) / (m b^{m-1})
        let deriv = scalar_mul(&m_scalar, &b.pow(m as u32 - 1));
        let delta = err.div(&deriv)?;
        b = b.sub(&delta);
    }
    Err(Error::PrecisionExhausted(
        "m-th root iteration did not stabilize".into(),
    ))
}

fn scalar_mul(c: &FieldElement, x: &BiLocalElement) -> BiLocalElement {
    BiLocalElement {
        field: x.field,
        valuation: x.valuation,
        coeffs: x.coeffs.iter().map(|s| s.scaled(c)).collect(),
        cutoff: x.cutoff,
    }
}
