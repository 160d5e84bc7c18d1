//! Cyclic Kummer extensions L = F(y), y^n = a, of the Laurent-series local
//! field F = kappa((t)), with the norm, the tame symbol and constructive
//! R-equivalence decompositions.
//!
//! The distinguished generator sigma of Gal(L/F) acts by y -> rho_n * y
//! where rho_n is the smallest primitive n-th root of unity of kappa.
//! An R-triviality witness is a list of pairs (j, x) standing for the
//! product of the factors sigma^j(x) / x.

use crate::error::{Error, Result};
use crate::finite_field::{gcd, primitive_root_of_unity, unit_class, FieldElement, PrimeField};
use crate::laurent::LaurentSeries;

/// L = F(nth root of a) over F = F_q((t)), with n | q - 1.
#[derive(Debug, Clone)]
pub struct CyclicKummerLocal {
    field: PrimeField,
    a: LaurentSeries,
    n: u64,
    rho: FieldElement,
}

/// An element c_0 + c_1 y + ... + c_{n-1} y^{n-1} of L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    coords: Vec<LaurentSeries>,
}

/// One R-trivial factor sigma^j(x) / x.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub automorphism: u64,
    pub element: ExtElement,
}

/// A product of R-trivial factors.
#[derive(Debug, Clone, Default)]
pub struct Witness {
    pub pairs: Vec<WitnessPair>,
}

impl CyclicKummerLocal {
    pub fn new(a: LaurentSeries, n: u64) -> Result<Self> {
        let field = a.field();
        let q = field.modulus();
        if a.is_exact_zero() {
            return Err(Error::ZeroInput("Kummer radicand"));
        }
        if a.is_zero_to_precision() {
            return Err(Error::PrecisionExhausted(
                "Kummer radicand has no known leading term".into(),
            ));
        }
        if n == 0 || !(q - 1).is_multiple_of(n) {
            return Err(Error::IncompatibleModulus(format!(
                "n = {n} does not divide q - 1 = {}",
                q - 1
            )));
        }
        let rho = primitive_root_of_unity(&field, n)?;
        Ok(CyclicKummerLocal { field, a, n, rho })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn radicand(&self) -> &LaurentSeries {
        &self.a
    }

    pub fn rho(&self) -> FieldElement {
        self.rho
    }

    /// Ramification index e = n / gcd(n, v(a)).
    pub fn ramification_index(&self) -> Result<u64> {
        let m = self.a.valuation()?;
        let m_mod = m.rem_euclid(self.n as i64) as u64;
        Ok(self.n / gcd(self.n, if m_mod == 0 { self.n } else { m_mod }))
    }

    /// Residue degree g = n / e of the residue algebra kappa[eta]/(eta^g - u).
    pub fn residue_degree(&self) -> Result<u64> {
        Ok(self.n / self.ramification_index()?)
    }

    pub fn from_scalar(&self, c: LaurentSeries) -> ExtElement {
        let mut coords = vec![LaurentSeries::zero(self.field); self.n as usize];
        coords[0] = c;
        ExtElement { coords }
    }

    pub fn from_coords(&self, coords: Vec<LaurentSeries>) -> Result<ExtElement> {
        if coords.len() != self.n as usize {
            return Err(Error::DimensionMismatch {
                expected: self.n as usize,
                got: coords.len(),
            });
        }
        Ok(ExtElement { coords })
    }

    pub fn one(&self, prec: usize) -> ExtElement {
        self.from_scalar(LaurentSeries::one(self.field, prec))
    }

    /// The Kummer generator y.
    pub fn gen(&self, prec: usize) -> ExtElement {
        let mut coords = vec![LaurentSeries::zero(self.field); self.n as usize];
        if self.n == 1 {
            coords[0] = self.a.truncate(
                self.a
                    .valuation()
                    .map(|v| v + prec as i64)
                    .unwrap_or(i64::MAX),
            );
        } else {
            coords[1] = LaurentSeries::one(self.field, prec);
        }
        ExtElement { coords }
    }

    pub fn add(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a.add(b))
            .collect();
        ExtElement { coords }
    }

    pub fn sub(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a.sub(b))
            .collect();
        ExtElement { coords }
    }

    pub fn mul(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let n = self.n as usize;
        let mut coords = vec![LaurentSeries::zero(self.field); n];
        for i in 0..n {
            if x.coords[i].is_exact_zero() {
                continue;
            }
            for j in 0..n {
                if y.coords[j].is_exact_zero() {
                    continue;
                }
                let p = x.coords[i].mul(&y.coords[j]);
                if i + j < n {
                    coords[i + j] = coords[i + j].add(&p);
                } else {
                    // y^(i+j) = a * y^(i+j-n)
                    coords[i + j - n] = coords[i + j - n].add(&p.mul(&self.a));
                }
            }
        }
        ExtElement { coords }
    }

    pub fn scalar_mul(&self, c: &FieldElement, x: &ExtElement) -> ExtElement {
        let coords = x.coords.iter().map(|s| s.scaled(c)).collect();
        ExtElement { coords }
    }

    /// sigma^j, where sigma(y) = rho * y.
    pub fn sigma(&self, x: &ExtElement, j: u64) -> ExtElement {
        let coords = x
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| c.scaled(&self.rho.pow((i as u64 * j) % self.n)))
            .collect();
        ExtElement { coords }
    }

    pub fn pow(&self, x: &ExtElement, e: u64) -> ExtElement {
        let prec = crate::laurent::DEFAULT_PRECISION;
        let mut acc = self.one(prec);
        let mut base = x.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first {
                    first = false;
                    base.clone()
                } else {
                    self.mul(&acc, &base)
                };
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        if first {
            self.one(prec)
        } else {
            acc
        }
    }

    /// prod_{j < m} sigma^j(x), by doubling: P_{a+b} = P_a * sigma^a(P_b).
    fn conjugate_product(&self, x: &ExtElement, m: u64) -> ExtElement {
        debug_assert!(m >= 1);
        let mut acc: Option<(ExtElement, u64)> = None;
        let mut pow = (x.clone(), 1u64);
        let mut rest = m;
        loop {
            if rest & 1 == 1 {
                acc = Some(match acc {
                    None => pow.clone(),
                    Some((p, a)) => (self.mul(&p, &self.sigma(&pow.0, a)), a + pow.1),
                });
            }
            rest >>= 1;
            if rest == 0 {
                break;
            }
            pow = (self.mul(&pow.0, &self.sigma(&pow.0, pow.1)), 2 * pow.1);
        }
        acc.expect("m >= 1").0
    }

    /// Determinant of multiplication by x, computed as the product of the
    /// Galois conjugates; lands in the base field.
    pub fn norm(&self, x: &ExtElement) -> Result<LaurentSeries> {
        if x.is_exact_zero() {
            return Err(Error::ZeroInput("norm of exact zero"));
        }
        if x.is_zero_to_precision() {
            return Err(Error::PrecisionExhausted(
                "norm of an element with no known term".into(),
            ));
        }
        let prod = self.conjugate_product(x, self.n);
        // conjugate-invariance forces the off-diagonal coordinates to vanish
        for c in &prod.coords[1..] {
            debug_assert!(c.is_zero_to_precision(), "norm not diagonal: {c}");
        }
        Ok(prod.coords[0].clone())
    }

    /// Inverse via the conjugate product: x^{-1} = (prod_{j>0} sigma^j(x)) / N(x).
    pub fn inverse(&self, x: &ExtElement) -> Result<ExtElement> {
        if x.is_exact_zero() {
            return Err(Error::ZeroInput("inverse of exact zero"));
        }
        if self.n == 1 {
            let ninv = x.coords[0].inverse().map_err(|e| match e {
                Error::ZeroInput(_) => Error::ZeroInput("inverse of zero element"),
                other => other,
            })?;
            return Ok(self.from_scalar(ninv));
        }
        // cofactor = prod_{j=1}^{n-1} sigma^j(x) = sigma(P_{n-1}(x))
        let cof = self.sigma(&self.conjugate_product(x, self.n - 1), 1);
        let norm = self.mul(x, &cof).coords[0].clone();
        let ninv = norm.inverse().map_err(|e| match e {
            Error::ZeroInput(_) => Error::ZeroInput("inverse of zero element"),
            other => other,
        })?;
        let coords = cof.coords.iter().map(|c| c.mul(&ninv)).collect();
        Ok(ExtElement { coords })
    }

    pub fn div(&self, x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
        Ok(self.mul(x, &self.inverse(y)?))
    }

    pub fn eq_to_precision(&self, x: &ExtElement, y: &ExtElement) -> bool {
        x.coords
            .iter()
            .zip(&y.coords)
            .all(|(a, b)| a.eq_to_precision(b))
    }
}

impl ExtElement {
    pub fn coords(&self) -> &[LaurentSeries] {
        &self.coords
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_exact_zero())
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero_to_precision())
    }

    pub fn is_scalar(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero_to_precision())
    }
}

impl Witness {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Multiplies out the factors sigma^j(x)/x.
    pub fn recompose(&self, ext: &CyclicKummerLocal) -> Result<ExtElement> {
        let mut acc = ext.one(crate::laurent::DEFAULT_PRECISION);
        let mut first = true;
        for pair in &self.pairs {
            let num = ext.sigma(&pair.element, pair.automorphism);
            let factor = ext.div(&num, &pair.element)?;
            acc = if first {
                first = false;
                factor
            } else {
                ext.mul(&acc, &factor)
            };
        }
        Ok(acc)
    }
}

/// Tame symbol class of (f, g) in kappa*/kappa*^n: the class of
/// (-1)^{v(f)v(g)} f^{v(g)} g^{-v(f)} modulo the maximal ideal.
pub fn tame_symbol(f: &LaurentSeries, g: &LaurentSeries, n: u64) -> Result<u64> {
    let vf = f.valuation()?;
    let vg = g.valuation()?;
    let lf = f.leading()?;
    let lg = g.leading()?;
    let field = f.field();
    let sign = if (vf * vg) % 2 == 0 {
        field.one()
    } else {
        field.elt(-1)
    };
    let r = sign.mul(&pow_signed(&lf, vg)).mul(&pow_signed(&lg, -vf));
    unit_class(&r, n)
}

fn pow_signed(c: &FieldElement, e: i64) -> FieldElement {
    if e >= 0 {
        c.pow(e as u64)
    } else {
        c.inverse().pow((-e) as u64)
    }
}

/// Norm-group membership for the cyclic Kummer extension, decided by the
/// symbol criterion tame_symbol(a, lambda, n) = 0. Valid in the tame case
/// with rho_n in the base field.
pub fn is_norm_cyclic(ext: &CyclicKummerLocal, lambda: &LaurentSeries) -> Result<bool> {
    if lambda.is_exact_zero() {
        return Err(Error::ZeroInput("norm membership of zero"));
    }
    Ok(tame_symbol(&ext.a, lambda, ext.n)? == 0)
}

/// The factorization N(alpha)^{-1} alpha^n = prod_{sigma} alpha / sigma(alpha)
/// as explicit witness pairs (j, alpha^{-1}).
pub fn nth_power_r_witness(ext: &CyclicKummerLocal, alpha: &ExtElement) -> Result<Witness> {
    if alpha.is_exact_zero() {
        return Err(Error::ZeroInput("witness of zero"));
    }
    if alpha.is_zero_to_precision() {
        return Err(Error::PrecisionExhausted(
            "witness of an element with no known term".into(),
        ));
    }
    if alpha.is_scalar() {
        // scalar conjugates coincide: every factor is 1
        return Ok(Witness::default());
    }
    let inv = ext.inverse(alpha)?;
    let pairs = (1..ext.n)
        .map(|j| WitnessPair {
            automorphism: j,
            element: inv.clone(),
        })
        .collect();
    Ok(Witness { pairs })
}

/// Constructive form of the residue-one lemma: z with residue 1 and
/// N(z) = 1 is an n-th power z = w^n with N(w) = 1, hence R-trivial with
/// witness from `nth_power_r_witness`.
pub fn r_trivial_from_residue_one(
    ext: &CyclicKummerLocal,
    z: &ExtElement,
) -> Result<(ExtElement, Witness)> {
    let res = residue_vector(ext, z)?;
    let ok = res[0].is_one() && res[1..].iter().all(|c| c.is_zero());
    if !ok {
        return Err(Error::ResidueNotOne(format!(
            "residue vector {:?}",
            res.iter().map(|c| c.value()).collect::<Vec<_>>()
        )));
    }
    let norm = ext.norm(z)?;
    if !norm.eq_to_precision(&LaurentSeries::one(ext.field, norm.precision().max(1))) {
        return Err(Error::NormNotOne(format!("N(z) = {norm}")));
    }
    let w = ext_nth_root(ext, z)?;
    let witness = nth_power_r_witness(ext, &w)?;
    Ok((w, witness))
}

/// Newton iteration for w with w^n = z, w = 1 + higher order terms.
fn ext_nth_root(ext: &CyclicKummerLocal, z: &ExtElement) -> Result<ExtElement> {
    let prec = z
        .coords
        .iter()
        .filter(|c| !c.is_exact_zero())
        .map(|c| c.precision())
        .max()
        .unwrap_or(crate::laurent::DEFAULT_PRECISION)
        .max(1);
    let n = ext.degree();
    let n_scalar = ext.field.elt(n as i64);
    let mut w = ext.one(prec);
    for _ in 0..64 {
        let err = ext.sub(&ext.pow(&w, n), z);
        if err.is_zero_to_precision() {
            return Ok(w);
        }
        // w <- w - (w^n - z) / (n w^{n-1})
        let deriv = ext.scalar_mul(&n_scalar, &ext.pow(&w, n - 1));
        let delta = ext.div(&err, &deriv)?;
        w = ext.sub(&w, &delta);
    }
    Err(Error::PrecisionExhausted(
        "n-th root iteration did not stabilize".into(),
    ))
}

/// Residue of an integral unit of L in the residue algebra
/// l = kappa[eta]/(eta^g - u), written on the basis 1, eta, ..., eta^{g-1}.
///
/// Here e is the ramification index, g = n/e, and eta = y^e t^{-m/g} for
/// m = v(a); the k-th residue coordinate reads off the coefficient of
/// t^{-k m/g} in the (e k)-th y-coordinate.
pub fn residue_vector(ext: &CyclicKummerLocal, x: &ExtElement) -> Result<Vec<FieldElement>> {
    let n = ext.n as i64;
    let m = ext.a.valuation()?;
    let e = ext.ramification_index()? as i64;
    let g = ext.n as i64 / e;
    let m_over_g = m / g;
    debug_assert_eq!(m % g, 0, "g divides v(a) by construction");
    // integrality: n v(c_i) + i m >= 0 for every known coordinate
    for (i, c) in x.coords.iter().enumerate() {
        let lower = match c.valuation() {
            Ok(v) => v,
            Err(Error::ZeroInput(_)) => continue,
            Err(_) => c.cutoff(),
        };
        if n * lower + (i as i64) * m < 0 {
            return Err(Error::ResidueNotOne(format!(
                "coordinate {i} is not integral (valuation {lower})"
            )));
        }
    }
    let mut out = Vec::with_capacity(g as usize);
    for k in 0..g {
        let idx = (e * k) as usize % ext.n as usize;
        let c = &x.coords[idx];
        let want = -k * m_over_g;
        let coeff = c.coeff(want).ok_or_else(|| {
            Error::PrecisionExhausted(format!("residue coefficient of t^{want} unknown"))
        })?;
        out.push(coeff);
    }
    Ok(out)
}

/// Multiplication in the residue algebra kappa[eta]/(eta^g - u).
fn l_mul(a: &[FieldElement], b: &[FieldElement], u: &FieldElement) -> Vec<FieldElement> {
    let g = a.len();
    let field = a[0].field();
    let mut out = vec![field.zero(); g];
    for i in 0..g {
        for j in 0..g {
            let p = a[i].mul(&b[j]);
            if i + j < g {
                out[i + j] = out[i + j].add(&p);
            } else {
                out[i + j - g] = out[i + j - g].add(&p.mul(u));
            }
        }
    }
    out
}

/// The residue Galois action eta -> rho^e eta.
fn l_tau(a: &[FieldElement], twist: &FieldElement) -> Vec<FieldElement> {
    a.iter()
        .enumerate()
        .map(|(k, c)| c.mul(&twist.pow(k as u64)))
        .collect()
}

fn l_norm(a: &[FieldElement], u: &FieldElement, twist: &FieldElement) -> FieldElement {
    let g = a.len();
    let mut prod = a.to_vec();
    let mut conj = a.to_vec();
    for _ in 1..g {
        conj = l_tau(&conj, twist);
        prod = l_mul(&prod, &conj, u);
    }
    debug_assert!(prod[1..].iter().all(|c| c.is_zero()));
    prod[0]
}

/// Decomposition of a norm-one element as x = rho^j * (R-trivial part),
/// following the residue-norm reduction: peel the rho-power read off the
/// residue norm, solve Hilbert 90 in the residue algebra, lift, and finish
/// with the residue-one lemma.
pub fn r_trivial_decompose(
    ext: &CyclicKummerLocal,
    x: &ExtElement,
    tower: &crate::tower::TowerDescriptor,
) -> Result<(u64, Witness)> {
    check_tower_matches(ext, tower)?;
    let norm = ext.norm(x)?;
    if !norm.eq_to_precision(&LaurentSeries::one(ext.field, norm.precision().max(1))) {
        return Err(Error::NormNotOne(format!("N(x) = {norm}")));
    }
    let n = ext.n;
    let e = ext.ramification_index()?;
    let g = (n / e) as usize;
    let res = residue_vector(ext, x)?;
    let rho_res = ext.rho;
    let u_res = ext.a.leading()?;
    let twist = rho_res.pow(e % n);

    // N_{l/kappa}(res) = rho^{g i} determines i mod e
    let nres = l_norm(&res, &u_res, &twist);
    let target = rho_res.pow(g as u64 % n);
    let mut i_peel = None;
    let mut acc = ext.field.one();
    for i in 0..e {
        if acc == nres {
            i_peel = Some(i);
            break;
        }
        acc = acc.mul(&target);
    }
    let i_peel =
        i_peel.ok_or_else(|| Error::NormNotOne("residue norm is not a power of rho^g".into()))?;

    let rho_inv_i = if i_peel == 0 {
        ext.field.one()
    } else {
        rho_res.pow(n - i_peel % n)
    };
    let x1 = ext.scalar_mul(&rho_inv_i, x);
    let res1: Vec<FieldElement> = res.iter().map(|c| c.mul(&rho_inv_i)).collect();

    let mut pairs = Vec::new();
    let mut z = x1;
    // trivial residue classes need no Hilbert 90 factor
    let res1_is_one = res1[0].is_one() && res1[1..].iter().all(|c| c.is_zero());
    if g > 1 && !res1_is_one {
        // Hilbert 90 in the residue algebra: res1 = c / tau(c)
        let c_bar = hilbert90(&res1, &u_res, &twist)?;
        let c_inv_bar = l_inverse(&c_bar, &u_res, &twist);
        let c_elt = lift_residue(ext, &c_inv_bar)?;
        let ratio = ext.div(&ext.sigma(&c_elt, 1), &c_elt)?;
        z = ext.div(&z, &ratio)?;
        pairs.push(WitnessPair {
            automorphism: 1,
            element: c_elt,
        });
    }
    let (_, tail) = r_trivial_from_residue_one(ext, &z)?;
    pairs.extend(tail.pairs);
    Ok((i_peel, Witness { pairs }))
}

/// Poincare-series solution of Hilbert 90: returns c with tau(c) * x = c,
/// i.e. x = c / tau(c).
fn hilbert90(
    x: &[FieldElement],
    u: &FieldElement,
    twist: &FieldElement,
) -> Result<Vec<FieldElement>> {
    let g = x.len();
    let field = x[0].field();
    let mut candidates: Vec<Vec<FieldElement>> = Vec::new();
    for k in 0..g {
        let mut b = vec![field.zero(); g];
        b[k] = field.one();
        candidates.push(b);
    }
    for k in 1..g {
        let mut b = vec![field.one(); g];
        b[k] = field.elt(2);
        candidates.push(b);
    }
    for b in candidates {
        // c = sum_k (prod_{j<k} tau^j(x)) tau^k(b)
        let mut c = vec![field.zero(); g];
        let mut xk = vec![field.zero(); g];
        xk[0] = field.one();
        let mut tb = b.clone();
        for _k in 0..g {
            let term = l_mul(&xk, &tb, u);
            for (ci, ti) in c.iter_mut().zip(&term) {
                *ci = ci.add(ti);
            }
            xk = l_mul(&xk, &l_tau_iter(x, _k, twist), u);
            tb = l_tau(&tb, twist);
        }
        if !l_norm(&c, u, twist).is_zero() {
            return Ok(c);
        }
    }
    Err(Error::NormNotOne(
        "Hilbert 90 search found no invertible solution".into(),
    ))
}

fn l_tau_iter(x: &[FieldElement], k: usize, twist: &FieldElement) -> Vec<FieldElement> {
    let mut v = x.to_vec();
    for _ in 0..k {
        v = l_tau(&v, twist);
    }
    v
}

fn l_inverse(a: &[FieldElement], u: &FieldElement, twist: &FieldElement) -> Vec<FieldElement> {
    let g = a.len();
    let nrm = l_norm(a, u, twist);
    let ninv = nrm.inverse();
    // cofactor product of the remaining conjugates
    let field = a[0].field();
    let mut cof = vec![field.zero(); g];
    cof[0] = field.one();
    let mut conj = a.to_vec();
    for _ in 1..g {
        conj = l_tau(&conj, twist);
        cof = l_mul(&cof, &conj, u);
    }
    if g == 1 {
        return vec![a[0].inverse()];
    }
    cof.iter().map(|c| c.mul(&ninv)).collect()
}

/// Lifts a residue-algebra element sum gamma_k eta^k back to L by the
/// monomial Teichmueller-style lift eta^k = y^{ek} t^{-k m / g}.
fn lift_residue(ext: &CyclicKummerLocal, c: &[FieldElement]) -> Result<ExtElement> {
    let n = ext.n as usize;
    let m = ext.a.valuation()?;
    let e = ext.ramification_index()? as i64;
    let g = ext.n as i64 / e;
    let m_over_g = m / g;
    let prec = crate::laurent::DEFAULT_PRECISION;
    let mut coords = vec![LaurentSeries::zero(ext.field); n];
    for (k, gamma) in c.iter().enumerate() {
        if gamma.is_zero() {
            continue;
        }
        let idx = (e as usize * k) % n;
        let shift = -(k as i64) * m_over_g;
        let extra = if e as usize * k >= n {
            // y^{ek} = a^{(ek div n)} y^{ek mod n}
            let times = (e as usize * k) / n;
            ext.a.pow(times as i64)?
        } else {
            LaurentSeries::one(ext.field, prec)
        };
        let term = LaurentSeries::monomial(*gamma, shift, prec).mul(&extra);
        coords[idx] = coords[idx].add(&term);
    }
    ext.from_coords(coords)
}

fn check_tower_matches(
    ext: &CyclicKummerLocal,
    tower: &crate::tower::TowerDescriptor,
) -> Result<()> {
    tower.validate()?;
    if tower.ambient_degree() != ext.n {
        return Err(Error::TowerMismatch(format!(
            "tower ambient degree {} != extension degree {}",
            tower.ambient_degree(),
            ext.n
        )));
    }
    match tower.base() {
        crate::tower::BaseKind::Finite { q } => {
            if *q != ext.field.modulus() {
                return Err(Error::TowerMismatch(format!(
                    "tower base F_{q} != extension base F_{}",
                    ext.field.modulus()
                )));
            }
        }
        crate::tower::BaseKind::AlgebraicallyClosed => {
            return Err(Error::TowerMismatch(
                "element arithmetic runs over a finite base".into(),
            ));
        }
    }
    let e = ext.ramification_index()?;
    let g = ext.n / e;
    if tower.total_ramification() != e || tower.total_residue_degree() != g {
        return Err(Error::TowerMismatch(format!(
            "extension has (e, f) = ({e}, {g}), tower describes ({}, {})",
            tower.total_ramification(),
            tower.total_residue_degree()
        )));
    }
    Ok(())
}
