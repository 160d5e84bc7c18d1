//! Monomial classes u * pi1^e1 * pi2^e2 over a two-dimensional complete
//! regular local ring with maximal ideal (pi1, pi2), and the class-level
//! algebra built on them: the n-th power criterion, ramification after
//! adjoining roots of a parameter, Kummer tower decomposition, norm
//! descent, and the rho-class orders at the branch fields of the
//! counterexample configurations.

use crate::error::{Error, Result};
use crate::finite_field::{gcd, nth_power_test, unit_class, FieldElement, PrimeField};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub use crate::poly::rational_point_residue;

/// u * pi1^e1 * pi2^e2 with u a nonzero residue unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialClass {
    pub unit: FieldElement,
    pub e1: i64,
    pub e2: i64,
}

impl MonomialClass {
    pub fn new(unit: FieldElement, e1: i64, e2: i64) -> Result<Self> {
        if unit.is_zero() {
            return Err(Error::ZeroInput("monomial unit"));
        }
        Ok(MonomialClass { unit, e1, e2 })
    }

    pub fn mul(&self, rhs: &MonomialClass) -> MonomialClass {
        MonomialClass {
            unit: self.unit.mul(&rhs.unit),
            e1: self.e1 + rhs.e1,
            e2: self.e2 + rhs.e2,
        }
    }

    pub fn inverse(&self) -> MonomialClass {
        MonomialClass {
            unit: self.unit.inverse(),
            e1: -self.e1,
            e2: -self.e2,
        }
    }

    pub fn pow(&self, k: i64) -> MonomialClass {
        let unit = if k >= 0 {
            self.unit.pow(k as u64)
        } else {
            self.unit.inverse().pow((-k) as u64)
        };
        MonomialClass {
            unit,
            e1: self.e1 * k,
            e2: self.e2 * k,
        }
    }

    /// Class vector (e1, e2, unit class) in (Z/n)^3.
    pub fn class_vector(&self, n: u64) -> Result<ClassVector> {
        Ok(ClassVector {
            e1: self.e1.rem_euclid(n as i64) as u64,
            e2: self.e2.rem_euclid(n as i64) as u64,
            unit_class: unit_class(&self.unit, n)?,
        })
    }

    /// Parses the literal grammar `u:<int> e1:<int> e2:<int>`.
    pub fn parse(literal: &str, field: PrimeField) -> Result<Self> {
        let mut unit = None;
        let mut e1 = None;
        let mut e2 = None;
        for part in literal.split_whitespace() {
            let (key, value) = part
                .split_once(':')
                .ok_or_else(|| Error::ParseError(format!("expected key:value, found {part:?}")))?;
            let v: i64 = value
                .parse()
                .map_err(|_| Error::ParseError(format!("bad integer {value:?}")))?;
            match key {
                "u" => unit = Some(field.elt(v)),
                "e1" => e1 = Some(v),
                "e2" => e2 = Some(v),
                other => {
                    return Err(Error::ParseError(format!("unknown key {other:?}")));
                }
            }
        }
        let unit = unit.ok_or_else(|| Error::ParseError("missing u:".into()))?;
        MonomialClass::new(unit, e1.unwrap_or(0), e2.unwrap_or(0))
    }
}

impl std::fmt::Display for MonomialClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "u:{} e1:{} e2:{}", self.unit, self.e1, self.e2)
    }
}

/// An element of (Z/n)^3 recording (e1, e2, unit class).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassVector {
    pub e1: u64,
    pub e2: u64,
    pub unit_class: u64,
}

impl ClassVector {
    pub fn zero() -> Self {
        ClassVector {
            e1: 0,
            e2: 0,
            unit_class: 0,
        }
    }

    pub fn add(&self, rhs: &ClassVector, n: u64) -> ClassVector {
        ClassVector {
            e1: (self.e1 + rhs.e1) % n,
            e2: (self.e2 + rhs.e2) % n,
            unit_class: (self.unit_class + rhs.unit_class) % n,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.e1 == 0 && self.e2 == 0 && self.unit_class == 0
    }

    /// Order in (Z/n)^3.
    pub fn order(&self, n: u64) -> u64 {
        let g = gcd(gcd(gcd(n, self.e1), self.e2), self.unit_class);
        n / g
    }
}

/// Additive closure of the generators in (Z/n)^3.
pub fn span(gens: &[ClassVector], n: u64) -> BTreeSet<ClassVector> {
    let mut set = BTreeSet::new();
    set.insert(ClassVector::zero());
    let mut frontier = vec![ClassVector::zero()];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w = v.add(g, n);
            if set.insert(w) {
                frontier.push(w);
            }
        }
    }
    set
}

/// True iff x is an n-th power: n | e1, n | e2, and the unit is an n-th
/// power in the residue field.
pub fn is_nth_power_monomial(x: &MonomialClass, n: u64) -> Result<bool> {
    let unit_ok = nth_power_test(&x.unit, n)?;
    Ok(x.e1.rem_euclid(n as i64) == 0 && x.e2.rem_euclid(n as i64) == 0 && unit_ok)
}

/// Ramification index after adjoining an ell-th root of a parameter:
/// e / ell when ell divides e, otherwise e.
pub fn ramification_after_root(e: u64, ell: u64) -> u64 {
    if ell != 0 && e.is_multiple_of(ell) {
        e / ell
    } else {
        e
    }
}

/// L = F(nth roots of the generator classes), Galois with group (Z/n)^r
/// when the generators are independent modulo n-th powers.
#[derive(Debug, Clone)]
pub struct MonomialKummer {
    field: PrimeField,
    gens: Vec<MonomialClass>,
    n: u64,
}

impl MonomialKummer {
    pub fn new(field: PrimeField, gens: Vec<MonomialClass>, n: u64) -> Result<Self> {
        let q = field.modulus();
        if n == 0 || !(q - 1).is_multiple_of(n) {
            return Err(Error::IncompatibleModulus(format!(
                "n = {n} does not divide q - 1 = {}",
                q - 1
            )));
        }
        let vectors: Vec<ClassVector> = gens
            .iter()
            .map(|g| g.class_vector(n))
            .collect::<Result<_>>()?;
        let s = span(&vectors, n);
        let expected = (n as u128).pow(gens.len() as u32);
        if s.len() as u128 != expected {
            return Err(Error::DependentGenerators(format!(
                "span has order {}, expected n^{} = {expected}",
                s.len(),
                gens.len()
            )));
        }
        Ok(MonomialKummer { field, gens, n })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree_exponent(&self) -> u64 {
        self.n
    }

    pub fn gens(&self) -> &[MonomialClass] {
        &self.gens
    }

    pub fn class_vectors(&self) -> Vec<ClassVector> {
        self.gens
            .iter()
            .map(|g| g.class_vector(self.n).expect("validated at construction"))
            .collect()
    }

    pub fn class_span(&self) -> BTreeSet<ClassVector> {
        span(&self.class_vectors(), self.n)
    }
}

/// The tower F <= L1 <= L2 <= L of the decomposition theorem. Radicands
/// are stored as ambient n-class vectors; units that genuinely live in an
/// intermediate residue field appear through their class only, so
/// `radicand_as_monomial` returns None for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerTower {
    /// Unit-only generators of the unramified part L1.
    pub l1_gens: Vec<MonomialClass>,
    /// [L2 : L1], ramified at pi1.
    pub d1: u64,
    /// Ambient class of the L2 radicand (e1 of order d1, e2 = 0).
    pub l2_radicand: Option<ClassVector>,
    /// [L : L2], ramified at pi2.
    pub d2: u64,
    /// The exponent i of the theorem, reduced mod d2.
    pub i_exp: u64,
    /// Ambient class of the top radicand (e2 of order d2).
    pub l3_radicand: Option<ClassVector>,
}

impl KummerTower {
    /// Degree of the unramified part L1.
    pub fn l1_degree(&self, n: u64) -> u64 {
        span(
            &self
                .l1_gens
                .iter()
                .map(|g| g.class_vector(n).expect("unit class"))
                .collect::<Vec<_>>(),
            n,
        )
        .len() as u64
    }

    /// The paper-shaped monomial radicand u * pi1 when the unit part is
    /// expressible over the residue field kappa.
    pub fn radicand_as_monomial(
        &self,
        field: &PrimeField,
        n: u64,
        which: &ClassVector,
        degree: u64,
    ) -> Option<MonomialClass> {
        let scale = n / degree;
        if !which.unit_class.is_multiple_of(scale)
            || !which.e1.is_multiple_of(scale)
            || !which.e2.is_multiple_of(scale)
        {
            return None;
        }
        let g = field.canonical_generator();
        Some(MonomialClass {
            unit: g.pow(which.unit_class / scale),
            e1: (which.e1 / scale) as i64,
            e2: (which.e2 / scale) as i64,
        })
    }

    /// Class vectors of all tower data, for reconstruction checks.
    pub fn tower_class_vectors(&self, n: u64) -> Vec<ClassVector> {
        let mut out: Vec<ClassVector> = self
            .l1_gens
            .iter()
            .map(|g| g.class_vector(n).expect("unit class"))
            .collect();
        if let Some(v) = self.l2_radicand {
            out.push(v);
        }
        if let Some(v) = self.l3_radicand {
            out.push(v);
        }
        out
    }
}

fn subgroup_gcd(n: u64, values: impl Iterator<Item = u64>) -> u64 {
    let mut g = n;
    for v in values {
        g = gcd(g, v);
    }
    g
}

/// Decomposes a monomial Kummer extension into the unramified part and
/// two ramified root adjunctions, by linear algebra on the generator
/// exponent lattice: d2 is the pi2-inertia read off the second exponent
/// column, L2 corresponds to the classes unramified at pi2, d1 is the
/// pi1-inertia of that subgroup, and L1 to the unit-only classes.
pub fn kummer_decompose(k: &MonomialKummer) -> Result<KummerTower> {
    let n = k.n;
    let field = k.field;
    let s = k.class_span();

    let g2 = subgroup_gcd(n, s.iter().map(|v| v.e2));
    let d2 = n / g2;
    let s2: Vec<ClassVector> = s.iter().filter(|v| v.e2 == 0).copied().collect();
    let g1 = subgroup_gcd(n, s2.iter().map(|v| v.e1));
    let d1 = n / g1;
    let s_unr: Vec<ClassVector> = s2.iter().filter(|v| v.e1 == 0).copied().collect();

    // unit-only part is a cyclic subgroup of kappa*/kappa*^n
    let cu = subgroup_gcd(n, s_unr.iter().map(|v| v.unit_class));
    let gamma = field.canonical_generator();
    let l1_gens = if cu < n {
        vec![MonomialClass {
            unit: gamma.pow(cu),
            e1: 0,
            e2: 0,
        }]
    } else {
        Vec::new()
    };

    let l2_radicand = if d1 == 1 {
        None
    } else {
        // canonical choice: e1 exactly n/d1, minimal unit class
        s2.iter()
            .filter(|v| v.e1 == g1)
            .min_by_key(|v| v.unit_class)
            .copied()
    };
    if d1 > 1 && l2_radicand.is_none() {
        return Err(Error::DependentGenerators(
            "no pi1-pure class of the expected order".into(),
        ));
    }

    let (l3_radicand, i_exp) = if d2 == 1 {
        (None, 0)
    } else {
        let t = s
            .iter()
            .filter(|v| v.e2 == g2)
            .min_by_key(|v| (v.e1, v.unit_class))
            .copied()
            .ok_or_else(|| {
                Error::DependentGenerators("no pi2-class of the expected order".into())
            })?;
        // i of the theorem: the pi1-part of the top radicand measured in
        // powers of the L2 root; integral by the tower structure
        let num = t.e1 as u128 * d1 as u128 * d2 as u128;
        debug_assert_eq!(num % n as u128, 0, "i_exp not integral");
        let i = ((num / n as u128) % d2 as u128) as u64;
        (Some(t), i)
    };

    let tower = KummerTower {
        l1_gens,
        d1,
        l2_radicand,
        d2,
        i_exp,
        l3_radicand,
    };

    // degree product and span reconstruction are structural invariants
    let l1_deg = tower.l1_degree(n);
    debug_assert_eq!(
        l1_deg * d1 * d2,
        (n as u128).pow(k.gens.len() as u32) as u64,
        "tower degrees do not multiply to the extension degree"
    );
    debug_assert_eq!(
        span(&tower.tower_class_vectors(n), n),
        s,
        "tower does not regenerate the radicand classes"
    );

    Ok(tower)
}

/// A witness that lambda is a norm: lambda equals the product of the norms
/// of the generator-root powers, a residue-field unit norm (recorded by
/// its class), and an explicit n-th power.
#[derive(Debug, Clone)]
pub struct NormWitness {
    /// theta = prod y_g^{k_g}: the exponents k_g.
    pub theta_exponents: Vec<u64>,
    /// Exact monomial norms N(y_g) of the generator roots.
    pub theta_norms: Vec<MonomialClass>,
    /// Residue-norm class c: the unit-norm factor gamma^{e_tot * c}.
    pub unit_norm_class: u64,
    /// Total ramification e_tot of the extension.
    pub unit_norm_scale: u64,
    /// The final n-th power certificate: its n-th power closes the product.
    pub nth_power_root: MonomialClass,
}

impl NormWitness {
    /// Recomposes the trail and checks it equals lambda exactly.
    pub fn verify(&self, k: &MonomialKummer, lambda: &MonomialClass) -> bool {
        let n = k.degree_exponent() as i64;
        let gamma = k.field().canonical_generator();
        let mut acc = MonomialClass {
            unit: gamma.pow(self.unit_norm_scale * self.unit_norm_class),
            e1: 0,
            e2: 0,
        };
        for (t, &e) in self.theta_norms.iter().zip(&self.theta_exponents) {
            acc = acc.mul(&t.pow(e as i64));
        }
        acc = acc.mul(&self.nth_power_root.pow(n));
        acc == *lambda
    }
}

#[derive(Debug, Clone)]
pub struct NormDescent {
    pub is_norm: bool,
    pub witness: Option<NormWitness>,
}

/// Exact monomial norm of the generator root y_g: N(y_g) = eps * g^{n^(r-1)}
/// with eps = -1 exactly when r = 1 and n is even.
fn generator_root_norm(g: &MonomialClass, n: u64, r: usize, field: &PrimeField) -> MonomialClass {
    let power = (n as i64).pow((r - 1) as u32);
    let mut out = g.pow(power);
    if r == 1 && n.is_multiple_of(2) {
        out.unit = out.unit.mul(&field.elt(-1));
    }
    out
}

/// Decides whether the monomial lambda is a norm from L/F, by membership
/// of its class in the subgroup generated by the norms of the generator
/// roots and the residue-field unit norms; on success attaches a monomial
/// witness trail.
pub fn norm_descent_2dim(k: &MonomialKummer, lambda: &MonomialClass) -> Result<NormDescent> {
    let n = k.degree_exponent();
    let field = k.field();
    let r = k.gens().len();
    let lambda_class = lambda.class_vector(n)?;

    if r == 0 {
        // L = F: everything is a norm of itself
        return Ok(NormDescent {
            is_norm: true,
            witness: Some(NormWitness {
                theta_exponents: vec![],
                theta_norms: vec![],
                unit_norm_class: 0,
                unit_norm_scale: 0,
                nth_power_root: MonomialClass {
                    unit: field.one(),
                    e1: 0,
                    e2: 0,
                },
            }),
        });
    }

    let theta_norms: Vec<MonomialClass> = k
        .gens()
        .iter()
        .map(|g| generator_root_norm(g, n, r, &field))
        .collect();
    let norm_classes: Vec<ClassVector> = theta_norms
        .iter()
        .map(|t| t.class_vector(n))
        .collect::<Result<_>>()?;

    // residue degree of the extension and total ramification
    let s = k.class_span();
    let f1 = s.iter().filter(|v| v.e1 == 0 && v.e2 == 0).count() as u64;
    let deg = (n as u128).pow(r as u32) as u64;
    let e_tot = deg / f1;
    let unit_norm_gen = ClassVector {
        e1: 0,
        e2: 0,
        unit_class: e_tot % n,
    };

    let mut gens = norm_classes.clone();
    gens.push(unit_norm_gen);
    let norm_subgroup = span(&gens, n);
    if !norm_subgroup.contains(&lambda_class) {
        return Ok(NormDescent {
            is_norm: false,
            witness: None,
        });
    }

    // witness search: lambda_class = sum k_g N(y_g)-class + e_tot * c
    let mut exponents = vec![0u64; r];
    loop {
        for c in 0..n {
            let mut acc = ClassVector {
                e1: 0,
                e2: 0,
                unit_class: (e_tot % n) * c % n,
            };
            for (i, &e) in exponents.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.add(&norm_classes[i], n);
                }
            }
            if acc == lambda_class {
                // residual is an exact n-th power monomial
                let mut residual = *lambda;
                for (t, &e) in theta_norms.iter().zip(&exponents) {
                    residual = residual.mul(&t.pow(e as i64).inverse());
                }
                let gamma = field.canonical_generator();
                residual = residual.mul(
                    &MonomialClass {
                        unit: gamma.pow(e_tot % n * c),
                        e1: 0,
                        e2: 0,
                    }
                    .inverse(),
                );
                let root = exact_nth_root(&residual, n, &field)?;
                let witness = NormWitness {
                    theta_exponents: exponents.clone(),
                    theta_norms: theta_norms.clone(),
                    unit_norm_class: c,
                    unit_norm_scale: e_tot % n,
                    nth_power_root: root,
                };
                debug_assert!(witness.verify(k, lambda));
                return Ok(NormDescent {
                    is_norm: true,
                    witness: Some(witness),
                });
            }
        }
        // next exponent tuple
        let mut idx = 0;
        loop {
            if idx == r {
                return Err(Error::DependentGenerators(
                    "class membership held but no witness was found".into(),
                ));
            }
            exponents[idx] += 1;
            if exponents[idx] < n {
                break;
            }
            exponents[idx] = 0;
            idx += 1;
        }
    }
}

fn exact_nth_root(x: &MonomialClass, n: u64, field: &PrimeField) -> Result<MonomialClass> {
    if x.e1.rem_euclid(n as i64) != 0 || x.e2.rem_euclid(n as i64) != 0 {
        return Err(Error::DependentGenerators(format!(
            "residual {x} is not an n-th power"
        )));
    }
    let gamma = field.canonical_generator();
    let mut dlog = 0u64;
    let mut acc = field.one();
    while acc != x.unit {
        acc = acc.mul(&gamma);
        dlog += 1;
        if dlog >= field.modulus() {
            return Err(Error::ZeroInput("unit has no discrete log"));
        }
    }
    if !dlog.is_multiple_of(n) {
        return Err(Error::DependentGenerators(format!(
            "residual unit {} is not an n-th power",
            x.unit
        )));
    }
    Ok(MonomialClass {
        unit: gamma.pow(dlog / n),
        e1: x.e1 / n as i64,
        e2: x.e2 / n as i64,
    })
}

/// Shape of a branch extension for the rho-order table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchShape {
    /// A radicand of the form v * pi with pi the branch uniformizer.
    pub uniformizer_radicand: bool,
    /// An independent unit radicand generating a degree-n residue extension.
    pub independent_unit_radicand: bool,
}

/// The symbolic witness rho^n = tau(u^(1/n)) / u^(1/n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoPowerWitness {
    pub rho_exponent: u64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRhoOrder {
    pub order: u64,
    pub rho_power_witness: Option<RhoPowerWitness>,
}

/// Order of the class of the primitive n^2-th root of unity rho in
/// T(L (x) F_b / F_b)/RT for the supported branch shapes: n when both a
/// uniformizer radicand and an independent unit radicand are present, 1
/// for unit-only cyclic shapes over a finite residue field and for the
/// trivial extension. Other shapes are rejected rather than guessed.
pub fn rho_order_in_branch(shape: &BranchShape, n: u64) -> Result<BranchRhoOrder> {
    if n == 0 {
        return Err(Error::IncompatibleModulus("n must be positive".into()));
    }
    match (shape.uniformizer_radicand, shape.independent_unit_radicand) {
        (true, true) => Ok(BranchRhoOrder {
            order: n,
            rho_power_witness: Some(RhoPowerWitness {
                rho_exponent: n,
                description: format!(
                    "rho^{n} = tau(u^(1/{n})) / u^(1/{n}) with tau the automorphism moving the unit root"
                ),
            }),
        }),
        (false, true) => Ok(BranchRhoOrder {
            order: 1,
            rho_power_witness: None,
        }),
        (false, false) => Ok(BranchRhoOrder {
            order: 1,
            rho_power_witness: None,
        }),
        (true, false) => Err(Error::UnsupportedShape(
            "uniformizer radicand without an independent unit radicand".into(),
        )),
    }
}

/// Derives the branch shape from the local classes of the radicands at a
/// branch, written in coordinates (branch uniformizer, residue parameter,
/// unit class).
pub fn branch_shape_from_classes(classes: &[ClassVector], n: u64) -> Result<BranchShape> {
    let s = span(classes, n);
    let g1 = subgroup_gcd(n, s.iter().map(|v| v.e1));
    let uniformizer = g1 == 1;
    let unramified: Vec<&ClassVector> = s.iter().filter(|v| v.e1 == 0).collect();
    let independent_unit = unramified.iter().any(|v| v.order(n) == n);
    let size = s.len() as u64;
    let shape = BranchShape {
        uniformizer_radicand: uniformizer,
        independent_unit_radicand: independent_unit,
    };
    let expected = match (uniformizer, independent_unit) {
        (true, true) => n * n,
        (true, false) | (false, true) => n,
        (false, false) => 1,
    };
    if size != expected {
        return Err(Error::UnsupportedShape(format!(
            "branch class group has order {size}, expected {expected}"
        )));
    }
    Ok(shape)
}
