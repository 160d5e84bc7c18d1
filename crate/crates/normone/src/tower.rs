//! Residue-tower bookkeeping for iterated complete discretely valued
//! fields and the recursive quotient order of the rho class.

use crate::error::{Error, Result};
use crate::finite_field::PrimeField;
use serde::{Deserialize, Serialize};

/// Ultimate residue field of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseKind {
    Finite { q: u64 },
    AlgebraicallyClosed,
}

/// Describes the etale algebra L (x) F_xi over F_xi through its field part,
/// presented as a chain of extension steps listed base-upward: each level
/// carries a ramification index e and a residue degree f. The ambient
/// degree n is the degree of the full etale algebra; the field part has
/// degree prod e_i f_i and the algebra is n / (prod e_i f_i) copies of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    base: BaseKind,
    levels: Vec<(u64, u64)>,
    n: u64,
}

impl TowerDescriptor {
    pub fn new(base: BaseKind, levels: Vec<(u64, u64)>, n: u64) -> Result<Self> {
        let t = TowerDescriptor { base, levels, n };
        t.validate()?;
        Ok(t)
    }

    pub fn base(&self) -> &BaseKind {
        &self.base
    }

    pub fn levels(&self) -> &[(u64, u64)] {
        &self.levels
    }

    pub fn ambient_degree(&self) -> u64 {
        self.n
    }

    pub fn total_ramification(&self) -> u64 {
        self.levels.iter().map(|&(e, _)| e).product()
    }

    pub fn total_residue_degree(&self) -> u64 {
        self.levels.iter().map(|&(_, f)| f).product()
    }

    /// Degree of the field part of the algebra.
    pub fn field_degree(&self) -> u64 {
        self.total_ramification() * self.total_residue_degree()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::TowerMismatch(
                "ambient degree must be positive".into(),
            ));
        }
        for &(e, f) in &self.levels {
            if e == 0 || f == 0 {
                return Err(Error::TowerMismatch(
                    "level indices must be positive".into(),
                ));
            }
            if !self.n.is_multiple_of(e * f) {
                return Err(Error::TowerMismatch(format!(
                    "level ({e}, {f}) does not divide the ambient degree {}",
                    self.n
                )));
            }
        }
        let d = self.field_degree();
        if !self.n.is_multiple_of(d) {
            return Err(Error::TowerMismatch(format!(
                "field degree {d} does not divide the ambient degree {}",
                self.n
            )));
        }
        match self.base {
            BaseKind::Finite { q } => {
                PrimeField::new(q)?;
                if (q - 1) % self.n != 0 {
                    return Err(Error::TowerMismatch(format!(
                        "finite base needs q = 1 mod n, got q = {q}, n = {}",
                        self.n
                    )));
                }
            }
            BaseKind::AlgebraicallyClosed => {
                if self.levels.iter().any(|&(_, f)| f > 1) {
                    return Err(Error::TowerMismatch(
                        "an algebraically closed residue field has no residue extensions".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Order of the class of rho in T(L (x) F_xi / F_xi)(F_xi) / RT, in the
/// normal form produced by the residue-norm reduction: unramified steps
/// collapse (Hilbert 90 at the finite or algebraically closed base) and
/// every ramified step of index e contributes a factor e.
pub fn torus_quotient_order(tower: &TowerDescriptor) -> Result<u64> {
    tower.validate()?;
    Ok(tower.total_ramification())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_tower_is_trivial() {
        let t = TowerDescriptor::new(BaseKind::Finite { q: 5 }, vec![], 4).unwrap();
        assert_eq!(torus_quotient_order(&t).unwrap(), 1);
    }

    #[test]
    fn unramified_cyclic_level_collapses() {
        let t = TowerDescriptor::new(BaseKind::Finite { q: 5 }, vec![(1, 4)], 4).unwrap();
        assert_eq!(torus_quotient_order(&t).unwrap(), 1);
    }

    #[test]
    fn unramified_then_ramified_contributes_n() {
        // L = F(u^{1/n}, pi^{1/n}) with rho of order n^2: the class of rho
        // has order n
        for n in [2u64, 3] {
            let q = match n {
                2 => 5,
                3 => 19,
                _ => unreachable!(),
            };
            let t =
                TowerDescriptor::new(BaseKind::Finite { q }, vec![(1, n), (n, 1)], n * n).unwrap();
            assert_eq!(torus_quotient_order(&t).unwrap(), n);
        }
    }

    #[test]
    fn validation_rejects_bad_towers() {
        assert!(TowerDescriptor::new(BaseKind::Finite { q: 5 }, vec![(3, 1)], 4).is_err());
        assert!(TowerDescriptor::new(BaseKind::Finite { q: 7 }, vec![(2, 1)], 4).is_err());
        assert!(TowerDescriptor::new(BaseKind::AlgebraicallyClosed, vec![(1, 2)], 4).is_err());
        assert!(TowerDescriptor::new(BaseKind::Finite { q: 5 }, vec![(2, 2)], 8).is_err());
    }

    #[test]
    fn algebraically_closed_ramified_tower() {
        let t =
            TowerDescriptor::new(BaseKind::AlgebraicallyClosed, vec![(2, 1), (2, 1)], 4).unwrap();
        assert_eq!(torus_quotient_order(&t).unwrap(), 4);
    }
}
