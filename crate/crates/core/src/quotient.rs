//! Presented graded quotient rings A = P/J, viewed as local rings at the
//! irrelevant maximal ideal.
//!
//! In the homogeneous regime the graded colength of an m-primary ideal
//! equals its length after localization at m, so every length here is
//! evaluated on the staircase of the preimage ideal in P.

use crate::error::{Error, Result};
use crate::ideal::{FreeIdeal, SATURATION_CAP};
use crate::poly::{PolyRing, Polynomial};
use std::sync::Arc;

#[derive(Debug)]
struct QuotientRepr {
    ambient: PolyRing,
    defining: FreeIdeal,
    dim: usize,
}

/// A = P/J with J homogeneous and dim A > 0.
#[derive(Clone, Debug)]
pub struct QuotientRing(Arc<QuotientRepr>);

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ambient == other.0.ambient && self.0.defining.equals(&other.0.defining))
    }
}

impl QuotientRing {
    pub fn new(ambient: PolyRing, defining: FreeIdeal) -> Result<QuotientRing> {
        if !defining.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let dim = defining.krull_dimension();
        if dim <= 0 {
            return Err(Error::ZeroDimensionalRing);
        }
        Ok(QuotientRing(Arc::new(QuotientRepr {
            ambient,
            defining,
            dim: dim as usize,
        })))
    }

    /// The free ring itself, A = P.
    pub fn free(ambient: PolyRing) -> Result<QuotientRing> {
        let zero = FreeIdeal::zero(&ambient);
        QuotientRing::new(ambient, zero)
    }

    pub fn ambient(&self) -> &PolyRing {
        &self.0.ambient
    }

    pub fn defining(&self) -> &FreeIdeal {
        &self.0.defining
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Preimage of the irrelevant maximal ideal m = (x_1, ..., x_n).
    pub fn maximal_ideal(&self) -> IdealHandle {
        self.ideal(FreeIdeal::maximal(&self.0.ambient))
    }

    pub fn ideal(&self, preimage: FreeIdeal) -> IdealHandle {
        IdealHandle {
            ring: self.clone(),
            preimage,
        }
    }

    pub fn ideal_from_gens(&self, gens: Vec<Polynomial>) -> IdealHandle {
        self.ideal(FreeIdeal::new(&self.0.ambient, gens))
    }

    /// The ring A/(extra), with `extra` homogeneous.
    pub fn quotient_by(&self, extra: &[Polynomial]) -> Result<QuotientRing> {
        let j = self
            .0
            .defining
            .sum(&FreeIdeal::new(&self.0.ambient, extra.to_vec()));
        QuotientRing::new(self.0.ambient.clone(), j)
    }

    /// ℓ_A(A/I) for m-primary I.
    pub fn length(&self, ideal: &IdealHandle) -> Result<usize> {
        let total = ideal.with_defining();
        if !total.is_zero_dimensional() {
            return Err(Error::NotMPrimary);
        }
        total.artinian_length()
    }

    /// ℓ(U) and U itself, where U = H^0_m(A) = (J : m^∞)/J.
    pub fn h0_length(&self) -> Result<(usize, IdealHandle)> {
        let m = FreeIdeal::maximal(&self.0.ambient);
        let (sat, _) = self.0.defining.saturation(&m, SATURATION_CAP)?;
        let len = graded_module_length(&sat, &self.0.defining)?;
        Ok((len, self.ideal(sat)))
    }

    /// True iff `gens` has dim(A) elements generating an m-primary ideal.
    pub fn is_parameter_ideal(&self, gens: &[Polynomial]) -> bool {
        if gens.len() != self.0.dim {
            return false;
        }
        let total = self
            .0
            .defining
            .sum(&FreeIdeal::new(&self.0.ambient, gens.to_vec()));
        total.is_zero_dimensional()
    }

    /// μ(I) = dim_k I/mI.
    pub fn minimal_generator_count(&self, ideal: &IdealHandle) -> Result<usize> {
        let m = FreeIdeal::maximal(&self.0.ambient);
        for g in ideal.preimage.gens() {
            if !self.0.defining.sum(&m).contains(g) {
                return Err(Error::NotInMaximalIdeal);
            }
        }
        let big = ideal.with_defining();
        let small = ideal.preimage.product(&m).sum(&self.0.defining);
        self.module_length(&big, &small)
    }

    /// ℓ((big + J)/(small + J)) for small ⊆ big, finite quotient. Uses the
    /// Artinian staircase difference when both are zero-dimensional, and a
    /// degreewise dimension count otherwise (homogeneous inputs required in
    /// that case).
    pub fn module_length(&self, big: &FreeIdeal, small: &FreeIdeal) -> Result<usize> {
        let big = big.sum(&self.0.defining);
        let small = small.sum(&self.0.defining);
        if big.is_zero_dimensional() && small.is_zero_dimensional() {
            let lb = big.artinian_length()?;
            let ls = small.artinian_length()?;
            return Ok(ls - lb);
        }
        graded_module_length(&big, &small)
    }
}

/// ℓ(big/small) by degreewise dimension differences, for homogeneous
/// small ⊆ big with finite-length quotient. The scan stops after the
/// difference has vanished on a run of degrees past every generator degree.
pub fn graded_module_length(big: &FreeIdeal, small: &FreeIdeal) -> Result<usize> {
    if !big.is_homogeneous() || !small.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let start_tail = big
        .max_gen_degree()
        .max(small.max_gen_degree())
        .max(big.gb().generators().iter().filter_map(|g| g.total_degree()).max().unwrap_or(0))
        .max(small.gb().generators().iter().filter_map(|g| g.total_degree()).max().unwrap_or(0));
    let mut total = 0usize;
    let mut zero_run = 0usize;
    let cap = 200u32;
    for deg in 0..cap {
        // dim [big]_deg - dim [small]_deg = std(small, deg) - std(big, deg)
        let d = small.std_count_in_degree(deg) as i64 - big.std_count_in_degree(deg) as i64;
        if d < 0 {
            return Err(Error::Consistency(
                "graded piece of the smaller ideal exceeds the bigger one".into(),
            ));
        }
        total += d as usize;
        if d == 0 && deg >= start_tail {
            zero_run += 1;
            if zero_run >= 3 {
                return Ok(total);
            }
        } else {
            zero_run = 0;
        }
    }
    Err(Error::HorizonExceeded("graded length scan", cap as usize))
}

/// An ideal of A, carried by polynomial generators in the ambient ring.
/// The defining ideal J is adjoined by every operation, never stored.
#[derive(Clone, Debug)]
pub struct IdealHandle {
    ring: QuotientRing,
    preimage: FreeIdeal,
}

impl IdealHandle {
    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn preimage(&self) -> &FreeIdeal {
        &self.preimage
    }

    /// preimage + J, the full preimage in P.
    pub fn with_defining(&self) -> FreeIdeal {
        self.preimage.sum(self.ring.defining())
    }

    pub fn equals(&self, other: &IdealHandle) -> bool {
        self.with_defining().equals(&other.with_defining())
    }

    pub fn product(&self, other: &IdealHandle) -> IdealHandle {
        self.ring.ideal(self.preimage.product(&other.preimage))
    }

    pub fn sum(&self, other: &IdealHandle) -> IdealHandle {
        self.ring.ideal(self.preimage.sum(&other.preimage))
    }

    pub fn pow(&self, n: usize) -> IdealHandle {
        self.ring.ideal(self.preimage.pow(n))
    }

    pub fn is_zero_in_ring(&self) -> bool {
        self.preimage
            .gens()
            .iter()
            .all(|g| self.ring.defining().contains(g))
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.with_defining().contains(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::parse_polynomial;

    fn poly(r: &PolyRing, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    fn xx_xy_ring() -> QuotientRing {
        let r = PolyRing::new(32003, &["x", "y"]).unwrap();
        let j = FreeIdeal::new(&r, vec![poly(&r, "x^2"), poly(&r, "x*y")]);
        QuotientRing::new(r, j).unwrap()
    }

    fn two_planes_ring() -> QuotientRing {
        let r = PolyRing::new(32003, &["x", "y", "z", "w"]).unwrap();
        let j = FreeIdeal::new(
            &r,
            vec![poly(&r, "x*z"), poly(&r, "x*w"), poly(&r, "y*z"), poly(&r, "y*w")],
        );
        QuotientRing::new(r, j).unwrap()
    }

    #[test]
    fn length_examples() {
        let a = xx_xy_ring();
        let r = a.ambient().clone();
        assert_eq!(a.length(&a.ideal_from_gens(vec![poly(&r, "y")])).unwrap(), 2);

        let free = QuotientRing::free(PolyRing::new(32003, &["x", "y"]).unwrap()).unwrap();
        let rf = free.ambient().clone();
        assert_eq!(free.length(&free.maximal_ideal()).unwrap(), 1);
        drop(rf);

        let p = two_planes_ring();
        let rp = p.ambient().clone();
        let q = p.ideal_from_gens(vec![poly(&rp, "x+z"), poly(&rp, "y+w")]);
        assert_eq!(p.length(&q).unwrap(), 3);
    }

    #[test]
    fn non_primary_length_rejected() {
        let a = xx_xy_ring();
        let r = a.ambient().clone();
        assert!(a.length(&a.ideal_from_gens(vec![poly(&r, "x")])).is_err());
    }

    #[test]
    fn h0_examples() {
        let a = xx_xy_ring();
        let r = a.ambient().clone();
        let (len, u) = a.h0_length().unwrap();
        assert_eq!(len, 1);
        assert!(u.equals(&a.ideal_from_gens(vec![poly(&r, "x")])));

        let free = QuotientRing::free(PolyRing::new(32003, &["x", "y"]).unwrap()).unwrap();
        assert_eq!(free.h0_length().unwrap().0, 0);

        let p = two_planes_ring();
        assert_eq!(p.h0_length().unwrap().0, 0);
    }

    #[test]
    fn parameter_ideal_examples() {
        let free = QuotientRing::free(PolyRing::new(32003, &["x", "y"]).unwrap()).unwrap();
        let rf = free.ambient().clone();
        assert!(free.is_parameter_ideal(&[poly(&rf, "x"), poly(&rf, "y")]));
        assert!(!free.is_parameter_ideal(&[poly(&rf, "x")]));

        let a = xx_xy_ring();
        let r = a.ambient().clone();
        assert_eq!(a.dim(), 1);
        assert!(a.is_parameter_ideal(&[poly(&r, "y")]));
        assert!(!a.is_parameter_ideal(&[poly(&r, "x")]));
    }

    #[test]
    fn minimal_generators_examples() {
        let p = two_planes_ring();
        assert_eq!(p.minimal_generator_count(&p.maximal_ideal()).unwrap(), 4);

        let free = QuotientRing::free(PolyRing::new(32003, &["x", "y"]).unwrap()).unwrap();
        let m2 = free.maximal_ideal().pow(2);
        assert_eq!(free.minimal_generator_count(&m2).unwrap(), 3);

        let a = xx_xy_ring();
        let r = a.ambient().clone();
        let y = a.ideal_from_gens(vec![poly(&r, "y")]);
        assert_eq!(a.minimal_generator_count(&y).unwrap(), 1);
    }

    #[test]
    fn inhomogeneous_defining_rejected() {
        let r = PolyRing::new(32003, &["x", "y"]).unwrap();
        let j = FreeIdeal::new(&r, vec![poly(&r, "x^2 - y")]);
        assert!(QuotientRing::new(r, j).is_err());
    }
}
