//! Ideals of the free polynomial ring and their arithmetic.
//!
//! Everything here reduces to Groebner bases: intersection goes through the
//! single-auxiliary-variable elimination construction, colon through
//! intersection and exact division, saturation through an iterated colon
//! with a stabilization cap. Lengths of Artinian quotients are counted on
//! the staircase of standard monomials.

use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};
use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

pub const SATURATION_CAP: usize = 50;

/// A finitely generated ideal of the free ring, with a lazily cached
/// degrevlex Groebner basis shared across clones.
#[derive(Clone, Debug)]
pub struct FreeIdeal {
    ring: PolyRing,
    gens: Vec<Polynomial>,
    gb: Arc<OnceLock<Arc<GroebnerBasis>>>,
}

impl FreeIdeal {
    pub fn new(ring: &PolyRing, gens: Vec<Polynomial>) -> FreeIdeal {
        let mut seen = HashSet::new();
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero() && seen.insert(g.clone()))
            .collect();
        FreeIdeal {
            ring: ring.clone(),
            gens,
            gb: Arc::new(OnceLock::new()),
        }
    }

    pub fn zero(ring: &PolyRing) -> FreeIdeal {
        FreeIdeal::new(ring, Vec::new())
    }

    pub fn unit(ring: &PolyRing) -> FreeIdeal {
        let one = ring.one();
        FreeIdeal::new(ring, vec![one])
    }

    /// The ideal (x_1, ..., x_n).
    pub fn maximal(ring: &PolyRing) -> FreeIdeal {
        let gens = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        FreeIdeal::new(ring, gens)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// The cached degrevlex reduced Groebner basis.
    pub fn gb(&self) -> Arc<GroebnerBasis> {
        self.gb
            .get_or_init(|| {
                Arc::new(
                    groebner_basis(&self.ring, &self.gens, MonomialOrder::DegRevLex)
                        .expect("buchberger cannot fail on valid input"),
                )
            })
            .clone()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.gb().contains(f)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.gb().normal_form(f)
    }

    pub fn is_unit_ideal(&self) -> bool {
        !self.gens.is_empty() && self.gb().is_unit_ideal()
    }

    pub fn sum(&self, other: &FreeIdeal) -> FreeIdeal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        FreeIdeal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &FreeIdeal) -> FreeIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for f in &self.gens {
            for g in &other.gens {
                gens.push(self.ring.mul(f, g));
            }
        }
        FreeIdeal::new(&self.ring, gens)
    }

    pub fn pow(&self, n: usize) -> FreeIdeal {
        match n {
            0 => FreeIdeal::unit(&self.ring),
            _ => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc.product(self);
                }
                acc
            }
        }
    }

    /// I ∩ J via elimination of an auxiliary variable t from t·I + (1-t)·J.
    pub fn intersection(&self, other: &FreeIdeal) -> FreeIdeal {
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return FreeIdeal::zero(&self.ring);
        }
        let ext = self.ring.with_aux_var();
        let t = ext.var(0);
        let one_minus_t = ext.sub(&ext.one(), &t);
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(ext.mul(&t, &f.lift_aux()));
        }
        for g in &other.gens {
            gens.push(ext.mul(&one_minus_t, &g.lift_aux()));
        }
        let gb = groebner_basis(&ext, &gens, MonomialOrder::Elim(1))
            .expect("buchberger cannot fail on valid input");
        let kept = gb
            .generators()
            .iter()
            .filter_map(|p| p.drop_aux())
            .collect();
        FreeIdeal::new(&self.ring, kept)
    }

    /// (I : f) for a single nonzero polynomial.
    pub fn colon_poly(&self, f: &Polynomial) -> Result<FreeIdeal> {
        if f.is_zero() {
            return Err(Error::ColonByZero);
        }
        let principal = FreeIdeal::new(&self.ring, vec![f.clone()]);
        let inter = self.intersection(&principal);
        let mut gens = Vec::new();
        for g in inter.gens() {
            let q = divide_exact(&self.ring, g, f)
                .expect("intersection member must be divisible by f");
            gens.push(q);
        }
        Ok(FreeIdeal::new(&self.ring, gens))
    }

    /// (I : J) = intersection of (I : f) over the generators of J.
    pub fn colon(&self, other: &FreeIdeal) -> Result<FreeIdeal> {
        if other.is_zero_ideal() {
            return Err(Error::ColonByZero);
        }
        let mut acc: Option<FreeIdeal> = None;
        for f in other.gens() {
            let c = self.colon_poly(f)?;
            acc = Some(match acc {
                None => c,
                Some(prev) => prev.intersection(&c),
            });
        }
        Ok(acc.unwrap())
    }

    /// (I : J^∞) together with the stabilization exponent.
    pub fn saturation(&self, other: &FreeIdeal, cap: usize) -> Result<(FreeIdeal, usize)> {
        let mut current = self.clone();
        for k in 0..cap {
            let next = current.colon(other)?;
            if next.equals(&current) {
                return Ok((current, k));
            }
            current = next;
        }
        Err(Error::SaturationCap(cap))
    }

    /// Mathematical equality, decided on the unique reduced degrevlex bases.
    pub fn equals(&self, other: &FreeIdeal) -> bool {
        self.gb().generators() == other.gb().generators()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gb().leading_monomials().cloned().collect()
    }

    /// Krull dimension of P/I: the largest set of variables meeting no
    /// leading monomial's support. The unit ideal reports -1.
    pub fn krull_dimension(&self) -> i64 {
        let n = self.ring.nvars();
        if self.is_zero_ideal() {
            return n as i64;
        }
        if self.is_unit_ideal() {
            return -1;
        }
        let supports: Vec<u32> = self
            .leading_monomials()
            .iter()
            .map(|m| {
                m.exps()
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, e)| if *e > 0 { acc | (1 << i) } else { acc })
            })
            .collect();
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            // independent iff no leading monomial lives entirely inside mask
            if supports.iter().all(|s| s & !mask != 0) {
                best = size;
            }
        }
        best as i64
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.staircase_bounds().is_some()
    }

    /// Per-variable staircase bounds: bound_i = least e with x_i^e in the
    /// leading term ideal. `None` when the staircase is infinite.
    fn staircase_bounds(&self) -> Option<Vec<u32>> {
        if self.is_zero_ideal() {
            return if self.ring.nvars() == 0 { Some(vec![]) } else { None };
        }
        let lms = self.leading_monomials();
        if lms.iter().any(|m| m.is_one()) {
            return Some(vec![0; self.ring.nvars()]);
        }
        let n = self.ring.nvars();
        let mut bounds = vec![u32::MAX; n];
        for m in &lms {
            let support: Vec<usize> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, _)| i)
                .collect();
            if support.len() == 1 {
                let i = support[0];
                bounds[i] = bounds[i].min(m.exps()[i]);
            }
        }
        if bounds.iter().any(|b| *b == u32::MAX) {
            None
        } else {
            Some(bounds)
        }
    }

    /// Number of standard monomials, i.e. dim_k P/I for zero-dimensional I.
    pub fn artinian_length(&self) -> Result<usize> {
        let bounds = self.staircase_bounds().ok_or(Error::NotArtinian)?;
        let lms = self.leading_monomials();
        let n = self.ring.nvars();
        let mut count = 0usize;
        let mut exps = vec![0u32; n];
        count_staircase(&mut exps, 0, &bounds, &lms, &mut count);
        Ok(count)
    }

    /// dim_k of the degree-`deg` piece of P/I (standard monomials of that
    /// degree). Works for any homogeneous ideal.
    pub fn std_count_in_degree(&self, deg: u32) -> usize {
        let lms = if self.is_zero_ideal() {
            Vec::new()
        } else {
            self.leading_monomials()
        };
        let n = self.ring.nvars();
        let mut count = 0usize;
        let mut exps = vec![0u32; n];
        count_degree_slice(&mut exps, 0, deg, &lms, &mut count);
        count
    }

    /// Largest generator degree, 0 for the zero ideal.
    pub fn max_gen_degree(&self) -> u32 {
        self.gens
            .iter()
            .filter_map(|g| g.total_degree())
            .max()
            .unwrap_or(0)
    }
}

fn count_staircase(exps: &mut Vec<u32>, i: usize, bounds: &[u32], lms: &[Monomial], count: &mut usize) {
    if i == bounds.len() {
        let m = Monomial::new(exps.clone());
        if !lms.iter().any(|lm| lm.divides(&m)) {
            *count += 1;
        }
        return;
    }
    for e in 0..bounds[i] {
        exps[i] = e;
        count_staircase(exps, i + 1, bounds, lms, count);
    }
    exps[i] = 0;
}

fn count_degree_slice(exps: &mut Vec<u32>, i: usize, remaining: u32, lms: &[Monomial], count: &mut usize) {
    if i + 1 == exps.len() {
        exps[i] = remaining;
        let m = Monomial::new(exps.clone());
        if !lms.iter().any(|lm| lm.divides(&m)) {
            *count += 1;
        }
        exps[i] = 0;
        return;
    }
    if exps.is_empty() {
        if remaining == 0 && !lms.iter().any(|lm| lm.is_one()) {
            *count += 1;
        }
        return;
    }
    for e in 0..=remaining {
        exps[i] = e;
        count_degree_slice(exps, i + 1, remaining - e, lms, count);
    }
    exps[i] = 0;
}

/// Exact division g / f; `None` when f does not divide g.
pub fn divide_exact(ring: &PolyRing, g: &Polynomial, f: &Polynomial) -> Option<Polynomial> {
    let field = ring.field();
    let (lmf, lcf) = f.leading()?;
    let lcf_inv = field.inv(*lcf).ok()?;
    let mut rest = g.clone();
    let mut quot: Vec<(Monomial, u64)> = Vec::new();
    while let Some((m, c)) = rest.leading().cloned() {
        let q = lmf.try_div(&m)?;
        let qc = field.mul(c, lcf_inv);
        quot.push((q.clone(), qc));
        let piece = ring.mul_term(f, &q, qc);
        rest = ring.sub(&rest, &piece);
    }
    Some(ring.from_terms(quot))
}
