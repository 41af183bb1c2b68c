//! Multivariate polynomials over a prime field.
//!
//! A [`Polynomial`] is a canonical sorted term list: strictly descending in
//! degrevlex, no zero coefficients, no duplicate monomials. Ring operations
//! live on [`PolyRing`], which carries the coefficient field, the variable
//! names and the default working order.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{Monomial, MonomialOrder};
use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Debug)]
struct RingRepr {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
}

/// A polynomial ring `F_p[x_1, ..., x_n]` with a fixed monomial order.
#[derive(Clone, Debug)]
pub struct PolyRing(Arc<RingRepr>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.vars == other.0.vars
                && self.0.order == other.0.order)
    }
}
impl Eq for PolyRing {}

impl PolyRing {
    pub fn new(p: u64, vars: &[&str]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Ok(PolyRing(Arc::new(RingRepr {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order: MonomialOrder::DegRevLex,
        })))
    }

    pub fn field(&self) -> &PrimeField {
        &self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Ring with one auxiliary variable prepended and an Elim(1) block order,
    /// used by the intersection/colon constructions.
    pub fn with_aux_var(&self) -> PolyRing {
        let mut vars = vec!["t#".to_string()];
        vars.extend(self.0.vars.iter().cloned());
        PolyRing(Arc::new(RingRepr {
            field: self.0.field,
            vars,
            order: MonomialOrder::Elim(1),
        }))
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> Polynomial {
        let c = c % self.field().modulus();
        if c == 0 {
            return self.zero();
        }
        Polynomial {
            terms: vec![(Monomial::one(self.nvars()), c)],
        }
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial {
            terms: vec![(Monomial::var(self.nvars(), i), 1)],
        }
    }

    pub fn monomial(&self, m: Monomial, c: u64) -> Polynomial {
        self.from_terms(vec![(m, c)])
    }

    /// Canonicalize an arbitrary term list: merge duplicates, drop zeros,
    /// sort descending in degrevlex.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, u64)>) -> Polynomial {
        let f = self.field();
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = f.add(last.1, c % f.modulus());
                    continue;
                }
            }
            out.push((m, c % f.modulus()));
        }
        out.retain(|t| t.1 != 0);
        Polynomial { terms: out }
    }

    fn check_compat(&self, p: &Polynomial) -> Result<()> {
        if p.terms.iter().any(|(m, _)| m.nvars() != self.nvars()) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut terms = p.terms.clone();
        terms.extend(q.terms.iter().cloned());
        self.from_terms(terms)
    }

    pub fn sub(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        self.add(p, &self.neg(q))
    }

    pub fn neg(&self, p: &Polynomial) -> Polynomial {
        let f = self.field();
        Polynomial {
            terms: p.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect(),
        }
    }

    pub fn scale(&self, p: &Polynomial, c: u64) -> Polynomial {
        let f = self.field();
        let c = c % f.modulus();
        if c == 0 {
            return self.zero();
        }
        Polynomial {
            terms: p.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul_term(&self, p: &Polynomial, m: &Monomial, c: u64) -> Polynomial {
        let f = self.field();
        let c = c % f.modulus();
        if c == 0 {
            return self.zero();
        }
        // multiplying by a monomial preserves degrevlex sortedness
        Polynomial {
            terms: p
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), f.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let f = self.field();
        let mut terms = Vec::with_capacity(p.terms.len() * q.terms.len());
        for (m1, c1) in &p.terms {
            for (m2, c2) in &q.terms {
                terms.push((m1.mul(m2), f.mul(*c1, *c2)));
            }
        }
        self.from_terms(terms)
    }

    /// The spec-level arithmetic entry point with ring compatibility checks.
    pub fn poly_arith(&self, p: &Polynomial, q: &Polynomial, op: PolyOp) -> Result<Polynomial> {
        self.check_compat(p)?;
        self.check_compat(q)?;
        Ok(match op {
            PolyOp::Add => self.add(p, q),
            PolyOp::Sub => self.sub(p, q),
            PolyOp::Mul => self.mul(p, q),
        })
    }

    /// Monic multiple of `p` (leading coefficient 1 under degrevlex).
    pub fn monic(&self, p: &Polynomial) -> Result<Polynomial> {
        match p.terms.first() {
            None => Ok(p.clone()),
            Some((_, c)) => {
                let inv = self.field().inv(*c)?;
                Ok(self.scale(p, inv))
            }
        }
    }

    pub fn fmt_poly(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (v, e) in self.0.vars.iter().zip(m.exps()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => {
                        let mut s = String::new();
                        let _ = write!(s, "{}^{}", v, e);
                        factors.push(s);
                    }
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Canonical-form polynomial. Equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    terms: Vec<(Monomial, u64)>,
}

impl Polynomial {
    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Leading term under degrevlex (the storage order).
    pub fn leading(&self) -> Option<&(Monomial, u64)> {
        self.terms.first()
    }

    /// Leading term under an arbitrary order.
    pub fn leading_under(&self, ord: MonomialOrder) -> Option<&(Monomial, u64)> {
        self.terms
            .iter()
            .max_by(|a, b| match ord.cmp(&a.0, &b.0) {
                Ordering::Equal => Ordering::Equal,
                o => o,
            })
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    /// Reinterpret in the ring with one auxiliary variable prepended.
    pub fn lift_aux(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0u32];
                    e.extend_from_slice(m.exps());
                    (Monomial::new(e), *c)
                })
                .collect(),
        }
    }

    /// Drop the auxiliary variable (exponent must be zero in every term);
    /// terms stay degrevlex-sorted because the remaining block is compared
    /// identically.
    pub fn drop_aux(&self) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exps()[0] != 0 {
                return None;
            }
            terms.push((Monomial::new(m.exps()[1..].to_vec()), *c));
        }
        Some(Polynomial { terms })
    }

    pub fn involves_aux(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.exps()[0] != 0)
    }
}
