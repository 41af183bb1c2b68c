//! Buchberger's algorithm and normal forms.
//!
//! The engine is the plain pair-queue Buchberger with the two classical
//! criteria (coprime leading monomials, chain criterion) and normal-strategy
//! selection. Pair selection and all tie-breaks are deterministic so that a
//! fixed input always yields the identical reduced basis.

use crate::error::Result;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyRing, Polynomial};
use std::cmp::Ordering;
use std::collections::BTreeSet;

type Terms = Vec<(Monomial, u64)>;

fn sort_under(p: &Polynomial, ord: MonomialOrder) -> Terms {
    let mut t = p.terms().to_vec();
    t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    t
}

/// r := a - c * m * b, all term lists sorted descending under `ord`.
fn sub_scaled(ring: &PolyRing, a: &Terms, b: &Terms, m: &Monomial, c: u64, ord: MonomialOrder) -> Terms {
    let f = ring.field();
    let mut out = Terms::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        if j >= b.len() {
            out.push(a[i].clone());
            i += 1;
            continue;
        }
        let bm = b[j].0.mul(m);
        let bc = f.neg(f.mul(b[j].1, c));
        if i >= a.len() {
            out.push((bm, bc));
            j += 1;
            continue;
        }
        match ord.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, bc));
                j += 1;
            }
            Ordering::Equal => {
                let s = f.add(a[i].1, bc);
                if s != 0 {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full normal form of `f` modulo `basis` (no term of the result is
/// divisible by any basis leading monomial).
fn reduce_full(ring: &PolyRing, f: Terms, basis: &[Terms], ord: MonomialOrder) -> Terms {
    let field = ring.field();
    let mut rest = f;
    let mut out: Terms = Vec::new();
    'outer: while let Some((m, c)) = rest.first().cloned() {
        for g in basis {
            let (lm, lc) = &g[0];
            if let Some(q) = lm.try_div(&m) {
                let coef = field.mul(c, field.inv(*lc).expect("monic basis"));
                rest = sub_scaled(ring, &rest, g, &q, coef, ord);
                continue 'outer;
            }
        }
        out.push((m, c));
        rest.remove(0);
    }
    out
}

fn spoly(ring: &PolyRing, f: &Terms, g: &Terms, ord: MonomialOrder) -> Terms {
    let field = ring.field();
    let (lmf, lcf) = &f[0];
    let (lmg, lcg) = &g[0];
    let l = lmf.lcm(lmg);
    let mf = lmf.try_div(&l).unwrap();
    let mg = lmg.try_div(&l).unwrap();
    // lcg * (l/lmf) * f - lcf * (l/lmg) * g
    let scaled_f: Terms = f
        .iter()
        .map(|(m, c)| (m.mul(&mf), field.mul(*c, *lcg)))
        .collect();
    sub_scaled(ring, &scaled_f, g, &mg, *lcf, ord)
}

fn make_monic(ring: &PolyRing, t: &mut Terms) {
    if let Some((_, lc)) = t.first() {
        let inv = ring.field().inv(*lc).expect("nonzero leading coefficient");
        if inv != 1 {
            for (_, c) in t.iter_mut() {
                *c = ring.field().mul(*c, inv);
            }
        }
    }
}

/// A reduced Groebner basis: monic, auto-reduced generators sorted by
/// descending leading monomial under `order`. Generators are stored in
/// canonical (degrevlex) form; the internal working copies are sorted under
/// the basis order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: PolyRing,
    order: MonomialOrder,
    gens: Vec<Polynomial>,
    work: Vec<Terms>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.work.iter().map(|g| &g[0].0)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.work.iter().any(|g| g[0].0.is_one())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let t = sort_under(f, self.order);
        let r = reduce_full(&self.ring, t, &self.work, self.order);
        self.ring.from_terms(r)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }
}

fn pair_key(lms: &[Monomial], i: usize, j: usize) -> (u32, Vec<u32>, usize, usize) {
    let l = lms[i].lcm(&lms[j]);
    (l.degree(), l.exps().to_vec(), i, j)
}

/// Reduced Groebner basis of the ideal generated by `gens` under `ord`.
pub fn groebner_basis(ring: &PolyRing, gens: &[Polynomial], ord: MonomialOrder) -> Result<GroebnerBasis> {
    let mut basis: Vec<Terms> = Vec::new();
    let monomial_input = gens.iter().all(|g| g.terms().len() <= 1);
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let mut t = sort_under(g, ord);
        make_monic(ring, &mut t);
        basis.push(t);
    }

    if !monomial_input {
        let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
        for i in 0..basis.len() {
            for j in 0..i {
                pending.insert((j, i));
            }
        }
        while !pending.is_empty() {
            let lms: Vec<Monomial> = basis.iter().map(|g| g[0].0.clone()).collect();
            let &(i, j) = pending
                .iter()
                .min_by_key(|&&(i, j)| pair_key(&lms, i, j))
                .unwrap();
            pending.remove(&(i, j));
            if lms[i].coprime(&lms[j]) {
                continue;
            }
            let lcm_ij = lms[i].lcm(&lms[j]);
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && lms[k].divides(&lcm_ij)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = spoly(ring, &basis[i], &basis[j], ord);
            let mut r = reduce_full(ring, s, &basis, ord);
            if !r.is_empty() {
                make_monic(ring, &mut r);
                let n = basis.len();
                basis.push(r);
                for k in 0..n {
                    pending.insert((k, n));
                }
            }
        }
    }

    // minimize: drop generators whose leading monomial is divisible by
    // another kept one (process by ascending leading monomial so divisors
    // are seen first)
    basis.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    let mut minimal: Vec<Terms> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| h[0].0.divides(&g[0].0)) {
            minimal.push(g);
        }
    }

    // tail-reduce each generator against the others
    let mut reduced: Vec<Terms> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut r = reduce_full(ring, minimal[i].clone(), &others, ord);
        debug_assert!(!r.is_empty());
        make_monic(ring, &mut r);
        reduced.push(r);
    }
    reduced.sort_by(|a, b| ord.cmp(&b[0].0, &a[0].0));

    let gens_canon = reduced
        .iter()
        .map(|t| ring.from_terms(t.clone()))
        .collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        order: ord,
        gens: gens_canon,
        work: reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> PolyRing {
        PolyRing::new(32003, &["x", "y"]).unwrap()
    }

    fn poly(r: &PolyRing, s: &str) -> Polynomial {
        crate::session::parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn single_generator() {
        let r = ring2();
        let gb = groebner_basis(&r, &[poly(&r, "x")], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb.generators(), &[poly(&r, "x")]);
    }

    #[test]
    fn unit_ideal() {
        let r = ring2();
        let gb = groebner_basis(&r, &[poly(&r, "x"), poly(&r, "1+x")], MonomialOrder::DegRevLex).unwrap();
        assert!(gb.is_unit_ideal());
        assert_eq!(gb.generators(), &[r.one()]);
    }

    #[test]
    fn textbook_example() {
        // (x^2-1, x*y-1) -> {x-y, y^2-1} under degrevlex x>y
        let r = ring2();
        let gb = groebner_basis(
            &r,
            &[poly(&r, "x^2-1"), poly(&r, "x*y-1")],
            MonomialOrder::DegRevLex,
        )
        .unwrap();
        // descending leading monomial: y^2 - 1 first, then x - y
        let expect = vec![poly(&r, "y^2-1"), poly(&r, "x-y")];
        assert_eq!(gb.generators(), expect);
    }

    #[test]
    fn normal_form_examples() {
        let r = ring2();
        let gb = groebner_basis(&r, &[poly(&r, "x-y")], MonomialOrder::DegRevLex).unwrap();
        // NF(x^2) = y^2 modulo (x - y)
        assert_eq!(gb.normal_form(&poly(&r, "x^2")), poly(&r, "y^2"));
        // members reduce to zero
        assert!(gb.contains(&poly(&r, "x-y")));
        // constants are reduced modulo (x, y)
        let gb2 = groebner_basis(&r, &[poly(&r, "x"), poly(&r, "y")], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb2.normal_form(&r.one()), r.one());
        // idempotence
        let nf = gb.normal_form(&poly(&r, "x^2*y + x"));
        assert_eq!(gb.normal_form(&nf), nf);
    }

    #[test]
    fn deterministic_output() {
        let r = PolyRing::new(32003, &["x", "y", "z"]).unwrap();
        let gens = [poly(&r, "x^2 + y*z"), poly(&r, "y^2 - x*z"), poly(&r, "x*y + z^2")];
        let a = groebner_basis(&r, &gens, MonomialOrder::DegRevLex).unwrap();
        let b = groebner_basis(&r, &gens, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(a.generators(), b.generators());
    }
}
