//! I-good filtrations: adic, tabulated-with-tail, and Ratliff-Rush engines,
//! goodness validation, randomized reduction search, quotient filtrations.
//!
//! Members are cached as preimage ideals in P, with generators kept in
//! normal form modulo the defining ideal so that products stay small.

use crate::error::{Error, Result};
use crate::ideal::FreeIdeal;
use crate::poly::Polynomial;
use crate::quotient::{IdealHandle, QuotientRing};
use rand::Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub const RATLIFF_RUSH_CAP: usize = 30;

/// A verified reduction: Q = (a_1, ..., a_d) with I_{n+1} = Q I_n checked
/// for r <= n <= verified_up_to.
#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub generators: Vec<Polynomial>,
    pub r: usize,
    pub verified_up_to: usize,
}

#[derive(Clone, Debug)]
pub enum FiltrationKind {
    Adic(IdealHandle),
    /// Stored members I_1..I_len; beyond that I_{n+1} = ext * I_n.
    Table {
        members: Vec<IdealHandle>,
        ext: FreeIdeal,
        r: usize,
    },
    RatliffRush(IdealHandle),
}

#[derive(Clone, Debug)]
pub struct Filtration {
    ring: QuotientRing,
    kind: FiltrationKind,
    reduction: Option<ReductionCertificate>,
    cache: Arc<Mutex<HashMap<usize, FreeIdeal>>>,
}

#[derive(Clone, Debug, Default)]
pub struct GoodnessReport {
    pub passed: bool,
    pub failures: Vec<String>,
    /// Smallest r with I_{n+1} = I_1 I_n verified for r <= n < bound.
    pub tail_r: Option<usize>,
}

impl Filtration {
    pub fn adic(ideal: IdealHandle) -> Filtration {
        Filtration {
            ring: ideal.ring().clone(),
            kind: FiltrationKind::Adic(ideal),
            reduction: None,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn table(members: Vec<IdealHandle>, ext: FreeIdeal, r: usize) -> Result<Filtration> {
        if members.is_empty() || r > members.len() {
            return Err(Error::Unsupported(
                "table filtration needs stored members I_1..I_len with r <= len".into(),
            ));
        }
        let ring = members[0].ring().clone();
        Ok(Filtration {
            ring,
            kind: FiltrationKind::Table { members, ext, r },
            reduction: None,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn ratliff_rush(ideal: IdealHandle) -> Filtration {
        Filtration {
            ring: ideal.ring().clone(),
            kind: FiltrationKind::RatliffRush(ideal),
            reduction: None,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn kind(&self) -> &FiltrationKind {
        &self.kind
    }

    pub fn reduction(&self) -> Option<&ReductionCertificate> {
        self.reduction.as_ref()
    }

    pub fn set_reduction(&mut self, cert: ReductionCertificate) {
        self.reduction = Some(cert);
    }

    /// Generators of a preimage ideal, reduced modulo J.
    fn reduce_mod_defining(&self, ideal: &FreeIdeal) -> FreeIdeal {
        let gb = self.ring.defining().gb();
        let gens = ideal.gens().iter().map(|g| gb.normal_form(g)).collect();
        FreeIdeal::new(ideal.ring(), gens)
    }

    /// The preimage of I_n in P (J not adjoined).
    pub fn member(&self, n: usize) -> Result<FreeIdeal> {
        if let Some(found) = self.cache.lock().unwrap().get(&n) {
            return Ok(found.clone());
        }
        let computed = match &self.kind {
            FiltrationKind::Adic(ideal) => match n {
                0 => FreeIdeal::unit(ideal.preimage().ring()),
                1 => self.reduce_mod_defining(ideal.preimage()),
                _ => {
                    let prev = self.member(n - 1)?;
                    self.reduce_mod_defining(&prev.product(&self.member(1)?))
                }
            },
            FiltrationKind::Table { members, ext, .. } => {
                if n == 0 {
                    FreeIdeal::unit(self.ring.ambient())
                } else if n <= members.len() {
                    self.reduce_mod_defining(members[n - 1].preimage())
                } else {
                    let prev = self.member(n - 1)?;
                    self.reduce_mod_defining(&prev.product(ext))
                }
            }
            FiltrationKind::RatliffRush(ideal) => {
                if n == 0 {
                    FreeIdeal::unit(ideal.preimage().ring())
                } else {
                    let base = self.reduce_mod_defining(ideal.preimage());
                    self.ratliff_rush_power(&base, n)?
                }
            }
        };
        self.cache.lock().unwrap().insert(n, computed.clone());
        Ok(computed)
    }

    pub fn ideal(&self, n: usize) -> Result<IdealHandle> {
        Ok(self.ring.ideal(self.member(n)?))
    }

    /// Stable value of (I^{n+k} : I^k) over increasing k, computed in A.
    fn ratliff_rush_power(&self, base: &FreeIdeal, n: usize) -> Result<FreeIdeal> {
        let j = self.ring.defining();
        let mut upper = self.reduce_mod_defining(&base.pow(n)); // I^{n+k}
        let mut lower = FreeIdeal::unit(base.ring()); // I^k
        let mut current = upper.sum(j);
        for _ in 0..RATLIFF_RUSH_CAP {
            upper = self.reduce_mod_defining(&upper.product(base));
            lower = self.reduce_mod_defining(&lower.product(base));
            let next = upper.sum(j).colon(&lower.sum(j))?;
            if next.equals(&current) {
                return Ok(current);
            }
            current = next;
        }
        Err(Error::SaturationCap(RATLIFF_RUSH_CAP))
    }

    /// Check the goodness axioms up to `bound` and locate the tail index.
    pub fn validate_goodness(&self, bound: usize) -> Result<GoodnessReport> {
        let mut report = GoodnessReport::default();
        let j = self.ring.defining();
        let i1 = self.member(1)?;
        let mut with_j: Vec<FreeIdeal> = Vec::new();
        for n in 0..=bound {
            with_j.push(self.member(n)?.sum(j));
        }
        for n in 0..bound {
            let next = self.member(n + 1)?;
            if !next.gens().iter().all(|g| with_j[n].contains(g)) {
                report
                    .failures
                    .push(format!("containment I_{} in I_{} fails", n + 1, n));
            }
        }
        for n in 1..bound {
            let prod = i1.product(&self.member(n)?);
            if !prod.gens().iter().all(|g| with_j[n + 1].contains(g)) {
                report
                    .failures
                    .push(format!("I_1 * I_{} not inside I_{}", n, n + 1));
            }
        }
        // tail: smallest r with I_{n+1} = I_1 I_n for r <= n < bound
        let mut ok = vec![false; bound];
        for (n, slot) in ok.iter_mut().enumerate() {
            let prod = i1.product(&self.member(n)?).sum(j);
            *slot = prod.equals(&with_j[n + 1]);
        }
        let mut tail = None;
        for r in (0..bound).rev() {
            if ok[r] {
                tail = Some(r);
            } else {
                break;
            }
        }
        match tail {
            Some(r) => report.tail_r = Some(r),
            None => report
                .failures
                .push(format!("no tail index with I_(n+1) = I_1 I_n up to {}", bound)),
        }
        report.passed = report.failures.is_empty();
        Ok(report)
    }

    /// Las Vegas reduction search: random field combinations of the
    /// generators of I_1 (lowest degree preferred), verified as a parameter
    /// ideal with I_{n+1} = Q I_n on a scanned window.
    pub fn find_reduction<R: Rng>(
        &self,
        trials: usize,
        n_max: usize,
        rng: &mut R,
    ) -> Result<ReductionCertificate> {
        let d = self.ring.dim();
        let j = self.ring.defining();
        let i1 = self.member(1)?;
        let gens = i1.gens();
        if gens.is_empty() {
            return Err(Error::NoReductionFound { trials, n_max });
        }
        let min_deg = gens.iter().filter_map(|g| g.total_degree()).min().unwrap();
        let low: Vec<&Polynomial> = gens
            .iter()
            .filter(|g| g.total_degree() == Some(min_deg))
            .collect();
        let ring = self.ring.ambient();
        let p = ring.field().modulus();

        for trial in 0..trials {
            // prefer combinations inside the lowest degree; widen later
            let pool: Vec<&Polynomial> = if trial < trials / 2 || low.len() == gens.len() {
                low.clone()
            } else {
                gens.iter().collect()
            };
            let mut candidate: Vec<Polynomial> = Vec::with_capacity(d);
            for _ in 0..d {
                let mut acc = ring.zero();
                for g in &pool {
                    let c = rng.gen_range(1..p);
                    acc = ring.add(&acc, &ring.scale(g, c));
                }
                candidate.push(acc);
            }
            if !self.ring.is_parameter_ideal(&candidate) {
                continue;
            }
            let q = FreeIdeal::new(ring, candidate.clone());
            // scan for the minimal r with I_{n+1} = Q I_n on [r, n_max]
            let mut ok = vec![false; n_max + 1];
            for n in 0..=n_max {
                let rhs = q.product(&self.member(n)?).sum(j);
                let lhs = self.member(n + 1)?.sum(j);
                ok[n] = rhs.equals(&lhs);
            }
            let mut r_found = None;
            for n in (0..=n_max).rev() {
                if ok[n] {
                    r_found = Some(n);
                } else {
                    break;
                }
            }
            if let Some(r) = r_found {
                return Ok(ReductionCertificate {
                    generators: candidate,
                    r,
                    verified_up_to: n_max,
                });
            }
        }
        Err(Error::NoReductionFound { trials, n_max })
    }

    /// Replay a certificate: re-verify the parameter property and every
    /// claimed equality I_{n+1} = Q I_n for r <= n <= verified_up_to.
    pub fn verify_reduction(&self, cert: &ReductionCertificate) -> Result<bool> {
        if !self.ring.is_parameter_ideal(&cert.generators) {
            return Ok(false);
        }
        let j = self.ring.defining();
        let q = FreeIdeal::new(self.ring.ambient(), cert.generators.clone());
        for n in cert.r..=cert.verified_up_to {
            let rhs = q.product(&self.member(n)?).sum(j);
            if !rhs.equals(&self.member(n + 1)?.sum(j)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The induced filtration {(I_n + (a^e))/(a^e)} on A/(a^e).
    pub fn quotient_filtration(&self, a: &Polynomial, e: usize) -> Result<Filtration> {
        if e == 0 {
            return Err(Error::Unsupported("exponent must be >= 1".into()));
        }
        let i1 = self.member(1)?.sum(self.ring.defining());
        if !i1.contains(a) {
            return Err(Error::NotInFiltration);
        }
        let ring = self.ring.ambient();
        let mut power = a.clone();
        for _ in 1..e {
            power = ring.mul(&power, a);
        }
        let sliced = self.ring.quotient_by(&[power])?;
        match &self.kind {
            FiltrationKind::Adic(ideal) => Ok(Filtration::adic(
                sliced.ideal(ideal.preimage().clone()),
            )),
            _ => {
                let cert = self.reduction.as_ref().ok_or_else(|| {
                    Error::Unsupported(
                        "quotient of a non-adic filtration requires a reduction certificate"
                            .into(),
                    )
                })?;
                let len = cert.r.max(1);
                let mut members = Vec::with_capacity(len);
                for n in 1..=len {
                    members.push(sliced.ideal(self.member(n)?));
                }
                let remaining: Vec<Polynomial> = cert
                    .generators
                    .iter()
                    .filter(|g| *g != a)
                    .cloned()
                    .collect();
                let ext_gens = if remaining.len() == sliced.dim() {
                    remaining
                } else {
                    cert.generators.clone()
                };
                let ext = FreeIdeal::new(ring, ext_gens);
                Filtration::table(members, ext, cert.r)
            }
        }
    }
}

/// Ratliff-Rush closure of an m-primary ideal: the stable value of
/// (I^{k+1} : I^k).
pub fn ratliff_rush_closure(ring: &QuotientRing, ideal: &IdealHandle) -> Result<IdealHandle> {
    let f = Filtration::ratliff_rush(ideal.clone());
    let closure = f.member(1)?;
    Ok(ring.ideal(closure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::session::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(r: &PolyRing, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    fn free_xy() -> QuotientRing {
        QuotientRing::free(PolyRing::new(32003, &["x", "y"]).unwrap()).unwrap()
    }

    fn xx_xy_ring() -> QuotientRing {
        let r = PolyRing::new(32003, &["x", "y"]).unwrap();
        let j = FreeIdeal::new(&r, vec![poly(&r, "x^2"), poly(&r, "x*y")]);
        QuotientRing::new(r, j).unwrap()
    }

    #[test]
    fn adic_members() {
        let a = free_xy();
        let r = a.ambient().clone();
        let f = Filtration::adic(a.maximal_ideal());
        assert!(f.member(0).unwrap().is_unit_ideal());
        let m2 = f.member(2).unwrap();
        let expect = FreeIdeal::new(&r, vec![poly(&r, "x^2"), poly(&r, "x*y"), poly(&r, "y^2")]);
        assert!(m2.equals(&expect));
    }

    #[test]
    fn table_extension() {
        // table([m], ext = (y), r = 1) over F_p[x,y]/(x^2, xy): I_2 = (y^2)
        let a = xx_xy_ring();
        let r = a.ambient().clone();
        let ext = FreeIdeal::new(&r, vec![poly(&r, "y")]);
        let f = Filtration::table(vec![a.maximal_ideal()], ext, 1).unwrap();
        let i2 = f.member(2).unwrap().sum(a.defining());
        let expect = FreeIdeal::new(&r, vec![poly(&r, "y^2")]).sum(a.defining());
        assert!(i2.equals(&expect));
    }

    #[test]
    fn ratliff_rush_examples() {
        let a = free_xy();
        let r = a.ambient().clone();
        // parameter ideal in a CM ring is its own closure
        let m = a.maximal_ideal();
        let rr = ratliff_rush_closure(&a, &m).unwrap();
        assert!(rr.equals(&m));
        // regular sequence
        let i = a.ideal_from_gens(vec![poly(&r, "x^2"), poly(&r, "y^2")]);
        assert!(ratliff_rush_closure(&a, &i).unwrap().equals(&i));
        // the classic strict example: (x^4, x^3 y, x y^3, y^4) picks up x^2 y^2
        let i = a.ideal_from_gens(vec![
            poly(&r, "x^4"),
            poly(&r, "x^3*y"),
            poly(&r, "x*y^3"),
            poly(&r, "y^4"),
        ]);
        let closure = ratliff_rush_closure(&a, &i).unwrap();
        assert!(closure.contains(&poly(&r, "x^2*y^2")));
        assert!(!i.contains(&poly(&r, "x^2*y^2")));
        assert!(i.preimage().gens().iter().all(|g| closure.contains(g)));
    }

    #[test]
    fn goodness_adic_passes() {
        let a = xx_xy_ring();
        let f = Filtration::adic(a.maximal_ideal());
        let report = f.validate_goodness(5).unwrap();
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn goodness_bad_table_fails() {
        // I_2 not inside I_1
        let a = free_xy();
        let r = a.ambient().clone();
        let members = vec![
            a.ideal_from_gens(vec![poly(&r, "x^2"), poly(&r, "y^2")]),
            a.ideal_from_gens(vec![poly(&r, "x")]),
        ];
        let ext = FreeIdeal::new(&r, vec![poly(&r, "x")]);
        let f = Filtration::table(members, ext, 2).unwrap();
        let report = f.validate_goodness(3).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn find_reduction_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // free ring: m is its own reduction, r = 0
        let a = free_xy();
        let f = Filtration::adic(a.maximal_ideal());
        let cert = f.find_reduction(20, 6, &mut rng).unwrap();
        assert_eq!(cert.r, 0);
        assert!(f.verify_reduction(&cert).unwrap());

        // x^2, xy ring: r = 1
        let b = xx_xy_ring();
        let fb = Filtration::adic(b.maximal_ideal());
        let cert = fb.find_reduction(20, 6, &mut rng).unwrap();
        assert_eq!(cert.r, 1);
        assert_eq!(cert.generators.len(), 1);
        assert!(fb.verify_reduction(&cert).unwrap());
    }

    #[test]
    fn reduction_number_is_seed_independent() {
        let b = xx_xy_ring();
        let fb = Filtration::adic(b.maximal_ideal());
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cert = fb.find_reduction(20, 6, &mut rng).unwrap();
            assert_eq!(cert.r, 1);
        }
    }

    #[test]
    fn quotient_filtration_examples() {
        // F = adic(m) on F_p[x,y], slice by x: adic(m) on a 1-dim ring
        let a = free_xy();
        let r = a.ambient().clone();
        let f = Filtration::adic(a.maximal_ideal());
        let sliced = f.quotient_filtration(&poly(&r, "x"), 1).unwrap();
        assert_eq!(sliced.ring().dim(), 1);

        // two planes sliced by x + z
        let r4 = PolyRing::new(32003, &["x", "y", "z", "w"]).unwrap();
        let j = FreeIdeal::new(
            &r4,
            vec![poly(&r4, "x*z"), poly(&r4, "x*w"), poly(&r4, "y*z"), poly(&r4, "y*w")],
        );
        let p = QuotientRing::new(r4.clone(), j).unwrap();
        let fp = Filtration::adic(p.maximal_ideal());
        let s1 = fp.quotient_filtration(&poly(&r4, "x+z"), 1).unwrap();
        assert_eq!(s1.ring().dim(), 1);
        let s2 = fp.quotient_filtration(&poly(&r4, "x+z"), 2).unwrap();
        assert_eq!(s2.ring().dim(), 1);
    }
}
