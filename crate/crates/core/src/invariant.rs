//! Buchsbaum-type invariants: the difference l(A/Q) - e(Q;A) for systems of
//! parameters, its graded counterpart on G, sequence conditions, and local
//! cohomology lengths recovered by slicing.

use crate::error::{Error, Result};
use crate::filtration::{Filtration, ReductionCertificate};
use crate::hilbert::{graded_colength, multiplicity_parameter};
use crate::ideal::FreeIdeal;
use crate::poly::Polynomial;
use crate::quotient::QuotientRing;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub sop: Vec<Polynomial>,
    pub colength: usize,
    pub mult: usize,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyProfile {
    /// h^0 .. h^{d-1}
    pub h: Vec<usize>,
    /// sum_i binom(d-1, i) h^i, matched against the sop invariant
    pub bsb_invariant: usize,
    pub slicing_exponent: usize,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// l(A/Q) - e(Q;A) for a system of parameters Q.
pub fn invariant_of_sop(ring: &QuotientRing, q: &[Polynomial]) -> Result<InvariantReport> {
    if !ring.is_parameter_ideal(q) {
        return Err(Error::NotParameterIdeal);
    }
    let colength = ring.length(&ring.ideal_from_gens(q.to_vec()))?;
    let mult = multiplicity_parameter(ring, q)?;
    if colength < mult {
        return Err(Error::Consistency(format!(
            "colength {} below multiplicity {}",
            colength, mult
        )));
    }
    Ok(InvariantReport {
        sop: q.to_vec(),
        colength,
        mult,
        value: colength - mult,
    })
}

/// True iff the invariant is unchanged when every generator is squared.
pub fn is_standard_sop(ring: &QuotientRing, q: &[Polynomial]) -> Result<bool> {
    let base = invariant_of_sop(ring, q)?;
    let ambient = ring.ambient();
    let squares: Vec<Polynomial> = q.iter().map(|a| ambient.mul(a, a)).collect();
    let doubled = invariant_of_sop(ring, &squares)?;
    Ok(base.value == doubled.value)
}

/// ((a_1..a_{i-1}) + J : a_i a_j) = ((a_1..a_{i-1}) + J : a_j) for i <= j.
pub fn is_d_sequence(ring: &QuotientRing, seq: &[Polynomial]) -> Result<bool> {
    let ambient = ring.ambient();
    for i in 0..seq.len() {
        let prefix = FreeIdeal::new(ambient, seq[..i].to_vec()).sum(ring.defining());
        for j in i..seq.len() {
            let prod = ambient.mul(&seq[i], &seq[j]);
            let lhs = prefix.colon_poly(&prod)?;
            let rhs = prefix.colon_poly(&seq[j])?;
            if !lhs.equals(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// ((a_1..a_{i-1}) + J : a_i) = ((a_1..a_{i-1}) + J : m) for each i.
pub fn is_weak_sequence(ring: &QuotientRing, seq: &[Polynomial]) -> Result<bool> {
    let ambient = ring.ambient();
    let m = FreeIdeal::maximal(ambient);
    for i in 0..seq.len() {
        let prefix = FreeIdeal::new(ambient, seq[..i].to_vec()).sum(ring.defining());
        let lhs = prefix.colon_poly(&seq[i])?;
        let rhs = prefix.colon(&m)?;
        if !lhs.equals(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// d-sequence under every permutation and every exponent tuple with entries
/// in 1..=m_bound. A finite certificate for the bounded range only.
pub fn is_usd_sequence(ring: &QuotientRing, seq: &[Polynomial], m_bound: usize) -> Result<bool> {
    if seq.len() > 4 {
        return Err(Error::SequenceTooLong(seq.len()));
    }
    let ambient = ring.ambient();
    let s = seq.len();
    let mut exps = vec![1usize; s];
    loop {
        let powered: Vec<Polynomial> = seq
            .iter()
            .zip(&exps)
            .map(|(a, e)| {
                let mut acc = a.clone();
                for _ in 1..*e {
                    acc = ambient.mul(&acc, a);
                }
                acc
            })
            .collect();
        for perm in permutations(&powered) {
            if !is_d_sequence(ring, &perm)? {
                return Ok(false);
            }
        }
        // next exponent tuple, odometer style
        let mut pos = 0;
        loop {
            if pos == s {
                return Ok(true);
            }
            if exps[pos] < m_bound {
                exps[pos] += 1;
                break;
            }
            exps[pos] = 1;
            pos += 1;
        }
    }
}

/// A random parameter ideal with generators drawn as field combinations of
/// the generators of m^degree.
pub fn random_parameter_ideal<R: Rng>(
    ring: &QuotientRing,
    degree: usize,
    rng: &mut R,
) -> Result<Vec<Polynomial>> {
    let ambient = ring.ambient();
    let pool = FreeIdeal::maximal(ambient).pow(degree);
    let p = ambient.field().modulus();
    for _ in 0..60 {
        let candidate: Vec<Polynomial> = (0..ring.dim())
            .map(|_| {
                let mut acc = ambient.zero();
                for g in pool.gens() {
                    acc = ambient.add(&acc, &ambient.scale(g, rng.gen_range(1..p)));
                }
                acc
            })
            .collect();
        if ring.is_parameter_ideal(&candidate) {
            return Ok(candidate);
        }
    }
    Err(Error::Unsupported(
        "no random parameter ideal found in 60 draws".into(),
    ))
}

/// A sop verified standard by the squaring test, for rings where one exists.
pub fn find_standard_sop<R: Rng>(ring: &QuotientRing, rng: &mut R) -> Result<Vec<Polynomial>> {
    for _ in 0..24 {
        let q = random_parameter_ideal(ring, 1, rng)?;
        if is_standard_sop(ring, &q)? {
            return Ok(q);
        }
    }
    Err(Error::Consistency(
        "no standard system of parameters found by sampling".into(),
    ))
}

/// Lengths of H^i_m(A) for 0 <= i < d, recovered by slicing: for a in a
/// standard sop and large m, l(h^i(A/(a^m))) = l(h^i(A)) + l(h^{i+1}(A)).
/// The exponent schedule {2, 4, 8} is accepted once two consecutive values
/// agree and the binomial sum reproduces the sop invariant.
pub fn local_cohomology_lengths(ring: &QuotientRing) -> Result<CohomologyProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C0FFEE);
    cohomology_profile(ring, &mut rng)
}

fn cohomology_profile<R: Rng>(ring: &QuotientRing, rng: &mut R) -> Result<CohomologyProfile> {
    let d = ring.dim();
    let sop = find_standard_sop(ring, rng)?;
    let i_a = invariant_of_sop(ring, &sop)?.value;
    let h0 = ring.h0_length()?.0;
    if d == 1 {
        if h0 != i_a {
            return Err(Error::Consistency(format!(
                "h^0 = {} but sop invariant = {}",
                h0, i_a
            )));
        }
        return Ok(CohomologyProfile {
            h: vec![h0],
            bsb_invariant: i_a,
            slicing_exponent: 1,
        });
    }
    let ambient = ring.ambient();
    let a = &sop[0];
    let mut previous: Option<Vec<usize>> = None;
    for m in [2usize, 4, 8] {
        let mut power = a.clone();
        for _ in 1..m {
            power = ambient.mul(&power, a);
        }
        let sliced = ring.quotient_by(&[power])?;
        let sub = match cohomology_profile(&sliced, rng) {
            Ok(p) => p,
            Err(_) => {
                previous = None;
                continue;
            }
        };
        let mut h = vec![0usize; d];
        h[0] = h0;
        let mut feasible = true;
        for i in 0..d - 1 {
            if sub.h[i] < h[i] {
                feasible = false;
                break;
            }
            h[i + 1] = sub.h[i] - h[i];
        }
        if !feasible {
            previous = None;
            continue;
        }
        let total: usize = (0..d).map(|i| binom(d - 1, i) * h[i]).sum();
        if total != i_a {
            previous = None;
            continue;
        }
        if previous.as_deref() == Some(&h[..]) {
            return Ok(CohomologyProfile {
                h,
                bsb_invariant: i_a,
                slicing_exponent: m,
            });
        }
        previous = Some(h);
    }
    Err(Error::Consistency(
        "cohomology slicing did not stabilize; not generalized CM or schedule exhausted".into(),
    ))
}

/// The invariant of ((a_i t)^{n_i}) on G, via the graded colength and the
/// multiplicity identity e((a_i t)^{n_i}; G) = (prod n_i) e(Q; A).
pub fn invariant_on_g(
    filtration: &Filtration,
    cert: &ReductionCertificate,
    exps: &[usize],
) -> Result<InvariantReport> {
    let ring = filtration.ring();
    let colength = graded_colength(filtration, &cert.generators, 1, exps)?;
    let e = multiplicity_parameter(ring, &cert.generators)?;
    let mult = exps.iter().product::<usize>() * e;
    if colength < mult {
        return Err(Error::Consistency(format!(
            "graded colength {} below multiplicity {}",
            colength, mult
        )));
    }
    Ok(InvariantReport {
        sop: cert.generators.clone(),
        colength,
        mult,
        value: colength - mult,
    })
}

#[derive(Clone, Debug)]
pub struct GInvariant {
    pub value: usize,
    pub detected_at: usize,
    /// False when the squaring test on G never stabilized within the sweep;
    /// the value is then only a lower bound.
    pub certified: bool,
}

/// The invariant of G itself, detected by the squaring test on G over the
/// exponent sweep n = 1, 2, 4.
pub fn bsb_invariant_of_g(
    filtration: &Filtration,
    cert: &ReductionCertificate,
) -> Result<GInvariant> {
    let d = filtration.ring().dim();
    let value_at = |n: usize| -> Result<usize> {
        Ok(invariant_on_g(filtration, cert, &vec![n; d])?.value)
    };
    let v1 = value_at(1)?;
    let v2 = value_at(2)?;
    if v1 == v2 {
        return Ok(GInvariant {
            value: v1,
            detected_at: 1,
            certified: true,
        });
    }
    let v4 = value_at(4)?;
    if v2 == v4 {
        return Ok(GInvariant {
            value: v2,
            detected_at: 2,
            certified: true,
        });
    }
    Ok(GInvariant {
        value: v4,
        detected_at: 4,
        certified: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::session::parse_polynomial;

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

    fn two_planes_ring() -> QuotientRing {
        let r = PolyRing::new(32003, &["x", "y", "z", "w"]).unwrap();
        let j = FreeIdeal::new(
            &r,
            vec![poly(&r, "x*z"), poly(&r, "x*w"), poly(&r, "y*z"), poly(&r, "y*w")],
        );
        QuotientRing::new(r, j).unwrap()
    }

    #[test]
    fn sop_invariant_examples() {
        let a = free_xy();
        let r = a.ambient().clone();
        assert_eq!(
            invariant_of_sop(&a, &[poly(&r, "x"), poly(&r, "y")]).unwrap().value,
            0
        );

        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        let rep = invariant_of_sop(&b, &[poly(&rb, "y")]).unwrap();
        assert_eq!((rep.colength, rep.mult, rep.value), (2, 1, 1));

        let p = two_planes_ring();
        let rp = p.ambient().clone();
        let rep = invariant_of_sop(&p, &[poly(&rp, "x+z"), poly(&rp, "y+w")]).unwrap();
        assert_eq!((rep.colength, rep.mult, rep.value), (3, 2, 1));
    }

    #[test]
    fn standard_sop_examples() {
        let a = free_xy();
        let r = a.ambient().clone();
        assert!(is_standard_sop(&a, &[poly(&r, "x"), poly(&r, "y")]).unwrap());

        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        assert!(is_standard_sop(&b, &[poly(&rb, "y")]).unwrap());
    }

    #[test]
    fn mixed_ring_has_nonstandard_sops() {
        // components of different dimension: sops from m and m^2 disagree
        let r = PolyRing::new(32003, &["x", "y", "z"]).unwrap();
        let j = FreeIdeal::new(&r, vec![poly(&r, "x*y"), poly(&r, "x*z")]);
        let a = QuotientRing::new(r, j).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen_nonstandard = false;
        for degree in [1usize, 2] {
            for _ in 0..6 {
                let q = random_parameter_ideal(&a, degree, &mut rng).unwrap();
                if !is_standard_sop(&a, &q).unwrap() {
                    seen_nonstandard = true;
                }
            }
        }
        assert!(seen_nonstandard);
    }

    #[test]
    fn d_sequence_examples() {
        let a = free_xy();
        let r = a.ambient().clone();
        assert!(is_d_sequence(&a, &[poly(&r, "x"), poly(&r, "y")]).unwrap());

        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        assert!(!is_d_sequence(&b, &[poly(&rb, "x")]).unwrap());
        assert!(is_d_sequence(&b, &[poly(&rb, "y")]).unwrap());
    }

    #[test]
    fn weak_sequence_examples() {
        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        assert!(is_weak_sequence(&b, &[poly(&rb, "y^2")]).unwrap());
        assert!(!is_weak_sequence(&b, &[poly(&rb, "x")]).unwrap());

        let a = free_xy();
        let r = a.ambient().clone();
        assert!(is_weak_sequence(&a, &[poly(&r, "x"), poly(&r, "y")]).unwrap());
    }

    #[test]
    fn usd_examples() {
        let a = free_xy();
        let r = a.ambient().clone();
        assert!(is_usd_sequence(&a, &[poly(&r, "x"), poly(&r, "y")], 2).unwrap());

        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        assert!(is_usd_sequence(&b, &[poly(&rb, "y")], 3).unwrap());
        assert!(!is_usd_sequence(&b, &[poly(&rb, "x")], 2).unwrap());
        let five = vec![poly(&r, "x"); 5];
        assert!(is_usd_sequence(&a, &five, 1).is_err());
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(local_cohomology_lengths(&xx_xy_ring()).unwrap().h, vec![1]);
        assert_eq!(local_cohomology_lengths(&free_xy()).unwrap().h, vec![0, 0]);
        let p = local_cohomology_lengths(&two_planes_ring()).unwrap();
        assert_eq!(p.h, vec![0, 1]);
        assert_eq!(p.bsb_invariant, 1);
    }

    #[test]
    fn g_invariant_examples() {
        let b = xx_xy_ring();
        let f = Filtration::adic(b.maximal_ideal());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cert = f.find_reduction(20, 8, &mut rng).unwrap();
        let rep = invariant_on_g(&f, &cert, &[1]).unwrap();
        assert_eq!(rep.value, 1);
        let g = bsb_invariant_of_g(&f, &cert).unwrap();
        assert_eq!(g.value, 1);
        assert_eq!(g.detected_at, 1);
        assert!(g.certified);

        let a = free_xy();
        let fa = Filtration::adic(a.maximal_ideal());
        let ca = fa.find_reduction(20, 8, &mut rng).unwrap();
        assert_eq!(invariant_on_g(&fa, &ca, &[1, 1]).unwrap().value, 0);
        assert_eq!(bsb_invariant_of_g(&fa, &ca).unwrap().value, 0);
    }

    #[test]
    fn killing_h0_drops_the_invariant_by_its_length() {
        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        let (len_u, u) = b.h0_length().unwrap();
        let sliced = b.quotient_by(u.preimage().gens()).unwrap();
        let q = [poly(&rb, "y")];
        let on_a = invariant_of_sop(&b, &q).unwrap().value;
        let on_slice = invariant_of_sop(&sliced, &q).unwrap().value;
        assert_eq!(on_a, on_slice + len_u);
    }

    #[test]
    fn monotonicity_on_g() {
        let p = two_planes_ring();
        let f = Filtration::adic(p.maximal_ideal());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cert = f.find_reduction(20, 8, &mut rng).unwrap();
        let i_g = invariant_on_g(&f, &cert, &[1, 1]).unwrap().value;
        let i_a = invariant_of_sop(&p, &cert.generators).unwrap().value;
        assert!(i_g >= i_a);
        assert_eq!(i_g, 1);
        assert_eq!(i_a, 1);
    }
}
