//! The certification pipeline for Buchsbaumness of the associated graded
//! ring of an I-good filtration, the intersection-condition checks, the
//! Corso boundary check, and replayable JSON certificates.

use crate::error::Result;
use crate::filtration::{Filtration, ReductionCertificate};
use crate::hilbert::{hilbert_coefficients, hs_function};
use crate::ideal::FreeIdeal;
use crate::invariant::{
    bsb_invariant_of_g, invariant_of_sop, is_standard_sop, local_cohomology_lengths,
    random_parameter_ideal,
};
use crate::poly::{PolyRing, Polynomial};
use crate::quotient::{IdealHandle, QuotientRing};
use crate::session::parse_polynomial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    GBuchsbaum,
    EqualityFails,
    InputSanityFail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::GBuchsbaum => "G_BUCHSBAUM",
            Verdict::EqualityFails => "EQUALITY_FAILS",
            Verdict::InputSanityFail => "INPUT_SANITY_FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RingDescriptor {
    pub prime: u64,
    pub vars: Vec<String>,
    pub defining: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiltrationDescriptor {
    Adic { generators: Vec<String> },
    Table { members: Vec<Vec<String>>, ext: Vec<String>, r: usize },
    RatliffRush { generators: Vec<String> },
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ReductionRecord {
    pub generators: Vec<String>,
    pub r: usize,
    pub verified_up_to: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub trials: usize,
    pub all_standard: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub n: usize,
    pub holds: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub i_a: usize,
    pub i_g: usize,
    pub h: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CorsoRecord {
    pub lhs: i64,
    pub rhs: i64,
    pub holds_geq: bool,
    pub equal: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub ring: RingDescriptor,
    pub filtration: FiltrationDescriptor,
    pub d: usize,
    pub r: Option<usize>,
    pub beta: Option<usize>,
    pub reduction: Option<ReductionRecord>,
    pub buchsbaum_sample: SampleRecord,
    pub checks: Vec<CheckRecord>,
    pub invariants: Option<InvariantRecord>,
    pub verdict: Verdict,
    pub corso: Option<CorsoRecord>,
    pub reason: Option<String>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyConfig {
    pub trials: usize,
    pub seed: u64,
    /// Scan window for the reduction search; None picks 2d + 10.
    pub n_max: Option<usize>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            trials: 12,
            seed: 0,
            n_max: None,
        }
    }
}

pub fn describe_ring(ring: &QuotientRing) -> RingDescriptor {
    let p = ring.ambient();
    RingDescriptor {
        prime: p.field().modulus(),
        vars: p.vars().to_vec(),
        defining: ring
            .defining()
            .gens()
            .iter()
            .map(|g| p.fmt_poly(g))
            .collect(),
    }
}

pub fn ring_from_descriptor(desc: &RingDescriptor) -> Result<QuotientRing> {
    let vars: Vec<&str> = desc.vars.iter().map(|s| s.as_str()).collect();
    let ambient = PolyRing::new(desc.prime, &vars)?;
    let gens = desc
        .defining
        .iter()
        .map(|s| parse_polynomial(&ambient, s))
        .collect::<Result<Vec<_>>>()?;
    if gens.is_empty() {
        QuotientRing::free(ambient)
    } else {
        let j = FreeIdeal::new(&ambient, gens);
        QuotientRing::new(ambient, j)
    }
}

pub fn describe_filtration(f: &Filtration) -> FiltrationDescriptor {
    let p = f.ring().ambient();
    let fmt = |ideal: &FreeIdeal| -> Vec<String> {
        ideal.gens().iter().map(|g| p.fmt_poly(g)).collect()
    };
    match f.kind() {
        crate::filtration::FiltrationKind::Adic(i) => FiltrationDescriptor::Adic {
            generators: fmt(i.preimage()),
        },
        crate::filtration::FiltrationKind::Table { members, ext, r } => {
            FiltrationDescriptor::Table {
                members: members.iter().map(|m| fmt(m.preimage())).collect(),
                ext: fmt(ext),
                r: *r,
            }
        }
        crate::filtration::FiltrationKind::RatliffRush(i) => FiltrationDescriptor::RatliffRush {
            generators: fmt(i.preimage()),
        },
    }
}

pub fn filtration_from_descriptor(
    ring: &QuotientRing,
    desc: &FiltrationDescriptor,
) -> Result<Filtration> {
    let ambient = ring.ambient();
    let parse_all = |strings: &[String]| -> Result<Vec<Polynomial>> {
        strings.iter().map(|s| parse_polynomial(ambient, s)).collect()
    };
    Ok(match desc {
        FiltrationDescriptor::Adic { generators } => {
            Filtration::adic(ring.ideal_from_gens(parse_all(generators)?))
        }
        FiltrationDescriptor::Table { members, ext, r } => {
            let handles = members
                .iter()
                .map(|m| Ok(ring.ideal_from_gens(parse_all(m)?)))
                .collect::<Result<Vec<_>>>()?;
            let ext = FreeIdeal::new(ambient, parse_all(ext)?);
            Filtration::table(handles, ext, *r)?
        }
        FiltrationDescriptor::RatliffRush { generators } => {
            Filtration::ratliff_rush(ring.ideal_from_gens(parse_all(generators)?))
        }
    })
}

/// For each n with 2m < n <= d(2m-1)+r, test
/// (a_1^{2m},...,a_d^{2m}) ∩ I_n = (a_1^{2m},...,a_d^{2m}) I_{n-2m},
/// all ideals taken with the defining ideal adjoined. An empty range is a
/// vacuous pass.
pub fn check_intersection_condition(
    f: &Filtration,
    cert: &ReductionCertificate,
    m: usize,
) -> Result<Vec<CheckRecord>> {
    assert!(m >= 1);
    let ring = f.ring();
    let ambient = ring.ambient();
    let j = ring.defining();
    let d = ring.dim();
    let powers: Vec<Polynomial> = cert
        .generators
        .iter()
        .map(|a| {
            let mut acc = a.clone();
            for _ in 1..2 * m {
                acc = ambient.mul(&acc, a);
            }
            acc
        })
        .collect();
    let q2m = FreeIdeal::new(ambient, powers).sum(j);
    let hi = d * (2 * m - 1) + cert.r;
    let mut out = Vec::new();
    for n in (2 * m + 1)..=hi {
        let lhs = q2m.intersection(&f.member(n)?.sum(j));
        let rhs = q2m.product(&f.member(n - 2 * m)?).sum(j);
        out.push(CheckRecord {
            name: format!("intersection m={}", m),
            n,
            holds: lhs.equals(&rhs),
        });
    }
    Ok(out)
}

/// Randomized falsification of the standing Buchsbaum hypothesis on A:
/// parameter ideals drawn with generators in m and in m^2 must all be
/// standard.
pub fn sanity_sample(
    ring: &QuotientRing,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SampleRecord> {
    let mut all_standard = true;
    for trial in 0..trials {
        let degree = if trial % 2 == 0 { 1 } else { 2 };
        let q = random_parameter_ideal(ring, degree, rng)?;
        if !is_standard_sop(ring, &q)? {
            all_standard = false;
            break;
        }
    }
    Ok(SampleRecord {
        trials,
        all_standard,
    })
}

/// Full pipeline: goodness, sanity sampling, reduction search, the m=1
/// intersection condition, and the two independent invariant computations.
pub fn certify_buchsbaum_g(f: &Filtration, config: &CertifyConfig) -> Result<Certificate> {
    let ring = f.ring();
    let d = ring.dim();
    let n_max = config.n_max.unwrap_or(2 * d + 10);
    let mut cert = Certificate {
        ring: describe_ring(ring),
        filtration: describe_filtration(f),
        d,
        r: None,
        beta: None,
        reduction: None,
        buchsbaum_sample: SampleRecord {
            trials: config.trials,
            all_standard: false,
        },
        checks: Vec::new(),
        invariants: None,
        verdict: Verdict::Inconclusive,
        corso: None,
        reason: None,
        seed: config.seed,
    };

    let goodness = f.validate_goodness((n_max + 2).min(8))?;
    if !goodness.passed {
        cert.reason = Some(format!("filtration not good: {:?}", goodness.failures));
        return Ok(cert);
    }
    cert.beta = Some(ring.minimal_generator_count(&f.ideal(1)?)?);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    cert.buchsbaum_sample = sanity_sample(ring, config.trials, &mut rng)?;
    if !cert.buchsbaum_sample.all_standard {
        cert.verdict = Verdict::InputSanityFail;
        cert.reason = Some("sampled system of parameters is not standard".into());
        return Ok(cert);
    }

    let reduction = match f.find_reduction(40, n_max, &mut rng) {
        Ok(r) => r,
        Err(e) => {
            cert.reason = Some(format!("reduction search failed: {}", e));
            return Ok(cert);
        }
    };
    let ambient = ring.ambient();
    cert.r = Some(reduction.r);
    cert.reduction = Some(ReductionRecord {
        generators: reduction
            .generators
            .iter()
            .map(|g| ambient.fmt_poly(g))
            .collect(),
        r: reduction.r,
        verified_up_to: reduction.verified_up_to,
    });
    if !is_standard_sop(ring, &reduction.generators)? {
        cert.verdict = Verdict::InputSanityFail;
        cert.reason = Some("reduction generators are not a standard sop".into());
        return Ok(cert);
    }

    cert.checks = check_intersection_condition(f, &reduction, 1)?;
    let condition_holds = cert.checks.iter().all(|c| c.holds);

    let i_a = invariant_of_sop(ring, &reduction.generators)?.value;
    let profile = match local_cohomology_lengths(ring) {
        Ok(p) => p,
        Err(e) => {
            cert.reason = Some(format!("cohomology profile failed: {}", e));
            return Ok(cert);
        }
    };
    let g = bsb_invariant_of_g(f, &reduction)?;
    cert.invariants = Some(InvariantRecord {
        i_a,
        i_g: g.value,
        h: profile.h.clone(),
    });
    if !g.certified {
        cert.reason = Some("invariant on G did not stabilize under squaring".into());
        return Ok(cert);
    }

    cert.verdict = if condition_holds && g.value == i_a {
        Verdict::GBuchsbaum
    } else {
        Verdict::EqualityFails
    };
    if cert.verdict == Verdict::GBuchsbaum {
        cert.reason = Some(
            "cohomology lengths of G coincide with the recorded profile of A".into(),
        );
    }
    Ok(cert)
}

/// e_1(I) - e_1(Q) >= 2(e_0(I) - l(A/I)) - l(I/(I^2 + Q)).
pub fn corso_boundary_check(
    ring: &QuotientRing,
    ideal: &IdealHandle,
    reduction: &ReductionCertificate,
) -> Result<CorsoRecord> {
    let d = ring.dim();
    let horizon = d + 8;
    let fi = Filtration::adic(ideal.clone());
    let ci = hilbert_coefficients(&hs_function(&fi, horizon)?, d)?;
    let q = ring.ideal_from_gens(reduction.generators.clone());
    let fq = Filtration::adic(q.clone());
    let cq = hilbert_coefficients(&hs_function(&fq, horizon)?, d)?;
    let colength = ring.length(ideal)? as i64;
    let small = ideal.preimage().pow(2).sum(q.preimage());
    let tail = ring.module_length(ideal.preimage(), &small)? as i64;
    let lhs = ci.e[1] - cq.e[1];
    let rhs = 2 * (ci.e[0] - colength) - tail;
    Ok(CorsoRecord {
        lhs,
        rhs,
        holds_geq: lhs >= rhs,
        equal: lhs == rhs,
    })
}

#[derive(Clone, Debug)]
pub struct EquivalenceEntry {
    pub sane: bool,
    pub invariants_equal: Option<bool>,
    pub condition_holds: Option<bool>,
    pub agree: Option<bool>,
}

/// Independently compute (I_G == I_A) and the intersection condition on each
/// battery entry and demand agreement; a divergence is an implementation bug.
pub fn equivalence_selftest(
    battery: &[Filtration],
    config: &CertifyConfig,
) -> Result<Vec<EquivalenceEntry>> {
    let mut out = Vec::new();
    for f in battery {
        let ring = f.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let sample = sanity_sample(ring, config.trials, &mut rng)?;
        if !sample.all_standard {
            out.push(EquivalenceEntry {
                sane: false,
                invariants_equal: None,
                condition_holds: None,
                agree: None,
            });
            continue;
        }
        let n_max = config.n_max.unwrap_or(2 * ring.dim() + 10);
        let reduction = f.find_reduction(40, n_max, &mut rng)?;
        let i_a = invariant_of_sop(ring, &reduction.generators)?.value;
        let g = bsb_invariant_of_g(f, &reduction)?;
        let checks = check_intersection_condition(f, &reduction, 1)?;
        let b2 = g.value == i_a;
        let b3 = checks.iter().all(|c| c.holds);
        out.push(EquivalenceEntry {
            sane: true,
            invariants_equal: Some(b2),
            condition_holds: Some(b3),
            agree: Some(b2 == b3),
        });
    }
    Ok(out)
}

/// Re-run the whole pipeline from the recorded descriptors and seed; the
/// certificate must reproduce itself field for field.
pub fn replay(cert: &Certificate) -> Result<bool> {
    let ring = ring_from_descriptor(&cert.ring)?;
    let f = filtration_from_descriptor(&ring, &cert.filtration)?;
    let config = CertifyConfig {
        trials: cert.buchsbaum_sample.trials,
        seed: cert.seed,
        n_max: None,
    };
    let again = certify_buchsbaum_g(&f, &config)?;
    Ok(again == *cert)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn intersection_condition_examples() {
        let b = xx_xy_ring();
        let f = Filtration::adic(b.maximal_ideal());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cert = f.find_reduction(20, 8, &mut rng).unwrap();
        // d = 1, r = 1: range 2 < n <= 2 is empty
        assert!(check_intersection_condition(&f, &cert, 1).unwrap().is_empty());

        let p = two_planes_ring();
        let fp = Filtration::adic(p.maximal_ideal());
        let cp = fp.find_reduction(20, 8, &mut rng).unwrap();
        let checks = check_intersection_condition(&fp, &cp, 1).unwrap();
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0].n, 3);
        assert!(checks[0].holds);
    }

    #[test]
    fn certify_buchsbaum_examples() {
        let config = CertifyConfig::default();
        let b = xx_xy_ring();
        let cert = certify_buchsbaum_g(&Filtration::adic(b.maximal_ideal()), &config).unwrap();
        assert_eq!(cert.verdict, Verdict::GBuchsbaum);
        let inv = cert.invariants.as_ref().unwrap();
        assert_eq!((inv.i_a, inv.i_g), (1, 1));
        assert_eq!(inv.h, vec![1]);

        let p = two_planes_ring();
        let cert = certify_buchsbaum_g(&Filtration::adic(p.maximal_ideal()), &config).unwrap();
        assert_eq!(cert.verdict, Verdict::GBuchsbaum);
        let inv = cert.invariants.as_ref().unwrap();
        assert_eq!((inv.i_a, inv.i_g), (1, 1));
        assert_eq!(inv.h, vec![0, 1]);
    }

    #[test]
    fn negative_control_fails_sanity() {
        let r = PolyRing::new(32003, &["x", "y", "z"]).unwrap();
        let j = FreeIdeal::new(&r, vec![poly(&r, "x*y"), poly(&r, "x*z")]);
        let a = QuotientRing::new(r, j).unwrap();
        let cert =
            certify_buchsbaum_g(&Filtration::adic(a.maximal_ideal()), &CertifyConfig::default())
                .unwrap();
        assert_eq!(cert.verdict, Verdict::InputSanityFail);
    }

    #[test]
    fn corso_examples() {
        let a = free_xy();
        let ra = a.ambient().clone();
        let q = ReductionCertificate {
            generators: vec![poly(&ra, "x"), poly(&ra, "y")],
            r: 0,
            verified_up_to: 6,
        };
        let rec = corso_boundary_check(&a, &a.maximal_ideal(), &q).unwrap();
        assert_eq!((rec.lhs, rec.rhs), (0, 0));
        assert!(rec.equal);

        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        let qb = ReductionCertificate {
            generators: vec![poly(&rb, "y")],
            r: 1,
            verified_up_to: 6,
        };
        let rec = corso_boundary_check(&b, &b.maximal_ideal(), &qb).unwrap();
        assert_eq!((rec.lhs, rec.rhs), (0, -1));
        assert!(rec.holds_geq && !rec.equal);

        let p = two_planes_ring();
        let rp = p.ambient().clone();
        let qp = ReductionCertificate {
            generators: vec![poly(&rp, "x+z"), poly(&rp, "y+w")],
            r: 1,
            verified_up_to: 6,
        };
        let rec = corso_boundary_check(&p, &p.maximal_ideal(), &qp).unwrap();
        assert_eq!((rec.lhs, rec.rhs), (1, 0));
        assert!(rec.holds_geq && !rec.equal);
    }

    #[test]
    fn certificate_round_trip_and_replay() {
        let b = xx_xy_ring();
        let cert = certify_buchsbaum_g(
            &Filtration::adic(b.maximal_ideal()),
            &CertifyConfig::default(),
        )
        .unwrap();
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(replay(&back).unwrap());
    }

    #[test]
    fn equivalence_on_small_battery() {
        let battery = vec![
            Filtration::adic(free_xy().maximal_ideal()),
            Filtration::adic(xx_xy_ring().maximal_ideal()),
        ];
        let report = equivalence_selftest(&battery, &CertifyConfig::default()).unwrap();
        for entry in report {
            assert!(entry.sane);
            assert_eq!(entry.agree, Some(true));
        }
    }
}
