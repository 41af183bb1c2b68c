//! Command dispatch: evaluates a parsed session against the algebra stack
//! and renders plain-text reports plus JSON certificates.

use crate::certify::{
    certify_buchsbaum_g, corso_boundary_check, sanity_sample, Certificate, CertifyConfig, Verdict,
};
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::hilbert::{hilbert_coefficients, hs_function};
use crate::ideal::FreeIdeal;
use crate::invariant::{
    invariant_of_sop, is_d_sequence, is_standard_sop, is_usd_sequence, is_weak_sequence,
    local_cohomology_lengths,
};
use crate::quotient::{IdealHandle, QuotientRing};
use crate::session::{
    parse_polynomial, Command, FiltSpec, IdealExpr, IdealSource, RingDecl, Session, Stmt,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub trials: usize,
    pub usd_bound: usize,
    /// Scan window for reduction searches; None picks 2d + 10 per ring.
    pub n_max: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            trials: 12,
            usd_bound: 2,
            n_max: None,
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub text: String,
    pub exit_code: i32,
    pub certificates: Vec<Certificate>,
}

/// Rebuild the session over a different prime; coefficients are re-read
/// from the canonical text form and reduced mod the new prime.
pub fn session_with_prime(session: &Session, prime: u64) -> Result<Session> {
    let mut old_rings: Vec<RingDecl> = Vec::new();
    let mut new_rings: Vec<RingDecl> = Vec::new();
    let reparse = |old: &RingDecl, new: &RingDecl, p: &crate::poly::Polynomial| {
        parse_polynomial(&new.ring, &old.ring.fmt_poly(p))
    };
    let mut stmts = Vec::with_capacity(session.stmts.len());
    for stmt in &session.stmts {
        stmts.push(match stmt {
            Stmt::Ring(d) => {
                let vars: Vec<&str> = d.ring.vars().iter().map(|s| s.as_str()).collect();
                let ring = crate::poly::PolyRing::new(prime, &vars)?;
                let shell = RingDecl {
                    name: d.name.clone(),
                    ring,
                    defining: Vec::new(),
                };
                let defining = d
                    .defining
                    .iter()
                    .map(|g| reparse(d, &shell, g))
                    .collect::<Result<Vec<_>>>()?;
                let decl = RingDecl { defining, ..shell };
                old_rings.push(d.clone());
                new_rings.push(decl.clone());
                Stmt::Ring(decl)
            }
            Stmt::Ideal(d) => {
                let source = match &d.source {
                    IdealSource::MaxIdeal(r) => IdealSource::MaxIdeal(r.clone()),
                    IdealSource::Gens(gens) => {
                        let i = old_rings
                            .iter()
                            .position(|r| r.name == d.ring_name)
                            .ok_or(Error::RingMismatch)?;
                        IdealSource::Gens(
                            gens.iter()
                                .map(|g| reparse(&old_rings[i], &new_rings[i], g))
                                .collect::<Result<Vec<_>>>()?,
                        )
                    }
                };
                Stmt::Ideal(crate::session::IdealDecl {
                    name: d.name.clone(),
                    ring_name: d.ring_name.clone(),
                    source,
                })
            }
            Stmt::Command(Command::Dseq(r, seq)) => {
                let i = old_rings
                    .iter()
                    .position(|rd| rd.name == *r)
                    .ok_or(Error::RingMismatch)?;
                Stmt::Command(Command::Dseq(
                    r.clone(),
                    seq.iter()
                        .map(|g| reparse(&old_rings[i], &new_rings[i], g))
                        .collect::<Result<Vec<_>>>()?,
                ))
            }
            other => other.clone(),
        });
    }
    Ok(Session { stmts })
}

struct Env {
    rings: HashMap<String, QuotientRing>,
    ideals: HashMap<String, IdealHandle>,
    filts: HashMap<String, Filtration>,
}

impl Env {
    fn ring(&self, name: &str) -> Result<&QuotientRing> {
        self.rings
            .get(name)
            .ok_or_else(|| Error::Unsupported(format!("unknown ring '{}'", name)))
    }

    fn filt(&self, name: &str) -> Result<&Filtration> {
        self.filts
            .get(name)
            .ok_or_else(|| Error::Unsupported(format!("unknown filtration '{}'", name)))
    }

    fn resolve(&self, e: &IdealExpr) -> Result<IdealHandle> {
        match e {
            IdealExpr::Named(n) => self
                .ideals
                .get(n)
                .cloned()
                .ok_or_else(|| Error::Unsupported(format!("unknown ideal '{}'", n))),
            IdealExpr::MaxIdeal(r) => Ok(self.ring(r)?.maximal_ideal()),
        }
    }
}

fn severity(v: Verdict) -> i32 {
    match v {
        Verdict::GBuchsbaum => 0,
        Verdict::EqualityFails => 2,
        Verdict::InputSanityFail | Verdict::Inconclusive => 3,
    }
}

pub fn run_session(session: &Session, opts: &RunOptions) -> Result<RunOutcome> {
    let mut env = Env {
        rings: HashMap::new(),
        ideals: HashMap::new(),
        filts: HashMap::new(),
    };
    let mut out = String::new();
    let mut exit_code = 0i32;
    let mut certificates = Vec::new();

    for stmt in &session.stmts {
        match stmt {
            Stmt::Ring(d) => {
                let ring = if d.defining.is_empty() {
                    QuotientRing::free(d.ring.clone())?
                } else {
                    let j = FreeIdeal::new(&d.ring, d.defining.clone());
                    QuotientRing::new(d.ring.clone(), j)?
                };
                env.rings.insert(d.name.clone(), ring);
            }
            Stmt::Ideal(d) => {
                let handle = match &d.source {
                    IdealSource::MaxIdeal(r) => env.ring(r)?.maximal_ideal(),
                    IdealSource::Gens(gens) => {
                        env.ring(&d.ring_name)?.ideal_from_gens(gens.clone())
                    }
                };
                env.ideals.insert(d.name.clone(), handle);
            }
            Stmt::Filtration(d) => {
                let filt = match &d.spec {
                    FiltSpec::Adic(e) => Filtration::adic(env.resolve(e)?),
                    FiltSpec::RatliffRush(e) => Filtration::ratliff_rush(env.resolve(e)?),
                    FiltSpec::Table { members, ext, r } => {
                        let handles = members
                            .iter()
                            .map(|e| env.resolve(e))
                            .collect::<Result<Vec<_>>>()?;
                        let ext = env.resolve(ext)?;
                        Filtration::table(handles, ext.preimage().clone(), *r)?
                    }
                };
                env.filts.insert(d.name.clone(), filt);
            }
            Stmt::Command(cmd) => {
                let code = run_command(cmd, &env, opts, &mut out, &mut certificates)?;
                exit_code = exit_code.max(code);
            }
        }
    }
    Ok(RunOutcome {
        text: out,
        exit_code,
        certificates,
    })
}

fn config_for(opts: &RunOptions) -> CertifyConfig {
    CertifyConfig {
        trials: opts.trials,
        seed: opts.seed,
        n_max: opts.n_max,
    }
}

fn run_command(
    cmd: &Command,
    env: &Env,
    opts: &RunOptions,
    out: &mut String,
    certificates: &mut Vec<Certificate>,
) -> Result<i32> {
    let mut code = 0i32;
    match cmd {
        Command::CertifyBuchsbaum(name) => {
            let filt = env.filt(name)?;
            let cert = certify_buchsbaum_g(filt, &config_for(opts))?;
            let _ = writeln!(out, "== certify buchsbaum {} ==", name);
            let _ = writeln!(out, "verdict   {}", cert.verdict);
            let _ = writeln!(out, "d         {}", cert.d);
            if let Some(r) = cert.r {
                let _ = writeln!(out, "r         {}", r);
            }
            if let Some(b) = cert.beta {
                let _ = writeln!(out, "beta      {}", b);
            }
            let _ = writeln!(
                out,
                "sample    {} trials, all standard: {}",
                cert.buchsbaum_sample.trials, cert.buchsbaum_sample.all_standard
            );
            if let Some(inv) = &cert.invariants {
                let _ = writeln!(out, "I(A)      {}", inv.i_a);
                let _ = writeln!(out, "I(G)      {}", inv.i_g);
                let _ = writeln!(out, "h         {:?}", inv.h);
            }
            if cert.checks.is_empty() {
                let _ = writeln!(out, "checks    none (vacuous)");
            } else {
                let held = cert.checks.iter().filter(|c| c.holds).count();
                let _ = writeln!(out, "checks    {}/{} hold", held, cert.checks.len());
            }
            if let Some(reason) = &cert.reason {
                let _ = writeln!(out, "note      {}", reason);
            }
            code = severity(cert.verdict);
            certificates.push(cert);
        }
        Command::Hilbert(name, horizon) => {
            let filt = env.filt(name)?;
            let h = hs_function(filt, *horizon)?;
            let _ = writeln!(out, "== hilbert {} {} ==", name, horizon);
            let _ = writeln!(out, "  n  length");
            for (n, v) in h.values.iter().enumerate() {
                let _ = writeln!(out, "{:>3}  {}", n, v);
            }
            match hilbert_coefficients(&h, filt.ring().dim()) {
                Ok(c) => {
                    let _ = writeln!(out, "e = {:?}  (fit verified)", c.e);
                }
                Err(Error::UnverifiableFit) => {
                    let _ = writeln!(out, "e: fit not verified (raise the horizon)");
                }
                Err(e) => return Err(e),
            }
        }
        Command::Invariant(rname, e) => {
            let ring = env.ring(rname)?;
            let handle = env.resolve(e)?;
            let gens = handle.preimage().gens().to_vec();
            let rep = invariant_of_sop(ring, &gens)?;
            let standard = is_standard_sop(ring, &gens)?;
            let _ = writeln!(out, "== invariant {} ==", rname);
            let _ = writeln!(out, "colength  {}", rep.colength);
            let _ = writeln!(out, "mult      {}", rep.mult);
            let _ = writeln!(out, "I         {}", rep.value);
            let _ = writeln!(out, "standard  {}", standard);
        }
        Command::Dseq(rname, seq) => {
            let ring = env.ring(rname)?;
            let d = is_d_sequence(ring, seq)?;
            let w = is_weak_sequence(ring, seq)?;
            let _ = writeln!(out, "== dseq {} ==", rname);
            let _ = writeln!(out, "d-sequence     {}", d);
            let _ = writeln!(out, "weak sequence  {}", w);
            if seq.len() <= 4 {
                let u = is_usd_sequence(ring, seq, opts.usd_bound)?;
                let _ = writeln!(out, "usd to bound {}  {}", opts.usd_bound, u);
            }
        }
        Command::Corso(name) => {
            let filt = env.filt(name)?;
            let ring = filt.ring();
            let _ = writeln!(out, "== corso {} ==", name);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let sample = sanity_sample(ring, opts.trials, &mut rng)?;
            let n_max = opts.n_max.unwrap_or(2 * ring.dim() + 10);
            let reduction = filt.find_reduction(40, n_max, &mut rng)?;
            let rec = corso_boundary_check(ring, &filt.ideal(1)?, &reduction)?;
            let _ = writeln!(
                out,
                "lhs {}  rhs {}  holds(>=) {}  equal {}",
                rec.lhs, rec.rhs, rec.holds_geq, rec.equal
            );
            if !rec.holds_geq {
                code = 2;
            }
            if rec.equal && sample.all_standard {
                let cert = certify_buchsbaum_g(filt, &config_for(opts))?;
                let _ = writeln!(
                    out,
                    "equality and sanity hold; escalated: verdict {}",
                    cert.verdict
                );
                code = code.max(severity(cert.verdict));
                certificates.push(cert);
            }
        }
        Command::Cohomology(rname) => {
            let ring = env.ring(rname)?;
            let p = local_cohomology_lengths(ring)?;
            let _ = writeln!(out, "== cohomology {} ==", rname);
            let _ = writeln!(out, "h  {:?}", p.h);
            let _ = writeln!(out, "I  {}", p.bsb_invariant);
        }
    }
    Ok(code)
}
