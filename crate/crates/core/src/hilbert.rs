//! Hilbert-Samuel functions, Hilbert coefficients, parameter multiplicities,
//! and the graded-colength device that evaluates lengths on G(I) purely via
//! ideal arithmetic in A.

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::ideal::FreeIdeal;
use crate::poly::Polynomial;
use crate::quotient::QuotientRing;

/// Values of n -> l(A/I_n) for n = 0..=N.
#[derive(Clone, Debug)]
pub struct HsFunction {
    pub values: Vec<usize>,
}

pub fn hs_function(filtration: &Filtration, horizon: usize) -> Result<HsFunction> {
    let ring = filtration.ring();
    let mut values = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        values.push(ring.length(&filtration.ideal(n)?)?);
    }
    Ok(HsFunction { values })
}

/// Hilbert coefficients e_0..e_d fitted in the binomial basis
/// P(n) = sum_i (-1)^i e_i binom(n+d-1-i, d-i), with the fit verified on
/// two held-out points.
#[derive(Clone, Debug)]
pub struct HilbertCoefficients {
    pub e: Vec<i64>,
    pub fit_window: (usize, usize),
    pub verified: bool,
}

/// binom(a, b) as the polynomial extension prod_k (a-k) / b!.
fn binom_poly(a: i128, b: u32) -> i128 {
    let mut num = 1i128;
    let mut den = 1i128;
    for k in 0..b as i128 {
        num *= a - k;
        den *= k + 1;
    }
    num / den
}

fn hs_poly_eval(e: &[i64], d: usize, n: i128) -> i128 {
    let mut acc = 0i128;
    for (i, ei) in e.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        acc += sign * (*ei as i128) * binom_poly(n + d as i128 - 1 - i as i128, (d - i) as u32);
    }
    acc
}

#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Frac {
        debug_assert!(den != 0);
        let g = gcd(num.abs(), den.abs()).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Frac {
            num: sign * num / g,
            den: sign * den / g,
        }
    }
    fn from_int(n: i128) -> Frac {
        Frac { num: n, den: 1 }
    }
    fn sub_mul(self, a: Frac, b: Frac) -> Frac {
        // self - a*b
        Frac::new(self.num * a.den * b.den - a.num * b.num * self.den, self.den * a.den * b.den)
    }
    fn div(self, other: Frac) -> Frac {
        Frac::new(self.num * other.den, self.den * other.num)
    }
    fn is_zero(self) -> bool {
        self.num == 0
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solve a small dense linear system exactly; returns None when singular.
fn solve_exact(mut a: Vec<Vec<Frac>>, mut b: Vec<Frac>) -> Option<Vec<Frac>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].div(a[col][col]);
                for c in col..n {
                    a[r][c] = a[r][c].sub_mul(factor, a[col][c]);
                }
                b[r] = b[r].sub_mul(factor, b[col]);
            }
        }
    }
    (0..n).map(|i| {
        let x = b[i].div(a[i][i]);
        Some(x)
    }).collect()
}

pub fn hilbert_coefficients(h: &HsFunction, d: usize) -> Result<HilbertCoefficients> {
    let horizon = h.values.len().saturating_sub(1);
    if horizon < d + 3 {
        return Err(Error::UnverifiableFit);
    }
    let lo = horizon - d;
    // rows n = lo..=horizon, unknowns e_0..e_d
    let mut a = Vec::with_capacity(d + 1);
    let mut b = Vec::with_capacity(d + 1);
    for n in lo..=horizon {
        let row: Vec<Frac> = (0..=d)
            .map(|i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                Frac::from_int(sign * binom_poly(n as i128 + d as i128 - 1 - i as i128, (d - i) as u32))
            })
            .collect();
        a.push(row);
        b.push(Frac::from_int(h.values[n] as i128));
    }
    let sol = solve_exact(a, b).ok_or(Error::UnverifiableFit)?;
    let mut e = Vec::with_capacity(d + 1);
    for x in sol {
        if x.den != 1 {
            return Err(Error::UnverifiableFit);
        }
        e.push(x.num as i64);
    }
    // two held-out points below the window
    for n in [lo - 1, lo - 2] {
        if hs_poly_eval(&e, d, n as i128) != h.values[n] as i128 {
            return Err(Error::UnverifiableFit);
        }
    }
    Ok(HilbertCoefficients {
        e,
        fit_window: (lo, horizon),
        verified: true,
    })
}

/// e(Q; A): stable d-th finite difference of n -> l(A/Q^{n+1}), demanded
/// over three consecutive values.
pub fn multiplicity_parameter(ring: &QuotientRing, q_gens: &[Polynomial]) -> Result<usize> {
    if !ring.is_parameter_ideal(q_gens) {
        return Err(Error::NotParameterIdeal);
    }
    let d = ring.dim();
    let ambient = ring.ambient();
    let jgb = ring.defining().gb();
    let q = FreeIdeal::new(ambient, q_gens.to_vec());
    let cap = d + 22;
    let mut power = FreeIdeal::new(
        ambient,
        q.gens().iter().map(|g| jgb.normal_form(g)).collect(),
    );
    let mut values: Vec<i64> = vec![ring.length(&ring.ideal(FreeIdeal::unit(ambient)))? as i64];
    for _ in 0..cap {
        values.push(ring.length(&ring.ideal(power.clone()))? as i64);
        // d-th finite differences of the collected values
        if values.len() >= d + 3 {
            let mut diffs = values.clone();
            for _ in 0..d {
                diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let k = diffs.len();
            if k >= 3 && diffs[k - 1] == diffs[k - 2] && diffs[k - 2] == diffs[k - 3] {
                return Ok(diffs[k - 1] as usize);
            }
        }
        let next = power.product(&q);
        power = FreeIdeal::new(
            ambient,
            next.gens().iter().map(|g| jgb.normal_form(g)).collect(),
        );
    }
    Err(Error::HorizonExceeded("parameter multiplicity", cap))
}

/// l(G/(a_1^{n_1} t^{p n_1}, ..., a_d^{n_d} t^{p n_d}) G) evaluated through
/// A-side ideal arithmetic:
/// sum_k l(I_k / (sum_i a_i^{n_i} I_{k - p n_i} + I_{k+1})).
pub fn graded_colength(
    filtration: &Filtration,
    gens: &[Polynomial],
    p: usize,
    exps: &[usize],
) -> Result<usize> {
    assert_eq!(gens.len(), exps.len());
    let ring = filtration.ring();
    let ambient = ring.ambient();
    let d = ring.dim().max(1);
    let r = filtration.reduction().map(|c| c.r).unwrap_or(0);
    let cap = 2 * (r + p * exps.iter().sum::<usize>() + d) + 10;
    let powers: Vec<Polynomial> = gens
        .iter()
        .zip(exps)
        .map(|(a, e)| {
            let mut acc = a.clone();
            for _ in 1..*e {
                acc = ambient.mul(&acc, a);
            }
            acc
        })
        .collect();
    let mut total = 0usize;
    let mut zero_run = 0usize;
    let needed = d.max(2) + 1;
    for k in 0..=cap {
        let numerator = filtration.member(k)?;
        let mut denom = filtration.member(k + 1)?;
        for (a_pow, e) in powers.iter().zip(exps) {
            let shift = p * e;
            let lower = filtration.member(k.saturating_sub(shift))?;
            let piece = FreeIdeal::new(ambient, vec![a_pow.clone()]).product(&lower);
            denom = denom.sum(&piece);
        }
        let summand = ring.module_length(&numerator, &denom)?;
        total += summand;
        if summand == 0 {
            zero_run += 1;
            if zero_run >= needed {
                return Ok(total);
            }
        } else {
            zero_run = 0;
        }
    }
    Err(Error::HorizonExceeded("graded colength", cap))
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
    fn hs_values() {
        let f = Filtration::adic(free_xy().maximal_ideal());
        let h = hs_function(&f, 5).unwrap();
        assert_eq!(h.values, vec![0, 1, 3, 6, 10, 15]);

        let f2 = Filtration::adic(xx_xy_ring().maximal_ideal());
        // l(A/m^n) = n + 1 for n >= 2; the n = 1 value sits below the line
        let h2 = hs_function(&f2, 5).unwrap();
        assert_eq!(h2.values, vec![0, 1, 3, 4, 5, 6]);

        let f3 = Filtration::adic(two_planes_ring().maximal_ideal());
        let h3 = hs_function(&f3, 4).unwrap();
        // l(A/m^n) = n^2 + n - 1 for n >= 1
        assert_eq!(h3.values, vec![0, 1, 5, 11, 19]);
    }

    #[test]
    fn coefficient_fits() {
        let f = Filtration::adic(free_xy().maximal_ideal());
        let c = hilbert_coefficients(&hs_function(&f, 8).unwrap(), 2).unwrap();
        assert_eq!(c.e, vec![1, 0, 0]);
        assert!(c.verified);

        let f2 = Filtration::adic(xx_xy_ring().maximal_ideal());
        let c2 = hilbert_coefficients(&hs_function(&f2, 8).unwrap(), 1).unwrap();
        assert_eq!(c2.e, vec![1, -1]);

        let f3 = Filtration::adic(two_planes_ring().maximal_ideal());
        let c3 = hilbert_coefficients(&hs_function(&f3, 8).unwrap(), 2).unwrap();
        assert_eq!(c3.e, vec![2, 0, -1]);
    }

    #[test]
    fn multiplicity_examples() {
        let a = free_xy();
        let r = a.ambient().clone();
        assert_eq!(
            multiplicity_parameter(&a, &[poly(&r, "x"), poly(&r, "y")]).unwrap(),
            1
        );

        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        assert_eq!(multiplicity_parameter(&b, &[poly(&rb, "y")]).unwrap(), 1);

        let p = two_planes_ring();
        let rp = p.ambient().clone();
        assert_eq!(
            multiplicity_parameter(&p, &[poly(&rp, "x+z"), poly(&rp, "y+w")]).unwrap(),
            2
        );
    }

    #[test]
    fn graded_colength_examples() {
        let b = xx_xy_ring();
        let rb = b.ambient().clone();
        let f = Filtration::adic(b.maximal_ideal());
        assert_eq!(graded_colength(&f, &[poly(&rb, "y")], 1, &[1]).unwrap(), 2);

        let a = free_xy();
        let ra = a.ambient().clone();
        let fa = Filtration::adic(a.maximal_ideal());
        let q = [poly(&ra, "x"), poly(&ra, "y")];
        assert_eq!(graded_colength(&fa, &q, 1, &[1, 1]).unwrap(), 1);
        assert_eq!(graded_colength(&fa, &q, 1, &[2, 2]).unwrap(), 4);
    }
}
