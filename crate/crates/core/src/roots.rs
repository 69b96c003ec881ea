//! Certified roots of polynomials over `ℚ(i)`.
//!
//! Roots of the squarefree part are located as companion-matrix eigenvalues,
//! polished by Newton steps, and certified with the inclusion discs
//! `ρ_k = d·|q(z_k) / (lc·Π_{j≠k}(z_k - z_j))|`. Every root of `q` lies in
//! the union of these discs and a component of `m` discs holds exactly `m`
//! roots, so pairwise disjoint discs isolate one root each. The radii are
//! computed in exact arithmetic at the (dyadic) centers.

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::certified::{sqrt_enclosure, Interval};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{rational_from_f64, rational_to_f64, GaussRat};

/// A root center together with a certified isolation radius.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub center: GaussRat,
    /// Upper bound on the distance from `center` to the unique root of the
    /// squarefree part inside the disc.
    pub radius: BigRational,
}

impl CertifiedRoot {
    pub fn to_complex64(&self) -> Complex64 {
        self.center.to_complex64()
    }

    pub fn radius_f64(&self) -> f64 {
        rational_to_f64(&self.radius)
    }
}

fn companion_eigenvalues(q: &[Complex64]) -> Vec<Complex64> {
    let d = q.len() - 1;
    let lead = q[d];
    if d == 1 {
        return vec![-q[0] / lead];
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -q[i] / lead;
    }
    match Schur::try_new(m, 1e-15, 100_000).and_then(|s| s.eigenvalues()) {
        Some(ev) => ev.iter().copied().collect(),
        None => durand_kerner(q),
    }
}

fn durand_kerner(q: &[Complex64]) -> Vec<Complex64> {
    let d = q.len() - 1;
    let lead = q[d];
    let monic: Vec<Complex64> = q.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let num = horner(&monic, z[k]);
            let den = (0..d).filter(|&j| j != k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[k] - z[j]));
            if den.norm() == 0.0 {
                continue;
            }
            let step = num / den;
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    z
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn newton_f64(q: &[Complex64], dq: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let d = horner(dq, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = horner(q, z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-17 * z.norm().max(1e-300) {
            break;
        }
    }
    z
}

fn dyadic_round(q: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let num = q.numer() * &scale;
    let den = q.denom().clone();
    // floor(num/den + 1/2)
    let two = BigInt::from(2);
    let rounded = (num * &two + &den).div_floor(&(den * two));
    BigRational::new(rounded, scale)
}

fn round_gauss(z: &GaussRat, bits: u32) -> GaussRat {
    GaussRat::new(dyadic_round(&z.re, bits), dyadic_round(&z.im, bits))
}

fn gauss_from_f64(z: Complex64) -> Option<GaussRat> {
    Some(GaussRat::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
}

/// Upper bounds `ρ_k` for the inclusion discs at the given centers.
fn inclusion_radii(q: &Poly, centers: &[GaussRat]) -> Result<Vec<BigRational>> {
    let d = centers.len();
    let lead = q.lead().ok_or(Error::DivisionByZero)?.clone();
    let dd = BigRational::from_integer(BigInt::from(d));
    let mut out = Vec::with_capacity(d);
    for (k, zk) in centers.iter().enumerate() {
        let mut den = lead.clone();
        for (j, zj) in centers.iter().enumerate() {
            if j != k {
                den = &den * &(zk - zj);
            }
        }
        let w = q.eval(zk).checked_div(&den)?;
        let hi = sqrt_enclosure(&w.norm_sqr(), 64).hi;
        out.push(dd.clone() * hi);
    }
    Ok(out)
}

fn discs_disjoint(centers: &[GaussRat], radii: &[BigRational]) -> bool {
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let dist = sqrt_enclosure(&(&centers[i] - &centers[j]).norm_sqr(), 64);
            let reach = Interval::point(&radii[i] + &radii[j]);
            if dist.lo <= reach.hi {
                return false;
            }
        }
    }
    true
}

/// Certified roots of `p`, one per distinct root, sorted by
/// `(re, im)` of the centers. `tol` bounds every returned radius.
pub fn certified_roots(p: &Poly, tol: f64) -> Result<Vec<CertifiedRoot>> {
    let deg = p.degree().ok_or(Error::DivisionByZero)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let q = p.squarefree_part();
    let d = q.degree().expect("nonzero");
    let qf = q.to_complex64();
    let dqf = q.derivative().to_complex64();
    let tol_q = rational_from_f64(tol).ok_or_else(|| Error::Usage("tolerance must be finite".into()))?;

    let raw = companion_eigenvalues(&qf);
    let polished: Vec<Complex64> = raw.iter().map(|&z| newton_f64(&qf, &dqf, z)).collect();
    // Newton may pull two nearby approximations onto the same root
    let approx = if min_gap(&polished) < 0.5 * min_gap(&raw) { raw } else { polished };
    let mut centers: Vec<GaussRat> = approx
        .iter()
        .map(|&z| gauss_from_f64(z).ok_or_else(|| Error::Usage(format!("root finder diverged at {z}"))))
        .collect::<Result<_>>()?;
    let mut bits = 64u32;
    loop {
        separate(&mut centers, bits);
        let radii = inclusion_radii(&q, &centers)?;
        if discs_disjoint(&centers, &radii) && radii.iter().all(|r| *r <= tol_q) {
            let mut roots: Vec<CertifiedRoot> = centers
                .into_iter()
                .zip(radii)
                .map(|(center, radius)| CertifiedRoot { center, radius })
                .collect();
            roots.sort_by(|a, b| a.center.cmp(&b.center));
            debug_assert_eq!(roots.len(), d);
            return Ok(roots);
        }
        if bits > 4096 {
            return Err(Error::Usage(format!("could not isolate the roots of {p}")));
        }
        bits *= 2;
        for _ in 0..6 {
            centers = weierstrass_step(&q, &centers, bits)?;
        }
    }
}

fn min_gap(z: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            g = g.min((z[i] - z[j]).norm());
        }
    }
    g
}

/// Nudges coinciding centers apart by a few units of `2^-bits`.
fn separate(centers: &mut [GaussRat], bits: u32) {
    let unit = BigRational::new(BigInt::one(), BigInt::one() << bits);
    for k in 1..centers.len() {
        let mut bump = 1i64;
        while centers[..k].contains(&centers[k]) {
            let b = &unit * BigRational::from_integer(BigInt::from(bump));
            centers[k] = &centers[k] + &GaussRat::new(b.clone(), b);
            bump += 1;
        }
    }
}

/// One simultaneous Weierstrass correction `z_k ← z_k - W_k`, rounded to
/// the dyadic grid `2^-bits`.
fn weierstrass_step(q: &Poly, centers: &[GaussRat], bits: u32) -> Result<Vec<GaussRat>> {
    let lead = q.lead().ok_or(Error::DivisionByZero)?;
    let mut out = Vec::with_capacity(centers.len());
    for (k, zk) in centers.iter().enumerate() {
        let mut den = lead.clone();
        for (j, zj) in centers.iter().enumerate() {
            if j != k {
                den = &den * &(zk - zj);
            }
        }
        let w = q.eval(zk).checked_div(&den)?;
        out.push(round_gauss(&(zk - &w), bits));
    }
    separate(&mut out, bits);
    Ok(out)
}

/// Upper bound on `|z - fl(z)|` when a center is printed as a double pair.
pub fn rounding_slack(z: &GaussRat) -> BigRational {
    let f = z.to_complex64();
    let back = gauss_from_f64(f).unwrap_or_else(GaussRat::zero);
    let d = &back - z;
    d.re.abs() + d.im.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let p = Poly::from_ints(&[1, 0, 1]);
        let r = certified_roots(&p, 1e-10).unwrap();
        assert_eq!(r.len(), 2);
        let z: Vec<Complex64> = r.iter().map(CertifiedRoot::to_complex64).collect();
        assert!((z[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((z[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn multiplicity_collapses() {
        // (T-1)^3 (T+2)^2
        let p = Poly::from_ints(&[-1, 1]).pow(3).mul(&Poly::from_ints(&[2, 1]).pow(2));
        let r = certified_roots(&p, 1e-10).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.radius_f64() <= 1e-10));
    }

    #[test]
    fn close_roots() {
        // (T - 1)(T - 1 - 1e-9)
        let a = GaussRat::real(BigRational::new(1_000_000_001.into(), 1_000_000_000.into()));
        let p = Poly::linear_root(&GaussRat::one()).mul(&Poly::linear_root(&a));
        let r = certified_roots(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(certified_roots(&Poly::from_ints(&[3]), 1e-10).unwrap().is_empty());
        assert!(certified_roots(&Poly::zero(), 1e-10).is_err());
    }
}
