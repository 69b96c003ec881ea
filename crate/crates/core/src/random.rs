//! Seeded generators for randomized certificate runs.
//!
//! Every trial gets its own generator derived from `(seed, stream, index)`,
//! so results do not depend on how trials are scheduled across workers.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;
use crate::scalar::GaussRat;

pub type TrialRng = ChaCha8Rng;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for trial `index` of the stream `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> TrialRng {
    let key = splitmix(splitmix(splitmix(seed) ^ stream) ^ index);
    ChaCha8Rng::seed_from_u64(key)
}

/// Rational `p/q` with `|p| ≤ num_bound`, `1 ≤ q ≤ den_bound`.
pub fn rational(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> BigRational {
    let p = rng.random_range(-num_bound..=num_bound);
    let q = rng.random_range(1..=den_bound.max(1));
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Gaussian rational with both parts drawn by [`rational`].
pub fn gauss(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> GaussRat {
    GaussRat::new(rational(rng, num_bound, den_bound), rational(rng, num_bound, den_bound))
}

/// Gaussian rational that is nonzero.
pub fn gauss_nonzero(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> GaussRat {
    loop {
        let g = gauss(rng, num_bound, den_bound);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Coefficient vector of length `len`; each entry is zero with probability
/// `sparsity`.
pub fn gauss_vec(rng: &mut impl Rng, len: usize, num_bound: i64, den_bound: i64, sparsity: f64) -> Vec<GaussRat> {
    (0..len)
        .map(|_| {
            if rng.random_bool(sparsity) {
                GaussRat::zero()
            } else {
                gauss(rng, num_bound, den_bound)
            }
        })
        .collect()
}

/// Polynomial of exact degree `degree` with bounded Gaussian coefficients.
pub fn poly(rng: &mut impl Rng, degree: usize, num_bound: i64, den_bound: i64) -> Poly {
    let mut c = gauss_vec(rng, degree, num_bound, den_bound, 0.2);
    c.push(gauss_nonzero(rng, num_bound, den_bound));
    Poly::new(c)
}

/// Polynomial of exact degree `degree` with rational (real) coefficients.
pub fn real_poly(rng: &mut impl Rng, degree: usize, num_bound: i64, den_bound: i64) -> Poly {
    let mut c: Vec<GaussRat> = (0..degree)
        .map(|_| GaussRat::real(rational(rng, num_bound, den_bound)))
        .collect();
    let lead = loop {
        let q = rational(rng, num_bound, den_bound);
        if q != BigRational::from_integer(BigInt::from(0)) {
            break q;
        }
    };
    c.push(GaussRat::real(lead));
    Poly::new(c)
}
