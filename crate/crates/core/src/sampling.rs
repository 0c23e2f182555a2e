//! Seeded random inputs for identity checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::composition::Composition;
use crate::laurent::LaurentPolynomial;
use crate::scalar::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational `n/d` with `1 <= |n| <= 9`, `1 <= d <= 9`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let n: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new(n, rng.gen_range(1..=9))
}

/// Positive rational away from 0 and 1, used as a spectral point.
pub fn spectral_point<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = Rational::new(rng.gen_range(2..=19), rng.gen_range(2..=11));
        if r != Rational::from(1) {
            return r;
        }
    }
}

/// Random Laurent polynomial with exponents in `[-deg, deg]`.
pub fn random_polynomial<R: Rng>(rng: &mut R, nvars: usize, deg: i32, nterms: usize) -> LaurentPolynomial<Rational> {
    let mut p = LaurentPolynomial::zero(nvars);
    for _ in 0..nterms {
        let e: Vec<i32> = (0..nvars).map(|_| rng.gen_range(-deg..=deg)).collect();
        p.add_term(Composition(e), small_rational(rng));
    }
    p
}
