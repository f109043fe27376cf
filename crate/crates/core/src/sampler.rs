use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::foundation::Rational;

/// Reproducible rational sampler: values in [-5, 5] with denominators at most 4.
pub struct RationalSampler {
    rng: ChaCha8Rng,
}

impl RationalSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_rational(&mut self) -> Rational {
        let q: i64 = self.rng.gen_range(1..=4);
        let p: i64 = self.rng.gen_range(-5 * q..=5 * q);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn next_nonzero(&mut self) -> Rational {
        loop {
            let r = self.next_rational();
            if r != Rational::from_integer(BigInt::from(0)) {
                return r;
            }
        }
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;

    #[test]
    fn deterministic_and_bounded() {
        let mut a = RationalSampler::new(7);
        let mut b = RationalSampler::new(7);
        for _ in 0..200 {
            let x = a.next_rational();
            assert_eq!(x, b.next_rational());
            assert!(x >= rat(-5) && x <= rat(5));
            assert!(x.denom() <= &BigInt::from(4));
        }
    }
}
