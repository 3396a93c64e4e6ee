//! Seeded sampling of spectral parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grassmann::C64;
use crate::rmatrix::Kind;

/// Minimum distance kept from weight zeros.
const REJECT: f64 = 1e-3;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform point of the box [−1,1] × [−1,1]i.
    pub fn point(&mut self) -> C64 {
        C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    /// Free parameter with modulus in [0.4, 1.2] and a uniform phase.
    pub fn param(&mut self) -> C64 {
        let u = self.point();
        // keep parameters away from zero so ratios stay tame
        let r = 0.4 + 0.8 * u.norm() / std::f64::consts::SQRT_2;
        C64::from_polar(r, u.arg())
    }

    /// A (λ, μ) pair where no Boltzmann weight vanishes at λ, μ, λ±μ.
    pub fn pair(&mut self, kind: Kind, eta: C64) -> (C64, C64) {
        loop {
            let (l, m) = (self.point(), self.point());
            if [l, m, l + m, l - m]
                .iter()
                .all(|&x| clear_of_zeros(kind, eta, x))
            {
                return (l, m);
            }
        }
    }

    pub fn single(&mut self, kind: Kind, eta: C64) -> C64 {
        loop {
            let l = self.point();
            if clear_of_zeros(kind, eta, l) && clear_of_zeros(kind, eta, -l) {
                return l;
            }
        }
    }
}

fn clear_of_zeros(kind: Kind, eta: C64, x: C64) -> bool {
    let i = C64::new(0.0, 1.0);
    match kind {
        Kind::Rational => [x, x + i, x - i].iter().all(|v| v.norm() > REJECT),
        Kind::Trigonometric => [x, x + i * eta, x - i * eta]
            .iter()
            .all(|v| v.sinh().norm() > REJECT),
    }
}
