//! Born-rule sampling from a dense state vector.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::pauli::Letter;
use crate::oracle::StateVector;

#[derive(Clone, Debug)]
pub struct DenseSampler {
    n: usize,
    cdf: Vec<f64>,
}

impl DenseSampler {
    /// Rotates each measured qubit to the computational basis (`H` for X,
    /// `H S†` for Y) and tabulates the outcome distribution.
    pub fn new(psi: &StateVector, bases: &[Letter]) -> Result<Self> {
        let n = psi.n();
        if bases.len() != n {
            return Err(Error::DimensionMismatch(format!("{} bases for {n} qubits", bases.len())));
        }
        let mut amps = psi.amplitudes().to_vec();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (q, b) in bases.iter().enumerate() {
            let bit = 1usize << q;
            match b {
                Letter::Z => continue,
                Letter::I => return Err(Error::InvalidContext("identity is not a measurement basis".into())),
                Letter::X | Letter::Y => {
                    for i in 0..amps.len() {
                        if i & bit != 0 {
                            continue;
                        }
                        let a0 = amps[i];
                        let mut a1 = amps[i | bit];
                        if *b == Letter::Y {
                            a1 *= Complex64::new(0.0, -1.0);
                        }
                        amps[i] = (a0 + a1) * h;
                        amps[i | bit] = (a0 - a1) * h;
                    }
                }
            }
        }
        let mut acc = 0.0;
        let cdf = amps
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        Ok(DenseSampler { n, cdf })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Probability of the computational outcome `b` after rotation.
    pub fn probability(&self, b: usize) -> f64 {
        self.cdf[b] - if b == 0 { 0.0 } else { self.cdf[b - 1] }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u64]) {
        let total = *self.cdf.last().expect("nonempty");
        let u: f64 = rng.random::<f64>() * total;
        let b = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        out[0] = b as u64;
        out[1..].iter_mut().for_each(|w| *w = 0);
    }
}
