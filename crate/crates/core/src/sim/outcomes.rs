//! Packed single-setting shot records.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;

use crate::error::{Error, Result};
use crate::gf2::words_for;

/// `shots` rows of `n` outcome bits; bit `q` set means qubit `q` read `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcomes {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Outcomes {
    pub fn new(n: usize) -> Self {
        Outcomes { n, stride: words_for(n), bits: Vec::new() }
    }

    pub fn with_capacity(n: usize, shots: usize) -> Self {
        let stride = words_for(n);
        Outcomes { n, stride, bits: Vec::with_capacity(stride * shots) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> usize {
        self.bits.len() / self.stride
    }

    pub fn push(&mut self, shot: &[u64]) {
        debug_assert_eq!(shot.len(), self.stride);
        self.bits.extend_from_slice(shot);
    }

    pub fn shot(&self, s: usize) -> &[u64] {
        &self.bits[s * self.stride..(s + 1) * self.stride]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> {
        self.bits.chunks_exact(self.stride)
    }

    /// `±1` value of qubit `q` in shot `s`.
    pub fn value(&self, s: usize, q: usize) -> i8 {
        if self.shot(s)[q / 64] >> (q % 64) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Each shot takes `ceil(n/8)` bytes, qubit `q` at bit `q % 8` of byte
    /// `q / 8`; the concatenation is standard base64.
    pub fn to_base64(&self) -> String {
        let per = self.n.div_ceil(8);
        let mut bytes = Vec::with_capacity(per * self.shots());
        for shot in self.iter() {
            let le: Vec<u8> = shot.iter().flat_map(|w| w.to_le_bytes()).collect();
            bytes.extend_from_slice(&le[..per]);
        }
        STANDARD.encode(bytes)
    }

    pub fn from_base64(n: usize, text: &str) -> Result<Self> {
        let bytes = STANDARD.decode(text.trim()).map_err(|e| Error::Parse(format!("outcome base64: {e}")))?;
        let per = n.div_ceil(8);
        if per == 0 || bytes.len() % per != 0 {
            return Err(Error::Parse(format!("{} bytes is not a whole number of {n}-qubit shots", bytes.len())));
        }
        let mut out = Outcomes::with_capacity(n, bytes.len() / per);
        let mut shot = vec![0u64; out.stride];
        for chunk in bytes.chunks_exact(per) {
            shot.iter_mut().for_each(|w| *w = 0);
            for (i, &b) in chunk.iter().enumerate() {
                shot[i / 8] |= (b as u64) << (8 * (i % 8));
            }
            if n % 64 != 0 && shot[out.stride - 1] >> (n % 64) != 0 {
                return Err(Error::Parse("outcome bits beyond the qubit count".into()));
            }
            out.push(&shot);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn base64_layout() {
        let mut o = Outcomes::new(3);
        o.push(&[0b101]);
        o.push(&[0b010]);
        assert_eq!(o.to_base64(), STANDARD.encode([0b101u8, 0b010]));
        assert_eq!(o.value(0, 0), -1);
        assert_eq!(o.value(0, 1), 1);
        assert!(Outcomes::from_base64(3, &STANDARD.encode([0b1000u8])).is_err());
        assert!(Outcomes::from_base64(9, &STANDARD.encode([1u8, 0, 0])).is_err());
    }

    proptest! {
        #[test]
        fn base64_round_trip(n in 1usize..130, shots in prop::collection::vec(any::<u128>(), 0..20)) {
            let stride = words_for(n);
            let mut o = Outcomes::new(n);
            for s in &shots {
                let mut w = vec![0u64; stride];
                for q in 0..n.min(128) {
                    if s >> q & 1 == 1 {
                        w[q / 64] |= 1 << (q % 64);
                    }
                }
                o.push(&w);
            }
            let back = Outcomes::from_base64(n, &o.to_base64()).unwrap();
            prop_assert_eq!(back, o);
        }
    }
}
