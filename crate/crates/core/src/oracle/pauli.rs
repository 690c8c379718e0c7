//! Pauli strings in symplectic form with exact phase tracking.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::gf2::{get_bit, popcount, set_bit, words_for};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

/// `i^phase · X^x Z^z` on `n` qubits (X part applied after Z).
///
/// With `Y = iXZ`, a Hermitian string with letters from `{I, X, Y, Z}` and
/// sign `±1` has `phase = #Y + (0 or 2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    pub(crate) x: Vec<u64>,
    pub(crate) z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString { n, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    /// Builds from letters and a sign.
    pub fn from_letters(letters: &[Letter], negative: bool) -> Self {
        let mut p = Self::identity(letters.len());
        let mut ys = 0u8;
        for (q, l) in letters.iter().enumerate() {
            let (x, z) = match l {
                Letter::I => (false, false),
                Letter::X => (true, false),
                Letter::Y => (true, true),
                Letter::Z => (false, true),
            };
            set_bit(&mut p.x, q, x);
            set_bit(&mut p.z, q, z);
            ys += (x && z) as u8;
        }
        p.phase = (ys + if negative { 2 } else { 0 }) % 4;
        p
    }

    /// Parses `"+XZI"`, `"-YY"` or `"ZXZ"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let (negative, body) = match t.chars().next() {
            Some('-') => (true, &t[1..]),
            Some('+') => (false, &t[1..]),
            _ => (false, t),
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(Error::Parse(format!("bad Pauli letter {c:?} in {text:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(Self::from_letters(&letters, negative))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exponent of `i` in the `X^x Z^z` form.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, q: usize) -> Letter {
        match (get_bit(&self.x, q), get_bit(&self.z, q)) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    fn y_count(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// Sign in the letter representation, `Some(±1)` for Hermitian strings
    /// and `None` when the overall factor is `±i`.
    pub fn sign(&self) -> Option<i8> {
        match (self.phase as u32 + 4 - self.y_count() % 4) % 4 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn weight(&self) -> u32 {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones()).sum()
    }

    pub fn is_identity(&self) -> bool {
        popcount(&self.x) == 0 && popcount(&self.z) == 0
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let s: u32 = (0..self.x.len())
            .map(|w| (self.x[w] & other.z[w]).count_ones() + (self.z[w] & other.x[w]).count_ones())
            .sum();
        s % 2 == 0
    }

    /// `X^x` and `Z^z` masks for dense use; requires `n <= 64`.
    pub(crate) fn masks(&self) -> (u64, u64) {
        (self.x[0], self.z[0])
    }

    /// Product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!("{} and {} qubits", self.n, rhs.n)));
        }
        // X^a Z^b X^c Z^d = (-1)^{b·c} X^{a+c} Z^{b+d}
        let swaps: u32 = self.z.iter().zip(&rhs.x).map(|(b, c)| (b & c).count_ones()).sum();
        let x = self.x.iter().zip(&rhs.x).map(|(a, c)| a ^ c).collect();
        let z = self.z.iter().zip(&rhs.z).map(|(b, d)| b ^ d).collect();
        let phase = ((self.phase as u32 + rhs.phase as u32 + 2 * swaps) % 4) as u8;
        Ok(PauliString { n: self.n, x, z, phase })
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        PauliString::mul(self, rhs).expect("matching qubit counts")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match (self.phase as u32 + 4 - self.y_count() % 4) % 4 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for l in self.letters() {
            f.write_str(match l {
                Letter::I => "I",
                Letter::X => "X",
                Letter::Y => "Y",
                Letter::Z => "Z",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `S_i = X_i ⊗_{j ∈ N_i} Z_j`.
pub fn stabilizer(g: &Graph, i: usize) -> Result<PauliString> {
    if i >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: i, n: g.n() });
    }
    let mut p = PauliString::identity(g.n());
    set_bit(&mut p.x, i, true);
    p.z.copy_from_slice(g.adjacency_row(i));
    Ok(p)
}

/// `K_p = S_0^{p_0} S_1^{p_1} ... S_{n-1}^{p_{n-1}}` (ordered product).
pub fn stabilizer_group_element(g: &Graph, p: &[bool]) -> Result<PauliString> {
    if p.len() != g.n() {
        return Err(Error::DimensionMismatch(format!("{} exponents for {} generators", p.len(), g.n())));
    }
    let mut acc = PauliString::identity(g.n());
    for (i, &on) in p.iter().enumerate() {
        if on {
            acc = &acc * &stabilizer(g, i)?;
        }
    }
    Ok(acc)
}

/// Group element from the generators indexed by `set`.
pub fn stabilizer_product(g: &Graph, set: &[usize]) -> Result<PauliString> {
    let mut p = vec![false; g.n()];
    for &i in set {
        if i >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: i, n: g.n() });
        }
        p[i] = true;
    }
    stabilizer_group_element(g, &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn chain_stabilizer() {
        let g = Graph::chain(3).unwrap();
        assert_eq!(stabilizer(&g, 1).unwrap().to_string(), "+ZXZ");
        assert_eq!(stabilizer(&g, 0).unwrap().to_string(), "+XZI");
        assert!(stabilizer(&g, 3).is_err());
    }

    #[test]
    fn identity_element() {
        let g = Graph::ring(5).unwrap();
        let e = stabilizer_group_element(&g, &[false; 5]).unwrap();
        assert!(e.is_identity());
        assert_eq!(e.sign(), Some(1));
        assert_eq!(e.to_string(), "+IIIII");
    }

    #[test]
    fn products_track_signs() {
        // S_0 S_1 on chain(2) = (XZ)(ZX) = (XZ)(ZX) -> Y Y with sign +1
        let g = Graph::chain(2).unwrap();
        let k = stabilizer_product(&g, &[0, 1]).unwrap();
        assert_eq!(k.to_string(), "+YY");
        // chain(3): S_0 S_1 = (X Z I)(Z X Z) = (XZ)(ZX)(Z) = (-iY)(iY)Z = Y Y Z
        let g3 = Graph::chain(3).unwrap();
        assert_eq!(stabilizer_product(&g3, &[0, 1]).unwrap().to_string(), "+YYZ");
        let x = PauliString::parse("X").unwrap();
        let z = PauliString::parse("Z").unwrap();
        assert_eq!((&x * &z).to_string(), "-iY");
        assert_eq!((&z * &x).to_string(), "+iY");
        let y = PauliString::parse("Y").unwrap();
        assert!((&y * &y).is_identity());
        assert_eq!((&y * &y).sign(), Some(1));
        assert_eq!(PauliString::parse("-XYZ").unwrap().to_string(), "-XYZ");
        assert!(PauliString::parse("XA").is_err());
    }

    #[test]
    fn stabilizers_commute() {
        let g = Graph::lattice(3, 3).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                assert!(stabilizer(&g, i).unwrap().commutes_with(&stabilizer(&g, j).unwrap()));
            }
        }
        assert!(!PauliString::parse("X").unwrap().commutes_with(&PauliString::parse("Z").unwrap()));
    }

    #[test]
    fn subsystem_stabilizers() {
        // 4 x 6 lattice without its bottom row; vertex ids are row-major
        let g = Graph::lattice(4, 6).unwrap();
        let (sub, _) = g.delete_vertices(&(18..24).collect::<Vec<_>>()).unwrap();
        assert_eq!(sub, Graph::lattice(3, 6).unwrap());
        let s0 = stabilizer(&sub, 0).unwrap();
        assert_eq!(s0.letters().iter().filter(|&&l| l != Letter::I).count(), 3);
        assert_eq!(s0.letter(0), Letter::X);
        assert_eq!(s0.letter(1), Letter::Z);
        assert_eq!(s0.letter(6), Letter::Z);
        let s1 = stabilizer(&sub, 1).unwrap();
        let support: Vec<_> = (0..18).filter(|&q| s1.letter(q) != Letter::I).collect();
        assert_eq!(support, vec![0, 1, 2, 7]);
        assert_eq!(s1.letter(1), Letter::X);
    }

    proptest! {
        #[test]
        fn group_elements_are_hermitian(mask in 0u32..(1 << 9)) {
            let g = Graph::lattice(3, 3).unwrap();
            let p: Vec<bool> = (0..9).map(|i| mask >> i & 1 == 1).collect();
            let k = stabilizer_group_element(&g, &p).unwrap();
            prop_assert!(k.sign().is_some());
            // the X part of K_p is exactly p
            for (q, &bit) in p.iter().enumerate() {
                prop_assert_eq!(get_bit(&k.x, q), bit);
            }
        }

        #[test]
        fn multiplication_is_associative(a in "[IXYZ]{4}", b in "[IXYZ]{4}", c in "[IXYZ]{4}") {
            let (a, b, c) = (PauliString::parse(&a).unwrap(), PauliString::parse(&b).unwrap(), PauliString::parse(&c).unwrap());
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }
    }
}
