//! Exact dense reference computations for small systems.

pub mod pauli;
pub mod state;

pub use pauli::{stabilizer, stabilizer_group_element, stabilizer_product, Letter, PauliString};
pub use state::{
    build_graph_state, cut_entropy_dense, entropy, expectation, fidelity, projector_expectation,
    projector_expectation_direct, projector_matrix, reduced_density, schmidt_spectrum, verify_prop2,
    white_noise_state, DensityMatrix, StateRef, StateVector, DENSE_GATE, DENSITY_GATE, PSD_TOL,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph};
use crate::rational::{dyadic, int, Rational};

/// States that make a witness bound hold with equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "which", content = "m")]
pub enum Saturating {
    /// `|0⟩` on vertex 0, graph state on the rest.
    Bisep,
    /// `|+⟩` on the larger of two classes, `|0⟩` on the other.
    Fullsep,
    /// Chain: `|0⟩` on vertices `1, 3, ..., 2⌊m/2⌋-1`, graph state on the rest.
    MsepChain(usize),
    /// Lattice: `|0⟩` on the anti-diagonal `(0,2), (1,1), (2,0)`.
    MsepLattice5,
}

/// A saturating state of the form `|0⟩^{⊗Z} ⊗ |G - Z⟩` with `Z` inside one
/// color class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatingConstruction {
    pub zero_set: Vec<usize>,
    /// Class containing `zero_set`.
    pub class: usize,
    /// Exact `⟨P_l⟩` per class: `2^-|Z|` on `class`, 1 elsewhere.
    pub expectations: Vec<Rational>,
}

/// Chooses the zeroed vertex set for a construction.
pub fn saturating_construction(g: &Graph, coloring: &Coloring, which: Saturating) -> Result<SaturatingConstruction> {
    let coloring = coloring.clone().revalidate(g)?;
    let n = g.n();
    let zero_set: Vec<usize> = match which {
        Saturating::Bisep => {
            if n < 2 {
                return Err(Error::NotApplicable("needs at least 2 qubits".into()));
            }
            vec![0]
        }
        Saturating::Fullsep => {
            if coloring.k() != 2 {
                return Err(Error::NotApplicable(format!("needs a 2-coloring, got k = {}", coloring.k())));
            }
            let small = if coloring.class(1).len() <= coloring.class(0).len() { 1 } else { 0 };
            coloring.class(small).to_vec()
        }
        Saturating::MsepChain(m) => {
            if *g != Graph::chain(n)? {
                return Err(Error::NotApplicable("needs a chain graph".into()));
            }
            if m < 2 || m > n {
                return Err(Error::NotApplicable(format!("m = {m} must satisfy 2 <= m <= {n}")));
            }
            (0..m / 2).map(|j| 2 * j + 1).collect()
        }
        Saturating::MsepLattice5 => {
            let cols = match g.family() {
                Some(crate::graph::Family::Lattice { rows, cols }) if rows >= 3 && cols >= 3 => {
                    if *g != Graph::lattice(rows, cols)? {
                        return Err(Error::NotApplicable("graph does not match its lattice tag".into()));
                    }
                    cols
                }
                _ => return Err(Error::NotApplicable("needs a lattice with at least 3 rows and columns".into())),
            };
            vec![2, cols + 1, 2 * cols]
        }
    };
    let class = coloring.color_of(zero_set[0]);
    if zero_set.iter().any(|&v| coloring.color_of(v) != class) {
        return Err(Error::NotApplicable("zeroed vertices span several color classes".into()));
    }
    let expectations = (0..coloring.k())
        .map(|l| if l == class { dyadic(zero_set.len() as u32) } else { int(1) })
        .collect();
    Ok(SaturatingConstruction { zero_set, class, expectations })
}

/// Dense `|0⟩^{⊗Z} ⊗ |G - Z⟩` for a construction.
pub fn saturating_state(g: &Graph, coloring: &Coloring, which: Saturating, gate: usize) -> Result<StateVector> {
    let c = saturating_construction(g, coloring, which)?;
    if g.n() > gate {
        return Err(Error::GateExceeded { what: "dense saturating state", n: g.n(), gate });
    }
    let (rest, kept) = g.delete_vertices(&c.zero_set)?;
    let zero = StateVector::product(&[[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]])?;
    let mut factors = vec![(kept, build_graph_state(&rest, gate)?)];
    for &v in &c.zero_set {
        factors.push((vec![v], zero.clone()));
    }
    StateVector::tensor(g.n(), &factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::cut_entropy;
    use crate::partition::Partition;
    use crate::rational::to_f64;
    use rand::SeedableRng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn graph_state_amplitudes() {
        let one = build_graph_state(&Graph::chain(1).unwrap(), DENSE_GATE).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(one.amplitudes()[0].re, h, 1e-15) && close(one.amplitudes()[1].re, h, 1e-15));
        let two = build_graph_state(&Graph::chain(2).unwrap(), DENSE_GATE).unwrap();
        let re: Vec<f64> = two.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.5, 0.5, 0.5, -0.5]);
        let l = build_graph_state(&Graph::lattice(3, 3).unwrap(), DENSE_GATE).unwrap();
        assert!(l.amplitudes().iter().all(|a| close(a.norm(), (0.5f64).powf(4.5), 1e-14)));
        assert!(build_graph_state(&Graph::chain(15).unwrap(), DENSE_GATE).is_err());
    }

    #[test]
    fn stabilizers_fix_the_graph_state() {
        for g in [Graph::ring(5).unwrap(), Graph::lattice(2, 4).unwrap(), Graph::star(6).unwrap()] {
            let psi = build_graph_state(&g, DENSE_GATE).unwrap();
            for i in 0..g.n() {
                assert!(close(expectation(&psi, &stabilizer(&g, i).unwrap()).unwrap(), 1.0, 1e-10));
            }
        }
    }

    #[test]
    fn expectation_basics() {
        let mixed = DensityMatrix::maximally_mixed(3);
        assert!(close(expectation(&mixed, &PauliString::parse("XZI").unwrap()).unwrap(), 0.0, 1e-15));
        assert!(close(expectation(&mixed, &PauliString::parse("III").unwrap()).unwrap(), 1.0, 1e-15));
        let zero = StateVector::basis(1, 0);
        assert!(close(expectation(&zero, &PauliString::parse("X").unwrap()).unwrap(), 0.0, 1e-15));
        assert!(close(expectation(&zero, &PauliString::parse("-Z").unwrap()).unwrap(), -1.0, 1e-15));
        let plus_i = StateVector::product(&[[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]]).unwrap();
        assert!(close(expectation(&plus_i, &PauliString::parse("Y").unwrap()).unwrap(), 1.0, 1e-15));
        assert!(expectation(&zero, &PauliString::parse("XX").unwrap()).is_err());
    }

    #[test]
    fn projector_expectations() {
        let g = Graph::chain(6).unwrap();
        let c = g.two_coloring().unwrap();
        let psi = build_graph_state(&g, DENSE_GATE).unwrap();
        let mixed = DensityMatrix::maximally_mixed(6);
        for class in c.classes() {
            assert!(close(projector_expectation(&psi, &g, class).unwrap(), 1.0, 1e-10));
            assert!(close(projector_expectation(&mixed, &g, class).unwrap(), 0.125, 1e-12));
        }
        assert!(projector_expectation(&psi, &g, &[0, 1]).is_err());
    }

    #[test]
    fn projector_paths_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for g in [Graph::ring(5).unwrap(), Graph::lattice(2, 3).unwrap(), Graph::chain(7).unwrap()] {
            let c = g.chromatic_coloring(4).unwrap();
            let psi = StateVector::haar(g.n(), &mut rng);
            let rho = DensityMatrix::pure(&StateVector::haar(g.n(), &mut rng))
                .mix(&DensityMatrix::pure(&StateVector::haar(g.n(), &mut rng)), 0.3)
                .unwrap();
            for class in c.classes() {
                let a = projector_expectation(&psi, &g, class).unwrap();
                let b = projector_expectation_direct(&psi, &g, class).unwrap();
                assert!(close(a, b, 1e-10), "{a} vs {b}");
                let a = projector_expectation(&rho, &g, class).unwrap();
                let b = projector_expectation_direct(&rho, &g, class).unwrap();
                assert!(close(a, b, 1e-10), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn reduced_state_entropies() {
        let g = Graph::chain(6).unwrap();
        let psi = build_graph_state(&g, DENSE_GATE).unwrap();
        let rho = reduced_density(&psi, &[1, 2], DENSITY_GATE).unwrap();
        assert!(close(rho.trace(), 1.0, 1e-12));
        assert!(close(entropy(&rho), 2.0, 1e-8));
        let spec = schmidt_spectrum(&psi, &[1, 2]).unwrap();
        assert!(spec.iter().all(|&l| close(l, 0.25, 1e-9)));
        let prod = StateVector::basis(4, 0b0101);
        assert!(close(cut_entropy_dense(&prod, &[0, 1]).unwrap(), 0.0, 1e-12));
        assert!(matches!(schmidt_spectrum(&psi, &[]), Err(Error::TrivialCut)));
        assert!(matches!(reduced_density(&psi, &[0, 1, 2, 3, 4, 5], 10), Err(Error::TrivialCut)));
    }

    #[test]
    fn fidelity_examples() {
        let g = Graph::ring(5).unwrap();
        let psi = build_graph_state(&g, DENSE_GATE).unwrap();
        assert!(close(fidelity(&DensityMatrix::pure(&psi), &g, DENSE_GATE).unwrap(), 1.0, 1e-12));
        for p in [0.0, 0.3, 1.0] {
            let rho = white_noise_state(&g, p, DENSITY_GATE).unwrap();
            let want = (1.0 - p) + p / 32.0;
            assert!(close(fidelity(&rho, &g, DENSE_GATE).unwrap(), want, 1e-12));
        }
        let star = Graph::star(5).unwrap();
        let c = star.two_coloring().unwrap();
        let b = saturating_state(&star, &c, Saturating::Bisep, DENSE_GATE).unwrap();
        assert!(close(fidelity(&b, &star, DENSE_GATE).unwrap(), 0.5, 1e-12));
        assert!(white_noise_state(&g, 1.5, DENSITY_GATE).is_err());
    }

    #[test]
    fn white_noise_projectors_match_formula() {
        let g = Graph::lattice(2, 3).unwrap();
        let c = g.two_coloring().unwrap();
        for p in [0.0, 0.25, 0.5, 1.0] {
            let rho = white_noise_state(&g, p, DENSITY_GATE).unwrap();
            for class in c.classes() {
                let want = 1.0 - p * (1.0 - (0.5f64).powi(class.len() as i32));
                assert!(close(projector_expectation(&rho, &g, class).unwrap(), want, 1e-12));
            }
        }
    }

    #[test]
    fn prop2_examples() {
        let c6 = Graph::chain(6).unwrap();
        assert!(verify_prop2(&c6, &c6.two_coloring().unwrap(), DENSITY_GATE).unwrap() >= -PSD_TOL);
        let r5 = Graph::ring(5).unwrap();
        let c3 = r5.chromatic_coloring(5).unwrap();
        assert_eq!(c3.k(), 3);
        assert!(verify_prop2(&r5, &c3, DENSITY_GATE).unwrap() >= -PSD_TOL);
        // one qubit, k = 1: the operator is |+⟩⟨+| - P_1 = 0
        let one = Graph::chain(1).unwrap();
        let c1 = Coloring::new(&one, vec![vec![0]]).unwrap();
        assert!(close(verify_prop2(&one, &c1, DENSITY_GATE).unwrap(), 0.0, 1e-12));
    }

    #[test]
    fn saturating_expectations() {
        let star = Graph::star(4).unwrap();
        let c = star.two_coloring().unwrap();
        let s = saturating_state(&star, &c, Saturating::Bisep, DENSE_GATE).unwrap();
        let got: Vec<f64> = c.classes().iter().map(|cl| projector_expectation(&s, &star, cl).unwrap()).collect();
        assert!(close(got[0], 0.5, 1e-12) && close(got[1], 1.0, 1e-12));

        let cases: Vec<(Graph, Saturating)> = vec![
            (Graph::chain(7).unwrap(), Saturating::Fullsep),
            (Graph::lattice(3, 3).unwrap(), Saturating::Fullsep),
            (Graph::lattice(2, 4).unwrap(), Saturating::Bisep),
            (Graph::chain(8).unwrap(), Saturating::MsepChain(4)),
            (Graph::chain(8).unwrap(), Saturating::MsepChain(5)),
            (Graph::lattice(3, 4).unwrap(), Saturating::MsepLattice5),
        ];
        for (g, which) in cases {
            let c = g.two_coloring().unwrap();
            let con = saturating_construction(&g, &c, which).unwrap();
            let s = saturating_state(&g, &c, which, DENSE_GATE).unwrap();
            for (l, class) in c.classes().iter().enumerate() {
                let got = projector_expectation(&s, &g, class).unwrap();
                assert!(close(got, to_f64(&con.expectations[l]), 1e-12), "{which:?} class {l}: {got}");
            }
        }
        let c7 = Graph::chain(7).unwrap();
        let full = saturating_construction(&c7, &c7.two_coloring().unwrap(), Saturating::Fullsep).unwrap();
        assert_eq!(full.expectations.iter().sum::<Rational>(), int(1) + dyadic(3));
        let l5 = Graph::lattice(5, 5).unwrap();
        let con = saturating_construction(&l5, &l5.two_coloring().unwrap(), Saturating::MsepLattice5).unwrap();
        assert_eq!(con.expectations, vec![dyadic(3), int(1)]);
        assert!(saturating_construction(&Graph::ring(5).unwrap(), &Graph::ring(5).unwrap().chromatic_coloring(3).unwrap(), Saturating::Fullsep).is_err());
        assert!(saturating_construction(&Graph::lattice(2, 5).unwrap(), &Graph::lattice(2, 5).unwrap().two_coloring().unwrap(), Saturating::MsepLattice5).is_err());
    }

    #[test]
    fn product_state_fidelity_bounds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let g = Graph::chain(6).unwrap();
        let p = Partition::parse(6, "0,1,1,2,2,2").unwrap();
        for _ in 0..200 {
            let psi = StateVector::haar_product(&p, &mut rng);
            assert!(fidelity(&psi, &g, DENSE_GATE).unwrap() <= 0.25 + 1e-9);
        }
        let bi = Partition::parse(6, "0,1,1,0,0,0").unwrap();
        let s = cut_entropy(&g, &[1, 2]).unwrap().value as i32;
        for _ in 0..200 {
            let psi = StateVector::haar_product(&bi, &mut rng);
            assert!(fidelity(&psi, &g, DENSE_GATE).unwrap() <= (0.5f64).powi(s) + 1e-9);
        }
    }
}
