//! Dense state vectors and density matrices.
//!
//! Qubit `q` is bit `q` of the basis index.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::pauli::{stabilizer_product, PauliString};
use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph};
use crate::partition::Partition;

/// Default qubit cap for state vectors.
pub const DENSE_GATE: usize = 14;
/// Default qubit cap for density matrices and eigenvalue checks.
pub const DENSITY_GATE: usize = 10;
/// Eigenvalues at or above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn gate_check(what: &'static str, n: usize, gate: usize) -> Result<()> {
    if n > gate {
        Err(Error::GateExceeded { what, n, gate })
    } else {
        Ok(())
    }
}

fn i_pow(phase: u8) -> Complex64 {
    match phase % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes after normalizing them.
    pub fn new(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidSize("zero vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n, amps })
    }

    /// `|b⟩` for a basis index.
    pub fn basis(n: usize, b: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[b] = ONE;
        StateVector { n, amps }
    }

    /// `⊗_q |φ_q⟩` from single-qubit states `[⟨0|φ⟩, ⟨1|φ⟩]`.
    pub fn product(qubits: &[[Complex64; 2]]) -> Result<Self> {
        let n = qubits.len();
        let amps = (0..1usize << n).map(|b| (0..n).map(|q| qubits[q][b >> q & 1]).product()).collect();
        Self::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `P|ψ⟩`.
    pub fn apply(&self, p: &PauliString) -> Result<Self> {
        self.check(p.n())?;
        let (x, z) = p.masks();
        let c = i_pow(p.phase());
        let mut out = vec![ZERO; self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            let s = if (z & b as u64).count_ones() % 2 == 1 { -c } else { c };
            out[b ^ x as usize] = s * a;
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch(format!("{n}-qubit operator on {} qubits", self.n)));
        }
        Ok(())
    }

    /// Haar-random pure state.
    pub fn haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(n, amps).expect("nonzero Gaussian vector")
    }

    /// Product over the blocks of `p` of independent Haar-random block states.
    pub fn haar_product<R: Rng + ?Sized>(p: &Partition, rng: &mut R) -> Self {
        let factors: Vec<(Vec<usize>, StateVector)> =
            p.blocks().iter().map(|b| (b.clone(), Self::haar(b.len(), rng))).collect();
        Self::tensor(p.n(), &factors).expect("blocks cover the qubits")
    }

    /// `⊗_f |φ_f⟩` where factor `f` occupies qubits `pos_f` (its qubit `j`
    /// is `pos_f[j]`). The position lists must partition `0..n`.
    pub fn tensor(n: usize, factors: &[(Vec<usize>, StateVector)]) -> Result<Self> {
        let mut seen = vec![false; n];
        for (pos, st) in factors {
            if pos.len() != st.n {
                return Err(Error::DimensionMismatch("factor positions".into()));
            }
            for &q in pos {
                if q >= n || seen[q] {
                    return Err(Error::DimensionMismatch("factor positions overlap or exceed n".into()));
                }
                seen[q] = true;
            }
        }
        if seen.iter().any(|&t| !t) {
            return Err(Error::DimensionMismatch("factors do not cover every qubit".into()));
        }
        let amps = (0..1usize << n)
            .map(|b| {
                factors
                    .iter()
                    .map(|(pos, st)| {
                        let local = pos.iter().enumerate().fold(0, |acc, (j, &q)| acc | (b >> q & 1) << j);
                        st.amps[local]
                    })
                    .product()
            })
            .collect();
        Ok(StateVector { n, amps })
    }
}

/// `|G⟩ = ∏_{(i,j)∈E} CZ_ij |+⟩^n`.
pub fn build_graph_state(g: &Graph, gate: usize) -> Result<StateVector> {
    gate_check("dense graph state", g.n(), gate)?;
    let n = g.n();
    let amp = (0.5f64).powf(n as f64 / 2.0);
    let edges = g.edges();
    let amps = (0..1usize << n)
        .map(|b| {
            let odd = edges.iter().filter(|&&(i, j)| b >> i & b >> j & 1 == 1).count() % 2 == 1;
            Complex64::new(if odd { -amp } else { amp }, 0.0)
        })
        .collect();
    Ok(StateVector { n, amps })
}

/// Hermitian unit-trace positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(&psi.amps);
        DensityMatrix { n: psi.n, m: &v * v.adjoint() }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        DensityMatrix { n, m: DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0) }
    }

    /// Convex combination `(1-w)·self + w·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("mixing states of different size".into()));
        }
        Ok(DensityMatrix { n: self.n, m: &self.m * Complex64::new(1.0 - w, 0.0) + &other.m * Complex64::new(w, 0.0) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.m - self.m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.m.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap(&self, psi: &StateVector) -> Result<f64> {
        if psi.n != self.n {
            return Err(Error::DimensionMismatch("state and density sizes differ".into()));
        }
        let v = nalgebra::DVector::from_column_slice(&psi.amps);
        Ok((v.adjoint() * &self.m * &v)[(0, 0)].re)
    }
}

/// `(1-p)|G⟩⟨G| + p·I/2^n`.
pub fn white_noise_state(g: &Graph, p: f64, gate: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    gate_check("density matrix", g.n(), gate)?;
    let psi = build_graph_state(g, gate)?;
    DensityMatrix::pure(&psi).mix(&DensityMatrix::maximally_mixed(g.n()), p)
}

/// Either operand of an expectation.
#[derive(Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(d: &'a DensityMatrix) -> Self {
        StateRef::Mixed(d)
    }
}

impl StateRef<'_> {
    fn n(&self) -> usize {
        match self {
            StateRef::Pure(s) => s.n,
            StateRef::Mixed(d) => d.n,
        }
    }
}

/// `Tr(ρP)`; real for Hermitian `P`.
pub fn expectation<'a>(state: impl Into<StateRef<'a>>, p: &PauliString) -> Result<f64> {
    let state = state.into();
    if state.n() != p.n() {
        return Err(Error::DimensionMismatch(format!("{}-qubit Pauli on {} qubits", p.n(), state.n())));
    }
    let (x, z) = p.masks();
    let c = i_pow(p.phase());
    let d = 1usize << p.n();
    let mut acc = ZERO;
    for b in 0..d {
        let s = if (z & b as u64).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        let bx = b ^ x as usize;
        // ⟨b⊕x| P |b⟩ = s·c, so Tr(ρP) = Σ_b ρ[b][b⊕x]·s·c
        let rho = match &state {
            StateRef::Pure(psi) => psi.amps[b] * psi.amps[bx].conj(),
            StateRef::Mixed(m) => m.m[(b, bx)],
        };
        acc += rho * s;
    }
    Ok((acc * c).re)
}

fn check_class(g: &Graph, class: &[usize]) -> Result<()> {
    if class.is_empty() {
        return Err(Error::InvalidColoring("empty class".into()));
    }
    if let Some(&v) = class.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if !g.is_independent(class) {
        return Err(Error::InvalidColoring("class is not an independent set".into()));
    }
    Ok(())
}

/// `⟨P_l⟩` as the average of `⟨K_T⟩` over all `T ⊆ V_l`.
pub fn projector_expectation<'a>(state: impl Into<StateRef<'a>>, g: &Graph, class: &[usize]) -> Result<f64> {
    let state = state.into();
    check_class(g, class)?;
    if class.len() > 30 {
        return Err(Error::GateExceeded { what: "projector subgroup average", n: class.len(), gate: 30 });
    }
    let mut sum = 0.0;
    for t in 0u64..1 << class.len() {
        let set: Vec<usize> = class.iter().enumerate().filter(|(j, _)| t >> j & 1 == 1).map(|(_, &v)| v).collect();
        let k = stabilizer_product(g, &set)?;
        sum += expectation(state, &k)?;
    }
    Ok(sum / (1u64 << class.len()) as f64)
}

/// Dense matrix of a Pauli string.
pub fn pauli_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let d = 1usize << p.n();
    let (x, z) = p.masks();
    let c = i_pow(p.phase());
    let mut m = DMatrix::from_element(d, d, ZERO);
    for b in 0..d {
        let s = if (z & b as u64).count_ones() % 2 == 1 { -c } else { c };
        m[(b ^ x as usize, b)] = s;
    }
    m
}

/// Dense `P_l = ∏_{i∈V_l} (S_i + I)/2`, by matrix products.
pub fn projector_matrix(g: &Graph, class: &[usize], gate: usize) -> Result<DMatrix<Complex64>> {
    check_class(g, class)?;
    gate_check("dense projector", g.n(), gate)?;
    let d = 1usize << g.n();
    let half = Complex64::new(0.5, 0.0);
    let mut acc = DMatrix::identity(d, d);
    for &i in class {
        let s = pauli_matrix(&super::pauli::stabilizer(g, i)?);
        let factor = (s + DMatrix::identity(d, d)) * half;
        acc *= factor;
    }
    Ok(acc)
}

/// `⟨P_l⟩` from the explicit projector: repeated `(S_i+I)/2` on a pure
/// state, or `Tr(ρ P_l)` with the dense matrix for a mixed one.
pub fn projector_expectation_direct<'a>(state: impl Into<StateRef<'a>>, g: &Graph, class: &[usize]) -> Result<f64> {
    match state.into() {
        StateRef::Pure(psi) => {
            check_class(g, class)?;
            let mut phi = psi.clone();
            for &i in class {
                let s = phi.apply(&super::pauli::stabilizer(g, i)?)?;
                for (a, b) in phi.amps.iter_mut().zip(&s.amps) {
                    *a = (*a + b) * 0.5;
                }
            }
            Ok(psi.inner(&phi).re)
        }
        StateRef::Mixed(rho) => {
            let p = projector_matrix(g, class, DENSITY_GATE.max(rho.n))?;
            Ok((&rho.m * p).trace().re)
        }
    }
}

/// Rearranges amplitudes into the `2^|A| x 2^|Ā|` matrix `M` with
/// `ρ_A = M M†`.
fn bipartite_matrix(psi: &StateVector, a: &[usize]) -> Result<(DMatrix<Complex64>, usize, usize)> {
    let n = psi.n;
    let mut in_a = vec![false; n];
    for &q in a {
        if q >= n {
            return Err(Error::VertexOutOfRange { vertex: q, n });
        }
        in_a[q] = true;
    }
    let na = in_a.iter().filter(|&&t| t).count();
    if na == 0 || na == n {
        return Err(Error::TrivialCut);
    }
    let a_sorted: Vec<usize> = (0..n).filter(|&q| in_a[q]).collect();
    let b_sorted: Vec<usize> = (0..n).filter(|&q| !in_a[q]).collect();
    let mut m = DMatrix::from_element(1 << na, 1 << (n - na), ZERO);
    for (idx, &amp) in psi.amps.iter().enumerate() {
        let r = a_sorted.iter().enumerate().fold(0, |acc, (j, &q)| acc | (idx >> q & 1) << j);
        let c = b_sorted.iter().enumerate().fold(0, |acc, (j, &q)| acc | (idx >> q & 1) << j);
        m[(r, c)] = amp;
    }
    Ok((m, na, n - na))
}

/// Partial trace over `Ā`; qubit `j` of the result is the `j`-th smallest
/// element of `a`.
pub fn reduced_density(psi: &StateVector, a: &[usize], gate: usize) -> Result<DensityMatrix> {
    let (m, na, _) = bipartite_matrix(psi, a)?;
    gate_check("reduced density matrix", na, gate)?;
    Ok(DensityMatrix { n: na, m: &m * m.adjoint() })
}

/// Eigenvalues of `ρ_A` in descending order, computed on the smaller side
/// (trailing zeros of the larger side are omitted).
pub fn schmidt_spectrum(psi: &StateVector, a: &[usize]) -> Result<Vec<f64>> {
    let (m, na, nb) = bipartite_matrix(psi, a)?;
    let gram = if na <= nb { &m * m.adjoint() } else { m.adjoint() * &m };
    let mut ev: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

fn entropy_of(eigs: &[f64]) -> f64 {
    eigs.iter().filter(|&&l| l > 1e-14).map(|&l| -l * l.log2()).sum()
}

/// Von Neumann entropy in bits.
pub fn entropy(d: &DensityMatrix) -> f64 {
    entropy_of(&d.eigenvalues())
}

/// Entropy of `ρ_A` from the Schmidt spectrum.
pub fn cut_entropy_dense(psi: &StateVector, a: &[usize]) -> Result<f64> {
    Ok(entropy_of(&schmidt_spectrum(psi, a)?))
}

/// `⟨G|ρ|G⟩`.
pub fn fidelity<'a>(state: impl Into<StateRef<'a>>, g: &Graph, gate: usize) -> Result<f64> {
    let target = build_graph_state(g, gate)?;
    match state.into() {
        StateRef::Pure(psi) => {
            if psi.n != g.n() {
                return Err(Error::DimensionMismatch("state and graph sizes differ".into()));
            }
            Ok(target.inner(psi).norm_sqr())
        }
        StateRef::Mixed(rho) => rho.overlap(&target),
    }
}

/// Minimum eigenvalue of `|G⟩⟨G| + (k-1)·I - Σ_l P_l`; nonnegative (up to
/// [`PSD_TOL`]) for every proper coloring.
pub fn verify_prop2(g: &Graph, coloring: &Coloring, gate: usize) -> Result<f64> {
    gate_check("operator inequality check", g.n(), gate)?;
    let coloring = coloring.clone().revalidate(g)?;
    let d = 1usize << g.n();
    let psi = build_graph_state(g, gate)?;
    // every operator involved is real in the computational basis
    let mut op = DMatrix::<f64>::identity(d, d) * (coloring.k() as f64 - 1.0);
    for r in 0..d {
        for c in 0..d {
            op[(r, c)] += psi.amps[r].re * psi.amps[c].re;
        }
    }
    for class in coloring.classes() {
        let p = projector_via_subgroup(g, class)?;
        op -= p;
    }
    let ev = SymmetricEigen::new(op).eigenvalues;
    Ok(ev.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Real dense `P_l` as the subgroup sum `2^-n_l Σ_T K_T`.
fn projector_via_subgroup(g: &Graph, class: &[usize]) -> Result<DMatrix<f64>> {
    check_class(g, class)?;
    let d = 1usize << g.n();
    let w = 1.0 / (1u64 << class.len()) as f64;
    let mut p = DMatrix::<f64>::zeros(d, d);
    for t in 0u64..1 << class.len() {
        let set: Vec<usize> = class.iter().enumerate().filter(|(j, _)| t >> j & 1 == 1).map(|(_, &v)| v).collect();
        let k = stabilizer_product(g, &set)?;
        let (x, z) = k.masks();
        // elements over an independent set carry no Y letters and sign +1
        debug_assert_eq!(k.phase(), 0);
        for b in 0..d {
            let s = if (z & b as u64).count_ones() % 2 == 1 { -w } else { w };
            p[(b ^ x as usize, b)] += s;
        }
    }
    Ok(p)
}
