//! Cut entropies of graph states and the optimization constants built from
//! them.
//!
//! For a graph state the entanglement entropy across `{A, Ā}` is the GF(2)
//! rank of the cross block `Γ_{AĀ}`. Every constant here is a dyadic
//! `2^-S` with `S` an exact integer entropy.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, rank_gf2, rank_words};
use crate::graph::{Family, Graph};
use crate::partition::{enumerate_m_partitions, Partition};
use crate::rational::{self, dyadic, Rational, RationalJson};

/// Maximum number of tied cuts recorded per bound.
pub const CO_ACHIEVER_CAP: usize = 16;

/// Largest `n` for which the exhaustive scan tabulates every subset entropy.
const TABLE_MAX_N: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutEntropy {
    pub value: usize,
    /// Side A, sorted.
    pub cut: Vec<usize>,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Entropy of a cut given as a bit mask; graph must have `n <= 64`.
pub(crate) fn mask_entropy(g: &Graph, a: u64) -> u32 {
    let b = full_mask(g.n()) & !a;
    // fewer rows is cheaper and the rank is the same
    let (rows_of, cols) = if a.count_ones() <= b.count_ones() { (a, b) } else { (b, a) };
    let mut rows = [0u64; 64];
    let mut r = 0;
    let mut bits = rows_of;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        rows[r] = g.adjacency_row(i)[0] & cols;
        r += 1;
        bits &= bits - 1;
    }
    rank_words(&mut rows[..r])
}

fn set_mask(g: &Graph, a: &[usize]) -> Result<u64> {
    Ok(g.vertex_mask(a)?[0])
}

/// Entropy of an arbitrary vertex set without the trivial-cut check.
fn set_entropy(g: &Graph, a: &[usize]) -> Result<usize> {
    if g.n() <= 64 {
        Ok(mask_entropy(g, set_mask(g, a)?) as usize)
    } else {
        Ok(rank_gf2(&gf2::cross_submatrix(g, a)?))
    }
}

/// `S(ρ_A) = rank(Γ_{AĀ})` over GF(2).
pub fn cut_entropy(g: &Graph, a: &[usize]) -> Result<CutEntropy> {
    let mut cut = a.to_vec();
    cut.sort_unstable();
    cut.dedup();
    if let Some(&v) = cut.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    if cut.is_empty() || cut.len() == g.n() {
        return Err(Error::TrivialCut);
    }
    Ok(CutEntropy { value: set_entropy(g, &cut)?, cut })
}

/// Number of chain edges crossing the cut. Only defined for the path
/// `0 - 1 - ... - (n-1)`.
pub fn boundary_count(g: &Graph, a: &[usize]) -> Result<usize> {
    if *g != Graph::chain(g.n())? {
        return Err(Error::NotApplicable("boundary count needs a chain graph".into()));
    }
    let mask = g.vertex_mask(a)?;
    Ok((1..g.n()).filter(|&i| gf2::get_bit(&mask, i) != gf2::get_bit(&mask, i - 1)).count())
}

/// Smallest `d` with `d(d+1)/2 >= m - 1`.
pub fn gamma(m: usize) -> u32 {
    let mut d = 0usize;
    while d * (d + 1) / 2 < m.saturating_sub(1) {
        d += 1;
    }
    d as u32
}

/// One extremal cut constant `2^-entropy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    #[serde(flatten)]
    pub value: RationalJson,
    pub decimal: f64,
    pub entropy: u32,
    /// Qubits on side A of the first achieving cut.
    pub cut: Vec<usize>,
    /// Blocks on side A of the first achieving cut.
    pub a_side: Vec<usize>,
    /// Side-A block lists of every achieving cut in enumeration order, capped
    /// at [`CO_ACHIEVER_CAP`].
    pub co_achievers: Vec<Vec<usize>>,
}

impl Bound {
    pub fn constant(&self) -> &Rational {
        &self.value.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Analytic,
}

/// How the reported `c_m` relates to the true optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    /// Computed by exhaustive search.
    Exact,
    /// Closed form known to equal the optimum.
    Tight,
    /// Closed form valid as a witness constant; optimality unproven.
    Unknown,
    /// Larger than the optimum (taken from a smaller `m`); still sound.
    Conservative,
}

/// `C_m = max over m-partitions of min over cuts of 2^-S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmBound {
    #[serde(flatten)]
    pub value: RationalJson,
    pub decimal: f64,
    pub m: usize,
    /// `min_P max_{A} S` (or the closed-form entropy).
    pub entropy: u32,
    pub method: Method,
    pub tightness: Tightness,
    /// Block labels of the achieving partition, when searched.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Partitions examined to completion (exhaustive only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluated: Option<u64>,
}

impl CmBound {
    fn new(m: usize, entropy: u32, method: Method, tightness: Tightness) -> Self {
        let v = dyadic(entropy);
        CmBound {
            decimal: rational::to_f64(&v),
            value: RationalJson(v),
            m,
            entropy,
            method,
            tightness,
            partition: None,
            family: None,
            evaluated: None,
        }
    }

    pub fn constant(&self) -> &Rational {
        &self.value.0
    }
}

/// Report of the constants for one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_min: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_max: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_m: Option<CmBound>,
}

impl BoundReport {
    pub fn empty(g: &Graph) -> Self {
        BoundReport { graph: g.label(), n: g.n(), partition: None, blocks: None, c_min: None, c_max: None, c_m: None }
    }
}

struct Extremum {
    entropy: u32,
    first: Option<(Vec<usize>, Vec<usize>)>,
    ties: Vec<Vec<usize>>,
}

impl Extremum {
    fn new(entropy: u32) -> Self {
        Extremum { entropy, first: None, ties: Vec::new() }
    }

    fn offer(&mut self, s: u32, better: bool, a_side: &[usize], qubits: &[usize]) {
        if better || self.first.is_none() {
            self.entropy = s;
            self.first = Some((a_side.to_vec(), qubits.to_vec()));
            self.ties = vec![a_side.to_vec()];
        } else if s == self.entropy && self.ties.len() < CO_ACHIEVER_CAP {
            self.ties.push(a_side.to_vec());
        }
    }

    fn into_bound(self) -> Bound {
        let v = dyadic(self.entropy);
        let (a_side, cut) = self.first.expect("at least one cut");
        Bound {
            decimal: rational::to_f64(&v),
            value: RationalJson(v),
            entropy: self.entropy,
            cut,
            a_side,
            co_achievers: self.ties,
        }
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

/// `C_min = 2^-max S` and `C_max = 2^-min S` over the canonical block
/// bipartitions of `p`. Ties keep the first cut in enumeration order.
pub fn c_min_c_max(g: &Graph, p: &Partition) -> Result<BoundReport> {
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch(format!("partition of {} qubits for {} vertices", p.n(), g.n())));
    }
    require_connected(g)?;
    let mut lo = Extremum::new(0);
    let mut hi = Extremum::new(0);
    for cut in p.block_bipartitions()? {
        let s = set_entropy(g, &cut.qubits)? as u32;
        // c_min comes from the largest entropy, c_max from the smallest
        lo.offer(s, s > lo.entropy, &cut.a_side, &cut.qubits);
        hi.offer(s, s < hi.entropy, &cut.a_side, &cut.qubits);
    }
    Ok(BoundReport {
        partition: Some(p.to_string()),
        blocks: Some(p.m()),
        c_min: Some(lo.into_bound()),
        c_max: Some(hi.into_bound()),
        ..BoundReport::empty(g)
    })
}

/// Exhaustive-scan state shared by worker threads.
struct Scan<'a> {
    g: &'a Graph,
    m: usize,
    table: Option<Vec<u8>>,
    full: u64,
}

impl Scan<'_> {
    fn entropy(&self, a: u64) -> u32 {
        match &self.table {
            Some(t) => t[a as usize] as u32,
            None => mask_entropy(self.g, a),
        }
    }

    /// Largest cut entropy of the partition given by `rgs`, or `None` as soon
    /// as some cut reaches `bound`.
    fn max_entropy(&self, rgs: &[u8], bound: u32, side_b: &mut [u64]) -> Option<u32> {
        let mut blocks = [0u64; 64];
        for (v, &b) in rgs.iter().enumerate() {
            blocks[b as usize] |= 1 << v;
        }
        // side_b[t] = union of blocks 1 + (bits of t); side A is the rest
        let mut worst = 0;
        side_b[0] = 0;
        for t in 1..1usize << (self.m - 1) {
            side_b[t] = side_b[t & (t - 1)] | blocks[1 + t.trailing_zeros() as usize];
            let s = self.entropy(self.full & !side_b[t]);
            if s >= bound {
                return None;
            }
            worst = worst.max(s);
        }
        Some(worst)
    }
}

const CHUNK: usize = 1 << 13;

/// Exhaustive `C_m` over every partition into `m` blocks.
///
/// The scan keeps the earliest partition (restricted-growth order) that
/// attains the optimum, so the report does not depend on thread count.
pub fn c_m_exhaustive(g: &Graph, m: usize, gate: usize) -> Result<CmBound> {
    let n = g.n();
    if m < 2 || m > n {
        return Err(Error::InvalidContext(format!("m = {m} must satisfy 2 <= m <= {n}")));
    }
    if n > gate {
        return Err(Error::GateExceeded { what: "exhaustive partition scan", n, gate });
    }
    if n > 64 {
        return Err(Error::GateExceeded { what: "exhaustive partition scan", n, gate: 64 });
    }
    require_connected(g)?;
    let full = full_mask(n);
    let table = (n <= TABLE_MAX_N).then(|| {
        crate::pool().install(|| {
            (0..1u64 << n)
                .into_par_iter()
                .map(|a| if a == 0 || a == full { 0 } else { mask_entropy(g, a) as u8 })
                .collect::<Vec<u8>>()
        })
    });
    let scan = Scan { g, m, table, full };
    let threads = crate::pool().current_num_threads().max(1);
    let batch_chunks = 4 * threads;

    let mut it = enumerate_m_partitions(n, m, gate)?;
    let mut best: Option<(u32, u64, Vec<u8>)> = None;
    let mut evaluated = 0u64;
    let mut index = 0u64;
    let mut exhausted = false;
    let mut buf: Vec<u8> = Vec::with_capacity(CHUNK * batch_chunks * n);
    while !exhausted {
        buf.clear();
        let start = index;
        let mut count = 0usize;
        while count < CHUNK * batch_chunks {
            buf.extend(it.rgs.iter().map(|&b| b as u8));
            count += 1;
            if !it.advance() {
                exhausted = true;
                break;
            }
        }
        index += count as u64;
        let bound = best.as_ref().map_or(u32::MAX, |b| b.0);
        let results: Vec<(Option<(u32, u64)>, u64)> = crate::pool().install(|| {
            buf.par_chunks(CHUNK * n)
                .enumerate()
                .map(|(c, chunk)| {
                    let mut side_b = vec![0u64; 1 << (m - 1)];
                    let mut local: Option<(u32, u64)> = None;
                    let mut done = 0u64;
                    for (j, rgs) in chunk.chunks_exact(n).enumerate() {
                        let cap = local.map_or(bound, |l| l.0.min(bound));
                        if cap <= 1 {
                            break;
                        }
                        if let Some(s) = scan.max_entropy(rgs, cap, &mut side_b) {
                            done += 1;
                            local = Some((s, start + (c * CHUNK + j) as u64));
                        }
                    }
                    (local, done)
                })
                .collect()
        });
        for (local, done) in results {
            evaluated += done;
            if let Some((s, idx)) = local {
                if best.as_ref().map_or(true, |b| s < b.0) {
                    let off = ((idx - start) as usize) * n;
                    best = Some((s, idx, buf[off..off + n].to_vec()));
                }
            }
        }
        // a connected graph has no cut of entropy 0
        if best.as_ref().is_some_and(|b| b.0 <= 1) {
            break;
        }
    }
    let (s, _, rgs) = best.expect("at least one partition");
    let mut out = CmBound::new(m, s, Method::Exhaustive, Tightness::Exact);
    out.partition = Some(rgs.iter().map(|&b| b as usize).collect());
    out.family = g.family().map(|f| f.to_string());
    out.evaluated = Some(evaluated);
    Ok(out)
}

/// Closed-form `C_m` for the chain, GHZ-type (star, complete) and lattice
/// families.
pub fn c_m_analytic(family: Family, m: usize) -> Result<CmBound> {
    let size = match family {
        Family::Chain { n } | Family::Star { n } | Family::Ring { n } | Family::Complete { n } => n,
        Family::Lattice { rows, cols } => rows * cols,
    };
    if m < 2 || m > size {
        return Err(Error::InvalidContext(format!("m = {m} must satisfy 2 <= m <= {size}")));
    }
    let mut out = match family {
        Family::Chain { .. } => CmBound::new(m, (m / 2) as u32, Method::Analytic, Tightness::Tight),
        Family::Star { .. } | Family::Complete { .. } => CmBound::new(m, 1, Method::Analytic, Tightness::Tight),
        Family::Lattice { .. } => {
            if size < m * (m - 1) / 2 {
                return Err(Error::ConstantUnavailable(format!(
                    "lattice closed form needs N >= m(m-1)/2, got N = {size}, m = {m}"
                )));
            }
            let tight = if m <= 5 { Tightness::Tight } else { Tightness::Unknown };
            CmBound::new(m, gamma(m), Method::Analytic, tight)
        }
        Family::Ring { .. } => {
            return Err(Error::NotApplicable(format!("no closed form for {family}")));
        }
    };
    out.family = Some(family.to_string());
    Ok(out)
}

/// The sound `C_m` used by witnesses: closed form when one applies,
/// exhaustive search within `gate`, otherwise a refusal.
///
/// A lattice with `N < m(m-1)/2` beyond the gate falls back to the closed
/// form of the largest admissible `m' < m`, flagged conservative: `C_m` is
/// non-increasing in `m`, so the larger constant stays valid.
pub fn c_m_constant(g: &Graph, m: usize, gate: usize) -> Result<CmBound> {
    if let Some(f) = g.family() {
        match c_m_analytic(f, m) {
            Ok(b) => return Ok(b),
            Err(Error::ConstantUnavailable(why)) => {
                if g.n() <= gate {
                    return c_m_exhaustive(g, m, gate);
                }
                let fallback = (2..m).rev().find_map(|mm| c_m_analytic(f, mm).ok());
                return match fallback {
                    Some(mut b) => {
                        b.m = m;
                        b.tightness = Tightness::Conservative;
                        Ok(b)
                    }
                    None => Err(Error::ConstantUnavailable(why)),
                };
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if g.n() > gate {
        return Err(Error::ConstantUnavailable(format!(
            "{} has no closed form and n = {} exceeds the enumeration gate {gate}",
            g.label(),
            g.n()
        )));
    }
    c_m_exhaustive(g, m, gate)
}
