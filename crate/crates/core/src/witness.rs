//! Witness operators `W = c·I - Σ_l P_l`, their evaluation, and white-noise
//! robustness.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::entropy::{c_m_constant, c_min_c_max, CmBound};
use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph};
use crate::partition::Partition;
use crate::rational::{self, dyadic, int, Rational, RationalJson};

/// Default one-sided significance threshold.
pub const DEFAULT_Z: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Non-separability across every block of a partition.
    FullySeparable,
    /// Genuine entanglement with respect to a partition.
    Genuine,
    /// Non-`m`-separability.
    MSeparable,
    /// Genuine multipartite entanglement, constant `k - 1/2`.
    Gme,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::FullySeparable => "fully_separable",
            WitnessKind::Genuine => "genuine",
            WitnessKind::MSeparable => "m_separable",
            WitnessKind::Gme => "gme",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "fully_separable" | "full" | "f" => Ok(WitnessKind::FullySeparable),
            "genuine" | "bi_separable" | "b" => Ok(WitnessKind::Genuine),
            "m_separable" | "m" => Ok(WitnessKind::MSeparable),
            "gme" => Ok(WitnessKind::Gme),
            _ => Err(Error::Parse(format!("unknown witness kind {s:?}"))),
        }
    }
}

/// What the constant depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Context {
    Partition(Partition),
    M(usize),
    None,
}

/// Marginalization data for a witness on a vertex-deleted graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    /// `kept[new] = old` vertex index.
    pub kept: Vec<usize>,
    /// Original color class (measurement setting) of each restricted class.
    pub class_origin: Vec<usize>,
    pub parent_n: usize,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub kind: WitnessKind,
    /// Bound constant `C`; the witness constant is `k - 1 + C`.
    pub bound: Rational,
    pub constant: Rational,
    pub coloring: Coloring,
    pub context: Context,
    /// Graph the projectors act on.
    pub graph: Graph,
    pub graph_id: String,
    pub c_m: Option<CmBound>,
    pub subsystem: Option<Subsystem>,
}

impl Witness {
    pub fn k(&self) -> usize {
        self.coloring.k()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.coloring.class_sizes()
    }

    /// `p_limit = (1 - C) / (k - Σ_l 2^-n_l)`.
    pub fn noise_threshold(&self) -> Rational {
        noise_threshold(self)
    }
}

/// Builds `W = (k-1+C)·I - Σ_l P_l` with `C` chosen by `kind`:
/// `C_min` (fully separable) or `C_max` (genuine) of the partition, `C_m`
/// for `m`-separability, `1/2` for the GME witness.
pub fn build_witness(g: &Graph, coloring: &Coloring, kind: WitnessKind, context: Context, gate: usize) -> Result<Witness> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let coloring = coloring.clone().revalidate(g)?;
    let mut c_m = None;
    let bound = match (kind, &context) {
        (WitnessKind::FullySeparable | WitnessKind::Genuine, Context::Partition(p)) => {
            if p.m() < 2 {
                return Err(Error::InvalidContext(format!("partition needs at least 2 blocks, got {}", p.m())));
            }
            let r = c_min_c_max(g, p)?;
            if kind == WitnessKind::FullySeparable {
                r.c_min.expect("c_min").value.0
            } else {
                r.c_max.expect("c_max").value.0
            }
        }
        (WitnessKind::MSeparable, Context::M(m)) => {
            let b = c_m_constant(g, *m, gate)?;
            let v = b.value.0.clone();
            c_m = Some(b);
            v
        }
        (WitnessKind::Gme, Context::None) => dyadic(1),
        (k, c) => {
            let want = match k {
                WitnessKind::FullySeparable | WitnessKind::Genuine => "a partition",
                WitnessKind::MSeparable => "an integer m",
                WitnessKind::Gme => "no context",
            };
            return Err(Error::InvalidContext(format!("{k} witness needs {want}, got {c:?}")));
        }
    };
    let constant = int(coloring.k() as i64 - 1) + &bound;
    Ok(Witness { kind, bound, constant, coloring, context, graph: g.clone(), graph_id: g.label(), c_m, subsystem: None })
}

/// Witness on `G - V_dropped` for the blocks `keep` of `partition`,
/// evaluable from the original settings by discarding the dropped qubits'
/// outcomes.
pub fn build_subsystem_witness(
    g: &Graph,
    coloring: &Coloring,
    partition: &Partition,
    keep: &[usize],
    kind: WitnessKind,
    gate: usize,
) -> Result<Witness> {
    if !matches!(kind, WitnessKind::FullySeparable | WitnessKind::Genuine) {
        return Err(Error::InvalidContext(format!("subsystem witnesses are partition based, got {kind}")));
    }
    if partition.n() != g.n() {
        return Err(Error::DimensionMismatch("partition and graph sizes differ".into()));
    }
    let coloring = coloring.clone().revalidate(g)?;
    let (sub_p, kept) = partition.restrict_to_blocks(keep)?;
    if sub_p.m() < 2 {
        return Err(Error::InvalidContext("kept system has fewer than 2 blocks".into()));
    }
    let dropped: Vec<usize> = (0..g.n()).filter(|v| kept.binary_search(v).is_err()).collect();
    let (sub_g, kept) = g.delete_vertices(&dropped)?;
    if !sub_g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (sub_c, class_origin) = coloring.restrict(&sub_g, &kept)?;
    let mut w = build_witness(&sub_g, &sub_c, kind, Context::Partition(sub_p), gate)?;
    if !dropped.is_empty() {
        w.graph_id = format!("{}-sub{}", g.label(), kept.len());
    }
    w.subsystem = Some(Subsystem { kept, class_origin, parent_n: g.n() });
    Ok(w)
}

/// Measured or exact `⟨P_l⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    #[serde(skip)]
    pub exact: Option<Rational>,
}

impl Estimate {
    pub fn exact(v: Rational) -> Self {
        Estimate { value: rational::to_f64(&v), stderr: 0.0, exact: Some(v) }
    }

    pub fn measured(value: f64, stderr: f64) -> Self {
        Estimate { value, stderr, exact: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: WitnessKind,
    pub k: usize,
    pub graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub constant: RationalJson,
    pub constant_decimal: f64,
    pub value: f64,
    /// Present when every estimate was exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<RationalJson>,
    pub stderr: f64,
    /// `value / stderr`; absent when `stderr = 0`.
    pub z_score: Option<f64>,
    pub z_threshold: f64,
    pub detected: bool,
    pub p_limit: RationalJson,
    pub p_limit_decimal: f64,
    pub interpretation: String,
}

fn interpretation(w: &Witness, detected: bool, z: f64) -> String {
    if !detected {
        return format!("no detection at z* = {z}");
    }
    match (&w.kind, &w.context) {
        (WitnessKind::FullySeparable, Context::Partition(p)) => {
            format!("not fully separable over the {} blocks: entangled across the partition", p.m())
        }
        (WitnessKind::Genuine, Context::Partition(p)) => {
            format!("genuinely entangled across the {} blocks (not bi-separable)", p.m())
        }
        (WitnessKind::MSeparable, Context::M(m)) => {
            format!("not {m}-separable: entanglement intactness at most {}", m - 1)
        }
        _ => "genuine multipartite entanglement".to_string(),
    }
}

/// `⟨W⟩ = c - Σ_l ⟨P_l⟩`, detected iff `value + z·stderr < 0`. Uses exact
/// arithmetic when every estimate is exact.
pub fn evaluate(w: &Witness, estimates: &[Estimate], z: f64) -> Result<Verdict> {
    if estimates.len() != w.k() {
        return Err(Error::InvalidEstimate(format!("{} estimates for {} settings", estimates.len(), w.k())));
    }
    for (l, e) in estimates.iter().enumerate() {
        let in_range = match &e.exact {
            Some(r) => !r.is_negative() && *r <= Rational::one(),
            None => (0.0..=1.0).contains(&e.value),
        };
        if !in_range || !e.stderr.is_finite() || e.stderr < 0.0 {
            return Err(Error::InvalidEstimate(format!("estimate {l} = {} ± {} outside [0, 1]", e.value, e.stderr)));
        }
    }
    let exact_sum: Option<Rational> =
        estimates.iter().map(|e| e.exact.clone()).try_fold(Rational::zero(), |acc, x| x.map(|x| acc + x));
    let (value, exact_value, stderr) = match exact_sum {
        Some(s) => {
            let v = &w.constant - s;
            (rational::to_f64(&v), Some(v), 0.0)
        }
        None => {
            let s: f64 = estimates.iter().map(|e| e.value).sum();
            let se = estimates.iter().map(|e| e.stderr * e.stderr).sum::<f64>().sqrt();
            (rational::to_f64(&w.constant) - s, None, se)
        }
    };
    let detected = match &exact_value {
        Some(v) => v.is_negative(),
        None => value + z * stderr < 0.0,
    };
    let p_limit = noise_threshold(w);
    Ok(Verdict {
        kind: w.kind,
        k: w.k(),
        graph: w.graph_id.clone(),
        partition: match &w.context {
            Context::Partition(p) => Some(p.to_string()),
            _ => None,
        },
        m: match w.context {
            Context::M(m) => Some(m),
            _ => None,
        },
        constant_decimal: rational::to_f64(&w.constant),
        constant: RationalJson(w.constant.clone()),
        value,
        exact_value: exact_value.map(RationalJson),
        stderr,
        z_score: (stderr > 0.0).then(|| value / stderr),
        z_threshold: z,
        detected,
        p_limit_decimal: rational::to_f64(&p_limit),
        p_limit: RationalJson(p_limit),
        interpretation: interpretation(w, detected, z),
    })
}

/// `⟨P_l⟩ = 1 - p(1 - 2^-n_l)` under white noise of weight `p`.
pub fn white_noise_expectation(p: &Rational, n_l: usize) -> Result<Rational> {
    rational::check_probability(p)?;
    Ok(Rational::one() - p * (Rational::one() - dyadic(n_l as u32)))
}

pub fn white_noise_expectation_f64(p: f64, n_l: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    Ok(1.0 - p * (1.0 - (0.5f64).powi(n_l as i32)))
}

/// `p_limit = (1 - C) / (k - Σ_l 2^-n_l)`.
pub fn noise_threshold(w: &Witness) -> Rational {
    let denom = w.class_sizes().iter().fold(int(w.k() as i64), |acc, &n| acc - dyadic(n as u32));
    (Rational::one() - &w.bound) / denom
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntactnessEntry {
    pub m: usize,
    pub constant: RationalJson,
    pub tightness: crate::entropy::Tightness,
    pub value: f64,
    pub stderr: f64,
    pub detected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntactnessReport {
    pub graph: String,
    pub n: usize,
    pub k: usize,
    pub z_threshold: f64,
    pub entries: Vec<IntactnessEntry>,
    /// Smallest `m` whose witness fires; detection also holds for every
    /// larger `m`.
    pub smallest_detected: Option<usize>,
    pub detected: Vec<usize>,
    /// `m* - 1` for the smallest detected `m*`.
    pub intactness_at_most: Option<usize>,
    pub interpretation: String,
}

/// Evaluates `W_m` for `m = 2..=n` on the same estimates.
pub fn intactness_scan(g: &Graph, coloring: &Coloring, estimates: &[Estimate], gate: usize, z: f64) -> Result<IntactnessReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidSize("intactness needs at least 2 qubits".into()));
    }
    let mut entries = Vec::with_capacity(n - 1);
    for m in 2..=n {
        let w = build_witness(g, coloring, WitnessKind::MSeparable, Context::M(m), gate)?;
        let v = evaluate(&w, estimates, z)?;
        entries.push(IntactnessEntry {
            m,
            constant: v.constant,
            tightness: w.c_m.as_ref().expect("m-separable bound").tightness,
            value: v.value,
            stderr: v.stderr,
            detected: v.detected,
        });
    }
    let detected: Vec<usize> = entries.iter().filter(|e| e.detected).map(|e| e.m).collect();
    let smallest = detected.first().copied();
    let interpretation = match smallest {
        None => "no detection for any m".to_string(),
        Some(2) => format!("not m-separable for every m <= {n}: genuinely multipartite entangled"),
        Some(m) => format!("not {m}-separable: entanglement intactness at most {}", m - 1),
    };
    Ok(IntactnessReport {
        graph: g.label(),
        n,
        k: coloring.k(),
        z_threshold: z,
        entries,
        smallest_detected: smallest,
        intactness_at_most: smallest.map(|m| m - 1),
        detected,
        interpretation,
    })
}
