//! Shot-level simulation of the `k` local measurement settings on graph
//! states mixed with white noise.

pub mod dense;
pub mod outcomes;
pub mod tableau;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use dense::DenseSampler;
pub use outcomes::Outcomes;
pub use tableau::TableauSampler;

use crate::error::{Error, Result};
use crate::gf2::{set_bit, words_for};
use crate::graph::{Coloring, Graph, GraphJson};
use crate::oracle::pauli::Letter;
use crate::oracle::{build_graph_state, DENSE_GATE};
use crate::witness::{Estimate, Witness};

/// Default shots per setting.
pub const DEFAULT_SHOTS: usize = 10_000;
/// Default number of raw shots kept per setting.
pub const DEFAULT_OUTCOME_CAP: usize = 1_000_000;

/// `⊗_{i∈V_l} X_i ⊗_{j∉V_l} Z_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementSetting {
    bases: Vec<Letter>,
}

impl MeasurementSetting {
    pub fn for_class(g: &Graph, class: &[usize]) -> Result<Self> {
        if !g.is_independent(class) {
            return Err(Error::InvalidColoring(format!("measured X set {class:?} is not independent")));
        }
        let mut bases = vec![Letter::Z; g.n()];
        for &v in class {
            bases[v] = Letter::X;
        }
        Ok(MeasurementSetting { bases })
    }

    pub fn n(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Letter] {
        &self.bases
    }

    pub fn x_set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.bases[q] == Letter::X).collect()
    }

    pub fn z_set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.bases[q] == Letter::Z).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Dense up to the gate, tableau beyond.
    #[default]
    Auto,
    Dense,
    Tableau,
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerKind::Auto => "auto",
            SamplerKind::Dense => "dense",
            SamplerKind::Tableau => "tableau",
        })
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(SamplerKind::Auto),
            "dense" => Ok(SamplerKind::Dense),
            "tableau" => Ok(SamplerKind::Tableau),
            _ => Err(Error::Parse(format!("unknown sampler {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    pub dense_gate: usize,
    /// Raw shots kept per setting; beyond this only counts are recorded.
    pub outcome_cap: usize,
    pub sampler: SamplerKind,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { dense_gate: DENSE_GATE, outcome_cap: DEFAULT_OUTCOME_CAP, sampler: SamplerKind::Auto }
    }
}

enum Sampler {
    Dense(DenseSampler),
    Tableau(TableauSampler),
}

impl Sampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u64]) {
        match self {
            Sampler::Dense(s) => s.sample(rng, out),
            Sampler::Tableau(s) => s.sample(rng, out),
        }
    }
}

/// Per-shot indicator of `P_l`: all stabilizers of the class read `+1`.
#[derive(Clone, Debug)]
struct ClassCounter {
    supports: Vec<Vec<u64>>,
}

impl ClassCounter {
    /// `S_i` for `i` in `class` of `g`, with vertex `v` of `g` read from
    /// outcome bit `map[v]` of a `parent_n`-qubit shot.
    fn new(g: &Graph, class: &[usize], map: &[usize], parent_n: usize) -> Self {
        let supports = class
            .iter()
            .map(|&i| {
                let mut s = vec![0u64; words_for(parent_n)];
                set_bit(&mut s, map[i], true);
                for j in g.neighbors(i) {
                    set_bit(&mut s, map[j], true);
                }
                s
            })
            .collect();
        ClassCounter { supports }
    }

    fn hit(&self, shot: &[u64]) -> bool {
        self.supports
            .iter()
            .all(|s| s.iter().zip(shot).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 0)
    }

    fn count(&self, o: &Outcomes) -> usize {
        o.iter().filter(|s| self.hit(s)).count()
    }
}

/// Mean and binomial standard error (sample deviation over `√shots`).
pub fn estimate_from_counts(hits: usize, shots: usize) -> Result<Estimate> {
    if shots == 0 || hits > shots {
        return Err(Error::InvalidEstimate(format!("{hits} hits in {shots} shots")));
    }
    let p = hits as f64 / shots as f64;
    let se = if shots == 1 { 0.0 } else { (p * (1.0 - p) / (shots - 1) as f64).sqrt() };
    Ok(Estimate::measured(p, se))
}

fn check_setting(setting: &MeasurementSetting, g: &Graph, class: &[usize], map: &[usize]) -> Result<()> {
    let b = setting.bases();
    let ok = class.iter().all(|&i| b[map[i]] == Letter::X && g.neighbors(i).all(|j| b[map[j]] == Letter::Z));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidContext("outcomes were not taken in the setting of this class".into()))
    }
}

/// Estimates `⟨P_l⟩` from shots of the matching setting.
pub fn estimate_projector(outcomes: &Outcomes, setting: &MeasurementSetting, g: &Graph, class: &[usize]) -> Result<Estimate> {
    if outcomes.n() != g.n() || setting.n() != g.n() {
        return Err(Error::DimensionMismatch("outcomes, setting and graph sizes differ".into()));
    }
    let id: Vec<usize> = (0..g.n()).collect();
    check_setting(setting, g, class, &id)?;
    estimate_from_counts(ClassCounter::new(g, class, &id, g.n()).count(outcomes), outcomes.shots())
}

/// Mean of the `±1` product of the outcomes on `support`.
pub fn parity_mean(outcomes: &Outcomes, support: &[usize]) -> f64 {
    let mut mask = vec![0u64; words_for(outcomes.n())];
    support.iter().for_each(|&q| set_bit(&mut mask, q, true));
    let odd = outcomes
        .iter()
        .filter(|s| s.iter().zip(&mask).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1)
        .count();
    1.0 - 2.0 * odd as f64 / outcomes.shots().max(1) as f64
}

/// Draws `shots` outcomes of `setting` on `(1-p)|G⟩⟨G| + p·I/2^n`.
pub fn sample_setting(g: &Graph, p: f64, setting: &MeasurementSetting, shots: usize, seed: u64, opts: &SimOptions) -> Result<Outcomes> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = make_sampler(g, setting, opts)?;
    check_run(g, p, shots)?;
    let mut out = Outcomes::with_capacity(g.n(), shots);
    let mut shot = vec![0u64; words_for(g.n())];
    for _ in 0..shots {
        draw(&sampler, &mut rng, p, g.n(), &mut shot);
        out.push(&shot);
    }
    Ok(out)
}

fn check_run(g: &Graph, p: f64, shots: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p.to_string()));
    }
    if shots == 0 {
        return Err(Error::InvalidSize("shots must be at least 1".into()));
    }
    if g.n() == 0 {
        return Err(Error::InvalidSize("graph has no vertices".into()));
    }
    Ok(())
}

fn resolve(kind: SamplerKind, n: usize, gate: usize) -> SamplerKind {
    match kind {
        SamplerKind::Auto if n <= gate => SamplerKind::Dense,
        SamplerKind::Auto => SamplerKind::Tableau,
        k => k,
    }
}

fn make_sampler(g: &Graph, setting: &MeasurementSetting, opts: &SimOptions) -> Result<Sampler> {
    if setting.n() != g.n() {
        return Err(Error::DimensionMismatch("setting and graph sizes differ".into()));
    }
    Ok(match resolve(opts.sampler, g.n(), opts.dense_gate) {
        SamplerKind::Dense => {
            let psi = build_graph_state(g, opts.dense_gate)?;
            Sampler::Dense(DenseSampler::new(&psi, setting.bases())?)
        }
        _ => Sampler::Tableau(TableauSampler::new(g, setting.bases())?),
    })
}

fn draw(sampler: &Sampler, rng: &mut ChaCha8Rng, p: f64, n: usize, shot: &mut [u64]) {
    if p > 0.0 && rng.random_bool(p) {
        shot.iter_mut().for_each(|w| *w = rng.random());
        if n % 64 != 0 {
            *shot.last_mut().expect("nonempty") &= (1u64 << (n % 64)) - 1;
        }
    } else {
        sampler.sample(rng, shot);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingRecord {
    pub index: usize,
    pub x_set: Vec<usize>,
    pub shots: usize,
    pub hits: usize,
    pub estimate: f64,
    pub stderr: f64,
    /// Raw shots, absent when the count exceeded the cap.
    pub outcomes: Option<OutcomesJson>,
    pub outcomes_truncated: bool,
}

/// Packed outcome bits; see [`Outcomes::to_base64`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomesJson {
    pub n: usize,
    pub shots: usize,
    pub base64: String,
}

impl OutcomesJson {
    pub fn decode(&self) -> Result<Outcomes> {
        let o = Outcomes::from_base64(self.n, &self.base64)?;
        if o.shots() != self.shots {
            return Err(Error::Parse(format!("expected {} shots, decoded {}", self.shots, o.shots())));
        }
        Ok(o)
    }
}

impl From<&Outcomes> for OutcomesJson {
    fn from(o: &Outcomes) -> Self {
        OutcomesJson { n: o.n(), shots: o.shots(), base64: o.to_base64() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub graph: String,
    pub graph_json: GraphJson,
    pub coloring: Coloring,
    pub noise: f64,
    pub shots: usize,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub outcome_cap: usize,
    pub settings: Vec<SettingRecord>,
}

impl ExperimentRecord {
    pub fn estimates(&self) -> Vec<Estimate> {
        self.settings.iter().map(|s| Estimate::measured(s.estimate, s.stderr)).collect()
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::from_json(&self.graph_json)
    }

    pub fn outcomes(&self, l: usize) -> Result<Outcomes> {
        let s = self.settings.get(l).ok_or_else(|| Error::InvalidContext(format!("no setting {l}")))?;
        match &s.outcomes {
            Some(o) => o.decode(),
            None => Err(Error::InvalidContext(format!("raw outcomes of setting {l} were not retained"))),
        }
    }

    /// Recomputes every setting's hit count from the raw shots and checks it
    /// against the stored statistics.
    pub fn audit(&self) -> Result<()> {
        let g = self.graph()?;
        let col = self.coloring.clone().revalidate(&g)?;
        for (l, s) in self.settings.iter().enumerate() {
            if s.outcomes_truncated {
                continue;
            }
            let o = self.outcomes(l)?;
            let setting = MeasurementSetting::for_class(&g, col.class(l))?;
            let e = estimate_projector(&o, &setting, &g, col.class(l))?;
            if o.shots() != s.shots || e.value != s.estimate || e.stderr != s.stderr {
                return Err(Error::InvalidEstimate(format!("setting {l} does not match its raw outcomes")));
            }
        }
        Ok(())
    }

    /// Estimates for a witness on a vertex-deleted subgraph, obtained by
    /// discarding the dropped qubits from the original settings' shots.
    pub fn subsystem_estimates(&self, w: &Witness) -> Result<Vec<Estimate>> {
        let Some(sub) = &w.subsystem else {
            return Ok(self.estimates());
        };
        let g = self.graph()?;
        if sub.parent_n != g.n() {
            return Err(Error::DimensionMismatch("witness and record graphs differ".into()));
        }
        let col = self.coloring.clone().revalidate(&g)?;
        (0..w.k())
            .map(|l2| {
                let l = sub.class_origin[l2];
                let o = self.outcomes(l)?;
                let setting = MeasurementSetting::for_class(&g, col.class(l))?;
                let class = w.coloring.class(l2);
                check_setting(&setting, &w.graph, class, &sub.kept)?;
                let counter = ClassCounter::new(&w.graph, class, &sub.kept, g.n());
                estimate_from_counts(counter.count(&o), o.shots())
            })
            .collect()
    }

    /// Per-setting estimates as CSV with a fixed header.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        w.write_record(["setting", "x_set", "shots", "hits", "estimate", "stderr", "noise", "seed"]).map_err(io)?;
        for s in &self.settings {
            let x: Vec<String> = s.x_set.iter().map(|v| v.to_string()).collect();
            w.write_record([
                s.index.to_string(),
                x.join(" "),
                s.shots.to_string(),
                s.hits.to_string(),
                s.estimate.to_string(),
                s.stderr.to_string(),
                self.noise.to_string(),
                self.seed.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Runs all `k` settings, each on its own stream of a seeded generator.
pub fn run_experiment(g: &Graph, coloring: &Coloring, p: f64, shots: usize, seed: u64, opts: &SimOptions) -> Result<ExperimentRecord> {
    check_run(g, p, shots)?;
    let coloring = coloring.clone().revalidate(g)?;
    let kind = resolve(opts.sampler, g.n(), opts.dense_gate);
    let opts = SimOptions { sampler: kind, ..*opts };
    let id: Vec<usize> = (0..g.n()).collect();
    let settings = crate::pool().install(|| {
        (0..coloring.k())
            .into_par_iter()
            .map(|l| {
                let class = coloring.class(l);
                let setting = MeasurementSetting::for_class(g, class)?;
                let sampler = make_sampler(g, &setting, &opts)?;
                let counter = ClassCounter::new(g, class, &id, g.n());
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(l as u64);
                let keep = shots <= opts.outcome_cap;
                let mut raw = keep.then(|| Outcomes::with_capacity(g.n(), shots));
                let mut shot = vec![0u64; words_for(g.n())];
                let mut hits = 0;
                for _ in 0..shots {
                    draw(&sampler, &mut rng, p, g.n(), &mut shot);
                    hits += counter.hit(&shot) as usize;
                    if let Some(r) = raw.as_mut() {
                        r.push(&shot);
                    }
                }
                let e = estimate_from_counts(hits, shots)?;
                Ok(SettingRecord {
                    index: l,
                    x_set: class.to_vec(),
                    shots,
                    hits,
                    estimate: e.value,
                    stderr: e.stderr,
                    outcomes: raw.as_ref().map(OutcomesJson::from),
                    outcomes_truncated: !keep,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ExperimentRecord {
        graph: g.label(),
        graph_json: g.to_json(),
        coloring,
        noise: p,
        shots,
        seed,
        sampler: kind,
        outcome_cap: opts.outcome_cap,
        settings,
    })
}
