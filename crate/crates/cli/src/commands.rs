use serde::Serialize;

use entwit::entropy::{c_min_c_max, BoundReport};
use entwit::rational::{self, RationalJson};
use entwit::sim::{run_experiment, ExperimentRecord, SimOptions};
use entwit::witness::{
    build_subsystem_witness, build_witness, evaluate, intactness_scan, white_noise_expectation, IntactnessReport,
    Verdict, Witness, WitnessKind,
};
use entwit::{Coloring, Context, Estimate, Graph, Rational};

use crate::{
    coloring_for, csv_text, json, load_graph, load_partition, parse_keep, BoundsArgs, CliError, Format, IntactnessArgs,
    SimulateArgs,
};

#[derive(Serialize)]
struct Constant {
    #[serde(flatten)]
    value: RationalJson,
    decimal: f64,
    /// `C` in `k - 1 + C`.
    bound: RationalJson,
    p_limit: RationalJson,
    p_limit_decimal: f64,
}

impl Constant {
    fn of(w: &Witness) -> Self {
        let pl = w.noise_threshold();
        Constant {
            decimal: rational::to_f64(&w.constant),
            value: RationalJson(w.constant.clone()),
            bound: RationalJson(w.bound.clone()),
            p_limit_decimal: rational::to_f64(&pl),
            p_limit: RationalJson(pl),
        }
    }
}

#[derive(Serialize, Default)]
struct Constants {
    #[serde(skip_serializing_if = "Option::is_none")]
    fully_separable: Option<Constant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    genuine: Option<Constant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_separable: Option<Constant>,
    gme: Option<Constant>,
}

#[derive(Serialize)]
struct SubsystemJson {
    parent_graph: String,
    parent_n: usize,
    kept_blocks: Vec<usize>,
    kept_qubits: Vec<usize>,
    class_origin: Vec<usize>,
}

#[derive(Serialize)]
struct BoundsOutput {
    #[serde(flatten)]
    report: BoundReport,
    k: usize,
    coloring: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subsystem: Option<SubsystemJson>,
    constants: Constants,
}

fn subsystem_json(parent: &Graph, keep: &[usize], w: &Witness) -> Option<SubsystemJson> {
    w.subsystem.as_ref().map(|s| SubsystemJson {
        parent_graph: parent.label(),
        parent_n: s.parent_n,
        kept_blocks: keep.to_vec(),
        kept_qubits: s.kept.clone(),
        class_origin: s.class_origin.clone(),
    })
}

pub(crate) fn bounds(a: &BoundsArgs) -> Result<String, CliError> {
    let gate = a.common.enum_gate;
    let g = load_graph(&a.common.graph)?;
    let col = coloring_for(&g)?;
    let partition = a.partition.as_deref().map(|s| load_partition(g.n(), s)).transpose()?;
    let keep = a.keep.as_deref().map(parse_keep).transpose()?;
    let mut constants = Constants::default();

    let (report, coloring, subsystem) = match (&partition, &keep) {
        (None, Some(_)) => return Err(CliError::Usage("--keep needs --partition".into())),
        (Some(_), Some(_)) if a.m.is_some() => {
            return Err(CliError::Usage("--keep applies to partition witnesses, not --m".into()))
        }
        (Some(p), Some(keep)) => {
            let wf = build_subsystem_witness(&g, &col, p, keep, WitnessKind::FullySeparable, gate)?;
            let wb = build_subsystem_witness(&g, &col, p, keep, WitnessKind::Genuine, gate)?;
            let Context::Partition(sub_p) = &wf.context else { unreachable!("partition witness") };
            let mut report = c_min_c_max(&wf.graph, sub_p)?;
            report.graph = wf.graph_id.clone();
            constants.gme = Some(Constant::of(&build_witness(&wf.graph, &wf.coloring, WitnessKind::Gme, Context::None, gate)?));
            constants.fully_separable = Some(Constant::of(&wf));
            constants.genuine = Some(Constant::of(&wb));
            let sub = subsystem_json(&g, keep, &wf);
            (report, wf.coloring.clone(), sub)
        }
        (p, None) => {
            let mut report = match p {
                Some(p) => {
                    let wf = build_witness(&g, &col, WitnessKind::FullySeparable, Context::Partition(p.clone()), gate)?;
                    let wb = build_witness(&g, &col, WitnessKind::Genuine, Context::Partition(p.clone()), gate)?;
                    constants.fully_separable = Some(Constant::of(&wf));
                    constants.genuine = Some(Constant::of(&wb));
                    c_min_c_max(&g, p)?
                }
                None => BoundReport::empty(&g),
            };
            if let Some(m) = a.m {
                let wm = build_witness(&g, &col, WitnessKind::MSeparable, Context::M(m), gate)?;
                report.c_m = wm.c_m.clone();
                constants.m_separable = Some(Constant::of(&wm));
            }
            constants.gme = Some(Constant::of(&build_witness(&g, &col, WitnessKind::Gme, Context::None, gate)?));
            (report, col, None)
        }
    };

    match a.common.format {
        Format::Json => json(&BoundsOutput {
            report,
            k: coloring.k(),
            coloring: coloring.classes().to_vec(),
            subsystem,
            constants,
        }),
        Format::Csv => {
            let mut rows = Vec::new();
            let r = |q: &str, v: &Rational, entropy: Option<u32>, pl: Option<&Rational>| {
                vec![
                    q.to_string(),
                    v.numer().to_string(),
                    v.denom().to_string(),
                    rational::format(v),
                    rational::to_f64(v).to_string(),
                    entropy.map(|e| e.to_string()).unwrap_or_default(),
                    pl.map(rational::format).unwrap_or_default(),
                    pl.map(|p| rational::to_f64(p).to_string()).unwrap_or_default(),
                ]
            };
            if let Some(b) = &report.c_min {
                rows.push(r("c_min", b.constant(), Some(b.entropy), None));
            }
            if let Some(b) = &report.c_max {
                rows.push(r("c_max", b.constant(), Some(b.entropy), None));
            }
            if let Some(b) = &report.c_m {
                rows.push(r("c_m", b.constant(), Some(b.entropy), None));
            }
            for (name, c) in [
                ("fully_separable", &constants.fully_separable),
                ("genuine", &constants.genuine),
                ("m_separable", &constants.m_separable),
                ("gme", &constants.gme),
            ] {
                if let Some(c) = c {
                    rows.push(r(name, &c.value.0, None, Some(&c.p_limit.0)));
                }
            }
            csv_text(&["quantity", "num", "den", "text", "decimal", "entropy", "p_limit", "p_limit_decimal"], rows)
        }
    }
}

fn parse_noise(text: &str) -> Result<Rational, CliError> {
    let p = rational::parse(text).map_err(|e| CliError::Usage(format!("--noise: {e}")))?;
    if p < rational::int(0) || p > rational::int(1) {
        return Err(CliError::Usage(format!("--noise must lie in [0, 1], got {text}")));
    }
    Ok(p)
}

fn check_z(z: f64) -> Result<(), CliError> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--z-threshold must be a non-negative number, got {z}")))
    }
}

fn witness_for(
    g: &Graph,
    col: &Coloring,
    kind: WitnessKind,
    partition: Option<&str>,
    m: Option<usize>,
    keep: Option<&str>,
    gate: usize,
) -> Result<(Witness, Option<Vec<usize>>), CliError> {
    let partitioned = matches!(kind, WitnessKind::FullySeparable | WitnessKind::Genuine);
    if partitioned != partition.is_some() {
        return Err(CliError::Usage(if partitioned {
            format!("--kind {kind} needs --partition")
        } else {
            format!("--partition does not apply to --kind {kind}")
        }));
    }
    if (kind == WitnessKind::MSeparable) != m.is_some() {
        return Err(CliError::Usage(if m.is_none() {
            "--kind m-separable needs --m".into()
        } else {
            format!("--m does not apply to --kind {kind}")
        }));
    }
    if keep.is_some() && !partitioned {
        return Err(CliError::Usage("--keep applies to partition witnesses".into()));
    }
    let ctx = match (partition, m) {
        (Some(p), _) => Context::Partition(load_partition(g.n(), p)?),
        (_, Some(m)) => Context::M(m),
        _ => Context::None,
    };
    match (keep, ctx) {
        (Some(k), Context::Partition(p)) => {
            let keep = parse_keep(k)?;
            Ok((build_subsystem_witness(g, col, &p, &keep, kind, gate)?, Some(keep)))
        }
        (_, ctx) => Ok((build_witness(g, col, kind, ctx, gate)?, None)),
    }
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    subsystem: Option<SubsystemJson>,
    /// Inputs to the witness, one per projector.
    estimates: Vec<Estimate>,
    record: &'a ExperimentRecord,
}

pub(crate) fn simulate(a: &SimulateArgs) -> Result<String, CliError> {
    check_z(a.z_threshold)?;
    if a.shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let p = parse_noise(&a.noise)?;
    let g = load_graph(&a.common.graph)?;
    let col = coloring_for(&g)?;
    let (w, keep) = witness_for(
        &g,
        &col,
        a.kind.into(),
        a.partition.as_deref(),
        a.m,
        a.keep.as_deref(),
        a.common.enum_gate,
    )?;
    let opts = SimOptions { dense_gate: a.dense_gate, outcome_cap: a.outcome_cap, sampler: a.sampler.into() };
    let record = run_experiment(&g, &col, rational::to_f64(&p), a.shots, a.seed, &opts)?;
    let estimates = if w.subsystem.is_some() { record.subsystem_estimates(&w)? } else { record.estimates() };
    let verdict = evaluate(&w, &estimates, a.z_threshold)?;
    match a.common.format {
        Format::Json => json(&SimulateOutput {
            subsystem: keep.as_deref().and_then(|k| subsystem_json(&g, k, &w)),
            verdict,
            estimates,
            record: &record,
        }),
        Format::Csv => {
            let rows = record
                .settings
                .iter()
                .map(|s| {
                    vec![
                        s.index.to_string(),
                        s.x_set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                        s.shots.to_string(),
                        s.hits.to_string(),
                        s.estimate.to_string(),
                        s.stderr.to_string(),
                        record.noise.to_string(),
                        record.seed.to_string(),
                        verdict.kind.to_string(),
                        verdict.value.to_string(),
                        verdict.stderr.to_string(),
                        verdict.detected.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &[
                    "setting",
                    "x_set",
                    "shots",
                    "hits",
                    "estimate",
                    "stderr",
                    "noise",
                    "seed",
                    "kind",
                    "witness_value",
                    "witness_stderr",
                    "detected",
                ],
                rows,
            )
        }
    }
}

#[derive(Serialize)]
struct IntactnessOutput {
    mode: &'static str,
    noise: RationalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    report: IntactnessReport,
}

pub(crate) fn intactness(a: &IntactnessArgs) -> Result<String, CliError> {
    check_z(a.z_threshold)?;
    let p = parse_noise(&a.noise)?;
    let g = load_graph(&a.common.graph)?;
    let col = coloring_for(&g)?;
    let estimates: Vec<Estimate> = match a.shots {
        None => col
            .class_sizes()
            .iter()
            .map(|&n| white_noise_expectation(&p, n).map(Estimate::exact))
            .collect::<entwit::Result<_>>()?,
        Some(0) => return Err(CliError::Usage("--shots must be at least 1".into())),
        Some(shots) => {
            let opts = SimOptions { dense_gate: a.dense_gate, sampler: a.sampler.into(), ..SimOptions::default() };
            run_experiment(&g, &col, rational::to_f64(&p), shots, a.seed, &opts)?.estimates()
        }
    };
    let report = intactness_scan(&g, &col, &estimates, a.common.enum_gate, a.z_threshold)?;
    match a.common.format {
        Format::Json => json(&IntactnessOutput {
            mode: if a.shots.is_some() { "sampled" } else { "exact" },
            noise: RationalJson(p),
            shots: a.shots,
            seed: a.shots.map(|_| a.seed),
            report,
        }),
        Format::Csv => {
            let rows = report
                .entries
                .iter()
                .map(|e| {
                    let t = serde_json::to_value(e.tightness).ok().and_then(|v| v.as_str().map(String::from));
                    vec![
                        e.m.to_string(),
                        rational::format(&e.constant.0),
                        rational::to_f64(&e.constant.0).to_string(),
                        t.unwrap_or_default(),
                        e.value.to_string(),
                        e.stderr.to_string(),
                        e.detected.to_string(),
                    ]
                })
                .collect();
            csv_text(&["m", "constant", "constant_decimal", "tightness", "value", "stderr", "detected"], rows)
        }
    }
}
