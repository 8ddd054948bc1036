use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use trasdim_core::approx::{
    decompose, derive_profile_f, family_m, in_window_tuples, profile_check, trasdim_ord, ApdProfile, ApproxParams,
    FamilyReport, Outcome, ScaleSlots, Solved, DEFAULT_NODE_BUDGET,
};
use trasdim_core::docs::{self, DocError, FamilyDoc, ProfileDoc, RequestDoc, SpaceDoc, StrategyDoc};
use trasdim_core::gen;
use trasdim_core::metric::{Dist, MetricSpace};
use trasdim_core::ordinal::Ordinal;
use trasdim_core::setfamily::{FinSet, SetFamily};
use trasdim_core::strategy::{CertificateLimits, CertificateStatus};

use crate::args::{Command, GenKind, Window};
use crate::report::{Report, Status, SCHEMA};

#[allow(clippy::large_enum_variant)]
pub enum Output {
    Report(Report),
    Document(String),
}

/// Input errors, already carrying file and position.
#[derive(Debug)]
pub struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<trasdim_core::Error> for CliError {
    fn from(e: trasdim_core::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Loaded<T> {
    doc: T,
    digest: String,
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<Loaded<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let doc = docs::parse(&text).map_err(|e: DocError| CliError(format!("{}: {e}", path.display())))?;
    Ok(Loaded { doc, digest: format!("sha256:{:x}", Sha256::digest(text.as_bytes())) })
}

fn at<T>(path: &Path, r: trasdim_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn parse_dist(flag: &str, text: &str) -> CliResult<Dist> {
    text.parse().map_err(|e| CliError(format!("--{flag} {text:?}: {e}")))
}

fn parse_labels(flag: &str, text: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError(format!("--{flag}: {t:?} is not a label"))))
        .collect()
}

/// `"2..6"` (inclusive) or a comma list.
fn parse_scales(text: &str) -> CliResult<Vec<u32>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let bad = || CliError(format!("--scales {text:?}: expected LO..HI"));
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    parse_labels("scales", text)
}

fn set_from(labels: &[u32]) -> CliResult<FinSet> {
    Ok(FinSet::new(labels.iter().copied())?)
}

fn sets(list: impl IntoIterator<Item = FinSet>) -> Vec<Vec<u32>> {
    list.into_iter().map(FinSet::to_vec).collect()
}

fn truncated_family(loaded: &Loaded<FamilyDoc>, path: &Path, truncation: Option<u32>) -> CliResult<SetFamily> {
    let doc = match (&loaded.doc, truncation) {
        (FamilyDoc::Oracle { oracle, params, .. }, Some(t)) => {
            FamilyDoc::Oracle { ground: t, oracle: oracle.clone(), params: params.clone() }
        }
        (FamilyDoc::Explicit { .. }, Some(_)) => {
            return Err(CliError("--truncation applies to oracle families only".into()));
        }
        (doc, None) => doc.clone(),
    };
    at(path, doc.build())
}

fn family_truncation(f: &SetFamily) -> Value {
    json!({ "ground": f.ground().size(), "oracle": f.oracle_name(), "exact": f.is_explicit() })
}

#[allow(clippy::too_many_arguments)]
fn report(op: &'static str, status: Status, digest: Value, input: Value, truncation: Value, result: Value, stats: Value, table: String) -> Report {
    Report { schema: SCHEMA, op, status, input_digest: digest, input, truncation, result, stats, timing_ms: None, table }
}

fn status_of(unknown: bool) -> Status {
    if unknown {
        Status::Unknown
    } else {
        Status::Definitive
    }
}

pub fn run(command: &Command) -> CliResult<Output> {
    Ok(match command {
        Command::Ord { input, truncation, alpha, p } => Output::Report(ord(&input.input, *truncation, alpha.as_deref(), *p)?),
        Command::Derive { input, sigma, truncation } => {
            let path = &input.input;
            let loaded: Loaded<FamilyDoc> = load(path)?;
            let family = truncated_family(&loaded, path, *truncation)?;
            let labels = parse_labels("sigma", sigma)?;
            let derived = at(path, family.derive(set_from(&labels)?))?;
            let (members, ord) = if derived.is_explicit() {
                (Some(sets(derived.members()?)), Some(derived.ord()?))
            } else {
                (None, None)
            };
            let mut table = format!("sigma: {}\n", set_from(&labels)?);
            match (&members, &ord) {
                (Some(m), Some(o)) => {
                    let _ = writeln!(table, "members: {}\nord: {o}", m.len());
                    for s in m {
                        let _ = writeln!(table, "  {s:?}");
                    }
                }
                _ => table.push_str("oracle family: derived membership is evaluated lazily\n"),
            }
            Output::Report(report(
                "derive",
                Status::Definitive,
                json!({ "input": loaded.digest }),
                json!({ "family": loaded.doc, "sigma": labels, "truncation": truncation }),
                family_truncation(&family),
                json!({ "derived": { "ground": derived.ground().size(), "oracle": derived.oracle_name(), "members": members }, "ord": ord }),
                json!({}),
                table,
            ))
        }
        Command::Chain { input, k, truncation } => {
            let path = &input.input;
            let loaded: Loaded<FamilyDoc> = load(path)?;
            let family = truncated_family(&loaded, path, *truncation)?;
            let witness = at(path, family.chain_witness(*k))?;
            let table = match &witness {
                Some(w) => format!("chain of length {k}: {w:?}\n"),
                None => format!("no chain of length {k}\n"),
            };
            Output::Report(report(
                "chain",
                Status::Definitive,
                json!({ "input": loaded.digest }),
                json!({ "family": loaded.doc, "k": k, "truncation": truncation }),
                family_truncation(&family),
                json!({ "found": witness.is_some(), "chain": witness }),
                json!({}),
                table,
            ))
        }
        Command::Components { input, scale } => {
            let path = &input.input;
            let (loaded, space) = load_space(path)?;
            let r = parse_dist("scale", scale)?;
            let partition = at(path, space.scale_components(&space.points(), r))?;
            let mut blocks: Vec<(Vec<String>, Dist)> = partition
                .blocks
                .iter()
                .zip(&partition.diameters)
                .map(|(b, &d)| (b.iter().map(|&p| space.label(p).to_string()).collect(), d))
                .collect();
            blocks.sort_by_key(|b| partition_key(&space, &b.0));
            let mut table = format!("{} blocks, mesh {}\n", blocks.len(), partition.mesh());
            for (b, d) in &blocks {
                let _ = writeln!(table, "  diameter {d}: {}", b.join(" "));
            }
            Output::Report(report(
                "components",
                Status::Definitive,
                json!({ "input": loaded.digest }),
                json!({ "space": loaded.doc, "scale": r }),
                json!({ "points": space.len() }),
                json!({
                    "blocks": blocks.iter().map(|(b, d)| json!({ "points": b, "diameter": d })).collect::<Vec<_>>(),
                    "mesh": partition.mesh(),
                }),
                json!({}),
                table,
            ))
        }
        Command::Decompose { input, scales, bound, budget } => {
            let path = &input.input;
            let (loaded, space) = load_space(path)?;
            let slots: Vec<Dist> = if scales.contains("..") {
                parse_scales(scales)?.into_iter().map(|s| Dist::int(s as i64)).collect()
            } else {
                scales.split(',').map(|t| parse_dist("scales", t.trim())).collect::<CliResult<_>>()?
            };
            let bound = parse_dist("bound", bound)?;
            let budget = budget.unwrap_or(DEFAULT_NODE_BUDGET);
            let d = at(path, decompose(&space, &ScaleSlots::new(slots.clone())?, bound, budget))?;
            let (verdict, classes) = match &d.outcome {
                Outcome::Feasible { witness } => {
                    let classes: Vec<Vec<&str>> = witness
                        .classes(slots.len())
                        .iter()
                        .map(|c| c.iter().map(|&p| space.label(p)).collect())
                        .collect();
                    ("feasible", Some(classes))
                }
                Outcome::Infeasible => ("infeasible", None),
                Outcome::Unknown => ("unknown", None),
            };
            let mut table = format!("verdict: {verdict}\nnodes: {}\n", d.stats.nodes);
            if let Some(cs) = &classes {
                for (s, c) in slots.iter().zip(cs) {
                    let _ = writeln!(table, "  scale {s}: {}", c.join(" "));
                }
            }
            Output::Report(report(
                "decompose",
                status_of(d.outcome == Outcome::Unknown),
                json!({ "input": loaded.digest }),
                json!({ "space": loaded.doc, "slots": slots, "B": bound, "budget": budget }),
                json!({ "points": space.len(), "B": bound, "budget": budget }),
                json!({ "verdict": verdict, "classes": classes }),
                json!(d.stats),
                table,
            ))
        }
        Command::Family { input, window } => Output::Report(approx_op("family", &input.input, window, None, None)?),
        Command::Trasdim { input, window } => Output::Report(approx_op("trasdim", &input.input, window, None, None)?),
        Command::DeriveF { input, window, n } => Output::Report(approx_op("derive-f", &input.input, window, *n, None)?),
        Command::ProfileCheck { input, window, profile } => {
            Output::Report(approx_op("profile-check", &input.input, window, None, profile.as_deref())?)
        }
        Command::StrategyCheck { input, strategy, truncation, max_truncation, max_rounds } => {
            let path = &input.input;
            let loaded: Loaded<FamilyDoc> = load(path)?;
            let family = at(path, loaded.doc.build())?;
            let s: Loaded<StrategyDoc> = load(strategy)?;
            let strat = at(strategy, s.doc.build())?;
            let t = truncation.unwrap_or(family.ground().size());
            let limits = CertificateLimits { max_truncation: *max_truncation, max_rounds: *max_rounds };
            let r = strat.check_certificate(&family, t, limits)?;
            let mut table = match &r.status {
                CertificateStatus::NoCounterexampleAtTruncation => format!("no counterexample at T={t}\n"),
                CertificateStatus::Counterexample { play } => {
                    let parts: Vec<String> = play.iter().map(ToString::to_string).collect();
                    format!("counterexample: ({})\n", parts.join(", "))
                }
            };
            let _ = writeln!(table, "plays: {}, vacuous: {}", r.plays_examined, r.vacuous_plays);
            if r.all_vacuous {
                table.push_str("warning: every play was vacuous at this truncation\n");
            }
            Output::Report(report(
                "strategy-check",
                Status::Definitive,
                json!({ "input": loaded.digest, "strategy": s.digest }),
                json!({ "family": loaded.doc, "strategy": s.doc, "truncation": t, "max_truncation": max_truncation, "max_rounds": max_rounds }),
                json!({ "ground": t, "oracle": family.oracle_name() }),
                json!(r),
                json!({ "plays_examined": r.plays_examined, "vacuous_plays": r.vacuous_plays }),
                table,
            ))
        }
        Command::Generate { kind, seed, size } => {
            let mut rng = gen::rng(*seed);
            let text = match kind {
                GenKind::Family => serde_json::to_string(&FamilyDoc::from_family(&gen::random_family(&mut rng, *size, 2 * *size as usize)?)?),
                GenKind::Inclusive => serde_json::to_string(&FamilyDoc::from_family(&gen::random_inclusive_family(
                    &mut rng,
                    *size,
                    4,
                    (*size as usize / 2).max(1),
                )?)?),
                GenKind::Space => serde_json::to_string(&SpaceDoc::from_space(&gen::random_space(&mut rng, *size as usize)?)),
            };
            Output::Document(text.expect("documents serialize"))
        }
    })
}

/// Grid labels sort by coordinates, other labels by point index.
fn partition_key(space: &MetricSpace, block: &[String]) -> Vec<usize> {
    let mut ix: Vec<usize> = block.iter().filter_map(|l| space.index_of(l)).collect();
    ix.sort_unstable();
    ix
}

fn load_space(path: &Path) -> CliResult<(Loaded<SpaceDoc>, MetricSpace)> {
    let loaded: Loaded<SpaceDoc> = load(path)?;
    let space = at(path, loaded.doc.build())?;
    Ok((loaded, space))
}

fn ord(path: &Path, truncation: Option<u32>, alpha: Option<&str>, p: usize) -> CliResult<Report> {
    let loaded: Loaded<FamilyDoc> = load(path)?;
    let family = truncated_family(&loaded, path, truncation)?;
    let digest = json!({ "input": loaded.digest });
    let echo = json!({ "family": loaded.doc, "truncation": truncation, "alpha": alpha, "p": p });
    if let Some(alpha) = alpha {
        let alpha: Ordinal = alpha.parse().map_err(|e| CliError(format!("--alpha: {e}")))?;
        let r = at(path, family.ord_less_than(&alpha, p))?;
        let bound = if p == 0 { alpha.to_string() } else { format!("{alpha} + {p}") };
        let table = format!("Ord F < {bound}: {:?}\ntruncated Ord: {}\n", r.verdict, r.truncated_ord);
        return Ok(report(
            "ord",
            status_of(r.verdict == trasdim_core::TriState::Unknown),
            digest,
            echo,
            family_truncation(&family),
            json!({ "query": { "alpha": alpha, "p": p }, "verdict": r.verdict, "truncated_ord": r.truncated_ord }),
            json!({}),
            table,
        ));
    }
    let b = at(path, family.ord_bounds())?;
    let (value, table) = match &b.exact {
        Some(o) => (json!({ "ord": o, "max_cardinality": family.max_cardinality()? }), format!("Ord: {o}\n")),
        None => (
            json!({ "ord": null, "lower_bound": b.lower }),
            format!("Ord >= {} (oracle family at truncation {})\n", b.lower, family.ground().size()),
        ),
    };
    Ok(report("ord", status_of(b.exact.is_none()), digest, echo, family_truncation(&family), value, json!({}), table))
}

struct ApproxInput {
    space: MetricSpace,
    echo_space: SpaceDoc,
    digest: Value,
    params: ApproxParams,
    request: Option<RequestDoc>,
}

/// Accepts a space document or a request document; flags override request fields.
fn approx_input(op: &str, path: &Path, window: &Window) -> CliResult<ApproxInput> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let digest = format!("sha256:{:x}", Sha256::digest(text.as_bytes()));
    let doc = docs::parse_any(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let (echo_space, request) = match doc {
        docs::Document::Space(s) => (s, None),
        docs::Document::Request(r) => {
            if r.op != op {
                return Err(CliError(format!("{}: request op {:?} does not match command {op:?}", path.display(), r.op)));
            }
            (r.space.clone(), Some(*r))
        }
        _ => return Err(CliError(format!("{}: expected a space or request document", path.display()))),
    };
    let space = at(path, echo_space.build())?;
    let scales = match (&window.scales, request.as_ref().and_then(|r| r.scales.clone())) {
        (Some(s), _) => parse_scales(s)?,
        (None, Some(s)) => s,
        (None, None) => return Err(CliError("missing --scales".into())),
    };
    let bound = match (&window.bound, request.as_ref().and_then(|r| r.bound)) {
        (Some(b), _) => parse_dist("bound", b)?,
        (None, Some(b)) => b,
        (None, None) => return Err(CliError("missing --bound".into())),
    };
    let budget = window.budget.or(request.as_ref().and_then(|r| r.budget)).unwrap_or(DEFAULT_NODE_BUDGET);
    let params = ApproxParams::new(scales, bound)?.with_budget(budget);
    Ok(ApproxInput { space, echo_space, digest: json!({ "input": digest }), params, request })
}

fn family_table(f: &FamilyReport) -> String {
    let members = f.members();
    let mut t = format!("members: {}\n", members.len());
    for s in members {
        let _ = writeln!(t, "  {s}");
    }
    t
}

fn approx_op(op: &'static str, path: &Path, window: &Window, n: Option<u32>, profile: Option<&Path>) -> CliResult<Report> {
    let input = approx_input(op, path, window)?;
    let ApproxInput { space, echo_space, mut digest, params, request } = input;
    let truncation = json!({ "scales": params.scales, "B": params.bound, "budget": params.node_budget, "points": space.len() });
    let mut echo = json!({ "space": echo_space, "scales": params.scales, "B": params.bound, "budget": params.node_budget });
    let unknown = |reason: String| {
        (Status::Unknown, json!({ "status": "unknown", "reason": reason }), json!({}), format!("unknown: {reason}\n"))
    };
    let family_stats = |f: &FamilyReport| json!({ "solver_calls": f.solver_calls, "nodes": f.nodes });
    let (status, result, stats, table) = match op {
        "family" => match family_m(&space, &params)? {
            Solved::Decided { value } => {
                (Status::Definitive, json!({ "status": "decided", "family": value }), family_stats(&value), family_table(&value))
            }
            Solved::Unknown { reason } => unknown(reason),
        },
        "trasdim" => match trasdim_ord(&space, &params)? {
            Solved::Decided { value } => {
                let mut t = format!("Ord: {}\nmaximal members:", value.ord);
                for s in &value.maximal {
                    let _ = write!(t, " {s}");
                }
                t.push('\n');
                (
                    Status::Definitive,
                    json!({ "status": "decided", "ord": value.ord, "maximal": value.maximal, "family": value.family }),
                    family_stats(&value.family),
                    t,
                )
            }
            Solved::Unknown { reason } => unknown(reason),
        },
        "derive-f" => {
            let n = n.or(request.as_ref().and_then(|r| r.n)).unwrap_or(0);
            echo["n"] = json!(n);
            match derive_profile_f(&space, n, &params)? {
                Solved::Decided { value } => {
                    let mut t = format!("profile: ({}, f)\nf: {}\n", n + 1, value.f);
                    for (a, b) in &value.violations {
                        let _ = writeln!(t, "warning: f({a}) > f({b})");
                    }
                    (
                        Status::Definitive,
                        json!({ "status": "decided", "n": n, "f": value.f, "profile": ProfileDoc::from_profile(&value.profile()), "non_monotone": value.violations, "family": value.family }),
                        family_stats(&value.family),
                        t,
                    )
                }
                Solved::Unknown { reason } => unknown(reason),
            }
        }
        "profile-check" => {
            let prof: ApdProfile = match (profile, request.as_ref().and_then(|r| r.profile.clone())) {
                (Some(p), _) => {
                    let loaded: Loaded<ProfileDoc> = load(p)?;
                    digest["profile"] = json!(loaded.digest);
                    at(p, loaded.doc.build())?
                }
                (None, Some(doc)) => doc.build()?,
                (None, None) => return Err(CliError("missing --profile".into())),
            };
            let tuples = match request.as_ref().and_then(|r| r.tuples.clone()) {
                Some(t) => t,
                None => in_window_tuples(&prof, &params.scales),
            };
            echo["profile"] = json!(ProfileDoc::from_profile(&prof));
            echo["tuples"] = json!(tuples);
            let r = profile_check(&space, &prof, &tuples, params.bound, params.node_budget)?;
            let nodes: u64 = r.tuples.iter().map(|t| t.decomposition.stats.nodes).sum();
            let mut t = format!("tuples: {}, pass: {}\n", r.tuples.len(), r.pass);
            for tr in &r.tuples {
                let verdict = match tr.decomposition.outcome {
                    Outcome::Feasible { .. } => "feasible",
                    Outcome::Infeasible => "infeasible",
                    Outcome::Unknown => "unknown",
                };
                let _ = writeln!(t, "  {:?} slots {:?}: {verdict}", tr.tuple, tr.slots);
            }
            (status_of(r.any_unknown), json!(r), json!({ "solver_calls": r.tuples.len(), "nodes": nodes }), t)
        }
        _ => unreachable!("approx ops are fixed"),
    };
    Ok(report(op, status, digest, echo, truncation, result, stats, table))
}
