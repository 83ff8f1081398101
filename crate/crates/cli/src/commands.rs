use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use serde_json::Value;

use fdf_core::certifier::{certify_polynomial, equality_candidates, Certificate, CertifyConfig, Method};
use fdf_core::enumerate::{enumerate_orientations, validate_fdf_family, EnumerationReport, FdfReport};
use fdf_core::graph::{build_bf, build_cf, build_f, Triple};
use fdf_core::io::{parse_rational, read_graph, read_weights, ParsedGraph};
use fdf_core::lagrangian::{density_from_uniform, lagrangian_bf, lagrangian_cf, step_gap, DensityReport};
use fdf_core::pipeline::run_pipeline;
use fdf_core::poly::expand_h;
use fdf_core::reduction::reduce_to_complete;
use fdf_core::simplex::maximize;
use fdf_core::{lagrangian_bound, ExactWeights, Rational, Scalar, TripleSystem, WeightedGraph};

use crate::Format;

pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub pass: bool,
}

impl Report {
    fn new(value: &impl Serialize, text: String, pass: bool) -> anyhow::Result<Self> {
        Ok(Report {
            json: serde_json::to_value(value)?,
            text,
            csv: None,
            pass,
        })
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Text => self.text.clone(),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| anyhow!("csv output is only available for enumerate and validate-fdf"))?,
        })
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn load_graph(path: &Path) -> anyhow::Result<ParsedGraph> {
    read_graph(path).with_context(|| format!("reading graph {}", path.display()))
}

fn load_weights(path: Option<&Path>, n: usize) -> anyhow::Result<ExactWeights> {
    match path {
        Some(p) => read_weights(p).with_context(|| format!("reading weights {}", p.display())),
        None => Ok(ExactWeights::uniform(n)?),
    }
}

fn parse_delta(s: &str) -> anyhow::Result<Rational> {
    parse_rational(s).ok_or_else(|| anyhow!("--delta must be a rational like 1/1024, got {s:?}"))
}

fn run_certifier(delta: &str, max_depth: u32, method: Method, seed: u64) -> anyhow::Result<Certificate> {
    let h = expand_h();
    let mut cfg = CertifyConfig::new(parse_delta(delta)?, max_depth);
    cfg.method = method;
    cfg.excision_centers = equality_candidates(&h, 100, seed)?;
    Ok(certify_polynomial(&h, &cfg)?)
}

#[derive(Serialize)]
struct Triples {
    count: usize,
    #[serde(serialize_with = "fdf_core::serde_scalar::one")]
    density: Rational,
    triples: Vec<Triple>,
}

impl Triples {
    fn of(t: &TripleSystem) -> anyhow::Result<Self> {
        Ok(Triples {
            count: t.len(),
            density: fdf_core::graph::edge_density(t)?,
            triples: t.iter().copied().collect(),
        })
    }
}

#[derive(Serialize)]
struct Construction {
    n: usize,
    arcs: Vec<(usize, usize)>,
    f: Triples,
    cf: Triples,
    bf: Triples,
    uniform: DensityReport,
    partition: bool,
    cf_in_bf: bool,
}

pub fn construct(path: &Path) -> anyhow::Result<Report> {
    let ParsedGraph::Directed(g) = load_graph(path)? else {
        bail!("construct needs a `digraph` file");
    };
    let (f, cf, bf) = (build_f(&g), build_cf(&g), build_bf(&g.underlying()));
    let partition = f.is_disjoint(&cf) && f.len() + cf.len() == TripleSystem::complete(g.n()).len();
    let cf_in_bf = cf.is_subset(&bf);
    let c = Construction {
        n: g.n(),
        arcs: g.arcs().collect(),
        f: Triples::of(&f)?,
        cf: Triples::of(&cf)?,
        bf: Triples::of(&bf)?,
        uniform: density_from_uniform(&g)?,
        partition,
        cf_in_bf,
    };
    let mut text = String::new();
    writeln!(text, "n = {}, {} arcs", c.n, c.arcs.len())?;
    for (name, t) in [("F", &c.f), ("CF", &c.cf), ("BF", &c.bf)] {
        writeln!(text, "{name:<3} {:>5} triples  density {}", t.count, t.density.render())?;
    }
    writeln!(text, "uniform L_CF {}  implied density bound {}", c.uniform.uniform_lagrangian.render(), c.uniform.implied_bound.render())?;
    writeln!(text, "F/CF partition: {}", verdict(partition))?;
    writeln!(text, "CF within BF:   {}", verdict(cf_in_bf))?;
    Report::new(&c, text, partition && cf_in_bf)
}

pub fn lagrangian(path: &Path, weights: Option<&Path>) -> anyhow::Result<Report> {
    let g = load_graph(path)?;
    let w = load_weights(weights, g.n())?;
    let l_bf = lagrangian_bf(&g.undirected(), &w)?;
    let mut json = serde_json::json!({ "n": g.n(), "weights": w, "lagrangian_bf": l_bf });
    let mut text = format!("L_BF = {}\n", l_bf.value.render());
    let mut pass = true;
    if let ParsedGraph::Directed(d) = &g {
        let l_cf = lagrangian_cf(d, &w)?;
        let gap = step_gap(d, &w)?;
        pass = l_cf.value <= l_bf.value && gap == l_bf.value.clone() - l_cf.value.clone();
        text = format!(
            "L_CF = {}\n{text}L_BF - L_CF = {}\nL_CF <= L_BF: {}\n",
            l_cf.value.render(),
            gap.render(),
            verdict(pass)
        );
        json["lagrangian_cf"] = serde_json::to_value(&l_cf)?;
        json["step_gap"] = Value::String(gap.render());
        json["pass"] = Value::Bool(pass);
    }
    Ok(Report { json, text, csv: None, pass })
}

pub fn reduce(path: &Path, weights: Option<&Path>) -> anyhow::Result<Report> {
    let g = load_graph(path)?;
    let w = load_weights(weights, g.n())?;
    let wg = WeightedGraph::new(g.undirected(), w)?;
    let r = reduce_to_complete(&wg);
    let monotone = r.trace.iter().all(|s| s.lagrangian_after >= s.lagrangian_before);
    let pass = monotone && r.final_graph.graph().is_complete() && r.trace.len() < g.n().max(1);
    let mut text = format!("L_BF = {}\n", wg.lagrangian().render());
    for s in &r.trace {
        writeln!(
            text,
            "merge {}~{} keep {}: {} -> {}",
            s.original_pair.0,
            s.original_pair.1,
            s.kept,
            s.lagrangian_before.render(),
            s.lagrangian_after.render()
        )?;
    }
    writeln!(text, "final K_{} with L_BF = {}", r.final_graph.n(), r.final_graph.lagrangian().render())?;
    writeln!(text, "monotone: {}", verdict(monotone))?;
    Report::new(&r, text, pass)
}

pub fn optimize(n: usize, restarts: usize, seed: u64, tol: f64) -> anyhow::Result<Report> {
    let r = maximize(n, restarts, seed, tol)?;
    let pass = r.exact_value <= lagrangian_bound();
    let point: Vec<String> = r.point.iter().map(|x| format!("{x:.12}")).collect();
    let text = format!(
        "n = {n}, {restarts} restarts, seed {seed}\nmax {:.15} at [{}]\nresidual {:.3e}\n",
        r.value,
        point.join(", "),
        r.residual
    );
    Report::new(&r, text, pass)
}

pub fn certify(delta: &str, max_depth: u32, method: &str, seed: u64) -> anyhow::Result<Report> {
    let method: Method = method.parse()?;
    let cert = run_certifier(delta, max_depth, method, seed)?;
    let mut text = format!(
        "{}\ncells processed {}, leaves {}, deepest leaf {}\n",
        cert.status,
        cert.cells_processed,
        cert.leaves.len(),
        cert.deepest_leaf
    );
    for e in &cert.excisions {
        let center: Vec<String> = e.center.iter().map(Scalar::render).collect();
        writeln!(
            text,
            "excision at ({}) radius {}: grid minimum {} at {} of {} points",
            center.join(", "),
            e.radius.render(),
            e.evidence.minimum.as_ref().map_or("none".into(), Scalar::render),
            e.evidence.minimizer_count,
            e.evidence.points_evaluated
        )?;
    }
    if !cert.undischarged.is_empty() {
        writeln!(text, "{} cells undischarged at the depth limit", cert.undischarged.len())?;
    }
    let pass = cert.is_certified();
    Report::new(&cert, text, pass)
}

fn enumeration_text(r: &EnumerationReport) -> String {
    let arcs = |a: &[(usize, usize)]| a.iter().map(|(u, v)| format!("{u}->{v}")).collect::<Vec<_>>().join(" ");
    format!(
        "n = {}: {} orientations, {} violations\nmax CF density {} ({})\nmax uniform L_CF {} ({})\n",
        r.n,
        r.orientations,
        r.violation_count,
        r.max_cf_density.render(),
        arcs(&r.max_cf_density_witness),
        r.max_uniform_lagrangian.render(),
        arcs(&r.max_uniform_lagrangian_witness)
    )
}

pub fn enumerate(n: usize) -> anyhow::Result<Report> {
    let r = enumerate_orientations(n)?;
    eprintln!("enumerated n = {n} in {:.3}s", r.wall_time.as_secs_f64());
    let mut report = Report::new(&r, enumeration_text(&r), r.passed())?;
    report.csv = Some(format!("{}\n{}\n", EnumerationReport::CSV_HEADER, r.csv_row()));
    Ok(report)
}

pub fn validate_fdf(n: usize) -> anyhow::Result<Report> {
    let r: FdfReport = validate_fdf_family(n)?;
    let mut text = format!(
        "n = {}: {} orientations, {} without an induced directed 4-cycle, {} skipped\n",
        r.n, r.orientations, r.c4_free, r.skipped
    );
    for c in &r.counterexamples {
        writeln!(text, "independent 4-set {:?} in orientation {:?}", c.independent_set, c.arcs)?;
    }
    writeln!(text, "no independent 4-set: {}", verdict(r.passed()))?;
    let mut report = Report::new(&r, text, r.passed())?;
    report.csv = Some(format!("{}\n{}\n", FdfReport::CSV_HEADER, r.csv_row()));
    Ok(report)
}

pub fn pipeline(graph: &Path, weights: &Path, certificate: Option<(&str, u32)>, seed: u64) -> anyhow::Result<Report> {
    let ParsedGraph::Directed(g) = load_graph(graph)? else {
        bail!("pipeline needs a `digraph` file");
    };
    let w = load_weights(Some(weights), g.n())?;
    let cert = certificate
        .map(|(delta, depth)| run_certifier(delta, depth, Method::Both, seed))
        .transpose()?;
    let r = run_pipeline(&g, &w, cert.as_ref())?;
    let mut text = String::new();
    for l in &r.links {
        writeln!(text, "{} {:<36} {} {} {}", verdict(l.pass), l.name, l.lhs.render(), l.relation, l.rhs.render())?;
    }
    if let Some(c) = &r.certificate {
        writeln!(text, "certificate {} covers the point: {}", c.status, verdict(c.covered))?;
    }
    Report::new(&r, text, r.all_pass)
}
