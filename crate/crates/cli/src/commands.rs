use std::fmt;

use anyhow::{anyhow, bail, Context, Result};
use dgs_core::forms::FormContext;
use dgs_core::harnack::{harnack_constant, HarnackMethod};
use dgs_core::rng::Lcg64;
use dgs_core::shnol::{boundary_measures, bounded_shnol_run, cheeger_compare, shnol_sequence};
use dgs_core::spectral::{ground_energy, second_energy, Resolvent};
use dgs_core::{GraphFunction, VertexSubset, WeightedGraph};
use serde::Serialize;

use crate::report::{csv_real, write_csv, write_json, LabeledValues, Real};
use crate::GraphArgs;

/// A computed check came out false; reported with exit code 2.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Prints the human summary, on stderr when stdout carries a report.
struct Console {
    to_stderr: bool,
}

impl Console {
    fn new(outputs: &[Option<&str>]) -> Self {
        Console {
            to_stderr: outputs.contains(&Some("-")),
        }
    }

    fn say(&self, line: impl AsRef<str>) {
        if self.to_stderr {
            eprintln!("{}", line.as_ref());
        } else {
            println!("{}", line.as_ref());
        }
    }
}

fn vertex(g: &WeightedGraph, label: &str) -> Result<usize> {
    g.vertex_by_label(label).ok_or_else(|| {
        anyhow!(
            "invalid vertex `{label}`: no such label among {} vertices",
            g.vertex_count()
        )
    })
}

/// `all`, `ball:LABEL:R`, or comma-separated labels.
fn vertex_set(g: &WeightedGraph, spec: &str) -> Result<VertexSubset> {
    if spec == "all" {
        return Ok(VertexSubset::full(g.vertex_count()));
    }
    if let Some(rest) = spec.strip_prefix("ball:") {
        let (label, r) = rest
            .rsplit_once(':')
            .ok_or_else(|| anyhow!("expected ball:LABEL:R, got `{spec}`"))?;
        let r: usize = r.parse().with_context(|| format!("bad radius `{r}`"))?;
        return Ok(g.ball(vertex(g, label)?, r)?);
    }
    let members = spec
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|l| vertex(g, l.trim()))
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexSubset::new(g.vertex_count(), members)?)
}

fn labels(g: &WeightedGraph, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
    xs.into_iter().map(|x| g.label(x).to_string()).collect()
}

fn labeled(
    g: &WeightedGraph,
    xs: impl IntoIterator<Item = usize>,
    f: impl Fn(usize) -> f64,
) -> LabeledValues {
    LabeledValues(
        xs.into_iter()
            .map(|x| (g.label(x).to_string(), Real(f(x))))
            .collect(),
    )
}

#[derive(Serialize)]
struct SpectrumReport {
    vertices: usize,
    e0: Real,
    residual: Real,
    lower_bound: Real,
    iterations: usize,
    ground_state: LabeledValues,
    #[serde(skip_serializing_if = "Option::is_none")]
    e1: Option<Real>,
}

pub fn spectrum(args: &GraphArgs, deflate: bool) -> Result<()> {
    let g = args.load()?;
    let out = Console::new(&[args.json.as_deref()]);
    let ground = ground_energy(&g, args.tol)?;
    let e1 = if deflate {
        Some(second_energy(&g, &ground, args.tol)?.0)
    } else {
        None
    };
    out.say(format!("E0 = {}", ground.e0));
    out.say(format!("residual = {:e}", ground.residual));
    out.say(format!("iterations = {}", ground.iterations));
    if let Some(e1) = e1 {
        out.say(format!("E1 = {e1}"));
    }
    if let Some(path) = &args.json {
        let n = g.vertex_count();
        write_json(
            path,
            &SpectrumReport {
                vertices: n,
                e0: Real(ground.e0),
                residual: Real(ground.residual),
                lower_bound: Real(ground.lower_bound),
                iterations: ground.iterations,
                ground_state: labeled(&g, 0..n, |x| ground.ground_state[x]),
                e1: e1.map(Real),
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CertificateReport {
    energy: Real,
    e0: Real,
    x0: String,
    window: Vec<String>,
    min_slack: Real,
    max_abs_slack: Real,
    w: LabeledValues,
    slack: LabeledValues,
}

pub fn supersol(args: &GraphArgs, energy: f64, x0: &str, radius: usize) -> Result<()> {
    let g = args.load()?;
    let out = Console::new(&[args.json.as_deref()]);
    let x0 = vertex(&g, x0)?;
    let window = g.ball(x0, radius)?;
    let res = Resolvent::new(&g, args.tol)?;
    let cert = res.supersolution(energy, x0, &window)?;
    out.say(format!("E0 = {}", res.ground().e0));
    out.say(format!(
        "window = {} vertices around `{}`",
        window.len(),
        g.label(x0)
    ));
    out.say(format!("min slack = {:e}", cert.min_slack()));
    if let Some(path) = &args.json {
        let n = g.vertex_count();
        let slack: Vec<(usize, f64)> = window.iter().zip(cert.slack.iter().copied()).collect();
        write_json(
            path,
            &CertificateReport {
                energy: Real(energy),
                e0: Real(res.ground().e0),
                x0: g.label(x0).to_string(),
                window: labels(&g, window.iter()),
                min_slack: Real(cert.min_slack()),
                max_abs_slack: Real(cert.max_abs_slack()),
                w: labeled(&g, 0..n, |x| cert.w[x]),
                slack: LabeledValues(
                    slack
                        .iter()
                        .map(|&(x, s)| (g.label(x).to_string(), Real(s)))
                        .collect(),
                ),
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct HarnackJson {
    energy: Real,
    window: Vec<String>,
    constant: Real,
    worst_pair: [String; 2],
    witness_path: Vec<String>,
    method: &'static str,
}

pub fn harnack(args: &GraphArgs, energy: f64, window: &str) -> Result<()> {
    let g = args.load()?;
    let out = Console::new(&[args.json.as_deref()]);
    let w = vertex_set(&g, window)?;
    let r = harnack_constant(&g, &w, energy)?;
    let method = match r.method {
        HarnackMethod::ExactEnumeration => "exact-enumeration",
        HarnackMethod::DijkstraFastPath => "dijkstra-fast-path",
    };
    let path = labels(&g, r.witness_path.iter().copied());
    out.say(format!("C = {}", r.constant));
    out.say(format!("witness = {}", path.join(" - ")));
    out.say(format!("method = {method}"));
    if let Some(file) = &args.json {
        write_json(
            file,
            &HarnackJson {
                energy: Real(energy),
                window: labels(&g, w.iter()),
                constant: Real(r.constant),
                worst_pair: [
                    g.label(r.worst_pair.0).to_string(),
                    g.label(r.worst_pair.1).to_string(),
                ],
                witness_path: path,
                method,
            },
        )?;
    }
    Ok(())
}

fn integer_label(g: &WeightedGraph, x: usize) -> Result<f64> {
    g.label(x).parse::<i64>().map(|v| v as f64).map_err(|_| {
        anyhow!(
            "solution formula needs integer labels, got `{}`",
            g.label(x)
        )
    })
}

/// `cos:THETA` gives `cos(THETA x)`, `geometric:T` gives `T^x` (integer
/// labels `x`); `file:PATH` reads `label value` lines.
fn solution(g: &WeightedGraph, spec: &str) -> Result<GraphFunction> {
    let n = g.vertex_count();
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("bad solution spec `{spec}`"))?;
    let num = || {
        arg.parse::<f64>()
            .with_context(|| format!("bad number in `{spec}`"))
    };
    let values: Vec<f64> = match kind {
        "cos" => {
            let theta = num()?;
            (0..n)
                .map(|x| Ok((theta * integer_label(g, x)?).cos()))
                .collect::<Result<_>>()?
        }
        "geometric" => {
            let t = num()?;
            (0..n)
                .map(|x| Ok(t.powf(integer_label(g, x)?)))
                .collect::<Result<_>>()?
        }
        "file" => {
            let text =
                std::fs::read_to_string(arg).with_context(|| format!("cannot read `{arg}`"))?;
            let mut values = vec![None; n];
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut it = line.split_whitespace();
                let (Some(label), Some(value), None) = (it.next(), it.next(), it.next()) else {
                    bail!("{arg}:{}: expected `label value`", i + 1);
                };
                let x = vertex(g, label)?;
                values[x] = Some(
                    value
                        .parse::<f64>()
                        .with_context(|| format!("{arg}:{}", i + 1))?,
                );
            }
            values
                .into_iter()
                .enumerate()
                .map(|(x, v)| v.ok_or_else(|| anyhow!("no value for vertex `{}`", g.label(x))))
                .collect::<Result<_>>()?
        }
        _ => bail!("unknown solution `{spec}`; expected cos:THETA, geometric:T or file:PATH"),
    };
    Ok(GraphFunction::new(values))
}

#[derive(Serialize)]
struct ShnolRowJson {
    n: usize,
    norm: Real,
    p: Real,
    q: Real,
    quot_p: Real,
    quot_q: Real,
    weyl: Real,
}

pub struct ShnolArgs<'a> {
    pub graph: &'a GraphArgs,
    pub energy: f64,
    pub solution: &'a str,
    pub x0: &'a str,
    pub max_radius: usize,
    pub csv: Option<&'a str>,
    pub alphas: &'a [f64],
    pub deltas: &'a [f64],
    pub solution_tol: f64,
}

pub fn shnol(a: &ShnolArgs<'_>) -> Result<()> {
    let g = a.graph.load()?;
    let out = Console::new(&[a.graph.json.as_deref(), a.csv]);
    let x0 = vertex(&g, a.x0)?;
    let w = solution(&g, a.solution)?;
    let report = shnol_sequence(&g, &w, a.energy, x0, a.max_radius, a.solution_tol)?;

    if let Some(path) = a.csv {
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![r.n.to_string()];
                row.extend([r.norm, r.p, r.q, r.quot_p, r.quot_q, r.weyl].map(csv_real));
                row
            })
            .collect();
        write_csv(
            path,
            &["n", "norm", "p", "q", "quot_p", "quot_q", "weyl"],
            &rows,
        )?;
    }
    if let Some(path) = &a.graph.json {
        let rows: Vec<ShnolRowJson> = report
            .rows
            .iter()
            .map(|r| ShnolRowJson {
                n: r.n,
                norm: Real(r.norm),
                p: Real(r.p),
                q: Real(r.q),
                quot_p: Real(r.quot_p),
                quot_q: Real(r.quot_q),
                weyl: Real(r.weyl),
            })
            .collect();
        write_json(path, &rows)?;
    }

    out.say(format!(
        "interior residual = {:e}",
        report.interior_residual
    ));
    if let Some(d) = report.oracle_distance {
        out.say(format!(
            "distance from E to the truncation spectrum = {d:e}"
        ));
    }
    out.say(format!("min weyl residual = {}", report.min_weyl()));
    out.say(format!(
        "quotient decay (last / peak) = {}",
        report.quotient_decay()
    ));
    out.say(if report.spectral_evidence() {
        "spectral evidence"
    } else {
        "no spectral evidence"
    });

    if !a.alphas.is_empty() || !a.deltas.is_empty() {
        let run = bounded_shnol_run(
            &g,
            &w,
            a.energy,
            x0,
            a.max_radius,
            a.alphas,
            a.deltas,
            a.solution_tol,
        )?;
        out.say(format!(
            "C_b = {} at `{}`",
            run.c_b.c_b,
            g.label(run.c_b.attained_at)
        ));
        for wn in &run.weighted_norms {
            out.say(format!(
                "alpha = {}: weighted norm {}, tail fraction {}",
                wn.alpha, wn.norm, wn.tail_fraction
            ));
        }
        for d in &run.diagonal {
            match (d.radius, d.observed) {
                (Some(n), Some(obs)) => out.say(format!(
                    "delta = {}: n_k = {n}, (p/norm)^2 = {obs:e} <= {:e}",
                    d.delta, d.bound
                )),
                _ => out.say(format!("delta = {}: no radius in this window", d.delta)),
            }
        }
        out.say(if run.subexponential {
            "subexponential on this window"
        } else {
            "not subexponential on this window"
        });
        let broken: Vec<usize> = run
            .brackets
            .iter()
            .filter(|b| !b.holds)
            .map(|b| b.n)
            .collect();
        if !broken.is_empty() {
            return Err(
                CheckFailed(format!("bracketing inequality fails at n = {broken:?}")).into(),
            );
        }
        out.say(format!("bracketing holds for n = 0..={}", a.max_radius));
    }
    Ok(())
}

#[derive(Serialize)]
struct GsrJson {
    trials: usize,
    seed: u64,
    e0: Real,
    max_relative_defect: Real,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    supersolution: Option<SuperJson>,
}

#[derive(Serialize)]
struct SuperJson {
    energy: Real,
    min_relative_defect: Real,
    pass: bool,
}

const GSR_RTOL: f64 = 1e-9;

pub fn gsr_check(args: &GraphArgs, trials: usize, energy: Option<f64>) -> Result<()> {
    let g = args.load()?;
    let out = Console::new(&[args.json.as_deref()]);
    let ground = ground_energy(&g, args.tol.min(1e-12))?;
    let ctx = FormContext::new(&g);
    let n = g.vertex_count();
    let mut rng = Lcg64::new(args.seed);
    let mut draw = || GraphFunction::from_fn(n, |_| rng.uniform(-1.0, 1.0));
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let t = ctx.gsr_terms(&ground.ground_state, ground.e0, &draw())?;
        worst = worst.max(t.defect.abs() / (1.0 + t.scale()));
    }
    let pass = worst <= GSR_RTOL;
    out.say(format!("E0 = {}", ground.e0));
    out.say(format!(
        "max |Q(u) - Q_w(u) - E0 |u|^2| / scale = {worst:e} over {trials} trials"
    ));

    let mut supersolution = None;
    if let Some(e) = energy {
        let res = Resolvent::new(&g, args.tol)?;
        let window = g.ball(0, 1)?;
        let window = if window.len() < n {
            window
        } else {
            g.ball(0, 0)?
        };
        let cert = res.supersolution(e, 0, &window)?;
        let mut least = f64::INFINITY;
        for _ in 0..trials {
            let t = ctx.gsr_terms(&cert.w, e, &draw())?;
            least = least.min(t.defect / (1.0 + t.scale()));
        }
        let ok = least >= -GSR_RTOL;
        out.say(format!(
            "super-solution at E = {e}: min defect / scale = {least:e}"
        ));
        supersolution = Some(SuperJson {
            energy: Real(e),
            min_relative_defect: Real(least),
            pass: ok,
        });
    }
    let all_pass = pass && supersolution.as_ref().is_none_or(|s| s.pass);
    out.say(if all_pass { "pass" } else { "fail" });
    if let Some(path) = &args.json {
        write_json(
            path,
            &GsrJson {
                trials,
                seed: args.seed,
                e0: Real(ground.e0),
                max_relative_defect: Real(worst),
                pass,
                supersolution,
            },
        )?;
    }
    if !all_pass {
        return Err(CheckFailed("ground state representation check failed".into()).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundaryJson {
    set: Vec<String>,
    mu_on_da: LabeledValues,
    mu_on_dac: LabeledValues,
    nu_on_da: LabeledValues,
    nu_on_dac: LabeledValues,
    #[serde(skip_serializing_if = "Option::is_none")]
    cheeger: Option<CheegerJson>,
}

#[derive(Serialize)]
struct CheegerJson {
    q1: Real,
    form: Real,
    p1_sq: Real,
    deg_da: usize,
    deg_dac: usize,
    forward: bool,
    reverse: bool,
}

pub fn boundary(args: &GraphArgs, set: &str, cheeger: bool) -> Result<()> {
    let g = args.load()?;
    let out = Console::new(&[args.json.as_deref()]);
    let a = vertex_set(&g, set)?;
    let r = boundary_measures(&g, &a)?;
    let to_labeled = |m: &std::collections::BTreeMap<usize, f64>| {
        LabeledValues(
            m.iter()
                .map(|(&x, &v)| (g.label(x).to_string(), Real(v)))
                .collect(),
        )
    };
    let describe = |name: &str, m: &std::collections::BTreeMap<usize, f64>| {
        let cells: Vec<String> = m
            .iter()
            .map(|(&x, v)| format!("{}: {v}", g.label(x)))
            .collect();
        format!("{name} = {{{}}}", cells.join(", "))
    };
    out.say(describe("mu_A on dA", &r.mu_on_da));
    out.say(describe("mu_Ac on dAc", &r.mu_on_dac));
    out.say(describe("nu_A on dA", &r.nu_on_da));
    out.say(describe("nu_Ac on dAc", &r.nu_on_dac));

    let cheeger = if cheeger {
        let c = cheeger_compare(&g, &a)?;
        out.say(format!(
            "q(1_A) = {}, Q(1_A) = {}, p(1_A)^2 = {}",
            c.q1, c.form, c.p1_sq
        ));
        out.say(format!(
            "deg_A(dA) = {}, deg_A(dAc) = {}",
            c.deg_da, c.deg_dac
        ));
        Some(c)
    } else {
        None
    };
    if let Some(path) = &args.json {
        write_json(
            path,
            &BoundaryJson {
                set: labels(&g, a.iter()),
                mu_on_da: to_labeled(&r.mu_on_da),
                mu_on_dac: to_labeled(&r.mu_on_dac),
                nu_on_da: to_labeled(&r.nu_on_da),
                nu_on_dac: to_labeled(&r.nu_on_dac),
                cheeger: cheeger.as_ref().map(|c| CheegerJson {
                    q1: Real(c.q1),
                    form: Real(c.form),
                    p1_sq: Real(c.p1_sq),
                    deg_da: c.deg_da,
                    deg_dac: c.deg_dac,
                    forward: c.forward,
                    reverse: c.reverse,
                }),
            },
        )?;
    }
    if let Some(c) = cheeger {
        if !(c.forward && c.reverse) {
            return Err(CheckFailed("Cheeger comparison chain fails".into()).into());
        }
    }
    Ok(())
}
