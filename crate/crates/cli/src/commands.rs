use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use lissphere::analysis::{convergence_table, lebesgue_estimate, reference_frequencies, REFERENCE_ERRORS};
use lissphere::curve::{classify_time, eval_curve, intersection_summary, sample_times, DEFAULT_TIME_TOL};
use lissphere::io::{format_complex, read_coefficients, read_nodes_csv, read_nodes_json, write_coefficients};
use lissphere::quadrature::{extract_weights, integrate_samples};
use lissphere::rotation::{test_function, test_function_spherical};
use lissphere::{
    CurveParams, EulerAngles, EulerConvention, FrequencyPair, GridSpec, IndexSet, NodeData,
    RotationProblem, Scheme, SolverOptions, SpectralClass, SpectralSet, Variant,
};

use crate::args::*;
use crate::NotConverged;

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn emit<T: Serialize>(output: &Output, rows: &[T]) -> Result<()> {
    let mut w = sink(&output.out)?;
    match output.format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            for r in rows {
                c.serialize(r)?;
            }
            c.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn open(p: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
    ))
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn sampler(f: Function) -> fn(f64, f64) -> f64 {
    match f {
        Function::Const1 => |_, _| 1.0,
        Function::Gaussians => test_function_spherical,
        Function::Xyz => |t, p| {
            let (st, ct) = f64::sin_cos(t);
            let (sp, cp) = f64::sin_cos(p);
            st * cp * st * sp * ct
        },
    }
}

fn cartesian_sampler(f: Function) -> fn([f64; 3]) -> f64 {
    match f {
        Function::Const1 => |_| 1.0,
        Function::Gaussians => test_function,
        Function::Xyz => |x| x[0] * x[1] * x[2],
    }
}

fn frequencies(m1: Option<usize>, m2: Option<usize>) -> Result<Option<FrequencyPair>> {
    match (m1, m2) {
        (Some(a), Some(b)) => Ok(Some(FrequencyPair::new(a, b)?)),
        (None, None) => Ok(None),
        _ => bail!("give both --m1 and --m2"),
    }
}

fn read_nodes(path: &Path, m: Option<FrequencyPair>) -> Result<NodeData> {
    let data = if is_json(path) {
        read_nodes_json(open(path)?, m)
    } else {
        let m = m.ok_or_else(|| anyhow!("CSV node files need --m1 and --m2"))?;
        read_nodes_csv(open(path)?, m)
    };
    data.with_context(|| format!("reading {}", path.display()))
}

fn load(source: &Source) -> Result<NodeData> {
    let m = frequencies(source.m1, source.m2)?;
    match (&source.input, source.function) {
        (Some(p), _) => read_nodes(p, m),
        (None, Some(f)) => {
            let m = m.ok_or_else(|| anyhow!("--function needs --m1 and --m2"))?;
            Ok(NodeData::sample(&IndexSet::new(m)?, sampler(f)))
        }
        (None, None) => bail!("give --input FILE or --function NAME"),
    }
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize)]
struct ClassifiedRow {
    t: f64,
    grid: &'static str,
    x: f64,
    y: f64,
    z: f64,
    multiplicity: usize,
}

pub fn curve(a: CurveArgs) -> Result<()> {
    let m = if a.classify {
        FrequencyPair::general(a.m.m1, a.m.m2)?
    } else {
        FrequencyPair::new(a.m.m1, a.m.m2)?
    };
    let params = CurveParams::new(m, a.alpha);
    if !a.classify {
        if a.samples == 0 {
            bail!("--samples must be positive");
        }
        let rows: Vec<CurveRow> = (0..a.samples)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / a.samples as f64;
                let [x, y, z] = eval_curve(&params, t);
                CurveRow { t, x, y, z }
            })
            .collect();
        return emit(&a.output, &rows);
    }
    let mut rows = Vec::with_capacity(4 * m.product());
    for (shifted, grid) in [(false, "integer"), (true, "half")] {
        for t in sample_times(&m, shifted) {
            let [x, y, z] = eval_curve(&params, t);
            let multiplicity = classify_time(&m, t, DEFAULT_TIME_TOL)?;
            rows.push(ClassifiedRow {
                t,
                grid,
                x,
                y,
                z,
                multiplicity,
            });
        }
    }
    rows.sort_by(|p, q| p.t.total_cmp(&q.t));
    match a.output.format {
        Format::Csv => emit(&a.output, &rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Classified<'a> {
                m: FrequencyPair,
                summary: lissphere::curve::IntersectionSummary,
                times: &'a [ClassifiedRow],
            }
            emit_json(
                &a.output.out,
                &Classified {
                    m,
                    summary: intersection_summary(&m),
                    times: &rows,
                },
            )
        }
    }
}

#[derive(Serialize)]
struct NodeRow {
    i1: usize,
    i2: usize,
    theta: f64,
    phi: f64,
    x: f64,
    y: f64,
    z: f64,
    #[serde(rename = "in_IS")]
    in_is: bool,
}

pub fn nodes(a: NodesArgs) -> Result<()> {
    let m = FrequencyPair::new(a.m.m1, a.m.m2)?;
    let set = IndexSet::new(m)?;
    let rows = set
        .members()
        .iter()
        .filter(|i| a.all || i.in_reduced_set(&m))
        .map(|&i| {
            let (s, [x, y, z]) = set.node_point(i)?;
            Ok(NodeRow {
                i1: i.i1,
                i2: i.i2,
                theta: s.theta,
                phi: s.phi,
                x,
                y,
                z,
                in_is: i.in_reduced_set(&m),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&a.output, &rows)
}

#[derive(Serialize)]
struct SpectrumRow {
    g1: i64,
    g2: i64,
    class: SpectralClass,
    selected: bool,
}

pub fn spectrum(a: SpectrumArgs) -> Result<()> {
    let m = FrequencyPair::new(a.m.m1, a.m.m2)?;
    let sp = SpectralSet::new(m, a.variant.into())?;
    let rows: Vec<SpectrumRow> = sp
        .members()
        .iter()
        .map(|s| SpectrumRow {
            g1: s.g1,
            g2: s.g2,
            class: s.class,
            selected: sp.is_selected_class(s.class),
        })
        .collect();
    emit(&a.output, &rows)
}

pub fn coeffs(a: CoeffsArgs) -> Result<()> {
    let f = load(&a.source)?;
    let scheme = Scheme::new(f.frequencies(), a.variant.into())?;
    let p = scheme.forward(&f, a.flavor.into())?;
    if !p.pole_consistent() {
        eprintln!("warning: pole values differ within a pole row; the interpolant is not continuous at the poles");
    }
    let mut w = sink(&a.out)?;
    write_coefficients(&mut w, &p)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct PointRow {
    theta: f64,
    phi: f64,
}

#[derive(Serialize)]
struct EvalRow {
    theta: f64,
    phi: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct NodeEvalRow {
    i1: usize,
    i2: usize,
    theta: f64,
    phi: f64,
    re: f64,
    im: f64,
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let p = read_coefficients(open(&a.coeffs)?)
        .with_context(|| format!("reading {}", a.coeffs.display()))?;
    if a.nodes {
        let set = IndexSet::new(p.frequencies())?;
        let rows = set
            .members()
            .iter()
            .map(|&i| {
                let (s, _) = set.node_point(i)?;
                let v = p.evaluate(s.theta, s.phi);
                Ok(NodeEvalRow {
                    i1: i.i1,
                    i2: i.i2,
                    theta: s.theta,
                    phi: s.phi,
                    re: v.re,
                    im: v.im,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return emit(&a.output, &rows);
    }
    let rows: Vec<EvalRow> = if let Some(g) = &a.grid {
        let grid = GridSpec::new(g[0], g[1], true)?;
        let (thetas, phis) = (grid.thetas(), grid.phis());
        let values = p.evaluate_grid(&thetas, &phis);
        thetas
            .iter()
            .flat_map(|&t| phis.iter().map(move |&ph| (t, ph)))
            .zip(values)
            .map(|((theta, phi), v)| EvalRow {
                theta,
                phi,
                re: v.re,
                im: v.im,
            })
            .collect()
    } else if let Some(path) = &a.points {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(open(path)?);
        rdr.deserialize::<PointRow>()
            .map(|r| {
                let r = r.with_context(|| format!("reading {}", path.display()))?;
                if !(r.theta.is_finite() && r.phi.is_finite()) {
                    bail!("non-finite point in {}", path.display());
                }
                let v = p.evaluate(r.theta, r.phi);
                Ok(EvalRow {
                    theta: r.theta,
                    phi: r.phi,
                    re: v.re,
                    im: v.im,
                })
            })
            .collect::<Result<_>>()?
    } else {
        bail!("give --points FILE, --grid N_THETA N_PHI or --nodes");
    };
    emit(&a.output, &rows)
}

#[derive(Serialize)]
struct WeightRow {
    i1: usize,
    i2: usize,
    weight: f64,
}

#[derive(Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct QuadReport {
    m: FrequencyPair,
    normalized: bool,
    integral: Option<ComplexOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<WeightRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_weight: Option<f64>,
}

pub fn quad(a: QuadArgs) -> Result<()> {
    let scale = if a.unnormalized {
        4.0 * std::f64::consts::PI
    } else {
        1.0
    };
    let has_source = a.source.input.is_some() || a.source.function.is_some();
    let (m, integral) = if has_source {
        let f = load(&a.source)?;
        let scheme = Scheme::new(f.frequencies(), Variant::default())?;
        let mut v = integrate_samples(&scheme, &f)? * scale;
        if f.is_real() {
            v.im = 0.0;
        }
        (f.frequencies(), Some(v))
    } else if a.weights {
        let m = frequencies(a.source.m1, a.source.m2)?
            .ok_or_else(|| anyhow!("--weights needs --m1 and --m2"))?;
        (m, None)
    } else {
        bail!("give --input FILE, --function NAME or --weights");
    };
    let rule = if a.weights {
        Some(extract_weights(m)?)
    } else {
        None
    };
    let weights = rule.as_ref().map(|r| {
        r.nodes()
            .iter()
            .zip(r.weights())
            .map(|(i, w)| WeightRow {
                i1: i.i1,
                i2: i.i2,
                weight: w * scale,
            })
            .collect::<Vec<_>>()
    });
    match a.output.format {
        Format::Csv => match weights {
            Some(rows) => emit(&a.output, &rows),
            None => {
                let v = integral.expect("source given");
                let mut w = sink(&a.output.out)?;
                if v.im == 0.0 {
                    writeln!(w, "{:?}", v.re)?;
                } else {
                    writeln!(w, "{}", format_complex(v))?;
                }
                w.flush()?;
                Ok(())
            }
        },
        Format::Json => emit_json(
            &a.output.out,
            &QuadReport {
                m,
                normalized: !a.unnormalized,
                integral: integral.map(|v| ComplexOut { re: v.re, im: v.im }),
                weights,
                min_weight: rule.as_ref().map(|r| r.min() * scale),
                max_weight: rule.as_ref().map(|r| r.max() * scale),
            },
        ),
    }
}

#[derive(Serialize)]
struct LebesgueRow {
    m1: usize,
    m2: usize,
    n_theta: usize,
    n_phi: usize,
    lebesgue: f64,
    /// `Λ / (ln(m1 + 1)·ln(m2 + 1))`.
    normalized: f64,
}

pub fn lebesgue(a: LebesgueArgs) -> Result<()> {
    let rows = a
        .pairs
        .iter()
        .map(|&(m1, m2)| {
            let m = FrequencyPair::new(m1, m2)?;
            let base = GridSpec::for_frequencies(&m);
            let grid = GridSpec::new(
                a.grid.n_theta.unwrap_or(base.n_theta),
                a.grid.n_phi.unwrap_or(base.n_phi),
                !a.grid.midpoints,
            )?;
            let scheme = Scheme::new(m, a.variant.into())?;
            let lebesgue = lebesgue_estimate(&scheme, &grid);
            Ok(LebesgueRow {
                m1,
                m2,
                n_theta: grid.n_theta,
                n_phi: grid.n_phi,
                lebesgue,
                normalized: lebesgue / (((m1 + 1) as f64).ln() * ((m2 + 1) as f64).ln()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&a.output, &rows)
}

#[derive(Serialize)]
struct ConvergeRow {
    m1: usize,
    m2: usize,
    node_count: usize,
    sup_error: f64,
}

#[derive(Serialize)]
struct ReferenceRow {
    m1: usize,
    m2: usize,
    node_count: usize,
    reference_node_count: usize,
    sup_error: f64,
    reference_sup_error: f64,
}

pub fn converge(a: ConvergeArgs) -> Result<()> {
    if a.paper_table {
        let rows = convergence_table(
            test_function_spherical,
            &reference_frequencies(),
            &GridSpec::default(),
            lissphere::Flavor::Complex,
        )?;
        let rows: Vec<ReferenceRow> = rows
            .iter()
            .zip(REFERENCE_ERRORS.iter())
            .map(|(r, &(_, count, err))| ReferenceRow {
                m1: r.m.m1(),
                m2: r.m.m2(),
                node_count: r.node_count,
                reference_node_count: count,
                sup_error: r.sup_error,
                reference_sup_error: err,
            })
            .collect();
        return emit(&a.output, &rows);
    }
    if a.pairs.is_empty() {
        bail!("give --pairs M1:M2,... or --paper-table");
    }
    let m_list = a
        .pairs
        .iter()
        .map(|&(m1, m2)| FrequencyPair::new(m1, m2))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = GridSpec::new(a.n_theta, a.n_phi, !a.midpoints)?;
    let rows: Vec<ConvergeRow> = convergence_table(sampler(a.function), &m_list, &grid, a.flavor.into())?
        .iter()
        .map(|r| ConvergeRow {
            m1: r.m.m1(),
            m2: r.m.m2(),
            node_count: r.node_count,
            sup_error: r.sup_error,
        })
        .collect();
    emit(&a.output, &rows)
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    beta1: f64,
    beta2: f64,
    beta3: f64,
    objective: f64,
    step_norm: f64,
    step_length: f64,
    regularized: bool,
}

fn angles(v: &[f64], degrees: bool) -> Result<EulerAngles> {
    let [a, b, c] = v else {
        bail!("expected three angles, got {}", v.len());
    };
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        bail!("angles must be finite");
    }
    Ok(if degrees {
        EulerAngles::from_degrees(*a, *b, *c)
    } else {
        EulerAngles::new(*a, *b, *c)
    })
}

pub fn rotate(a: RotateArgs) -> Result<()> {
    let m = FrequencyPair::new(a.m.m1, a.m.m2)?;
    let convention: EulerConvention = a.convention.into();
    let flavor = a.flavor.into();
    let problem = match (&a.reference, &a.rotated, a.function) {
        (Some(r), Some(q), _) => {
            let f = read_nodes(r, Some(m))?;
            let g = read_nodes(q, Some(m))?;
            RotationProblem::new(&f, &g, flavor)?.with_convention(convention)
        }
        (None, None, Some(func)) => {
            let beta = angles(a.beta_true.as_deref().unwrap_or_default(), a.degrees)?;
            let set = IndexSet::new(m)?;
            RotationProblem::synthetic(&set, cartesian_sampler(func), beta, convention, flavor)?
        }
        _ => bail!("give --reference and --rotated, or --function with --beta-true"),
    };
    let beta0 = match a.search_steps {
        Some(steps) => problem.coarse_search(steps),
        None => angles(&a.beta0, a.degrees)?,
    };
    let opts = SolverOptions {
        max_iter: a.max_iter,
        flavor,
        ..SolverOptions::default()
    };
    let report = problem.estimate(beta0, &opts);
    let output = Output {
        format: a.format,
        out: a.out.clone(),
    };
    match output.format {
        Format::Json => emit_json(&output.out, &report)?,
        Format::Csv => {
            let rows: Vec<TraceRow> = report
                .trace
                .iter()
                .map(|s| TraceRow {
                    iteration: s.iteration,
                    beta1: s.beta.beta1,
                    beta2: s.beta.beta2,
                    beta3: s.beta.beta3,
                    objective: s.objective,
                    step_norm: s.step_norm,
                    step_length: s.step_length,
                    regularized: s.regularized,
                })
                .collect();
            emit(&output, &rows)?;
        }
    }
    if !report.converged && !a.allow_nonconverged {
        return Err(NotConverged(format!(
            "stopped after {} iterations ({:?}), objective {:e}",
            report.iterations, report.stop_reason, report.residual
        ))
        .into());
    }
    Ok(())
}
