use std::path::Path;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use spectre::causal_order::{cone_closure_check, light_cone_cone, order_from_cone, FinitePoset};
use spectre::connes_distance::{distance_matrix, spectral_distance, DistanceSummary};
use spectre::dixmier::{
    estimate_values, estimator_summary, nc_integral_check, nc_integral_check_torus, profile_table, signature_check,
    Method, Signature, TorusTruncation, TrigPoly, TruncatedCircleTriple,
};
use spectre::gelfand::{characters, StateFunctional};
use spectre::io::{parse_cone, parse_lattice, parse_poset, TemporalJson, TripleJson};
use spectre::krein_temporal::{fixtures as kfix, validate_temporal};
use spectre::lorentzian::{equality_witness, lorentz_distance_paths, lorentz_distance_variational, LatticeSpacetime, Node};
use spectre::numerics::{Operator, C64};
use spectre::spectral_triple::{
    default_generators, fixtures, gauge_covariance_residual, junk_subspace, ko_signs, product_triple, unitary_exp,
    validate_triple, FiniteSpectralTriple,
};

use crate::failure::Failure;
use crate::output::{num, Output, Table};
use crate::{Cli, Command};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LorentzMethod {
    Dp,
    Variational,
    Both,
}

/// `f = c + Σ a cos(k·θ) + Σ b sin(k·θ)`; with no terms `f = 1`.
#[derive(Args, Debug, Clone)]
pub struct TrigArgs {
    #[arg(long)]
    pub constant: Option<f64>,
    /// `k:amp` with `k` a comma-separated frequency, e.g. `1:0.5` or `1,0:2`.
    #[arg(long)]
    pub cos: Vec<String>,
    #[arg(long)]
    pub sin: Vec<String>,
}

impl TrigArgs {
    fn build(&self, dim: usize) -> Result<TrigPoly, Failure> {
        let parse = |s: &str| -> Result<(Vec<i64>, f64), Failure> {
            let (k, a) = s.split_once(':').ok_or_else(|| Failure::schema(format!("term `{s}` is not k:amp")))?;
            let k: Vec<i64> = k
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::schema(format!("frequency `{k}`: {e}")))?;
            if k.len() != dim {
                return Err(Failure::schema(format!("frequency `{s}` needs {dim} components")));
            }
            let a = a.trim().parse::<f64>().map_err(|e| Failure::schema(format!("amplitude `{a}`: {e}")))?;
            Ok((k, a))
        };
        let empty = self.constant.is_none() && self.cos.is_empty() && self.sin.is_empty();
        let mut f = TrigPoly::constant(dim, if empty { 1.0 } else { self.constant.unwrap_or(0.0) });
        for s in &self.cos {
            let (k, a) = parse(s)?;
            f = f.add(&TrigPoly::cos(&k, a));
        }
        for s in &self.sin {
            let (k, a) = parse(s)?;
            f = f.add(&TrigPoly::sin(&k, a));
        }
        Ok(f)
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
}

fn load_triple(p: &Path) -> Result<FiniteSpectralTriple, Failure> {
    let j: TripleJson = serde_json::from_str(&read(p)?)?;
    Ok(j.to_triple()?)
}

fn load_lattice(p: &Path) -> Result<LatticeSpacetime, Failure> {
    Ok(parse_lattice(&read(p)?)??)
}

fn node(s: &str) -> Result<Node, Failure> {
    let bad = || Failure::schema(format!("node `{s}` is not t,x"));
    let (t, x) = s.split_once(',').ok_or_else(bad)?;
    Ok(Node::new(t.trim().parse().map_err(|_| bad())?, x.trim().parse().map_err(|_| bad())?))
}

fn method(s: &str) -> Result<Option<Method>, Failure> {
    if s == "all" {
        return Ok(None);
    }
    Ok(Some(s.parse::<Method>()?))
}

fn positive(tol: Option<f64>, default: f64) -> Result<f64, Failure> {
    let t = tol.unwrap_or(default);
    if !(t > 0.0 && t.is_finite()) {
        return Err(Failure::schema(format!("tolerance {t} must be positive")));
    }
    Ok(t)
}

#[derive(Serialize)]
struct KoRow {
    ko_dim: i64,
    epsilon: i8,
    epsilon_prime: i8,
    epsilon_second: Option<i8>,
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Validate { input } => {
            let t = load_triple(input)?;
            let r = validate_triple(&t, positive(c.tol, 1e-8)?);
            let failed = !r.passed();
            Ok(Output::new(&r)?.with_table(report_table(&r)).failed_if(failed))
        }
        Command::Ko { dim, gauge_samples } => {
            let dims: Vec<i64> = match dim {
                Some(d) => vec![*d],
                None => (0..8).collect(),
            };
            let mut rows = Vec::new();
            let mut table = Table::new(&["ko_dim", "epsilon", "epsilon_prime", "epsilon_second"]);
            for d in dims {
                let s = ko_signs(d)?;
                table.push(vec![
                    d.to_string(),
                    s.epsilon.to_string(),
                    s.epsilon_prime.to_string(),
                    s.epsilon_second.map(|v| v.to_string()).unwrap_or_default(),
                ]);
                rows.push(KoRow { ko_dim: d, epsilon: s.epsilon, epsilon_prime: s.epsilon_prime, epsilon_second: s.epsilon_second });
            }
            let mut doc = json!({ "table": rows });
            let mut failed = false;
            if *gauge_samples > 0 {
                let tol = positive(c.tol, 1e-8)?;
                let worst = gauge_check(*gauge_samples, c.seed)?;
                failed = worst > tol;
                doc["gauge"] = json!({ "samples": gauge_samples, "seed": c.seed, "max_residual": worst, "tol": tol, "passed": !failed });
            }
            Ok(Output::new(doc)?.with_table(table).failed_if(failed))
        }
        Command::Product { input, input2 } => {
            let p = product_triple(&load_triple(input)?, &load_triple(input2)?)?;
            let r = validate_triple(&p, positive(c.tol, 1e-8)?);
            let failed = !r.passed();
            let doc = json!({
                "ko_dim": p.real.as_ref().map(|j| j.ko_dim),
                "report": r,
                "triple": TripleJson::from_triple(&p),
            });
            Ok(Output::new(doc)?.with_table(report_table(&r)).failed_if(failed))
        }
        Command::DistanceRiemannian { input, from, to } => {
            let t = load_triple(input)?;
            let tol = positive(c.tol, 1e-6)?;
            let cs = characters(t.basis())?;
            let states: Vec<StateFunctional> =
                (0..cs.len()).map(|k| StateFunctional::pure(cs.clone(), k)).collect::<Result<_, _>>()?;
            match (from, to) {
                (Some(i), Some(j)) => {
                    let pick = |k: usize| {
                        states.get(k).ok_or_else(|| Failure::schema(format!("no character {k}; there are {}", states.len())))
                    };
                    let r = spectral_distance(&t, pick(*i)?, pick(*j)?, tol)?;
                    let mut table = Table::new(&["from", "to", "distance", "witness_norm"]);
                    table.push(vec![i.to_string(), j.to_string(), num(r.distance), num(r.witness_norm)]);
                    Ok(Output::new(DistanceSummary::from(&r))?.with_table(table))
                }
                (None, None) => {
                    let m = distance_matrix(&t, &states, tol)?;
                    let n = m.nrows();
                    let header: Vec<String> = (0..n).map(|k| format!("c{k}")).collect();
                    let mut table = Table { header, rows: vec![] };
                    let mut rows = Vec::new();
                    for i in 0..n {
                        let row: Vec<Option<f64>> = (0..n).map(|j| m[(i, j)].is_finite().then_some(m[(i, j)])).collect();
                        table.push((0..n).map(|j| num(m[(i, j)])).collect());
                        rows.push(row);
                    }
                    Ok(Output::new(json!({ "characters": n, "matrix": rows }))?.with_table(table))
                }
                _ => Err(Failure::schema("give both --from and --to, or neither")),
            }
        }
        Command::DistanceLorentzian { lattice, from, to, method } => {
            let m = load_lattice(lattice)?;
            let (p, q) = (node(from)?, node(to)?);
            if !m.contains(p) || !m.contains(q) {
                return Err(Failure::schema("node outside the lattice"));
            }
            let dp = matches!(method, LorentzMethod::Dp | LorentzMethod::Both).then(|| lorentz_distance_paths(&m, p, q));
            let var = match method {
                LorentzMethod::Variational | LorentzMethod::Both => {
                    Some(lorentz_distance_variational(&m, p, q, positive(c.tol, 1e-6)?)?)
                }
                LorentzMethod::Dp => None,
            };
            let doc = json!({
                "from": p, "to": q, "dp": dp,
                "variational": var.as_ref().map(|v| v.distance),
                "iterations": var.as_ref().map(|v| v.iterations),
                "max_violation": var.as_ref().map(|v| v.max_violation),
            });
            let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
            let mut table = Table::new(&["from_t", "from_x", "to_t", "to_x", "dp", "variational"]);
            table.push(vec![
                p.t.to_string(),
                p.x.to_string(),
                q.t.to_string(),
                q.x.to_string(),
                opt(dp),
                opt(var.as_ref().map(|v| v.distance)),
            ]);
            Ok(Output::new(doc)?.with_table(table))
        }
        Command::EqualityWitness { lattice, from, to, epsilon } => {
            let m = load_lattice(lattice)?;
            let w = equality_witness(&m, node(from)?, node(to)?, *epsilon)?;
            let mut table = Table::new(&["t", "x", "f"]);
            for t in 0..w.f.nt {
                for x in 0..w.f.nx {
                    table.push(vec![t.to_string(), x.to_string(), num(w.f.at(Node::new(t, x)))]);
                }
            }
            Ok(Output::new(&w)?.with_table(table))
        }
        Command::Dixmier { profile, power, length, method: mname, points } => {
            let values: Vec<f64> = match (profile, power) {
                (Some(p), None) => serde_json::from_str(&read(p)?)?,
                (None, Some(a)) => (0..*length).map(|n| ((n + 1) as f64).powf(-a)).collect(),
                _ => return Err(Failure::schema("give exactly one of --profile and --power")),
            };
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Failure::schema("profile has non-finite entries"));
            }
            let estimate = match method(mname)? {
                Some(m) => serde_json::to_value(estimate_values(&values, m)?)?,
                None => serde_json::to_value(estimator_summary(&values)?)?,
            };
            let rows = profile_table(&values, *points);
            let mut table = Table::new(&["N", "sigma_N", "sigma_over_logN", "tau_N"]);
            for r in &rows {
                table.push(vec![r.n.to_string(), num(r.sigma_n), num(r.sigma_over_log_n), num(r.tau_n)]);
            }
            Ok(Output::new(json!({ "length": values.len(), "estimate": estimate, "profile": rows }))?.with_table(table))
        }
        Command::NcIntegral { dim, cutoff, f, method: mname } => {
            let m = method(mname)?.ok_or_else(|| Failure::schema("nc-integral takes a single method"))?;
            let f = f.build(*dim)?;
            let r = match dim {
                1 => nc_integral_check(&TruncatedCircleTriple::new(*cutoff)?, &f, m)?,
                2 => {
                    if *cutoff > 400 {
                        return Err(Failure::schema("torus cutoff is modes per direction; at most 400"));
                    }
                    nc_integral_check_torus(&TorusTruncation::new(*cutoff, Signature::Riemannian)?, &f, m)?
                }
                _ => return Err(Failure::schema("dimension must be 1 or 2")),
            };
            Ok(Output::new(&r)?)
        }
        Command::Signature { modes, signature, exponent, f, method: mname } => {
            let m = method(mname)?.ok_or_else(|| Failure::schema("signature takes a single method"))?;
            let sig = match signature.as_str() {
                "lorentzian" => Signature::Lorentzian,
                "riemannian" => Signature::Riemannian,
                s => return Err(Failure::schema(format!("unknown signature {s}"))),
            };
            let r = signature_check(&TorusTruncation::new(*modes, sig)?, &f.build(2)?, *exponent, m)?;
            Ok(Output::new(&r)?)
        }
        Command::TemporalValidate { input, fixture, h } => {
            let (report, hv) = match (input, fixture) {
                (Some(p), None) => {
                    let j: TemporalJson = serde_json::from_str(&read(p)?)?;
                    (validate_temporal(&j.to_temporal()?, positive(c.tol, 1e-8)?, None)?, None)
                }
                (None, Some(name)) => {
                    let fx = match name.as_str() {
                        "cylinder" => kfix::minkowski_cylinder(*h)?,
                        "fault" => kfix::spatial_time_fault(*h)?,
                        s => return Err(Failure::schema(format!("unknown fixture {s}"))),
                    };
                    (validate_temporal(&fx.triple, positive(c.tol, 0.05)?, Some(&fx.band))?, Some(*h))
                }
                _ => return Err(Failure::schema("give exactly one of --in and --fixture")),
            };
            let failed = !report.passed();
            let table = report_table(&report);
            Ok(Output::new(json!({ "h": hv, "report": report }))?.with_table(table).failed_if(failed))
        }
        Command::OrderReconstruct { cone, lattice, poset, with_time, depth } => {
            let (cone, reference) = match (cone, lattice) {
                (Some(p), None) => (parse_cone(&read(p)?)??, None),
                (None, Some(l)) => {
                    let m = load_lattice(l)?;
                    (light_cone_cone(&m, *with_time)?, Some(FinitePoset::from_lattice(&m)?))
                }
                _ => return Err(Failure::schema("give exactly one of --cone and --lattice")),
            };
            let reference = match poset {
                Some(p) => Some(parse_poset(&read(p)?)??),
                None => reference,
            };
            let order = order_from_cone(cone.points(), &cone)?;
            let closure = cone_closure_check(&cone, *depth, None)?;
            let separated = reference.as_ref().map(|r| *r == order);
            let failed = separated == Some(false) || !closure.all_isotone;
            let pairs = order.strict_pairs();
            let mut table = Table::new(&["x", "y"]);
            for (x, y) in &pairs {
                table.push(vec![x.to_string(), y.to_string()]);
            }
            let doc = json!({
                "n": order.n,
                "relations": pairs.len(),
                "completely_separated": separated,
                "closure": closure,
                "poset": order,
            });
            Ok(Output::new(doc)?.with_table(table).failed_if(failed))
        }
        Command::Junk { input, degree } => {
            let t = load_triple(input)?;
            if *degree == 0 {
                return Err(Failure::schema("junk forms start in degree 1"));
            }
            let j = junk_subspace(&t, *degree, &default_generators(&t, *degree - 1))?;
            Ok(Output::new(&j)?)
        }
    }
}

fn report_table(r: &spectre::report::ValidationReport) -> Table {
    let mut t = Table::new(&["check", "residual", "passed"]);
    for c in &r.checks {
        t.push(vec![c.name.clone(), num(c.residual), c.passed.to_string()]);
    }
    t
}

/// Worst `‖D_{A^u} − U D_A U*‖` over random unitaries and one-forms on the two-point real triple.
fn gauge_check(samples: usize, seed: u64) -> Result<f64, Failure> {
    let t = fixtures::two_point_real(C64::new(0.8, 0.3));
    let h = t.algebra.hermitian_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combo = |rng: &mut ChaCha8Rng, spread: f64| -> Operator {
        h.iter().fold(Operator::zeros(t.hilbert_dim()), |acc, b| &acc + &b.scale_real(rng.random_range(-spread..spread)))
    };
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let u = unitary_exp(&combo(&mut rng, std::f64::consts::PI))?;
        let (a0, b0) = (combo(&mut rng, 1.0), combo(&mut rng, 1.0));
        let a = (&a0 * &t.differential(&b0)).hermitian_part();
        worst = worst.max(gauge_covariance_residual(&t, &a, &u)?);
    }
    Ok(worst)
}
