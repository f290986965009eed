use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use minkowski_core::graphs::{systolic_bound, MetricGraph};
use minkowski_core::homology::SimplicialComplex;
use minkowski_core::lattice::{NormBody, Shape, VolumeConfig, VolumeMethod, DEFAULT_MC_SAMPLES};
use minkowski_core::multilinear::{BalancedInvariant, Gf2Tensor};
use minkowski_core::symplectic::AlternatingForm;

mod fixtures;
mod report;

use report::{tagged, InputInfo, RunReport};

#[derive(Parser, Debug)]
#[command(name = "minkowski", version, about = "Length-product certificates for tori, surfaces and graphs")]
struct Cli {
    /// Seed for Monte Carlo volume estimates.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_MC_SAMPLES)]
    samples: usize,
    /// Also compute the exhaustive reference answer where one exists.
    #[arg(long, global = true)]
    oracle: bool,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    /// Override the numeric tolerance of the command's checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Det₂ of a GF(2) tensor, optionally through a balanced invariant.
    Det2 {
        /// Tensor file or builtin (rp3-rp3).
        input: String,
        /// Balanced invariant term file; reports its value and a witness term.
        #[arg(long)]
        invariant: Option<PathBuf>,
    },
    /// Cup-product form of a closed triangulated manifold and its Det₂.
    CupForm {
        /// Complex file or builtin (sphere, torus, rp2, klein, genus<g>, nonorientable<k>).
        input: String,
    },
    /// Greedy Z₂-homology cycle basis with its length-product certificate.
    GraphBasis {
        /// Graph file or builtin (theta, k4).
        input: String,
    },
    /// Successive minima of a flat torus and Minkowski's second theorem.
    Minima {
        /// Body JSON file or builtin (hexagonal, cube<n>, euclidean<n>).
        input: String,
    },
    /// Pairing permutation of an alternating form.
    Pairing {
        /// Form file or builtin (symplectic<2g>).
        input: String,
    },
    /// Number of homologically distinct closed geodesics of length at most t.
    Count {
        /// Body JSON file or builtin.
        input: String,
        #[arg(long)]
        t: f64,
    },
    /// Stable-norm identities of a flat Riemannian torus.
    VerifyStab {
        /// Ellipsoid body JSON file or builtin.
        input: String,
    },
}

#[derive(Debug)]
struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<minkowski_core::Error> for CliError {
    fn from(e: minkowski_core::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Reads `input` as a file when one exists at that path, otherwise looks it up
/// among the builtins. Builtins are digested through their canonical text.
fn load<T>(
    input: &str,
    parse: impl FnOnce(&str) -> minkowski_core::Result<T>,
    builtin: impl FnOnce(&str) -> Option<minkowski_core::Result<T>>,
    canonical: impl FnOnce(&T) -> String,
) -> CliResult<(T, InputInfo)> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read {input}: {e}")))?;
        let value = parse(&text).map_err(|e| CliError(format!("{input}: {e}")))?;
        return Ok((value, InputInfo::new("file", input, text.as_bytes())));
    }
    match builtin(input) {
        Some(value) => {
            let value = value?;
            let text = canonical(&value);
            Ok((value, InputInfo::new("builtin", input, text.as_bytes())))
        }
        None => Err(CliError(format!("no such file or builtin: {input}"))),
    }
}

fn load_body(input: &str) -> CliResult<(NormBody, InputInfo)> {
    load(input, NormBody::from_json, fixtures::body, |b| b.to_json().to_string())
}

fn volume_method_tag(m: &VolumeMethod) -> &'static str {
    match m {
        VolumeMethod::Exact => "exact",
        VolumeMethod::MonteCarlo { .. } => "monte_carlo",
    }
}

fn shape_name(body: &NormBody) -> &'static str {
    match body.shape() {
        Shape::PBall { .. } => "p_ball",
        Shape::Ellipsoid { .. } => "ellipsoid",
        Shape::Slab { .. } => "slab",
    }
}

fn one_based(term: &[Vec<usize>]) -> Vec<Vec<usize>> {
    term.iter()
        .map(|t| t.iter().map(|i| i + 1).collect())
        .collect()
}

fn tensor_support(t: &Gf2Tensor) -> Vec<Vec<usize>> {
    let (n, b) = (t.order(), t.dim());
    t.entries()
        .iter()
        .enumerate()
        .filter(|(_, &bit)| bit)
        .map(|(flat, _)| {
            let mut idx = vec![0; n];
            let mut rest = flat;
            for slot in idx.iter_mut().rev() {
                *slot = rest % b + 1;
                rest /= b;
            }
            idx
        })
        .collect()
}

fn det2_cmd(input: &str, invariant: Option<&Path>) -> CliResult<RunReport> {
    let (tensor, info) = load(input, Gf2Tensor::from_text, fixtures::tensor, Gf2Tensor::to_text)?;
    let mut report = RunReport::new("det2", info);
    report
        .result("order", json!(tensor.order()))
        .result("dim", json!(tensor.dim()));
    let dispatched = tensor.det2_with_route();
    match (&dispatched, invariant) {
        (Ok((bit, route)), _) => {
            report
                .result("det2", tagged(u8::from(*bit), "exact"))
                .result("route", json!(route.name()));
        }
        (Err(minkowski_core::Error::UnsupportedFormat { .. }), Some(_)) => {}
        (Err(e), _) => return Err(e.clone().into()),
    }
    if let Some(path) = invariant {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
        let inv = BalancedInvariant::from_text(&text)
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let value = inv.evaluate(&tensor)?;
        let witness = inv.witness(&tensor)?.map(|t| one_based(t));
        report
            .result("invariant", tagged(u8::from(value), "exact"))
            .result("invariant_terms", json!(inv.terms().len()))
            .result("witness", json!(witness));
        if dispatched.is_err() {
            report
                .result("det2", tagged(u8::from(value), "exact"))
                .result("route", json!("balanced_invariant"));
        }
    }
    Ok(report)
}

fn cup_form_cmd(input: &str) -> CliResult<RunReport> {
    let (complex, info) = load(
        input,
        SimplicialComplex::from_text,
        fixtures::complex,
        SimplicialComplex::to_text,
    )?;
    let form = complex.fundamental_form()?;
    let (bit, route) = form.tensor.det2_with_route()?;
    let mut report = RunReport::new("cup-form", info);
    report
        .result("dimension", json!(complex.dimension()))
        .result("vertices", json!(complex.vertex_count()))
        .result(
            "top_simplices",
            json!(complex.simplices(complex.dimension()).len()),
        )
        .result("b", tagged(form.basis.len(), "exact"))
        .result("tensor", json!(tensor_support(&form.tensor)))
        .result("hypothesis", tagged(u8::from(bit), "exact"))
        .result("route", json!(route.name()))
        .result("provenance", json!(form.provenance));
    Ok(report)
}

fn graph_basis_cmd(cli: &Cli, input: &str) -> CliResult<RunReport> {
    let (graph, info) = load(input, MetricGraph::from_text, fixtures::graph, MetricGraph::to_text)?;
    let cert = graph.greedy_homology_basis()?;
    let shortest = graph.shortest_cycle()?;
    let mut report = RunReport::new("graph-basis", info);
    report
        .result("b", tagged(cert.betti1, "exact"))
        .result("total_length", tagged(cert.total_length, "exact"))
        .result("greedy", json!(cert))
        .result("product", tagged(cert.product, "exact"))
        .result("bound", tagged(cert.bound, "exact"))
        .result("shortest_cycle", json!(shortest));
    report
        .verdict(
            "independence",
            cert.is_basis(),
            format!("rank {} of b = {}", cert.independence_rank, cert.betti1),
        )
        .verdict(
            "product_bound",
            cert.bound_holds(),
            format!("{} <= {}", cert.product, cert.bound),
        );
    // The systolic bound is stated for b >= 2; for b = 1 it is 0/0.
    if cert.betti1 >= 2 {
        let sys = systolic_bound(cert.betti1, cert.total_length);
        report.result("systolic_bound", tagged(sys, "exact")).verdict(
            "systolic_bound",
            shortest.length <= sys,
            format!("{} <= {}", shortest.length, sys),
        );
    }
    if cli.oracle {
        let oracle = graph.min_cycle_basis()?;
        let greedy_sorted = cert.sorted_lengths();
        let oracle_sorted = oracle.sorted_lengths();
        let pointwise = oracle_sorted
            .iter()
            .zip(&greedy_sorted)
            .all(|(o, g)| o <= g);
        report
            .result("oracle", json!(oracle))
            .result("oracle_product", tagged(oracle.product, "enumerated"))
            .verdict(
                "domination_lengths",
                pointwise,
                format!("{oracle_sorted:?} vs {greedy_sorted:?}"),
            )
            .verdict(
                "domination_product",
                oracle.product <= cert.product,
                format!("{} <= {}", oracle.product, cert.product),
            );
    }
    Ok(report)
}

fn minima_cmd(cli: &Cli, input: &str) -> CliResult<RunReport> {
    let (body, info) = load_body(input)?;
    let cfg = VolumeConfig {
        samples: cli.samples,
        seed: cli.seed,
    };
    let r = body.successive_minima(&cfg)?;
    let method = volume_method_tag(&r.volume.method);
    let tol = match r.volume.method {
        VolumeMethod::Exact => cli.tolerance.unwrap_or(1e-12),
        VolumeMethod::MonteCarlo { .. } => 3.0 * r.ratio_std_error,
    };
    let mut report = RunReport::new("minima", info);
    if method == "monte_carlo" {
        report.seeds.push(cli.seed);
        report.result("samples", json!(cli.samples));
    }
    let eq = body.verify_eq_mink(&cfg)?;
    report
        .tolerance("ratio", tol)
        .result("dim", json!(body.dim()))
        .result("shape", json!(shape_name(&body)))
        .result("minima", tagged(&r.minima, "enumerated"))
        .result("vectors", json!(r.vectors))
        .result(
            "volume",
            json!({"value": r.volume.value, "std_error": r.volume.std_error, "method": method}),
        )
        .result("ratio", json!({"value": r.minkowski_ratio, "std_error": r.ratio_std_error, "method": method}))
        .result("bh_volume", tagged(eq.bh_volume, method))
        .result("length_product", tagged(eq.length_product, "enumerated"));
    report
        .verdict(
            "minkowski_second",
            r.minkowski_ratio <= 1.0 + tol,
            format!("ratio {} <= 1 + {tol:e}", r.minkowski_ratio),
        )
        .verdict(
            "length_product",
            eq.pass,
            format!("{} <= {}", eq.length_product, eq.bound),
        );
    Ok(report)
}

fn pairing_cmd(input: &str) -> CliResult<RunReport> {
    let (form, info) = load(input, AlternatingForm::from_text, fixtures::form, AlternatingForm::to_text)?;
    let pairing = form.gutt_pairing()?;
    let mut report = RunReport::new("pairing", info);
    report
        .result("dim", json!(form.dim()))
        .result("field", json!(if form.is_gf2() { "gf2" } else { "rational" }))
        .result("nondegenerate", json!(form.is_nondegenerate()))
        .result("sigma", json!(pairing.sigma))
        .result("pairs", json!(pairing.pairs()))
        .result("pair_values", json!(pairing.pair_values));
    if let Ok(count) = form.matching_count() {
        report.result("matching_count", tagged(count, "enumerated"));
    }
    report.verdict(
        "pairing_verified",
        form.verify_pairing(&pairing),
        "every consecutive pair has nonzero value",
    );
    Ok(report)
}

fn count_cmd(cli: &Cli, input: &str, t: f64) -> CliResult<RunReport> {
    let (body, info) = load_body(input)?;
    let cfg = VolumeConfig {
        samples: cli.samples,
        seed: cli.seed,
    };
    let n = body.count_geodesics(t)?;
    let vol = body.volume(&cfg);
    let method = volume_method_tag(&vol.method);
    let coefficient = n as f64 / t.powi(body.dim() as i32);
    let rel = cli.tolerance.unwrap_or(0.15);
    let allowed = rel * vol.value + 3.0 * vol.std_error;
    let mut report = RunReport::new("count", info);
    if method == "monte_carlo" {
        report.seeds.push(cli.seed);
    }
    report
        .tolerance("coefficient_relative", rel)
        .result("t", json!(t))
        .result("dim", json!(body.dim()))
        .result("count", tagged(n, "enumerated"))
        .result("coefficient", tagged(coefficient, "enumerated"))
        .result(
            "volume",
            json!({"value": vol.value, "std_error": vol.std_error, "method": method}),
        );
    report.verdict(
        "leading_coefficient",
        (coefficient - vol.value).abs() <= allowed,
        format!("|{coefficient} - {}| <= {allowed}", vol.value),
    );
    if body.is_ellipsoid() {
        let g = body.geodesic_growth_check()?;
        report
            .result("stable_ball_measure", tagged(g.stable_ball_measure, "exact"))
            .result("growth_lower_bound", tagged(g.lower_bound, "exact"))
            .verdict(
                "growth_lower_bound",
                g.pass,
                format!("{} >= {}", g.stable_ball_measure, g.lower_bound),
            );
    }
    Ok(report)
}

fn verify_stab_cmd(cli: &Cli, input: &str) -> CliResult<RunReport> {
    let (body, info) = load_body(input)?;
    let eq = body.verify_eq_stab()?;
    let (_, vectors) = body.lattice_minima()?;
    let prop = body.prop_stab_check(&vectors)?;
    let growth = body.geodesic_growth_check()?;
    let tol = cli.tolerance.unwrap_or(eq.tolerance);
    let mut report = RunReport::new("verify-stab", info);
    report
        .tolerance("eq_stab", tol)
        .result("dim", json!(body.dim()))
        .result("unit_ball_volume", tagged(eq.unit_ball_volume, "exact"))
        .result("omega_ab", tagged(eq.omega_ab, "exact"))
        .result("stable_ball_measure", tagged(eq.stable_ball_measure, "exact"))
        .result("riemannian_volume", tagged(eq.riemannian_volume, "exact"))
        .result("mu_times_volume", tagged(eq.rhs, "exact"))
        .result("minima_vectors", json!(vectors))
        .result("prop_stab_lhs", tagged(prop.lhs, "exact"))
        .result("prop_stab_rhs", tagged(prop.rhs, "exact"))
        .result("growth_lower_bound", tagged(growth.lower_bound, "exact"));
    report
        .verdict(
            "eq_stab",
            eq.max_deviation <= tol,
            format!("max deviation {:e} <= {tol:e}", eq.max_deviation),
        )
        .verdict(
            "prop_stab",
            prop.pass,
            format!("{} >= {}", prop.lhs, prop.rhs),
        )
        .verdict(
            "growth_lower_bound",
            growth.pass,
            format!("{} >= {}", growth.stable_ball_measure, growth.lower_bound),
        );
    Ok(report)
}

fn run(cli: &Cli) -> CliResult<RunReport> {
    match &cli.command {
        Command::Det2 { input, invariant } => det2_cmd(input, invariant.as_deref()),
        Command::CupForm { input } => cup_form_cmd(input),
        Command::GraphBasis { input } => graph_basis_cmd(cli, input),
        Command::Minima { input } => minima_cmd(cli, input),
        Command::Pairing { input } => pairing_cmd(input),
        Command::Count { input, t } => count_cmd(cli, input, *t),
        Command::VerifyStab { input } => verify_stab_cmd(cli, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.plain {
                print!("{}", report.to_plain());
            } else {
                println!("{}", report.to_json());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if !cli.plain {
                let v: Value = json!({"command": command_name(&cli.command), "error": e.0});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Det2 { .. } => "det2",
        Command::CupForm { .. } => "cup-form",
        Command::GraphBasis { .. } => "graph-basis",
        Command::Minima { .. } => "minima",
        Command::Pairing { .. } => "pairing",
        Command::Count { .. } => "count",
        Command::VerifyStab { .. } => "verify-stab",
    }
}
