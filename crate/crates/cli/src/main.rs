//! `ruled` — command-line front end for good-triple analysis in compact
//! matrix Lie algebras: verification, sign search, surface export,
//! Jacobi-field evaluation, spectral/root decomposition, and bundled
//! example generation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use ruled_core::io::{
    self, load_algebra, load_triple, load_vector, triple_spec, verdict_report, AlgebraSpec,
    TripleSpec, VectorSpec, VerdictReport,
};
use ruled_core::jacobi::JacobiField;
use ruled_core::spectral::{weak_regularity_of, RootDecomposition, SpectralDecomposition};
use ruled_core::triples::{
    check_algebraic, check_condition_q2, check_curvature_necessary, check_surface_numeric,
    default_t_samples, make_coset_triple, make_su4_example, sample_surface, sign_search,
    CosetSide, GridSpec, SurfaceSample, Triple, Verdict, SIGN_SEARCH_CAP,
};
use ruled_core::{AlgebraRef64, Vector64};

#[derive(Parser)]
#[command(
    name = "ruled",
    version,
    about = "Decide and explore good triples {X, V, A} in compact matrix Lie algebras"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize, Clone)]
struct Common {
    /// Algebra for bare-vector inputs: `su:N`, `so:N`, or a path to a
    /// custom-algebra JSON file.
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Evaluation grid, e.g. `21x21`.
    #[arg(long, global = true, default_value = "21x21")]
    grid: String,
    /// Parameter range for both axes, e.g. `-2:2`.
    #[arg(long, global = true, default_value = "-2:2", allow_hyphen_values = true)]
    range: String,
    /// Override the algebraic (Krylov) verdict tolerance.
    #[arg(long, global = true)]
    tol_algebraic: Option<f64>,
    /// Override the series-condition verdict tolerance.
    #[arg(long, global = true)]
    tol_q2: Option<f64>,
    /// Override the numerical-surface verdict tolerance.
    #[arg(long, global = true)]
    tol_surface: Option<f64>,
    /// Seed for randomized sampling (torus construction, root pairing).
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Emit machine-readable JSON instead of human tables.
    #[arg(long, global = true)]
    json: bool,
    /// Output path (mesh for `surface`, directory for `examples`,
    /// file for CSV/JSON reports; default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run all verdict methods on a triple file and report agreement.
    Verify { triple_file: PathBuf },
    /// Enumerate the finite set of A-candidates for weakly regular X.
    Search { x_file: PathBuf, v_file: PathBuf },
    /// Export the doubly ruled surface of a triple as an OBJ mesh.
    Surface { triple_file: PathBuf },
    /// Emit CSV samples of the Jacobi field of a triple.
    Jacobi { triple_file: PathBuf },
    /// Eigenvalue, root-space, and weak-regularity report for X.
    Decompose { x_file: PathBuf },
    /// List or materialize the bundled example triples.
    Examples,
}

/// Input/usage problems exit 2; internal method disagreement exits 3.
enum Failure {
    Input(String),
    Disagreement(String),
}

impl From<ruled_core::Error> for Failure {
    fn from(e: ruled_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("JSON parse error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("internal method disagreement: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let ctx = Context::resolve(&cli.common)?;
    match &cli.command {
        Command::Verify { triple_file } => cmd_verify(&ctx, triple_file),
        Command::Search { x_file, v_file } => cmd_search(&ctx, x_file, v_file),
        Command::Surface { triple_file } => cmd_surface(&ctx, triple_file),
        Command::Jacobi { triple_file } => cmd_jacobi(&ctx, triple_file),
        Command::Decompose { x_file } => cmd_decompose(&ctx, x_file),
        Command::Examples => cmd_examples(&ctx),
    }
}

/// Resolved run configuration; hashed into every report.
struct Context {
    common: Common,
    grid: GridSpec<f64>,
    config_hash: String,
}

impl Context {
    fn resolve(common: &Common) -> Result<Self, Failure> {
        let (s_count, t_count) = parse_grid(&common.grid)?;
        let (lo, hi) = parse_range(&common.range)?;
        for t in [common.tol_algebraic, common.tol_q2, common.tol_surface]
            .into_iter()
            .flatten()
        {
            if t <= 0.0 {
                return Err(Failure::Input(format!("tolerance must be positive, got {t}")));
            }
        }
        let grid = GridSpec {
            s_range: (lo, hi),
            t_range: (lo, hi),
            s_count,
            t_count,
        };
        let canonical = serde_json::to_string(common).expect("config serializes");
        let config_hash = format!("{:x}", Sha256::digest(canonical.as_bytes()))[..16].to_string();
        Ok(Context {
            common: common.clone(),
            grid,
            config_hash,
        })
    }

    fn algebra(&self) -> Result<AlgebraRef64, Failure> {
        let spec = self
            .common
            .algebra
            .as_deref()
            .ok_or_else(|| Failure::Input("this command requires --algebra".into()))?;
        let parsed = if let Some(n) = spec.strip_prefix("su:") {
            AlgebraSpec {
                family: "su".into(),
                n: parse_n(n)?,
                basis: None,
            }
        } else if let Some(n) = spec.strip_prefix("so:") {
            AlgebraSpec {
                family: "so".into(),
                n: parse_n(n)?,
                basis: None,
            }
        } else {
            serde_json::from_str(&std::fs::read_to_string(spec)?)?
        };
        Ok(load_algebra(&parsed)?)
    }

    fn emit(&self, human: &str, json: serde_json::Value) -> Result<(), Failure> {
        let text = if self.common.json {
            serde_json::to_string_pretty(&json).expect("report serializes")
        } else {
            human.to_string()
        };
        match &self.common.out {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => println!("{text}"),
        }
        Ok(())
    }
}

fn parse_n(s: &str) -> Result<usize, Failure> {
    s.parse()
        .map_err(|_| Failure::Input(format!("bad matrix size `{s}`")))
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Failure::Input(format!("bad --grid `{s}`, expected NxM")))?;
    let (n, m) = (parse_n(a)?, parse_n(b)?);
    if n < 2 || m < 2 {
        return Err(Failure::Input("grid needs at least 2 points per axis".into()));
    }
    Ok((n, m))
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let err = || Failure::Input(format!("bad --range `{s}`, expected a:b with a < b"));
    let (a, b) = s.rsplit_once(':').ok_or_else(err)?;
    let lo: f64 = a.parse().map_err(|_| err())?;
    let hi: f64 = b.parse().map_err(|_| err())?;
    if !(lo < hi) {
        return Err(err());
    }
    Ok((lo, hi))
}

fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D, Failure> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn read_vector(ctx: &Context, path: &Path) -> Result<Vector64, Failure> {
    let spec: VectorSpec = read_json(path)?;
    Ok(load_vector(&ctx.algebra()?, &spec)?)
}

fn apply_override(v: &mut Verdict<f64>, tol: Option<f64>) {
    if let Some(t) = tol {
        v.tolerance = t;
        v.good = v.residual <= t;
    }
}

#[derive(Serialize)]
struct ReportEnvelope<P: Serialize> {
    config_hash: String,
    seed: u64,
    #[serde(flatten)]
    payload: P,
}

fn envelope<P: Serialize>(ctx: &Context, payload: P) -> serde_json::Value {
    serde_json::to_value(ReportEnvelope {
        config_hash: ctx.config_hash.clone(),
        seed: ctx.common.seed,
        payload,
    })
    .expect("report serializes")
}

fn verdict_table(verdicts: &[VerdictReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:>10} {:>12} {:>12}",
        "method", "verdict", "residual", "tolerance"
    );
    for v in verdicts {
        let verdict = match (v.good, v.necessary_only) {
            (true, true) => "pass",
            (false, true) => "FAIL",
            (true, false) => "good",
            (false, false) => "not good",
        };
        let _ = writeln!(
            out,
            "{:<20} {:>10} {:>12.3e} {:>12.3e}",
            v.method, verdict, v.residual, v.tolerance
        );
    }
    out
}

fn run_all_methods(
    ctx: &Context,
    triple: &Triple<f64>,
) -> Result<(Vec<Verdict<f64>>, bool), Failure> {
    let mut alg = check_algebraic(triple)?;
    apply_override(&mut alg, ctx.common.tol_algebraic);
    let samples = default_t_samples(&triple.v);
    let mut q2 = check_condition_q2(triple, &samples)?;
    apply_override(&mut q2, ctx.common.tol_q2);
    let (mut surf, _) = check_surface_numeric(triple, &ctx.grid)?;
    apply_override(&mut surf, ctx.common.tol_surface);
    let curv = check_curvature_necessary(triple)?;
    let full = [alg.good, q2.good, surf.good];
    let mut consistent = full.iter().all(|&g| g == full[0]);
    // a good verdict must also satisfy the necessary condition
    if full[0] && !curv.good {
        consistent = false;
    }
    Ok((vec![alg, q2, surf, curv], consistent))
}

fn cmd_verify(ctx: &Context, triple_file: &Path) -> Result<(), Failure> {
    let spec: TripleSpec = read_json(triple_file)?;
    let triple = load_triple(&spec)?;
    let (verdicts, consistent) = run_all_methods(ctx, &triple)?;
    let reports: Vec<VerdictReport> = verdicts.iter().map(verdict_report).collect();

    #[derive(Serialize)]
    struct Payload {
        input: String,
        good: bool,
        methods_agree: bool,
        verdicts: Vec<VerdictReport>,
    }
    let good = reports[0].good;
    let human = format!(
        "triple: {}\n{}\noverall: {} (methods {})",
        triple_file.display(),
        verdict_table(&reports),
        if good { "good" } else { "not good" },
        if consistent { "agree" } else { "DISAGREE" },
    );
    ctx.emit(
        &human,
        envelope(
            ctx,
            Payload {
                input: triple_file.display().to_string(),
                good,
                methods_agree: consistent,
                verdicts: reports,
            },
        ),
    )?;
    if !consistent {
        return Err(Failure::Disagreement(
            "verdict methods returned different booleans".into(),
        ));
    }
    Ok(())
}

fn cmd_search(ctx: &Context, x_file: &Path, v_file: &Path) -> Result<(), Failure> {
    let x = read_vector(ctx, x_file)?;
    let v = read_vector(ctx, v_file)?;
    let candidates = sign_search(&x, &v, SIGN_SEARCH_CAP).map_err(|e| match e {
        ruled_core::Error::NotWeaklyRegular { .. } => Failure::Input(format!(
            "{e}; such directions can still carry good triples outside the \
             enumeration (single-eigenspace construction), but the finite \
             candidate list is not available"
        )),
        other => other.into(),
    })?;

    #[derive(Serialize)]
    struct CandidateReport {
        signs: Vec<i8>,
        a: VectorSpec,
        verdict: VerdictReport,
    }
    #[derive(Serialize)]
    struct Payload {
        candidates: Vec<CandidateReport>,
        good_count: usize,
    }
    let reports: Vec<CandidateReport> = candidates
        .iter()
        .map(|c| CandidateReport {
            signs: c.signs.clone(),
            a: io::vector_spec(&c.a),
            verdict: verdict_report(&c.verdict),
        })
        .collect();
    let good_count = candidates.iter().filter(|c| c.verdict.good).count();
    let mut human = format!("{} candidates, {} good\n", reports.len(), good_count);
    for c in &reports {
        let _ = writeln!(
            human,
            "signs {:>12}  {:<9} residual {:.3e} ({})",
            format!("{:?}", c.signs),
            if c.verdict.good { "good" } else { "not good" },
            c.verdict.residual,
            c.verdict.method,
        );
    }
    ctx.emit(
        &human,
        envelope(
            ctx,
            Payload {
                candidates: reports,
                good_count,
            },
        ),
    )
}

/// Flatten a complex matrix into the real vector (re, im interleaved).
fn flatten_real(m: &nalgebra::DMatrix<num_complex::Complex<f64>>) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.len());
    for z in m.iter() {
        out.push(z.re);
        out.push(z.im);
    }
    out
}

/// PCA of the sampled point cloud: returns (mean, 3 principal axes).
fn pca_projection(points: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = points.len();
    let d = points[0].len();
    let mut mean = vec![0.0; d];
    for p in points {
        for (m, &x) in mean.iter_mut().zip(p) {
            *m += x / n as f64;
        }
    }
    let mut centered = nalgebra::DMatrix::<f64>::zeros(n, d);
    for (i, p) in points.iter().enumerate() {
        for j in 0..d {
            centered[(i, j)] = p[j] - mean[j];
        }
    }
    let svd = centered.svd(false, true);
    let vt = svd.v_t.expect("svd v_t");
    let axes = (0..3)
        .map(|k| {
            if k < vt.nrows() {
                vt.row(k).iter().copied().collect()
            } else {
                vec![0.0; d]
            }
        })
        .collect();
    (mean, axes)
}

fn project_point(p: &[f64], mean: &[f64], axes: &[Vec<f64>]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, axis) in axes.iter().enumerate() {
        out[k] = p
            .iter()
            .zip(mean)
            .zip(axis)
            .map(|((&x, &m), &a)| (x - m) * a)
            .sum();
    }
    out
}

fn write_obj(path: &Path, sample: &SurfaceSample<f64>) -> Result<(Vec<f64>, Vec<Vec<f64>>), Failure> {
    let points: Vec<Vec<f64>> = sample.f.iter().map(|g| flatten_real(g.matrix())).collect();
    let (mean, axes) = pca_projection(&points);
    let ns = sample.s_values.len();
    let nt = sample.t_values.len();
    let mut obj = String::new();
    for p in &points {
        let [x, y, z] = project_point(p, &mean, &axes);
        let _ = writeln!(obj, "v {x:.9} {y:.9} {z:.9}");
    }
    for si in 0..ns - 1 {
        for ti in 0..nt - 1 {
            // 1-based vertex ids, row-major over (s, t)
            let a = si * nt + ti + 1;
            let b = a + 1;
            let c = a + nt + 1;
            let d = a + nt;
            let _ = writeln!(obj, "f {a} {b} {c} {d}");
        }
    }
    std::fs::write(path, obj)?;
    Ok((mean, axes))
}

fn cmd_surface(ctx: &Context, triple_file: &Path) -> Result<(), Failure> {
    let spec: TripleSpec = read_json(triple_file)?;
    let triple = load_triple(&spec)?;
    let sample = sample_surface(&triple, &ctx.grid)?;
    let out = ctx
        .common
        .out
        .clone()
        .ok_or_else(|| Failure::Input("surface export requires --out <mesh.obj>".into()))?;
    let (mean, axes) = write_obj(&out, &sample)?;

    // companion CSV of deviations and the projection for reproducibility
    let csv_path = out.with_extension("deviations.csv");
    let mut csv = String::from("s,t,deviation\n");
    for (si, &s) in sample.s_values.iter().enumerate() {
        for (ti, &t) in sample.t_values.iter().enumerate() {
            let (_, _, d) = sample.at(si, ti);
            let _ = writeln!(csv, "{s},{t},{d:e}");
        }
    }
    std::fs::write(&csv_path, csv)?;

    #[derive(Serialize)]
    struct Projection {
        mean: Vec<f64>,
        axes: Vec<Vec<f64>>,
    }
    let proj_path = out.with_extension("projection.json");
    std::fs::write(
        &proj_path,
        serde_json::to_string_pretty(&envelope(ctx, Projection { mean, axes }))
            .expect("report serializes"),
    )?;
    let ns = sample.s_values.len();
    let nt = sample.t_values.len();
    println!(
        "wrote {} ({} vertices, {} faces), {}, {}; max deviation {:.3e}",
        out.display(),
        ns * nt,
        (ns - 1) * (nt - 1),
        csv_path.display(),
        proj_path.display(),
        sample.max_deviation
    );
    Ok(())
}

fn cmd_jacobi(ctx: &Context, triple_file: &Path) -> Result<(), Failure> {
    let spec: TripleSpec = read_json(triple_file)?;
    let triple = load_triple(&spec)?;
    let field = JacobiField::new(&triple.x, &triple.v, &triple.a);
    let (lo, hi) = ctx.grid.s_range;
    let n = ctx.grid.s_count.max(2);
    let dim = triple.x.algebra().dim();
    let mut csv = String::from("s,");
    for i in 0..dim {
        let _ = write!(csv, "c{i},");
    }
    csv.push_str("norm\n");
    for k in 0..n {
        let s = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let (j, _) = field.eval(s)?;
        let _ = write!(csv, "{s}");
        for c in j.coords().iter() {
            let _ = write!(csv, ",{c:e}");
        }
        let _ = writeln!(csv, ",{:e}", j.norm());
    }
    match &ctx.common.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_decompose(ctx: &Context, x_file: &Path) -> Result<(), Failure> {
    let x = read_vector(ctx, x_file)?;
    if x.norm() < 1e-14 {
        return Err(Failure::Input("decompose requires a nonzero X".into()));
    }
    let spectral = SpectralDecomposition::new(&x);
    let roots = RootDecomposition::with_seed(&x, ctx.common.seed)?;
    let regularity = weak_regularity_of(&roots)?;

    #[derive(Serialize)]
    struct ClusterReport {
        /// rotation frequency; the `ad_X^2` eigenvalue is `-lambda^2`
        lambda: f64,
        multiplicity: usize,
    }
    #[derive(Serialize)]
    struct RootReport {
        values_on_torus_basis: Vec<f64>,
        lambda_x: f64,
    }
    #[derive(Serialize)]
    struct WitnessReport {
        lambda: f64,
        dependent_roots: Vec<Vec<f64>>,
    }
    #[derive(Serialize)]
    struct Payload {
        eigenvalue_clusters: Vec<ClusterReport>,
        torus_dim: usize,
        roots: Vec<RootReport>,
        weakly_regular: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessReport>,
    }
    let payload = Payload {
        eigenvalue_clusters: spectral
            .clusters()
            .iter()
            .map(|c| ClusterReport {
                lambda: c.lambda,
                multiplicity: c.dim(),
            })
            .collect(),
        torus_dim: roots.torus_dim(),
        roots: roots
            .root_spaces()
            .iter()
            .map(|r| RootReport {
                values_on_torus_basis: r.root.iter().copied().collect(),
                lambda_x: r.lambda_x,
            })
            .collect(),
        weakly_regular: regularity.weakly_regular,
        witness: regularity.witness.map(|w| WitnessReport {
            lambda: w.lambda,
            dependent_roots: w
                .roots
                .iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }),
    };
    let mut human = String::new();
    let _ = writeln!(human, "eigenvalue clusters of ad_X^2 (by frequency |lambda|):");
    for c in &payload.eigenvalue_clusters {
        let _ = writeln!(human, "  lambda {:>10.6}  multiplicity {}", c.lambda, c.multiplicity);
    }
    let _ = writeln!(human, "maximal torus dimension: {}", payload.torus_dim);
    let _ = writeln!(human, "root spaces ({}):", payload.roots.len());
    for r in &payload.roots {
        let _ = writeln!(
            human,
            "  root {:?}  |alpha(X)| = {:.6}",
            r.values_on_torus_basis
                .iter()
                .map(|v| (v * 1e6).round() / 1e6)
                .collect::<Vec<_>>(),
            r.lambda_x
        );
    }
    let _ = writeln!(
        human,
        "weakly regular: {}{}",
        payload.weakly_regular,
        match &payload.witness {
            Some(w) => format!(
                " (dependent cluster at lambda {:.6} with {} roots)",
                w.lambda,
                w.dependent_roots.len()
            ),
            None => String::new(),
        }
    );
    ctx.emit(&human, envelope(ctx, payload))
}

/// The three bundled families: coset su(2), biquotient su(4),
/// exceptional single-eigenspace su(4).
fn bundled_examples() -> Result<Vec<(&'static str, Triple<f64>)>, Failure> {
    use ruled_core::algebra::{skew_e, su_diag, AlgebraVector, Family, LieAlgebra};
    let mut out = Vec::new();
    // coset: H = torus of su(2), V vertical, X horizontal, A = 1/2 [X,V]
    let su2 = LieAlgebra::<f64>::build(Family::Su, 2)?;
    let e1 = AlgebraVector::from_matrix(&su2, su_diag(2, 1))?;
    let e2 = AlgebraVector::from_matrix(&su2, skew_e(2, 0, 1))?;
    out.push((
        "coset-su2",
        make_coset_triple(std::slice::from_ref(&e1), &e2, &e1, CosetSide::Left)?,
    ));
    // biquotient: su(4), X = diag(i,-i,2i,-2i), roots alpha_12 / alpha_34
    let su4 = LieAlgebra::<f64>::build(Family::Su, 4)?;
    let mut xm = ruled_core::algebra::CMat::<f64>::zeros(4, 4);
    for (k, im) in [1.0, -1.0, 2.0, -2.0].into_iter().enumerate() {
        xm[(k, k)] = num_complex::Complex::new(0.0, im);
    }
    let x = AlgebraVector::from_matrix(&su4, xm)?;
    let va = AlgebraVector::from_matrix(&su4, skew_e(4, 0, 1))?;
    let vb = AlgebraVector::from_matrix(&su4, skew_e(4, 2, 3))?;
    let v = &va - &vb;
    let a = x.bracket(&(&va + &vb))?.scaled(-0.5);
    out.push(("biquotient-su4", Triple::new(x, v, a)?));
    // exceptional single-eigenspace example
    out.push(("exceptional-su4", make_su4_example::<f64>()?.triple));
    Ok(out)
}

fn cmd_examples(ctx: &Context) -> Result<(), Failure> {
    let examples = bundled_examples()?;

    #[derive(Serialize)]
    struct ExampleReport {
        name: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        file: Option<String>,
        good: bool,
        methods_agree: bool,
    }
    let mut reports = Vec::new();
    for (name, triple) in &examples {
        let file = match &ctx.common.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!("{name}.json"));
                let text = serde_json::to_string_pretty(&triple_spec(triple))
                    .expect("triple serializes");
                std::fs::write(&path, text + "\n")?;
                Some(path.display().to_string())
            }
            None => None,
        };
        let (verdicts, consistent) = run_all_methods(ctx, triple)?;
        reports.push(ExampleReport {
            name: (*name).into(),
            file,
            good: verdicts[0].good,
            methods_agree: consistent,
        });
    }
    #[derive(Serialize)]
    struct Payload {
        examples: Vec<ExampleReport>,
    }
    let mut human = format!("{} example families\n", reports.len());
    for r in &reports {
        let _ = writeln!(
            human,
            "  {:<16} {:<9} methods {}{}",
            r.name,
            if r.good { "good" } else { "not good" },
            if r.methods_agree { "agree" } else { "DISAGREE" },
            r.file.as_deref().map(|f| format!("  -> {f}")).unwrap_or_default(),
        );
    }
    let disagreement = reports.iter().any(|r| !r.methods_agree);
    // examples always print to stdout; --out is the target directory
    let text = if ctx.common.json {
        serde_json::to_string_pretty(&envelope(ctx, Payload { examples: reports }))
            .expect("report serializes")
    } else {
        human
    };
    println!("{text}");
    if disagreement {
        return Err(Failure::Disagreement(
            "bundled example failed method agreement".into(),
        ));
    }
    Ok(())
}
