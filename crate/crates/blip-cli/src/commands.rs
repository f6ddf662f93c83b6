//! Subcommand implementations.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use blip::fields::{
    derive_seed, BernoulliField, GeomConvention, GeometricField, ModelParams, RngSpec,
};
use blip::identities::{
    check_coupling, check_jump_lemma, check_lm_formula, check_relation, check_tau_equals_g,
    IdentityReport,
};
use blip::montecarlo::{
    estimate_shape, exceedance_crosscheck, hard_edge_check, pilot_threshold,
    soft_edge_subcritical, soft_edge_supercritical, DnRule, ExperimentConfig, LadderResult,
};
use blip::particles::{
    evolve_blocking_right, evolve_dtasep, evolve_fragmentation, evolve_marked_left, evolve_r,
    PlatoonState, SeededBreaks, SeededJumps,
};
use blip::passage::{blip_table, corner_table};

use crate::manifest::RunDir;
use crate::resolve::{validate_open_p, ConfigFile};
use crate::{CliResult, Failure};

fn model(p: f64) -> CliResult<ModelParams> {
    validate_open_p(p)?;
    Ok(ModelParams::new(p)?)
}

fn write_ladder(run: &RunDir, res: &LadderResult) -> CliResult<()> {
    let mut records = Vec::new();
    res.write_records(&mut records)?;
    run.write_file("records.jsonl", &records)?;
    let mut summary = Vec::new();
    res.write_summary_csv(&mut summary)?;
    run.write_file("summary.csv", &summary)?;
    Ok(())
}

fn finish_ladder(run: RunDir, res: &LadderResult) -> CliResult<()> {
    write_ladder(&run, res)?;
    let dir = run.finish()?;
    for p in &res.points {
        println!(
            "n={}: mean {:.6} se {:.6} median {:.6} exceedance {:.4} ref {:.6}",
            p.summary.n, p.summary.mean, p.summary.se, p.summary.median, p.summary.exceedance,
            p.ref_value
        );
    }
    println!("wrote {}", crate::manifest::relative_outputs(&dir, &["manifest.json", "records.jsonl", "summary.csv"]));
    Ok(())
}

// ---------------------------------------------------------------- simulate

#[derive(Args)]
pub struct SimulateArgs {
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Master seed, decimal or 0x-hex [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Stream id, decimal or 0x-hex [default: 0]
    #[arg(long)]
    stream: Option<String>,
    /// Table width [default: 40]
    #[arg(long)]
    m: Option<u32>,
    /// Table height [default: 40]
    #[arg(long)]
    n: Option<u32>,
    /// Which table: blip | corner [default: blip]
    #[arg(long)]
    model: Option<String>,
    /// Weight convention for corner tables: shifted | unshifted [default: shifted]
    #[arg(long)]
    convention: Option<String>,
}

pub fn simulate(args: SimulateArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("simulate");
    let p = sec.f64(args.p, "p", 0.5)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let stream = sec.seed(args.stream.as_deref(), "stream", 0)?;
    let m = sec.u32(args.m, "m", 40)?;
    let n = sec.u32(args.n, "n", 40)?;
    let model_name = sec.string(args.model, "model", "blip")?;
    let convention = sec.string(args.convention, "convention", "shifted")?;
    let params = model(p)?;
    let rng = RngSpec::new(seed, stream);

    let config = json!({
        "p": p, "seed": seed, "stream": stream, "m": m, "n": n,
        "model": model_name, "convention": convention,
    });
    let run = RunDir::create(out, "simulate", config, &["table.csv"])?;
    let mut csv = Vec::new();
    match model_name.as_str() {
        "blip" => blip_table(&BernoulliField::new(params, rng), m, n)?.write_csv(&mut csv)?,
        "corner" => {
            let conv = match convention.as_str() {
                "shifted" => GeomConvention::Shifted,
                "unshifted" => GeomConvention::Unshifted,
                other => return Err(Failure::config(format!("parameter convention: unknown `{other}`"))),
            };
            corner_table(&GeometricField::new(params, rng, conv)?, m, n)?.write_csv(&mut csv)?;
        }
        other => return Err(Failure::config(format!("parameter model: unknown `{other}`"))),
    }
    run.write_file("table.csv", &csv)?;
    let dir = run.finish()?;
    println!("wrote {}", crate::manifest::relative_outputs(&dir, &["manifest.json", "table.csv"]));
    Ok(())
}

// ------------------------------------------------------------- experiments

#[derive(Args)]
pub struct ShapeArgs {
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Macroscopic width [default: 1.0]
    #[arg(long)]
    x: Option<f64>,
    /// Macroscopic height [default: 1.0]
    #[arg(long)]
    y: Option<f64>,
    /// Size ladder, comma separated [default: 500,1000,2000]
    #[arg(long)]
    n: Option<String>,
    /// Replicas per size [default: 100]
    #[arg(long)]
    reps: Option<u32>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Exceedance threshold epsilon [default: 1.0]
    #[arg(long)]
    eps: Option<f64>,
}

pub fn shape(args: ShapeArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("shape");
    let p = sec.f64(args.p, "p", 0.5)?;
    let x = sec.f64(args.x, "x", 1.0)?;
    let y = sec.f64(args.y, "y", 1.0)?;
    let sizes = sec.sizes(args.n.as_deref(), "n", &[500, 1000, 2000])?;
    let reps = sec.u32(args.reps, "reps", 100)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let eps = sec.f64(args.eps, "eps", 1.0)?;
    let params = model(p)?;
    let mut cfg = ExperimentConfig::new(params, seed).with_sizes(&sizes).with_replicas(reps);
    cfg.epsilon = eps;
    let config = json!({"p": p, "x": x, "y": y, "n": sizes, "reps": reps, "seed": seed, "eps": eps});
    let run = RunDir::create(out, "shape", config, &["records.jsonl", "summary.csv"])?;
    let res = estimate_shape(&cfg, x, y)?;
    finish_ladder(run, &res)
}

#[derive(Args)]
pub struct SoftEdgeArgs {
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Edge amplitude x >= 0 [default: 1.0]
    #[arg(long)]
    x: Option<f64>,
    /// Edge exponent a in (0, 1); a <= 1/2 is the subcritical regime [default: 0.75]
    #[arg(long)]
    a: Option<f64>,
    /// Size ladder, comma separated [default: 500,2000,8000]
    #[arg(long)]
    n: Option<String>,
    /// Replicas per size [default: 200]
    #[arg(long)]
    reps: Option<u32>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Normalizer family for a <= 1/2: n^G | log^K | n^G*log [default: n^0.25]
    #[arg(long)]
    dn: Option<String>,
    /// Exceedance threshold epsilon [default: 1.0]
    #[arg(long)]
    eps: Option<f64>,
    /// Strip constant c > 0 [default: 1.0]
    #[arg(long)]
    c: Option<f64>,
}

pub fn soft_edge(args: SoftEdgeArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("soft-edge");
    let p = sec.f64(args.p, "p", 0.5)?;
    let x = sec.f64(args.x, "x", 1.0)?;
    let a = sec.f64(args.a, "a", 0.75)?;
    let sizes = sec.sizes(args.n.as_deref(), "n", &[500, 2000, 8000])?;
    let reps = sec.u32(args.reps, "reps", 200)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let dn = sec.string(args.dn, "dn", "n^0.25")?;
    let eps = sec.f64(args.eps, "eps", 1.0)?;
    let c = sec.f64(args.c, "c", 1.0)?;
    if !(a.is_finite() && 0.0 < a && a < 1.0) {
        return Err(Failure::config(format!("parameter a: {a} not in the open interval (0, 1)")));
    }
    let params = model(p)?;
    let mut cfg = ExperimentConfig::new(params, seed)
        .with_sizes(&sizes)
        .with_replicas(reps)
        .with_edge(a, x);
    cfg.dn_rule = DnRule::parse(&dn)?;
    cfg.epsilon = eps;
    cfg.strip_c = c;
    let config = json!({
        "p": p, "x": x, "a": a, "n": sizes, "reps": reps, "seed": seed,
        "dn": dn, "eps": eps, "c": c,
    });
    let run = RunDir::create(out, "soft-edge", config, &["records.jsonl", "summary.csv"])?;
    let res = if a <= 0.5 { soft_edge_subcritical(&cfg)? } else { soft_edge_supercritical(&cfg)? };
    finish_ladder(run, &res)
}

#[derive(Args)]
pub struct HardEdgeArgs {
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Long-side constant c1 > 0 (rows = floor(c1 n)) [default: 1.0]
    #[arg(long)]
    c1: Option<f64>,
    /// Strip amplitude y >= 0 (columns = floor(y n^beta)) [default: 1.0]
    #[arg(long)]
    y: Option<f64>,
    /// Strip exponent beta in (0, 1) [default: 0.5]
    #[arg(long)]
    beta: Option<f64>,
    /// Size ladder, comma separated [default: 1000,4000,16000]
    #[arg(long)]
    n: Option<String>,
    /// Replicas per size [default: 200]
    #[arg(long)]
    reps: Option<u32>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<String>,
}

pub fn hard_edge(args: HardEdgeArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("hard-edge");
    let p = sec.f64(args.p, "p", 0.5)?;
    let c1 = sec.f64(args.c1, "c1", 1.0)?;
    let y = sec.f64(args.y, "y", 1.0)?;
    let beta = sec.f64(args.beta, "beta", 0.5)?;
    let sizes = sec.sizes(args.n.as_deref(), "n", &[1000, 4000, 16000])?;
    let reps = sec.u32(args.reps, "reps", 200)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let params = model(p)?;
    let cfg = ExperimentConfig::new(params, seed).with_sizes(&sizes).with_replicas(reps);
    let config = json!({
        "p": p, "c1": c1, "y": y, "beta": beta, "n": sizes, "reps": reps, "seed": seed,
    });
    let run = RunDir::create(out, "hard-edge", config, &["records.jsonl", "summary.csv"])?;
    let res = hard_edge_check(&cfg, c1, y, beta)?;
    finish_ladder(run, &res)
}

// -------------------------------------------------------------- identities

#[derive(Args)]
pub struct IdentitiesArgs {
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Square size of each checked window [default: 40]
    #[arg(long)]
    size: Option<u32>,
    /// Number of independent fields [default: 200]
    #[arg(long)]
    fields: Option<u32>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated checks: relation,jump-lemma,lm-formula,tau-g,coupling
    /// [default: relation,jump-lemma,lm-formula]
    #[arg(long)]
    checks: Option<String>,
}

pub fn identities(args: IdentitiesArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("identities");
    let p = sec.f64(args.p, "p", 0.5)?;
    let size = sec.u32(args.size, "size", 40)?;
    let fields = sec.u32(args.fields, "fields", 200)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let checks = sec.string(args.checks, "checks", "relation,jump-lemma,lm-formula")?;
    let params = model(p)?;
    if size < 1 {
        return Err(Failure::config("parameter size: must be >= 1"));
    }
    let names: Vec<&str> = checks.split(',').map(str::trim).collect();
    for name in &names {
        if !["relation", "jump-lemma", "lm-formula", "tau-g", "coupling"].contains(name) {
            return Err(Failure::config(format!("parameter checks: unknown check `{name}`")));
        }
    }
    let config = json!({"p": p, "size": size, "fields": fields, "seed": seed, "checks": checks});
    let run = RunDir::create(out, "identities", config, &["records.jsonl"])?;

    let mut body = Vec::new();
    let mut violations = 0u32;
    for r in 0..fields {
        let fseed = derive_seed(seed, 0x1D, r as u64);
        let rng = RngSpec::new(fseed, 0);
        let bf = BernoulliField::new(params, rng);
        for name in &names {
            let report: IdentityReport = match *name {
                "relation" => check_relation(&bf, size, size)?,
                "jump-lemma" => check_jump_lemma(&bf, size, size)?,
                "lm-formula" => check_lm_formula(&bf, size, size)?,
                "tau-g" => {
                    let gf = GeometricField::new(params, rng, GeomConvention::Shifted)?;
                    check_tau_equals_g(&gf, size, size)?
                }
                "coupling" => check_coupling(&bf, size, size)?,
                _ => unreachable!(),
            };
            violations += u32::from(!report.passed());
            serde_json::to_writer(&mut body, &report).map_err(std::io::Error::other)?;
            body.push(b'\n');
        }
    }
    run.write_file("records.jsonl", &body)?;
    let dir = run.finish()?;
    println!(
        "{} checks over {fields} fields, {violations} violation(s); wrote {}",
        names.len() as u32 * fields,
        crate::manifest::relative_outputs(&dir, &["manifest.json", "records.jsonl"]),
    );
    if violations > 0 {
        return Err(Failure::violation(format!("{violations} identity violation(s), see records.jsonl")));
    }
    Ok(())
}

// --------------------------------------------------------------- processes

#[derive(Args)]
pub struct ProcessesArgs {
    /// Which process: r | dtasep | z | w | fragmentation [default: r]
    #[arg(long)]
    process: Option<String>,
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Particle count [default: 20]
    #[arg(long)]
    k: Option<u32>,
    /// Time horizon [default: 40]
    #[arg(long)]
    t: Option<u32>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Initial spacing between particles [default: 1 for dtasep, 2 for z/w]
    #[arg(long)]
    gap: Option<u32>,
    /// Rightward mark scan cap for the top particle of the w process [default: 64]
    #[arg(long)]
    scan_cap: Option<u32>,
    /// Platoon count for fragmentation [default: 20]
    #[arg(long)]
    platoons: Option<u32>,
    /// Platoon size for fragmentation [default: 5]
    #[arg(long)]
    platoon_size: Option<u32>,
}

pub fn processes(args: ProcessesArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("processes");
    let process = sec.string(args.process, "process", "r")?;
    let p = sec.f64(args.p, "p", 0.5)?;
    let k = sec.u32(args.k, "k", 20)?;
    let t = sec.u32(args.t, "t", 40)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let gap = sec.opt_u32(args.gap, "gap")?;
    let scan_cap = sec.u32(args.scan_cap, "scan_cap", 64)?;
    let platoons = sec.u32(args.platoons, "platoons", 20)?;
    let platoon_size = sec.u32(args.platoon_size, "platoon_size", 5)?;
    let params = model(p)?;
    let rng = RngSpec::new(seed, 0);

    let config = json!({
        "process": process, "p": p, "k": k, "t": t, "seed": seed,
        "gap": gap, "scan_cap": scan_cap, "platoons": platoons, "platoon_size": platoon_size,
    });
    let spaced = |g: u32| -> Vec<i64> { (0..k as i64).map(|u| 1 + u * g as i64).collect() };

    match process.as_str() {
        "fragmentation" => {
            let run = RunDir::create(out, "processes", config, &["events.csv"])?;
            let state = PlatoonState::regular(platoons, platoon_size, gap.unwrap_or(2).max(1))?;
            let draws = SeededBreaks::new(rng);
            let (_, events) = evolve_fragmentation(&draws, params, &state, t);
            let mut csv = Vec::new();
            {
                use std::io::Write;
                writeln!(csv, "t,platoon_index,n_j,M_j")?;
                for e in &events {
                    writeln!(csv, "{},{},{},{}", e.t, e.platoon_index, e.platoon_size, e.break_size)?;
                }
            }
            run.write_file("events.csv", &csv)?;
            let dir = run.finish()?;
            println!(
                "{} break events; wrote {}",
                events.len(),
                crate::manifest::relative_outputs(&dir, &["manifest.json", "events.csv"])
            );
        }
        name => {
            let traj = match name {
                "r" => evolve_r(&BernoulliField::new(params, rng).shift_to_corner_indexing(), k, t)?,
                "dtasep" => {
                    let draws = SeededJumps::new(params.q(), rng)?;
                    evolve_dtasep(&draws, &spaced(gap.unwrap_or(1).max(1)), t)?
                }
                "z" => evolve_marked_left(
                    &BernoulliField::new(params, rng),
                    &spaced(gap.unwrap_or(2).max(1)),
                    t,
                )?,
                "w" => evolve_blocking_right(
                    &BernoulliField::new(params, rng),
                    &spaced(gap.unwrap_or(2).max(1)),
                    t,
                    scan_cap,
                )?,
                other => {
                    return Err(Failure::config(format!("parameter process: unknown `{other}`")))
                }
            };
            let run = RunDir::create(out, "processes", config, &["trajectory.csv"])?;
            let mut csv = Vec::new();
            traj.write_csv(&mut csv)?;
            run.write_file("trajectory.csv", &csv)?;
            let dir = run.finish()?;
            println!(
                "{} particles to horizon {t}; wrote {}",
                k,
                crate::manifest::relative_outputs(&dir, &["manifest.json", "trajectory.csv"])
            );
        }
    }
    Ok(())
}

// --------------------------------------------------------------- crosscheck

#[derive(Args)]
pub struct CrosscheckArgs {
    /// Mark probability in (0, 1) [default: 0.5]
    #[arg(long)]
    p: Option<f64>,
    /// Rectangle height [default: 500]
    #[arg(long)]
    n: Option<u32>,
    /// Rectangle width [default: floor(2n - sqrt(n))]
    #[arg(long)]
    m: Option<u32>,
    /// Event threshold j; chosen by a pilot run when omitted
    #[arg(long)]
    j: Option<u32>,
    /// Replicas per estimator [default: 2000]
    #[arg(long)]
    reps: Option<u32>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<String>,
    /// Pilot replicas used to pick j [default: 400]
    #[arg(long)]
    pilot_reps: Option<u32>,
}

pub fn crosscheck(args: CrosscheckArgs, file: &ConfigFile, out: Option<PathBuf>) -> CliResult<()> {
    let sec = file.section("crosscheck");
    let p = sec.f64(args.p, "p", 0.5)?;
    let n = sec.u32(args.n, "n", 500)?;
    let m_flag = sec.opt_u32(args.m, "m")?;
    let j_flag = sec.opt_u32(args.j, "j")?;
    let reps = sec.u32(args.reps, "reps", 2000)?;
    let seed = sec.seed(args.seed.as_deref(), "seed", 1)?;
    let pilot_reps = sec.u32(args.pilot_reps, "pilot_reps", 400)?;
    let params = model(p)?;
    if n < 1 {
        return Err(Failure::config("parameter n: must be >= 1"));
    }
    let m = match m_flag {
        Some(m) => m,
        None => (2.0 * n as f64 - (n as f64).sqrt()).floor() as u32,
    };
    let j = match j_flag {
        Some(j) => j,
        None => pilot_threshold(params, m, n, pilot_reps, seed)?,
    };
    let config = json!({
        "p": p, "n": n, "m": m, "j": j, "reps": reps, "seed": seed, "pilot_reps": pilot_reps,
    });
    let run = RunDir::create(out, "crosscheck", config, &["crosscheck.json"])?;
    let res = exceedance_crosscheck(params, m, n, j, reps, seed)?;
    let body = serde_json::to_vec_pretty(&res).map_err(std::io::Error::other)?;
    run.write_file("crosscheck.json", &body)?;
    let dir = run.finish()?;
    println!(
        "P_direct = {:.4}, P_geometric = {:.4}, joint se = {:.4}; wrote {}",
        res.p_direct,
        res.p_geometric,
        res.joint_se,
        crate::manifest::relative_outputs(&dir, &["manifest.json", "crosscheck.json"])
    );
    if !res.agrees(3.0) {
        return Err(Failure::violation(format!(
            "estimates differ by {:.4} > 3 joint se = {:.4}",
            (res.p_direct - res.p_geometric).abs(),
            3.0 * res.joint_se
        )));
    }
    Ok(())
}
