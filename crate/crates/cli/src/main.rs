//! `squadsim` command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 infeasible plan, 3 simulation abort.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use squadsim::graph::build_all;
use squadsim::{
    bench, load_map_file, plan_squads, simulate, DistanceField, Error, GraphConfig, GraphDump, PlanError, PlanOptions,
    RoomAnnotation, Scenario, SquadPlan, Tactic, Trajectory,
};

#[derive(Parser, Debug)]
#[command(name = "squadsim", version, about = "Plan and simulate firefighter squad missions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plan every squad's route and write it as JSON.
    Plan(RunConfig),
    /// Plan and simulate; write the trajectory as CSV.
    Simulate(RunConfig),
    /// Repeat the simulation and report path length and timing statistics.
    Bench {
        #[command(flatten)]
        cfg: RunConfig,
        /// Repetitions per tactic.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
    },
    /// Validate a map and its room annotation.
    Rooms {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        rooms: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "squadsim-out")]
        out: PathBuf,
        /// Also build the planning graphs and write them to `graph.json`.
        #[arg(long)]
        dump_graph: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long)]
    scenario: PathBuf,
    /// Overrides the scenario's map.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Overrides the scenario's room annotation.
    #[arg(long)]
    rooms: Option<PathBuf>,
    /// Tactic for every room of every squad (free, wall_lhr, wall_rhr).
    #[arg(long)]
    tactic: Option<Tactic>,
    /// Offset of the low-discrepancy sampling sequences.
    #[arg(long)]
    seed: Option<u64>,
    /// Integration step (s).
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value = "squadsim-out")]
    out: PathBuf,
    /// Write the planning graphs to `graph.json`.
    #[arg(long)]
    dump_graph: bool,
    /// Plan rooms without a feasible wall search with free traversal instead of failing.
    #[arg(long)]
    allow_fallback: bool,
}

impl RunConfig {
    fn scenario(&self) -> anyhow::Result<Scenario> {
        let mut sc = Scenario::from_file(&self.scenario)?;
        if let Some(m) = &self.map {
            sc.map = m.clone();
        }
        if let Some(r) = &self.rooms {
            sc.rooms = r.clone();
        }
        for p in [&sc.map, &sc.rooms] {
            if !p.exists() {
                bail!("file not found: {}", p.display());
            }
        }
        if let Some(t) = self.tactic {
            for s in &mut sc.squads {
                s.tactic = t;
                s.room_tactics.clear();
                s.vision = None;
            }
        }
        if let Some(seed) = self.seed {
            sc.seed = seed;
        }
        if let Some(dt) = self.dt {
            sc.dt = dt;
            if sc.dt_report.is_some_and(|r| r < dt) {
                sc.dt_report = Some(dt);
            }
        }
        sc.validate()?;
        Ok(sc)
    }

    fn options(&self) -> PlanOptions {
        PlanOptions {
            fallback_to_free: self.allow_fallback,
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Plan(p)) => plan_code(p),
        Some(Error::SimulationAbort { .. }) => 3,
        _ => 1,
    }
}

fn plan_code(p: &PlanError) -> u8 {
    match p {
        PlanError::OutsideRooms { .. } | PlanError::Blocked { .. } => 1,
        _ => 2,
    }
}

/// The error chain, leaving out causes already spelled out by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain().map(|c| c.to_string()) {
        if !out.ends_with(&cause) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&cause);
        }
    }
    out
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn plan_stage(cfg: &RunConfig) -> anyhow::Result<(Scenario, squadsim::Environment, Vec<SquadPlan>)> {
    let sc = cfg.scenario()?;
    let env = squadsim::Environment::for_scenario(&sc)?;
    if cfg.dump_graph {
        let dump = serde_json::to_string_pretty(&GraphDump::from_rooms(&env.rooms))?;
        write(&cfg.out.join("graph.json"), dump)?;
    }
    let plans = plan_squads(&env, &sc, cfg.options())?;
    for p in &plans {
        for s in p.fallbacks() {
            log::warn!(
                "squad {}: room `{}` planned {} instead of {}",
                p.squad,
                s.room,
                s.tactic,
                s.requested
            );
        }
    }
    Ok((sc, env, plans))
}

fn cmd_plan(cfg: &RunConfig) -> anyhow::Result<()> {
    let (_, _, plans) = plan_stage(cfg)?;
    write(&cfg.out.join("plan.json"), serde_json::to_string_pretty(&plans)?)?;
    for p in &plans {
        let rooms: Vec<String> = p.segments.iter().map(|s| format!("{}({})", s.room, s.tactic)).collect();
        println!(
            "squad {}: {:.2} m, {} waypoints, {}",
            p.squad,
            p.length(),
            p.waypoints().len(),
            rooms.join(" -> ")
        );
    }
    Ok(())
}

fn summarize(traj: &Trajectory) {
    println!(
        "simulated {:.2} s in {:.1} ms{}",
        traj.end_time(),
        traj.sim_time_s * 1e3,
        if traj.timed_out { " (timeout)" } else { "" }
    );
    for (i, len) in traj.path_lengths.iter().enumerate() {
        println!("agent {i}: path length {len:.2} m");
    }
    if traj.penetrations > 0 {
        log::warn!("{} agent samples inside occupied cells", traj.penetrations);
    }
}

fn cmd_simulate(cfg: &RunConfig) -> anyhow::Result<()> {
    let (sc, env, plans) = plan_stage(cfg)?;
    let traj = simulate(&env, &sc, &plans)?;
    let path = cfg.out.join("trajectory.csv");
    write(&path, traj.to_csv_string())?;
    summarize(&traj);
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_bench(cfg: &RunConfig, reps: u32) -> anyhow::Result<()> {
    let sc = cfg.scenario()?;
    let env = squadsim::Environment::for_scenario(&sc)?;
    let tactics = match cfg.tactic {
        Some(t) => vec![t],
        None => vec![Tactic::Free, Tactic::WallLhr, Tactic::WallRhr],
    };
    let report = bench(&env, &sc, reps as usize, &tactics, cfg.options())?;
    write(&cfg.out.join("bench.json"), serde_json::to_string_pretty(&report)?)?;
    println!(
        "{:<10} {:>5} {:>10} {:>10} {:>10} {:>10} {:>8}",
        "tactic", "reps", "mu_d", "s2_d", "mu_t_ms", "s2_t", "timeouts"
    );
    for e in &report.entries {
        println!(
            "{:<10} {:>5} {:>10.3} {:>10.4} {:>10.2} {:>10.3} {:>8}",
            e.tactic.name(),
            e.repetitions,
            e.mean_path_length,
            e.var_path_length,
            e.mean_sim_time_ms,
            e.var_sim_time_ms,
            e.timeouts
        );
    }
    Ok(())
}

fn cmd_rooms(map: &Path, rooms: &Path, seed: u64, out: &Path, dump_graph: bool) -> anyhow::Result<()> {
    let (grid, _) = load_map_file(map)?;
    let ann = RoomAnnotation::from_file(rooms)?;
    let rg = squadsim::load_rooms(&ann, &grid)?;
    println!(
        "map {} x {} cells at {} m, {} rooms, {} doorways",
        grid.width(),
        grid.height(),
        grid.resolution(),
        rg.rooms.len(),
        rg.doorways.len()
    );
    for r in &rg.rooms {
        let doors: Vec<&str> = r.doorways.iter().map(|&d| rg.doorways[d].id.as_str()).collect();
        println!(
            "  {:<12} {:>6} free cells  doorways [{}]{}",
            r.id,
            r.cells.len(),
            doors.join(", "),
            if r.is_single_entry() { "  single entry" } else { "" }
        );
    }
    if dump_graph {
        let cfg = GraphConfig::default();
        let df = DistanceField::compute(&grid, cfg.metric);
        build_all(&rg, &grid, &df, &cfg, seed);
        write(
            &out.join("graph.json"),
            serde_json::to_string_pretty(&GraphDump::from_rooms(&rg))?,
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.command {
        Command::Plan(cfg) => cmd_plan(cfg),
        Command::Simulate(cfg) => cmd_simulate(cfg),
        Command::Bench { cfg, reps } => cmd_bench(cfg, *reps),
        Command::Rooms {
            map,
            rooms,
            seed,
            out,
            dump_graph,
        } => cmd_rooms(map, rooms, *seed, out, *dump_graph),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
