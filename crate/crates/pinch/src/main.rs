use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use pinch::config::RunConfig;
use pinch::runner;

const USAGE: &str = "\
pinch: blow-up constructions for skew products, with a verification harness

USAGE:
    pinch [--construction <name>] [OPTIONS]

OPTIONS:
    --construction <name>   denjoy | qpf | qpf-filled | general | sharkovsky | rees
    --config <path>         key = value config file (flags override it)
    --out <dir>             output directory for datasets + report.json [default: pinch-out]
    --verify-only           run the property suite without writing datasets
    --base <name>           rotation | torus2 | odometer (general construction)
    --pinch <mode>          one-sided | oscillating
    --N <int>               truncation order (-1 disables the blow-up)
    --seed <u64>            seed for the randomized probes
    --grid <usize>          grid size for datasets and grid checks
    --depth <usize>         attractor iteration depth
    --help                  print this help

EXIT CODES:
    0  every certified property passed
    1  at least one property failed (see the report)
    2  invalid usage or configuration
";

struct Cli {
    config: RunConfig,
    out: PathBuf,
    verify_only: bool,
}

fn parse_args() -> Result<Cli, String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--help" || a == "-h") {
        print!("{USAGE}");
        std::process::exit(0);
    }
    // The config file loads first so flags can override it.
    let mut config = RunConfig::default();
    let mut i = 0;
    while i < args.len() {
        if args[i] == "--config" {
            let path = args.get(i + 1).ok_or("--config needs a path")?;
            config = RunConfig::from_file(std::path::Path::new(path)).map_err(|e| e.to_string())?;
        }
        i += 1;
    }
    let mut out = PathBuf::from("pinch-out");
    let mut verify_only = false;
    let mut i = 0;
    while i < args.len() {
        let flag = args[i].clone();
        let take = |args: &[String], i: usize| -> Result<String, String> {
            args.get(i + 1)
                .cloned()
                .ok_or_else(|| format!("{flag} needs a value"))
        };
        match flag.as_str() {
            "--config" => {
                i += 2;
                continue;
            }
            "--verify-only" => {
                verify_only = true;
                i += 1;
                continue;
            }
            "--out" => out = PathBuf::from(take(&args, i)?),
            "--construction" => {
                let v = take(&args, i)?;
                config.set("construction", &v).map_err(|e| e.to_string())?;
            }
            "--base" => {
                let v = take(&args, i)?;
                config.set("base", &v).map_err(|e| e.to_string())?;
            }
            "--pinch" => {
                let v = take(&args, i)?;
                config.set("pinch", &v).map_err(|e| e.to_string())?;
            }
            "--N" | "--trunc" => {
                let v = take(&args, i)?;
                config.set("trunc", &v).map_err(|e| e.to_string())?;
            }
            "--seed" => {
                let v = take(&args, i)?;
                config.set("seed", &v).map_err(|e| e.to_string())?;
            }
            "--grid" => {
                let v = take(&args, i)?;
                config.set("grid", &v).map_err(|e| e.to_string())?;
            }
            "--depth" => {
                let v = take(&args, i)?;
                config.set("depth", &v).map_err(|e| e.to_string())?;
            }
            other => return Err(format!("unknown flag '{other}'")),
        }
        i += 2;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(Cli {
        config,
        out,
        verify_only,
    })
}

fn main() -> ExitCode {
    let cli = match parse_args() {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("error: {msg}\n");
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    let started = Instant::now();
    let outcome = if cli.verify_only {
        runner::verify(&cli.config).map(|report| (report, Vec::new()))
    } else {
        runner::run(&cli.config, &cli.out)
    };
    match outcome {
        Ok((report, files)) => {
            print!("{}", report.summary());
            for f in &files {
                println!("wrote {}", f.display());
            }
            println!("elapsed: {} ms", started.elapsed().as_millis());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
