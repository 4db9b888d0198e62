use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::info;

use admire_core::{
    admire_pipeline, apply_nu, make_nu_field, read_pgm, tv_baseline, write_pgm, AdmireParams,
    DenoiseParams, GrayImage, MetricReport, MireParams, Orientation,
};

use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::cli::{
    BaselineArgs, BenchArgs, Cli, Command, CorrectArgs, EvaluateArgs, MireArgs, ReportFormat,
    SimulateArgs,
};

/// Executes one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<()> {
    match &cli.command {
        Command::Correct(args) => correct(args, out),
        Command::Baseline(args) => baseline(args, out),
        Command::Simulate(args) => simulate(args, out),
        Command::Evaluate(args) => evaluate(args, out),
        Command::Bench(args) => bench(args, out),
    }
}

fn load(path: &Path) -> Result<GrayImage> {
    Ok(read_pgm(path)?)
}

fn admire_params(m: &MireArgs, denoise: Option<DenoiseParams>) -> Result<AdmireParams> {
    let params = AdmireParams {
        mire: MireParams {
            s_step: m.s_step,
            s_max: m.s_max,
            orientation: m.orientation.into(),
        },
        patch_size: m.patch,
        stride: m.stride,
        denoise,
    };
    params.validate()?;
    Ok(params)
}

fn correct(args: &CorrectArgs, out: &mut impl Write) -> Result<()> {
    let denoise = if args.no_denoise {
        None
    } else {
        match (args.ti, args.tj) {
            (Some(ti), Some(tj)) => Some(DenoiseParams::new(ti, tj)),
            _ => bail!("denoising needs both --ti and --tj (or pass --no-denoise)"),
        }
    };
    let params = admire_params(&args.mire, denoise)?;
    let input = load(&args.input)?;
    info!("correcting {}x{} image", input.width(), input.height());
    let result = admire_pipeline(&input, &params)?;
    write_pgm(&result.image, &args.output)?;

    if let Some(path) = &args.s_map {
        let mut csv = String::from("row,col,s\n");
        for c in &result.adaptive.choices {
            csv.push_str(&format!("{},{},{}\n", c.row, c.col, c.s));
        }
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }

    let a = &result.adaptive;
    let (ti, tj) = params
        .denoise
        .map(|d| (d.t_i.to_string(), d.t_j.to_string()))
        .unwrap_or_else(|| ("-".into(), "-".into()));
    let hist = a
        .s_histogram()
        .iter()
        .filter(|(_, n)| *n > 0)
        .map(|(s, n)| format!("{s}:{n}"))
        .collect::<Vec<_>>()
        .join(";");
    let header = format!(
        "input={} output={} s_step={} s_max={} patch={} stride={} orientation={} denoise={} ti={ti} tj={tj}",
        args.input.display(),
        args.output.display(),
        params.mire.s_step,
        params.mire.s_max,
        params.patch_size,
        params.stride,
        params.mire.orientation,
        if params.denoise.is_some() { "on" } else { "off" },
    );
    match args.format {
        ReportFormat::Text => {
            writeln!(out, "# admire correct {header}")?;
            match a.global_s {
                Some(s) => writeln!(out, "global_s={s} (image smaller than one patch)")?,
                None => {
                    writeln!(out, "patches={}", a.choices.len())?;
                    writeln!(out, "s_histogram={hist}")?;
                }
            }
            writeln!(out, "s_map_all_zero={}", a.all_patches_chose_zero())?;
            writeln!(out, "identical_to_input={}", result.image == input)?;
        }
        ReportFormat::Csv => {
            writeln!(out, "# {header}")?;
            writeln!(out, "patches,s_histogram,s_map_all_zero,identical_to_input")?;
            writeln!(
                out,
                "{},{hist},{},{}",
                a.choices.len(),
                a.all_patches_chose_zero(),
                result.image == input
            )?;
        }
    }
    Ok(())
}

fn baseline(args: &BaselineArgs, out: &mut impl Write) -> Result<()> {
    let input = load(&args.input)?;
    let orientation: Orientation = args.orientation.into();
    let result = tv_baseline(&input, orientation);
    write_pgm(&result.image, &args.output)?;
    writeln!(
        out,
        "# admire baseline input={} output={} orientation={orientation}",
        args.input.display(),
        args.output.display()
    )?;
    writeln!(out, "mean_shift={}", result.offsets.mean_shift)?;
    writeln!(out, "clipped_pixels={}", result.clipped)?;
    Ok(())
}

fn simulate(args: &SimulateArgs, out: &mut impl Write) -> Result<()> {
    let input = load(&args.input)?;
    let orientation: Orientation = args.orientation.into();
    let layout = match orientation {
        Orientation::Columns => input.clone(),
        Orientation::Rows => input.transpose(),
    };
    let field = make_nu_field(layout.width(), args.seed, args.alpha, args.beta, args.gamma)?;
    let corrupted = apply_nu(&layout, &field, args.noise_sigma, args.seed)?;
    let corrupted = match orientation {
        Orientation::Columns => corrupted,
        Orientation::Rows => corrupted.transpose(),
    };
    write_pgm(&corrupted, &args.output)?;
    writeln!(
        out,
        "# admire simulate input={} output={} seed={} alpha={} beta={} gamma={} noise_sigma={} orientation={orientation}",
        args.input.display(),
        args.output.display(),
        args.seed,
        args.alpha,
        args.beta,
        args.gamma,
        args.noise_sigma
    )?;
    writeln!(out, "rmse={:.4}", admire_core::rmse(&input, &corrupted)?)?;
    Ok(())
}

fn evaluate(args: &EvaluateArgs, out: &mut impl Write) -> Result<()> {
    let truth = load(&args.truth)?;
    let test = load(&args.test)?;
    let before = match &args.input {
        Some(p) => load(p)?,
        None => truth.clone(),
    };
    let orientation: Orientation = args.orientation.into();
    let report = MetricReport::compute(&truth, &before, &test, orientation)?;
    match args.format {
        ReportFormat::Text => {
            writeln!(
                out,
                "# admire evaluate truth={} test={} orientation={orientation}",
                args.truth.display(),
                args.test.display()
            )?;
            writeln!(out, "rmse={:.4}", report.rmse)?;
            writeln!(out, "rmse_ci={:.4}", report.rmse_ci)?;
            writeln!(out, "tv_before={}", report.tv_before)?;
            writeln!(out, "tv_after={}", report.tv_after)?;
        }
        ReportFormat::Csv => {
            writeln!(out, "rmse,rmse_ci,tv_before,tv_after")?;
            writeln!(
                out,
                "{:.4},{:.4},{},{}",
                report.rmse, report.rmse_ci, report.tv_before, report.tv_after
            )?;
        }
    }
    Ok(())
}

fn bench(args: &BenchArgs, out: &mut impl Write) -> Result<()> {
    if args.seed_to < args.seed_from {
        bail!("--seed-to must not be below --seed-from");
    }
    let denoise = DenoiseParams::new(args.ti, args.tj);
    denoise.validate()?;
    let cfg = BenchConfig {
        seeds: (args.seed_from..=args.seed_to).collect(),
        alpha: args.alpha,
        beta: args.beta,
        gamma: args.gamma,
        noise_sigma: args.noise_sigma,
        admire: admire_params(&args.mire, None)?,
        denoise,
    };
    let mut images = Vec::with_capacity(args.images.len());
    for path in &args.images {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        images.push((name, load(path)?));
    }
    eprintln!(
        "# admire bench seeds={}..={} alpha={} beta={} gamma={} noise_sigma={} s_step={} s_max={} patch={} stride={} orientation={} ti={} tj={}",
        args.seed_from,
        args.seed_to,
        cfg.alpha,
        cfg.beta,
        cfg.gamma,
        cfg.noise_sigma,
        cfg.admire.mire.s_step,
        cfg.admire.mire.s_max,
        cfg.admire.patch_size,
        cfg.admire.stride,
        cfg.admire.mire.orientation,
        args.ti,
        args.tj
    );
    let rows = run_bench(&images, &cfg)?;
    match &args.output {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&rows, std::io::BufWriter::new(file))?;
        }
        None => write_csv(&rows, out)?,
    }
    Ok(())
}
