use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use roomframe::FrameCategory;
use roomframe_cli::commands::{
    cmd_evaluate, cmd_recover, cmd_render, cmd_simulate, EvaluateArgs, Preset, RecoverArgs, RenderArgs, SimulateArgs,
};
use roomframe_cli::Result;

/// Recover indoor frames from line segments and Manhattan vanishing points.
///
/// Exit codes: 0 success, 2 malformed input or parameters, 3 pipeline failure, 1 write errors.
#[derive(Debug, Parser)]
#[command(name = "roomframe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recover the frame of one scene file.
    Recover {
        input: PathBuf,
        /// Overrides the category in the scene file.
        #[arg(long, value_parser = parse_category)]
        category: Option<FrameCategory>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Frame file path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Layered overlay of the pipeline stages.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Write simulated scene and truth files plus a manifest.
    Simulate {
        /// Defaults to the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Cycles through every category when absent.
        #[arg(long, value_parser = parse_category)]
        category: Option<FrameCategory>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Preset::Default)]
        preset: Preset,
        /// Corner occlusion level, 0 to 2.
        #[arg(long, default_value_t = 0)]
        occlusion: u8,
        #[arg(long, default_value_t = 640.0)]
        width: f64,
        #[arg(long, default_value_t = 480.0)]
        height: f64,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score recovered frames against the truth files of a manifest.
    Evaluate {
        manifest: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report path; `report.json` beside the manifest when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print mean runtimes (always written to the timing sidecar).
        #[arg(long)]
        timing: bool,
    },
    /// Draw a scene and a frame file as SVG.
    Render {
        scene: PathBuf,
        frame: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// SVG path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_category(s: &str) -> Result<FrameCategory, String> {
    s.parse()
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Recover { input, category, config, out, svg } => {
            cmd_recover(&RecoverArgs { input, category, config, out, svg })
        }
        Command::Simulate { seed, category, count, preset, occlusion, width, height, config, out } => {
            cmd_simulate(&SimulateArgs { seed, category, count, preset, occlusion, width, height, config, out })
        }
        Command::Evaluate { manifest, config, out, timing } => {
            cmd_evaluate(&EvaluateArgs { manifest, config, out, timing })
        }
        Command::Render { scene, frame, config, out } => cmd_render(&RenderArgs { scene, frame, config, out }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
