//! Runs a seeded campaign through the library harness and writes JSON and CSV
//! reports into a directory (default: the system temp dir).

use std::path::PathBuf;

use simon_attacks::harness::{emit_report, run_campaign, threshold_failures, Experiment, ExperimentConfig, OutputFormat};

fn main() -> simon_attacks::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    let config = ExperimentConfig::new(Experiment::CbcForge, 6, 200, 2024).with_blocks(5, 2);
    let result = run_campaign(&config)?;

    let s = &result.summary;
    println!(
        "{}/{} forgeries valid (95% CI {:.3}..{:.3}), {} aborted, mean subroutine runs {:.1} of budget {}",
        s.successes, s.scored, s.wilson_low, s.wilson_high, s.aborts, s.mean_subroutine_runs, s.subroutine_budget
    );
    println!("threshold failures: {:?}", threshold_failures(&result));

    for (format, name) in [(OutputFormat::Json, "campaign.json"), (OutputFormat::Csv, "campaign.csv")] {
        let path = dir.join(name);
        emit_report(&result, format, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
