use std::io::Write;
use std::path::PathBuf;

use bcv_core::rotation::{integrate_noncmc_branch, IntegrationConfig};
use bcv_core::{BcvParams, ProfileState};
use clap::Args;

use crate::failure::{CmdResult, Failure};
use crate::output::{fmt_float, sink};

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tau: f64,
    /// Initial distance from the rotation axis.
    #[arg(long)]
    pub r0: f64,
    /// Initial profile angle.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma0: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Arc length at which integration stops.
    #[arg(long, default_value_t = 10.0)]
    pub smax: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &IntegrateArgs) -> CmdResult<()> {
    let params = BcvParams::new(args.kappa, args.tau)?;
    let init = ProfileState::new(&params, 0.0, args.r0, 0.0, args.sigma0)
        .map_err(|e| Failure::usage(e).context("invalid initial state"))?;
    let config = IntegrationConfig {
        step: args.step,
        max_steps: args.max_steps,
        s_max: args.smax,
    };
    config.validate()?;
    let traj = integrate_noncmc_branch(&params, init, config)?;

    let mut out = sink(args.out.as_deref())?;
    {
        let mut csv = csv::Writer::from_writer(&mut out);
        csv.write_record(["s", "r", "z", "sigma", "f", "R1", "R2", "obstruction"])?;
        for row in &traj.rows {
            csv.write_record(
                [row.s, row.r, row.z, row.sigma, row.f, row.r1, row.r2, row.obstruction].map(fmt_float),
            )?;
        }
        csv.flush()?;
    }
    for warning in &traj.warnings {
        writeln!(out, "# warning: {warning}")?;
    }
    writeln!(out, "# status: {}", traj.status.name())?;
    out.flush()?;
    Ok(())
}
