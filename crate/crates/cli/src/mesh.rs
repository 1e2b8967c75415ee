use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use bcv_core::biconservative::tangential_bitension;
use bcv_core::rotation::{hopf_cylinder, hopf_tube, revolution_surface, IntegratedProfile, SampledCurve};
use bcv_core::{BcvParams, ParametricSurface};
use clap::{Args, Subcommand};
use nalgebra::Vector2;
use rayon::prelude::*;
use serde::Deserialize;

use crate::failure::{CmdResult, Failure};
use crate::output::{fmt_float, sink};

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[command(subcommand)]
    pub surface: SurfaceSpec,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, global = true)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, global = true)]
    pub tau: f64,
    /// Grid points along the first chart parameter.
    #[arg(long, default_value_t = 32, global = true)]
    pub nu: usize,
    /// Grid points along the second chart parameter.
    #[arg(long, default_value_t = 32, global = true)]
    pub nv: usize,
    /// Write the OBJ here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SurfaceSpec {
    /// Preimage of a circle of radius r0 about the origin.
    HopfCylinder {
        #[arg(long)]
        r0: f64,
    },
    /// Rotation surface with a profile read from a CSV with columns s,r,z,sigma.
    Revolution {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Preimage of a base curve read from a CSV with columns x,y.
    HopfTube {
        #[arg(long)]
        base: PathBuf,
        /// The fibre coordinate runs over [-height, height].
        #[arg(long, default_value_t = 1.0)]
        height: f64,
    },
}

#[derive(Debug, Deserialize)]
struct ProfileRow {
    s: f64,
    r: f64,
    z: f64,
    sigma: f64,
}

#[derive(Debug, Deserialize)]
struct BaseRow {
    x: f64,
    y: f64,
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> CmdResult<Vec<T>> {
    let what = || format!("reading {}", path.display());
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::from(e).context(what()))?;
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| Failure::from(e).context(what()))?;
    if rows.is_empty() {
        return Err(Failure::usage(anyhow!("{} has no data rows", path.display())));
    }
    Ok(rows)
}

fn build_surface(params: &BcvParams, spec: &SurfaceSpec) -> CmdResult<ParametricSurface> {
    Ok(match spec {
        SurfaceSpec::HopfCylinder { r0 } => hopf_cylinder(params, *r0)?,
        SurfaceSpec::Revolution { profile } => {
            let rows: Vec<ProfileRow> = read_rows(profile)?;
            let first = &rows[0];
            let s = rows.iter().map(|r| r.s).collect();
            let sigma = rows.iter().map(|r| r.sigma).collect();
            let profile = IntegratedProfile::from_samples(params, s, sigma, first.r, first.z)?;
            revolution_surface(params, Arc::new(profile))
        }
        SurfaceSpec::HopfTube { base, height } => {
            let rows: Vec<BaseRow> = read_rows(base)?;
            let points: Vec<Vector2<f64>> = rows.iter().map(|r| Vector2::new(r.x, r.y)).collect();
            if !(*height > 0.0) {
                return Err(Failure::usage(anyhow!("height {height} must be positive")));
            }
            hopf_tube(params, Arc::new(SampledCurve::new(&points)?), (-height, *height))?
        }
    })
}

pub fn run(args: &MeshArgs) -> CmdResult<()> {
    if args.nu < 2 || args.nv < 2 {
        return Err(Failure::usage(anyhow!("grid needs nu, nv >= 2 (got {} x {})", args.nu, args.nv)));
    }
    let params = BcvParams::new(args.kappa, args.tau)?;
    let surface = build_surface(&params, &args.surface)?;
    let grid = surface.domain().grid(args.nu, args.nv);

    let samples: Vec<CmdResult<([f64; 3], f64)>> = grid
        .par_iter()
        .map(|&(u, v)| {
            let p = surface.point(&params, u, v)?.coords();
            let residual = params.norm(&tangential_bitension(&surface, &params, u, v)?);
            Ok(([p.x, p.y, p.z], residual))
        })
        .collect();
    let samples = samples
        .into_iter()
        .collect::<CmdResult<Vec<_>>>()
        .map_err(|e| e.context(format!("sampling the {} grid", surface.label())))?;
    let max_residual = samples.iter().map(|s| s.1).fold(0.0, f64::max);

    let mut out = sink(args.out.as_deref()).context("opening the output file").map_err(Failure::Usage)?;
    writeln!(out, "# bcv mesh")?;
    writeln!(out, "# surface = {}", surface.label())?;
    writeln!(out, "# kappa = {}", fmt_float(params.kappa))?;
    writeln!(out, "# tau = {}", fmt_float(params.tau))?;
    writeln!(out, "# nu = {}", args.nu)?;
    writeln!(out, "# nv = {}", args.nv)?;
    writeln!(out, "# max_tangential_bitension = {}", fmt_float(max_residual))?;
    for ([x, y, z], _) in &samples {
        writeln!(out, "v {} {} {}", fmt_float(*x), fmt_float(*y), fmt_float(*z))?;
    }
    let index = |i: usize, j: usize| i * args.nv + j + 1;
    for i in 0..args.nu - 1 {
        for j in 0..args.nv - 1 {
            writeln!(
                out,
                "f {} {} {} {}",
                index(i, j),
                index(i + 1, j),
                index(i + 1, j + 1),
                index(i, j + 1)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
