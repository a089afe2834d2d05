use std::io::Write;
use std::str::FromStr;

use super::config::{Config, Grid};
use super::output::{Format, Table};
use super::{load_config, CliError, SetupArgs, SweepArgs};
use crate::model::{Observables, SetupParams};

pub const SWEEP_COLUMNS: [&str; 7] = [
    "n1_det",
    "n2_det",
    "visibility",
    "gamma12",
    "n_minus_mean",
    "n_minus_var",
    "snr",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Va,
    Vb,
    T,
    Phi,
    T2,
    /// `tau = T cos^2 2phi`.
    Tau,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Va => "vA",
            SweepParam::Vb => "vB",
            SweepParam::T => "T",
            SweepParam::Phi => "phi",
            SweepParam::T2 => "T2",
            SweepParam::Tau => "tau",
        }
    }

    fn check_domain(&self, x: f64) -> Result<(), CliError> {
        let ok = match self {
            SweepParam::Va | SweepParam::Vb => x.is_finite() && x >= 0.0,
            SweepParam::T | SweepParam::T2 | SweepParam::Tau => (0.0..=1.0).contains(&x),
            SweepParam::Phi => x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "{} = {x} is outside the parameter's domain",
                self.name()
            )))
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "va" => Ok(SweepParam::Va),
            "vb" => Ok(SweepParam::Vb),
            "t" => Ok(SweepParam::T),
            "phi" => Ok(SweepParam::Phi),
            "t2" => Ok(SweepParam::T2),
            "tau" => Ok(SweepParam::Tau),
            _ => Err(format!(
                "unknown sweep parameter '{s}' (vA, vB, T, phi, T2, tau)"
            )),
        }
    }
}

/// How a `tau` sweep is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Vary {
    /// `phi = 0`, `T = tau`.
    #[default]
    Absorption,
    /// `T = 1`, `phi = acos(sqrt(tau)) / 2`.
    Phase,
}

impl FromStr for Vary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "absorption" => Ok(Vary::Absorption),
            "phase" => Ok(Vary::Phase),
            _ => Err(format!("unknown --vary '{s}' (absorption or phase)")),
        }
    }
}

pub(super) fn resolve_setup(args: &SetupArgs, cfg: &Config) -> Result<SetupParams, CliError> {
    let p = SetupParams {
        va: cfg.pick_or(args.va, "va", 1.0)?,
        vb: cfg.pick_or(args.vb, "vb", 1.0)?,
        transmittance: cfg.pick_or(args.t, "t", 1.0)?,
        arm_transmittance: cfg.pick_or(args.t2, "t2", 1.0)?,
        pulses: cfg.pick_or(args.pulses, "pulses", 1)?,
        ..SetupParams::default()
    }
    .with_phi(cfg.pick_or(args.phi, "phi", 0.0)?);
    p.validate()?;
    Ok(p)
}

fn apply(base: &SetupParams, param: SweepParam, x: f64, vary: Vary) -> SetupParams {
    match param {
        SweepParam::Va => SetupParams { va: x, ..*base },
        SweepParam::Vb => base.with_vb(x),
        SweepParam::T => SetupParams {
            transmittance: x,
            ..*base
        },
        SweepParam::Phi => base.with_phi(x),
        SweepParam::T2 => base.with_arm_transmittance(x),
        SweepParam::Tau => match vary {
            Vary::Absorption => SetupParams {
                transmittance: x,
                ..*base
            }
            .with_phi(0.0),
            Vary::Phase => SetupParams {
                transmittance: 1.0,
                ..*base
            }
            .with_phi(0.5 * x.sqrt().acos()),
        },
    }
}

/// One row per point: the swept value followed by [`SWEEP_COLUMNS`].
pub fn sweep_table(
    base: &SetupParams,
    param: SweepParam,
    points: &[f64],
    vary: Vary,
) -> Result<Table, CliError> {
    if points.len() < 2 {
        return Err(CliError::Usage("a sweep needs at least 2 points".into()));
    }
    if vary == Vary::Phase && param != SweepParam::Tau {
        return Err(CliError::Usage("--vary applies to tau sweeps only".into()));
    }
    for &x in points {
        param.check_domain(x)?;
    }
    let mut table = Table::new(std::iter::once(param.name()).chain(SWEEP_COLUMNS));
    for &x in points {
        let o = Observables::closed_form(&apply(base, param, x, vary))?;
        table.push(vec![
            x,
            o.n1_det,
            o.n2_det,
            o.visibility,
            o.gamma12,
            o.n_minus_mean,
            o.n_minus_var,
            o.snr_multipulse,
        ]);
    }
    Ok(table)
}

pub(super) fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&args.output)?;
    let param: SweepParam = cfg
        .pick(args.param.clone(), "param")?
        .ok_or_else(|| CliError::Usage("sweep needs --param".into()))?
        .parse()
        .map_err(CliError::Usage)?;
    let grid: Grid = cfg
        .pick(args.grid.clone(), "grid")?
        .ok_or_else(|| CliError::Usage("sweep needs --grid start:stop:count".into()))?
        .parse()
        .map_err(CliError::Usage)?;
    let vary: Vary = match cfg.pick(args.vary.clone(), "vary")? {
        Some(s) => s.parse().map_err(CliError::Usage)?,
        None => Vary::default(),
    };
    let base = resolve_setup(&args.setup, &cfg)?;
    let format = cfg.pick_or(args.output.format, "format", Format::Csv)?;
    let out = cfg.pick(args.output.out.clone(), "out")?;
    let table = sweep_table(&base, param, &grid.points(), vary)?;
    table.write(format, out.as_deref(), stdout)?;
    Ok(())
}
