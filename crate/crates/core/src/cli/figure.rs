use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use super::output::{Format, Table};
use super::{load_config, CliError, FigureArgs};
use crate::model::{
    induced_coherence, snr_high_gain_source, snr_low_gain, snr_optimized, visibility_equal_gain,
    SetupParams,
};

pub const DEFAULT_POINTS: usize = 101;
/// Crystal-A gain of the low-gain SNR curve.
pub const LOW_GAIN_VA: f64 = 0.01;
/// Crystal-B gain of the high-gain-source SNR curves.
pub const HIGH_GAIN_SOURCE_VB: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Coherence,
    Visibility,
    Snr,
}

impl FigureId {
    pub fn default_gains(&self) -> &'static [f64] {
        match self {
            FigureId::Coherence | FigureId::Visibility => &[0.0, 0.1, 1.0, 10.0, 100.0],
            FigureId::Snr => &[0.1, 1.0, 10.0, 100.0],
        }
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coherence" => Ok(FigureId::Coherence),
            "visibility" => Ok(FigureId::Visibility),
            "snr" => Ok(FigureId::Snr),
            _ => Err(format!("unknown figure '{s}' (coherence, visibility, snr)")),
        }
    }
}

/// One curve, written to `<name>.<ext>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub table: Table,
}

fn curve(name: String, x_name: &str, y_name: &str, xs: &[f64], f: impl Fn(f64) -> f64) -> Curve {
    let mut table = Table::new([x_name, y_name]);
    for &x in xs {
        table.push(vec![x, f(x)]);
    }
    Curve { name, table }
}

/// Curves on a uniform grid of `points` values in `[0, 1]` (`T`, or `tau`
/// for the SNR figure).
pub fn figure_curves(id: FigureId, gains: &[f64], points: usize) -> Result<Vec<Curve>, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    if gains.is_empty() {
        return Err(CliError::Usage("at least one gain is needed".into()));
    }
    if let Some(g) = gains.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
        return Err(CliError::Usage(format!(
            "gain {g} must be finite and non-negative"
        )));
    }
    let xs: Vec<f64> = (0..points)
        .map(|k| {
            if k + 1 == points {
                1.0
            } else {
                k as f64 / (points - 1) as f64
            }
        })
        .collect();
    let gamma = |va: f64, t: f64| {
        induced_coherence(&SetupParams::new(va, 0.0, t)).expect("grid lies in the domain")
    };
    let mut curves = Vec::new();
    match id {
        FigureId::Coherence => {
            for &va in gains {
                curves.push(curve(
                    format!("coherence_va{va}"),
                    "T",
                    "gamma12",
                    &xs,
                    |t| gamma(va, t),
                ));
            }
        }
        FigureId::Visibility => {
            for &va in gains {
                curves.push(curve(
                    format!("visibility_eg_va{va}"),
                    "T",
                    "visibility",
                    &xs,
                    |t| visibility_equal_gain(va, t),
                ));
                curves.push(curve(
                    format!("visibility_opt_va{va}"),
                    "T",
                    "visibility",
                    &xs,
                    |t| gamma(va, t),
                ));
            }
        }
        FigureId::Snr => {
            curves.push(curve(
                format!("snr_lg_va{LOW_GAIN_VA}"),
                "tau",
                "snr",
                &xs,
                |tau| snr_low_gain(LOW_GAIN_VA, tau),
            ));
            for &va in gains {
                curves.push(curve(
                    format!("snr_hgs_va{va}_vb{HIGH_GAIN_SOURCE_VB}"),
                    "tau",
                    "snr",
                    &xs,
                    |tau| snr_high_gain_source(va, HIGH_GAIN_SOURCE_VB, tau),
                ));
                curves.push(curve(format!("snr_opt_va{va}"), "tau", "snr", &xs, |tau| {
                    snr_optimized(va, tau)
                }));
            }
        }
    }
    Ok(curves)
}

pub(super) fn cmd_figure(args: &FigureArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&args.output)?;
    let id: FigureId = args.id.parse().map_err(CliError::Usage)?;
    let gains = cfg
        .pick_list(args.gains.clone(), "gains")?
        .unwrap_or_else(|| id.default_gains().to_vec());
    let points = cfg.pick_or(args.points, "points", DEFAULT_POINTS)?;
    let format = cfg.pick_or(args.output.format, "format", Format::Csv)?;
    let dir = cfg.pick_or(args.output.out.clone(), "out", PathBuf::from("figures"))?;
    let curves = figure_curves(id, &gains, points)?;
    std::fs::create_dir_all(&dir)?;
    for c in &curves {
        let path = dir.join(format!("{}.{}", c.name, format.extension()));
        c.table.write(format, Some(&path), stdout)?;
        writeln!(stdout, "{}", path.display())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn find<'a>(curves: &'a [Curve], name: &str) -> &'a Table {
        &curves.iter().find(|c| c.name == name).unwrap().table
    }

    #[test]
    fn zero_gain_coherence_is_sqrt_t() {
        let curves = figure_curves(FigureId::Coherence, &[0.0, 5.0], 11).unwrap();
        assert_eq!(curves.len(), 2);
        for row in &find(&curves, "coherence_va0").rows {
            assert_abs_diff_eq!(row[1], row[0].sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn optimal_visibility_matches_coherence() {
        let gains = [0.0, 0.1, 1.0, 10.0, 100.0];
        let coh = figure_curves(FigureId::Coherence, &gains, 51).unwrap();
        let vis = figure_curves(FigureId::Visibility, &gains, 51).unwrap();
        assert_eq!(vis.len(), 10);
        for g in gains {
            assert_eq!(
                find(&coh, &format!("coherence_va{g}")).rows,
                find(&vis, &format!("visibility_opt_va{g}")).rows
            );
        }
    }

    #[test]
    fn snr_curves_are_ordered() {
        let gains = FigureId::Snr.default_gains();
        let curves = figure_curves(FigureId::Snr, gains, 101).unwrap();
        assert_eq!(curves.len(), 1 + 2 * gains.len());
        let lg = find(&curves, "snr_lg_va0.01");
        for g in gains {
            let hgs = find(&curves, &format!("snr_hgs_va{g}_vb0.01"));
            let opt = find(&curves, &format!("snr_opt_va{g}"));
            for k in 1..101 {
                assert!(opt.rows[k][1] >= hgs.rows[k][1]);
                assert!(hgs.rows[k][1] >= lg.rows[k][1]);
            }
        }
    }

    #[test]
    fn bad_specs() {
        assert!("fig2".parse::<FigureId>().is_err());
        assert!(figure_curves(FigureId::Snr, &[1.0], 1).is_err());
        assert!(figure_curves(FigureId::Snr, &[], 10).is_err());
        assert!(figure_curves(FigureId::Snr, &[-1.0], 10).is_err());
    }
}
