use std::io::Write;

use serde_json::{Map, Value};

use super::output::{format_number, write_text, Format};
use super::sweep::resolve_setup;
use super::{load_config, CliError, OptimizeArgs};
use crate::model::{
    induced_coherence, optimize_t2, optimize_vb, snr_multipulse, visibility, SetupParams, T2Optimum,
};

/// Marker written in place of `T2*` when no attenuation can balance the arms.
pub const INFEASIBLE: &str = "infeasible";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmReport {
    pub vb: f64,
    pub t2: T2Optimum,
    /// At `T2*`, or at `T2 = 1` when infeasible.
    pub visibility: f64,
    pub snr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeReport {
    pub va: f64,
    pub t: f64,
    pub vb_opt: f64,
    pub visibility: f64,
    pub gamma12: f64,
    pub snr: f64,
    pub arm: Option<ArmReport>,
}

/// Optimum for `p.va`, `p.transmittance`, and, when `vb` is given, the arm
/// attenuation that reaches it with that crystal-B gain. SNRs use `p`'s phase
/// and pulse count.
pub fn optimize_report(p: &SetupParams, vb: Option<f64>) -> crate::Result<OptimizeReport> {
    let base = SetupParams {
        arm_transmittance: 1.0,
        ..*p
    };
    let vb_opt = optimize_vb(p.va, p.transmittance)?;
    let at_opt = base.with_vb(vb_opt);
    let arm = vb
        .map(|vb| -> crate::Result<ArmReport> {
            let t2 = optimize_t2(p.va, vb, p.transmittance)?;
            let q = base
                .with_vb(vb)
                .with_arm_transmittance(t2.value().unwrap_or(1.0));
            Ok(ArmReport {
                vb,
                t2,
                visibility: visibility(&q)?,
                snr: snr_multipulse(&q)?,
            })
        })
        .transpose()?;
    Ok(OptimizeReport {
        va: p.va,
        t: p.transmittance,
        vb_opt,
        visibility: visibility(&at_opt)?,
        gamma12: induced_coherence(&at_opt)?,
        snr: snr_multipulse(&at_opt)?,
        arm,
    })
}

enum Field {
    Num(f64),
    Text(&'static str),
}

impl OptimizeReport {
    fn fields(&self) -> Vec<(&'static str, Field)> {
        let mut f = vec![
            ("vA", Field::Num(self.va)),
            ("T", Field::Num(self.t)),
            ("vB_opt", Field::Num(self.vb_opt)),
            ("visibility", Field::Num(self.visibility)),
            ("gamma12", Field::Num(self.gamma12)),
            ("snr", Field::Num(self.snr)),
        ];
        if let Some(arm) = &self.arm {
            f.push(("vB", Field::Num(arm.vb)));
            match arm.t2 {
                T2Optimum::Feasible(t2) => f.push(("T2_opt", Field::Num(t2))),
                T2Optimum::Infeasible { required_vb } => {
                    f.push(("T2_opt", Field::Text(INFEASIBLE)));
                    f.push(("vB_required", Field::Num(required_vb)));
                }
            }
            f.push(("visibility_T2", Field::Num(arm.visibility)));
            f.push(("snr_T2", Field::Num(arm.snr)));
        }
        f
    }

    pub fn render(&self, format: Format) -> String {
        let fields = self.fields();
        match format {
            Format::Csv => {
                let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                let row: Vec<String> = fields
                    .iter()
                    .map(|(_, v)| match v {
                        Field::Num(x) => format_number(*x),
                        Field::Text(s) => s.to_string(),
                    })
                    .collect();
                format!("{}\n{}\n", header.join(","), row.join(","))
            }
            Format::Json => {
                let obj: Map<String, Value> = fields
                    .into_iter()
                    .map(|(k, v)| {
                        let value = match v {
                            Field::Num(x) => format_number(x)
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or(Value::Null, Value::Number),
                            Field::Text(s) => Value::String(s.into()),
                        };
                        (k.to_string(), value)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(vec![Value::Object(obj)]))
                    .expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

pub(super) fn cmd_optimize(args: &OptimizeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&args.output)?;
    let p = resolve_setup(&args.setup, &cfg)?;
    let vb: Option<f64> = cfg.pick(args.setup.vb, "vb")?;
    let format = cfg.pick_or(args.output.format, "format", Format::Csv)?;
    let out = cfg.pick(args.output.out.clone(), "out")?;
    let report = optimize_report(&p, vb)?;
    write_text(&report.render(format), out.as_deref(), stdout)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_gain_full_transmission() {
        let r = optimize_report(&SetupParams::new(1.0, 0.0, 1.0), None).unwrap();
        assert_abs_diff_eq!(r.vb_opt, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.visibility, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gamma12, 1.0, epsilon = 1e-15);
        assert!(r.arm.is_none());
    }

    #[test]
    fn strong_source_weak_filter() {
        let r = optimize_report(&SetupParams::new(100.0, 0.0, 0.1), None).unwrap();
        assert_abs_diff_eq!(r.visibility, 0.9582, epsilon = 1e-4);
        assert_abs_diff_eq!(r.visibility, r.gamma12, epsilon = 1e-12);
    }

    #[test]
    fn opaque_filter_gives_zero_visibility() {
        let r = optimize_report(&SetupParams::new(7.0, 0.0, 0.0), Some(3.0)).unwrap();
        assert_eq!(r.visibility, 0.0);
        assert_eq!(r.arm.unwrap().visibility, 0.0);
    }

    #[test]
    fn arm_attenuation_reaches_coherence() {
        let r = optimize_report(&SetupParams::new(2.0, 0.0, 0.5), Some(4.0)).unwrap();
        let arm = r.arm.unwrap();
        assert_abs_diff_eq!(arm.t2.value().unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(arm.visibility, r.gamma12, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_marker() {
        let r = optimize_report(&SetupParams::new(2.0, 0.0, 0.5), Some(0.1)).unwrap();
        let csv = r.render(Format::Csv);
        assert!(csv.contains("T2_opt"));
        assert!(csv.lines().nth(1).unwrap().contains(INFEASIBLE));
        let json: Vec<Map<String, Value>> = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(json[0]["T2_opt"], Value::String(INFEASIBLE.into()));
        assert_abs_diff_eq!(
            json[0]["vB_required"].as_f64().unwrap(),
            1.0,
            epsilon = 1e-11
        );
    }
}
