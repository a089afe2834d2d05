use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::output::write_text;
use super::{load_config, CliError, ValidateArgs};
use crate::bogoliubov::max_abs;
use crate::error::Error;
use crate::fock::{simulate_network, FockState, RELIABILITY_LIMIT};
use crate::model::{build_network, engine_observables, Observables, Plane, SetupParams};
use crate::moments::moments_from_map;

/// Absolute tolerance on `<a_i^† a_j>` and `<a_i a_j>`, oracle vs engine.
pub const MOMENT_TOLERANCE: f64 = 1e-6;
/// Absolute tolerance on `Cov(N_i, N_j)`, oracle vs engine.
pub const COVARIANCE_TOLERANCE: f64 = 1e-5;
/// Relative tolerance, closed forms vs engine.
pub const DUALITY_TOLERANCE: f64 = 1e-9;
/// Above this squeezing the oracle needs impractically large cutoffs.
pub const RECOMMENDED_R_MAX: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationSettings {
    pub r_max: f64,
    pub cutoff: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self {
            r_max: 0.6,
            cutoff: 12,
            samples: 50,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationOutcome {
    pub oracle_runs: usize,
    pub worst_moment: f64,
    pub worst_covariance: f64,
    /// Samples the oracle refused, with the reason.
    pub oracle_failures: Vec<String>,
    pub duality_runs: usize,
    pub worst_duality: f64,
}

impl ValidationOutcome {
    pub fn oracle_passed(&self) -> bool {
        self.oracle_failures.is_empty()
            && self.worst_moment <= MOMENT_TOLERANCE
            && self.worst_covariance <= COVARIANCE_TOLERANCE
    }

    pub fn duality_passed(&self) -> bool {
        self.worst_duality <= DUALITY_TOLERANCE
    }

    pub fn passed(&self) -> bool {
        self.oracle_passed() && self.duality_passed()
    }

    pub fn report(&self, s: &ValidationSettings) -> String {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut out = format!(
            "oracle-vs-engine: samples={} cutoff={} r_max={} seed={} evaluated={} \
             worst_moment={:.3e} (tol {:.0e}) worst_covariance={:.3e} (tol {:.0e}) {}\n",
            s.samples,
            s.cutoff,
            s.r_max,
            s.seed,
            self.oracle_runs,
            self.worst_moment,
            MOMENT_TOLERANCE,
            self.worst_covariance,
            COVARIANCE_TOLERANCE,
            verdict(self.oracle_passed()),
        );
        if let Some(first) = self.oracle_failures.first() {
            out.push_str(&format!(
                "  {} sample(s) refused by the oracle; first: {first}\n",
                self.oracle_failures.len()
            ));
        } else if !self.oracle_passed() {
            out.push_str(&format!(
                "  truncation error dominates; rerun with a larger --cutoff (now {}) or a smaller --r-max\n",
                s.cutoff
            ));
        }
        out.push_str(&format!(
            "closed-form-vs-engine: samples={} worst_relative={:.3e} (tol {:.0e}) {}\n",
            self.duality_runs,
            self.worst_duality,
            DUALITY_TOLERANCE,
            verdict(self.duality_passed()),
        ));
        out
    }
}

/// Largest oracle/engine differences of one configuration at both
/// observation planes: `(max over M and A, max over Cov(N_i, N_j))`.
pub fn oracle_residual(p: &SetupParams, cutoff: usize) -> crate::Result<(f64, f64)> {
    let run = simulate_network(p, cutoff)?;
    let mut moment = 0.0_f64;
    let mut covariance = 0.0_f64;
    for (state, plane) in [
        (&run.arms, Plane::AfterCrystals),
        (&run.detectors, Plane::Full),
    ] {
        ensure_reliable(state)?;
        let engine = moments_from_map(&build_network(p, plane)?)?;
        let (m, a) = state.second_moments()?;
        moment = moment
            .max(max_abs(&(m - engine.m())))
            .max(max_abs(&(a - engine.a())));
        let cov = state.number_covariances()?;
        for i in 0..cov.nrows() {
            for j in 0..cov.ncols() {
                covariance = covariance.max((cov[(i, j)] - engine.number_covariance(i, j)?).abs());
            }
        }
    }
    Ok((moment, covariance))
}

fn ensure_reliable(state: &FockState) -> crate::Result<()> {
    let top = state.leakage().max_top_level_population();
    if top > RELIABILITY_LIMIT {
        return Err(Error::Unreliable {
            population: top,
            threshold: RELIABILITY_LIMIT,
            cutoff: state.cutoff(),
        });
    }
    Ok(())
}

fn relative(engine: f64, closed: f64, scale: f64) -> f64 {
    let diff = (engine - closed).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / scale.abs()
    }
}

/// Worst relative difference between engine and closed-form observables.
///
/// Detector counts and `<N_->` are measured against the total photon number,
/// the scale of the terms whose difference they are; visibility, coherence
/// and `Var(N_-)` against their own value.
pub fn duality_residual(engine: &Observables, closed: &Observables) -> f64 {
    let total = closed.n1_det + closed.n2_det;
    [
        relative(engine.n1_det, closed.n1_det, total),
        relative(engine.n2_det, closed.n2_det, total),
        relative(engine.n_minus_mean, closed.n_minus_mean, total),
        relative(engine.n_minus_var, closed.n_minus_var, closed.n_minus_var),
        relative(engine.visibility, closed.visibility, closed.visibility),
        relative(engine.gamma12, closed.gamma12, closed.gamma12),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Random configuration for the oracle suite, gains up to `r_max`.
pub fn sample_oracle_setup(rng: &mut impl Rng, r_max: f64) -> SetupParams {
    let r_a = rng.gen_range(0.0..=r_max);
    let r_b = rng.gen_range(0.0..=r_max);
    let t = rng.gen_range(0.0..=1.0);
    SetupParams::new(r_a.sinh().powi(2), r_b.sinh().powi(2), t)
        .with_pump_phases(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI))
        .with_idler_phase(rng.gen_range(0.0..2.0 * PI))
}

/// Random configuration for the closed-form suite: `V_A, V_B` in `[0, 10]`.
pub fn sample_duality_setup(rng: &mut impl Rng) -> SetupParams {
    let p = SetupParams::new(
        rng.gen_range(0.0..=10.0),
        rng.gen_range(0.0..=10.0),
        rng.gen_range(0.0..=1.0),
    )
    .with_pump_phases(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI))
    .with_idler_phase(rng.gen_range(0.0..2.0 * PI));
    if rng.gen_bool(0.5) {
        p.with_arm_transmittance(rng.gen_range(0.0..1.0))
    } else {
        p
    }
}

pub fn run_validation(s: &ValidationSettings) -> Result<ValidationOutcome, CliError> {
    if s.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if s.cutoff == 0 {
        return Err(CliError::Usage("--cutoff must be at least 1".into()));
    }
    if !(s.r_max.is_finite() && s.r_max >= 0.0) {
        return Err(CliError::Usage(format!(
            "--r-max must be finite and >= 0, got {}",
            s.r_max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut outcome = ValidationOutcome::default();
    for k in 0..s.samples {
        let p = sample_oracle_setup(&mut rng, s.r_max);
        match oracle_residual(&p, s.cutoff) {
            Ok((moment, covariance)) => {
                outcome.oracle_runs += 1;
                outcome.worst_moment = outcome.worst_moment.max(moment);
                outcome.worst_covariance = outcome.worst_covariance.max(covariance);
            }
            Err(e @ (Error::Leakage { .. } | Error::Unreliable { .. })) => {
                outcome.oracle_failures.push(format!(
                    "sample {k} (r_A={:.3}, r_B={:.3}): {e}",
                    p.gain_a(),
                    p.gain_b()
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }
    for _ in 0..s.samples {
        let p = sample_duality_setup(&mut rng);
        let residual = duality_residual(&engine_observables(&p)?, &Observables::closed_form(&p)?);
        outcome.duality_runs += 1;
        outcome.worst_duality = outcome.worst_duality.max(residual);
    }
    Ok(outcome)
}

pub(super) fn cmd_validate(
    args: &ValidateArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = load_config(&args.output)?;
    let defaults = ValidationSettings::default();
    let settings = ValidationSettings {
        r_max: cfg.pick_or(args.r_max, "r-max", defaults.r_max)?,
        cutoff: cfg.pick_or(args.cutoff, "cutoff", defaults.cutoff)?,
        samples: cfg.pick_or(args.samples, "samples", defaults.samples)?,
        seed: cfg.pick_or(args.seed, "seed", defaults.seed)?,
    };
    if settings.r_max > RECOMMENDED_R_MAX {
        writeln!(
            stderr,
            "warning: r_max {} exceeds the recommended {RECOMMENDED_R_MAX}",
            settings.r_max
        )?;
    }
    let out = cfg.pick(args.output.out.clone(), "out")?;
    let outcome = run_validation(&settings)?;
    write_text(&outcome.report(&settings), out.as_deref(), stdout)?;
    if outcome.passed() {
        Ok(())
    } else {
        Err(CliError::Validation("validation failed; see report".into()))
    }
}
