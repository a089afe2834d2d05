use crate::error::{invalid, Error, Result};
use crate::C64;

/// Squeezer steps abort when the top-two-level population exceeds this.
pub const LEAKAGE_HARD_LIMIT: f64 = 1e-4;
/// Observables are refused when the population of the highest level exceeds this.
pub const RELIABILITY_LIMIT: f64 = 1e-8;
/// Largest generator strength `|xi| / k` per exponentiation substep.
const MAX_SUBSTEP: f64 = 0.1;
const SERIES_TOLERANCE: f64 = 1e-18;
const MAX_SERIES_TERMS: usize = 200;

/// Truncation diagnostics accumulated over the whole evolution.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LeakageReport {
    /// Largest population seen in Fock levels `cutoff - 1` and `cutoff`, per mode.
    pub top_population: Vec<f64>,
    /// Largest population seen in level `cutoff` alone, per mode.
    pub top_level_population: Vec<f64>,
    /// Sum of `|1 - |psi|^2|` over all steps.
    pub norm_deficit: f64,
}

impl LeakageReport {
    fn empty(n_modes: usize) -> Self {
        Self {
            top_population: vec![0.0; n_modes],
            top_level_population: vec![0.0; n_modes],
            norm_deficit: 0.0,
        }
    }

    pub fn max_top_population(&self) -> f64 {
        self.top_population.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_top_level_population(&self) -> f64 {
        self.top_level_population
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn is_reliable(&self) -> bool {
        self.max_top_level_population() <= RELIABILITY_LIMIT
    }
}

/// Pure state on `n_modes` modes, each truncated at `cutoff` photons.
///
/// Basis index is row-major over occupations, mode 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_modes: usize,
    cutoff: usize,
    amplitudes: Vec<C64>,
    strides: Vec<usize>,
    leakage: LeakageReport,
}

impl FockState {
    pub fn vacuum(n_modes: usize, cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return invalid("Fock cutoff must be at least 1");
        }
        if n_modes == 0 {
            return invalid("Fock state needs at least one mode");
        }
        let levels = cutoff + 1;
        let dim = levels
            .checked_pow(n_modes as u32)
            .filter(|&d| d <= 1 << 26)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("state dimension ({levels})^{n_modes} is too large"))
            })?;
        let mut strides = vec![1; n_modes];
        for m in (0..n_modes.saturating_sub(1)).rev() {
            strides[m] = strides[m + 1] * levels;
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[0] = C64::new(1.0, 0.0);
        Ok(Self {
            n_modes,
            cutoff,
            amplitudes,
            strides,
            leakage: LeakageReport::empty(n_modes),
        })
    }

    /// Single basis state `|occupations>`.
    pub fn basis(occupations: &[usize], cutoff: usize) -> Result<Self> {
        let mut state = Self::vacuum(occupations.len(), cutoff)?;
        if let Some(&n) = occupations.iter().find(|&&n| n > cutoff) {
            return invalid(format!("occupation {n} exceeds cutoff {cutoff}"));
        }
        let idx: usize = occupations
            .iter()
            .zip(&state.strides)
            .map(|(n, s)| n * s)
            .sum();
        state.amplitudes[0] = C64::new(0.0, 0.0);
        state.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn leakage(&self) -> &LeakageReport {
        &self.leakage
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    #[inline]
    pub(crate) fn occupation(&self, idx: usize, mode: usize) -> usize {
        (idx / self.strides[mode]) % (self.cutoff + 1)
    }

    /// Evolves by `exp(xi a_i^† a_j^† - conj(xi) a_i a_j)`, `xi = r e^{i theta}`.
    pub fn apply_two_mode_squeezer(
        &mut self,
        i: usize,
        j: usize,
        r: f64,
        theta: f64,
    ) -> Result<()> {
        self.check_pair(i, j)?;
        if !r.is_finite() || r < 0.0 || !theta.is_finite() {
            return invalid(format!(
                "squeezer needs finite r >= 0 and theta, got {r}, {theta}"
            ));
        }
        if r == 0.0 {
            return Ok(());
        }
        let xi = C64::from_polar(r, theta);
        let (si, sj) = (self.strides[i], self.strides[j]);
        let cutoff = self.cutoff;
        let levels = cutoff + 1;
        let generator = move |src: &[C64], dst: &mut [C64], scale: f64| {
            let xi = xi * scale;
            let xi_conj = xi.conj();
            for (idx, &amp) in src.iter().enumerate() {
                if amp == C64::new(0.0, 0.0) {
                    continue;
                }
                let ni = (idx / si) % levels;
                let nj = (idx / sj) % levels;
                if ni < cutoff && nj < cutoff {
                    let c = (((ni + 1) * (nj + 1)) as f64).sqrt();
                    dst[idx + si + sj] += xi * c * amp;
                }
                if ni > 0 && nj > 0 {
                    let c = ((ni * nj) as f64).sqrt();
                    dst[idx - si - sj] -= xi_conj * c * amp;
                }
            }
        };
        self.exponentiate(r, generator);
        self.record_leakage();
        let top = self.leakage.max_top_population();
        if top > LEAKAGE_HARD_LIMIT {
            return Err(Error::Leakage {
                leakage: top,
                threshold: LEAKAGE_HARD_LIMIT,
                cutoff: self.cutoff,
            });
        }
        Ok(())
    }

    /// Evolves so that `a_i -> t a_i + r a_j`, `a_j -> t a_j - r a_i` with `t = sqrt(T)`.
    pub fn apply_beam_splitter(&mut self, i: usize, j: usize, transmittance: f64) -> Result<()> {
        self.check_pair(i, j)?;
        if !(0.0..=1.0).contains(&transmittance) {
            return invalid(format!(
                "transmittance must lie in [0, 1], got {transmittance}"
            ));
        }
        let angle = transmittance.sqrt().acos();
        if angle == 0.0 {
            return Ok(());
        }
        // generator angle (a_i^† a_j - a_j^† a_i)
        let (si, sj) = (self.strides[i], self.strides[j]);
        let cutoff = self.cutoff;
        let levels = cutoff + 1;
        let generator = move |src: &[C64], dst: &mut [C64], scale: f64| {
            let g = angle * scale;
            for (idx, &amp) in src.iter().enumerate() {
                if amp == C64::new(0.0, 0.0) {
                    continue;
                }
                let ni = (idx / si) % levels;
                let nj = (idx / sj) % levels;
                if ni < cutoff && nj > 0 {
                    let c = (((ni + 1) * nj) as f64).sqrt();
                    dst[idx + si - sj] += amp * (g * c);
                }
                if nj < cutoff && ni > 0 {
                    let c = (((nj + 1) * ni) as f64).sqrt();
                    dst[idx + sj - si] -= amp * (g * c);
                }
            }
        };
        self.exponentiate(angle, generator);
        self.record_leakage();
        Ok(())
    }

    /// `a_mode -> e^{i phi} a_mode`, i.e. `|n> -> e^{i phi n} |n>`.
    pub fn apply_phase(&mut self, mode: usize, phi: f64) -> Result<()> {
        self.check_index(mode)?;
        if !phi.is_finite() {
            return invalid(format!("phase must be finite, got {phi}"));
        }
        let phases: Vec<C64> = (0..=self.cutoff)
            .map(|n| C64::from_polar(1.0, phi * n as f64))
            .collect();
        let (stride, levels) = (self.strides[mode], self.cutoff + 1);
        for (idx, amp) in self.amplitudes.iter_mut().enumerate() {
            *amp *= phases[(idx / stride) % levels];
        }
        Ok(())
    }

    /// Applies `exp(G)` in `k` equal substeps with `strength / k <= MAX_SUBSTEP`,
    /// each by a Taylor series. `generator(src, dst, scale)` adds `scale * G src`
    /// into `dst`.
    fn exponentiate<F>(&mut self, strength: f64, generator: F)
    where
        F: Fn(&[C64], &mut [C64], f64),
    {
        let steps = (strength / MAX_SUBSTEP).ceil().max(1.0) as usize;
        let scale = 1.0 / steps as f64;
        let dim = self.amplitudes.len();
        let mut term = vec![C64::new(0.0, 0.0); dim];
        let mut next = vec![C64::new(0.0, 0.0); dim];
        for _ in 0..steps {
            term.copy_from_slice(&self.amplitudes);
            for order in 1..=MAX_SERIES_TERMS {
                next.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                generator(&term, &mut next, scale / order as f64);
                std::mem::swap(&mut term, &mut next);
                let mut size = 0.0;
                for (acc, t) in self.amplitudes.iter_mut().zip(&term) {
                    *acc += t;
                    size += t.norm_sqr();
                }
                if size < SERIES_TOLERANCE * SERIES_TOLERANCE {
                    break;
                }
            }
        }
    }

    fn record_leakage(&mut self) {
        let mut top_two = vec![0.0; self.n_modes];
        let mut top = vec![0.0; self.n_modes];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for mode in 0..self.n_modes {
                let n = self.occupation(idx, mode);
                if n + 1 >= self.cutoff {
                    top_two[mode] += p;
                }
                if n == self.cutoff {
                    top[mode] += p;
                }
            }
        }
        let leak = &mut self.leakage;
        for (seen, now) in leak.top_population.iter_mut().zip(top_two) {
            *seen = seen.max(now);
        }
        for (seen, now) in leak.top_level_population.iter_mut().zip(top) {
            *seen = seen.max(now);
        }
        self.leakage.norm_deficit += (1.0 - self.norm_sqr()).abs();
    }

    fn check_index(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return invalid(format!(
                "mode index {mode} out of range for {} modes",
                self.n_modes
            ));
        }
        Ok(())
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return invalid(format!(
                "two-mode operation needs distinct modes, got {i} twice"
            ));
        }
        Ok(())
    }

    /// `a_mode |psi>` (unnormalized).
    pub(crate) fn lowered(&self, mode: usize) -> Vec<C64> {
        let stride = self.strides[mode];
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            let n = self.occupation(idx, mode);
            if n > 0 {
                out[idx - stride] += amp * (n as f64).sqrt();
            }
        }
        out
    }

    /// `<N_mode>`.
    pub fn number_mean(&self, mode: usize) -> Result<f64> {
        self.check_index(mode)?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(idx, z)| z.norm_sqr() * self.occupation(idx, mode) as f64)
            .sum())
    }

    /// `<N_i N_j>`.
    pub fn number_product(&self, i: usize, j: usize) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(idx, z)| {
                z.norm_sqr() * (self.occupation(idx, i) * self.occupation(idx, j)) as f64
            })
            .sum())
    }

    /// `<a_i^† a_j>`.
    pub fn correlator(&self, i: usize, j: usize) -> Result<C64> {
        self.check_index(i)?;
        self.check_index(j)?;
        let (ai, aj) = (self.lowered(i), self.lowered(j));
        Ok(ai.iter().zip(&aj).map(|(x, y)| x.conj() * y).sum())
    }

    /// `<a_i a_j>`.
    pub fn anomalous(&self, i: usize, j: usize) -> Result<C64> {
        self.check_index(i)?;
        self.check_index(j)?;
        let aj = self.lowered(j);
        let stride = self.strides[i];
        let mut sum = C64::new(0.0, 0.0);
        for (idx, &amp) in aj.iter().enumerate() {
            let n = self.occupation(idx, i);
            if n > 0 {
                sum += self.amplitudes[idx - stride].conj() * amp * (n as f64).sqrt();
            }
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_normalized_and_empty() {
        let s = FockState::vacuum(4, 10).unwrap();
        assert_eq!(s.amplitudes().len(), 14641);
        assert_eq!(s.norm(), 1.0);
        for m in 0..4 {
            assert_eq!(s.number_mean(m).unwrap(), 0.0);
        }
        assert!(FockState::vacuum(2, 0).is_err());
    }

    #[test]
    fn trivial_operations_leave_state_unchanged() {
        let s0 = FockState::vacuum(3, 6).unwrap();
        let mut s = s0.clone();
        s.apply_two_mode_squeezer(0, 1, 0.0, 0.3).unwrap();
        s.apply_beam_splitter(1, 2, 1.0).unwrap();
        s.apply_phase(2, 0.0).unwrap();
        assert_eq!(s.amplitudes(), s0.amplitudes());
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let r = 0.3_f64;
        let mut s = FockState::vacuum(2, 12).unwrap();
        s.apply_two_mode_squeezer(0, 1, r, 0.0).unwrap();
        let n0 = s.number_mean(0).unwrap();
        assert_abs_diff_eq!(n0, r.sinh().powi(2), epsilon = 1e-10);
        assert_abs_diff_eq!(n0, 0.0927326, epsilon = 1e-6);
        // pairwise emission: every basis component has n_0 = n_1
        for (idx, z) in s.amplitudes().iter().enumerate() {
            if z.norm() > 1e-15 {
                assert_eq!(s.occupation(idx, 0), s.occupation(idx, 1));
            }
        }
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
        assert!(s.leakage().is_reliable());
    }

    #[test]
    fn squeezed_vacuum_number_variance() {
        let r = 0.3_f64;
        let mut s = FockState::vacuum(2, 14).unwrap();
        s.apply_two_mode_squeezer(0, 1, r, 0.9).unwrap();
        let n = s.number_mean(0).unwrap();
        let var = s.number_product(0, 0).unwrap() - n * n;
        assert_abs_diff_eq!(var, r.sinh().powi(2) * r.cosh().powi(2), epsilon = 1e-10);
        let a01 = s.anomalous(0, 1).unwrap();
        assert_abs_diff_eq!(a01.norm(), r.sinh() * r.cosh(), epsilon = 1e-10);
        assert_abs_diff_eq!(a01.arg(), 0.9, epsilon = 1e-9);
    }

    #[test]
    fn single_photon_splits_evenly() {
        let mut s = FockState::basis(&[1, 0], 4).unwrap();
        s.apply_beam_splitter(0, 1, 0.5).unwrap();
        assert_abs_diff_eq!(s.number_mean(0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.number_mean(1).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
        // a_1 -> t a_1 - r a_0: amplitude of |0,1> is -r relative to |1,0> at +t
        let a = s.amplitudes();
        assert_abs_diff_eq!(a[5].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(a[1].re, -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn beam_splitter_preserves_norm() {
        let mut s = FockState::vacuum(2, 10).unwrap();
        s.apply_two_mode_squeezer(0, 1, 0.4, 0.2).unwrap();
        s.apply_beam_splitter(0, 1, 0.3).unwrap();
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn under_truncation_is_a_hard_error() {
        let mut s = FockState::vacuum(2, 3).unwrap();
        let err = s.apply_two_mode_squeezer(0, 1, 0.6, 0.0).unwrap_err();
        assert!(matches!(err, Error::Leakage { .. }));
    }

    #[test]
    fn leakage_decreases_with_cutoff() {
        let leak = |cutoff| {
            let mut s = FockState::vacuum(2, cutoff).unwrap();
            s.apply_two_mode_squeezer(0, 1, 0.3, 0.0).unwrap();
            s.leakage().max_top_population()
        };
        let values: Vec<f64> = (6..12).map(leak).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    }

    #[test]
    fn index_errors() {
        let mut s = FockState::vacuum(2, 3).unwrap();
        assert!(s.apply_beam_splitter(0, 0, 0.5).is_err());
        assert!(s.apply_phase(2, 0.1).is_err());
        assert!(s.apply_two_mode_squeezer(0, 2, 0.1, 0.0).is_err());
        assert!(FockState::basis(&[4, 0], 3).is_err());
    }
}
