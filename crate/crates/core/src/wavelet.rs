//! Ricker source wavelet and its discrete spectrum.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ricker wavelet with peak frequency `f_m`, centered at `t = 0`.
pub fn ricker(t: f64, f_m: f64) -> f64 {
    let a = (std::f64::consts::PI * f_m * t).powi(2);
    (1.0 - 2.0 * a) * (-a).exp()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RickerSpec {
    /// Peak frequency in Hz.
    pub f_m: f64,
    /// Sample interval in seconds.
    pub dt: f64,
    /// Number of time samples (record length is `nt * dt`).
    pub nt: usize,
}

impl RickerSpec {
    pub fn new(f_m: f64, dt: f64, nt: usize) -> Result<Self> {
        if !(f_m > 0.0) || !(dt > 0.0) {
            return Err(Error::InvalidParam(format!(
                "ricker wavelet needs positive f_m and dt, got {f_m}, {dt}"
            )));
        }
        if nt < 2 {
            return Err(Error::InvalidParam(format!("need at least 2 time samples, got {nt}")));
        }
        Ok(Self { f_m, dt, nt })
    }

    pub fn t_total(&self) -> f64 {
        self.nt as f64 * self.dt
    }

    /// Frequency of DFT bin `j` in Hz.
    pub fn freq(&self, j: usize) -> f64 {
        j as f64 / self.t_total()
    }

    /// Zero-phase periodic sampling: negative times wrap to the end of the
    /// record, so the DFT of the (real, even) sequence is essentially real.
    pub fn samples(&self) -> Vec<f64> {
        let nt = self.nt as i64;
        (0..nt)
            .map(|j| {
                let j_signed = if j <= nt / 2 { j } else { j - nt };
                ricker(j_signed as f64 * self.dt, self.f_m)
            })
            .collect()
    }

    /// Forward DFT of [`Self::samples`].
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> =
            self.samples().iter().map(|&r| Complex64::new(r, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(self.nt).process(&mut buf);
        buf
    }

    /// Bins `1..=nt/2` whose spectral amplitude exceeds `rel_floor` times the
    /// spectral peak. These are the frequencies worth solving for.
    pub fn active_bins(&self, rel_floor: f64) -> Vec<(usize, f64, Complex64)> {
        let spec = self.spectrum();
        let peak = spec.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        (1..=self.nt / 2)
            .filter(|&j| spec[j].norm() >= rel_floor * peak)
            .map(|j| (j, self.freq(j), spec[j]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavelet_shape() {
        assert_eq!(ricker(0.0, 15.0), 1.0);
        // zero crossing at t = 1/(sqrt(2) pi f_m)
        let t0 = 1.0 / (std::f64::consts::SQRT_2 * std::f64::consts::PI * 15.0);
        assert!(ricker(t0, 15.0).abs() < 1e-14);
        assert_eq!(ricker(0.01, 15.0), ricker(-0.01, 15.0));
        assert!(ricker(1.0, 15.0).abs() < 1e-30);
    }

    #[test]
    fn spectrum_is_zero_phase_and_peaks_near_f_m() {
        let spec = RickerSpec::new(15.0, 0.008, 128).unwrap();
        let s = spec.spectrum();
        let peak = s.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        for v in &s {
            assert!(v.im.abs() < 1e-10 * peak);
        }
        let jmax = (0..=64).max_by(|&a, &b| s[a].norm().total_cmp(&s[b].norm())).unwrap();
        // continuous spectrum peaks exactly at f_m; bins are 1/1.024 Hz wide
        assert!((spec.freq(jmax) - 15.0).abs() < 1.5, "peak at {} Hz", spec.freq(jmax));
    }

    #[test]
    fn parseval_between_samples_and_spectrum() {
        let spec = RickerSpec::new(15.0, 0.008, 128).unwrap();
        let time: f64 = spec.samples().iter().map(|r| r * r).sum();
        let freq: f64 = spec.spectrum().iter().map(|v| v.norm_sqr()).sum();
        assert!((freq - 128.0 * time).abs() < 1e-9 * freq);
    }

    #[test]
    fn active_bins_cover_the_band() {
        let spec = RickerSpec::new(15.0, 0.008, 128).unwrap();
        let bins = spec.active_bins(1e-4);
        assert!(!bins.is_empty());
        // all retained frequencies live below Nyquist and well under 5 f_m
        for &(j, f, _) in &bins {
            assert!(j >= 1 && j <= 64);
            assert!(f < 5.0 * 15.0);
        }
        // the band must include the peak frequency
        assert!(bins.iter().any(|&(_, f, _)| (f - 15.0).abs() < 1.0));
    }
}
