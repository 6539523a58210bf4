//! FDA-MIMO geometry and noiseless multi-target snapshot synthesis.
//!
//! The model enters at the post-matched-filter snapshot level: each pulse
//! yields one MN-dimensional observation, with the transmit steering vector
//! range-and-angle dependent through the per-element frequency increment.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

use crate::linalg::complex_gaussian;
use crate::{reject, CMat, Result};

/// Pulse repetition interval used when advancing Doppler phase between
/// snapshots. All reproduction scenarios are Doppler-silent (velocity 0).
pub const PULSE_REPETITION_INTERVAL_S: f64 = 1e-3;

/// Array geometry and waveform bookkeeping.
///
/// Defaults mirror the reference parameter set: f0 = 10 GHz,
/// delta_f = 301250 Hz, M = N = 6 elements at 0.015 m spacing, 100 pulses.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarConfig {
    /// Transmit element count (M).
    pub tx_elements: usize,
    /// Receive element count (N).
    pub rx_elements: usize,
    /// Reference carrier frequency f0 in Hz.
    pub carrier_hz: f64,
    /// Per-element frequency increment in Hz.
    pub freq_increment_hz: f64,
    /// Transmit element spacing in metres.
    pub tx_spacing_m: f64,
    /// Receive element spacing in metres.
    pub rx_spacing_m: f64,
    /// Pulse (snapshot) count per coherent batch.
    pub pulses: usize,
    /// Total transmit energy, split evenly across elements.
    pub energy: f64,
    /// Propagation speed in m/s.
    pub speed_m_s: f64,
}

impl Default for RadarConfig {
    fn default() -> Self {
        Self {
            tx_elements: 6,
            rx_elements: 6,
            carrier_hz: 10.0e9,
            freq_increment_hz: 301_250.0,
            tx_spacing_m: 0.015,
            rx_spacing_m: 0.015,
            pulses: 100,
            energy: 6.0,
            speed_m_s: 3.0e8,
        }
    }
}

impl RadarConfig {
    /// Joint channel count MN.
    pub fn mn(&self) -> usize {
        self.tx_elements * self.rx_elements
    }

    /// Range ambiguity period c / (2 delta_f) in metres (infinite when the
    /// frequency increment is zero).
    pub fn range_ambiguity_m(&self) -> f64 {
        if self.freq_increment_hz == 0.0 {
            f64::INFINITY
        } else {
            self.speed_m_s / (2.0 * self.freq_increment_hz)
        }
    }

    /// Doppler frequency 2 v f0 / c for radial velocity `v`.
    pub fn doppler_hz(&self, velocity_m_s: f64) -> f64 {
        2.0 * velocity_m_s * self.carrier_hz / self.speed_m_s
    }

    pub fn validate(&self) -> Result<()> {
        if self.tx_elements < 2 || self.rx_elements < 2 {
            return reject("radar config requires at least 2 elements per array");
        }
        if self.pulses < 1 {
            return reject("radar config requires at least 1 pulse");
        }
        if !(self.carrier_hz > 0.0) {
            return reject("carrier frequency must be positive");
        }
        if self.freq_increment_hz < 0.0 {
            return reject("frequency increment must be non-negative");
        }
        if !(self.tx_spacing_m > 0.0) || !(self.rx_spacing_m > 0.0) {
            return reject("element spacings must be positive");
        }
        if !(self.energy > 0.0) {
            return reject("transmit energy must be positive");
        }
        if !(self.speed_m_s > 0.0) {
            return reject("propagation speed must be positive");
        }
        Ok(())
    }
}

/// A point scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    /// Direction of arrival in radians, |theta| < pi/2.
    pub theta_rad: f64,
    /// Slant range in metres.
    pub range_m: f64,
    /// Radial velocity in m/s (Doppler).
    pub velocity_m_s: f64,
    /// Per-element SNR in dB relative to unit noise power.
    pub power_db: f64,
}

impl Target {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_rad.abs() < std::f64::consts::FRAC_PI_2) {
            return reject(format!(
                "target angle {} outside (-pi/2, pi/2)",
                self.theta_rad
            ));
        }
        if !(self.range_m >= 0.0) {
            return reject(format!("target range {} must be non-negative", self.range_m));
        }
        Ok(())
    }
}

fn phasor(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Time-dependent transmit steering: element m carries e^{j 2 pi m delta_f t}.
pub fn transmit_time_steering(cfg: &RadarConfig, t: f64) -> Array1<Complex64> {
    let tau = 2.0 * std::f64::consts::PI;
    Array1::from_shape_fn(cfg.tx_elements, |m| {
        phasor(tau * m as f64 * cfg.freq_increment_hz * t)
    })
}

/// Combined range-angle transmit steering a(r, theta): element m carries
/// e^{j 2 pi m (d_T f0 sin(theta) / c - 2 delta_f r / c)}.
pub fn transmit_steering(cfg: &RadarConfig, theta_rad: f64, range_m: f64) -> Array1<Complex64> {
    let tau = 2.0 * std::f64::consts::PI;
    let per_element = cfg.tx_spacing_m * cfg.carrier_hz * theta_rad.sin() / cfg.speed_m_s
        - 2.0 * cfg.freq_increment_hz * range_m / cfg.speed_m_s;
    Array1::from_shape_fn(cfg.tx_elements, |m| phasor(tau * m as f64 * per_element))
}

/// Receive steering a_R(theta): element n carries
/// e^{j 2 pi n d_R f0 sin(theta) / c}.
pub fn receive_steering(cfg: &RadarConfig, theta_rad: f64) -> Array1<Complex64> {
    let tau = 2.0 * std::f64::consts::PI;
    let per_element = cfg.rx_spacing_m * cfg.carrier_hz * theta_rad.sin() / cfg.speed_m_s;
    Array1::from_shape_fn(cfg.rx_elements, |n| phasor(tau * n as f64 * per_element))
}

/// Receive-major Kronecker product: entry (n * M + m) equals a_R[n] * a[m].
pub fn kron_receive_major(a_r: &Array1<Complex64>, a_t: &Array1<Complex64>) -> Array1<Complex64> {
    let m = a_t.len();
    Array1::from_shape_fn(a_r.len() * m, |idx| a_r[idx / m] * a_t[idx % m])
}

/// Joint steering a_R(theta) (x) a(r, theta) of length MN.
pub fn joint_steering(cfg: &RadarConfig, theta_rad: f64, range_m: f64) -> Array1<Complex64> {
    kron_receive_major(
        &receive_steering(cfg, theta_rad),
        &transmit_steering(cfg, theta_rad, range_m),
    )
}

/// Noiseless snapshot matrix (MN x pulses) from per-snapshot scattering
/// coefficients supplied by the caller, one row per target.
pub fn target_snapshot_with_coeffs(
    cfg: &RadarConfig,
    targets: &[Target],
    coeffs: &CMat,
) -> Result<CMat> {
    cfg.validate()?;
    if coeffs.nrows() != targets.len() || coeffs.ncols() != cfg.pulses {
        return reject(format!(
            "coefficient matrix {}x{} does not match {} targets x {} pulses",
            coeffs.nrows(),
            coeffs.ncols(),
            targets.len(),
            cfg.pulses
        ));
    }
    let mut out = Array2::<Complex64>::zeros((cfg.mn(), cfg.pulses));
    for (q, target) in targets.iter().enumerate() {
        target.validate()?;
        let steering = joint_steering(cfg, target.theta_rad, target.range_m);
        for t in 0..cfg.pulses {
            let rho = coeffs[[q, t]];
            for (i, s) in steering.iter().enumerate() {
                out[[i, t]] += rho * s;
            }
        }
    }
    Ok(out)
}

/// Noiseless multi-target snapshot matrix (MN x pulses).
///
/// Scattering coefficients are redrawn per pulse (Swerling-II style),
/// scaled so the per-element mean power matches each target's `power_db`
/// against a unit noise floor, and rotated by the Doppler phase
/// e^{j 2 pi f_d t T_PRI}. The resulting matrix has numerical rank equal to
/// the target count almost surely.
pub fn target_snapshot_matrix(
    cfg: &RadarConfig,
    targets: &[Target],
    rng: &mut impl Rng,
) -> Result<CMat> {
    cfg.validate()?;
    if targets.is_empty() || targets.len() > cfg.mn().min(cfg.pulses) {
        return reject(format!(
            "target count {} outside 1..=min(MN, pulses) = {}",
            targets.len(),
            cfg.mn().min(cfg.pulses)
        ));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let amp = (cfg.energy / cfg.tx_elements as f64).sqrt();
    let mut coeffs = Array2::<Complex64>::zeros((targets.len(), cfg.pulses));
    for (q, target) in targets.iter().enumerate() {
        // E/M * E[|xi|^2] = 10^(power_db/10)  =>  var(xi) = M/E * 10^(db/10).
        let xi_var = 10f64.powf(target.power_db / 10.0) * cfg.tx_elements as f64 / cfg.energy;
        let xi = complex_gaussian(1, cfg.pulses, xi_var, rng);
        let f_d = cfg.doppler_hz(target.velocity_m_s);
        for t in 0..cfg.pulses {
            let doppler = phasor(tau * f_d * t as f64 * PULSE_REPETITION_INTERVAL_S);
            coeffs[[q, t]] = xi[[0, t]] * doppler * amp;
        }
    }
    target_snapshot_with_coeffs(cfg, targets, &coeffs)
}

/// Exact-vs-approximate per-element snapshot phase.
///
/// `element` indexes the MN-length snapshot vector in receive-major order
/// (m = element % M, n = element / M). The exact value keeps the two terms
/// the synthesis drops: the Doppler-times-array-offset term
/// f_d (m d_T + n d_R) sin(theta) / c and the quadratic FDA term
/// m^2 delta_f d_T sin(theta) / c. Both phasors share the common
/// carrier/Doppler/range factor, so they coincide exactly when both dropped
/// terms vanish.
pub fn exact_phase_check(
    cfg: &RadarConfig,
    target: &Target,
    element: usize,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    if element >= cfg.mn() {
        return reject(format!("element index {element} outside 0..{}", cfg.mn()));
    }
    target.validate()?;
    let tau = 2.0 * std::f64::consts::PI;
    let m = (element % cfg.tx_elements) as f64;
    let n = (element / cfg.tx_elements) as f64;
    let sin_theta = target.theta_rad.sin();
    let c = cfg.speed_m_s;
    let f0 = cfg.carrier_hz;
    let df = cfg.freq_increment_hz;
    let f_m = f0 + m * df;
    let f_d = cfg.doppler_hz(target.velocity_m_s);
    let r = target.range_m;

    let common = f_m * t + f_d * (t - 2.0 * r / c) - f0 * 2.0 * r / c;
    let element_phase = m * (cfg.tx_spacing_m * f0 * sin_theta / c - 2.0 * df * r / c)
        + n * cfg.rx_spacing_m * f0 * sin_theta / c;
    let dropped = f_d * (m * cfg.tx_spacing_m + n * cfg.rx_spacing_m) * sin_theta / c
        + m * m * df * cfg.tx_spacing_m * sin_theta / c;

    let approx = phasor(tau * (common + element_phase));
    let exact = phasor(tau * (common + element_phase + dropped));
    Ok((exact, approx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian, numerical_rank, svd_truncated};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table_i() -> RadarConfig {
        RadarConfig::default()
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} != {b}");
    }

    #[test]
    fn time_steering_zero_phase_at_t0() {
        let v = transmit_time_steering(&table_i(), 0.0);
        for z in v.iter() {
            assert_close(*z, Complex64::new(1.0, 0.0), 1e-15);
        }
    }

    #[test]
    fn time_steering_degenerate_fda() {
        let mut cfg = table_i();
        cfg.freq_increment_hz = 0.0;
        for t in [0.0, 1e-6, 3.7e-3] {
            let v = transmit_time_steering(&cfg, t);
            for z in v.iter() {
                assert_close(*z, Complex64::new(1.0, 0.0), 1e-15);
            }
        }
    }

    #[test]
    fn time_steering_direct_formula() {
        let cfg = table_i();
        let t = 1.0 / (cfg.tx_elements as f64 * cfg.freq_increment_hz);
        let v = transmit_time_steering(&cfg, t);
        for (m, z) in v.iter().enumerate() {
            let expect = Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * m as f64 / cfg.tx_elements as f64,
            );
            assert_close(*z, expect, 1e-12);
        }
    }

    #[test]
    fn transmit_steering_origin_is_ones() {
        let v = transmit_steering(&table_i(), 0.0, 0.0);
        for z in v.iter() {
            assert_close(*z, Complex64::new(1.0, 0.0), 1e-15);
        }
    }

    #[test]
    fn transmit_steering_zero_increment_is_pure_angle() {
        let mut cfg = table_i();
        cfg.freq_increment_hz = 0.0;
        let theta = 0.3;
        let with_range = transmit_steering(&cfg, theta, 12_345.0);
        let pure_angle = transmit_steering(&cfg, theta, 0.0);
        for (a, b) in with_range.iter().zip(pure_angle.iter()) {
            assert_close(*a, *b, 1e-14);
        }
    }

    #[test]
    fn transmit_steering_thirty_degrees_phase_increment() {
        let cfg = table_i();
        // d_T f0 / c = 0.5, so sin(30 deg) = 0.5 gives increment 2 pi / 4.
        let v = transmit_steering(&cfg, 30f64.to_radians(), 0.0);
        for (m, z) in v.iter().enumerate() {
            let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 0.25 * m as f64);
            assert_close(*z, expect, 1e-12);
        }
    }

    #[test]
    fn receive_steering_nyquist_edge_alternates() {
        let cfg = table_i();
        // d_R f0 / c = 0.5: at theta -> 90 deg phases approach pi * n.
        let v = receive_steering(&cfg, 89.999_999f64.to_radians());
        for (n, z) in v.iter().enumerate() {
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((z.re - expect).abs() < 1e-6 && z.im.abs() < 1e-3);
        }
    }

    #[test]
    fn receive_steering_conjugate_symmetry() {
        let cfg = table_i();
        let theta = (-20f64).to_radians();
        let neg = receive_steering(&cfg, theta);
        let pos = receive_steering(&cfg, -theta);
        for (a, b) in neg.iter().zip(pos.iter()) {
            assert_close(*a, b.conj(), 1e-14);
        }
    }

    #[test]
    fn steering_entries_unit_modulus() {
        let cfg = table_i();
        for theta in [-1.2, -0.3, 0.0, 0.7] {
            for r in [0.0, 777.0, 5000.0] {
                for z in joint_steering(&cfg, theta, r).iter() {
                    assert!((z.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn transmit_steering_range_ambiguity_period() {
        let cfg = table_i();
        let period = cfg.range_ambiguity_m();
        let a = transmit_steering(&cfg, 0.2, 150.0);
        let b = transmit_steering(&cfg, 0.2, 150.0 + period);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn kronecker_ordering_invariant() {
        let cfg = table_i();
        let a_r = receive_steering(&cfg, 0.4);
        let a_t = transmit_steering(&cfg, 0.4, 900.0);
        let k = kron_receive_major(&a_r, &a_t);
        for n in 0..cfg.rx_elements {
            for m in 0..cfg.tx_elements {
                assert_eq!(k[n * cfg.tx_elements + m], a_r[n] * a_t[m]);
            }
        }
    }

    #[test]
    fn snapshot_fixed_unit_coeffs_is_rank_one() {
        let cfg = table_i();
        let targets = [Target {
            theta_rad: 0.2,
            range_m: 800.0,
            velocity_m_s: 0.0,
            power_db: 10.0,
        }];
        let coeffs = Array2::from_elem((1, cfg.pulses), Complex64::new(1.0, 0.0));
        let x = target_snapshot_with_coeffs(&cfg, &targets, &coeffs).unwrap();
        let f = svd_truncated(&x, 2).unwrap();
        assert!(f.lambda[1] < 1e-10 * f.lambda[0]);
    }

    #[test]
    fn snapshot_column_matches_kronecker_oracle() {
        let cfg = table_i();
        let t = Target {
            theta_rad: -0.15,
            range_m: 2500.0,
            velocity_m_s: 0.0,
            power_db: 0.0,
        };
        let coeffs = Array2::from_elem((1, cfg.pulses), Complex64::new(1.0, 0.0));
        let x = target_snapshot_with_coeffs(&cfg, &[t], &coeffs).unwrap();
        let a_r = receive_steering(&cfg, t.theta_rad);
        let a_t = transmit_steering(&cfg, t.theta_rad, t.range_m);
        for n in 0..cfg.rx_elements {
            for m in 0..cfg.tx_elements {
                let expect = a_r[n] * a_t[m];
                assert!((x[[n * cfg.tx_elements + m, 0]] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn snapshot_two_targets_rank_two() {
        let cfg = table_i();
        let targets = [
            Target {
                theta_rad: -0.35,
                range_m: 5000.0,
                velocity_m_s: 0.0,
                power_db: 10.0,
            },
            Target {
                theta_rad: 0.087,
                range_m: 1500.0,
                velocity_m_s: 0.0,
                power_db: 10.0,
            },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = target_snapshot_matrix(&cfg, &targets, &mut rng).unwrap();
        assert_eq!(numerical_rank(&x, 1e-8), 2);
    }

    #[test]
    fn snapshot_rank_equals_target_count_over_seeds() {
        let mut cfg = table_i();
        cfg.pulses = 30;
        let targets = [
            Target {
                theta_rad: -0.5,
                range_m: 300.0,
                velocity_m_s: 0.0,
                power_db: 10.0,
            },
            Target {
                theta_rad: 0.1,
                range_m: 2100.0,
                velocity_m_s: 0.0,
                power_db: 5.0,
            },
            Target {
                theta_rad: 0.6,
                range_m: 4200.0,
                velocity_m_s: 0.0,
                power_db: 0.0,
            },
        ];
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = target_snapshot_matrix(&cfg, &targets, &mut rng).unwrap();
            assert_eq!(numerical_rank(&x, 1e-8), 3, "seed {seed}");
        }
    }

    #[test]
    fn snapshot_power_calibration() {
        // Per-element mean power should match 10^(power_db / 10).
        let cfg = table_i();
        let t = Target {
            theta_rad: 0.0,
            range_m: 0.0,
            velocity_m_s: 0.0,
            power_db: 10.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut acc = 0.0;
        let trials = 200;
        for _ in 0..trials {
            let x = target_snapshot_matrix(&cfg, &[t], &mut rng).unwrap();
            acc += x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        let mean_power = acc / (trials as f64 * cfg.mn() as f64 * cfg.pulses as f64);
        assert!((mean_power - 10.0).abs() < 0.25, "mean power {mean_power}");
    }

    #[test]
    fn snapshot_rejects_too_many_targets() {
        let mut cfg = table_i();
        cfg.pulses = 2;
        let t = Target {
            theta_rad: 0.0,
            range_m: 0.0,
            velocity_m_s: 0.0,
            power_db: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(target_snapshot_matrix(&cfg, &[t; 3], &mut rng).is_err());
    }

    #[test]
    fn snapshot_columns_live_in_steering_span() {
        let cfg = table_i();
        let targets = [
            Target {
                theta_rad: -0.35,
                range_m: 5000.0,
                velocity_m_s: 0.0,
                power_db: 10.0,
            },
            Target {
                theta_rad: 0.087,
                range_m: 1500.0,
                velocity_m_s: 0.0,
                power_db: 10.0,
            },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let x = target_snapshot_matrix(&cfg, &targets, &mut rng).unwrap();
        let mut basis = Array2::<Complex64>::zeros((cfg.mn(), 2));
        for (j, t) in targets.iter().enumerate() {
            basis
                .column_mut(j)
                .assign(&joint_steering(&cfg, t.theta_rad, t.range_m));
        }
        let (q, _) = crate::linalg::qr_decompose(&basis).unwrap();
        let proj = q.dot(&hermitian(&q).dot(&x));
        let resid = &x - &proj;
        assert!(
            crate::linalg::frobenius_norm(&resid) < 1e-9 * crate::linalg::frobenius_norm(&x)
        );
    }

    #[test]
    fn phase_check_exact_when_static_and_no_increment() {
        let mut cfg = table_i();
        cfg.freq_increment_hz = 0.0;
        let t = Target {
            theta_rad: 0.4,
            range_m: 3000.0,
            velocity_m_s: 0.0,
            power_db: 0.0,
        };
        for element in 0..cfg.mn() {
            let (exact, approx) = exact_phase_check(&cfg, &t, element, 1.3e-4).unwrap();
            assert_eq!(exact, approx);
        }
    }

    #[test]
    fn phase_check_small_error_at_100_mps() {
        let cfg = table_i();
        let t = Target {
            theta_rad: 20f64.to_radians(),
            range_m: 5000.0,
            velocity_m_s: 100.0,
            power_db: 0.0,
        };
        for element in 0..cfg.mn() {
            let (exact, approx) = exact_phase_check(&cfg, &t, element, 5.0e-5).unwrap();
            let dphi = (exact * approx.conj()).arg().abs();
            assert!(dphi < 1e-3, "element {element}: {dphi}");
        }
    }

    #[test]
    fn phase_check_broadside_has_no_quadratic_term() {
        // sin(theta) = 0 removes both dropped terms entirely.
        let cfg = table_i();
        let t = Target {
            theta_rad: 0.0,
            range_m: 5000.0,
            velocity_m_s: 80.0,
            power_db: 0.0,
        };
        for element in [0, 7, 35] {
            let (exact, approx) = exact_phase_check(&cfg, &t, element, 2.0e-4).unwrap();
            assert_eq!(exact, approx);
        }
    }

    #[test]
    fn phase_check_rejects_bad_element() {
        let cfg = table_i();
        let t = Target {
            theta_rad: 0.0,
            range_m: 0.0,
            velocity_m_s: 0.0,
            power_db: 0.0,
        };
        assert!(exact_phase_check(&cfg, &t, 36, 0.0).is_err());
    }
}
