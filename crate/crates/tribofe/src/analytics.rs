//! Closed-form companion models and experimental-data handling: JKR
//! sphere-plane adhesion for estimating the normal load from a contact area,
//! the global extended Amontons relation `F_t = tau0 A + mu F_n` with
//! least-squares fitting, and ingestion of measured time series.
//!
//! Everything here works in physical units (N, m, Pa); the simulation side
//! stays nondimensional.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("contact radius/area must be positive, got {0}")]
    NonPositiveContact(f64),
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("degenerate fit: design matrix is rank-deficient")]
    DegenerateFit,
    #[error("fit needs at least two data points, got {0}")]
    TooFewPoints(usize),
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

/// JKR sphere-on-rigid-plane parameters.
///
/// Sign convention: compressive loads are positive, tensile (adhesive) loads
/// negative, so small contact areas map to negative normal forces and the
/// pull-off force is the negative minimum `-(3/2) pi R dgamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JkrParams {
    /// Effective modulus `E* = E / (1 - nu^2)` for a rigid counter-body.
    pub e_star: f64,
    /// Sphere radius.
    pub radius: f64,
    /// Work of adhesion.
    pub work_of_adhesion: f64,
}

impl JkrParams {
    pub fn new(e_star: f64, radius: f64, work_of_adhesion: f64) -> Result<Self, AnalyticsError> {
        for (name, value) in [
            ("e_star", e_star),
            ("radius", radius),
            ("work_of_adhesion", work_of_adhesion),
        ] {
            if !(value > 0.0) {
                return Err(AnalyticsError::NonPositiveParameter { name, value });
            }
        }
        Ok(Self {
            e_star,
            radius,
            work_of_adhesion,
        })
    }

    /// Convenience constructor from Young's modulus and Poisson's ratio of
    /// the compliant body (rigid plate assumed).
    pub fn from_elastic(
        youngs_modulus: f64,
        poisson_ratio: f64,
        radius: f64,
        work_of_adhesion: f64,
    ) -> Result<Self, AnalyticsError> {
        Self::new(
            youngs_modulus / (1.0 - poisson_ratio * poisson_ratio),
            radius,
            work_of_adhesion,
        )
    }

    /// Pull-off force `-(3/2) pi R dgamma` (the global minimum of the
    /// load-radius relation).
    pub fn pull_off_force(&self) -> f64 {
        -1.5 * PI * self.radius * self.work_of_adhesion
    }
}

/// JKR normal load carried by a contact of radius `a`:
/// `F = 4 E* a^3 / (3 R) - sqrt(8 pi E* dgamma a^3)`.
pub fn jkr_normal_load(a: f64, p: &JkrParams) -> Result<f64, AnalyticsError> {
    if !(a > 0.0) {
        return Err(AnalyticsError::NonPositiveContact(a));
    }
    let a3 = a * a * a;
    Ok(4.0 * p.e_star * a3 / (3.0 * p.radius)
        - (8.0 * PI * p.e_star * p.work_of_adhesion * a3).sqrt())
}

/// JKR normal load from the contact area, using `a = sqrt(A / pi)`.
pub fn jkr_area_to_load(area: f64, p: &JkrParams) -> Result<f64, AnalyticsError> {
    if !(area > 0.0) {
        return Err(AnalyticsError::NonPositiveContact(area));
    }
    jkr_normal_load((area / PI).sqrt(), p)
}

/// Load range from parameter uncertainties, evaluated at the four corners of
/// `(E* +- dE*, dgamma +- ddgamma)`; mirrors the horizontal error bars of
/// area-load plots.
pub fn jkr_load_band(
    area: f64,
    p: &JkrParams,
    d_e_star: f64,
    d_work: f64,
) -> Result<(f64, f64), AnalyticsError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for se in [-1.0, 1.0] {
        for sw in [-1.0, 1.0] {
            let q = JkrParams::new(
                p.e_star + se * d_e_star,
                p.radius,
                p.work_of_adhesion + sw * d_work,
            )?;
            let f = jkr_area_to_load(area, &q)?;
            lo = lo.min(f);
            hi = hi.max(f);
        }
    }
    Ok((lo, hi))
}

/// Global extended Amontons relation `F_t = tau0 A + mu F_n`.
pub fn extended_amontons(f_n: f64, area: f64, tau0: f64, mu: f64) -> f64 {
    tau0 * area + mu * f_n
}

/// One measured `(A, F_n, F_t)` sample used in fitting.
#[derive(Debug, Clone, Copy)]
pub struct FrictionSample {
    pub area: f64,
    pub f_n: f64,
    pub f_t: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AmontonsFit {
    pub tau0: f64,
    pub mu: f64,
    /// Euclidean norm of the fit residual.
    pub residual: f64,
}

/// Least-squares fit of `(tau0, mu)`. With `fixed_mu` given, `tau0` is the
/// ratio-averaging estimate `mean((F_t - mu F_n) / A)`.
pub fn fit_tau0_mu(
    samples: &[FrictionSample],
    fixed_mu: Option<f64>,
) -> Result<AmontonsFit, AnalyticsError> {
    if samples.len() < 2 {
        return Err(AnalyticsError::TooFewPoints(samples.len()));
    }
    let (tau0, mu) = match fixed_mu {
        Some(mu) => {
            let mut sum = 0.0;
            for s in samples {
                if !(s.area > 0.0) {
                    return Err(AnalyticsError::NonPositiveContact(s.area));
                }
                sum += (s.f_t - mu * s.f_n) / s.area;
            }
            (sum / samples.len() as f64, mu)
        }
        None => {
            // normal equations of the two-column design [A, F_n]
            let (mut aa, mut an, mut nn, mut at, mut nt) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for s in samples {
                aa += s.area * s.area;
                an += s.area * s.f_n;
                nn += s.f_n * s.f_n;
                at += s.area * s.f_t;
                nt += s.f_n * s.f_t;
            }
            let det = aa * nn - an * an;
            if det <= 1e-24 * (aa * nn).max(f64::MIN_POSITIVE) {
                return Err(AnalyticsError::DegenerateFit);
            }
            ((nn * at - an * nt) / det, (aa * nt - an * at) / det)
        }
    };
    let residual = samples
        .iter()
        .map(|s| (s.f_t - tau0 * s.area - mu * s.f_n).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(AmontonsFit { tau0, mu, residual })
}

/// A measured sliding experiment: tangential force and real contact area over
/// time, with free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSeries {
    pub time: Vec<f64>,
    pub f_t: Vec<f64>,
    pub area: Vec<f64>,
    /// `# key = value` header entries.
    pub metadata: BTreeMap<String, String>,
}

impl ExperimentSeries {
    pub fn initial_area(&self) -> Option<f64> {
        self.area.first().copied()
    }

    /// Parses the experiment CSV: `# key = value` metadata lines, a
    /// `t_seconds, F_t_newton, A_mm2` header, then data rows. Areas are
    /// converted from mm^2 to m^2.
    pub fn parse(text: &str) -> Result<Self, AnalyticsError> {
        let mut metadata = BTreeMap::new();
        let mut time = Vec::new();
        let mut f_t = Vec::new();
        let mut area = Vec::new();
        let mut header_seen = false;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            if !header_seen {
                let cols: Vec<&str> = l.split(',').map(str::trim).collect();
                if cols != ["t_seconds", "F_t_newton", "A_mm2"] {
                    return Err(AnalyticsError::Csv {
                        line,
                        msg: format!("expected header `t_seconds, F_t_newton, A_mm2`, got `{l}`"),
                    });
                }
                header_seen = true;
                continue;
            }
            let cols: Vec<&str> = l.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(AnalyticsError::Csv {
                    line,
                    msg: format!("expected 3 columns, got {}", cols.len()),
                });
            }
            let mut vals = [0.0f64; 3];
            for (slot, c) in vals.iter_mut().zip(&cols) {
                *slot = c.parse().map_err(|_| AnalyticsError::Csv {
                    line,
                    msg: format!("invalid number `{c}`"),
                })?;
                if !slot.is_finite() {
                    return Err(AnalyticsError::Csv {
                        line,
                        msg: format!("non-finite number `{c}`"),
                    });
                }
            }
            if let Some(&prev) = time.last() {
                if vals[0] <= prev {
                    return Err(AnalyticsError::Csv {
                        line,
                        msg: format!("time stamps must increase, got {} after {prev}", vals[0]),
                    });
                }
            }
            if vals[2] < 0.0 {
                return Err(AnalyticsError::Csv {
                    line,
                    msg: format!("negative contact area {}", vals[2]),
                });
            }
            time.push(vals[0]);
            f_t.push(vals[1]);
            area.push(vals[2] * 1e-6); // mm^2 -> m^2
        }
        if !header_seen {
            return Err(AnalyticsError::Csv {
                line: 0,
                msg: "missing column header".into(),
            });
        }
        Ok(Self {
            time,
            f_t,
            area,
            metadata,
        })
    }
}

/// Writes a JKR load curve `a_m, A_m2, F_n_newton` for radii in
/// `[a_min, a_max]`.
pub fn jkr_curve_csv(p: &JkrParams, a_min: f64, a_max: f64, n: usize) -> String {
    let mut out = String::from("a_m, A_m2, F_n_newton\n");
    for i in 0..n {
        let a = a_min + (a_max - a_min) * i as f64 / (n.max(2) - 1) as f64;
        let f = jkr_normal_load(a, p).expect("positive radius grid");
        out.push_str(&format!("{a:e}, {:e}, {f:e}\n", PI * a * a));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pdms_glass() -> JkrParams {
        // 1.6 MPa elastomer sphere (nu = 0.5) on rigid glass
        JkrParams::from_elastic(1.6e6, 0.5, 9.42e-3, 27e-3).unwrap()
    }

    #[test]
    fn hertz_limit_without_adhesion() {
        let p = JkrParams::new(2e6, 0.01, 1e-30).unwrap();
        let a = 1e-4_f64;
        let hertz = 4.0 * p.e_star * a.powi(3) / (3.0 * p.radius);
        let f = jkr_normal_load(a, &p).unwrap();
        assert!((f - hertz).abs() < 1e-9 * hertz);
    }

    #[test]
    fn pull_off_force_against_numeric_minimum() {
        // golden-section minimization of the load-radius curve as the oracle
        let p = pdms_glass();
        let f = |a: f64| jkr_normal_load(a, &p).unwrap();
        let (mut lo, mut hi) = (1e-8, 1e-2);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..300 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = f(x2);
            }
        }
        let min_f = f1.min(f2);
        let expect = p.pull_off_force();
        assert!(
            (min_f - expect).abs() < 1e-8 * expect.abs(),
            "numeric min {min_f} vs closed form {expect}"
        );
        // measured-system magnitude: about 1.198 mN
        assert!((expect.abs() - 1.198e-3).abs() < 1e-6);

        // the minimizer matches the stationary radius (9 pi R^2 dgamma / 8 E*)^(1/3)
        let a_c = (9.0 * PI * p.radius * p.radius * p.work_of_adhesion / (8.0 * p.e_star)).cbrt();
        assert!((0.5 * (lo + hi) - a_c).abs() < 1e-8 * a_c);
    }

    #[test]
    fn load_is_increasing_beyond_pull_off_radius() {
        let p = pdms_glass();
        let a_c = (9.0 * PI * p.radius * p.radius * p.work_of_adhesion / (8.0 * p.e_star)).cbrt();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..200 {
            let a = a_c * (1.0 + 0.05 * i as f64);
            let f = jkr_normal_load(a, &p).unwrap();
            assert!(f > prev);
            prev = f;
        }
    }

    #[test]
    fn area_form_matches_radius_form() {
        let p = pdms_glass();
        for a in [1e-5, 5e-5, 2e-4, 1e-3] {
            let by_area = jkr_area_to_load(PI * a * a, &p).unwrap();
            let by_radius = jkr_normal_load(a, &p).unwrap();
            assert!((by_area - by_radius).abs() <= 1e-12 * by_radius.abs());
        }
        assert!(jkr_area_to_load(0.0, &p).is_err());
        assert!(jkr_normal_load(-1.0, &p).is_err());
    }

    #[test]
    fn small_areas_are_tensile() {
        let p = pdms_glass();
        let f = jkr_area_to_load(1e-9, &p).unwrap();
        assert!(f < 0.0, "small contact must be held by adhesion, got {f}");
    }

    #[test]
    fn uncertainty_band_brackets_nominal() {
        let p = pdms_glass();
        let area = 0.2e-6;
        let de = 0.1e6 / (1.0 - 0.25);
        let dw = 1e-3;
        let (lo, hi) = jkr_load_band(area, &p, de, dw).unwrap();
        let nominal = jkr_area_to_load(area, &p).unwrap();
        assert!(lo < nominal && nominal < hi);
    }

    #[test]
    fn extended_amontons_values() {
        // adhesion-controlled term alone: tau0 = 0.43 MPa over 0.46 mm^2
        let f = extended_amontons(0.0, 0.46e-6, 0.43e6, 0.0);
        assert!((f - 0.1978).abs() < 1e-4);
        // classical limits
        assert_eq!(extended_amontons(2.0, 1.0, 0.0, 0.3), 0.6);
        assert_eq!(extended_amontons(2.0, 0.0, 5.0, 0.3), 0.6);
    }

    #[test]
    fn fit_recovers_exact_affine_data() {
        let (tau0, mu) = (0.43e6, 0.21);
        let samples: Vec<FrictionSample> = (0..12)
            .map(|i| {
                let area = 0.1e-6 * (1.0 + i as f64);
                let f_n = -2e-3 + 0.5e-3 * i as f64;
                FrictionSample {
                    area,
                    f_n,
                    f_t: extended_amontons(f_n, area, tau0, mu),
                }
            })
            .collect();
        let fit = fit_tau0_mu(&samples, None).unwrap();
        assert!((fit.tau0 - tau0).abs() < 1e-10 * tau0);
        assert!((fit.mu - mu).abs() < 1e-10);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn fit_with_noise_recovers_within_five_percent() {
        // deterministic xorshift noise at the 1 percent level
        let (tau0, mu) = (0.4e6, 0.3);
        let mut s = 0x51d5f3a88c0ffeeu64;
        let mut rnd = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let samples: Vec<FrictionSample> = (0..200)
            .map(|i| {
                let area = 0.05e-6 * (1.0 + (i % 17) as f64);
                let f_n = -3e-3 + 0.4e-3 * (i % 23) as f64;
                let exact = extended_amontons(f_n, area, tau0, mu);
                FrictionSample {
                    area,
                    f_n,
                    f_t: exact * (1.0 + 0.01 * 2.0 * rnd()),
                }
            })
            .collect();
        let fit = fit_tau0_mu(&samples, None).unwrap();
        assert!((fit.tau0 - tau0).abs() < 0.05 * tau0, "tau0 {}", fit.tau0);
        assert!((fit.mu - mu).abs() < 0.05 * mu.abs().max(0.1), "mu {}", fit.mu);
    }

    #[test]
    fn fixed_mu_reduces_to_ratio_average() {
        let samples = [
            FrictionSample {
                area: 0.2e-6,
                f_n: 0.0,
                f_t: 0.08,
            },
            FrictionSample {
                area: 0.2e-6,
                f_n: 0.0,
                f_t: 0.09,
            },
            FrictionSample {
                area: 0.2e-6,
                f_n: 0.0,
                f_t: 0.10,
            },
        ];
        let fit = fit_tau0_mu(&samples, Some(0.0)).unwrap();
        let mean_ratio = (0.08 + 0.09 + 0.10) / 3.0 / 0.2e-6;
        assert!((fit.tau0 - mean_ratio).abs() < 1e-9 * mean_ratio);
    }

    #[test]
    fn degenerate_design_is_rejected() {
        // all areas equal and all normal forces equal: columns proportional
        let samples: Vec<FrictionSample> = (0..5)
            .map(|i| FrictionSample {
                area: 0.2e-6,
                f_n: 1e-3,
                f_t: 0.1 + 0.01 * i as f64,
            })
            .collect();
        assert_eq!(
            fit_tau0_mu(&samples, None).unwrap_err(),
            AnalyticsError::DegenerateFit
        );
        assert!(matches!(
            fit_tau0_mu(&samples[..1], None).unwrap_err(),
            AnalyticsError::TooFewPoints(1)
        ));
    }

    #[test]
    fn experiment_csv_round_trip() {
        let text = "# initial_area_mm2 = 0.46\n# velocity_mm_s = 0.1\n# tau0_mpa = 0.43\n\
                    t_seconds, F_t_newton, A_mm2\n0.0, 0.00, 0.46\n0.1, 0.05, 0.44\n0.2, 0.09, 0.41\n";
        let s = ExperimentSeries::parse(text).unwrap();
        assert_eq!(s.time.len(), 3);
        assert_eq!(s.metadata["velocity_mm_s"], "0.1");
        assert!((s.area[0] - 0.46e-6).abs() < 1e-18);
        assert_eq!(s.initial_area(), Some(0.46e-6));

        // malformed inputs
        assert!(ExperimentSeries::parse("").is_err());
        assert!(ExperimentSeries::parse("a, b\n").is_err());
        assert!(
            ExperimentSeries::parse("t_seconds, F_t_newton, A_mm2\n0, 0, -1\n").is_err()
        );
        assert!(
            ExperimentSeries::parse("t_seconds, F_t_newton, A_mm2\n1, 0, 1\n0.5, 0, 1\n").is_err()
        );
        assert!(ExperimentSeries::parse("t_seconds, F_t_newton, A_mm2\n1, nan, 1\n").is_err());
    }

    #[test]
    fn jkr_curve_is_well_formed() {
        let p = pdms_glass();
        let csv = jkr_curve_csv(&p, 1e-5, 1e-3, 50);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a_m, A_m2, F_n_newton");
        assert_eq!(lines.len(), 51);
    }
}
