//! Pointwise constitutive laws for adhesive contact and friction.
//!
//! The normal law is a coarse-grained Lennard-Jones traction
//!
//! ```text
//! T_n(g) = T0 * [ (1/45)(r0/g)^9 - (1/3)(r0/g)^3 ],   T0 = A_H / (2 pi r0^3),
//! ```
//!
//! positive in repulsion, negative in adhesion. Two sliding-threshold laws sit
//! on top of it: a distance-independent shear strength active inside a cutoff
//! gap (regularized by a logistic), and a local extended-Amontons law whose
//! threshold is proportional to the shifted normal traction. All functions
//! here are pure and unit-agnostic; callers pick a consistent unit system.

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LawError {
    #[error("separation must be positive, got {0}")]
    NonPositiveSeparation(f64),
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("s_cut must lie in [0, 1], got {0}")]
    SCutOutOfRange(f64),
    #[error("parameter {name} must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("local surface stretch must be positive, got {0}")]
    NonPositiveStretch(f64),
}

/// Adhesion inputs of the coarse-grained contact law: Hamaker constant and
/// molecular equilibrium distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdhesionParams {
    /// Hamaker constant `A_H` (energy).
    pub hamaker: f64,
    /// Molecular equilibrium distance `r0` (length).
    pub r0: f64,
}

impl AdhesionParams {
    pub fn new(hamaker: f64, r0: f64) -> Result<Self, LawError> {
        if !(hamaker > 0.0) {
            return Err(LawError::NonPositiveParameter {
                name: "hamaker",
                value: hamaker,
            });
        }
        if !(r0 > 0.0) {
            return Err(LawError::NonPositiveParameter { name: "r0", value: r0 });
        }
        Ok(Self { hamaker, r0 })
    }

    /// Traction scale `T0 = A_H / (2 pi r0^3)`.
    pub fn traction_scale(&self) -> f64 {
        self.hamaker / (2.0 * PI * self.r0.powi(3))
    }
}

/// Constants derived from [`AdhesionParams`]: zero-traction gap, work of
/// adhesion, location and magnitude of the adhesive traction minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedAdhesionConstants {
    /// Gap at which the normal traction vanishes, `g_eq = r0 * 15^(-1/6)`.
    pub g_eq: f64,
    /// Work of adhesion per unit area, `15^(1/3) A_H / (16 pi r0^2)`.
    pub w_adh: f64,
    /// Gap of maximum adhesive traction, `g_max = r0 * 5^(-1/6)`.
    pub g_max: f64,
    /// Maximum adhesive traction magnitude, `sqrt(5) A_H / (9 pi r0^3)`.
    pub t_max: f64,
    /// Traction scale `T0 = A_H / (2 pi r0^3)`.
    pub t0: f64,
}

pub fn derived_constants(p: &AdhesionParams) -> DerivedAdhesionConstants {
    let r0 = p.r0;
    DerivedAdhesionConstants {
        g_eq: r0 * 15f64.powf(-1.0 / 6.0),
        w_adh: 15f64.cbrt() * p.hamaker / (16.0 * PI * r0 * r0),
        g_max: r0 * 5f64.powf(-1.0 / 6.0),
        t_max: 5f64.sqrt() * p.hamaker / (9.0 * PI * r0.powi(3)),
        t0: p.traction_scale(),
    }
}

/// Inverts [`derived_constants`]: recovers `(A_H, r0)` from the maximum
/// adhesive traction and the work of adhesion.
///
/// Eliminating `A_H` from the two closed forms gives
/// `r0 = 16 sqrt(5) w_adh / (9 * 15^(1/3) * t_max)`, then
/// `A_H = 9 pi r0^3 t_max / sqrt(5)`.
pub fn calibrate_from_physical(t_max: f64, w_adh: f64) -> Result<AdhesionParams, LawError> {
    if !(t_max > 0.0) {
        return Err(LawError::NonPositiveParameter {
            name: "t_max",
            value: t_max,
        });
    }
    if !(w_adh > 0.0) {
        return Err(LawError::NonPositiveParameter {
            name: "w_adh",
            value: w_adh,
        });
    }
    let r0 = 16.0 * 5f64.sqrt() * w_adh / (9.0 * 15f64.cbrt() * t_max);
    let hamaker = 9.0 * PI * r0.powi(3) * t_max / 5f64.sqrt();
    Ok(AdhesionParams { hamaker, r0 })
}

/// Distance-independent sliding law: constant shear strength `tau_di` inside
/// the cutoff gap `g_cut`, logistic transition of steepness `k_di`.
/// The threshold acts per unit *current* area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiLaw {
    pub tau_di: f64,
    pub g_cut: f64,
    pub k_di: f64,
}

/// Local extended-Amontons sliding law: threshold proportional to the shifted
/// normal traction, vanishing beyond `g_cut(s_cut)`. Defined per unit
/// *reference* area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EaLaw {
    pub mu_ea: f64,
    /// Interpolation parameter placing the cutoff between `g_eq` (0) and
    /// `g_max` (1).
    pub s_cut: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrictionLaw {
    DistanceIndependent(DiLaw),
    ExtendedAmontons(EaLaw),
    Frictionless,
}

impl FrictionLaw {
    pub fn validate(&self) -> Result<(), LawError> {
        match *self {
            FrictionLaw::DistanceIndependent(DiLaw { tau_di, g_cut: _, k_di }) => {
                if !(tau_di >= 0.0) {
                    return Err(LawError::NegativeParameter {
                        name: "tau_di",
                        value: tau_di,
                    });
                }
                if !(k_di > 0.0) {
                    return Err(LawError::NonPositiveParameter {
                        name: "k_di",
                        value: k_di,
                    });
                }
                Ok(())
            }
            FrictionLaw::ExtendedAmontons(EaLaw { mu_ea, s_cut }) => {
                if !(mu_ea >= 0.0) {
                    return Err(LawError::NegativeParameter {
                        name: "mu_ea",
                        value: mu_ea,
                    });
                }
                if !(0.0..=1.0).contains(&s_cut) {
                    return Err(LawError::SCutOutOfRange(s_cut));
                }
                Ok(())
            }
            FrictionLaw::Frictionless => Ok(()),
        }
    }

    /// Gap below which a point counts toward the contact area: the law's own
    /// cutoff, or `g_max` for frictionless runs.
    pub fn area_cutoff(&self, c: &DerivedAdhesionConstants) -> f64 {
        match *self {
            FrictionLaw::DistanceIndependent(DiLaw { g_cut, .. }) => g_cut,
            FrictionLaw::ExtendedAmontons(EaLaw { s_cut, .. }) => {
                s_cut * c.g_max + (1.0 - s_cut) * c.g_eq
            }
            FrictionLaw::Frictionless => c.g_max,
        }
    }
}

/// Regularization of the normal traction for small gaps, plus the optional
/// smoothing of the extended-Amontons threshold kink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationConfig {
    /// Below this gap the traction continues as its tangent line, keeping the
    /// law finite and C1 for arbitrary penetration.
    pub g_reg: f64,
    /// Replace the threshold kink at `g_cut` (present for `s_cut < 1`) by a
    /// cubic blend over a window of `0.02 r0`.
    pub ea_smoothing: bool,
}

impl RegularizationConfig {
    /// Default extrapolation point `g_reg = g_eq`, which leaves the whole
    /// attractive branch untouched.
    pub fn for_params(p: &AdhesionParams) -> Self {
        Self {
            g_reg: derived_constants(p).g_eq,
            ea_smoothing: false,
        }
    }
}

/// Lennard-Jones pair potential `eps (r0/r)^12 - 2 eps (r0/r)^6`.
pub fn lj_potential(r: f64, eps: f64, r0: f64) -> Result<f64, LawError> {
    if !(r > 0.0) {
        return Err(LawError::NonPositiveSeparation(r));
    }
    let s6 = (r0 / r).powi(6);
    Ok(eps * s6 * s6 - 2.0 * eps * s6)
}

/// Coarse-grained normal traction `T_n(g)`; positive means repulsion.
pub fn normal_traction(g_n: f64, p: &AdhesionParams) -> Result<f64, LawError> {
    if !(g_n > 0.0) {
        return Err(LawError::NonPositiveSeparation(g_n));
    }
    let x3 = (p.r0 / g_n).powi(3);
    Ok(p.traction_scale() * (x3 * x3 * x3 / 45.0 - x3 / 3.0))
}

/// Analytic derivative `dT_n/dg`.
pub fn normal_traction_derivative(g_n: f64, p: &AdhesionParams) -> Result<f64, LawError> {
    if !(g_n > 0.0) {
        return Err(LawError::NonPositiveSeparation(g_n));
    }
    let x3 = (p.r0 / g_n).powi(3);
    Ok(p.traction_scale() / g_n * (x3 - x3 * x3 * x3 / 5.0))
}

/// Regularized normal traction: equals `T_n` for `g >= g_reg` and continues
/// as the tangent line below, so it is total in `g` and C1 at the junction.
pub fn normal_traction_reg(g_n: f64, p: &AdhesionParams, reg: &RegularizationConfig) -> f64 {
    if g_n >= reg.g_reg {
        normal_traction(g_n, p).expect("g_reg > 0 implies g_n > 0")
    } else {
        let t = normal_traction(reg.g_reg, p).expect("g_reg > 0");
        let dt = normal_traction_derivative(reg.g_reg, p).expect("g_reg > 0");
        t + dt * (g_n - reg.g_reg)
    }
}

/// Derivative of [`normal_traction_reg`]; constant below the junction.
pub fn normal_traction_reg_derivative(
    g_n: f64,
    p: &AdhesionParams,
    reg: &RegularizationConfig,
) -> f64 {
    let g = g_n.max(reg.g_reg);
    normal_traction_derivative(g, p).expect("g_reg > 0")
}

/// Numerically stable logistic `1 / (1 + e^x)`.
fn logistic_complement(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Sliding threshold of the distance-independent law.
///
/// Unregularized: `tau_di` for `g <= g_cut`, zero beyond. Regularized:
/// `tau_di / (1 + e^{k_di (g - g_cut)})`.
pub fn t_slide_di(g_n: f64, law: &DiLaw, regularized: bool) -> f64 {
    if regularized {
        law.tau_di * logistic_complement(law.k_di * (g_n - law.g_cut))
    } else if g_n <= law.g_cut {
        law.tau_di
    } else {
        0.0
    }
}

/// Gap-derivative of the regularized distance-independent threshold.
pub fn t_slide_di_derivative(g_n: f64, law: &DiLaw) -> f64 {
    let s = logistic_complement(law.k_di * (g_n - law.g_cut));
    -law.tau_di * law.k_di * s * (1.0 - s)
}

/// Friction coefficient equivalent of the distance-independent law,
/// `mu_di = tau_di / t_max`.
pub fn mu_di(law: &DiLaw, c: &DerivedAdhesionConstants) -> f64 {
    law.tau_di / c.t_max
}

/// Cutoff gap of the extended-Amontons law: affine between `g_eq` and `g_max`.
pub fn g_cut_ea(s_cut: f64, c: &DerivedAdhesionConstants) -> Result<f64, LawError> {
    if !(0.0..=1.0).contains(&s_cut) {
        return Err(LawError::SCutOutOfRange(s_cut));
    }
    Ok(s_cut * c.g_max + (1.0 - s_cut) * c.g_eq)
}

/// Sliding threshold of the extended-Amontons law,
/// `(mu_ea / j_cl) [T_n(g) - T_n(g_cut)]` below `g_cut`, zero above, built on
/// the regularized normal traction so overlap states stay bounded.
pub fn t_slide_ea(
    g_n: f64,
    law: &EaLaw,
    j_cl: f64,
    p: &AdhesionParams,
    reg: &RegularizationConfig,
) -> Result<f64, LawError> {
    Ok(ea_threshold_eval(g_n, law, j_cl, p, reg)?.0)
}

/// Value and one-sided gap-derivative (from the sliding side) of the
/// extended-Amontons threshold.
fn ea_threshold_eval(
    g_n: f64,
    law: &EaLaw,
    j_cl: f64,
    p: &AdhesionParams,
    reg: &RegularizationConfig,
) -> Result<(f64, f64), LawError> {
    if !(j_cl > 0.0) {
        return Err(LawError::NonPositiveStretch(j_cl));
    }
    let c = derived_constants(p);
    let g_cut = g_cut_ea(law.s_cut, &c)?;
    let shift = normal_traction_reg(g_cut, p, reg);
    let scale = law.mu_ea / j_cl;

    let raw = |g: f64| scale * (normal_traction_reg(g, p, reg) - shift);
    let raw_d = |g: f64| scale * normal_traction_reg_derivative(g, p, reg);

    if reg.ea_smoothing && law.s_cut < 1.0 {
        // Cubic Hermite blend over [g_cut - delta, g_cut + delta] joining the
        // raw branch (value and slope) to the zero branch.
        let delta = 0.01 * p.r0;
        let (a, b) = (g_cut - delta, g_cut + delta);
        if g_n >= b {
            return Ok((0.0, 0.0));
        }
        if g_n > a {
            let h = b - a;
            let t = (g_n - a) / h;
            let (va, ma) = (raw(a), raw_d(a));
            let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
            let h10 = t * (1.0 - t) * (1.0 - t);
            let v = h00 * va + h10 * h * ma;
            let dh00 = 6.0 * t * (t - 1.0);
            let dh10 = (1.0 - t) * (1.0 - 3.0 * t);
            let d = (dh00 * va) / h + dh10 * ma;
            return Ok((v, d));
        }
        return Ok((raw(g_n), raw_d(g_n)));
    }

    if g_n >= g_cut {
        Ok((0.0, 0.0))
    } else {
        Ok((raw(g_n), raw_d(g_n)))
    }
}

/// Which area measure a threshold applies to when integrated into forces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreaConvention {
    Current,
    Reference,
}

/// Evaluated sliding threshold with the partial derivatives the solver needs
/// for consistent linearization, tagged with its area convention.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdEval {
    pub value: f64,
    /// d(threshold)/d(g_n); one-sided from the sliding side at kinks.
    pub d_gap: f64,
    /// d(threshold)/d(j_cl).
    pub d_stretch: f64,
    pub area: AreaConvention,
}

impl ThresholdEval {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            d_gap: 0.0,
            d_stretch: 0.0,
            area: AreaConvention::Current,
        }
    }
}

/// Dispatches the sliding-threshold evaluation for any friction law.
pub fn sliding_threshold(
    g_n: f64,
    law: &FrictionLaw,
    j_cl: f64,
    p: &AdhesionParams,
    reg: &RegularizationConfig,
) -> Result<ThresholdEval, LawError> {
    match law {
        FrictionLaw::Frictionless => Ok(ThresholdEval::zero()),
        FrictionLaw::DistanceIndependent(di) => Ok(ThresholdEval {
            value: t_slide_di(g_n, di, true),
            d_gap: t_slide_di_derivative(g_n, di),
            d_stretch: 0.0,
            area: AreaConvention::Current,
        }),
        FrictionLaw::ExtendedAmontons(ea) => {
            let (value, d_gap) = ea_threshold_eval(g_n, ea, j_cl, p, reg)?;
            Ok(ThresholdEval {
                value,
                d_gap,
                // value = const / j_cl at fixed gap
                d_stretch: -value / j_cl,
                area: AreaConvention::Reference,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> AdhesionParams {
        AdhesionParams::new(0.2, 0.4).unwrap()
    }

    fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn lj_minimum_at_r0() {
        let eps = 1.3;
        let r0 = 0.7;
        assert!((lj_potential(r0, eps, r0).unwrap() + eps).abs() < 1e-14 * eps);
        assert!(lj_potential(100.0 * r0, eps, r0).unwrap().abs() < 1e-10 * eps);
        assert_eq!(
            lj_potential(0.0, eps, r0),
            Err(LawError::NonPositiveSeparation(0.0))
        );
    }

    #[test]
    fn lj_root_bisection() {
        // The 12-6 potential has its only positive root at r = r0 / 2^(1/6);
        // locate it by bisection and compare against the closed form.
        let eps = 2.0;
        let r0 = 1.3;
        let phi = |r: f64| lj_potential(r, eps, r0).unwrap();
        let (mut lo, mut hi) = (0.5 * r0, r0);
        assert!(phi(lo) > 0.0 && phi(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if phi(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root * 2f64.powf(1.0 / 6.0) / r0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn traction_zero_at_g_eq() {
        let p = params();
        let c = derived_constants(&p);
        let t = normal_traction(c.g_eq, &p).unwrap();
        assert!(t.abs() < 1e-12 * c.t_max, "T_n(g_eq) = {t}");
    }

    #[test]
    fn traction_minimum_at_g_max() {
        let p = params();
        let c = derived_constants(&p);
        let t = normal_traction(c.g_max, &p).unwrap();
        assert!((t + c.t_max).abs() < 1e-12 * c.t_max);
        // extremum: derivative vanishes there
        assert!(
            normal_traction_derivative(c.g_max, &p).unwrap().abs()
                < 1e-10 * c.t_max / p.r0
        );
    }

    #[test]
    fn traction_at_r0() {
        let p = params();
        let expected = -(14.0 / 45.0) * p.traction_scale();
        let got = normal_traction(p.r0, &p).unwrap();
        assert!((got - expected).abs() < 1e-14 * expected.abs());
    }

    #[test]
    fn traction_sign_structure() {
        let p = params();
        let c = derived_constants(&p);
        // log-spaced grid over (0, g_eq) and (g_eq, 100 r0)
        let n = 1000;
        for i in 0..n {
            let f = (i as f64 + 0.5) / n as f64;
            let g_below = c.g_eq * (0.01f64).powf(1.0 - f);
            assert!(normal_traction(g_below, &p).unwrap() > 0.0);
            let g_above = c.g_eq * (100.0 * p.r0 / c.g_eq).powf(f);
            if g_above > c.g_eq {
                assert!(normal_traction(g_above, &p).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn traction_argmin_on_grid() {
        let p = params();
        let c = derived_constants(&p);
        let n = 4000;
        let (lo, hi) = (0.5 * c.g_eq, 3.0 * p.r0);
        let step = (hi - lo) / n as f64;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=n {
            let g = lo + step * i as f64;
            let t = normal_traction(g, &p).unwrap();
            if t < best.0 {
                best = (t, g);
            }
        }
        assert!((best.1 - c.g_max).abs() <= step);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = params();
        // deterministic xorshift walk over (0.5 r0, 3 r0)
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let f = (state >> 11) as f64 / (1u64 << 53) as f64;
            let g = p.r0 * (0.5 + 2.5 * f);
            let fd = central_diff(|x| normal_traction(x, &p).unwrap(), g, 1e-6 * p.r0);
            let an = normal_traction_derivative(g, &p).unwrap();
            assert!(
                (an - fd).abs() <= 1e-6 * an.abs().max(1e-3 * p.traction_scale() / p.r0),
                "g={g}: analytic {an} vs fd {fd}"
            );
        }
    }

    #[test]
    fn derivative_decays_at_large_gap() {
        let p = params();
        let d = normal_traction_derivative(1e4 * p.r0, &p).unwrap();
        assert!(d.abs() < 1e-10 * p.traction_scale() / p.r0);
        let c = derived_constants(&p);
        assert!(normal_traction_derivative(c.g_eq, &p).unwrap() < 0.0);
    }

    #[test]
    fn regularized_traction_junction() {
        let p = params();
        let c = derived_constants(&p);
        let reg = RegularizationConfig::for_params(&p);
        assert_eq!(reg.g_reg, c.g_eq);
        // exact continuity at the junction
        let tj = normal_traction(reg.g_reg, &p).unwrap();
        assert_eq!(normal_traction_reg(reg.g_reg, &p, &reg), tj);
        // below: pure tangent line through (g_reg, T_n(g_reg))
        let slope = normal_traction_derivative(reg.g_reg, &p).unwrap();
        let g = 0.9 * reg.g_reg;
        let expect = tj + slope * (g - reg.g_reg);
        assert!((normal_traction_reg(g, &p, &reg) - expect).abs() < 1e-14 * c.t_max);
        // slope cross-check by central differences of the unregularized law
        let fd = central_diff(|x| normal_traction(x, &p).unwrap(), reg.g_reg, 1e-7 * p.r0);
        assert!((slope - fd).abs() < 1e-6 * slope.abs());
    }

    #[test]
    fn regularized_traction_is_c1() {
        // second-order one-sided differences keep the truncation error well
        // below the 1e-8 agreement this asserts
        let p = params();
        let reg = RegularizationConfig::for_params(&p);
        let h = 1e-6 * p.r0;
        let f = |g: f64| normal_traction_reg(g, &p, &reg);
        let x = reg.g_reg;
        let below = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (2.0 * h);
        let above = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
        assert!(
            (below - above).abs() <= 1e-8 * below.abs().max(above.abs()),
            "one-sided slopes {below} vs {above}"
        );
        // total in g: deep overlap stays finite
        assert!(normal_traction_reg(-10.0 * p.r0, &p, &reg).is_finite());
    }

    #[test]
    fn derived_constants_relations() {
        let p = params();
        let c = derived_constants(&p);
        assert!((c.g_eq - p.r0 / 15f64.powf(1.0 / 6.0)).abs() < 1e-15);
        assert!((c.g_max - p.r0 / 5f64.powf(1.0 / 6.0)).abs() < 1e-15);
        assert!(c.g_eq < c.g_max);
        assert!(c.t_max > 0.0 && c.w_adh > 0.0);
        // power-law scaling: r0 doubled at fixed A_H
        let p2 = AdhesionParams::new(p.hamaker, 2.0 * p.r0).unwrap();
        let c2 = derived_constants(&p2);
        assert!((c2.w_adh - c.w_adh / 4.0).abs() < 1e-14 * c.w_adh);
        assert!((c2.t_max - c.t_max / 8.0).abs() < 1e-14 * c.t_max);
    }

    #[test]
    fn work_of_adhesion_quadrature() {
        // Independent oracle: adaptive Simpson of |T_n| over [g_eq, 100 r0]
        // plus the analytic tail of the two power terms.
        let p = params();
        let c = derived_constants(&p);
        let f = |g: f64| normal_traction(g, &p).unwrap().abs();
        let integral = adaptive_simpson(&f, c.g_eq, 100.0 * p.r0, 1e-11 * c.w_adh, 40)
            + tail_beyond(100.0 * p.r0, &p);
        assert!(
            (integral - c.w_adh).abs() < 1e-6 * c.w_adh,
            "quadrature {integral} vs closed form {}",
            c.w_adh
        );
    }

    fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
            let m = 0.5 * (a + b);
            let fm = f(m);
            ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
        }
        fn recurse(
            f: &impl Fn(f64) -> f64,
            a: f64,
            fa: f64,
            b: f64,
            fb: f64,
            whole: f64,
            fm: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (left, flm) = simpson(f, a, fa, m, fm);
            let (right, frm) = simpson(f, m, fm, b, fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                recurse(f, a, fa, m, fm, left, flm, tol / 2.0, depth - 1)
                    + recurse(f, m, fm, b, fb, right, frm, tol / 2.0, depth - 1)
            }
        }
        let (fa, fb) = (f(a), f(b));
        let (whole, fm) = simpson(f, a, fa, b, fb);
        recurse(f, a, fa, b, fb, whole, fm, tol, depth)
    }

    fn tail_beyond(g: f64, p: &AdhesionParams) -> f64 {
        // integral of |T_n| = T0 [ (1/3)(r0/x)^3 - (1/45)(r0/x)^9 ] from g to infinity
        let t0 = p.traction_scale();
        let x2 = (p.r0 / g).powi(2);
        let x8 = x2.powi(4);
        t0 * (p.r0 * x2 / 6.0 - p.r0 * x8 / 360.0)
    }

    #[test]
    fn calibration_round_trip() {
        let p = params();
        let c = derived_constants(&p);
        let q = calibrate_from_physical(c.t_max, c.w_adh).unwrap();
        assert!((q.hamaker - p.hamaker).abs() < 1e-12 * p.hamaker);
        assert!((q.r0 - p.r0).abs() < 1e-12 * p.r0);

        // forward round trip on physical-style inputs
        let (t_max, w_adh) = (0.33e6, 0.027);
        let q = calibrate_from_physical(t_max, w_adh).unwrap();
        let cq = derived_constants(&q);
        assert!((cq.t_max - t_max).abs() < 1e-12 * t_max);
        assert!((cq.w_adh - w_adh).abs() < 1e-12 * w_adh);
        // the eliminated-variable closed form for r0
        let r0 = 16.0 * 5f64.sqrt() * w_adh / (9.0 * 15f64.cbrt() * t_max);
        assert!((q.r0 - r0).abs() < 1e-15 * r0);

        assert!(calibrate_from_physical(-1.0, 1.0).is_err());
        assert!(calibrate_from_physical(1.0, 0.0).is_err());
    }

    #[test]
    fn di_threshold_values() {
        let p = params();
        let c = derived_constants(&p);
        let law = DiLaw {
            tau_di: 0.5 * c.t_max,
            g_cut: 1.1 * p.r0,
            k_di: 200.0 / p.r0,
        };
        // logistic midpoint
        assert!((t_slide_di(law.g_cut, &law, true) - 0.5 * law.tau_di).abs() < 1e-15);
        // saturation in deep overlap
        assert!((t_slide_di(-100.0 * p.r0, &law, true) - law.tau_di).abs() < 1e-12 * law.tau_di);
        // twenty widths out
        let g = law.g_cut + 20.0 / law.k_di;
        let expect = law.tau_di / (1.0 + 20f64.exp());
        assert!((t_slide_di(g, &law, true) - expect).abs() < 1e-12 * expect);
        // unregularized step
        assert_eq!(t_slide_di(law.g_cut, &law, false), law.tau_di);
        assert_eq!(t_slide_di(law.g_cut + 1e-12, &law, false), 0.0);
        // far outside the cutoff the logistic underflows cleanly
        assert_eq!(t_slide_di(1e6 * p.r0, &law, true), 0.0);
    }

    #[test]
    fn di_threshold_monotone_and_bounded() {
        let p = params();
        let law = DiLaw {
            tau_di: 1.0,
            g_cut: 1.1 * p.r0,
            k_di: 200.0 / p.r0,
        };
        // probe the representable transition band; outside it the logistic
        // saturates to exactly 0 or tau_di in f64
        let mut prev = f64::INFINITY;
        for i in 0..2000 {
            let g = law.g_cut + (-0.15 + i as f64 * 0.3 / 2000.0) * p.r0;
            let t = t_slide_di(g, &law, true);
            assert!(t < prev, "not strictly decreasing at g={g}");
            assert!(t > 0.0 && t < law.tau_di);
            prev = t;
        }
    }

    #[test]
    fn di_derivative_matches_fd() {
        let p = params();
        let law = DiLaw {
            tau_di: 2.0,
            g_cut: 1.1 * p.r0,
            k_di: 200.0 / p.r0,
        };
        for g in [0.9 * p.r0, 1.1 * p.r0, 1.3 * p.r0] {
            let fd = central_diff(|x| t_slide_di(x, &law, true), g, 1e-8 * p.r0);
            let an = t_slide_di_derivative(g, &law);
            assert!((an - fd).abs() < 1e-5 * an.abs().max(1e-12));
        }
    }

    #[test]
    fn mu_di_ratio() {
        let p = params();
        let c = derived_constants(&p);
        let mk = |tau: f64| DiLaw {
            tau_di: tau,
            g_cut: c.g_max,
            k_di: 200.0 / p.r0,
        };
        assert!((mu_di(&mk(0.5 * c.t_max), &c) - 0.5).abs() < 1e-15);
        assert!((mu_di(&mk(c.t_max), &c) - 1.0).abs() < 1e-15);
        assert_eq!(mu_di(&mk(0.0), &c), 0.0);
    }

    #[test]
    fn ea_cutoff_interpolation() {
        let p = params();
        let c = derived_constants(&p);
        assert_eq!(g_cut_ea(0.0, &c).unwrap(), c.g_eq);
        assert_eq!(g_cut_ea(1.0, &c).unwrap(), c.g_max);
        let mid = g_cut_ea(0.5, &c).unwrap();
        assert!((mid - 0.5 * (c.g_eq + c.g_max)).abs() < 1e-15);
        assert_eq!(g_cut_ea(1.5, &c), Err(LawError::SCutOutOfRange(1.5)));
    }

    #[test]
    fn ea_threshold_values() {
        let p = params();
        let c = derived_constants(&p);
        let reg = RegularizationConfig::for_params(&p);

        // zero at and beyond the cutoff
        for s in [0.0, 0.5, 1.0] {
            let law = EaLaw { mu_ea: 0.3, s_cut: s };
            let g_cut = g_cut_ea(s, &c).unwrap();
            assert_eq!(t_slide_ea(g_cut, &law, 1.0, &p, &reg).unwrap(), 0.0);
            assert_eq!(t_slide_ea(2.0 * g_cut, &law, 1.0, &p, &reg).unwrap(), 0.0);
        }

        // s_cut = 0: the shift T_n(g_eq) vanishes, so the threshold is mu
        // times the (regularized) normal traction below g_eq
        let law0 = EaLaw { mu_ea: 0.7, s_cut: 0.0 };
        let g = 0.8 * c.g_eq;
        let expect = law0.mu_ea * normal_traction_reg(g, &p, &reg);
        let got = t_slide_ea(g, &law0, 1.0, &p, &reg).unwrap();
        assert!((got - expect).abs() < 1e-12 * c.t_max);

        // s_cut = 1 at g_eq: threshold equals mu * T_max
        let law1 = EaLaw { mu_ea: 0.2, s_cut: 1.0 };
        let got = t_slide_ea(c.g_eq, &law1, 1.0, &p, &reg).unwrap();
        assert!((got - 0.2 * c.t_max).abs() < 1e-12 * c.t_max);

        // surface stretch scales the threshold down
        let half = t_slide_ea(c.g_eq, &law1, 2.0, &p, &reg).unwrap();
        assert!((half - 0.1 * c.t_max).abs() < 1e-12 * c.t_max);
        assert!(t_slide_ea(c.g_eq, &law1, 0.0, &p, &reg).is_err());

        // nonnegative everywhere, including deep overlap
        for i in 0..400 {
            let g = -p.r0 + i as f64 * 0.01 * p.r0;
            for law in [&law0, &law1] {
                assert!(t_slide_ea(g, law, 1.0, &p, &reg).unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn ea_coulomb_limit_zero_in_tension() {
        // s_cut = 0: no sliding resistance wherever the contact is tensile
        let p = params();
        let c = derived_constants(&p);
        let reg = RegularizationConfig::for_params(&p);
        let law = EaLaw { mu_ea: 1.0, s_cut: 0.0 };
        for i in 0..200 {
            let g = c.g_eq + i as f64 * 0.02 * p.r0;
            assert_eq!(t_slide_ea(g, &law, 1.0, &p, &reg).unwrap(), 0.0);
        }
    }

    #[test]
    fn ea_smoothness_dichotomy() {
        let p = params();
        let c = derived_constants(&p);
        let reg = RegularizationConfig::for_params(&p);
        let scale = c.t_max / p.r0;

        // s_cut = 1: C1 at the cutoff (slide-side slope tends to zero)
        let law1 = FrictionLaw::ExtendedAmontons(EaLaw { mu_ea: 0.2, s_cut: 1.0 });
        let eval = sliding_threshold(c.g_max * (1.0 - 1e-12), &law1, 1.0, &p, &reg).unwrap();
        assert!(eval.d_gap.abs() < 1e-8 * scale);

        // s_cut = 0: finite kink
        let law0 = FrictionLaw::ExtendedAmontons(EaLaw { mu_ea: 0.2, s_cut: 0.0 });
        let eval = sliding_threshold(c.g_eq * (1.0 - 1e-12), &law0, 1.0, &p, &reg).unwrap();
        assert!(eval.d_gap.abs() > 0.1 * scale);
    }

    #[test]
    fn ea_smoothing_blend_is_c1() {
        let p = params();
        let mut reg = RegularizationConfig::for_params(&p);
        reg.ea_smoothing = true;
        let law = EaLaw { mu_ea: 0.4, s_cut: 0.0 };
        let c = derived_constants(&p);
        let delta = 0.01 * p.r0;
        let h = 1e-9 * p.r0;
        // continuity of value and slope across both blend junctions
        for gj in [c.g_eq - delta, c.g_eq + delta] {
            let v = |g: f64| t_slide_ea(g, &law, 1.0, &p, &reg).unwrap();
            assert!((v(gj + h) - v(gj - h)).abs() < 1e-6 * c.t_max);
            let sl_lo = (v(gj) - v(gj - h)) / h;
            let sl_hi = (v(gj + h) - v(gj)) / h;
            assert!((sl_lo - sl_hi).abs() < 1e-3 * c.t_max / p.r0);
        }
    }

    #[test]
    fn threshold_dispatch() {
        let p = params();
        let c = derived_constants(&p);
        let reg = RegularizationConfig::for_params(&p);

        let none = sliding_threshold(0.1, &FrictionLaw::Frictionless, 1.0, &p, &reg).unwrap();
        assert_eq!(none.value, 0.0);

        let di = FrictionLaw::DistanceIndependent(DiLaw {
            tau_di: 3.0,
            g_cut: c.g_max,
            k_di: 200.0 / p.r0,
        });
        let eval = sliding_threshold(c.g_max, &di, 1.0, &p, &reg).unwrap();
        assert_eq!(eval.area, AreaConvention::Current);
        assert!((eval.value - 1.5).abs() < 1e-14);

        let ea = FrictionLaw::ExtendedAmontons(EaLaw { mu_ea: 0.2, s_cut: 0.5 });
        let g_cut = g_cut_ea(0.5, &c).unwrap();
        let eval = sliding_threshold(g_cut + 0.01 * p.r0, &ea, 1.0, &p, &reg).unwrap();
        assert_eq!(eval.area, AreaConvention::Reference);
        assert_eq!(eval.value, 0.0);
    }

    #[test]
    fn law_validation() {
        assert!(FrictionLaw::Frictionless.validate().is_ok());
        assert!(FrictionLaw::DistanceIndependent(DiLaw {
            tau_di: -1.0,
            g_cut: 1.0,
            k_di: 1.0
        })
        .validate()
        .is_err());
        assert!(FrictionLaw::DistanceIndependent(DiLaw {
            tau_di: 1.0,
            g_cut: 1.0,
            k_di: 0.0
        })
        .validate()
        .is_err());
        assert!(FrictionLaw::ExtendedAmontons(EaLaw {
            mu_ea: 0.2,
            s_cut: 1.2
        })
        .validate()
        .is_err());
        assert!(AdhesionParams::new(0.0, 1.0).is_err());
        assert!(AdhesionParams::new(1.0, -2.0).is_err());
    }
}
