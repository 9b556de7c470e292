//! Classification of planar p-elasticae from curvature initial data.
//!
//! Works on the transformed curvature w = |k|^{p-2} k, which solves the
//! semilinear equation p w'' + (p-1)|w|^{2/(p-1)} w - lambda |w|^{(2-p)/(p-1)} w = 0
//! with conserved Hamiltonian p^2 w'^2 + F(w). The sign of the energy level
//! D0 relative to 0 and min F dispatches the solution family, and the family
//! parameters are recovered in closed form up to one monotone root-find.

use serde::{Deserialize, Serialize};

use crate::elliptic::{self, cn_eval, dn_eval, sech_eval, IntegralKind, Modulus, PParams};
use crate::roots::{bracket_upward, newton_bisect};
use crate::{domain_err, Error, Result};

/// The six solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Wavelike,
    Borderline,
    #[serde(rename = "flatcore")]
    FlatCore,
    Orbitlike,
    Circular,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Linear => "linear",
            Family::Wavelike => "wavelike",
            Family::Borderline => "borderline",
            Family::FlatCore => "flatcore",
            Family::Orbitlike => "orbitlike",
            Family::Circular => "circular",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Family::Linear),
            "wavelike" => Ok(Family::Wavelike),
            "borderline" => Ok(Family::Borderline),
            "flatcore" => Ok(Family::FlatCore),
            "orbitlike" => Ok(Family::Orbitlike),
            "circular" => Ok(Family::Circular),
            _ => domain_err(format!("unknown family: {s}")),
        }
    }
}

/// The potential F(x) = (p-1)^2 |x|^{2p/(p-1)} - 2 lambda (p-1) |x|^{p/(p-1)}.
#[derive(Debug, Clone, Copy)]
pub struct Potential {
    pub p: f64,
    pub lambda: f64,
}

/// Critical points, global minimum, and zero set of the potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialStructure {
    pub critical_points: Vec<f64>,
    pub global_min: f64,
    pub zero_roots: Vec<f64>,
}

impl Potential {
    pub fn new(p: f64, lambda: f64) -> Result<Self> {
        if p > 1.0 && p.is_finite() && lambda.is_finite() {
            Ok(Potential { p, lambda })
        } else {
            domain_err(format!(
                "potential requires p > 1 and finite lambda, got p={p}"
            ))
        }
    }

    /// F(x) and its derivative; the derivative extends continuously by 0 at
    /// the origin.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let (p, l) = (self.p, self.lambda);
        let ax = x.abs();
        if ax == 0.0 {
            return (0.0, 0.0);
        }
        let f = (p - 1.0) * (p - 1.0) * ax.powf(2.0 * p / (p - 1.0))
            - 2.0 * l * (p - 1.0) * ax.powf(p / (p - 1.0));
        let df = 2.0 * p * (p - 1.0) * x.signum() * ax.powf((p + 1.0) / (p - 1.0))
            - 2.0 * p * l * x.signum() * ax.powf(1.0 / (p - 1.0));
        (f, df)
    }

    /// Global minimum of F: -lambda^2 for lambda > 0, otherwise 0.
    pub fn min_value(&self) -> f64 {
        if self.lambda > 0.0 {
            -self.lambda * self.lambda
        } else {
            0.0
        }
    }

    /// The positive zero c = (2 lambda / (p-1))^{(p-1)/p} for lambda > 0.
    pub fn positive_zero(&self) -> Option<f64> {
        if self.lambda > 0.0 {
            Some((2.0 * self.lambda / (self.p - 1.0)).powf((self.p - 1.0) / self.p))
        } else {
            None
        }
    }

    /// Extrema and zero roots: three critical points and zeros {0, +-c} when
    /// lambda > 0, a single minimum at the origin otherwise.
    pub fn structure(&self) -> PotentialStructure {
        if self.lambda > 0.0 {
            let xm = (self.lambda / (self.p - 1.0)).powf((self.p - 1.0) / self.p);
            let c = self.positive_zero().unwrap();
            PotentialStructure {
                critical_points: vec![-xm, 0.0, xm],
                global_min: self.min_value(),
                zero_roots: vec![-c, 0.0, c],
            }
        } else {
            PotentialStructure {
                critical_points: vec![0.0],
                global_min: 0.0,
                zero_roots: vec![0.0],
            }
        }
    }

    /// The four ordered solutions of F(x) = d for min F < d < 0:
    /// -xi < -zeta < zeta < xi.
    pub fn level_roots(&self, d: f64) -> Result<[f64; 4]> {
        if self.lambda <= 0.0 {
            return domain_err("level_roots requires lambda > 0".to_string());
        }
        let min_f = self.min_value();
        if !(d > min_f && d < 0.0) {
            return domain_err(format!(
                "level_roots requires min F = {min_f} < d < 0, got {d}"
            ));
        }
        let xm = (self.lambda / (self.p - 1.0)).powf((self.p - 1.0) / self.p);
        let c = self.positive_zero().unwrap();
        // F is increasing on [xm, c] from min F to 0
        let xi = newton_bisect(
            |x| {
                let (f, df) = self.eval(x);
                (f - d, df)
            },
            xm,
            c,
            0.0,
            0.0,
        )?;
        let zeta = (2.0 * self.lambda / (self.p - 1.0) - xi.powf(self.p / (self.p - 1.0)))
            .max(0.0)
            .powf((self.p - 1.0) / self.p);
        Ok([-xi, -zeta, zeta, xi])
    }
}

/// Initial data for the curvature Cauchy problem: w(0) and w'(0) for
/// w = |k|^{p-2} k.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InitialData {
    pub w0: f64,
    pub wdot0: f64,
}

impl InitialData {
    pub fn new(w0: f64, wdot0: f64) -> Self {
        InitialData { w0, wdot0 }
    }

    /// Hamiltonian level D0 = p^2 wdot0^2 + F(w0).
    pub fn d0(&self, pot: &Potential) -> f64 {
        let (f, _) = pot.eval(self.w0);
        pot.p * pot.p * self.wdot0 * self.wdot0 + f
    }
}

/// Resolution below which two Hamiltonian levels are considered equal when
/// dispatching: relative both to the potential well depth and to the data's
/// own energy scale, so classification commutes with the scaling
/// k -> Lambda k(Lambda s), lambda -> Lambda^p lambda.
pub fn level_tolerance(pot: &Potential, data: &InitialData) -> f64 {
    let (f, _) = pot.eval(data.w0);
    let scale = pot.p * pot.p * data.wdot0 * data.wdot0 + f.abs() + pot.min_value().abs();
    1e-9 * scale
}

/// Loop signs and flat lengths of a flat-core solution. `lengths[j]` is the
/// straight segment preceding loop j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatCoreSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub signs: Vec<i8>,
    pub lengths: Vec<f64>,
}

impl FlatCoreSpec {
    pub fn new(signs: Vec<i8>, lengths: Vec<f64>) -> Result<Self> {
        let spec = FlatCoreSpec {
            n: signs.len(),
            signs,
            lengths,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.signs.len() != self.n || self.lengths.len() != self.n {
            return domain_err(format!(
                "flat-core spec needs N >= 1 with N signs and N lengths, got N={} ({} signs, {} lengths)",
                self.n,
                self.signs.len(),
                self.lengths.len()
            ));
        }
        if self.signs.iter().any(|&s| s != 1 && s != -1) {
            return domain_err("flat-core signs must be +1 or -1".to_string());
        }
        if self.lengths.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return domain_err("flat-core lengths must be finite and >= 0".to_string());
        }
        Ok(())
    }

    /// Loop centers given the half loop width t_pl and the first center s1;
    /// consecutive centers are separated by 2 t_pl plus the next flat length.
    pub fn centers(&self, t_pl: f64, s1: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        let mut s = s1;
        for j in 0..self.n {
            if j > 0 {
                s += 2.0 * t_pl + self.lengths[j];
            }
            out.push(s);
        }
        out
    }

    /// Total arclength of the canonical assembly: 2 N t_pl + sum of lengths.
    pub fn total_length(&self, t_pl: f64) -> f64 {
        2.0 * self.n as f64 * t_pl + self.lengths.iter().sum::<f64>()
    }
}

/// A classified p-elastica with recovered parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SolutionClass {
    Linear,
    /// k(s) = a cn_p(alpha s + beta, q) with a^2 = 4 alpha^2 q^2
    Wavelike {
        a: f64,
        alpha: f64,
        beta: f64,
        q: f64,
    },
    /// k(s) = sign 2 A_{p,lambda} sech_p(a_pl s + beta), p <= 2
    Borderline {
        sign: i8,
        beta: f64,
        a_pl: f64,
    },
    /// concatenated sech_p loops, p > 2; s1 anchors the first loop center
    #[serde(rename = "flatcore")]
    FlatCore {
        spec: FlatCoreSpec,
        a_pl: f64,
        t_pl: f64,
        s1: f64,
    },
    /// k(s) = a dn_p(alpha s + beta, q) with |a| = 2 alpha
    Orbitlike {
        a: f64,
        alpha: f64,
        beta: f64,
        q: f64,
    },
    Circular {
        k0: f64,
    },
}

impl SolutionClass {
    pub fn family(&self) -> Family {
        match self {
            SolutionClass::Linear => Family::Linear,
            SolutionClass::Wavelike { .. } => Family::Wavelike,
            SolutionClass::Borderline { .. } => Family::Borderline,
            SolutionClass::FlatCore { .. } => Family::FlatCore,
            SolutionClass::Orbitlike { .. } => Family::Orbitlike,
            SolutionClass::Circular { .. } => Family::Circular,
        }
    }

    /// Multiplier lambda consistent with the recovered parameters.
    pub fn lambda(&self, p: f64) -> f64 {
        match self {
            SolutionClass::Linear => 0.0,
            SolutionClass::Wavelike { a, alpha, q, .. } => {
                2.0 * (p - 1.0) * a.abs().powf(p - 2.0) * alpha * alpha * (2.0 * q * q - 1.0)
            }
            SolutionClass::Orbitlike { a, alpha, q, .. } => {
                2.0 * (p - 1.0) * a.abs().powf(p - 2.0) * alpha * alpha * (2.0 - q * q)
            }
            SolutionClass::Borderline { a_pl, .. } | SolutionClass::FlatCore { a_pl, .. } => {
                // a_pl = (2 lambda / (p-1))^{1/p} / 2
                0.5 * (p - 1.0) * (2.0 * a_pl).powf(p)
            }
            SolutionClass::Circular { k0 } => (p - 1.0) * k0.abs().powf(p),
        }
    }
}

/// Resolution of the p > 2, D0 = 0, all-zero-data ambiguity.
#[derive(Debug, Clone)]
pub enum FlatCoreHint {
    /// the trivial solution k = 0
    Linear,
    /// a flat-core layout (also supplies signs/lengths when data is nonzero)
    Spec(FlatCoreSpec),
}

/// A_{p,lambda} = (2 lambda/(p-1))^{1/p} / 2, the sech amplitude scale.
pub fn sech_amplitude(p: f64, lambda: f64) -> f64 {
    0.5 * (2.0 * lambda / (p - 1.0)).powf(1.0 / p)
}

/// Recover beta >= 0 with sech_p(beta)^{p-1} (2 a)^{p-1} = |w_target|,
/// i.e. the sech amplitude position matching |k| = |w|^{1/(p-1)}.
fn sech_offset(p: f64, two_a: f64, w_abs: f64) -> Result<f64> {
    let y = (w_abs.powf(1.0 / (p - 1.0)) / two_a).min(1.0);
    let am = y.powf(0.5 * p).min(1.0).acos();
    elliptic::integral(IntegralKind::F1, p, am, Modulus::new(1.0)?)
}

/// Full case dispatch of the curvature initial value problem.
///
/// `flatcore_hint` is consulted only when p > 2 and D0 = 0: zero data cannot
/// distinguish the trivial solution from a flat segment of a flat-core
/// solution, and nonzero data fixes only the loop containing s = 0.
pub fn classify(
    p: f64,
    lambda: f64,
    data: InitialData,
    flatcore_hint: Option<&FlatCoreHint>,
) -> Result<SolutionClass> {
    let pot = Potential::new(p, lambda)?;
    let d0 = data.d0(&pot);
    let min_f = pot.min_value();
    let eps = level_tolerance(&pot, &data);

    let class = if (data.w0 == 0.0 && data.wdot0 == 0.0) || d0.abs() <= eps {
        classify_zero_level(p, lambda, data, flatcore_hint)?
    } else if d0 > 0.0 {
        recover_wavelike(&pot, d0, data)?
    } else if (d0 - min_f).abs() <= eps {
        // circular: |k0| = (lambda/(p-1))^{1/p}
        let k0 = (lambda / (p - 1.0)).powf(1.0 / p);
        SolutionClass::Circular {
            k0: if data.w0 < 0.0 { -k0 } else { k0 },
        }
    } else if d0 > min_f && d0 < 0.0 {
        recover_orbitlike(&pot, d0, data)?
    } else {
        return domain_err(format!(
            "initial data yields D0 = {d0} below min F = {min_f}; data inconsistent"
        ));
    };

    // the recovered class must reproduce the initial data
    if !matches!(class, SolutionClass::Linear) {
        let (_, w, wdot) = curvature_of(p, &class, 0.0)?;
        let ok = (w - data.w0).abs() <= 1e-8 * (1.0 + data.w0.abs())
            && (wdot - data.wdot0).abs() <= 1e-8 * (1.0 + data.wdot0.abs());
        if !ok {
            return Err(Error::Tolerance(format!(
                "recovered class reproduces (w0, wdot0) = ({w}, {wdot}), expected ({}, {})",
                data.w0, data.wdot0
            )));
        }
    }
    Ok(class)
}

fn classify_zero_level(
    p: f64,
    lambda: f64,
    data: InitialData,
    hint: Option<&FlatCoreHint>,
) -> Result<SolutionClass> {
    let zero_data = data.w0 == 0.0 && data.wdot0 == 0.0;
    if lambda <= 0.0 {
        // F >= 0 forces w = 0
        return if zero_data {
            Ok(SolutionClass::Linear)
        } else {
            domain_err(format!(
                "D0 = 0 with nonzero data requires lambda > 0, got lambda = {lambda}"
            ))
        };
    }
    let a_pl = sech_amplitude(p, lambda);
    if p <= 2.0 {
        if zero_data {
            return Ok(SolutionClass::Linear);
        }
        let sign: i8 = if data.w0 != 0.0 {
            if data.w0 > 0.0 {
                1
            } else {
                -1
            }
        } else if data.wdot0 > 0.0 {
            1
        } else {
            -1
        };
        let beta_mag = sech_offset(p, 2.0 * a_pl, data.w0.abs())?;
        // on beta > 0 the transform w decreases, so w'(0) has sign -sign
        let beta = if data.wdot0 * sign as f64 > 0.0 {
            -beta_mag
        } else {
            beta_mag
        };
        return Ok(SolutionClass::Borderline { sign, beta, a_pl });
    }

    // p > 2: flat-core territory
    let t_pl = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)? / a_pl;
    if zero_data {
        return match hint {
            None => Err(Error::Ambiguity(
                "p > 2 with D0 = 0 and zero data: provide a flat-core spec or choose linear"
                    .to_string(),
            )),
            Some(FlatCoreHint::Linear) => Ok(SolutionClass::Linear),
            Some(FlatCoreHint::Spec(spec)) => {
                spec.validate()?;
                // canonical layout: leading flat, first loop centered after it
                let s1 = spec.lengths[0] + t_pl;
                Ok(SolutionClass::FlatCore {
                    spec: spec.clone(),
                    a_pl,
                    t_pl,
                    s1,
                })
            }
        };
    }
    // nonzero data sits inside a loop; w0 = 0 with wdot0 != 0 cannot occur at
    // this level since D0 = p^2 wdot0^2 would then be positive
    if data.w0 == 0.0 {
        return domain_err("flat-core data with w0 = 0 but wdot0 != 0 is inconsistent".to_string());
    }
    let sigma1: i8 = if data.w0 > 0.0 { 1 } else { -1 };
    let t_hat = sech_offset(p, 2.0 * a_pl, data.w0.abs())?;
    let t = -(sigma1 as f64) * data.wdot0.signum() * t_hat;
    let s1 = -t / a_pl;
    let spec = match hint {
        Some(FlatCoreHint::Spec(s)) => {
            s.validate()?;
            if s.signs[0] != sigma1 {
                return domain_err(format!(
                    "flat-core hint sign {} contradicts sign of w0 ({})",
                    s.signs[0], sigma1
                ));
            }
            s.clone()
        }
        Some(FlatCoreHint::Linear) => {
            return domain_err("linear hint contradicts nonzero initial data".to_string())
        }
        None => FlatCoreSpec::new(vec![sigma1], vec![0.0])?,
    };
    Ok(SolutionClass::FlatCore {
        spec,
        a_pl,
        t_pl,
        s1,
    })
}

fn recover_wavelike(pot: &Potential, d0: f64, data: InitialData) -> Result<SolutionClass> {
    let (p, lambda) = (pot.p, pot.lambda);
    // mu: unique positive root of F = D0 beyond the last zero of F, where F
    // increases from 0 to infinity
    let lo = pot.positive_zero().unwrap_or(0.0);
    let (_, bhi) = bracket_upward(|x| pot.eval(x).0, lo.max(1.0), d0)?;
    let mu = newton_bisect(
        |x| {
            let (f, df) = pot.eval(x);
            (f - d0, df)
        },
        lo,
        bhi,
        0.0,
        0.0,
    )?;
    let a = mu.powf(1.0 / (p - 1.0));
    let qsq = 1.0 / (2.0 - 2.0 * lambda / ((p - 1.0) * a.powf(p)));
    if !(qsq > 0.0 && qsq < 1.0) {
        return Err(Error::Tolerance(format!(
            "wavelike modulus recovery out of range: q^2 = {qsq}"
        )));
    }
    let q = qsq.sqrt();
    let alpha = a / (2.0 * q);
    // beta from w(0) = mu * wcn(beta) with wcn = sign(cos am)|cos am|^{2-2/p}
    let y = (data.w0 / mu).clamp(-1.0, 1.0);
    let cos_am = y.signum() * y.abs().powf(p / (2.0 * (p - 1.0)));
    let am = cos_am.clamp(-1.0, 1.0).acos();
    let beta_mag = elliptic::integral(IntegralKind::F1, p, am, Modulus::new(q)?)?;
    // on (0, 2K) the transform decreases, so w'(0) < 0 at beta_mag
    let beta = if data.wdot0 > 0.0 {
        -beta_mag
    } else {
        beta_mag
    };
    Ok(SolutionClass::Wavelike { a, alpha, beta, q })
}

fn recover_orbitlike(pot: &Potential, d0: f64, data: InitialData) -> Result<SolutionClass> {
    let (p, lambda) = (pot.p, pot.lambda);
    let roots = pot.level_roots(d0)?;
    let xi = roots[3];
    let a_mag = xi.powf(1.0 / (p - 1.0));
    let a = if data.w0 < 0.0 { -a_mag } else { a_mag };
    let alpha = a_mag / 2.0;
    let qsq = 2.0 - 2.0 * lambda / ((p - 1.0) * xi.powf(p / (p - 1.0)));
    if !(qsq > 0.0 && qsq < 1.0) {
        return Err(Error::Tolerance(format!(
            "orbitlike modulus recovery out of range: q^2 = {qsq}"
        )));
    }
    let q = qsq.sqrt();
    // dn^{p-1}(beta) = |w0| / xi
    let y = (data.w0.abs() / xi).clamp(0.0, 1.0);
    let sin_sq = ((1.0 - y.powf(p / (p - 1.0))) / qsq).clamp(0.0, 1.0);
    let am = sin_sq.sqrt().asin();
    let beta_mag = elliptic::integral(IntegralKind::F2, p, am, Modulus::new(q)?)?;
    // w = sign(w0) xi dn^{p-1}; dn^{p-1} decreases on (0, K2)
    let beta = if data.wdot0 * a.signum() > 0.0 {
        -beta_mag
    } else {
        beta_mag
    };
    Ok(SolutionClass::Orbitlike { a, alpha, beta, q })
}

/// Signed curvature k(s) together with w = |k|^{p-2} k and w'(s).
pub fn curvature_of(p: f64, class: &SolutionClass, s: f64) -> Result<(f64, f64, f64)> {
    match class {
        SolutionClass::Linear => Ok((0.0, 0.0, 0.0)),
        SolutionClass::Circular { k0 } => Ok((*k0, k0.abs().powf(p - 2.0) * k0, 0.0)),
        SolutionClass::Wavelike { a, alpha, beta, q } => {
            let e = cn_eval(p, alpha * s + beta, Modulus::new(*q)?)?;
            let wfac = a.abs().powf(p - 2.0) * a;
            Ok((a * e.cn, wfac * e.w, wfac * alpha * e.dw))
        }
        SolutionClass::Orbitlike { a, alpha, beta, q } => {
            let e = dn_eval(p, alpha * s + beta, Modulus::new(*q)?)?;
            let wfac = a.abs().powf(p - 2.0) * a;
            Ok((a * e.dn, wfac * e.w, wfac * alpha * e.dw))
        }
        SolutionClass::Borderline { sign, beta, a_pl } => {
            let e = sech_eval(p, a_pl * s + beta)?;
            let sg = *sign as f64;
            let amp = 2.0 * a_pl;
            Ok((
                sg * amp * e.sech,
                sg * amp.powf(p - 1.0) * e.w,
                sg * amp.powf(p - 1.0) * a_pl * e.dw,
            ))
        }
        SolutionClass::FlatCore {
            spec,
            a_pl,
            t_pl,
            s1,
        } => {
            let centers = spec.centers(*t_pl, *s1);
            let amp = 2.0 * a_pl;
            for (j, &c) in centers.iter().enumerate() {
                if (s - c).abs() < *t_pl {
                    let e = sech_eval(p, a_pl * (s - c))?;
                    let sg = spec.signs[j] as f64;
                    return Ok((
                        sg * amp * e.sech,
                        sg * amp.powf(p - 1.0) * e.w,
                        sg * amp.powf(p - 1.0) * a_pl * e.dw,
                    ));
                }
            }
            Ok((0.0, 0.0, 0.0))
        }
    }
}

/// Optimal Sobolev regularity of an arclength-parameterized p-elastica.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub family: Family,
    pub analytic: bool,
    /// highest differentiability order k with gamma in W^{k,r}
    pub sobolev_order: Option<u32>,
    /// supremum of admissible integrability exponents; None encodes infinity
    pub sobolev_exponent: Option<f64>,
    /// whether gamma lies in W^{order, exponent} itself (true for the
    /// integer subcases where the exponent is infinite)
    pub exponent_attained: bool,
    /// first Sobolev space the curve fails to belong to, when known
    pub fails: Option<(u32, f64)>,
    pub m_p: u32,
    pub r_p: Option<f64>,
    #[serde(rename = "M_p")]
    pub big_m_p: Option<u32>,
    #[serde(rename = "R_p")]
    pub big_r_p: Option<f64>,
}

fn analytic_report(family: Family, params: &PParams) -> RegularityReport {
    RegularityReport {
        family,
        analytic: true,
        sobolev_order: None,
        sobolev_exponent: None,
        exponent_attained: true,
        fails: None,
        m_p: params.m_p,
        r_p: params.r_p,
        big_m_p: params.big_m_p,
        big_r_p: params.big_r_p,
    }
}

/// Regularity thresholds per family. `interior_zero` states whether the
/// curvature vanishes in the interior (wavelike) or on an interval
/// (flat-core); it sharpens the integer subcases.
pub fn regularity(p: f64, family: Family, interior_zero: bool) -> Result<RegularityReport> {
    let params = PParams::new(p)?;
    match family {
        Family::Linear | Family::Circular | Family::Orbitlike => {
            Ok(analytic_report(family, &params))
        }
        Family::Borderline => {
            if p > 2.0 {
                domain_err(
                    "borderline solutions require p <= 2 (flat-core covers p > 2)".to_string(),
                )
            } else {
                Ok(analytic_report(family, &params))
            }
        }
        Family::Wavelike => {
            let u = 1.0 / (p - 1.0);
            let m = params.m_p;
            if params.analytic_exponent() {
                Ok(analytic_report(family, &params))
            } else if params.r_p.is_none() {
                // 1/(p-1) an even integer
                let _ = u;
                Ok(RegularityReport {
                    family,
                    analytic: false,
                    sobolev_order: Some(m + 2),
                    sobolev_exponent: None,
                    exponent_attained: true,
                    fails: interior_zero.then_some((m + 3, 1.0)),
                    m_p: params.m_p,
                    r_p: params.r_p,
                    big_m_p: params.big_m_p,
                    big_r_p: params.big_r_p,
                })
            } else {
                let r = params.r_p.unwrap();
                Ok(RegularityReport {
                    family,
                    analytic: false,
                    sobolev_order: Some(m + 2),
                    sobolev_exponent: Some(r),
                    exponent_attained: false,
                    fails: Some((m + 2, r)),
                    m_p: params.m_p,
                    r_p: params.r_p,
                    big_m_p: params.big_m_p,
                    big_r_p: params.big_r_p,
                })
            }
        }
        Family::FlatCore => {
            if p <= 2.0 {
                return domain_err("flat-core solutions require p > 2".to_string());
            }
            let m = params.big_m_p.unwrap();
            match params.big_r_p {
                None => Ok(RegularityReport {
                    family,
                    analytic: false,
                    sobolev_order: Some(m + 2),
                    sobolev_exponent: None,
                    exponent_attained: true,
                    fails: interior_zero.then_some((m + 3, 1.0)),
                    m_p: params.m_p,
                    r_p: params.r_p,
                    big_m_p: params.big_m_p,
                    big_r_p: params.big_r_p,
                }),
                Some(r) => Ok(RegularityReport {
                    family,
                    analytic: false,
                    sobolev_order: Some(m + 2),
                    sobolev_exponent: Some(r),
                    exponent_attained: false,
                    fails: Some((m + 2, r)),
                    m_p: params.m_p,
                    r_p: params.r_p,
                    big_m_p: params.big_m_p,
                    big_r_p: params.big_r_p,
                }),
            }
        }
    }
}
