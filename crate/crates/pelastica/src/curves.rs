//! Closed-form arclength tracers for the p-elastica families.
//!
//! Every family has an explicit parameterization in terms of the p-elliptic
//! integrals: positions, tangential angle and signed curvature are evaluated
//! pointwise (no ODE stepping). Flat-core curves are assembled from sech_p
//! loops joined by straight segments, chasing their profile from right to
//! left; the tangential angle is reported as a continuous lift so turning
//! numbers are well defined.

use serde::Serialize;

use crate::classify::{Family, FlatCoreSpec, SolutionClass};
use crate::elliptic::{self, AmplitudeKind, IntegralKind, Modulus};
use crate::{domain_err, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// One point of an arclength-parameterized trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub k: f64,
}

/// Closure diagnostics between the first and last sample of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedCurveReport {
    pub position_gap: f64,
    pub tangent_gap: f64,
    pub turning_number: i64,
}

/// Analytic generator behind a trace; `Sampled` marks traces without one
/// (concatenations, data re-read from CSV).
#[derive(Debug, Clone)]
pub enum TraceModel {
    Canonical {
        family: Family,
        p: f64,
        q: f64,
    },
    Class {
        p: f64,
        class: SolutionClass,
    },
    FlatCore {
        p: f64,
        spec: FlatCoreSpec,
        a_pl: f64,
        t_pl: f64,
        s1: f64,
    },
    LoopArc {
        p: f64,
        sign: i8,
    },
    /// unit circle with curvature 1 + amp sin(2s); a deliberately
    /// non-critical curve used as a negative control
    PerturbedCircle {
        amp: f64,
    },
    Sampled,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub model: TraceModel,
    pub samples: Vec<CurveSample>,
}

impl Trace {
    pub fn eval(&self, s: f64) -> Result<CurveSample> {
        self.model.point(s)
    }

    pub fn arclength_span(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.s - a.s,
            _ => 0.0,
        }
    }
}

fn m(q: f64) -> Result<Modulus> {
    Modulus::new(q)
}

fn canonical_point(family: Family, p: f64, q: f64, s: f64) -> Result<CurveSample> {
    match family {
        Family::Linear => Ok(CurveSample {
            s,
            x: s,
            y: 0.0,
            theta: 0.0,
            k: 0.0,
        }),
        Family::Circular => Ok(CurveSample {
            s,
            x: s.cos(),
            y: s.sin(),
            theta: s + FRAC_PI_2,
            k: 1.0,
        }),
        Family::Wavelike => {
            let e = elliptic::cn_eval(p, s, m(q)?)?;
            let x = 2.0 * elliptic::integral(IntegralKind::E1, p, e.am, m(q)?)? - s;
            let y = -q * p / (p - 1.0) * e.w;
            Ok(CurveSample {
                s,
                x,
                y,
                theta: 2.0 * (q * e.sn).asin(),
                k: 2.0 * q * e.cn,
            })
        }
        Family::Orbitlike => {
            let e = elliptic::dn_eval(p, s, m(q)?)?;
            let conj = p / (p - 1.0);
            let x = (2.0 * elliptic::integral(IntegralKind::E2, conj, e.am, m(q)?)?
                + (q * q - 2.0) * s)
                / (q * q);
            let y = -conj / (q * q) * e.w;
            Ok(CurveSample {
                s,
                x,
                y,
                theta: 2.0 * e.am,
                k: 2.0 * e.dn,
            })
        }
        Family::Borderline => {
            let a = elliptic::amplitude(AmplitudeKind::First, p, s, m(1.0)?)?;
            let e = elliptic::sech_eval(p, s)?;
            let x = 2.0 * elliptic::tanh(p, s)? - s;
            let y = -p / (p - 1.0) * e.w;
            Ok(CurveSample {
                s,
                x,
                y,
                theta: 2.0 * a,
                k: 2.0 * e.sech,
            })
        }
        Family::FlatCore => domain_err("flat-core traces need a FlatCoreSpec".to_string()),
    }
}

/// Flat-core point with a globally continuous angle lift: theta = pi on the
/// leading flat, each loop adds 2 pi sigma_j.
fn flatcore_point(
    p: f64,
    spec: &FlatCoreSpec,
    a_pl: f64,
    t_pl: f64,
    s1: f64,
    s: f64,
) -> Result<CurveSample> {
    let k_p1 = t_pl * a_pl;
    let tk = elliptic::complete(IntegralKind::E1, p, Modulus::new(1.0)?)?; // tanh_p(K_p(1))
    let centers = spec.centers(t_pl, s1);
    let mut theta_base = PI;
    // x at the entry of the first loop, pretending the leading flat starts
    // with x = -s
    let mut entry_x = -(centers[0] - t_pl);
    for (j, &c) in centers.iter().enumerate() {
        let sg = spec.signs[j] as f64;
        if s < c - t_pl {
            // flat segment before loop j, tangent (-1, 0)
            return Ok(CurveSample {
                s,
                x: entry_x + (c - t_pl - s),
                y: 0.0,
                theta: theta_base,
                k: 0.0,
            });
        }
        if s <= c + t_pl {
            let u = a_pl * (s - c);
            let am = elliptic::amplitude(
                AmplitudeKind::First,
                p,
                u.clamp(-k_p1, k_p1),
                Modulus::new(1.0)?,
            )?;
            let cos_am = if am.abs() >= FRAC_PI_2 {
                0.0
            } else {
                am.cos().max(0.0)
            };
            let tanh_u = elliptic::integral(IntegralKind::E1, p, am, Modulus::new(1.0)?)?;
            let x = entry_x + (2.0 * tanh_u - u + 2.0 * tk - k_p1) / a_pl;
            let y = -sg * p / (p - 1.0) * cos_am.powf(2.0 - 2.0 / p) / a_pl;
            return Ok(CurveSample {
                s,
                x,
                y,
                theta: theta_base + sg * (2.0 * am + PI),
                k: sg * 2.0 * a_pl * cos_am.powf(2.0 / p),
            });
        }
        theta_base += sg * 2.0 * PI;
        entry_x += (4.0 * tk - 2.0 * k_p1) / a_pl; // loop displacement
        if j + 1 < spec.n {
            entry_x -= spec.lengths[j + 1];
        }
    }
    // trailing flat
    let last = centers[spec.n - 1] + t_pl;
    Ok(CurveSample {
        s,
        x: entry_x - (s - last) * 0.0 - (s - last), // leftward
        y: 0.0,
        theta: theta_base,
        k: 0.0,
    })
}

impl TraceModel {
    pub fn point(&self, s: f64) -> Result<CurveSample> {
        match self {
            TraceModel::Canonical { family, p, q } => canonical_point(*family, *p, *q, s),
            TraceModel::Class { p, class } => class_point(*p, class, s),
            TraceModel::FlatCore {
                p,
                spec,
                a_pl,
                t_pl,
                s1,
            } => flatcore_point(*p, spec, *a_pl, *t_pl, *s1, s),
            TraceModel::LoopArc { p, sign } => {
                let base = canonical_point(Family::Borderline, *p, 1.0, s)?;
                let sg = *sign as f64;
                Ok(CurveSample {
                    s,
                    x: base.x,
                    y: sg * base.y,
                    theta: sg * base.theta,
                    k: sg * base.k,
                })
            }
            TraceModel::PerturbedCircle { amp } => {
                let theta = s + 0.5 * amp * (1.0 - (2.0 * s).cos()) + FRAC_PI_2;
                let (x, y) = perturbed_circle_position(*amp, s)?;
                Ok(CurveSample {
                    s,
                    x,
                    y,
                    theta,
                    k: 1.0 + amp * (2.0 * s).sin(),
                })
            }
            TraceModel::Sampled => {
                domain_err("trace has no analytic generator (sampled data)".to_string())
            }
        }
    }

    /// Tangential angle and curvature only (positions not required).
    pub fn theta_k(&self, s: f64) -> Result<(f64, f64)> {
        match self {
            TraceModel::PerturbedCircle { amp } => Ok((
                s + 0.5 * amp * (1.0 - (2.0 * s).cos()) + FRAC_PI_2,
                1.0 + amp * (2.0 * s).sin(),
            )),
            _ => self.point(s).map(|c| (c.theta, c.k)),
        }
    }
}

fn perturbed_circle_position(amp: f64, s: f64) -> Result<(f64, f64)> {
    let theta = |t: f64| t + 0.5 * amp * (1.0 - (2.0 * t).cos()) + FRAC_PI_2;
    let x = crate::verify::oracle::gauss_kronrod(|t| theta(t).cos(), 0.0, s, 1e-11)?;
    let y = crate::verify::oracle::gauss_kronrod(|t| theta(t).sin(), 0.0, s, 1e-11)?;
    Ok((1.0 + x, y))
}

/// Similarity image of the canonical profile matching a classified solution.
fn class_point(p: f64, class: &SolutionClass, s: f64) -> Result<CurveSample> {
    match class {
        SolutionClass::Linear => canonical_point(Family::Linear, p, 0.0, s),
        SolutionClass::Circular { k0 } => Ok(CurveSample {
            s,
            x: (k0 * s).cos() / k0,
            y: (k0 * s).sin() / k0,
            theta: k0 * s + FRAC_PI_2.copysign(*k0),
            k: *k0,
        }),
        SolutionClass::Wavelike { a, alpha, beta, q } => {
            let base = canonical_point(Family::Wavelike, p, *q, alpha * s + beta)?;
            let sg = a.signum();
            Ok(CurveSample {
                s,
                x: base.x / alpha,
                y: sg * base.y / alpha,
                theta: sg * base.theta,
                k: sg * alpha * base.k,
            })
        }
        SolutionClass::Orbitlike { a, alpha, beta, q } => {
            let base = canonical_point(Family::Orbitlike, p, *q, alpha * s + beta)?;
            let sg = a.signum();
            Ok(CurveSample {
                s,
                x: base.x / alpha,
                y: sg * base.y / alpha,
                theta: sg * base.theta,
                k: sg * alpha * base.k,
            })
        }
        SolutionClass::Borderline { sign, beta, a_pl } => {
            let base = canonical_point(Family::Borderline, p, 1.0, a_pl * s + beta)?;
            let sg = *sign as f64;
            Ok(CurveSample {
                s,
                x: base.x / a_pl,
                y: sg * base.y / a_pl,
                theta: sg * base.theta,
                k: sg * a_pl * base.k,
            })
        }
        SolutionClass::FlatCore {
            spec,
            a_pl,
            t_pl,
            s1,
        } => flatcore_point(p, spec, *a_pl, *t_pl, *s1, s),
    }
}

fn sample_model(model: TraceModel, range: (f64, f64), n: usize) -> Result<Trace> {
    if n < 2 {
        return domain_err(format!("need at least 2 samples, got {n}"));
    }
    if !(range.1 > range.0) {
        return domain_err(format!("empty arclength range {range:?}"));
    }
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let s = range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64;
        samples.push(model.point(s)?);
    }
    Ok(Trace { model, samples })
}

/// Canonical profile of a family over an arclength range; wavelike and
/// orbitlike require a modulus q in (0, 1).
pub fn trace_canonical(
    family: Family,
    p: f64,
    q: Option<f64>,
    range: (f64, f64),
    n: usize,
) -> Result<Trace> {
    let q = match family {
        Family::Wavelike | Family::Orbitlike => {
            let q = q.ok_or_else(|| {
                crate::Error::Domain(format!("family {family} requires a modulus q"))
            })?;
            if !(q > 0.0 && q < 1.0) {
                return domain_err(format!("family {family} requires q in (0, 1), got {q}"));
            }
            q
        }
        Family::Borderline => {
            if p > 2.0 {
                let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)?;
                if range.0 < -k || range.1 > k {
                    return domain_err(format!(
                        "borderline profile at p = {p} > 2 lives on [-K_p(1), K_p(1)] = [-{k}, {k}]"
                    ));
                }
            }
            1.0
        }
        Family::FlatCore => {
            return domain_err("use trace_flatcore for flat-core curves".to_string())
        }
        _ => 0.0,
    };
    sample_model(TraceModel::Canonical { family, p, q }, range, n)
}

/// Trace of a classified solution (dilation/reflection of a canonical
/// profile, flat-core assembly for the degenerate family).
pub fn trace_class(p: f64, class: &SolutionClass, range: (f64, f64), n: usize) -> Result<Trace> {
    sample_model(
        TraceModel::Class {
            p,
            class: class.clone(),
        },
        range,
        n,
    )
}

/// One sech_p loop: the profile on [-K_p(1), K_p(1)] whose endpoint tangents
/// both point leftward. For p <= 2 a finite window must be supplied.
pub fn loop_arc(p: f64, sign: i8, window: Option<(f64, f64)>, n: usize) -> Result<Trace> {
    if sign != 1 && sign != -1 {
        return domain_err(format!("loop sign must be +1 or -1, got {sign}"));
    }
    let range = match window {
        Some(w) => w,
        None => {
            if p <= 2.0 {
                return domain_err(
                    "loop arcs with p <= 2 are unbounded: pass an explicit window".to_string(),
                );
            }
            let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)?;
            (-k, k)
        }
    };
    if p > 2.0 {
        let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)?;
        if range.0 < -k - 1e-12 || range.1 > k + 1e-12 {
            return domain_err(format!(
                "loop arc window exceeds [-K_p(1), K_p(1)] = [-{k}, {k}]"
            ));
        }
    }
    sample_model(TraceModel::LoopArc { p, sign }, range, n)
}

/// C0 concatenation: each successor is translated so endpoints meet and the
/// arclength is re-based to start at zero. Tangent continuity is not
/// enforced.
pub fn concat(pieces: &[Trace]) -> Result<Trace> {
    let mut samples: Vec<CurveSample> = Vec::new();
    for piece in pieces {
        let Some(first) = piece.samples.first() else {
            continue;
        };
        if samples.is_empty() {
            let s0 = first.s;
            samples.extend(
                piece
                    .samples
                    .iter()
                    .map(|c| CurveSample { s: c.s - s0, ..*c }),
            );
            continue;
        }
        let last = *samples.last().unwrap();
        let (dx, dy) = (last.x - first.x, last.y - first.y);
        let ds = last.s - first.s;
        for c in &piece.samples {
            let shifted = CurveSample {
                s: c.s + ds,
                x: c.x + dx,
                y: c.y + dy,
                theta: c.theta,
                k: c.k,
            };
            // junction point coincides with the predecessor's endpoint
            if shifted.s > last.s {
                samples.push(shifted);
            }
        }
    }
    if samples.is_empty() {
        return domain_err("concat of empty traces".to_string());
    }
    Ok(Trace {
        model: TraceModel::Sampled,
        samples,
    })
}

/// Canonical flat-core curve: loops of unit sech amplitude separated by the
/// given flat lengths, over its full arclength 2 N K_p(1) + sum(L_j).
pub fn trace_flatcore(p: f64, spec: &FlatCoreSpec, n: usize) -> Result<Trace> {
    if p <= 2.0 {
        return domain_err("flat-core curves require p > 2".to_string());
    }
    spec.validate()?;
    let t_pl = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0)?)?;
    let total = spec.total_length(t_pl);
    let s1 = spec.lengths[0] + t_pl;
    sample_model(
        TraceModel::FlatCore {
            p,
            spec: spec.clone(),
            a_pl: 1.0,
            t_pl,
            s1,
        },
        (0.0, total),
        n,
    )
}

/// The figure-eight modulus: unique root of 2 E_{1,p}(q) / K_{1,p}(q) = 1.
pub fn qstar(p: f64) -> Result<f64> {
    let q_fn = |q: f64| -> Result<f64> {
        let e = elliptic::complete(IntegralKind::E1, p, Modulus::new(q)?)?;
        let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(q)?)?;
        Ok(2.0 * e / k - 1.0)
    };
    // strictly decreasing from 1 at q = 0 to a negative limit at q = 1;
    // for p <= 2 the ratio turns negative before q = 1 (K diverges there),
    // so walk toward 1 only as far as needed
    let mut lo = 0.0_f64;
    let mut hi = if p > 2.0 { 1.0 } else { 0.999 };
    while q_fn(hi)? >= 0.0 {
        hi = 1.0 - 0.1 * (1.0 - hi);
        if 1.0 - hi < 1e-8 {
            return Err(crate::Error::Tolerance(format!(
                "no sign change for the figure-eight modulus at p = {p}"
            )));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if q_fn(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// N-fold figure-eight: the wavelike profile at q*(p) over one closure
/// period per fold.
pub fn figure_eight(p: f64, n_fold: u32, s0: f64, n_samples: usize) -> Result<Trace> {
    if n_fold == 0 {
        return domain_err("figure-eight fold count must be >= 1".to_string());
    }
    let q = qstar(p)?;
    let k1 = elliptic::complete(IntegralKind::F1, p, Modulus::new(q)?)?;
    trace_canonical(
        Family::Wavelike,
        p,
        Some(q),
        (s0, s0 + 4.0 * n_fold as f64 * k1),
        n_samples,
    )
}

/// X_{2,p}(q) = (2/q^2) E_{2,p/(p-1)}(q) + (1 - 2/q^2) K_{2,p}(q); strictly
/// negative on (0,1), ruling out closed orbitlike curves.
pub fn x2p(p: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return domain_err(format!("X_2p requires q in (0, 1), got {q}"));
    }
    let conj = p / (p - 1.0);
    let e2 = elliptic::complete(IntegralKind::E2, conj, Modulus::new(q)?)?;
    let k2 = elliptic::complete(IntegralKind::F2, p, Modulus::new(q)?)?;
    Ok(2.0 / (q * q) * e2 + (1.0 - 2.0 / (q * q)) * k2)
}

/// Position/tangent gaps between the first and last sample, and the rounded
/// turning number of the angle lift.
pub fn closure_check(trace: &Trace) -> Result<ClosedCurveReport> {
    let (Some(a), Some(b)) = (trace.samples.first(), trace.samples.last()) else {
        return domain_err("closure check on an empty trace".to_string());
    };
    let position_gap = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
    let tangent_gap =
        ((b.theta.cos() - a.theta.cos()).powi(2) + (b.theta.sin() - a.theta.sin()).powi(2)).sqrt();
    let turning_number = ((b.theta - a.theta) / (2.0 * PI)).round() as i64;
    Ok(ClosedCurveReport {
        position_gap,
        tangent_gap,
        turning_number,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::oracle::gauss_kronrod;

    const QSTAR_2: f64 = 0.9089085575485415;
    const QSTAR_15: f64 = 0.8552245612738517;
    const QSTAR_3: f64 = 0.9519860374646061;
    const X2_P2_Q05: f64 = -0.060554808972755056;
    const X2_P3_Q065: f64 = -0.0781023912739397;

    #[test]
    fn linear_trace() {
        let t = trace_canonical(Family::Linear, 2.0, None, (0.0, 1.0), 5).unwrap();
        for c in &t.samples {
            assert_eq!((c.x, c.y, c.theta, c.k), (c.s, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn circular_quarter_turn() {
        let t = trace_canonical(Family::Circular, 2.0, None, (0.0, FRAC_PI_2), 9).unwrap();
        let last = t.samples.last().unwrap();
        assert!((last.x - 0.0).abs() < 1e-15);
        assert!((last.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wavelike_free_elastica_angle_range() {
        // q = 1/sqrt(2): the angle oscillates exactly between -pi/2 and pi/2
        let (p, q) = (1.5, std::f64::consts::FRAC_1_SQRT_2);
        let k1 = elliptic::complete(IntegralKind::F1, p, Modulus::new(q).unwrap()).unwrap();
        let at_quarter = canonical_point(Family::Wavelike, p, q, k1).unwrap();
        assert!((at_quarter.theta - FRAC_PI_2).abs() < 1e-12);
        let t = trace_canonical(Family::Wavelike, p, Some(q), (0.0, 4.0 * k1), 201).unwrap();
        let max = t.samples.iter().map(|c| c.theta).fold(f64::MIN, f64::max);
        let min = t.samples.iter().map(|c| c.theta).fold(f64::MAX, f64::min);
        assert!(max <= FRAC_PI_2 + 1e-12 && min >= -FRAC_PI_2 - 1e-12);
    }

    #[test]
    fn orbitlike_start_point() {
        let (p, q) = (3.0, 0.65);
        let c = canonical_point(Family::Orbitlike, p, q, 0.0).unwrap();
        assert!(c.x.abs() < 1e-15, "starts on the y-axis");
        assert!((c.y + p / (p - 1.0) / (q * q)).abs() < 1e-12);
        assert!((c.k - 2.0).abs() < 1e-15);
        assert_eq!(c.theta, 0.0);
    }

    #[test]
    fn unit_speed_second_order() {
        for (family, p, q) in [
            (Family::Wavelike, 1.5, Some(0.8)),
            (Family::Orbitlike, 3.0, Some(0.65)),
            (Family::Borderline, 1.5, None),
        ] {
            let model = TraceModel::Canonical {
                family,
                p,
                q: q.unwrap_or(1.0),
            };
            let s0 = 0.37;
            let mut errs = vec![];
            for &h in &[1e-2, 5e-3] {
                let a = model.point(s0 - h).unwrap();
                let b = model.point(s0 + h).unwrap();
                let speed = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt() / (2.0 * h);
                errs.push((speed - 1.0).abs());
            }
            assert!(
                errs[1] < errs[0] / 3.0 || errs[0] < 1e-10,
                "{family}: {errs:?}"
            );
        }
    }

    #[test]
    fn frenet_consistency() {
        let model = TraceModel::Canonical {
            family: Family::Wavelike,
            p: 2.5,
            q: 0.7,
        };
        let h = 1e-4;
        for &s in &[0.1, 0.8, 1.9] {
            let c = model.point(s).unwrap();
            let a = model.point(s - h).unwrap();
            let b = model.point(s + h).unwrap();
            let dtheta = (b.theta - a.theta) / (2.0 * h);
            assert!((dtheta - c.k).abs() < 1e-6, "s={s}");
            // unit tangent from positions
            let tx = (b.x - a.x) / (2.0 * h);
            let ty = (b.y - a.y) / (2.0 * h);
            assert!((tx - c.theta.cos()).abs() < 1e-6);
            assert!((ty - c.theta.sin()).abs() < 1e-6);
        }
    }

    #[test]
    fn closed_form_positions_match_quadrature() {
        for (family, p, q) in [
            (Family::Wavelike, 1.5, 0.8),
            (Family::Orbitlike, 3.0, 0.65),
            (Family::Borderline, 1.7, 1.0),
        ] {
            let model = TraceModel::Canonical { family, p, q };
            let origin = model.point(0.0).unwrap();
            for &s in &[0.7, 2.3] {
                let c = model.point(s).unwrap();
                let x_quad =
                    gauss_kronrod(|t| model.point(t).unwrap().theta.cos(), 0.0, s, 1e-11).unwrap();
                let y_quad =
                    gauss_kronrod(|t| model.point(t).unwrap().theta.sin(), 0.0, s, 1e-11).unwrap();
                assert!(
                    (c.x - origin.x - x_quad).abs() < 1e-8,
                    "{family} x at s={s}: {} vs {}",
                    c.x - origin.x,
                    x_quad
                );
                assert!(
                    (c.y - origin.y - y_quad).abs() < 1e-8,
                    "{family} y at s={s}"
                );
            }
        }
    }

    #[test]
    fn loop_arc_geometry() {
        let p = 3.0;
        let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0).unwrap()).unwrap();
        let t = loop_arc(p, 1, None, 65).unwrap();
        let first = t.samples.first().unwrap();
        let last = t.samples.last().unwrap();
        // displacement (-2 K/(p-1), 0)
        assert!((last.x - first.x + 2.0 * k / (p - 1.0)).abs() < 1e-10);
        assert!((last.y - first.y).abs() < 1e-12);
        // endpoint angles +-pi and zero curvature
        assert!((first.theta + PI).abs() < 1e-12);
        assert!((last.theta - PI).abs() < 1e-12);
        assert_eq!(first.k, 0.0);
        assert_eq!(last.k, 0.0);
        // apex at s = 0
        let mid = t.eval(0.0).unwrap();
        assert!((mid.y + p / (p - 1.0)).abs() < 1e-12);
        assert!((mid.k - 2.0).abs() < 1e-12);
        // minus sign mirrors
        let tm = loop_arc(4.0, -1, None, 9).unwrap();
        let apex = tm.eval(0.0).unwrap();
        assert!((apex.y - 4.0 / 3.0).abs() < 1e-12);
        assert!((apex.k + 2.0).abs() < 1e-12);
        // p <= 2 demands a window
        assert!(loop_arc(1.5, 1, None, 9).is_err());
        assert!(loop_arc(1.5, 1, Some((-2.0, 2.0)), 9).is_ok());
    }

    #[test]
    fn concat_translates_and_rebases() {
        let one = trace_canonical(Family::Linear, 2.0, None, (0.0, 1.0), 5).unwrap();
        let same = concat(std::slice::from_ref(&one)).unwrap();
        assert_eq!(same.samples.len(), 5);
        assert_eq!(same.samples.last().unwrap().x, 1.0);

        // two leftward unit segments join into one of length 2
        let seg = |_: ()| Trace {
            model: TraceModel::Sampled,
            samples: (0..5)
                .map(|i| {
                    let s = i as f64 / 4.0;
                    CurveSample {
                        s,
                        x: -s,
                        y: 0.0,
                        theta: PI,
                        k: 0.0,
                    }
                })
                .collect(),
        };
        let joined = concat(&[seg(()), seg(())]).unwrap();
        let last = joined.samples.last().unwrap();
        assert_eq!(joined.samples.len(), 9);
        assert!((last.s - 2.0).abs() < 1e-15);
        assert!((last.x + 2.0).abs() < 1e-15);

        // flat segment then loop: junction positions agree by construction
        let line = seg(());
        let lp = loop_arc(3.0, 1, None, 33).unwrap();
        let both = concat(&[line.clone(), lp.clone()]).unwrap();
        let junction = both.samples[4];
        assert!((junction.x - line.samples.last().unwrap().x).abs() < 1e-15);
    }

    #[test]
    fn flatcore_trace_geometry() {
        let p = 3.0;
        let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0).unwrap()).unwrap();
        let spec = FlatCoreSpec::new(vec![1, -1], vec![0.0, 1.0]).unwrap();
        let t = trace_flatcore(p, &spec, 257).unwrap();
        let total = t.arclength_span();
        assert!((total - (4.0 * k + 1.0)).abs() < 1e-12);
        let first = t.samples.first().unwrap();
        let last = t.samples.last().unwrap();
        // displacement: flats plus one loop displacement per loop
        let expected_dx = -(1.0) - 2.0 * 2.0 * k / (p - 1.0);
        assert!(
            (last.x - first.x - expected_dx).abs() < 1e-8,
            "dx = {}, expected {expected_dx}",
            last.x - first.x
        );
        assert!((last.y - first.y).abs() < 1e-9);
        // flat samples sit on the x-axis with k = 0, with distinct x
        let mut flat_x = vec![];
        for c in &t.samples {
            if c.k == 0.0 {
                assert!(c.y.abs() < 1e-9, "flat sample off axis: {c:?}");
                flat_x.push(c.x);
            }
        }
        assert!(flat_x.len() > 2);
        let mut sorted = flat_x.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(sorted.len(), flat_x.len(), "flat x-coordinates collide");
        // never closes
        let rep = closure_check(&t).unwrap();
        assert!(rep.position_gap > 1.0);
    }

    #[test]
    fn flatcore_curvature_matches_class_evaluation() {
        let p = 4.0;
        let spec = FlatCoreSpec::new(vec![1, 1], vec![0.5, 0.25]).unwrap();
        let t = trace_flatcore(p, &spec, 101).unwrap();
        let t_pl = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0).unwrap()).unwrap();
        let class = SolutionClass::FlatCore {
            spec: spec.clone(),
            a_pl: 1.0,
            t_pl,
            s1: spec.lengths[0] + t_pl,
        };
        for c in t.samples.iter().step_by(7) {
            let (k, _, _) = crate::classify::curvature_of(p, &class, c.s).unwrap();
            assert!((k - c.k).abs() < 1e-10, "s = {}: {} vs {k}", c.s, c.k);
        }
    }

    #[test]
    fn qstar_reference_values() {
        assert!((qstar(2.0).unwrap() - QSTAR_2).abs() < 1e-9);
        assert!((qstar(1.5).unwrap() - QSTAR_15).abs() < 1e-9);
        assert!((qstar(3.0).unwrap() - QSTAR_3).abs() < 1e-9);
    }

    #[test]
    fn q_ratio_endpoints() {
        // Q_p(0) = 1 since E and K coincide at q = 0
        for &p in &[1.5, 3.0] {
            let e = elliptic::complete(IntegralKind::E1, p, Modulus::new(0.0).unwrap()).unwrap();
            let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(0.0).unwrap()).unwrap();
            assert!((2.0 * e / k - 1.0 - 1.0).abs() < 1e-12);
        }
        // Q_p(1) = -1/(p-1) for p > 2
        for &p in &[3.0, 4.0] {
            let e = elliptic::complete(IntegralKind::E1, p, Modulus::new(1.0).unwrap()).unwrap();
            let k = elliptic::complete(IntegralKind::F1, p, Modulus::new(1.0).unwrap()).unwrap();
            let q1 = 2.0 * e / k - 1.0;
            assert!((q1 + 1.0 / (p - 1.0)).abs() < 1e-10, "p={p}: {q1}");
        }
    }

    #[test]
    fn figure_eight_closes() {
        let t = figure_eight(2.0, 1, 0.0, 65).unwrap();
        let rep = closure_check(&t).unwrap();
        assert!(rep.position_gap < 1e-8, "gap {}", rep.position_gap);
        assert!(rep.tangent_gap < 1e-8);
        assert_eq!(rep.turning_number, 0);
    }

    #[test]
    fn x2p_reference_and_monotonicity() {
        let v = x2p(2.0, 0.5).unwrap();
        assert!((v - X2_P2_Q05).abs() < 1e-11, "got {v}");
        let v = x2p(3.0, 0.65).unwrap();
        assert!((v - X2_P3_Q065).abs() < 1e-11, "got {v}");
        // tends to 0 from below as q -> 0+, decreasing in q
        let mut last = 0.0;
        for i in 1..=10 {
            let q = i as f64 / 11.0;
            let v = x2p(1.8, q).unwrap();
            assert!(v < 0.0);
            assert!(v < last);
            last = v;
        }
        assert!(x2p(1.8, 1.0 / 11.0).unwrap() > -0.01);
    }

    #[test]
    fn closure_on_circle_and_open_curves() {
        let t = trace_canonical(Family::Circular, 2.0, None, (0.0, 2.0 * PI), 65).unwrap();
        let rep = closure_check(&t).unwrap();
        assert!(rep.position_gap < 1e-12);
        assert!(rep.tangent_gap < 1e-12);
        assert_eq!(rep.turning_number, 1);
        // borderline never closes
        let t = trace_canonical(Family::Borderline, 1.5, None, (-8.0, 8.0), 65).unwrap();
        let rep = closure_check(&t).unwrap();
        assert!(rep.position_gap > 0.1);
    }

    #[test]
    fn class_trace_curvature_consistency() {
        let p = 2.5;
        let class = SolutionClass::Wavelike {
            a: -1.2,
            alpha: 1.2 / (2.0 * 0.8),
            beta: 0.4,
            q: 0.8,
        };
        let t = trace_class(p, &class, (0.0, 3.0), 31).unwrap();
        for c in t.samples.iter().step_by(5) {
            let (k, _, _) = crate::classify::curvature_of(p, &class, c.s).unwrap();
            assert!((k - c.k).abs() < 1e-10);
        }
        // trace positions advance with unit speed in the scaled frame
        let a = t.eval(1.0).unwrap();
        let b = t.eval(1.0 + 1e-3).unwrap();
        let speed = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt() / 1e-3;
        assert!((speed - 1.0).abs() < 1e-5);
    }
}
