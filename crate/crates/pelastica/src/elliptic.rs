//! p-elliptic integrals and functions.
//!
//! The incomplete integrals of the first kind carry the weight
//! |cos t|^{1-2/p} (F1) or the kernel (1 - q^2 sin^2 t)^{-1/p} (F2); the
//! second kind replaces those by sqrt(1 - q^2 sin^2 t) |cos t|^{1-2/p} (E1)
//! and (1 - q^2 sin^2 t)^{1/p} (E2). Inverting F1/F2 gives the amplitude
//! functions, from which sn_p, cn_p, dn_p, sech_p and tanh_p are built.
//!
//! Arguments are reduced modulo pi (half-period 2K per pi of amplitude)
//! before quadrature, so the weight's singularities at odd multiples of
//! pi/2 are always integration endpoints, where tanh-sinh quadrature keeps
//! spectral accuracy.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use crate::quad::tanh_sinh;
use crate::roots::newton_bisect;
use crate::{domain_err, Error, Result, DEFAULT_INTEGRAL_TOL, DEFAULT_INVERT_TOL};

/// The four incomplete p-elliptic integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralKind {
    F1,
    F2,
    E1,
    E2,
}

impl IntegralKind {
    fn index(self) -> u8 {
        match self {
            IntegralKind::F1 => 0,
            IntegralKind::F2 => 1,
            IntegralKind::E1 => 2,
            IntegralKind::E2 => 3,
        }
    }
}

/// Modulus q restricted to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(q: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&q) {
            Ok(Modulus(q))
        } else {
            domain_err(format!("modulus q must lie in [0, 1], got {q}"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub(crate) fn raw(q: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&q));
        Modulus(q)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        domain_err(format!("exponent p must satisfy p > 1, got {p}"))
    }
}

/// Detect values that are integers up to roundoff from rational p.
fn nearly_integer(x: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() < 1e-9 * (1.0 + x.abs()) {
        Some(r as i64)
    } else {
        None
    }
}

/// The exponent p together with its derived regularity constants.
#[derive(Debug, Clone, Copy)]
pub struct PParams {
    pub p: f64,
    /// ceil(1/(p-1))
    pub m_p: u32,
    /// (m_p - 1/(p-1))^{-1}; None when 1/(p-1) is an integer
    pub r_p: Option<f64>,
    /// ceil(2/(p-2)), defined for p > 2
    pub big_m_p: Option<u32>,
    /// (M_p - 2/(p-2))^{-1}; None when p <= 2 or 2/(p-2) is an integer
    pub big_r_p: Option<f64>,
    /// K_p(1): +infinity for p <= 2, finite for p > 2
    pub k_p1: f64,
}

impl PParams {
    pub fn new(p: f64) -> Result<Self> {
        check_p(p)?;
        let u = 1.0 / (p - 1.0);
        let (m_p, r_p) = match nearly_integer(u) {
            Some(m) => (m as u32, None),
            None => {
                let m = u.ceil() as u32;
                (m, Some(1.0 / (m as f64 - u)))
            }
        };
        let (big_m_p, big_r_p) = if p > 2.0 {
            let v = 2.0 / (p - 2.0);
            match nearly_integer(v) {
                Some(m) => (Some(m as u32), None),
                None => {
                    let m = v.ceil();
                    (Some(m as u32), Some(1.0 / (m - v)))
                }
            }
        } else {
            (None, None)
        };
        let k_p1 = if p > 2.0 {
            complete(IntegralKind::F1, p, Modulus(1.0))?
        } else {
            f64::INFINITY
        };
        Ok(PParams {
            p,
            m_p,
            r_p,
            big_m_p,
            big_r_p,
            k_p1,
        })
    }

    /// Whether 1/(p-1) is an odd integer, i.e. p = 2m/(2m-1): every
    /// p-elastica is then analytic.
    pub fn analytic_exponent(&self) -> bool {
        matches!(nearly_integer(1.0 / (self.p - 1.0)), Some(m) if m % 2 == 1)
    }
}

/// Exponent of |cos theta| in the integrand of `kind`.
fn cos_exponent(kind: IntegralKind, p: f64, q: f64) -> f64 {
    if q == 1.0 {
        match kind {
            IntegralKind::F1 | IntegralKind::F2 => -2.0 / p,
            IntegralKind::E1 => 2.0 - 2.0 / p,
            IntegralKind::E2 => 2.0 / p,
        }
    } else {
        match kind {
            IntegralKind::F1 | IntegralKind::E1 => 1.0 - 2.0 / p,
            IntegralKind::F2 | IntegralKind::E2 => 0.0,
        }
    }
}

/// Integrand of `kind` with the |cos|^alpha weight factored out.
fn regular_factor(kind: IntegralKind, p: f64, q: f64, theta: f64) -> f64 {
    if q == 1.0 {
        return 1.0;
    }
    let qs = q * theta.sin();
    let g = 1.0 - qs * qs;
    match kind {
        IntegralKind::F1 => 1.0 / g.sqrt(),
        IntegralKind::F2 => g.powf(-1.0 / p),
        IntegralKind::E1 => g.sqrt(),
        IntegralKind::E2 => g.powf(1.0 / p),
    }
}

/// Integrand of `kind`; takes the abscissa and the distance to the nearest
/// upper odd multiple of pi/2 so |cos| stays accurate near the singularity.
fn integrand(kind: IntegralKind, p: f64, q: f64, x: f64, dist_half_pi: f64) -> f64 {
    let cos_abs = if dist_half_pi < 0.7 {
        dist_half_pi.sin()
    } else {
        x.cos().abs()
    };
    cos_abs.powf(cos_exponent(kind, p, q)) * regular_factor(kind, p, q, x)
}

/// Quadrature of `kind` over `[a, b]` with `b <= pi/2`.
///
/// When the upper endpoint is pi/2 itself and the weight exponent alpha is
/// close to -1 (p near 2 from above at q = 1), part of the integral's mass
/// sits at distances from the singularity below f64 resolution; the
/// substitution u = d^{1+alpha} in the gap variable d = pi/2 - theta removes
/// the weight exactly and keeps the transformed integrand bounded.
fn quad_segment(kind: IntegralKind, p: f64, q: f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let alpha = cos_exponent(kind, p, q);
    if b >= FRAC_PI_2 && alpha < -0.5 {
        let m = 1.0 + alpha;
        let upper = (FRAC_PI_2 - a).powf(m);
        return tanh_sinh(
            |u, _, _| {
                let d = u.powf(1.0 / m);
                let ratio = if d > 1e-30 {
                    (d.sin() / d).powf(alpha)
                } else {
                    1.0
                };
                ratio * regular_factor(kind, p, q, FRAC_PI_2 - d) / m
            },
            0.0,
            upper,
            tol,
        );
    }
    let gap = FRAC_PI_2 - b;
    tanh_sinh(|x, _, dr| integrand(kind, p, q, x, dr + gap), a, b, tol)
}

const TABLE_SEGMENTS: usize = 16;
const TABLE_TOL: f64 = 3e-14;

/// Cumulative values of one integral kind at the 17 nodes i*(pi/2)/16.
/// Immutable once built; shared through the cache below.
struct PeriodTable {
    nodes: [f64; TABLE_SEGMENTS + 1],
}

impl PeriodTable {
    fn complete(&self) -> f64 {
        self.nodes[TABLE_SEGMENTS]
    }

    fn node_abscissa(i: usize) -> f64 {
        if i == TABLE_SEGMENTS {
            FRAC_PI_2
        } else {
            i as f64 * (FRAC_PI_2 / TABLE_SEGMENTS as f64)
        }
    }
}

type TableKey = (u8, u64, u64);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<PeriodTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<PeriodTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fetch or build the quarter-period table for (kind, p, q).
/// Requires a finite complete integral (excludes F-kinds at q = 1, p <= 2).
fn period_table(kind: IntegralKind, p: f64, q: f64) -> Result<Arc<PeriodTable>> {
    let key = (kind.index(), p.to_bits(), q.to_bits());
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let mut nodes = [0.0; TABLE_SEGMENTS + 1];
    for i in 1..=TABLE_SEGMENTS {
        let a = PeriodTable::node_abscissa(i - 1);
        let b = PeriodTable::node_abscissa(i);
        nodes[i] = nodes[i - 1] + quad_segment(kind, p, q, a, b, TABLE_TOL)?;
    }
    let table = Arc::new(PeriodTable { nodes });
    table_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| table.clone());
    Ok(table)
}

/// Incomplete integral over [0, a] with a in [0, pi/2], table-assisted.
fn incomplete_principal(kind: IntegralKind, p: f64, q: f64, a: f64, tol: f64) -> Result<f64> {
    debug_assert!((0.0..=FRAC_PI_2 + 1e-12).contains(&a));
    if a == 0.0 {
        return Ok(0.0);
    }
    if q == 1.0 && p <= 2.0 && matches!(kind, IntegralKind::F1 | IntegralKind::F2) {
        // no finite complete value; integrate directly
        return quad_segment(kind, p, q, 0.0, a, tol);
    }
    let table = period_table(kind, p, q)?;
    if a >= FRAC_PI_2 {
        return Ok(table.complete());
    }
    let seg = FRAC_PI_2 / TABLE_SEGMENTS as f64;
    let i = ((a / seg) as usize).min(TABLE_SEGMENTS - 1);
    let base = PeriodTable::node_abscissa(i);
    Ok(table.nodes[i] + quad_segment(kind, p, q, base, a, tol)?)
}

/// Incomplete p-elliptic integral of `kind` at angle `x` and modulus `q`.
///
/// Arguments are reduced modulo pi using the half-period identities, so any
/// real `x` is admissible except for the first kind at q = 1, p <= 2 where
/// the domain is |x| < pi/2.
pub fn integral(kind: IntegralKind, p: f64, x: f64, q: Modulus) -> Result<f64> {
    integral_with_tol(kind, p, x, q, DEFAULT_INTEGRAL_TOL)
}

/// Same as [`integral`] with an explicit absolute tolerance.
pub fn integral_with_tol(kind: IntegralKind, p: f64, x: f64, q: Modulus, tol: f64) -> Result<f64> {
    check_p(p)?;
    let q = q.get();
    let f_kind = matches!(kind, IntegralKind::F1 | IntegralKind::F2);
    if q == 1.0 && p <= 2.0 && f_kind {
        if x.abs() >= FRAC_PI_2 {
            return domain_err(format!(
                "first-kind integral at q = 1, p = {p} <= 2 requires |x| < pi/2, got {x}"
            ));
        }
        let v = incomplete_principal(kind, p, q, x.abs(), tol)?;
        return Ok(v.copysign(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // integrand identically 1
    if q == 0.0 && (matches!(kind, IntegralKind::F2 | IntegralKind::E2) || p == 2.0) {
        return Ok(x);
    }
    let n = (x / PI).round();
    let r = x - n * PI;
    let principal = incomplete_principal(kind, p, q, r.abs(), tol)?.copysign(r);
    if n == 0.0 {
        Ok(principal)
    } else {
        Ok(principal + 2.0 * n * complete(kind, p, Modulus::raw(q))?)
    }
}

/// Complete p-elliptic integral of `kind`. Returns +infinity for the first
/// kind at q = 1 with p <= 2, otherwise a finite positive value.
pub fn complete(kind: IntegralKind, p: f64, q: Modulus) -> Result<f64> {
    check_p(p)?;
    let q = q.get();
    if q == 1.0 && p <= 2.0 && matches!(kind, IntegralKind::F1 | IntegralKind::F2) {
        return Ok(f64::INFINITY);
    }
    if q == 0.0 && (matches!(kind, IntegralKind::F2 | IntegralKind::E2) || p == 2.0) {
        return Ok(FRAC_PI_2);
    }
    Ok(period_table(kind, p, q)?.complete())
}

/// Which of the two amplitude functions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeKind {
    /// inverse of F1
    First,
    /// inverse of F2
    Second,
}

impl AmplitudeKind {
    fn integral_kind(self) -> IntegralKind {
        match self {
            AmplitudeKind::First => IntegralKind::F1,
            AmplitudeKind::Second => IntegralKind::F2,
        }
    }
}

/// Invert `F(a) = target` for a in [0, pi/2], given 0 <= target <= K.
fn invert_principal(
    kind: IntegralKind,
    p: f64,
    q: f64,
    table: &PeriodTable,
    target: f64,
    tol: f64,
) -> Result<f64> {
    if target <= 0.0 {
        return Ok(0.0);
    }
    if target >= table.complete() {
        return Ok(FRAC_PI_2);
    }
    // locate the table segment containing the target
    let mut i = 0;
    while i + 1 < TABLE_SEGMENTS && table.nodes[i + 1] < target {
        i += 1;
    }
    let (lo, hi) = (
        PeriodTable::node_abscissa(i),
        PeriodTable::node_abscissa(i + 1),
    );
    let base_val = table.nodes[i];
    let quad_tol = (0.05 * tol).max(1e-15);
    let mut residual = |a: f64| -> (f64, f64) {
        let v = base_val + quad_segment(kind, p, q, lo, a, quad_tol).unwrap_or(f64::NAN);
        let d = integrand(kind, p, q, a, FRAC_PI_2 - a);
        (v - target, d)
    };
    // seed check: newton_bisect starts at the midpoint; bracket is one segment
    newton_bisect(&mut residual, lo, hi, 1e-15, tol)
}

/// Invert F(a) = target (target > 0) at q = 1, p <= 2, where F blows up at
/// a = pi/2. Brackets in the gap variable d = pi/2 - a to avoid overflow.
fn invert_unbounded(p: f64, target: f64, tol: f64) -> Result<f64> {
    let kind = IntegralKind::F1;
    let quad_tol = (0.05 * tol).max(1e-15);
    let f = |a: f64| quad_segment(kind, p, 1.0, 0.0, a, quad_tol).unwrap_or(f64::NAN);
    // geometric ladder in d until F exceeds the target
    let mut d_hi = FRAC_PI_2; // a = 0, F = 0
    let mut d = FRAC_PI_2 / 4.0;
    loop {
        let v = f(FRAC_PI_2 - d);
        if !v.is_finite() {
            return Err(Error::Tolerance(format!(
                "amplitude inversion failed at q = 1, p = {p}, target {target}"
            )));
        }
        if v >= target {
            break;
        }
        d_hi = d;
        d /= 4.0;
        if d < 1e-290 {
            // saturated: the amplitude is pi/2 to machine resolution
            return Ok(FRAC_PI_2);
        }
    }
    let (lo, hi) = (FRAC_PI_2 - d_hi, FRAC_PI_2 - d);
    let mut residual = |a: f64| {
        let v = f(a) - target;
        let dv = integrand(kind, p, 1.0, a, FRAC_PI_2 - a);
        (v, dv)
    };
    newton_bisect(&mut residual, lo, hi, 0.0, tol)
}

/// Amplitude function am_{1,p} or am_{2,p}: the inverse of the first-kind
/// integrals, extended to the real line by the half-period identities.
pub fn amplitude(which: AmplitudeKind, p: f64, x: f64, q: Modulus) -> Result<f64> {
    amplitude_with_tol(which, p, x, q, DEFAULT_INVERT_TOL)
}

/// Same as [`amplitude`] with an explicit residual tolerance.
pub fn amplitude_with_tol(
    which: AmplitudeKind,
    p: f64,
    x: f64,
    q: Modulus,
    tol: f64,
) -> Result<f64> {
    check_p(p)?;
    let q = q.get();
    let kind = which.integral_kind();
    if x == 0.0 {
        return Ok(0.0);
    }
    if q == 1.0 {
        if p <= 2.0 {
            let a = invert_unbounded(p, x.abs(), tol)?;
            return Ok(a.copysign(x));
        }
        // p > 2: finite domain [-K_p(1), K_p(1)], amplitude closes at +-pi/2
        let table = period_table(kind, p, q)?;
        let k = table.complete();
        if x.abs() > k * (1.0 + 1e-12) {
            return domain_err(format!(
                "amplitude at q = 1, p = {p} > 2 is defined for |x| <= K_p(1) = {k}, got {x}"
            ));
        }
        if x.abs() >= k {
            return Ok(FRAC_PI_2.copysign(x));
        }
        let a = invert_principal(kind, p, q, &table, x.abs(), tol)?;
        return Ok(a.copysign(x));
    }
    let table = period_table(kind, p, q)?;
    let k = table.complete();
    let n = (x / (2.0 * k)).round();
    let r = x - 2.0 * n * k;
    let a = invert_principal(kind, p, q, &table, r.abs(), tol)?.copysign(r);
    Ok(a + n * PI)
}

/// Distance from `a` to the nearest odd multiple of pi/2.
fn dist_to_odd_half_pi(a: f64) -> f64 {
    let t = (a - FRAC_PI_2) / PI;
    (t - t.round()).abs() * PI
}

/// sign(cos a) |cos a|^{2/p}, snapping to zero when `a` sits on an odd
/// multiple of pi/2 so the quarter-period values are exact.
fn signed_cos_pow(a: f64, p: f64) -> f64 {
    let c = a.cos();
    if dist_to_odd_half_pi(a) < 1e-15 * (1.0 + a.abs()) {
        return 0.0;
    }
    c.signum() * c.abs().powf(2.0 / p)
}

/// The pair (sn_p, cn_p) at (x, q): sn_p = sin am_{1,p} and
/// cn_p = |cos am_{1,p}|^{2/p - 1} cos am_{1,p}.
pub fn sn_cn(p: f64, x: f64, q: Modulus) -> Result<(f64, f64)> {
    let a = amplitude(AmplitudeKind::First, p, x, q)?;
    Ok((a.sin(), signed_cos_pow(a, p)))
}

/// dn_p(x, q) = (1 - q^2 sin^2 am_{2,p}(x, q))^{1/p}.
pub fn dn(p: f64, x: f64, q: Modulus) -> Result<f64> {
    check_p(p)?;
    let qv = q.get();
    if qv == 1.0 {
        if p <= 2.0 {
            return sech(p, x);
        }
        // periodic extension by 2 K_p(1)
        let k = complete(IntegralKind::F2, p, q)?;
        let n = (x / (2.0 * k)).round();
        let r = (x - 2.0 * n * k).abs().min(k);
        let a = amplitude(AmplitudeKind::Second, p, r, q)?;
        return Ok(a.cos().max(0.0).powf(2.0 / p));
    }
    let b = amplitude(AmplitudeKind::Second, p, x, q)?;
    let qs = qv * b.sin();
    Ok((1.0 - qs * qs).powf(1.0 / p))
}

/// sech_p: equals cn_p(., 1) = dn_p(., 1) on (-K_p(1), K_p(1)) and is
/// extended by zero outside (the interval is all of R when p <= 2).
pub fn sech(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if p > 2.0 {
        let k = complete(IntegralKind::F1, p, Modulus(1.0))?;
        if x.abs() >= k {
            return Ok(0.0);
        }
    }
    let a = amplitude(AmplitudeKind::First, p, x.abs(), Modulus(1.0))?;
    Ok(a.cos().max(0.0).powf(2.0 / p))
}

/// tanh_p(x) = int_0^x (sech_p)^p: evaluates as the second-kind integral
/// E_{1,p} at the amplitude, constant beyond K_p(1) when p > 2.
pub fn tanh(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if p > 2.0 {
        let k = complete(IntegralKind::F1, p, Modulus(1.0))?;
        if x.abs() >= k {
            let e1 = complete(IntegralKind::E1, p, Modulus(1.0))?;
            return Ok(e1.copysign(x));
        }
    }
    let a = amplitude(AmplitudeKind::First, p, x.abs(), Modulus(1.0))?;
    let v = integral(IntegralKind::E1, p, a, Modulus(1.0))?;
    Ok(v.copysign(x))
}

/// cn_p evaluated together with w = |cn_p|^{p-2} cn_p and dw/dx.
#[derive(Debug, Clone, Copy)]
pub struct CnEval {
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    /// |cn_p|^{p-2} cn_p = sign(cos am) |cos am|^{2 - 2/p}
    pub w: f64,
    /// d/dx of `w`: -(2 - 2/p) sin(am) sqrt(1 - q^2 sin^2 am)
    pub dw: f64,
}

/// Evaluate cn_p with its C^2 transform; valid for q in [0, 1] on the
/// amplitude's domain.
pub fn cn_eval(p: f64, x: f64, q: Modulus) -> Result<CnEval> {
    let a = amplitude(AmplitudeKind::First, p, x, q)?;
    let qv = q.get();
    let sn = a.sin();
    let snapped = dist_to_odd_half_pi(a) < 1e-15 * (1.0 + a.abs());
    let c = if snapped { 0.0 } else { a.cos() };
    let cn = c.signum() * c.abs().powf(2.0 / p);
    let w = c.signum() * c.abs().powf(2.0 - 2.0 / p);
    let root = if qv == 1.0 {
        c.abs()
    } else {
        let qs = qv * sn;
        (1.0 - qs * qs).sqrt()
    };
    let dw = -(2.0 - 2.0 / p) * sn * root;
    Ok(CnEval {
        am: a,
        sn,
        cn,
        w,
        dw,
    })
}

/// dn_p evaluated together with w = dn_p^{p-1} and dw/dx.
#[derive(Debug, Clone, Copy)]
pub struct DnEval {
    pub am: f64,
    pub dn: f64,
    /// dn_p^{p-1} = (1 - q^2 sin^2 am)^{(p-1)/p}
    pub w: f64,
    /// d/dx of `w`: -(2(p-1)/p) q^2 sin(am) cos(am)
    pub dw: f64,
}

pub fn dn_eval(p: f64, x: f64, q: Modulus) -> Result<DnEval> {
    let qv = q.get();
    let b = amplitude(AmplitudeKind::Second, p, x, q)?;
    let qs = qv * b.sin();
    let g = 1.0 - qs * qs;
    Ok(DnEval {
        am: b,
        dn: g.powf(1.0 / p),
        w: g.powf((p - 1.0) / p),
        dw: -(2.0 * (p - 1.0) / p) * qv * qv * b.sin() * b.cos(),
    })
}

/// sech_p evaluated together with w = sech_p^{p-1} and dw/dx (zero outside
/// the support when p > 2).
#[derive(Debug, Clone, Copy)]
pub struct SechEval {
    pub sech: f64,
    pub w: f64,
    pub dw: f64,
}

pub fn sech_eval(p: f64, x: f64) -> Result<SechEval> {
    check_p(p)?;
    if p > 2.0 {
        let k = complete(IntegralKind::F1, p, Modulus(1.0))?;
        if x.abs() >= k {
            return Ok(SechEval {
                sech: 0.0,
                w: 0.0,
                dw: 0.0,
            });
        }
    }
    let a = amplitude(AmplitudeKind::First, p, x, Modulus(1.0))?;
    let c = a.cos().max(0.0);
    Ok(SechEval {
        sech: c.powf(2.0 / p),
        w: c.powf(2.0 - 2.0 / p),
        dw: -(2.0 - 2.0 / p) * a.sin() * c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: f64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    // reference values from 40-digit tanh-sinh quadrature (independent of
    // this implementation)
    const K1_P15_Q05: f64 = 2.2907929713347016;
    const E2_P3_X03_Q07: f64 = 0.29854359670163966;
    const E2C_P3_Q07: f64 = 1.4217021934075748;
    const K4_1: f64 = 2.6220575542921198;
    const K3_1: f64 = 3.6429759718313724;
    const AM2_P15_X2_Q06: f64 = 1.7064773083638143;
    const SECH_P15_X10: f64 = 0.0036078657388614886;
    const E1C_P4_Q1: f64 = 0.8740191847640399;
    const K2_P4_Q09: f64 = 1.8729142691327127;
    const K1_P25_Q03: f64 = 1.4170833966778999;
    const AM1_P3_X04_Q05: f64 = 0.40100720346141585;
    const SN3_X04_Q05: f64 = 0.3903458404487159;
    const CN3_X04_Q05: f64 = 0.946387061879193;
    const DN4_X03_Q09: f64 = 0.9820433269017061;

    #[test]
    fn integral_empty_range_is_zero() {
        assert_eq!(integral(IntegralKind::F1, 1.5, 0.0, m(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn integral_classical_unit_integrand() {
        let v = integral(IntegralKind::F1, 2.0, FRAC_PI_2, m(0.0)).unwrap();
        assert_eq!(v, FRAC_PI_2);
    }

    #[test]
    fn integral_first_kind_reference() {
        let v = integral(IntegralKind::F1, 1.5, FRAC_PI_2, m(0.5)).unwrap();
        assert!((v - K1_P15_Q05).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn integral_reduction_matches_half_period_identity() {
        let reduced = integral(IntegralKind::E2, 3.0, PI + 0.3, m(0.7)).unwrap();
        let expected = E2_P3_X03_Q07 + 2.0 * E2C_P3_Q07;
        assert!((reduced - expected).abs() < 1e-12, "got {reduced}");
    }

    #[test]
    fn integral_reduction_generic_n() {
        for kind in [
            IntegralKind::F1,
            IntegralKind::F2,
            IntegralKind::E1,
            IntegralKind::E2,
        ] {
            let (p, q, x) = (2.5, 0.6, 0.47);
            let base = integral(kind, p, x, m(q)).unwrap();
            let comp = complete(kind, p, m(q)).unwrap();
            for n in -2i32..=2 {
                let v = integral(kind, p, x + n as f64 * PI, m(q)).unwrap();
                let expected = base + 2.0 * n as f64 * comp;
                assert!(
                    (v - expected).abs() < 1e-11,
                    "{kind:?} n={n}: {v} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn complete_values() {
        assert_eq!(complete(IntegralKind::F1, 2.0, m(0.0)).unwrap(), FRAC_PI_2);
        assert!(complete(IntegralKind::F1, 1.5, m(1.0))
            .unwrap()
            .is_infinite());
        let k41 = complete(IntegralKind::F1, 4.0, m(1.0)).unwrap();
        assert!((k41 - K4_1).abs() < 1e-12, "got {k41}");
        let k31 = complete(IntegralKind::F1, 3.0, m(1.0)).unwrap();
        assert!((k31 - K3_1).abs() < 1e-12, "got {k31}");
        let k2 = complete(IntegralKind::F2, 4.0, m(0.9)).unwrap();
        assert!((k2 - K2_P4_Q09).abs() < 1e-12, "got {k2}");
    }

    #[test]
    fn integral_domain_error_at_q1_small_p() {
        assert!(integral(IntegralKind::F1, 1.5, FRAC_PI_2, m(1.0)).is_err());
        assert!(integral(IntegralKind::F1, 1.5, 2.0, m(1.0)).is_err());
        // second kind stays fine at q = 1
        assert!(integral(IntegralKind::E1, 1.5, 2.0, m(1.0)).is_ok());
    }

    #[test]
    fn amplitude_odd_and_zero() {
        assert_eq!(
            amplitude(AmplitudeKind::First, 3.0, 0.0, m(0.4)).unwrap(),
            0.0
        );
        let a = amplitude(AmplitudeKind::First, 3.0, 0.7, m(0.4)).unwrap();
        let b = amplitude(AmplitudeKind::First, 3.0, -0.7, m(0.4)).unwrap();
        assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn amplitude_at_complete_value_is_exact_quarter_turn() {
        let k = complete(IntegralKind::F1, 2.5, m(0.3)).unwrap();
        assert!((k - K1_P25_Q03).abs() < 1e-12);
        let a = amplitude(AmplitudeKind::First, 2.5, k, m(0.3)).unwrap();
        assert_eq!(a, FRAC_PI_2);
    }

    #[test]
    fn amplitude_second_kind_reference() {
        let a = amplitude(AmplitudeKind::Second, 1.5, 2.0, m(0.6)).unwrap();
        assert!((a - AM2_P15_X2_Q06).abs() < 1e-9, "got {a}");
    }

    #[test]
    fn amplitude_inversion_round_trip() {
        // grid avoiding the singular abscissae
        for &p in &[1.2, 1.5, 2.0, 3.0, 6.0] {
            for &q in &[0.0, 0.3, 0.8] {
                for i in 0..7 {
                    let a = -1.35 + 0.45 * i as f64;
                    let x = integral(IntegralKind::F1, p, a, m(q)).unwrap();
                    let back = amplitude(AmplitudeKind::First, p, x, m(q)).unwrap();
                    assert!((back - a).abs() < 1e-10, "p={p} q={q} a={a}: got {back}");
                }
            }
        }
    }

    #[test]
    fn amplitude_monotone() {
        let mut last = f64::NEG_INFINITY;
        for i in 0..60 {
            let x = -6.0 + 0.2 * i as f64;
            let a = amplitude(AmplitudeKind::First, 2.7, x, m(0.85)).unwrap();
            assert!(a > last);
            last = a;
        }
    }

    #[test]
    fn amplitude_q1_large_p_domain() {
        let k = complete(IntegralKind::F1, 3.0, m(1.0)).unwrap();
        let a = amplitude(AmplitudeKind::First, 3.0, k, m(1.0)).unwrap();
        assert_eq!(a, FRAC_PI_2);
        assert!(amplitude(AmplitudeKind::First, 3.0, k + 1e-6, m(1.0)).is_err());
    }

    #[test]
    fn sn_cn_special_points() {
        assert_eq!(sn_cn(3.0, 0.0, m(0.5)).unwrap(), (0.0, 1.0));
        let k = complete(IntegralKind::F1, 3.0, m(0.5)).unwrap();
        let (sn, cn) = sn_cn(3.0, k, m(0.5)).unwrap();
        assert_eq!(sn, 1.0);
        assert_eq!(cn, 0.0);
    }

    #[test]
    fn sn_cn_reference_values() {
        let (sn, cn) = sn_cn(3.0, 0.4, m(0.5)).unwrap();
        let a = amplitude(AmplitudeKind::First, 3.0, 0.4, m(0.5)).unwrap();
        assert!((a - AM1_P3_X04_Q05).abs() < 1e-10);
        assert!((sn - SN3_X04_Q05).abs() < 1e-10);
        assert!((cn - CN3_X04_Q05).abs() < 1e-10);
    }

    #[test]
    fn sn_cn_antiperiodic() {
        let (p, q) = (1.5, 0.7);
        let k = complete(IntegralKind::F1, p, m(q)).unwrap();
        for &x0 in &[0.2, 0.9, 1.7] {
            let (s0, c0) = sn_cn(p, x0, m(q)).unwrap();
            let (s1, c1) = sn_cn(p, x0 + 2.0 * k, m(q)).unwrap();
            assert!((s1 + s0).abs() < 1e-10);
            assert!((c1 + c0).abs() < 1e-10);
        }
    }

    #[test]
    fn generalized_pythagorean_identity() {
        for &p in &[1.2, 1.5, 2.0, 3.0, 6.0] {
            for &q in &[0.1, 0.5, 0.9] {
                for i in 0..21 {
                    let x = -5.0 + 0.5 * i as f64;
                    let (sn, cn) = sn_cn(p, x, m(q)).unwrap();
                    let lhs = sn * sn + cn.abs().powf(p);
                    assert!((lhs - 1.0).abs() < 1e-10, "p={p} q={q} x={x}: {lhs}");
                }
            }
        }
    }

    #[test]
    fn dn_endpoints_and_periodicity() {
        assert_eq!(dn(4.0, 0.0, m(0.9)).unwrap(), 1.0);
        let k2 = complete(IntegralKind::F2, 4.0, m(0.9)).unwrap();
        let v = dn(4.0, k2, m(0.9)).unwrap();
        assert!((v - 0.19f64.powf(0.25)).abs() < 1e-12, "got {v}");
        let (p, q) = (2.5, 0.6);
        let k2 = complete(IntegralKind::F2, p, m(q)).unwrap();
        for &x0 in &[0.3, 1.1] {
            let a = dn(p, x0, m(q)).unwrap();
            let b = dn(p, x0 + 2.0 * k2, m(q)).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn dn_reference_value() {
        let v = dn(4.0, 0.3, m(0.9)).unwrap();
        assert!((v - DN4_X03_Q09).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn dn_decreasing_on_first_period() {
        let (p, q) = (4.0, 0.9);
        let k2 = complete(IntegralKind::F2, p, m(q)).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..=16 {
            let v = dn(p, k2 * i as f64 / 16.0, m(q)).unwrap();
            assert!(v < last || i == 0);
            last = v;
        }
    }

    #[test]
    fn sech_support_and_values() {
        assert_eq!(sech(3.0, 0.0).unwrap(), 1.0);
        let k = complete(IntegralKind::F1, 3.0, m(1.0)).unwrap();
        assert_eq!(sech(3.0, k).unwrap(), 0.0);
        assert_eq!(sech(3.0, k + 5.0).unwrap(), 0.0);
        assert!(sech(3.0, 0.99 * k).unwrap() > 0.0);
        // p <= 2: positive on all of R
        let v = sech(1.5, 10.0).unwrap();
        assert!((v - SECH_P15_X10).abs() < 1e-9, "got {v}");
        assert!(v > 0.0);
        // even
        let a = sech(1.5, 2.3).unwrap();
        let b = sech(1.5, -2.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tanh_values() {
        assert_eq!(tanh(4.0, 0.0).unwrap(), 0.0);
        let k = complete(IntegralKind::F1, 4.0, m(1.0)).unwrap();
        let at_k = tanh(4.0, k).unwrap();
        assert!((at_k - E1C_P4_Q1).abs() < 1e-12, "got {at_k}");
        let beyond = tanh(4.0, 2.0 * k).unwrap();
        assert_eq!(at_k, beyond);
        let neg = tanh(4.0, -k).unwrap();
        assert_eq!(neg, -at_k);
    }

    #[test]
    fn cn_transform_derivative_matches_finite_differences() {
        // w = |cn_p|^{p-2} cn_p is C^1; check dw against centered differences
        // with O(h^2) convergence, including across a zero of cn_p
        let (p, q) = (3.0, 0.8);
        let k = complete(IntegralKind::F1, p, m(q)).unwrap();
        for &x in &[0.4, k, k - 0.013] {
            let eval = cn_eval(p, x, m(q)).unwrap();
            let mut errs = vec![];
            for &h in &[1e-3, 5e-4] {
                let wp = cn_eval(p, x + h, m(q)).unwrap().w;
                let wm = cn_eval(p, x - h, m(q)).unwrap().w;
                errs.push(((wp - wm) / (2.0 * h) - eval.dw).abs());
            }
            assert!(errs[1] < errs[0] / 2.5 || errs[0] < 1e-9, "x={x}: {errs:?}");
        }
    }

    #[test]
    fn dn_transform_derivative_matches_finite_differences() {
        let (p, q) = (2.5, 0.65);
        let x = 0.9;
        let eval = dn_eval(p, x, m(q)).unwrap();
        let h = 1e-4;
        let wp = dn_eval(p, x + h, m(q)).unwrap().w;
        let wm = dn_eval(p, x - h, m(q)).unwrap().w;
        assert!(((wp - wm) / (2.0 * h) - eval.dw).abs() < 1e-7);
    }

    #[test]
    fn pparams_constants() {
        let p = PParams::new(1.5).unwrap();
        assert_eq!(p.m_p, 2); // 1/(p-1) = 2, even integer
        assert!(p.r_p.is_none());
        assert!(!p.analytic_exponent());
        let p = PParams::new(1.6).unwrap();
        assert_eq!(p.m_p, 2); // 1/(p-1) = 5/3
        assert!((p.r_p.unwrap() - 3.0).abs() < 1e-9);
        let p = PParams::new(4.0 / 3.0).unwrap();
        assert_eq!(p.m_p, 3);
        assert!(p.r_p.is_none());
        assert!(p.analytic_exponent());
        let p = PParams::new(3.0).unwrap();
        assert_eq!(p.big_m_p, Some(2));
        assert!(p.big_r_p.is_none());
        assert!(p.k_p1.is_finite());
        let p = PParams::new(2.7).unwrap();
        assert_eq!(p.big_m_p, Some(3));
        assert!((p.big_r_p.unwrap() - 7.0).abs() < 1e-6);
        let p = PParams::new(1.8).unwrap();
        assert!(p.k_p1.is_infinite());
    }

    #[test]
    fn modulus_validation() {
        assert!(Modulus::new(-0.1).is_err());
        assert!(Modulus::new(1.1).is_err());
        assert!(Modulus::new(1.0).is_ok());
    }
}
