//! Region integrals, assembly of the counting constants, E(T, d), corollary
//! constants and bound evaluation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::integrate;
pub use crate::quad::QuadratureSpec;
use crate::regions::{f_cr_unchecked, l_star, region_intervals, BoundParams, RegionId, LOG_SLACK, YANG_CONST};
use crate::specfun::{zeta_real, EvalAccuracy};

/// Height up to which |S(T)| <= 2.5167 is known from the zero database.
pub const SMALL_T_LIMIT: f64 = 30610046000.0;
pub const PLATT_S_BOUND: f64 = 2.5167;

/// The correction E(T, d) from Backlund's trick.
pub fn e_of(t: f64, d: f64) -> Result<f64> {
    if !(t >= 5.0 / 7.0) || !t.is_finite() {
        return Err(Error::Domain(format!("E(T, d) needs T >= 5/7, got {t}")));
    }
    if !(0.0..4.5).contains(&d) {
        return Err(Error::Domain(format!("E(T, d) needs 0 <= d < 9/2, got {d}")));
    }
    let t2 = 4.0 * t * t;
    let ap = 2.0 * d + 17.0;
    let am = -2.0 * d + 17.0;
    let k = (8.0 + 6.0 * PI) / 45.0;
    let mut e = (2.0 * t / 3.0) / (ap * ap + t2) + (2.0 * t / 3.0) / (am * am + t2)
        - (4.0 * t / 3.0) / (289.0 + t2);
    e += t / 2.0 * (289.0 / t2).ln_1p() - t / 4.0 * (ap * ap / t2).ln_1p() - t / 4.0 * (am * am / t2).ln_1p();
    e += k / (ap * ap + t2).powf(1.5) + k / (am * am + t2).powf(1.5) + 2.0 * k / (289.0 + t2).powf(1.5);
    for kk in 0..4 {
        let b = 1.0 + 4.0 * kk as f64;
        e += 2.0 * (b / (2.0 * t)).atan()
            - ((2.0 * d + b) / (2.0 * t)).atan()
            - ((-2.0 * d + b) / (2.0 * t)).atan();
    }
    e += (2.0 * d + 15.0) / 4.0 * (ap / (2.0 * t)).atan() + (-2.0 * d + 15.0) / 4.0 * (am / (2.0 * t)).atan()
        - 7.5 * (17.0 / (2.0 * t)).atan();
    Ok(e)
}

/// Upper bound (640d - 112)/(1536(3T - 1)) + 2^-10 for E(T, d)/pi.
pub fn e_bound(t: f64, d: f64) -> Result<f64> {
    if !(0.25..=0.625).contains(&d) {
        return Err(Error::Domain(format!("E bound needs d in [1/4, 5/8], got {d}")));
    }
    if !(t >= 5.0 / 7.0) {
        return Err(Error::Domain(format!("E bound needs T >= 5/7, got {t}")));
    }
    Ok((640.0 * d - 112.0) / (1536.0 * (3.0 * t - 1.0)) + 2f64.powi(-10))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionIntegrals {
    pub cbar1: f64,
    pub cbar2: f64,
    pub d3: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub m1: f64,
    pub m2: f64,
    /// Integral of F_{c,r}(theta) at T = T0 over each region.
    pub per_region: BTreeMap<RegionId, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantSet {
    pub c1: f64,
    pub c2: f64,
    pub c2p: f64,
    pub c3: f64,
    pub c3p: f64,
    pub c3t: f64,
    pub c3pt: f64,
}

/// Rounds up at the fifth decimal.
pub fn round_up5(x: f64) -> f64 {
    (x * 1e5).ceil() / 1e5
}

impl ConstantSet {
    pub fn rounded_up(&self) -> ConstantSet {
        ConstantSet {
            c1: round_up5(self.c1),
            c2: round_up5(self.c2),
            c2p: round_up5(self.c2p),
            c3: round_up5(self.c3),
            c3p: round_up5(self.c3p),
            c3t: round_up5(self.c3t),
            c3pt: round_up5(self.c3pt),
        }
    }

    pub fn as_array(&self) -> [f64; 7] {
        [self.c1, self.c2, self.c2p, self.c3, self.c3p, self.c3t, self.c3pt]
    }

    pub fn from_array(a: [f64; 7]) -> ConstantSet {
        ConstantSet { c1: a[0], c2: a[1], c2p: a[2], c3: a[3], c3p: a[4], c3t: a[5], c3pt: a[6] }
    }

    pub const NAMES: [&'static str; 7] = ["C1", "C2", "C2p", "C3", "C3p", "C3t", "C3pt"];

    /// C1 log T + C2 log log T + C3.
    pub fn nt_first(&self) -> LinearBound {
        LinearBound { a: self.c1, b: self.c2, c: self.c3 }
    }
    /// C1 log T + C2' log log T + C3'.
    pub fn nt_second(&self) -> LinearBound {
        LinearBound { a: self.c1, b: self.c2p, c: self.c3p }
    }
    pub fn st_first(&self) -> LinearBound {
        LinearBound { a: self.c1, b: self.c2, c: self.c3t }
    }
    pub fn st_second(&self) -> LinearBound {
        LinearBound { a: self.c1, b: self.c2p, c: self.c3pt }
    }
}

fn kernel_acc() -> EvalAccuracy {
    EvalAccuracy { abs_tol: 1e-13, ..EvalAccuracy::default() }
}

fn log_zeta(s: f64) -> Result<f64> {
    Ok(zeta_real(s, &kernel_acc())?.ln())
}

fn sigma_k(k: usize) -> f64 {
    1.0 - k as f64 / (2f64.powi(k as i32) - 2.0)
}

/// Computes every region integral; `per_region` is the F_{c,r} breakdown at T0.
pub fn integrate_regions(p: &BoundParams, q: &QuadratureSpec) -> Result<RegionIntegrals> {
    let mut ri = integrate_core(p, q)?;
    ri.per_region = region_breakdown(p, p.t0, q)?;
    Ok(ri)
}

/// Integral of F_{c,r}(theta) at height `t` over each region.
pub fn region_breakdown(p: &BoundParams, t: f64, q: &QuadratureSpec) -> Result<BTreeMap<RegionId, f64>> {
    p.validate()?;
    let mut out = BTreeMap::new();
    let th1pe = p.theta(1.0 + p.eta);
    for (id, lo, hi) in region_intervals(p) {
        let f = |th: f64| f_cr_unchecked(th, t, p).unwrap_or(f64::NAN);
        let v = if id == RegionId::AboveOnePlusEta {
            // log zeta(sigma) is steep as sigma approaches 1 + eta
            let w = (1e-3f64).min(th1pe / 4.0);
            integrate(f, lo, hi - w, q)? + integrate(f, hi - w, hi, q)?
        } else {
            integrate(f, lo, hi, q)?
        };
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integral over {id}")));
        }
        out.insert(id, v);
    }
    Ok(out)
}

/// Everything except the per-region breakdown (cheap enough for the optimizer).
pub fn integrate_core(p: &BoundParams, q: &QuadratureSpec) -> Result<RegionIntegrals> {
    p.validate()?;
    let (c, r, eta, n) = (p.c, p.r, p.eta, p.n);
    let (c1, c2) = (p.line1.coeff, p.line1.log_power);
    let (k1, k2, k3) = (p.line_half.coeff, p.line_half.t_power, p.line_half.log_power);
    let sg = |th: f64| c + r * th.cos();
    let int = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| integrate(f, lo, hi, q);

    let th1pe = p.theta(1.0 + eta);
    let th1 = p.theta(1.0);
    let sn = sigma_k(n + 4);
    let thsn = p.theta(sn);
    let s4 = sigma_k(4);
    let ths4 = p.theta(s4);
    let thh = p.theta(0.5);
    let th0 = p.theta(0.0);
    let thme = p.theta(-eta);
    let th1mc = p.theta(1.0 - c);
    let kk = 2f64.powi((n + 4) as i32);

    let lg = (YANG_CONST * LOG_SLACK).ln();
    let lc = (c1 * LOG_SLACK.powf(c2)).ln();
    let lk = (k1 * LOG_SLACK.powf(k3)).ln();
    let l2p = (2.0 * PI).ln();
    let lz1e = log_zeta(1.0 + eta)?;
    let lzc = log_zeta(c)?;

    // C-bar 1
    let mut cbar1 = int(&|t| (kk - 1.0) * (1.0 - sg(t)) + (kk - 2.0) * (sg(t) - sn), th1, thsn)?
        / ((kk - 2.0) * (1.0 - sn));
    let mut yang_len = 0.0;
    for h in 0..n {
        let (lo, hi) = (sigma_k(4 + h), sigma_k(5 + h));
        let a = 2f64.powi((h + 4) as i32);
        let b = 2f64.powi((h + 5) as i32);
        let v = int(
            &|t| (b - 2.0) * (a - 1.0) * (hi - sg(t)) + (a - 2.0) * (b - 1.0) * (sg(t) - lo),
            p.theta(hi),
            p.theta(lo),
        )?;
        cbar1 += v / ((a - 2.0) * (b - 2.0) * (hi - lo));
        yang_len += p.theta(lo) - p.theta(hi);
    }
    cbar1 += int(&|t| 14.0 * (k2 + 1.0) * (s4 - sg(t)) + 15.0 * (sg(t) - 0.5), ths4, thh)? / (14.0 * (s4 - 0.5));
    cbar1 += 0.5 * int(&|t| 1.0 - 2.0 * sg(t) + 4.0 * k2 * sg(t), thh, th0)?;
    cbar1 += int(&|t| (1.0 - 2.0 * sg(t)) / 2.0, thme, PI)?;
    cbar1 += th1 - thh;
    cbar1 += int(
        &|t| -sg(t) * (1.0 + 2.0 * eta) / (2.0 * eta) + (sg(t) + eta) / (2.0 * eta),
        th0,
        thme,
    )?;

    // C-bar 2
    let mut cbar2 = int(&|t| (1.0 - sg(t)) + c2 * (sg(t) - sn), th1, thsn)? / (1.0 - sn);
    cbar2 += yang_len;
    cbar2 += int(&|t| k3 * (s4 - sg(t)) + (sg(t) - 0.5), ths4, thh)? / (s4 - 0.5);
    cbar2 += c2 / eta * int(&|t| 1.0 + eta - sg(t), th1pe, th1)?;
    cbar2 += int(&|t| c2 * (1.0 - 2.0 * sg(t)) + 2.0 * k3 * sg(t), thh, th0)?;
    cbar2 += int(&|t| (sg(t) + eta) / eta * c2, th0, thme)?;

    // D3
    let mut d3 = lc / eta * int(&|t| 1.0 + eta - sg(t), th1pe, th1)?;
    d3 += lz1e / eta * int(&|t| sg(t) - 1.0, th1pe, th1)?;
    d3 += lg / (1.0 - sn) * int(&|t| 1.0 - sg(t), th1, thsn)?;
    d3 += lc / (1.0 - sn) * int(&|t| sg(t) - sn, th1, thsn)?;
    d3 += lg * yang_len;
    d3 += lk / (s4 - 0.5) * int(&|t| s4 - sg(t), ths4, thh)?;
    d3 += lg / (s4 - 0.5) * int(&|t| sg(t) - 0.5, ths4, thh)?;
    d3 += (lc - 0.5 * l2p) * int(&|t| 1.0 - 2.0 * sg(t), thh, th0)?;
    d3 += 2.0 * lk * int(&sg, thh, th0)?;
    let e_coef = ((1.0 + eta) / (c1 * (2.0 * PI).powf(eta))).ln();
    d3 += int(&|t| -sg(t) / eta * e_coef + lc - 0.5 * l2p, th0, thme)?;
    d3 -= l2p * int(&|t| (1.0 - 2.0 * sg(t)) / 2.0, thme, PI)?;
    d3 += (lz1e + lzc) / 2.0 * (th1pe - PI / 2.0);
    d3 += PI / (4.0 * p.j1 as f64) * lzc;
    d3 += (lz1e + lzc) / 2.0 * (th1mc - thme);
    d3 += (PI - th1mc) / (2.0 * p.j2 as f64) * lzc;

    let kappa1 = kappa1(p)?;
    let kappa2 = kappa2(p)?;

    // M1, M2
    let ls = |j: f64, t: f64| l_star(j, t, p);
    let q0 = p.q0();
    let q0n = q0.max(p.q_line(n + 4));
    let mut m1 = int(&|t| ls(-1.0, t), 0.0, th1pe)?;
    m1 += int(&|t| ls(q0, t), th1pe, th1)?;
    m1 += int(
        &|t| ls(-1.0, t) + 0.5 * (1.0 - 2.0 * sg(t) + 4.0 * k2 * sg(t)) * ls(p.q11(), t),
        thh,
        th0,
    )?;
    m1 += int(&|t| ((kk - 1.0) * (1.0 - sg(t)) + (kk - 2.0) * (sg(t) - sn)) * ls(q0n, t), th1, thsn)?
        / ((kk - 2.0) * (1.0 - sn));
    let mut m2 = int(&|t| c2 / eta * (1.0 + eta - sg(t)) * ls(q0, t), th1pe, th1)?;
    m2 += int(&|t| ((1.0 - sg(t)) + c2 * (sg(t) - sn)) * ls(q0n, t), th1, thsn)? / (1.0 - sn);
    for h in 0..n {
        let (lo, hi) = (sigma_k(4 + h), sigma_k(5 + h));
        let a = 2f64.powi((h + 4) as i32);
        let b = 2f64.powi((h + 5) as i32);
        let qh = p.q_line(4 + h).max(p.q_line(5 + h));
        let v = int(
            &|t| ((b - 2.0) * (a - 1.0) * (hi - sg(t)) + (a - 2.0) * (b - 1.0) * (sg(t) - lo)) * ls(qh, t),
            p.theta(hi),
            p.theta(lo),
        )?;
        m1 += v / ((a - 2.0) * (b - 2.0) * (hi - lo));
        m2 += int(&|t| ls(qh, t), p.theta(hi), p.theta(lo))?;
    }
    m1 += int(
        &|t| (14.0 * (k2 + 1.0) * (s4 - sg(t)) + 15.0 * (sg(t) - 0.5)) * ls(p.q2(), t),
        ths4,
        thh,
    )? / (14.0 * (s4 - 0.5));
    m1 += int(&|t| ls(-1.0, t) + (0.5 - sg(t)) * ls(p.q10(), t), th0, thme)?;
    m1 += int(&|t| ls(-1.0, t) + (1.0 - 2.0 * sg(t)) / 2.0 * ls(1.0, t), thme, PI)?;
    m2 += int(&|t| (k3 * (s4 - sg(t)) + (sg(t) - 0.5)) * ls(p.q2(), t), ths4, thh)? / (s4 - 0.5);
    m2 += int(&|t| (c2 * (1.0 - 2.0 * sg(t)) + 2.0 * k3 * sg(t)) * ls(p.q11(), t), thh, th0)?;
    m2 += int(&|t| (sg(t) + eta) / eta * c2 * ls(p.q10(), t), th0, thme)?;

    let t0 = p.t0;
    let kappa3 = m1.max(0.0) / (2.0 * t0) + m2.max(0.0) / (2.0 * t0 * t0.ln().ln());

    let ri = RegionIntegrals { cbar1, cbar2, d3, kappa1, kappa2, kappa3, m1, m2, per_region: BTreeMap::new() };
    if [cbar1, cbar2, d3, kappa1, kappa2, kappa3, m1, m2].iter().any(|x| !x.is_finite()) {
        return Err(Error::Quadrature("non-finite region integral".into()));
    }
    Ok(ri)
}

/// pi/(4 J1) (log zeta(c+r) + 2 sum_{j<J1} log zeta(c + r cos(pi j / (2 J1)))).
pub fn kappa1(p: &BoundParams) -> Result<f64> {
    let j1 = p.j1 as f64;
    let mut s = log_zeta(p.c + p.r)?;
    for j in 1..p.j1 {
        s += 2.0 * log_zeta(p.c + p.r * (PI * j as f64 / (2.0 * j1)).cos())?;
    }
    Ok(PI / (4.0 * j1) * s)
}

/// The matching trapezoid sum on the far side of the circle.
pub fn kappa2(p: &BoundParams) -> Result<f64> {
    let j2 = p.j2 as f64;
    let th = p.theta(1.0 - p.c);
    let mut s = log_zeta(1.0 - p.c + p.r)?;
    for j in 1..p.j2 {
        let jf = j as f64;
        s += 2.0 * log_zeta(1.0 - p.c - p.r * (PI * jf / j2 + (1.0 - jf / j2) * th).cos())?;
    }
    Ok((PI - th) / (2.0 * j2) * s)
}

/// Assembles the seven constants; T-dependent residuals are taken at T0.
pub fn assemble(p: &BoundParams, ri: &RegionIntegrals) -> Result<ConstantSet> {
    p.validate()?;
    let rr = p.log_ratio();
    let t0 = p.t0;
    let sigma1 = p.sigma1();
    let delta = p.delta();
    let c1 = ri.cbar1 / (2.0 * PI * rr);
    let c2 = ri.cbar2 / (2.0 * PI * rr);
    let c2p = c2 + p.big_b / (2.0 * rr);
    // everything in C3' except 7/8 and 1/(50 T0)
    let base = 0.25
        + log_zeta(sigma1)? / PI
        + 0.5 * e_bound(t0, delta)?
        + (ri.d3 + ri.kappa1 + ri.kappa2 + ri.kappa3) / (2.0 * PI * rr);
    let zeta_ratio = (log_zeta(p.c)? - log_zeta(2.0 * p.c)?) / (2.0 * rr);
    let head = 7.0 / 8.0 + 1.0 / (50.0 * t0);
    let arct = (((sigma1 - 1.0) / t0).atan() + (1.0 / (2.0 * t0)).atan()) / PI;
    let cs = ConstantSet {
        c1,
        c2,
        c2p,
        c3: head + base + zeta_ratio,
        c3p: head + base,
        c3t: base + zeta_ratio + arct,
        c3pt: base + arct,
    };
    if cs.as_array().iter().any(|x| !x.is_finite()) || !(c1 > 0.0) {
        return Err(Error::Quadrature("assembled constants are not finite and positive".into()));
    }
    Ok(cs)
}

/// integrate_core followed by assemble.
pub fn constants_for(p: &BoundParams, q: &QuadratureSpec) -> Result<ConstantSet> {
    let ri = integrate_core(p, q)?;
    assemble(p, &ri)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryConstants {
    pub script_c3: f64,
    pub script_c3p: f64,
    pub script_d3: f64,
    pub script_d3p: f64,
    pub script_e: f64,
    pub script_ep: f64,
}

/// Constants of the unit- and short-interval zero counts.
pub fn corollary_constants(cs: &ConstantSet) -> CorollaryConstants {
    let l2pe = (2.0 * PI * std::f64::consts::E).ln();
    let c = |x: f64| 2.0 * x + 3.0 / (4.0 * PI) - l2pe / (2.0 * PI);
    let d = |x: f64| 2.0 * x + (3f64.ln() - l2pe) / PI;
    let e = |x: f64| 2.0 * x + 1.0 / PI + (0.75f64).ln() / (2.0 * PI) - l2pe / PI;
    CorollaryConstants {
        script_c3: c(cs.c3t),
        script_c3p: c(cs.c3pt),
        script_d3: d(cs.c3t),
        script_d3p: d(cs.c3pt),
        script_e: e(cs.c3t),
        script_ep: e(cs.c3pt),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMode {
    /// C1 log T + min{C2 log log T + C3, C2' log log T + C3'}.
    NT,
    /// The same with the S(T) constants.
    ST,
    /// 2.5167 + 1/(50e) + 7/8 for e <= T <= 30610046000.
    SmallT,
}

pub fn small_t_bound() -> f64 {
    PLATT_S_BOUND + 1.0 / (50.0 * std::f64::consts::E) + 7.0 / 8.0
}

pub fn eval_bound(t: f64, cs: &ConstantSet, mode: BoundMode) -> Result<f64> {
    if !(t >= std::f64::consts::E) || !t.is_finite() {
        return Err(Error::Domain(format!("bounds are stated for T >= e, got {t}")));
    }
    let l = t.ln();
    match mode {
        BoundMode::NT => Ok(cs.nt_first().eval_log(l).min(cs.nt_second().eval_log(l))),
        BoundMode::ST => Ok(cs.st_first().eval_log(l).min(cs.st_second().eval_log(l))),
        BoundMode::SmallT => {
            if t > SMALL_T_LIMIT {
                return Err(Error::Domain(format!("small-T branch needs T <= {SMALL_T_LIMIT}, got {t}")));
            }
            Ok(small_t_bound())
        }
    }
}

/// a log T + b log log T + c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearBound {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LinearBound {
    pub fn eval_log(&self, log_t: f64) -> f64 {
        let ll = if log_t > 0.0 { log_t.ln() } else { f64::NEG_INFINITY };
        let lterm = if self.b == 0.0 { 0.0 } else { self.b * ll };
        self.a * log_t + lterm + self.c
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_log(t.ln())
    }
}

const CROSS_LOG_MAX: f64 = 1e7;

/// log T at which the two bounds cross, found by bisection in log T over [1, 1e7].
pub fn crossover_log(b1: &LinearBound, b2: &LinearBound) -> Result<f64> {
    let f = |l: f64| b1.eval_log(l) - b2.eval_log(l);
    let (mut lo, mut hi) = (1.0, CROSS_LOG_MAX);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoCrossing(format!(
            "difference keeps sign {} on log T in [1, {CROSS_LOG_MAX}]",
            flo.signum()
        )));
    }
    // relative error of T is the absolute error of log T
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn crossover(b1: &LinearBound, b2: &LinearBound) -> Result<f64> {
    crossover_log(b1, b2).map(f64::exp)
}
