//! Circle geometry and the piecewise majorant F_{c,r}(theta).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{zeta_complex, zeta_real, ComplexPoint, EvalAccuracy};

/// 1.00212 log|Q+s| bounds |log(Q+s)| once T is past the verified height.
pub const LOG_SLACK: f64 = 1.00212;
/// Constant of the explicit bounds on the sigma_k lines.
pub const YANG_CONST: f64 = 1.546;

/// |zeta(sigma0 + it)| <= coeff * t^t_power * (log t)^log_power for t >= t_min.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBound {
    pub coeff: f64,
    pub t_power: f64,
    pub log_power: f64,
    pub t_min: f64,
}

impl LineBound {
    pub fn new(coeff: f64, t_power: f64, log_power: f64, t_min: f64) -> Result<Self> {
        let lb = LineBound { coeff, t_power, log_power, t_min };
        let v = lb.violations("line");
        if v.is_empty() {
            Ok(lb)
        } else {
            Err(Error::Constraint(v))
        }
    }

    fn violations(&self, name: &str) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.coeff > 0.0) || !self.coeff.is_finite() {
            v.push(format!("{name}: coeff > 0"));
        }
        if !(self.t_power >= 0.0) || !self.t_power.is_finite() {
            v.push(format!("{name}: t_power >= 0"));
        }
        if !(self.log_power >= 0.0) || !self.log_power.is_finite() {
            v.push(format!("{name}: log_power >= 0"));
        }
        if !(self.t_min >= std::f64::consts::E) {
            v.push(format!("{name}: t_min >= e"));
        }
        v
    }
}

/// Free parameters of the general counting theorem.
///
/// `q` holds Q0..Q3, then Q4..Q_{n+4} for the sigma_k lines, then Q10 and Q11
/// (the last two keep their names for any n); with n = 5 this is the usual
/// twelve-entry vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub c: f64,
    pub r: f64,
    pub eta: f64,
    pub n: usize,
    pub q: Vec<f64>,
    pub j1: usize,
    pub j2: usize,
    pub t0: f64,
    pub line1: LineBound,
    pub line_half: LineBound,
    pub b: f64,
    pub big_b: f64,
}

pub const PAPER_Q: [f64; 12] = [1.0, 1.18, 1.18, 3.9, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.3, 3.9];
pub const PAPER_T0: f64 = 30610046000.0;
/// Largest n for which sigma_{n+4} is still tabulated.
pub const MAX_N: usize = 56;

impl BoundParams {
    /// The published instantiation (n = 5, J1 = 64, J2 = 39, T0 = 30610046000)
    /// around a chosen (c, r, eta).
    pub fn published(c: f64, r: f64, eta: f64) -> Self {
        BoundParams {
            c,
            r,
            eta,
            n: 5,
            q: PAPER_Q.to_vec(),
            j1: 64,
            j2: 39,
            t0: PAPER_T0,
            line1: LineBound { coeff: 1.0, t_power: 0.0, log_power: 1.0, t_min: 3.0 },
            line_half: LineBound { coeff: 66.7, t_power: 27.0 / 164.0, log_power: 0.0, t_min: 105f64.exp() },
            b: 24.302,
            big_b: 2.00204,
        }
    }

    pub fn with_point(&self, c: f64, r: f64, eta: f64) -> Self {
        BoundParams { c, r, eta, ..self.clone() }
    }

    /// Changes n, keeping Q0..Q3, Q10, Q11 and filling the line entries with
    /// the last line value (1 if there was none).
    pub fn with_n(&self, n: usize) -> Self {
        let m = self.q.len();
        let mut q = self.q[..4.min(m)].to_vec();
        let fill = if m >= 7 { self.q[m - 3] } else { 1.0 };
        for k in 4..=n + 4 {
            q.push(if k < m.saturating_sub(2) { self.q[k] } else { fill });
        }
        if m >= 2 {
            q.extend_from_slice(&self.q[m - 2..]);
        }
        BoundParams { n, q, ..self.clone() }
    }

    pub fn sigma1(&self) -> f64 {
        self.c + (self.c - 0.5).powi(2) / self.r
    }

    pub fn delta(&self) -> f64 {
        2.0 * self.c - self.sigma1() - 0.5
    }

    /// log(r / (c - 1/2)).
    pub fn log_ratio(&self) -> f64 {
        (self.r / (self.c - 0.5)).ln()
    }

    pub fn theta(&self, y: f64) -> f64 {
        theta_y(y, self)
    }

    pub fn sigma_at(&self, theta: f64) -> f64 {
        self.c + self.r * theta.cos()
    }

    pub fn q0(&self) -> f64 {
        self.q[0]
    }
    pub fn q1(&self) -> f64 {
        self.q[1]
    }
    pub fn q2(&self) -> f64 {
        self.q[2]
    }
    pub fn q3(&self) -> f64 {
        self.q[3]
    }
    /// Q_k for 4 <= k <= n+4.
    pub fn q_line(&self, k: usize) -> f64 {
        self.q[k]
    }
    pub fn q10(&self) -> f64 {
        self.q[self.n + 5]
    }
    pub fn q11(&self) -> f64 {
        self.q[self.n + 6]
    }

    /// Every failed condition, in the order of the constraint chain.
    pub fn violations(&self) -> Vec<String> {
        let mut v = chain_violations(self.c, self.r, self.eta);
        if self.n == 0 || self.n > MAX_N {
            v.push(format!("1 <= n <= {MAX_N}"));
        }
        if self.q.len() != self.n + 7 {
            v.push(format!("Q vector has {} entries, expected n + 7 = {}", self.q.len(), self.n + 7));
        } else {
            if self.q.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                v.push("all Q entries > 0".into());
            }
            if self.q2() < self.q1().max(self.q_line(4)) {
                v.push("Q2 >= max(Q1, Q4)".into());
            }
            if self.q11() < self.q3().max(self.q10()) {
                v.push("Q11 >= max(Q3, Q10)".into());
            }
        }
        if self.j1 == 0 {
            v.push("J1 >= 1".into());
        }
        if self.j2 == 0 {
            v.push("J2 >= 1".into());
        }
        if !(self.t0 >= std::f64::consts::E) || !self.t0.is_finite() {
            v.push("T0 >= e".into());
        }
        v.extend(self.line1.violations("line1"));
        if self.line1.t_power != 0.0 {
            v.push("line1: t_power = 0".into());
        }
        v.extend(self.line_half.violations("line_half"));
        if !(self.b > 0.0) {
            v.push("b > 0".into());
        }
        if !(self.big_b > 0.0) {
            v.push("B > 0".into());
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Constraint(v))
        }
    }
}

/// The inequality chain on (c, r, eta) alone.
pub fn chain_violations(c: f64, r: f64, eta: f64) -> Vec<String> {
    let mut v = Vec::new();
    if ![c, r, eta].iter().all(|x| x.is_finite()) {
        v.push("c, r, eta finite".into());
        return v;
    }
    if !(eta > 0.0 && eta <= 0.5) {
        v.push("0 < eta <= 1/2".into());
    }
    if !(c > 0.5 && r > 0.0) {
        v.push("c > 1/2 and r > 0".into());
        return v;
    }
    let sigma1 = c + (c - 0.5).powi(2) / r;
    let delta = 2.0 * c - sigma1 - 0.5;
    if !(-0.5 < c - r) {
        v.push("-1/2 < c - r".into());
    }
    if !(c - r < 1.0 - c) {
        v.push("c - r < 1 - c".into());
    }
    if !(1.0 - c < -eta) {
        v.push("1 - c < -eta".into());
    }
    if !(-eta < 0.25) {
        v.push("-eta < 1/4".into());
    }
    if !(0.25 <= delta) {
        v.push(format!("1/4 <= delta (delta = {delta})"));
    }
    if !(delta < 0.5) {
        v.push(format!("delta < 1/2 (delta = {delta})"));
    }
    if !(1.0 + eta < sigma1) {
        v.push("1 + eta < sigma1".into());
    }
    if !(sigma1 < c + r) {
        v.push("sigma1 < c + r".into());
    }
    let th = theta_cr(1.0 + eta, c, r);
    if !(th <= 2.1) {
        v.push(format!("theta_(1+eta) <= 2.1 (got {th})"));
    }
    v
}

fn theta_cr(y: f64, c: f64, r: f64) -> f64 {
    if y >= c + r {
        0.0
    } else if y <= c - r {
        PI
    } else {
        ((y - c) / r).clamp(-1.0, 1.0).acos()
    }
}

/// Angle on the circle |s - c| = r at which Re s = y, clamped to [0, pi].
pub fn theta_y(y: f64, p: &BoundParams) -> f64 {
    theta_cr(y, p.c, p.r)
}

/// sigma_k = 1 - k / (2^k - 2).
pub fn sigma_index(k: u32) -> Result<f64> {
    if !(4..=60).contains(&k) {
        return Err(Error::Domain(format!("sigma_k needs 4 <= k <= 60, got {k}")));
    }
    let kf = k as f64;
    Ok(1.0 - kf / (2f64.powi(k as i32) - 2.0))
}

fn sigma_k(k: usize) -> f64 {
    let kf = k as f64;
    1.0 - kf / (2f64.powi(k as i32) - 2.0)
}

fn modulus_sq(j: f64, theta: f64, t: f64, p: &BoundParams) -> f64 {
    let x = j + p.c + p.r * theta.cos();
    let y = (p.r * theta.sin()).abs() + t;
    x * x + y * y
}

/// L_j(theta) at height T.
pub fn l_j(j: f64, theta: f64, t: f64, p: &BoundParams) -> f64 {
    (modulus_sq(j, theta, t, p) / (t * t)).ln()
}

/// M_j(theta) at height T.
pub fn m_j(j: f64, theta: f64, t: f64, p: &BoundParams) -> f64 {
    modulus_sq(j, theta, t, p).ln().ln() - (t * t).ln().ln()
}

/// L_j^*(theta), the T-free majorant of T * L_j(theta).
pub fn l_star(j: f64, theta: f64, p: &BoundParams) -> f64 {
    let x = j + p.c + p.r * theta.cos();
    let s = p.r * theta.sin();
    x * x / p.t0 + s * s / p.t0 + 2.0 * s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    AboveOnePlusEta,
    OneToOnePlusEta,
    SigmaNp4ToOne,
    /// sigma_{4+h} <= sigma <= sigma_{5+h}.
    YangBand(usize),
    HalfToSigma4,
    ZeroToHalf,
    MinusEtaToZero,
    BelowMinusEta,
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::YangBand(h) => write!(f, "YangBand{h}"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl std::str::FromStr for RegionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "AboveOnePlusEta" => RegionId::AboveOnePlusEta,
            "OneToOnePlusEta" => RegionId::OneToOnePlusEta,
            "SigmaNp4ToOne" => RegionId::SigmaNp4ToOne,
            "HalfToSigma4" => RegionId::HalfToSigma4,
            "ZeroToHalf" => RegionId::ZeroToHalf,
            "MinusEtaToZero" => RegionId::MinusEtaToZero,
            "BelowMinusEta" => RegionId::BelowMinusEta,
            other => match other.strip_prefix("YangBand").and_then(|h| h.parse().ok()) {
                Some(h) => RegionId::YangBand(h),
                None => return Err(Error::Config(format!("unknown region {other}"))),
            },
        })
    }
}

impl Serialize for RegionId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RegionId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Regions with their angular extent [lo, hi], in increasing theta.
/// Empty intervals are dropped.
pub fn region_intervals(p: &BoundParams) -> Vec<(RegionId, f64, f64)> {
    let mut cuts = vec![(RegionId::AboveOnePlusEta, 0.0)];
    cuts.push((RegionId::OneToOnePlusEta, p.theta(1.0 + p.eta)));
    cuts.push((RegionId::SigmaNp4ToOne, p.theta(1.0)));
    for h in (0..p.n).rev() {
        cuts.push((RegionId::YangBand(h), p.theta(sigma_k(5 + h))));
    }
    cuts.push((RegionId::HalfToSigma4, p.theta(sigma_k(4))));
    cuts.push((RegionId::ZeroToHalf, p.theta(0.5)));
    cuts.push((RegionId::MinusEtaToZero, p.theta(0.0)));
    cuts.push((RegionId::BelowMinusEta, p.theta(-p.eta)));
    let mut out = Vec::with_capacity(cuts.len());
    for (i, &(id, lo)) in cuts.iter().enumerate() {
        let hi = cuts.get(i + 1).map_or(PI, |c| c.1);
        if hi > lo {
            out.push((id, lo, hi));
        }
    }
    out
}

/// All region breakpoints in [0, pi], ascending, endpoints included.
pub fn breakpoints(p: &BoundParams) -> Vec<f64> {
    let iv = region_intervals(p);
    let mut pts: Vec<f64> = iv.iter().map(|r| r.1).collect();
    pts.push(PI);
    pts
}

/// Region containing sigma = c + r cos(theta); a breakpoint belongs to the
/// region on its higher-sigma side.
pub fn region_of(theta: f64, p: &BoundParams) -> RegionId {
    let s = p.sigma_at(theta);
    if s >= 1.0 + p.eta {
        return RegionId::AboveOnePlusEta;
    }
    if s >= 1.0 {
        return RegionId::OneToOnePlusEta;
    }
    if s >= sigma_k(p.n + 4) {
        return RegionId::SigmaNp4ToOne;
    }
    for h in (0..p.n).rev() {
        if s >= sigma_k(4 + h) {
            return RegionId::YangBand(h);
        }
    }
    if s >= 0.5 {
        return RegionId::HalfToSigma4;
    }
    if s >= 0.0 {
        return RegionId::ZeroToHalf;
    }
    if s >= -p.eta {
        return RegionId::MinusEtaToZero;
    }
    RegionId::BelowMinusEta
}

/// The majorant F_{c,r}(theta) of (1/N) log|f_N| at height T.
pub fn f_cr(theta: f64, t: f64, p: &BoundParams) -> Result<f64> {
    p.validate()?;
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    if !(t >= p.t0) {
        return Err(Error::Domain(format!("T must be at least T0 = {}, got {t}", p.t0)));
    }
    f_cr_unchecked(theta, t, p)
}

/// min over both heights T ± r|sin θ| of F_{c,r}(θ, T) − log|(s − 1)ζ(s)|
/// at s = c + r cos θ + i(T ± r|sin θ|). Negative means F fails to majorize.
/// No height restriction is applied to T.
pub fn dominance_margin(theta: f64, t: f64, p: &BoundParams) -> Result<f64> {
    let f = f_cr_unchecked(theta, t, p)?;
    let acc = EvalAccuracy { abs_tol: 1e-10, ..EvalAccuracy::default() };
    let sigma = p.sigma_at(theta);
    let mut worst = f64::INFINITY;
    for sg in [1.0, -1.0] {
        let s = ComplexPoint::new(sigma, t + sg * (p.r * theta.sin()).abs());
        let actual = ((s - 1.0) * zeta_complex(s, &acc)?).norm().ln();
        worst = worst.min(f - actual);
    }
    Ok(worst)
}

/// F_{c,r} without the T >= T0 and parameter checks; used for desk-height probes.
pub fn f_cr_unchecked(theta: f64, t: f64, p: &BoundParams) -> Result<f64> {
    let acc = EvalAccuracy { abs_tol: 1e-13, ..EvalAccuracy::default() };
    let s = p.sigma_at(theta);
    let eta = p.eta;
    let (c1, c2) = (p.line1.coeff, p.line1.log_power);
    let (k1, k2, k3) = (p.line_half.coeff, p.line_half.t_power, p.line_half.log_power);
    let lt = t.ln();
    let llt = lt.ln();
    let lg = (YANG_CONST * LOG_SLACK).ln();
    let lc = (c1 * LOG_SLACK.powf(c2)).ln();
    let lk = (k1 * LOG_SLACK.powf(k3)).ln();
    let half_l = |j: f64| 0.5 * l_j(j, theta, t, p) + lt;
    let mm = |j: f64| m_j(j, theta, t, p) + llt;
    let v = match region_of(theta, p) {
        RegionId::AboveOnePlusEta => 0.5 * l_j(-1.0, theta, t, p) + lt + zeta_real(s, &acc)?.ln(),
        RegionId::OneToOnePlusEta => {
            let w = (1.0 + eta - s) / eta;
            w * lc
                + (s - 1.0) / eta * zeta_real(1.0 + eta, &acc)?.ln()
                + half_l(p.q0())
                + c2 * w * mm(p.q0())
        }
        RegionId::SigmaNp4ToOne => {
            let sn = sigma_k(p.n + 4);
            let a = (1.0 - s) / (1.0 - sn);
            let b = (s - sn) / (1.0 - sn);
            let q = p.q0().max(p.q_line(p.n + 4));
            let kk = 2f64.powi((p.n + 4) as i32);
            a * lg + b * lc + (a * (kk - 1.0) / (kk - 2.0) + b) * half_l(q) + (a + c2 * b) * mm(q)
        }
        RegionId::YangBand(h) => {
            let (lo, hi) = (sigma_k(4 + h), sigma_k(5 + h));
            let q = p.q_line(4 + h).max(p.q_line(5 + h));
            let a = 2f64.powi((h + 4) as i32);
            let b = 2f64.powi((h + 5) as i32);
            let coef = (a - 1.0) * (hi - s) / ((a - 2.0) * (hi - lo))
                + (b - 1.0) * (s - lo) / ((b - 2.0) * (hi - lo));
            lg + mm(q) + coef * half_l(q)
        }
        RegionId::HalfToSigma4 => {
            let s4 = sigma_k(4);
            let a = (s4 - s) / (s4 - 0.5);
            let b = (s - 0.5) / (s4 - 0.5);
            let q = p.q2();
            a * lk + b * lg + ((k2 + 1.0) * a + 15.0 / 14.0 * b) * half_l(q) + (k3 * a + b) * mm(q)
        }
        RegionId::ZeroToHalf => {
            let q = p.q11();
            (1.0 - 2.0 * s) * (lc - 0.5 * (2.0 * PI).ln())
                + 2.0 * s * lk
                + 0.5 * l_j(-1.0, theta, t, p)
                + lt
                + (1.0 - 2.0 * s + 4.0 * k2 * s) / 2.0 * half_l(q)
                + (c2 * (1.0 - 2.0 * s) + 2.0 * k3 * s) * mm(q)
        }
        RegionId::MinusEtaToZero => {
            let q = p.q10();
            -s / eta * ((1.0 + eta) / (c1 * (2.0 * PI).powf(eta))).ln()
                + lc
                - 0.5 * (2.0 * PI).ln()
                + 0.5 * l_j(-1.0, theta, t, p)
                + lt
                + (-s * (1.0 + 2.0 * eta) / (2.0 * eta) + (s + eta) / (2.0 * eta)) * half_l(q)
                + (s + eta) / eta * c2 * mm(q)
        }
        RegionId::BelowMinusEta => {
            let fl = s.floor();
            let mut v = zeta_real(1.0 - s, &acc)?.ln()
                + 0.5 * l_j(-1.0, theta, t, p)
                + (1.0 + (1.0 - 2.0 * s) / 2.0) * lt
                - (1.0 - 2.0 * s) / 2.0 * (2.0 * PI).ln()
                + (1.0 - 2.0 * s + 2.0 * fl) / 4.0 * l_j(1.0 - fl, theta, t, p);
            let terms = (-fl).max(0.0) as usize;
            for j in 1..=terms {
                v += 0.5 * l_j(j as f64 - 1.0, theta, t, p);
            }
            v
        }
    };
    Ok(v)
}
