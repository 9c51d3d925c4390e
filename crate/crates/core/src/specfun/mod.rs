//! Special functions: zeta on and off the real axis, Im log Gamma, g(T),
//! and the Riemann-Siegel theta and Z functions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
mod rs_coeffs;

pub type ComplexPoint = Complex64;

/// Absolute error target and the largest direct-sum length allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalAccuracy {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl EvalAccuracy {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(Error::Domain(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_terms < 8 {
            return Err(Error::Domain(format!("max_terms must be at least 8, got {max_terms}")));
        }
        Ok(EvalAccuracy { abs_tol, max_terms })
    }
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        EvalAccuracy { abs_tol: 1e-12, max_terms: 1 << 24 }
    }
}

/// B_2, B_4, ..., B_26.
const BERNOULLI: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

const MAX_EM_TERMS: usize = 12;

/// B_{2k}/(2k)! for k = 1..=13.
fn em_coeffs() -> [f64; 13] {
    let mut out = [0.0; 13];
    let mut fact = 1.0;
    for k in 1..=13 {
        fact *= ((2 * k - 1) * (2 * k)) as f64;
        out[k - 1] = BERNOULLI[k - 1] / fact;
    }
    out
}

/// Chooses the direct-sum length N and the number m of Bernoulli corrections
/// so that the standard Euler-Maclaurin remainder bound is below `tol`.
fn em_plan(s: Complex64, acc: &EvalAccuracy) -> Result<(usize, usize)> {
    let sigma = s.re;
    let coef = em_coeffs();
    let mut n = ((s.im.abs() / (2.0 * PI)).ceil() as usize).max(10);
    loop {
        if n > acc.max_terms {
            return Err(Error::Accuracy(format!(
                "Euler-Maclaurin needs more than {} terms at s = {s}",
                acc.max_terms
            )));
        }
        let nf = n as f64;
        // |T_k| = |B_2k/(2k)!| * |s(s+1)...(s+2k-2)| * N^(-sigma-2k+1)
        let mut poch = s.norm();
        let mut npow = nf.powf(-sigma - 1.0);
        for m in 0..=MAX_EM_TERMS {
            let k = m + 1;
            let t_next = coef[k - 1].abs() * poch * npow;
            let denom = sigma + (2 * m + 1) as f64;
            if denom > 0.0 {
                let rem = t_next * (s + (2 * m + 1) as f64).norm() / denom;
                if rem <= acc.abs_tol {
                    return Ok((n, m));
                }
            }
            poch *= (s + (2 * k - 1) as f64).norm() * (s + (2 * k) as f64).norm();
            npow /= nf * nf;
        }
        n = ((nf * 1.25).ceil() as usize) + 1;
    }
}

fn em_complex(s: Complex64, n: usize, m: usize) -> Complex64 {
    let coef = em_coeffs();
    let mut sum = Complex64::new(0.0, 0.0);
    for j in (1..n).rev() {
        let l = (j as f64).ln();
        let mag = (-s.re * l).exp();
        let ph = -s.im * l;
        sum += Complex64::new(mag * ph.cos(), mag * ph.sin());
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_ms = {
        let mag = (-s.re * ln_n).exp();
        let ph = -s.im * ln_n;
        Complex64::new(mag * ph.cos(), mag * ph.sin())
    };
    sum += n_ms * nf / (s - 1.0);
    sum += n_ms * 0.5;
    let mut poch = s;
    let mut npow = n_ms / nf;
    for k in 1..=m {
        sum += poch * npow * coef[k - 1];
        poch *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        npow /= nf * nf;
    }
    sum
}

/// Riemann zeta for real sigma > 1.
pub fn zeta_real(sigma: f64, acc: &EvalAccuracy) -> Result<f64> {
    if !(sigma > 1.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("zeta_real needs sigma > 1, got {sigma}")));
    }
    if sigma > 60.0 {
        // 2^-60 is already below any sensible tolerance
        return Ok(1.0 + 2f64.powf(-sigma) + 3f64.powf(-sigma));
    }
    let s = Complex64::new(sigma, 0.0);
    let (n, m) = em_plan(s, acc)?;
    let coef = em_coeffs();
    let mut sum = 0.0;
    for j in (1..n).rev() {
        sum += (j as f64).powf(-sigma);
    }
    let nf = n as f64;
    let n_ms = nf.powf(-sigma);
    sum += n_ms * nf / (sigma - 1.0) + 0.5 * n_ms;
    let mut poch = sigma;
    let mut npow = n_ms / nf;
    for k in 1..=m {
        sum += poch * npow * coef[k - 1];
        let kf = k as f64;
        poch *= (sigma + 2.0 * kf - 1.0) * (sigma + 2.0 * kf);
        npow /= nf * nf;
    }
    Ok(sum)
}

/// Riemann zeta for complex s with |Im s| <= 10^7.
pub fn zeta_complex(s: ComplexPoint, acc: &EvalAccuracy) -> Result<ComplexPoint> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole);
    }
    if s.im.abs() > 1e7 {
        return Err(Error::Range(format!("|Im s| = {} exceeds 1e7", s.im.abs())));
    }
    let (n, m) = em_plan(s, acc)?;
    Ok(em_complex(s, n, m))
}

/// Imaginary part of log Gamma(z) for Re z > 0, continuous from the real axis.
pub fn im_log_gamma(z: ComplexPoint) -> Result<f64> {
    if !(z.re > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("im_log_gamma needs Re z > 0, got {z}")));
    }
    let mut shift = 0.0;
    let mut w = z;
    while w.norm() < 10.0 {
        shift += w.arg();
        w += 1.0;
    }
    Ok(stirling_im(w) - shift)
}

// Im of (w - 1/2) log w - w + 1/2 log 2pi + sum B_2k / (2k(2k-1) w^(2k-1)), seven terms.
fn stirling_im(w: Complex64) -> f64 {
    let lead = (w.re - 0.5) * w.arg() + w.im * w.norm().ln() - w.im;
    lead + stirling_tail(w).im
}

fn stirling_tail(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut p = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=7 {
        let kk = (2 * k) as f64;
        acc += p * (BERNOULLI[k - 1] / (kk * (kk - 1.0)));
        p *= inv2;
    }
    acc
}

/// g(T) = 2/pi Im log Gamma(1/4 + iT/2) - (T/pi) log(T/(2e)) + 1/4.
pub fn g_of_t(t: f64) -> Result<f64> {
    if !(t >= 5.0 / 7.0) || !t.is_finite() {
        return Err(Error::Domain(format!("g(T) needs T >= 5/7, got {t}")));
    }
    let y = t / 2.0;
    if y >= 10.0 {
        // the leading terms cancel analytically against the main term
        let z = Complex64::new(0.25, y);
        let v = 0.5 * y * (1.0 / (16.0 * y * y)).ln_1p()
            + 0.25 * (1.0 / (4.0 * y)).atan()
            + stirling_tail(z).im;
        return Ok(2.0 / PI * v);
    }
    let im = im_log_gamma(Complex64::new(0.25, y))?;
    Ok(2.0 / PI * im - t / PI * (t / (2.0 * std::f64::consts::E)).ln() + 0.25)
}

/// Riemann-Siegel theta.
pub fn rs_theta(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("rs_theta needs t > 0, got {t}")));
    }
    if t < 10.0 {
        return Ok(im_log_gamma(Complex64::new(0.25, 0.5 * t))? - 0.5 * t * PI.ln());
    }
    let it = 1.0 / t;
    let it2 = it * it;
    let series = it
        * (1.0 / 48.0
            + it2
                * (7.0 / 5760.0
                    + it2 * (31.0 / 80640.0 + it2 * (127.0 / 430080.0 + it2 * (511.0 / 1216512.0)))));
    Ok(0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + series)
}

const MAIN_SUM_TABLE: usize = 512;

fn main_sum_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=MAIN_SUM_TABLE)
            .map(|n| {
                let nf = n as f64;
                (nf.ln(), 1.0 / nf.sqrt())
            })
            .collect()
    })
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// Below this height Z is taken from Euler-Maclaurin zeta.
pub const RS_FROM: f64 = 1000.0;

/// Hardy's Z function for t >= 10.
pub fn rs_z(t: f64) -> Result<f64> {
    if !(t >= 10.0) || !t.is_finite() {
        return Err(Error::Range(format!("rs_Z needs t >= 10, got {t}")));
    }
    let theta = rs_theta(t)?;
    if t < RS_FROM {
        let acc = EvalAccuracy { abs_tol: 1e-11, ..EvalAccuracy::default() };
        let z = zeta_complex(Complex64::new(0.5, t), &acc)?;
        let rot = Complex64::new(theta.cos(), theta.sin());
        return Ok((rot * z).re);
    }
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let table = main_sum_table();
    let mut main = 0.0;
    for j in 1..=n {
        let (ln_j, inv_sqrt) = if j <= MAIN_SUM_TABLE {
            table[j - 1]
        } else {
            let jf = j as f64;
            (jf.ln(), 1.0 / jf.sqrt())
        };
        main += inv_sqrt * (theta - t * ln_j).cos();
    }
    let x = p - 0.5;
    let ia = 1.0 / a;
    let corr = horner(&rs_coeffs::C0, x)
        + ia * (horner(&rs_coeffs::C1, x)
            + ia * (horner(&rs_coeffs::C2, x)
                + ia * (horner(&rs_coeffs::C3, x) + ia * horner(&rs_coeffs::C4, x))));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(2.0 * main + sign * corr / a.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc(tol: f64) -> EvalAccuracy {
        EvalAccuracy::new(tol, 1 << 24).unwrap()
    }

    #[test]
    fn zeta_two_is_basel() {
        let z = zeta_real(2.0, &acc(1e-13)).unwrap();
        assert!((z - PI * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_real_rejects_pole_side() {
        assert!(matches!(zeta_real(1.0, &acc(1e-12)), Err(Error::Domain(_))));
        assert!(matches!(zeta_real(0.5, &acc(1e-12)), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta_at_zero_is_minus_half() {
        let z = zeta_complex(Complex64::new(0.0, 0.0), &acc(1e-12)).unwrap();
        assert!((z.re + 0.5).abs() < 1e-12 && z.im.abs() < 1e-12);
    }

    #[test]
    fn zeta_pole_and_window() {
        assert!(matches!(zeta_complex(Complex64::new(1.0, 0.0), &acc(1e-9)), Err(Error::Pole)));
        assert!(matches!(zeta_complex(Complex64::new(0.5, 2e7), &acc(1e-9)), Err(Error::Range(_))));
    }

    #[test]
    fn max_terms_too_small_is_an_accuracy_error() {
        let tight = EvalAccuracy::new(1e-12, 16).unwrap();
        assert!(matches!(
            zeta_complex(Complex64::new(0.5, 1000.0), &tight),
            Err(Error::Accuracy(_))
        ));
    }

    #[test]
    fn im_log_gamma_real_axis_is_zero() {
        assert_eq!(im_log_gamma(Complex64::new(0.25, 0.0)).unwrap(), 0.0);
        assert!(im_log_gamma(Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn g_branches_agree_at_switch() {
        // cancellation-free branch vs definition just around T = 20
        let y = 10.0;
        let z = Complex64::new(0.25, y);
        let direct = 2.0 / PI * im_log_gamma(z).unwrap()
            - 2.0 * y / PI * (y / std::f64::consts::E).ln()
            + 0.25;
        assert!((g_of_t(2.0 * y).unwrap() - direct).abs() < 1e-12);
        assert!(g_of_t(0.5).is_err());
    }

    #[test]
    fn theta_series_matches_gamma_route() {
        for &t in &[10.0, 17.3, 50.0, 400.0] {
            let via_gamma = im_log_gamma(Complex64::new(0.25, 0.5 * t)).unwrap() - 0.5 * t * PI.ln();
            assert!((rs_theta(t).unwrap() - via_gamma).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn z_brackets_first_zero() {
        let a = rs_z(14.0).unwrap();
        let b = rs_z(15.0).unwrap();
        assert!(a.signum() != b.signum());
        assert!(rs_z(14.134725141734693790).unwrap().abs() < 1e-4);
        assert!(rs_z(9.0).is_err());
    }

    #[test]
    fn z_paths_agree_at_switch() {
        let a = rs_z(RS_FROM).unwrap();
        let z = zeta_complex(Complex64::new(0.5, RS_FROM), &acc(1e-12)).unwrap();
        let th = rs_theta(RS_FROM).unwrap();
        let b = (Complex64::new(th.cos(), th.sin()) * z).re;
        assert!((a - b).abs() < 1e-10);
    }
}
