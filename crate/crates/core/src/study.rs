//! Deviation of N(T) from the main term plus 11/8: ε± at zeros, extreme-value
//! scans, per-chunk averages and first occurrences of window counts.

use std::f64::consts::{E, PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::SMALL_T_LIMIT;
use crate::error::{Error, Result};
use crate::zeros::{main_term, ZeroList};

pub const THEOREM_UPPER: f64 = 0.092094;
pub const THEOREM_LOWER: f64 = 0.082707;
/// Scans skip ordinates at or below this height.
pub const SCAN_FLOOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub n: usize,
    pub t_n: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub n: usize,
    pub t_first: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub rows: Vec<ClusterRow>,
    /// max of (N(t+1) − N(t−1))/log t over the covered candidates
    pub max_ratio: f64,
    pub argmax: f64,
}

/// sqrt(log t log log t)/(√2 π)
pub fn spread(t: f64) -> f64 {
    let l = t.ln();
    (l * l.ln()).sqrt() / (SQRT_2 * PI)
}

/// N − main(t) − 11/8 ∓ spread(t) for a given count.
pub fn eps_value(count: usize, t: f64, sign: Sign) -> Result<f64> {
    if !(t > E) {
        return Err(Error::Domain(format!("eps needs t > e, got {t}")));
    }
    let dev = count as f64 - main_term(t) - 1.375;
    Ok(match sign {
        Sign::Plus => dev - spread(t),
        Sign::Minus => dev + spread(t),
    })
}

pub fn eps_at(n: usize, z: &ZeroList, sign: Sign) -> Result<f64> {
    eps_value(n, z.nth(n)?, sign)
}

pub fn record(n: usize, z: &ZeroList) -> Result<StudyRecord> {
    let t = z.nth(n)?;
    Ok(StudyRecord { n, t_n: t, eps_plus: eps_value(n, t, Sign::Plus)?, eps_minus: eps_value(n, t, Sign::Minus)? })
}

/// inf of ε⁻ on [t_n, t_{n+1}), approached from the left of t_{n+1}.
pub fn eps_minus_infimum(n: usize, z: &ZeroList) -> Result<f64> {
    Ok(eps_at(n + 1, z, Sign::Minus)? - 1.0)
}

/// Zeros with ε⁺(t_n) > 0 or ε⁻(t_n) < 0, in index order.
pub fn scan_extremes(z: &ZeroList) -> Vec<StudyRecord> {
    let first = z.count_le(SCAN_FLOOR) + 1;
    (first..=z.len())
        .into_par_iter()
        .filter_map(|n| record(n, z).ok())
        .filter(|r| r.eps_plus > 0.0 || r.eps_minus < 0.0)
        .collect()
}

/// Means of N(t_n) − main(t_n) over `chunks` equal-count index ranges;
/// chunk i holds indices [i·len/chunks, (i+1)·len/chunks). Empty chunks are left out.
pub fn interval_averages(z: &ZeroList, chunks: usize) -> Result<Vec<(usize, f64)>> {
    if chunks == 0 {
        return Err(Error::Domain("chunks must be at least 1".into()));
    }
    let len = z.len();
    let out = (0..chunks)
        .into_par_iter()
        .filter_map(|i| {
            let lo = i * len / chunks;
            let hi = (i + 1) * len / chunks;
            if hi == lo {
                return None;
            }
            let sum: f64 = (lo..hi).map(|k| (k + 1) as f64 - main_term(z.ordinates[k])).sum();
            Some((i, sum / (hi - lo) as f64))
        })
        .collect();
    Ok(out)
}

/// First t with N(t+1) − N(t−1) = n for n = 1..=n_max. The window count only
/// rises when a zero enters at t + 1, so the candidates are t = γ_k − 1.
pub fn cluster_first(n_max: usize, z: &ZeroList) -> Result<ClusterReport> {
    let g = &z.ordinates;
    let usable = z.count_le(z.coverage());
    let mut rows = Vec::with_capacity(n_max);
    let mut lo = 0;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax = f64::NAN;
    for k in 0..usable {
        while g[lo] <= g[k] - 2.0 {
            lo += 1;
        }
        let w = k + 1 - lo;
        let t = g[k] - 1.0;
        while rows.len() < n_max && w > rows.len() {
            rows.push(ClusterRow { n: rows.len() + 1, t_first: t });
        }
        if t > 1.0 {
            let ratio = w as f64 / t.ln();
            if ratio > max_ratio {
                max_ratio = ratio;
                argmax = t;
            }
        }
    }
    if rows.len() < n_max {
        return Err(Error::Coverage(format!(
            "window count {} never reached below t = {}",
            rows.len() + 1,
            z.coverage()
        )));
    }
    Ok(ClusterReport { rows, max_ratio, argmax })
}

fn theorem_holds(count: usize, t: f64) -> bool {
    let dev = count as f64 - main_term(t) - 1.375;
    let s = spread(t);
    -s - 1.0 - THEOREM_LOWER < dev && dev < s + THEOREM_UPPER
}

/// The two-sided appendix inequality at every ordinate, every midpoint, the
/// left limit at every ordinate and just above e, within the covered range.
pub fn appendix_theorem_check(z: &ZeroList) -> bool {
    let top = z.coverage().min(SMALL_T_LIMIT);
    let g = &z.ordinates;
    if !theorem_holds(z.count_le(E * (1.0 + 1e-12)), E * (1.0 + 1e-12)) {
        return false;
    }
    (0..g.len()).into_par_iter().all(|i| {
        let t = g[i];
        if t <= E || t >= top {
            return true;
        }
        // N(t_i) = i + 1, and just below t_i the count is i
        if !theorem_holds(i + 1, t) || !theorem_holds(i, t) {
            return false;
        }
        let mid = match g.get(i + 1) {
            Some(&next) => 0.5 * (t + next),
            None => 0.5 * (t + top),
        };
        mid >= top || theorem_holds(i + 1, mid)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::Source;

    fn list(v: &[f64]) -> ZeroList {
        let top = *v.last().unwrap();
        ZeroList::new(v.to_vec(), Source::Ingested, top).unwrap()
    }

    #[test]
    fn plus_minus_differ_by_twice_spread() {
        let t = 14.134725141734694;
        let d = eps_value(1, t, Sign::Plus).unwrap() - eps_value(1, t, Sign::Minus).unwrap();
        assert!((d + SQRT_2 / PI * (t.ln() * t.ln().ln()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn eps_domain() {
        assert!(matches!(eps_value(0, 2.0, Sign::Plus), Err(Error::Domain(_))));
    }

    #[test]
    fn two_chunks_over_four() {
        let z = list(&[14.0, 21.0, 25.0, 30.0]);
        let a = interval_averages(&z, 2).unwrap();
        let v: Vec<f64> = (0..4).map(|k| (k + 1) as f64 - main_term(z.ordinates[k])).collect();
        assert_eq!(a.len(), 2);
        assert!((a[0].1 - 0.5 * (v[0] + v[1])).abs() < 1e-14);
        assert!((a[1].1 - 0.5 * (v[2] + v[3])).abs() < 1e-14);
        assert!(interval_averages(&z, 0).is_err());
    }

    #[test]
    fn window_candidates() {
        let z = list(&[10.0, 11.5, 11.8, 20.0]);
        let r = cluster_first(3, &z).unwrap();
        assert_eq!(r.rows[0].t_first, 9.0);
        assert_eq!(r.rows[1].t_first, 10.5);
        assert_eq!(r.rows[2].t_first, 10.8);
        assert!(cluster_first(4, &z).is_err());
    }
}
