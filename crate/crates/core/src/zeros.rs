//! Zero ordinates of zeta on the critical line: computation by scanning Z(t),
//! file ingestion, and exact N(T), S(T).

use std::f64::consts::{E, PI};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{eval_bound, small_t_bound, BoundMode, ConstantSet, SMALL_T_LIMIT};
use crate::error::{Error, Result};
use crate::specfun::{g_of_t, rs_theta, rs_z, zeta_complex, ComplexPoint, EvalAccuracy};

pub const MAX_HEIGHT: f64 = 1e6;
const SCAN_START: f64 = 10.0;
const ROOT_TOL: f64 = 1e-10;
const BLOCK_ZEROS: f64 = 4000.0;
const MAX_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Computed,
    Ingested,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub ordinates: Vec<f64>,
    pub source: Source,
    pub t_max_verified: f64,
}

impl ZeroList {
    /// Checks ordering and positivity; on failure reports the 0-based offending index.
    pub fn new(ordinates: Vec<f64>, source: Source, t_max_verified: f64) -> Result<Self> {
        check_monotone(&ordinates)?;
        Ok(ZeroList { ordinates, source, t_max_verified })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Height up to which the list is known to be complete.
    pub fn coverage(&self) -> f64 {
        self.t_max_verified
    }

    /// Number of ordinates <= t (no coverage check).
    pub fn count_le(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// 1-based access.
    pub fn nth(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.len() {
            return Err(Error::Index(format!("zero index {n} outside 1..={}", self.len())));
        }
        Ok(self.ordinates[n - 1])
    }
}

fn check_monotone(v: &[f64]) -> Result<()> {
    for (i, &g) in v.iter().enumerate() {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Monotonicity(i));
        }
        if i > 0 && !(g > v[i - 1]) {
            return Err(Error::Monotonicity(i));
        }
    }
    Ok(())
}

/// (t/2π) log(t/2πe)
pub fn main_term(t: f64) -> f64 {
    t / (2.0 * PI) * (t / (2.0 * PI * E)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub n: usize,
    pub s: f64,
    pub main_term: f64,
}

impl CountResult {
    /// Recomputes N = S + main + 7/8 + g/2 at t.
    pub fn is_consistent(&self, t: f64) -> Result<bool> {
        let rhs = self.s + self.main_term + 0.875 + 0.5 * g_of_t(t)?;
        Ok((rhs - self.n as f64).abs() <= 1e-9 * (1.0 + self.main_term.abs()))
    }
}

fn covered(t: f64, z: &ZeroList) -> Result<()> {
    if !t.is_finite() || t > z.coverage() {
        return Err(Error::Coverage(format!("t = {t} exceeds covered height {}", z.coverage())));
    }
    Ok(())
}

pub fn n_exact(t: f64, z: &ZeroList) -> Result<usize> {
    covered(t, z)?;
    Ok(z.count_le(t))
}

pub fn s_exact(t: f64, z: &ZeroList) -> Result<f64> {
    Ok(count_at(t, z)?.s)
}

pub fn count_at(t: f64, z: &ZeroList) -> Result<CountResult> {
    let n = n_exact(t, z)?;
    let main = main_term(t);
    let s = n as f64 - main - 0.875 - 0.5 * g_of_t(t)?;
    Ok(CountResult { n, s, main_term: main })
}

/// |N(t) − main(t)| against the counting bound at t; for t up to
/// 30610046000 the small-T constant is used.
pub fn bound_sandwich(t: f64, cs: &ConstantSet, z: &ZeroList) -> Result<bool> {
    if !(t >= E) {
        return Err(Error::Domain(format!("bound needs t >= e, got {t}")));
    }
    let n = n_exact(t, z)?;
    let bound = if t <= SMALL_T_LIMIT { small_t_bound() } else { eval_bound(t, cs, BoundMode::NT)? };
    Ok((n as f64 - main_term(t)).abs() <= bound)
}

// ---------------------------------------------------------------- file format

pub fn read_zeros<R: BufRead>(reader: R) -> Result<ZeroList> {
    let mut ords = Vec::new();
    let mut verified = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                if k.trim() == "t_max_verified" {
                    verified = v.trim().parse::<f64>().ok();
                }
            }
            continue;
        }
        let v: f64 = s
            .parse()
            .map_err(|e| Error::Parse { line: i + 1, msg: format!("{s:?}: {e}") })?;
        ords.push(v);
    }
    check_monotone(&ords)?;
    let last = ords.last().copied().unwrap_or(0.0);
    let t_max = verified.map_or(last, |v| v.max(last));
    Ok(ZeroList { ordinates: ords, source: Source::Ingested, t_max_verified: t_max })
}

pub fn ingest_zeros<P: AsRef<Path>>(path: P) -> Result<ZeroList> {
    let f = std::fs::File::open(path)?;
    read_zeros(BufReader::new(f))
}

pub fn format_zeros(z: &ZeroList) -> String {
    let mut out = String::with_capacity(24 * z.len() + 64);
    let _ = writeln!(out, "# t_max_verified = {}", z.t_max_verified);
    let src = match z.source {
        Source::Computed => "computed",
        Source::Ingested => "ingested",
    };
    let _ = writeln!(out, "# source = {src}");
    for &g in &z.ordinates {
        let _ = writeln!(out, "{}", sig_digits(g, 19));
    }
    out
}

pub fn write_zeros<P: AsRef<Path>>(z: &ZeroList, path: P) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(format_zeros(z).as_bytes())?;
    Ok(())
}

/// Fixed-point rendering with `digits` significant digits.
fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let int_digits = x.abs().log10().floor() as i64 + 1;
    let frac = (digits as i64 - int_digits).max(0) as usize;
    format!("{x:.frac$}")
}

// ---------------------------------------------------------------- computation

fn mean_gap(t: f64) -> f64 {
    2.0 * PI / (t.max(2.0 * PI * E) / (2.0 * PI)).ln()
}

fn scan_step(t: f64, refine: f64) -> f64 {
    (mean_gap(t) / 8.0).min(MAX_STEP) / refine
}

fn brent(a: f64, b: f64, fa: f64, fb: f64) -> Result<f64> {
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * ROOT_TOL;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = rs_z(b)?;
    }
    Err(Error::Accuracy(format!("root refinement did not converge near {b}")))
}

/// Minimizes sign·Z on [a, c] by golden section; returns (argmin, value).
fn golden_min(a: f64, c: f64, sign: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, c);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = sign * rs_z(x1)?;
    let mut f2 = sign * rs_z(x2)?;
    while hi - lo > 1e-9 {
        if f1 <= 0.0 {
            return Ok((x1, f1));
        }
        if f2 <= 0.0 {
            return Ok((x2, f2));
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = sign * rs_z(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = sign * rs_z(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

/// All sign changes of Z in (a, b]. With `deep`, same-sign local minima of
/// |Z| are searched for a hidden pair of zeros.
fn scan_range(a: f64, b: f64, refine: f64, deep: bool) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut x0 = a;
    let mut z0 = rs_z(a)?;
    let mut prev: Option<(f64, f64)> = None;
    while x0 < b {
        let x1 = (x0 + scan_step(x0, refine)).min(b);
        let z1 = rs_z(x1)?;
        if z1 == 0.0 {
            out.push(x1);
        } else if z0 * z1 < 0.0 {
            out.push(brent(x0, x1, z0, z1)?);
        } else if deep && z0 != 0.0 {
            if let Some((xp, zp)) = prev {
                if zp * z0 > 0.0 && z0.abs() < zp.abs() && z0.abs() < z1.abs() {
                    let sign = z0.signum();
                    let (xm, fm) = golden_min(xp, x1, sign)?;
                    if fm < 0.0 {
                        let zm = rs_z(xm)?;
                        out.push(brent(xp, xm, zp, zm)?);
                        out.push(brent(xm, x1, zm, z1)?);
                    }
                }
            }
        }
        prev = Some((x0, z0));
        x0 = x1;
        z0 = z1;
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    Ok(out)
}

/// Continuous arg of zeta along σ = 2 (principal, since Re ζ(2+it) > 0) and
/// then horizontally to 1/2 + ic. Returns S(c).
pub fn s_by_arg_tracking(c: f64) -> Result<f64> {
    let acc = EvalAccuracy::default();
    let mut sigma = 2.0;
    let mut z = zeta_complex(ComplexPoint::new(sigma, c), &acc)?;
    let mut arg = z.arg();
    let mut h = 0.1;
    while sigma > 0.5 {
        let next = (sigma - h).max(0.5);
        let zn = zeta_complex(ComplexPoint::new(next, c), &acc)?;
        let d = (zn / z).arg();
        if d.abs() > PI / 4.0 && h > 1e-6 {
            h *= 0.5;
            continue;
        }
        arg += d;
        z = zn;
        sigma = next;
        if d.abs() < PI / 16.0 {
            h = (h * 1.5).min(0.1);
        }
    }
    Ok(arg / PI)
}

/// N(c) = θ(c)/π + 1 + S(c) by argument tracking; errors unless the value is
/// within 1/4 of an integer.
pub fn n_by_arg_tracking(c: f64) -> Result<usize> {
    let x = rs_theta(c)? / PI + 1.0 + s_by_arg_tracking(c)?;
    let n = x.round();
    if (x - n).abs() > 0.25 || n < 0.0 {
        return Err(Error::Completeness(format!("count at {c} is {x}, not near an integer")));
    }
    Ok(n as usize)
}

fn block_edges(t_end: f64) -> Vec<f64> {
    let mut edges = vec![SCAN_START];
    let mut a = SCAN_START;
    while a < t_end {
        let width = BLOCK_ZEROS * mean_gap(a.max(100.0));
        a = (a + width).min(t_end);
        edges.push(a);
    }
    edges
}

/// All zeros of Z on (0, t_max], verified against the argument-principle count
/// at checkpoints between zeros near each block edge and just above t_max.
pub fn find_zeros(t_max: f64) -> Result<ZeroList> {
    if !(t_max >= 15.0) {
        return Err(Error::Domain(format!("find_zeros needs t_max >= 15, got {t_max}")));
    }
    if t_max > MAX_HEIGHT {
        return Err(Error::Range(format!("t_max = {t_max} exceeds {MAX_HEIGHT}")));
    }
    let t_end = t_max + 3.0 * mean_gap(t_max);
    let edges = block_edges(t_end);
    let blocks: Vec<Result<Vec<f64>>> =
        edges.par_windows(2).map(|w| scan_range(w[0], w[1], 1.0, false)).collect();
    let mut zeros = Vec::new();
    for b in blocks {
        zeros.extend(b?);
    }

    // checkpoints: midpoints of the zero gaps straddling interior edges and t_max
    let mut marks: Vec<f64> = edges[1..edges.len() - 1].to_vec();
    marks.retain(|&m| m < t_max);
    marks.push(t_max);
    let mut checkpoints = Vec::with_capacity(marks.len());
    for &m in &marks {
        let i = zeros.partition_point(|&g| g <= m);
        if i == 0 || i == zeros.len() {
            return Err(Error::Completeness(format!("no zero on both sides of {m}")));
        }
        checkpoints.push(0.5 * (zeros[i - 1] + zeros[i]));
    }
    checkpoints.dedup();

    let counts: Vec<Result<usize>> = checkpoints.par_iter().map(|&c| n_by_arg_tracking(c)).collect();
    let mut lo = SCAN_START;
    for (k, (&c, n)) in checkpoints.iter().zip(counts).enumerate() {
        let want = n?;
        let mut have = zeros.partition_point(|&g| g <= c);
        if have != want {
            let start = zeros.partition_point(|&g| g <= lo);
            let stop = have;
            let found = scan_range(lo, c, 4.0, true)?;
            zeros.splice(start..stop, found);
            have = zeros.partition_point(|&g| g <= c);
            if have != want {
                return Err(Error::Completeness(format!(
                    "block {k} ending at {c}: found {have} zeros, argument principle gives {want}"
                )));
            }
        }
        lo = c;
    }
    zeros.truncate(zeros.partition_point(|&g| g <= t_max));
    for w in zeros.windows(2) {
        if w[1] - w[0] <= 1e-6 {
            return Err(Error::Completeness(format!("unresolved pair near {}", w[0])));
        }
    }
    Ok(ZeroList { ordinates: zeros, source: Source::Computed, t_max_verified: t_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digit_rendering() {
        for x in [14.134725141734693, 223936.3681336613, 0.5] {
            let s = sig_digits(x, 19);
            assert_eq!(s.chars().filter(|c| c.is_ascii_digit()).count(), 19 + (x < 1.0) as usize);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn parse_reports_line() {
        let txt = "# header\n14.13\n\nabc\n";
        match read_zeros(txt.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monotonicity_index() {
        let txt = "14.134725\n25.010858\n21.022040\n";
        assert!(matches!(read_zeros(txt.as_bytes()), Err(Error::Monotonicity(2))));
    }

    #[test]
    fn header_sets_coverage() {
        let z = read_zeros("# t_max_verified = 20\n14.134725\n".as_bytes()).unwrap();
        assert_eq!(z.coverage(), 20.0);
        let z = read_zeros("14.134725\n".as_bytes()).unwrap();
        assert_eq!(z.coverage(), 14.134725);
    }

    #[test]
    fn count_at_100_by_argument() {
        assert_eq!(n_by_arg_tracking(100.0).unwrap(), 29);
    }

    #[test]
    fn brent_finds_first_zero() {
        let (a, b) = (14.0, 14.3);
        let g = brent(a, b, rs_z(a).unwrap(), rs_z(b).unwrap()).unwrap();
        assert!((g - 14.134725141734694).abs() < 1e-9);
    }
}
