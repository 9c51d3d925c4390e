//! Constraint checks and a restarted Nelder-Mead search over (c, r, eta).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{constants_for, ConstantSet};
use crate::error::{Error, Result};
use crate::quad::QuadratureSpec;
use crate::regions::BoundParams;

pub const MIN_BUDGET: usize = 100;
pub const RESTARTS: usize = 8;
const START_TRIES: usize = 200_000;
const SIMPLEX_SCALE: f64 = 1e-2;
const SHRINK_TOL: f64 = 1e-7;
// sampling box for starting points
const C_BOX: (f64, f64) = (1.0, 1.6);
const R_BOX: (f64, f64) = (1.0, 2.2);
const ETA_BOX: (f64, f64) = (0.0, 0.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstName {
    C1,
    C2,
    C2p,
    C3,
    C3p,
    C3t,
    C3pt,
}

impl ConstName {
    pub const ALL: [ConstName; 7] =
        [ConstName::C1, ConstName::C2, ConstName::C2p, ConstName::C3, ConstName::C3p, ConstName::C3t, ConstName::C3pt];

    pub fn pick(self, cs: &ConstantSet) -> f64 {
        cs.as_array()[self as usize]
    }
}

impl fmt::Display for ConstName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(ConstantSet::NAMES[*self as usize])
    }
}

impl FromStr for ConstName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('\'', "p");
        ConstName::ALL
            .iter()
            .copied()
            .find(|c| c.to_string().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| Error::Config(format!("unknown constant {s:?}")))
    }
}

/// Coordinates held constant during the search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Fixed {
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub eta: Option<f64>,
}

impl Fixed {
    fn as_array(&self) -> [Option<f64>; 3] {
        [self.c, self.r, self.eta]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub weights: BTreeMap<ConstName, f64>,
    pub fixed: Fixed,
    /// J1, J2, n, Q, T0 and the line bounds come from here; (c, r, eta) are overwritten.
    pub base: BoundParams,
    pub quadrature: QuadratureSpec,
}

impl Objective {
    pub fn new(weights: BTreeMap<ConstName, f64>, fixed: Fixed, base: BoundParams) -> Result<Self> {
        if weights.values().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::Config("weights must be finite and non-negative".into()));
        }
        if !weights.values().any(|&w| w > 0.0) {
            return Err(Error::Config("at least one weight must be positive".into()));
        }
        Ok(Objective { weights, fixed, base, quadrature: QuadratureSpec::default() })
    }

    pub fn single(name: ConstName) -> Self {
        let mut w = BTreeMap::new();
        w.insert(name, 1.0);
        Objective {
            weights: w,
            fixed: Fixed::default(),
            base: BoundParams::published(1.0, 1.0, 0.0),
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn params_at(&self, x: [f64; 3]) -> BoundParams {
        self.base.with_point(x[0], x[1], x[2])
    }

    fn weighted(&self, cs: &ConstantSet) -> f64 {
        self.weights.iter().map(|(k, w)| w * k.pick(cs)).sum()
    }

    /// Weighted sum of the constants, +inf when (c, r, eta) is infeasible.
    pub fn value(&self, x: [f64; 3]) -> f64 {
        let p = self.params_at(x);
        if !p.violations().is_empty() {
            return f64::INFINITY;
        }
        match constants_for(&p, &self.quadrature) {
            Ok(cs) => {
                let v = self.weighted(&cs);
                if v.is_finite() {
                    v
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// The full constraint chain at (c, r, eta) with the published instantiation at the given n.
pub fn check_constraints(c: f64, r: f64, eta: f64, n: usize) -> ConstraintReport {
    let violations = BoundParams::published(c, r, eta).with_n(n).violations();
    ConstraintReport { ok: violations.is_empty(), violations }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub params: BoundParams,
    pub constants: ConstantSet,
    pub objective_value: f64,
    pub evaluations: usize,
    /// running best after each restart, in restart order
    pub history: Vec<f64>,
}

// With all three coordinates free the simplex lives in the slacks
// (eta, c - 1 - eta, c - r + 1/2), whose axes follow the constraint faces.
fn to_slack(x: [f64; 3]) -> [f64; 3] {
    [x[2], x[0] - 1.0 - x[2], x[0] - x[1] + 0.5]
}

fn from_slack(y: &[f64]) -> [f64; 3] {
    let c = 1.0 + y[0] + y[1];
    [c, c + 0.5 - y[2], y[0]]
}

struct Counted<'a> {
    obj: &'a Objective,
    fixed: [Option<f64>; 3],
    slack: bool,
    evals: usize,
}

impl Counted<'_> {
    fn local(&self, x: [f64; 3]) -> Vec<f64> {
        if self.slack {
            to_slack(x).to_vec()
        } else {
            (0..3).filter(|&i| self.fixed[i].is_none()).map(|i| x[i]).collect()
        }
    }

    fn full(&self, y: &[f64]) -> [f64; 3] {
        if self.slack {
            return from_slack(y);
        }
        let mut x = [0.0; 3];
        let mut it = y.iter();
        for i in 0..3 {
            x[i] = match self.fixed[i] {
                Some(v) => v,
                None => *it.next().unwrap(),
            };
        }
        x
    }

    fn eval(&mut self, y: &[f64]) -> f64 {
        self.evals += 1;
        self.obj.value(self.full(y))
    }
}

/// One Nelder-Mead run from `x0` with a scaled axis simplex; infeasible trial
/// points are rejected through their +inf value.
fn nelder_mead(f: &mut Counted, x0: &[f64], f0: f64, scale: f64, budget: usize) -> (Vec<f64>, f64) {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..d {
        let mut h = scale * x0[i].abs().max(1e-3);
        let mut vertex = None;
        for _ in 0..40 {
            if f.evals >= budget {
                break;
            }
            for dir in [1.0, -1.0] {
                let mut x = x0.to_vec();
                x[i] += dir * h;
                let fx = f.eval(&x);
                if fx.is_finite() {
                    vertex = Some((x, fx));
                    break;
                }
            }
            if vertex.is_some() {
                break;
            }
            h *= 0.5;
        }
        match vertex {
            Some(v) => simplex.push(v),
            None => return (x0.to_vec(), f0),
        }
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);
    while f.evals < budget {
        let best = &simplex[0].0;
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())))
            .fold(0.0, f64::max);
        if size < SHRINK_TOL {
            break;
        }
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for k in 0..d {
                centroid[k] += x[k] / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let along = |t: f64| -> Vec<f64> { (0..d).map(|k| centroid[k] + t * (worst.0[k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = f.eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f.eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let x = along(-0.5);
                let v = f.eval(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = f.eval(&x);
                (x, v)
            };
            if fc < worst.1.min(fr) {
                simplex[d] = (xc, fc);
            } else {
                let b = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = v.0.iter().zip(&b).map(|(a, bb)| bb + 0.5 * (a - bb)).collect();
                    let fx = f.eval(&x);
                    *v = (x, fx);
                }
            }
        }
        order(&mut simplex);
    }
    simplex.swap_remove(0)
}

/// Nelder-Mead restarted from the current best; after a run without gain the
/// initial simplex is shrunk tenfold, down to the termination size.
fn polish(f: &mut Counted, x0: Vec<f64>, f0: f64, budget: usize) -> (Vec<f64>, f64) {
    let (mut x, mut fx) = (x0, f0);
    let mut scale = SIMPLEX_SCALE;
    while f.evals < budget && scale >= SHRINK_TOL {
        let (y, fy) = nelder_mead(f, &x, fx, scale, budget);
        if fx - fy > 1e-13 * (1.0 + fx.abs()) {
            x = y;
            fx = fy;
            scale = SIMPLEX_SCALE;
        } else {
            scale *= 0.1;
        }
    }
    (x, fx)
}

fn draw_start(rng: &mut ChaCha8Rng, obj: &Objective) -> Option<[f64; 3]> {
    let fixed = obj.fixed.as_array();
    let boxes = [C_BOX, R_BOX, ETA_BOX];
    for _ in 0..START_TRIES {
        let mut x = [0.0; 3];
        for i in 0..3 {
            x[i] = fixed[i].unwrap_or_else(|| rng.gen_range(boxes[i].0..boxes[i].1));
        }
        if obj.params_at(x).violations().is_empty() {
            return Some(x);
        }
        if fixed.iter().all(Option::is_some) {
            break;
        }
    }
    None
}

/// Restarted Nelder-Mead; deterministic for a fixed (objective, seed, budget).
pub fn optimize(obj: &Objective, seed: u64, budget: usize) -> Result<SearchResult> {
    if budget < MIN_BUDGET {
        return Err(Error::Domain(format!("budget must be at least {MIN_BUDGET}, got {budget}")));
    }
    let fixed = obj.fixed.as_array();
    let slack = fixed.iter().all(Option::is_none);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::with_capacity(RESTARTS);
    for _ in 0..RESTARTS {
        if let Some(x) = draw_start(&mut rng, obj) {
            starts.push(x);
        }
    }
    if starts.is_empty() {
        let v = obj.params_at([fixed[0].unwrap_or(1.0), fixed[1].unwrap_or(1.0), fixed[2].unwrap_or(0.0)]).violations();
        return Err(Error::Infeasible(format!("no feasible starting point found; {}", v.join("; "))));
    }
    let per = budget / starts.len();
    let runs: Vec<(f64, [f64; 3], usize)> = starts
        .par_iter()
        .map(|x| {
            let mut f = Counted { obj, fixed, slack, evals: 0 };
            let y0 = f.local(*x);
            let f0 = f.eval(&y0);
            let (y, fy) = if y0.is_empty() { (y0, f0) } else { polish(&mut f, y0, f0, per) };
            (fy, f.full(&y), f.evals)
        })
        .collect();

    let mut history = Vec::with_capacity(runs.len());
    let mut best: Option<(f64, usize)> = None;
    for (i, run) in runs.iter().enumerate() {
        // ties go to the lower restart index
        if best.map_or(true, |(v, _)| run.0 < v) {
            best = Some((run.0, i));
        }
        history.push(best.unwrap().0);
    }
    let (value, idx) = best.unwrap();
    if !value.is_finite() {
        return Err(Error::Infeasible("every restart ended on an infeasible point".into()));
    }
    let params = obj.params_at(runs[idx].1);
    params.validate()?;
    let constants = constants_for(&params, &obj.quadrature)?;
    Ok(SearchResult {
        params,
        constants,
        objective_value: value,
        evaluations: runs.iter().map(|r| r.2).sum(),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in ConstName::ALL {
            assert_eq!(n.to_string().parse::<ConstName>().unwrap(), n);
        }
        assert_eq!("C2'".parse::<ConstName>().unwrap(), ConstName::C2p);
        assert!("C9".parse::<ConstName>().is_err());
    }

    #[test]
    fn published_rows_are_feasible() {
        assert!(check_constraints(1.000225, 1.000605, 0.000158, 5).ok);
        let r = check_constraints(1.0, 1.0, 0.5, 5);
        assert!(!r.ok && !r.violations.is_empty());
    }

    #[test]
    fn zero_weights_rejected() {
        let mut w = BTreeMap::new();
        w.insert(ConstName::C1, 0.0);
        assert!(Objective::new(w, Fixed::default(), BoundParams::published(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn small_budget_rejected() {
        assert!(optimize(&Objective::single(ConstName::C1), 1, 10).is_err());
    }

    #[test]
    fn infeasible_fixed_point() {
        let mut obj = Objective::single(ConstName::C1);
        obj.fixed = Fixed { c: Some(1.0), r: Some(1.0), eta: Some(0.5) };
        assert!(matches!(optimize(&obj, 1, 200), Err(Error::Infeasible(_))));
    }
}
