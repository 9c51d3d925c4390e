use std::f64::consts::{E, PI, SQRT_2};
use std::sync::OnceLock;

use zerocount::constants::{constants_for, PLATT_S_BOUND};
use zerocount::quad::QuadratureSpec;
use zerocount::regions::BoundParams;
use zerocount::study::*;
use zerocount::zeros::*;
use zerocount::Error;

/// Complete list up to 75000 (a little over 10^5 zeros).
fn zeros() -> &'static ZeroList {
    static Z: OnceLock<ZeroList> = OnceLock::new();
    Z.get_or_init(|| find_zeros(75_000.0).unwrap())
}

fn upto(t: f64) -> ZeroList {
    let z = zeros();
    ZeroList::new(z.ordinates[..z.count_le(t)].to_vec(), Source::Computed, t).unwrap()
}

#[test]
fn first_ordinate_and_small_counts() {
    let z = zeros();
    assert!((z.ordinates[0] - 14.134725141734693790).abs() < 1e-10);
    assert_eq!(z.count_le(100.0), 29);
    assert_eq!(z.count_le(1000.0), 649);
    assert_eq!(z.count_le(10_000.0), 10_142);
    assert!(z.len() > 100_000);
    assert_eq!(z.source, Source::Computed);
}

#[test]
fn zeros_are_simple() {
    assert!(zeros().ordinates.windows(2).all(|w| w[1] - w[0] > 1e-6));
}

#[test]
fn known_ordinates() {
    let z = zeros();
    assert!((z.nth(2).unwrap() - 21.022039638771554993).abs() < 1e-10);
    assert!((z.nth(10_000).unwrap() - 9877.7826540055011428).abs() < 1e-9);
    assert!((z.nth(100_000).unwrap() - 74920.827498994186794).abs() < 1e-8);
}

#[test]
fn file_round_trip() {
    let z = upto(10_000.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    write_zeros(&z, &path).unwrap();
    let back = ingest_zeros(&path).unwrap();
    assert_eq!(back.ordinates, z.ordinates);
    assert_eq!(back.coverage(), 10_000.0);
    assert_eq!(back.source, Source::Ingested);
}

#[test]
fn ingest_format_cases() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.txt");
    std::fs::write(&p, "14.134725\n21.022040\n25.010858\n").unwrap();
    assert_eq!(ingest_zeros(&p).unwrap().len(), 3);
    std::fs::write(&p, "").unwrap();
    assert!(ingest_zeros(&p).unwrap().is_empty());
    std::fs::write(&p, "14.134725\n25.010858\n21.022040\n").unwrap();
    assert!(matches!(ingest_zeros(&p), Err(Error::Monotonicity(2))));
    std::fs::write(&p, "14.134725\n# note\n2x\n").unwrap();
    assert!(matches!(ingest_zeros(&p), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn n_and_s_step_behaviour() {
    let z = upto(10_000.0);
    assert_eq!(n_exact(14.2, &z).unwrap(), 1);
    assert_eq!(n_exact(14.1, &z).unwrap(), 0);
    assert!(matches!(n_exact(10_001.0, &z), Err(Error::Coverage(_))));
    for &g in z.ordinates.iter().step_by(37) {
        let before = s_exact(g - 1e-8, &z).unwrap();
        let after = s_exact(g + 1e-8, &z).unwrap();
        assert!((after - before - 1.0).abs() < 1e-6, "jump at {g}");
        assert_eq!(n_exact(g, &z).unwrap(), n_exact(g - 1e-8, &z).unwrap() + 1);
    }
    let c = count_at(5000.0, &z).unwrap();
    assert!(c.is_consistent(5000.0).unwrap());
}

#[test]
fn s_stays_inside_the_bound() {
    let z = zeros();
    let top = z.coverage();
    let mut worst = 0.0f64;
    for (i, &g) in z.ordinates.iter().enumerate() {
        let next = z.ordinates.get(i + 1).copied().unwrap_or(top);
        worst = worst.max(s_exact(g, z).unwrap().abs());
        worst = worst.max(s_exact(0.5 * (g + next), z).unwrap().abs());
    }
    assert!(worst <= PLATT_S_BOUND, "{worst}");
    assert!(worst > 1.0);
}

#[test]
fn sandwich_holds_at_ordinates_and_midpoints() {
    let z = upto(10_000.0);
    let cs = constants_for(&BoundParams::published(1.000225, 1.000605, 0.000158), &QuadratureSpec::default())
        .unwrap()
        .rounded_up();
    assert!(bound_sandwich(E, &cs, &z).unwrap());
    // at e the deviation is the main term alone
    assert!((main_term(E).abs() - 0.7953).abs() < 1e-3);
    for w in z.ordinates.windows(2) {
        assert!(bound_sandwich(w[0], &cs, &z).unwrap());
        assert!(bound_sandwich(0.5 * (w[0] + w[1]), &cs, &z).unwrap());
    }
    assert!(matches!(bound_sandwich(2.0, &cs, &z), Err(Error::Domain(_))));
}

#[test]
fn cluster_rows() {
    let z = upto(10_001.0);
    let rep = cluster_first(4, &z).unwrap();
    let want = [13.1347251417346937904572, 48.7738324776723021819167, 356.952685101632273755128, 2261.87830538116111223015];
    for (row, w) in rep.rows.iter().zip(want) {
        assert!((row.t_first - w).abs() < 1e-6, "{row:?}");
    }
    assert!(rep.rows.windows(2).all(|w| w[0].t_first <= w[1].t_first));
    assert!((rep.argmax - 2261.88).abs() < 0.01);
    assert!((rep.max_ratio - 0.517869686).abs() < 5e-7);
    assert!(matches!(cluster_first(6, &z), Err(Error::Coverage(_))));
}

#[test]
fn no_exceptions_below_2500() {
    let z = upto(2500.0);
    assert!(z.len() >= 1900);
    assert!(scan_extremes(&z).is_empty());
    assert!(scan_extremes(zeros()).is_empty());
}

#[test]
fn eps_at_first_zero() {
    let z = zeros();
    assert!((eps_at(1, z, Sign::Plus).unwrap() + 0.310800505159629888).abs() < 1e-9);
    assert!((eps_at(1, z, Sign::Minus).unwrap() - 0.412244759672993994).abs() < 1e-9);
    assert!(matches!(eps_at(0, z, Sign::Plus), Err(Error::Index(_))));
    for n in [1usize, 500, 70_000] {
        let t = z.nth(n).unwrap();
        let d = eps_at(n, z, Sign::Plus).unwrap() - eps_at(n, z, Sign::Minus).unwrap();
        assert!((d + SQRT_2 / PI * (t.ln() * t.ln().ln()).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn extrema_sit_at_ordinates() {
    let z = zeros();
    for n in (1..z.len() - 1).step_by(997) {
        let (a, b) = (z.ordinates[n - 1], z.ordinates[n]);
        let at_left = eps_at(n, z, Sign::Plus).unwrap();
        let mut grid_max = f64::NEG_INFINITY;
        let mut grid_min = f64::INFINITY;
        let k = 64;
        for i in 0..k {
            let t = a + (b - a) * i as f64 / k as f64;
            grid_max = grid_max.max(eps_value(n, t, Sign::Plus).unwrap());
            grid_min = grid_min.min(eps_value(n, t, Sign::Minus).unwrap());
        }
        assert!((grid_max - at_left).abs() < 1e-9);
        let inf = eps_minus_infimum(n, z).unwrap();
        // the last grid point is one step short of the next ordinate
        let slope = (b / (2.0 * PI)).ln() / (2.0 * PI);
        assert!(grid_min >= inf && grid_min - inf <= 1.1 * slope * (b - a) / k as f64 + 1e-12);
    }
}

#[test]
fn averages_near_eleven_eighths() {
    let z = zeros();
    let first = ZeroList::new(z.ordinates[..100_000].to_vec(), Source::Computed, z.ordinates[99_999]).unwrap();
    let av = interval_averages(&first, 1).unwrap();
    assert!((av[0].1 - 1.375).abs() < 0.01, "{av:?}");
    let one = interval_averages(&upto(14.5), 1).unwrap();
    assert!((one[0].1 - (1.0 - main_term(z.ordinates[0]))).abs() < 1e-15);
}

#[test]
fn appendix_inequality() {
    let z = zeros();
    assert!(appendix_theorem_check(z));
    let mut shifted = upto(10_000.0);
    shifted.ordinates[0] -= 10.0;
    assert!(!appendix_theorem_check(&shifted));
}
