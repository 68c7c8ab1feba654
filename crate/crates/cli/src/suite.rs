//! Batch invariant checks over seeded random instances, one group per
//! result, summarised as pass counts.

use std::f64::consts::PI;
use std::time::Instant;

use clap::ValueEnum;
use localmatch::certificates::{certify, common_point, enlargement_factor, CertificateKind};
use localmatch::crossing::{crossing_is_two_local, find_pairwise_crossing, halfplane_balance, verify_globally_maximum};
use localmatch::generators::{
    gen_circle_alternating, gen_convex, gen_pairwise_intersecting_disks, gen_random, gen_tangent_disks, rng_for,
};
use localmatch::geometry::{diameter_bound, distance, endpoint_bound};
use localmatch::matching::{
    check_locality, cycle_decomposition, enumerate_matchings, k_local_search, optimal_matching, optimal_value,
    Component, Init,
};
use localmatch::{InstanceFile, Matching, Objective, Point, PointSet, Result, Tolerance};
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Smoke,
    Full,
}

impl Scale {
    fn pick(self, smoke: usize, full: usize) -> usize {
        match self {
            Scale::Smoke => smoke,
            Scale::Full => full,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub seconds: f64,
    /// First failing case, if any.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scale: Scale,
    pub suites: Vec<SuiteResult>,
    pub all_passed: bool,
}

/// Counts passes; a case that errors counts as a failure.
struct Tally {
    name: &'static str,
    passed: usize,
    total: usize,
    first_failure: Option<String>,
    start: Instant,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            passed: 0,
            total: 0,
            first_failure: None,
            start: Instant::now(),
        }
    }

    fn record(&mut self, case: impl FnOnce() -> String, outcome: Result<bool>) {
        self.total += 1;
        match outcome {
            Ok(true) => self.passed += 1,
            Ok(false) => {
                self.first_failure.get_or_insert_with(case);
            }
            Err(e) => {
                self.first_failure.get_or_insert_with(|| format!("{}: {e}", case()));
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            passed: self.passed,
            total: self.total,
            seconds: self.start.elapsed().as_secs_f64(),
            first_failure: self.first_failure,
        }
    }
}

const TOL: Tolerance = Tolerance {
    eps_geom: 1e-9,
    eps_opt: 1e-7,
};

fn even_size(seed: u64, lo: usize, hi: usize) -> usize {
    let span = (hi - lo) / 2 + 1;
    lo + 2 * (seed as usize % span)
}

fn oracle_vs_enumeration(scale: Scale) -> SuiteResult {
    let mut t = Tally::new("oracle_equivalence");
    for seed in 0..scale.pick(50, 500) as u64 {
        let n = even_size(seed, 4, 10);
        let outcome = (|| {
            let ps = gen_random(n, seed, 1.0)?;
            let dp = optimal_value(&ps, Objective::Maximize)?;
            let mut brute = f64::NEG_INFINITY;
            for m in enumerate_matchings(&ps)? {
                brute = brute.max(m.weight(&ps)?);
            }
            Ok((dp - brute).abs() <= 1e-9 * brute)
        })();
        t.record(|| format!("seed {seed} n {n}"), outcome);
    }
    t.finish()
}

fn k_local_bound(scale: Scale) -> SuiteResult {
    let mut t = Tally::new("k_local_ratio");
    for k in 2..=4usize {
        for seed in 0..scale.pick(10, 200) as u64 {
            let n = even_size(seed, 2 * k, 12);
            let outcome = (|| {
                let ps = gen_random(n, 1000 * k as u64 + seed, 1.0)?;
                let m = k_local_search(&ps, k, Init::Greedy, &TOL)?;
                let opt = optimal_matching(&ps, Objective::Maximize)?;
                let bound = (k - 1) as f64 / k as f64;
                let ratio = m.weight(&ps)? / opt.weight(&ps)?;
                let mut ok = ratio >= bound - 1e-9;
                for c in cycle_decomposition(&m, &opt)? {
                    if let Component::Cycle(c) = c {
                        ok &= k as f64 * c.first_weight(&ps) >= (k - 1) as f64 * c.second_weight(&ps) - 1e-9;
                    }
                }
                Ok(ok)
            })();
            t.record(|| format!("k {k} seed {seed} n {n}"), outcome);
        }
    }
    t.finish()
}

fn certified(scale: Scale, k: usize, name: &'static str, kinds: &[CertificateKind], bound: f64) -> SuiteResult {
    let mut t = Tally::new(name);
    for seed in 0..scale.pick(20, 300) as u64 {
        let n = even_size(seed, 2 * k, 12);
        let outcome = (|| {
            let ps = gen_random(n, 7000 * k as u64 + seed, 1.0)?;
            let m = k_local_search(&ps, k, Init::Greedy, &TOL)?;
            let ratio = m.weight(&ps)? / optimal_value(&ps, Objective::Maximize)?;
            let mut ok = ratio >= bound - 1e-9;
            for &kind in kinds {
                let cert = certify(&ps, &m, kind, &TOL)?;
                ok &= cert.valid
                    && cert
                        .per_edge_checks
                        .iter()
                        .all(|e| e.star_pair <= e.bound + TOL.eps_opt);
            }
            Ok(ok)
        })();
        t.record(|| format!("seed {seed} n {n}"), outcome);
    }
    t.finish()
}

fn stretch(scale: Scale) -> SuiteResult {
    let mut t = Tally::new("disk_enlargement");
    for seed in 0..scale.pick(100, 1000) as u64 {
        let count = 3 + seed as usize % 6;
        let outcome = (|| {
            let df = gen_pairwise_intersecting_disks(count, seed)?.with_scale(enlargement_factor())?;
            Ok(common_point(&df, &TOL)?.slack <= TOL.eps_opt)
        })();
        t.record(|| format!("seed {seed} disks {count}"), outcome);
    }
    let tangent = gen_tangent_disks();
    let outcome = (|| {
        let tight = common_point(&tangent.with_scale(enlargement_factor())?, &TOL)?;
        let short = common_point(&tangent.with_scale(enlargement_factor() - 1e-3)?, &TOL)?;
        let target = Point::new(1.0, 1.0 / 3f64.sqrt());
        Ok(tight.slack <= TOL.eps_opt && distance(tight.point, target) <= 1e-5 && short.slack > 1e-4)
    })();
    t.record(|| "tangent disks".into(), outcome);
    t.finish()
}

fn extremal_functions(scale: Scale) -> SuiteResult {
    let mut t = Tally::new("extremal_functions");
    let mut rng = rng_for(11);
    for trial in 0..scale.pick(1000, 10_000) {
        let outcome = (|| {
            let r = rng.random_range(1e-3..=4.0);
            let x = rng.random_range(0.0..=r);
            let alpha = rng.random_range(0.0..=PI);
            Ok(endpoint_bound(x, r)? <= endpoint_bound(0.0, r)? + 1e-12
                && diameter_bound(alpha)? <= diameter_bound(PI / 3.0)? + 1e-12)
        })();
        t.record(|| format!("trial {trial}"), outcome);
    }
    let outcome = (|| {
        let peak = (2.0 / 3f64.sqrt() - diameter_bound(PI / 3.0)?).abs() <= 1e-9;
        let ends = (endpoint_bound(0.0, 2.0)? - 2.0 * 5f64.sqrt()).abs() <= 1e-9;
        Ok(peak && ends)
    })();
    t.record(|| "closed forms".into(), outcome);
    t.finish()
}

fn crossing(scale: Scale) -> SuiteResult {
    let mut t = Tally::new("pairwise_crossing");
    for seed in 0..scale.pick(50, 500) as u64 {
        let n = even_size(seed, 4, 10);
        let outcome = (|| {
            let ps = gen_random(n, 30_000 + seed, 1.0)?;
            let (found, count) = find_pairwise_crossing(&ps)?;
            let Some(m) = found else {
                return Ok(count == 0);
            };
            Ok(count == 1
                && halfplane_balance(&ps, &m)?
                && crossing_is_two_local(&ps, &m, &TOL)?
                && verify_globally_maximum(&ps, &m, &TOL)?)
        })();
        t.record(|| format!("random seed {seed} n {n}"), outcome);
    }
    for seed in 0..scale.pick(20, 100) as u64 {
        let n = even_size(seed, 4, 10);
        let outcome = (|| Ok(find_pairwise_crossing(&gen_convex(n, seed)?)?.1 == 1))();
        t.record(|| format!("convex seed {seed} n {n}"), outcome);
    }
    t.finish()
}

fn circle_minimum() -> SuiteResult {
    let mut t = Tally::new("unbounded_minimum_ratio");
    // Twenty pairs are too few at this eps: the swap to the outer chords
    // still gains. Twenty-three is the smallest count that works.
    let pairs = 24;
    let outcome = (|| {
        let (ps, m) = gen_circle_alternating(pairs, 0.01)?;
        let local = check_locality(&ps, &m, 2, Objective::Minimize, &TOL)?;
        // The short chords form a perfect matching, so they bound the minimum.
        let short = Matching::new((0..pairs).map(|i| (2 * i + 1, (2 * i + 2) % (2 * pairs))));
        Ok(local.holds && m.weight(&ps)? >= 10.0 * short.weight(&ps)?)
    })();
    t.record(|| format!("n {pairs} eps 0.01"), outcome);
    t.finish()
}

fn round_trip(scale: Scale) -> SuiteResult {
    let mut t = Tally::new("instance_round_trip");
    for seed in 0..scale.pick(20, 200) as u64 {
        let outcome = (|| {
            let ps: PointSet = gen_random(8, seed, 1e3)?;
            let m = optimal_matching(&ps, Objective::Maximize)?;
            let inst = InstanceFile::new(&ps, Some(&m));
            Ok(InstanceFile::from_json(&inst.to_json())? == inst)
        })();
        t.record(|| format!("seed {seed}"), outcome);
    }
    t.finish()
}

pub fn run(scale: Scale) -> Summary {
    let suites = vec![
        oracle_vs_enumeration(scale),
        k_local_bound(scale),
        certified(
            scale,
            2,
            "local2_certificate",
            &[CertificateKind::Local2],
            (3.0f64 / 7.0).sqrt(),
        ),
        certified(
            scale,
            3,
            "local3_certificates",
            &[CertificateKind::Local3Sqrt2, CertificateKind::Local3Fingerhut],
            3f64.sqrt() / 2.0,
        ),
        stretch(scale),
        extremal_functions(scale),
        crossing(scale),
        circle_minimum(),
        round_trip(scale),
    ];
    let all_passed = suites.iter().all(SuiteResult::ok);
    Summary {
        scale,
        suites,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use localmatch::Error;

    #[test]
    fn failures_and_errors_are_counted() {
        let mut t = Tally::new("demo");
        t.record(|| "a".into(), Ok(true));
        t.record(|| "b".into(), Ok(false));
        t.record(|| "c".into(), Err(Error::OddCardinality(3)));
        let r = t.finish();
        assert_eq!((r.passed, r.total), (1, 3));
        assert!(!r.ok());
        assert_eq!(r.first_failure.as_deref(), Some("b"));
    }

    #[test]
    fn sizes_cycle_through_even_values() {
        let sizes: Vec<usize> = (0..5).map(|s| even_size(s, 4, 8)).collect();
        assert_eq!(sizes, [4, 6, 8, 4, 6]);
    }
}
