//! Audit suites tying regions, schemes and simulations together.
//!
//! Each suite is deterministic given its arguments and returns a
//! [`SuiteReport`] whose `failures` list is empty exactly when it passes.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{classify, reduce_min_antennas, Channel, Scenario, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, identity, kron, max_abs, rank, rank_margin, CMatrix};
use crate::regions::polytope::{int, to_f64};
use crate::regions::{
    build_region, contains, enumerate_vertices, limited_modes_corner, limited_modes_region,
    region_equal, region_strict_subset, region_subset, unknown_corner, zic_csit_zf_allocation,
    DofPoint, DofRegion,
};
use crate::scheme::{
    beta_nulling, build_beta_scheme, build_full_mode_scheme, build_space_freq_scheme, cyclic_pattern,
    dft_nulling_pair, effective_direct_channel, permuted_dft_bank, permuted_dft_vandermonde,
    r_matrix_check, split_orthogonality, successive_beamformer, time_expand_pair, verify_conditions,
    ModeSwitchPattern, Scheme, RANK_TOLERANCE,
};
use crate::sim::{block_rates, cscg_matrix, draw_block_with, estimate_slopes, snr_sweep, ChannelBlock};

/// Every library operation the suites are expected to exercise.
pub const OPERATIONS: &[&str] = &[
    "classify",
    "reduce_min_antennas",
    "build_region",
    "enumerate_vertices",
    "contains",
    "region_equal",
    "region_subset",
    "zic_csit_zf_allocation",
    "limited_modes_corner",
    "dft_nulling_pair",
    "time_expand_pair",
    "cyclic_pattern",
    "effective_direct_channel",
    "r_matrix_check",
    "beta_nulling",
    "successive_beamformer",
    "build_space_freq_scheme",
    "verify_conditions",
    "draw_block",
    "block_rates",
    "snr_sweep",
    "estimate_slopes",
];

/// Fraction of random blocks on which a scheme must meet every condition.
pub const SCHEME_PASS_FRACTION: f64 = 0.99;
/// Trials per slope case.
pub const SLOPE_TRIALS: usize = 200;
pub const SLOPE_GRID_DB: [f64; 3] = [30.0, 40.0, 50.0];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub config: String,
    pub scenario: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Library operations touched while running.
    pub operations: BTreeSet<String>,
    /// Kept out of the JSON so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self {
            suite: suite.into(),
            cases: 0,
            failures: Vec::new(),
            operations: BTreeSet::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn touch(&mut self, ops: &[&str]) {
        self.operations.extend(ops.iter().map(|s| s.to_string()));
    }

    fn absorb(&mut self, part: Checks) {
        self.cases += part.cases;
        self.failures.extend(part.failures);
    }
}

/// Case counter and failure sink for one unit of work.
#[derive(Default)]
struct Checks {
    cases: usize,
    failures: Vec<Failure>,
}

impl Checks {
    fn check(&mut self, ok: bool, config: &str, scenario: &str, check: &str, expected: impl ToString, observed: impl ToString) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                config: config.into(),
                scenario: scenario.into(),
                check: check.into(),
                expected: expected.to_string(),
                observed: observed.to_string(),
            });
        }
    }

    fn error(&mut self, config: &str, scenario: &str, check: &str, e: &Error) {
        self.check(false, config, scenario, check, "success", format!("error: {e}"));
    }
}

fn vertex_list(r: &DofRegion) -> String {
    r.vertices().iter().map(DofPoint::to_string).collect::<Vec<_>>().join(" ")
}

/// Lets a test corrupt any region the identity suite builds. Arguments are
/// the configuration, a tag naming which region is being built, and the
/// honest region.
pub type RegionMutation<'a> = &'a (dyn Fn(&SystemConfig, &str, DofRegion) -> DofRegion + Sync);

fn no_mutation(_: &SystemConfig, _: &str, r: DofRegion) -> DofRegion {
    r
}

/// Exact region identities over every configuration in `[1..max]⁴`.
pub fn suite_region_identities(max_antennas: usize) -> Result<SuiteReport> {
    suite_region_identities_with(max_antennas, &no_mutation)
}

pub fn suite_region_identities_with(max_antennas: usize, mutate: RegionMutation<'_>) -> Result<SuiteReport> {
    if max_antennas == 0 || max_antennas > 8 {
        return Err(Error::Domain(format!("max antennas {max_antennas} outside 1..=8")));
    }
    let start = Instant::now();
    let mut report = SuiteReport::new("regions");
    let configs: Vec<SystemConfig> = SystemConfig::grid(max_antennas).collect();
    let parts: Vec<Checks> = configs.par_iter().map(|c| region_checks(c, mutate)).collect();
    for p in parts {
        report.absorb(p);
    }
    report.touch(&[
        "classify",
        "reduce_min_antennas",
        "build_region",
        "enumerate_vertices",
        "contains",
        "region_equal",
        "region_subset",
        "zic_csit_zf_allocation",
        "limited_modes_corner",
    ]);
    report.wall_time = start.elapsed();
    Ok(report)
}

fn region_checks(c: &SystemConfig, mutate: RegionMutation<'_>) -> Checks {
    let mut out = Checks::default();
    let name = c.to_string();
    let name = name.as_str();
    let full_k = c.m1().max(c.n1());

    let build = |cfg: &SystemConfig, s: &Scenario, tag: &str| build_region(cfg, s).map(|r| mutate(cfg, tag, r));

    for channel in [Channel::Zic, Channel::Fic] {
        for s in [Scenario::with_csit(channel), Scenario::without_csit(channel, None)] {
            let ok = classify(c, &s).is_ok();
            out.check(ok, name, &s.to_string(), "classify is total", "a case label", if ok { "a case label" } else { "error" });
        }
    }

    let zic_full = Scenario::without_csit(Channel::Zic, Some(full_k));
    let fic_full = Scenario::without_csit(Channel::Fic, Some(full_k));
    let zic_csit = Scenario::with_csit(Channel::Zic);
    let result = (|| -> Result<()> {
        let zic = build(c, &zic_full, "zic-no-csit")?;

        let again = enumerate_vertices(zic.inequalities())?;
        out.check(
            again == zic.vertices(),
            name,
            &zic_full.to_string(),
            "cached vertices match enumeration",
            vertex_list(&zic),
            again.iter().map(DofPoint::to_string).collect::<Vec<_>>().join(" "),
        );

        let reduced_cfg = reduce_min_antennas(c);
        let reduced = build(&reduced_cfg, &zic_full, "zic-no-csit-reduced")?;
        out.check(
            region_equal(&zic, &reduced),
            name,
            &zic_full.to_string(),
            "min-antenna reduction preserves the region",
            vertex_list(&zic),
            vertex_list(&reduced),
        );

        if c.n1() <= c.n2() {
            let fic = build(c, &fic_full, "fic-no-csit")?;
            out.check(
                region_equal(&zic, &fic),
                name,
                &fic_full.to_string(),
                "Z and full channel agree when N1 <= N2",
                vertex_list(&zic),
                vertex_list(&fic),
            );
        }

        let csit = build(c, &zic_csit, "zic-csit")?;
        let predicted = c.m2() <= c.n1() || c.n1() >= c.n2() + c.m1();
        let same = region_equal(&csit, &zic);
        out.check(
            same == predicted,
            name,
            &zic_csit.to_string(),
            "CSIT loss leaves the region unchanged iff M2 <= N1 or N1 >= N2 + M1",
            if predicted { "equal" } else { "different" },
            if same { "equal" } else { "different" },
        );
        out.check(
            region_subset(&zic, &csit),
            name,
            &zic_csit.to_string(),
            "no-CSIT region inside CSIT region",
            "subset",
            vertex_list(&zic),
        );

        for d1 in 0..=c.m1().min(c.n1()) {
            let d2 = zic_csit_zf_allocation(c, d1)?;
            let p = DofPoint::new(int(d1), int(d2));
            out.check(
                contains(&csit, &p),
                name,
                &zic_csit.to_string(),
                "zero-forcing allocation is feasible",
                format!("{p} inside"),
                vertex_list(&csit),
            );
        }

        if c.needs_switching_tx1() {
            switching_checks(c, name, &zic, &build, &mut out)?;
        }
        Ok(())
    })();
    if let Err(e) = result {
        out.error(name, "no CSIT", "region construction", &e);
    }
    out
}

fn switching_checks(
    c: &SystemConfig,
    name: &str,
    full_modes: &DofRegion,
    build: &dyn Fn(&SystemConfig, &Scenario, &str) -> Result<DofRegion>,
    out: &mut Checks,
) -> Result<()> {
    let (m1, n1) = (c.m1(), c.n1());
    let limited = |k: usize| limited_modes_region(c, k);
    let scenario = |k: usize| Scenario::without_csit(Channel::Zic, Some(k));

    let top = build(c, &scenario(n1), "limited-modes")?;
    let top_formula = limited(n1)?;
    out.check(
        region_equal(&top_formula, full_modes) && region_equal(&top, full_modes),
        name,
        &scenario(n1).to_string(),
        "K = N1 reproduces the enough-modes region",
        vertex_list(full_modes),
        vertex_list(&top_formula),
    );

    let bottom = build(c, &scenario(m1), "iid")?;
    let bottom_formula = limited(m1)?;
    out.check(
        region_equal(&bottom, &bottom_formula),
        name,
        &scenario(m1).to_string(),
        "K = M1 reproduces the i.i.d. region",
        vertex_list(&bottom),
        vertex_list(&bottom_formula),
    );

    let mut regions = Vec::new();
    for k in m1..=n1 {
        let tag = if k == m1 { "iid" } else { "limited-modes" };
        regions.push((k, build(c, &scenario(k), tag)?));
    }
    for w in regions.windows(2) {
        let ((k, lo), (k2, hi)) = (&w[0], &w[1]);
        out.check(
            region_strict_subset(lo, hi),
            name,
            &scenario(*k2).to_string(),
            "region grows strictly with each added mode",
            format!("K={k} strictly inside K={k2}"),
            format!("K={k}: {} / K={k2}: {}", vertex_list(lo), vertex_list(hi)),
        );
    }
    for (k, r) in &regions {
        let corner = limited_modes_corner(c, *k)?;
        out.check(
            r.is_vertex(&corner) && contains(r, &corner),
            name,
            &scenario(*k).to_string(),
            "per-slot stream pair is a vertex",
            corner.to_string(),
            vertex_list(r),
        );
    }

    let corner = unknown_corner(c);
    out.check(
        full_modes.is_vertex(&corner),
        name,
        &scenario(n1).to_string(),
        "unknown-CSIT corner is a vertex",
        corner.to_string(),
        vertex_list(full_modes),
    );
    out.check(
        !contains(&bottom, &corner),
        name,
        &scenario(m1).to_string(),
        "unknown-CSIT corner unreachable without switching",
        format!("{corner} outside"),
        vertex_list(&bottom),
    );
    Ok(())
}

/// Which construction a roster entry exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Construction {
    Modes(usize),
    Beta,
}

fn scheme_roster() -> Vec<(SystemConfig, Construction)> {
    let cfg = |a, b, c, d| SystemConfig::new(a, b, c, d).expect("roster config");
    use Construction::*;
    vec![
        (cfg(1, 2, 3, 3), Modes(1)),
        (cfg(1, 2, 3, 3), Modes(2)),
        (cfg(2, 3, 4, 4), Modes(2)),
        (cfg(2, 3, 4, 4), Modes(3)),
        (cfg(1, 3, 4, 4), Modes(2)),
        (cfg(2, 4, 5, 5), Modes(2)),
        (cfg(2, 4, 5, 5), Modes(3)),
        (cfg(2, 4, 5, 5), Modes(4)),
        (cfg(2, 5, 6, 6), Modes(4)),
        (cfg(2, 4, 5, 5), Beta),
    ]
}

fn trial_rng(seed: u64, arm: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((arm as u64) << 32) | trial as u64);
    rng
}

fn scheme_for(c: &SystemConfig, how: Construction, block: &ChannelBlock) -> Result<Scheme> {
    match how {
        Construction::Beta => build_beta_scheme(c),
        Construction::Modes(k) if k == c.n1() => build_full_mode_scheme(c),
        Construction::Modes(k) => build_space_freq_scheme(c, k, &block.h12),
    }
}

fn modes_of(c: &SystemConfig, how: Construction) -> usize {
    match how {
        Construction::Modes(k) => k,
        Construction::Beta => c.n1(),
    }
}

fn label(how: Construction) -> String {
    match how {
        Construction::Modes(k) => format!("K={k}"),
        Construction::Beta => "beta".into(),
    }
}

fn required_passes(trials: usize) -> usize {
    (SCHEME_PASS_FRACTION * trials as f64).ceil() as usize
}

/// Algebraic conditions of every construction on `trials` random blocks,
/// with exact-structure arms and negative controls.
pub fn suite_scheme_structure(trials: usize, seed: u64) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let mut report = SuiteReport::new("schemes");
    let mut out = Checks::default();
    let roster = scheme_roster();

    for (arm, &(c, how)) in roster.iter().enumerate() {
        let name = c.to_string();
        let scen = label(how);
        let k = modes_of(&c, how);
        let outcomes: Vec<Result<(bool, Option<f64>)>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, arm, t);
                let block = draw_block_with(&c, Channel::Zic, k, &mut rng)?;
                let scheme = scheme_for(&c, how, &block)?;
                let rep = verify_conditions(&scheme, &block.bank, &block.h12)?;
                Ok((rep.passed(), split_orthogonality(&scheme)))
            })
            .collect();
        let mut passes = 0;
        let mut worst_split: f64 = 0.0;
        for o in outcomes {
            match o {
                Ok((ok, split)) => {
                    passes += ok as usize;
                    worst_split = worst_split.max(split.unwrap_or(0.0));
                }
                Err(e) => {
                    out.error(&name, &scen, "scheme construction", &e);
                }
            }
        }
        out.check(
            passes >= required_passes(trials),
            &name,
            &scen,
            "nulling, decodability, beamformer rank and whitening",
            format!(">= {} of {trials} blocks", required_passes(trials)),
            format!("{passes} of {trials}"),
        );
        out.check(
            worst_split < 1e-12,
            &name,
            &scen,
            "frequency split beamformers are orthogonal",
            "< 1e-12",
            format!("{worst_split:.3e}"),
        );
    }

    for n1 in 2..=8 {
        for m1 in 1..n1 {
            let ok = r_matrix_check(n1, m1);
            out.check(ok, &format!("n1={n1} m1={m1}"), "cyclic", "R matrix full rank", true, ok);
        }
    }

    for n1 in 2..=8 {
        for m1 in 1..n1 {
            let pair = format!("n1={n1} m1={m1}");
            match dft_nulling_pair(n1, m1) {
                Ok((q, p)) => {
                    let r = max_abs(&(&q * &p));
                    out.check(r < 1e-12, &pair, "dft", "DFT pair orthogonal", "< 1e-12", format!("{r:.3e}"));
                }
                Err(e) => out.error(&pair, "dft", "DFT pair", &e),
            }
        }
    }

    structure_arms(&mut out, trials, seed)?;
    controls(&mut out, trials, seed)?;

    report.absorb(out);
    report.touch(&[
        "dft_nulling_pair",
        "time_expand_pair",
        "cyclic_pattern",
        "effective_direct_channel",
        "r_matrix_check",
        "beta_nulling",
        "successive_beamformer",
        "build_space_freq_scheme",
        "verify_conditions",
        "draw_block",
    ]);
    report.wall_time = start.elapsed();
    Ok(report)
}

const STRUCTURE_ARM: usize = 1000;
const CONTROL_ARM: usize = 2000;

fn structure_arms(out: &mut Checks, trials: usize, seed: u64) -> Result<()> {
    for n1 in 2..=6 {
        for m1 in 1..n1 {
            let pair = format!("n1={n1} m1={m1}");
            let (q, p) = dft_nulling_pair(n1, m1)?;
            let (tq, tp) = time_expand_pair(&q, &p, n1 + 1, n1)?;

            let (bank, pattern) = permuted_dft_bank(n1, m1)?;
            let a = effective_direct_channel(&bank, &pattern, &tq)?;
            let dev = max_abs(&(&a - permuted_dft_vandermonde(n1, m1)));
            let margin = rank_margin(&a);
            out.check(
                dev < 1e-10 && margin > RANK_TOLERANCE,
                &pair,
                "permuted-DFT bank",
                "effective channel is a full-rank Vandermonde matrix",
                "deviation < 1e-10, margin > 1e-8",
                format!("deviation {dev:.3e}, margin {margin:.3e}"),
            );

            let arm = STRUCTURE_ARM + n1 * 10 + m1;
            let cyc = cyclic_pattern(n1, m1, n1)?;
            let mut kron_worst: f64 = 0.0;
            let mut full_rank = 0;
            for t in 0..trials {
                let mut rng = trial_rng(seed, arm, t);
                let h12 = cscg_matrix(n1, n1 + 1, &mut rng);
                let lhs = &tq * kron(&identity(n1), &h12) * &tp;
                kron_worst = kron_worst.max(max_abs(&(lhs - kron(&(&q * &p), &h12))));
                let bank = cscg_matrix(n1, n1, &mut rng);
                let a = effective_direct_channel(&bank, &cyc, &tq)?;
                full_rank += (rank_margin(&a) > RANK_TOLERANCE) as usize;
            }
            out.check(
                kron_worst < 1e-12,
                &pair,
                "time expansion",
                "Kronecker factorisation of the nulled interference",
                "< 1e-12",
                format!("{kron_worst:.3e}"),
            );
            out.check(
                full_rank >= required_passes(trials),
                &pair,
                "cyclic",
                "cyclic switching gives a full-rank effective channel",
                format!(">= {} of {trials}", required_passes(trials)),
                format!("{full_rank} of {trials}"),
            );
        }
    }

    for (n1, m1) in [(2, 1), (4, 2), (6, 2), (6, 3)] {
        let pair = format!("n1={n1} m1={m1}");
        let beta = n1 / m1;
        let q = beta_nulling(n1, m1)?;
        let p = kron(&identity(m1), &successive_beamformer(beta)?);
        let r = max_abs(&(&q * &p));
        out.check(r == 0.0, &pair, "beta", "block nulling annihilates the successive beamformer", "0", format!("{r:.3e}"));

        let ones = CMatrix::from_element(1, beta, c(1.0, 0.0));
        let mut ok = 0;
        for t in 0..trials {
            let mut rng = trial_rng(seed, STRUCTURE_ARM + 500 + n1 * 10 + m1, t);
            let blocks: Vec<CMatrix> = (0..beta).map(|_| cscg_matrix(n1, m1, &mut rng)).collect();
            let stacked = kron(&ones, &identity(n1)) * block_diag(&blocks);
            ok += (rank(&stacked, RANK_TOLERANCE) == n1) as usize;
        }
        out.check(
            ok >= required_passes(trials),
            &pair,
            "beta",
            "summed fresh-mode blocks have full rank",
            format!(">= {} of {trials}", required_passes(trials)),
            format!("{ok} of {trials}"),
        );
    }
    Ok(())
}

fn controls(out: &mut Checks, trials: usize, seed: u64) -> Result<()> {
    let c = SystemConfig::new(1, 2, 3, 3)?;
    let name = c.to_string();
    let blind = build_full_mode_scheme(&c)?;
    let frozen = Scheme { pattern: ModeSwitchPattern::constant(2, 1, 2)?, ..blind };
    let mut rank_failures = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, CONTROL_ARM, t);
        let block = draw_block_with(&c, Channel::Zic, 2, &mut rng)?;
        let rep = verify_conditions(&frozen, &block.bank, &block.h12)?;
        rank_failures += (!rep.direct_rank_ok) as usize;
    }
    out.check(
        rank_failures == trials,
        &name,
        "no switching",
        "negative control: a fixed mode loses rank",
        format!("rank fails on {trials} of {trials}"),
        format!("rank fails on {rank_failures} of {trials}"),
    );

    let c = SystemConfig::new(1, 3, 4, 4)?;
    let name = c.to_string();
    let mut nulling_failures = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, CONTROL_ARM + 1, t);
        let built = draw_block_with(&c, Channel::Zic, 2, &mut rng)?;
        let other = draw_block_with(&c, Channel::Zic, 2, &mut rng)?;
        let scheme = build_space_freq_scheme(&c, 2, &built.h12)?;
        let rep = verify_conditions(&scheme, &built.bank, &other.h12)?;
        nulling_failures += (!rep.nulling_ok) as usize;
    }
    out.check(
        nulling_failures == trials,
        &name,
        "K=2, mismatched H12",
        "negative control: spatial nulling is channel specific",
        format!("nulling fails on {trials} of {trials}"),
        format!("nulling fails on {nulling_failures} of {trials}"),
    );
    Ok(())
}

/// One slope case: configuration, modes, tolerance.
pub fn slope_roster() -> Vec<(SystemConfig, usize, f64)> {
    let cfg = |a, b, c, d| SystemConfig::new(a, b, c, d).expect("roster config");
    vec![
        (cfg(1, 2, 3, 3), 2, 0.1),
        (cfg(1, 2, 3, 3), 1, 0.1),
        (cfg(1, 3, 4, 4), 2, 0.15),
        (cfg(1, 3, 4, 4), 3, 0.15),
    ]
}

/// High-SNR slopes of simulated rates against the per-slot stream pairs.
pub fn suite_montecarlo_slopes(seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = SuiteReport::new("slopes");
    let mut out = Checks::default();
    for (c, k, tol) in slope_roster() {
        let name = c.to_string();
        let scenario = Scenario::without_csit(Channel::Zic, Some(k));
        let scen = scenario.to_string();
        let expected = limited_modes_corner(&c, k)?;
        let (e1, e2) = (to_f64(expected.d1), to_f64(expected.d2));
        match snr_sweep(&c, &scenario, &SLOPE_GRID_DB, SLOPE_TRIALS, seed).and_then(|curve| estimate_slopes(&curve, SLOPE_GRID_DB[0])) {
            Ok(est) => {
                let ok = (est.d1_hat - e1).abs() <= tol && (est.d2_hat - e2).abs() <= tol;
                out.check(
                    ok,
                    &name,
                    &scen,
                    "rate slopes match the per-slot stream pair",
                    format!("({e1:.4}, {e2:.4}) +/- {tol}"),
                    format!("({:.4}, {:.4})", est.d1_hat, est.d2_hat),
                );
            }
            Err(e) => out.error(&name, &scen, "slope estimation", &e),
        }
    }

    // Zero power must give zero rate.
    let c = SystemConfig::new(1, 2, 3, 3)?;
    let block = draw_block_with(&c, Channel::Zic, 2, &mut trial_rng(seed, 0, 0))?;
    let (r1, r2) = block_rates(&block, &build_full_mode_scheme(&c)?, 0.0)?;
    out.check(r1 == 0.0 && r2 == 0.0, &c.to_string(), "p = 0", "zero power gives zero rate", "(0, 0)", format!("({r1}, {r2})"));

    report.absorb(out);
    report.touch(&["draw_block", "block_rates", "snr_sweep", "estimate_slopes", "limited_modes_corner"]);
    report.wall_time = start.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteChoice {
    Regions,
    Schemes,
    Slopes,
    All,
}

/// Reports of the selected suites, in the order regions, schemes, slopes.
pub fn run_suites(choice: SuiteChoice, max_antennas: usize, trials: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    use SuiteChoice::*;
    let mut out = Vec::new();
    if matches!(choice, Regions | All) {
        out.push(suite_region_identities(max_antennas)?);
    }
    if matches!(choice, Schemes | All) {
        out.push(suite_scheme_structure(trials, seed)?);
    }
    if matches!(choice, Slopes | All) {
        out.push(suite_montecarlo_slopes(seed)?);
    }
    Ok(out)
}

/// Operations in [`OPERATIONS`] that none of `reports` touched.
pub fn uncovered_operations(reports: &[SuiteReport]) -> Vec<&'static str> {
    OPERATIONS
        .iter()
        .copied()
        .filter(|op| !reports.iter().any(|r| r.operations.contains(*op)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{HalfPlane, Rational};

    #[test]
    fn region_suite_small_grid() {
        let r = suite_region_identities(4).unwrap();
        assert!(r.passed(), "{:#?}", &r.failures[..r.failures.len().min(5)]);
        assert!(r.cases >= 256);
    }

    #[test]
    fn mutation_is_caught() {
        let target = SystemConfig::new(1, 2, 3, 3).unwrap();
        let corrupt = move |c: &SystemConfig, tag: &str, r: DofRegion| {
            if *c == target && tag == "limited-modes" {
                let mut hs = r.inequalities().to_vec();
                let last = hs.last_mut().unwrap();
                *last = HalfPlane::new(last.a1, last.a2 + Rational::new(1, 7), last.b).unwrap();
                DofRegion::new(hs).unwrap()
            } else {
                r
            }
        };
        let r = suite_region_identities_with(3, &corrupt).unwrap();
        assert!(!r.passed());
        assert!(r.failures.iter().all(|f| f.config == "(1,2,3,3)"));
    }

    #[test]
    fn scheme_suite_passes() {
        let r = suite_scheme_structure(20, 42).unwrap();
        assert!(r.passed(), "{:#?}", r.failures);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&suite_scheme_structure(5, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&suite_scheme_structure(5, 3).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("wall_time"));
    }

    #[test]
    fn suites_cover_every_operation() {
        let reports = run_suites(SuiteChoice::All, 2, 2, 0).unwrap();
        assert_eq!(uncovered_operations(&reports), Vec::<&str>::new());
        assert!(matches!(suite_region_identities(0), Err(Error::Domain(_))));
        assert!(matches!(suite_scheme_structure(0, 0), Err(Error::Domain(_))));
    }
}
