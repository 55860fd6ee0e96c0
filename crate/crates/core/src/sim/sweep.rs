//! Monte Carlo SNR sweeps and their CSV export.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{classify, Governing, Scenario, Side, SystemConfig};
use crate::error::{Error, Result};
use crate::scheme::{build_full_mode_scheme, build_space_freq_scheme, Scheme};

use super::channel::draw_block_with;
use super::rates::block_rates;

pub const CSV_HEADER: [&str; 5] = ["snr_db", "r1_bits", "r2_bits", "trials", "seed"];

/// Average per-slot rates on an SNR grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub snr_db: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Reconfigurable transmitter viewed as transmitter 1, and the mode count it
/// actually cycles through.
struct Plan {
    config: SystemConfig,
    scenario: Scenario,
    swapped: bool,
    modes: usize,
    blind: Option<Scheme>,
}

impl Plan {
    fn new(config: &SystemConfig, scenario: &Scenario) -> Result<Self> {
        let label = classify(config, scenario)?;
        match label.governing {
            Governing::ZicFullModes
            | Governing::FicFullModesTx1
            | Governing::FicFullModesTx2
            | Governing::LimitedModes
            | Governing::IidNoSwitching => {}
            other => {
                return Err(Error::Domain(format!(
                    "{config} under {scenario} is governed by {}, which has no mode-switching scheme to simulate",
                    other.as_str()
                )))
            }
        }
        let swapped = label.side == Side::Tx2;
        let eff = if swapped { config.swapped() } else { *config };
        let k = label.modes.unwrap_or(eff.m1()).min(eff.n1());
        let blind = if k == eff.n1() { Some(build_full_mode_scheme(&eff)?) } else { None };
        Ok(Self { config: eff, scenario: *scenario, swapped, modes: k, blind })
    }

    fn trial(&self, seed: u64, grid: usize, trial: usize, p: f64) -> Result<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((grid as u64) << 32) | trial as u64);
        let block = draw_block_with(&self.config, self.scenario.channel, self.modes, &mut rng)?;
        let (r1, r2) = match &self.blind {
            Some(s) => block_rates(&block, s, p)?,
            None => block_rates(&block, &build_space_freq_scheme(&self.config, self.modes, &block.h12)?, p)?,
        };
        Ok(if self.swapped { (r2, r1) } else { (r1, r2) })
    }
}

/// Averages [`block_rates`] over `trials` fresh blocks per SNR point. Trial
/// `i` at grid point `g` draws from its own stream of `seed`, so results do
/// not depend on scheduling.
pub fn snr_sweep(
    config: &SystemConfig,
    scenario: &Scenario,
    grid_db: &[f64],
    trials: usize,
    seed: u64,
) -> Result<RateCurve> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    if grid_db.is_empty() || grid_db.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("SNR grid must be nonempty and finite".into()));
    }
    if grid_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("SNR grid must be strictly ascending".into()));
    }
    let plan = Plan::new(config, scenario)?;
    let (mut r1, mut r2) = (Vec::with_capacity(grid_db.len()), Vec::with_capacity(grid_db.len()));
    for (g, &db) in grid_db.iter().enumerate() {
        let p = db_to_linear(db);
        let rates = (0..trials)
            .into_par_iter()
            .map(|i| plan.trial(seed, g, i, p))
            .collect::<Result<Vec<_>>>()?;
        let (s1, s2) = rates.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        r1.push(s1 / trials as f64);
        r2.push(s2 / trials as f64);
    }
    Ok(RateCurve { snr_db: grid_db.to_vec(), r1, r2, trials, seed })
}

/// `printf("%.12g")`-style formatting.
pub fn format_g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl RateCurve {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Internal(format!("CSV write failed: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER).map_err(io)?;
        for i in 0..self.snr_db.len() {
            out.write_record([
                format_g12(self.snr_db[i]),
                format_g12(self.r1[i]),
                format_g12(self.r2[i]),
                self.trials.to_string(),
                self.seed.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Internal(format!("CSV flush failed: {e}")))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let parse = |e: csv::Error| Error::Parse(format!("CSV: {e}"));
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers().map_err(parse)?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
        }
        let mut curve = RateCurve { snr_db: vec![], r1: vec![], r2: vec![], trials: 0, seed: 0 };
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(parse)?;
            let field = |i: usize| rec.get(i).unwrap_or_default();
            let float = |i: usize| {
                field(i)
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {}: {e}", row + 1, CSV_HEADER[i])))
            };
            let trials: usize = field(3).parse().map_err(|e| Error::Parse(format!("trials: {e}")))?;
            let seed: u64 = field(4).parse().map_err(|e| Error::Parse(format!("seed: {e}")))?;
            if row > 0 && (trials != curve.trials || seed != curve.seed) {
                return Err(Error::Parse(format!("row {} changes trials or seed", row + 1)));
            }
            curve.trials = trials;
            curve.seed = seed;
            curve.snr_db.push(float(0)?);
            curve.r1.push(float(1)?);
            curve.r2.push(float(2)?);
        }
        Ok(curve)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Channel;

    fn cfg(m1: usize, n1: usize, m2: usize, n2: usize) -> SystemConfig {
        SystemConfig::new(m1, n1, m2, n2).unwrap()
    }

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(30.0), "30");
        assert_eq!(format_g12(1.5), "1.5");
        assert_eq!(format_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g12(123456.789), "123456.789");
        assert_eq!(format_g12(1e-5), "1e-05");
        assert_eq!(format_g12(2.5e13), "2.5e+13");
        assert_eq!(format_g12(-7.25), "-7.25");
        assert_eq!(format_g12(999999999999.5), "1e+12");
        assert_eq!(format_g12(0.0001), "0.0001");
    }

    #[test]
    fn sweep_is_reproducible() {
        let c = cfg(1, 2, 3, 3);
        let s = Scenario::without_csit(Channel::Zic, Some(2));
        let a = snr_sweep(&c, &s, &[0.0, 20.0], 1, 5).unwrap();
        let b = snr_sweep(&c, &s, &[0.0, 20.0], 1, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, snr_sweep(&c, &s, &[0.0, 20.0], 1, 6).unwrap());
        let threaded = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| snr_sweep(&c, &s, &[0.0, 20.0], 16, 5).unwrap());
        assert_eq!(threaded, snr_sweep(&c, &s, &[0.0, 20.0], 16, 5).unwrap());
    }

    #[test]
    fn rates_grow_with_snr() {
        let c = cfg(1, 2, 3, 3);
        let s = Scenario::without_csit(Channel::Zic, Some(2));
        let curve = snr_sweep(&c, &s, &[0.0, 10.0, 20.0, 30.0, 40.0, 50.0], 200, 1).unwrap();
        for w in curve.r1.windows(2).chain(curve.r2.windows(2)) {
            assert!(w[1] >= w[0], "{curve:?}");
        }
        assert!(curve.r1.iter().chain(&curve.r2).all(|&r| r >= 0.0));
    }

    #[test]
    fn variance_halves_with_double_trials() {
        let c = cfg(1, 2, 3, 3);
        let s = Scenario::without_csit(Channel::Zic, Some(2));
        let reps = 200;
        let sample = |trials: usize, offset: u64| -> Vec<f64> {
            (0..reps).map(|r| snr_sweep(&c, &s, &[20.0], trials, offset + r).unwrap().r1[0]).collect()
        };
        let var = |xs: &[f64]| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
        };
        let ratio = var(&sample(20, 0)) / var(&sample(40, 10_000));
        assert!((2.0 / 1.5..=3.0).contains(&ratio), "variance ratio {ratio}");
    }

    #[test]
    fn tx2_side_swaps_rates() {
        // Mirrored shape: transmitter 2 is reconfigurable.
        let c = cfg(3, 3, 1, 2);
        let s = Scenario::without_csit(Channel::Fic, None);
        let curve = snr_sweep(&c, &s, &[40.0, 50.0], 50, 2).unwrap();
        let mirror = snr_sweep(&c.swapped(), &Scenario::without_csit(Channel::Fic, None), &[40.0, 50.0], 50, 2).unwrap();
        assert_eq!(curve.r1, mirror.r2);
        assert_eq!(curve.r2, mirror.r1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = cfg(1, 2, 3, 3);
        let s = Scenario::without_csit(Channel::Zic, Some(2));
        assert!(snr_sweep(&c, &s, &[10.0, 0.0], 1, 0).is_err());
        assert!(snr_sweep(&c, &s, &[], 1, 0).is_err());
        assert!(snr_sweep(&c, &s, &[0.0], 0, 0).is_err());
        assert!(matches!(
            snr_sweep(&c, &Scenario::with_csit(Channel::Zic), &[0.0], 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            snr_sweep(&cfg(2, 2, 3, 3), &Scenario::without_csit(Channel::Zic, None), &[0.0], 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            snr_sweep(&c, &Scenario::without_csit(Channel::Zic, Some(0)), &[0.0], 1, 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let c = cfg(1, 2, 3, 3);
        let s = Scenario::without_csit(Channel::Zic, Some(1));
        let curve = snr_sweep(&c, &s, &[0.0, 10.0], 3, 11).unwrap();
        let text = curve.to_csv_string().unwrap();
        assert!(text.starts_with("snr_db,r1_bits,r2_bits,trials,seed\n0,"));
        let back = RateCurve::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.snr_db, curve.snr_db);
        assert_eq!((back.trials, back.seed), (3, 11));
        for (a, b) in back.r1.iter().zip(&curve.r1).chain(back.r2.iter().zip(&curve.r2)) {
            assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0));
        }
        assert!(RateCurve::read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
