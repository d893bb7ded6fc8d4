//! Experiment configuration: defaults, flat `key=value` config files, and
//! typed flag overrides. Later layers win; the file parser rejects unknown
//! keys so a typo fails the run instead of silently using a default.

use std::path::PathBuf;

use csh_core::estimates::ExtScalar;
use csh_core::{Formulation, QuarticGrouping};
use thiserror::Error;

/// Keys accepted in a config file, also mirrored by command-line flags.
pub const KEYS: [&str; 13] = [
    "n",
    "length",
    "s",
    "dt",
    "t_end",
    "potential",
    "amplitude",
    "seed",
    "seeds",
    "formulation",
    "grouping",
    "record_every",
    "out",
];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{place}: unknown key `{key}` (valid keys: {})", KEYS.join(", "))]
    UnknownKey { place: String, key: String },
    #[error("{place}: expected `key=value`, got `{line}`")]
    Malformed { place: String, line: String },
    #[error("{place}: invalid value for `{key}`: {reason}")]
    BadValue {
        place: String,
        key: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Parameters of one run. `s` is the Sobolev index of the data class: φ₀ is
/// drawn in H^{s+1}, ∂_tφ₀ in H^s, and diagnostics report those norms.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub length: f64,
    pub s: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Coefficients `c₁[,c₂[,c₃]]` of the potential `V(r) = Σ cₖ rᵏ`.
    pub potential: Vec<f64>,
    pub amplitude: f64,
    pub seed: u64,
    /// Optional seed sweep: each seed becomes an independent run on its own
    /// worker thread with its own output file.
    pub seeds: Vec<u64>,
    pub formulation: Formulation,
    pub grouping: QuarticGrouping,
    /// Record every k-th step; 0 records only the initial and final states.
    pub record_every: usize,
    /// Artifact path; `None` writes the artifact to stdout.
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 64,
            length: 16.0 * std::f64::consts::PI,
            s: 0.3,
            dt: 2f64.powi(-10),
            t_end: 1.0,
            potential: vec![1.0],
            amplitude: 0.1,
            seed: 2026,
            seeds: Vec::new(),
            formulation: Formulation::Reformulated,
            grouping: QuarticGrouping::FullProduct,
            record_every: 0,
            out: None,
        }
    }
}

impl RunConfig {
    /// Apply a config file: `key = value` lines, `#`/`;` comments, blank
    /// lines ignored, later duplicates win.
    pub fn apply_file(&mut self, text: &str, path: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let place = format!("{path}:{}", idx + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
                place: place.clone(),
                line: line.to_string(),
            })?;
            self.set(key.trim(), value.trim(), &place)?;
        }
        Ok(())
    }

    /// Set one key from its textual form.
    pub fn set(&mut self, key: &str, value: &str, place: &str) -> Result<(), ConfigError> {
        let bad = |reason: String| ConfigError::BadValue {
            place: place.to_string(),
            key: key.to_string(),
            reason,
        };
        match key {
            "n" => self.n = value.parse().map_err(|e| bad(format!("{e}")))?,
            "length" => self.length = parse_f64(value).map_err(bad)?,
            "s" => self.s = parse_f64(value).map_err(bad)?,
            "dt" => self.dt = parse_f64(value).map_err(bad)?,
            "t_end" => self.t_end = parse_f64(value).map_err(bad)?,
            "potential" => self.potential = parse_f64_list(value).map_err(bad)?,
            "amplitude" => self.amplitude = parse_f64(value).map_err(bad)?,
            "seed" => self.seed = value.parse().map_err(|e| bad(format!("{e}")))?,
            "seeds" => self.seeds = parse_u64_list(value).map_err(bad)?,
            "formulation" => self.formulation = parse_formulation(value).map_err(bad)?,
            "grouping" => self.grouping = parse_grouping(value).map_err(bad)?,
            "record_every" => self.record_every = value.parse().map_err(|e| bad(format!("{e}")))?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => {
                return Err(ConfigError::UnknownKey {
                    place: place.to_string(),
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Domain checks shared by every subcommand that runs the solver.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        if !self.n.is_power_of_two() || self.n < 4 {
            return fail(format!("n must be a power of two >= 4, got {}", self.n));
        }
        if self.length <= 0.0 || !self.length.is_finite() {
            return fail(format!(
                "length must be positive and finite, got {}",
                self.length
            ));
        }
        if self.s <= 0.0 || !self.s.is_finite() {
            return fail(format!("s must be positive, got {}", self.s));
        }
        if self.dt <= 0.0 || !self.dt.is_finite() {
            return fail(format!("dt must be positive and finite, got {}", self.dt));
        }
        if self.t_end < 0.0 || !self.t_end.is_finite() {
            return fail(format!(
                "t_end must be nonnegative and finite, got {}",
                self.t_end
            ));
        }
        if self.amplitude < 0.0 || !self.amplitude.is_finite() {
            return fail(format!(
                "amplitude must be nonnegative and finite, got {}",
                self.amplitude
            ));
        }
        if self.potential.is_empty()
            || self.potential.len() > 3
            || self.potential.iter().any(|c| !c.is_finite())
        {
            return fail(format!(
                "potential needs 1..=3 finite coefficients, got {:?}",
                self.potential
            ));
        }
        Ok(())
    }

    /// The seeds this configuration sweeps over (the single `seed` when no
    /// sweep was requested).
    pub fn sweep_seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![self.seed]
        } else {
            self.seeds.clone()
        }
    }
}

fn parse_f64(value: &str) -> Result<f64, String> {
    value.parse::<f64>().map_err(|e| format!("{e}"))
}

fn parse_f64_list(value: &str) -> Result<Vec<f64>, String> {
    value.split(',').map(|v| parse_f64(v.trim())).collect()
}

fn parse_u64_list(value: &str) -> Result<Vec<u64>, String> {
    value
        .split(',')
        .map(|v| v.trim().parse::<u64>().map_err(|e| format!("{e}")))
        .collect()
}

pub fn parse_formulation(value: &str) -> Result<Formulation, String> {
    match value {
        "reformulated" => Ok(Formulation::Reformulated),
        "direct" => Ok(Formulation::Direct),
        other => Err(format!(
            "expected `reformulated` or `direct`, got `{other}`"
        )),
    }
}

pub fn parse_grouping(value: &str) -> Result<QuarticGrouping, String> {
    match value {
        "full-product" => Ok(QuarticGrouping::FullProduct),
        "split-multiplier" => Ok(QuarticGrouping::SplitMultiplier),
        other => Err(format!(
            "expected `full-product` or `split-multiplier`, got `{other}`"
        )),
    }
}

/// Parse an exact scalar for the registry check: `p/q`, an integer, or a
/// decimal (converted exactly), with an optional `+eps`/`-eps` suffix for
/// an infinitesimal offset. No floating point is involved.
pub fn parse_ext_scalar(text: &str) -> Result<ExtScalar, String> {
    let trimmed = text.trim();
    let (base, tick) = if let Some(stripped) = trimmed.strip_suffix("+eps") {
        (stripped.trim_end(), 1)
    } else if let Some(stripped) = trimmed.strip_suffix("-eps") {
        (stripped.trim_end(), -1)
    } else {
        (trimmed, 0)
    };
    let scalar = if let Some((num, den)) = base.split_once('/') {
        let p: i64 = num.trim().parse().map_err(|e| format!("numerator: {e}"))?;
        let q: i64 = den
            .trim()
            .parse()
            .map_err(|e| format!("denominator: {e}"))?;
        if q <= 0 {
            return Err(format!("denominator must be positive, got {q}"));
        }
        ExtScalar::rational(p, q)
    } else if let Some((whole, frac)) = base.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        let head: i64 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|e| format!("integer part: {e}"))?
        };
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!(
                "fractional part must be 1..=15 digits, got `{frac}`"
            ));
        }
        let tail: i64 = frac.parse().map_err(|e| format!("fractional part: {e}"))?;
        let den = 10i64.pow(frac.len() as u32);
        let total = head
            .checked_mul(den)
            .and_then(|h| h.checked_add(tail))
            .ok_or_else(|| format!("decimal `{base}` overflows exact arithmetic"))?;
        ExtScalar::rational(if negative { -total } else { total }, den)
    } else {
        ExtScalar::int(base.parse().map_err(|e| format!("{e}"))?)
    };
    Ok(scalar.tick(tick))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn file_roundtrip_and_precedence() {
        let mut cfg = RunConfig::default();
        cfg.apply_file(
            "# comment\n; also a comment\n\nn = 16\nlength=8.0\ns=0.5\ndt = 0.01\n\
             t_end=0.25\npotential = 0,1\namplitude=0.02\nseed = 7\nseeds=1, 2,3\n\
             formulation=direct\ngrouping=split-multiplier\nrecord_every=4\nout=run.csv\n\
             n = 32\n",
            "test.ini",
        )
        .unwrap();
        assert_eq!(cfg.n, 32, "later duplicate must win");
        assert_eq!(cfg.length, 8.0);
        assert_eq!(cfg.potential, vec![0.0, 1.0]);
        assert_eq!(cfg.seeds, vec![1, 2, 3]);
        assert_eq!(cfg.formulation, Formulation::Direct);
        assert_eq!(cfg.grouping, QuarticGrouping::SplitMultiplier);
        assert_eq!(cfg.record_every, 4);
        assert_eq!(cfg.out.as_deref(), Some(std::path::Path::new("run.csv")));
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let mut cfg = RunConfig::default();
        let err = cfg
            .apply_file("dt=0.1\nstepsize=0.1\n", "bad.ini")
            .unwrap_err();
        match err {
            ConfigError::UnknownKey { place, key } => {
                assert_eq!(place, "bad.ini:2");
                assert_eq!(key, "stepsize");
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_is_rejected() {
        let mut cfg = RunConfig::default();
        assert!(matches!(
            cfg.apply_file("just words\n", "bad.ini"),
            Err(ConfigError::Malformed { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_domains() {
        for (key, value) in [
            ("n", "12"),
            ("n", "2"),
            ("s", "0"),
            ("s", "-1"),
            ("dt", "0"),
            ("length", "-3"),
            ("amplitude", "-0.1"),
            ("potential", "1,2,3,4"),
        ] {
            let mut cfg = RunConfig::default();
            cfg.set(key, value, "test").unwrap();
            assert!(cfg.validate().is_err(), "{key}={value} must not validate");
        }
    }

    #[test]
    fn sweep_defaults_to_single_seed() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.sweep_seeds(), vec![cfg.seed]);
    }

    #[test]
    fn exact_scalar_forms_parse() {
        assert_eq!(parse_ext_scalar("1/4").unwrap(), ExtScalar::rational(1, 4));
        assert_eq!(parse_ext_scalar("0.3").unwrap(), ExtScalar::rational(3, 10));
        assert_eq!(
            parse_ext_scalar("3/10").unwrap(),
            ExtScalar::rational(3, 10)
        );
        assert_eq!(
            parse_ext_scalar("-0.25").unwrap(),
            ExtScalar::rational(-1, 4)
        );
        assert_eq!(parse_ext_scalar("2").unwrap(), ExtScalar::int(2));
        assert_eq!(
            parse_ext_scalar("1/4+eps").unwrap(),
            ExtScalar::rational(1, 4).tick(1)
        );
        assert_eq!(
            parse_ext_scalar("0.25-eps").unwrap(),
            ExtScalar::rational(1, 4).tick(-1)
        );
        for bad in ["1/0", "abc", "1.23456789012345678", "0.", "1/4+ eps x"] {
            assert!(parse_ext_scalar(bad).is_err(), "`{bad}` must not parse");
        }
    }
}
