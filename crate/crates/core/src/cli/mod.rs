//! The command-line driver: ring-spec files in, JSON reports out.

mod report;
mod spec;
mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::groups::DEFAULT_CAP;
use crate::unitary::{UnitaryContext, UnitaryError};

pub use report::{matrix_json, set_json, Check, Report, Status};
pub use spec::{parse_ring_spec, RingSpec, SpecError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RingAxioms,
    FormParams,
    Relations,
    MembershipAgreement,
    Congruence,
    Lemma46,
    CommutatorFormulas,
    Sandwich,
    Localization,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::RingAxioms => "ring-axioms",
            Suite::FormParams => "form-params",
            Suite::Relations => "relations",
            Suite::MembershipAgreement => "membership-agreement",
            Suite::Congruence => "congruence",
            Suite::Lemma46 => "lemma46",
            Suite::CommutatorFormulas => "commutator-formulas",
            Suite::Sandwich => "sandwich",
            Suite::Localization => "localization",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Enumerate `U` and decide membership in `CU` exactly.
    Exact,
    /// Never enumerate `U`; test `CU` against elementary generators only.
    Necessary,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub spec: RingSpec,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    /// Limit on every enumeration and closure.
    pub cap: usize,
    /// Limit on each group of the supplemented-base families.
    pub family_cap: usize,
    pub mode: Mode,
    /// Record per-check wall-clock times; reports are then no longer
    /// reproducible byte for byte.
    pub timing: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite, spec: RingSpec, n: usize, seed: u64) -> Self {
        SuiteConfig {
            suite,
            spec,
            n,
            seed,
            samples: 100,
            cap: DEFAULT_CAP,
            family_cap: 100_000,
            mode: Mode::Exact,
            timing: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("ring spec: {0}")]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, CliError> {
    if cfg.n < 3 {
        return Err(CliError::Config(format!("n = {} (need n ≥ 3)", cfg.n)));
    }
    if cfg.cap == 0 || cfg.family_cap == 0 {
        return Err(CliError::Config("caps must be positive".into()));
    }
    let ctx = Arc::new(UnitaryContext::new(cfg.spec.form_ring.clone(), cfg.n)?);
    let mut rec = suites::Recorder::new(cfg.timing);
    let run = match cfg.suite {
        Suite::RingAxioms => suites::ring_axioms,
        Suite::FormParams => suites::form_params,
        Suite::Relations => suites::relations,
        Suite::MembershipAgreement => suites::membership_agreement,
        Suite::Congruence => suites::congruence,
        Suite::Lemma46 => suites::lemma46,
        Suite::CommutatorFormulas => suites::commutator_formulas,
        Suite::Sandwich => suites::sandwich,
        Suite::Localization => suites::localization,
    };
    run(cfg, &ctx, &mut rec);
    let fr = &cfg.spec.form_ring;
    let config = json!({
        "ring": fr.ring().label(),
        "lambda": fr.lambda(),
        "Lambda": set_json(fr.form_parameter()),
        "C": set_json(cfg.spec.c),
        "n": cfg.n,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "cap": cfg.cap,
        "family_cap": cfg.family_cap,
        "mode": match cfg.mode {
            Mode::Exact => "exact",
            Mode::Necessary => "necessary",
        },
    });
    Ok(Report {
        suite: cfg.suite.name().into(),
        config,
        checks: rec.checks,
    })
}

#[derive(Debug, Parser)]
#[command(name = "unitary-sandwich", version, about = "Verification suites for hyperbolic unitary groups over finite form rings")]
struct Args {
    #[arg(value_enum)]
    suite: Suite,
    /// Ring-spec file.
    #[arg(long)]
    ring: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 100_000)]
    family_cap: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock milliseconds per check.
    #[arg(long)]
    timing: bool,
}

/// Runs the command line and returns the exit code: 0 when every check
/// passes, 1 on any failure, 2 on usage or configuration errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(report) => {
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(args: &Args) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&args.ring)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.ring.display())))?;
    let spec = parse_ring_spec(&text)?;
    let cfg = SuiteConfig {
        suite: args.suite,
        spec,
        n: args.n,
        seed: args.seed,
        samples: args.samples,
        cap: args.cap,
        family_cap: args.family_cap,
        mode: args.mode,
        timing: args.timing,
    };
    let report = run_suite(&cfg)?;
    let text = report.render();
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: Suite, text: &str) -> SuiteConfig {
        SuiteConfig::new(suite, parse_ring_spec(text).unwrap(), 3, 11)
    }

    #[test]
    fn rejects_small_rank_and_zero_caps() {
        let mut c = cfg(Suite::RingAxioms, "ring zmod 2\nlambda 1\nLambda max");
        c.n = 2;
        assert!(matches!(run_suite(&c), Err(CliError::Config(_))));
        c.n = 3;
        c.cap = 0;
        assert!(matches!(run_suite(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn suites_echo_config_and_pass_on_small_rings() {
        for suite in [Suite::RingAxioms, Suite::FormParams, Suite::Lemma46, Suite::Localization] {
            let mut c = cfg(suite, "ring zmod 2\nlambda 1\nLambda min");
            c.samples = 10;
            let r = run_suite(&c).unwrap();
            assert_eq!(r.suite, suite.name());
            assert_eq!(r.config["seed"], 11);
            assert!(r.passed(), "{}", r.render());
            assert!(r.checks.iter().all(|k| k.ms == 0));
        }
    }

    #[test]
    fn necessary_mode_never_enumerates() {
        let mut c = cfg(Suite::MembershipAgreement, "ring zmod 2\nlambda 1\nLambda min");
        c.mode = Mode::Necessary;
        c.samples = 5;
        let r = run_suite(&c).unwrap();
        assert_eq!(r.count(Status::Skip), 1);
        assert!(r.passed());
    }
}
