//! Command-line interface for overring analysis: classify configs, run
//! the seeded property suite, sample random configs, solve Diophantine
//! system files, and verify the polynomial witnesses.
//!
//! Exit codes: 0 on success or all-PASS, 1 when a property or
//! reproduction fails (or the solver budget is exhausted), 2 on
//! malformed or non-realizable input.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use overring_core::abelian::FgAbelianGroup;
use overring_core::dedekind::{classify_budgeted, ModelError};
use overring_core::diophantine::{
    hilbert_basis_budgeted, solve_nonneg_budgeted, DiophantineError, Feasibility, DEFAULT_BUDGET,
};
use overring_core::format::{parse_config, parse_system, render_report};
use overring_core::suite::{
    check_nontor, check_prufer_consistency, find_non_localization_overring,
    reproduce_canonical_examples, CheckOutcome, ConfigSampler, SamplerParams, SearchOutcome,
    DEFAULT_SEARCH_ATTEMPTS,
};
use overring_core::witness::{
    flatness_negative_control, irrational_parts_nonzero, power_one_plus_sqrt2,
    substitution_negative_control, verify_exsimple_flatness, verify_exsimple_z_not_in_subring,
    Verification,
};

#[derive(Parser)]
#[command(
    name = "overring",
    version,
    about = "Decide localization and well-centeredness of Dedekind overrings from ideal-class data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the overring described by a config file
    Analyze {
        path: PathBuf,
        /// Frontier-expansion budget for the solver kernel
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Run the seeded property suite (exit 1 on any FAIL)
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Sample and classify random configs over one class group
    Random {
        /// Free rank of the class group
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Torsion moduli, comma separated (e.g. 2,4)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        torsion: Vec<i64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Compute the Hilbert basis of a homogeneous system file, or decide
    /// feasibility of an inhomogeneous one
    Hilbert {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Verify the explicit ring-theoretic witness computations
    Examples,
}

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { path, budget } => analyze(&path, budget),
        Command::Suite { seed, samples } => suite(seed, samples),
        Command::Random {
            rank,
            torsion,
            seed,
            count,
        } => random(rank, torsion, seed, count),
        Command::Hilbert { path, budget } => hilbert(&path, budget),
        Command::Examples => examples(),
    };
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INVALID
    })
}

fn analyze(path: &Path, budget: u64) -> u8 {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID;
        }
    };
    let report = match classify_budgeted(&config, budget) {
        Ok(r) => r,
        Err(ModelError::Diophantine(DiophantineError::ResourceExceeded { budget })) => {
            eprintln!(
                "error: solver budget of {budget} frontier expansions exhausted; \
                 re-run with a larger --budget"
            );
            return EXIT_FAIL;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    match render_report(&config, &report) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: cannot render report: {e}");
            return EXIT_FAIL;
        }
    }
    if report.valid {
        0
    } else {
        eprintln!("error: config is not realizable as a Dedekind overring");
        EXIT_INVALID
    }
}

fn outcome_line(name: &str, outcome: &CheckOutcome) -> bool {
    match outcome {
        CheckOutcome::Pass => {
            println!("{name}: PASS");
            true
        }
        CheckOutcome::Fail { config, detail } => {
            println!("{name}: FAIL ({detail})");
            println!("  offending config: {config:?}");
            false
        }
    }
}

fn suite(seed: u64, samples: usize) -> u8 {
    let mut all_pass = true;

    match reproduce_canonical_examples() {
        Ok(rows) => {
            for row in rows {
                let (loc, wc, awc) = row
                    .report
                    .verdict_triple()
                    .expect("reproduction rows validate");
                let fmt = |b: bool| if b { "Yes" } else { "No" };
                println!(
                    "reproduction {}: localization {} / well-centered {} / almost {}",
                    row.name,
                    fmt(loc),
                    fmt(wc),
                    fmt(awc)
                );
            }
            println!("reproduction table: PASS");
        }
        Err(e) => {
            println!("reproduction table: FAIL ({e})");
            all_pass = false;
        }
    }

    let mut sampler = ConfigSampler::new(seed, SamplerParams::torsion_only(64));
    match check_nontor(samples, &mut sampler) {
        Ok(outcome) => {
            all_pass &= outcome_line("torsion-group law (all overrings localize)", &outcome)
        }
        Err(e) => {
            println!("torsion-group law: error ({e})");
            all_pass = false;
        }
    }

    let z = FgAbelianGroup::integers();
    match find_non_localization_overring(&z, seed.wrapping_add(1), DEFAULT_SEARCH_ATTEMPTS) {
        Ok(SearchOutcome::Found(config)) => {
            println!("non-localization overring over Z: PASS");
            println!(
                "  witness config: kept {:?}, inverted {:?}",
                config
                    .kept_classes()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
                config
                    .inverted_classes()
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            );
        }
        Ok(SearchOutcome::NotFound) => {
            println!("non-localization overring over Z: FAIL (budget exhausted)");
            all_pass = false;
        }
        Err(e) => {
            println!("non-localization overring over Z: error ({e})");
            all_pass = false;
        }
    }

    let mut sampler = ConfigSampler::new(
        seed.wrapping_add(2),
        SamplerParams::finitely_generated_consistent(),
    );
    match check_prufer_consistency(samples, &mut sampler) {
        Ok(outcome) => {
            all_pass &= outcome_line(
                "finitely-generated consistency (almost well-centered implies localization)",
                &outcome,
            )
        }
        Err(e) => {
            println!("finitely-generated consistency: error ({e})");
            all_pass = false;
        }
    }

    if all_pass {
        println!("suite: all PASS");
        0
    } else {
        println!("suite: FAIL");
        EXIT_FAIL
    }
}

fn random(rank: usize, torsion: Vec<i64>, seed: u64, count: usize) -> u8 {
    let group = match FgAbelianGroup::new(rank, torsion) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let mut sampler = ConfigSampler::new(seed, SamplerParams::over_group(group));
    let mut produced = 0;
    let mut attempts = 0;
    while produced < count && attempts < count * 200 {
        attempts += 1;
        let Some(config) = sampler.next_valid() else {
            continue;
        };
        let report = match classify_budgeted(&config, DEFAULT_BUDGET) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_FAIL;
            }
        };
        produced += 1;
        println!("=== sample {produced} ===");
        match render_report(&config, &report) {
            Ok(text) => print!("{text}"),
            Err(e) => {
                eprintln!("error: cannot render report: {e}");
                return EXIT_FAIL;
            }
        }
    }
    if produced < count {
        eprintln!("error: sampler could not produce {count} valid configs");
        return EXIT_FAIL;
    }
    0
}

fn hilbert(path: &Path, budget: u64) -> u8 {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let sys = match parse_system(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID;
        }
    };
    if sys.is_homogeneous() && sys.all_nonnegative() {
        match hilbert_basis_budgeted(&sys, budget) {
            Ok(basis) => {
                println!("hilbert basis: {} generators", basis.generators.len());
                for g in &basis.generators {
                    let parts: Vec<String> = g.iter().map(ToString::to_string).collect();
                    println!("[{}]", parts.join(", "));
                }
                0
            }
            Err(DiophantineError::ResourceExceeded { budget }) => {
                eprintln!(
                    "error: solver budget of {budget} frontier expansions exhausted; \
                     re-run with a larger --budget"
                );
                EXIT_FAIL
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_FAIL
            }
        }
    } else {
        match solve_nonneg_budgeted(&sys, budget) {
            Ok(Feasibility::Feasible(witness)) => {
                let parts: Vec<String> = witness.iter().map(ToString::to_string).collect();
                println!("feasible: [{}]", parts.join(", "));
                0
            }
            Ok(Feasibility::Infeasible) => {
                println!("infeasible");
                0
            }
            Err(DiophantineError::ResourceExceeded { budget }) => {
                eprintln!(
                    "error: solver budget of {budget} frontier expansions exhausted; \
                     re-run with a larger --budget"
                );
                EXIT_FAIL
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_FAIL
            }
        }
    }
}

fn examples() -> u8 {
    let mut ok = true;
    let mut row = |name: &str, verification: Verification, expect_failure: bool| {
        let good = verification.is_verified() != expect_failure;
        let shown = match (&verification, expect_failure) {
            (Verification::Verified, false) => "verified".to_string(),
            (Verification::Failed(_), true) => "failed (expected)".to_string(),
            (Verification::Verified, true) => "verified (UNEXPECTED)".to_string(),
            (Verification::Failed(why), false) => format!("FAILED: {why}"),
        };
        println!("{name}: {shown}");
        ok &= good;
    };

    let p2 = power_one_plus_sqrt2(2);
    let p3 = power_one_plus_sqrt2(3);
    println!(
        "(1+sqrt2)^2 = {} + {} sqrt2, (1+sqrt2)^3 = {} + {} sqrt2",
        p2.a, p2.b, p3.a, p3.b
    );
    row(
        "irrational part of (1+sqrt2)^n nonzero for n = 1..=50",
        irrational_parts_nonzero(50),
        false,
    );

    row(
        "flatness identity X*1 + Y*Z = X + YZ",
        verify_exsimple_flatness(),
        false,
    );
    row(
        "substitution separation (Z is outside the subring)",
        verify_exsimple_z_not_in_subring(),
        false,
    );
    row(
        "negative control: perturbed flatness identity",
        flatness_negative_control(),
        true,
    );
    row(
        "negative control: Z claimed as a subring generator",
        substitution_negative_control(),
        true,
    );

    if ok {
        println!("examples: all verified");
        0
    } else {
        println!("examples: FAILURE");
        EXIT_FAIL
    }
}
