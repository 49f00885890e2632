//! Command implementations behind the `cv-entangle` binary.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use cv_entangle::circuits::{
    ghz_analyzer, make_family_state, make_mqc_state, make_partial_three_mode, FamilySpec, MqcSpec,
};
use cv_entangle::criteria::{
    crit_relative_total, crit_variance_sum, ppt_test, tan_product, witnesses_genuine_entanglement,
    CriterionReport,
};
use cv_entangle::nonlocality::maximize_bell;
use cv_entangle::qubit::{partial_transpose_eigs, Outcome, QubitState};
use cv_entangle::GaussianState;

/// Party counts accepted by `bell`.
pub const BELL_PARTIES: std::ops::RangeInclusive<usize> = 2..=8;
/// Rows of the `fig-example` table, evenly spaced over `r ∈ [0, 1]`.
pub const FIG_POINTS: usize = 201;

#[derive(Debug, Parser)]
#[command(
    name = "cv-entangle",
    version,
    about = "Multipartite continuous-variable entanglement toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Gaussian state and write it as JSON.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run every separability test on a JSON state file.
    Criteria {
        /// State file written by `generate`.
        state: PathBuf,
        /// Also estimate the variance-sum value from this many simulated analyzer shots.
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for the simulated shots.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Maximize the Mermin-Klyshko value over the setting strength J.
    Bell {
        /// Party counts, comma separated (2 to 8).
        #[arg(long = "n", value_delimiter = ',', default_value = "2,3,4,5")]
        parties: Vec<usize>,
        /// Squeezing values r, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.5,1,2,3",
            allow_negative_numbers = true
        )]
        grid: Vec<f64>,
        /// Phase of the primed displacements, in radians.
        #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
        phase: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tabulate both full-separability tests for the partial three-mode state.
    FigExample {
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the qubit reference facts and print one line per check.
    QubitSelftest,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// N-splitter family state.
    Family {
        #[arg(long = "n")]
        modes: usize,
        /// Momentum squeezing of the first input.
        #[arg(long, allow_negative_numbers = true)]
        r1: f64,
        /// Position squeezing of the other inputs.
        #[arg(long, allow_negative_numbers = true)]
        r2: f64,
    },
    /// Three-mode state with a two-mode squeezed pair and a vacuum mode.
    Partial3 {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
    },
    /// Telecloning channel for M receivers.
    Mqc {
        #[arg(long = "m")]
        receivers: usize,
        #[arg(long, allow_negative_numbers = true)]
        theta0: f64,
    },
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl OutArg {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { kind, out } => {
            let state = generate(&kind)?;
            out.emit(&format!("{}\n", state.to_json()?))?;
            eprintln!(
                "modes={} physical={} margin={:.3e} pure={}",
                state.n_modes(),
                state.is_physical(),
                state.physicality_margin(),
                state.is_pure()
            );
            Ok(())
        }
        Command::Criteria {
            state,
            samples,
            seed,
            out,
        } => {
            let s = read_state(&state)?;
            let bundle = criteria_bundle(&s, samples, seed)?;
            out.emit(&format!("{}\n", to_json(&bundle)?))
        }
        Command::Bell {
            parties,
            grid,
            phase,
            out,
        } => out.emit(&bell_csv(&parties, &grid, phase)?),
        Command::FigExample { out } => out.emit(&fig_example_csv()?),
        Command::QubitSelftest => {
            let lines = qubit_selftest()?;
            for l in &lines {
                println!("{l}");
            }
            Ok(())
        }
    }
}

pub fn generate(kind: &GenerateKind) -> Result<GaussianState> {
    Ok(match *kind {
        GenerateKind::Family { modes, r1, r2 } => {
            make_family_state(&FamilySpec::new(modes, r1, r2)?)?
        }
        GenerateKind::Partial3 { r } => make_partial_three_mode(r)?,
        GenerateKind::Mqc { receivers, theta0 } => {
            make_mqc_state(&MqcSpec::new(receivers, theta0)?)?
        }
    })
}

pub fn read_state(path: &Path) -> Result<GaussianState> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    GaussianState::from_json(&text)
        .with_context(|| format!("invalid state file {}", path.display()))
}

/// Serializes to pretty JSON, refusing non-finite numbers.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    ensure!(
        !has_null(&v),
        "refusing to write a non-finite number to JSON"
    );
    Ok(serde_json::to_string_pretty(value)?)
}

fn has_null(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Null => true,
        Value::Array(a) => a.iter().any(has_null),
        Value::Object(o) => o.values().any(has_null),
        _ => false,
    }
}

#[derive(Debug, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: usize,
    pub seed: u64,
    pub variance_sum: f64,
}

#[derive(Debug, Serialize)]
pub struct CriteriaBundle {
    pub n_modes: usize,
    pub pure: bool,
    pub permutation_symmetric: bool,
    pub variance_sum: CriterionReport,
    pub relative_total: CriterionReport,
    pub genuine_multipartite_witness: bool,
    pub tan_product: Vec<CriterionReport>,
    pub ppt: Vec<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloEstimate>,
}

pub fn criteria_bundle(
    s: &GaussianState,
    samples: Option<usize>,
    seed: u64,
) -> Result<CriteriaBundle> {
    let n = s.n_modes();
    ensure!(
        n >= 2,
        "criteria need at least two modes, the state has {n}"
    );
    let variance_sum = crit_variance_sum(s)?;
    let relative_total = crit_relative_total(s)?;
    let genuine = witnesses_genuine_entanglement(s, &variance_sum)?
        || witnesses_genuine_entanglement(s, &relative_total)?;
    let mut tan = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            tan.push(tan_product(s, i, j)?);
        }
    }
    let ppt = (0..n)
        .map(|a| ppt_test(s, &[a]))
        .collect::<Result<Vec<_>, _>>()?;
    let all: Vec<usize> = (0..n).collect();
    let monte_carlo = match samples {
        Some(k) => Some(estimate_variance_sum(s, k, seed)?),
        None => None,
    };
    Ok(CriteriaBundle {
        n_modes: n,
        pure: s.is_pure(),
        permutation_symmetric: s.is_permutation_symmetric(&all, 1e-10)?,
        variance_sum,
        relative_total,
        genuine_multipartite_witness: genuine,
        tan_product: tan,
        ppt,
        monte_carlo,
    })
}

fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

fn estimate_variance_sum(
    s: &GaussianState,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    ensure!(samples >= 2, "--samples must be at least 2");
    let n = s.n_modes();
    let records = ghz_analyzer(s)?.sample(samples, seed)?;
    let column = |k: usize| records.iter().map(|r| r.outcomes[k]).collect::<Vec<_>>();
    let rest: f64 = (1..n).map(|k| sample_variance(&column(k))).sum();
    Ok(MonteCarloEstimate {
        samples,
        seed,
        variance_sum: sample_variance(&column(0)) + rest / (n - 1) as f64,
    })
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn bell_csv(parties: &[usize], grid: &[f64], phase: f64) -> Result<String> {
    ensure!(
        !parties.is_empty() && !grid.is_empty(),
        "party list and r grid must be non-empty"
    );
    ensure!(phase.is_finite(), "phase must be finite");
    let mut parties = parties.to_vec();
    parties.sort_unstable();
    parties.dedup();
    if let Some(&n) = parties.iter().find(|n| !BELL_PARTIES.contains(n)) {
        bail!(
            "party count {n} outside {}..={}",
            BELL_PARTIES.start(),
            BELL_PARTIES.end()
        );
    }
    let mut grid = grid.to_vec();
    if let Some(r) = grid.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        bail!("squeezing values must be finite and non-negative, got {r}");
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let points: Vec<(usize, f64)> = parties
        .iter()
        .flat_map(|&n| grid.iter().map(move |&r| (n, r)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(n, r)| maximize_bell(n, r, phase).map(|o| (n, r, o)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("N,r,J_star,B_star,phase\n");
    for (n, r, o) in rows {
        writeln!(
            csv,
            "{n},{},{},{},{}",
            sci(r),
            sci(o.j_star),
            sci(o.b_star),
            sci(phase)
        )?;
    }
    Ok(csv)
}

/// Variance-sum value for the partial three-mode state as printed in the
/// literature; it disagrees with the covariance result for `r > 0`.
pub fn printed_variance_sum(r: f64) -> f64 {
    0.25 * ((2.0 * r).exp() / 3.0 + (-2.0 * r).exp()) + 1.0 / 6.0
}

pub fn fig_example_csv() -> Result<String> {
    let mut csv = String::from(
        "r,crit1_value,crit1_paper_formula,crit2_value,crit1_threshold,crit2_threshold\n",
    );
    for i in 0..FIG_POINTS {
        let r = i as f64 / (FIG_POINTS - 1) as f64;
        let s = make_partial_three_mode(r)?;
        let c1 = crit_variance_sum(&s)?;
        let c2 = crit_relative_total(&s)?;
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            sci(r),
            sci(c1.value),
            sci(printed_variance_sum(r)),
            sci(c2.value),
            sci(c1.threshold),
            sci(c2.threshold)
        )?;
    }
    Ok(csv)
}

/// Runs the qubit checks; errors on the first failure.
pub fn qubit_selftest() -> Result<Vec<String>> {
    const TOL: f64 = 1e-12;
    let mut lines = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| -> Result<()> {
        ensure!(ok, "qubit self-test failed: {name}: {detail}");
        lines.push(format!("ok  {name}: {detail}"));
        Ok(())
    };

    let w_pair = QubitState::w3().trace_out(&[0])?;
    let e = partial_transpose_eigs(&w_pair)?;
    let s5 = 5f64.sqrt();
    let want = [(1.0 - s5) / 6.0, 1.0 / 3.0, 1.0 / 3.0, (1.0 + s5) / 6.0];
    let ok = e.iter().zip(want).all(|(a, b)| (a - b).abs() < TOL);
    check("W pair partial transpose", ok, format!("{e:.6?}"))?;

    let ghz = QubitState::ghz(3)?;
    let e = partial_transpose_eigs(&ghz.trace_out(&[0])?)?;
    check(
        "GHZ pair partial transpose",
        e.iter().all(|&x| x >= -TOL),
        format!("{e:.6?}"),
    )?;

    for (outcome, label) in [(Outcome::Plus, "+"), (Outcome::Minus, "-")] {
        let m = ghz.measure_ghz_conjugate(outcome)?;
        let pair = m.state.trace_out(&[0])?;
        let sign = if label == "+" { 1.0 } else { -1.0 };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = QubitState::pure(2, vec![h.into(), 0.0.into(), 0.0.into(), (sign * h).into()])?;
        let rho = pair.density_matrix();
        let dist = (rho - bell.density_matrix()).camax();
        let ok = dist < TOL && (m.probability - 0.5).abs() < TOL;
        check(
            &format!("conjugate measurement {label}"),
            ok,
            format!("p={:.6} distance={dist:.1e}", m.probability),
        )?;
    }

    let ent = QubitState::ghz(2)?.entanglement_entropy(&[0])?;
    check(
        "Bell pair entropy",
        (ent - 1.0).abs() < TOL,
        format!("{ent:.12} ebit"),
    )?;
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_refuses_non_finite_numbers() {
        #[derive(Serialize)]
        struct Row {
            x: f64,
        }
        assert!(to_json(&Row { x: f64::NAN }).is_err());
        assert!(to_json(&Row { x: f64::INFINITY }).is_err());
        assert!(to_json(&Row { x: 1.5 }).unwrap().contains("1.5"));
    }

    #[test]
    fn bell_rows_are_sorted_and_deduplicated() {
        let a = bell_csv(&[3, 2, 3], &[1.0, 0.0, 1.0], FRAC_PI_2).unwrap();
        let b = bell_csv(&[2, 3], &[0.0, 1.0], FRAC_PI_2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 5);
    }

    #[test]
    fn printed_formula_meets_threshold_at_zero() {
        assert_eq!(printed_variance_sum(0.0), 0.5);
    }
}
