//! Displaced-parity correlations and Mermin–Klyshko Bell combinations.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuits::{make_family_state, FamilySpec};
use crate::error::{invalid, Result};
use crate::gaussian::{GaussianState, PhaseSpacePoint, WignerFunction};

/// Largest party count accepted by [`BellCombination::mermin_klyshko`].
pub const MAX_PARTIES: usize = 24;

/// Points of the coarse logarithmic `J` grid in [`maximize_bell`].
pub const GRID_POINTS: usize = 200;
pub const GRID_MIN: f64 = 1e-8;
pub const GRID_MAX: f64 = 10.0;
/// Relative bracket width at which golden-section refinement stops.
pub const REFINE_REL_TOL: f64 = 1e-8;

/// Displaced parity `Π(α) = (π/2)^N W(α)` with `αₖ = xₖ + i pₖ`.
pub fn displaced_parity(state: &GaussianState, alpha: &[Complex64]) -> Result<f64> {
    parity_with(&state.wigner_function()?, alpha)
}

fn parity_with(w: &WignerFunction, alpha: &[Complex64]) -> Result<f64> {
    if alpha.len() != w.n_modes() {
        return invalid(format!(
            "displacement has {} entries for a {}-mode state",
            alpha.len(),
            w.n_modes()
        ));
    }
    let value = w.eval(&PhaseSpacePoint::from_amplitudes(alpha))?;
    Ok(FRAC_PI_2.powi(alpha.len() as i32) * value)
}

/// Which of a party's two measurement settings a term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Unprimed,
    Primed,
}

/// One signed correlation `c · C(a₁^{(′)}, …, a_N^{(′)})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellTerm {
    pub coefficient: f64,
    pub settings: Vec<Setting>,
}

impl BellTerm {
    fn from_mask(n: usize, mask: u32, coefficient: f64) -> Self {
        let settings = (0..n)
            .map(|k| {
                if mask >> k & 1 == 1 {
                    Setting::Primed
                } else {
                    Setting::Unprimed
                }
            })
            .collect();
        Self {
            coefficient,
            settings,
        }
    }
}

/// Linear combination of `N`-party correlation functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellCombination {
    n_parties: usize,
    terms: Vec<BellTerm>,
}

impl BellCombination {
    /// Mermin–Klyshko combination
    /// `B_N = ½[a_N(B_{N−1} + B′_{N−1}) + a_N′(B_{N−1} − B′_{N−1})]`
    /// starting from the CHSH form, where `B′` swaps every primed and unprimed
    /// setting. Local realistic models obey `|B_N| ≤ 2`.
    pub fn mermin_klyshko(n: usize) -> Result<Self> {
        if !(2..=MAX_PARTIES).contains(&n) {
            return invalid(format!("party count must be in 2..={MAX_PARTIES}, got {n}"));
        }
        // bit k of a key set means party k uses its primed setting
        let mut b: BTreeMap<u32, f64> =
            BTreeMap::from([(0b00, 1.0), (0b01, 1.0), (0b10, 1.0), (0b11, -1.0)]);
        for m in 3..=n {
            let full = (1u32 << (m - 1)) - 1;
            let last = 1u32 << (m - 1);
            let mut next = BTreeMap::new();
            for (&mask, &c) in &b {
                *next.entry(mask).or_insert(0.0) += 0.5 * c;
                *next.entry(mask | last).or_insert(0.0) += 0.5 * c;
                let swapped = !mask & full;
                *next.entry(swapped).or_insert(0.0) += 0.5 * c;
                *next.entry(swapped | last).or_insert(0.0) -= 0.5 * c;
            }
            next.retain(|_, c| *c != 0.0);
            b = next;
        }
        let terms = b
            .into_iter()
            .map(|(mask, c)| BellTerm::from_mask(n, mask, c))
            .collect();
        Ok(Self {
            n_parties: n,
            terms,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn terms(&self) -> &[BellTerm] {
        &self.terms
    }

    /// Value for a deterministic local model assigning `±1` outcomes to every
    /// setting: `unprimed[k]` and `primed[k]` are party `k`'s outcomes.
    pub fn evaluate_deterministic(&self, unprimed: &[i8], primed: &[i8]) -> Result<f64> {
        let n = self.n_parties;
        if unprimed.len() != n || primed.len() != n {
            return invalid("one outcome per party and setting is required");
        }
        if unprimed.iter().chain(primed).any(|&v| v != 1 && v != -1) {
            return invalid("deterministic outcomes must be +1 or -1");
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                let sign: i32 = t
                    .settings
                    .iter()
                    .enumerate()
                    .map(|(k, s)| match s {
                        Setting::Unprimed => i32::from(unprimed[k]),
                        Setting::Primed => i32::from(primed[k]),
                    })
                    .product();
                t.coefficient * f64::from(sign)
            })
            .sum())
    }

    /// Largest `|B_N|` over all `4^N` deterministic local assignments.
    pub fn local_bound(&self) -> Result<f64> {
        let n = self.n_parties;
        if n > 10 {
            return invalid(format!(
                "exhaustive enumeration is limited to 10 parties, got {n}"
            ));
        }
        let pm = |bits: u32, k: usize| if bits >> k & 1 == 1 { -1i8 } else { 1 };
        let mut best = 0.0f64;
        for a in 0..1u32 << n {
            let unprimed: Vec<i8> = (0..n).map(|k| pm(a, k)).collect();
            for b in 0..1u32 << n {
                let primed: Vec<i8> = (0..n).map(|k| pm(b, k)).collect();
                best = best.max(self.evaluate_deterministic(&unprimed, &primed)?.abs());
            }
        }
        Ok(best)
    }
}

/// Per-party displacements `(αₖ, αₖ′)` realizing the two settings.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementSettings {
    unprimed: Vec<Complex64>,
    primed: Vec<Complex64>,
}

impl DisplacementSettings {
    pub fn new(unprimed: Vec<Complex64>, primed: Vec<Complex64>) -> Result<Self> {
        if unprimed.len() != primed.len() || unprimed.is_empty() {
            return invalid("settings need one unprimed and one primed displacement per party");
        }
        if unprimed
            .iter()
            .chain(&primed)
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return invalid("displacements must be finite");
        }
        Ok(Self { unprimed, primed })
    }

    /// Unprimed settings at the origin, primed settings `e^{iφ}√J` for every party.
    pub fn equal(n: usize, j: f64, phase: f64) -> Result<Self> {
        if !(j.is_finite() && j >= 0.0) {
            return invalid(format!("J must be finite and non-negative, got {j}"));
        }
        if !phase.is_finite() {
            return invalid("phase must be finite");
        }
        let a = Complex64::from_polar(j.sqrt(), phase);
        Self::new(vec![Complex64::new(0.0, 0.0); n], vec![a; n])
    }

    pub fn n_parties(&self) -> usize {
        self.unprimed.len()
    }

    pub fn unprimed(&self) -> &[Complex64] {
        &self.unprimed
    }

    pub fn primed(&self) -> &[Complex64] {
        &self.primed
    }

    fn select(&self, settings: &[Setting]) -> Vec<Complex64> {
        settings
            .iter()
            .enumerate()
            .map(|(k, s)| match s {
                Setting::Unprimed => self.unprimed[k],
                Setting::Primed => self.primed[k],
            })
            .collect()
    }
}

/// `Σ c · Π(α_selected)` over the terms of `combo`.
pub fn bell_value(
    state: &GaussianState,
    combo: &BellCombination,
    settings: &DisplacementSettings,
) -> Result<f64> {
    bell_value_with(&state.wigner_function()?, combo, settings)
}

fn bell_value_with(
    w: &WignerFunction,
    combo: &BellCombination,
    settings: &DisplacementSettings,
) -> Result<f64> {
    let n = combo.n_parties();
    if w.n_modes() != n || settings.n_parties() != n {
        return invalid(format!(
            "dimension mismatch: state {} modes, combination {n} parties, settings {} parties",
            w.n_modes(),
            settings.n_parties()
        ));
    }
    combo.terms().iter().try_fold(0.0, |acc, t| {
        Ok(acc + t.coefficient * parity_with(w, &settings.select(&t.settings))?)
    })
}

/// Maximizer of the Bell value over the setting strength `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellOptimum {
    pub j_star: f64,
    pub b_star: f64,
}

/// Maximizes `B_N` for the symmetric family state with squeezing `r` over
/// equal settings `αₖ′ = e^{iφ}√J`, `J ≥ 0`.
///
/// Scans `J = 0` and a logarithmic grid on `[1e−8, 10]`, then refines the best
/// grid bracket by golden-section search. The result is deterministic.
pub fn maximize_bell(n: usize, r: f64, phase: f64) -> Result<BellOptimum> {
    if !(r.is_finite() && r >= 0.0) {
        return invalid(format!("r must be finite and non-negative, got {r}"));
    }
    let combo = BellCombination::mermin_klyshko(n)?;
    let w = make_family_state(&FamilySpec::symmetric(n, r)?)?.wigner_function()?;
    let f = |j: f64| -> Result<f64> {
        bell_value_with(&w, &combo, &DisplacementSettings::equal(n, j, phase)?)
    };

    let ratio = (GRID_MAX / GRID_MIN).ln() / (GRID_POINTS - 1) as f64;
    let mut grid = vec![0.0];
    grid.extend((0..GRID_POINTS).map(|i| GRID_MIN * (ratio * i as f64).exp()));
    let values = grid.iter().map(|&j| f(j)).collect::<Result<Vec<_>>>()?;
    let (best, _) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );

    let mut opt = BellOptimum {
        j_star: grid[best],
        b_star: values[best],
    };
    if best == 0 {
        return Ok(opt);
    }
    let lo = grid[best - 1];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (j, b) = golden_max(&f, lo, hi)?;
    if b > opt.b_star {
        opt = BellOptimum {
            j_star: j,
            b_star: b,
        };
    }
    Ok(opt)
}

fn golden_max(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if b - a <= REFINE_REL_TOL * 0.5 * (a + b) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}
