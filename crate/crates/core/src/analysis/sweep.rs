use std::fmt;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::table::{SweepMetadata, SweepTable};
use super::{r_grid, unit_grid, Family, Measure, DEFAULT_GRID_POINTS};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{
    discord_with, entanglement_of_formation, log_negativity, mutual_information, Bipartition, DiscordOptions,
    DiscordResult, Side,
};
use crate::states::{rho_ai, rho_aii, rho_ib, rho_iii, rho_tilde_ib, AlphaBeta, FractionP, RindlerR};

/// A rectangular sweep over `r` and `p` (or `β` for [`Family::IBPair`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub r_grid: Vec<f64>,
    pub parameter_grid: Vec<f64>,
    /// Output columns follow this order.
    pub measures: Vec<Measure>,
    pub measured_side: Side,
    pub discord: DiscordOptions,
}

impl SweepSpec {
    /// Default 65×65 grids, measurement on the second qubit.
    pub fn new(family: Family, measures: Vec<Measure>) -> Self {
        Self {
            family,
            r_grid: r_grid(DEFAULT_GRID_POINTS),
            parameter_grid: unit_grid(DEFAULT_GRID_POINTS),
            measures,
            measured_side: Side::Second,
            discord: DiscordOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn check_grid(grid: &[f64], name: &'static str, domain: &'static str) -> Result<()> {
            if grid.is_empty() {
                return Err(Error::domain(name, f64::NAN, domain));
            }
            if let Some(w) = grid.windows(2).find(|w| w[0].partial_cmp(&w[1]).is_none_or(|o| o.is_gt())) {
                return Err(Error::domain(name, w[1], "an ascending grid"));
            }
            Ok(())
        }
        check_grid(&self.r_grid, "r grid", "[0, pi/4]")?;
        check_grid(&self.parameter_grid, "parameter grid", "[0, 1]")?;
        for &r in &self.r_grid {
            RindlerR::new(r)?;
        }
        for &x in &self.parameter_grid {
            match self.family {
                Family::IBPair => {
                    AlphaBeta::from_beta(x)?;
                }
                _ => {
                    FractionP::new(x)?;
                }
            }
        }
        if self.measures.is_empty() {
            return Err(Error::Unknown {
                kind: "measure",
                name: "(none requested)".into(),
            });
        }
        for (k, m) in self.measures.iter().enumerate() {
            if self.measures[..k].contains(m) {
                return Err(Error::Unknown {
                    kind: "measure (duplicate)",
                    name: m.column().into(),
                });
            }
        }
        Ok(())
    }

    fn columns(&self) -> Vec<String> {
        let mut cols = vec!["r".to_string(), self.family.parameter_name().to_string()];
        for m in &self.measures {
            let name = m.column();
            match self.family {
                Family::IBPair => {
                    cols.push(name.to_string());
                    cols.push(format!("{name}_tilde"));
                    cols.push(format!("{name}_gap"));
                }
                _ => cols.push(name.to_string()),
            }
        }
        cols
    }

    fn metadata(&self, dataset: &str) -> SweepMetadata {
        let range = |g: &[f64]| (g.first().copied().unwrap_or(0.0), g.last().copied().unwrap_or(0.0));
        let (r_min, r_max) = range(&self.r_grid);
        let (parameter_min, parameter_max) = range(&self.parameter_grid);
        SweepMetadata {
            dataset: dataset.to_string(),
            family: self.family.as_str().to_string(),
            r_points: self.r_grid.len(),
            r_min,
            r_max,
            parameter: self.family.parameter_name().to_string(),
            parameter_points: self.parameter_grid.len(),
            parameter_min,
            parameter_max,
            measured_side: side_name(self.measured_side).to_string(),
            discord_method: method_name(&self.discord).to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_unix: Some(now_unix()),
        }
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::First => "first",
        Side::Second => "second",
    }
}

fn method_name(options: &DiscordOptions) -> &'static str {
    if options.force_oracle {
        "oracle"
    } else {
        "auto"
    }
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn measure_values(
    rho: &ComplexMatrix,
    measures: &[Measure],
    bp: &Bipartition,
    options: &DiscordOptions,
) -> Result<Vec<f64>> {
    let mut discord: Option<DiscordResult> = None;
    let mut get_discord = || -> Result<DiscordResult> {
        if let Some(d) = discord {
            return Ok(d);
        }
        let d = discord_with(rho, bp, options)?;
        discord = Some(d);
        Ok(d)
    };
    measures
        .iter()
        .map(|m| match m {
            Measure::Negativity => log_negativity(rho, bp),
            Measure::Eof => entanglement_of_formation(rho),
            Measure::Discord => get_discord().map(|d| d.discord),
            Measure::MutualInfo => mutual_information(rho, bp),
            Measure::ClassicalCorr => get_discord().map(|d| d.classical_correlation),
        })
        .collect()
}

fn sweep_cell(spec: &SweepSpec, r: f64, x: f64) -> Result<Vec<f64>> {
    let rr = RindlerR::new(r)?;
    let bp = Bipartition::qubits(spec.measured_side);
    let mut row = vec![r, x];
    match spec.family {
        Family::IBPair => {
            let ab = AlphaBeta::from_beta(x)?;
            let plain = measure_values(&rho_ib(ab, rr), &spec.measures, &bp, &spec.discord)?;
            let tilde = measure_values(&rho_tilde_ib(ab, rr), &spec.measures, &bp, &spec.discord)?;
            for (a, b) in plain.into_iter().zip(tilde) {
                row.extend([a, b, a - b]);
            }
        }
        family => {
            let p = FractionP::new(x)?;
            let rho = match family {
                Family::AI => rho_ai(p, rr),
                Family::AII => rho_aii(p, rr),
                _ => rho_iii(rr),
            };
            row.extend(measure_values(&rho, &spec.measures, &bp, &spec.discord)?);
        }
    }
    if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
        return Err(Error::NotAState(format!("non-finite measure value {bad}")));
    }
    Ok(row)
}

/// Evaluates every `(r, parameter)` cell, `r` outermost. Cells run in
/// parallel; row order is fixed by the grids.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_named(spec, "sweep")
}

fn run_sweep_named(spec: &SweepSpec, dataset: &str) -> Result<SweepTable> {
    spec.validate()?;
    let np = spec.parameter_grid.len();
    let cells: Vec<Result<Vec<f64>>> = (0..spec.r_grid.len() * np)
        .into_par_iter()
        .map(|k| {
            let (r, x) = (spec.r_grid[k / np], spec.parameter_grid[k % np]);
            sweep_cell(spec, r, x).map_err(|e| {
                e.at(format!(
                    "{} at r = {r}, {} = {x}",
                    spec.family,
                    spec.family.parameter_name()
                ))
            })
        })
        .collect();
    let rows = cells.into_iter().collect::<Result<Vec<_>>>()?;
    SweepTable::new(spec.columns(), rows, Some(spec.metadata(dataset)))
}

/// Both discord directions for the three bipartitions of the accelerated
/// state at fixed `p`, one row per `r`.
pub fn discord_comparison(p: FractionP, r_values: &[f64], options: &DiscordOptions) -> Result<SweepTable> {
    let spec = SweepSpec {
        family: Family::AI,
        r_grid: r_values.to_vec(),
        parameter_grid: vec![p.value()],
        measures: vec![Measure::Discord],
        measured_side: Side::Second,
        discord: *options,
    };
    spec.validate()?;
    let second = Bipartition::qubits(Side::Second);
    let first = Bipartition::qubits(Side::First);
    let cells: Vec<Result<Vec<f64>>> = r_values
        .par_iter()
        .map(|&r| {
            let cell = || -> Result<Vec<f64>> {
                let rr = RindlerR::new(r)?;
                let mut row = vec![r, p.value()];
                for rho in [rho_ai(p, rr), rho_aii(p, rr), rho_iii(rr)] {
                    row.push(discord_with(&rho, &second, options)?.discord);
                    row.push(discord_with(&rho, &first, options)?.discord);
                }
                Ok(row)
            };
            cell().map_err(|e| e.at(format!("discord comparison at r = {r}, p = {}", p.value())))
        })
        .collect();
    let rows = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let columns = [
        "r",
        "p",
        "discord_A_I",
        "discord_I_A",
        "discord_A_II",
        "discord_II_A",
        "discord_I_II",
        "discord_II_I",
    ]
    .map(String::from)
    .to_vec();
    let mut meta = spec.metadata("figure5");
    meta.family = "AI,AII,III".into();
    meta.measured_side = "both".into();
    SweepTable::new(columns, rows, Some(meta))
}

/// The seven figure datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    DiscordAI = 1,
    NegativityAI = 2,
    DiscordAII = 3,
    NegativityAII = 4,
    DiscordComparison = 5,
    EofAI = 6,
    NegativityGap = 7,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::DiscordAI,
        FigureId::NegativityAI,
        FigureId::DiscordAII,
        FigureId::NegativityAII,
        FigureId::DiscordComparison,
        FigureId::EofAI,
        FigureId::NegativityGap,
    ];

    pub fn from_number(n: u32) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| *f as u32 == n)
            .ok_or_else(|| Error::Unknown {
                kind: "figure",
                name: n.to_string(),
            })
    }

    pub fn number(self) -> u32 {
        self as u32
    }

    pub fn description(self) -> &'static str {
        match self {
            FigureId::DiscordAI => "discord D(A:I) over (r, p)",
            FigureId::NegativityAI => "log negativity N(A:I) over (r, p)",
            FigureId::DiscordAII => "discord D(A:II) over (r, p)",
            FigureId::NegativityAII => "log negativity N(A:II) over (r, p)",
            FigureId::DiscordComparison => "discord in both directions for A:I, A:II, I:II versus r at p = 1",
            FigureId::EofAI => "entanglement of formation E_f(A:I) over (r, p)",
            FigureId::NegativityGap => "negativity gap N(I:B) - N~(I:B) over (r, beta)",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.number(), self.description())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureOptions {
    pub r_points: usize,
    /// Points along `p`, or along `β` for the gap figure.
    pub p_points: usize,
    pub discord: DiscordOptions,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            r_points: DEFAULT_GRID_POINTS,
            p_points: DEFAULT_GRID_POINTS,
            discord: DiscordOptions::default(),
        }
    }
}

pub fn figure_table(id: FigureId, options: &FigureOptions) -> Result<SweepTable> {
    let (family, measure) = match id {
        FigureId::DiscordAI => (Family::AI, Measure::Discord),
        FigureId::NegativityAI => (Family::AI, Measure::Negativity),
        FigureId::DiscordAII => (Family::AII, Measure::Discord),
        FigureId::NegativityAII => (Family::AII, Measure::Negativity),
        FigureId::EofAI => (Family::AI, Measure::Eof),
        FigureId::NegativityGap => (Family::IBPair, Measure::Negativity),
        FigureId::DiscordComparison => {
            let p = FractionP::new(1.0)?;
            return discord_comparison(p, &r_grid(options.r_points), &options.discord);
        }
    };
    let spec = SweepSpec {
        family,
        r_grid: r_grid(options.r_points),
        parameter_grid: unit_grid(options.p_points),
        measures: vec![measure],
        measured_side: Side::Second,
        discord: options.discord,
    };
    run_sweep_named(&spec, &format!("figure{}", id.number()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::linspace;

    fn small(family: Family, measures: Vec<Measure>) -> SweepSpec {
        SweepSpec {
            r_grid: r_grid(5),
            parameter_grid: unit_grid(5),
            ..SweepSpec::new(family, measures)
        }
    }

    #[test]
    fn bell_corner_has_unit_negativity() {
        let t = run_sweep(&small(Family::AI, vec![Measure::Negativity])).unwrap();
        assert_eq!(t.columns(), ["r", "p", "negativity"]);
        assert_eq!(t.len(), 25);
        // r = 0 is the outer loop's first block; p = 1 is its last entry.
        assert_eq!(&t.rows()[4][..2], &[0.0, 1.0]);
        assert!((t.rows()[4][2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_discord() {
        let t = run_sweep(&small(Family::AI, vec![Measure::Discord, Measure::MutualInfo])).unwrap();
        for row in t.rows().iter().filter(|row| row[1] == 0.0) {
            assert!(row[2].abs() < 1e-12, "{row:?}");
            assert!(row[3].abs() < 1e-12, "{row:?}");
        }
    }

    #[test]
    fn rob_antirob_ignores_p() {
        let t = run_sweep(&small(Family::III, vec![Measure::Discord, Measure::Negativity])).unwrap();
        for block in t.rows().chunks(5) {
            for row in block {
                assert_eq!(&row[2..], &block[0][2..]);
            }
        }
    }

    #[test]
    fn information_splits_into_classical_and_quantum() {
        let spec = small(
            Family::AII,
            vec![Measure::MutualInfo, Measure::ClassicalCorr, Measure::Discord],
        );
        let t = run_sweep(&spec).unwrap();
        for row in t.rows() {
            assert!((row[2] - row[3] - row[4]).abs() < 1e-12);
        }
    }

    #[test]
    fn ib_pair_columns_and_gap() {
        let mut spec = small(Family::IBPair, vec![Measure::Negativity]);
        spec.parameter_grid = linspace(0.0, 1.0, 3);
        let t = run_sweep(&spec).unwrap();
        assert_eq!(
            t.columns(),
            ["r", "beta", "negativity", "negativity_tilde", "negativity_gap"]
        );
        for row in t.rows() {
            assert!((row[2] - row[3] - row[4]).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = small(Family::AI, vec![Measure::Negativity]);
        spec.r_grid = vec![0.5, 0.1];
        assert!(run_sweep(&spec).is_err());
        spec.r_grid = vec![1.0];
        assert!(run_sweep(&spec).is_err());
        spec.r_grid = vec![];
        assert!(run_sweep(&spec).is_err());
        let mut spec = small(Family::AI, vec![]);
        assert!(run_sweep(&spec).is_err());
        spec.measures = vec![Measure::Eof, Measure::Eof];
        assert!(run_sweep(&spec).is_err());
        spec.measures = vec![Measure::Eof];
        spec.parameter_grid = vec![1.2];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn sweep_is_deterministic() {
        let spec = small(Family::AI, vec![Measure::Discord, Measure::Eof]);
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a.to_csv_string(false).unwrap(), b.to_csv_string(false).unwrap());
    }

    #[test]
    fn comparison_bell_row() {
        let t = discord_comparison(FractionP::new(1.0).unwrap(), &[0.0, 0.3], &DiscordOptions::default()).unwrap();
        assert_eq!(t.columns().len(), 8);
        let row = &t.rows()[0];
        assert!((row[2] - 1.0).abs() < 1e-12 && (row[3] - 1.0).abs() < 1e-12);
        assert!(row[4].abs() < 1e-12 && row[6].abs() < 1e-12);
    }

    #[test]
    fn figure_ids() {
        assert!(FigureId::from_number(0).is_err());
        assert!(FigureId::from_number(8).is_err());
        for (k, f) in FigureId::ALL.iter().enumerate() {
            assert_eq!(FigureId::from_number(k as u32 + 1).unwrap(), *f);
        }
    }
}
