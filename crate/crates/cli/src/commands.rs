use std::f64::consts::PI;

use rayon::prelude::*;

use udwsim::analog::{coupling_mu, sound_speed};
use udwsim::detection::{
    mu_sq_sql, sql_noise_floor, squeezed_noise_floor, Branch, NoiseBudget, PsdModel,
};
use udwsim::response::{
    response_numeric_extrapolated, response_offdiag, response_offdiag_numeric_contour, DetectorGeometry,
    EpsilonLadder, ResponseModel,
};
use udwsim::sim::{monte_carlo_witness, synthesize_photocurrent, welch_psd, RecordSpec, SpectrumComparison};

use crate::config::{MuSetting, RunConfig, SimBranch};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

/// Largest tolerated fraction of bins beyond |z| = 3 in `simulate`.
pub const MAX_OUTLIER_FRACTION: f64 = 0.01;
const GUARD_BINS: usize = 4;
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// A table plus the reason the run should exit with status 3, if any.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, failure: None }
    }
}

fn header(table: &mut Table, cfg: &RunConfig, command: &str) -> CliResult<()> {
    table.meta("udwsim_version", env!("CARGO_PKG_VERSION"));
    table.meta("command", command);
    table.meta("config_sha256", cfg.hash()?);
    table.meta("seed", cfg.simulate.seed);
    table.meta("mu_sq", cfg.detection.mu_sq.mu_sq());
    table.meta("mu_sq_mode", cfg.detection.mu_sq.label());
    if cfg.detection.mu_sq.squeezed() {
        table.meta("squeezed_floor", "applied for nu < 0 only; nu > 0 noise is unsqueezed");
    }
    table.meta("single_trajectory", cfg.detection.single_trajectory);
    Ok(())
}

struct Setup {
    geom: DetectorGeometry,
    model: PsdModel,
}

fn setup(cfg: &RunConfig) -> CliResult<Setup> {
    let geom = cfg.geometry()?;
    let d = &cfg.detection;
    let mut noise = NoiseBudget::new(d.mu_sq.mu_sq())?;
    if d.mu_sq.squeezed() {
        noise = noise.with_squeezed_floor(squeezed_noise_floor());
    }
    let response = ResponseModel::from_geometry(&geom).with_superposition(!d.single_trajectory);
    let model = PsdModel::new(Branch::Sum, response, noise, d.delta_lo)?;
    Ok(Setup { geom, model })
}

/// One row of the spectrum table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord {
    pub nu: f64,
    pub x: f64,
    pub f_total: f64,
    pub f_diff: f64,
    pub noise: f64,
    pub s_sum: f64,
    pub s_diff: f64,
    pub witness: f64,
    pub snr: Option<f64>,
}

fn spectrum_records(s: &Setup, grid: &[f64]) -> Vec<SpectrumRecord> {
    let sum = s.model;
    let diff = s.model.with_branch(Branch::Difference);
    grid.iter()
        .map(|&nu| {
            let f_total = sum.signal(nu);
            let noise = sum.noise.total(nu);
            let s_sum = sum.psd(nu);
            let s_diff = diff.psd(nu);
            SpectrumRecord {
                nu,
                x: nu * s.geom.delta_over_cs(),
                f_total,
                f_diff: diff.signal(nu),
                noise,
                s_sum,
                s_diff,
                witness: s_sum - s_diff,
                snr: (nu < 0.0).then(|| f_total / noise),
            }
        })
        .collect()
}

const SPECTRUM_COLUMNS: [&str; 10] = [
    "nu",
    "analysis_frequency",
    "x",
    "F_total",
    "F_diff",
    "N",
    "S_sum",
    "S_diff",
    "witness",
    "SNR",
];

fn spectrum_table(cfg: &RunConfig, command: &str, s: &Setup, records: &[SpectrumRecord]) -> CliResult<Table> {
    let mut t = Table::new(&SPECTRUM_COLUMNS);
    header(&mut t, cfg, command)?;
    t.meta("delta_over_cs", s.geom.delta_over_cs());
    t.meta("delta_lo", cfg.detection.delta_lo);
    for r in records {
        t.push(vec![
            r.nu.into(),
            (s.model.heterodyne_shift - r.nu).into(),
            r.x.into(),
            r.f_total.into(),
            r.f_diff.into(),
            r.noise.into(),
            r.s_sum.into(),
            r.s_diff.into(),
            r.witness.into(),
            r.snr.into(),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSummary {
    pub snr_min: Option<(f64, f64)>,
    pub crossing_10: Option<f64>,
    pub witness_peak: f64,
    pub noise_negative: f64,
}

fn summarize(s: &Setup, records: &[SpectrumRecord]) -> BandSummary {
    let below: Vec<(f64, f64)> = records.iter().filter_map(|r| r.snr.map(|v| (r.nu, v))).collect();
    let snr_min = below.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1));
    let crossing_10 = below.windows(2).find_map(|w| {
        let (a, b) = (w[0].1 - 10.0, w[1].1 - 10.0);
        if a == 0.0 {
            Some(w[0].0)
        } else if a * b < 0.0 {
            Some(w[0].0 + (w[1].0 - w[0].0) * a / (a - b))
        } else {
            None
        }
    });
    BandSummary {
        snr_min,
        crossing_10,
        witness_peak: records.iter().map(|r| r.witness.abs()).fold(0.0, f64::max),
        noise_negative: s.model.noise.total(-1.0),
    }
}

pub fn psd(cfg: &RunConfig) -> CliResult<Outcome> {
    let s = setup(cfg)?;
    let records = spectrum_records(&s, &cfg.frequency_grid());
    Ok(Outcome::ok(spectrum_table(cfg, "psd", &s, &records)?))
}

pub fn snr(cfg: &RunConfig) -> CliResult<Outcome> {
    if cfg.detection.nu_min >= 0.0 {
        return Err(CliError::Config(format!(
            "snr needs a band reaching nu < 0; got [{}, {})",
            cfg.detection.nu_min, cfg.detection.nu_max
        )));
    }
    let s = setup(cfg)?;
    let records = spectrum_records(&s, &cfg.frequency_grid());
    let summary = summarize(&s, &records);
    let mut t = spectrum_table(cfg, "snr", &s, &records)?;
    t.meta("noise_floor_negative", summary.noise_negative);
    match summary.snr_min {
        Some((nu, v)) => {
            t.meta("snr_band_min", v);
            t.meta("snr_band_min_nu", nu);
        }
        None => return Err(CliError::Config("frequency grid has no point with nu < 0".into())),
    }
    t.meta(
        "snr_crosses_10_at",
        summary.crossing_10.map_or("none".to_string(), |v| v.to_string()),
    );
    Ok(Outcome::ok(t))
}

pub fn witness(cfg: &RunConfig) -> CliResult<Outcome> {
    let s = setup(cfg)?;
    let records = spectrum_records(&s, &cfg.frequency_grid());
    let summary = summarize(&s, &records);
    let mut t = spectrum_table(cfg, "witness", &s, &records)?;
    t.meta("witness_peak", summary.witness_peak);
    Ok(Outcome::ok(t))
}

pub fn response(cfg: &RunConfig, tolerance: f64) -> CliResult<Outcome> {
    let s = setup(cfg)?;
    let d = s.geom.delta_over_cs();
    let grid = cfg.frequency_grid();
    let cutoff = 400.0 * d.max(1.0);
    let rows: Vec<CliResult<[f64; 8]>> = grid
        .par_iter()
        .map(|&nu| {
            let closed = response_offdiag(nu, d)?;
            let nodes = 128 + 2 * (nu * d).abs().ceil() as usize;
            let contour = response_offdiag_numeric_contour(nu, d, nodes)?;
            let fourier = response_numeric_extrapolated(nu, d, EpsilonLadder::default(), cutoff)?;
            let worst = (closed - contour).abs().max((closed - fourier).abs()).max((contour - fourier).abs());
            let r = &s.model.response;
            Ok([nu, nu * d, r.total(nu), r.diff(nu), closed, contour, fourier, worst])
        })
        .collect();

    let mut t = Table::new(&[
        "nu",
        "x",
        "F_total",
        "F_diff",
        "F_od",
        "F_od_contour",
        "F_od_fourier",
        "oracle_max_diff",
    ]);
    header(&mut t, cfg, "response")?;
    t.meta("delta_over_cs", d);
    t.meta("tolerance", tolerance);
    let mut worst: f64 = 0.0;
    let mut worst_nu = f64::NAN;
    for row in rows {
        let row = row?;
        if row[7] > worst {
            worst = row[7];
            worst_nu = row[0];
        }
        t.push(row.iter().map(|&v| Cell::from(v)).collect());
    }
    t.meta("oracle_max_diff", worst);
    let failure = (worst > tolerance)
        .then(|| format!("oracle disagreement {worst:e} at nu = {worst_nu} exceeds tolerance {tolerance:e}"));
    Ok(Outcome { table: t, failure })
}

pub fn simulate(cfg: &RunConfig) -> CliResult<Outcome> {
    let s = setup(cfg)?;
    let sim = &cfg.simulate;
    let det = &cfg.detection;
    let nyquist = PI * sim.sample_rate;
    if det.nu_min < -nyquist || det.nu_max > nyquist {
        return Err(CliError::Config(format!(
            "band [{}, {}) exceeds the record's angular Nyquist range ±{nyquist}",
            det.nu_min, det.nu_max
        )));
    }
    let segment_len = sim.segment_len()?;
    let record = RecordSpec::new(sim.n_samples, sim.sample_rate, sim.seed)?;
    let sum_model = s.model;
    let diff_model = s.model.with_branch(Branch::Difference);

    let mut series: Vec<(&str, SpectrumComparison)> = Vec::new();
    let n_segments = match sim.branch {
        SimBranch::Both => {
            let w = monte_carlo_witness(&sum_model, record, segment_len)?;
            series.push(("sum", SpectrumComparison::from_estimate(&w.sum, |nu| sum_model.psd(nu))));
            series.push(("diff", SpectrumComparison::from_estimate(&w.difference, |nu| diff_model.psd(nu))));
            series.push(("witness", w.comparison));
            w.sum.n_segments
        }
        branch => {
            let (name, model) = match branch {
                SimBranch::Sum => ("sum", sum_model),
                _ => ("diff", diff_model),
            };
            let rec = synthesize_photocurrent(&model, sim.n_samples, sim.sample_rate, sim.seed)?;
            let est = welch_psd(&rec, segment_len)?;
            series.push((name, SpectrumComparison::from_estimate(&est, |nu| model.psd(nu))));
            est.n_segments
        }
    };

    let reference = &series[0].1;
    let band = reference.band(det.nu_min, det.nu_max, 0);
    let stats = reference.band(det.nu_min, det.nu_max, GUARD_BINS);

    let mut columns = vec!["nu".to_string(), "analysis_frequency".to_string()];
    for (name, _) in &series {
        columns.push(format!("{name}_estimate"));
        columns.push(format!("{name}_analytic"));
        columns.push(format!("{name}_z"));
    }
    columns.push("in_stats".to_string());
    let mut t = Table::new(&columns.iter().map(String::as_str).collect::<Vec<_>>());
    header(&mut t, cfg, "simulate")?;
    t.meta("n_samples", sim.n_samples);
    t.meta("sample_rate", sim.sample_rate);
    t.meta("segment_len", segment_len);
    t.meta("n_segments", n_segments);
    t.meta("guard_bins", GUARD_BINS);

    let mut problems = Vec::new();
    for (name, cmp) in &series {
        let frac = cmp.fraction_beyond(&stats, 3.0);
        t.meta(&format!("{name}_fraction_beyond_3sigma"), frac);
        if *name != "witness" {
            let below: Vec<usize> = stats.iter().copied().filter(|&k| cmp.nu[k] < 0.0).collect();
            if !below.is_empty() {
                t.meta(&format!("{name}_rms_rel_error_negative_band"), cmp.rms_relative_error(&below));
            }
        }
        if frac >= MAX_OUTLIER_FRACTION {
            let offenders: Vec<String> = stats
                .iter()
                .filter(|&&k| cmp.z[k].abs() > 3.0)
                .take(10)
                .map(|&k| format!("nu={:.4} z={:.2}", cmp.nu[k], cmp.z[k]))
                .collect();
            problems.push(format!(
                "{name}: {:.2}% of {} bins beyond |z| = 3 (first: {})",
                frac * 100.0,
                stats.len(),
                offenders.join(", ")
            ));
        }
    }

    for &k in &band {
        let nu = reference.nu[k];
        let mut row = vec![Cell::from(nu), Cell::from(det.delta_lo - nu)];
        for (_, cmp) in &series {
            row.extend([cmp.estimate[k].into(), cmp.analytic[k].into(), cmp.z[k].into()]);
        }
        row.push(Cell::from(if stats.binary_search(&k).is_ok() { 1.0 } else { 0.0 }));
        t.push(row);
    }
    let failure = (!problems.is_empty()).then(|| problems.join("; "));
    Ok(Outcome { table: t, failure })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    Delta(Vec<f64>),
    MuSq(Vec<f64>),
    Band(Vec<(f64, f64)>),
}

impl SweepAxis {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let (var, values) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("sweep spec '{spec}' is not var=v1,v2,...")))?;
        let items: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
        if items.is_empty() {
            return Err(CliError::Config(format!("sweep over '{var}' has no values")));
        }
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| CliError::Config(format!("sweep value '{v}' is not a number")))
        };
        match var.trim() {
            "delta" => Ok(Self::Delta(items.into_iter().map(num).collect::<CliResult<_>>()?)),
            "mu_sq" => Ok(Self::MuSq(items.into_iter().map(num).collect::<CliResult<_>>()?)),
            "band" => Ok(Self::Band(
                items
                    .into_iter()
                    .map(|v| {
                        let (lo, hi) = v
                            .split_once(':')
                            .ok_or_else(|| CliError::Config(format!("band value '{v}' is not lo:hi")))?;
                        Ok((num(lo)?, num(hi)?))
                    })
                    .collect::<CliResult<_>>()?,
            )),
            other => Err(CliError::Config(format!(
                "unknown sweep variable '{other}' (expected delta, mu_sq or band)"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Delta(_) => "delta",
            Self::MuSq(_) => "mu_sq",
            Self::Band(_) => "band",
        }
    }

    fn len(&self) -> usize {
        match self {
            Self::Delta(v) | Self::MuSq(v) => v.len(),
            Self::Band(v) => v.len(),
        }
    }

    fn apply(&self, i: usize, cfg: &mut RunConfig) {
        match self {
            Self::Delta(v) => {
                cfg.geometry.delta = Some(v[i]);
                cfg.geometry.x1 = None;
                cfg.geometry.x2 = None;
            }
            Self::MuSq(v) => cfg.detection.mu_sq = MuSetting::Value(v[i]),
            Self::Band(v) => {
                cfg.detection.nu_min = v[i].0;
                cfg.detection.nu_max = v[i].1;
            }
        }
    }
}

/// Cross-product sweep; the last axis varies fastest.
pub fn sweep(cfg: &RunConfig, axes: &[SweepAxis]) -> CliResult<Outcome> {
    if axes.is_empty() {
        return Err(CliError::Config("sweep needs at least one --sweep var=values".into()));
    }
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name() == a.name()) {
            return Err(CliError::Config(format!("sweep variable '{}' given twice", a.name())));
        }
    }
    let total: usize = axes.iter().map(SweepAxis::len).product();
    let points: Vec<RunConfig> = (0..total)
        .map(|mut flat| {
            let mut point = cfg.clone();
            let mut idx = vec![0; axes.len()];
            for (slot, axis) in idx.iter_mut().zip(axes).rev() {
                *slot = flat % axis.len();
                flat /= axis.len();
            }
            for (axis, &i) in axes.iter().zip(&idx) {
                axis.apply(i, &mut point);
            }
            point
        })
        .collect();

    let rows: Vec<CliResult<Vec<Cell>>> = points
        .par_iter()
        .map(|point| {
            point.validate()?;
            let s = setup(point)?;
            let records = spectrum_records(&s, &point.frequency_grid());
            let sum = summarize(&s, &records);
            Ok(vec![
                s.geom.delta().into(),
                s.geom.delta_over_cs().into(),
                point.detection.mu_sq.mu_sq().into(),
                point.detection.nu_min.into(),
                point.detection.nu_max.into(),
                sum.noise_negative.into(),
                sum.snr_min.map(|p| p.1).into(),
                sum.snr_min.map(|p| p.0).into(),
                sum.crossing_10.into(),
                sum.witness_peak.into(),
            ])
        })
        .collect();

    let mut t = Table::new(&[
        "delta",
        "delta_over_cs",
        "mu_sq",
        "nu_min",
        "nu_max",
        "N_negative",
        "snr_min",
        "nu_at_snr_min",
        "snr_crosses_10_at",
        "witness_peak",
    ]);
    header(&mut t, cfg, "sweep")?;
    t.meta(
        "sweep",
        axes.iter().map(|a| format!("{}[{}]", a.name(), a.len())).collect::<Vec<_>>().join(" x "),
    );
    for row in rows {
        t.push(row?);
    }
    Ok(Outcome::ok(t))
}

pub fn params(cfg: &RunConfig) -> CliResult<Outcome> {
    let mut t = Table::new(&["name", "value", "unit"]);
    header(&mut t, cfg, "params")?;
    let mut put = |name: &str, value: Option<f64>, unit: &str| {
        t.push(vec![name.into(), value.into(), unit.into()]);
    };
    if let Some(p) = cfg.physical_params()? {
        put("mass", Some(p.mass), "kg");
        put("density", Some(p.density), "m^-2");
        put("omega0", Some(p.omega0), "rad/s");
        put("beam_radius", Some(p.beam_radius), "m");
        put("beam_area", Some(p.beam_area()), "m^2");
        put("g2d", p.g2d, "J m^2");
        put("sound_speed_from_g2d", p.g2d.map(|_| sound_speed(&p)).transpose()?, "m/s");
        put("alpha_r", p.alpha_r, "natural units");
        put("alpha", p.alpha, "");
        let mu = match (p.alpha_r, p.alpha) {
            (Some(_), Some(_)) => Some(coupling_mu(&p)?),
            _ => None,
        };
        put("mu", mu, "");
        put("mu_sq_from_laser", mu.map(|m| m * m), "");
    }
    match cfg.geometry() {
        Ok(g) => {
            put("delta", Some(g.delta()), "");
            put("c_s", Some(g.c_s()), "");
            put("delta_over_cs", Some(g.delta_over_cs()), "");
        }
        Err(CliError::Config(_)) => put("delta_over_cs", None, ""),
        Err(e) => return Err(e),
    }
    put("mu_sq", Some(cfg.detection.mu_sq.mu_sq()), "");
    put("mu_sq_sql", Some(mu_sq_sql()), "");
    put("noise_floor_sql", Some(sql_noise_floor()), "");
    put("noise_floor_squeezed", Some(squeezed_noise_floor()), "");
    Ok(Outcome::ok(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_toml(text).unwrap()
    }

    #[test]
    fn response_row_at_minus_one() {
        let c = cfg("[detection]\nnu_min = -2.0\nnu_max = 2.0\ngrid = 8\n");
        let out = response(&c, DEFAULT_TOLERANCE).unwrap();
        assert!(out.failure.is_none());
        let row = out.table.rows.iter().find(|r| r[0] == Cell::Num(-1.0)).unwrap();
        assert!((row[2].as_f64().unwrap() - 1.7651976865579665).abs() < 1e-12);
        for r in out.table.rows.iter().filter(|r| r[0].as_f64().unwrap() > 0.0) {
            assert_eq!(r[2], Cell::Num(0.0));
        }
    }

    #[test]
    fn squeezed_noise_column() {
        let c = cfg("[detection]\nmu_sq = \"squeezed\"\n");
        let out = psd(&c).unwrap();
        let n = out.table.column("N").unwrap();
        for r in &out.table.rows {
            if r[0].as_f64().unwrap() < 0.0 {
                assert!((r[n].as_f64().unwrap() - 0.19371294).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn snr_needs_negative_band() {
        let c = cfg("[detection]\nnu_min = 0.5\nnu_max = 2.0\n");
        assert!(matches!(snr(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn sweep_axis_parsing() {
        assert_eq!(SweepAxis::parse("delta=0.5,1").unwrap(), SweepAxis::Delta(vec![0.5, 1.0]));
        assert_eq!(SweepAxis::parse("band=-1:0,-2:0").unwrap(), SweepAxis::Band(vec![(-1.0, 0.0), (-2.0, 0.0)]));
        assert!(SweepAxis::parse("delta=").is_err());
        assert!(SweepAxis::parse("speed=1").is_err());
    }

    #[test]
    fn sweep_order_is_row_major() {
        let c = cfg("");
        let axes = [
            SweepAxis::parse("delta=1,2").unwrap(),
            SweepAxis::parse("mu_sq=1,2,3").unwrap(),
        ];
        let out = sweep(&c, &axes).unwrap();
        let got: Vec<(f64, f64)> = out
            .table
            .rows
            .iter()
            .map(|r| (r[0].as_f64().unwrap(), r[2].as_f64().unwrap()))
            .collect();
        assert_eq!(got, vec![(1.0, 1.0), (1.0, 2.0), (1.0, 3.0), (2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]);
    }
}
