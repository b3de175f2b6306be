use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use super::manifest::{run_directory, write_manifest, GridParams, RunManifest, MANIFEST_FILE};
use super::tables::{write_grid_function, write_histogram_csv, write_series_csv};
use super::write_canonical_json;
use crate::error::{Error, Result};
use crate::montecarlo::{
    compare_series, estimate_leaf_histogram, estimate_v_curve, Acceptance, ComparisonReport, EstimateSeries, Histogram,
    McConfig,
};
use crate::numerics::{iterate_vn, picard_v0, picard_v0_settled, GridFunction, NumericsConfig, UniformGrid};

/// The three standard parameter sets: subcritical, critical and
/// supercritical `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigurePreset {
    Fig1,
    Fig2,
    Fig3,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 3] = [FigurePreset::Fig1, FigurePreset::Fig2, FigurePreset::Fig3];

    pub fn alpha(self) -> f64 {
        match self {
            FigurePreset::Fig1 => 0.66,
            FigurePreset::Fig2 => 1.5,
            FigurePreset::Fig3 => 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig1 => "fig1",
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3 => "fig3",
        }
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigurePreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::param("preset", format!("`{s}` is not one of fig1, fig2, fig3")))
    }
}

/// Everything except `α` that goes into a figure bundle. The defaults:
/// histogram at `t = 2` with depth 10, curves on `[0, 8]`
/// with `h = 0.01`, `v_{10}` started from `U_5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureSettings {
    pub hist_t: f64,
    pub t_max: f64,
    pub step: f64,
    /// Histogram depth and v-iteration count.
    pub depth: u32,
    pub picard_k: u32,
    /// Spacing of the Monte Carlo v-curve points.
    pub mc_step: f64,
    pub numerics: NumericsConfig,
}

impl Default for FigureSettings {
    fn default() -> Self {
        FigureSettings {
            hist_t: 2.0,
            t_max: 8.0,
            step: 0.01,
            depth: 10,
            picard_k: 5,
            mc_step: 0.5,
            numerics: NumericsConfig::default(),
        }
    }
}

/// Evenly spaced points `0, dt, 2dt, ...` up to `t_max` inclusive.
pub fn time_points(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("t-step", format!("{dt} is not a positive finite number")));
    }
    let n = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * dt).collect())
}

#[derive(Debug, Clone)]
pub struct FigureBundle {
    pub alpha: f64,
    pub histogram: Histogram,
    /// Monte Carlo `v_n` at the spaced points.
    pub v_curve: EstimateSeries,
    /// Deterministic `v_n` from the same `v_0`.
    pub v_reference: GridFunction,
    /// `U_k` on the output grid.
    pub u_k: GridFunction,
    pub comparison: ComparisonReport,
}

pub fn compute_figure_bundle(alpha: f64, settings: &FigureSettings, mc: &McConfig) -> Result<FigureBundle> {
    let grid = UniformGrid::with_cap(settings.t_max, settings.step, settings.numerics.max_nodes)?;
    let cfg = &settings.numerics;
    let hist_cfg = mc.with_depth(settings.depth);
    let histogram = estimate_leaf_histogram(alpha, settings.hist_t, &hist_cfg)?;
    let v0 = picard_v0_settled(alpha, &grid, settings.picard_k, cfg)?;
    let v_reference = iterate_vn(alpha, &grid, settings.depth, &v0, cfg)?;
    let t_points = time_points(grid.t_max(), settings.mc_step)?;
    let v_curve = estimate_v_curve(alpha, &t_points, settings.depth, &v0, mc)?;
    let comparison = compare_series(&v_curve, &v_reference, Acceptance::default());
    Ok(FigureBundle {
        alpha,
        histogram,
        v_curve,
        v_reference,
        u_k: picard_v0(alpha, &grid, settings.picard_k, cfg)?,
        comparison,
    })
}

pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const VCURVE_FILE: &str = "vcurve.csv";
pub const VREF_FILE: &str = "vcurve_reference.csv";
pub const UK_FILE: &str = "u_k.csv";
pub const COMPARISON_FILE: &str = "comparison.json";

/// Write the bundle's data files into `dir` and record them in `manifest`.
pub fn write_figure_bundle(bundle: &FigureBundle, dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_histogram_csv(&bundle.histogram, &dir.join(HISTOGRAM_FILE))?;
    write_series_csv(&bundle.v_curve, &dir.join(VCURVE_FILE))?;
    write_series_csv(&bundle.v_reference, &dir.join(VREF_FILE))?;
    write_grid_function(&bundle.u_k, &dir.join(UK_FILE))?;
    write_canonical_json(&bundle.comparison, &dir.join(COMPARISON_FILE))?;
    for name in [
        HISTOGRAM_FILE,
        VCURVE_FILE,
        VREF_FILE,
        UK_FILE,
        "u_k.json",
        COMPARISON_FILE,
    ] {
        manifest.record_output(dir, name)?;
    }
    Ok(())
}

/// Normalized argument list that reproduces a figure bundle.
pub fn figure_command(preset: FigurePreset, settings: &FigureSettings, mc: &McConfig) -> Vec<String> {
    let mut cmd: Vec<String> = vec!["figures".into(), "--preset".into(), preset.name().into()];
    for (flag, value) in [
        ("--t-max", settings.t_max.to_string()),
        ("--step", settings.step.to_string()),
        ("--depth", settings.depth.to_string()),
        ("--picard-k", settings.picard_k.to_string()),
        ("--eps-tail", settings.numerics.eps_tail.to_string()),
        ("--samples", mc.samples.to_string()),
        ("--seed", mc.seed.to_string()),
        ("--t-step", settings.mc_step.to_string()),
    ] {
        cmd.push(flag.into());
        cmd.push(value);
    }
    cmd
}

/// Compute and write the bundle for `preset` under
/// `<out>/figures/<digest>/`, returning that directory and its manifest.
pub fn figure_bundle(
    preset: FigurePreset,
    settings: &FigureSettings,
    mc: &McConfig,
    out: &Path,
) -> Result<(PathBuf, RunManifest)> {
    let mut manifest = RunManifest::new(figure_command(preset, settings, mc));
    manifest.alpha = vec![preset.alpha()];
    manifest.grid = Some(GridParams {
        t_max: settings.t_max,
        step: settings.step,
        eps_tail: settings.numerics.eps_tail,
    });
    manifest.depth = Some(settings.depth);
    manifest.picard_k = Some(settings.picard_k);
    manifest.samples = Some(mc.samples);
    manifest.seed = Some(mc.seed);
    manifest.set_parameter("preset", preset.name())?;
    manifest.set_parameter("hist_t", settings.hist_t)?;
    manifest.set_parameter("mc_step", settings.mc_step)?;
    let dir = run_directory(out, "figures", &manifest)?;
    let bundle = compute_figure_bundle(preset.alpha(), settings, mc)?;
    write_figure_bundle(&bundle, &dir, &mut manifest)?;
    manifest.stamp_now();
    write_manifest(&manifest, &dir.join(MANIFEST_FILE))?;
    Ok((dir, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let alphas: Vec<f64> = FigurePreset::ALL.iter().map(|p| p.alpha()).collect();
        assert_eq!(alphas, vec![0.66, 1.5, 3.0]);
        assert_eq!("fig2".parse::<FigurePreset>().unwrap(), FigurePreset::Fig2);
        assert!("fig4".parse::<FigurePreset>().is_err());
    }

    #[test]
    fn spaced_points() {
        let t = time_points(8.0, 0.5).unwrap();
        assert_eq!(t.len(), 17);
        assert_eq!(t[16], 8.0);
        assert_eq!(time_points(1.0, 0.3).unwrap().len(), 4);
    }

    #[test]
    fn small_bundle_is_complete_and_verifiable() {
        let dir = tempfile::tempdir().unwrap();
        let settings = FigureSettings {
            t_max: 2.0,
            step: 0.05,
            depth: 4,
            picard_k: 2,
            mc_step: 1.0,
            ..FigureSettings::default()
        };
        let mc = McConfig::new(3).with_samples(200);
        let (run, manifest) = figure_bundle(FigurePreset::Fig2, &settings, &mc, dir.path()).unwrap();
        assert!(run.starts_with(dir.path().join("figures")));
        assert_eq!(manifest.outputs.len(), 6);
        crate::io::verify_manifest(&run.join(MANIFEST_FILE)).unwrap();
        let h = crate::io::read_histogram_csv(&run.join(HISTOGRAM_FILE)).unwrap();
        assert_eq!(h.total, 200);
    }
}
