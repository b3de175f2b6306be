//! CSV and JSON serialization of results, run manifests with file digests,
//! and figure-ready data bundles.
//!
//! Floats in CSV files are written with 17 significant digits and JSON uses
//! sorted keys, so identical results always produce identical bytes.

mod figures;
mod manifest;
mod tables;

pub use figures::{
    compute_figure_bundle, figure_bundle, figure_command, time_points, write_figure_bundle, FigureBundle, FigurePreset,
    FigureSettings, COMPARISON_FILE, HISTOGRAM_FILE, UK_FILE, VCURVE_FILE, VREF_FILE,
};
pub use manifest::{
    canonical_json, read_manifest, run_directory, sha256_file, sha256_hex, verify_manifest, write_canonical_json,
    write_manifest, GridParams, RunManifest, MANIFEST_FILE,
};
pub(crate) use tables::{fmt_f64, write_table};
pub use tables::{
    read_estimate_series, read_grid_function, read_histogram_csv, read_series_csv, sidecar_path, write_grid_function,
    write_histogram_csv, write_series_csv, SeriesRow, SeriesSource,
};
