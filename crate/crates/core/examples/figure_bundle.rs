//! Writes the data behind one figure preset: the histogram,
//! the Monte Carlo and deterministic v-curves, `U_k`, and a manifest.
//!
//! ```text
//! cargo run --release --example figure_bundle [fig1|fig2|fig3] [out-dir]
//! ```

use std::path::{Path, PathBuf};

use riccati_cascade::io::{figure_bundle, verify_manifest, FigurePreset, FigureSettings, MANIFEST_FILE};
use riccati_cascade::montecarlo::McConfig;

pub fn run_example(
    preset: FigurePreset,
    settings: &FigureSettings,
    samples: u64,
    out: &Path,
) -> riccati_cascade::Result<PathBuf> {
    let mc = McConfig::new(42).with_samples(samples);
    let (dir, manifest) = figure_bundle(preset, settings, &mc, out)?;
    verify_manifest(&dir.join(MANIFEST_FILE))?;
    println!("{preset} (alpha = {}) -> {}", preset.alpha(), dir.display());
    for (name, digest) in &manifest.outputs {
        println!("  {name:<22} {}", &digest[..16]);
    }
    Ok(dir)
}

#[allow(dead_code)]
fn main() -> riccati_cascade::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: FigurePreset = args.next().as_deref().unwrap_or("fig2").parse()?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    run_example(preset, &FigureSettings::default(), 10_000, &out).map(|_| ())
}
