use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};
use crate::montecarlo::{EstimatePoint, EstimateSeries, Histogram, HistogramBin, OVERFLOW_FROM};
use crate::numerics::{GridFunction, GridMeta, UniformGrid};

/// 17 significant digits, enough to round-trip any `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().flexible(true).from_writer(file))
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new().flexible(true).from_reader(file))
}

fn expect_header(rdr: &mut csv::Reader<File>, path: &Path, want: &[&str]) -> Result<()> {
    let header = rdr.headers().map_err(csv_err(path))?;
    if header.iter().ne(want.iter().copied()) {
        return Err(format_err(path, format!("expected header {}", want.join(","))));
    }
    Ok(())
}

fn parse<T: std::str::FromStr>(path: &Path, field: &str, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| format_err(path, format!("bad {what} `{field}`")))
}

fn non_empty(s: &str) -> Option<&str> {
    (!s.is_empty()).then_some(s)
}

/// One row of a series CSV. Deterministic rows have no standard error or
/// sample count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub mean: f64,
    pub stderr: Option<f64>,
    pub n_samples: Option<u64>,
}

/// Anything that can be written as `t,mean,stderr,n_samples` rows.
pub trait SeriesSource {
    fn series_rows(&self) -> Vec<SeriesRow>;
}

impl SeriesSource for EstimateSeries {
    fn series_rows(&self) -> Vec<SeriesRow> {
        self.points
            .iter()
            .map(|p| SeriesRow {
                t: p.t,
                mean: p.mean,
                stderr: Some(p.stderr),
                n_samples: Some(p.n_samples),
            })
            .collect()
    }
}

impl SeriesSource for GridFunction {
    fn series_rows(&self) -> Vec<SeriesRow> {
        self.grid()
            .nodes()
            .zip(self.values())
            .map(|(t, &mean)| SeriesRow {
                t,
                mean,
                stderr: None,
                n_samples: None,
            })
            .collect()
    }
}

const SERIES_HEADER: [&str; 4] = ["t", "mean", "stderr", "n_samples"];

pub fn write_series_csv(series: &impl SeriesSource, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(SERIES_HEADER).map_err(csv_err(path))?;
    for r in series.series_rows() {
        w.write_record([
            fmt_f64(r.t),
            fmt_f64(r.mean),
            r.stderr.map(fmt_f64).unwrap_or_default(),
            r.n_samples.map(|n| n.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_series_csv(path: &Path) -> Result<Vec<SeriesRow>> {
    let mut rdr = reader(path)?;
    expect_header(&mut rdr, path, &SERIES_HEADER)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        if rec.len() != 4 {
            return Err(format_err(path, format!("row with {} fields", rec.len())));
        }
        rows.push(SeriesRow {
            t: parse(path, &rec[0], "t")?,
            mean: parse(path, &rec[1], "mean")?,
            stderr: non_empty(&rec[2]).map(|s| parse(path, s, "stderr")).transpose()?,
            n_samples: non_empty(&rec[3]).map(|s| parse(path, s, "n_samples")).transpose()?,
        });
    }
    Ok(rows)
}

/// Read a series written from an [`EstimateSeries`]; every row must carry a
/// standard error and sample count.
pub fn read_estimate_series(path: &Path) -> Result<EstimateSeries> {
    let points = read_series_csv(path)?
        .into_iter()
        .map(|r| match (r.stderr, r.n_samples) {
            (Some(stderr), Some(n_samples)) => Ok(EstimatePoint {
                t: r.t,
                mean: r.mean,
                stderr,
                n_samples,
            }),
            _ => Err(format_err(path, format!("row at t = {} has no standard error", r.t))),
        })
        .collect::<Result<_>>()?;
    Ok(EstimateSeries { points })
}

/// Path of the JSON sidecar holding a grid function's metadata.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

/// Grid function as `t,value` rows plus a JSON sidecar with the grid, tail
/// value and range flag.
pub fn write_grid_function(f: &GridFunction, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "value"]).map_err(csv_err(path))?;
    for (t, &v) in f.grid().nodes().zip(f.values()) {
        w.write_record([fmt_f64(t), fmt_f64(v)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    super::write_canonical_json(&f.meta(), &sidecar_path(path))
}

pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let side = sidecar_path(path);
    let text = std::fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta: GridMeta = serde_json::from_str(&text)?;
    let mut rdr = reader(path)?;
    expect_header(&mut rdr, path, &["t", "value"])?;
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        if rec.len() != 2 {
            return Err(format_err(path, format!("row with {} fields", rec.len())));
        }
        values.push(parse::<f64>(path, &rec[1], "value")?);
    }
    let grid = UniformGrid::from_len(meta.step, values.len()).map_err(|e| format_err(path, e.to_string()))?;
    if grid.t_max() != meta.t_max {
        return Err(format_err(path, "row count disagrees with the sidecar t_max"));
    }
    GridFunction::new(grid, values, meta.tail_value, meta.range_bounds)
}

/// Plain table with a header row, for reports without a reader.
pub(crate) fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

const HIST_HEADER: [&str; 3] = ["bin_lo", "bin_hi", "count"];

/// Occupied bins as `bin_lo,bin_hi,count` (`inf` for the overflow bin),
/// followed by `total`, `truncated_count` and `max_observed` footer rows.
pub fn write_histogram_csv(h: &Histogram, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(HIST_HEADER).map_err(csv_err(path))?;
    for b in &h.bins {
        let hi = b.hi.map_or_else(|| "inf".to_string(), |x| x.to_string());
        w.write_record([b.lo.to_string(), hi, b.count.to_string()])
            .map_err(csv_err(path))?;
    }
    for (name, value) in [
        ("total", h.total),
        ("truncated_count", h.truncated_count),
        ("max_observed", h.max_observed),
    ] {
        w.write_record([name, "", &value.to_string()]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_histogram_csv(path: &Path) -> Result<Histogram> {
    let mut rdr = reader(path)?;
    expect_header(&mut rdr, path, &HIST_HEADER)?;
    let mut h = Histogram::default();
    let mut footer = [None; 3];
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err(path))?;
        if rec.len() != 3 {
            return Err(format_err(path, format!("row with {} fields", rec.len())));
        }
        let count: u64 = parse(path, &rec[2], "count")?;
        match &rec[0] {
            "total" => footer[0] = Some(count),
            "truncated_count" => footer[1] = Some(count),
            "max_observed" => footer[2] = Some(count),
            lo => {
                let lo: u64 = parse(path, lo, "bin_lo")?;
                let hi = match &rec[1] {
                    "inf" => None,
                    s => Some(parse(path, s, "bin_hi")?),
                };
                if hi.is_none() != (lo == OVERFLOW_FROM) {
                    return Err(format_err(path, format!("bin at {lo} has the wrong upper edge")));
                }
                h.bins.push(HistogramBin { lo, hi, count });
            }
        }
    }
    match footer {
        [Some(total), Some(truncated), Some(max)] => {
            h.total = total;
            h.truncated_count = truncated;
            h.max_observed = max;
        }
        _ => return Err(format_err(path, "missing footer rows")),
    }
    if h.bins.iter().map(|b| b.count).sum::<u64>() != h.total {
        return Err(format_err(path, "bin counts do not add up to the total"));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::LeafCountSample;

    #[test]
    fn empty_series_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_series_csv(&EstimateSeries::default(), &p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "t,mean,stderr,n_samples\n");
        assert!(read_estimate_series(&p).unwrap().is_empty());
    }

    #[test]
    fn series_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let s = EstimateSeries {
            points: vec![
                EstimatePoint {
                    t: 0.1,
                    mean: 1.0 / 3.0,
                    stderr: 1e-300,
                    n_samples: 7,
                },
                EstimatePoint {
                    t: 8.0,
                    mean: f64::MIN_POSITIVE,
                    stderr: 0.0,
                    n_samples: 10_000,
                },
            ],
        };
        write_series_csv(&s, &p).unwrap();
        assert_eq!(read_estimate_series(&p).unwrap(), s);
    }

    #[test]
    fn grid_rows_have_empty_error_columns() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.csv");
        let g = GridFunction::from_fn(UniformGrid::new(1.0, 0.5).unwrap(), |t| (-t).exp(), 0.0, true).unwrap();
        write_series_csv(&g, &p).unwrap();
        let rows = read_series_csv(&p).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.stderr.is_none() && r.n_samples.is_none()));
        assert_eq!(rows[2].mean, (-1.0f64).exp());
        assert!(read_estimate_series(&p).is_err());
    }

    #[test]
    fn grid_function_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("u.csv");
        let g = GridFunction::from_fn(
            UniformGrid::new(8.0, 0.01).unwrap(),
            |t| 1.0 / (1.0 + t * t),
            0.25,
            true,
        )
        .unwrap();
        write_grid_function(&g, &p).unwrap();
        assert_eq!(read_grid_function(&p).unwrap(), g);
    }

    #[test]
    fn histogram_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        let s = |count, truncated| LeafCountSample { count, truncated };
        let h = Histogram::from_samples(&[s(1, false), s(2, false), s(2, false), s(OVERFLOW_FROM + 3, true)]);
        write_histogram_csv(&h, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains(&format!("{OVERFLOW_FROM},inf,1")));
        assert!(text.ends_with("total,,4\ntruncated_count,,1\nmax_observed,,16777219\n"));
        assert_eq!(read_histogram_csv(&p).unwrap(), h);
    }

    #[test]
    fn single_sample_histogram() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        let h = Histogram::from_samples(&[LeafCountSample {
            count: 1,
            truncated: false,
        }]);
        write_histogram_csv(&h, &p).unwrap();
        let back = read_histogram_csv(&p).unwrap();
        assert_eq!((back.occupied_bins(), back.total), (1, 1));
    }

    #[test]
    fn tampered_histogram_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        std::fs::write(
            &p,
            "bin_lo,bin_hi,count\n1,2,3\ntotal,,4\ntruncated_count,,0\nmax_observed,,1\n",
        )
        .unwrap();
        assert!(matches!(read_histogram_csv(&p), Err(Error::Format { .. })));
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = write_series_csv(&EstimateSeries::default(), Path::new("/nonexistent/dir/s.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/s.csv"));
    }
}
