//! Plain-text interchange formats.
//!
//! All numeric output goes through [`fmt_g17`] (17 significant digits),
//! which round-trips every f64 exactly and is byte-stable across
//! platforms, so seeded runs produce byte-identical files.
//!
//! Formats:
//! * parameter tuples: `k=5 gamma=0.5 omega=1` key=value text;
//! * samples: one-column CSV with a `#` header comment carrying params,
//!   count, seed and the RNG algorithm identifier;
//! * estimates: `k_hat,gamma_hat,delta_hat,raw_delta_hat,status` rows
//!   (absent estimates are empty fields);
//! * sweep rows and performance points: fixed column sets below.

use crate::error::{Error, Result};
use crate::estimators::EstimateResult;
use crate::model::GammaParams;
use crate::perf::PerfPoint;
use crate::sampler::{SampleSet, RNG_ALGORITHM};
use crate::sweep::SweepRow;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Format with 17 significant digits (scientific), the shortest width
/// that is lossless for every f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_g17).unwrap_or_default()
}

// ---------------------------------------------------------------------
// parameter tuples
// ---------------------------------------------------------------------

/// `k=.. gamma=.. omega=..` serialization of a parameter tuple.
pub fn params_to_kv(p: &GammaParams) -> String {
    format!("k={} gamma={} omega={}", fmt_g17(p.k()), fmt_g17(p.gamma()), fmt_g17(p.omega()))
}

/// Parse a `k=.. gamma=.. omega=..` string (any order, whitespace
/// separated; omega defaults to 1 if absent).
pub fn params_from_kv(text: &str) -> Result<GammaParams> {
    let mut k = None;
    let mut gamma = None;
    let mut omega = None;
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("expected key=value, got `{token}`")))?;
        let parsed: f64 = value
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse `{value}` as a number")))?;
        match key {
            "k" => k = Some(parsed),
            "gamma" => gamma = Some(parsed),
            "omega" => omega = Some(parsed),
            other => return Err(Error::Domain(format!("unknown parameter key `{other}`"))),
        }
    }
    match (k, gamma) {
        (Some(k), Some(gamma)) => GammaParams::new(k, gamma, omega.unwrap_or(1.0)),
        _ => Err(Error::Domain("parameter text must define both k and gamma".into())),
    }
}

// ---------------------------------------------------------------------
// samples
// ---------------------------------------------------------------------

/// Render a sample set as a one-column CSV with provenance comment.
pub fn samples_to_csv(s: &SampleSet) -> String {
    let mut out = String::with_capacity(s.len() * 24 + 128);
    let _ = writeln!(
        out,
        "# twdp samples {} n={} seed={} rng={}",
        params_to_kv(s.params()),
        s.len(),
        s.seed(),
        RNG_ALGORITHM
    );
    out.push_str("value\n");
    for &v in s.values() {
        out.push_str(&fmt_g17(v));
        out.push('\n');
    }
    out
}

pub fn write_samples_csv(path: &Path, s: &SampleSet) -> Result<()> {
    write_text(path, &samples_to_csv(s))
}

/// Read envelope values from a one-column CSV; `#` comments and a
/// leading `value` header are skipped.
pub fn read_samples_csv(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.eq_ignore_ascii_case("value") {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Error::Io(format!("{}:{}: cannot parse `{line}`", path.display(), lineno + 1))
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Io(format!("{}: no sample values found", path.display())));
    }
    Ok(values)
}

// ---------------------------------------------------------------------
// estimates / perf / sweep rows
// ---------------------------------------------------------------------

pub const ESTIMATE_HEADER: &str = "k_hat,gamma_hat,delta_hat,raw_delta_hat,status";

pub fn estimate_to_csv_row(r: &EstimateResult) -> String {
    format!(
        "{},{},{},{},{}",
        fmt_opt(r.k_hat),
        fmt_opt(r.gamma_hat),
        fmt_opt(r.delta_hat),
        fmt_opt(r.raw_delta_hat),
        r.status
    )
}

pub const PERF_HEADER: &str = "k,gamma,asv_k,asv_gamma,asv_delta,crb_k,crb_gamma,err_k,\
                               err_gamma,err_delta_norm,crb_err_k,crb_err_gamma,boundary_flag";

pub fn perf_to_csv_row(p: &PerfPoint) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_g17(p.k),
        fmt_g17(p.gamma),
        fmt_g17(p.asv_k),
        fmt_g17(p.asv_gamma),
        fmt_g17(p.asv_delta),
        fmt_g17(p.crb_k),
        fmt_g17(p.crb_gamma),
        fmt_g17(p.err_k),
        fmt_g17(p.err_gamma),
        fmt_g17(p.err_delta_norm),
        fmt_g17(p.crb_err_k),
        fmt_g17(p.crb_err_gamma),
        p.near_boundary as u8
    )
}

pub const SWEEP_HEADER: &str = "k,gamma,k_hat_mean,k_hat_min,k_hat_max,k_hat_std,\
                                gamma_hat_mean,gamma_hat_min,gamma_hat_max,gamma_hat_std,\
                                delta_hat_mean,n_clamped,n_failed";

pub fn sweep_to_csv_row(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_g17(r.k),
        fmt_g17(r.gamma),
        fmt_g17(r.k_hat_mean),
        fmt_g17(r.k_hat_min),
        fmt_g17(r.k_hat_max),
        fmt_g17(r.k_hat_std),
        fmt_g17(r.gamma_hat_mean),
        fmt_g17(r.gamma_hat_min),
        fmt_g17(r.gamma_hat_max),
        fmt_g17(r.gamma_hat_std),
        fmt_g17(r.delta_hat_mean),
        r.n_clamped,
        r.n_failed
    )
}

pub const RAW_SWEEP_HEADER: &str =
    "k,gamma,realization,k_hat,gamma_hat,delta_hat,raw_delta_hat,status";

pub fn raw_record_to_csv_row(r: &crate::sweep::RealizationRecord) -> String {
    format!(
        "{},{},{},{}",
        fmt_g17(r.k),
        fmt_g17(r.gamma),
        r.realization,
        estimate_to_csv_row(&r.result)
    )
}

/// Write text to a file, mapping failures to an [`Error::Io`] that names
/// the path.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| Error::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::generate;

    #[test]
    fn g17_round_trips() {
        for &x in &[0.1, 2.0 / 3.0, 1e-300, 123456.789, f64::MIN_POSITIVE] {
            let s = fmt_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn params_kv_round_trip() {
        let p = GammaParams::new(5.0, 0.5, 2.5).unwrap();
        let text = params_to_kv(&p);
        let back = params_from_kv(&text).unwrap();
        assert_eq!(p, back);
        // omega defaults to 1
        let q = params_from_kv("k=2 gamma=0.25").unwrap();
        assert_eq!(q.omega(), 1.0);
        assert!(params_from_kv("k=2").is_err());
        assert!(params_from_kv("k=2 gamma=0.25 bogus=1").is_err());
    }

    #[test]
    fn samples_csv_round_trip() {
        let p = GammaParams::new(3.0, 0.4, 1.0).unwrap();
        let s = generate(&p, 50, 99).unwrap();
        let dir = std::env::temp_dir().join("twdp-io-test");
        let path = dir.join("samples.csv");
        write_samples_csv(&path, &s).unwrap();
        let values = read_samples_csv(&path).unwrap();
        assert_eq!(values, s.values());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn estimate_row_handles_missing_fields() {
        let r = EstimateResult {
            k_hat: None,
            gamma_hat: None,
            delta_hat: None,
            raw_delta_hat: None,
            status: crate::estimators::EstimateStatus::DenominatorSingular,
        };
        assert_eq!(estimate_to_csv_row(&r), ",,,,denominator_singular");
    }

    #[test]
    fn missing_file_reports_path() {
        let err = read_samples_csv(Path::new("/nonexistent/twdp.csv")).unwrap_err();
        assert!(matches!(err, Error::Io(ref m) if m.contains("/nonexistent/twdp.csv")));
    }
}
