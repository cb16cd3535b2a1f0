//! Figure-data CSV emission.
//!
//! Each figure selector produces exactly the columns needed to replot one
//! of the five standard views:
//!
//! * `fig1` -- K_hat mean (with min/max/std error bars) vs true K for a
//!   few Gamma values, plus the per-Gamma regression fit;
//! * `fig2` -- the Gamma analogue, swept over Gamma for a few K values;
//! * `fig3` -- sqrt-normalized CRB and AsV of K_hat vs K;
//! * `fig4` -- sqrt-normalized CRB and AsV of Gamma_hat vs Gamma;
//! * `fig5` -- the Gamma-vs-Delta comparison: both sqrt-normalized AsV
//!   errors against V2/V1 (both divided by V2/V1 = Gamma).
//!
//! The sqrt-normalized quantities are per-sample: multiply by 1/sqrt(N)
//! to get the relative error from N samples.

use crate::error::{Error, Result};
use crate::io::{self, fmt_g17};
use crate::model::GammaParams;
use crate::perf::perf_point;
use crate::sweep::{ols_fit, run_sweep, SweepConfig};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FromStr for FigureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" | "1" => Ok(FigureKind::Fig1),
            "fig2" | "2" => Ok(FigureKind::Fig2),
            "fig3" | "3" => Ok(FigureKind::Fig3),
            "fig4" | "4" => Ok(FigureKind::Fig4),
            "fig5" | "5" => Ok(FigureKind::Fig5),
            other => Err(Error::Domain(format!(
                "unknown figure `{other}` (expected fig1..fig5)"
            ))),
        }
    }
}

impl fmt::Display for FigureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FigureKind::Fig1 => "fig1",
            FigureKind::Fig2 => "fig2",
            FigureKind::Fig3 => "fig3",
            FigureKind::Fig4 => "fig4",
            FigureKind::Fig5 => "fig5",
        };
        f.write_str(s)
    }
}

/// Knobs shared by all figures. Grid overrides replace the per-figure
/// defaults below (which mirror the reference protocol but can be
/// coarsened for quick runs).
#[derive(Debug, Clone, PartialEq)]
pub struct FigureConfig {
    pub n_samples: usize,
    pub n_realizations: usize,
    pub omega: f64,
    pub seed: u64,
    pub k_values: Option<Vec<f64>>,
    pub gamma_values: Option<Vec<f64>>,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            n_samples: 10_000,
            n_realizations: 500,
            omega: 1.0,
            seed: 1,
            k_values: None,
            gamma_values: None,
        }
    }
}

fn range_grid(start: f64, step: f64, end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let v = start + step * i as f64;
        if v > end + 1e-9 {
            break;
        }
        out.push(v);
        i += 1;
    }
    out
}

fn default_fig1_grids() -> (Vec<f64>, Vec<f64>) {
    (range_grid(0.0, 0.25, 10.0), vec![0.3, 0.5, 0.8])
}

fn default_fig2_grids() -> (Vec<f64>, Vec<f64>) {
    (vec![1.0, 2.0, 3.0, 10.0], range_grid(0.0, 0.03, 0.99))
}

/// Render the selected figure's data as CSV text.
pub fn figure_csv(which: FigureKind, cfg: &FigureConfig) -> Result<String> {
    match which {
        FigureKind::Fig1 | FigureKind::Fig2 => mc_figure_csv(which, cfg),
        FigureKind::Fig3 | FigureKind::Fig4 | FigureKind::Fig5 => perf_figure_csv(which, cfg),
    }
}

/// Monte-Carlo figures (1, 2): sweep + per-curve regression.
fn mc_figure_csv(which: FigureKind, cfg: &FigureConfig) -> Result<String> {
    let (k_values, gamma_values) = match which {
        FigureKind::Fig1 => default_fig1_grids(),
        _ => default_fig2_grids(),
    };
    let k_values = cfg.k_values.clone().unwrap_or(k_values);
    let gamma_values = cfg.gamma_values.clone().unwrap_or(gamma_values);

    let mut sweep_cfg = SweepConfig::new(k_values.clone(), gamma_values.clone(), cfg.seed);
    sweep_cfg.n_samples = cfg.n_samples;
    sweep_cfg.n_realizations = cfg.n_realizations;
    sweep_cfg.omega = cfg.omega;
    let rows = run_sweep(&sweep_cfg)?;

    let mut out = String::new();
    match which {
        FigureKind::Fig1 => {
            out.push_str(
                "gamma,k,k_hat_mean,k_hat_min,k_hat_max,k_hat_std,\
                 fit_slope,fit_intercept,fit_r_squared\n",
            );
            // one regression of k_hat_mean on k per gamma curve
            for &g in &gamma_values {
                let curve: Vec<_> = rows.iter().filter(|r| r.gamma == g).collect();
                let xs: Vec<f64> = curve.iter().map(|r| r.k).collect();
                let ys: Vec<f64> = curve.iter().map(|r| r.k_hat_mean).collect();
                let fit = ols_fit(&xs, &ys)?;
                for r in curve {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{}\n",
                        fmt_g17(g),
                        fmt_g17(r.k),
                        fmt_g17(r.k_hat_mean),
                        fmt_g17(r.k_hat_min),
                        fmt_g17(r.k_hat_max),
                        fmt_g17(r.k_hat_std),
                        fmt_g17(fit.slope),
                        fmt_g17(fit.intercept),
                        fmt_g17(fit.r_squared),
                    ));
                }
            }
        }
        _ => {
            out.push_str(
                "k,gamma,gamma_hat_mean,gamma_hat_min,gamma_hat_max,gamma_hat_std,\
                 fit_slope,fit_intercept,fit_r_squared\n",
            );
            for &k in &k_values {
                let curve: Vec<_> = rows.iter().filter(|r| r.k == k).collect();
                let xs: Vec<f64> = curve.iter().map(|r| r.gamma).collect();
                let ys: Vec<f64> = curve.iter().map(|r| r.gamma_hat_mean).collect();
                let fit = ols_fit(&xs, &ys)?;
                for r in curve {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{}\n",
                        fmt_g17(k),
                        fmt_g17(r.gamma),
                        fmt_g17(r.gamma_hat_mean),
                        fmt_g17(r.gamma_hat_min),
                        fmt_g17(r.gamma_hat_max),
                        fmt_g17(r.gamma_hat_std),
                        fmt_g17(fit.slope),
                        fmt_g17(fit.intercept),
                        fmt_g17(fit.r_squared),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Analytic figures (3, 4, 5) from perf_point sweeps.
fn perf_figure_csv(which: FigureKind, cfg: &FigureConfig) -> Result<String> {
    let mut out = String::new();
    match which {
        FigureKind::Fig3 => {
            let ks = cfg.k_values.clone().unwrap_or_else(|| range_grid(0.5, 0.25, 10.0));
            let gs = cfg.gamma_values.clone().unwrap_or_else(|| vec![0.1, 0.3, 0.5, 0.8]);
            out.push_str("gamma,k,crb_err_k,asv_err_k\n");
            for &g in &gs {
                for &k in &ks {
                    let pp = perf_point(&GammaParams::new(k, g, cfg.omega)?)?;
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt_g17(g),
                        fmt_g17(k),
                        fmt_g17(pp.crb_err_k),
                        fmt_g17(pp.err_k)
                    ));
                }
            }
        }
        FigureKind::Fig4 => {
            let ks = cfg.k_values.clone().unwrap_or_else(|| vec![1.0, 2.0, 3.0, 5.0, 10.0]);
            let gs = cfg.gamma_values.clone().unwrap_or_else(|| range_grid(0.04, 0.02, 0.98));
            out.push_str("k,gamma,crb_err_gamma,asv_err_gamma\n");
            for &k in &ks {
                for &g in &gs {
                    let pp = perf_point(&GammaParams::new(k, g, cfg.omega)?)?;
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt_g17(k),
                        fmt_g17(g),
                        fmt_g17(pp.crb_err_gamma),
                        fmt_g17(pp.err_gamma)
                    ));
                }
            }
        }
        _ => {
            // fig5: AsV only, no Fisher matrix needed
            let ks = cfg.k_values.clone().unwrap_or_else(|| vec![3.0, 5.0, 10.0]);
            let gs = cfg.gamma_values.clone().unwrap_or_else(|| {
                let mut g = range_grid(0.05, 0.05, 0.95);
                g.push(0.99);
                g
            });
            out.push_str("k,v2_v1,err_gamma,err_delta_norm\n");
            for &k in &ks {
                for &g in &gs {
                    let p = GammaParams::new(k, g, cfg.omega)?;
                    let a = crate::perf::asv(&p)?;
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt_g17(k),
                        fmt_g17(g),
                        fmt_g17(a.asv_gamma.sqrt() / g),
                        fmt_g17(a.asv_delta.sqrt() / g)
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Write the selected figure's CSV to `out_path`.
pub fn emit_figure_data(which: FigureKind, cfg: &FigureConfig, out_path: &Path) -> Result<()> {
    io::write_text(out_path, &figure_csv(which, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_kind_parses() {
        assert_eq!("fig3".parse::<FigureKind>().unwrap(), FigureKind::Fig3);
        assert_eq!("5".parse::<FigureKind>().unwrap(), FigureKind::Fig5);
        assert!("fig9".parse::<FigureKind>().is_err());
    }

    #[test]
    fn range_grid_endpoints() {
        let g = range_grid(0.0, 0.25, 1.0);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn fig5_dashed_above_solid_in_the_small_ratio_region() {
        // information ordering from the error columns themselves: at
        // small V2/V1 the Delta-based error exceeds the Gamma-based one
        let cfg = FigureConfig {
            k_values: Some(vec![5.0]),
            gamma_values: Some(vec![0.1, 0.15, 0.3]),
            ..FigureConfig::default()
        };
        let csv = figure_csv(FigureKind::Fig5, &cfg).unwrap();
        for line in csv.lines().skip(1) {
            let cols: Vec<f64> =
                line.split(',').map(|c| c.parse().unwrap()).collect();
            assert!(cols[3] > cols[2], "line {line}");
        }
    }

    #[test]
    fn fig3_columns_ordered_by_information_inequality() {
        let cfg = FigureConfig {
            k_values: Some(vec![5.0]),
            gamma_values: Some(vec![0.5]),
            ..FigureConfig::default()
        };
        let csv = figure_csv(FigureKind::Fig3, &cfg).unwrap();
        let line = csv.lines().nth(1).unwrap();
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        // dashed (AsV) >= solid (CRB)
        assert!(cols[3] >= cols[2]);
    }

    #[test]
    fn fig1_small_run_has_fit_columns() {
        let cfg = FigureConfig {
            n_samples: 300,
            n_realizations: 8,
            k_values: Some(vec![3.0, 5.0, 8.0]),
            gamma_values: Some(vec![0.5]),
            ..FigureConfig::default()
        };
        let csv = figure_csv(FigureKind::Fig1, &cfg).unwrap();
        assert_eq!(csv.lines().count(), 1 + 3);
        let cols: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(cols.len(), 9);
    }
}
