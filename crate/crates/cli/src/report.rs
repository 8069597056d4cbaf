//! Machine-readable report layout.

use nftaper::experiment::{RowMetrics, Table2Report, WindowResult};
use nftaper::SidelobeReport;
use serde::Serialize;
use serde_json::{json, Value};

/// Outcome of comparing a Slepian design against seeded random weight vectors.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RandomCheck {
    pub seed: u64,
    pub trials: usize,
    pub design_j: f64,
    pub max_random_j: f64,
    pub dominates: bool,
}

/// `null` when undefined, `"inf"` when unbounded.
fn number(v: Option<f64>) -> Value {
    match v {
        None => Value::Null,
        Some(x) if x.is_infinite() => json!("inf"),
        Some(x) => json!(x),
    }
}

fn metrics(m: &RowMetrics) -> Value {
    json!({
        "psll_range_db": number(m.psll_range_db),
        "psll_angle_db": number(m.psll_angle_db),
        "isll_range_db": number(m.isll_range_db),
        "isll_angle_db": number(m.isll_angle_db),
        "bd_m": number(m.bd_m),
        "bw_deg": number(m.bw_deg),
    })
}

fn cut_diagnostics(r: &SidelobeReport, degrees: bool) -> Value {
    let scale = |x: Option<f64>| x.map(|v| if degrees { v.to_degrees() } else { v });
    let width = if degrees {
        r.width.to_degrees()
    } else {
        r.width
    };
    json!({
        "status": r.mainlobe.status(),
        "peak_index": r.mainlobe.peak_index,
        "lower_index": r.mainlobe.lower_index,
        "upper_index": r.mainlobe.upper_index,
        "lower_bound": number(scale(r.mainlobe.lower_bound)),
        "upper_bound": number(scale(r.mainlobe.upper_bound)),
        "half_power_width": number(Some(width)),
    })
}

fn window(w: &WindowResult, check: Option<&RandomCheck>) -> Value {
    let taper = w.taper.as_ref();
    let diagnostics = json!({
        "error": w.error,
        "angle_cut": w.angle.as_ref().map(|r| cut_diagnostics(r, true)),
        "range_cut": w.range.as_ref().map(|r| cut_diagnostics(r, false)),
        "classic_lambda": taper.and_then(|t| t.classic_lambda),
        "slepian": taper.and_then(|t| t.slepian.as_ref()).map(|d| json!({
            "j": d.j,
            "leading_eigenvalues": d.leading_eigenvalues,
            "mainlobe": d.mainlobe,
            "total": d.total,
            "options": d.options,
            "regularization": d.regularization,
            "max_residual": d.max_residual,
            "phase_rms_rad": d.phase_rms,
        })),
        "random_check": check,
    });
    json!({
        "name": w.name,
        "spec": w.spec,
        "taper_stats": w.taper_stats,
        "metrics": w.metrics.as_ref().map(metrics),
        "diagnostics": diagnostics,
    })
}

/// Report JSON; `checks` is indexed like `report.per_window`.
pub fn report_json(report: &Table2Report, checks: &[Option<RandomCheck>]) -> Value {
    let per_window: Vec<Value> = report
        .per_window
        .iter()
        .enumerate()
        .map(|(i, w)| window(w, checks.get(i).and_then(Option::as_ref)))
        .collect();
    json!({
        "config_echo": report.config_echo,
        "resolved": report.resolved,
        "per_window": per_window,
    })
}
