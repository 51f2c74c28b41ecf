//! The pipeline stages. Each one returns the files it produced and a short
//! report; writing and hashing happen in `main`.

use std::path::Path;

use k3dyn::homology;
use k3dyn::mapclass::{
    compute_g, f_squared_word, plot_csv, ArcData, ArcTracker, Convention, GComputation,
};
use k3dyn::shadowing::{recheck, Certification, ShadowingCertificate, ShadowingError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::PipelineConfig;
use crate::error::CliError;

pub const ENTROPY_FILE: &str = "entropy.json";
pub const CERTIFICATE_FILE: &str = "certificate.json";
pub const ARCS_FILE: &str = "arcs.txt";
pub const TRACKING_FILE: &str = "tracking.json";
pub const PLOT_FILE: &str = "arcs.csv";
pub const MCLASS_FILE: &str = "mclass.json";
/// Word for `[f²]` handed to the external dilatation computation.
pub const WORD_FILE: &str = "f2.word";
/// Written by the external bridge next to the word file.
pub const BRIDGE_FILE: &str = "bridge-report.json";

const ROOT_DIGITS: u32 = 30;

pub struct StageOutput {
    pub stage: &'static str,
    pub files: Vec<(&'static str, Vec<u8>)>,
    pub report: Value,
    pub lines: Vec<String>,
    /// Set when the stage ran to completion but its verdict is negative.
    pub failure: Option<String>,
}

impl StageOutput {
    fn new(stage: &'static str, report: Value, lines: Vec<String>) -> StageOutput {
        StageOutput { stage, files: Vec::new(), report, lines, failure: None }
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

pub fn entropy_complex() -> Result<StageOutput, CliError> {
    let f = homology::f_star().map_err(|e| CliError::Failure(e.to_string()))?;
    let data = homology::salem(&f, ROOT_DIGITS).map_err(|e| CliError::Failure(e.to_string()))?;
    let root: f64 = data.root.parse().unwrap_or(f64::NAN);
    let report = json!({
        "char_poly": data.char_poly,
        "salem_factor": data.salem_factor,
        "cofactor": data.cofactor,
        "spectral_radius": data.root,
        "enclosure": data.enclosure,
        "entropy": format!("{:.12}", root.ln()),
    });
    let lines = vec![
        format!("salem factor {:?}", data.salem_factor),
        format!("spectral radius {:.4} ({})", root, data.enclosure),
        format!("h_top(f, X(C)) = ln {:.4} = {:.6}", root, root.ln()),
    ];
    let mut out = StageOutput::new("entropy-complex", report.clone(), lines);
    out.files.push((ENTROPY_FILE, json_bytes(&report)));
    Ok(out)
}

fn shadowing_error(e: ShadowingError) -> CliError {
    match e {
        ShadowingError::InsufficientPrecision { bits, min } => CliError::Precision { bits, min },
        other => CliError::Failure(other.to_string()),
    }
}

fn certificate_lines(cert: &ShadowingCertificate) -> Vec<String> {
    let mut lines = Vec::new();
    if let Ok(r) = cert.max_residual() {
        lines.push(format!("max residual {:.3e}", r.upper_f64()));
    }
    for set in [&cert.declared, &cert.block_sup] {
        lines.push(format!("[{} norm] C = {}", set.norm, set.c.decimal));
        for (name, c) in [
            ("hypothesis (1)", &set.h1),
            ("hypothesis (2)", &set.h2),
            ("hypothesis (3)", &set.h3),
            ("localization", &set.localization),
        ] {
            let v = if c.pass { "PASS" } else { "FAIL" };
            lines.push(format!("  {name}: {v} ({})", c.detail));
        }
    }
    lines.push(format!("certificate: {}", if cert.pass { "PASS" } else { "FAIL" }));
    lines
}

pub fn certify(cfg: &PipelineConfig) -> Result<StageOutput, CliError> {
    let orbit = cfg.pseudo_orbit()?;
    let run = Certification::run(&orbit, &cfg.certify).map_err(shadowing_error)?;
    let cert = run.certificate;
    let report = json!({
        "pass": cert.pass,
        "precision": cert.precision,
        "period": cert.period,
    });
    let mut out = StageOutput::new("certify", report, certificate_lines(&cert));
    out.failure = cert.verdict().err().map(|e| e.to_string());
    out.files.push((CERTIFICATE_FILE, cert.to_json().into_bytes()));
    Ok(out)
}

pub fn recheck_file(path: &Path) -> Result<StageOutput, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let cert = ShadowingCertificate::from_json(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let rep = recheck(&cert).map_err(shadowing_error)?;
    let mut lines = certificate_lines(&cert);
    lines.extend(rep.mismatches.iter().map(|m| format!("mismatch: {m}")));
    lines.push(format!("recheck: {}", if rep.pass { "PASS" } else { "FAIL" }));
    let mut out = StageOutput::new("recheck", json!({ "pass": rep.pass, "mismatches": rep.mismatches }), lines);
    if !rep.pass {
        out.failure = Some(format!("certificate {} does not recheck", path.display()));
    }
    Ok(out)
}

#[derive(Serialize)]
struct TrackingRecord<'a> {
    punctures: &'a [[f64; 2]],
    orbit_labels: &'a [usize],
    image: &'a [usize],
    scale: f64,
    config: &'a k3dyn::mapclass::TrackConfig,
    vertices: Vec<usize>,
}

pub fn arcs(cfg: &PipelineConfig, emit_plot: bool) -> Result<StageOutput, CliError> {
    let orbit = cfg.pseudo_orbit()?;
    let fail = |e: k3dyn::mapclass::MapClassError| CliError::Failure(e.to_string());
    let tracker = ArcTracker::from_orbit(&orbit, cfg.track.clone()).map_err(fail)?;
    let tracked = tracker.tracked_arcs().map_err(fail)?;
    let data = tracker.arc_data(&tracked).map_err(fail)?;
    let mut text = format!("punctures={}\n", tracker.punctures());
    for d in &data {
        text.push_str(&format!("{d}\n"));
    }
    let record = TrackingRecord {
        punctures: tracker.disk.points(),
        orbit_labels: &tracker.labels,
        image: &tracker.image,
        scale: tracker.scale,
        config: &tracker.config,
        vertices: tracked.iter().map(|a| a.len()).collect(),
    };
    let lines = data.iter().enumerate().map(|(i, d)| format!("f'(p{i}): {d}")).collect();
    let report = json!({ "arcs": data.iter().map(|d| d.to_string()).collect::<Vec<_>>() });
    let mut out = StageOutput::new("arcs", report, lines);
    out.files.push((ARCS_FILE, text.into_bytes()));
    out.files.push((TRACKING_FILE, json_bytes(&record)));
    if emit_plot {
        out.files.push((PLOT_FILE, plot_csv(&tracker.disk, &tracked).into_bytes()));
    }
    Ok(out)
}

/// Reads an arc-data file: a `punctures=N` header, then one arc per line.
pub fn read_arcs(path: &Path) -> Result<Vec<ArcData>, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let n: usize = header
        .strip_prefix("punctures=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(format!("expected `punctures=N`, found {header:?}")))?;
    lines.map(|l| ArcData::parse(l, n).map_err(|e| bad(e.to_string()))).collect()
}

#[derive(Serialize)]
struct StageRecord {
    index: usize,
    contracted: String,
    lifted: String,
    winding: i64,
    word: String,
}

pub fn mclass(arcs_path: &Path, convention: Convention) -> Result<StageOutput, CliError> {
    if !arcs_path.exists() {
        return Err(CliError::MissingDependency { stage: "arcs", path: arcs_path.to_path_buf() });
    }
    let data = read_arcs(arcs_path)?;
    let g: GComputation = compute_g(&data).map_err(|e| CliError::Failure(e.to_string()))?;
    let f2 = f_squared_word(&g.g);
    let stages: Vec<StageRecord> = g
        .stages
        .iter()
        .map(|s| StageRecord {
            index: s.index,
            contracted: s.contracted_display(),
            lifted: s.lifted.to_string(),
            winding: s.winding,
            word: s.word.to_string(),
        })
        .collect();
    let report = json!({
        "punctures": g.punctures,
        "stages": stages,
        "g": g.g.to_string(),
        "g_length": g.g.len(),
        "f2": f2.to_string(),
        "f2_length": f2.len(),
    });
    let mut lines: Vec<String> = g.stages.iter().map(|s| format!("g{} = {}", s.index, s.word)).collect();
    lines.push(format!("|g| = {}, |f²| = {}", g.g.len(), f2.len()));
    let mut word = f2.export(convention);
    word.push('\n');
    let mut out = StageOutput::new("mclass", report.clone(), lines);
    out.files.push((MCLASS_FILE, json_bytes(&report)));
    out.files.push((WORD_FILE, word.into_bytes()));
    Ok(out)
}

#[derive(Debug, Deserialize)]
pub struct BridgeReport {
    pub dilatation: f64,
    #[serde(default)]
    pub is_pseudo_anosov: Option<bool>,
}

/// `½ ln λ / ln ρ(f*)`, the lower bound for the entropy ratio.
pub fn entropy_ratio(dilatation: f64, spectral_radius: f64) -> f64 {
    0.5 * dilatation.ln() / spectral_radius.ln()
}

pub fn summary(cfg: &PipelineConfig, require_bridge: bool) -> Result<StageOutput, CliError> {
    let entropy_path = cfg.path(ENTROPY_FILE);
    let text = std::fs::read_to_string(&entropy_path).map_err(CliError::io(&entropy_path))?;
    let entropy: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let root: f64 = entropy["spectral_radius"].as_str().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN);
    let bridge_path = cfg.path(BRIDGE_FILE);
    let mut lines = vec![format!("h_top(f, X(C)) = ln {root:.4}")];
    let mut report = json!({ "spectral_radius": root });
    if bridge_path.exists() {
        let text = std::fs::read_to_string(&bridge_path).map_err(CliError::io(&bridge_path))?;
        let bridge: BridgeReport = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", bridge_path.display())))?;
        let ratio = entropy_ratio(bridge.dilatation, root);
        lines.push(format!("λ([f²]) = {:.4} (from {})", bridge.dilatation, bridge_path.display()));
        lines.push(format!("h_top(f, X(R)) ≳ ½ ln {:.4} = {:.4}", bridge.dilatation, 0.5 * bridge.dilatation.ln()));
        lines.push(format!("h_top(f, X(R)) / h_top(f, X(C)) ≳ {ratio:.2}"));
        report["dilatation"] = json!(bridge.dilatation);
        report["pseudo_anosov"] = json!(bridge.is_pseudo_anosov);
        report["entropy_ratio"] = json!(ratio);
    } else if require_bridge {
        return Err(CliError::BridgeMissing(bridge_path));
    } else {
        lines.push(format!("no bridge report at {}; real entropy bound omitted", bridge_path.display()));
    }
    Ok(StageOutput::new("summary", report, lines))
}
