use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use hubbath_core::hubbard;
use hubbath_core::mitigation::{
    bitflip_relabel, build_confusion_matrix, mitigate_readout, zne_trace, ConfusionMatrix,
};
use hubbath_core::{
    run_experiment, AngleConvention, ExperimentConfig, NoiseModel, PopulationTrace,
};
use serde::Serialize;

use crate::csv_out::{format_probability, write_trace_csv};
use crate::presets::find_preset;

/// Command-line overrides applied on top of a config or preset.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    /// Exact populations; drops mitigations that need counts.
    pub exact: bool,
    pub raw_inverse: bool,
    pub angle_convention: Option<AngleConvention>,
}

impl RunOptions {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(shots) = self.shots {
            config.shots = shots;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(conv) = self.angle_convention {
            config.bath.angle_convention = conv;
        }
        if self.exact {
            config.shots = 0;
        }
        if config.shots == 0 {
            config.mitigation.readout = false;
            config.mitigation.readout_raw_inverse = false;
            config.mitigation.bitflip = false;
        }
        if self.raw_inverse && config.mitigation.readout {
            config.mitigation.readout_raw_inverse = true;
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ManifestFiles {
    pub exact: String,
    pub run: String,
    pub mitigated: BTreeMap<String, String>,
    pub intermediate: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub name: String,
    pub artifact_version: &'static str,
    pub seed: u64,
    pub shots: u64,
    pub config: ExperimentConfig,
    pub wall_clock_seconds: f64,
    pub files: ManifestFiles,
}

/// Reference curve without hardware noise or sampling: the matrix
/// exponential for an isolated system, the exact collision-model evolution
/// otherwise.
pub fn exact_reference(config: &ExperimentConfig) -> hubbath_core::Result<PopulationTrace> {
    if !config.bath.is_active() {
        return hubbard::exact_trace(&config.model, &config.initial_state());
    }
    let mut ideal = config.clone();
    ideal.noise = NoiseModel::default();
    ideal.shots = 0;
    ideal.mitigation = Default::default();
    run_experiment(&ideal)
}

fn artifact(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

struct Writer<'a> {
    prefix: &'a Path,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn trace(&mut self, suffix: &str, trace: &PopulationTrace) -> Result<String> {
        let path = artifact(self.prefix, suffix);
        write_trace_csv(trace, &path).with_context(|| format!("writing {}", path.display()))?;
        let name = file_name(&path);
        self.written.push(path);
        Ok(name)
    }

    fn confusion(&mut self, suffix: &str, cm: &ConfusionMatrix, labels: &[String]) -> Result<String> {
        let path = artifact(self.prefix, suffix);
        let mut out = String::from("measured");
        for l in labels {
            out.push_str(&format!(",prepared_{l}"));
        }
        out.push('\n');
        for (i, l) in labels.iter().enumerate() {
            out.push_str(l);
            for j in 0..cm.dim() {
                out.push(',');
                out.push_str(&format_probability(cm.entry(i, j)));
            }
            out.push('\n');
        }
        fs::write(&path, out).with_context(|| format!("writing {}", path.display()))?;
        let name = file_name(&path);
        self.written.push(path);
        Ok(name)
    }
}

/// Runs one experiment and writes `<prefix>_exact.csv`, the run trace,
/// mitigated traces and `<prefix>_manifest.json`.
pub fn run_pipeline(name: &str, config: &ExperimentConfig, prefix: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    config
        .validate()
        .with_context(|| format!("invalid configuration for {name}"))?;
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = Writer {
        prefix,
        written: Vec::new(),
    };
    let mut files = ManifestFiles {
        exact: w.trace("_exact.csv", &exact_reference(config)?)?,
        ..ManifestFiles::default()
    };

    let run = run_experiment(config)?;
    files.run = w.trace(
        if config.shots > 0 {
            "_sampled.csv"
        } else {
            "_noisy.csv"
        },
        &run,
    )?;

    let m = &config.mitigation;
    if m.readout {
        let k = config.model.num_qubits();
        let cm = build_confusion_matrix(&config.noise.readout, k, config.shots, config.seed.wrapping_add(1))?;
        let corrected = mitigate_readout(&run, &cm, m.readout_raw_inverse)?;
        let cm_file = w.confusion("_readout_confusion.csv", &cm, run.basis_labels())?;
        files.intermediate.insert("readout".into(), vec![cm_file]);
        files
            .mitigated
            .insert("readout".into(), w.trace("_mitigated_readout.csv", &corrected)?);
    }
    if let Some(zne) = &m.zne {
        let result = zne_trace(config, zne)?;
        let mut scaled = Vec::new();
        for (s, trace) in &result.scaled {
            scaled.push(w.trace(&format!("_zne_scale{s}.csv"), trace)?);
        }
        files.intermediate.insert("zne".into(), scaled);
        files
            .mitigated
            .insert("zne".into(), w.trace("_mitigated_zne.csv", &result.mitigated)?);
    }
    if m.bitflip {
        let (mut flipped, map) = bitflip_relabel(config)?;
        flipped.mitigation = Default::default();
        let raw = run_experiment(&flipped)?;
        files
            .intermediate
            .insert("bitflip".into(), vec![w.trace("_bitflip_raw.csv", &raw)?]);
        files
            .mitigated
            .insert("bitflip".into(), w.trace("_mitigated_bitflip.csv", &map.apply(&raw))?);
    }

    let manifest = RunManifest {
        name: name.to_string(),
        artifact_version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        shots: config.shots,
        config: config.clone(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        files,
    };
    let path = artifact(prefix, "_manifest.json");
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
    Ok(manifest)
}

/// Runs a named preset into `out_dir`.
pub fn run_preset(name: &str, out_dir: &Path, opts: &RunOptions) -> Result<RunManifest> {
    let preset = find_preset(name)?;
    let mut config = preset.config();
    opts.apply(&mut config);
    run_pipeline(preset.name, &config, &out_dir.join(preset.name))
}

/// Runs several presets, optionally on one thread each. Results keep the
/// order of `names`.
pub fn run_presets(
    names: &[&str],
    out_dir: &Path,
    opts: &RunOptions,
    parallel: bool,
) -> Vec<Result<RunManifest>> {
    if !parallel {
        return names.iter().map(|n| run_preset(n, out_dir, opts)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| scope.spawn(move || run_preset(n, out_dir, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("preset thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::PRESETS;

    #[test]
    fn options_override_config() {
        let mut cfg = find_preset("fig7_mitigation").unwrap().config();
        RunOptions {
            seed: Some(9),
            raw_inverse: true,
            ..RunOptions::default()
        }
        .apply(&mut cfg);
        assert_eq!(cfg.seed, 9);
        assert!(cfg.mitigation.readout_raw_inverse);

        RunOptions {
            exact: true,
            ..RunOptions::default()
        }
        .apply(&mut cfg);
        assert_eq!(cfg.shots, 0);
        assert!(!cfg.mitigation.readout && !cfg.mitigation.bitflip);
        assert!(cfg.mitigation.zne.is_some());
        cfg.validate().unwrap();
    }

    #[test]
    fn mitigation_preset_writes_everything() {
        let dir = tempfile::tempdir().unwrap();
        let m = run_preset("fig7_mitigation", dir.path(), &RunOptions::default()).unwrap();
        assert_eq!(m.files.run, "fig7_mitigation_sampled.csv");
        let methods: Vec<&str> = m.files.mitigated.keys().map(String::as_str).collect();
        assert_eq!(methods, ["bitflip", "readout", "zne"]);
        for f in m
            .files
            .mitigated
            .values()
            .chain(m.files.intermediate.values().flatten())
            .chain([&m.files.exact, &m.files.run])
        {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert!(dir.path().join("fig7_mitigation_manifest.json").exists());
    }

    #[test]
    fn every_preset_runs() {
        let dir = tempfile::tempdir().unwrap();
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        for r in run_presets(&names, dir.path(), &RunOptions::default(), true) {
            let m = r.unwrap();
            assert!(m.wall_clock_seconds < 10.0, "{} took {}", m.name, m.wall_clock_seconds);
        }
    }
}
