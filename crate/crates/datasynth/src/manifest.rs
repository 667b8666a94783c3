use std::fmt;
use std::path::Path;

use crate::SynthError;

/// Dataset split tags. SV test/validation pairs reuse the training view
/// angles; CV pairs use a disjoint view-id set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    ValSv,
    ValCv,
    TestSv,
    TestCv,
}

impl Split {
    pub const ALL: [Split; 5] = [
        Split::Train,
        Split::ValSv,
        Split::ValCv,
        Split::TestSv,
        Split::TestCv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::ValSv => "val-SV",
            Split::ValCv => "val-CV",
            Split::TestSv => "test-SV",
            Split::TestCv => "test-CV",
        }
    }

    pub fn parse(s: &str) -> Option<Split> {
        Split::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One pair: `path` is the stem relative to the dataset root; the grid
/// files are `<path>.partial.rgpp` and `<path>.full.rgpp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub split: Split,
    pub category: String,
    pub model_id: String,
    pub view_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub seed: u64,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn entries_in(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }

    pub fn categories(&self) -> Vec<String> {
        let mut cats: Vec<String> = self.entries.iter().map(|e| e.category.clone()).collect();
        cats.sort();
        cats.dedup();
        cats
    }

    /// Model-disjointness between train and the test splits, and
    /// view-id disjointness between the SV and CV protocols.
    pub fn check_protocol(&self) -> Result<(), SynthError> {
        use std::collections::HashSet;
        let models = |s: Split| -> HashSet<&str> {
            self.entries_in(s).map(|e| e.model_id.as_str()).collect()
        };
        let train = models(Split::Train);
        for split in [Split::TestSv, Split::TestCv] {
            if let Some(m) = models(split).intersection(&train).next() {
                return Err(SynthError::Pipeline(format!(
                    "model {m} appears in both train and {split}"
                )));
            }
        }
        let train_views: HashSet<&str> =
            self.entries_in(Split::Train).map(|e| e.view_id.as_str()).collect();
        let sv_views: HashSet<&str> = self
            .entries_in(Split::TestSv)
            .chain(self.entries_in(Split::ValSv))
            .map(|e| e.view_id.as_str())
            .collect();
        if !train_views.is_empty() && !sv_views.is_subset(&train_views) {
            return Err(SynthError::Pipeline(
                "SV views are not a subset of the training views".into(),
            ));
        }
        let cv_views: HashSet<&str> = self
            .entries_in(Split::TestCv)
            .chain(self.entries_in(Split::ValCv))
            .map(|e| e.view_id.as_str())
            .collect();
        if cv_views.intersection(&train_views).next().is_some() {
            return Err(SynthError::Pipeline(
                "CV views overlap the training views".into(),
            ));
        }
        Ok(())
    }
}

/// Line-oriented, tab-separated: `path split category model view`.
/// A `# seed=N` comment carries the generation seed.
pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<(), SynthError> {
    let mut out = format!("# seed={}\n", manifest.seed);
    for e in &manifest.entries {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            e.path, e.split, e.category, e.model_id, e.view_id
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<Manifest, SynthError> {
    parse_manifest(&std::fs::read_to_string(path)?)
}

pub fn parse_manifest(text: &str) -> Result<Manifest, SynthError> {
    let mut manifest = Manifest::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(seed) = rest.trim().strip_prefix("seed=") {
                manifest.seed = seed.parse().map_err(|_| SynthError::Parse {
                    line: line_no,
                    msg: format!("bad seed `{seed}`"),
                })?;
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(SynthError::Parse {
                line: line_no,
                msg: format!("expected 5 tab-separated fields, got {}", fields.len()),
            });
        }
        let split = Split::parse(fields[1]).ok_or_else(|| SynthError::Parse {
            line: line_no,
            msg: format!("unknown split tag `{}`", fields[1]),
        })?;
        manifest.entries.push(ManifestEntry {
            path: fields[0].to_string(),
            split,
            category: fields[2].to_string(),
            model_id: fields[3].to_string(),
            view_id: fields[4].to_string(),
        });
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Manifest {
        Manifest {
            seed: 42,
            entries: vec![
                ManifestEntry {
                    path: "chair/m0/sv_000".into(),
                    split: Split::Train,
                    category: "chair".into(),
                    model_id: "m0".into(),
                    view_id: "sv_000".into(),
                },
                ManifestEntry {
                    path: "chair/m1/cv_003".into(),
                    split: Split::TestCv,
                    category: "chair".into(),
                    model_id: "m1".into(),
                    view_id: "cv_003".into(),
                },
            ],
        }
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.tsv");
        let m = sample();
        write_manifest(&m, &path).unwrap();
        assert_eq!(read_manifest(&path).unwrap(), m);
    }

    #[test]
    fn unknown_split_tag_errors_with_line() {
        let text = "a\tbogus\tchair\tm0\tsv_0\n";
        match parse_manifest(text).unwrap_err() {
            SynthError::Parse { line, msg } => {
                assert_eq!(line, 1);
                assert!(msg.contains("bogus"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_valid() {
        let m = parse_manifest("").unwrap();
        assert!(m.entries.is_empty());
    }

    #[test]
    fn protocol_check_catches_leak() {
        let mut m = sample();
        m.entries[1].model_id = "m0".into();
        assert!(m.check_protocol().is_err());
        assert!(sample().check_protocol().is_ok());
    }
}
