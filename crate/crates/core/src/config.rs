//! Pipeline configuration: a TOML file whose relative paths resolve against
//! the file's own directory, plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::SharedWordRule;
use crate::error::{Error, Result};
use crate::ingest::CueLists;
use crate::localization::DEFAULT_NON_SOURCE_SUFFIXES;
use crate::segment::SegmenterConfig;
use crate::vsm::PcaTarget;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub reviews: Option<PathBuf>,
    pub commits: Option<PathBuf>,
    pub source_tree: Option<PathBuf>,
    pub constraints: Option<PathBuf>,
    pub ground_truth: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub acronyms: Option<PathBuf>,
    /// An Android `strings.xml`; its words are never treated as stopwords.
    pub strings_resource: Option<PathBuf>,
    pub verbs: Option<PathBuf>,
}

/// What a ranking is computed for.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalizeUnit {
    #[default]
    Atomic,
    Review,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    /// Share of variance PCA keeps. Ignored when `pca_components` is set.
    pub pca_variance: f64,
    pub pca_components: Option<usize>,
    /// Fixed cluster count; inferred from bigrams when absent.
    pub k: Option<usize>,
    pub seed: u64,
    pub max_iter: usize,
    pub restarts: usize,
    pub top_k: Vec<usize>,
    pub non_source_suffixes: Vec<String>,
    pub copulative: Vec<String>,
    pub adversative: Vec<String>,
    pub fallback_classifier: bool,
    pub cues: CueLists,
    pub shared_word_rule: SharedWordRule,
    pub localize_unit: LocalizeUnit,
}

impl Default for Parameters {
    fn default() -> Self {
        let seg = SegmenterConfig::default();
        Parameters {
            pca_variance: 0.95,
            pca_components: None,
            k: None,
            seed: 42,
            max_iter: 100,
            restarts: 10,
            top_k: vec![1, 3, 5],
            non_source_suffixes: DEFAULT_NON_SOURCE_SUFFIXES.iter().map(|s| s.to_string()).collect(),
            copulative: seg.copulative,
            adversative: seg.adversative,
            fallback_classifier: false,
            cues: CueLists::default(),
            shared_word_rule: SharedWordRule::default(),
            localize_unit: LocalizeUnit::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    pub paths: Paths,
    pub parameters: Parameters,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            output_dir: PathBuf::from("out"),
            paths: Paths::default(),
            parameters: Parameters::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub top_k: Option<Vec<usize>>,
    pub pca_variance: Option<f64>,
    pub fallback_classifier: Option<bool>,
    pub output_dir: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_relative_to(base);
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_relative_to(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        let p = &mut self.paths;
        for path in [
            &mut p.reviews,
            &mut p.commits,
            &mut p.source_tree,
            &mut p.constraints,
            &mut p.ground_truth,
            &mut p.lemmas,
            &mut p.stopwords,
            &mut p.acronyms,
            &mut p.strings_resource,
            &mut p.verbs,
        ].into_iter().flatten() {
            fix(path);
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        let p = &mut self.parameters;
        if let Some(s) = o.seed {
            p.seed = s;
        }
        if let Some(k) = o.k {
            p.k = Some(k);
        }
        if let Some(t) = &o.top_k {
            p.top_k = t.clone();
        }
        if let Some(v) = o.pca_variance {
            p.pca_variance = v;
            p.pca_components = None;
        }
        if let Some(f) = o.fallback_classifier {
            p.fallback_classifier = f;
        }
        if let Some(d) = &o.output_dir {
            self.output_dir = d.clone();
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.parameters;
        if !(p.pca_variance > 0.0 && p.pca_variance <= 1.0) {
            return Err(Error::Config(format!("pca_variance must be in (0, 1], got {}", p.pca_variance)));
        }
        if p.pca_components == Some(0) {
            return Err(Error::Config("pca_components must be at least 1".into()));
        }
        if p.k.is_some_and(|k| k < 1) {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if p.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if p.top_k.is_empty() || p.top_k.contains(&0) {
            return Err(Error::Config("top_k needs one or more values, each at least 1".into()));
        }
        Ok(())
    }

    pub fn pca_target(&self) -> PcaTarget {
        match self.parameters.pca_components {
            Some(r) => PcaTarget::Components(r),
            None => PcaTarget::Variance(self.parameters.pca_variance),
        }
    }

    /// A required path, or a config error naming the missing key.
    pub fn require<'a>(&self, path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
        let p = path
            .as_deref()
            .ok_or_else(|| Error::Config(format!("paths.{key} is not set")))?;
        if !p.exists() {
            return Err(Error::Config(format!("paths.{key} = {} does not exist", p.display())));
        }
        Ok(p)
    }
}
