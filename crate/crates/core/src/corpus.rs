//! Data model and file formats: test sets, system outputs, score matrices,
//! human ratings, subset indices and POS-tagged corpora.
//!
//! Segment files are UTF-8 with one segment per line. No Unicode
//! normalization is applied anywhere on load.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Reads a segment file: one segment per line, trailing newline tolerated.
pub fn read_segments(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
        path: path.to_path_buf(),
    })?;
    Ok(split_lines(&text))
}

fn split_lines(text: &str) -> Vec<String> {
    if text.is_empty() {
        return Vec::new();
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    body.split('\n').map(str::to_owned).collect()
}

/// Renders segments back to the on-disk layout (LF after every line).
pub fn render_segments<S: AsRef<str>>(lines: &[S]) -> String {
    let mut out = String::with_capacity(lines.iter().map(|l| l.as_ref().len() + 1).sum());
    for line in lines {
        out.push_str(line.as_ref());
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 {
        path: path.to_path_buf(),
    })
}

/// Formats a score with the fixed six-decimal precision used by every TSV
/// this crate writes.
pub fn format_score(value: f64) -> String {
    let s = format!("{value:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

/// Aligned references (and optionally sources) for one translation direction.
#[derive(Clone, Debug, PartialEq)]
pub struct TestSet {
    direction: Option<String>,
    sources: Option<Vec<String>>,
    references: Vec<String>,
    ids: Vec<usize>,
}

impl TestSet {
    pub fn new(references: Vec<String>, sources: Option<Vec<String>>) -> Result<Self> {
        if references.is_empty() {
            return Err(Error::EmptyTestSet { path: PathBuf::new() });
        }
        if let Some(src) = &sources {
            if src.len() != references.len() {
                return Err(Error::SourceReferenceMismatch {
                    refs: references.len(),
                    srcs: src.len(),
                });
            }
        }
        let has_break = |s: &String| s.contains(['\n', '\r']);
        if references.iter().any(has_break) || sources.iter().flatten().any(has_break) {
            return Err(Error::Format("segment contains a line break".into()));
        }
        let ids = (0..references.len()).collect();
        Ok(TestSet {
            direction: None,
            sources,
            references,
            ids,
        })
    }

    pub fn with_direction(mut self, direction: impl Into<String>) -> Self {
        self.direction = Some(direction.into());
        self
    }

    pub fn direction(&self) -> Option<&str> {
        self.direction.as_deref()
    }

    pub fn references(&self) -> &[String] {
        &self.references
    }

    pub fn sources(&self) -> Option<&[String]> {
        self.sources.as_deref()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.references.len()
    }

    pub fn is_empty(&self) -> bool {
        self.references.is_empty()
    }
}

/// Loads a test set from a reference file and an optional source file.
pub fn load_testset(ref_path: &Path, src_path: Option<&Path>) -> Result<TestSet> {
    let references = read_segments(ref_path)?;
    if references.is_empty() {
        return Err(Error::EmptyTestSet {
            path: ref_path.to_path_buf(),
        });
    }
    let sources = src_path.map(read_segments).transpose()?;
    TestSet::new(references, sources)
}

/// Outputs of `k` systems, each line-aligned with a [`TestSet`].
///
/// Columns are ordered lexicographically by system name.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisSet {
    system_names: Vec<String>,
    columns: Vec<Vec<String>>,
}

impl HypothesisSet {
    /// Builds a set from `(name, lines)` pairs in any order; every column
    /// must have `n_segments` lines.
    pub fn from_systems(systems: Vec<(String, Vec<String>)>, n_segments: usize) -> Result<Self> {
        if systems.is_empty() {
            return Err(Error::NoSystems);
        }
        let mut by_name = BTreeMap::new();
        for (name, lines) in systems {
            if name.is_empty() {
                return Err(Error::Format("empty system name".into()));
            }
            if lines.len() != n_segments {
                return Err(Error::SystemLineCount {
                    system: name,
                    expected: n_segments,
                    actual: lines.len(),
                });
            }
            if by_name.contains_key(&name) {
                return Err(Error::DuplicateSystem(name));
            }
            by_name.insert(name, lines);
        }
        let (system_names, columns) = by_name.into_iter().unzip();
        Ok(HypothesisSet { system_names, columns })
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn n_systems(&self) -> usize {
        self.system_names.len()
    }

    pub fn n_segments(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Hypothesis of system `system` for segment `segment`.
    pub fn get(&self, segment: usize, system: usize) -> &str {
        &self.columns[system][segment]
    }

    pub fn column(&self, system: usize) -> &[String] {
        &self.columns[system]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[String]> {
        self.system_names
            .iter()
            .position(|n| n == name)
            .map(|j| self.columns[j].as_slice())
    }
}

/// Loads system outputs from explicit files; the system name is the file stem.
pub fn load_hypotheses(files: &[PathBuf], testset: &TestSet) -> Result<HypothesisSet> {
    let mut systems = Vec::with_capacity(files.len());
    for path in files {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::InvalidSystemName(path.clone()))?
            .to_owned();
        systems.push((name, read_segments(path)?));
    }
    HypothesisSet::from_systems(systems, testset.len())
}

/// Loads every regular, non-hidden file in `dir` as one system output.
pub fn load_hypotheses_dir(dir: &Path, testset: &TestSet) -> Result<HypothesisSet> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    load_hypotheses(&files, testset)
}

/// An N×k table of per-segment metric scores.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    metric_name: String,
    system_names: Vec<String>,
    segment_ids: Vec<usize>,
    // row-major, N * k
    scores: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(
        metric_name: impl Into<String>,
        system_names: Vec<String>,
        segment_ids: Vec<usize>,
        scores: Vec<f64>,
    ) -> Result<Self> {
        let k = system_names.len();
        if k == 0 {
            return Err(Error::NoSystems);
        }
        let mut seen = HashSet::new();
        for name in &system_names {
            if name.is_empty() {
                return Err(Error::Format("empty system name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateSystem(name.clone()));
            }
        }
        if scores.len() != segment_ids.len() * k {
            return Err(Error::Format(format!(
                "{} scores for {} segments x {} systems",
                scores.len(),
                segment_ids.len(),
                k
            )));
        }
        if segment_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("segment ids must be strictly increasing".into()));
        }
        if let Some(pos) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::Parse {
                row: pos / k + 1,
                col: pos % k + 1,
                message: "non-finite score".into(),
            });
        }
        Ok(ScoreMatrix {
            metric_name: metric_name.into(),
            system_names,
            segment_ids,
            scores,
        })
    }

    /// Builds a matrix from rows with ids `0..rows.len()`.
    pub fn from_rows(metric_name: impl Into<String>, system_names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let k = system_names.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::Format(format!(
                "row {} has {} values, expected {}",
                bad + 1,
                rows[bad].len(),
                k
            )));
        }
        let scores = rows.iter().flatten().copied().collect();
        ScoreMatrix::new(metric_name, system_names, (0..rows.len()).collect(), scores)
    }

    pub fn metric_name(&self) -> &str {
        &self.metric_name
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn segment_ids(&self) -> &[usize] {
        &self.segment_ids
    }

    pub fn n_segments(&self) -> usize {
        self.segment_ids.len()
    }

    pub fn n_systems(&self) -> usize {
        self.system_names.len()
    }

    pub fn get(&self, segment: usize, system: usize) -> f64 {
        self.scores[segment * self.n_systems() + system]
    }

    pub fn row(&self, segment: usize) -> &[f64] {
        let k = self.n_systems();
        &self.scores[segment * k..(segment + 1) * k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.scores.chunks_exact(self.n_systems())
    }

    /// Row position of a segment id.
    pub fn position_of(&self, id: usize) -> Option<usize> {
        self.segment_ids.binary_search(&id).ok()
    }

    /// Parent size implied by the ids: last id + 1.
    pub fn parent_size(&self) -> usize {
        self.segment_ids.last().map_or(0, |&id| id + 1)
    }

    /// Restricts the matrix to the named systems, in the order given.
    pub fn select_systems(&self, names: &[String]) -> Result<ScoreMatrix> {
        let cols = names
            .iter()
            .map(|name| {
                self.system_names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown system `{name}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let scores = self.rows().flat_map(|row| cols.iter().map(move |&j| row[j])).collect();
        ScoreMatrix::new(
            self.metric_name.clone(),
            names.to_vec(),
            self.segment_ids.clone(),
            scores,
        )
    }

    /// Renders the TSV form. A `#metric=` comment precedes the header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#metric={}", self.metric_name);
        out.push_str("segment_id");
        for name in &self.system_names {
            out.push('\t');
            out.push_str(name);
        }
        out.push('\n');
        for (id, row) in self.segment_ids.iter().zip(self.rows()) {
            let _ = write!(out, "{id}");
            for &v in row {
                out.push('\t');
                out.push_str(&format_score(v));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the TSV form. Leading `#` lines are comments; `#metric=NAME`
    /// sets the metric name, otherwise `default_metric` is used.
    pub fn from_tsv(text: &str, default_metric: &str) -> Result<Self> {
        let mut metric = default_metric.to_owned();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            let Some(comment) = line.strip_prefix('#') else {
                break;
            };
            if let Some(name) = comment.trim().strip_prefix("metric=") {
                metric = name.trim().to_owned();
            }
            lines.next();
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header line".into()))?;
        let mut fields = header.split('\t');
        if fields.next() != Some("segment_id") {
            return Err(Error::Format("header must start with `segment_id`".into()));
        }
        let system_names: Vec<String> = fields.map(str::to_owned).collect();
        let k = system_names.len();
        let mut ids = Vec::new();
        let mut scores = Vec::new();
        for (r, line) in lines.enumerate() {
            let row = r + 1;
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split('\t').collect();
            if cells.len() != k + 1 {
                return Err(Error::Parse {
                    row,
                    col: cells.len().min(k + 1),
                    message: format!("ragged row: {} cells, expected {}", cells.len(), k + 1),
                });
            }
            let id = cells[0].trim().parse::<usize>().map_err(|_| Error::Parse {
                row,
                col: 0,
                message: format!("invalid segment id `{}`", cells[0]),
            })?;
            ids.push(id);
            for (c, cell) in cells[1..].iter().enumerate() {
                let value = cell.trim().parse::<f64>().map_err(|_| Error::Parse {
                    row,
                    col: c + 1,
                    message: format!("non-numeric cell `{cell}`"),
                })?;
                if !value.is_finite() {
                    return Err(Error::Parse {
                        row,
                        col: c + 1,
                        message: format!("non-finite cell `{cell}`"),
                    });
                }
                scores.push(value);
            }
        }
        ScoreMatrix::new(metric, system_names, ids, scores)
    }
}

/// Loads a score matrix; the metric name defaults to the file stem.
pub fn load_score_matrix(path: &Path) -> Result<ScoreMatrix> {
    let text = read_text(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scores");
    ScoreMatrix::from_tsv(&text, stem)
}

pub fn save_score_matrix(matrix: &ScoreMatrix, path: &Path) -> Result<()> {
    write_file(path, &matrix.to_tsv())
}

/// System-level human ratings, one per system.
#[derive(Clone, Debug, PartialEq)]
pub struct HumanScores {
    entries: Vec<(String, f64)>,
}

impl HumanScores {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (name, rating) in &entries {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateSystem(name.clone()));
            }
            if !rating.is_finite() {
                return Err(Error::NonFinite(name.clone()));
            }
        }
        Ok(HumanScores { entries })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (name, rating) = line.split_once('\t').ok_or_else(|| Error::Parse {
                row: i + 1,
                col: 1,
                message: "expected `system<TAB>rating`".into(),
            })?;
            let value = rating.trim().parse::<f64>().map_err(|_| Error::Parse {
                row: i + 1,
                col: 2,
                message: format!("non-numeric rating `{rating}`"),
            })?;
            entries.push((name.to_owned(), value));
        }
        HumanScores::new(entries)
    }

    pub fn get(&self, system: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == system).map(|&(_, r)| r)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_human_scores(path: &Path) -> Result<HumanScores> {
    HumanScores::parse(&read_text(path)?)
}

/// The preserved part of a test set: sorted, 0-based segment ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetIndex {
    parent_size: usize,
    kept: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(parent_size: usize, kept: Vec<usize>) -> Result<Self> {
        if kept.is_empty() {
            return Err(Error::InvalidSubset("no segments kept".into()));
        }
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset("ids must be strictly increasing".into()));
        }
        if let Some(&id) = kept.iter().find(|&&id| id >= parent_size) {
            return Err(Error::IdOutOfRange { id, parent_size });
        }
        Ok(SubsetIndex { parent_size, kept })
    }

    /// The identity subset over `parent_size` segments.
    pub fn all(parent_size: usize) -> Result<Self> {
        SubsetIndex::new(parent_size, (0..parent_size).collect())
    }

    pub fn parent_size(&self) -> usize {
        self.parent_size
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.kept.binary_search(&id).is_ok()
    }

    /// Ids of the parent that are not kept.
    pub fn dropped(&self) -> Vec<usize> {
        (0..self.parent_size).filter(|&i| !self.contains(i)).collect()
    }

    pub fn is_subset_of(&self, other: &SubsetIndex) -> bool {
        self.kept.iter().all(|&id| other.contains(id))
    }

    /// Renders the index file; `extra` lines are emitted as `#key=value`
    /// comments after the mandatory `#parent_size` line.
    pub fn to_file_string(&self, extra: &[(&str, String)]) -> String {
        let mut out = format!("#parent_size={}\n", self.parent_size);
        for (key, value) in extra {
            let _ = writeln!(out, "#{key}={value}");
        }
        for id in &self.kept {
            let _ = writeln!(out, "{id}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let first = lines.next().unwrap_or_default();
        let parent_size = first
            .strip_prefix("#parent_size=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Format("subset index must start with `#parent_size=N`".into()))?;
        let mut kept = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            kept.push(line.parse::<usize>().map_err(|_| Error::Parse {
                row: i + 2,
                col: 1,
                message: format!("invalid segment id `{line}`"),
            })?);
        }
        SubsetIndex::new(parent_size, kept)
    }
}

pub fn load_subset(path: &Path) -> Result<SubsetIndex> {
    SubsetIndex::parse(&read_text(path)?)
}

pub fn save_subset(subset: &SubsetIndex, path: &Path, extra: &[(&str, String)]) -> Result<()> {
    write_file(path, &subset.to_file_string(extra))
}

/// Sentences tagged by an external POS tagger.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedCorpus {
    sentences: Vec<Vec<(String, String)>>,
}

impl TaggedCorpus {
    pub fn new(sentences: Vec<Vec<(String, String)>>) -> Result<Self> {
        if sentences.iter().flatten().any(|(_, tag)| tag.is_empty()) {
            return Err(Error::Format("empty POS tag".into()));
        }
        Ok(TaggedCorpus { sentences })
    }

    /// Parses `token/TAG` items separated by single spaces, one sentence per
    /// line. The tag is everything after the last `/`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sentences = Vec::new();
        for (i, line) in split_lines(text).iter().enumerate() {
            let mut sentence = Vec::new();
            for (j, item) in line.split(' ').filter(|s| !s.is_empty()).enumerate() {
                let (token, tag) = item.rsplit_once('/').ok_or_else(|| Error::Parse {
                    row: i + 1,
                    col: j + 1,
                    message: format!("expected token/TAG, got `{item}`"),
                })?;
                if tag.is_empty() {
                    return Err(Error::Parse {
                        row: i + 1,
                        col: j + 1,
                        message: "empty POS tag".into(),
                    });
                }
                sentence.push((token.to_owned(), tag.to_owned()));
            }
            sentences.push(sentence);
        }
        Ok(TaggedCorpus { sentences })
    }

    pub fn sentences(&self) -> &[Vec<(String, String)>] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

pub fn load_tagged_corpus(path: &Path) -> Result<TaggedCorpus> {
    TaggedCorpus::parse(&read_text(path)?)
}

/// Picks the kept lines out of `lines`, preserving their relative order.
pub fn select_lines<'a, S: AsRef<str>>(lines: &'a [S], subset: &SubsetIndex) -> Result<Vec<&'a str>> {
    if subset.parent_size() != lines.len() {
        return Err(Error::InvalidSubset(format!(
            "subset parent size {} does not match {} lines",
            subset.parent_size(),
            lines.len()
        )));
    }
    Ok(subset.kept().iter().map(|&i| lines[i].as_ref()).collect())
}

/// File names used by [`materialize_subset`].
pub const REF_FILE: &str = "ref.txt";
pub const SRC_FILE: &str = "src.txt";
pub const SYSTEMS_DIR: &str = "systems";
pub const INDEX_FILE: &str = "subset.idx";

/// Writes the filtered reference, source and system files plus the index
/// file into `out_dir`. Returns the written paths. On failure, files written
/// so far are removed.
pub fn materialize_subset(
    testset: &TestSet,
    hyps: Option<&HypothesisSet>,
    subset: &SubsetIndex,
    out_dir: &Path,
    index_comments: &[(&str, String)],
) -> Result<Vec<PathBuf>> {
    if let Some(&id) = subset.kept().iter().find(|&&id| id >= testset.len()) {
        return Err(Error::IdOutOfRange {
            id,
            parent_size: testset.len(),
        });
    }
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    files.push((
        out_dir.join(REF_FILE),
        render_segments(&select_lines(testset.references(), subset)?),
    ));
    if let Some(src) = testset.sources() {
        files.push((out_dir.join(SRC_FILE), render_segments(&select_lines(src, subset)?)));
    }
    if let Some(hyps) = hyps {
        if hyps.n_segments() != testset.len() {
            return Err(Error::SystemLineCount {
                system: hyps.system_names()[0].clone(),
                expected: testset.len(),
                actual: hyps.n_segments(),
            });
        }
        for (j, name) in hyps.system_names().iter().enumerate() {
            files.push((
                out_dir.join(SYSTEMS_DIR).join(format!("{name}.txt")),
                render_segments(&select_lines(hyps.column(j), subset)?),
            ));
        }
    }
    files.push((out_dir.join(INDEX_FILE), subset.to_file_string(index_comments)));

    let mut written = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let res = path
            .parent()
            .map_or(Ok(()), |dir| fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)))
            .and_then(|()| write_file(&path, &contents));
        if let Err(e) = res {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(e);
        }
        written.push(path);
    }
    Ok(written)
}
