//! How the make-up of a test set shifts after filtering, by sentence
//! length, word frequency and part of speech.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Serialize;

use crate::corpus::{SubsetIndex, TaggedCorpus, TestSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Length,
    Frequency,
    Pos,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryShare {
    pub label: String,
    pub original: f64,
    pub preserved: f64,
    /// `preserved - original`, as a fraction.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstitutionReport {
    pub scheme: Scheme,
    pub unit: &'static str,
    pub note: &'static str,
    pub categories: Vec<CategoryShare>,
}

impl ConstitutionReport {
    pub fn category(&self, label: &str) -> Option<&CategoryShare> {
        self.categories.iter().find(|c| c.label == label)
    }
}

fn check_subset(subset: &SubsetIndex, n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptyGroup("preserved subset"));
    }
    if subset.parent_size() != n {
        return Err(Error::InvalidSubset(format!(
            "subset parent size {} does not match {} sentences",
            subset.parent_size(),
            n
        )));
    }
    Ok(())
}

/// Normalizes per-category mass on the full set and on the subset.
fn shares(labels: &[String], original: &[f64], preserved: &[f64]) -> Result<Vec<CategoryShare>> {
    let total_o: f64 = original.iter().sum();
    let total_p: f64 = preserved.iter().sum();
    if total_o == 0.0 || total_p == 0.0 {
        return Err(Error::EmptyGroup("no tokens to classify"));
    }
    Ok(labels
        .iter()
        .zip(original.iter().zip(preserved))
        .map(|(label, (&o, &p))| {
            let (o, p) = (o / total_o, p / total_p);
            CategoryShare {
                label: label.clone(),
                original: o,
                preserved: p,
                delta: p - o,
            }
        })
        .collect())
}

pub const LENGTH_LABELS: [&str; 3] = ["Short", "Medium", "Long"];

/// Length tertile (0 = Short, 1 = Medium, 2 = Long) of every sentence.
///
/// Sentences are ranked by whitespace token count, ties by id; rank `r` of
/// `n` falls in tertile `floor(3r / n)`. Only the full set decides this.
pub fn length_tertiles(references: &[String]) -> Vec<usize> {
    let n = references.len();
    let mut order: Vec<(usize, usize)> = references
        .iter()
        .enumerate()
        .map(|(id, s)| (s.split_whitespace().count(), id))
        .collect();
    order.sort_unstable();
    let mut tertile = vec![0; n];
    for (rank, &(_, id)) in order.iter().enumerate() {
        tertile[id] = 3 * rank / n;
    }
    tertile
}

pub fn length_constitution(testset: &TestSet, subset: &SubsetIndex) -> Result<ConstitutionReport> {
    check_subset(subset, testset.len())?;
    let tertile = length_tertiles(testset.references());
    let mut original = [0.0; 3];
    let mut preserved = [0.0; 3];
    for (id, &t) in tertile.iter().enumerate() {
        original[t] += 1.0;
        if subset.contains(id) {
            preserved[t] += 1.0;
        }
    }
    let labels: Vec<String> = LENGTH_LABELS.iter().map(|s| s.to_string()).collect();
    Ok(ConstitutionReport {
        scheme: Scheme::Length,
        unit: "sentences",
        note: "tertiles by whitespace token count on the full set, ties by id",
        categories: shares(&labels, &original, &preserved)?,
    })
}

/// Word counts from a training corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn new(counts: HashMap<String, u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyGroup("frequency table"));
        }
        if let Some((word, _)) = counts.iter().find(|(_, &c)| c == 0) {
            return Err(Error::Format(format!("non-positive count for `{word}`")));
        }
        let total = counts.values().sum();
        Ok(FrequencyTable { counts, total })
    }

    /// Parses `word<TAB>count` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut counts = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (word, count) = line.rsplit_once('\t').ok_or_else(|| Error::Parse {
                row: i + 1,
                col: 1,
                message: "expected `word<TAB>count`".into(),
            })?;
            let count = count.trim().parse::<u64>().map_err(|_| Error::Parse {
                row: i + 1,
                col: 2,
                message: format!("invalid count `{count}`"),
            })?;
            if counts.insert(word.to_owned(), count).is_some() {
                return Err(Error::Format(format!("duplicate word `{word}`")));
            }
        }
        FrequencyTable::new(counts)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        FrequencyTable::parse(&text)
    }

    /// Count of `word`; unseen words count zero.
    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocabulary_size(&self) -> usize {
        self.counts.len()
    }

    /// Nearest-rank percentile of the per-word count distribution.
    pub fn count_percentile(&self, percent: f64) -> u64 {
        let mut counts: Vec<u64> = self.counts.values().copied().collect();
        counts.sort_unstable();
        let rank = ((percent / 100.0) * counts.len() as f64).ceil() as usize;
        counts[rank.clamp(1, counts.len()) - 1]
    }
}

pub const FREQUENCY_LABELS: [&str; 3] = ["Rare", "Middle", "Frequent"];

/// Frequency band thresholds: Rare up to the 20th percentile count,
/// Middle up to the 60th, Frequent above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrequencyBands {
    pub rare_max: u64,
    pub middle_max: u64,
}

impl FrequencyBands {
    pub fn from_table(table: &FrequencyTable) -> Self {
        FrequencyBands {
            rare_max: table.count_percentile(20.0),
            middle_max: table.count_percentile(60.0),
        }
    }

    pub fn classify(&self, count: u64) -> usize {
        if count <= self.rare_max {
            0
        } else if count <= self.middle_max {
            1
        } else {
            2
        }
    }
}

pub fn frequency_constitution(
    testset: &TestSet,
    subset: &SubsetIndex,
    table: &FrequencyTable,
) -> Result<ConstitutionReport> {
    check_subset(subset, testset.len())?;
    let bands = FrequencyBands::from_table(table);
    let mut original = [0.0; 3];
    let mut preserved = [0.0; 3];
    for (id, sentence) in testset.references().iter().enumerate() {
        let keep = subset.contains(id);
        for token in sentence.split_whitespace() {
            let band = bands.classify(table.count(token));
            original[band] += 1.0;
            if keep {
                preserved[band] += 1.0;
            }
        }
    }
    let labels: Vec<String> = FREQUENCY_LABELS.iter().map(|s| s.to_string()).collect();
    Ok(ConstitutionReport {
        scheme: Scheme::Frequency,
        unit: "tokens",
        note: "percentiles over the vocabulary count distribution (type-weighted); unseen words are Rare",
        categories: shares(&labels, &original, &preserved)?,
    })
}

/// Per-tag token shares, sorted by `|delta|` descending, then tag.
pub fn pos_constitution(tagged: &TaggedCorpus, subset: &SubsetIndex) -> Result<ConstitutionReport> {
    check_subset(subset, tagged.len())?;
    let mut counts: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for (id, sentence) in tagged.sentences().iter().enumerate() {
        let keep = subset.contains(id);
        for (_, tag) in sentence {
            let entry = counts.entry(tag.as_str()).or_default();
            entry.0 += 1.0;
            if keep {
                entry.1 += 1.0;
            }
        }
    }
    let labels: Vec<String> = counts.keys().map(|s| s.to_string()).collect();
    let original: Vec<f64> = counts.values().map(|c| c.0).collect();
    let preserved: Vec<f64> = counts.values().map(|c| c.1).collect();
    let mut categories = shares(&labels, &original, &preserved)?;
    categories.sort_by(|a, b| {
        b.delta
            .abs()
            .total_cmp(&a.delta.abs())
            .then_with(|| a.label.cmp(&b.label))
    });
    Ok(ConstitutionReport {
        scheme: Scheme::Pos,
        unit: "tokens",
        note: "tags taken verbatim from the tagged input",
        categories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn testset(lines: &[&str]) -> TestSet {
        TestSet::new(lines.iter().map(|s| s.to_string()).collect(), None).unwrap()
    }

    fn words(n: usize) -> String {
        vec!["w"; n].join(" ")
    }

    #[test]
    fn long_tertile_preserved() {
        let lines: Vec<String> = (1..=9).map(words).collect();
        let ts = TestSet::new(lines, None).unwrap();
        let r = length_constitution(&ts, &SubsetIndex::new(9, vec![6, 7, 8]).unwrap()).unwrap();
        let long = r.category("Long").unwrap();
        assert_eq!(long.preserved, 1.0);
        assert!((long.delta - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.category("Short").unwrap().delta + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn three_sentences_one_per_tertile() {
        let ts = testset(&["a b", "a", "a b c"]);
        assert_eq!(length_tertiles(ts.references()), vec![1, 0, 2]);
    }

    #[test]
    fn length_ties_broken_by_id() {
        let ts = testset(&["a", "a", "a", "a", "a", "a"]);
        assert_eq!(length_tertiles(ts.references()), vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn identity_subset_has_zero_deltas() {
        let ts = testset(&["a b", "c", "d e f", "g h i j"]);
        let all = SubsetIndex::all(4).unwrap();
        let r = length_constitution(&ts, &all).unwrap();
        assert!(r.categories.iter().all(|c| c.delta == 0.0));
    }

    fn table() -> FrequencyTable {
        FrequencyTable::parse("a\t1\nb\t10\nc\t100\nd\t1000\ne\t10000\n").unwrap()
    }

    #[test]
    fn frequency_bands_on_five_words() {
        let t = table();
        let bands = FrequencyBands::from_table(&t);
        assert_eq!(
            bands,
            FrequencyBands {
                rare_max: 1,
                middle_max: 100
            }
        );
        let classes: Vec<usize> = ["a", "b", "c", "d", "e", "zzz"]
            .iter()
            .map(|w| bands.classify(t.count(w)))
            .collect();
        assert_eq!(classes, vec![0, 1, 1, 2, 2, 0]);
        let ts = testset(&["a e"]);
        let r = frequency_constitution(&ts, &SubsetIndex::all(1).unwrap(), &t).unwrap();
        assert_eq!(r.category("Rare").unwrap().original, 0.5);
        assert_eq!(r.category("Frequent").unwrap().original, 0.5);
    }

    #[test]
    fn unseen_words_are_rare() {
        let ts = testset(&["x y", "z"]);
        let r = frequency_constitution(&ts, &SubsetIndex::new(2, vec![1]).unwrap(), &table()).unwrap();
        let rare = r.category("Rare").unwrap();
        assert_eq!((rare.original, rare.preserved, rare.delta), (1.0, 1.0, 0.0));
    }

    #[test]
    fn empty_table_rejected() {
        assert!(FrequencyTable::parse("").is_err());
        assert!(FrequencyTable::parse("a\t0\n").is_err());
    }

    #[test]
    fn pos_shares() {
        let tagged = TaggedCorpus::parse("Rome/NNP falls/VBZ\nit/PRP rains/VBZ\n").unwrap();
        let r = pos_constitution(&tagged, &SubsetIndex::new(2, vec![0]).unwrap()).unwrap();
        let nnp = r.category("NNP").unwrap();
        assert_eq!((nnp.original, nnp.preserved), (0.25, 0.5));
        assert!((nnp.delta - 0.25).abs() < 1e-12);
        // VBZ is unchanged, so it sorts last
        assert_eq!(r.categories.last().unwrap().label, "VBZ");
        let all = pos_constitution(&tagged, &SubsetIndex::all(2).unwrap()).unwrap();
        assert!(all.categories.iter().all(|c| c.delta == 0.0));
    }

    #[test]
    fn unknown_tags_pass_through() {
        let tagged = TaggedCorpus::parse("x/WEIRD-TAG$ y/NN\n").unwrap();
        let r = pos_constitution(&tagged, &SubsetIndex::all(1).unwrap()).unwrap();
        assert!(r.category("WEIRD-TAG$").is_some());
    }

    #[test]
    fn misaligned_subset_rejected() {
        let tagged = TaggedCorpus::parse("x/NN\n").unwrap();
        assert!(pos_constitution(&tagged, &SubsetIndex::all(2).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn fractions_sum_to_one_and_tertiles_ignore_subset(
            lengths in proptest::collection::vec(1usize..15, 1..40),
            mask in proptest::collection::vec(any::<bool>(), 40),
        ) {
            let n = lengths.len();
            let ts = TestSet::new(lengths.iter().map(|&l| words(l)).collect(), None).unwrap();
            let mut kept: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
            if kept.is_empty() {
                kept.push(0);
            }
            let subset = SubsetIndex::new(n, kept).unwrap();
            let r = length_constitution(&ts, &subset).unwrap();
            let o: f64 = r.categories.iter().map(|c| c.original).sum();
            let p: f64 = r.categories.iter().map(|c| c.preserved).sum();
            prop_assert!((o - 1.0).abs() < 1e-9 && (p - 1.0).abs() < 1e-9);

            let tertile = length_tertiles(ts.references());
            let mut counts = [0.0; 3];
            for &id in subset.kept() {
                counts[tertile[id]] += 1.0;
            }
            for (c, count) in r.categories.iter().zip(counts) {
                prop_assert!((c.preserved - count / subset.len() as f64).abs() < 1e-12);
            }
        }
    }
}
