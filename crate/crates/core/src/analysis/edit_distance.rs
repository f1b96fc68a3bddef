//! Levenshtein distance between references and their paraphrases.

use serde::Serialize;

use crate::corpus::SubsetIndex;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};

/// Unit insert/delete/substitute edit distance, two-row DP.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.len() < b.len() {
        return levenshtein(b, a);
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EditUnit {
    #[default]
    Token,
    Char,
}

impl EditUnit {
    pub fn distance(self, a: &str, b: &str) -> usize {
        match self {
            EditUnit::Token => {
                let ta: Vec<&str> = a.split_whitespace().collect();
                let tb: Vec<&str> = b.split_whitespace().collect();
                levenshtein(&ta, &tb)
            }
            EditUnit::Char => {
                let ca: Vec<char> = a.chars().collect();
                let cb: Vec<char> = b.chars().collect();
                levenshtein(&ca, &cb)
            }
        }
    }
}

/// Mean distance over all segments, the filtered-out ones and the
/// preserved ones. A group with no members has no mean.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EditDistanceReport {
    pub unit: EditUnit,
    pub all: Option<f64>,
    pub filtered_out: Option<f64>,
    pub preserved: Option<f64>,
    pub n_all: usize,
    pub n_filtered_out: usize,
    pub n_preserved: usize,
}

fn mean(values: impl Iterator<Item = usize>) -> (Option<f64>, usize) {
    let (sum, n) = values.fold((0usize, 0usize), |(s, n), v| (s + v, n + 1));
    ((n > 0).then(|| sum as f64 / n as f64), n)
}

pub fn edit_distance_report<R: AsRef<str> + Sync, P: AsRef<str> + Sync>(
    refs: &[R],
    paraphrased: &[P],
    subset: &SubsetIndex,
    unit: EditUnit,
) -> Result<EditDistanceReport> {
    if refs.len() != paraphrased.len() {
        return Err(Error::LengthMismatch {
            left: refs.len(),
            right: paraphrased.len(),
        });
    }
    if subset.parent_size() != refs.len() {
        return Err(Error::InvalidSubset(format!(
            "subset parent size {} does not match {} references",
            subset.parent_size(),
            refs.len()
        )));
    }
    let d = map_indexed(refs.len(), Execution::default(), |i| {
        unit.distance(refs[i].as_ref(), paraphrased[i].as_ref())
    });
    let (all, n_all) = mean(d.iter().copied());
    let (preserved, n_preserved) = mean(subset.kept().iter().map(|&i| d[i]));
    let (filtered_out, n_filtered_out) = mean(subset.dropped().into_iter().map(|i| d[i]));
    Ok(EditDistanceReport {
        unit,
        all,
        filtered_out,
        preserved,
        n_all,
        n_filtered_out,
        n_preserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Plain exponential recursion, memoized on (i, j).
    fn recursive(a: &[char], b: &[char]) -> usize {
        fn go(a: &[char], b: &[char], memo: &mut Vec<Vec<Option<usize>>>) -> usize {
            let (i, j) = (a.len(), b.len());
            if let Some(v) = memo[i][j] {
                return v;
            }
            let v = if i == 0 {
                j
            } else if j == 0 {
                i
            } else {
                let cost = usize::from(a[i - 1] != b[j - 1]);
                (go(&a[..i - 1], b, memo) + 1)
                    .min(go(a, &b[..j - 1], memo) + 1)
                    .min(go(&a[..i - 1], &b[..j - 1], memo) + cost)
            };
            memo[i][j] = Some(v);
            v
        }
        let mut memo = vec![vec![None; b.len() + 1]; a.len() + 1];
        go(a, b, &mut memo)
    }

    #[test]
    fn kitten_sitting() {
        assert_eq!(EditUnit::Char.distance("kitten", "sitting"), 3);
        let a: Vec<char> = "kitten".chars().collect();
        let b: Vec<char> = "sitting".chars().collect();
        assert_eq!(recursive(&a, &b), 3);
    }

    #[test]
    fn token_deletion() {
        assert_eq!(levenshtein(&["a", "b", "c"], &["a", "c"]), 1);
        assert_eq!(EditUnit::Token.distance("a b c", "a c"), 1);
    }

    #[test]
    fn identical_files_give_zero() {
        let refs = ["a b", "c d e"];
        let r = edit_distance_report(&refs, &refs, &SubsetIndex::new(2, vec![1]).unwrap(), EditUnit::Token).unwrap();
        assert_eq!((r.all, r.filtered_out, r.preserved), (Some(0.0), Some(0.0), Some(0.0)));
    }

    #[test]
    fn group_means() {
        let refs = ["a b c", "a b", "x"];
        let para = ["a b c", "b", "y z"];
        let r = edit_distance_report(&refs, &para, &SubsetIndex::new(3, vec![2]).unwrap(), EditUnit::Token).unwrap();
        assert_eq!(r.preserved, Some(2.0));
        assert_eq!(r.filtered_out, Some(0.5));
        assert_eq!(r.all, Some(1.0));
        let none_dropped = edit_distance_report(&refs, &para, &SubsetIndex::all(3).unwrap(), EditUnit::Token).unwrap();
        assert_eq!(none_dropped.filtered_out, None);
    }

    #[test]
    fn length_mismatch() {
        assert!(edit_distance_report(&["a"], &["a", "b"], &SubsetIndex::all(1).unwrap(), EditUnit::Char).is_err());
    }

    proptest! {
        #[test]
        fn dp_matches_recursion(a in "[abc]{0,7}", b in "[abc]{0,7}") {
            let ca: Vec<char> = a.chars().collect();
            let cb: Vec<char> = b.chars().collect();
            prop_assert_eq!(levenshtein(&ca, &cb), recursive(&ca, &cb));
        }

        #[test]
        fn metric_axioms(
            a in proptest::collection::vec("[xyz]", 0..=6),
            b in proptest::collection::vec("[xyz]", 0..=6),
            c in proptest::collection::vec("[xyz]", 0..=6),
        ) {
            prop_assert_eq!(levenshtein(&a, &a), 0);
            prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
            prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
        }
    }
}
