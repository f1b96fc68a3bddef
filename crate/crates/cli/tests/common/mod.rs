#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vat_core::synthetic::{signal_noise_fixture, FixtureConfig};

pub fn vat(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vat"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t.to_string());
    }
    cmd.output().expect("failed to run vat")
}

pub fn vat_ok(args: &[&str]) -> Output {
    let out = vat(args, None);
    assert!(
        out.status.success(),
        "vat {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_owned(), fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    if dir.exists() {
        walk(dir, dir, &mut out);
    }
    out
}

/// A small test set with four systems of graded quality and ratings that
/// follow that grading.
pub struct TextData {
    pub refs: PathBuf,
    pub src: PathBuf,
    pub sys_dir: PathBuf,
    pub human: PathBuf,
}

const WORDS: [&str; 12] = [
    "the", "cat", "sat", "on", "a", "mat", "dog", "ran", "to", "house", "red", "big",
];

pub fn text_data(dir: &Path, n: usize) -> TextData {
    let line = |i: usize, len: usize| -> Vec<&str> {
        (0..len).map(|t| WORDS[(i * 7 + t * 5 + t * t) % WORDS.len()]).collect()
    };
    let refs: Vec<String> = (0..n).map(|i| line(i, 4 + i % 6).join(" ")).collect();
    let src: Vec<String> = (0..n).map(|i| format!("src {i}")).collect();
    let sys_dir = dir.join("sys");
    fs::create_dir_all(&sys_dir).unwrap();
    let mut human = String::new();
    for (s, drop_every) in [(0usize, 0usize), (1, 5), (2, 3), (3, 2)] {
        let hyps: Vec<String> = refs
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.split(' ')
                    .enumerate()
                    .filter(|(t, _)| drop_every == 0 || (t + i) % drop_every != 0)
                    .map(|(_, w)| w)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        fs::write(sys_dir.join(format!("s{s}.txt")), hyps.join("\n") + "\n").unwrap();
        human.push_str(&format!("s{s}\t{}\n", 1.0 - s as f64 * 0.3 + (s % 2) as f64 * 0.05));
    }
    let refs_path = dir.join("ref.txt");
    let src_path = dir.join("src.txt");
    let human_path = dir.join("human.tsv");
    fs::write(&refs_path, refs.join("\n") + "\n").unwrap();
    fs::write(&src_path, src.join("\n") + "\n").unwrap();
    fs::write(&human_path, human).unwrap();
    TextData {
        refs: refs_path,
        src: src_path,
        sys_dir,
        human: human_path,
    }
}

/// Writes a signal/noise fixture as a score file and a ratings file.
pub fn fixture_files(dir: &Path, n_systems: usize, seed: u64) -> (PathBuf, PathBuf) {
    let (matrix, human) = signal_noise_fixture(&FixtureConfig::with_systems(n_systems), seed).unwrap();
    let scores = dir.join("fixture.tsv");
    let ratings = dir.join("fixture_human.tsv");
    fs::write(&scores, matrix.to_tsv()).unwrap();
    let text: String = human.entries().iter().map(|(n, h)| format!("{n}\t{h}\n")).collect();
    fs::write(&ratings, text).unwrap();
    (scores, ratings)
}
