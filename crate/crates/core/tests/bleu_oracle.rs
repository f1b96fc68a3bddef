use vat_core::metrics::{sentence_bleu, tokenize_intl, BleuConfig};

const ORACLE: &str = include_str!("data/sentence_bleu_oracle.tsv");

fn cases() -> Vec<(&'static str, &'static str, f64, &'static str)> {
    ORACLE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 4, "bad oracle line: {l}");
            (f[0], f[1], f[2].parse().unwrap(), f[3])
        })
        .collect()
}

#[test]
fn frozen_pairs_match_reference_scores() {
    let cases = cases();
    assert_eq!(cases.len(), 200);
    for (hyp, reference, expected, _) in cases {
        let got = sentence_bleu(hyp, reference, &BleuConfig::sentence());
        assert!(
            (got - expected).abs() < 1e-5,
            "{hyp:?} vs {reference:?}: {got} != {expected}"
        );
    }
}

#[test]
fn frozen_tokenizations_match() {
    for (hyp, _, _, tokens) in cases() {
        assert_eq!(tokenize_intl(hyp).join(), tokens, "{hyp:?}");
    }
}

#[test]
fn hand_values() {
    let cfg = BleuConfig::sentence();
    assert_eq!(sentence_bleu("the cat sat", "the cat sat", &cfg), 1.0);
    assert!((sentence_bleu("the cat sat", "the cat sat down", &cfg) - 0.716531).abs() < 1e-5);
    assert_eq!(sentence_bleu("", "the cat", &cfg), 0.0);
    assert_eq!(sentence_bleu("the cat", "", &cfg), 0.0);
}
