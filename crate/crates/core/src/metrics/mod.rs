//! Lexical metrics: international tokenization and smoothed BLEU.

pub mod bleu;
pub mod tokenize;

pub use bleu::{
    bleu_stats, corpus_bleu, corpus_stats, score_matrix_bleu, score_matrix_bleu_with, sentence_bleu,
    sentence_bleu_tokens, BleuConfig, BleuStats,
};
pub use tokenize::{tokenize_intl, TokenizedSegment};
