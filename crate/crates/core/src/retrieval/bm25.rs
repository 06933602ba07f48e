//! Okapi BM25 over pre-tokenized documents.
//!
//! IDF uses the non-negative form `ln(1 + (N - df + 0.5) / (df + 0.5))`, so no
//! document ever receives a negative score. Each distinct query term
//! contributes once, in order of first appearance.

use std::collections::HashMap;

use super::{CorpusScorer, Similarity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    /// Term-frequency saturation.
    pub k1: f64,
    /// Length normalization strength.
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

#[derive(Debug, Clone)]
pub struct Bm25Index {
    params: Bm25Params,
    term_freqs: Vec<HashMap<String, u32>>,
    doc_lens: Vec<usize>,
    avg_len: f64,
    doc_freq: HashMap<String, usize>,
}

impl Bm25Index {
    pub fn new(corpus: &[Vec<String>], params: Bm25Params) -> Self {
        let mut term_freqs = Vec::with_capacity(corpus.len());
        let mut doc_freq: HashMap<String, usize> = HashMap::new();
        for doc in corpus {
            let mut tf: HashMap<String, u32> = HashMap::new();
            for tok in doc {
                *tf.entry(tok.clone()).or_default() += 1;
            }
            for term in tf.keys() {
                *doc_freq.entry(term.clone()).or_default() += 1;
            }
            term_freqs.push(tf);
        }
        let doc_lens: Vec<usize> = corpus.iter().map(Vec::len).collect();
        let avg_len = if corpus.is_empty() {
            0.0
        } else {
            doc_lens.iter().sum::<usize>() as f64 / corpus.len() as f64
        };
        Self {
            params,
            term_freqs,
            doc_lens,
            avg_len,
            doc_freq,
        }
    }

    pub fn len(&self) -> usize {
        self.term_freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.term_freqs.is_empty()
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.len() as f64;
        let df = self.doc_freq.get(term).copied().unwrap_or(0) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    pub fn score_all(&self, query: &[String]) -> Vec<f64> {
        let mut seen: Vec<&str> = Vec::new();
        for tok in query {
            if !seen.contains(&tok.as_str()) {
                seen.push(tok);
            }
        }
        let terms: Vec<(&str, f64)> = seen
            .into_iter()
            .filter(|t| self.doc_freq.contains_key(*t))
            .map(|t| (t, self.idf(t)))
            .collect();

        let Bm25Params { k1, b } = self.params;
        self.term_freqs
            .iter()
            .zip(&self.doc_lens)
            .map(|(tf, &len)| {
                let norm = if self.avg_len > 0.0 {
                    1.0 - b + b * len as f64 / self.avg_len
                } else {
                    1.0
                };
                terms
                    .iter()
                    .map(|&(term, idf)| match tf.get(term) {
                        Some(&f) => {
                            let f = f64::from(f);
                            idf * f * (k1 + 1.0) / (f + k1 * norm)
                        }
                        None => 0.0,
                    })
                    .fold(0.0, |acc, x| acc + x)
            })
            .collect()
    }
}

impl CorpusScorer for Bm25Index {
    fn scores(&self, query: &[String]) -> Vec<f64> {
        self.score_all(query)
    }
}

/// BM25 as a pluggable [`Similarity`] backend.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bm25 {
    pub params: Bm25Params,
}

impl Similarity for Bm25 {
    fn build(&self, corpus: &[Vec<String>]) -> Box<dyn CorpusScorer> {
        Box::new(Bm25Index::new(corpus, self.params))
    }
}

/// One-shot scoring of `query_tokens` against `corpus` with default parameters.
pub fn bm25_scores(query_tokens: &[String], corpus: &[Vec<String>]) -> Vec<f64> {
    Bm25Index::new(corpus, Bm25Params::default()).score_all(query_tokens)
}
