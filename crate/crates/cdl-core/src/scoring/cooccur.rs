//! Key-phrase co-occurrence statistics and the connectivity score.
//!
//! Connectivity sums, over every context/response key-phrase pair that
//! co-occurs at least once in the training corpus,
//! `max(nPMI(p,h), 0) * |p| * |h| / (|c| * |r|)`, where `|p|`, `|h|` are
//! phrase word counts and `|c|`, `|r|` are the token counts of the context
//! and response. Phrase counts are presence-based: a phrase counts once per
//! pair regardless of how often it repeats inside it.

use crate::corpus::{Corpus, DialoguePair};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// A key-phrase: one or two content words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phrase(Vec<String>);

impl Phrase {
    pub fn unigram(w: impl Into<String>) -> Self {
        Phrase(vec![w.into()])
    }

    pub fn bigram(a: impl Into<String>, b: impl Into<String>) -> Self {
        Phrase(vec![a.into(), b.into()])
    }

    /// Number of words in the phrase (1 or 2).
    pub fn word_count(&self) -> usize {
        self.0.len()
    }

    pub fn words(&self) -> &[String] {
        &self.0
    }
}

impl std::fmt::Display for Phrase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.join(" "))
    }
}

fn is_content(token: &str, stopwords: &HashSet<String>) -> bool {
    !stopwords.contains(token)
        && !token.chars().all(|c| c.is_ascii_punctuation())
        && !crate::corpus::RESERVED_TOKENS.contains(&token)
}

/// Content-word unigrams plus contiguous content-word bigrams, as a set.
pub fn extract_keyphrases(tokens: &[String], stopwords: &HashSet<String>) -> BTreeSet<Phrase> {
    let mut phrases = BTreeSet::new();
    for (i, tok) in tokens.iter().enumerate() {
        if !is_content(tok, stopwords) {
            continue;
        }
        phrases.insert(Phrase::unigram(tok.clone()));
        if let Some(next) = tokens.get(i + 1) {
            if is_content(next, stopwords) {
                phrases.insert(Phrase::bigram(tok.clone(), next.clone()));
            }
        }
    }
    phrases
}

/// Context-side key-phrases of a pair: the union over its utterances.
/// Bigrams never cross an utterance boundary.
pub fn context_keyphrases(pair: &DialoguePair, stopwords: &HashSet<String>) -> BTreeSet<Phrase> {
    let mut phrases = BTreeSet::new();
    for utterance in pair.context_tokens() {
        phrases.extend(extract_keyphrases(&utterance, stopwords));
    }
    phrases
}

/// Pair-level phrase counts over a training corpus.
#[derive(Debug, Clone)]
pub struct CooccurrenceStats {
    /// n(p): pairs whose context contains phrase p.
    context_counts: HashMap<Phrase, u64>,
    /// n(h): pairs whose response contains phrase h.
    response_counts: HashMap<Phrase, u64>,
    /// n(p,h): pairs where the context contains p and the response h.
    joint_counts: HashMap<(Phrase, Phrase), u64>,
    /// N: total pair count.
    total_pairs: u64,
    stopwords: HashSet<String>,
}

impl CooccurrenceStats {
    /// Fold pair-level phrase presences over the training corpus.
    pub fn build(corpus: &Corpus, stopwords: &HashSet<String>) -> Self {
        let mut stats = CooccurrenceStats {
            context_counts: HashMap::new(),
            response_counts: HashMap::new(),
            joint_counts: HashMap::new(),
            total_pairs: corpus.len() as u64,
            stopwords: stopwords.clone(),
        };
        for pair in corpus.iter() {
            let ctx = context_keyphrases(pair, stopwords);
            let resp = extract_keyphrases(&pair.response_tokens(), stopwords);
            for p in &ctx {
                *stats.context_counts.entry(p.clone()).or_insert(0) += 1;
            }
            for h in &resp {
                *stats.response_counts.entry(h.clone()).or_insert(0) += 1;
            }
            for p in &ctx {
                for h in &resp {
                    *stats
                        .joint_counts
                        .entry((p.clone(), h.clone()))
                        .or_insert(0) += 1;
                }
            }
        }
        stats
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn context_count(&self, p: &Phrase) -> u64 {
        self.context_counts.get(p).copied().unwrap_or(0)
    }

    pub fn response_count(&self, h: &Phrase) -> u64 {
        self.response_counts.get(h).copied().unwrap_or(0)
    }

    pub fn joint_count(&self, p: &Phrase, h: &Phrase) -> u64 {
        self.joint_counts
            .get(&(p.clone(), h.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    /// Serialize to a text cache: a header line with N, then one section per
    /// count table. Phrase words are joined with spaces (tokens never contain
    /// whitespace).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let file = std::fs::File::create(path).map_err(|e| Error::io(display.clone(), e))?;
        let mut w = std::io::BufWriter::new(file);
        let mut emit = |line: String| -> Result<()> {
            writeln!(w, "{line}").map_err(|e| Error::io(display.clone(), e))
        };
        emit(format!("total_pairs\t{}", self.total_pairs))?;
        let mut sw: Vec<&String> = self.stopwords.iter().collect();
        sw.sort();
        for s in sw {
            emit(format!("stopword\t{s}"))?;
        }
        let mut ctx: Vec<(&Phrase, &u64)> = self.context_counts.iter().collect();
        ctx.sort();
        for (p, n) in ctx {
            emit(format!("context\t{p}\t{n}"))?;
        }
        let mut resp: Vec<(&Phrase, &u64)> = self.response_counts.iter().collect();
        resp.sort();
        for (h, n) in resp {
            emit(format!("response\t{h}\t{n}"))?;
        }
        let mut joint: Vec<(&(Phrase, Phrase), &u64)> = self.joint_counts.iter().collect();
        joint.sort();
        for ((p, h), n) in joint {
            emit(format!("joint\t{p}\t{h}\t{n}"))?;
        }
        Ok(())
    }

    /// Load a cache produced by [`CooccurrenceStats::save`].
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
        let reader = BufReader::new(file);
        let bad = |idx: usize| Error::MalformedFile {
            path: display.clone(),
            reason: format!("bad stats line {}", idx + 1),
        };

        let mut stats = CooccurrenceStats {
            context_counts: HashMap::new(),
            response_counts: HashMap::new(),
            joint_counts: HashMap::new(),
            total_pairs: 0,
            stopwords: HashSet::new(),
        };
        let phrase = |s: &str| Phrase(s.split(' ').map(|w| w.to_string()).collect());
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(display.clone(), e))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["total_pairs", n] => {
                    stats.total_pairs = n.parse().map_err(|_| bad(idx))?;
                }
                ["stopword", s] => {
                    stats.stopwords.insert(s.to_string());
                }
                ["context", p, n] => {
                    stats
                        .context_counts
                        .insert(phrase(p), n.parse().map_err(|_| bad(idx))?);
                }
                ["response", h, n] => {
                    stats
                        .response_counts
                        .insert(phrase(h), n.parse().map_err(|_| bad(idx))?);
                }
                ["joint", p, h, n] => {
                    stats
                        .joint_counts
                        .insert((phrase(p), phrase(h)), n.parse().map_err(|_| bad(idx))?);
                }
                _ => return Err(bad(idx)),
            }
        }
        Ok(stats)
    }
}

/// Normalized pointwise mutual information of a co-occurring phrase pair,
/// in `[-1, 1]`. The caller must not pass a pair that never co-occurs; a
/// joint probability of 1 returns +1 by the limit convention.
pub fn npmi(p: &Phrase, h: &Phrase, stats: &CooccurrenceStats) -> Result<f64> {
    let n_joint = stats.joint_count(p, h);
    if n_joint == 0 {
        return Err(Error::InvalidArgument(format!(
            "npmi requires a co-occurring pair; ({p}, {h}) never co-occurs"
        )));
    }
    let n = stats.total_pairs as f64;
    let n_p = stats.context_count(p) as f64;
    let n_h = stats.response_count(h) as f64;
    let p_joint = n_joint as f64 / n;
    if p_joint >= 1.0 {
        return Ok(1.0);
    }
    // ln((n(p,h)*N)/(n(p)*n(h))) keeps exact zeros for product-independent counts.
    let pmi = ((n_joint as f64 * n) / (n_p * n_h)).ln();
    Ok(pmi / (-p_joint.ln()))
}

/// Connectivity of one pair against the corpus statistics.
pub fn coherence_connectivity(pair: &DialoguePair, stats: &CooccurrenceStats) -> f64 {
    let ctx_tokens: usize = pair.context_tokens().iter().map(|u| u.len()).sum();
    let resp_tokens = pair.response_tokens().len();
    if ctx_tokens == 0 || resp_tokens == 0 {
        return 0.0;
    }
    let ctx = context_keyphrases(pair, stats.stopwords());
    let resp = extract_keyphrases(&pair.response_tokens(), stats.stopwords());
    let mut total = 0.0;
    for p in &ctx {
        for h in &resp {
            if stats.joint_count(p, h) == 0 {
                continue;
            }
            let value = npmi(p, h, stats).expect("joint count checked above");
            total += value.max(0.0) * (p.word_count() * h.word_count()) as f64;
        }
    }
    total / (ctx_tokens * resp_tokens) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DialoguePair;
    use crate::scoring::stopwords::default_stopwords;
    use approx::assert_abs_diff_eq;

    fn toks(s: &str) -> Vec<String> {
        crate::corpus::tokenize(s)
    }

    #[test]
    fn keyphrases_of_simple_utterance() {
        let sw: HashSet<String> = ["i"].iter().map(|s| s.to_string()).collect();
        let got = extract_keyphrases(&toks("i like green tea"), &sw);
        let want: BTreeSet<Phrase> = [
            Phrase::unigram("like"),
            Phrase::unigram("green"),
            Phrase::unigram("tea"),
            Phrase::bigram("like", "green"),
            Phrase::bigram("green", "tea"),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn all_stopword_utterance_yields_nothing() {
        let sw = default_stopwords();
        assert!(extract_keyphrases(&toks("i am the you"), sw).is_empty());
    }

    #[test]
    fn single_content_word_has_no_bigram() {
        let sw = default_stopwords();
        let got = extract_keyphrases(&toks("the tennis"), sw);
        assert_eq!(got.len(), 1);
        assert!(got.contains(&Phrase::unigram("tennis")));
    }

    #[test]
    fn punctuation_is_not_a_content_word() {
        let sw = default_stopwords();
        let got = extract_keyphrases(&toks("tennis !"), sw);
        assert_eq!(got.len(), 1);
    }

    fn pair(context: &[&str], response: &str, id: u64) -> DialoguePair {
        DialoguePair {
            id,
            context: context.iter().map(|s| s.to_string()).collect(),
            response: response.to_string(),
        }
    }

    /// 20-pair corpus where "tennis" and "racket" always and only co-occur.
    fn perfect_corpus() -> Corpus {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push(pair(&["tennis today"], "bring your racket", i));
        }
        for i in 5..20 {
            pairs.push(pair(&["nothing here"], "fine words", i));
        }
        Corpus { pairs }
    }

    #[test]
    fn npmi_perfect_correlation_is_one() {
        let stats = CooccurrenceStats::build(&perfect_corpus(), default_stopwords());
        let p = Phrase::unigram("tennis");
        let h = Phrase::unigram("racket");
        assert_eq!(stats.context_count(&p), 5);
        assert_eq!(stats.response_count(&h), 5);
        assert_eq!(stats.joint_count(&p, &h), 5);
        assert_abs_diff_eq!(npmi(&p, &h, &stats).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn npmi_independent_counts_are_zero() {
        // n(p)=10, n(h)=10, n(p,h)=5, N=20: product-independent.
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push(pair(&["alpha"], "beta", i));
        }
        for i in 5..10 {
            pairs.push(pair(&["alpha"], "gamma", i));
        }
        for i in 10..15 {
            pairs.push(pair(&["delta"], "beta", i));
        }
        for i in 15..20 {
            pairs.push(pair(&["delta"], "gamma", i));
        }
        let stats = CooccurrenceStats::build(&Corpus { pairs }, default_stopwords());
        let p = Phrase::unigram("alpha");
        let h = Phrase::unigram("beta");
        assert_eq!(stats.context_count(&p), 10);
        assert_eq!(stats.joint_count(&p, &h), 5);
        assert_eq!(npmi(&p, &h, &stats).unwrap(), 0.0);
    }

    #[test]
    fn npmi_zero_joint_is_rejected() {
        let stats = CooccurrenceStats::build(&perfect_corpus(), default_stopwords());
        let err = npmi(
            &Phrase::unigram("tennis"),
            &Phrase::unigram("words"),
            &stats,
        );
        assert!(err.is_err());
    }

    #[test]
    fn npmi_independence_on_fixture_counts() {
        // n(p)=4, n(h)=4, n(p,h)=1, N=16: 1*16 == 4*4.
        let mut pairs = Vec::new();
        pairs.push(pair(&["alpha"], "beta", 0));
        for i in 1..4 {
            pairs.push(pair(&["alpha"], "filler", i));
        }
        for i in 4..7 {
            pairs.push(pair(&["other"], "beta", i));
        }
        for i in 7..16 {
            pairs.push(pair(&["other"], "filler", i));
        }
        let stats = CooccurrenceStats::build(&Corpus { pairs }, default_stopwords());
        let p = Phrase::unigram("alpha");
        let h = Phrase::unigram("beta");
        assert_eq!(stats.context_count(&p), 4);
        assert_eq!(stats.response_count(&h), 4);
        assert_eq!(stats.joint_count(&p, &h), 1);
        assert_eq!(npmi(&p, &h, &stats).unwrap(), 0.0);
    }

    #[test]
    fn connectivity_zero_without_cooccurring_phrases() {
        let stats = CooccurrenceStats::build(&perfect_corpus(), default_stopwords());
        let q = pair(&["tennis today"], "fine words", 99);
        // "tennis" never co-occurs with "fine"/"words" phrases? It does not:
        // joint counts exist only within the same pair population.
        assert_eq!(coherence_connectivity(&q, &stats), 0.0);
    }

    #[test]
    fn connectivity_hand_evaluated_fixture() {
        // Corpus where exactly one (unigram, unigram) phrase pair has nPMI 1,
        // evaluated on a pair with |c|=4, |r|=2.
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push(pair(&["we palm course for"], "zinc it", i));
        }
        for i in 5..20 {
            pairs.push(pair(&["we stroll there for"], "sure it", i));
        }
        let stats = CooccurrenceStats::build(&Corpus { pairs }, default_stopwords());
        // "palm" and "zinc" co-occur in 5/20 pairs and nowhere else; both
        // sides have exactly one content phrase.
        let probe = pair(&["we palm course for"], "zinc it", 0);
        // |c| = 4 tokens, |r| = 2 tokens. Contributions: (palm, zinc) nPMI 1,
        // (course, zinc) nPMI 1 — course also only appears with zinc.
        // Keep only the palm contribution by checking the parts.
        let p = Phrase::unigram("palm");
        let h = Phrase::unigram("zinc");
        assert_abs_diff_eq!(npmi(&p, &h, &stats).unwrap(), 1.0, epsilon = 1e-12);
        let c = Phrase::unigram("course");
        assert_abs_diff_eq!(npmi(&c, &h, &stats).unwrap(), 1.0, epsilon = 1e-12);
        let pc = Phrase::bigram("palm", "course");
        assert_abs_diff_eq!(npmi(&pc, &h, &stats).unwrap(), 1.0, epsilon = 1e-12);
        // S_C = (1*1*1 + 1*1*1 + 1*2*1) / (4*2) = 4/8 = 0.5
        assert_abs_diff_eq!(coherence_connectivity(&probe, &stats), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn stats_cache_round_trip() {
        let stats = CooccurrenceStats::build(&perfect_corpus(), default_stopwords());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cooccur.tsv");
        stats.save(&path).unwrap();
        let loaded = CooccurrenceStats::load(&path).unwrap();
        assert_eq!(loaded.total_pairs(), stats.total_pairs());
        let p = Phrase::unigram("tennis");
        let h = Phrase::unigram("racket");
        assert_eq!(loaded.joint_count(&p, &h), stats.joint_count(&p, &h));
        let path2 = dir.path().join("cooccur2.tsv");
        loaded.save(&path2).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&path2).unwrap()
        );
    }
}
