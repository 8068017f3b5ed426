//! Dialogue corpora: loading, tokenization, vocabulary, and encoding.
//!
//! A corpus file is UTF-8 text with one JSON record per line:
//!
//! ```text
//! {"context": ["how are you ?", "fine , thanks"], "response": "glad to hear it"}
//! ```
//!
//! Tokenization is lowercase whitespace splitting with every ASCII
//! punctuation character separated out as its own token, so all downstream
//! statistics are deterministic and dependency-free.

use crate::{Error, Result};
use serde::Deserialize;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Stable pair identifier, assigned in file order at load time.
pub type PairId = u64;

/// Reserved token ids. These occupy ids `0..5` in every vocabulary.
pub const PAD_ID: u32 = 0;
pub const BOS_ID: u32 = 1;
pub const EOS_ID: u32 = 2;
pub const UNK_ID: u32 = 3;
pub const SEP_ID: u32 = 4;

/// Surface forms of the reserved tokens, indexed by id.
pub const RESERVED_TOKENS: [&str; 5] = ["<pad>", "<bos>", "<eos>", "<unk>", "<sep>"];

/// Number of reserved ids at the bottom of the id space.
pub const NUM_RESERVED: usize = RESERVED_TOKENS.len();

/// One context–response pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialoguePair {
    pub id: PairId,
    /// Context utterances, oldest first.
    pub context: Vec<String>,
    pub response: String,
}

impl DialoguePair {
    /// Tokenized context, one token list per utterance.
    pub fn context_tokens(&self) -> Vec<Vec<String>> {
        self.context.iter().map(|u| tokenize(u)).collect()
    }

    /// Tokenized response.
    pub fn response_tokens(&self) -> Vec<String> {
        tokenize(&self.response)
    }
}

/// A loaded corpus. Pair ids are exactly `0..len`.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub pairs: Vec<DialoguePair>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DialoguePair> {
        self.pairs.iter()
    }
}

/// Lowercase the text and split into tokens, with each ASCII punctuation
/// character emitted as a standalone token.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        } else if ch.is_ascii_punctuation() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            tokens.push(ch.to_string());
        } else {
            for lc in ch.to_lowercase() {
                current.push(lc);
            }
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[derive(Deserialize)]
struct RawRecord {
    context: Vec<String>,
    response: String,
}

/// Load a line-delimited corpus file. Ids are assigned in file order.
/// Records whose response tokenizes to nothing are rejected with the line
/// number; blank lines are skipped.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
    let reader = BufReader::new(file);

    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(display.clone(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RawRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                path: display.clone(),
                line: idx + 1,
                reason: e.to_string(),
            })?;
        if tokenize(&record.response).is_empty() {
            return Err(Error::MalformedRecord {
                path: display.clone(),
                line: idx + 1,
                reason: "response is empty after tokenization".into(),
            });
        }
        pairs.push(DialoguePair {
            id: pairs.len() as PairId,
            context: record.context,
            response: record.response,
        });
    }
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus(display));
    }
    Ok(Corpus { pairs })
}

/// Write a corpus back out in the line-delimited record format.
pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut out = String::new();
    for pair in &corpus.pairs {
        let rec = serde_json::json!({"context": pair.context, "response": pair.response});
        out.push_str(&rec.to_string());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(display, e))
}

/// Token/id maps plus the training-corpus frequency table.
///
/// Ids `0..5` are reserved; regular tokens are assigned ids in descending
/// frequency order (ties broken lexicographically) so vocabulary construction
/// is deterministic. The frequency table keeps every observed token even when
/// `min_freq` excludes it from the id space.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    token_to_id: HashMap<String, u32>,
    id_to_token: Vec<String>,
    freq: HashMap<String, u64>,
}

impl Vocabulary {
    /// Number of ids, reserved ones included.
    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Id for a token; `UNK_ID` when absent.
    pub fn id(&self, token: &str) -> u32 {
        self.token_to_id.get(token).copied().unwrap_or(UNK_ID)
    }

    /// Whether the token has its own id.
    pub fn contains(&self, token: &str) -> bool {
        self.token_to_id.contains_key(token)
    }

    /// Surface form for an id.
    pub fn token(&self, id: u32) -> &str {
        &self.id_to_token[id as usize]
    }

    /// Training-corpus count of a token (0 when never observed).
    pub fn frequency(&self, token: &str) -> u64 {
        self.freq.get(token).copied().unwrap_or(0)
    }

    /// The full observed-token frequency table.
    pub fn frequency_table(&self) -> &HashMap<String, u64> {
        &self.freq
    }

    /// Non-reserved tokens in id order.
    pub fn regular_tokens(&self) -> &[String] {
        &self.id_to_token[NUM_RESERVED..]
    }

    fn from_parts(ordered: Vec<(String, u64)>, freq: HashMap<String, u64>) -> Self {
        let mut id_to_token: Vec<String> =
            RESERVED_TOKENS.iter().map(|s| s.to_string()).collect();
        let mut token_to_id = HashMap::new();
        for (i, tok) in id_to_token.iter().enumerate() {
            token_to_id.insert(tok.clone(), i as u32);
        }
        for (tok, _) in ordered {
            token_to_id.insert(tok.clone(), id_to_token.len() as u32);
            id_to_token.push(tok);
        }
        Vocabulary {
            token_to_id,
            id_to_token,
            freq,
        }
    }

    /// Serialize as `token<TAB>id<TAB>freq` lines. The five reserved tokens
    /// come first; observed tokens excluded by `min_freq` are written with
    /// id `-1` so the frequency table survives a round trip.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let file =
            std::fs::File::create(path).map_err(|e| Error::io(display.clone(), e))?;
        let mut w = std::io::BufWriter::new(file);
        let mut emit = |line: String| -> Result<()> {
            writeln!(w, "{line}").map_err(|e| Error::io(display.clone(), e))
        };
        for (i, tok) in RESERVED_TOKENS.iter().enumerate() {
            emit(format!("{tok}\t{i}\t0"))?;
        }
        for (i, tok) in self.id_to_token.iter().enumerate().skip(NUM_RESERVED) {
            emit(format!("{tok}\t{i}\t{}", self.frequency(tok)))?;
        }
        let mut dropped: Vec<(&String, &u64)> = self
            .freq
            .iter()
            .filter(|(tok, _)| !self.token_to_id.contains_key(*tok))
            .collect();
        dropped.sort();
        for (tok, f) in dropped {
            emit(format!("{tok}\t-1\t{f}"))?;
        }
        Ok(())
    }

    /// Load a vocabulary saved by [`Vocabulary::save`].
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
        let reader = BufReader::new(file);

        let mut entries: Vec<(String, i64, u64)> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(display.clone(), e))?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let (tok, id, f) = (parts.next(), parts.next(), parts.next());
            let parse = || -> Option<(String, i64, u64)> {
                Some((tok?.to_string(), id?.parse().ok()?, f?.parse().ok()?))
            };
            let entry = parse().ok_or_else(|| Error::MalformedFile {
                path: display.clone(),
                reason: format!("bad vocab line {}", idx + 1),
            })?;
            entries.push(entry);
        }
        for (i, reserved) in RESERVED_TOKENS.iter().enumerate() {
            match entries.get(i) {
                Some((tok, id, _)) if tok == reserved && *id == i as i64 => {}
                _ => {
                    return Err(Error::MalformedFile {
                        path: display,
                        reason: format!("missing reserved-token header line {}", i + 1),
                    })
                }
            }
        }
        let mut freq = HashMap::new();
        let mut ordered = Vec::new();
        for (tok, id, f) in entries.into_iter().skip(NUM_RESERVED) {
            if f > 0 {
                freq.insert(tok.clone(), f);
            }
            if id >= 0 {
                ordered.push((tok, f));
            }
        }
        Ok(Vocabulary::from_parts(ordered, freq))
    }
}

/// Count token frequencies and assign ids to every token observed at least
/// `min_freq` times. The frequency table keeps all observed tokens.
pub fn build_vocab(corpus: &Corpus, min_freq: u64) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus("cannot build vocabulary".into()));
    }
    if min_freq < 1 {
        return Err(Error::InvalidArgument("min_freq must be >= 1".into()));
    }
    let mut freq: HashMap<String, u64> = HashMap::new();
    for pair in corpus.iter() {
        for utterance in &pair.context {
            for tok in tokenize(utterance) {
                *freq.entry(tok).or_insert(0) += 1;
            }
        }
        for tok in pair.response_tokens() {
            *freq.entry(tok).or_insert(0) += 1;
        }
    }
    let mut kept: Vec<(String, u64)> = freq
        .iter()
        .filter(|(_, &f)| f >= min_freq)
        .map(|(t, &f)| (t.clone(), f))
        .collect();
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(Vocabulary::from_parts(kept, freq))
}

/// A pair encoded to token ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPair {
    pub id: PairId,
    /// Context utterances joined with SEP, suffix-truncated.
    pub context_ids: Vec<u32>,
    /// Response tokens terminated by EOS, prefix-truncated.
    pub response_ids: Vec<u32>,
}

/// Encode one pair. Context utterances are joined with SEP and the most
/// recent `max_context_len` tokens are kept; the response keeps its prefix
/// and always ends in EOS within `max_response_len`.
pub fn encode(
    pair: &DialoguePair,
    vocab: &Vocabulary,
    max_context_len: usize,
    max_response_len: usize,
) -> EncodedPair {
    let mut context_ids = Vec::new();
    for (i, utterance) in pair.context.iter().enumerate() {
        if i > 0 {
            context_ids.push(SEP_ID);
        }
        for tok in tokenize(utterance) {
            context_ids.push(vocab.id(&tok));
        }
    }
    if context_ids.len() > max_context_len {
        context_ids.drain(..context_ids.len() - max_context_len);
    }

    let mut response_ids: Vec<u32> = pair
        .response_tokens()
        .iter()
        .map(|t| vocab.id(t))
        .collect();
    response_ids.truncate(max_response_len.saturating_sub(1).max(1));
    response_ids.push(EOS_ID);
    if response_ids.len() > max_response_len {
        response_ids.truncate(max_response_len);
        *response_ids.last_mut().expect("non-empty") = EOS_ID;
    }

    EncodedPair {
        id: pair.id,
        context_ids,
        response_ids,
    }
}

/// Map generated ids back to tokens, skipping reserved markers.
pub fn decode_tokens(ids: &[u32], vocab: &Vocabulary) -> Vec<String> {
    ids.iter()
        .filter(|&&id| id as usize >= NUM_RESERVED)
        .map(|&id| vocab.token(id).to_string())
        .collect()
}
