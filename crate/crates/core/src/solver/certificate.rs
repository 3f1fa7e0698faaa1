//! Strategy certificates: one winning move per position, keyed by the
//! position's quotient key.
//!
//! A Waiter certificate maps each position it reaches to an offer. A Client
//! certificate maps each position either to a reply for every possible
//! offer, or to a marker naming a condition under which Client's follow-up
//! play is fixed (see [`CertMove`]).

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::search::{Engine, Step};
use crate::error::{Error, Result};
use crate::game::{mask_classes, AbstractOffer, Choice, PruningLevel, Quotient, QuotientCut, QuotientKey, Side};
use crate::graph::Instance;

pub const CERTIFICATE_FORMAT: &str = "wcgame-certificate/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reply {
    pub offer: AbstractOffer,
    pub choice: Choice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "kebab-case")]
pub enum CertMove {
    /// Waiter's offer.
    Offer { offer: AbstractOffer },
    /// Client's reply to every offer.
    Replies { replies: Vec<Reply> },
    /// Classes whose union has at most `q` leaving free edges; Client
    /// refuses them all.
    SmallCut { classes: Vec<u8> },
    /// Two disjoint class sets with `q + 1` leaving free edges each, a free
    /// edge between them, and some class outside both.
    AdjacentPair { first: Vec<u8>, second: Vec<u8> },
    /// Fewer rounds left than merges needed.
    FewRounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    /// Quotient key, hex.
    pub key: String,
    #[serde(flatten)]
    pub mv: CertMove,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    /// SHA-256 of the instance's compact JSON.
    pub instance_hash: String,
    pub side: Side,
    pub n: usize,
    pub q: usize,
    /// Sorted by key.
    pub records: Vec<Record>,
}

impl Certificate {
    pub fn new(inst: &Instance, side: Side, records: BTreeMap<String, CertMove>) -> Self {
        Self {
            format: CERTIFICATE_FORMAT.to_string(),
            instance_hash: inst.content_hash(),
            side,
            n: inst.n(),
            q: inst.q,
            records: records.into_iter().map(|(key, mv)| Record { key, mv }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn index(&self) -> FxHashMap<&str, &CertMove> {
        self.records.iter().map(|r| (r.key.as_str(), &r.mv)).collect()
    }

    /// Fails unless the certificate was made for `inst`.
    pub fn check_instance(&self, inst: &Instance) -> Result<()> {
        if self.format != CERTIFICATE_FORMAT {
            return Err(Error::Certificate(format!(
                "unknown certificate format {:?}",
                self.format
            )));
        }
        let h = inst.content_hash();
        if self.instance_hash != h {
            return Err(Error::Certificate(format!(
                "certificate is bound to instance {}, not {h}",
                self.instance_hash
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// File form: a header line, then one record per line. Paths ending
    /// in `.gz` are gzip-compressed.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        if is_gzip(path) {
            let mut z = GzEncoder::new(file, Compression::default());
            self.write_lines(&mut z)?;
            z.finish()?.flush()?;
        } else {
            let mut file = file;
            self.write_lines(&mut file)?;
            file.flush()?;
        }
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        if is_gzip(path) {
            Self::read_lines(BufReader::new(GzDecoder::new(file)))
        } else {
            Self::read_lines(BufReader::new(file))
        }
    }

    fn write_lines(&self, w: &mut impl Write) -> Result<()> {
        let header = Header {
            format: self.format.clone(),
            instance_hash: self.instance_hash.clone(),
            side: self.side,
            n: self.n,
            q: self.q,
            records: self.records.len(),
        };
        serde_json::to_writer(&mut *w, &header)?;
        w.write_all(b"\n")?;
        for r in &self.records {
            serde_json::to_writer(&mut *w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    fn read_lines(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Certificate("empty certificate file".into()))??;
        let h: Header = serde_json::from_str(&first)?;
        let mut records = Vec::with_capacity(h.records);
        for line in lines {
            let line = line?;
            if !line.trim().is_empty() {
                records.push(serde_json::from_str(&line)?);
            }
        }
        if records.len() != h.records {
            return Err(Error::Certificate(format!(
                "header announces {} records, file has {}",
                h.records,
                records.len()
            )));
        }
        Ok(Self {
            format: h.format,
            instance_hash: h.instance_hash,
            side: h.side,
            n: h.n,
            q: h.q,
            records,
        })
    }
}

fn is_gzip(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    instance_hash: String,
    side: Side,
    n: usize,
    q: usize,
    records: usize,
}

pub(crate) fn key_hex(k: &QuotientKey) -> String {
    hex::encode(k.as_slice())
}

pub(crate) struct Extractor<'e, 'a> {
    pub engine: &'e mut Engine<'a>,
    pub records: BTreeMap<String, CertMove>,
    seen: FxHashSet<QuotientKey>,
}

impl<'e, 'a> Extractor<'e, 'a> {
    pub fn new(engine: &'e mut Engine<'a>) -> Self {
        Self {
            engine,
            records: BTreeMap::new(),
            seen: FxHashSet::default(),
        }
    }

    /// Records a winning offer for every position Waiter's play can reach.
    pub fn waiter(&mut self, s: &Quotient) -> Step<Result<()>> {
        if s.classes() == 1 || !self.seen.insert(s.key()) {
            return Ok(Ok(()));
        }
        let mut pick = None;
        for o in self.engine.ordered_offers(s) {
            if self.engine.offer_wins(s, &o)? {
                pick = Some(o);
                break;
            }
        }
        let Some(o) = pick else {
            return Ok(Err(Error::Certificate(format!("no winning offer found at {s:?}"))));
        };
        for c in o.choices() {
            if let Err(e) = self.waiter(&s.child(&o, c))? {
                return Ok(Err(e));
            }
        }
        self.records.insert(key_hex(&s.key()), CertMove::Offer { offer: o });
        Ok(Ok(()))
    }

    /// Records Client's replies, or a cut marker, for every position
    /// reachable against any Waiter play.
    pub fn client(&mut self, s: &Quotient) -> Step<Result<()>> {
        let q = self.engine.q;
        if s.free() == 0 || !self.seen.insert(s.key()) {
            return Ok(Ok(()));
        }
        if let Some(cut) = s.client_cut(q) {
            let mv = match cut {
                QuotientCut::SmallCut(m) => CertMove::SmallCut {
                    classes: mask_classes(m).collect(),
                },
                QuotientCut::AdjacentPair(a, b) => CertMove::AdjacentPair {
                    first: mask_classes(a).collect(),
                    second: mask_classes(b).collect(),
                },
                QuotientCut::FewRounds => CertMove::FewRounds,
            };
            self.records.insert(key_hex(&s.key()), mv);
            return Ok(Ok(()));
        }
        let mut replies = Vec::new();
        for o in s.offers(q, PruningLevel::DeadCollapse) {
            let Some(choice) = self.reply(s, &o)? else {
                return Ok(Err(Error::Certificate(format!("offer {o:?} at {s:?} beats Client"))));
            };
            replies.push(Reply { offer: o, choice });
        }
        for r in &replies {
            if let Err(e) = self.client(&s.child(&r.offer, r.choice))? {
                return Ok(Err(e));
            }
        }
        self.records.insert(key_hex(&s.key()), CertMove::Replies { replies });
        Ok(Ok(()))
    }

    /// Prefers replies ending in a cut, then positions already covered.
    fn reply(&mut self, s: &Quotient, o: &AbstractOffer) -> Step<Option<Choice>> {
        let q = self.engine.q;
        let choices = o.choices();
        let children: Vec<Quotient> = choices.iter().map(|&c| s.child(o, c)).collect();
        if let Some(i) = children
            .iter()
            .position(|c| c.classes() > 1 && (c.free() == 0 || c.client_cut(q).is_some()))
        {
            return Ok(Some(choices[i]));
        }
        for (i, c) in children.iter().enumerate() {
            if self.seen.contains(&c.key()) && c.classes() > 1 {
                return Ok(Some(choices[i]));
            }
        }
        self.engine.client_reply(s, o)
    }
}
