use std::ops::Range;

use super::bits::{gamma_len, BitString};
use crate::error::{Error, Result};
use crate::graph::ceil_log2;

/// One message on the board.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Record {
    pub party: usize,
    pub payload: BitString,
}

/// Everything written on the board, in write order.
///
/// Framed size of a record is `⌈log₂ k⌉` bits of party id, the Elias-gamma
/// code of `len + 1`, then the payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transcript {
    k: usize,
    records: Vec<Record>,
}

impl Transcript {
    pub fn new(k: usize) -> Self {
        Transcript { k, records: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn push(&mut self, record: Record) {
        debug_assert!(record.party >= 1 && record.party <= self.k);
        self.records.push(record);
    }

    pub fn total_payload_bits(&self) -> usize {
        self.records.iter().map(|r| r.payload.len()).sum()
    }

    pub fn total_framed_bits(&self) -> usize {
        let id = ceil_log2(self.k);
        self.records
            .iter()
            .map(|r| id + gamma_len(r.payload.len() as u64 + 1) + r.payload.len())
            .sum()
    }

    /// Self-delimiting bit encoding of the whole transcript.
    pub fn encode(&self) -> BitString {
        let id = ceil_log2(self.k);
        let mut out = BitString::new();
        for r in &self.records {
            out.push_uint(r.party as u64 - 1, id);
            out.push_gamma(r.payload.len() as u64 + 1);
            out.extend(&r.payload);
        }
        out
    }

    pub fn decode(bits: &BitString, k: usize) -> Result<Transcript> {
        let id = ceil_log2(k);
        let mut reader = bits.reader();
        let mut t = Transcript::new(k);
        let bad = |what: &str| Error::MalformedTranscript(what.to_string());
        while reader.remaining() > 0 {
            let party = reader.read_uint(id).ok_or_else(|| bad("truncated party id"))? as usize + 1;
            if party > k {
                return Err(bad("party id out of range"));
            }
            let len = reader.read_gamma().ok_or_else(|| bad("truncated length"))? - 1;
            let payload = reader
                .read_bits(len as usize)
                .ok_or_else(|| bad("truncated payload"))?;
            t.push(Record { party, payload });
        }
        Ok(t)
    }
}

/// Payload-only and framed bit counts.
pub fn transcript_cost(t: &Transcript) -> (usize, usize) {
    (t.total_payload_bits(), t.total_framed_bits())
}

/// A completed turn: who wrote, and which records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Turn {
    pub party: usize,
    pub records: Range<usize>,
}

/// The shared board: the transcript so far plus the turn structure the
/// protocol's schedule imposes on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blackboard {
    transcript: Transcript,
    turns: Vec<Turn>,
}

impl Blackboard {
    pub fn new(k: usize) -> Self {
        Blackboard {
            transcript: Transcript::new(k),
            turns: Vec::new(),
        }
    }

    /// Rebuilds a board from `(writer, payloads)` turns.
    pub fn from_turns(k: usize, turns: &[(usize, Vec<BitString>)]) -> Self {
        let mut b = Blackboard::new(k);
        for (party, payloads) in turns {
            b.push_turn(*party, payloads.clone());
        }
        b
    }

    /// The turn structure as `(writer, payloads)` pairs.
    pub fn turn_messages(&self) -> Vec<(usize, Vec<BitString>)> {
        (0..self.turns.len())
            .map(|i| {
                let payloads = self.turn_records(i).iter().map(|r| r.payload.clone()).collect();
                (self.turns[i].party, payloads)
            })
            .collect()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn turns_completed(&self) -> usize {
        self.turns.len()
    }

    /// Records written during turn `i`.
    pub fn turn_records(&self, i: usize) -> &[Record] {
        &self.transcript.records[self.turns[i].records.clone()]
    }

    pub fn last_turn_records(&self) -> &[Record] {
        self.turns
            .last()
            .map(|t| &self.transcript.records[t.records.clone()])
            .unwrap_or(&[])
    }

    pub(crate) fn push_turn(&mut self, party: usize, payloads: Vec<BitString>) {
        let start = self.transcript.records.len();
        for payload in payloads {
            self.transcript.push(Record { party, payload });
        }
        self.turns.push(Turn {
            party,
            records: start..self.transcript.records.len(),
        });
    }

    /// Board as it was after the first `turns` turns.
    pub fn prefix(&self, turns: usize) -> Blackboard {
        let end = if turns == 0 { 0 } else { self.turns[turns - 1].records.end };
        Blackboard {
            transcript: Transcript {
                k: self.transcript.k,
                records: self.transcript.records[..end].to_vec(),
            },
            turns: self.turns[..turns].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_transcript_costs_nothing() {
        assert_eq!(transcript_cost(&Transcript::new(4)), (0, 0));
    }

    #[test]
    fn framing_adds_header() {
        let mut t = Transcript::new(4);
        t.push(Record {
            party: 3,
            payload: BitString::from_iter([true; 8]),
        });
        let (payload, framed) = transcript_cost(&t);
        assert_eq!(payload, 8);
        // 2 id bits + gamma(9) = 7 bits + 8 payload bits
        assert_eq!(framed, 17);
        assert!(framed > payload);
    }

    fn arb_transcript() -> impl Strategy<Value = Transcript> {
        (1usize..9).prop_flat_map(|k| {
            proptest::collection::vec((1..=k, proptest::collection::vec(any::<bool>(), 0..12)), 0..10)
                .prop_map(move |recs| {
                    let mut t = Transcript::new(k);
                    for (party, bits) in recs {
                        t.push(Record {
                            party,
                            payload: bits.into_iter().collect(),
                        });
                    }
                    t
                })
        })
    }

    proptest! {
        #[test]
        fn encoding_is_self_delimiting(t in arb_transcript()) {
            let bits = t.encode();
            prop_assert_eq!(bits.len(), t.total_framed_bits());
            prop_assert!(t.total_framed_bits() >= t.total_payload_bits());
            prop_assert_eq!(Transcript::decode(&bits, t.k()).unwrap(), t);
        }
    }
}
