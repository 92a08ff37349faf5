//! Randomness for protocols.
//!
//! Every random draw goes through a [`Stream`] obtained from a [`Coins`]
//! handle. A handle is addressed by a label path (`"public/perm"`,
//! `"private:party-3/fake-edges"`), and opening the same path twice yields
//! the same stream. That makes a party's behaviour a pure function of its
//! view, which is what the runtime relies on for replay checks.
//!
//! Two backends exist. [`Seed`] drives a ChaCha stream and is what the
//! simulator uses. A [`ChoiceTape`] turns every draw into a branch point so
//! that [`enumerate_paths`] can walk the whole probability tree of a run
//! exactly; the information-cost module is built on that.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A seed value plus a stream label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Seed {
    pub value: u64,
    pub label: String,
}

impl Seed {
    pub fn new(value: u64, label: impl Into<String>) -> Self {
        Seed {
            value,
            label: label.into(),
        }
    }

    /// Child seed whose label is `self.label/sub`.
    pub fn derive(&self, sub: &str) -> Seed {
        Seed {
            value: self.value,
            label: join_label(&self.label, sub),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(splitmix64(self.value ^ fnv1a(self.label.as_bytes())))
    }
}

fn join_label(base: &str, sub: &str) -> String {
    if base.is_empty() {
        sub.to_string()
    } else {
        format!("{base}/{sub}")
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Key of one draw: stream label and position within that stream.
pub type DrawKey = (String, u64);

#[derive(Clone, Debug)]
struct Choice {
    key: DrawKey,
    probs: Vec<f64>,
    value: usize,
}

/// Branch record for exhaustive enumeration of all coin outcomes.
#[derive(Debug, Default)]
pub struct ChoiceTape {
    entries: Vec<Choice>,
    index: HashMap<DrawKey, usize>,
}

impl ChoiceTape {
    fn draw(&mut self, key: DrawKey, probs: Vec<f64>) -> usize {
        if let Some(&i) = self.index.get(&key) {
            let entry = &self.entries[i];
            assert_eq!(
                entry.probs.len(),
                probs.len(),
                "draw {key:?} re-opened with a different branch count"
            );
            return entry.value;
        }
        let value = probs
            .iter()
            .position(|&p| p > 0.0)
            .expect("draw with no positive-probability branch");
        self.index.insert(key.clone(), self.entries.len());
        self.entries.push(Choice { key, probs, value });
        value
    }

    fn path_probability(&self) -> f64 {
        self.entries.iter().map(|c| c.probs[c.value]).product()
    }

    /// Moves to the next unexplored leaf. Returns false when exhausted.
    fn advance(&mut self) -> bool {
        while let Some(mut last) = self.entries.pop() {
            self.index.remove(&last.key);
            let next = (last.value + 1..last.probs.len()).find(|&v| last.probs[v] > 0.0);
            if let Some(v) = next {
                last.value = v;
                self.index.insert(last.key.clone(), self.entries.len());
                self.entries.push(last);
                return true;
            }
        }
        false
    }

    fn assignment(&self) -> Vec<(DrawKey, usize)> {
        self.entries
            .iter()
            .map(|c| (c.key.clone(), c.value))
            .collect()
    }
}

#[derive(Clone, Debug)]
enum Source {
    Seeded(u64),
    Tape(Rc<RefCell<ChoiceTape>>),
    /// Draws listed in `values` are pinned; the rest come from `fallback`.
    Pinned {
        values: Rc<BTreeMap<DrawKey, usize>>,
        fallback: Box<Coins>,
    },
}

/// A handle from which labelled random streams are opened.
#[derive(Clone, Debug)]
pub struct Coins {
    label: String,
    source: Source,
}

impl Coins {
    pub fn seeded(seed: &Seed) -> Self {
        Coins {
            label: seed.label.clone(),
            source: Source::Seeded(seed.value),
        }
    }

    pub fn on_tape(tape: &Rc<RefCell<ChoiceTape>>, label: impl Into<String>) -> Self {
        Coins {
            label: label.into(),
            source: Source::Tape(Rc::clone(tape)),
        }
    }

    /// Coins labelled `label` whose draws are read from `values` when
    /// present there, and from `fallback` otherwise.
    pub fn pinned(
        label: impl Into<String>,
        values: Rc<BTreeMap<DrawKey, usize>>,
        fallback: Coins,
    ) -> Self {
        Coins {
            label: label.into(),
            source: Source::Pinned {
                values,
                fallback: Box::new(fallback),
            },
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn derive(&self, sub: &str) -> Coins {
        let source = match &self.source {
            Source::Pinned { values, fallback } => Source::Pinned {
                values: Rc::clone(values),
                fallback: Box::new(fallback.derive(sub)),
            },
            other => other.clone(),
        };
        Coins {
            label: join_label(&self.label, sub),
            source,
        }
    }

    pub fn stream(&self) -> Stream {
        let inner = match &self.source {
            Source::Seeded(value) => StreamInner::Rng(Box::new(
                Seed::new(*value, self.label.clone()).rng(),
            )),
            Source::Tape(tape) => StreamInner::Tape {
                tape: Rc::clone(tape),
                label: self.label.clone(),
                pos: 0,
            },
            Source::Pinned { values, fallback } => StreamInner::Pinned {
                values: Rc::clone(values),
                label: self.label.clone(),
                pos: 0,
                fallback: Box::new(fallback.stream()),
            },
        };
        Stream { inner }
    }
}

enum StreamInner {
    Rng(Box<ChaCha8Rng>),
    Tape {
        tape: Rc<RefCell<ChoiceTape>>,
        label: String,
        pos: u64,
    },
    Pinned {
        values: Rc<BTreeMap<DrawKey, usize>>,
        label: String,
        pos: u64,
        fallback: Box<Stream>,
    },
}

/// A sequence of random draws.
pub struct Stream {
    inner: StreamInner,
}

impl Stream {
    /// Index drawn with probability proportional to `weights`.
    pub fn weighted(&mut self, weights: &[f64]) -> usize {
        assert!(!weights.is_empty(), "weighted draw over nothing");
        match &mut self.inner {
            StreamInner::Rng(rng) => {
                let total: f64 = weights.iter().sum();
                let mut x = rng.gen::<f64>() * total;
                for (i, &w) in weights.iter().enumerate() {
                    if x < w {
                        return i;
                    }
                    x -= w;
                }
                weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
            }
            StreamInner::Tape { tape, label, pos } => {
                let total: f64 = weights.iter().sum();
                let probs = weights.iter().map(|w| w / total).collect();
                let key = (label.clone(), *pos);
                *pos += 1;
                tape.borrow_mut().draw(key, probs)
            }
            StreamInner::Pinned {
                values,
                label,
                pos,
                fallback,
            } => {
                let key = (label.clone(), *pos);
                *pos += 1;
                match values.get(&key) {
                    Some(&v) => v,
                    None => fallback.weighted(weights),
                }
            }
        }
    }

    /// Uniform draw from `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "uniform draw from an empty range");
        match &mut self.inner {
            StreamInner::Rng(rng) => rng.gen_range(0..bound),
            _ => {
                let weights = vec![1.0; bound as usize];
                self.weighted(&weights) as u64
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.below(2) == 1
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// `count` distinct values from `0..universe`, in draw order.
    pub fn sample_distinct(&mut self, universe: u64, count: usize) -> Vec<u64> {
        assert!(count as u64 <= universe);
        let mut pool: Vec<u64> = (0..universe).collect();
        for i in 0..count {
            let j = i + self.below(universe - i as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }
}

/// One leaf of an enumerated run.
#[derive(Clone, Debug)]
pub struct Path<T> {
    pub probability: f64,
    pub value: T,
    /// Every draw made on the path, in first-use order.
    pub draws: Vec<(DrawKey, usize)>,
}

/// Runs `run` once per leaf of the probability tree spanned by its draws.
///
/// `run` receives a fresh tape each time; it must open all of its coins on
/// that tape and be deterministic given the draws. Fails once more than
/// `max_paths` leaves have been visited.
pub fn enumerate_paths<T, F>(max_paths: usize, mut run: F) -> Result<Vec<Path<T>>>
where
    F: FnMut(&Rc<RefCell<ChoiceTape>>) -> Result<T>,
{
    let tape = Rc::new(RefCell::new(ChoiceTape::default()));
    let mut out = Vec::new();
    loop {
        let value = run(&tape)?;
        let t = tape.borrow();
        out.push(Path {
            probability: t.path_probability(),
            value,
            draws: t.assignment(),
        });
        drop(t);
        if out.len() > max_paths {
            return Err(Error::TooLarge {
                what: "enumerated paths",
                value: out.len(),
                limit: max_paths,
            });
        }
        if !tape.borrow_mut().advance() {
            return Ok(out);
        }
    }
}
