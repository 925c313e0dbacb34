//! Random choice points and the sources that resolve them.
//!
//! Every random decision a sampler makes goes through a [`DrawSource`] as a
//! labelled [`Domain`]. A domain has `size()` equally likely raw values; the
//! raw value is what gets recorded on a decision tape, and
//! [`Domain::resolve`] maps it to an outcome index. Three sources exist:
//! a seeded PRNG (optionally recording a tape) and a tape replayer. Tests
//! add an exhaustive enumerator over the same trait.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label of a choice point within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    /// Root node `v`.
    Root,
    /// Second node `u` (or a proposal for it, under rejection).
    U,
    /// Accept/reject coin of a rejection step.
    Accept,
    W,
    R,
    T,
}

impl std::fmt::Display for Choice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// A finite set of outcomes, each reachable from a whole number of equally
/// likely raw values.
#[derive(Debug, Clone, Copy)]
pub enum Domain<'a> {
    /// Index in `0..n`, uniform.
    Uniform(usize),
    /// Index in `0..len` skipping up to two excluded positions.
    UniformExcluding { len: usize, excluded: [usize; 2], count: usize },
    /// Index weighted by a cumulative array (`acc[i]` = total weight of
    /// `0..=i`).
    Cumulative(&'a [u64]),
    /// As `Cumulative` with the interval of one index cut out.
    CumulativeExcluding(&'a [u64], usize),
    /// `1` with probability `accept / total`, else `0`.
    Bernoulli { accept: u64, total: u64 },
}

impl Domain<'_> {
    pub fn uniform_excluding(len: usize, excluded: &[usize]) -> Self {
        let mut ex = [usize::MAX; 2];
        let mut count = 0;
        for &e in excluded {
            if e < len && !ex[..count].contains(&e) {
                ex[count] = e;
                count += 1;
            }
        }
        if count == 2 && ex[0] > ex[1] {
            ex.swap(0, 1);
        }
        Domain::UniformExcluding { len, excluded: ex, count }
    }

    /// Number of equally likely raw values.
    pub fn size(&self) -> u64 {
        match *self {
            Domain::Uniform(n) => n as u64,
            Domain::UniformExcluding { len, count, .. } => (len - count) as u64,
            Domain::Cumulative(acc) => acc.last().copied().unwrap_or(0),
            Domain::CumulativeExcluding(acc, pos) => {
                acc.last().copied().unwrap_or(0) - interval_width(acc, pos)
            }
            Domain::Bernoulli { total, .. } => total,
        }
    }

    /// Maps a raw value in `0..size()` to its outcome index.
    pub fn resolve(&self, raw: u64) -> usize {
        debug_assert!(raw < self.size());
        match *self {
            Domain::Uniform(_) => raw as usize,
            Domain::UniformExcluding { excluded, count, .. } => {
                let mut idx = raw as usize;
                for &e in &excluded[..count] {
                    if idx >= e {
                        idx += 1;
                    }
                }
                idx
            }
            Domain::Cumulative(acc) => acc.partition_point(|&a| a <= raw),
            Domain::CumulativeExcluding(acc, pos) => {
                let lo = if pos == 0 { 0 } else { acc[pos - 1] };
                let shifted = if raw >= lo { raw + interval_width(acc, pos) } else { raw };
                acc.partition_point(|&a| a <= shifted)
            }
            Domain::Bernoulli { accept, .. } => (raw < accept) as usize,
        }
    }

    /// Every outcome with positive probability and its number of raw values.
    pub fn outcomes(&self) -> Vec<(usize, u64)> {
        match *self {
            Domain::Uniform(n) => (0..n).map(|i| (i, 1)).collect(),
            Domain::UniformExcluding { len, excluded, count } => {
                (0..len).filter(|i| !excluded[..count].contains(i)).map(|i| (i, 1)).collect()
            }
            Domain::Cumulative(acc) => weights(acc).filter(|&(_, w)| w > 0).collect(),
            Domain::CumulativeExcluding(acc, pos) => {
                weights(acc).filter(|&(i, w)| w > 0 && i != pos).collect()
            }
            Domain::Bernoulli { accept, total } => {
                [(0, total - accept), (1, accept)].into_iter().filter(|&(_, w)| w > 0).collect()
            }
        }
    }
}

fn interval_width(acc: &[u64], pos: usize) -> u64 {
    acc[pos] - if pos == 0 { 0 } else { acc[pos - 1] }
}

fn weights(acc: &[u64]) -> impl Iterator<Item = (usize, u64)> + '_ {
    acc.iter().enumerate().map(move |(i, &a)| (i, a - if i == 0 { 0 } else { acc[i - 1] }))
}

/// Where random decisions come from.
pub trait DrawSource {
    /// Marks the start of trial `trial`; subsequent draws belong to it.
    fn begin_trial(&mut self, trial: u64);

    fn draw(&mut self, choice: Choice, domain: Domain<'_>) -> Result<usize>;

    /// Called when a rejection step discards its proposal and is about to
    /// retry. Only the exhaustive enumerator treats this as an error.
    fn reject(&mut self, _choice: Choice) -> Result<()> {
        Ok(())
    }
}

/// One recorded draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapeRecord {
    pub trial: u64,
    pub choice: Choice,
    pub raw: u64,
}

/// Flat sequence of every raw draw made during a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tape {
    pub records: Vec<TapeRecord>,
}

impl Tape {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn extend(&mut self, other: Tape) {
        self.records.extend(other.records);
    }
}

/// Draws raw values uniformly from a PRNG. `gen_range` on integers is
/// unbiased (it rejects the top band rather than reducing modulo).
#[derive(Debug)]
pub struct RngSource<R> {
    rng: R,
    trial: u64,
    tape: Option<Tape>,
}

impl<R: Rng> RngSource<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, trial: 0, tape: None }
    }

    pub fn recording(rng: R) -> Self {
        Self { rng, trial: 0, tape: Some(Tape::default()) }
    }

    pub fn take_tape(&mut self) -> Option<Tape> {
        self.tape.take()
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }
}

impl<R: Rng> DrawSource for RngSource<R> {
    fn begin_trial(&mut self, trial: u64) {
        self.trial = trial;
    }

    fn draw(&mut self, choice: Choice, domain: Domain<'_>) -> Result<usize> {
        let size = domain.size();
        if size == 0 {
            return Err(Error::NoEligibleStructure(format!("empty support at choice {choice}")));
        }
        let raw = self.rng.gen_range(0..size);
        if let Some(tape) = &mut self.tape {
            tape.records.push(TapeRecord { trial: self.trial, choice, raw });
        }
        Ok(domain.resolve(raw))
    }
}

/// Replays a tape. Draws of each trial are consumed in order, and trials may
/// be interleaved arbitrarily.
#[derive(Debug)]
pub struct TapeSource<'t> {
    records: &'t [TapeRecord],
    per_trial: HashMap<u64, Vec<usize>>,
    cursor: HashMap<u64, usize>,
    trial: u64,
}

impl<'t> TapeSource<'t> {
    pub fn new(tape: &'t Tape) -> Self {
        let mut per_trial: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, rec) in tape.records.iter().enumerate() {
            per_trial.entry(rec.trial).or_default().push(i);
        }
        Self { records: &tape.records, per_trial, cursor: HashMap::new(), trial: 0 }
    }

    /// True when every record has been consumed.
    pub fn exhausted(&self) -> bool {
        self.per_trial
            .iter()
            .all(|(t, recs)| self.cursor.get(t).copied().unwrap_or(0) == recs.len())
    }
}

impl DrawSource for TapeSource<'_> {
    fn begin_trial(&mut self, trial: u64) {
        self.trial = trial;
    }

    fn draw(&mut self, choice: Choice, domain: Domain<'_>) -> Result<usize> {
        let trial = self.trial;
        let pos = self.cursor.entry(trial).or_insert(0);
        let idx = self
            .per_trial
            .get(&trial)
            .and_then(|v| v.get(*pos))
            .copied()
            .ok_or_else(|| Error::TapeExhausted { trial, choice: choice.to_string() })?;
        *pos += 1;
        let rec = self.records[idx];
        if rec.choice != choice {
            return Err(Error::TapeMismatch {
                trial,
                expected: choice.to_string(),
                found: rec.choice.to_string(),
            });
        }
        if rec.raw >= domain.size() {
            return Err(Error::TapeMismatch {
                trial,
                expected: format!("{choice} draw below {}", domain.size()),
                found: rec.raw.to_string(),
            });
        }
        Ok(domain.resolve(rec.raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tally(domain: Domain<'_>) -> Vec<u64> {
        let n = domain.outcomes().iter().map(|o| o.0).max().unwrap_or(0) + 1;
        let mut counts = vec![0; n];
        for raw in 0..domain.size() {
            counts[domain.resolve(raw)] += 1;
        }
        counts
    }

    fn expected(domain: Domain<'_>) -> Vec<u64> {
        let outs = domain.outcomes();
        let n = outs.iter().map(|o| o.0).max().unwrap_or(0) + 1;
        let mut counts = vec![0; n];
        for (i, w) in outs {
            counts[i] = w;
        }
        counts
    }

    #[test]
    fn resolve_matches_outcome_weights_exactly() {
        let acc = [2u64, 2, 5, 6, 10];
        for d in [
            Domain::Uniform(4),
            Domain::uniform_excluding(5, &[3]),
            Domain::uniform_excluding(5, &[4, 1]),
            Domain::Cumulative(&acc),
            Domain::CumulativeExcluding(&acc, 0),
            Domain::CumulativeExcluding(&acc, 2),
            Domain::CumulativeExcluding(&acc, 4),
            Domain::Bernoulli { accept: 3, total: 7 },
        ] {
            assert_eq!(tally(d), expected(d), "{d:?}");
            assert_eq!(d.outcomes().iter().map(|o| o.1).sum::<u64>(), d.size());
        }
    }

    #[test]
    fn uniform_excluding_skips_positions() {
        let d = Domain::uniform_excluding(4, &[1, 2]);
        assert_eq!(d.size(), 2);
        assert_eq!((d.resolve(0), d.resolve(1)), (0, 3));
        assert_eq!(Domain::uniform_excluding(1, &[0]).size(), 0);
    }

    #[test]
    fn empty_support_errors() {
        let mut src = RngSource::new(ChaCha8Rng::seed_from_u64(1));
        assert!(matches!(
            src.draw(Choice::W, Domain::uniform_excluding(1, &[0])),
            Err(Error::NoEligibleStructure(_))
        ));
    }

    #[test]
    fn tape_replays_interleaved_trials() {
        let acc = [1u64, 4, 9];
        let mut rec = RngSource::recording(ChaCha8Rng::seed_from_u64(7));
        let mut first = Vec::new();
        for t in 0..20 {
            rec.begin_trial(t);
            first.push((rec.draw(Choice::Root, Domain::Cumulative(&acc)).unwrap(), rec.draw(Choice::W, Domain::Uniform(5)).unwrap()));
        }
        let tape = rec.take_tape().unwrap();
        let mut replay = TapeSource::new(&tape);
        // consume all roots first, then the second draws
        let mut roots = Vec::new();
        for t in 0..20 {
            replay.begin_trial(t);
            roots.push(replay.draw(Choice::Root, Domain::Cumulative(&acc)).unwrap());
        }
        for t in 0..20 {
            replay.begin_trial(t);
            let w = replay.draw(Choice::W, Domain::Uniform(5)).unwrap();
            assert_eq!((roots[t as usize], w), first[t as usize]);
        }
        assert!(replay.exhausted());
        replay.begin_trial(3);
        assert!(matches!(replay.draw(Choice::R, Domain::Uniform(2)), Err(Error::TapeExhausted { .. })));
    }

    #[test]
    fn tape_label_mismatch_is_reported() {
        let tape = Tape { records: vec![TapeRecord { trial: 0, choice: Choice::U, raw: 0 }] };
        let mut src = TapeSource::new(&tape);
        src.begin_trial(0);
        assert!(matches!(src.draw(Choice::Root, Domain::Uniform(3)), Err(Error::TapeMismatch { .. })));
    }
}
