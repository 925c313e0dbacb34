//! The samplers rewritten as a vertex-centric program and a superstep
//! engine to run it.
//!
//! Root nodes are drawn centrally and each node `v` receives its trial
//! count `k_v`. From then on a trial lives in a message that travels between
//! role nodes. Every node a message visits draws only what it can draw from
//! its own adjacency, fills in the adjacency entries between itself and the
//! role nodes already known, and forwards the message. The last node fills
//! the remaining entries and classifies.
//!
//! Messages are delivered once, in the superstep after they are sent, in
//! order of sender and then per-sender sequence number. Given the same
//! decision tape the engine makes exactly the draws of the direct sampler.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::draw::{DrawSource, Tape, TapeSource};
use crate::error::{Error, Result};
use crate::samplers::{Method, Outcome, Sampler, Tally};

/// One adjacency entry between two role nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Unknown,
    Present,
    Absent,
}

/// What the receiving node has to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Draw at `u`.
    AtU,
    /// Fork-tree sampler: pass through `t` on the way to `w`.
    AtT,
    /// 5-path sampler: draw `t` at `w`.
    AtW,
    /// 5-path sampler: pass through `t` on the way to `r`.
    PathAtT,
    /// Resolve the last entries and classify.
    Final,
}

/// Role slots, in sampling order.
pub const SLOT_NAMES: [&str; 5] = ["v", "u", "w", "r", "t"];
const V: usize = 0;
const U: usize = 1;
const W: usize = 2;
const R: usize = 3;
const T: usize = 4;

/// Index of the slot pair `(i, j)`, `i < j`, in row-major order.
fn pair(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // rows of a 5x5 upper triangle: 0..4, 4..7, 7..9, 9..10
    [0, 4, 7, 9][i] + (j - i - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexMessage {
    pub trial: u64,
    pub slots: [Option<usize>; 5],
    pub adjacency: [Edge; 10],
    pub stage: Stage,
    pub sender: usize,
    pub dest: usize,
    pub seq: u64,
}

impl VertexMessage {
    /// Resolves every entry between `slot`'s node and the other known
    /// slots from that node's own adjacency list.
    fn update(&mut self, sampler: &Sampler<'_>, slot: usize) {
        let graph = &sampler.graph().graph;
        let me = self.slots[slot].expect("updating node holds a slot");
        for other in 0..5 {
            if other == slot {
                continue;
            }
            if let Some(x) = self.slots[other] {
                let present = graph.position(me, x).is_some();
                self.adjacency[pair(slot, other)] = if present { Edge::Present } else { Edge::Absent };
            }
        }
    }

    fn node(&self, slot: usize) -> usize {
        self.slots[slot].expect("slot is known at this stage")
    }

    /// Induced pair mask over the first `len` slots; `None` if any entry is
    /// still unknown.
    fn mask(&self, len: usize) -> Option<u16> {
        let mut mask = 0u16;
        let mut bit = 0;
        for i in 0..len {
            for j in i + 1..len {
                match self.adjacency[pair(i, j)] {
                    Edge::Unknown => return None,
                    Edge::Present => mask |= 1 << bit,
                    Edge::Absent => {}
                }
                bit += 1;
            }
        }
        Some(mask)
    }
}

/// Result of a vertex-centric run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRun {
    pub tally: Tally,
    /// Supersteps that delivered at least one message.
    pub message_supersteps: u32,
    pub messages: u64,
    /// Messages whose destination is not a neighbor of the sender. Only the
    /// hops that gather a missing adjacency entry (fork tree: `t → w`;
    /// 5-path: `u → w`, `t → r`) can be non-local.
    pub nonlocal_messages: u64,
    /// `k_v` for every node with at least one trial.
    pub trials_per_root: BTreeMap<usize, u64>,
}

struct Engine<'s, 'g, 't, S> {
    sampler: &'s Sampler<'g>,
    src: &'s mut S,
    trace: Option<&'t mut dyn Write>,
    outbox: Vec<VertexMessage>,
    seq: Vec<u64>,
    tally: Tally,
    messages: u64,
    nonlocal: u64,
}

impl<S: DrawSource> Engine<'_, '_, '_, S> {
    fn send(&mut self, mut msg: VertexMessage, from: usize, to: usize, must_be_neighbor: bool) -> Result<()> {
        let adjacent = self.sampler.graph().graph.position(from, to).is_some();
        assert!(adjacent || !must_be_neighbor, "sampling hop {from} -> {to} is not along an edge");
        if !adjacent {
            self.nonlocal += 1;
        }
        msg.sender = from;
        msg.dest = to;
        msg.seq = self.seq[from];
        self.seq[from] += 1;
        self.messages += 1;
        if let Some(out) = self.trace.as_mut() {
            serde_json::to_writer(&mut **out, &msg)?;
            out.write_all(b"\n")?;
        }
        self.outbox.push(msg);
        Ok(())
    }

    fn start(&mut self, v: usize, trial: u64) -> Result<()> {
        self.src.begin_trial(trial);
        let draws = self.sampler.at_root(v, self.src)?;
        let mut slots = [None; 5];
        slots[V] = Some(v);
        slots[U] = Some(draws.u);
        slots[W] = Some(draws.w);
        slots[R] = draws.r;
        let mut msg = VertexMessage {
            trial,
            slots,
            adjacency: [Edge::Unknown; 10],
            stage: Stage::AtU,
            sender: v,
            dest: draws.u,
            seq: 0,
        };
        msg.update(self.sampler, V);
        self.send(msg, v, draws.u, true)
    }

    fn finish(&mut self, msg: &VertexMessage) {
        let len = self.sampler.method().nodes();
        let mask = msg.mask(len).expect("every adjacency entry is resolved at the last node");
        self.tally.record(self.sampler.credit(mask));
    }

    fn degenerate_unless_distinct(&mut self, msg: &VertexMessage) -> bool {
        let len = self.sampler.method().nodes();
        let nodes: Vec<usize> = (0..len).map(|s| msg.node(s)).collect();
        if self.sampler.distinct(&nodes) {
            false
        } else {
            self.tally.record(Outcome::Degenerate);
            true
        }
    }

    fn handle(&mut self, here: usize, mut msg: VertexMessage) -> Result<()> {
        let method = self.sampler.method();
        self.src.begin_trial(msg.trial);
        let v = msg.node(V);
        match (method, msg.stage) {
            (Method::Moss4 | Method::Moss4Min, Stage::AtU) => {
                msg.update(self.sampler, U);
                let r = self.sampler.at_u(here, v, self.src)?;
                msg.slots[R] = Some(r);
                msg.update(self.sampler, U);
                if self.degenerate_unless_distinct(&msg) {
                    return Ok(());
                }
                msg.stage = Stage::Final;
                self.send(msg, here, r, true)
            }
            (Method::T5, Stage::AtU) => {
                msg.update(self.sampler, U);
                let t = self.sampler.at_u(here, v, self.src)?;
                msg.slots[T] = Some(t);
                msg.update(self.sampler, U);
                if self.degenerate_unless_distinct(&msg) {
                    return Ok(());
                }
                msg.stage = Stage::AtT;
                self.send(msg, here, t, true)
            }
            (Method::T5, Stage::AtT) => {
                msg.update(self.sampler, T);
                msg.stage = Stage::Final;
                let w = msg.node(W);
                self.send(msg, here, w, false)
            }
            (Method::Path5, Stage::AtU) => {
                msg.update(self.sampler, U);
                let r = self.sampler.at_u(here, v, self.src)?;
                msg.slots[R] = Some(r);
                msg.update(self.sampler, U);
                msg.stage = Stage::AtW;
                let w = msg.node(W);
                self.send(msg, here, w, false)
            }
            (Method::Path5, Stage::AtW) => {
                msg.update(self.sampler, W);
                let t = self.sampler.at_w(here, v, self.src)?;
                msg.slots[T] = Some(t);
                msg.update(self.sampler, W);
                if self.degenerate_unless_distinct(&msg) {
                    return Ok(());
                }
                msg.stage = Stage::PathAtT;
                self.send(msg, here, t, true)
            }
            (Method::Path5, Stage::PathAtT) => {
                msg.update(self.sampler, T);
                msg.stage = Stage::Final;
                let r = msg.node(R);
                self.send(msg, here, r, false)
            }
            (_, Stage::Final) => {
                let slot = match method {
                    Method::Moss4 | Method::Moss4Min | Method::Path5 => R,
                    Method::T5 => W,
                };
                msg.update(self.sampler, slot);
                self.finish(&msg);
                Ok(())
            }
            (m, s) => Err(Error::InvalidArgument(format!("{m} has no handler for stage {s:?}"))),
        }
    }
}

/// Runs `budget` trials as a vertex-centric program, drawing from `src`.
/// Trial `k` makes exactly the draws trial `k` of the direct sampler makes.
pub fn run_vertex<S: DrawSource>(
    sampler: &Sampler<'_>,
    budget: u64,
    src: &mut S,
    trace: Option<&mut dyn Write>,
) -> Result<VertexRun> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let n = sampler.graph().graph.node_count();

    // phase 1: root draws, centralized
    let mut roots: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for trial in 0..budget {
        src.begin_trial(trial);
        roots.entry(sampler.draw_root(src)?).or_default().push(trial);
    }
    let trials_per_root: BTreeMap<usize, u64> = roots.iter().map(|(&v, t)| (v, t.len() as u64)).collect();
    debug_assert_eq!(trials_per_root.values().sum::<u64>(), budget);

    let mut engine = Engine {
        sampler,
        src,
        trace,
        outbox: Vec::new(),
        seq: vec![0; n],
        tally: Tally::new(sampler.method()),
        messages: 0,
        nonlocal: 0,
    };
    for (&v, trials) in &roots {
        for &trial in trials {
            engine.start(v, trial)?;
        }
    }

    // phase 2: supersteps until no message is in flight
    let mut supersteps = 0;
    while !engine.outbox.is_empty() {
        supersteps += 1;
        let mut inbox = std::mem::take(&mut engine.outbox);
        inbox.sort_by_key(|m| (m.dest, m.sender, m.seq));
        for msg in inbox {
            let here = msg.dest;
            engine.handle(here, msg)?;
        }
    }

    Ok(VertexRun {
        tally: engine.tally,
        message_supersteps: supersteps,
        messages: engine.messages,
        nonlocal_messages: engine.nonlocal,
        trials_per_root,
    })
}

/// Replays a decision tape recorded by the direct sampler. Fails if the
/// tape does not match the method's draws or is not consumed completely.
pub fn replay(sampler: &Sampler<'_>, tape: &Tape, trace: Option<&mut dyn Write>) -> Result<VertexRun> {
    let budget = tape.records.iter().map(|r| r.trial + 1).max().unwrap_or(0);
    let mut src = TapeSource::new(tape);
    let run = run_vertex(sampler, budget, &mut src, trace)?;
    if !src.exhausted() {
        return Err(Error::TapeMismatch {
            trial: budget,
            expected: "end of tape".into(),
            found: "unconsumed draws".into(),
        });
    }
    Ok(run)
}
