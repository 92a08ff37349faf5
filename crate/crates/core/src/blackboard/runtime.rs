use std::rc::Rc;

use serde::Serialize;

use super::bits::BitString;
use super::transcript::{Blackboard, Transcript};
use crate::coins::{Coins, Seed};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, PartitionFunction, ProblemKind, Solution};

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

/// What every party knows before any message is written.
#[derive(Clone, Debug)]
pub struct PublicInfo {
    pub n: usize,
    pub k: usize,
    /// Present only when the protocol runs with a known partition.
    pub partition: Option<Rc<PartitionFunction>>,
    pub coins: Coins,
}

/// One party's input.
#[derive(Clone, Debug)]
pub struct PartyView {
    pub id: usize,
    pub n: usize,
    pub k: usize,
    /// Edges of the input assigned to this party, canonical order.
    pub local_edges: Vec<Edge>,
    partition: Option<Rc<PartitionFunction>>,
    pub public: Coins,
    pub private: Coins,
}

impl PartyView {
    pub fn new(
        id: usize,
        n: usize,
        k: usize,
        local_edges: Vec<Edge>,
        partition: Option<Rc<PartitionFunction>>,
        public: Coins,
        private: Coins,
    ) -> Self {
        PartyView {
            id,
            n,
            k,
            local_edges,
            partition,
            public,
            private,
        }
    }

    pub fn knows_partition(&self) -> bool {
        self.partition.is_some()
    }

    /// The partition function, if this run reveals it to the parties.
    pub fn partition(&self) -> Result<&PartitionFunction> {
        self.partition.as_deref().ok_or(Error::PartitionHidden(self.id))
    }
}

/// A blackboard protocol.
///
/// `Shared` is the common-knowledge state: it may depend only on
/// [`PublicInfo`] and the board, never on a party's edges or private coins.
/// The runtime computes it once and hands the same value to every party,
/// which is equivalent to each party computing it for itself.
pub trait Protocol {
    type Shared;

    fn name(&self) -> &str;

    fn problem(&self) -> ProblemKind;

    /// Whether parties are told the partition function.
    fn knows_partition(&self) -> bool {
        false
    }

    /// Required party count, or `None` if any `k` works.
    fn parties(&self) -> Option<usize> {
        None
    }

    fn init(&self, info: &PublicInfo) -> Result<Self::Shared>;

    /// Called after every completed turn.
    fn observe(&self, shared: &mut Self::Shared, info: &PublicInfo, board: &Blackboard) -> Result<()>;

    /// Next party to write, or `None` once the protocol is finished.
    fn next_writer(&self, shared: &Self::Shared, board: &Blackboard) -> Option<usize>;

    /// Messages the party appends during its turn.
    fn take_turn(&self, shared: &Self::Shared, view: &PartyView, board: &Blackboard) -> Result<Vec<BitString>>;

    /// The party's output fragment once the protocol has finished.
    fn output(&self, shared: &Self::Shared, view: &PartyView, board: &Blackboard) -> Result<Solution>;
}

/// Transcript and outputs of one execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub board: Blackboard,
    pub per_party_outputs: Vec<Solution>,
    pub combined_output: Solution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunSeeds {
    pub public: Seed,
    pub private_master: Seed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub transcript: Transcript,
    pub per_party_outputs: Vec<Solution>,
    pub combined_output: Solution,
    /// Framed bits; the headline cost.
    pub cost_bits: usize,
    pub seeds: RunSeeds,
}

/// Party `i`'s share of the input: `{ e ∈ E(g) : z(e) = i }`, at index `i − 1`.
pub fn assign_edges(g: &Graph, z: &PartitionFunction) -> Result<Vec<Vec<Edge>>> {
    if z.n() != g.n() {
        return Err(Error::VertexCountMismatch {
            graph: g.n(),
            partition: z.n(),
        });
    }
    let mut parts = vec![Vec::new(); z.k()];
    for e in g.edges() {
        parts[z.party(e) - 1].push(e);
    }
    Ok(parts)
}

/// Public coins and per-party private coins of one execution.
#[derive(Clone, Debug)]
pub struct RunCoins {
    pub public: Coins,
    pub private_master: Coins,
}

impl RunCoins {
    pub fn seeded(public: &Seed, private_master: &Seed) -> Self {
        RunCoins {
            public: Coins::seeded(public),
            private_master: Coins::seeded(private_master),
        }
    }

    pub fn party(&self, id: usize) -> Coins {
        self.private_master.derive(&format!("party-{id}"))
    }
}

pub(crate) struct Setup {
    pub info: PublicInfo,
    pub views: Vec<PartyView>,
}

pub(crate) fn setup<P: Protocol + ?Sized>(
    p: &P,
    g: &Graph,
    z: &PartitionFunction,
    coins: &RunCoins,
) -> Result<Setup> {
    if let Some(expected) = p.parties() {
        if expected != z.k() {
            return Err(Error::PartyCountMismatch {
                expected,
                actual: z.k(),
            });
        }
    }
    let shares = assign_edges(g, z)?;
    let partition = p.knows_partition().then(|| Rc::new(z.clone()));
    let info = PublicInfo {
        n: g.n(),
        k: z.k(),
        partition: partition.clone(),
        coins: coins.public.clone(),
    };
    let views = shares
        .into_iter()
        .enumerate()
        .map(|(i, local_edges)| {
            PartyView::new(
                i + 1,
                g.n(),
                z.k(),
                local_edges,
                partition.clone(),
                coins.public.clone(),
                coins.party(i + 1),
            )
        })
        .collect();
    Ok(Setup { info, views })
}

/// Runs `p` on `(g, z)` with the given coins until it finishes.
pub fn execute<P: Protocol + ?Sized>(
    p: &P,
    g: &Graph,
    z: &PartitionFunction,
    coins: &RunCoins,
    step_budget: u64,
) -> Result<Execution> {
    let Setup { info, views } = setup(p, g, z, coins)?;
    let mut shared = p.init(&info)?;
    let mut board = Blackboard::new(info.k);
    let mut steps = 0u64;
    while let Some(writer) = p.next_writer(&shared, &board) {
        steps += 1;
        if steps > step_budget {
            return Err(Error::StepBudgetExceeded(step_budget));
        }
        if writer == 0 || writer > info.k {
            return Err(Error::InvalidWriter {
                party: writer,
                k: info.k,
            });
        }
        let messages = p.take_turn(&shared, &views[writer - 1], &board)?;
        board.push_turn(writer, messages);
        p.observe(&mut shared, &info, &board)?;
    }
    let per_party_outputs = views
        .iter()
        .map(|v| p.output(&shared, v, &board))
        .collect::<Result<Vec<_>>>()?;
    let combined_output = Solution::union(p.problem(), &per_party_outputs)?;
    Ok(Execution {
        board,
        per_party_outputs,
        combined_output,
    })
}

/// Runs `p` with seeded public and private coins.
pub fn run_protocol<P: Protocol + ?Sized>(
    p: &P,
    g: &Graph,
    z: &PartitionFunction,
    public_seed: &Seed,
    private_master_seed: &Seed,
) -> Result<RunRecord> {
    run_protocol_with_budget(p, g, z, public_seed, private_master_seed, DEFAULT_STEP_BUDGET)
}

pub fn run_protocol_with_budget<P: Protocol + ?Sized>(
    p: &P,
    g: &Graph,
    z: &PartitionFunction,
    public_seed: &Seed,
    private_master_seed: &Seed,
    step_budget: u64,
) -> Result<RunRecord> {
    let coins = RunCoins::seeded(public_seed, private_master_seed);
    let exec = execute(p, g, z, &coins, step_budget)?;
    Ok(RunRecord {
        cost_bits: exec.board.transcript().total_framed_bits(),
        transcript: exec.board.into_transcript(),
        per_party_outputs: exec.per_party_outputs,
        combined_output: exec.combined_output,
        seeds: RunSeeds {
            public: public_seed.clone(),
            private_master: private_master_seed.clone(),
        },
    })
}

/// Re-derives every turn of `record` from scratch: the shared state is
/// rebuilt from the board prefix alone, and the writer's messages are
/// recomputed from its own view. True iff every turn reproduces exactly.
pub fn replay_turns<P: Protocol + ?Sized>(
    p: &P,
    g: &Graph,
    z: &PartitionFunction,
    record: &RunRecord,
) -> Result<bool> {
    let coins = RunCoins::seeded(&record.seeds.public, &record.seeds.private_master);
    let Setup { info, views } = setup(p, g, z, &coins)?;
    let full = rebuild_board(p, &info, &views, &record.transcript)?;
    let Some(full) = full else { return Ok(false) };
    for i in 0..full.turns_completed() {
        let prefix = full.prefix(i);
        let mut shared = p.init(&info)?;
        for j in 1..=i {
            p.observe(&mut shared, &info, &full.prefix(j))?;
        }
        let turn = &full.turns()[i];
        if p.next_writer(&shared, &prefix) != Some(turn.party) {
            return Ok(false);
        }
        let again = p.take_turn(&shared, &views[turn.party - 1], &prefix)?;
        let written: Vec<BitString> = full.turn_records(i).iter().map(|r| r.payload.clone()).collect();
        if again != written {
            return Ok(false);
        }
    }
    Ok(true)
}

// Recovers the turn structure of a transcript by re-running the schedule.
fn rebuild_board<P: Protocol + ?Sized>(
    p: &P,
    info: &PublicInfo,
    views: &[PartyView],
    transcript: &Transcript,
) -> Result<Option<Blackboard>> {
    let mut shared = p.init(info)?;
    let mut board = Blackboard::new(info.k);
    while let Some(writer) = p.next_writer(&shared, &board) {
        let msgs = p.take_turn(&shared, &views[writer - 1], &board)?;
        board.push_turn(writer, msgs);
        p.observe(&mut shared, info, &board)?;
        if board.transcript().records().len() > transcript.records().len() {
            return Ok(None);
        }
    }
    Ok((board.transcript() == transcript).then_some(board))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_gnp, sample_partition};

    /// Party 1 writes forever.
    struct Chatter;

    impl Protocol for Chatter {
        type Shared = ();
        fn name(&self) -> &str {
            "chatter"
        }
        fn problem(&self) -> ProblemKind {
            ProblemKind::MaximalMatching
        }
        fn init(&self, _: &PublicInfo) -> Result<()> {
            Ok(())
        }
        fn observe(&self, _: &mut (), _: &PublicInfo, _: &Blackboard) -> Result<()> {
            Ok(())
        }
        fn next_writer(&self, _: &(), _: &Blackboard) -> Option<usize> {
            Some(1)
        }
        fn take_turn(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
            Ok(vec![BitString::from_iter([true])])
        }
        fn output(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Solution> {
            Ok(ProblemKind::MaximalMatching.empty_solution())
        }
    }

    /// Reads the partition without being entitled to it.
    struct Snoop;

    impl Protocol for Snoop {
        type Shared = ();
        fn name(&self) -> &str {
            "snoop"
        }
        fn problem(&self) -> ProblemKind {
            ProblemKind::MaximalMatching
        }
        fn init(&self, _: &PublicInfo) -> Result<()> {
            Ok(())
        }
        fn observe(&self, _: &mut (), _: &PublicInfo, _: &Blackboard) -> Result<()> {
            Ok(())
        }
        fn next_writer(&self, _: &(), b: &Blackboard) -> Option<usize> {
            (b.turns_completed() == 0).then_some(1)
        }
        fn take_turn(&self, _: &(), v: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
            v.partition()?;
            Ok(vec![])
        }
        fn output(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Solution> {
            Ok(ProblemKind::MaximalMatching.empty_solution())
        }
    }

    fn seeds() -> (Seed, Seed) {
        (Seed::new(1, "public"), Seed::new(1, "private"))
    }

    #[test]
    fn step_budget_stops_runaway_protocols() {
        let g = Graph::empty(2);
        let z = PartitionFunction::constant(2, 1, 1).unwrap();
        let (a, b) = seeds();
        assert_eq!(
            run_protocol_with_budget(&Chatter, &g, &z, &a, &b, 50),
            Err(Error::StepBudgetExceeded(50))
        );
    }

    #[test]
    fn hidden_partition_is_guarded() {
        let g = Graph::empty(2);
        let z = PartitionFunction::constant(2, 1, 1).unwrap();
        let (a, b) = seeds();
        assert_eq!(run_protocol(&Snoop, &g, &z, &a, &b), Err(Error::PartitionHidden(1)));
    }

    #[test]
    fn assign_edges_examples() {
        let z = PartitionFunction::constant(3, 4, 2).unwrap();
        let parts = assign_edges(&Graph::empty(3), &z).unwrap();
        assert!(parts.iter().all(Vec::is_empty));
        let parts = assign_edges(&Graph::complete(3), &z).unwrap();
        assert_eq!(parts[1].len(), 3);
        assert!(parts[0].is_empty() && parts[2].is_empty() && parts[3].is_empty());
        let bad = PartitionFunction::constant(4, 2, 1).unwrap();
        assert!(matches!(assign_edges(&Graph::empty(3), &bad), Err(Error::VertexCountMismatch { .. })));
    }

    #[test]
    fn assign_edges_partitions_the_edge_set() {
        for i in 0..100u64 {
            let n = 2 + (i % 9) as usize;
            let k = 1 + (i % 5) as usize;
            let g = sample_gnp(n, 0.5, &Seed::new(i, "g"));
            let z = sample_partition(n, k, &Seed::new(i, "z")).unwrap();
            let parts = assign_edges(&g, &z).unwrap();
            let mut all: Vec<Edge> = parts.iter().flatten().copied().collect();
            let total = all.len();
            all.sort();
            all.dedup();
            assert_eq!(total, all.len());
            assert_eq!(all, g.edges().collect::<Vec<_>>());
            for (i, part) in parts.iter().enumerate() {
                assert!(part.iter().all(|&e| z.party(e) == i + 1));
            }
        }
    }
}
