use std::collections::BTreeMap;
use std::rc::Rc;

use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::coins::{enumerate_paths, Coins};
use crate::error::{Error, Result};
use crate::graph::{all_pairs, Edge, Graph, PartitionFunction, ProblemKind, Solution};

use super::table::{all_partitions, InputDistribution, MAX_ROWS};

/// A protocol for single `t`-vertex gadgets built from a protocol `P` for
/// `n`-vertex multi-gadget inputs: the real gadget is hidden at a public
/// random block, the rest of the partition is drawn publicly, and the
/// other gadgets are filled in by their owners' private coins.
#[derive(Clone, Debug)]
pub struct GadgetEmbedding<P> {
    inner: P,
    t: usize,
    n: usize,
    k: usize,
}

pub fn embed_single_gadget<P: Protocol>(p: P, t: usize, n: usize, k: usize) -> Result<GadgetEmbedding<P>> {
    if t < 2 || !n.is_multiple_of(t) {
        return Err(Error::Indivisible { n, t });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if let Some(expected) = p.parties() {
        if expected != k {
            return Err(Error::PartyCountMismatch { expected, actual: k });
        }
    }
    Ok(GadgetEmbedding { inner: p, t, n, k })
}

#[derive(Clone, Debug)]
pub struct EmbeddedShared<S> {
    /// 0-based index of the block holding the real gadget.
    pub block: usize,
    pub partition: Rc<PartitionFunction>,
    info: PublicInfo,
    inner: S,
}

impl<P: Protocol> GadgetEmbedding<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }

    fn offset(&self, block: usize) -> usize {
        block * self.t
    }

    fn block_of(&self, v: usize) -> usize {
        (v - 1) / self.t
    }

    /// Draws the hidden block and the full partition from public coins.
    fn draw_public(&self, z: &PartitionFunction, public: &Coins) -> Result<(usize, PartitionFunction)> {
        let block = public.derive("index").stream().below((self.n / self.t) as u64) as usize;
        let off = self.offset(block);
        let mut s = public.derive("zprime").stream();
        let parties = all_pairs(self.n)
            .map(|e| {
                if self.block_of(e.u()) == block && self.block_of(e.v()) == block {
                    z.party(Edge::new(e.u() - off, e.v() - off))
                } else {
                    1 + s.below(self.k as u64) as usize
                }
            })
            .collect();
        Ok((block, PartitionFunction::new(self.n, self.k, parties)?))
    }

    /// Party `id`'s edges of the constructed input: its real gadget edges
    /// moved to `block`, plus a private coin per other-gadget pair it holds.
    fn party_edges(
        &self,
        block: usize,
        zprime: &PartitionFunction,
        id: usize,
        real: &[Edge],
        private: &Coins,
    ) -> Vec<Edge> {
        let off = self.offset(block);
        let mut edges: Vec<Edge> = real.iter().map(|e| Edge::new(e.u() + off, e.v() + off)).collect();
        let mut fill = private.derive("fill").stream();
        for e in zprime.pairs_of(id) {
            let b = self.block_of(e.u());
            if b != block && b == self.block_of(e.v()) && fill.coin() {
                edges.push(e);
            }
        }
        edges.sort();
        edges
    }

    fn inner_view(&self, s: &EmbeddedShared<P::Shared>, view: &PartyView) -> PartyView {
        let edges = self.party_edges(s.block, &s.partition, view.id, &view.local_edges, &view.private);
        PartyView::new(
            view.id,
            self.n,
            self.k,
            edges,
            s.info.partition.clone(),
            s.info.coins.clone(),
            view.private.derive("inner"),
        )
    }

    /// Exact distribution of the `(G, Z')` pairs the embedding feeds to the
    /// inner protocol when `(H, z)` is drawn from λ × ρ_t, keyed by
    /// `(edge mask of G, party vector of Z')`.
    pub fn constructed_input_distribution(&self) -> Result<BTreeMap<(u64, Vec<usize>), f64>> {
        let hs = InputDistribution::Gadget { t: self.t }.support()?;
        let zs = all_partitions(self.t, self.k)?;
        let pz = 1.0 / zs.len() as f64;
        let mut out: BTreeMap<(u64, Vec<usize>), f64> = BTreeMap::new();
        for (h, ph) in &hs {
            for z in &zs {
                let shares = crate::blackboard::assign_edges(h, z)?;
                let paths = enumerate_paths(MAX_ROWS, |tape| {
                    let public = Coins::on_tape(tape, "public");
                    let private = Coins::on_tape(tape, "private");
                    let (block, zprime) = self.draw_public(z, &public)?;
                    let mut edges = Vec::new();
                    for id in 1..=self.k {
                        let coins = private.derive(&format!("party-{id}"));
                        edges.extend(self.party_edges(block, &zprime, id, &shares[id - 1], &coins));
                    }
                    let g = Graph::from_edges(self.n, edges)?;
                    Ok((g.pair_mask(), zprime.parties().to_vec()))
                })?;
                for path in paths {
                    *out.entry(path.value).or_default() += ph * pz * path.probability;
                }
            }
        }
        Ok(out)
    }
}

impl<P: Protocol> Protocol for GadgetEmbedding<P> {
    type Shared = EmbeddedShared<P::Shared>;

    fn name(&self) -> &str {
        "gadget-embedding"
    }

    fn problem(&self) -> ProblemKind {
        self.inner.problem()
    }

    fn knows_partition(&self) -> bool {
        true
    }

    fn parties(&self) -> Option<usize> {
        Some(self.k)
    }

    fn init(&self, info: &PublicInfo) -> Result<Self::Shared> {
        let z = info.partition.as_deref().ok_or(Error::PartitionHidden(0))?;
        if z.n() != self.t {
            return Err(Error::VertexCountMismatch {
                graph: self.t,
                partition: z.n(),
            });
        }
        let (block, zprime) = self.draw_public(z, &info.coins)?;
        let partition = Rc::new(zprime);
        let inner_info = PublicInfo {
            n: self.n,
            k: self.k,
            partition: self.inner.knows_partition().then(|| Rc::clone(&partition)),
            coins: info.coins.derive("inner"),
        };
        let inner = self.inner.init(&inner_info)?;
        Ok(EmbeddedShared {
            block,
            partition,
            info: inner_info,
            inner,
        })
    }

    fn observe(&self, s: &mut Self::Shared, _: &PublicInfo, board: &Blackboard) -> Result<()> {
        self.inner.observe(&mut s.inner, &s.info, board)
    }

    fn next_writer(&self, s: &Self::Shared, board: &Blackboard) -> Option<usize> {
        self.inner.next_writer(&s.inner, board)
    }

    fn take_turn(&self, s: &Self::Shared, view: &PartyView, board: &Blackboard) -> Result<Vec<BitString>> {
        self.inner.take_turn(&s.inner, &self.inner_view(s, view), board)
    }

    fn output(&self, s: &Self::Shared, view: &PartyView, board: &Blackboard) -> Result<Solution> {
        let full = self.inner.output(&s.inner, &self.inner_view(s, view), board)?;
        Ok(full.restrict_to_block(self.offset(s.block), self.t))
    }
}
