use super::{Graph, ProblemKind};
use crate::error::{Error, Result};

const MAX_VERTICES: usize = 24;

/// Exact α(g), γ(g) or τ(g) by subset enumeration, for
/// `MaximalIndependentSet`, `MinDominatingSet` and `MinVertexCover`.
pub fn brute_force_optimum(p: ProblemKind, g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertices",
            value: n,
            limit: MAX_VERTICES,
        });
    }
    let adj: Vec<u32> = (1..=n)
        .map(|v| g.neighbors(v).fold(0, |m, u| m | 1 << (u - 1)))
        .collect();
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let subsets = 0..=full;
    let value = match p {
        ProblemKind::MaximalIndependentSet => subsets
            .filter(|&s| members(s).all(|v| adj[v] & s == 0))
            .map(u32::count_ones)
            .max(),
        ProblemKind::MinDominatingSet => subsets
            .filter(|&s| members(s).fold(s, |d, v| d | adj[v]) == full)
            .map(u32::count_ones)
            .min(),
        ProblemKind::MinVertexCover => subsets
            .filter(|&s| members(!s & full).all(|v| adj[v] & !s == 0))
            .map(u32::count_ones)
            .min(),
        other => return Err(Error::NoOptimum(other.to_string())),
    };
    Ok(value.unwrap_or(0) as usize)
}

fn members(mut s: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (s != 0).then(|| {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            v
        })
    })
}
