//! Koszul complexes and their sections.
//!
//! The basis of `∧^k R^n` is the `k`-subsets of `{0, ..., n-1}` in
//! lexicographic order. The differential sends `e_S` to
//! `Σ_j (-1)^j f_{s_j} e_{S \ s_j}`. When every entry of the sequence is
//! homogeneous, `e_S` sits in degree `Σ_{i∈S} deg f_i`; for a sequence of
//! variables that is `|S|`.

use crate::error::{Error, Result};
use crate::groebner::ResolutionData;
use crate::matrix::{binomial, subsets, FreeModuleSpec, PolyMatrix};
use crate::poly::{Polynomial, Ring};

fn check_sequence(seq: &[Polynomial]) -> Result<Ring> {
    let first = seq
        .first()
        .ok_or_else(|| Error::Precondition("Koszul sequence is empty".into()))?;
    let ring = first.ring().clone();
    for f in seq {
        ring.check_same(f.ring())?;
        if f.is_zero() {
            return Err(Error::Precondition(
                "Koszul sequence has a zero entry".into(),
            ));
        }
    }
    Ok(ring)
}

fn exterior_spec(seq: &[Polynomial], k: usize) -> FreeModuleSpec {
    let degrees: Option<Vec<u32>> = seq.iter().map(|f| f.homogeneous_degree()).collect();
    match degrees {
        Some(d) => FreeModuleSpec::graded(
            subsets(seq.len(), k)
                .iter()
                .map(|s| s.iter().map(|&i| d[i] as i32).sum())
                .collect(),
        ),
        None => FreeModuleSpec::new(binomial(seq.len(), k)),
    }
}

/// The Koszul differential `∧^k R^n -> ∧^{k-1} R^n` for `1 <= k <= n`.
pub fn koszul_differential(seq: &[Polynomial], k: usize) -> Result<PolyMatrix> {
    let ring = check_sequence(seq)?;
    let n = seq.len();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "Koszul differential index {k} outside 1..={n}"
        )));
    }
    let rows = subsets(n, k - 1);
    let cols = subsets(n, k);
    let mut entries = vec![ring.zero(); rows.len() * cols.len()];
    for (j, set) in cols.iter().enumerate() {
        for (pos, &drop) in set.iter().enumerate() {
            let face: Vec<usize> = set.iter().copied().filter(|&i| i != drop).collect();
            let i = rows.binary_search(&face).expect("faces are (k-1)-subsets");
            entries[i * cols.len() + j] = if pos % 2 == 0 {
                seq[drop].clone()
            } else {
                -&seq[drop]
            };
        }
    }
    PolyMatrix::new(
        &ring,
        exterior_spec(seq, k - 1),
        exterior_spec(seq, k),
        entries,
    )
}

/// `0 -> ∧^n -> ... -> ∧^1 -> ∧^0 = R`, with `f_k` the `k`-th differential.
pub fn koszul_complex(seq: &[Polynomial]) -> Result<ResolutionData> {
    let ring = check_sequence(seq)?;
    let diffs = (1..=seq.len())
        .map(|k| koszul_differential(seq, k))
        .collect::<Result<Vec<_>>>()?;
    ResolutionData::new(&ring, diffs)
}

/// The maps `∧^from -> ∧^{from+1} -> ... -> ∧^to` (wedging with
/// `Σ f_i e_i`, the transposes of the Koszul differentials), as a complex
/// with `F_0 = ∧^to` and `F_{to-from} = ∧^from`. Degrees are shifted so
/// that the generators of `F_0` start in degree 0.
pub fn koszul_section(seq: &[Polynomial], from: usize, to: usize) -> Result<ResolutionData> {
    let ring = check_sequence(seq)?;
    let n = seq.len();
    if from >= to || to > n {
        return Err(Error::Precondition(format!(
            "Koszul section {from}..{to} needs 0 <= from < to <= {n}"
        )));
    }
    let mut diffs: Vec<PolyMatrix> = (from + 1..=to)
        .rev()
        .map(|k| koszul_differential(seq, k).map(|d| d.dual()))
        .collect::<Result<Vec<_>>>()?;
    if let Some(low) = diffs[0]
        .target()
        .degrees()
        .and_then(|d| d.iter().min().copied())
    {
        diffs = diffs
            .into_iter()
            .map(|d| {
                let (t, s) = (d.target().shifted(-low), d.source().shifted(-low));
                d.with_specs(t, s)
            })
            .collect::<Result<Vec<_>>>()?;
    }
    ResolutionData::new(&ring, diffs)
}
