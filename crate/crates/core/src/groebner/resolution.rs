use super::syzygies;
use crate::error::{Error, Result};
use crate::matrix::{FreeModuleSpec, PolyMatrix};
use crate::poly::{Polynomial, Ring};

/// A finite complex of free modules `... -> F_2 -> F_1 -> F_0`, stored as
/// its differentials `f_1: F_1 -> F_0` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    ring: Ring,
    differentials: Vec<PolyMatrix>,
    minimal: bool,
}

impl ResolutionData {
    /// Checks composability and `f_k ∘ f_{k+1} = 0`.
    pub fn new(ring: &Ring, differentials: Vec<PolyMatrix>) -> Result<Self> {
        if differentials.is_empty() {
            return Err(Error::Dimension("a complex needs at least one map".into()));
        }
        for (k, d) in differentials.iter().enumerate() {
            ring.check_same(d.ring())?;
            if let Some(next) = differentials.get(k + 1) {
                let comp = d.compose(next).map_err(|_| {
                    Error::Dimension(format!("f_{} and f_{} are not composable", k + 1, k + 2))
                })?;
                if !comp.is_zero() {
                    return Err(Error::Validation(format!(
                        "f_{} ∘ f_{} is not zero",
                        k + 1,
                        k + 2
                    )));
                }
            }
        }
        let minimal = differentials.iter().all(|d| d.unit_positions().is_empty())
            && differentials.iter().all(PolyMatrix::is_graded);
        Ok(Self {
            ring: ring.clone(),
            differentials,
            minimal,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.differentials
    }

    pub fn into_differentials(self) -> Vec<PolyMatrix> {
        self.differentials
    }

    /// `f_k` for `k >= 1`.
    pub fn differential(&self, k: usize) -> Option<&PolyMatrix> {
        k.checked_sub(1).and_then(|i| self.differentials.get(i))
    }

    /// Set when every map is graded and has no unit entries.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn is_graded(&self) -> bool {
        self.differentials.iter().all(PolyMatrix::is_graded)
    }

    /// Ranks of `F_0, F_1, ..., F_n`.
    pub fn ranks(&self) -> Vec<usize> {
        std::iter::once(self.differentials[0].rows())
            .chain(self.differentials.iter().map(|d| d.cols()))
            .collect()
    }

    /// Largest `k` with `F_k != 0` (0 for the zero complex).
    pub fn length(&self) -> usize {
        self.ranks().iter().rposition(|&r| r > 0).unwrap_or(0)
    }

    pub fn presentation(&self) -> &PolyMatrix {
        &self.differentials[0]
    }

    pub fn module_spec(&self, k: usize) -> &FreeModuleSpec {
        if k == 0 {
            self.differentials[0].target()
        } else {
            self.differentials[k - 1].source()
        }
    }
}

/// Free resolution of `Coker(presentation)` by iterated syzygies. Stops
/// when a kernel vanishes, after `max_length` maps, or at the number of
/// variables, whichever comes first.
pub fn resolve(presentation: &PolyMatrix, max_length: usize) -> ResolutionData {
    let ring = presentation.ring().clone();
    let bound = max_length.min(ring.nvars()).max(1);
    let mut diffs = vec![presentation.clone()];
    while diffs.len() < bound {
        let last = diffs.last().unwrap();
        if last.cols() == 0 {
            break;
        }
        let s = syzygies(last);
        if s.cols() == 0 {
            break;
        }
        diffs.push(s);
    }
    let minimal = diffs.iter().all(|d| d.unit_positions().is_empty())
        && diffs.iter().all(PolyMatrix::is_graded);
    ResolutionData {
        ring,
        differentials: diffs,
        minimal,
    }
}

/// Result of pruning, with the comparison maps between the old and new
/// `F_0`. They induce mutually inverse isomorphisms of the cokernels.
#[derive(Clone, Debug)]
pub struct PruneOutcome {
    pub resolution: ResolutionData,
    /// `F_0 -> F_0'`
    pub to_pruned: PolyMatrix,
    /// `F_0' -> F_0`
    pub from_pruned: PolyMatrix,
}

pub fn prune(res: &ResolutionData) -> Result<ResolutionData> {
    prune_with_witness(res).map(|o| o.resolution)
}

type Dense = Vec<Vec<Polynomial>>;

fn dense(m: &PolyMatrix) -> Dense {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn ncols(d: &Dense, fallback: usize) -> usize {
    d.first().map_or(fallback, |r| r.len())
}

/// Cancels unit entries one at a time: a unit `a` at `(i, j)` of `f_k`
/// splits off `R --a--> R`, leaving the Schur complement in `f_k`, `f_{k+1}`
/// without row `j`, and `f_{k-1}` without column `i`.
pub fn prune_with_witness(res: &ResolutionData) -> Result<PruneOutcome> {
    if !res.is_graded() {
        return Err(Error::Ungraded(
            "prune needs generator degrees on every module".into(),
        ));
    }
    let ring = res.ring.clone();
    let field = ring.field();
    let n = res.differentials.len();
    let mut mats: Vec<Dense> = res.differentials.iter().map(dense).collect();
    let mut col_counts: Vec<usize> = res.differentials.iter().map(|d| d.cols()).collect();
    let mut degs: Vec<Vec<i32>> = (0..=n)
        .map(|k| res.module_spec(k).degrees().unwrap().to_vec())
        .collect();
    let f0 = degs[0].len();
    let mut to_pruned: Dense = (0..f0)
        .map(|i| {
            (0..f0)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect();
    // columns of from_pruned are the surviving original basis vectors
    let mut from_pruned_cols: Vec<usize> = (0..f0).collect();

    loop {
        let mut found = None;
        'search: for (k, m) in mats.iter().enumerate() {
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if e.is_unit() {
                        found = Some((k, i, j));
                        break 'search;
                    }
                }
            }
        }
        let Some((k, i, j)) = found else { break };
        let a_inv = field.inv(mats[k][i][j].leading_coefficient());
        let m = &mats[k];
        let cols = ncols(m, col_counts[k]);
        let mut reduced: Dense = Vec::with_capacity(m.len() - 1);
        for (r, row) in m.iter().enumerate() {
            if r == i {
                continue;
            }
            let factor = row[j].scale(a_inv);
            let mut new_row = Vec::with_capacity(cols - 1);
            for (c, e) in row.iter().enumerate() {
                if c == j {
                    continue;
                }
                if factor.is_zero() || m[i][c].is_zero() {
                    new_row.push(e.clone());
                } else {
                    new_row.push(e - &(&factor * &m[i][c]));
                }
            }
            reduced.push(new_row);
        }
        if k == 0 {
            // F_0 -> F_0': e_r -> e_r' for r != i, e_i -> -sum_r f[r][j]/a e_r'
            let mut next: Dense = Vec::with_capacity(reduced.len());
            for (r, row) in m.iter().enumerate() {
                if r == i {
                    continue;
                }
                let factor = row[j].scale(a_inv);
                let new_row: Vec<Polynomial> = to_pruned[r]
                    .iter()
                    .zip(&to_pruned[i])
                    .map(|(x, y)| {
                        if factor.is_zero() {
                            x.clone()
                        } else {
                            x - &(&factor * y)
                        }
                    })
                    .collect();
                next.push(new_row);
            }
            to_pruned = next;
            from_pruned_cols.remove(i);
        }
        mats[k] = reduced;
        col_counts[k] -= 1;
        if k + 1 < n {
            mats[k + 1].remove(j);
        }
        if k >= 1 {
            for row in mats[k - 1].iter_mut() {
                row.remove(i);
            }
            col_counts[k - 1] -= 1;
        }
        degs[k].remove(i);
        degs[k + 1].remove(j);
    }

    let mut diffs = Vec::with_capacity(n);
    for k in 0..n {
        let target = FreeModuleSpec::graded(degs[k].clone());
        let source = FreeModuleSpec::graded(degs[k + 1].clone());
        let entries: Vec<Polynomial> = mats[k].iter().flatten().cloned().collect();
        diffs.push(PolyMatrix::new(&ring, target, source, entries)?);
    }
    while diffs.len() > 1 && diffs.last().unwrap().cols() == 0 {
        diffs.pop();
    }
    let f0_spec = res.module_spec(0).clone();
    let f0_new = FreeModuleSpec::graded(degs[0].clone());
    let to_pruned = PolyMatrix::new(
        &ring,
        f0_new.clone(),
        f0_spec.clone(),
        to_pruned.into_iter().flatten().collect(),
    )?;
    let mut from_entries = vec![ring.zero(); f0 * from_pruned_cols.len()];
    for (c, &orig) in from_pruned_cols.iter().enumerate() {
        from_entries[orig * from_pruned_cols.len() + c] = ring.one();
    }
    let from_pruned = PolyMatrix::new(&ring, f0_spec, f0_new, from_entries)?;
    Ok(PruneOutcome {
        resolution: ResolutionData {
            ring,
            differentials: diffs,
            minimal: true,
        },
        to_pruned,
        from_pruned,
    })
}
