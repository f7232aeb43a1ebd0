//! Free modules and matrices over the polynomial ring.
//!
//! A `PolyMatrix` with `rows = rank(target)` and `cols = rank(source)`
//! represents a map `source -> target` acting on column vectors. When both
//! sides carry generator degrees the matrix is graded: every nonzero entry
//! `(i, j)` is homogeneous of degree `deg source[j] - deg target[i]`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::IdealData;
use crate::poly::{Polynomial, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FreeModuleSpec {
    rank: usize,
    degrees: Option<Vec<i32>>,
}

impl FreeModuleSpec {
    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            degrees: None,
        }
    }

    pub fn graded(degrees: Vec<i32>) -> Self {
        Self {
            rank: degrees.len(),
            degrees: Some(degrees),
        }
    }

    /// Generators all placed in the same degree.
    pub fn uniform(rank: usize, degree: i32) -> Self {
        Self::graded(vec![degree; rank])
    }

    pub fn with_degrees(rank: usize, degrees: Option<Vec<i32>>) -> Result<Self> {
        if let Some(d) = &degrees {
            if d.len() != rank {
                return Err(Error::Dimension(format!(
                    "{} degrees given for a free module of rank {rank}",
                    d.len()
                )));
            }
        }
        Ok(Self { rank, degrees })
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degrees(&self) -> Option<&[i32]> {
        self.degrees.as_deref()
    }

    pub fn degree(&self, i: usize) -> Option<i32> {
        self.degrees.as_ref().map(|d| d[i])
    }

    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }

    pub fn ungraded(&self) -> Self {
        Self::new(self.rank)
    }

    pub fn negated(&self) -> Self {
        Self {
            rank: self.rank,
            degrees: self
                .degrees
                .as_ref()
                .map(|d| d.iter().map(|x| -x).collect()),
        }
    }

    /// Every generator degree moved by `delta`.
    pub fn shifted(&self, delta: i32) -> Self {
        Self {
            rank: self.rank,
            degrees: self
                .degrees
                .as_ref()
                .map(|d| d.iter().map(|x| x + delta).collect()),
        }
    }

    /// Direct sum; graded only if both summands are.
    pub fn direct_sum(&self, other: &FreeModuleSpec) -> Self {
        let degrees = match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Self {
            rank: self.rank + other.rank,
            degrees,
        }
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            rank: indices.len(),
            degrees: self
                .degrees
                .as_ref()
                .map(|d| indices.iter().map(|&i| d[i]).collect()),
        }
    }

    /// Same rank, and same degrees whenever both sides are graded.
    pub fn compatible(&self, other: &FreeModuleSpec) -> bool {
        self.rank == other.rank
            && match (&self.degrees, &other.degrees) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Ring,
    source: FreeModuleSpec,
    target: FreeModuleSpec,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Validates shape, ring membership and (when graded) homogeneity.
    pub fn new(
        ring: &Ring,
        target: FreeModuleSpec,
        source: FreeModuleSpec,
        entries: Vec<Polynomial>,
    ) -> Result<Self> {
        if entries.len() != target.rank * source.rank {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                target.rank,
                source.rank
            )));
        }
        for e in &entries {
            ring.check_same(e.ring())?;
        }
        let m = Self {
            ring: ring.clone(),
            source,
            target,
            entries,
        };
        m.check_grading()?;
        Ok(m)
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(
            ring,
            FreeModuleSpec::new(nrows),
            FreeModuleSpec::new(ncols),
            rows.into_iter().flatten().collect(),
        )
    }

    pub fn from_columns(
        ring: &Ring,
        target: FreeModuleSpec,
        source: FreeModuleSpec,
        columns: &[Vec<Polynomial>],
    ) -> Result<Self> {
        if columns.len() != source.rank || columns.iter().any(|c| c.len() != target.rank) {
            return Err(Error::Dimension("column shapes do not match specs".into()));
        }
        let mut entries = Vec::with_capacity(target.rank * source.rank);
        for i in 0..target.rank {
            for c in columns {
                entries.push(c[i].clone());
            }
        }
        Self::new(ring, target, source, entries)
    }

    pub fn zero(ring: &Ring, target: FreeModuleSpec, source: FreeModuleSpec) -> Self {
        let n = target.rank * source.rank;
        Self {
            ring: ring.clone(),
            source,
            target,
            entries: vec![ring.zero(); n],
        }
    }

    pub fn identity(ring: &Ring, spec: FreeModuleSpec) -> Self {
        let n = spec.rank;
        let mut m = Self::zero(ring, spec.clone(), spec);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    fn check_grading(&self) -> Result<()> {
        let (Some(td), Some(sd)) = (self.target.degrees(), self.source.degrees()) else {
            return Ok(());
        };
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let want = sd[j] - td[i];
                match e.homogeneous_degree() {
                    Some(d) if d as i32 == want => {}
                    _ => {
                        return Err(Error::Grading(format!(
                            "entry ({i},{j}) = {e} should be homogeneous of degree {want}"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn source(&self) -> &FreeModuleSpec {
        &self.source
    }

    pub fn target(&self) -> &FreeModuleSpec {
        &self.target
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.target.rank
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.source.rank
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols() + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        let c = self.cols();
        &self.entries[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows()).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Polynomial>> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_graded(&self) -> bool {
        self.source.is_graded() && self.target.is_graded()
    }

    pub fn ungraded(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            source: self.source.ungraded(),
            target: self.target.ungraded(),
            entries: self.entries.clone(),
        }
    }

    /// Re-attaches the given specs (same ranks), validating the grading.
    pub fn with_specs(&self, target: FreeModuleSpec, source: FreeModuleSpec) -> Result<Self> {
        if target.rank != self.rows() || source.rank != self.cols() {
            return Err(Error::Dimension(
                "spec ranks do not match the matrix".into(),
            ));
        }
        Self::new(&self.ring, target, source, self.entries.clone())
    }

    /// Assigns generator degrees making the matrix graded, if possible.
    /// Fixed target degrees are kept; otherwise each connected block of
    /// the support pattern is normalized to have least target degree 0.
    /// Zero columns get degree equal to the least target degree.
    pub fn infer_grading(&self, target_degrees: Option<&[i32]>) -> Result<Self> {
        let (r, c) = (self.rows(), self.cols());
        if let Some(t) = target_degrees {
            if t.len() != r {
                return Err(Error::Dimension(
                    "target degree count differs from rows".into(),
                ));
            }
        }
        if self
            .entries
            .iter()
            .any(|e| !e.is_zero() && !e.is_homogeneous())
        {
            return Err(Error::Grading("matrix has inhomogeneous entries".into()));
        }
        let mut tdeg: Vec<Option<i32>> = match target_degrees {
            Some(t) => t.iter().map(|&d| Some(d)).collect(),
            None => vec![None; r],
        };
        let mut sdeg: Vec<Option<i32>> = vec![None; c];
        let edeg = |i: usize, j: usize| self.get(i, j).homogeneous_degree().map(|d| d as i32);
        let clash = |i: usize, j: usize| {
            Error::Grading(format!(
                "no degrees make entry ({i},{j}) homogeneous of the right degree"
            ))
        };
        // breadth-first propagation over the bipartite support graph
        let mut seeds: Vec<usize> = (0..r).filter(|&i| tdeg[i].is_some()).collect();
        seeds.extend((0..r).filter(|&i| tdeg[i].is_none()));
        for seed in seeds {
            if tdeg[seed].is_none() {
                if (0..c).any(|j| edeg(seed, j).is_some() && sdeg[j].is_some()) {
                    continue;
                }
                tdeg[seed] = Some(0);
            }
            let mut queue = std::collections::VecDeque::from([(true, seed)]);
            let mut block_rows = vec![seed];
            while let Some((is_row, k)) = queue.pop_front() {
                if is_row {
                    let t = tdeg[k].unwrap();
                    for j in 0..c {
                        if let Some(d) = edeg(k, j) {
                            match sdeg[j] {
                                None => {
                                    sdeg[j] = Some(t + d);
                                    queue.push_back((false, j));
                                }
                                Some(s) if s != t + d => return Err(clash(k, j)),
                                _ => {}
                            }
                        }
                    }
                } else {
                    let s = sdeg[k].unwrap();
                    for i in 0..r {
                        if let Some(d) = edeg(i, k) {
                            match tdeg[i] {
                                None => {
                                    tdeg[i] = Some(s - d);
                                    block_rows.push(i);
                                    queue.push_back((true, i));
                                }
                                Some(t) if t != s - d => return Err(clash(i, k)),
                                _ => {}
                            }
                        }
                    }
                }
            }
            if target_degrees.is_none() {
                let low = block_rows.iter().map(|&i| tdeg[i].unwrap()).min().unwrap();
                if low != 0 {
                    for i in 0..r {
                        if block_rows.contains(&i) {
                            tdeg[i] = Some(tdeg[i].unwrap() - low);
                        }
                    }
                    for j in 0..c {
                        if (0..r).any(|i| block_rows.contains(&i) && edeg(i, j).is_some()) {
                            sdeg[j] = Some(sdeg[j].unwrap() - low);
                        }
                    }
                }
            }
        }
        let tdeg: Vec<i32> = tdeg.into_iter().map(|d| d.unwrap_or(0)).collect();
        let floor = tdeg.iter().copied().min().unwrap_or(0);
        let sdeg: Vec<i32> = sdeg.into_iter().map(|d| d.unwrap_or(floor)).collect();
        self.with_specs(FreeModuleSpec::graded(tdeg), FreeModuleSpec::graded(sdeg))
    }

    /// `self ∘ g`: first `g`, then `self`.
    pub fn compose(&self, g: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check_same(&g.ring)?;
        if !self.source.compatible(&g.target) {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows(),
                self.cols(),
                g.rows(),
                g.cols()
            )));
        }
        let inner_graded = self.source.is_graded() && g.target.is_graded();
        let (target, source) = if inner_graded {
            (self.target.clone(), g.source.clone())
        } else {
            (self.target.ungraded(), g.source.ungraded())
        };
        let (n, k, m) = (self.rows(), self.cols(), g.cols());
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let mut acc = self.ring.zero();
                for l in 0..k {
                    let a = self.get(i, l);
                    let b = g.get(l, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            source,
            target,
            entries,
        })
    }

    /// Transpose, i.e. the map `Hom(target, R) -> Hom(source, R)`.
    pub fn dual(&self) -> PolyMatrix {
        let (n, m) = (self.rows(), self.cols());
        let mut entries = Vec::with_capacity(n * m);
        for j in 0..m {
            for i in 0..n {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            ring: self.ring.clone(),
            source: self.target.negated(),
            target: self.source.negated(),
            entries,
        }
    }

    /// Columns of `self` followed by columns of `other` (same target).
    pub fn hstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.ring.check_same(&other.ring)?;
        if !self.target.compatible(&other.target) {
            return Err(Error::Dimension("hstack needs equal targets".into()));
        }
        let target = if self.target.is_graded() && other.target.is_graded() {
            self.target.clone()
        } else {
            self.target.ungraded()
        };
        let mut entries = Vec::with_capacity(self.rows() * (self.cols() + other.cols()));
        for i in 0..self.rows() {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        PolyMatrix::new(
            &self.ring,
            target.clone(),
            if target.is_graded() {
                self.source.direct_sum(&other.source)
            } else {
                FreeModuleSpec::new(self.cols() + other.cols())
            },
            entries,
        )
    }

    /// Rows of `self` followed by rows of `other` (same source).
    pub fn vstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        Ok(self.dual().hstack(&other.dual())?.dual())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            ring: self.ring.clone(),
            source: self.source.select(cols),
            target: self.target.select(rows),
            entries,
        }
    }

    pub fn apply(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.cols() {
            return Err(Error::Dimension(
                "vector length does not match source".into(),
            ));
        }
        Ok((0..self.rows())
            .map(|i| {
                let mut acc = self.ring.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Rank over the fraction field by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss(self.rows_vec()).rank
    }

    fn rows_vec(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Polynomial> {
        if self.rows() != self.cols() {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        Ok(determinant(&self.ring, self.rows_vec()))
    }

    /// Number of `t x t` minors.
    pub fn minor_count(&self, t: usize) -> usize {
        binomial(self.rows(), t) * binomial(self.cols(), t)
    }

    /// Nonzero `t x t` minors, lazily, in lexicographic order of
    /// (row subset, column subset). Repeats are not filtered.
    pub fn minors_iter(&self, t: usize) -> impl Iterator<Item = Polynomial> + '_ {
        let row_sets = subsets(self.rows(), t);
        let col_sets = subsets(self.cols(), t);
        row_sets
            .into_iter()
            .flat_map(move |rs| col_sets.clone().into_iter().map(move |cs| (rs.clone(), cs)))
            .filter_map(move |(rs, cs)| {
                let rows: Vec<Vec<Polynomial>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| self.get(i, j).clone()).collect())
                    .collect();
                let d = determinant(&self.ring, rows);
                (!d.is_zero()).then_some(d)
            })
    }

    /// All nonzero `t x t` minors, deduplicated, in enumeration order.
    pub fn minors(&self, t: usize) -> Vec<Polynomial> {
        let mut seen = HashSet::new();
        self.minors_iter(t)
            .filter(|m| seen.insert(m.clone()))
            .collect()
    }

    /// Ideal generated by the `t x t` minors.
    pub fn minor_ideal(&self, t: usize) -> Result<IdealData> {
        if t == 0 || t > self.rows().min(self.cols()) {
            return Err(Error::Precondition(format!(
                "minor size {t} out of range for a {}x{} matrix",
                self.rows(),
                self.cols()
            )));
        }
        Ok(IdealData::new(&self.ring, self.minors(t)))
    }

    /// Positions `(i, j)` holding nonzero constants, row-major.
    pub fn unit_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.get(i, j).is_unit() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Evaluates every entry at a point of `F_p^d`.
    pub fn evaluate(&self, point: &[u32]) -> Vec<Vec<u32>> {
        (0..self.rows())
            .map(|i| self.row(i).iter().map(|e| e.evaluate(point)).collect())
            .collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{};", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "PolyMatrix {}x{} target={:?} source={:?}",
            self.rows(),
            self.cols(),
            self.target.degrees(),
            self.source.degrees()
        )?;
        write!(f, "{self}")
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

struct Elimination {
    rank: usize,
    /// Parity of the row and column swaps performed.
    negate: bool,
    last_pivot: Option<Polynomial>,
}

/// Bareiss fraction-free elimination with full pivoting. The pivot at each
/// step is the lowest-degree nonzero entry of the remaining block, ties
/// broken by position.
fn bareiss(mut a: Vec<Vec<Polynomial>>) -> Elimination {
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    let mut negate = false;
    let mut prev: Option<Polynomial> = None;
    let mut rank = 0;
    for k in 0..n.min(m) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if let Some(d) = e.total_degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        if pi != k {
            a.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        rank += 1;
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let aik = a[i][k].clone();
            for j in k + 1..m {
                let mut v = &(&pivot * &a[i][j]) - &(&aik * &a[k][j]);
                if let Some(p) = &prev {
                    v = v.div_exact(p).expect("Bareiss step must divide exactly");
                }
                a[i][j] = v;
            }
            a[i][k] = pivot.ring().zero();
        }
        prev = Some(pivot);
    }
    Elimination {
        rank,
        negate,
        last_pivot: prev,
    }
}

fn determinant(ring: &Ring, a: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = a.len();
    match n {
        0 => return ring.one(),
        1 => return a[0][0].clone(),
        2 => return &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]),
        _ => {}
    }
    let e = bareiss(a);
    if e.rank < n {
        return ring.zero();
    }
    let d = e.last_pivot.expect("full rank implies a pivot");
    if e.negate {
        -&d
    } else {
        d
    }
}
