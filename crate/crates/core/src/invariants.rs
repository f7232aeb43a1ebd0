//! Grade of ideals, Buchsbaum–Eisenbud ideals of maps, and certificates for
//! exactness of finite free complexes and for m-torsionlessness.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groebner::{prune, quotient_dimension, syzygies, IdealData, ResolutionData};
use crate::matrix::PolyMatrix;
use crate::presented::PresentedModule;

/// Grade of an ideal. The unit ideal has grade `Infinite`, which compares
/// above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grade {
    Finite(usize),
    Infinite,
}

impl Grade {
    pub fn at_least(self, bound: usize) -> bool {
        self >= Grade::Finite(bound)
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Grade::Finite(g) => Some(g),
            Grade::Infinite => None,
        }
    }
}

impl PartialOrd for Grade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Grade {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Grade::Finite(a), Grade::Finite(b)) => a.cmp(b),
            (Grade::Finite(_), Grade::Infinite) => Ordering::Less,
            (Grade::Infinite, Grade::Finite(_)) => Ordering::Greater,
            (Grade::Infinite, Grade::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Finite(g) => write!(f, "{g}"),
            Grade::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Grade::Finite(g) => s.serialize_u64(*g as u64),
            Grade::Infinite => s.serialize_str("infinity"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Grade computed as `d - dim R/I`, which is valid because polynomial rings
/// are Cohen–Macaulay.
pub fn grade(ideal: &IdealData) -> Grade {
    if ideal.is_zero() {
        return Grade::Finite(0);
    }
    let dim = quotient_dimension(ideal);
    if dim < 0 {
        Grade::Infinite
    } else {
        Grade::Finite(ideal.ring().nvars() - dim as usize)
    }
}

/// The ideal of `rank(f)`-sized minors; the unit ideal when `f` has rank 0.
pub fn be_ideal(f: &PolyMatrix) -> IdealData {
    let t = f.rank();
    if t == 0 {
        return IdealData::unit(f.ring());
    }
    f.minor_ideal(t)
        .expect("rank never exceeds the matrix size")
}

/// Certifies `grade I_t(f) >= bound` from as few minors as possible. The
/// minors are taken in batches of doubling size; since a subideal has no
/// larger grade, the first batch reaching `bound` settles it. Returns the
/// number of minors used, or `None` if even the full ideal falls short.
pub fn minor_grade_at_least(f: &PolyMatrix, t: usize, bound: usize) -> Result<Option<usize>> {
    if t == 0 || t > f.rows().min(f.cols()) {
        return Err(Error::Precondition(format!(
            "minor size {t} out of range for a {}x{} matrix",
            f.rows(),
            f.cols()
        )));
    }
    if bound == 0 {
        return Ok(Some(0));
    }
    let mut minors = f.minors_iter(t);
    let mut taken = Vec::new();
    let mut batch = bound.max(1);
    loop {
        let before = taken.len();
        taken.extend(minors.by_ref().take(batch));
        if taken.len() == before {
            return Ok(None);
        }
        if grade(&IdealData::new(f.ring(), taken.clone())).at_least(bound) {
            return Ok(Some(taken.len()));
        }
        batch *= 2;
    }
}

/// What was checked at homological position `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessPosition {
    pub position: usize,
    pub free_rank: usize,
    pub map_rank: usize,
    pub next_map_rank: usize,
    pub grade: Grade,
    pub required_grade: usize,
    pub rank_ok: bool,
    pub grade_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessCertificate {
    pub ranks: Vec<usize>,
    pub positions: Vec<ExactnessPosition>,
    pub verdict: Verdict,
    pub first_failure: Option<usize>,
}

impl ExactnessCertificate {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Acyclicity test for `0 -> F_n -> ... -> F_1 -> F_0`: for every `k >= 1`,
/// `rank f_k + rank f_{k+1} = rank F_k` and `grade I(f_k) >= k`.
pub fn check_exactness(complex: &ResolutionData) -> ExactnessCertificate {
    let diffs = complex.differentials();
    let map_ranks: Vec<usize> = diffs.iter().map(PolyMatrix::rank).collect();
    let positions: Vec<ExactnessPosition> = diffs
        .iter()
        .enumerate()
        .map(|(idx, f)| {
            let k = idx + 1;
            let free_rank = f.cols();
            let map_rank = map_ranks[idx];
            let next_map_rank = map_ranks.get(idx + 1).copied().unwrap_or(0);
            let rank_ok = map_rank + next_map_rank == free_rank;
            let grade = if map_rank == 0 {
                Grade::Infinite
            } else {
                grade(&be_ideal(f))
            };
            ExactnessPosition {
                position: k,
                free_rank,
                map_rank,
                next_map_rank,
                grade,
                required_grade: k,
                rank_ok,
                grade_ok: grade.at_least(k),
            }
        })
        .collect();
    let first_failure = positions
        .iter()
        .find(|p| !(p.rank_ok && p.grade_ok))
        .map(|p| p.position);
    ExactnessCertificate {
        ranks: complex.ranks(),
        positions,
        verdict: Verdict::from_bool(first_failure.is_none()),
        first_failure,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionlessStep {
    /// `i` for the differential `g_i: G_i -> G_{i-1}` of the module's own
    /// resolution.
    pub index: usize,
    pub grade: Grade,
    pub required_grade: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionlessCertificate {
    pub level: usize,
    pub ranks: Vec<usize>,
    pub steps: Vec<TorsionlessStep>,
    pub verdict: Verdict,
    pub first_failure: Option<usize>,
    #[serde(skip)]
    pub resolution: ResolutionData,
}

impl TorsionlessCertificate {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Free resolution of a presented module: minimal when the presentation is
/// graded, otherwise continued until the last map is injective (with a cap
/// well past the syzygy bound).
pub fn module_resolution(presentation: &PolyMatrix) -> ResolutionData {
    let ring = presentation.ring().clone();
    let cap = 2 * ring.nvars() + 2;
    let mut diffs = vec![presentation.clone()];
    while diffs.len() < cap {
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
    let res = ResolutionData::new(&ring, diffs).expect("iterated syzygies form a complex");
    if res.is_graded() {
        prune(&res).expect("graded input")
    } else {
        res
    }
}

/// `M = Coker(g_1)` is m-torsionless iff `grade I(g_i) >= m + i` along its
/// finite free resolution `... -> G_1 -> G_0`. Level 0 holds for every
/// module and is not resolved.
pub fn check_torsionless(module: &PresentedModule, m: usize) -> TorsionlessCertificate {
    let resolution = if m == 0 {
        let f = module.presentation();
        ResolutionData::new(f.ring(), vec![f.clone()]).expect("a single map is a complex")
    } else {
        module_resolution(module.presentation())
    };
    let steps: Vec<TorsionlessStep> = if m == 0 {
        Vec::new()
    } else {
        resolution
            .differentials()
            .iter()
            .enumerate()
            .map(|(idx, g)| {
                let i = idx + 1;
                let grade = grade(&be_ideal(g));
                TorsionlessStep {
                    index: i,
                    grade,
                    required_grade: m + i,
                    ok: grade.at_least(m + i),
                }
            })
            .collect()
    };
    let first_failure = steps.iter().find(|s| !s.ok).map(|s| s.index);
    TorsionlessCertificate {
        level: m,
        ranks: resolution.ranks(),
        steps,
        verdict: Verdict::from_bool(first_failure.is_none()),
        first_failure,
        resolution,
    }
}

/// Number of minimal generators, from the pruned presentation.
pub fn minimal_generator_count(module: &PresentedModule) -> Result<usize> {
    let f = module.presentation();
    if !f.is_graded() {
        return Err(Error::Ungraded(
            "minimal generator counts need a graded presentation".into(),
        ));
    }
    let res = ResolutionData::new(f.ring(), vec![f.clone()])?;
    Ok(prune(&res)?.presentation().rows())
}
