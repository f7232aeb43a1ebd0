//! Constructions on presented modules: the Auslander transpose, embeddings
//! into free modules with torsionless cokernel, generic rank reduction,
//! realization of rank-one modules as ideals, and the rewriting of a finite
//! free resolution so that its tail resolves an ideal with at most three
//! generators.
//!
//! Generic choices are drawn from a seeded ChaCha stream and every result
//! is certified exactly; a failed certification triggers a fresh draw, up to
//! `SearchConfig::max_attempts` per search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{column_basis, syzygies, IdealData, ModuleElement, ResolutionData};
use crate::invariants::{
    check_exactness, minimal_generator_count, ExactnessCertificate, TorsionlessCertificate,
};
use crate::koszul::koszul_section;
use crate::matrix::{FreeModuleSpec, PolyMatrix};
use crate::poly::{random_form, Polynomial, Ring};
use crate::presented::PresentedModule;

pub const DEFAULT_MAX_ATTEMPTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_attempts: usize,
}

impl SearchConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn with_max_attempts(mut self, max_attempts: usize) -> Result<Self> {
        if max_attempts == 0 {
            return Err(Error::Precondition(
                "max_attempts must be at least 1".into(),
            ));
        }
        self.max_attempts = max_attempts;
        Ok(self)
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self::new(0)
    }
}

/// Random source shared by one construction, counting draws.
struct Sampler {
    rng: ChaCha8Rng,
    max_attempts: usize,
    attempts_used: usize,
}

impl Sampler {
    fn new(cfg: &SearchConfig) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            max_attempts: cfg.max_attempts.max(1),
            attempts_used: 0,
        }
    }

    /// A generic homogeneous coefficient of the given degree; zero when the
    /// degree is negative, a nonzero scalar in degree 0.
    fn coefficient(&mut self, ring: &Ring, degree: Option<i32>) -> Polynomial {
        match degree {
            None | Some(0) => {
                Polynomial::constant(ring, self.rng.gen_range(1..ring.characteristic()))
            }
            Some(d) if d < 0 => ring.zero(),
            Some(d) => random_form(ring, d as u32, &mut self.rng),
        }
    }

    fn exhausted(&self, tries: usize, context: &str) -> Error {
        Error::SearchExhausted {
            attempts: tries,
            context: context.to_string(),
        }
    }
}

/// `D(M)`: the cokernel of the dual presentation.
pub fn transpose_module(module: &PresentedModule) -> PresentedModule {
    PresentedModule::new(module.presentation().dual())
}

/// `0 -> M -> F -> N -> 0` with `F` free, the map given on the generators
/// of `M` by `embedding`, and `N = Coker(embedding)`.
#[derive(Clone, Debug)]
pub struct EmbeddingStep {
    pub embedding: PolyMatrix,
    pub cokernel: PresentedModule,
    pub torsionless_level: usize,
}

/// Embeds an m-torsionless module (`m >= 1`) into a free module through
/// its double dual: with `A` the presentation and `B` generating the
/// syzygies of `A^T`, the embedding is `B^T` and the cokernel is certified
/// `(m-1)`-torsionless.
pub fn embed_in_free(module: &PresentedModule, m: usize) -> Result<EmbeddingStep> {
    if m == 0 {
        return Err(Error::Precondition(
            "embedding needs a torsionless module (m >= 1)".into(),
        ));
    }
    module.require_level(m)?;
    let a = module.presentation();
    let embedding = syzygies(&a.dual()).dual();
    let kernel = syzygies(&embedding);
    if !column_basis(a).contains_columns(&kernel)? {
        return Err(Error::Certification(
            "the map into the double dual has a nonzero kernel".into(),
        ));
    }
    let cokernel = PresentedModule::new(embedding.clone()).certify(m - 1)?;
    Ok(EmbeddingStep {
        embedding,
        cokernel,
        torsionless_level: m - 1,
    })
}

/// A generic element `x = e_last + Σ a_i e_i` of the generators of `M`
/// with `M / Rx` certified.
#[derive(Clone, Debug)]
pub struct BasicCombination {
    pub element: ModuleElement,
    /// `M / Rx`, presented on the first `n - 1` generators.
    pub quotient: PresentedModule,
    pub attempts_used: usize,
}

struct BasicStep {
    coefficients: Vec<Polynomial>,
    compression: PolyMatrix,
    quotient: PresentedModule,
}

/// The map `R^n -> R^{n-1}` killing `e_{n-1} + Σ_{i<n-1} a_i e_i`.
fn kill_last(ring: &Ring, spec: &FreeModuleSpec, coefficients: &[Polynomial]) -> PolyMatrix {
    let n = spec.rank();
    let k = n - 1;
    let mut entries = vec![ring.zero(); k * n];
    for i in 0..k {
        entries[i * n + i] = ring.one();
        entries[i * n + k] = -&coefficients[i];
    }
    let target = spec.select(&(0..k).collect::<Vec<_>>());
    PolyMatrix::new(ring, target, spec.clone(), entries)
        .expect("coefficients have compensating degrees")
}

fn basic_step(module: &PresentedModule, m: usize, sampler: &mut Sampler) -> Result<BasicStep> {
    let a = module.presentation();
    let ring = a.ring().clone();
    let spec = a.target().clone();
    let n = spec.rank();
    let k = n - 1;
    let rank_a = module.generator_count() - module.rank();
    for _ in 0..sampler.max_attempts {
        sampler.attempts_used += 1;
        let coefficients: Vec<Polynomial> = (0..k)
            .map(|i| {
                let deg = spec.degree(k).zip(spec.degree(i)).map(|(dk, di)| dk - di);
                sampler.coefficient(&ring, deg)
            })
            .collect();
        let compression = kill_last(&ring, &spec, &coefficients);
        let pres = compression.compose(a)?;
        if pres.rank() != rank_a {
            continue;
        }
        let candidate = PresentedModule::new(pres);
        if let Ok(quotient) = candidate.certify(m) {
            return Ok(BasicStep {
                coefficients,
                compression,
                quotient,
            });
        }
    }
    Err(sampler.exhausted(
        sampler.max_attempts,
        &format!("no generic element with {m}-torsionless quotient found"),
    ))
}

fn check_reducible(module: &PresentedModule, m: usize, strict: bool) -> Result<()> {
    module.require_level(m)?;
    let r = module.rank();
    if r < m || (strict && r == m) {
        return Err(Error::Precondition(format!(
            "module rank {r} must be {} {m}",
            if strict { "greater than" } else { "at least" }
        )));
    }
    Ok(())
}

pub fn find_basic_combination(
    module: &PresentedModule,
    m: usize,
    cfg: &SearchConfig,
) -> Result<BasicCombination> {
    check_reducible(module, m, true)?;
    let mut sampler = Sampler::new(cfg);
    let step = basic_step(module, m, &mut sampler)?;
    let ring = module.ring();
    let mut components = step.coefficients;
    components.push(ring.one());
    Ok(BasicCombination {
        element: ModuleElement::new(ring, components)?,
        quotient: step.quotient,
        attempts_used: sampler.attempts_used,
    })
}

/// Generic rank reduction of an m-torsionless module of rank `r >= m` on
/// `n` generators: elements `x_j = e_j + Σ_{i<j} a_{ji} e_i` for
/// `j = s, ..., n` (1-based, `s = n - r + m + 1`) whose images are
/// independent and whose quotient is m-torsionless of rank `m`.
#[derive(Clone, Debug)]
pub struct RankReduction {
    /// Unit upper triangular; column `j` is `x_j` for `j >= s` and `e_j`
    /// otherwise.
    pub basis_change: PolyMatrix,
    /// `R^n -> R^{s-1}`, killing every `x_j`.
    pub compression: PolyMatrix,
    /// `M' = Coker(compression ∘ A)`, certified at level `m`.
    pub quotient: PresentedModule,
    pub attempts_used: usize,
}

impl RankReduction {
    /// The `x_j`, as vectors on the generators of `M`.
    pub fn quotiented_elements(&self) -> Vec<ModuleElement> {
        let kept = self.compression.rows();
        (kept..self.basis_change.cols())
            .map(|j| ModuleElement::new(self.basis_change.ring(), self.basis_change.column(j)))
            .collect::<Result<Vec<_>>>()
            .expect("same ring")
    }
}

pub fn reduce_rank(
    module: &PresentedModule,
    m: usize,
    cfg: &SearchConfig,
) -> Result<RankReduction> {
    let mut sampler = Sampler::new(cfg);
    reduce_rank_with(module, m, &mut sampler)
}

fn reduce_rank_with(
    module: &PresentedModule,
    m: usize,
    sampler: &mut Sampler,
) -> Result<RankReduction> {
    check_reducible(module, m, false)?;
    let a = module.presentation();
    let ring = a.ring().clone();
    let spec = a.target().clone();
    let n = spec.rank();
    let kept = n - (module.rank() - m);
    let start = sampler.attempts_used;

    let mut basis_entries = PolyMatrix::identity(&ring, spec.clone()).entries().to_vec();
    let mut compression = PolyMatrix::identity(&ring, spec.clone());
    let mut current = module.clone();
    for j in (kept..n).rev() {
        let step = basic_step(&current, m, sampler)?;
        for (i, c) in step.coefficients.iter().enumerate() {
            basis_entries[i * n + j] = c.clone();
        }
        compression = step.compression.compose(&compression)?;
        current = step.quotient;
    }
    let basis_change = PolyMatrix::new(&ring, spec.clone(), spec, basis_entries)?;

    // the compression kills exactly the chosen elements
    let killed = compression.compose(&basis_change)?;
    if (kept..n).any(|j| killed.column(j).iter().any(|e| !e.is_zero())) {
        return Err(Error::Certification(
            "compression does not kill the chosen elements".into(),
        ));
    }
    // their images in M are independent
    let chosen =
        basis_change.submatrix(&(0..n).collect::<Vec<_>>(), &(kept..n).collect::<Vec<_>>());
    if a.hstack(&chosen)?.rank() != a.rank() + (n - kept) {
        return Err(Error::Certification(
            "quotiented elements are not independent".into(),
        ));
    }
    // relations of M map isomorphically onto relations of M'
    let relation_kernel = syzygies(current.presentation());
    if !a.compose(&relation_kernel)?.is_zero() {
        return Err(Error::Certification(
            "compression is not injective on the relations of the module".into(),
        ));
    }
    if current.rank() != m {
        return Err(Error::Certification(format!(
            "reduced module has rank {} instead of {m}",
            current.rank()
        )));
    }
    Ok(RankReduction {
        basis_change,
        compression,
        quotient: current,
        attempts_used: sampler.attempts_used - start,
    })
}

/// A free submodule `F ⊆ M` with `M / F` m-torsionless of rank `m`.
#[derive(Clone, Debug)]
pub struct FreeSplit {
    pub free_part: Vec<ModuleElement>,
    pub quotient: PresentedModule,
    pub reduction: RankReduction,
}

pub fn split_free_summand(
    module: &PresentedModule,
    m: usize,
    cfg: &SearchConfig,
) -> Result<FreeSplit> {
    let reduction = reduce_rank(module, m, cfg)?;
    let free_part = reduction.quotiented_elements();
    if !free_part.is_empty() {
        let cols: Vec<Vec<Polynomial>> =
            free_part.iter().map(|v| v.components().to_vec()).collect();
        let gens = PolyMatrix::from_columns(
            module.ring(),
            module.presentation().target().ungraded(),
            FreeModuleSpec::new(cols.len()),
            &cols,
        )?;
        let stacked = module.presentation().ungraded().hstack(&gens)?;
        if stacked.rank() != module.presentation().rank() + free_part.len() {
            return Err(Error::Certification("free part is not free".into()));
        }
    }
    Ok(FreeSplit {
        free_part,
        quotient: reduction.quotient.clone(),
        reduction,
    })
}

/// An ideal isomorphic to a rank-one torsionless module, with the map
/// `R^n -> R` sending the generators of `M` to generators of the ideal.
#[derive(Clone, Debug)]
pub struct RealizedIdeal {
    pub ideal: IdealData,
    pub witness: PolyMatrix,
    pub attempts_used: usize,
}

pub fn realize_as_ideal(module: &PresentedModule, cfg: &SearchConfig) -> Result<RealizedIdeal> {
    let mut sampler = Sampler::new(cfg);
    realize_with(module, &mut sampler)
}

fn realize_with(module: &PresentedModule, sampler: &mut Sampler) -> Result<RealizedIdeal> {
    module.require_level(1)?;
    if module.rank() != 1 {
        return Err(Error::Precondition(format!(
            "only rank-one modules are ideals (rank {})",
            module.rank()
        )));
    }
    let ring = module.ring().clone();
    let start = sampler.attempts_used;
    let embedding = embed_in_free(module, 1)?.embedding;
    let relations = column_basis(module.presentation());
    let free = embedding.target().clone();
    let target = match free.degrees() {
        Some(d) => FreeModuleSpec::graded(vec![d.iter().copied().min().unwrap_or(0)]),
        None => FreeModuleSpec::new(1),
    };
    let accept = |witness: &PolyMatrix| -> Result<bool> {
        Ok(!witness.is_zero() && relations.contains_columns(&syzygies(witness))?)
    };
    if free.rank() == 1 {
        let witness = embedding;
        if !accept(&witness)? {
            return Err(Error::Certification(
                "embedding into R is not injective".into(),
            ));
        }
        return Ok(RealizedIdeal {
            ideal: IdealData::new(&ring, witness.row(0).to_vec()),
            witness,
            attempts_used: 0,
        });
    }
    for _ in 0..sampler.max_attempts {
        sampler.attempts_used += 1;
        let entries: Vec<Polynomial> = (0..free.rank())
            .map(|j| {
                let deg = free.degree(j).zip(target.degree(0)).map(|(s, t)| s - t);
                sampler.coefficient(&ring, deg)
            })
            .collect();
        let functional = PolyMatrix::new(&ring, target.clone(), free.clone(), entries)?;
        let witness = functional.compose(&embedding)?;
        if accept(&witness)? {
            return Ok(RealizedIdeal {
                ideal: IdealData::new(&ring, witness.row(0).to_vec()),
                witness,
                attempts_used: sampler.attempts_used - start,
            });
        }
    }
    Err(sampler.exhausted(sampler.max_attempts, "no injective functional into R found"))
}

/// A certificate tagged with the construction step it belongs to.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledCertificate {
    pub label: String,
    pub certificate: TorsionlessCertificate,
}

/// Exact sequence `0 -> M -> R^{r+m-1} -> R^{2m-3} -> ... -> R^3 -> R`
/// for an m-torsionless module `M` of rank `r`.
#[derive(Clone, Debug)]
pub struct EmbeddingChain {
    /// `f_1: R^3 -> R` first; the last map sends the generators of `M`
    /// into `R^{r+m-1}`.
    pub complex: ResolutionData,
    pub certificates: Vec<LabeledCertificate>,
    pub attempts_used: usize,
}

pub fn embedding_chain(
    module: &PresentedModule,
    m: usize,
    cfg: &SearchConfig,
) -> Result<EmbeddingChain> {
    let mut sampler = Sampler::new(cfg);
    let mut certificates = Vec::new();
    let maps = chain_with(module, m, &mut sampler, &mut certificates)?;
    Ok(EmbeddingChain {
        complex: ResolutionData::new(module.ring(), maps)?,
        certificates,
        attempts_used: sampler.attempts_used,
    })
}

fn chain_with(
    module: &PresentedModule,
    m: usize,
    sampler: &mut Sampler,
    certificates: &mut Vec<LabeledCertificate>,
) -> Result<Vec<PolyMatrix>> {
    if m == 0 {
        return Err(Error::Precondition("chain needs m >= 1".into()));
    }
    module.require_level(m)?;
    if m == 1 {
        return Ok(vec![realize_with(module, sampler)?.witness]);
    }
    let ring = module.ring().clone();
    let step = embed_in_free(module, m)?;
    let wanted = module.rank() + m - 1;
    let free = step.embedding.target().clone();
    let (embedding, cokernel) = if free.rank() > wanted {
        let red = reduce_rank_with(&step.cokernel, m - 1, sampler)?;
        (red.compression.compose(&step.embedding)?, red.quotient)
    } else if free.rank() < wanted {
        let pad = wanted - free.rank();
        let pad_spec = match free.degrees() {
            Some(d) => FreeModuleSpec::uniform(pad, d.iter().copied().min().unwrap_or(0)),
            None => FreeModuleSpec::new(pad),
        };
        let zero = PolyMatrix::zero(&ring, pad_spec, step.embedding.source().clone());
        let padded = step.embedding.vstack(&zero)?;
        let cokernel = PresentedModule::new(padded.clone()).certify(m - 1)?;
        (padded, cokernel)
    } else {
        (step.embedding, step.cokernel)
    };
    if let Some(cert) = cokernel.certificate() {
        certificates.push(LabeledCertificate {
            label: format!("cokernel of R^{} embedding", wanted),
            certificate: cert.clone(),
        });
    }
    let mut maps = chain_with(&cokernel, m - 1, sampler, certificates)?;
    maps.push(embedding);
    Ok(maps)
}

/// A rewritten resolution whose tail `R^{r+m} -> R^{2m-1} -> ... -> R^3 -> R`
/// resolves an ideal.
#[derive(Clone, Debug)]
pub struct RewriteResult {
    pub complex: ResolutionData,
    /// `c: F_m -> R^{r+m}`.
    pub compression: PolyMatrix,
    /// Entries of the new `f_1`.
    pub ideal: IdealData,
    pub exactness: ExactnessCertificate,
    pub certificates: Vec<LabeledCertificate>,
    pub attempts_used: usize,
}

/// Keeps `F_n -> ... -> F_{m+1}`, replaces `f_{m+1}` by `c ∘ f_{m+1}` with
/// `c: F_m -> R^{r+m}` (`r = rank f_{m+1}`) and appends the embedding chain
/// of `Coker(c ∘ f_{m+1})`, an m-torsionless module of rank `m`.
pub fn rewrite_resolution(
    res: &ResolutionData,
    m: usize,
    cfg: &SearchConfig,
) -> Result<RewriteResult> {
    let n = res.differentials().len();
    if m == 0 || m >= n {
        return Err(Error::Precondition(format!(
            "level {m} must satisfy 1 <= m < {n} (the length of the complex)"
        )));
    }
    let input_cert = check_exactness(res);
    if !input_cert.passed() {
        return Err(Error::Precondition(format!(
            "input complex is not acyclic (position {})",
            input_cert.first_failure.unwrap_or(0)
        )));
    }
    let ring = res.ring().clone();
    let f = &res.differentials()[m];
    let module = PresentedModule::new(f.clone()).certify(m)?;
    let mut sampler = Sampler::new(cfg);
    let mut certificates = vec![LabeledCertificate {
        label: format!("Coker(f_{})", m + 1),
        certificate: module.certificate().unwrap().clone(),
    }];
    let r = f.rank();
    let u = f.rows();
    let (compression, reduced) = if u <= r + m {
        let pad = r + m - u;
        let pad_spec = match f.target().degrees() {
            Some(d) => FreeModuleSpec::uniform(pad, d.iter().copied().min().unwrap_or(0)),
            None => FreeModuleSpec::new(pad),
        };
        let identity = PolyMatrix::identity(&ring, f.target().clone());
        let c = identity.vstack(&PolyMatrix::zero(&ring, pad_spec, f.target().clone()))?;
        let reduced = PresentedModule::new(c.compose(f)?).certify(m)?;
        (c, reduced)
    } else {
        let red = reduce_rank_with(&module, m, &mut sampler)?;
        (red.compression, red.quotient)
    };
    certificates.push(LabeledCertificate {
        label: format!("Coker(c f_{}), rank {}", m + 1, reduced.rank()),
        certificate: reduced.certificate().unwrap().clone(),
    });
    let chain = chain_with(&reduced, m, &mut sampler, &mut certificates)?;
    let mut diffs = chain;
    diffs.push(reduced.presentation().clone());
    diffs.extend(res.differentials()[m + 1..].iter().cloned());
    let complex = ResolutionData::new(&ring, diffs)?;
    let exactness = check_exactness(&complex);
    if !exactness.passed() {
        return Err(Error::Certification(format!(
            "rewritten complex fails the exactness test at position {}",
            exactness.first_failure.unwrap_or(0)
        )));
    }
    let ideal = IdealData::new(&ring, complex.differentials()[0].row(0).to_vec());
    Ok(RewriteResult {
        complex,
        compression,
        ideal,
        exactness,
        certificates,
        attempts_used: sampler.attempts_used,
    })
}

/// An m-torsionless module of rank `m` and projective dimension `s`
/// with at most `2m + 1` generators, over `s + m` variables.
#[derive(Clone, Debug)]
pub struct PdModule {
    pub ring: Ring,
    pub module: PresentedModule,
    pub resolution: ResolutionData,
    pub attempts_used: usize,
}

pub fn build_pd_module(
    s: usize,
    m: usize,
    characteristic: u32,
    cfg: &SearchConfig,
) -> Result<PdModule> {
    if s == 0 || m == 0 {
        return Err(Error::Precondition("s and m must be at least 1".into()));
    }
    let n = s + m;
    let ring = Ring::with_standard_names(characteristic, n)?;
    let vars = ring.vars();
    let (resolution, attempts_used) = if s == 1 {
        let column = PolyMatrix::from_columns(
            &ring,
            FreeModuleSpec::uniform(n, 0),
            FreeModuleSpec::uniform(1, 1),
            &[vars],
        )?;
        (ResolutionData::new(&ring, vec![column])?, 0)
    } else {
        let section = koszul_section(&vars, 0, n)?;
        let rewritten = rewrite_resolution(&section, m + 1, cfg)?;
        let tail = rewritten.complex.differentials()[m..].to_vec();
        (ResolutionData::new(&ring, tail)?, rewritten.attempts_used)
    };
    let module = PresentedModule::new(resolution.presentation().clone()).certify(m)?;
    if module.rank() != m {
        return Err(Error::Certification(format!(
            "module has rank {} instead of {m}",
            module.rank()
        )));
    }
    let generators = minimal_generator_count(&module)?;
    if generators > 2 * m + 1 {
        return Err(Error::Certification(format!(
            "module needs {generators} generators, more than {}",
            2 * m + 1
        )));
    }
    let top = resolution.differentials().last().unwrap();
    if !top.unit_positions().is_empty() {
        return Err(Error::Certification(
            "last map of the resolution splits".into(),
        ));
    }
    Ok(PdModule {
        ring,
        module,
        resolution,
        attempts_used,
    })
}
