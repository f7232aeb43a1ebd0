//! Finitely presented modules `M = Coker(A: F_1 -> F_0)`.

use crate::error::{Error, Result};
use crate::invariants::{check_torsionless, TorsionlessCertificate};
use crate::matrix::{FreeModuleSpec, PolyMatrix};
use crate::poly::Ring;

#[derive(Clone, Debug)]
pub struct PresentedModule {
    presentation: PolyMatrix,
    rank: usize,
    certificate: Option<TorsionlessCertificate>,
}

impl PresentedModule {
    pub fn new(presentation: PolyMatrix) -> Self {
        let rank = presentation.rows() - presentation.rank();
        Self {
            presentation,
            rank,
            certificate: None,
        }
    }

    /// The free module with the given generators (no relations).
    pub fn free(ring: &Ring, spec: FreeModuleSpec) -> Self {
        let source = if spec.is_graded() {
            FreeModuleSpec::graded(Vec::new())
        } else {
            FreeModuleSpec::new(0)
        };
        Self::new(PolyMatrix::zero(ring, spec, source))
    }

    pub fn ring(&self) -> &Ring {
        self.presentation.ring()
    }

    pub fn presentation(&self) -> &PolyMatrix {
        &self.presentation
    }

    /// Number of generators in this presentation (not necessarily minimal).
    pub fn generator_count(&self) -> usize {
        self.presentation.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn certificate(&self) -> Option<&TorsionlessCertificate> {
        self.certificate.as_ref()
    }

    /// Highest level at which a passing certificate is attached.
    pub fn certified_level(&self) -> Option<usize> {
        self.certificate
            .as_ref()
            .filter(|c| c.passed())
            .map(|c| c.level)
    }

    /// Attaches a torsionless certificate at level `m`, failing if it does
    /// not pass.
    pub fn certify(mut self, m: usize) -> Result<Self> {
        let cert = check_torsionless(&self, m);
        if !cert.passed() {
            return Err(Error::Certification(format!(
                "module is not {m}-torsionless (grade bound fails at step {})",
                cert.first_failure.unwrap_or(0)
            )));
        }
        self.certificate = Some(cert);
        Ok(self)
    }

    /// Fails unless a passing certificate of level at least `m` is attached.
    pub fn require_level(&self, m: usize) -> Result<()> {
        match self.certified_level() {
            Some(l) if l >= m => Ok(()),
            Some(l) => Err(Error::Precondition(format!(
                "module certified only {l}-torsionless, {m} required"
            ))),
            None => Err(Error::Precondition(format!(
                "module has no {m}-torsionless certificate"
            ))),
        }
    }
}
