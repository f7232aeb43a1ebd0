//! Internal sparse representation of vectors in a graded free module,
//! ordered position-over-term: a lower component index beats any term in a
//! higher one, and within a component the ring's monomial order decides.

use std::cmp::Ordering;

use crate::poly::{Monomial, Polynomial, Ring, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MTerm {
    pub mono: Monomial,
    pub comp: u32,
    pub coef: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct SVec {
    pub terms: Vec<MTerm>,
}

impl SVec {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&MTerm> {
        self.terms.first()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ModCtx {
    pub ring: Ring,
    pub rank: usize,
    pub shifts: Option<Vec<i32>>,
}

impl ModCtx {
    pub fn new(ring: &Ring, rank: usize, shifts: Option<Vec<i32>>) -> Self {
        Self {
            ring: ring.clone(),
            rank,
            shifts,
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, ac: u32, b: &Monomial, bc: u32) -> Ordering {
        bc.cmp(&ac).then_with(|| self.ring.cmp_monomials(a, b))
    }

    #[inline]
    pub fn term_degree(&self, mono: &Monomial, comp: u32) -> i32 {
        mono.degree() as i32 + self.shifts.as_ref().map_or(0, |s| s[comp as usize])
    }

    /// Largest term degree; for homogeneous vectors, the degree.
    pub fn sugar(&self, v: &SVec) -> i32 {
        v.terms
            .iter()
            .map(|t| self.term_degree(&t.mono, t.comp))
            .max()
            .unwrap_or(i32::MIN)
    }

    pub fn from_components(&self, comps: &[Polynomial]) -> SVec {
        debug_assert_eq!(comps.len(), self.rank);
        let mut terms = Vec::new();
        for (c, p) in comps.iter().enumerate() {
            for t in p.terms() {
                terms.push(MTerm {
                    mono: t.mono.clone(),
                    comp: c as u32,
                    coef: t.coef,
                });
            }
        }
        // components are individually sorted and appear in position order
        SVec { terms }
    }

    pub fn to_components(&self, v: &SVec) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); self.rank];
        for t in &v.terms {
            buckets[t.comp as usize].push(Term {
                coef: t.coef,
                mono: t.mono.clone(),
            });
        }
        buckets
            .into_iter()
            .map(|ts| Polynomial::from_sorted_terms(&self.ring, ts))
            .collect()
    }

    pub fn scale(&self, v: &SVec, c: u32) -> SVec {
        let f = self.ring.field();
        if c == 0 {
            return SVec::default();
        }
        SVec {
            terms: v
                .terms
                .iter()
                .map(|t| MTerm {
                    mono: t.mono.clone(),
                    comp: t.comp,
                    coef: f.mul(t.coef, c),
                })
                .collect(),
        }
    }

    pub fn monic(&self, v: &SVec) -> SVec {
        match v.lead() {
            None => v.clone(),
            Some(t) if t.coef == 1 => v.clone(),
            Some(t) => self.scale(v, self.ring.field().inv(t.coef)),
        }
    }

    /// `a[start..] + c * m * b`, merged.
    pub fn add_mul(&self, a: &[MTerm], c: u32, m: &Monomial, b: &[MTerm]) -> Vec<MTerm> {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bt: Option<MTerm> = b.first().map(|t| MTerm {
            mono: t.mono.mul(m),
            comp: t.comp,
            coef: f.mul(t.coef, c),
        });
        while i < a.len() {
            let Some(bj) = &bt else { break };
            match self.cmp(&a[i].mono, a[i].comp, &bj.mono, bj.comp) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt.take().unwrap());
                    j += 1;
                    bt = b.get(j).map(|t| MTerm {
                        mono: t.mono.mul(m),
                        comp: t.comp,
                        coef: f.mul(t.coef, c),
                    });
                }
                Ordering::Equal => {
                    let coef = f.add(a[i].coef, bj.coef);
                    if coef != 0 {
                        out.push(MTerm {
                            mono: a[i].mono.clone(),
                            comp: a[i].comp,
                            coef,
                        });
                    }
                    i += 1;
                    j += 1;
                    bt = b.get(j).map(|t| MTerm {
                        mono: t.mono.mul(m),
                        comp: t.comp,
                        coef: f.mul(t.coef, c),
                    });
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        if let Some(t) = bt {
            out.push(t);
            out.extend(b[j + 1..].iter().map(|t| MTerm {
                mono: t.mono.mul(m),
                comp: t.comp,
                coef: f.mul(t.coef, c),
            }));
        }
        out
    }
}

/// Index of basis vectors by lead component, for divisor lookup.
#[derive(Clone, Debug, Default)]
pub(crate) struct LeadIndex {
    by_comp: Vec<Vec<usize>>,
}

impl LeadIndex {
    pub fn new(rank: usize) -> Self {
        Self {
            by_comp: vec![Vec::new(); rank],
        }
    }

    pub fn insert(&mut self, comp: u32, idx: usize) {
        self.by_comp[comp as usize].push(idx);
    }

    pub fn in_comp(&self, comp: u32) -> &[usize] {
        &self.by_comp[comp as usize]
    }
}

/// Full reduction of `v` modulo monic `basis`; returns the normal form.
pub(crate) fn reduce(ctx: &ModCtx, v: &SVec, basis: &[SVec], index: &LeadIndex) -> SVec {
    reduce_skipping(ctx, v, basis, index, None)
}

pub(crate) fn reduce_skipping(
    ctx: &ModCtx,
    v: &SVec,
    basis: &[SVec],
    index: &LeadIndex,
    skip: Option<usize>,
) -> SVec {
    let f = ctx.ring.field();
    let mut rest: Vec<MTerm> = v.terms.clone();
    let mut start = 0;
    let mut done: Vec<MTerm> = Vec::new();
    while start < rest.len() {
        let t = &rest[start];
        let divisor = index
            .in_comp(t.comp)
            .iter()
            .copied()
            .find(|&k| Some(k) != skip && basis[k].terms[0].mono.divides(&t.mono));
        match divisor {
            Some(k) => {
                let g = &basis[k];
                let q = g.terms[0].mono.quotient_of(&t.mono).unwrap();
                let c = f.neg(t.coef);
                // lead terms cancel exactly since g is monic
                rest = ctx.add_mul(&rest[start + 1..], c, &q, &g.terms[1..]);
                start = 0;
            }
            None => {
                done.push(rest[start].clone());
                start += 1;
            }
        }
    }
    SVec { terms: done }
}
