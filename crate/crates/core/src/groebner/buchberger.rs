//! Buchberger's algorithm for submodules of free modules, with the
//! Gebauer–Möller chain criterion and (for ideals) the product criterion.
//! Pairs are processed by lowest sugar degree, which for homogeneous input
//! is the true degree and permits degree-truncated runs.

use super::sparse::{reduce, reduce_skipping, LeadIndex, MTerm, ModCtx, SVec};
use crate::poly::Monomial;

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: u32,
    sugar: i32,
}

pub(crate) struct Engine {
    pub ctx: ModCtx,
    pub basis: Vec<SVec>,
    sugar: Vec<i32>,
    index: LeadIndex,
    pairs: Vec<Pair>,
}

impl Engine {
    pub fn new(ctx: ModCtx) -> Self {
        let rank = ctx.rank;
        Self {
            ctx,
            basis: Vec::new(),
            sugar: Vec::new(),
            index: LeadIndex::new(rank),
            pairs: Vec::new(),
        }
    }

    pub fn normal_form(&self, v: &SVec) -> SVec {
        reduce(&self.ctx, v, &self.basis, &self.index)
    }

    /// Reduces `v` and, if it survives, appends it to the basis. Returns
    /// whether the basis grew.
    pub fn add(&mut self, v: &SVec) -> bool {
        let sugar = self.ctx.sugar(v);
        let nf = self.normal_form(v);
        if nf.is_zero() {
            return false;
        }
        let nf = self.ctx.monic(&nf);
        self.insert(nf, sugar);
        true
    }

    fn insert(&mut self, h: SVec, sugar: i32) {
        let t = self.basis.len();
        let lt = h.terms[0].clone();
        let ideal_case = self.ctx.rank == 1;

        // chain criterion on the pairs already queued
        let lead_of = |basis: &[SVec], k: usize| basis[k].terms[0].mono.clone();
        {
            let basis = &self.basis;
            self.pairs.retain(|p| {
                if p.comp != lt.comp || !lt.mono.divides(&p.lcm) {
                    return true;
                }
                let li = lead_of(basis, p.i).lcm(&lt.mono);
                let lj = lead_of(basis, p.j).lcm(&lt.mono);
                li == p.lcm || lj == p.lcm
            });
        }

        let mut fresh: Vec<(Pair, bool)> = Vec::new();
        for &i in self.index.in_comp(lt.comp) {
            let li = &self.basis[i].terms[0];
            let lcm = li.mono.lcm(&lt.mono);
            let coprime = li.mono.is_coprime(&lt.mono);
            let si = self.sugar[i] + (lcm.degree() - li.mono.degree()) as i32;
            let st = sugar + (lcm.degree() - lt.mono.degree()) as i32;
            fresh.push((
                Pair {
                    i,
                    j: t,
                    lcm,
                    comp: lt.comp,
                    sugar: si.max(st),
                },
                coprime,
            ));
        }

        // M: drop pairs whose lcm is properly divisible by another fresh lcm
        let keep: Vec<bool> = fresh
            .iter()
            .map(|(p, _)| {
                !fresh
                    .iter()
                    .any(|(q, _)| q.lcm != p.lcm && q.lcm.divides(&p.lcm))
            })
            .collect();
        let mut survivors: Vec<(Pair, bool)> = fresh
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();

        // F: one representative per lcm; in the ideal case a coprime member
        // certifies the whole class
        let mut chosen: Vec<Pair> = Vec::new();
        while let Some((p, coprime)) = survivors.first().cloned() {
            let class: Vec<(Pair, bool)> = survivors
                .iter()
                .filter(|(q, _)| q.lcm == p.lcm)
                .cloned()
                .collect();
            survivors.retain(|(q, _)| q.lcm != p.lcm);
            let any_coprime = coprime || class.iter().any(|(_, c)| *c);
            if ideal_case && any_coprime {
                continue;
            }
            chosen.push(p);
        }

        self.pairs.extend(chosen);
        self.index.insert(lt.comp, t);
        self.basis.push(h);
        self.sugar.push(sugar);
    }

    fn pop_pair(&mut self, max_degree: Option<i32>) -> Option<Pair> {
        let ctx = &self.ctx;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| ctx.cmp(&a.lcm, a.comp, &b.lcm, b.comp))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, p)| (k, p.sugar))?;
        if max_degree.is_some_and(|d| best.1 > d) {
            return None;
        }
        Some(self.pairs.swap_remove(best.0))
    }

    fn s_vector(&self, p: &Pair) -> SVec {
        let f = &self.basis[p.i];
        let g = &self.basis[p.j];
        let qf = f.terms[0].mono.quotient_of(&p.lcm).unwrap();
        let qg = g.terms[0].mono.quotient_of(&p.lcm).unwrap();
        let neg1 = self.ctx.ring.field().neg(1);
        let a: Vec<MTerm> = self.ctx.add_mul(&[], 1, &qf, &f.terms[1..]);
        SVec {
            terms: self.ctx.add_mul(&a, neg1, &qg, &g.terms[1..]),
        }
    }

    /// Processes pairs until none of sugar `<= max_degree` remain (all pairs
    /// when `None`).
    pub fn run(&mut self, max_degree: Option<i32>) {
        while let Some(p) = self.pop_pair(max_degree) {
            let s = self.s_vector(&p);
            if s.is_zero() {
                continue;
            }
            let nf = self.normal_form(&s);
            if !nf.is_zero() {
                let nf = self.ctx.monic(&nf);
                self.insert(nf, p.sugar);
            }
        }
    }

    /// Reduced basis: minimal lead terms, fully tail-reduced, monic, sorted
    /// by decreasing lead term.
    pub fn reduced_basis(&self) -> Vec<SVec> {
        let n = self.basis.len();
        let mut keep = Vec::new();
        for k in 0..n {
            let lk = &self.basis[k].terms[0];
            let redundant = (0..n).any(|o| {
                if o == k {
                    return false;
                }
                let lo = &self.basis[o].terms[0];
                lo.comp == lk.comp && lo.mono.divides(&lk.mono) && (lo.mono != lk.mono || o < k)
            });
            if !redundant {
                keep.push(self.basis[k].clone());
            }
        }
        let mut index = LeadIndex::new(self.ctx.rank);
        for (k, g) in keep.iter().enumerate() {
            index.insert(g.terms[0].comp, k);
        }
        let mut out: Vec<SVec> = (0..keep.len())
            .map(|k| {
                let g = &keep[k];
                let tail = SVec {
                    terms: g.terms[1..].to_vec(),
                };
                let mut r = reduce_skipping(&self.ctx, &tail, &keep, &index, Some(k));
                r.terms.insert(0, g.terms[0].clone());
                self.ctx.monic(&r)
            })
            .collect();
        out.sort_by(|a, b| {
            let (x, y) = (&a.terms[0], &b.terms[0]);
            self.ctx.cmp(&y.mono, y.comp, &x.mono, x.comp)
        });
        out
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub(crate) fn groebner(ctx: &ModCtx, gens: &[SVec]) -> Vec<SVec> {
    let mut e = Engine::new(ctx.clone());
    let mut order: Vec<&SVec> = gens.iter().filter(|g| !g.is_zero()).collect();
    order.sort_by(|a, b| {
        ctx.sugar(a).cmp(&ctx.sugar(b)).then_with(|| {
            let (x, y) = (&a.terms[0], &b.terms[0]);
            ctx.cmp(&x.mono, x.comp, &y.mono, y.comp)
        })
    });
    for g in order {
        e.add(g);
    }
    e.run(None);
    e.reduced_basis()
}

/// Keeps a minimal generating subset of homogeneous `gens` (stable order
/// of increasing degree), using a degree-truncated incremental basis.
pub(crate) fn minimal_homogeneous_generators(ctx: &ModCtx, gens: &[SVec]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gens.len()).filter(|&k| !gens[k].is_zero()).collect();
    order.sort_by_key(|&k| ctx.sugar(&gens[k]));
    let mut e = Engine::new(ctx.clone());
    let mut kept = Vec::new();
    for k in order {
        let d = ctx.sugar(&gens[k]);
        e.run(Some(d));
        if e.add(&gens[k]) {
            kept.push(k);
        }
    }
    kept
}
