use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use super::monomial::{monomials_of_degree, Monomial};
use super::ring::Ring;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coef: u32,
    pub mono: Monomial,
}

/// Sparse polynomial in canonical form: terms strictly decreasing in the
/// ring's monomial order, no zero coefficients. The empty term list is 0.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Self {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: u32) -> Self {
        let c = c % ring.characteristic();
        Self::monomial(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn monomial(ring: &Ring, coef: u32, mono: Monomial) -> Self {
        let coef = coef % ring.characteristic();
        let terms = if coef == 0 {
            Vec::new()
        } else {
            vec![Term { coef, mono }]
        };
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from an arbitrary multiset of terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (u32, Monomial)>) -> Self {
        let p = ring.characteristic();
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(coef, mono)| Term {
                coef: coef % p,
                mono,
            })
            .collect();
        Self::normalize(ring, &mut terms);
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusts the caller that `terms` is already canonical.
    pub(crate) fn from_sorted_terms(ring: &Ring, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp_monomials(&w[0].mono, &w[1].mono) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.coef != 0));
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    fn normalize(ring: &Ring, terms: &mut Vec<Term>) {
        let field = ring.field();
        terms.sort_by(|a, b| ring.cmp_monomials(&b.mono, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => last.coef = field.add(last.coef, t.coef),
                _ => {
                    if let Some(last) = out.last() {
                        if last.coef == 0 {
                            out.pop();
                        }
                    }
                    out.push(t);
                }
            }
        }
        if out.last().is_some_and(|t| t.coef == 0) {
            out.pop();
        }
        *terms = out;
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant, i.e. a unit of the polynomial ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit() && self.terms[0].coef == 1
    }

    pub fn constant_value(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.mono.is_one() => Some(t.coef),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn leading_coefficient(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.coef)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => {
                let d = t.mono.degree();
                self.terms.iter().all(|s| s.mono.degree() == d)
            }
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_zero() || !self.is_homogeneous() {
            None
        } else {
            self.total_degree()
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        Ok(self.add_scaled(other, 1))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        Ok(self.add_scaled(other, self.ring.field().neg(1)))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + c * other`, merging the sorted term lists.
    pub fn add_scaled(&self, other: &Polynomial, c: u32) -> Polynomial {
        let field = self.ring.field();
        let c = c % field.characteristic();
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match self.ring.cmp_monomials(&a[i].mono, &b[j].mono) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        coef: field.mul(b[j].coef, c),
                        mono: b[j].mono.clone(),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let coef = field.add(a[i].coef, field.mul(b[j].coef, c));
                    if coef != 0 {
                        out.push(Term {
                            coef,
                            mono: a[i].mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| Term {
            coef: field.mul(t.coef, c),
            mono: t.mono.clone(),
        }));
        Polynomial::from_sorted_terms(&self.ring, out)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let field = self.ring.field();
        let c = c % field.characteristic();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|t| Term {
                    coef: field.mul(t.coef, c),
                    mono: t.mono.clone(),
                })
                .collect(),
        )
    }

    /// Multiplication by `c * m`; order is preserved since monomial orders
    /// are multiplicative.
    pub fn mul_term(&self, c: u32, m: &Monomial) -> Polynomial {
        let field = self.ring.field();
        let c = c % field.characteristic();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|t| Term {
                    coef: field.mul(t.coef, c),
                    mono: t.mono.mul(m),
                })
                .collect(),
        )
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Polynomial::zero(&self.ring);
        for t in &small.terms {
            acc = acc.add_scaled(&large.mul_term(1, &t.mono), t.coef);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let lead = divisor.leading_term()?;
        let field = self.ring.field();
        let inv = field.inv(lead.coef);
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some(t) = rem.leading_term() {
            let m = lead.mono.quotient_of(&t.mono)?;
            let c = field.mul(t.coef, inv);
            rem = rem.add_scaled(&divisor.mul_term(1, &m), field.neg(c));
            quotient.push(Term { coef: c, mono: m });
        }
        Some(Polynomial::from_sorted_terms(&self.ring, quotient))
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some(t) => self.scale(self.ring.field().inv(t.coef)),
        }
    }

    pub fn evaluate(&self, point: &[u32]) -> u32 {
        let field = self.ring.field();
        let mut acc = 0;
        for t in &self.terms {
            let mut v = t.coef;
            for (x, &e) in point.iter().zip(t.mono.exponents()) {
                v = field.mul(v, field.pow(*x, e as u64));
            }
            acc = field.add(acc, v);
        }
        acc
    }

    pub fn fmt_term(&self, t: &Term, first: bool, out: &mut String) {
        let field = self.ring.field();
        let signed = field.to_signed(t.coef);
        let (neg, mag) = (signed < 0, signed.unsigned_abs());
        if neg {
            out.push('-');
        } else if !first {
            out.push('+');
        }
        let mut factors: Vec<String> = Vec::new();
        if mag != 1 || t.mono.is_one() {
            factors.push(mag.to_string());
        }
        for (i, &e) in t.mono.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(self.ring.variables()[i].clone()),
                _ => factors.push(format!("{}^{}", self.ring.variables()[i], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
}

/// Uniformly random homogeneous form of the given degree. Degree-0 draws are
/// nonzero scalars.
pub fn random_form<R: Rng + ?Sized>(ring: &Ring, degree: u32, rng: &mut R) -> Polynomial {
    random_form_with(ring, degree, rng, false)
}

pub fn random_form_with<R: Rng + ?Sized>(
    ring: &Ring,
    degree: u32,
    rng: &mut R,
    allow_zero_scalar: bool,
) -> Polynomial {
    let p = ring.characteristic();
    if degree == 0 {
        let c = if allow_zero_scalar {
            rng.gen_range(0..p)
        } else {
            rng.gen_range(1..p)
        };
        return Polynomial::constant(ring, c);
    }
    Polynomial::from_terms(
        ring,
        monomials_of_degree(ring.nvars(), degree)
            .into_iter()
            .map(|m| (rng.gen_range(0..p), m)),
    )
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ring == other.ring
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            self.fmt_term(t, k == 0, &mut s);
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.ring.field().neg(1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
