use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;

/// A multivariate Laurent polynomial with integer coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration follows
/// the canonical graded lexicographic order and zero coefficients never appear.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(name: &str) -> Self {
        Self::term(1, Monomial::var(name))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The coefficient if this polynomial is a constant (including zero).
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// A single nonzero term `c * m`.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff_sign(&self) -> i32 {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().map(str::to_string))
            .collect()
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.terms.keys().any(|m| m.exponent(var) != 0)
    }

    /// `(min, max)` exponent of `var` over all terms; `(0, 0)` for zero.
    pub fn degree_range(&self, var: &str) -> (i64, i64) {
        let mut it = self.terms.keys().map(|m| m.exponent(var));
        match it.next() {
            None => (0, 0),
            Some(first) => it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))),
        }
    }

    /// Gcd of the integer coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Divides every coefficient by `c`; `None` if some coefficient is not a multiple.
    pub fn div_scalar(&self, c: &BigInt) -> Option<LaurentPoly> {
        if c.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (m, x) in &self.terms {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(LaurentPoly { terms })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        if m.is_one() {
            return self.clone();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Rewrites every monomial through `f`, collecting like terms.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Simultaneously replaces `var^k` by `image^k` in every term.
    pub fn substitute(&self, var: &str, image: &Monomial) -> LaurentPoly {
        self.map_monomials(|m| {
            let (k, rest) = m.split_off(var);
            rest.mul(&image.pow(k))
        })
    }

    pub fn invert_vars(&self) -> LaurentPoly {
        self.map_monomials(Monomial::inverse)
    }

    /// Per-variable minimum exponent over all terms. Dividing by it leaves an
    /// ordinary polynomial divisible by no variable.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.min_with(m))
    }

    /// Splits off the monomial content: `self = shift * rest`.
    pub fn normalize_shift(&self) -> (Monomial, LaurentPoly) {
        let shift = self.monomial_content();
        let rest = self.mul_monomial(&shift.inverse());
        (shift, rest)
    }

    /// Exact division in the Laurent polynomial ring, `None` if `other` does
    /// not divide `self`.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if let Some((m, c)) = other.as_term() {
            return self.div_scalar(c).map(|p| p.mul_monomial(&m.inverse()));
        }
        let (sa, a) = self.normalize_shift();
        let (sb, b) = other.normalize_shift();
        let q = a.div_exact_ordinary(&b)?;
        Some(q.mul_monomial(&sa.mul(&sb.inverse())))
    }

    /// Division of ordinary polynomials (no negative exponents) by repeated
    /// elimination of the leading term.
    pub(crate) fn div_exact_ordinary(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        let (lm, lc) = other.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.mul(&lm.inverse());
            if qm.has_negative() {
                return None;
            }
            let (qc, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let step = LaurentPoly::term(qc.clone(), qm.clone());
            rem = &rem - &(&step * other);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients of the powers of `var`, each with `var` removed.
    pub(crate) fn coefficients_in(&self, var: &str) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_off(var);
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical rendering: terms in descending canonical order, `*` between
    /// factors, e.g. `2*t_a^2*t_b - t_b^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
