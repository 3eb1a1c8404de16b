use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::gcd::gcd;
use super::monomial::Monomial;
use super::poly::LaurentPoly;
use super::SymError;

/// A rational function `numerator / denominator` over `Z[t^±1, ...]` in
/// canonical reduced form.
///
/// Canonical form means: the two parts share no non-unit factor, the
/// denominator carries no monomial factor (every variable has minimum
/// exponent 0 in it) and its leading coefficient is positive. Two equal
/// rational functions therefore have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        RatFn::from_poly(LaurentPoly::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        RatFn::from_poly(LaurentPoly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        RatFn::from_poly(LaurentPoly::var(name))
    }

    pub fn monomial(m: &Monomial) -> Self {
        RatFn::from_poly(LaurentPoly::term(1, m.clone()))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFn {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    /// Builds and reduces `num / den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = if den.num_terms() == 1 || num.num_terms() == 1 {
            // gcd with a single term is just an integer content.
            use num_integer::Integer;
            LaurentPoly::constant(num.content().gcd(&den.content()))
        } else {
            gcd(&num, &den)
        };
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        Ok(Self::from_coprime(num, den))
    }

    /// Normalizes a pair already known to be coprime: moves the monomial
    /// content of the denominator upstairs and fixes the sign.
    fn from_coprime(num: LaurentPoly, den: LaurentPoly) -> Self {
        let (shift, den) = den.normalize_shift();
        let mut num = num.mul_monomial(&shift.inverse());
        let mut den = den;
        if den.leading_coeff_sign() < 0 {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return RatFn::zero();
        }
        RatFn { num, den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The underlying Laurent polynomial when the denominator is 1.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.num.mentions(var) || self.den.mentions(var)
    }

    pub fn inverse(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<Self, SymError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self, SymError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let e = u32::try_from(k.unsigned_abs()).expect("exponent fits in u32");
        // Powers of a reduced fraction stay reduced.
        Ok(Self::from_coprime(base.num.pow(e), base.den.pow(e)))
    }

    /// Replaces `var` by the monomial `image` everywhere; the empty monomial
    /// sets `var` to 1.
    pub fn substitute_monomial(&self, var: &str, image: &Monomial) -> Result<Self, SymError> {
        if !self.mentions(var) {
            return Ok(self.clone());
        }
        let num = self.num.substitute(var, image);
        let den = self.den.substitute(var, image);
        if den.is_zero() {
            return Err(SymError::SingularSpecialization {
                var: var.to_string(),
            });
        }
        RatFn::new(num, den)
    }

    pub fn specialize_one(&self, var: &str) -> Result<Self, SymError> {
        self.substitute_monomial(var, &Monomial::one())
    }

    /// `f(t_1^-1, ..., t_n^-1)`.
    pub fn invert_vars(&self) -> Self {
        Self::from_coprime(self.num.invert_vars(), self.den.invert_vars())
    }

    /// Sets every variable equal to `var`.
    pub fn diagonal(&self, var: &str) -> Result<Self, SymError> {
        let collapse = |m: &Monomial| m.rename(|_| var.to_string());
        let num = self.num.map_monomials(collapse);
        let den = self.den.map_monomials(collapse);
        if den.is_zero() {
            return Err(SymError::SingularSpecialization {
                var: var.to_string(),
            });
        }
        RatFn::new(num, den)
    }

    /// Renames variables through `f`, which must be injective on the
    /// variables present.
    pub fn rename_vars(&self, f: impl Fn(&str) -> String) -> Self {
        let g = |m: &Monomial| m.rename(&f);
        Self::from_coprime(self.num.map_monomials(g), self.den.map_monomials(g))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl From<LaurentPoly> for RatFn {
    fn from(p: LaurentPoly) -> Self {
        RatFn::from_poly(p)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return RatFn::zero();
        }
        let g2 = gcd(&num, &g);
        let num = num.div_exact(&g2).expect("gcd divides");
        let g = g.div_exact(&g2).expect("gcd divides");
        RatFn::from_coprime(num, &(&d1 * &d2) * &g)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFn::from_poly(&self.num * &rhs.num);
        }
        // Both operands are reduced, so cross-cancellation suffices.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFn::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

/// Panics on division by zero; use [`RatFn::checked_div`] for a `Result`.
impl Div for &RatFn {
    type Output = RatFn;
    fn div(self, rhs: &RatFn) -> RatFn {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Zero for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, rhs: RatFn) -> RatFn {
        &self + &rhs
    }
}
