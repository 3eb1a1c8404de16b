//! Multivariate gcd by recursive content / primitive-part reduction.
//!
//! A polynomial is viewed as univariate in one main variable with
//! coefficients in the remaining ones. Contents are computed recursively and
//! the primitive parts are handled by a primitive pseudo-remainder sequence.

use num_integer::Integer;

use super::monomial::Monomial;
use super::poly::LaurentPoly;

/// Gcd in `Z[t^±1, ...]`, normalized to have no monomial content and a
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (_, a) = a.normalize_shift();
    let (_, b) = b.normalize_shift();
    let g = poly_gcd(&a, &b);
    g.normalize_shift().1
}

fn positive(p: LaurentPoly) -> LaurentPoly {
    if p.leading_coeff_sign() < 0 {
        -p
    } else {
        p
    }
}

/// Gcd of ordinary polynomials (all exponents nonnegative).
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return positive(b.clone());
    }
    if b.is_zero() {
        return positive(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::constant(a.content().gcd(&b.content()));
    }
    if let Some((m, c)) = a.as_term() {
        return single_term_gcd(m, c, b);
    }
    if let Some((m, c)) = b.as_term() {
        return single_term_gcd(m, c, a);
    }
    let (small, big) = if a.num_terms() <= b.num_terms() {
        (a, b)
    } else {
        (b, a)
    };
    if big.div_exact_ordinary(small).is_some() {
        return positive(small.clone());
    }

    let va = a.vars();
    let vb = b.vars();
    let x = match va.symmetric_difference(&vb).next() {
        Some(v) => v.clone(),
        None => {
            let bounds: Vec<(usize, i64, &String)> = va
                .iter()
                .map(|v| {
                    (
                        degree_bound(a, b, v),
                        a.degree_range(v).1 + b.degree_range(v).1,
                        v,
                    )
                })
                .collect();
            let (bound, _, v) = bounds
                .into_iter()
                .min()
                .expect("non-constant polynomial has a variable");
            if bound == 0 {
                return poly_gcd(&content_in(a, v), &content_in(b, v));
            }
            v.clone()
        }
    };

    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let c = poly_gcd(&ca, &cb);
    if !(a.mentions(&x) && b.mentions(&x)) {
        return c;
    }
    let pa = a.div_exact_ordinary(&ca).expect("content divides");
    let pb = b.div_exact_ordinary(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, &x);
    positive(&c * &g)
}

const PRIME: u64 = 2_147_483_647;

fn mul_mod(a: u64, b: u64) -> u64 {
    a * b % PRIME
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn reduce(c: &num_bigint::BigInt) -> u64 {
    let r = c.mod_floor(&num_bigint::BigInt::from(PRIME));
    u64::try_from(r).expect("reduced residue fits")
}

/// Coefficients in `x`, lowest degree first, of the image of `p` mod
/// `PRIME` with every other variable `v` sent to `point(v)`.
fn image(p: &LaurentPoly, x: &str, point: &dyn Fn(&str) -> u64) -> Vec<u64> {
    let mut out = vec![0; p.degree_range(x).1 as usize + 1];
    for (m, c) in p.terms() {
        let mut value = reduce(c);
        for (v, e) in m.iter() {
            if v != x {
                value = mul_mod(value, pow_mod(point(v), e as u64));
            }
        }
        let slot = &mut out[m.exponent(x) as usize];
        *slot = (*slot + value) % PRIME;
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Degree of the gcd of two univariate polynomials mod `PRIME`.
fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), PRIME - 2);
        while a.len() >= b.len() {
            let factor = mul_mod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + PRIME - mul_mod(factor, c)) % PRIME;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// An upper bound for the degree in `x` of `gcd(a, b)`, from images at
/// points where the leading coefficient of `a` in `x` survives.
fn degree_bound(a: &LaurentPoly, b: &LaurentPoly, x: &str) -> usize {
    let da = a.degree_range(x).1 as usize;
    let fallback = da.min(b.degree_range(x).1 as usize);
    for attempt in 0..3u64 {
        let point = |v: &str| {
            let h = v
                .bytes()
                .fold(attempt.wrapping_mul(0x9e37_79b9) + 7, |h, c| {
                    h.wrapping_mul(1_000_003).wrapping_add(c as u64)
                });
            2 + h % (PRIME - 3)
        };
        let ia = image(a, x, &point);
        if ia.len() != da + 1 || ia[da] == 0 {
            continue;
        }
        return univariate_gcd_degree(ia, image(b, x, &point));
    }
    fallback
}

fn single_term_gcd(m: &Monomial, c: &num_bigint::BigInt, other: &LaurentPoly) -> LaurentPoly {
    let coeff = c.gcd(&other.content());
    let mono = other.monomial_content().min_with(m);
    LaurentPoly::term(coeff, mono)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
fn content_in(p: &LaurentPoly, x: &str) -> LaurentPoly {
    let mut g = LaurentPoly::zero();
    for coeff in p.coefficients_in(x).values() {
        g = poly_gcd(&g, coeff);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in(p: &LaurentPoly, x: &str) -> LaurentPoly {
    let c = content_in(p, x);
    positive(p.div_exact_ordinary(&c).expect("content divides"))
}

fn degree_in(p: &LaurentPoly, x: &str) -> i64 {
    p.degree_range(x).1
}

fn leading_in(p: &LaurentPoly, x: &str) -> LaurentPoly {
    p.coefficients_in(x)
        .remove(&degree_in(p, x))
        .expect("leading coefficient")
}

fn exact(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    a.div_exact_ordinary(b)
        .expect("subresultant division is exact")
}

/// Gcd of two polynomials primitive in `x`, by the subresultant remainder
/// sequence.
fn primitive_prs(a: LaurentPoly, b: LaurentPoly, x: &str) -> LaurentPoly {
    let (mut a, mut b) = if degree_in(&a, x) >= degree_in(&b, x) {
        (a, b)
    } else {
        (b, a)
    };
    let mut g = LaurentPoly::one();
    let mut h = LaurentPoly::one();
    loop {
        let delta = (degree_in(&a, x) - degree_in(&b, x)) as u32;
        let r = pseudo_remainder(&a, &b, x);
        if r.is_zero() {
            return primitive_part_in(&b, x);
        }
        if degree_in(&r, x) == 0 {
            return LaurentPoly::one();
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = exact(&r, &divisor);
        g = leading_in(&a, x);
        h = if delta == 0 {
            h
        } else {
            exact(&g.pow(delta), &h.pow(delta - 1))
        };
    }
}

/// `lc(b)^(deg a - deg b + 1) * a` reduced modulo `b` in `x`.
fn pseudo_remainder(a: &LaurentPoly, b: &LaurentPoly, x: &str) -> LaurentPoly {
    let db = degree_in(b, x);
    let lcb = leading_in(b, x);
    let mut steps = degree_in(a, x) - db + 1;
    let mut r = a.clone();
    while !r.is_zero() && degree_in(&r, x) >= db {
        let dr = degree_in(&r, x);
        let lcr = leading_in(&r, x);
        let shifted = b.mul_monomial(&Monomial::var_pow(x, dr - db));
        r = &(&lcb * &r) - &(&lcr * &shifted);
        steps -= 1;
    }
    &r * &lcb.pow(steps.max(0) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(terms: &[(i64, &[(&str, i64)])]) -> LaurentPoly {
        LaurentPoly::from_terms(
            terms
                .iter()
                .map(|(c, m)| (Monomial::from_pairs(m.iter().copied()), BigInt::from(*c))),
        )
    }

    #[test]
    fn univariate() {
        // gcd(t^2 - 1, t^2 + 2t + 1) = t + 1
        let a = p(&[(1, &[("t", 2)]), (-1, &[])]);
        let b = p(&[(1, &[("t", 2)]), (2, &[("t", 1)]), (1, &[])]);
        assert_eq!(gcd(&a, &b), p(&[(1, &[("t", 1)]), (1, &[])]));
    }

    #[test]
    fn laurent_units_ignored() {
        // t - t^-1 and t^2 - t^-2 share t - t^-1 = t^-1 (t^2 - 1)
        let a = p(&[(1, &[("t", 1)]), (-1, &[("t", -1)])]);
        let b = p(&[(1, &[("t", 2)]), (-1, &[("t", -2)])]);
        assert_eq!(gcd(&a, &b), p(&[(1, &[("t", 2)]), (-1, &[])]));
    }

    #[test]
    fn multivariate_common_factor() {
        let f = p(&[(1, &[("x", 1), ("y", 1)]), (-1, &[])]);
        let g1 = p(&[(2, &[("x", 2)]), (1, &[("y", 1)])]);
        let g2 = p(&[(1, &[("y", 3)]), (3, &[("x", 1)]), (1, &[])]);
        let a = &f * &g1;
        let b = &f * &g2;
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn integer_content() {
        let a = p(&[(4, &[("x", 1)]), (6, &[])]);
        let b = p(&[(6, &[("x", 1)]), (9, &[])]);
        assert_eq!(gcd(&a, &b), p(&[(2, &[("x", 1)]), (3, &[])]));
        assert_eq!(gcd(&a, &LaurentPoly::constant(8)), LaurentPoly::constant(2));
    }

    #[test]
    fn disjoint_variables() {
        let a = p(&[(1, &[("x", 1)]), (1, &[])]);
        let b = p(&[(1, &[("y", 1)]), (1, &[])]);
        assert!(gcd(&a, &b).is_one());
    }
}
