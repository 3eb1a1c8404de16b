use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Returns true when `name` is a legal variable name (`[A-Za-z0-9_]+`).
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// A Laurent monomial `t_a^e_a * t_b^e_b * ...` without coefficient.
///
/// Exponents are kept sorted by variable name and no stored exponent is zero,
/// so structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<(String, i64)>,
}

impl Monomial {
    /// The empty monomial, i.e. the constant 1.
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(name: &str) -> Self {
        Self::var_pow(name, 1)
    }

    pub fn var_pow(name: &str, exp: i64) -> Self {
        if exp == 0 {
            return Self::one();
        }
        Monomial {
            exps: vec![(name.to_string(), exp)],
        }
    }

    /// Builds a monomial from `(variable, exponent)` pairs. Repeated variables
    /// are multiplied together and zero exponents dropped.
    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut acc: BTreeMap<String, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v.as_ref().to_string()).or_insert(0) += e;
        }
        Monomial {
            exps: acc.into_iter().filter(|(_, e)| *e != 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, var: &str) -> i64 {
        self.exps
            .binary_search_by(|(v, _)| v.as_str().cmp(var))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.exps.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.exps.iter().map(|(v, _)| v.as_str())
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (&self.exps[i], &other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a.1 + b.1;
                    if e != 0 {
                        out.push((a.0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|(v, e)| (v.clone(), e * k)).collect(),
        }
    }

    pub fn inverse(&self) -> Monomial {
        self.pow(-1)
    }

    /// Removes `var` from the monomial, returning its former exponent.
    pub fn split_off(&self, var: &str) -> (i64, Monomial) {
        match self.exps.binary_search_by(|(v, _)| v.as_str().cmp(var)) {
            Ok(i) => {
                let mut rest = self.exps.clone();
                let (_, e) = rest.remove(i);
                (e, Monomial { exps: rest })
            }
            Err(_) => (0, self.clone()),
        }
    }

    /// Per-variable minimum of two monomials (absent variables count as 0).
    pub fn min_with(&self, other: &Monomial) -> Monomial {
        let vars = self.vars().chain(other.vars());
        Monomial::from_pairs(
            vars.map(|v| (v.to_string(), self.exponent(v).min(other.exponent(v))))
                .collect::<BTreeMap<_, _>>(),
        )
    }

    /// Renames variables; several variables may map to the same name, in which
    /// case their exponents add.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|(v, e)| (f(v), *e)))
    }

    pub fn has_negative(&self) -> bool {
        self.exps.iter().any(|(_, e)| *e < 0)
    }
}

/// Graded lexicographic order: total degree first, then exponents compared
/// variable by variable in name order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            let (ea, eb) = match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => {
                    i += 1;
                    (x.1, 0)
                }
                (None, Some(y)) => {
                    j += 1;
                    (0, y.1)
                }
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => {
                        i += 1;
                        (x.1, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (0, y.1)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (x.1, y.1)
                    }
                },
            };
            match ea.cmp(&eb) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_exponents_are_dropped() {
        let m = Monomial::from_pairs([("t_a", 2), ("t_b", 0), ("t_a", -2)]);
        assert!(m.is_one());
        assert_eq!(
            Monomial::var("t").mul(&Monomial::var_pow("t", -1)),
            Monomial::one()
        );
    }

    #[test]
    fn graded_order() {
        let a = Monomial::var_pow("t_a", 2);
        let ab = Monomial::from_pairs([("t_a", 1), ("t_b", 1)]);
        let b2 = Monomial::var_pow("t_b", 2);
        let inv = Monomial::var_pow("t_a", -1);
        assert!(a > ab && ab > b2);
        assert!(Monomial::one() > inv);
        assert!(Monomial::var("t_b") > Monomial::one());
    }

    #[test]
    fn display() {
        let m = Monomial::from_pairs([("t_b", -1), ("t_a", 2)]);
        assert_eq!(m.to_string(), "t_a^2*t_b^-1");
    }

    #[test]
    fn names() {
        assert!(is_valid_name("t_a_1"));
        assert!(!is_valid_name(""));
        assert!(!is_valid_name("a.b"));
    }
}
