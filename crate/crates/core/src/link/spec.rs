use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::symalg::{is_valid_name, RatFn};

use super::LinkError;

/// Name of the Conway-function variable attached to a component label.
pub fn var_name(label: &str) -> String {
    format!("t_{label}")
}

/// Symmetric integer matrix of pairwise linking numbers. The diagonal is
/// unused and kept at 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinkingMatrix {
    rows: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn zeros(n: usize) -> Self {
        LinkingMatrix {
            rows: vec![vec![0; n]; n],
        }
    }

    /// Takes a raw square matrix. Symmetry is not enforced here so that
    /// malformed input can still be reported by validation.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        LinkingMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.rows[i][j] = v;
        self.rows[j][i] = v;
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// The submatrix on the given indices, in that order.
    pub fn select(&self, idx: &[usize]) -> LinkingMatrix {
        LinkingMatrix {
            rows: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }
}

/// An oriented ordered link described by its component labels, linking
/// numbers and Conway function.
///
/// Equality (`==`) compares components, linking matrix and Conway function;
/// the name and the attached sublink data are bookkeeping and ignored.
#[derive(Clone, Debug)]
pub struct LinkSpec {
    pub name: String,
    pub components: Vec<String>,
    pub lk: LinkingMatrix,
    pub conway: RatFn,
    /// Spec of the link with the keyed component removed.
    pub sublinks: BTreeMap<String, LinkSpec>,
}

impl PartialEq for LinkSpec {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && self.lk == other.lk && self.conway == other.conway
    }
}

impl Eq for LinkSpec {}

/// A failed [`LinkSpec`] invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidLabel { label: String },
    DuplicateComponent { label: String },
    MatrixShape { expected: usize },
    NonzeroDiagonal { label: String },
    Asymmetric { a: String, b: String },
    UnknownVariable { var: String },
    SymmetryRelation { components: usize },
    SublinkUnknownComponent { comp: String },
    SublinkComponents { comp: String },
    SublinkLinking { comp: String },
    Sublink { comp: String, inner: Box<Violation> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidLabel { label } => write!(f, "invalid-label: {label:?}"),
            Violation::DuplicateComponent { label } => write!(f, "duplicate-component: {label}"),
            Violation::MatrixShape { expected } => {
                write!(f, "linking-matrix-shape: expected {expected}x{expected}")
            }
            Violation::NonzeroDiagonal { label } => write!(f, "nonzero-diagonal: {label}"),
            Violation::Asymmetric { a, b } => write!(f, "asymmetric-linking: {a} {b}"),
            Violation::UnknownVariable { var } => write!(f, "unknown-variable: {var}"),
            Violation::SymmetryRelation { components } => {
                write!(f, "symmetry: conway(t^-1) != (-1)^{components} conway(t)")
            }
            Violation::SublinkUnknownComponent { comp } => {
                write!(f, "sublink-unknown-component: {comp}")
            }
            Violation::SublinkComponents { comp } => write!(f, "sublink-components: {comp}"),
            Violation::SublinkLinking { comp } => write!(f, "sublink-linking: {comp}"),
            Violation::Sublink { comp, inner } => write!(f, "sublink {comp}: {inner}"),
        }
    }
}

impl LinkSpec {
    /// Builds a spec from component labels and the nonzero linking numbers.
    /// Unknown labels in `lk` are a caller bug and panic.
    pub fn new<S: AsRef<str>>(
        name: &str,
        components: &[S],
        lk: &[(S, S, i64)],
        conway: RatFn,
    ) -> LinkSpec {
        let components: Vec<String> = components.iter().map(|c| c.as_ref().to_string()).collect();
        let mut matrix = LinkingMatrix::zeros(components.len());
        for (a, b, v) in lk {
            let i = components
                .iter()
                .position(|c| c == a.as_ref())
                .expect("known label");
            let j = components
                .iter()
                .position(|c| c == b.as_ref())
                .expect("known label");
            matrix.set(i, j, *v);
        }
        LinkSpec {
            name: name.to_string(),
            components,
            lk: matrix,
            conway,
            sublinks: BTreeMap::new(),
        }
    }

    pub fn with_sublink(mut self, comp: &str, sub: LinkSpec) -> LinkSpec {
        self.sublinks.insert(comp.to_string(), sub);
        self
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.components.iter().position(|c| c == label)
    }

    pub fn require(&self, label: &str) -> Result<usize, LinkError> {
        self.index(label)
            .ok_or_else(|| LinkError::UnknownComponent {
                link: self.name.clone(),
                label: label.to_string(),
            })
    }

    pub fn linking(&self, a: &str, b: &str) -> Option<i64> {
        Some(self.lk.get(self.index(a)?, self.index(b)?))
    }

    /// Linking numbers of `label` with every other component, in order.
    pub fn linking_row(&self, label: &str) -> Option<Vec<(String, i64)>> {
        let i = self.index(label)?;
        Some(
            self.components
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(j, c)| (c.clone(), self.lk.get(i, j)))
                .collect(),
        )
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !is_valid_name(c) {
                out.push(Violation::InvalidLabel { label: c.clone() });
            }
            if !seen.insert(c.as_str()) {
                out.push(Violation::DuplicateComponent { label: c.clone() });
            }
        }
        let n = self.n();
        if self.lk.size() != n || self.lk.rows().iter().any(|r| r.len() != n) {
            out.push(Violation::MatrixShape { expected: n });
        } else {
            for i in 0..n {
                if self.lk.get(i, i) != 0 {
                    out.push(Violation::NonzeroDiagonal {
                        label: self.components[i].clone(),
                    });
                }
                for j in i + 1..n {
                    if self.lk.get(i, j) != self.lk.get(j, i) {
                        out.push(Violation::Asymmetric {
                            a: self.components[i].clone(),
                            b: self.components[j].clone(),
                        });
                    }
                }
            }
        }
        let allowed: BTreeSet<String> = self.components.iter().map(|c| var_name(c)).collect();
        for v in self.conway.vars() {
            if !allowed.contains(&v) {
                out.push(Violation::UnknownVariable { var: v });
            }
        }
        if !satisfies_symmetry(&self.conway, n) {
            out.push(Violation::SymmetryRelation { components: n });
        }
        for (comp, sub) in &self.sublinks {
            let Some(i) = self.index(comp) else {
                out.push(Violation::SublinkUnknownComponent { comp: comp.clone() });
                continue;
            };
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let expected: Vec<String> = rest.iter().map(|&j| self.components[j].clone()).collect();
            if sub.components != expected {
                out.push(Violation::SublinkComponents { comp: comp.clone() });
            } else if out
                .iter()
                .all(|v| !matches!(v, Violation::MatrixShape { .. }))
                && sub.lk != self.lk.select(&rest)
            {
                out.push(Violation::SublinkLinking { comp: comp.clone() });
            }
            for inner in sub.validate() {
                out.push(Violation::Sublink {
                    comp: comp.clone(),
                    inner: Box::new(inner),
                });
            }
        }
        out
    }

    /// Renames components. Labels absent from `mapping` keep their name; the
    /// resulting labels must be distinct.
    pub fn relabel(&self, mapping: &BTreeMap<String, String>) -> Result<LinkSpec, LinkError> {
        let rename = |c: &str| mapping.get(c).cloned().unwrap_or_else(|| c.to_string());
        let components: Vec<String> = self.components.iter().map(|c| rename(c)).collect();
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert(c.as_str()) {
                return Err(LinkError::Collision { label: c.clone() });
            }
        }
        let var_map: BTreeMap<String, String> = self
            .components
            .iter()
            .zip(&components)
            .map(|(old, new)| (var_name(old), var_name(new)))
            .collect();
        let conway = self
            .conway
            .rename_vars(|v| var_map.get(v).cloned().unwrap_or_else(|| v.to_string()));
        let mut sublinks = BTreeMap::new();
        for (comp, sub) in &self.sublinks {
            sublinks.insert(rename(comp), sub.relabel(mapping)?);
        }
        Ok(LinkSpec {
            name: self.name.clone(),
            components,
            lk: self.lk.clone(),
            conway,
            sublinks,
        })
    }

    /// Renames the components, in order, to `labels`.
    pub fn relabel_positional(&self, labels: &[String]) -> Result<LinkSpec, LinkError> {
        if labels.len() != self.n() {
            return Err(LinkError::ComponentCount {
                link: self.name.clone(),
                expected: self.n(),
                found: labels.len(),
            });
        }
        let mapping = self
            .components
            .iter()
            .cloned()
            .zip(labels.iter().cloned())
            .collect();
        self.relabel(&mapping)
    }

    /// Equality up to reordering of the components: same label set, same
    /// linking number for every label pair, same Conway function.
    pub fn equivalent_unordered(&self, other: &LinkSpec) -> bool {
        if self.n() != other.n() || self.conway != other.conway {
            return false;
        }
        let perm: Option<Vec<usize>> = self.components.iter().map(|c| other.index(c)).collect();
        let Some(perm) = perm else {
            return false;
        };
        (0..self.n())
            .all(|i| (0..self.n()).all(|j| self.lk.get(i, j) == other.lk.get(perm[i], perm[j])))
    }

    /// Components and linking data with `label` deleted.
    pub(crate) fn without(&self, label: &str) -> (Vec<String>, LinkingMatrix) {
        let rest: Vec<usize> = (0..self.n())
            .filter(|&j| self.components[j] != label)
            .collect();
        (
            rest.iter().map(|&j| self.components[j].clone()).collect(),
            self.lk.select(&rest),
        )
    }
}

/// `f(t^-1) == (-1)^n f(t)`.
pub fn satisfies_symmetry(f: &RatFn, n: usize) -> bool {
    let inv = f.invert_vars();
    if n.is_multiple_of(2) {
        inv == *f
    } else {
        inv == -f.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_ratfn;

    fn hopf() -> LinkSpec {
        LinkSpec::new("hopf", &["a", "b"], &[("a", "b", 1)], RatFn::one())
    }

    #[test]
    fn hopf_is_valid() {
        assert!(hopf().validate().is_empty());
    }

    #[test]
    fn symmetry_violation() {
        let s = LinkSpec::new("bad", &["1", "2"], &[], parse_ratfn("t_1").unwrap());
        assert_eq!(
            s.validate(),
            vec![Violation::SymmetryRelation { components: 2 }]
        );
    }

    #[test]
    fn unknown_variable() {
        let s = LinkSpec::new(
            "bad",
            &["a", "b"],
            &[],
            parse_ratfn("t_z - t_z^-1").unwrap(),
        );
        let v = s.validate();
        assert!(v.contains(&Violation::UnknownVariable { var: "t_z".into() }));
    }

    #[test]
    fn asymmetric_matrix() {
        let mut s = hopf();
        s.lk = LinkingMatrix::from_rows(vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(
            s.validate(),
            vec![Violation::Asymmetric {
                a: "a".into(),
                b: "b".into()
            }]
        );
    }

    #[test]
    fn relabel_cases() {
        let m: BTreeMap<String, String> =
            [("a".into(), "m".into()), ("b".into(), "n".into())].into();
        let r = hopf().relabel(&m).unwrap();
        assert_eq!(r.components, vec!["m", "n"]);
        assert!(r.validate().is_empty());
        assert_eq!(r.conway, RatFn::one());

        let clash: BTreeMap<String, String> =
            [("a".into(), "b".into()), ("b".into(), "b".into())].into();
        assert_eq!(
            hopf().relabel(&clash),
            Err(LinkError::Collision { label: "b".into() })
        );
    }
}
