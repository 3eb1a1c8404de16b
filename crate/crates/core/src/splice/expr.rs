use std::fmt;

use crate::link::LinkSpec;

use super::naming::{cable_labels, helper_labels, merged_label, splice_naming};

/// A tree of splice operations over catalog links.
#[derive(Clone, Debug, PartialEq)]
pub enum SpliceExpr {
    Leaf(LinkSpec),
    Splice {
        left: Box<SpliceExpr>,
        left_comp: String,
        right: Box<SpliceExpr>,
        right_comp: String,
    },
    Cable {
        base: Box<SpliceExpr>,
        comp: String,
        p: i64,
        q: i64,
        d: i64,
    },
    ConnSum {
        left: Box<SpliceExpr>,
        left_comp: String,
        right: Box<SpliceExpr>,
        right_comp: String,
    },
    Satellite {
        companion: Box<SpliceExpr>,
        pattern: Box<SpliceExpr>,
        meridian: String,
    },
}

impl SpliceExpr {
    pub fn leaf(spec: LinkSpec) -> Self {
        SpliceExpr::Leaf(spec)
    }

    pub fn splice(left: SpliceExpr, left_comp: &str, right: SpliceExpr, right_comp: &str) -> Self {
        SpliceExpr::Splice {
            left: Box::new(left),
            left_comp: left_comp.to_string(),
            right: Box::new(right),
            right_comp: right_comp.to_string(),
        }
    }

    pub fn cable(base: SpliceExpr, comp: &str, p: i64, q: i64, d: i64) -> Self {
        SpliceExpr::Cable {
            base: Box::new(base),
            comp: comp.to_string(),
            p,
            q,
            d,
        }
    }

    pub fn conn_sum(
        left: SpliceExpr,
        left_comp: &str,
        right: SpliceExpr,
        right_comp: &str,
    ) -> Self {
        SpliceExpr::ConnSum {
            left: Box::new(left),
            left_comp: left_comp.to_string(),
            right: Box::new(right),
            right_comp: right_comp.to_string(),
        }
    }

    pub fn satellite(companion: SpliceExpr, pattern: SpliceExpr, meridian: &str) -> Self {
        SpliceExpr::Satellite {
            companion: Box::new(companion),
            pattern: Box::new(pattern),
            meridian: meridian.to_string(),
        }
    }

    /// Component labels of the evaluated result, in result order, computed
    /// without evaluating any Conway function. Component references are
    /// assumed valid.
    pub fn labels(&self) -> Vec<String> {
        match self {
            SpliceExpr::Leaf(spec) => spec.components.clone(),
            SpliceExpr::Splice {
                left,
                left_comp,
                right,
                right_comp,
            } => splice_naming(&left.labels(), left_comp, &right.labels(), right_comp).labels,
            SpliceExpr::Cable { base, comp, d, .. } => {
                let base = base.labels();
                let (_, strands) = cable_labels(&base, *d);
                let mut out: Vec<String> = base.into_iter().filter(|c| c != comp).collect();
                out.push(comp.clone());
                out.extend(strands);
                out
            }
            SpliceExpr::ConnSum {
                left,
                left_comp,
                right,
                right_comp,
            } => {
                let (l, r) = (left.labels(), right.labels());
                let (hx, hy, hc) = helper_labels(&l, &r);
                let first =
                    splice_naming(&[hx.clone(), hy.clone(), hc.clone()], &hx, &l, left_comp).labels;
                let mut second = splice_naming(&first, &hy, &r, right_comp).labels;
                second[0] = merged_label(left_comp, right_comp, &hc, &second[1..]);
                second
            }
            SpliceExpr::Satellite {
                companion,
                pattern,
                meridian,
            } => {
                let k = companion.labels();
                let knot = k.first().cloned().unwrap_or_default();
                splice_naming(&k, &knot, &pattern.labels(), meridian).labels
            }
        }
    }

    /// Number of operation nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            SpliceExpr::Leaf(_) => 0,
            SpliceExpr::Splice { left, right, .. } | SpliceExpr::ConnSum { left, right, .. } => {
                1 + left.depth().max(right.depth())
            }
            SpliceExpr::Cable { base, .. } => 1 + base.depth(),
            SpliceExpr::Satellite {
                companion, pattern, ..
            } => 1 + companion.depth().max(pattern.depth()),
        }
    }
}

impl fmt::Display for SpliceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpliceExpr::Leaf(spec) => write!(f, "{}", spec.name),
            SpliceExpr::Splice {
                left,
                left_comp,
                right,
                right_comp,
            } => write!(f, "splice({left}@{left_comp}, {right}@{right_comp})"),
            SpliceExpr::Cable {
                base,
                comp,
                p,
                q,
                d,
            } => write!(f, "cable({base}@{comp}, {p}, {q}, {d})"),
            SpliceExpr::ConnSum {
                left,
                left_comp,
                right,
                right_comp,
            } => write!(f, "connsum({left}@{left_comp}, {right}@{right_comp})"),
            SpliceExpr::Satellite {
                companion,
                pattern,
                meridian,
            } => write!(f, "satellite({companion}, {pattern}@{meridian})"),
        }
    }
}
