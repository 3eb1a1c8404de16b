use std::collections::BTreeMap;

use crate::link::{
    builtin_catalog, satisfies_symmetry, torus_link, var_name, LinkSpec, LinkingMatrix,
};
use crate::symalg::{LaurentPoly, Monomial, RatFn};

use super::closed_form;
use super::expr::SpliceExpr;
use super::naming::{cable_labels, helper_labels, merged_label, splice_naming};
use super::SpliceError;

/// Evaluates splice expressions.
///
/// With `verify` set, the derived operations (cabling, connected sum,
/// satellite) also compute their closed forms independently and fail with
/// [`SpliceError::VerificationFailed`] on any disagreement.
#[derive(Clone, Copy, Debug, Default)]
pub struct Engine {
    pub verify: bool,
}

fn monomial_from(labels: &[String], exps: &[i64]) -> Monomial {
    Monomial::from_pairs(labels.iter().zip(exps).map(|(c, e)| (var_name(c), *e)))
}

/// `m - m^-1`.
pub(crate) fn sym_monomial(m: &Monomial) -> RatFn {
    &RatFn::monomial(m) - &RatFn::monomial(&m.inverse())
}

fn mismatch(check: &str, expected: &RatFn, found: &RatFn) -> SpliceError {
    SpliceError::VerificationFailed {
        check: check.to_string(),
        detail: format!("closed form {expected} != computed {found}"),
    }
}

/// Linking numbers of the splice of `left` along `left_comp` with `right`
/// along `right_comp`: cross pairs multiply the linking numbers with the
/// spliced components, same-side pairs are kept.
pub fn splice_linking(
    left: &LinkSpec,
    left_comp: &str,
    right: &LinkSpec,
    right_comp: &str,
) -> Result<(Vec<String>, LinkingMatrix), SpliceError> {
    left.require(left_comp)?;
    right.require(right_comp)?;
    let naming = splice_naming(&left.components, left_comp, &right.components, right_comp);
    let (_, llk) = left.without(left_comp);
    let (_, rlk) = right.without(right_comp);
    let lrow: Vec<i64> = left
        .linking_row(left_comp)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    let rrow: Vec<i64> = right
        .linking_row(right_comp)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    Ok((naming.labels, block_linking(&llk, &rlk, &lrow, &rrow)))
}

fn block_linking(
    llk: &LinkingMatrix,
    rlk: &LinkingMatrix,
    lrow: &[i64],
    rrow: &[i64],
) -> LinkingMatrix {
    let (m, k) = (llk.size(), rlk.size());
    let mut lk = LinkingMatrix::zeros(m + k);
    for (i, a) in lrow.iter().enumerate() {
        for j in i + 1..m {
            lk.set(i, j, llk.get(i, j));
        }
        for (j, b) in rrow.iter().enumerate() {
            lk.set(i, m + j, a * b);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            lk.set(m + i, m + j, rlk.get(i, j));
        }
    }
    lk
}

/// Reduced Conway function `(t - t^-1) * conway(t, ..., t)`.
pub fn omega(spec: &LinkSpec) -> Result<LaurentPoly, SpliceError> {
    let diag = spec.conway.diagonal("t")?;
    let value = &diag * &sym_monomial(&Monomial::var("t"));
    value
        .as_poly()
        .cloned()
        .ok_or_else(|| SpliceError::NotPolynomial {
            link: spec.name.clone(),
            value: value.to_string(),
        })
}

/// `conway(t^-1) == (-1)^n conway(t)`.
pub fn verify_symmetry(spec: &LinkSpec) -> bool {
    satisfies_symmetry(&spec.conway, spec.n())
}

/// Removes `comp` using the Torres formula:
/// `conway(.., t_comp = 1, ..) = (T - T^-1) * conway(sublink)` with
/// `T = prod t_i^lk(comp, i)`.
pub fn torres_remove(spec: &LinkSpec, comp: &str) -> Result<LinkSpec, SpliceError> {
    spec.require(comp)?;
    let degenerate = || SpliceError::TorresDegenerate {
        link: spec.name.clone(),
        comp: comp.to_string(),
    };
    if spec.n() < 2 {
        return Err(degenerate());
    }
    let (rest, lk) = spec.without(comp);
    let row: Vec<i64> = spec
        .linking_row(comp)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    let t = monomial_from(&rest, &row);
    if t.is_one() {
        return Err(degenerate());
    }
    let at_one = spec.conway.specialize_one(&var_name(comp))?;
    let conway = at_one.checked_div(&sym_monomial(&t))?;
    let mut sublinks = BTreeMap::new();
    for (k, sub) in &spec.sublinks {
        if let Some(inner) = sub.sublinks.get(comp) {
            if k != comp {
                sublinks.insert(k.clone(), inner.clone());
            }
        }
    }
    Ok(LinkSpec {
        name: format!("torres({}@{comp})", spec.name),
        components: rest,
        lk,
        conway,
        sublinks,
    })
}

impl Engine {
    pub fn new() -> Self {
        Engine { verify: false }
    }

    pub fn verifying() -> Self {
        Engine { verify: true }
    }

    pub fn eval(&self, expr: &SpliceExpr) -> Result<LinkSpec, SpliceError> {
        match expr {
            SpliceExpr::Leaf(spec) => {
                let violations = spec.validate();
                if !violations.is_empty() {
                    return Err(SpliceError::InvalidLeaf {
                        name: spec.name.clone(),
                        violations: violations.iter().map(|v| v.to_string()).collect(),
                    });
                }
                Ok(spec.clone())
            }
            SpliceExpr::Splice {
                left,
                left_comp,
                right,
                right_comp,
            } => self.splice(&self.eval(left)?, left_comp, &self.eval(right)?, right_comp),
            SpliceExpr::Cable {
                base,
                comp,
                p,
                q,
                d,
            } => self.cable(&self.eval(base)?, comp, *p, *q, *d),
            SpliceExpr::ConnSum {
                left,
                left_comp,
                right,
                right_comp,
            } => self.connected_sum(&self.eval(left)?, left_comp, &self.eval(right)?, right_comp),
            SpliceExpr::Satellite {
                companion,
                pattern,
                meridian,
            } => self.satellite(&self.eval(companion)?, &self.eval(pattern)?, meridian),
        }
    }

    /// Splices `left` along `left_comp` with `right` along `right_comp`.
    ///
    /// The Conway function is the product of the two Conway functions with
    /// each spliced meridian variable replaced by the monomial of linking
    /// numbers on the other side. The exception is a bare knot spliced along
    /// a component that links nothing else; the result is then the other
    /// link with that component deleted, which must be supplied as sublink
    /// data.
    pub fn splice(
        &self,
        left: &LinkSpec,
        left_comp: &str,
        right: &LinkSpec,
        right_comp: &str,
    ) -> Result<LinkSpec, SpliceError> {
        left.require(left_comp)?;
        right.require(right_comp)?;
        let name = format!(
            "splice({}@{left_comp},{}@{right_comp})",
            left.name, right.name
        );
        if left.n() == 1 && right.n() == 1 {
            return Err(SpliceError::DegenerateSplice {
                left: left.name.clone(),
                right: right.name.clone(),
            });
        }
        let naming = splice_naming(&left.components, left_comp, &right.components, right_comp);
        let left = left.relabel(&naming.left)?;
        let right = right.relabel(&naming.right)?;
        let (lrest, llk) = left.without(left_comp);
        let (rrest, rlk) = right.without(right_comp);
        let lrow: Vec<i64> = left
            .linking_row(left_comp)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v)
            .collect();
        let rrow: Vec<i64> = right
            .linking_row(right_comp)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v)
            .collect();

        // The bare-knot side takes the role with no surviving components.
        let exceptional = if left.n() == 1 && rrow.iter().all(|&v| v == 0) {
            Some((&right, right_comp))
        } else if right.n() == 1 && lrow.iter().all(|&v| v == 0) {
            Some((&left, left_comp))
        } else {
            None
        };
        if let Some((other, comp)) = exceptional {
            let sub = other
                .sublinks
                .get(comp)
                .ok_or_else(|| SpliceError::MissingSublinkData {
                    link: other.name.clone(),
                    comp: comp.to_string(),
                })?;
            let mut sub = sub.clone();
            sub.name = name;
            return Ok(sub);
        }

        let left_image = monomial_from(&rrest, &rrow);
        let right_image = monomial_from(&lrest, &lrow);
        let fl = left
            .conway
            .substitute_monomial(&var_name(left_comp), &left_image)?;
        let fr = right
            .conway
            .substitute_monomial(&var_name(right_comp), &right_image)?;
        Ok(LinkSpec {
            name,
            components: naming.labels,
            lk: block_linking(&llk, &rlk, &lrow, &rrow),
            conway: &fl * &fr,
            sublinks: BTreeMap::new(),
        })
    }

    /// Adds `d` parallel `(p, q)`-cables of `comp`. The torus core that
    /// survives the splice is renamed `comp`; the strands come last.
    pub fn cable(
        &self,
        base: &LinkSpec,
        comp: &str,
        p: i64,
        q: i64,
        d: i64,
    ) -> Result<LinkSpec, SpliceError> {
        base.require(comp)?;
        let torus = torus_link(p, q, d)?;
        let (core, strands) = cable_labels(&base.components, d);
        let mut mapping = BTreeMap::from([
            ("c2".to_string(), core.clone()),
            ("c1".to_string(), comp.to_string()),
        ]);
        for (i, s) in strands.iter().enumerate() {
            mapping.insert(format!("s{}", i + 1), s.clone());
        }
        let torus = torus.relabel(&mapping)?;
        let mut result = self.splice(base, comp, &torus, &core)?;
        result.name = format!("cable({}@{comp},{p},{q},{d})", base.name);
        if self.verify {
            let expected = closed_form::cable(base, comp, p, q, d, &strands)?;
            if expected != result.conway {
                return Err(mismatch("cable", &expected, &result.conway));
            }
        }
        Ok(result)
    }

    /// The cable with the original component `comp` removed.
    pub fn cable_remove(
        &self,
        base: &LinkSpec,
        comp: &str,
        p: i64,
        q: i64,
        d: i64,
    ) -> Result<LinkSpec, SpliceError> {
        let cabled = self.cable(base, comp, p, q, d)?;
        let mut result = torres_remove(&cabled, comp)?;
        result.name = format!("cable_remove({}@{comp},{p},{q},{d})", base.name);
        if self.verify {
            let (_, strands) = cable_labels(&base.components, d);
            let expected = closed_form::cable_remove(base, comp, p, q, d, &strands)?;
            if expected != result.conway {
                return Err(mismatch("cable_remove", &expected, &result.conway));
            }
        }
        Ok(result)
    }

    /// Connected sum along `left_comp` and `right_comp`, built as two splices
    /// through the three-component helper link. The merged component comes
    /// first and is named `left_comp` when that label is free.
    pub fn connected_sum(
        &self,
        left: &LinkSpec,
        left_comp: &str,
        right: &LinkSpec,
        right_comp: &str,
    ) -> Result<LinkSpec, SpliceError> {
        left.require(left_comp)?;
        right.require(right_comp)?;
        let (hx, hy, hc) = helper_labels(&left.components, &right.components);
        let helper = builtin_catalog().get("tilde").expect("builtin helper");
        let helper = helper.relabel(&BTreeMap::from([
            ("x".to_string(), hx.clone()),
            ("y".to_string(), hy.clone()),
            ("c".to_string(), hc.clone()),
        ]))?;
        let first = self.splice(&helper, &hx, left, left_comp)?;
        let second = self.splice(&first, &hy, right, right_comp)?;
        let merged = merged_label(left_comp, right_comp, &hc, &second.components[1..]);
        let mut result = second.relabel(&BTreeMap::from([(hc.clone(), merged.clone())]))?;
        result.name = format!(
            "connsum({}@{left_comp},{}@{right_comp})",
            left.name, right.name
        );
        if self.verify {
            let expected =
                closed_form::connected_sum(left, left_comp, right, right_comp, &result.components)?;
            if expected != result.conway {
                return Err(mismatch("connsum", &expected, &result.conway));
            }
        }
        Ok(result)
    }

    /// The satellite of the knot `companion` with pattern `pattern`, where
    /// `meridian` is the meridian of the pattern's solid torus.
    pub fn satellite(
        &self,
        companion: &LinkSpec,
        pattern: &LinkSpec,
        meridian: &str,
    ) -> Result<LinkSpec, SpliceError> {
        if companion.n() != 1 {
            return Err(SpliceError::NotAKnot {
                link: companion.name.clone(),
                components: companion.n(),
            });
        }
        pattern.require(meridian)?;
        let mut result = self.splice(companion, &companion.components[0], pattern, meridian)?;
        result.name = format!("satellite({},{}@{meridian})", companion.name, pattern.name);
        if self.verify {
            if let Some(expected) = closed_form::satellite(companion, pattern, meridian)? {
                if expected != result.conway {
                    return Err(mismatch("satellite", &expected, &result.conway));
                }
            }
        }
        Ok(result)
    }
}
