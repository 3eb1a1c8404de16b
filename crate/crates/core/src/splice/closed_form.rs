//! Closed forms for the derived operations, used as an independent check of
//! the splice route.

use std::collections::BTreeMap;

use crate::link::{var_name, LinkSpec};
use crate::symalg::{Monomial, RatFn};

use super::engine::{omega, sym_monomial, torres_remove};
use super::SpliceError;

fn strand_product(strands: &[String]) -> Monomial {
    Monomial::from_pairs(strands.iter().map(|s| (var_name(s), 1)))
}

/// `prod t_i^lk(comp, i)` over the other components, times `strands^q`.
fn cable_base_monomial(base: &LinkSpec, comp: &str, q: i64, strands: &[String]) -> Monomial {
    let row = base.linking_row(comp).unwrap_or_default();
    let others = Monomial::from_pairs(row.into_iter().map(|(c, v)| (var_name(&c), v)));
    others.mul(&strand_product(strands).pow(q))
}

/// Conway function of the base with `d` parallel `(p, q)`-cables of `comp`
/// added, the strands being labeled `strands`.
pub(crate) fn cable(
    base: &LinkSpec,
    comp: &str,
    p: i64,
    q: i64,
    d: i64,
    strands: &[String],
) -> Result<RatFn, SpliceError> {
    let t = cable_base_monomial(base, comp, q, strands);
    let tn = Monomial::var(&var_name(comp));
    let factor = sym_monomial(&tn.pow(q).mul(&t.pow(p))).pow(d)?;
    let shifted = tn.mul(&strand_product(strands).pow(p));
    let rest = base.conway.substitute_monomial(&var_name(comp), &shifted)?;
    Ok(&factor * &rest)
}

/// Conway function of the cable with `comp` itself removed.
pub(crate) fn cable_remove(
    base: &LinkSpec,
    comp: &str,
    p: i64,
    q: i64,
    d: i64,
    strands: &[String],
) -> Result<RatFn, SpliceError> {
    let t = cable_base_monomial(base, comp, q, strands);
    let factor = sym_monomial(&t.pow(p))
        .pow(d)?
        .checked_div(&sym_monomial(&t))?;
    let rest = base
        .conway
        .substitute_monomial(&var_name(comp), &strand_product(strands).pow(p))?;
    Ok(&factor * &rest)
}

/// `(t_m - t_m^-1) * conway(left) * conway(right)` where `result_labels`
/// lists the merged component first, then the surviving left components,
/// then the surviving right ones.
pub(crate) fn connected_sum(
    left: &LinkSpec,
    left_comp: &str,
    right: &LinkSpec,
    right_comp: &str,
    result_labels: &[String],
) -> Result<RatFn, SpliceError> {
    let merged = &result_labels[0];
    let mut rest = result_labels[1..].iter();
    let mut place = |spec: &LinkSpec, comp: &str| -> Result<RatFn, SpliceError> {
        let mut mapping = BTreeMap::new();
        for c in &spec.components {
            let target = if c == comp {
                merged
            } else {
                rest.next().expect("label count")
            };
            mapping.insert(c.clone(), target.clone());
        }
        Ok(spec.relabel(&mapping)?.conway)
    };
    let fl = place(left, left_comp)?;
    let fr = place(right, right_comp)?;
    let unit = sym_monomial(&Monomial::var(&var_name(merged)));
    Ok(&(&unit * &fl) * &fr)
}

/// `omega(companion)(prod t_i^l_i) * conway(pattern minus meridian)`, or
/// `None` when the pattern sublink is neither derivable nor supplied.
pub(crate) fn satellite(
    companion: &LinkSpec,
    pattern: &LinkSpec,
    meridian: &str,
) -> Result<Option<RatFn>, SpliceError> {
    let row = pattern.linking_row(meridian).unwrap_or_default();
    let image = Monomial::from_pairs(row.iter().map(|(c, v)| (var_name(c), *v)));
    let sub = if image.is_one() {
        match pattern.sublinks.get(meridian) {
            Some(s) => s.conway.clone(),
            None => return Ok(None),
        }
    } else {
        torres_remove(pattern, meridian)?.conway
    };
    let om = RatFn::from(omega(companion)?).substitute_monomial("t", &image)?;
    Ok(Some(&om * &sub))
}
