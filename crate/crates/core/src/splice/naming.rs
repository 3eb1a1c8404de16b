//! Label bookkeeping shared by evaluation and by structural label inference.

use std::collections::{BTreeMap, BTreeSet};

/// Returns `candidate` if unused, else the first free `candidate_k`, k >= 2.
/// The chosen label is added to `taken`.
pub(crate) fn fresh_label(candidate: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = candidate.to_string();
    let mut k = 2;
    while taken.contains(&name) {
        name = format!("{candidate}_{k}");
        k += 1;
    }
    taken.insert(name.clone());
    name
}

/// How the surviving components of a splice are named in the result.
#[derive(Clone, Debug)]
pub(crate) struct SpliceNaming {
    pub left: BTreeMap<String, String>,
    pub right: BTreeMap<String, String>,
    /// Result labels: surviving left components, then surviving right ones.
    pub labels: Vec<String>,
}

/// Surviving labels keep their name unless the same label survives on both
/// sides; then the left copy becomes `l_<label>` and the right `r_<label>`
/// (made unique against every label in play).
pub(crate) fn splice_naming(
    left: &[String],
    left_comp: &str,
    right: &[String],
    right_comp: &str,
) -> SpliceNaming {
    let left_rest: Vec<&String> = left.iter().filter(|c| *c != left_comp).collect();
    let right_rest: Vec<&String> = right.iter().filter(|c| *c != right_comp).collect();
    let clashes: BTreeSet<&String> = left_rest
        .iter()
        .filter(|c| right_rest.contains(c))
        .copied()
        .collect();
    let mut taken: BTreeSet<String> = left.iter().chain(right).cloned().collect();
    let mut lmap = BTreeMap::new();
    let mut rmap = BTreeMap::new();
    for c in &clashes {
        lmap.insert((*c).clone(), fresh_label(&format!("l_{c}"), &mut taken));
        rmap.insert((*c).clone(), fresh_label(&format!("r_{c}"), &mut taken));
    }
    let rename =
        |m: &BTreeMap<String, String>, c: &String| m.get(c).cloned().unwrap_or_else(|| c.clone());
    let labels = left_rest
        .iter()
        .map(|c| rename(&lmap, c))
        .chain(right_rest.iter().map(|c| rename(&rmap, c)))
        .collect();
    SpliceNaming {
        left: lmap,
        right: rmap,
        labels,
    }
}

/// Labels used when cabling `base_labels` along `comp` with `d` strands:
/// the spliced torus core and the strands.
pub(crate) fn cable_labels(base_labels: &[String], d: i64) -> (String, Vec<String>) {
    let mut taken: BTreeSet<String> = base_labels.iter().cloned().collect();
    let core = fresh_label("c2", &mut taken);
    let strands = (1..=d)
        .map(|i| fresh_label(&format!("s{i}"), &mut taken))
        .collect();
    (core, strands)
}

/// Labels `(x, y, c)` for the connected-sum helper, disjoint from both sides.
pub(crate) fn helper_labels(left: &[String], right: &[String]) -> (String, String, String) {
    let mut taken: BTreeSet<String> = left.iter().chain(right).cloned().collect();
    let x = fresh_label("x", &mut taken);
    let y = fresh_label("y", &mut taken);
    let c = fresh_label("c", &mut taken);
    (x, y, c)
}

/// Name for the merged component of a connected sum.
pub(crate) fn merged_label(
    left_comp: &str,
    right_comp: &str,
    helper_c: &str,
    others: &[String],
) -> String {
    [left_comp, right_comp]
        .into_iter()
        .find(|c| !others.iter().any(|o| o == c))
        .unwrap_or(helper_c)
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn no_clash_keeps_names() {
        let n = splice_naming(&v(&["a", "b"]), "a", &v(&["x", "y", "c"]), "c");
        assert_eq!(n.labels, v(&["b", "x", "y"]));
        assert!(n.left.is_empty() && n.right.is_empty());
    }

    #[test]
    fn clash_prefixes_both_sides() {
        let n = splice_naming(&v(&["a", "b"]), "a", &v(&["a", "b"]), "a");
        assert_eq!(n.labels, v(&["l_b", "r_b"]));
        let n = splice_naming(&v(&["a", "b", "l_b"]), "a", &v(&["a", "b"]), "a");
        assert_eq!(n.labels, v(&["l_b_2", "l_b", "r_b"]));
    }

    #[test]
    fn cable_and_helper_labels_avoid_base() {
        let (core, strands) = cable_labels(&v(&["c2", "s1"]), 2);
        assert_eq!(core, "c2_2");
        assert_eq!(strands, v(&["s1_2", "s2"]));
        assert_eq!(
            helper_labels(&v(&["x"]), &v(&["c"])),
            ("x_2".into(), "y".into(), "c_2".into())
        );
    }
}
