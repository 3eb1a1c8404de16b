use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;

use crate::symalg::{parse_ratfn, Monomial, RatFn, SymError};

use super::spec::{var_name, LinkSpec, LinkingMatrix};
use super::LinkError;

/// Named base links. Entries are validated on insertion and never shadowed.
///
/// Besides the stored entries, names of the form `torus(p,q,d)` resolve to
/// the parametric torus-link family.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: BTreeMap<String, LinkSpec>,
}

fn sym_rat(m: &Monomial) -> RatFn {
    &RatFn::monomial(m) - &RatFn::monomial(&m.inverse())
}

fn knot_from_omega(name: &str, label: &str, omega: &str) -> LinkSpec {
    let t = var_name(label);
    let omega = parse_ratfn(&omega.replace('t', &t)).expect("builtin expression");
    let conway = omega
        .checked_div(&sym_rat(&Monomial::var(&t)))
        .expect("nonzero");
    LinkSpec::new(name, &[label], &[], conway)
}

fn unknot_on(label: &str) -> LinkSpec {
    knot_from_omega("unknot", label, "1")
}

/// The link formed by the two cores of a standard torus together with `d`
/// parallel `(p, q)` curves on it.
///
/// Components are `c2, c1, s1, ..., sd` with `lk(c2, si) = p`,
/// `lk(c1, si) = q`, `lk(c2, c1) = 1` and `lk(si, sj) = pq`.
pub fn torus_link(p: i64, q: i64, d: i64) -> Result<LinkSpec, LinkError> {
    if p.gcd(&q) != 1 {
        return Err(LinkError::NonCoprime { p, q });
    }
    if d < 1 {
        return Err(LinkError::InvalidMultiplicity { d });
    }
    let strands: Vec<String> = (1..=d).map(|i| format!("s{i}")).collect();
    let mut components = vec!["c2".to_string(), "c1".to_string()];
    components.extend(strands.iter().cloned());
    let mut lk = vec![("c2".to_string(), "c1".to_string(), 1)];
    for (i, s) in strands.iter().enumerate() {
        lk.push(("c2".into(), s.clone(), p));
        lk.push(("c1".into(), s.clone(), q));
        for s2 in &strands[i + 1..] {
            lk.push((s.clone(), s2.clone(), p * q));
        }
    }
    let mut pairs = vec![(var_name("c2"), p), (var_name("c1"), q)];
    pairs.extend(strands.iter().map(|s| (var_name(s), p * q)));
    let base = sym_rat(&Monomial::from_pairs(pairs));
    let conway = base.pow(d).expect("nonnegative power");
    Ok(LinkSpec::new(
        &format!("torus({p},{q},{d})"),
        &components,
        &lk,
        conway,
    ))
}

/// Parses `torus(p,q,d)`; `None` if `name` has a different shape.
fn parse_torus_name(name: &str) -> Option<(i64, i64, i64)> {
    let inner = name
        .trim()
        .strip_prefix("torus")?
        .trim()
        .strip_prefix('(')?
        .strip_suffix(')')?;
    let parts: Vec<i64> = inner
        .split(',')
        .map(|s| s.trim().parse().ok())
        .collect::<Option<_>>()?;
    match parts[..] {
        [p, q, d] => Some((p, q, d)),
        _ => None,
    }
}

/// The built-in base links.
pub fn builtin_catalog() -> Catalog {
    let mut c = Catalog::default();
    let unknot = unknot_on("u");
    let hopf = LinkSpec::new("hopf", &["a", "b"], &[("a", "b", 1)], RatFn::one());
    // The connected-sum helper: x and y each link c once and are unlinked.
    let tilde = LinkSpec::new(
        "tilde",
        &["x", "y", "c"],
        &[("x", "c", 1), ("y", "c", 1)],
        sym_rat(&Monomial::var("t_c")),
    );
    let unlink2 = LinkSpec::new("unlink2", &["a", "b"], &[], RatFn::zero())
        .with_sublink("a", unknot_on("b"))
        .with_sublink("b", unknot_on("a"));
    let trefoil = knot_from_omega("trefoil", "k", "t^2 - 1 + t^-2");
    let figure8 = knot_from_omega("figure8", "k", "-t^2 + 3 - t^-2");
    for spec in [unknot, hopf, tilde, unlink2, trefoil, figure8] {
        c.insert(spec).expect("builtin entries are valid");
    }
    c
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    /// Looks up a stored entry or a `torus(p,q,d)` name.
    pub fn get(&self, name: &str) -> Option<LinkSpec> {
        if let Some(s) = self.entries.get(name) {
            return Some(s.clone());
        }
        let (p, q, d) = parse_torus_name(name)?;
        torus_link(p, q, d).ok()
    }

    /// Like [`Catalog::get`], but reports why a torus name failed.
    pub fn resolve(&self, name: &str) -> Result<LinkSpec, LinkError> {
        if let Some(s) = self.entries.get(name) {
            return Ok(s.clone());
        }
        match parse_torus_name(name) {
            Some((p, q, d)) => torus_link(p, q, d),
            None => Err(LinkError::UnknownLink {
                name: name.to_string(),
            }),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LinkSpec> {
        self.entries.values()
    }

    pub fn insert(&mut self, spec: LinkSpec) -> Result<(), LinkError> {
        if self.entries.contains_key(&spec.name) || parse_torus_name(&spec.name).is_some() {
            return Err(LinkError::Shadowed {
                name: spec.name.clone(),
            });
        }
        let violations = spec.validate();
        if !violations.is_empty() {
            return Err(LinkError::Invalid {
                name: spec.name.clone(),
                violations: violations.iter().map(|v| v.to_string()).collect(),
            });
        }
        self.entries.insert(spec.name.clone(), spec);
        Ok(())
    }

    /// Parses catalog text and adds its entries. On error nothing from the
    /// failing block onwards is added.
    pub fn load_str(&mut self, text: &str) -> Result<(), LinkError> {
        let mut block: Option<Block> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let (keyword, rest) = match trimmed.find(char::is_whitespace) {
                Some(i) => (&trimmed[..i], trimmed[i..].trim()),
                None => (trimmed, ""),
            };
            let err = |message: String| LinkError::CatalogParse { line, message };
            match (keyword, block.as_mut()) {
                ("link", None) => {
                    let name =
                        single_word(rest).ok_or_else(|| err("expected 'link <name>'".into()))?;
                    block = Some(Block::new(name, line));
                }
                ("link", Some(_)) => return Err(err("'link' inside an open block".into())),
                (_, None) => return Err(err(format!("'{keyword}' outside a link block"))),
                ("components", Some(b)) => {
                    if b.components.is_some() {
                        return Err(err("components given twice".into()));
                    }
                    let comps: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    if comps.is_empty() {
                        return Err(err("expected at least one component".into()));
                    }
                    for (i, c) in comps.iter().enumerate() {
                        if comps[..i].contains(c) {
                            return Err(err(format!("duplicate component {c}")));
                        }
                    }
                    b.components = Some(comps);
                }
                ("lk", Some(b)) => {
                    let words: Vec<&str> = rest.split_whitespace().collect();
                    let [a, c, v] = words[..] else {
                        return Err(err("expected 'lk <ci> <cj> <int>'".into()));
                    };
                    let value: i64 = v.parse().map_err(|_| err(format!("bad integer {v:?}")))?;
                    b.set_lk(a, c, value).map_err(err)?;
                }
                ("conway", Some(b)) => {
                    if b.conway.is_some() {
                        return Err(err("conway given twice".into()));
                    }
                    let col = raw.find(rest).unwrap_or(0);
                    let f = parse_ratfn(rest).map_err(|e| LinkError::Expression {
                        line,
                        column: col + sym_offset(&e),
                        source: e,
                    })?;
                    b.conway = Some(f);
                }
                ("sublink", Some(b)) => {
                    let words: Vec<&str> = rest.split_whitespace().collect();
                    let [comp, name] = words[..] else {
                        return Err(err("expected 'sublink <ci> <name>'".into()));
                    };
                    let sub = self
                        .resolve(name)
                        .map_err(|_| err(format!("unknown link {name}")))?;
                    if b.sublinks.insert(comp.to_string(), sub).is_some() {
                        return Err(err(format!("sublink for {comp} given twice")));
                    }
                }
                ("end", Some(_)) => {
                    let b = block.take().expect("open block");
                    let spec = b.finish().map_err(err)?;
                    self.insert(spec).map_err(|e| LinkError::AtLine {
                        line,
                        source: Box::new(e),
                    })?;
                }
                (other, Some(_)) => return Err(err(format!("unknown keyword '{other}'"))),
            }
        }
        if let Some(b) = block {
            return Err(LinkError::CatalogParse {
                line: b.line,
                message: format!("link {} is missing 'end'", b.name),
            });
        }
        Ok(())
    }
}

fn sym_offset(e: &SymError) -> usize {
    match e {
        SymError::Syntax { offset, .. } | SymError::ZeroDenominator { offset } => *offset,
        _ => 0,
    }
}

fn single_word(s: &str) -> Option<&str> {
    let mut it = s.split_whitespace();
    let w = it.next()?;
    it.next().is_none().then_some(w)
}

struct Block {
    name: String,
    line: usize,
    components: Option<Vec<String>>,
    lk: BTreeMap<(String, String), i64>,
    conway: Option<RatFn>,
    sublinks: BTreeMap<String, LinkSpec>,
}

impl Block {
    fn new(name: &str, line: usize) -> Self {
        Block {
            name: name.to_string(),
            line,
            components: None,
            lk: BTreeMap::new(),
            conway: None,
            sublinks: BTreeMap::new(),
        }
    }

    fn set_lk(&mut self, a: &str, b: &str, v: i64) -> Result<(), String> {
        let comps = self.components.as_ref().ok_or("'lk' before 'components'")?;
        for c in [a, b] {
            if !comps.iter().any(|x| x == c) {
                return Err(format!("unknown component {c}"));
            }
        }
        if a == b {
            return Err(format!("self-linking of {a} is not part of the format"));
        }
        let key = if a < b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        match self.lk.get(&key) {
            Some(old) if *old != v => Err(format!(
                "conflicting linking number for {a} {b}: {old} vs {v}"
            )),
            _ => {
                self.lk.insert(key, v);
                Ok(())
            }
        }
    }

    fn finish(self) -> Result<LinkSpec, String> {
        let components = self.components.ok_or("missing 'components'")?;
        let conway = self.conway.ok_or("missing 'conway'")?;
        let lk: Vec<(String, String, i64)> =
            self.lk.into_iter().map(|((a, b), v)| (a, b, v)).collect();
        let mut spec = LinkSpec::new(&self.name, &components, &lk, conway);
        for (comp, sub) in self.sublinks {
            let (rest, _) = spec.without(&comp);
            // A referenced entry with other labels is renamed in order.
            let sub = if sub.components != rest && sub.n() == rest.len() {
                sub.relabel_positional(&rest).map_err(|e| e.to_string())?
            } else {
                sub
            };
            spec.sublinks.insert(comp, sub);
        }
        Ok(spec)
    }
}

/// Catalog text for `spec`, preceded by blocks for its sublinks, which are
/// named `<name>__minus_<comp>`.
pub fn emit_catalog(spec: &LinkSpec) -> String {
    let mut out = String::new();
    emit_into(spec, &spec.name, &mut out);
    out
}

fn emit_into(spec: &LinkSpec, name: &str, out: &mut String) {
    let mut sub_names = Vec::new();
    for (comp, sub) in &spec.sublinks {
        let sub_name = format!("{name}__minus_{comp}");
        emit_into(sub, &sub_name, out);
        sub_names.push((comp.clone(), sub_name));
    }
    writeln!(out, "link {name}").unwrap();
    writeln!(out, "components {}", spec.components.join(" ")).unwrap();
    for i in 0..spec.n() {
        for j in i + 1..spec.n() {
            let v = spec.lk.get(i, j);
            if v != 0 {
                writeln!(out, "lk {} {} {v}", spec.components[i], spec.components[j]).unwrap();
            }
        }
    }
    writeln!(out, "conway {}", spec.conway).unwrap();
    for (comp, sub_name) in sub_names {
        writeln!(out, "sublink {comp} {sub_name}").unwrap();
    }
    writeln!(out, "end").unwrap();
}

/// Linking matrix rows rendered as a fixed-width table.
pub fn format_linking(components: &[String], lk: &LinkingMatrix) -> String {
    let width = components
        .iter()
        .map(|c| c.len())
        .chain(lk.rows().iter().flatten().map(|v| v.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    write!(out, "{:width$}", "").unwrap();
    for c in components {
        write!(out, " {c:>width$}").unwrap();
    }
    out.push('\n');
    for (c, row) in components.iter().zip(lk.rows()) {
        write!(out, "{c:width$}").unwrap();
        for v in row {
            write!(out, " {v:>width$}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_valid_and_present() {
        let c = builtin_catalog();
        for name in ["unknot", "hopf", "tilde", "unlink2", "trefoil", "figure8"] {
            let s = c.get(name).unwrap();
            assert!(s.validate().is_empty(), "{name}");
        }
        assert_eq!(c.get("hopf").unwrap().conway, RatFn::one());
        assert!(c.get("missing").is_none());
    }

    #[test]
    fn torus_lookup() {
        let c = builtin_catalog();
        let s = c.get("torus(2,1,1)").unwrap();
        let want = parse_ratfn("t_c2^2*t_c1*t_s1^2 - t_c2^-2*t_c1^-1*t_s1^-2").unwrap();
        assert_eq!(s.conway, want);
        assert_eq!(s.components, vec!["c2", "c1", "s1"]);
        assert_eq!(s.linking("c2", "s1"), Some(2));
        assert_eq!(s.linking("c1", "s1"), Some(1));
        assert_eq!(s.linking("c2", "c1"), Some(1));
        assert!(c.get("torus(2,4,1)").is_none());
        assert_eq!(
            c.resolve("torus(2,4,1)").unwrap_err(),
            LinkError::NonCoprime { p: 2, q: 4 }
        );
        assert_eq!(
            c.resolve("torus(2,1,0)").unwrap_err(),
            LinkError::InvalidMultiplicity { d: 0 }
        );
    }

    #[test]
    fn torus_family_is_valid() {
        for p in -7i64..=7 {
            for q in -7i64..=7 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                for d in 1..=3 {
                    let s = torus_link(p, q, d).unwrap();
                    assert!(s.validate().is_empty(), "torus({p},{q},{d})");
                }
            }
        }
    }

    #[test]
    fn parse_catalog_text() {
        let mut c = builtin_catalog();
        let text = "\
# a negative Hopf link
link nhopf
components p q
lk p q -1
conway -1
end
link split
components a b
lk a b 0
conway 0
sublink a unknot
sublink b unknot
end
";
        c.load_str(text).unwrap();
        let s = c.get("split").unwrap();
        assert_eq!(s.sublinks["a"].components, vec!["b"]);
        assert_eq!(c.get("nhopf").unwrap().linking("p", "q"), Some(-1));
    }

    #[test]
    fn strict_parsing() {
        let cases = [
            ("link x\ncomponents a a\nend\n", 2),
            ("link x\ncomponents a b\nlk a b 1\nlk b a 2\nend\n", 4),
            ("link x\nfoo\n", 2),
            ("link x\ncomponents a b\nconway t_a +\nend\n", 3),
            ("link x\ncomponents a b\nconway 1\n", 1),
            ("link hopf\ncomponents a b\nlk a b 1\nconway 1\nend\n", 5),
        ];
        for (text, want_line) in cases {
            let err = builtin_catalog().load_str(text).unwrap_err();
            let line = match err {
                LinkError::CatalogParse { line, .. }
                | LinkError::Expression { line, .. }
                | LinkError::AtLine { line, .. } => line,
                other => panic!("unexpected {other:?}"),
            };
            assert_eq!(line, want_line, "{text}");
        }
    }

    #[test]
    fn expression_column() {
        let err = builtin_catalog()
            .load_str("link x\ncomponents a b\nconway t_a +\nend\n")
            .unwrap_err();
        assert!(
            matches!(
                err,
                LinkError::Expression {
                    line: 3,
                    column: 12,
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn emit_round_trip() {
        let c = builtin_catalog();
        let mut torus = torus_link(3, 2, 2).unwrap();
        torus.name = "t322".into();
        for s in [c.get("unlink2").unwrap(), c.get("tilde").unwrap(), torus] {
            let mut fresh = Catalog::new();
            fresh.load_str(&emit_catalog(&s)).unwrap();
            let back = fresh.get(&s.name).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.sublinks.len(), s.sublinks.len());
        }
    }
}
