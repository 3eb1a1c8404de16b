//! Property suites over the splice engine and the torsion code, shared by the
//! command line `selftest` and the test targets.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::link::{builtin_catalog, var_name, LinkSpec};
use crate::splice::random::ExprGenerator;
use crate::splice::{
    omega, splice_linking, torres_remove, verify_symmetry, Engine, SpliceError, SpliceExpr,
};
use crate::symalg::{parse_ratfn, Monomial, RatFn};
use crate::torsion::random::{random_complex, random_witness, Bounds};
use crate::torsion::{BasedComplex, SesWitness};

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// The first few failures, one line each.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

const MAX_REPORTED: usize = 5;

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} passed={} failed={}",
            self.name, self.passed, self.failed
        )
    }
}

fn timed(name: &'static str, body: impl FnOnce(&mut SuiteReport)) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new(name);
    body(&mut r);
    r.elapsed = start.elapsed();
    r
}

/// Links used by the exhaustive suites: the builtin entries and a few torus
/// links.
pub fn sample_links() -> Vec<LinkSpec> {
    let catalog = builtin_catalog();
    let mut out: Vec<LinkSpec> = catalog.entries().cloned().collect();
    for name in ["torus(2,1,1)", "torus(3,2,2)"] {
        out.push(catalog.get(name).expect("torus entry"));
    }
    out
}

/// Random expressions evaluated with closed-form verification enabled.
pub struct ExpressionSuite {
    pub items: Vec<(SpliceExpr, LinkSpec)>,
    pub errors: Vec<(SpliceExpr, SpliceError)>,
}

pub fn random_suite(seed: u64, count: usize) -> ExpressionSuite {
    let mut g = ExprGenerator::new(seed);
    let engine = Engine::verifying();
    let mut items = Vec::new();
    let mut errors = Vec::new();
    while items.len() + errors.len() < count {
        match g.next_evaluated(&engine) {
            Ok(pair) => items.push(pair),
            Err(pair) => errors.push(pair),
        }
    }
    ExpressionSuite { items, errors }
}

/// Splicing a Hopf link component into any link reproduces that link.
pub fn hopf_neutrality() -> SuiteReport {
    timed("hopf-neutrality", |r| {
        let hopf = builtin_catalog().get("hopf").unwrap();
        let engine = Engine::new();
        for x in sample_links() {
            for c in &x.components {
                let label = format!("splice(hopf@a, {}@{c})", x.name);
                match engine.splice(&hopf, "a", &x, c) {
                    Ok(s) => {
                        let mut mapping = BTreeMap::from([(c.clone(), s.components[0].clone())]);
                        let others = x.components.iter().filter(|o| *o != c);
                        for (o, new) in others.zip(&s.components[1..]) {
                            mapping.insert(o.clone(), new.clone());
                        }
                        let ok = x
                            .relabel(&mapping)
                            .map(|e| e.equivalent_unordered(&s))
                            .unwrap_or(false);
                        r.record(ok, || format!("{label}: got {}", s.conway));
                    }
                    Err(e) => r.record(false, || format!("{label}: {e}")),
                }
            }
        }
    })
}

pub fn symmetry(suite: &ExpressionSuite) -> SuiteReport {
    timed("symmetry", |r| {
        for (e, s) in &suite.items {
            r.record(verify_symmetry(s), || format!("{e}: {}", s.conway));
        }
        for (e, err) in &suite.errors {
            r.record(false, || format!("{e}: {err}"));
        }
    })
}

/// `T - T^-1` for the linking row of `comp`.
fn torres_factor(s: &LinkSpec, comp: &str) -> RatFn {
    let row = s.linking_row(comp).unwrap_or_default();
    let t = Monomial::from_pairs(row.iter().map(|(c, v)| (var_name(c), *v)));
    &RatFn::monomial(&t) - &RatFn::monomial(&t.inverse())
}

/// The Torres identity for every component with a nonzero linking number,
/// and, for a top-level splice, agreement of the removal with splicing the
/// reduced operand.
pub fn torres(suite: &ExpressionSuite) -> SuiteReport {
    timed("torres", |r| {
        let engine = Engine::new();
        for (e, s) in &suite.items {
            for c in &s.components {
                let nonzero = s
                    .linking_row(c)
                    .unwrap_or_default()
                    .iter()
                    .any(|(_, v)| *v != 0);
                if !nonzero {
                    continue;
                }
                let label = || format!("{e} at {c}");
                let sub = match torres_remove(s, c) {
                    Ok(sub) => sub,
                    Err(err) => {
                        r.record(false, || format!("{}: {err}", label()));
                        continue;
                    }
                };
                let at_one = s.conway.specialize_one(&var_name(c));
                let ok = at_one
                    .map(|v| v == &torres_factor(s, c) * &sub.conway)
                    .unwrap_or(false);
                r.record(ok, || format!("{}: identity fails", label()));
                if let Some(ok) = reduced_operand_route(&engine, e, c, &sub) {
                    r.record(ok, || {
                        format!("{}: removal before splicing disagrees", label())
                    });
                }
            }
        }
    })
}

/// For `e = splice(A@a, B@b)` and `c` coming from a side, removes `c` from
/// that side first and splices. `None` when that route does not apply.
fn reduced_operand_route(engine: &Engine, e: &SpliceExpr, c: &str, sub: &LinkSpec) -> Option<bool> {
    let SpliceExpr::Splice {
        left,
        left_comp,
        right,
        right_comp,
    } = e
    else {
        return None;
    };
    let (l, rt) = (engine.eval(left).ok()?, engine.eval(right).ok()?);
    let left_rest: Vec<&String> = l.components.iter().filter(|x| *x != left_comp).collect();
    let pos = e.labels().iter().position(|x| x == c)?;
    let result = if pos < left_rest.len() {
        let reduced = torres_remove(&l, left_rest[pos]).ok()?;
        engine.splice(&reduced, left_comp, &rt, right_comp)
    } else {
        let right_rest: Vec<&String> = rt.components.iter().filter(|x| *x != right_comp).collect();
        let reduced = torres_remove(&rt, right_rest[pos - left_rest.len()]).ok()?;
        engine.splice(&l, left_comp, &reduced, right_comp)
    };
    let result = result.ok()?;
    let aligned = result.relabel_positional(&sub.components).ok()?;
    Some(aligned == *sub)
}

/// Cross-pair linking numbers of every splice node factor as products and
/// same-side numbers are unchanged.
pub fn linking_products(suite: &ExpressionSuite) -> SuiteReport {
    timed("linking-products", |r| {
        let engine = Engine::new();
        for (e, _) in &suite.items {
            check_linking_tree(&engine, e, r);
        }
    })
}

fn check_linking_tree(engine: &Engine, e: &SpliceExpr, r: &mut SuiteReport) {
    match e {
        SpliceExpr::Leaf(_) => {}
        SpliceExpr::Cable { base, .. } => check_linking_tree(engine, base, r),
        SpliceExpr::ConnSum { left, right, .. } => {
            check_linking_tree(engine, left, r);
            check_linking_tree(engine, right, r);
        }
        SpliceExpr::Satellite {
            companion, pattern, ..
        } => {
            check_linking_tree(engine, companion, r);
            check_linking_tree(engine, pattern, r);
        }
        SpliceExpr::Splice {
            left,
            left_comp,
            right,
            right_comp,
        } => {
            check_linking_tree(engine, left, r);
            check_linking_tree(engine, right, r);
            let (Ok(l), Ok(rt), Ok(s)) = (engine.eval(left), engine.eval(right), engine.eval(e))
            else {
                return;
            };
            let lrest: Vec<&String> = l.components.iter().filter(|x| *x != left_comp).collect();
            let rrest: Vec<&String> = rt.components.iter().filter(|x| *x != right_comp).collect();
            let origin: Vec<(bool, &String)> = lrest
                .iter()
                .map(|x| (true, *x))
                .chain(rrest.iter().map(|x| (false, *x)))
                .collect();
            let mut ok = s.n() == origin.len();
            for i in 0..s.n().min(origin.len()) {
                for j in i + 1..s.n().min(origin.len()) {
                    let (si, oi) = origin[i];
                    let (sj, oj) = origin[j];
                    let expected = match (si, sj) {
                        (true, true) => l.linking(oi, oj),
                        (false, false) => rt.linking(oi, oj),
                        (true, false) => Some(
                            l.linking(left_comp, oi).unwrap() * rt.linking(right_comp, oj).unwrap(),
                        ),
                        (false, true) => Some(
                            rt.linking(right_comp, oi).unwrap() * l.linking(left_comp, oj).unwrap(),
                        ),
                    };
                    ok &= expected == Some(s.lk.get(i, j));
                }
            }
            let direct = splice_linking(&l, left_comp, &rt, right_comp)
                .map(|(_, lk)| lk == s.lk)
                .unwrap_or(false);
            r.record(ok && direct, || {
                format!("{e}: linking matrix does not factor")
            });
        }
    }
}

/// Both cabling closed forms on the fixed parameter grid.
pub fn cabling() -> SuiteReport {
    timed("cabling", |r| {
        let catalog = builtin_catalog();
        let engine = Engine::verifying();
        for base in ["unknot", "tilde", "hopf"] {
            let spec = catalog.get(base).unwrap();
            for (p, q) in [(2, 1), (3, 2), (5, -2)] {
                for d in 1..=3 {
                    for comp in &spec.components {
                        let label = format!("cable({base}@{comp}, {p}, {q}, {d})");
                        let res = engine.cable(&spec, comp, p, q, d);
                        r.record(res.is_ok(), || format!("{label}: {}", res.unwrap_err()));
                        let res = engine.cable_remove(&spec, comp, p, q, d);
                        r.record(res.is_ok(), || {
                            format!("cable_remove {label}: {}", res.unwrap_err())
                        });
                    }
                }
            }
        }
        let doubled = engine.cable_remove(&catalog.get("unknot").unwrap(), "u", 2, 1, 1);
        let expected = parse_ratfn("1/(t_s1 - t_s1^-1)").unwrap();
        r.record(
            doubled
                .as_ref()
                .map(|s| s.conway == expected)
                .unwrap_or(false),
            || "doubling shape of the (2,1) cable of the unknot".to_string(),
        );
    })
}

/// Connected sums of all ordered pairs of sample links along all
/// components, checked against the product formula.
pub fn connected_sums() -> SuiteReport {
    timed("connected-sum", |r| {
        let engine = Engine::verifying();
        let links = sample_links();
        for a in &links {
            for b in &links {
                for ac in &a.components {
                    for bc in &b.components {
                        let res = engine.connected_sum(a, ac, b, bc);
                        r.record(res.is_ok(), || {
                            format!(
                                "connsum({}@{ac}, {}@{bc}): {}",
                                a.name,
                                b.name,
                                res.unwrap_err()
                            )
                        });
                    }
                }
            }
        }
    })
}

/// The bare-knot exception with and without registered sublink data.
pub fn exceptional_branch() -> SuiteReport {
    timed("exceptional-branch", |r| {
        let catalog = builtin_catalog();
        let engine = Engine::new();
        let unlink = catalog.get("unlink2").unwrap();
        for knot in ["unknot", "trefoil", "figure8"] {
            let k = catalog.get(knot).unwrap();
            let kc = &k.components[0];
            for (comp, other) in [("a", "b"), ("b", "a")] {
                let want = unlink.sublinks[comp].clone();
                let got = engine.splice(&k, kc, &unlink, comp);
                r.record(got.as_ref().map(|s| *s == want).unwrap_or(false), || {
                    format!("splice({knot}@{kc}, unlink2@{comp}) should be the unknot {other}")
                });
                let got = engine.splice(&unlink, comp, &k, kc);
                r.record(got.as_ref().map(|s| *s == want).unwrap_or(false), || {
                    format!("splice(unlink2@{comp}, {knot}@{kc}) should be the unknot {other}")
                });
                let mut stripped = unlink.clone();
                stripped.sublinks.clear();
                let got = engine.splice(&k, kc, &stripped, comp);
                r.record(
                    matches!(got, Err(SpliceError::MissingSublinkData { .. })),
                    || {
                        format!(
                            "stripped splice({knot}@{kc}, unlink2@{comp}) should lack sublink data"
                        )
                    },
                );
            }
        }
    })
}

/// Reduced Conway functions of the three basic links.
pub fn omega_values() -> SuiteReport {
    timed("omega", |r| {
        let catalog = builtin_catalog();
        for (name, want) in [
            ("unknot", "1"),
            ("hopf", "t - t^-1"),
            ("tilde", "(t - t^-1)^2"),
        ] {
            let got = omega(&catalog.get(name).unwrap()).map(RatFn::from);
            let want = parse_ratfn(want).unwrap();
            r.record(got.as_ref() == Ok(&want), || {
                format!("omega({name}) = {got:?}")
            });
        }
    })
}

/// Multiplicativity on random exact sequences.
pub fn torsion_multiplicativity(seed: u64, witnesses: usize) -> SuiteReport {
    timed("torsion-multiplicativity", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..witnesses {
            let w: SesWitness<BigRational> = random_witness(&mut rng, Bounds::default());
            match w.check() {
                Ok(rep) => r.record(rep.holds, || {
                    format!("witness {k}: {} != {}", rep.lhs, rep.rhs)
                }),
                Err(e) => r.record(false, || format!("witness {k}: {e}")),
            }
        }
    })
}

/// Torsion is unchanged by randomized choices of lifts and representatives.
pub fn torsion_choices(seed: u64, complexes: usize) -> SuiteReport {
    timed("torsion-choice-independence", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        for k in 0..complexes {
            let c: BasedComplex<BigRational> = random_complex(&mut rng, Bounds::default());
            let base = c.torsion();
            let ok = (0..3).all(|_| c.torsion_with_choices(&mut rng) == base) && base.is_ok();
            r.record(ok, || format!("complex {k}: {base:?}"));
        }
    })
}

/// All suites, with `trials` random expressions, `5 * trials` witnesses and
/// `2 * trials` complexes.
pub fn run_all(seed: u64, trials: usize) -> Vec<SuiteReport> {
    let suite = random_suite(seed, trials);
    vec![
        hopf_neutrality(),
        symmetry(&suite),
        torres(&suite),
        cabling(),
        connected_sums(),
        exceptional_branch(),
        linking_products(&suite),
        torsion_multiplicativity(seed, 5 * trials),
        torsion_choices(seed, 2 * trials),
        omega_values(),
    ]
}
