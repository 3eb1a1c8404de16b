use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splice_conway::link::{builtin_catalog, LinkSpec};
use splice_conway::selftest::random_suite;
use splice_conway::splice::{omega, torres_remove, Engine, SpliceError, SpliceExpr};
use splice_conway::symalg::{parse_ratfn, Monomial, RatFn};
use splice_conway::torsion::random::{random_complex, random_witness, Bounds};
use splice_conway::torsion::{BasedComplex, Field, Matrix, SesWitness};

type Q = BigRational;

const SEED: u64 = 0;
const EXPRESSIONS: usize = 100;
const WITNESSES: usize = 500;
const COMPLEXES: usize = 200;

struct Verdict {
    checked: usize,
    problems: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict {
            checked: 0,
            problems: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.problems.push(what());
        }
    }
}

fn t(label: &str) -> RatFn {
    RatFn::var(&format!("t_{label}"))
}

fn power(base: &RatFn, k: i64) -> RatFn {
    base.pow(k).expect("monomials are invertible")
}

fn product<'a>(factors: impl IntoIterator<Item = (&'a str, i64)>) -> RatFn {
    factors
        .into_iter()
        .fold(RatFn::one(), |acc, (c, k)| &acc * &power(&t(c), k))
}

fn sym(x: &RatFn) -> RatFn {
    x - &x.inverse().expect("monomials are invertible")
}

fn rat(text: &str) -> RatFn {
    parse_ratfn(text).unwrap()
}

/// `spec` with `first` moved to the front, then renamed positionally.
fn renamed_front(spec: &LinkSpec, first: &str, labels: &[String]) -> LinkSpec {
    let order: Vec<&str> = std::iter::once(first)
        .chain(
            spec.components
                .iter()
                .map(String::as_str)
                .filter(|c| *c != first),
        )
        .collect();
    let rename = |c: &str| labels[order.iter().position(|o| *o == c).unwrap()].clone();
    let mut lk = Vec::new();
    for (i, a) in order.iter().enumerate() {
        for b in &order[i + 1..] {
            lk.push((rename(a), rename(b), spec.linking(a, b).unwrap()));
        }
    }
    let conway = spec
        .conway
        .rename_vars(|v| format!("t_{}", rename(v.strip_prefix("t_").unwrap())));
    LinkSpec::new(&spec.name, labels, &lk, conway)
}

fn hopf_neutrality() -> Verdict {
    let mut v = Verdict::new();
    let catalog = builtin_catalog();
    let hopf = catalog.get("hopf").unwrap();
    let engine = Engine::new();
    for x in catalog.entries() {
        for c in &x.components {
            let what = format!("splice(hopf@a, {}@{c})", x.name);
            match engine.splice(&hopf, "a", x, c) {
                Ok(s) => {
                    let ok = s.n() == x.n()
                        && s.components[0].ends_with('b')
                        && renamed_front(x, c, &s.components) == s;
                    v.check(ok, || {
                        format!("{what}: got {} {:?}", s.conway, s.components)
                    });
                }
                Err(e) => v.check(false, || format!("{what}: {e}")),
            }
        }
    }
    v
}

fn symmetry(items: &[(SpliceExpr, LinkSpec)], errors: &[(SpliceExpr, SpliceError)]) -> Verdict {
    let mut v = Verdict::new();
    v.check(items.len() + errors.len() >= EXPRESSIONS, || {
        "too few expressions".into()
    });
    for (e, s) in items {
        let expected = if s.n() % 2 == 0 {
            s.conway.clone()
        } else {
            -&s.conway
        };
        v.check(e.depth() <= 4 && s.conway.invert_vars() == expected, || {
            format!("{e}: {}", s.conway)
        });
    }
    for (e, err) in errors {
        v.check(false, || format!("{e}: {err}"));
    }
    v
}

/// Removes `c` from the operand it came from before splicing.
fn removed_before_splice(e: &SpliceExpr, c: &str) -> Option<LinkSpec> {
    let SpliceExpr::Splice {
        left,
        left_comp,
        right,
        right_comp,
    } = e
    else {
        return None;
    };
    let engine = Engine::new();
    let (l, r) = (engine.eval(left).ok()?, engine.eval(right).ok()?);
    let lrest: Vec<&String> = l.components.iter().filter(|x| *x != left_comp).collect();
    let rrest: Vec<&String> = r.components.iter().filter(|x| *x != right_comp).collect();
    let pos = engine
        .eval(e)
        .ok()?
        .components
        .iter()
        .position(|x| x == c)?;
    if pos < lrest.len() {
        let reduced = torres_remove(&l, lrest[pos]).ok()?;
        engine.splice(&reduced, left_comp, &r, right_comp).ok()
    } else {
        let reduced = torres_remove(&r, rrest[pos - lrest.len()]).ok()?;
        engine.splice(&l, left_comp, &reduced, right_comp).ok()
    }
}

fn torres(items: &[(SpliceExpr, LinkSpec)]) -> Verdict {
    let mut v = Verdict::new();
    for (e, s) in items {
        for c in &s.components {
            let row = s.linking_row(c).unwrap();
            if row.iter().all(|(_, k)| *k == 0) {
                continue;
            }
            let what = format!("{e} without {c}");
            let sub = match torres_remove(s, c) {
                Ok(sub) => sub,
                Err(err) => {
                    v.check(false, || format!("{what}: {err}"));
                    continue;
                }
            };
            let big_t = product(row.iter().map(|(x, k)| (x.as_str(), *k)));
            let lhs = s.conway.specialize_one(&format!("t_{c}")).unwrap();
            v.check(lhs == &sym(&big_t) * &sub.conway, || {
                format!("{what}: identity fails")
            });
            if let Some(other) = removed_before_splice(e, c) {
                let aligned = other.relabel_positional(&sub.components).unwrap();
                v.check(aligned == sub, || {
                    format!("{what}: removal before splicing gives {}", other.conway)
                });
            }
        }
    }
    v
}

/// First closed form for `d` parallel `(p, q)`-cables of `comp`.
fn cable_oracle(base: &LinkSpec, comp: &str, p: i64, q: i64, d: i64, result: &[String]) -> RatFn {
    let n = base.n();
    let local = renamed_front(base, comp, &rotate(&result[..n]));
    let tn = &result[n - 1];
    let strands = &result[n..];
    let s = product(strands.iter().map(|x| (x.as_str(), 1)));
    let ell = local.linking_row(tn).unwrap();
    let big_t = &product(ell.iter().map(|(x, k)| (x.as_str(), *k))) * &power(&s, q);
    assert_eq!(strands.len() as i64, d);
    let factor = power(&sym(&(&power(&t(tn), q) * &power(&big_t, p))), d);
    let image = Monomial::var(&format!("t_{tn}")).mul(&Monomial::from_pairs(
        strands.iter().map(|x| (format!("t_{x}"), p)),
    ));
    let rest = local
        .conway
        .substitute_monomial(&format!("t_{tn}"), &image)
        .unwrap();
    &factor * &rest
}

/// Second closed form; `result` lists the base components other than `comp`
/// followed by the strands.
fn cable_remove_oracle(
    base: &LinkSpec,
    comp: &str,
    p: i64,
    q: i64,
    d: i64,
    result: &[String],
) -> RatFn {
    let n = base.n();
    let mut labels = vec![comp.to_string()];
    labels.extend(result[..n - 1].iter().cloned());
    let local = renamed_front(base, comp, &labels);
    let strands = &result[n - 1..];
    assert_eq!(strands.len() as i64, d);
    let s = product(strands.iter().map(|x| (x.as_str(), 1)));
    let ell = local.linking_row(comp).unwrap();
    let big_t = &product(ell.iter().map(|(x, k)| (x.as_str(), *k))) * &power(&s, q);
    let factor = &power(&sym(&power(&big_t, p)), d) / &sym(&big_t);
    let image = Monomial::from_pairs(strands.iter().map(|x| (format!("t_{x}"), p)));
    let rest = local
        .conway
        .substitute_monomial(&format!("t_{comp}"), &image)
        .unwrap();
    &factor * &rest
}

fn rotate(labels: &[String]) -> Vec<String> {
    let mut out = vec![labels[labels.len() - 1].clone()];
    out.extend(labels[..labels.len() - 1].iter().cloned());
    out
}

fn cabling() -> Verdict {
    let mut v = Verdict::new();
    let catalog = builtin_catalog();
    let engine = Engine::new();
    for name in ["unknot", "tilde", "hopf"] {
        let base = catalog.get(name).unwrap();
        for (p, q) in [(2, 1), (3, 2), (5, -2)] {
            for d in 1..=3 {
                for comp in &base.components {
                    let what = format!("cable({name}@{comp}, {p}, {q}, {d})");
                    match engine.cable(&base, comp, p, q, d) {
                        Ok(r) => {
                            let want = cable_oracle(&base, comp, p, q, d, &r.components);
                            v.check(r.conway == want, || {
                                format!("{what}: {} vs {want}", r.conway)
                            });
                        }
                        Err(e) => v.check(false, || format!("{what}: {e}")),
                    }
                    match engine.cable_remove(&base, comp, p, q, d) {
                        Ok(r) => {
                            let want = cable_remove_oracle(&base, comp, p, q, d, &r.components);
                            v.check(r.conway == want, || {
                                format!("{what} removed: {} vs {want}", r.conway)
                            });
                        }
                        Err(e) => v.check(false, || format!("{what} removed: {e}")),
                    }
                }
            }
        }
    }
    let doubled = engine
        .cable_remove(&catalog.get("unknot").unwrap(), "u", 2, 1, 1)
        .unwrap();
    v.check(doubled.components == ["s1"], || {
        format!("doubling components {:?}", doubled.components)
    });
    v.check(
        doubled.conway
            == &rat("(t_s1^2 - t_s1^-2)/(t_s1 - t_s1^-1)") * &rat("1/(t_s1^2 - t_s1^-2)"),
        || format!("doubling shape: {}", doubled.conway),
    );
    v.check(doubled.conway == rat("1/(t_s1 - t_s1^-1)"), || {
        "doubling shape reduces".into()
    });
    v
}

fn connected_sums() -> Verdict {
    let mut v = Verdict::new();
    let catalog = builtin_catalog();
    let engine = Engine::new();
    let links: Vec<LinkSpec> = catalog.entries().cloned().collect();
    for l in &links {
        for r in &links {
            for lc in &l.components {
                for rc in &r.components {
                    let what = format!("connsum({}@{lc}, {}@{rc})", l.name, r.name);
                    let s = match engine.connected_sum(l, lc, r, rc) {
                        Ok(s) => s,
                        Err(e) => {
                            v.check(false, || format!("{what}: {e}"));
                            continue;
                        }
                    };
                    let merged = &s.components[0];
                    let mut left_labels = vec![merged.clone()];
                    left_labels.extend(s.components[1..l.n()].iter().cloned());
                    let mut right_labels = vec![merged.clone()];
                    right_labels.extend(s.components[l.n()..].iter().cloned());
                    let fl = renamed_front(l, lc, &left_labels).conway;
                    let fr = renamed_front(r, rc, &right_labels).conway;
                    let want = &(&sym(&t(merged)) * &fl) * &fr;
                    v.check(s.n() == l.n() + r.n() - 1 && s.conway == want, || {
                        format!("{what}: {} vs {want}", s.conway)
                    });
                }
            }
        }
    }
    v
}

fn exceptional_branch() -> Verdict {
    let mut v = Verdict::new();
    let catalog = builtin_catalog();
    let engine = Engine::new();
    let unlink = catalog.get("unlink2").unwrap();
    let mut stripped = unlink.clone();
    stripped.sublinks.clear();
    for knot in ["unknot", "trefoil", "figure8"] {
        let k = catalog.get(knot).unwrap();
        let kc = &k.components[0];
        for (comp, other) in [("a", "b"), ("b", "a")] {
            let want = LinkSpec::new(
                "u",
                &[other],
                &[],
                rat(&format!("1/(t_{other} - t_{other}^-1)")),
            );
            for got in [
                engine.splice(&k, kc, &unlink, comp),
                engine.splice(&unlink, comp, &k, kc),
            ] {
                v.check(got.as_ref() == Ok(&want), || {
                    format!("{knot} along unlink2@{comp}: {got:?}")
                });
            }
            for got in [
                engine.splice(&k, kc, &stripped, comp),
                engine.splice(&stripped, comp, &k, kc),
            ] {
                v.check(
                    matches!(got, Err(SpliceError::MissingSublinkData { .. })),
                    || format!("{knot} along stripped unlink2@{comp}: {got:?}"),
                );
            }
        }
    }
    let mut user = builtin_catalog();
    user.load_str("link pair\ncomponents p q\nlk p q 2\nconway 2\nend\nlink ring\ncomponents a b c\nlk b c 2\nconway 0\nsublink a pair\nend\n")
        .unwrap();
    let ring = user.get("ring").unwrap();
    let got = engine.splice(&ring, "a", &catalog.get("trefoil").unwrap(), "k");
    let want = LinkSpec::new("bc", &["b", "c"], &[("b", "c", 2)], RatFn::constant(2));
    v.check(got.as_ref() == Ok(&want), || {
        format!("user sublink: {got:?}")
    });
    v
}

fn linking_products(items: &[(SpliceExpr, LinkSpec)]) -> Verdict {
    let mut v = Verdict::new();
    let engine = Engine::new();
    for (e, _) in items {
        walk_splices(&engine, e, &mut v);
    }
    v
}

fn walk_splices(engine: &Engine, e: &SpliceExpr, v: &mut Verdict) {
    match e {
        SpliceExpr::Leaf(_) => {}
        SpliceExpr::Cable { base, .. } => walk_splices(engine, base, v),
        SpliceExpr::ConnSum { left, right, .. } => {
            walk_splices(engine, left, v);
            walk_splices(engine, right, v);
        }
        SpliceExpr::Satellite {
            companion, pattern, ..
        } => {
            walk_splices(engine, companion, v);
            walk_splices(engine, pattern, v);
        }
        SpliceExpr::Splice {
            left,
            left_comp,
            right,
            right_comp,
        } => {
            walk_splices(engine, left, v);
            walk_splices(engine, right, v);
            let (Ok(l), Ok(r), Ok(s)) = (engine.eval(left), engine.eval(right), engine.eval(e))
            else {
                return;
            };
            let sides: Vec<(&LinkSpec, &str, &String)> = l
                .components
                .iter()
                .filter(|x| *x != left_comp)
                .map(|x| (&l, left_comp.as_str(), x))
                .chain(
                    r.components
                        .iter()
                        .filter(|x| *x != right_comp)
                        .map(|x| (&r, right_comp.as_str(), x)),
                )
                .collect();
            if s.n() != sides.len() {
                v.check(false, || format!("{e}: {} components", s.n()));
                return;
            }
            for (i, (si, ci, xi)) in sides.iter().enumerate() {
                for (j, (sj, cj, xj)) in sides.iter().enumerate().skip(i + 1) {
                    let want = if std::ptr::eq(*si, *sj) {
                        si.linking(xi, xj).unwrap()
                    } else {
                        si.linking(ci, xi).unwrap() * sj.linking(cj, xj).unwrap()
                    };
                    v.check(s.lk.get(i, j) == want, || {
                        format!("{e}: lk({xi}, {xj}) = {}", s.lk.get(i, j))
                    });
                }
            }
        }
    }
}

fn block_boundary(w: &SesWitness<Q>, i: usize) -> Matrix<Q> {
    let (s, q) = (&w.sub, &w.quotient);
    let top = s.boundary(i).hstack(&w.twist[i]);
    let bottom = Matrix::zeros(q.dim(i - 1), s.dim(i)).hstack(q.boundary(i));
    let mut d = Matrix::zeros(s.dim(i - 1) + q.dim(i - 1), s.dim(i) + q.dim(i));
    d.paste(0, 0, &top);
    d.paste(s.dim(i - 1), 0, &bottom);
    d
}

fn small_integer(x: &Q) -> bool {
    x.is_integer() && x.numer().magnitude() <= &3u32.into()
}

fn small_matrix(m: &Matrix<Q>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| small_integer(m.get(i, j))))
}

fn small_complex(c: &BasedComplex<Q>) -> bool {
    let m = c.length();
    m <= 4
        && (0..=m).all(|i| {
            c.dim(i) <= 5
                && small_matrix(c.boundary(i))
                && c.homology(i).iter().flatten().all(small_integer)
        })
}

fn torsion_identity() -> Verdict {
    let mut v = Verdict::new();
    let bounds = Bounds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut connecting, mut twisted) = (0, 0);
    for k in 0..WITNESSES {
        let w: SesWitness<Q> = random_witness(&mut rng, bounds);
        let m = w.sub.length();
        let small = small_complex(&w.sub)
            && small_complex(&w.quotient)
            && w.twist.iter().chain(&w.base_change).all(small_matrix);
        v.check(small, || {
            format!("witness {k} exceeds the size or entry bounds")
        });
        let (rep, total) = match (w.check(), w.assemble()) {
            (Ok(rep), Ok((total, h))) => {
                connecting += usize::from((1..=m).any(|i| !h.boundary(3 * i).is_zero()));
                twisted += usize::from(w.twist.iter().any(|t| !t.is_zero()));
                (rep, total)
            }
            (a, b) => {
                v.check(false, || {
                    format!("witness {k}: {:?} {:?}", a.err(), b.err())
                });
                continue;
            }
        };
        let assembled = (1..=m).all(|i| {
            let b = w.base_change[i - 1].inverse().unwrap();
            *total.boundary(i) == b.mul(&block_boundary(&w, i)).mul(&w.base_change[i])
        });
        let (ct, cs, cq) = (total.counts(), w.sub.counts(), w.quotient.counts());
        let before = |x: &[usize], i: usize| if i == 0 { 0 } else { x[i - 1] };
        let mut exponent = 0;
        for i in 0..=m {
            exponent += cq.gamma[i] * before(&cs.gamma, i);
            exponent +=
                (ct.beta[i] + 1) * (cs.beta[i] + cq.beta[i]) + before(&cs.beta, i) * cq.beta[i];
        }
        let mut rhs = rep.tau_sub.mul(&rep.tau_quotient).mul(&rep.tau_homology);
        for (i, b) in w.base_change.iter().enumerate() {
            let bracket = b.det().inv();
            rhs = if i % 2 == 1 {
                rhs.mul(&bracket)
            } else {
                rhs.div(&bracket)
            };
        }
        if exponent % 2 == 1 {
            rhs = rhs.neg();
        }
        let tau = total.torsion().unwrap();
        v.check(
            assembled && rep.holds && tau == rhs && rep.mu + rep.nu == exponent,
            || format!("witness {k}: tau = {tau}, rhs = {rhs}"),
        );
    }
    v.check(connecting > 0 && twisted > connecting, || {
        format!("degenerate sample: {connecting} connecting, {twisted} twisted")
    });
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..COMPLEXES {
        let c: BasedComplex<Q> = random_complex(&mut rng, bounds);
        v.check(small_complex(&c), || {
            format!("complex {k} exceeds the size or entry bounds")
        });
        let base = c.torsion();
        let same = base.is_ok() && (0..3).all(|_| c.torsion_with_choices(&mut rng) == base);
        v.check(same, || format!("complex {k}: {base:?}"));
    }
    v
}

fn omega_values() -> Verdict {
    let mut v = Verdict::new();
    let catalog = builtin_catalog();
    for (name, want) in [
        ("unknot", "1"),
        ("hopf", "t - t^-1"),
        ("tilde", "t^2 - 2 + t^-2"),
    ] {
        let got = omega(&catalog.get(name).unwrap()).map(RatFn::from);
        v.check(got == Ok(rat(want)), || format!("omega({name}) = {got:?}"));
    }
    v
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suite = random_suite(SEED, EXPRESSIONS);
    let generation = start.elapsed();
    let mut all_ok = true;
    let mut report = |n: usize,
                      title: &str,
                      limit: Option<Duration>,
                      setup: Duration,
                      run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed() + setup;
        let in_time = limit.is_none_or(|l| elapsed < l);
        let ok = v.problems.is_empty() && in_time && v.checked > 0;
        all_ok &= ok;
        let limit = limit
            .map(|l| format!(" limit={}s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "criterion {n} {}: {title} checks={} failures={} elapsed={:.2}s{limit}",
            if ok { "PASS" } else { "FAIL" },
            v.checked,
            v.problems.len(),
            elapsed.as_secs_f64()
        );
        for p in v.problems.iter().take(5) {
            println!("    {p}");
        }
    };
    let secs = |s| Some(Duration::from_secs(s));

    report(
        1,
        "hopf neutrality",
        secs(1),
        Duration::ZERO,
        &mut hopf_neutrality,
    );
    report(2, "symmetry", secs(10), generation, &mut || {
        symmetry(&suite.items, &suite.errors)
    });
    report(3, "torres", secs(10), generation, &mut || {
        torres(&suite.items)
    });
    report(
        4,
        "cabling closed forms",
        secs(30),
        Duration::ZERO,
        &mut cabling,
    );
    report(
        5,
        "connected sum product",
        secs(10),
        Duration::ZERO,
        &mut connected_sums,
    );
    report(
        6,
        "exceptional branch",
        None,
        Duration::ZERO,
        &mut exceptional_branch,
    );
    report(7, "linking products", None, Duration::ZERO, &mut || {
        linking_products(&suite.items)
    });
    report(
        8,
        "torsion multiplicativity",
        secs(60),
        Duration::ZERO,
        &mut torsion_identity,
    );
    report(
        9,
        "omega values",
        secs(1),
        Duration::ZERO,
        &mut omega_values,
    );

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
