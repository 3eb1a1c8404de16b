//! Seeded random splice expressions over the builtin catalog.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::link::{builtin_catalog, LinkSpec};

use super::engine::Engine;
use super::expr::SpliceExpr;
use super::SpliceError;

const POOL: &[&str] = &[
    "unknot",
    "hopf",
    "tilde",
    "unlink2",
    "trefoil",
    "figure8",
    "torus(2,1,1)",
    "torus(3,2,1)",
    "torus(2,-1,1)",
    "torus(1,2,2)",
];

const CABLES: &[(i64, i64)] = &[(2, 1), (3, 2), (2, -1), (1, 2), (5, -2)];

/// Generates random expressions of bounded depth and result size.
pub struct ExprGenerator {
    rng: ChaCha8Rng,
    pool: Vec<LinkSpec>,
    knots: Vec<LinkSpec>,
    pub max_depth: usize,
    pub max_components: usize,
}

impl ExprGenerator {
    pub fn new(seed: u64) -> Self {
        let catalog = builtin_catalog();
        let pool: Vec<LinkSpec> = POOL
            .iter()
            .map(|n| catalog.get(n).expect("pool entry"))
            .collect();
        let knots = pool.iter().filter(|s| s.n() == 1).cloned().collect();
        ExprGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool,
            knots,
            max_depth: 4,
            max_components: 6,
        }
    }

    fn pick_comp(&mut self, e: &SpliceExpr) -> String {
        e.labels()
            .choose(&mut self.rng)
            .cloned()
            .expect("nonempty link")
    }

    fn leaf(&mut self) -> SpliceExpr {
        SpliceExpr::Leaf(self.pool.choose(&mut self.rng).cloned().unwrap())
    }

    fn knot(&mut self, depth: usize) -> SpliceExpr {
        for _ in 0..4 {
            let e = self.sized(depth);
            if e.labels().len() == 1 {
                return e;
            }
        }
        SpliceExpr::Leaf(self.knots.choose(&mut self.rng).cloned().unwrap())
    }

    /// A partner for `other` such that the two are not both knots.
    fn link_unless_knot(&mut self, other: &SpliceExpr, depth: usize) -> SpliceExpr {
        loop {
            let e = self.gen(depth);
            if other.labels().len() > 1 || e.labels().len() > 1 {
                return e;
            }
        }
    }

    /// An expression of depth at most `depth`.
    pub fn gen(&mut self, depth: usize) -> SpliceExpr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.leaf();
        }
        match self.rng.gen_range(0..10) {
            0..=4 => {
                let left = self.gen(depth - 1);
                let right = self.link_unless_knot(&left, depth - 1);
                let (lc, rc) = (self.pick_comp(&left), self.pick_comp(&right));
                SpliceExpr::splice(left, &lc, right, &rc)
            }
            5 | 6 => {
                let base = self.gen(depth - 1);
                let comp = self.pick_comp(&base);
                let (p, q) = *CABLES.choose(&mut self.rng).unwrap();
                let d = self.rng.gen_range(1..=2);
                SpliceExpr::cable(base, &comp, p, q, d)
            }
            7 | 8 => {
                let left = self.gen(depth - 1);
                let right = self.gen(depth - 1);
                let (lc, rc) = (self.pick_comp(&left), self.pick_comp(&right));
                SpliceExpr::conn_sum(left, &lc, right, &rc)
            }
            _ => {
                let companion = self.knot(depth - 1);
                let pattern = self.link_unless_knot(&companion, depth - 1);
                let m = self.pick_comp(&pattern);
                SpliceExpr::satellite(companion, pattern, &m)
            }
        }
    }

    fn sized(&mut self, depth: usize) -> SpliceExpr {
        loop {
            let e = self.gen(depth);
            if e.labels().len() <= self.max_components {
                return e;
            }
        }
    }

    /// The next expression with at least one operation that evaluates
    /// successfully, together with its value. Expressions hitting the two
    /// structural dead ends (two bare knots, missing sublink data) are
    /// skipped; any other error is returned.
    #[allow(clippy::result_large_err)]
    pub fn next_evaluated(
        &mut self,
        engine: &Engine,
    ) -> Result<(SpliceExpr, LinkSpec), (SpliceExpr, SpliceError)> {
        loop {
            let depth = self.max_depth;
            let e = self.sized(depth);
            if e.depth() == 0 {
                continue;
            }
            match engine.eval(&e) {
                Ok(spec) => return Ok((e, spec)),
                Err(SpliceError::DegenerateSplice { .. })
                | Err(SpliceError::MissingSublinkData { .. }) => continue,
                Err(err) => return Err((e, err)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let a: Vec<String> = {
            let mut g = ExprGenerator::new(7);
            (0..20).map(|_| g.gen(4).to_string()).collect()
        };
        let mut g = ExprGenerator::new(7);
        let b: Vec<String> = (0..20).map(|_| g.gen(4).to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn respects_bounds() {
        let mut g = ExprGenerator::new(1);
        let engine = Engine::new();
        for _ in 0..20 {
            let (e, spec) = g.next_evaluated(&engine).unwrap();
            assert!(e.depth() >= 1 && e.depth() <= 4);
            assert!(spec.n() <= 6);
            assert_eq!(spec.components, e.labels());
        }
    }
}
