use super::complex::{express_class, BasedComplex};
use super::field::Field;
use super::matrix::Matrix;
use super::TorsionError;

/// A short exact sequence `0 -> C' -> C -> C'' -> 0` given by generators:
/// the total complex has chains `C'_i + C''_i` and boundary
/// `[[d', f], [0, d'']]`, and its distinguished basis in degree `i` is given
/// by the columns of `base_change[i]` in the concatenated basis `c' c''`.
#[derive(Clone, Debug, PartialEq)]
pub struct SesWitness<F> {
    pub sub: BasedComplex<F>,
    pub quotient: BasedComplex<F>,
    /// `twist[i]` maps `C''_i` to `C'_{i-1}`.
    pub twist: Vec<Matrix<F>>,
    pub base_change: Vec<Matrix<F>>,
}

/// Both sides of the multiplicativity identity, factor by factor.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativityReport<F> {
    pub tau_total: F,
    pub tau_sub: F,
    pub tau_quotient: F,
    pub tau_homology: F,
    /// `[c'_i c''_i / c_i]` for each degree.
    pub basis_dets: Vec<F>,
    pub mu: usize,
    pub nu: usize,
    pub lhs: F,
    pub rhs: F,
    pub holds: bool,
}

fn witness_error(reason: impl Into<String>) -> TorsionError {
    TorsionError::InvalidWitness {
        reason: reason.into(),
    }
}

impl<F: Field> SesWitness<F> {
    /// Witness whose twist is `d' g - g d''` for a degree-preserving glue
    /// map `g[i]: C''_i -> C'_i`.
    pub fn from_glue(
        sub: BasedComplex<F>,
        quotient: BasedComplex<F>,
        glue: &[Matrix<F>],
        base_change: Vec<Matrix<F>>,
    ) -> Result<Self, TorsionError> {
        let m = sub.length();
        if quotient.length() != m || glue.len() != m + 1 {
            return Err(witness_error("lengths of the pieces differ"));
        }
        for (i, g) in glue.iter().enumerate() {
            if g.rows() != sub.dim(i) || g.cols() != quotient.dim(i) {
                return Err(witness_error(format!(
                    "glue map in degree {i} has the wrong shape"
                )));
            }
        }
        let twist = (0..=m)
            .map(|i| {
                if i == 0 {
                    Matrix::zeros(0, quotient.dim(0))
                } else {
                    sub.boundary(i)
                        .mul(&glue[i])
                        .sub(&glue[i - 1].mul(quotient.boundary(i)))
                }
            })
            .collect();
        Self::from_twist(sub, quotient, twist, base_change)
    }

    /// Witness with an explicit twist, which must satisfy
    /// `d' f + f d'' = 0`.
    pub fn from_twist(
        sub: BasedComplex<F>,
        quotient: BasedComplex<F>,
        twist: Vec<Matrix<F>>,
        base_change: Vec<Matrix<F>>,
    ) -> Result<Self, TorsionError> {
        let m = sub.length();
        if quotient.length() != m || twist.len() != m + 1 || base_change.len() != m + 1 {
            return Err(witness_error("lengths of the pieces differ"));
        }
        for i in 0..=m {
            let rows = if i == 0 { 0 } else { sub.dim(i - 1) };
            if twist[i].rows() != rows || twist[i].cols() != quotient.dim(i) {
                return Err(witness_error(format!(
                    "twist in degree {i} has the wrong shape"
                )));
            }
            if i >= 2 {
                let lhs = sub
                    .boundary(i - 1)
                    .mul(&twist[i])
                    .add(&twist[i - 1].mul(quotient.boundary(i)));
                if !lhs.is_zero() {
                    return Err(witness_error(format!(
                        "twist does not anticommute in degree {i}"
                    )));
                }
            }
            let n = sub.dim(i) + quotient.dim(i);
            let b = &base_change[i];
            if b.rows() != n || b.cols() != n || b.det().is_zero() {
                return Err(TorsionError::DegenerateBasis { degree: i });
            }
        }
        Ok(SesWitness {
            sub,
            quotient,
            twist,
            base_change,
        })
    }

    fn length(&self) -> usize {
        self.sub.length()
    }

    /// Boundary `C_i -> C_{i-1}` of the total complex in the concatenated
    /// bases.
    fn block_boundary(&self, i: usize) -> Matrix<F> {
        let (s, q) = (&self.sub, &self.quotient);
        let mut d = Matrix::zeros(s.dim(i - 1) + q.dim(i - 1), s.dim(i) + q.dim(i));
        d.paste(0, 0, s.boundary(i));
        d.paste(0, s.dim(i), &self.twist[i]);
        d.paste(s.dim(i - 1), s.dim(i), q.boundary(i));
        d
    }

    /// The total complex and the acyclic long-exact-sequence complex, whose
    /// degree `3i` holds `H_i(C'')`, `3i + 1` holds `H_i(C)` and `3i + 2`
    /// holds `H_i(C')`, each based by the distinguished homology bases.
    pub fn assemble(&self) -> Result<(BasedComplex<F>, BasedComplex<F>), TorsionError> {
        let m = self.length();
        let inverses: Vec<Matrix<F>> = self
            .base_change
            .iter()
            .enumerate()
            .map(|(i, b)| {
                b.inverse()
                    .ok_or(TorsionError::DegenerateBasis { degree: i })
            })
            .collect::<Result<_, _>>()?;
        let dims: Vec<usize> = (0..=m)
            .map(|i| self.sub.dim(i) + self.quotient.dim(i))
            .collect();
        let boundaries: Vec<Matrix<F>> = (1..=m)
            .map(|i| {
                inverses[i - 1]
                    .mul(&self.block_boundary(i))
                    .mul(&self.base_change[i])
            })
            .collect();
        let total = BasedComplex::with_computed_homology(dims, boundaries)
            .map_err(|e| witness_error(format!("total complex: {e}")))?;

        let (s, q) = (&self.sub, &self.quotient);
        let class_error = |what: &str, i: usize| {
            witness_error(format!("{what} in degree {i} is not a cycle class"))
        };
        let mut h_dims = Vec::new();
        let mut h_maps: Vec<Matrix<F>> = Vec::new();
        for i in 0..=m {
            let (hq, ht, hs) = (q.homology(i), total.homology(i), s.homology(i));
            h_dims.extend([hq.len(), ht.len(), hs.len()]);
            if i > 0 {
                // connecting map H_i(C'') -> H_{i-1}(C')
                let image = s.image_matrix(i - 1);
                let cols = hq
                    .iter()
                    .map(|z| {
                        let v = self.twist[i].apply(z);
                        express_class(s.homology(i - 1), &image, &v)
                            .ok_or_else(|| class_error("connecting image", i))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                h_maps.push(Matrix::from_columns(&cols, s.homology(i - 1).len()));
            }
            // projection H_i(C) -> H_i(C'')
            let cols = ht
                .iter()
                .map(|h| {
                    let x = self.base_change[i].apply(h);
                    let lower = &x[s.dim(i)..];
                    express_class(hq, &q.image_matrix(i), lower)
                        .ok_or_else(|| class_error("projection", i))
                })
                .collect::<Result<Vec<_>, _>>()?;
            h_maps.push(Matrix::from_columns(&cols, hq.len()));
            // inclusion H_i(C') -> H_i(C)
            let cols = hs
                .iter()
                .map(|z| {
                    let mut x = z.clone();
                    x.extend(std::iter::repeat_n(F::zero(), q.dim(i)));
                    let y = inverses[i].apply(&x);
                    express_class(ht, &total.image_matrix(i), &y)
                        .ok_or_else(|| class_error("inclusion", i))
                })
                .collect::<Result<Vec<_>, _>>()?;
            h_maps.push(Matrix::from_columns(&cols, ht.len()));
        }
        let empty = vec![Vec::new(); h_dims.len()];
        let homology_complex = BasedComplex::new(h_dims, h_maps, empty)
            .map_err(|e| witness_error(format!("homology sequence: {e}")))?;
        Ok((total, homology_complex))
    }

    /// Evaluates both sides of
    /// `tau(C) = (-1)^(mu + nu) tau(C') tau(C'') tau(H) prod [c'c''/c]^((-1)^(i+1))`.
    pub fn check(&self) -> Result<MultiplicativityReport<F>, TorsionError> {
        let m = self.length();
        let (total, hcx) = self.assemble()?;
        let tau_total = total.torsion()?;
        let tau_sub = self.sub.torsion()?;
        let tau_quotient = self.quotient.torsion()?;
        let tau_homology = hcx.torsion()?;
        let basis_dets: Vec<F> = self.base_change.iter().map(|b| b.det().inv()).collect();

        let (ct, cs, cq) = (total.counts(), self.sub.counts(), self.quotient.counts());
        let prev = |v: &[usize], i: usize| if i == 0 { 0 } else { v[i - 1] };
        let nu = (0..=m).map(|i| cq.gamma[i] * prev(&cs.gamma, i)).sum();
        let mu = (0..=m)
            .map(|i| (ct.beta[i] + 1) * (cs.beta[i] + cq.beta[i]) + prev(&cs.beta, i) * cq.beta[i])
            .sum();

        let mut rhs = tau_sub.mul(&tau_quotient).mul(&tau_homology);
        for (i, d) in basis_dets.iter().enumerate() {
            rhs = if i % 2 == 0 { rhs.div(d) } else { rhs.mul(d) };
        }
        if (mu + nu) % 2 == 1 {
            rhs = rhs.neg();
        }
        let holds = rhs == tau_total;
        Ok(MultiplicativityReport {
            lhs: tau_total.clone(),
            tau_total,
            tau_sub,
            tau_quotient,
            tau_homology,
            basis_dets,
            mu,
            nu,
            rhs,
            holds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn two_term(a: i64) -> BasedComplex<Q> {
        BasedComplex::new(
            vec![1, 1],
            vec![Matrix::from_ints(1, 1, &[a])],
            vec![vec![], vec![]],
        )
        .unwrap()
    }

    fn direct_sum(sub: BasedComplex<Q>, quotient: BasedComplex<Q>) -> SesWitness<Q> {
        let m = sub.length();
        let glue = (0..=m)
            .map(|i| Matrix::zeros(sub.dim(i), quotient.dim(i)))
            .collect::<Vec<_>>();
        let bc = (0..=m)
            .map(|i| Matrix::identity(sub.dim(i) + quotient.dim(i)))
            .collect();
        SesWitness::from_glue(sub, quotient, &glue, bc).unwrap()
    }

    #[test]
    fn direct_sum_of_identities() {
        let r = direct_sum(two_term(1), two_term(1)).check().unwrap();
        assert_eq!((r.mu, r.nu), (0, 2));
        assert!(r.tau_total.is_one() && r.tau_homology.is_one());
        assert!(r.holds);
    }

    #[test]
    fn scaled_sub_boundary() {
        let r = direct_sum(two_term(4), two_term(1)).check().unwrap();
        assert_eq!(r.tau_sub, Q::new(1.into(), 4.into()));
        assert_eq!(r.tau_total, r.tau_sub);
        assert!(r.holds);
    }

    #[test]
    fn homology_splits_with_zero_twist() {
        let point =
            BasedComplex::<Q>::new(vec![1], vec![], vec![vec![vec![Q::from_int(1)]]]).unwrap();
        let w = direct_sum(point.clone(), point);
        let (total, h) = w.assemble().unwrap();
        assert_eq!(total.homology(0).len(), 2);
        assert_eq!(h.dims(), &[1, 2, 1]);
        assert!(w.check().unwrap().holds);
    }

    #[test]
    fn cone_of_identity_has_connecting_isomorphism() {
        // C' = point in degree 0, C'' = point in degree 1, twist = 3.
        let sub = BasedComplex::<Q>::new(
            vec![1, 0],
            vec![Matrix::zeros(1, 0)],
            vec![vec![vec![Q::from_int(1)]], vec![]],
        )
        .unwrap();
        let quotient = BasedComplex::<Q>::new(
            vec![0, 1],
            vec![Matrix::zeros(0, 1)],
            vec![vec![], vec![vec![Q::from_int(1)]]],
        )
        .unwrap();
        let twist = vec![Matrix::zeros(0, 0), Matrix::from_ints(1, 1, &[3])];
        let bc = vec![Matrix::identity(1), Matrix::identity(1)];
        let w = SesWitness::from_twist(sub, quotient, twist, bc).unwrap();
        let (total, h) = w.assemble().unwrap();
        assert!(total.is_acyclic());
        assert_eq!(h.boundary(3), &Matrix::from_ints(1, 1, &[3]));
        let r = w.check().unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn rejects_bad_twist() {
        let sub = BasedComplex::<Q>::new(
            vec![1, 1, 1],
            vec![Matrix::from_ints(1, 1, &[1]), Matrix::zeros(1, 1)],
            vec![vec![], vec![], vec![vec![Q::from_int(1)]]],
        )
        .unwrap();
        let quotient = sub.clone();
        let twist = vec![
            Matrix::zeros(0, 1),
            Matrix::zeros(1, 1),
            Matrix::from_ints(1, 1, &[1]),
        ];
        let bc = vec![Matrix::identity(2); 3];
        assert!(matches!(
            SesWitness::from_twist(sub, quotient, twist, bc),
            Err(TorsionError::InvalidWitness { .. })
        ));
    }
}
