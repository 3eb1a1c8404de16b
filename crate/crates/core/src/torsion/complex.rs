use rand::Rng;

use super::field::Field;
use super::matrix::Matrix;
use super::TorsionError;

/// A finite chain complex `C_m -> ... -> C_0` over `F`, written in its
/// distinguished bases, with distinguished cycle representatives of a basis
/// of each homology space.
#[derive(Clone, Debug, PartialEq)]
pub struct BasedComplex<F> {
    dims: Vec<usize>,
    /// `boundaries[i]` maps `C_i` to `C_{i-1}`; `boundaries[0]` has no rows.
    boundaries: Vec<Matrix<F>>,
    homology: Vec<Vec<Vec<F>>>,
}

/// Cumulative homology and chain dimensions and the sign exponent built
/// from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub beta: Vec<usize>,
    pub gamma: Vec<usize>,
    pub sign_exponent: usize,
}

fn invalid(degree: usize, reason: impl Into<String>) -> TorsionError {
    TorsionError::InvalidComplex {
        degree,
        reason: reason.into(),
    }
}

/// Coordinates of the class of `v` in the basis `basis` of a quotient by the
/// column space of `image`, or `None` if `v` is not in the span.
pub(crate) fn express_class<F: Field>(
    basis: &[Vec<F>],
    image: &Matrix<F>,
    v: &[F],
) -> Option<Vec<F>> {
    let n = v.len();
    let mat = Matrix::from_columns(basis, n).hstack(image);
    let x = mat.solve(v)?;
    Some(x[..basis.len()].to_vec())
}

impl<F: Field> BasedComplex<F> {
    /// `boundaries[k]` is the map `C_{k+1} -> C_k`, so there are
    /// `dims.len() - 1` of them. `homology[i]` lists cycles of `C_i`.
    pub fn new(
        dims: Vec<usize>,
        boundaries: Vec<Matrix<F>>,
        homology: Vec<Vec<Vec<F>>>,
    ) -> Result<Self, TorsionError> {
        if dims.is_empty() {
            return Err(invalid(0, "a complex needs at least one degree"));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(invalid(
                0,
                format!(
                    "expected {} boundary maps, got {}",
                    dims.len() - 1,
                    boundaries.len()
                ),
            ));
        }
        if homology.len() != dims.len() {
            return Err(invalid(
                0,
                format!(
                    "expected {} homology lists, got {}",
                    dims.len(),
                    homology.len()
                ),
            ));
        }
        let mut all = vec![Matrix::zeros(0, dims[0])];
        all.extend(boundaries);
        let c = BasedComplex {
            dims,
            boundaries: all,
            homology,
        };
        c.validate()?;
        Ok(c)
    }

    /// Like [`BasedComplex::new`] with homology bases chosen by leftmost
    /// pivots.
    pub fn with_computed_homology(
        dims: Vec<usize>,
        boundaries: Vec<Matrix<F>>,
    ) -> Result<Self, TorsionError> {
        let homology = vec![Vec::new(); dims.len()];
        let mut all = vec![Matrix::zeros(0, dims.first().copied().unwrap_or(0))];
        all.extend(boundaries.iter().cloned());
        let probe = BasedComplex {
            dims: dims.clone(),
            boundaries: all,
            homology,
        };
        let homology = (0..dims.len()).map(|i| probe.homology_basis(i)).collect();
        Self::new(dims, boundaries, homology)
    }

    /// A complex with no chains at all.
    pub fn empty() -> Self {
        BasedComplex {
            dims: vec![0],
            boundaries: vec![Matrix::zeros(0, 0)],
            homology: vec![Vec::new()],
        }
    }

    fn validate(&self) -> Result<(), TorsionError> {
        for i in 0..self.dims.len() {
            let d = &self.boundaries[i];
            let rows = if i == 0 { 0 } else { self.dims[i - 1] };
            if d.rows() != rows || d.cols() != self.dims[i] {
                return Err(invalid(
                    i,
                    format!(
                        "boundary is {}x{}, expected {rows}x{}",
                        d.rows(),
                        d.cols(),
                        self.dims[i]
                    ),
                ));
            }
            if i >= 2 && !self.boundaries[i - 1].mul(d).is_zero() {
                return Err(invalid(i, "boundary of a boundary is not zero"));
            }
        }
        for i in 0..self.dims.len() {
            let h = &self.homology[i];
            if h.iter().any(|v| v.len() != self.dims[i]) {
                return Err(invalid(i, "homology vector has the wrong length"));
            }
            if h.iter()
                .any(|v| self.boundaries[i].apply(v).iter().any(|x| !x.is_zero()))
            {
                return Err(invalid(i, "homology vector is not a cycle"));
            }
            let image = self.image(i);
            let rank_image = image.rank();
            let rank_kernel = self.dims[i] - self.boundaries[i].rank();
            let with_h = image.hstack(&Matrix::from_columns(h, self.dims[i])).rank();
            if with_h != rank_image + h.len() {
                return Err(invalid(i, "homology classes are linearly dependent"));
            }
            if rank_image + h.len() != rank_kernel {
                return Err(invalid(i, "homology classes do not span the homology"));
            }
        }
        Ok(())
    }

    /// Matrix of the boundary into `C_i`; zero columns at the top degree.
    fn image(&self, i: usize) -> Matrix<F> {
        if i + 1 < self.dims.len() {
            self.boundaries[i + 1].clone()
        } else {
            Matrix::zeros(self.dims[i], 0)
        }
    }

    /// Cycles in `C_i` whose classes form a basis of `H_i`, chosen greedily
    /// from a kernel basis.
    fn homology_basis(&self, i: usize) -> Vec<Vec<F>> {
        let image = self.image(i);
        let mut span = image.clone();
        let mut rank = span.rank();
        let mut out = Vec::new();
        for k in self.boundaries[i].kernel() {
            let next = span.hstack(&Matrix::from_columns(
                std::slice::from_ref(&k),
                self.dims[i],
            ));
            let r = next.rank();
            if r > rank {
                rank = r;
                span = next;
                out.push(k);
            }
        }
        out
    }

    /// Top degree `m`.
    pub fn length(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    /// The map `C_i -> C_{i-1}`.
    pub fn boundary(&self, i: usize) -> &Matrix<F> {
        &self.boundaries[i]
    }

    /// Boundary maps `C_{k+1} -> C_k` for `k = 0..m`.
    pub fn boundary_maps(&self) -> Vec<Matrix<F>> {
        self.boundaries[1..].to_vec()
    }

    pub fn homology(&self, i: usize) -> &[Vec<F>] {
        &self.homology[i]
    }

    /// The boundaries into `C_i`, as columns.
    pub fn image_matrix(&self, i: usize) -> Matrix<F> {
        self.image(i)
    }

    /// Same complex padded with zero spaces up to top degree `m`.
    pub fn padded(&self, m: usize) -> Self {
        let mut c = self.clone();
        while c.dims.len() <= m {
            let top = *c.dims.last().unwrap();
            c.boundaries.push(Matrix::zeros(top, 0));
            c.dims.push(0);
            c.homology.push(Vec::new());
        }
        c
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology.iter().all(|h| h.is_empty())
    }

    pub fn counts(&self) -> Counts {
        let mut beta = Vec::new();
        let mut gamma = Vec::new();
        let (mut b, mut g) = (0, 0);
        for i in 0..self.dims.len() {
            b += self.homology[i].len();
            g += self.dims[i];
            beta.push(b);
            gamma.push(g);
        }
        let sign_exponent = beta.iter().zip(&gamma).map(|(b, g)| b * g).sum();
        Counts {
            beta,
            gamma,
            sign_exponent,
        }
    }

    /// Replaces the distinguished basis of `C_i` by the one whose vectors
    /// are the columns of `m` in the old basis.
    pub fn rebase(&self, i: usize, m: &Matrix<F>) -> Result<Self, TorsionError> {
        let n = self.dim(i);
        if i >= self.dims.len() || m.rows() != n || m.cols() != n {
            return Err(TorsionError::DegenerateBasis { degree: i });
        }
        let inv = m
            .inverse()
            .ok_or(TorsionError::DegenerateBasis { degree: i })?;
        let mut c = self.clone();
        c.boundaries[i] = c.boundaries[i].mul(m);
        if i + 1 < c.dims.len() {
            c.boundaries[i + 1] = inv.mul(&c.boundaries[i + 1]);
        }
        c.homology[i] = c.homology[i].iter().map(|v| inv.apply(v)).collect();
        Ok(c)
    }

    /// Replaces the homology representatives of degree `i`, which must be
    /// cycles representing the same classes up to boundaries.
    pub fn with_homology(&self, i: usize, reps: Vec<Vec<F>>) -> Result<Self, TorsionError> {
        let mut c = self.clone();
        c.homology[i] = reps;
        c.validate()?;
        Ok(c)
    }

    /// Torsion with the leftmost-pivot choice of the vectors `b_i`.
    pub fn torsion(&self) -> Result<F, TorsionError> {
        let lifts: Vec<Vec<Vec<F>>> = (0..self.dims.len()).map(|i| self.pivot_lifts(i)).collect();
        self.torsion_from(&lifts, &self.homology)
    }

    /// Standard basis vectors of `C_i` at the pivot columns of the boundary.
    fn pivot_lifts(&self, i: usize) -> Vec<Vec<F>> {
        self.boundaries[i]
            .pivot_columns()
            .into_iter()
            .map(|p| {
                let mut v = vec![F::zero(); self.dims[i]];
                v[p] = F::one();
                v
            })
            .collect()
    }

    /// Torsion computed with randomized valid choices: the lifts `b_i` are
    /// taken from a random column order, mixed by a random invertible
    /// triangular matrix and shifted by random cycles, and the homology
    /// representatives are shifted by random boundaries.
    pub fn torsion_with_choices<R: Rng>(&self, rng: &mut R) -> Result<F, TorsionError> {
        let mut lifts = Vec::new();
        let mut homology = Vec::new();
        for i in 0..self.dims.len() {
            let n = self.dims[i];
            let d = &self.boundaries[i];
            let mut order: Vec<usize> = (0..n).collect();
            for k in (1..n).rev() {
                order.swap(k, rng.gen_range(0..=k));
            }
            let permuted = Matrix::from_columns(
                &order.iter().map(|&c| d.column(c)).collect::<Vec<_>>(),
                d.rows(),
            );
            let chosen: Vec<usize> = permuted
                .pivot_columns()
                .into_iter()
                .map(|p| order[p])
                .collect();
            let kernel = d.kernel();
            let r = chosen.len();
            let mut b = Vec::new();
            for a in 0..r {
                let mut v = vec![F::zero(); n];
                for (k, &c) in chosen.iter().enumerate().skip(a) {
                    let coeff = if k == a { nonzero(rng) } else { small(rng) };
                    v[c] = v[c].add(&coeff);
                }
                for kv in &kernel {
                    let s = small::<F, R>(rng);
                    for (x, y) in v.iter_mut().zip(kv) {
                        *x = x.add(&s.mul(y));
                    }
                }
                b.push(v);
            }
            lifts.push(b);
            let image = self.image(i);
            homology.push(
                self.homology[i]
                    .iter()
                    .map(|h| {
                        let shift: Vec<F> = (0..image.cols()).map(|_| small(rng)).collect();
                        let dv = image.apply(&shift);
                        h.iter().zip(&dv).map(|(a, b)| a.add(b)).collect()
                    })
                    .collect(),
            );
        }
        self.torsion_from(&lifts, &homology)
    }

    fn torsion_from(
        &self,
        lifts: &[Vec<Vec<F>>],
        homology: &[Vec<Vec<F>>],
    ) -> Result<F, TorsionError> {
        let mut tau = F::one();
        for i in 0..self.dims.len() {
            let n = self.dims[i];
            let mut cols: Vec<Vec<F>> = Vec::with_capacity(n);
            if i + 1 < self.dims.len() {
                cols.extend(lifts[i + 1].iter().map(|b| self.boundaries[i + 1].apply(b)));
            }
            cols.extend(homology[i].iter().cloned());
            cols.extend(lifts[i].iter().cloned());
            if cols.len() != n {
                return Err(TorsionError::DegenerateBasis { degree: i });
            }
            let det = Matrix::from_columns(&cols, n).det();
            if det.is_zero() {
                return Err(TorsionError::DegenerateBasis { degree: i });
            }
            tau = if i % 2 == 0 {
                tau.div(&det)
            } else {
                tau.mul(&det)
            };
        }
        if self.counts().sign_exponent % 2 == 1 {
            tau = tau.neg();
        }
        Ok(tau)
    }
}

pub(crate) fn small<F: Field, R: Rng>(rng: &mut R) -> F {
    F::from_int(rng.gen_range(-3..=3))
}

pub(crate) fn nonzero<F: Field, R: Rng>(rng: &mut R) -> F {
    let v = rng.gen_range(1..=3);
    F::from_int(if rng.gen_bool(0.5) { v } else { -v })
}
