//! Seeded generators of based complexes and exact-sequence witnesses. Every
//! matrix entry and homology representative they produce is an integer in
//! `[-3, 3]`.

use rand::Rng;

use super::complex::{nonzero, small, BasedComplex};
use super::field::Field;
use super::matrix::Matrix;
use super::ses::SesWitness;

/// Size limits for generated complexes.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_dim: usize,
    pub max_length: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_dim: 5,
            max_length: 4,
        }
    }
}

const TRIES: usize = 64;

fn in_range<F: Field>(x: &F) -> bool {
    (-3..=3).any(|k| *x == F::from_int(k))
}

/// True if every entry is an integer in `[-3, 3]`.
pub fn entries_in_range<F: Field>(m: &Matrix<F>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| in_range(m.get(i, j))))
}

fn random_matrix<F: Field, R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, small(rng));
        }
    }
    m
}

/// Like `random_matrix`, with each entry zero with probability `1 - density`.
fn sparse_matrix<F: Field, R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    density: f64,
) -> Matrix<F> {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, nonzero(rng));
            }
        }
    }
    m
}

fn random_density<R: Rng>(rng: &mut R) -> f64 {
    [0.25, 0.5, 0.75][rng.gen_range(0..3)]
}

/// Invertible `n x n` matrix with entries in `[-3, 3]`.
pub fn random_invertible<F: Field, R: Rng>(rng: &mut R, n: usize) -> Matrix<F> {
    loop {
        let m: Matrix<F> = random_matrix(rng, n, n);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A nonzero vector with entries in `[-3, 3]` in the span of `basis`, which
/// must come from [`Matrix::kernel`] so that its free coordinates are the
/// combination coefficients. `None` if no attempt stays in range.
fn small_vector_in<F: Field, R: Rng>(rng: &mut R, basis: &[Vec<F>], n: usize) -> Option<Vec<F>> {
    if basis.is_empty() {
        return None;
    }
    for _ in 0..TRIES {
        let coeffs: Vec<F> = basis
            .iter()
            .map(|_| {
                if rng.gen_bool(0.5) {
                    nonzero(rng)
                } else {
                    F::zero()
                }
            })
            .collect();
        if coeffs.iter().all(Field::is_zero) {
            continue;
        }
        let mut v = vec![F::zero(); n];
        for (c, b) in coeffs.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.add(&c.mul(y));
            }
        }
        if v.iter().all(in_range) {
            return Some(v);
        }
    }
    None
}

/// Boundary maps for the given dimensions whose columns are small cycles of
/// the previous map; a random share of the columns is zero to vary the rank.
fn random_boundaries<F: Field, R: Rng>(rng: &mut R, dims: &[usize]) -> Vec<Matrix<F>> {
    let mut maps: Vec<Matrix<F>> = Vec::new();
    for i in 1..dims.len() {
        let previous = if i == 1 {
            Matrix::zeros(0, dims[0])
        } else {
            maps[i - 2].clone()
        };
        let cycles = previous.kernel();
        let density = random_density(rng);
        let columns: Vec<Vec<F>> = (0..dims[i])
            .map(|_| {
                let v = if rng.gen_bool(density) {
                    small_vector_in(rng, &cycles, dims[i - 1])
                } else {
                    None
                };
                v.unwrap_or_else(|| vec![F::zero(); dims[i - 1]])
            })
            .collect();
        maps.push(Matrix::from_columns(&columns, dims[i - 1]));
    }
    maps
}

/// Replaces each homology basis by randomly drawn small cycles independent
/// modulo boundaries. `None` if some degree has no such basis.
fn small_homology<F: Field, R: Rng>(rng: &mut R, c: &BasedComplex<F>) -> Option<BasedComplex<F>> {
    let mut out = c.clone();
    for i in 0..=c.length() {
        let need = c.homology(i).len();
        if need == 0 {
            continue;
        }
        let n = c.dim(i);
        let cycles = c.boundary(i).kernel();
        let image = c.image_matrix(i);
        let base_rank = image.rank();
        let mut chosen: Vec<Vec<F>> = Vec::new();
        for _ in 0..TRIES {
            if chosen.len() == need {
                break;
            }
            let Some(v) = small_vector_in(rng, &cycles, n) else {
                continue;
            };
            chosen.push(v);
            if Matrix::from_columns(&chosen, n).hstack(&image).rank() != base_rank + chosen.len() {
                chosen.pop();
            }
        }
        if chosen.len() < need {
            return None;
        }
        out = out
            .with_homology(i, chosen)
            .expect("independent small cycles form a basis");
    }
    Some(out)
}

/// Random complex of top degree `m` with randomized homology
/// representatives.
pub fn random_complex_of_length<F: Field, R: Rng>(
    rng: &mut R,
    m: usize,
    max_dim: usize,
) -> BasedComplex<F> {
    loop {
        let dims: Vec<usize> = (0..=m).map(|_| rng.gen_range(0..=max_dim)).collect();
        let maps = random_boundaries(rng, &dims);
        let c =
            BasedComplex::with_computed_homology(dims, maps).expect("generated complex is valid");
        if let Some(c) = small_homology(rng, &c) {
            return c;
        }
    }
}

pub fn random_complex<F: Field, R: Rng>(rng: &mut R, bounds: Bounds) -> BasedComplex<F> {
    let m = rng.gen_range(0..=bounds.max_length);
    random_complex_of_length(rng, m, bounds.max_dim)
}

fn random_bases<F: Field, R: Rng>(
    rng: &mut R,
    sub: &BasedComplex<F>,
    quotient: &BasedComplex<F>,
) -> Vec<Matrix<F>> {
    (0..=sub.length())
        .map(|i| random_invertible(rng, sub.dim(i) + quotient.dim(i)))
        .collect()
}

fn small_twist<F: Field>(twist: &[Matrix<F>]) -> bool {
    twist.iter().all(entries_in_range)
}

/// Witness with twist `d' g - g d''` for a random sparse glue map `g`,
/// redrawn until the twist has entries in `[-3, 3]`.
pub fn random_glued_witness<F: Field, R: Rng>(rng: &mut R, bounds: Bounds) -> SesWitness<F> {
    let m = rng.gen_range(0..=bounds.max_length);
    let sub = random_complex_of_length(rng, m, bounds.max_dim);
    let quotient = random_complex_of_length(rng, m, bounds.max_dim);
    let bases = random_bases(rng, &sub, &quotient);
    for _ in 0..TRIES {
        let density = random_density(rng);
        let glue: Vec<Matrix<F>> = (0..=m)
            .map(|i| sparse_matrix(rng, sub.dim(i), quotient.dim(i), density))
            .collect();
        let w = SesWitness::from_glue(sub.clone(), quotient.clone(), &glue, bases.clone())
            .expect("generated witness is valid");
        if small_twist(&w.twist) {
            return w;
        }
    }
    let glue: Vec<Matrix<F>> = (0..=m)
        .map(|i| Matrix::zeros(sub.dim(i), quotient.dim(i)))
        .collect();
    SesWitness::from_glue(sub, quotient, &glue, bases).expect("generated witness is valid")
}

/// Mapping-cone witness: the quotient is a shifted copy of a complex `A`,
/// the sub complex is `A + E`, and the twist is a chain map
/// `a -> (s a, 0) + d h a + h d a`, so the connecting maps are `s` times
/// the inclusion of `H(A)`. The homotopy `h` is redrawn until the twist has
/// entries in `[-3, 3]`.
pub fn random_cone_witness<F: Field, R: Rng>(rng: &mut R, bounds: Bounds) -> SesWitness<F> {
    let m = rng.gen_range(1..=bounds.max_length.max(1));
    let half = (bounds.max_dim / 2).max(1);
    let a = random_complex_of_length::<F, R>(rng, m - 1, half).padded(m);
    let e = random_complex_of_length::<F, R>(rng, m, bounds.max_dim - half);

    // sub = A + E
    let sub_dims: Vec<usize> = (0..=m).map(|i| a.dim(i) + e.dim(i)).collect();
    let sub_maps: Vec<Matrix<F>> = (1..=m)
        .map(|i| a.boundary(i).block_diag(e.boundary(i)))
        .collect();
    let sub_h: Vec<Vec<Vec<F>>> = (0..=m)
        .map(|i| {
            let lift_a = a.homology(i).iter().map(|v| {
                let mut x = v.clone();
                x.extend(std::iter::repeat_n(F::zero(), e.dim(i)));
                x
            });
            let lift_e = e.homology(i).iter().map(|v| {
                let mut x = vec![F::zero(); a.dim(i)];
                x.extend(v.iter().cloned());
                x
            });
            lift_a.chain(lift_e).collect()
        })
        .collect();
    let sub = BasedComplex::new(sub_dims.clone(), sub_maps, sub_h).expect("direct sum is valid");

    // quotient_i = A_{i-1} with boundary -d_A
    let q_dims: Vec<usize> = (0..=m)
        .map(|i| if i == 0 { 0 } else { a.dim(i - 1) })
        .collect();
    let q_maps: Vec<Matrix<F>> = (1..=m)
        .map(|i| {
            if i == 1 {
                Matrix::zeros(0, a.dim(0))
            } else {
                a.boundary(i - 1).scale(&F::from_int(-1))
            }
        })
        .collect();
    let q_h: Vec<Vec<Vec<F>>> = (0..=m)
        .map(|i| {
            if i == 0 {
                Vec::new()
            } else {
                a.homology(i - 1).to_vec()
            }
        })
        .collect();
    let quotient = BasedComplex::new(q_dims, q_maps, q_h).expect("shifted complex is valid");

    // chain map phi_j: A_j -> sub_j
    let s: F = nonzero(rng);
    let twist_for = |homotopy: &[Matrix<F>]| -> Vec<Matrix<F>> {
        let phi = |j: usize| -> Matrix<F> {
            let mut inc = Matrix::zeros(sub_dims[j], a.dim(j));
            inc.paste(0, 0, &Matrix::<F>::identity(a.dim(j)).scale(&s));
            if j < m {
                inc = inc.add(&sub.boundary(j + 1).mul(&homotopy[j]));
            }
            if j > 0 {
                inc = inc.add(&homotopy[j - 1].mul(a.boundary(j)));
            }
            inc
        };
        (0..=m)
            .map(|i| {
                if i == 0 {
                    Matrix::zeros(0, 0)
                } else {
                    phi(i - 1)
                }
            })
            .collect()
    };
    let zero_homotopy: Vec<Matrix<F>> = (0..=m)
        .map(|j| Matrix::zeros(if j < m { sub_dims[j + 1] } else { 0 }, a.dim(j)))
        .collect();
    let mut twist = twist_for(&zero_homotopy);
    for _ in 0..TRIES {
        let density = random_density(rng);
        let homotopy: Vec<Matrix<F>> = (0..=m)
            .map(|j| {
                if j < m {
                    sparse_matrix(rng, sub_dims[j + 1], a.dim(j), density)
                } else {
                    Matrix::zeros(0, a.dim(j))
                }
            })
            .collect();
        let candidate = twist_for(&homotopy);
        if small_twist(&candidate) {
            twist = candidate;
            break;
        }
    }
    let bases = random_bases(rng, &sub, &quotient);
    SesWitness::from_twist(sub, quotient, twist, bases).expect("cone witness is valid")
}

/// Alternates glued and cone witnesses.
pub fn random_witness<F: Field, R: Rng>(rng: &mut R, bounds: Bounds) -> SesWitness<F> {
    if rng.gen_bool(0.5) {
        random_glued_witness(rng, bounds)
    } else {
        random_cone_witness(rng, bounds)
    }
}
