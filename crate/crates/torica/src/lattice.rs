//! Integer lattice computations behind the class group Cl = Z^n / im(alpha).
//!
//! The map alpha sends a lattice point m to its pairings with the ray
//! generators, so its matrix has one row per ray. The cokernel presentation
//! is read off the Smith normal form of that matrix.

use crate::matrix::{smith_normal_form, Matrix, Smith};
use crate::{IntMatrix, RatMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("matrix has rank {rank}, expected full column rank {expected}")]
    RankDeficient { rank: usize, expected: usize },
}

/// An element of the class group, in the basis owned by its `ClassGroup`.
///
/// Values from different `ClassGroup` instances are not comparable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub free_part: Vec<BigInt>,
    pub torsion_part: Vec<BigInt>,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.free_part.iter().all(|x| x.is_zero()) && self.torsion_part.iter().all(|x| x.is_zero())
    }
}

/// Presentation of Cl = Z^n / alpha(M) from the Smith normal form of alpha.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    n: usize,
    d: usize,
    free_rank: usize,
    torsion: Vec<BigInt>,
    /// Row indices of U corresponding to torsion invariants > 1.
    torsion_rows: Vec<usize>,
    /// Row indices of U corresponding to free coordinates.
    free_rows: Vec<usize>,
    smith: Smith,
}

impl ClassGroup {
    /// Cokernel of alpha (n rows, d columns, required full column rank).
    pub fn from_alpha(alpha: &IntMatrix) -> Result<ClassGroup, LatticeError> {
        let n = alpha.rows();
        let d = alpha.cols();
        let smith = smith_normal_form(alpha);
        let rank = smith.rank();
        if rank < d {
            return Err(LatticeError::RankDeficient { rank, expected: d });
        }
        let diag = smith.diagonal();
        let mut torsion = Vec::new();
        let mut torsion_rows = Vec::new();
        for (i, di) in diag.iter().enumerate() {
            if *di > BigInt::one() {
                torsion.push(di.clone());
                torsion_rows.push(i);
            }
        }
        let free_rows: Vec<usize> = (d..n).collect();
        Ok(ClassGroup {
            n,
            d,
            free_rank: n - d,
            torsion,
            torsion_rows,
            free_rows,
            smith,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    fn reduce_torsion(&self, residues: &mut [BigInt]) {
        for (r, t) in residues.iter_mut().zip(&self.torsion) {
            *r = ((&*r % t) + t) % t;
        }
    }

    /// Class of the divisor sum(b_i D_i).
    pub fn class_of(&self, b: &[BigInt]) -> DivisorClass {
        assert_eq!(b.len(), self.n, "divisor length must equal ray count");
        let y = self.smith.u.mul_vec(b);
        let free_part = self.free_rows.iter().map(|&i| y[i].clone()).collect();
        let mut torsion_part: Vec<BigInt> = self.torsion_rows.iter().map(|&i| y[i].clone()).collect();
        self.reduce_torsion(&mut torsion_part);
        DivisorClass {
            free_part,
            torsion_part,
        }
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass {
            free_part: vec![BigInt::zero(); self.free_rank],
            torsion_part: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// Degree of the i-th variable: class of the i-th standard basis vector.
    pub fn ray_degree(&self, i: usize) -> DivisorClass {
        let mut b = vec![BigInt::zero(); self.n];
        b[i] = BigInt::one();
        self.class_of(&b)
    }

    /// The anticanonical class sum(beta_i).
    pub fn anticanonical(&self) -> DivisorClass {
        self.class_of(&vec![BigInt::one(); self.n])
    }

    pub fn add(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        let free_part = a
            .free_part
            .iter()
            .zip(&b.free_part)
            .map(|(x, y)| x + y)
            .collect();
        let mut torsion_part: Vec<BigInt> = a
            .torsion_part
            .iter()
            .zip(&b.torsion_part)
            .map(|(x, y)| x + y)
            .collect();
        self.reduce_torsion(&mut torsion_part);
        DivisorClass {
            free_part,
            torsion_part,
        }
    }

    pub fn neg(&self, a: &DivisorClass) -> DivisorClass {
        let free_part = a.free_part.iter().map(|x| -x).collect();
        let mut torsion_part: Vec<BigInt> = a.torsion_part.iter().map(|x| -x).collect();
        self.reduce_torsion(&mut torsion_part);
        DivisorClass {
            free_part,
            torsion_part,
        }
    }

    pub fn sub(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: &BigInt, a: &DivisorClass) -> DivisorClass {
        let free_part = a.free_part.iter().map(|x| x * k).collect();
        let mut torsion_part: Vec<BigInt> = a.torsion_part.iter().map(|x| x * k).collect();
        self.reduce_torsion(&mut torsion_part);
        DivisorClass {
            free_part,
            torsion_part,
        }
    }

    /// Canonical section of Z^n -> Cl: a divisor vector with the given class.
    /// Deterministic; the SNF basis fixes the lift.
    pub fn representative(&self, beta: &DivisorClass) -> Vec<BigInt> {
        assert_eq!(beta.free_part.len(), self.free_rank);
        assert_eq!(beta.torsion_part.len(), self.torsion.len());
        let mut y = vec![BigInt::zero(); self.n];
        for (k, &i) in self.torsion_rows.iter().enumerate() {
            y[i] = beta.torsion_part[k].clone();
        }
        for (k, &i) in self.free_rows.iter().enumerate() {
            y[i] = beta.free_part[k].clone();
        }
        self.smith.u_inv.mul_vec(&y)
    }
}

/// Basis of the right kernel over the rationals, deterministic.
pub fn kernel_basis_rational(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    a.to_rational().kernel_basis()
}

/// Rank over the rationals.
pub fn rational_rank(a: &RatMatrix) -> usize {
    a.rank()
}

/// Scales a rational vector to a coprime integer vector with positive first
/// nonzero entry.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn int_matrix_from(rows: &[Vec<i64>]) -> IntMatrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_alpha() -> IntMatrix {
        int_matrix_from(&[vec![1, 0], vec![0, 1], vec![-1, -1]])
    }

    fn p1p1_alpha() -> IntMatrix {
        int_matrix_from(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])
    }

    fn p112_alpha() -> IntMatrix {
        int_matrix_from(&[vec![1, 0], vec![0, 1], vec![-1, -2]])
    }

    #[test]
    fn p2_class_group() {
        let g = ClassGroup::from_alpha(&p2_alpha()).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert!(g.torsion().is_empty());
        let degs: Vec<DivisorClass> = (0..3).map(|i| g.ray_degree(i)).collect();
        assert_eq!(degs[0], degs[1]);
        assert_eq!(degs[1], degs[2]);
        // degree map is the coordinate sum up to sign of the chosen generator
        let b = int_vec(&[3, 0, 0]);
        let c = g.class_of(&b);
        assert_eq!(c, g.scale(&BigInt::from(3), &degs[0]));
    }

    #[test]
    fn p1p1_class_group() {
        let g = ClassGroup::from_alpha(&p1p1_alpha()).unwrap();
        assert_eq!(g.free_rank(), 2);
        assert!(g.torsion().is_empty());
        let degs: Vec<DivisorClass> = (0..4).map(|i| g.ray_degree(i)).collect();
        assert_eq!(degs[0], degs[1]);
        assert_eq!(degs[2], degs[3]);
        assert_ne!(degs[0], degs[2]);
        let c = g.class_of(&int_vec(&[3, 0, 3, 0]));
        let expected = g.add(
            &g.scale(&BigInt::from(3), &degs[0]),
            &g.scale(&BigInt::from(3), &degs[2]),
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn p112_class_group() {
        let g = ClassGroup::from_alpha(&p112_alpha()).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert!(g.torsion().is_empty());
        // rays (1,0),(0,1),(-1,-2) satisfy e1 + 2 e2 + e3 = 0: weights (1,2,1)
        let d1 = g.ray_degree(0);
        let d2 = g.ray_degree(1);
        let d3 = g.ray_degree(2);
        assert_eq!(d1, d3);
        assert_eq!(g.scale(&BigInt::from(2), &d1), d2);
    }

    #[test]
    fn alpha_columns_have_zero_class() {
        for alpha in [p2_alpha(), p1p1_alpha(), p112_alpha()] {
            let g = ClassGroup::from_alpha(&alpha).unwrap();
            for j in 0..alpha.cols() {
                let col = alpha.col(j);
                assert!(g.class_of(&col).is_zero());
            }
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let alpha = int_matrix_from(&[vec![1, 0], vec![2, 0], vec![3, 0]]);
        assert!(ClassGroup::from_alpha(&alpha).is_err());
    }

    #[test]
    fn representative_round_trip() {
        let g = ClassGroup::from_alpha(&p112_alpha()).unwrap();
        let beta = g.class_of(&int_vec(&[1, 1, 1]));
        let b = g.representative(&beta);
        assert_eq!(g.class_of(&b), beta);
        // zero class reduces to a vector in the image of alpha
        let z = g.representative(&g.zero_class());
        assert!(g.class_of(&z).is_zero());
        // weights here are (1,2,1): class 4 means b1 + 2 b2 + b3 = 4
        let four = g.scale(&BigInt::from(4), &g.ray_degree(0));
        let b4 = g.representative(&four);
        let weighted = &b4[0] + BigInt::from(2) * &b4[1] + &b4[2];
        assert_eq!(weighted, BigInt::from(4));
    }

    #[test]
    fn torsion_example() {
        // Z^2 / <(2,0)> = Z + Z/2
        let alpha = int_matrix_from(&[vec![2], vec![0]]);
        let g = ClassGroup::from_alpha(&alpha).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &[BigInt::from(2)]);
        let c = g.ray_degree(0);
        let doubled = g.scale(&BigInt::from(2), &c);
        assert!(doubled.torsion_part.iter().all(|x| x.is_zero()));
        let b = g.representative(&c);
        assert_eq!(g.class_of(&b), c);
    }

    #[test]
    fn kernel_basis_examples() {
        // ray matrix of P^2 with rays as columns
        let a = int_matrix_from(&[vec![1, 0, -1], vec![0, 1, -1]]);
        let k = kernel_basis_rational(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(primitive_integer_vector(&k[0]), int_vec(&[1, 1, 1]));
        // columns (1,0),(-1,-2),(0,1): relation with weights (1,1,2)
        let a112 = int_matrix_from(&[vec![1, -1, 0], vec![0, -2, 1]]);
        let k112 = kernel_basis_rational(&a112);
        assert_eq!(primitive_integer_vector(&k112[0]), int_vec(&[1, 1, 2]));
        // identity has empty kernel
        assert!(kernel_basis_rational(&int_matrix_from(&[vec![1, 0], vec![0, 1]])).is_empty());
    }
}
