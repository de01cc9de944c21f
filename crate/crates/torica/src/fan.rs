//! Complete simplicial fans: the data model, validation, primitive
//! collections and the exceptional locus Z, and builders for the standard
//! families (projective spaces, weighted projective spaces, products).

use crate::lattice::{kernel_basis_rational, primitive_integer_vector};
use crate::matrix::{smith_normal_form, Matrix};
use crate::{IntMatrix, RatMatrix};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FanError {
    #[error("ray index {0} out of range")]
    BadIndex(usize),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("fan is invalid: {0:?}")]
    Invalid(Vec<FanDefect>),
    #[error("malformed fan json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FanDefect {
    NonPrimitiveRay(usize),
    DuplicateRay(usize, usize),
    DegenerateCone(usize),
    BadIntersection(usize, usize),
    /// Wall condition or covering check failed; carries a human-readable witness.
    NotComplete(String),
}

/// A rational simplicial complete fan, given by its primitive ray generators
/// and maximal cones. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
}

/// Minimal set of rays generating no cone of the fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveCollection {
    pub indices: Vec<usize>,
}

/// Component of Z: the coordinate subspace z_i = 0 for i in `zero_indices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateSubspace {
    pub zero_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WeightedProjectiveClass {
    IsWeightedProjective(Vec<BigInt>),
    FiniteCoverOfFan,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub defects: Vec<FanDefect>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

fn gcd_vec(v: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    g
}

impl Fan {
    /// Structural constructor: checks index ranges only. Run
    /// [`Fan::validate`] for the geometric conditions.
    pub fn new(
        dim: usize,
        rays: Vec<Vec<BigInt>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        let n = rays.len();
        for r in &rays {
            if r.len() != dim {
                return Err(FanError::Json(format!(
                    "ray has {} coordinates, expected {}",
                    r.len(),
                    dim
                )));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            for &i in &c {
                if i >= n {
                    return Err(FanError::BadIndex(i));
                }
            }
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            cones.push(c);
        }
        Ok(Fan {
            dim,
            rays,
            max_cones: cones,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Rays as rows: the matrix of alpha, m -> (<m, e_i>)_i.
    pub fn alpha_matrix(&self) -> IntMatrix {
        Matrix::from_rows(self.rays.clone())
    }

    /// Rays as columns (d x n).
    pub fn ray_column_matrix(&self) -> IntMatrix {
        self.alpha_matrix().transpose()
    }

    fn cone_matrix(&self, cone: &[usize]) -> RatMatrix {
        Matrix::from_fn(self.dim, cone.len(), |i, j| {
            BigRational::from_integer(self.rays[cone[j]][i].clone())
        })
    }

    /// Exact membership of a rational point in the cone spanned by `cone`.
    pub fn cone_contains(&self, cone: &[usize], x: &[BigRational]) -> bool {
        let m = self.cone_matrix(cone);
        match m.solve(x) {
            Some(coeffs) => {
                // solve() zeroes free variables; verify the solution and signs
                m.mul_vec(&coeffs)[..] == *x && coeffs.iter().all(|c| !c.is_negative())
            }
            None => false,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut defects = Vec::new();
        let n = self.rays.len();
        for (i, r) in self.rays.iter().enumerate() {
            if gcd_vec(r) != BigInt::one() {
                defects.push(FanDefect::NonPrimitiveRay(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.rays[i] == self.rays[j] {
                    defects.push(FanDefect::DuplicateRay(i, j));
                }
            }
        }
        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.len() != self.dim || self.cone_matrix(cone).det().is_zero() {
                defects.push(FanDefect::DegenerateCone(c));
            }
        }
        if !defects.is_empty() {
            return ValidationReport { defects };
        }
        for c1 in 0..self.max_cones.len() {
            for c2 in c1 + 1..self.max_cones.len() {
                if !self.cones_intersect_in_common_face(c1, c2) {
                    defects.push(FanDefect::BadIntersection(c1, c2));
                }
            }
        }
        // wall condition: every (d-1)-face of a max cone lies in exactly two
        use std::collections::BTreeMap;
        let mut wall_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.max_cones {
            for wall in cone.iter().copied().combinations(self.dim.saturating_sub(1)) {
                *wall_count.entry(wall).or_insert(0) += 1;
            }
        }
        for (wall, count) in &wall_count {
            if *count != 2 {
                defects.push(FanDefect::NotComplete(format!(
                    "wall {:?} lies in {} maximal cones",
                    wall, count
                )));
            }
        }
        if defects.is_empty() {
            // randomized covering sanity check, deterministic seed
            let mut rng = ChaCha8Rng::seed_from_u64(0x70726963);
            for trial in 0..100 {
                let x: Vec<BigRational> = (0..self.dim)
                    .map(|_| {
                        BigRational::new(
                            BigInt::from(rng.gen_range(-99i64..=99)),
                            BigInt::from(rng.gen_range(1i64..=9)),
                        )
                    })
                    .collect();
                if !self
                    .max_cones
                    .iter()
                    .any(|cone| self.cone_contains(cone, &x))
                {
                    defects.push(FanDefect::NotComplete(format!(
                        "direction {:?} (trial {}) not covered",
                        x.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                        trial
                    )));
                    break;
                }
            }
        }
        ValidationReport { defects }
    }

    pub fn ensure_valid(&self) -> Result<(), FanError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(FanError::Invalid(report.defects))
        }
    }

    /// cone(sigma1) /\ cone(sigma2) == cone(sigma1 /\ sigma2), exactly.
    ///
    /// Writing points of the intersection as E1 a = E2 b with a, b >= 0 and
    /// a = M b, the set K = {b >= 0 : M b >= 0} is a pointed polyhedral cone;
    /// the condition holds iff every extreme ray of K is supported on the
    /// common ray set on both sides.
    fn cones_intersect_in_common_face(&self, c1: usize, c2: usize) -> bool {
        let sigma1 = &self.max_cones[c1];
        let sigma2 = &self.max_cones[c2];
        let common: BTreeSet<usize> = sigma1
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .intersection(&sigma2.iter().copied().collect())
            .copied()
            .collect();
        let e1 = self.cone_matrix(sigma1);
        let e2 = self.cone_matrix(sigma2);
        let Some(e1_inv) = e1.inverse() else {
            return false;
        };
        let m = e1_inv.mul(&e2);
        let d = self.dim;
        // rows of the inequality system: b_j >= 0 (d rows), (M b)_i >= 0 (d rows)
        let ineq = Matrix::from_fn(2 * d, d, |r, c| {
            if r < d {
                if r == c {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            } else {
                m.at(r - d, c).clone()
            }
        });
        if d == 0 {
            return true;
        }
        for subset in (0..2 * d).combinations(d - 1) {
            let sub = Matrix::from_fn(subset.len(), d, |r, c| ineq.at(subset[r], c).clone());
            let kernel = sub.kernel_basis();
            if kernel.len() != 1 {
                continue;
            }
            for dir in [1i64, -1] {
                let b: Vec<BigRational> = kernel[0]
                    .iter()
                    .map(|x| x * BigRational::from_integer(BigInt::from(dir)))
                    .collect();
                let vals = ineq.mul_vec(&b);
                if vals.iter().any(|v| v.is_negative()) {
                    continue; // not a feasible ray of K
                }
                let a = m.mul_vec(&b);
                let ok = b
                    .iter()
                    .enumerate()
                    .all(|(j, v)| v.is_zero() || common.contains(&sigma2[j]))
                    && a.iter()
                        .enumerate()
                        .all(|(i, v)| v.is_zero() || common.contains(&sigma1[i]));
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// All k-dimensional cones, as sorted index sets, deduplicated.
    pub fn cones_of_dimension(&self, k: usize) -> Vec<Vec<usize>> {
        assert!(k <= self.dim);
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in &self.max_cones {
            for sub in cone.iter().copied().combinations(k) {
                out.insert(sub);
            }
        }
        out.into_iter().collect()
    }

    /// Every cone of the fan, all dimensions, the zero cone included.
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..=self.dim {
            out.extend(self.cones_of_dimension(k));
        }
        out
    }

    fn face_set(&self) -> BTreeSet<Vec<usize>> {
        self.all_cones().into_iter().collect()
    }

    /// Minimal non-faces of the underlying simplicial complex.
    pub fn primitive_collections(&self) -> Vec<PrimitiveCollection> {
        let n = self.rays.len();
        assert!(n <= 25, "primitive-collection search is exponential in n");
        let faces = self.face_set();
        let mut out = Vec::new();
        for size in 1..=n {
            for subset in (0..n).combinations(size) {
                if faces.contains(&subset) {
                    continue;
                }
                let minimal = subset
                    .iter()
                    .map(|&skip| {
                        subset
                            .iter()
                            .copied()
                            .filter(|&x| x != skip)
                            .collect::<Vec<_>>()
                    })
                    .all(|sub| faces.contains(&sub));
                if minimal {
                    out.push(PrimitiveCollection { indices: subset });
                }
            }
        }
        out
    }

    /// Irreducible components of Z, one per primitive collection.
    pub fn z_sigma_components(&self) -> Vec<CoordinateSubspace> {
        self.primitive_collections()
            .into_iter()
            .map(|pc| CoordinateSubspace {
                zero_indices: pc.indices,
            })
            .collect()
    }

    /// codim Z = minimal primitive-collection size. Asserts the bound
    /// 2 <= codim <= floor(d/2)+1 unless n = d+1 (where Z is the origin).
    pub fn codim_z(&self) -> usize {
        let collections = self.primitive_collections();
        let codim = collections
            .iter()
            .map(|pc| pc.indices.len())
            .min()
            .expect("complete fan has at least one primitive collection");
        let n = self.rays.len();
        let d = self.dim;
        if n == d + 1 {
            assert_eq!(codim, d + 1, "n = d+1 fan must have Z = origin");
        } else {
            assert!(
                2 <= codim && codim <= d / 2 + 1,
                "codim Z bound violated: codim = {}, d = {}",
                codim,
                d
            );
        }
        codim
    }

    /// Squarefree Stanley-Reisner generators, one per primitive collection.
    pub fn stanley_reisner_generators(&self) -> Vec<Vec<usize>> {
        self.primitive_collections()
            .into_iter()
            .map(|pc| pc.indices)
            .collect()
    }

    /// The complement monomial z_hat_sigma: exponent 1 at every index not in
    /// the cone.
    pub fn complement_monomial(&self, cone: &[usize]) -> Vec<u32> {
        let in_cone: BTreeSet<usize> = cone.iter().copied().collect();
        (0..self.rays.len())
            .map(|i| if in_cone.contains(&i) { 0 } else { 1 })
            .collect()
    }

    pub fn weighted_projective_classification(&self) -> WeightedProjectiveClass {
        let n = self.rays.len();
        let d = self.dim;
        if n != d + 1 {
            return WeightedProjectiveClass::NotApplicable;
        }
        let snf = smith_normal_form(&self.alpha_matrix());
        let all_ones = snf
            .diagonal()
            .iter()
            .take(d)
            .all(|x| x.abs() == BigInt::one());
        if !all_ones {
            return WeightedProjectiveClass::FiniteCoverOfFan;
        }
        let kernel = kernel_basis_rational(&self.ray_column_matrix());
        assert_eq!(kernel.len(), 1);
        let mut w = primitive_integer_vector(&kernel[0]);
        if w.iter().any(|x| x.is_negative() || x.is_zero()) {
            // completeness forces a strictly positive relation
            if w.iter().all(|x| x.is_negative()) {
                for x in w.iter_mut() {
                    *x = -&*x;
                }
            } else {
                return WeightedProjectiveClass::FiniteCoverOfFan;
            }
        }
        WeightedProjectiveClass::IsWeightedProjective(w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "rays": self.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "max_cones": self.max_cones,
        })
    }

    /// Parses the fan JSON contract. Rays must be given primitive; the
    /// loader rejects otherwise instead of normalizing.
    pub fn from_json_str(s: &str) -> Result<Fan, FanError> {
        let parsed: FanJson =
            serde_json::from_str(s).map_err(|e| FanError::Json(e.to_string()))?;
        let rays: Vec<Vec<BigInt>> = parsed
            .rays
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for (i, r) in rays.iter().enumerate() {
            if gcd_vec(r) != BigInt::one() {
                return Err(FanError::Json(format!("NonPrimitiveRay({})", i)));
            }
        }
        Fan::new(parsed.dim, rays, parsed.max_cones)
    }
}

/// The fan of P^d.
pub fn projective_space(d: usize) -> Fan {
    assert!(d >= 1);
    let mut rays: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    rays.push(vec![-BigInt::one(); d]);
    let max_cones = (0..=d).combinations(d).collect();
    Fan::new(d, rays, max_cones).unwrap()
}

/// The fan of P(w_1,...,w_{d+1}).
///
/// The abstract lattice N = Z^{d+1} / Z w is realized concretely through the
/// Smith normal form of the weight column; ray i is the image of the i-th
/// standard basis vector. When the last weight divides all others the direct
/// clearing construction is used instead, which reproduces the P^d rays for
/// unit weights.
pub fn weighted_projective(weights: &[u64]) -> Result<Fan, FanError> {
    let k = weights.len();
    if k < 2 || weights.contains(&0) {
        return Err(FanError::InvalidWeights(
            "need at least two positive weights".into(),
        ));
    }
    let d = k - 1;
    let w: Vec<BigInt> = weights.iter().map(|&x| BigInt::from(x)).collect();
    if gcd_vec(&w) != BigInt::one() {
        return Err(FanError::InvalidWeights("weights must be coprime".into()));
    }
    let last = &w[d];
    let rays: Vec<Vec<BigInt>> = if w[..d].iter().all(|x| (x % last).is_zero()) {
        let mut rays: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        rays.push((0..d).map(|j| -(&w[j] / last)).collect());
        rays
    } else {
        let col = Matrix::from_rows(w.iter().map(|x| vec![x.clone()]).collect());
        let snf = smith_normal_form(&col);
        // U * w = (1, 0, ..., 0); rows 1..=d of U define the projection
        (0..k)
            .map(|i| (1..k).map(|r| snf.u.at(r, i).clone()).collect())
            .collect()
    };
    for (i, r) in rays.iter().enumerate() {
        if gcd_vec(r) != BigInt::one() {
            return Err(FanError::InvalidWeights(format!(
                "ray {} of the concrete realization is not primitive",
                i
            )));
        }
    }
    let max_cones = (0..k).combinations(d).collect();
    Fan::new(d, rays, max_cones)
}

/// Product fan on the direct sum of the two lattices.
pub fn product_of_fans(f1: &Fan, f2: &Fan) -> Fan {
    let d = f1.dim + f2.dim;
    let n1 = f1.rays.len();
    let mut rays = Vec::new();
    for r in &f1.rays {
        let mut v = r.clone();
        v.extend(vec![BigInt::zero(); f2.dim]);
        rays.push(v);
    }
    for r in &f2.rays {
        let mut v = vec![BigInt::zero(); f1.dim];
        v.extend(r.clone());
        rays.push(v);
    }
    let mut max_cones = Vec::new();
    for c1 in &f1.max_cones {
        for c2 in &f2.max_cones {
            let mut c = c1.clone();
            c.extend(c2.iter().map(|&i| i + n1));
            max_cones.push(c);
        }
    }
    Fan::new(d, rays, max_cones).unwrap()
}

/// P^2 blown up at a torus-fixed point.
pub fn blown_up_p2() -> Fan {
    Fan::new(
        2,
        vec![
            vec![BigInt::one(), BigInt::zero()],
            vec![BigInt::zero(), BigInt::one()],
            vec![-BigInt::one(), -BigInt::one()],
            vec![BigInt::one(), BigInt::one()],
        ],
        vec![vec![0, 3], vec![1, 3], vec![1, 2], vec![0, 2]],
    )
    .unwrap()
}

/// P(1,1,2) with rays ordered so the variable degrees are (1,1,2).
pub fn p112() -> Fan {
    Fan::new(
        2,
        vec![
            vec![BigInt::one(), BigInt::zero()],
            vec![-BigInt::one(), BigInt::from(-2)],
            vec![BigInt::zero(), BigInt::one()],
        ],
        vec![vec![0, 1], vec![0, 2], vec![1, 2]],
    )
    .unwrap()
}
