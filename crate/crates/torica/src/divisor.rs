//! Torus-invariant divisors D = sum(b_i D_i): Cartier and ampleness tests,
//! the support polytope {m : <m, e_i> >= -b_i}, and the cone <-> face
//! correspondence for ample divisors.

use crate::fan::Fan;
use crate::matrix::Matrix;
use crate::RatMatrix;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DivisorError {
    #[error("divisor is not ample")]
    NotAmple,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// Bounded rational polytope cut out by <m, e_i> >= -b_i.
#[derive(Clone, Debug)]
pub struct SupportPolytope {
    pub b: Vec<BigInt>,
    pub vertices: Vec<Vec<BigRational>>,
    pub lattice_points: Vec<Vec<BigInt>>,
}

/// Face of the support polytope indexed by a cone tau: the points where the
/// inequalities of tau's rays are tight.
#[derive(Clone, Debug)]
pub struct PolytopeFace {
    pub cone: Vec<usize>,
    pub vertices: Vec<Vec<BigRational>>,
    pub lattice_points: Vec<Vec<BigInt>>,
    /// Basis of the rational span of differences of face points.
    pub directions: Vec<Vec<BigRational>>,
}

fn pairing(ray: &[BigInt], m: &[BigRational]) -> BigRational {
    ray.iter()
        .zip(m)
        .map(|(e, x)| BigRational::from_integer(e.clone()) * x)
        .sum()
}

fn pairing_int(ray: &[BigInt], m: &[BigInt]) -> BigInt {
    ray.iter().zip(m).map(|(e, x)| e * x).sum()
}

/// The unique rational solution of <m, e_i> = -b_i for the rays of a
/// maximal cone sigma.
pub fn m_sigma(fan: &Fan, b: &[BigInt], sigma: &[usize]) -> Vec<BigRational> {
    assert_eq!(sigma.len(), fan.dim());
    let a: RatMatrix = Matrix::from_fn(fan.dim(), fan.dim(), |i, j| {
        BigRational::from_integer(fan.ray(sigma[i])[j].clone())
    });
    let rhs: Vec<BigRational> = sigma
        .iter()
        .map(|&i| BigRational::from_integer(-&b[i]))
        .collect();
    a.solve(&rhs).expect("simplicial cone has invertible ray matrix")
}

/// True iff every m_sigma is integral.
pub fn is_cartier(fan: &Fan, b: &[BigInt]) -> bool {
    fan.max_cones()
        .iter()
        .all(|sigma| m_sigma(fan, b, sigma).iter().all(|x| x.is_integer()))
}

/// Strict convexity of the support function: for every maximal cone and every
/// ray outside it, <m_sigma, e_j> > -b_j.
pub fn is_ample(fan: &Fan, b: &[BigInt]) -> bool {
    fan.max_cones().iter().all(|sigma| {
        let m = m_sigma(fan, b, sigma);
        let inside: BTreeSet<usize> = sigma.iter().copied().collect();
        (0..fan.n_rays()).filter(|j| !inside.contains(j)).all(|j| {
            pairing(fan.ray(j), &m) > BigRational::from_integer(-&b[j])
        })
    })
}

/// Vertices of the polytope: feasible solutions of d-subsets of tight
/// inequalities, deduplicated.
fn polytope_vertices(fan: &Fan, b: &[BigInt]) -> Vec<Vec<BigRational>> {
    let d = fan.dim();
    let n = fan.n_rays();
    let mut seen: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for subset in (0..n).combinations(d) {
        let a: RatMatrix = Matrix::from_fn(d, d, |i, j| {
            BigRational::from_integer(fan.ray(subset[i])[j].clone())
        });
        if a.det().is_zero() {
            continue;
        }
        let rhs: Vec<BigRational> = subset
            .iter()
            .map(|&i| BigRational::from_integer(-&b[i]))
            .collect();
        let m = a.solve(&rhs).unwrap();
        let feasible = (0..n)
            .all(|i| pairing(fan.ray(i), &m) >= BigRational::from_integer(-&b[i]));
        if feasible {
            seen.insert(m);
        }
    }
    seen.into_iter().collect()
}

/// Support polytope with exact vertex list and lattice points.
pub fn support_polytope(fan: &Fan, b: &[BigInt]) -> SupportPolytope {
    assert_eq!(b.len(), fan.n_rays());
    let vertices = polytope_vertices(fan, b);
    let d = fan.dim();
    let mut lattice_points = Vec::new();
    if !vertices.is_empty() {
        let mut lo = vec![BigInt::zero(); d];
        let mut hi = vec![BigInt::zero(); d];
        for j in 0..d {
            let coords: Vec<&BigRational> = vertices.iter().map(|v| &v[j]).collect();
            lo[j] = coords.iter().map(|x| x.floor().to_integer()).min().unwrap();
            hi[j] = coords.iter().map(|x| x.ceil().to_integer()).max().unwrap();
        }
        let mut cursor = lo.clone();
        loop {
            let feasible = (0..fan.n_rays())
                .all(|i| pairing_int(fan.ray(i), &cursor) >= -&b[i]);
            if feasible {
                lattice_points.push(cursor.clone());
            }
            // odometer over the bounding box
            let mut j = 0;
            loop {
                if j == d {
                    break;
                }
                cursor[j] += 1;
                if cursor[j] <= hi[j] {
                    break;
                }
                cursor[j] = lo[j].clone();
                j += 1;
            }
            if j == d {
                break;
            }
        }
    }
    SupportPolytope {
        b: b.to_vec(),
        vertices,
        lattice_points,
    }
}

impl SupportPolytope {
    /// Exponent vector of the monomial attached to a lattice point m:
    /// a_i = b_i + <m, e_i>.
    pub fn exponents_of(&self, fan: &Fan, m: &[BigInt]) -> Vec<BigInt> {
        (0..fan.n_rays())
            .map(|i| &self.b[i] + pairing_int(fan.ray(i), m))
            .collect()
    }

    pub fn contains_lattice_point(&self, m: &[BigInt]) -> bool {
        self.lattice_points.iter().any(|p| p == m)
    }
}

/// One face per cone of the fan (the zero cone giving the whole polytope),
/// for an ample divisor.
pub fn polytope_faces(fan: &Fan, b: &[BigInt]) -> Result<Vec<PolytopeFace>, DivisorError> {
    if !is_ample(fan, b) {
        return Err(DivisorError::NotAmple);
    }
    let polytope = support_polytope(fan, b);
    let mut out = Vec::new();
    for cone in fan.all_cones() {
        let tight = |m: &[BigRational]| {
            cone.iter()
                .all(|&i| pairing(fan.ray(i), m) == BigRational::from_integer(-&b[i]))
        };
        let vertices: Vec<Vec<BigRational>> = polytope
            .vertices
            .iter()
            .filter(|v| tight(v))
            .cloned()
            .collect();
        let lattice_points: Vec<Vec<BigInt>> = polytope
            .lattice_points
            .iter()
            .filter(|m| {
                cone.iter()
                    .all(|&i| pairing_int(fan.ray(i), m) == -&b[i])
            })
            .cloned()
            .collect();
        let directions = if vertices.len() <= 1 {
            Vec::new()
        } else {
            let base = &vertices[0];
            let diffs: Vec<Vec<BigRational>> = vertices[1..]
                .iter()
                .map(|v| v.iter().zip(base).map(|(a, c)| a - c).collect())
                .collect();
            let mat: RatMatrix = Matrix::from_rows(diffs);
            let (rr, pivots) = mat.rref();
            pivots
                .iter()
                .enumerate()
                .map(|(r, _)| rr.row(r))
                .collect()
        };
        out.push(PolytopeFace {
            cone,
            vertices,
            lattice_points,
            directions,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{p112, product_of_fans, projective_space};
    use crate::lattice::int_vec;
    use num_traits::One;

    #[test]
    fn m_sigma_examples() {
        let p2 = projective_space(2);
        let zero = int_vec(&[0, 0, 0]);
        for sigma in p2.max_cones() {
            assert!(m_sigma(&p2, &zero, sigma).iter().all(|x| x.is_zero()));
        }
        let b = int_vec(&[3, 0, 0]);
        // cone(e2, e3) -> m = 0; cone(e1, e2) -> m = (-3, 0)
        let m23 = m_sigma(&p2, &b, &[1, 2]);
        assert!(m23.iter().all(|x| x.is_zero()));
        let m12 = m_sigma(&p2, &b, &[0, 1]);
        assert_eq!(m12[0], BigRational::from_integer(BigInt::from(-3)));
        assert!(m12[1].is_zero());
    }

    #[test]
    fn cartier_examples() {
        let p2 = projective_space(2);
        assert!(is_cartier(&p2, &int_vec(&[1, 0, 0])));
        let pw = p112();
        // degree-1 class is not Cartier, degree-4 is
        assert!(!is_cartier(&pw, &int_vec(&[1, 0, 0])));
        assert!(is_cartier(&pw, &int_vec(&[4, 0, 0])));
    }

    #[test]
    fn ample_examples() {
        let p2 = projective_space(2);
        assert!(is_ample(&p2, &int_vec(&[3, 0, 0])));
        assert!(!is_ample(&p2, &int_vec(&[-1, 0, 0])));
        let p1p1 = product_of_fans(&projective_space(1), &projective_space(1));
        // class (1,0) is nef but not ample
        assert!(!is_ample(&p1p1, &int_vec(&[1, 0, 0, 0])));
        assert!(is_ample(&p1p1, &int_vec(&[1, 0, 1, 0])));
        // anticanonical on the blow-up of P^2
        let bl = crate::fan::blown_up_p2();
        assert!(is_ample(&bl, &int_vec(&[1, 1, 1, 1])));
    }

    #[test]
    fn support_polytope_examples() {
        let p2 = projective_space(2);
        let p = support_polytope(&p2, &int_vec(&[3, 0, 0]));
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(p.lattice_points.len(), 10);
        let zero = support_polytope(&p2, &int_vec(&[0, 0, 0]));
        assert_eq!(zero.lattice_points, vec![vec![BigInt::zero(); 2]]);
        let p1p1 = product_of_fans(&projective_space(1), &projective_space(1));
        let sq = support_polytope(&p1p1, &int_vec(&[3, 0, 3, 0]));
        assert_eq!(sq.vertices.len(), 4);
        assert_eq!(sq.lattice_points.len(), 16);
        // empty polytope for a negative divisor
        let empty = support_polytope(&p2, &int_vec(&[-1, 0, 0]));
        assert!(empty.lattice_points.is_empty());
    }

    #[test]
    fn faces_of_triangle() {
        let p2 = projective_space(2);
        let b = int_vec(&[3, 0, 0]);
        let faces = polytope_faces(&p2, &b).unwrap();
        // 1 + 3 + 3 cones
        assert_eq!(faces.len(), 7);
        for f in &faces {
            let expected_dim = p2.dim() - f.cone.len();
            if f.cone.is_empty() {
                assert_eq!(f.vertices.len(), 3);
            } else if f.cone.len() == 1 {
                assert_eq!(f.vertices.len(), 2);
                assert_eq!(f.directions.len(), 1);
            } else {
                assert_eq!(f.vertices.len(), 1);
                assert!(f.directions.is_empty());
            }
            assert!(f.directions.len() <= expected_dim);
        }
        // vertex face count of lattice points: 4 on each edge of the 3-dilate
        let edge = faces.iter().find(|f| f.cone.len() == 1).unwrap();
        assert_eq!(edge.lattice_points.len(), 4);
    }

    #[test]
    fn face_correspondence_reverses_inclusion() {
        let p1p1 = product_of_fans(&projective_space(1), &projective_space(1));
        let b = int_vec(&[3, 0, 3, 0]);
        let faces = polytope_faces(&p1p1, &b).unwrap();
        for f1 in &faces {
            for f2 in &faces {
                let cone_subset = f1.cone.iter().all(|i| f2.cone.contains(i));
                if cone_subset {
                    // larger cone -> smaller face
                    for v in &f2.vertices {
                        assert!(f1.vertices.contains(v));
                    }
                }
            }
        }
        assert!(polytope_faces(&p1p1, &int_vec(&[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn non_cartier_polytope_is_consistent() {
        let pw = p112();
        // class 1: b = (1,0,0); vertices may be non-integral
        let p = support_polytope(&pw, &int_vec(&[1, 0, 0]));
        // S_1 has 2 monomials (z1, z2)
        assert_eq!(p.lattice_points.len(), 2);
        assert!(p
            .vertices
            .iter()
            .any(|v| v.iter().any(|x| !x.is_integer())));
        let _ = BigRational::one();
    }
}
