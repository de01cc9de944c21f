//! Jacobian rings of hypersurfaces and everything computed from them: graded
//! dimensions of J, J0, J1 and their quotients, quasi-smoothness and
//! nondegeneracy certificates, Betti numbers of the ambient variety, Hodge
//! number formulas, and the Aut/moduli dimension counts.

use crate::coxring::{CoxRing, GradedPolynomial, MonomialExponent};
use crate::divisor::{is_ample, is_cartier, polytope_faces, support_polytope};
use crate::fan::Fan;
use crate::groebner::{ideal_contains_one, radical_membership, GroebnerError, Mono, MultiPoly};
use crate::lattice::DivisorClass;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HodgeError {
    #[error("hypersurface degree is not an ample class")]
    NotAmple,
    #[error("hypersurface is not quasi-smooth")]
    NotQuasiSmooth,
    #[error("hypersurface is not nondegenerate")]
    NotNondegenerate,
    #[error("divisor class does not match the polynomial degree")]
    DegreeMismatch,
    #[error("dimension formula produced a negative value at p = {0}; theorem consistency failure")]
    NegativeDimension(usize),
    #[error("budget exceeded while certifying {context}: {source}")]
    Budget {
        context: String,
        source: GroebnerError,
    },
}

/// Sorted (column, coefficient) pairs with nonzero coefficients.
type SparseRow = Vec<(usize, BigRational)>;

/// Incremental sparse Gaussian elimination over Q; rank grows as rows arrive.
struct SparseEliminator {
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEliminator {
    fn new() -> Self {
        SparseEliminator {
            pivots: BTreeMap::new(),
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces the row against stored pivots; returns whether it contributed
    /// a new pivot.
    fn insert(&mut self, mut row: SparseRow) -> bool {
        loop {
            let Some((col, lead)) = row.first().map(|(c, v)| (*c, v.clone())) else {
                return false;
            };
            match self.pivots.get(&col) {
                None => {
                    for (_, v) in &mut row {
                        *v /= &lead;
                    }
                    self.pivots.insert(col, row);
                    return true;
                }
                Some(pivot) => {
                    // row <- row - lead * pivot  (pivot is monic at col)
                    let mut merged: SparseRow = Vec::with_capacity(row.len() + pivot.len());
                    let mut i = 0;
                    let mut j = 0;
                    while i < row.len() || j < pivot.len() {
                        match (row.get(i), pivot.get(j)) {
                            (Some((ci, vi)), Some((cj, vj))) => {
                                if ci == cj {
                                    let v = vi - &lead * vj;
                                    if !v.is_zero() {
                                        merged.push((*ci, v));
                                    }
                                    i += 1;
                                    j += 1;
                                } else if ci < cj {
                                    merged.push((*ci, vi.clone()));
                                    i += 1;
                                } else {
                                    merged.push((*cj, -(&lead * vj)));
                                    j += 1;
                                }
                            }
                            (Some((ci, vi)), None) => {
                                merged.push((*ci, vi.clone()));
                                i += 1;
                            }
                            (None, Some((cj, vj))) => {
                                merged.push((*cj, -(&lead * vj)));
                                j += 1;
                            }
                            (None, None) => unreachable!(),
                        }
                    }
                    row = merged;
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianVariant {
    J,
    J0,
    J1,
}

/// Flags asserting which geometric preconditions have been certified (or
/// deliberately assumed by the caller).
#[derive(Clone, Copy, Debug, Default)]
pub struct Preconditions {
    pub ample: bool,
    pub quasi_smooth: bool,
    pub nondegenerate: bool,
}

impl Preconditions {
    pub fn assume_all() -> Self {
        Preconditions {
            ample: true,
            quasi_smooth: true,
            nondegenerate: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeCertificate {
    pub cone: Vec<usize>,
    pub singular_locus_inside: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiSmoothCertificate {
    pub quasi_smooth: bool,
    pub cones: Vec<ConeCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceCertificate {
    pub cone: Vec<usize>,
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegenerateCertificate {
    pub nondegenerate: bool,
    pub faces: Vec<FaceCertificate>,
}

/// A homogeneous polynomial with its cached derivative data.
#[derive(Clone, Debug)]
pub struct JacobianData {
    ring: CoxRing,
    f: GradedPolynomial,
    partials: Vec<GradedPolynomial>,
    log_partials: Vec<GradedPolynomial>,
    beta0: DivisorClass,
    dim_cache: std::cell::RefCell<BTreeMap<(DivisorClass, u8), usize>>,
}

fn to_multipoly(f: &GradedPolynomial, n: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(n);
    for (a, c) in &f.terms {
        p.add_term(Mono(a.clone()), c.clone());
    }
    p
}

impl JacobianData {
    pub fn new(ring: CoxRing, f: GradedPolynomial) -> JacobianData {
        let partials = (0..ring.n_vars())
            .map(|i| ring.partial_derivative(&f, i))
            .collect();
        let log_partials = (0..ring.n_vars())
            .map(|i| ring.log_partial(&f, i))
            .collect();
        let beta0 = ring.beta0();
        JacobianData {
            ring,
            f,
            partials,
            log_partials,
            beta0,
            dim_cache: std::cell::RefCell::new(BTreeMap::new()),
        }
    }

    pub fn ring(&self) -> &CoxRing {
        &self.ring
    }

    pub fn f(&self) -> &GradedPolynomial {
        &self.f
    }

    pub fn beta(&self) -> &DivisorClass {
        &self.f.degree
    }

    pub fn graded_dim_s(&self, gamma: &DivisorClass) -> usize {
        self.ring.graded_dim(gamma)
    }

    /// Sparse rows of the coordinatization of span{z^a g : class(a) = gamma -
    /// deg g} inside S_gamma; `index` maps basis monomials of S_gamma to
    /// columns.
    fn span_rows(
        &self,
        gens: &[GradedPolynomial],
        gamma: &DivisorClass,
        index: &BTreeMap<MonomialExponent, usize>,
    ) -> Vec<SparseRow> {
        let mut rows = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let shift = self.ring.group().sub(gamma, &g.degree);
            for a in self.ring.monomial_basis_rc(&shift).iter() {
                let mut row: SparseRow = g
                    .terms
                    .iter()
                    .map(|(e, c)| {
                        let prod: MonomialExponent =
                            a.iter().zip(e).map(|(x, y)| x + y).collect();
                        let j = *index
                            .get(&prod)
                            .expect("graded product left the expected graded piece");
                        (j, c.clone())
                    })
                    .collect();
                row.sort_by_key(|(j, _)| *j);
                rows.push(row);
            }
        }
        rows
    }

    fn basis_index(&self, gamma: &DivisorClass) -> BTreeMap<MonomialExponent, usize> {
        self.ring
            .monomial_basis_rc(gamma)
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect()
    }

    pub fn jacobian_graded_dim(&self, gamma: &DivisorClass, variant: JacobianVariant) -> usize {
        let key = (
            gamma.clone(),
            match variant {
                JacobianVariant::J => 0u8,
                JacobianVariant::J0 => 1,
                JacobianVariant::J1 => 2,
            },
        );
        if let Some(&hit) = self.dim_cache.borrow().get(&key) {
            return hit;
        }
        let value = self.jacobian_graded_dim_uncached(gamma, variant);
        self.dim_cache.borrow_mut().insert(key, value);
        value
    }

    fn jacobian_graded_dim_uncached(&self, gamma: &DivisorClass, variant: JacobianVariant) -> usize {
        match variant {
            JacobianVariant::J | JacobianVariant::J0 => {
                let index = self.basis_index(gamma);
                if index.is_empty() {
                    return 0;
                }
                let gens = if variant == JacobianVariant::J {
                    &self.partials
                } else {
                    &self.log_partials
                };
                let mut elim = SparseEliminator::new();
                for row in self.span_rows(gens, gamma, &index) {
                    elim.insert(row);
                }
                elim.rank()
            }
            JacobianVariant::J1 => {
                // J1_gamma = preimage of J0_{gamma+beta0} under multiplication
                // by z_1...z_n; that map is injective, so
                // dim = dim S_gamma + dim J0-span - dim(image + J0-span).
                let s_dim = self.graded_dim_s(gamma);
                if s_dim == 0 {
                    return 0;
                }
                let target = self.ring.group().add(gamma, &self.beta0);
                let index = self.basis_index(&target);
                let mut elim = SparseEliminator::new();
                for row in self.span_rows(&self.log_partials, &target, &index) {
                    elim.insert(row);
                }
                let w_rank = elim.rank();
                for a in self.ring.monomial_basis_rc(gamma).iter() {
                    let shifted: MonomialExponent = a.iter().map(|x| x + 1).collect();
                    let j = *index
                        .get(&shifted)
                        .expect("z_1...z_n times S_gamma left S_{gamma+beta0}");
                    elim.insert(vec![(j, BigRational::one())]);
                }
                s_dim + w_rank - elim.rank()
            }
        }
    }

    pub fn dim_r(&self, gamma: &DivisorClass) -> usize {
        self.graded_dim_s(gamma) - self.jacobian_graded_dim(gamma, JacobianVariant::J)
    }

    pub fn dim_r0(&self, gamma: &DivisorClass) -> usize {
        self.graded_dim_s(gamma) - self.jacobian_graded_dim(gamma, JacobianVariant::J0)
    }

    pub fn dim_r1(&self, gamma: &DivisorClass) -> usize {
        self.graded_dim_s(gamma) - self.jacobian_graded_dim(gamma, JacobianVariant::J1)
    }

    /// f always lies in its own Jacobian ideal; a failure here is a bug.
    pub fn f_in_jacobian_check(&self) -> bool {
        let beta = self.f.degree.clone();
        let index = self.basis_index(&beta);
        let mut elim = SparseEliminator::new();
        for row in self.span_rows(&self.partials, &beta, &index) {
            elim.insert(row);
        }
        let mut f_row: SparseRow = self
            .f
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    *index.get(e).expect("f term outside its graded piece"),
                    c.clone(),
                )
            })
            .collect();
        f_row.sort_by_key(|(j, _)| *j);
        !elim.insert(f_row)
    }

    /// Quasi-smoothness: for every max cone sigma the common vanishing of the
    /// partials is contained in the vanishing of the complementary monomial.
    pub fn quasi_smooth(&self, budget: u64) -> Result<QuasiSmoothCertificate, HodgeError> {
        let n = self.ring.n_vars();
        let partials: Vec<MultiPoly> = self
            .partials
            .iter()
            .map(|p| to_multipoly(p, n))
            .collect();
        let mut cones = Vec::new();
        let mut all_ok = true;
        for sigma in self.ring.fan().max_cones() {
            let exps = self.ring.fan().complement_monomial(sigma);
            let mut zhat = MultiPoly::zero(n);
            zhat.add_term(Mono(exps), BigRational::one());
            let ok = radical_membership(&zhat, &partials, budget).map_err(|e| {
                HodgeError::Budget {
                    context: format!("quasi-smoothness on cone {:?}", sigma),
                    source: e,
                }
            })?;
            all_ok &= ok;
            cones.push(ConeCertificate {
                cone: sigma.clone(),
                singular_locus_inside: ok,
            });
        }
        Ok(QuasiSmoothCertificate {
            quasi_smooth: all_ok,
            cones,
        })
    }

    /// Nondegeneracy as regularity with respect to the support polytope of the
    /// ample divisor b: every face restriction of f, written in torus
    /// coordinates, has no critical point on the torus.
    pub fn nondegenerate(
        &self,
        b: &[BigInt],
        budget: u64,
    ) -> Result<NondegenerateCertificate, HodgeError> {
        let fan = self.ring.fan();
        let d = fan.dim();
        if !is_ample(fan, b) {
            return Err(HodgeError::NotAmple);
        }
        if self.ring.group().class_of(b) != self.f.degree {
            return Err(HodgeError::DegreeMismatch);
        }
        let polytope = support_polytope(fan, b);
        let mut point_of: BTreeMap<MonomialExponent, Vec<BigInt>> = BTreeMap::new();
        for m in &polytope.lattice_points {
            let a: MonomialExponent = polytope
                .exponents_of(fan, m)
                .iter()
                .map(|x| x.to_u32().expect("polytope exponent out of range"))
                .collect();
            point_of.insert(a, m.clone());
        }
        let faces = polytope_faces(fan, b).map_err(|_| HodgeError::NotAmple)?;
        let mut certs = Vec::new();
        let mut all_ok = true;
        for face in &faces {
            let face_points: BTreeSet<&Vec<BigInt>> = face.lattice_points.iter().collect();
            let supported: Vec<(&Vec<BigInt>, &BigRational)> = self
                .f
                .terms
                .iter()
                .filter_map(|(a, c)| {
                    let m = point_of
                        .get(a)
                        .expect("term of f outside the support polytope");
                    face_points.contains(m).then_some((m, c))
                })
                .collect();
            let ok = if supported.is_empty() {
                false
            } else {
                let mins: Vec<BigInt> = (0..d)
                    .map(|j| supported.iter().map(|(m, _)| m[j].clone()).min().unwrap())
                    .collect();
                let mut g = MultiPoly::zero(d + 1);
                for (m, c) in &supported {
                    let mut e: Vec<u32> = (0..d)
                        .map(|j| (&m[j] - &mins[j]).to_u32().expect("translated exponent"))
                        .collect();
                    e.push(0);
                    g.add_term(Mono(e), (*c).clone());
                }
                let mut gens = vec![g.clone()];
                for j in 0..d {
                    let mut lg = MultiPoly::zero(d + 1);
                    for (m, c) in &g.terms {
                        if m.0[j] > 0 {
                            lg.add_term(
                                m.clone(),
                                c * BigRational::from_integer(BigInt::from(m.0[j])),
                            );
                        }
                    }
                    gens.push(lg);
                }
                let mut rab = MultiPoly::one(d + 1);
                let mut torus = vec![1u32; d];
                torus.push(1);
                rab.add_term(Mono(torus), -BigRational::one());
                gens.push(rab);
                ideal_contains_one(&gens, budget).map_err(|e| HodgeError::Budget {
                    context: format!("nondegeneracy on face of cone {:?}", face.cone),
                    source: e,
                })?
            };
            all_ok &= ok;
            certs.push(FaceCertificate {
                cone: face.cone.clone(),
                regular: ok,
            });
        }
        Ok(NondegenerateCertificate {
            nondegenerate: all_ok,
            faces: certs,
        })
    }

    fn shifted_class(&self, k: i64, subtract_beta0: bool) -> DivisorClass {
        let g = self.ring.group();
        let scaled = g.scale(&BigInt::from(k), &self.f.degree);
        if subtract_beta0 {
            g.sub(&scaled, &self.beta0)
        } else {
            scaled
        }
    }

    /// dim Gr_F^p of the middle cohomology of the hypersurface complement.
    pub fn gr_hodge_complement(&self, p: usize, pre: &Preconditions) -> Result<usize, HodgeError> {
        if !pre.ample {
            return Err(HodgeError::NotAmple);
        }
        if !pre.quasi_smooth {
            return Err(HodgeError::NotQuasiSmooth);
        }
        let d = self.ring.fan().dim();
        if p > d {
            return Ok(0);
        }
        let gamma = self.shifted_class((d - p + 1) as i64, true);
        Ok(self.dim_r(&gamma))
    }

    /// dim PH^{p, d-1-p} of the hypersurface, with the middle-degree
    /// correction by the ambient Betti defect.
    pub fn primitive_hodge(&self, p: usize, pre: &Preconditions) -> Result<usize, HodgeError> {
        if !pre.ample {
            return Err(HodgeError::NotAmple);
        }
        if !pre.quasi_smooth {
            return Err(HodgeError::NotQuasiSmooth);
        }
        let d = self.ring.fan().dim();
        if p >= d {
            return Ok(0);
        }
        let gamma = self.shifted_class((d - p) as i64, true);
        let raw = self.dim_r(&gamma);
        if d.is_multiple_of(2) && p + 1 == d / 2 {
            let betti = betti_numbers(self.ring.fan());
            let defect = (betti[d] - betti[d - 2]) as usize;
            if raw < defect {
                return Err(HodgeError::NegativeDimension(p));
            }
            Ok(raw - defect)
        } else {
            Ok(raw)
        }
    }

    /// Same dimension via the colon ideal J1; exact in every degree, no
    /// correction term.
    pub fn primitive_hodge_via_r1(
        &self,
        p: usize,
        pre: &Preconditions,
    ) -> Result<usize, HodgeError> {
        if !pre.nondegenerate {
            return Err(HodgeError::NotNondegenerate);
        }
        let d = self.ring.fan().dim();
        if p >= d {
            return Ok(0);
        }
        let gamma = self.shifted_class((d - p) as i64, true);
        Ok(self.dim_r1(&gamma))
    }

    /// dim Gr_F^p of the middle cohomology of the affine hypersurface.
    pub fn affine_hodge_gr(&self, p: usize, pre: &Preconditions) -> Result<usize, HodgeError> {
        if !pre.nondegenerate {
            return Err(HodgeError::NotNondegenerate);
        }
        let d = self.ring.fan().dim();
        if p > d {
            return Ok(0);
        }
        let gamma = self.shifted_class((d - p) as i64, false);
        Ok(self.dim_r0(&gamma))
    }

    /// Tangent dimension of the moduli of hypersurfaces in this class.
    pub fn moduli_tangent_dim(&self, pre: &Preconditions) -> Result<usize, HodgeError> {
        if !pre.ample {
            return Err(HodgeError::NotAmple);
        }
        if !pre.quasi_smooth {
            return Err(HodgeError::NotQuasiSmooth);
        }
        Ok(self.dim_r(&self.f.degree.clone()))
    }
}

/// Betti numbers b_0..b_{2d} from the cone-counting Poincare polynomial.
pub fn betti_numbers(fan: &Fan) -> Vec<i64> {
    let d = fan.dim();
    // coefficients of sum over cones of (t^2 - 1)^(d - dim sigma), in t
    let mut poly = vec![0i64; 2 * d + 1];
    for cone in fan.all_cones() {
        let k = d - cone.len();
        // binomial expansion of (t^2 - 1)^k
        let mut c = 1i64;
        for j in 0..=k {
            // coefficient of t^(2(k-j)) is (-1)^j * C(k, j)
            let sign = if j % 2 == 0 { 1 } else { -1 };
            poly[2 * (k - j)] += sign * c;
            c = c * (k as i64 - j as i64) / (j as i64 + 1);
        }
    }
    assert!(poly.iter().all(|&x| x >= 0), "negative Betti number");
    assert_eq!(poly[0], 1);
    assert_eq!(poly[2 * d], 1);
    poly
}

/// dim Aut(P) = sum_i (dim S_{beta_i} - 1) + d.
pub fn aut_dimension(ring: &CoxRing) -> usize {
    let d = ring.fan().dim();
    (0..ring.n_vars())
        .map(|i| ring.graded_dim(ring.ray_degree(i)) - 1)
        .sum::<usize>()
        + d
}

/// For an ample class every monomial of S_beta lies in the irrelevant ideal.
pub fn ample_basis_in_irrelevant_ideal(ring: &CoxRing, beta: &DivisorClass) -> bool {
    let complements: Vec<Vec<u32>> = ring
        .fan()
        .max_cones()
        .iter()
        .map(|c| ring.fan().complement_monomial(c))
        .collect();
    ring.monomial_basis(beta).iter().all(|a| {
        complements
            .iter()
            .any(|z| z.iter().zip(a).all(|(x, y)| x <= y))
    })
}

/// Full per-hypersurface report consumed by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct HodgeReport {
    pub ambient_dim: usize,
    pub ample: bool,
    pub cartier: bool,
    pub quasi_smooth: Option<bool>,
    pub nondegenerate: Option<bool>,
    pub checks_skipped: bool,
    pub betti: Vec<i64>,
    pub gr_complement: Vec<usize>,
    pub primitive: Vec<usize>,
    pub primitive_via_r1: Option<Vec<usize>>,
    pub affine_gr: Option<Vec<usize>>,
    pub moduli_tangent: usize,
    pub aut_dimension: usize,
}

impl HodgeReport {
    pub fn compute(
        jd: &JacobianData,
        b: &[BigInt],
        budget: u64,
        skip_checks: bool,
    ) -> Result<HodgeReport, HodgeError> {
        let fan = jd.ring().fan();
        let d = fan.dim();
        let ample = is_ample(fan, b);
        let cartier = is_cartier(fan, b);
        if jd.ring().group().class_of(b) != jd.f().degree {
            return Err(HodgeError::DegreeMismatch);
        }
        let (pre, qs, nd) = if skip_checks {
            (Preconditions::assume_all(), None, None)
        } else {
            if !ample {
                return Err(HodgeError::NotAmple);
            }
            let qs = jd.quasi_smooth(budget)?;
            if !qs.quasi_smooth {
                return Err(HodgeError::NotQuasiSmooth);
            }
            let nd = jd.nondegenerate(b, budget)?;
            let pre = Preconditions {
                ample: true,
                quasi_smooth: true,
                nondegenerate: nd.nondegenerate,
            };
            (pre, Some(qs.quasi_smooth), Some(nd.nondegenerate))
        };
        let gr_complement = (0..=d)
            .map(|p| jd.gr_hodge_complement(p, &pre))
            .collect::<Result<_, _>>()?;
        let primitive = (0..d)
            .map(|p| jd.primitive_hodge(p, &pre))
            .collect::<Result<_, _>>()?;
        let (primitive_via_r1, affine_gr) = if pre.nondegenerate {
            let r1 = (0..d)
                .map(|p| jd.primitive_hodge_via_r1(p, &pre))
                .collect::<Result<_, _>>()?;
            let aff = (0..=d)
                .map(|p| jd.affine_hodge_gr(p, &pre))
                .collect::<Result<_, _>>()?;
            (Some(r1), Some(aff))
        } else {
            (None, None)
        };
        Ok(HodgeReport {
            ambient_dim: d,
            ample,
            cartier,
            quasi_smooth: qs,
            nondegenerate: nd,
            checks_skipped: skip_checks,
            betti: betti_numbers(fan),
            gr_complement,
            primitive,
            primitive_via_r1,
            affine_gr,
            moduli_tangent: jd.moduli_tangent_dim(&pre)?,
            aut_dimension: aut_dimension(jd.ring()),
        })
    }
}
