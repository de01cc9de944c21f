//! The Cl-graded polynomial ring S with one variable per ray: monomial bases
//! of graded pieces via lattice points of the support polytope, formal
//! derivatives, Euler relations, and the polynomial JSON format.

use crate::divisor::support_polytope;
use crate::fan::Fan;
use crate::lattice::{kernel_basis_rational, ClassGroup, DivisorClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use thiserror::Error;

pub type MonomialExponent = Vec<u32>;

#[derive(Debug, Error)]
pub enum CoxError {
    #[error("graded piece is empty")]
    EmptyDegree,
    #[error("terms of mixed degree: {0}")]
    MixedDegrees(String),
    #[error("euler vector is not a ray relation")]
    InconsistentRelation,
    #[error("malformed polynomial json: {0}")]
    Json(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// Fan together with its class group and cached ray degrees; the ambient
/// context for all graded computations.
#[derive(Clone, Debug)]
pub struct CoxRing {
    fan: Fan,
    group: ClassGroup,
    ray_degrees: Vec<DivisorClass>,
    basis_cache: RefCell<BTreeMap<DivisorClass, Rc<Vec<MonomialExponent>>>>,
}

/// Homogeneous polynomial of a fixed divisor class, sparse over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolynomial {
    pub degree: DivisorClass,
    pub terms: BTreeMap<MonomialExponent, BigRational>,
}

/// Rational vector phi with sum(phi_i e_i) = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerVector {
    pub phi: Vec<BigRational>,
}

impl GradedPolynomial {
    pub fn zero(degree: DivisorClass) -> Self {
        GradedPolynomial {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exponents: MonomialExponent, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key: Vec<MonomialExponent> = self
                .terms
                .iter()
                .filter(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return GradedPolynomial::zero(self.degree.clone());
        }
        GradedPolynomial {
            degree: self.degree.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &GradedPolynomial) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }
}

pub fn exponents_to_bigint(a: &[u32]) -> Vec<BigInt> {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

impl CoxRing {
    pub fn new(fan: Fan) -> Result<CoxRing, crate::fan::FanError> {
        fan.ensure_valid()?;
        let group = ClassGroup::from_alpha(&fan.alpha_matrix())
            .expect("valid complete fan has full-rank alpha");
        let ray_degrees = (0..fan.n_rays()).map(|i| group.ray_degree(i)).collect();
        Ok(CoxRing {
            fan,
            group,
            ray_degrees,
            basis_cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn n_vars(&self) -> usize {
        self.fan.n_rays()
    }

    pub fn ray_degree(&self, i: usize) -> &DivisorClass {
        &self.ray_degrees[i]
    }

    /// The anticanonical class beta_0 = sum(beta_i).
    pub fn beta0(&self) -> DivisorClass {
        self.group.anticanonical()
    }

    pub fn class_of_exponents(&self, a: &[u32]) -> DivisorClass {
        self.group.class_of(&exponents_to_bigint(a))
    }

    /// Monomial basis of S_beta via lattice points of the support polytope of
    /// a canonical representative divisor. Sorted lexicographically.
    pub fn monomial_basis(&self, beta: &DivisorClass) -> Vec<MonomialExponent> {
        self.monomial_basis_rc(beta).as_ref().clone()
    }

    /// Shared cached handle to the monomial basis; the enumeration is the
    /// expensive step, so bases are memoized per class.
    pub fn monomial_basis_rc(&self, beta: &DivisorClass) -> Rc<Vec<MonomialExponent>> {
        if let Some(hit) = self.basis_cache.borrow().get(beta) {
            return Rc::clone(hit);
        }
        let computed = Rc::new(self.compute_monomial_basis(beta));
        self.basis_cache
            .borrow_mut()
            .insert(beta.clone(), Rc::clone(&computed));
        computed
    }

    fn compute_monomial_basis(&self, beta: &DivisorClass) -> Vec<MonomialExponent> {
        let b = self.group.representative(beta);
        let polytope = support_polytope(&self.fan, &b);
        let mut out: Vec<MonomialExponent> = polytope
            .lattice_points
            .iter()
            .map(|m| {
                polytope
                    .exponents_of(&self.fan, m)
                    .iter()
                    .map(|x| {
                        assert!(
                            !x.is_negative(),
                            "lattice point produced a negative exponent"
                        );
                        x.to_u32().expect("exponent exceeds u32")
                    })
                    .collect()
            })
            .collect();
        out.sort();
        out
    }

    pub fn graded_dim(&self, beta: &DivisorClass) -> usize {
        self.monomial_basis_rc(beta).len()
    }

    /// Formal partial derivative; degree drops by beta_i.
    pub fn partial_derivative(&self, f: &GradedPolynomial, i: usize) -> GradedPolynomial {
        let degree = self.group.sub(&f.degree, &self.ray_degrees[i]);
        let mut out = GradedPolynomial::zero(degree);
        for (a, c) in &f.terms {
            if a[i] == 0 {
                continue;
            }
            let mut e = a.clone();
            e[i] -= 1;
            out.add_term(e, c * BigRational::from_integer(BigInt::from(a[i])));
        }
        out
    }

    /// z_i * df/dz_i, the log-partial; degree is preserved.
    pub fn log_partial(&self, f: &GradedPolynomial, i: usize) -> GradedPolynomial {
        let mut out = GradedPolynomial::zero(f.degree.clone());
        for (a, c) in &f.terms {
            if a[i] == 0 {
                continue;
            }
            out.add_term(a.clone(), c * BigRational::from_integer(BigInt::from(a[i])));
        }
        out
    }

    pub fn multiply(&self, f: &GradedPolynomial, g: &GradedPolynomial) -> GradedPolynomial {
        let degree = self.group.add(&f.degree, &g.degree);
        let mut out = GradedPolynomial::zero(degree);
        for (a, ca) in &f.terms {
            for (b, cb) in &g.terms {
                let e: MonomialExponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn monomial(&self, exponents: MonomialExponent) -> GradedPolynomial {
        let degree = self.class_of_exponents(&exponents);
        let mut out = GradedPolynomial::zero(degree);
        out.add_term(exponents, BigRational::one());
        out
    }

    /// Basis of the space of Euler relations; dimension n - d.
    pub fn euler_relations_basis(&self) -> Vec<EulerVector> {
        kernel_basis_rational(&self.fan.ray_column_matrix())
            .into_iter()
            .map(|phi| EulerVector { phi })
            .collect()
    }

    /// phi(beta) = sum(phi_i a_i) for any monomial of degree beta; verifies
    /// well-definedness across the whole monomial basis.
    pub fn euler_constant(
        &self,
        phi: &EulerVector,
        beta: &DivisorClass,
    ) -> Result<BigRational, CoxError> {
        let basis = self.monomial_basis(beta);
        if basis.is_empty() {
            return Err(CoxError::EmptyDegree);
        }
        let value_of = |a: &[u32]| -> BigRational {
            a.iter()
                .zip(&phi.phi)
                .map(|(&x, p)| BigRational::from_integer(BigInt::from(x)) * p)
                .sum()
        };
        let first = value_of(&basis[0]);
        for a in &basis[1..] {
            if value_of(a) != first {
                return Err(CoxError::InconsistentRelation);
            }
        }
        Ok(first)
    }

    /// Checks phi(beta) f = sum(phi_i z_i df/dz_i) symbolically.
    pub fn euler_identity_holds(
        &self,
        phi: &EulerVector,
        f: &GradedPolynomial,
    ) -> Result<bool, CoxError> {
        if f.is_zero() {
            return Ok(true);
        }
        let c = self.euler_constant(phi, &f.degree)?;
        let mut rhs = GradedPolynomial::zero(f.degree.clone());
        for i in 0..self.n_vars() {
            let lp = self.log_partial(f, i);
            for (a, coeff) in &lp.terms {
                rhs.add_term(a.clone(), coeff * &phi.phi[i]);
            }
        }
        Ok(f.scale(&c) == rhs)
    }

    /// Deterministic polynomial over the full monomial basis with small
    /// nonzero integer coefficients.
    pub fn random_polynomial(
        &self,
        beta: &DivisorClass,
        seed: u64,
    ) -> Result<GradedPolynomial, CoxError> {
        let basis = self.monomial_basis(beta);
        if basis.is_empty() {
            return Err(CoxError::EmptyDegree);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = GradedPolynomial::zero(beta.clone());
        for a in basis {
            let mut c = 0i64;
            while c == 0 {
                c = rng.gen_range(-9i64..=9);
            }
            out.add_term(a, BigRational::from_integer(BigInt::from(c)));
        }
        Ok(out)
    }

    /// Polynomial with coefficient 1 on every listed monomial.
    pub fn sum_of_monomials(&self, exps: &[Vec<u32>]) -> Result<GradedPolynomial, CoxError> {
        let first = exps
            .first()
            .ok_or(CoxError::EmptyDegree)?;
        let degree = self.class_of_exponents(first);
        let mut out = GradedPolynomial::zero(degree.clone());
        for a in exps {
            if self.class_of_exponents(a) != degree {
                return Err(CoxError::MixedDegrees(format!("{:?}", a)));
            }
            out.add_term(a.clone(), BigRational::one());
        }
        Ok(out)
    }

    pub fn polynomial_to_json(&self, f: &GradedPolynomial) -> serde_json::Value {
        let b = self.group.representative(&f.degree);
        serde_json::json!({
            "degree_divisor": b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "terms": f.terms.iter().map(|(a, c)| serde_json::json!({
                "exponents": a,
                "coeff": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parses {"degree_divisor": [b...], "terms": [{"exponents", "coeff"}]}.
    /// Rejects term lists of mixed degree.
    pub fn polynomial_from_json(&self, v: &serde_json::Value) -> Result<GradedPolynomial, CoxError> {
        let obj = v.as_object().ok_or_else(|| CoxError::Json("expected object".into()))?;
        let b_raw = obj
            .get("degree_divisor")
            .and_then(|x| x.as_array())
            .ok_or_else(|| CoxError::Json("missing degree_divisor".into()))?;
        let b: Vec<BigInt> = b_raw
            .iter()
            .map(parse_bigint)
            .collect::<Result<_, _>>()?;
        if b.len() != self.n_vars() {
            return Err(CoxError::Json(format!(
                "degree_divisor has {} entries, expected {}",
                b.len(),
                self.n_vars()
            )));
        }
        let degree = self.group.class_of(&b);
        let mut f = GradedPolynomial::zero(degree.clone());
        let terms = obj
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| CoxError::Json("missing terms".into()))?;
        for t in terms {
            let exps_raw = t
                .get("exponents")
                .and_then(|x| x.as_array())
                .ok_or_else(|| CoxError::Json("term missing exponents".into()))?;
            let exps: Vec<u32> = exps_raw
                .iter()
                .map(|x| {
                    x.as_u64()
                        .and_then(|v| u32::try_from(v).ok())
                        .ok_or_else(|| CoxError::Json("bad exponent".into()))
                })
                .collect::<Result<_, _>>()?;
            if exps.len() != self.n_vars() {
                return Err(CoxError::Json("exponent vector length mismatch".into()));
            }
            if self.class_of_exponents(&exps) != degree {
                return Err(CoxError::MixedDegrees(format!("{:?}", exps)));
            }
            let coeff_str = t
                .get("coeff")
                .and_then(|x| x.as_str())
                .ok_or_else(|| CoxError::Json("term missing coeff string".into()))?;
            let coeff = parse_rational(coeff_str)?;
            f.add_term(exps, coeff);
        }
        Ok(f)
    }
}

fn parse_bigint(v: &serde_json::Value) -> Result<BigInt, CoxError> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s
            .parse()
            .map_err(|_| CoxError::Json(format!("bad integer {s:?}")));
    }
    Err(CoxError::Json(format!("bad integer {v}")))
}

fn parse_rational(s: &str) -> Result<BigRational, CoxError> {
    let parts: Vec<&str> = s.split('/').collect();
    match parts.as_slice() {
        [p] => {
            let num: BigInt = p
                .trim()
                .parse()
                .map_err(|_| CoxError::Json(format!("bad rational {s:?}")))?;
            Ok(BigRational::from_integer(num))
        }
        [p, q] => {
            let num: BigInt = p
                .trim()
                .parse()
                .map_err(|_| CoxError::Json(format!("bad rational {s:?}")))?;
            let den: BigInt = q
                .trim()
                .parse()
                .map_err(|_| CoxError::Json(format!("bad rational {s:?}")))?;
            if den.is_zero() {
                return Err(CoxError::Json("zero denominator".into()));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(CoxError::Json(format!("bad rational {s:?}"))),
    }
}
