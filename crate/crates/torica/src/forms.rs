//! Symbolic exterior-form calculus over the Cox ring: the distinguished
//! forms Omega_0, Omega_i, Omega_ij in the dz basis and their M-form
//! representations, the membership criterion for the Zariski-form module,
//! the face residue map, and the residue-differential identity.

use crate::coxring::{CoxRing, GradedPolynomial, MonomialExponent};
use crate::divisor::support_polytope;
use crate::fan::Fan;
use crate::matrix::Matrix;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormsError {
    #[error("conversion requires dividing by variable {0}")]
    DivisionByVariable(usize),
    #[error("rays {0} and {1} are not opposite")]
    NotOpposite(usize, usize),
}

/// Sorts an index list, returning the permutation sign; None if an index
/// repeats (the wedge vanishes).
fn normalize_indices(mut idx: Vec<usize>) -> Option<(Vec<usize>, i32)> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, sign))
}

fn det_cols(d: usize, cols: &[&[BigInt]]) -> BigRational {
    assert_eq!(cols.len(), d);
    Matrix::from_fn(d, d, |r, c| BigRational::from_integer(cols[c][r].clone())).det()
}

/// Polynomial-coefficient form in the dz_I basis: terms (monomial, I) with I
/// a strictly increasing subset of the variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorForm {
    pub n: usize,
    pub p: usize,
    pub terms: BTreeMap<(MonomialExponent, Vec<usize>), BigRational>,
}

impl ExteriorForm {
    pub fn new(n: usize, p: usize) -> Self {
        ExteriorForm {
            n,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: MonomialExponent, indices: Vec<usize>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        assert_eq!(indices.len(), self.p);
        let Some((idx, sign)) = normalize_indices(indices) else {
            return;
        };
        let c = if sign < 0 { -coeff } else { coeff };
        match self.terms.entry((exps, idx)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ExteriorForm) -> ExteriorForm {
        assert_eq!((self.n, self.p), (other.n, other.p));
        let mut out = self.clone();
        for ((e, i), c) in &other.terms {
            out.add_term(e.clone(), i.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ExteriorForm) -> ExteriorForm {
        assert_eq!((self.n, self.p), (other.n, other.p));
        let mut out = self.clone();
        for ((e, i), c) in &other.terms {
            out.add_term(e.clone(), i.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> ExteriorForm {
        let mut out = ExteriorForm::new(self.n, self.p);
        for ((e, i), c) in &self.terms {
            out.add_term(e.clone(), i.clone(), c * k);
        }
        out
    }

    pub fn wedge(&self, other: &ExteriorForm) -> ExteriorForm {
        assert_eq!(self.n, other.n);
        let mut out = ExteriorForm::new(self.n, self.p + other.p);
        for ((ea, ia), ca) in &self.terms {
            for ((eb, ib), cb) in &other.terms {
                let e: MonomialExponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let idx: Vec<usize> = ia.iter().chain(ib).copied().collect();
                out.add_term(e, idx, ca * cb);
            }
        }
        out
    }

    pub fn mul_poly(&self, f: &GradedPolynomial) -> ExteriorForm {
        let mut out = ExteriorForm::new(self.n, self.p);
        for ((ea, ia), ca) in &self.terms {
            for (eb, cb) in &f.terms {
                let e: MonomialExponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ia.clone(), ca * cb);
            }
        }
        out
    }

    /// Formal exterior derivative.
    pub fn exterior_derivative(&self) -> ExteriorForm {
        let mut out = ExteriorForm::new(self.n, self.p + 1);
        for ((e, idx), c) in &self.terms {
            for i in 0..self.n {
                if e[i] == 0 {
                    continue;
                }
                let mut de = e.clone();
                de[i] -= 1;
                let mut di = vec![i];
                di.extend_from_slice(idx);
                out.add_term(de, di, c * BigRational::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }
}

fn complement_exponents(n: usize, inside: &[usize]) -> MonomialExponent {
    let mut e = vec![1u32; n];
    for &i in inside {
        e[i] = 0;
    }
    e
}

/// Omega_0 = sum over |I| = d of det(e_I) zhat_I dz_I.
pub fn omega0(fan: &Fan) -> ExteriorForm {
    let d = fan.dim();
    let n = fan.n_rays();
    let mut out = ExteriorForm::new(n, d);
    for combo in (0..n).combinations(d) {
        let cols: Vec<&[BigInt]> = combo.iter().map(|&i| fan.ray(i)).collect();
        let det = det_cols(d, &cols);
        if det.is_zero() {
            continue;
        }
        out.add_term(complement_exponents(n, &combo), combo, det);
    }
    out
}

/// Omega_i = sum over |J| = d-1, i not in J, of det(e_{J+i}) zhat_{J+i} dz_J
/// with e_i as the first determinant column.
pub fn omega_i(fan: &Fan, i: usize) -> ExteriorForm {
    let d = fan.dim();
    let n = fan.n_rays();
    let mut out = ExteriorForm::new(n, d - 1);
    for combo in (0..n).filter(|&j| j != i).combinations(d - 1) {
        let mut cols: Vec<&[BigInt]> = vec![fan.ray(i)];
        cols.extend(combo.iter().map(|&j| fan.ray(j)));
        let det = det_cols(d, &cols);
        if det.is_zero() {
            continue;
        }
        let mut inside = combo.clone();
        inside.push(i);
        out.add_term(complement_exponents(n, &inside), combo, det);
    }
    out
}

/// Omega_ij for opposite rays e_i = -e_j: the common factor of Omega_i and
/// -Omega_j with both variables removed.
pub fn omega_ij(fan: &Fan, i: usize, j: usize) -> Result<ExteriorForm, FormsError> {
    let neg: Vec<BigInt> = fan.ray(j).iter().map(|x| -x).collect();
    if fan.ray(i) != &neg[..] {
        return Err(FormsError::NotOpposite(i, j));
    }
    let d = fan.dim();
    let n = fan.n_rays();
    let mut out = ExteriorForm::new(n, d - 1);
    for combo in (0..n).filter(|&l| l != i && l != j).combinations(d - 1) {
        let mut cols: Vec<&[BigInt]> = vec![fan.ray(i)];
        cols.extend(combo.iter().map(|&l| fan.ray(l)));
        let det = det_cols(d, &cols);
        if det.is_zero() {
            continue;
        }
        let mut inside = combo.clone();
        inside.push(i);
        inside.push(j);
        out.add_term(complement_exponents(n, &inside), combo, det);
    }
    Ok(out)
}

/// Pairs (i, j), i < j, of opposite rays.
pub fn opposite_ray_pairs(fan: &Fan) -> Vec<(usize, usize)> {
    let n = fan.n_rays();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let neg: Vec<BigInt> = fan.ray(j).iter().map(|x| -x).collect();
            if fan.ray(i) == &neg[..] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Polynomial-coefficient form over the exterior algebra of M with the
/// standard basis m_1..m_d; index sets are subsets of 0..d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MForm {
    pub n: usize,
    pub d: usize,
    pub p: usize,
    pub terms: BTreeMap<(MonomialExponent, Vec<usize>), BigRational>,
}

impl MForm {
    pub fn new(n: usize, d: usize, p: usize) -> Self {
        MForm {
            n,
            d,
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exps: MonomialExponent, indices: Vec<usize>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        assert_eq!(indices.len(), self.p);
        let Some((idx, sign)) = normalize_indices(indices) else {
            return;
        };
        let c = if sign < 0 { -coeff } else { coeff };
        match self.terms.entry((exps, idx)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

/// Omega_0 in the M-form representation: z_1...z_n m_1^...^m_d.
pub fn omega0_mform(fan: &Fan) -> MForm {
    let d = fan.dim();
    let n = fan.n_rays();
    let mut out = MForm::new(n, d, d);
    out.add_term(vec![1; n], (0..d).collect(), BigRational::one());
    out
}

/// omega_j = (-1)^{j} m_0^...^m_{j-1}^m_{j+1}^...^m_{d-1} (0-based), the
/// sign convention that makes interior products diagonal.
fn omega_j_indices(d: usize, j: usize) -> (Vec<usize>, i32) {
    let idx: Vec<usize> = (0..d).filter(|&k| k != j).collect();
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    (idx, sign)
}

/// Omega_i as an M-form: sum_j <m_j, e_i> zhat_i omega_j.
pub fn omega_i_mform(fan: &Fan, i: usize) -> MForm {
    let d = fan.dim();
    let n = fan.n_rays();
    let mut out = MForm::new(n, d, d - 1);
    let mut zhat = vec![1u32; n];
    zhat[i] = 0;
    for j in 0..d {
        let (idx, sign) = omega_j_indices(d, j);
        let c = BigRational::from_integer(fan.ray(i)[j].clone() * BigInt::from(sign));
        out.add_term(zhat.clone(), idx, c);
    }
    out
}

/// Omega_ij as an M-form: sum_j <m_j, e_i> zhat_ij omega_j.
pub fn omega_ij_mform(fan: &Fan, i: usize, j2: usize) -> Result<MForm, FormsError> {
    let neg: Vec<BigInt> = fan.ray(j2).iter().map(|x| -x).collect();
    if fan.ray(i) != &neg[..] {
        return Err(FormsError::NotOpposite(i, j2));
    }
    let d = fan.dim();
    let n = fan.n_rays();
    let mut out = MForm::new(n, d, d - 1);
    let mut zhat = vec![1u32; n];
    zhat[i] = 0;
    zhat[j2] = 0;
    for j in 0..d {
        let (idx, sign) = omega_j_indices(d, j);
        let c = BigRational::from_integer(fan.ray(i)[j].clone() * BigInt::from(sign));
        out.add_term(zhat.clone(), idx, c);
    }
    Ok(out)
}

/// Membership in the module of Zariski p-forms: for every variable, the
/// interior product with the corresponding ray must vanish modulo that
/// variable. Works termwise in the Z^n grading.
pub fn module_membership(fan: &Fan, omega: &MForm) -> bool {
    let n = fan.n_rays();
    for i in 0..n {
        // contraction <e_i, omega>, collected per (monomial, index set)
        let mut contracted: BTreeMap<(MonomialExponent, Vec<usize>), BigRational> =
            BTreeMap::new();
        for ((e, idx), c) in &omega.terms {
            for (t, &k) in idx.iter().enumerate() {
                let sign = if t % 2 == 0 { 1 } else { -1 };
                let coeff = c
                    * BigRational::from_integer(fan.ray(i)[k].clone() * BigInt::from(sign));
                if coeff.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter_map(|(s, &v)| (s != t).then_some(v))
                    .collect();
                let entry = contracted
                    .entry((e.clone(), rest))
                    .or_insert_with(BigRational::zero);
                *entry += coeff;
            }
        }
        for ((e, _), c) in &contracted {
            if !c.is_zero() && e[i] == 0 {
                return false;
            }
        }
    }
    true
}

/// Expands an M-form into the dz basis. The intermediate expansion divides
/// by the variables of each index set; the result must land back in the
/// polynomial ring or the conversion fails.
pub fn mform_to_dz(fan: &Fan, omega: &MForm) -> Result<ExteriorForm, FormsError> {
    let d = fan.dim();
    let n = fan.n_rays();
    // accumulate with integer (possibly negative) exponents
    let mut laurent: BTreeMap<(Vec<i64>, Vec<usize>), BigRational> = BTreeMap::new();
    for ((e, kset), c) in &omega.terms {
        for combo in (0..n).combinations(omega.p) {
            // minor of the pairing matrix: rows from kset, columns the rays
            let det = Matrix::from_fn(omega.p, omega.p, |r, s| {
                BigRational::from_integer(fan.ray(combo[s])[kset[r]].clone())
            })
            .det();
            if det.is_zero() {
                continue;
            }
            let mut exps: Vec<i64> = e.iter().map(|&x| x as i64).collect();
            for &l in &combo {
                exps[l] -= 1;
            }
            let entry = laurent
                .entry((exps, combo))
                .or_insert_with(BigRational::zero);
            *entry += c * det;
        }
    }
    let mut out = ExteriorForm::new(n, omega.p);
    let _ = d;
    for ((exps, idx), c) in laurent {
        if c.is_zero() {
            continue;
        }
        let mut clean = Vec::with_capacity(n);
        for (i, &x) in exps.iter().enumerate() {
            if x < 0 {
                return Err(FormsError::DivisionByVariable(i));
            }
            clean.push(x as u32);
        }
        out.add_term(clean, idx, c);
    }
    Ok(out)
}

/// Constant coefficient k-form over M, the omega-prime factor of a split log
/// form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantKForm {
    pub d: usize,
    pub k: usize,
    pub terms: BTreeMap<Vec<usize>, BigRational>,
}

impl ConstantKForm {
    pub fn new(d: usize, k: usize) -> Self {
        ConstantKForm {
            d,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, indices: Vec<usize>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        assert_eq!(indices.len(), self.k);
        let Some((idx, sign)) = normalize_indices(indices) else {
            return;
        };
        let c = if sign < 0 { -coeff } else { coeff };
        let entry = self.terms.entry(idx).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            let key: Vec<Vec<usize>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    /// Evaluation on a tuple of lattice vectors: the alternating pairing.
    pub fn evaluate(&self, vectors: &[&[BigInt]]) -> BigRational {
        assert_eq!(vectors.len(), self.k);
        let mut total = BigRational::zero();
        for (idx, c) in &self.terms {
            let det = Matrix::from_fn(self.k, self.k, |r, s| {
                BigRational::from_integer(vectors[s][idx[r]].clone())
            })
            .det();
            total += c * det;
        }
        total
    }
}

/// Residue of the split log form omega_m ^ omega' along the cone tau: zero
/// when m lies outside the face of the support polytope cut out by tau,
/// otherwise the evaluation of omega' on the cone generators (the scalar
/// multiplying omega_m).
pub fn residue_map(
    fan: &Fan,
    b: &[BigInt],
    tau: &[usize],
    m: &[BigInt],
    omega_prime: &ConstantKForm,
) -> BigRational {
    assert_eq!(omega_prime.k, tau.len());
    let polytope = support_polytope(fan, b);
    if !polytope.contains_lattice_point(m) {
        return BigRational::zero();
    }
    for &i in tau {
        let pairing: BigInt = m
            .iter()
            .zip(fan.ray(i))
            .map(|(x, y)| x * y)
            .sum();
        if pairing != -&b[i] {
            return BigRational::zero();
        }
    }
    let vectors: Vec<&[BigInt]> = tau.iter().map(|&i| fan.ray(i)).collect();
    omega_prime.evaluate(&vectors)
}

/// Verifies f dA^Omega_i + f A dOmega_i - k A df^Omega_i
///   = (f dA/dz_i - k A df/dz_i) Omega_0 as an exact identity of d-forms.
pub fn residue_differential_identity_check(
    ring: &CoxRing,
    f: &GradedPolynomial,
    a: &GradedPolynomial,
    i: usize,
    k: i64,
) -> bool {
    let fan = ring.fan();
    let om_i = omega_i(fan, i);
    let om_0 = omega0(fan);
    let kq = BigRational::from_integer(BigInt::from(k));

    let da = poly_differential(ring, a);
    let df = poly_differential(ring, f);
    let lhs = da
        .wedge(&om_i)
        .mul_poly(f)
        .add(&om_i.exterior_derivative().mul_poly(a).mul_poly(f))
        .sub(&df.wedge(&om_i).mul_poly(a).scale(&kq));

    let da_i = ring.partial_derivative(a, i);
    let df_i = ring.partial_derivative(f, i);
    let b = ring
        .multiply(f, &da_i)
        .sub(&ring.multiply(a, &df_i).scale(&kq));
    let rhs = om_0.mul_poly(&b);
    lhs == rhs
}

/// The 1-form dg of a polynomial.
pub fn poly_differential(ring: &CoxRing, g: &GradedPolynomial) -> ExteriorForm {
    let n = ring.n_vars();
    let mut out = ExteriorForm::new(n, 1);
    for i in 0..n {
        let gi = ring.partial_derivative(g, i);
        for (e, c) in &gi.terms {
            out.add_term(e.clone(), vec![i], c.clone());
        }
    }
    out
}

/// Dimension of the degree-beta piece of the Zariski (d-1)-form module,
/// enumerated monomial by monomial from the membership criterion.
pub fn module_piece_dimension(ring: &CoxRing, beta: &crate::lattice::DivisorClass) -> usize {
    let fan = ring.fan();
    let d = fan.dim();
    let mut total = 0;
    for a in ring.monomial_basis(beta) {
        // constraints on c_0..c_{d-1}: for each variable i with exponent 0
        // and each pair j < k: <m_k,e_i> c_j - <m_j,e_i> c_k = 0
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (i, _) in a.iter().enumerate().filter(|(_, &e)| e == 0) {
            for j in 0..d {
                for k in j + 1..d {
                    let mut row = vec![BigRational::zero(); d];
                    row[j] = BigRational::from_integer(fan.ray(i)[k].clone());
                    row[k] = -BigRational::from_integer(fan.ray(i)[j].clone());
                    rows.push(row);
                }
            }
        }
        let rank = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(rows).rank()
        };
        total += d - rank;
    }
    total
}

/// Dimension of the span of {A Omega_i : A in S_{beta - beta0 + beta_i}} in
/// the M-form coordinates, for comparison with `module_piece_dimension`.
pub fn generator_span_dimension(ring: &CoxRing, beta: &crate::lattice::DivisorClass) -> usize {
    let fan = ring.fan();
    let d = fan.dim();
    let group = ring.group();
    let beta0 = ring.beta0();
    let mut columns: BTreeMap<(MonomialExponent, Vec<usize>), usize> = BTreeMap::new();
    let mut rows: Vec<BTreeMap<usize, BigRational>> = Vec::new();
    for i in 0..fan.n_rays() {
        let omega = omega_i_mform(fan, i);
        let cls = group.sub(beta, &group.sub(&beta0, ring.ray_degree(i)));
        for a in ring.monomial_basis(&cls) {
            let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
            for ((e, idx), c) in &omega.terms {
                let prod: MonomialExponent = a.iter().zip(e).map(|(x, y)| x + y).collect();
                let next = columns.len();
                let col = *columns.entry((prod, idx.clone())).or_insert(next);
                let entry = row.entry(col).or_insert_with(BigRational::zero);
                *entry += c;
            }
            rows.push(row);
        }
    }
    let ncols = columns.len();
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    let dense: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); ncols];
            for (j, c) in r {
                v[j] = c;
            }
            v
        })
        .collect();
    let _ = d;
    Matrix::from_rows(dense).rank()
}
