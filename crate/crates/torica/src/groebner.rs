//! Buchberger's algorithm over Q with the degrevlex order, used for the
//! certificate routines: ideal triviality and radical membership. All
//! reductions are budgeted so a runaway computation fails loudly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error("reduction step budget of {0} exceeded")]
    BudgetExceeded(u64),
}

/// Exponent vector ordered by degrevlex: higher total degree wins; ties break
/// on the rightmost differing exponent, smaller exponent winning.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_coprime_to(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q; the BTreeMap key order is degrevlex, so the last
/// entry is the leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub n: usize,
    pub terms: BTreeMap<Mono, BigRational>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        let mut p = MultiPoly::zero(n);
        p.add_term(Mono(vec![0; n]), BigRational::one());
        p
    }

    pub fn from_terms(n: usize, terms: &[(&[u32], i64)]) -> Self {
        let mut p = MultiPoly::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n);
            p.add_term(Mono(e.to_vec()), BigRational::from_integer(BigInt::from(*c)));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn sub_scaled_shift(&mut self, other: &MultiPoly, shift: &Mono, scale: &BigRational) {
        for (m, c) in &other.terms {
            self.add_term(m.mul(shift), -(c * scale));
        }
    }

    pub fn make_monic(&mut self) {
        if let Some((_, lc)) = self.leading() {
            let lc = lc.clone();
            if !lc.is_one() {
                for c in self.terms.values_mut() {
                    *c /= &lc;
                }
            }
        }
    }

    /// Embeds into a ring with extra trailing variables.
    pub fn extend_vars(&self, extra: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n + extra);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.extend(std::iter::repeat_n(0, extra));
            p.add_term(Mono(e), c.clone());
        }
        p
    }
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn spend(&mut self) -> Result<(), GroebnerError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(GroebnerError::BudgetExceeded(self.limit));
        }
        Ok(())
    }
}

fn reduce_full(
    f: &MultiPoly,
    basis: &[MultiPoly],
    budget: &mut Budget,
) -> Result<MultiPoly, GroebnerError> {
    let mut rem = MultiPoly::zero(f.n);
    let mut work = f.clone();
    'outer: while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
        budget.spend()?;
        for g in basis {
            if let Some((glm, glc)) = g.leading() {
                if glm.divides(&lm) {
                    let shift = lm.div(glm);
                    let scale = &lc / glc;
                    work.sub_scaled_shift(g, &shift, &scale);
                    continue 'outer;
                }
            }
        }
        work.terms.remove(&lm);
        rem.add_term(lm, lc);
    }
    Ok(rem)
}

/// Full normal form of `f` modulo `basis` with the default budget; intended
/// for use with a Groebner basis.
pub fn normal_form(
    f: &MultiPoly,
    basis: &[MultiPoly],
    budget_limit: u64,
) -> Result<MultiPoly, GroebnerError> {
    let mut budget = Budget {
        limit: budget_limit,
        used: 0,
    };
    reduce_full(f, basis, &mut budget)
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading().expect("s_poly of zero");
    let (gm, gc) = g.leading().expect("s_poly of zero");
    let l = fm.lcm(gm);
    let mut s = MultiPoly::zero(f.n);
    let one = BigRational::one();
    s.sub_scaled_shift(f, &l.div(fm), &(-&one / fc));
    s.sub_scaled_shift(g, &l.div(gm), &(&one / gc));
    s
}

/// Reduced monic Groebner basis, degrevlex, normal pair-selection strategy
/// with the coprimality and chain criteria.
pub fn buchberger(
    generators: &[MultiPoly],
    budget_limit: u64,
) -> Result<Vec<MultiPoly>, GroebnerError> {
    let n = generators
        .iter()
        .map(|g| g.n)
        .next()
        .unwrap_or(0);
    let mut budget = Budget {
        limit: budget_limit,
        used: 0,
    };
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in generators {
        if !g.is_zero() {
            let mut g = g.clone();
            g.make_monic();
            basis.push(g);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = basis[a.0].leading().unwrap().0.lcm(basis[a.1].leading().unwrap().0);
                let lb = basis[b.0].leading().unwrap().0.lcm(basis[b.1].leading().unwrap().0);
                la.cmp(&lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        let lmi = basis[i].leading().unwrap().0.clone();
        let lmj = basis[j].leading().unwrap().0.clone();
        if lmi.is_coprime_to(&lmj) {
            continue;
        }
        let l = lmi.lcm(&lmj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading().unwrap().0.divides(&l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j]);
        let mut r = reduce_full(&s, &basis, &mut budget)?;
        if !r.is_zero() {
            r.make_monic();
            let t = basis.len();
            for k in 0..t {
                pairs.push((k, t));
            }
            basis.push(r);
        }
    }
    // minimize
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && keep[i]
                && basis[j].leading().unwrap().0.divides(basis[i].leading().unwrap().0)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<MultiPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // interreduce tails
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _g)| j != i).map(|(_j, g)| g.clone())
            .collect();
        let mut r = reduce_full(&minimal[i], &others, &mut budget)?;
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let _ = n;
    Ok(reduced)
}

/// Whether the ideal generated by `generators` is the whole ring.
pub fn ideal_contains_one(
    generators: &[MultiPoly],
    budget_limit: u64,
) -> Result<bool, GroebnerError> {
    let gb = buchberger(generators, budget_limit)?;
    Ok(gb.len() == 1 && gb[0].leading().map(|(m, _)| m.total_degree()) == Some(0))
}

/// Whether `g` lies in the radical of the ideal generated by `generators`,
/// via an auxiliary variable y and the relation 1 - y*g.
pub fn radical_membership(
    g: &MultiPoly,
    generators: &[MultiPoly],
    budget_limit: u64,
) -> Result<bool, GroebnerError> {
    if g.is_zero() {
        // 0 is in every radical iff the ideal contains a nilpotent of 0: always
        return Ok(true);
    }
    let n = g.n;
    let mut gens: Vec<MultiPoly> = generators.iter().map(|p| p.extend_vars(1)).collect();
    let mut aux = MultiPoly::one(n + 1);
    for (m, c) in &g.terms {
        let mut e = m.0.clone();
        e.push(1);
        aux.add_term(Mono(e), -c.clone());
    }
    gens.push(aux);
    ideal_contains_one(&gens, budget_limit)
}
