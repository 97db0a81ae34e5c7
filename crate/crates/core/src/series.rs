use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ratmat::RowSpace;
use crate::scalar::Coeff;
use crate::Rat;
use num_traits::Zero;

/// Monomial in the free associative algebra: letters 1..=rank.
pub type Mono = Vec<u8>;

/// Lexicographic index of a degree-|w| word among all words of that degree.
pub(crate) fn mono_index(rank: usize, w: &[u8]) -> usize {
    w.iter().fold(0, |acc, &l| acc * rank + (l as usize - 1))
}

pub(crate) fn index_mono(rank: usize, degree: usize, mut idx: usize) -> Mono {
    let mut w = vec![0u8; degree];
    for i in (0..degree).rev() {
        w[i] = (idx % rank + 1) as u8;
        idx /= rank;
    }
    w
}

/// Truncated power series in non-commuting variables X_1..X_rank.
/// Stored per degree with no explicit zero coefficients; every operation
/// truncates past `level`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    rank: usize,
    level: usize,
    comps: Vec<BTreeMap<Mono, C>>,
}

impl<C: Coeff> Series<C> {
    pub fn zero(rank: usize, level: usize) -> Self {
        Series { rank, level, comps: vec![BTreeMap::new(); level + 1] }
    }

    pub fn one(rank: usize, level: usize) -> Self {
        Self::constant(rank, level, C::one())
    }

    pub fn constant(rank: usize, level: usize, c: C) -> Self {
        let mut s = Self::zero(rank, level);
        s.add_term(Vec::new(), c);
        s
    }

    pub fn generator(rank: usize, level: usize, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::BadGenerator { index: i, rank });
        }
        let mut s = Self::zero(rank, level);
        s.add_term(vec![i as u8], C::one());
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_empty())
    }

    pub fn is_one(&self) -> bool {
        self.coeff(&[]).is_one() && self.comps[1..].iter().all(|c| c.is_empty())
    }

    pub fn coeff(&self, w: &[u8]) -> C {
        if w.len() > self.level {
            return C::zero();
        }
        self.comps[w.len()].get(w).cloned().unwrap_or_else(C::zero)
    }

    /// Adds c to the coefficient of w, dropping the term past the level and
    /// pruning exact zeros.
    pub fn add_term(&mut self, w: Mono, c: C) {
        let d = w.len();
        if d > self.level || c.is_zero() {
            return;
        }
        debug_assert!(w.iter().all(|&l| l >= 1 && (l as usize) <= self.rank));
        match self.comps[d].entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn from_terms(rank: usize, level: usize, terms: Vec<(Mono, C)>) -> Result<Self> {
        let mut s = Self::zero(rank, level);
        for (w, c) in terms {
            if w.len() > level {
                return Err(Error::DegreeOverflow(w.len(), level));
            }
            for &l in &w {
                if l == 0 || l as usize > rank {
                    return Err(Error::BadGenerator { index: l as usize, rank });
                }
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    /// (word, coefficient) pairs sorted by degree then lexicographically.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.comps.iter().flat_map(|m| m.iter())
    }

    pub fn compat(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale_with(|c| -c.clone())
    }

    pub fn scale(&self, f: &C) -> Self {
        self.scale_with(|c| c.clone() * f.clone())
    }

    fn scale_with(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.rank, self.level);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Concatenation product, truncated at the common level.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = Self::zero(self.rank, self.level);
        for d1 in 0..=self.level {
            if self.comps[d1].is_empty() {
                continue;
            }
            for d2 in 0..=(self.level - d1) {
                if other.comps[d2].is_empty() {
                    continue;
                }
                for (u, cu) in &self.comps[d1] {
                    for (v, cv) in &other.comps[d2] {
                        let mut w = u.clone();
                        w.extend_from_slice(v);
                        out.add_term(w, cu.clone() * cv.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Two-sided inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(&[]);
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut u = self.clone();
        u.comps[0].clear();
        let s = u.scale(&c0.recip()); // valuation >= 1
        let mut sum = Self::one(self.rank, self.level);
        let mut pw = Self::one(self.rank, self.level);
        for _ in 1..=self.level {
            pw = pw.mul(&s.neg())?;
            if pw.is_zero() {
                break;
            }
            sum = sum.add(&pw)?;
        }
        Ok(sum.scale(&c0.recip()))
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(&[]).is_zero() {
            return Err(Error::ExpConstant);
        }
        let mut sum = Self::one(self.rank, self.level);
        let mut term = Self::one(self.rank, self.level);
        for k in 1..=self.level {
            term = term.mul(self)?.scale(&C::inv_integer(k));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(&[]).is_one() {
            return Err(Error::LogConstant);
        }
        let mut u = self.clone();
        u.comps[0].clear();
        let mut sum = Self::zero(self.rank, self.level);
        let mut pw = Self::one(self.rank, self.level);
        for k in 1..=self.level {
            pw = pw.mul(&u)?;
            if pw.is_zero() {
                break;
            }
            let mut f = C::inv_integer(k);
            if k % 2 == 0 {
                f = -f;
            }
            sum = sum.add(&pw.scale(&f))?;
        }
        Ok(sum)
    }

    /// Same series carried at a lower truncation level.
    pub fn truncated(&self, level: usize) -> Result<Self> {
        if level > self.level {
            return Err(Error::LevelMismatch(self.level, level));
        }
        let mut s = self.clone();
        s.comps.truncate(level + 1);
        s.level = level;
        Ok(s)
    }

    /// Homogeneous part of the given degree, carried at the same level.
    pub fn degree_component(&self, d: usize) -> Self {
        let mut s = Self::zero(self.rank, self.level);
        if d <= self.level {
            s.comps[d] = self.comps[d].clone();
        }
        s
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        (0..=self.level).find(|&d| !self.comps[d].is_empty())
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..=self.level).rev().find(|&d| !self.comps[d].is_empty())
    }

    /// Coproduct determined by making every generator primitive and extending
    /// multiplicatively: a word splits over all subsets of its positions.
    pub fn coproduct(&self) -> Series2<C> {
        let mut out = Series2::zero(self.rank, self.level);
        for (w, c) in self.terms() {
            let d = w.len();
            assert!(d < usize::BITS as usize, "degree too large for coproduct");
            for mask in 0u64..(1u64 << d) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (i, &l) in w.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(l);
                    } else {
                        right.push(l);
                    }
                }
                out.add_term(left, right, c.clone());
            }
        }
        out
    }

    pub fn tensor(&self, other: &Self) -> Result<Series2<C>> {
        self.compat(other)?;
        let mut out = Series2::zero(self.rank, self.level);
        for (u, cu) in self.terms() {
            for (v, cv) in other.terms() {
                out.add_term(u.clone(), v.clone(), cu.clone() * cv.clone());
            }
        }
        Ok(out)
    }

    /// Group-like: constant term 1 and coproduct equal to the tensor square.
    pub fn is_grouplike(&self) -> bool {
        self.coeff(&[]).is_one() && self.coproduct() == self.tensor(self).expect("same series")
    }

    /// Primitive: coproduct equal to x (x) 1 + 1 (x) x.
    pub fn is_primitive(&self) -> bool {
        let mut expected = Series2::zero(self.rank, self.level);
        for (w, c) in self.terms() {
            expected.add_term(w.clone(), Vec::new(), c.clone());
            expected.add_term(Vec::new(), w.clone(), c.clone());
        }
        self.coproduct() == expected
    }
}

/// Truncated element of the completed tensor square; pairs of words with
/// total degree at most `level`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series2<C> {
    rank: usize,
    level: usize,
    terms: BTreeMap<(Mono, Mono), C>,
}

impl<C: Coeff> Series2<C> {
    pub fn zero(rank: usize, level: usize) -> Self {
        Series2 { rank, level, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, level: usize) -> Self {
        let mut s = Self::zero(rank, level);
        s.add_term(Vec::new(), Vec::new(), C::one());
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn add_term(&mut self, left: Mono, right: Mono, c: C) {
        if left.len() + right.len() > self.level || c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coeff(&self, left: &[u8], right: &[u8]) -> C {
        self.terms
            .get(&(left.to_vec(), right.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Mono, Mono), &C)> {
        self.terms.iter()
    }

    pub fn compat(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = self.clone();
        for ((l, r), c) in other.terms.iter() {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = self.clone();
        for ((l, r), c) in other.terms.iter() {
            out.add_term(l.clone(), r.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Componentwise product: (u1 (x) v1)(u2 (x) v2) = u1u2 (x) v1v2.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = Self::zero(self.rank, self.level);
        for ((l1, r1), c1) in self.terms.iter() {
            for ((l2, r2), c2) in other.terms.iter() {
                let mut l = l1.clone();
                l.extend_from_slice(l2);
                let mut r = r1.clone();
                r.extend_from_slice(r2);
                out.add_term(l, r, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }
}

/// log(exp(X_i) exp(X_j)) truncated at `level`, in rank max(i, j).
pub fn bch<C: Coeff>(i: usize, j: usize, level: usize) -> Result<Series<C>> {
    let rank = i.max(j);
    let a = Series::<C>::generator(rank, level, i)?.exp()?;
    let b = Series::<C>::generator(rank, level, j)?.exp()?;
    a.mul(&b)?.log()
}

/// Two-sided graded ideal of the truncated tensor algebra, generated by
/// homogeneous elements; holds a reduced echelon basis per degree.
#[derive(Clone, Debug)]
pub struct GradedIdeal {
    rank: usize,
    level: usize,
    bases: Vec<RowSpace>,
}

impl GradedIdeal {
    /// Builds the ideal degree by degree: degree d is spanned by the degree-d
    /// generators together with X_a * I_{d-1} and I_{d-1} * X_a.
    pub fn build(rank: usize, level: usize, gens: &[Series<Rat>]) -> Result<Self> {
        let mut by_degree: Vec<Vec<Vec<Rat>>> = vec![Vec::new(); level + 1];
        for g in gens {
            if g.rank() != rank {
                return Err(Error::RankMismatch(g.rank(), rank));
            }
            let Some(d) = g.lowest_degree() else {
                continue; // zero generator contributes nothing
            };
            if d == 0 || g.max_degree() != Some(d) {
                return Err(Error::NonHomogeneous);
            }
            if d > level {
                continue; // invisible at this truncation
            }
            let mut v = vec![Rat::zero(); rank.pow(d as u32)];
            for (w, c) in g.terms() {
                v[mono_index(rank, w)] = c.clone();
            }
            by_degree[d].push(v);
        }
        let mut bases: Vec<RowSpace> = Vec::with_capacity(level + 1);
        bases.push(RowSpace::new(1)); // degree 0: empty
        for d in 1..=level {
            let cols = rank.pow(d as u32);
            let mut sp = RowSpace::new(cols);
            for v in by_degree[d].drain(..) {
                sp.insert(v);
            }
            let prev = &bases[d - 1];
            let pcols = prev.cols();
            for row in prev.rows() {
                for a in 0..rank {
                    // X_{a+1} * row: word w goes to (a+1)w
                    let mut left = vec![Rat::zero(); cols];
                    for (idx, c) in row.iter().enumerate() {
                        if !c.is_zero() {
                            left[a * pcols + idx] = c.clone();
                        }
                    }
                    sp.insert(left);
                    // row * X_{a+1}: word w goes to w(a+1)
                    let mut right = vec![Rat::zero(); cols];
                    for (idx, c) in row.iter().enumerate() {
                        if !c.is_zero() {
                            right[idx * rank + a] = c.clone();
                        }
                    }
                    sp.insert(right);
                }
            }
            bases.push(sp);
        }
        Ok(GradedIdeal { rank, level, bases })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Dimension of the degree-d piece.
    pub fn dim(&self, d: usize) -> usize {
        if d <= self.level {
            self.bases[d].dim()
        } else {
            0
        }
    }

    /// Canonical representative of a series modulo the ideal; idempotent.
    pub fn reduce(&self, s: &Series<Rat>) -> Result<Series<Rat>> {
        if s.rank() != self.rank {
            return Err(Error::RankMismatch(s.rank(), self.rank));
        }
        if s.level() > self.level {
            return Err(Error::LevelMismatch(s.level(), self.level));
        }
        let mut out = Series::zero(s.rank(), s.level());
        for d in 0..=s.level() {
            if s.comps[d].is_empty() {
                continue;
            }
            if d == 0 || self.bases[d].dim() == 0 {
                out.comps[d] = s.comps[d].clone();
                continue;
            }
            let mut v = vec![Rat::zero(); self.rank.pow(d as u32)];
            for (w, c) in &s.comps[d] {
                v[mono_index(self.rank, w)] = c.clone();
            }
            let v = self.bases[d].reduce(v);
            for (idx, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    out.comps[d].insert(index_mono(self.rank, d, idx), c);
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, s: &Series<Rat>) -> Result<bool> {
        Ok(self.reduce(s)?.is_zero())
    }

    /// Reduces both tensor factors of a tensor-square element.
    pub fn reduce2(&self, t: &Series2<Rat>) -> Result<Series2<Rat>> {
        if t.rank() != self.rank {
            return Err(Error::RankMismatch(t.rank(), self.rank));
        }
        // left factors first, grouped by right factor, then the symmetric pass
        let pass = |t: &Series2<Rat>, left_pass: bool| -> Result<Series2<Rat>> {
            let mut grouped: BTreeMap<Mono, Series<Rat>> = BTreeMap::new();
            for ((l, r), c) in t.terms() {
                let (key, word) = if left_pass { (r, l) } else { (l, r) };
                let slot = grouped
                    .entry(key.clone())
                    .or_insert_with(|| Series::zero(self.rank, t.level()));
                slot.add_term(word.clone(), c.clone());
            }
            let mut out = Series2::zero(t.rank(), t.level());
            for (key, series) in grouped {
                let red = self.reduce(&series)?;
                for (w, c) in red.terms() {
                    if left_pass {
                        out.add_term(w.clone(), key.clone(), c.clone());
                    } else {
                        out.add_term(key.clone(), w.clone(), c.clone());
                    }
                }
            }
            Ok(out)
        };
        pass(&pass(t, true)?, false)
    }

    /// Graded dimensions of the quotient algebra, degrees 0..=level.
    pub fn hilbert(&self) -> Vec<u64> {
        (0..=self.level)
            .map(|d| {
                let full = (self.rank as u128).pow(d as u32);
                let dim = if d == 0 { 0 } else { self.bases[d].dim() as u128 };
                u64::try_from(full - dim).expect("dimension exceeds u64")
            })
            .collect()
    }
}
