use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::ratmat::RowSpace;
use crate::series::{Mono, Series};
use crate::{NcSeries, Rat};
use num_traits::{One, Zero};

/// A word is Lyndon when it is strictly smaller than all of its proper suffixes.
pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|s| w < &w[s..])
}

/// All Lyndon words of length exactly `degree` over letters 1..=rank,
/// lexicographically sorted (Duval's generation).
pub fn lyndon_words(rank: usize, degree: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    if rank == 0 || degree == 0 {
        return out;
    }
    let max = rank as u8;
    let mut w: Mono = vec![1];
    loop {
        if w.len() == degree {
            out.push(w.clone());
        }
        let m = w.len();
        for i in m..degree {
            let c = w[i - m];
            w.push(c);
        }
        while w.last() == Some(&max) {
            w.pop();
        }
        match w.last_mut() {
            None => return out,
            Some(l) => *l += 1,
        }
    }
}

/// Lyndon word with its standard factorization available.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Mono);

impl LyndonWord {
    pub fn new(letters: Mono) -> Result<Self> {
        if !is_lyndon(&letters) {
            return Err(Error::Invalid(format!("{letters:?} is not a Lyndon word")));
        }
        Ok(LyndonWord(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Standard factorization w = uv with v the longest proper Lyndon suffix;
    /// None for a single letter.
    pub fn standard_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        standard_split(&self.0)
            .map(|s| (LyndonWord(self.0[..s].to_vec()), LyndonWord(self.0[s..].to_vec())))
    }
}

fn standard_split(w: &[u8]) -> Option<usize> {
    if w.len() < 2 {
        return None;
    }
    let s = (1..w.len())
        .find(|&s| is_lyndon(&w[s..]))
        .expect("every proper suffix set contains a Lyndon word");
    debug_assert!(is_lyndon(&w[..s]));
    Some(s)
}

/// Lyndon basis of the degree-`degree` part of the free Lie algebra.
pub fn lyndon_basis(rank: usize, degree: usize) -> Vec<LyndonWord> {
    lyndon_words(rank, degree).into_iter().map(LyndonWord).collect()
}

/// Element of the free Lie algebra in Lyndon coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LiePoly {
    rank: usize,
    terms: BTreeMap<Mono, Rat>,
}

impl LiePoly {
    pub fn zero(rank: usize) -> Self {
        LiePoly { rank, terms: BTreeMap::new() }
    }

    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::BadGenerator { index: i, rank });
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![i as u8], Rat::one());
        Ok(LiePoly { rank, terms })
    }

    pub fn from_terms(rank: usize, terms: Vec<(Mono, Rat)>) -> Result<Self> {
        let mut p = LiePoly::zero(rank);
        for (w, c) in terms {
            if !is_lyndon(&w) {
                return Err(Error::Invalid(format!("{w:?} is not a Lyndon word")));
            }
            if w.iter().any(|&l| l == 0 || l as usize > rank) {
                return Err(Error::BadGenerator { index: w[0] as usize, rank });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, w: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
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
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, f: &Rat) -> Self {
        let mut out = LiePoly::zero(self.rank);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c * f);
        }
        out
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        LiePoly {
            rank: self.rank,
            terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.lowest_degree() == self.max_degree()
    }

    /// Lowest-degree homogeneous part (the leading form of a relator log).
    pub fn leading_form(&self) -> Self {
        match self.lowest_degree() {
            None => self.clone(),
            Some(d) => self.homogeneous_part(d),
        }
    }
}

/// Memoized bracketings of Lyndon words inside the truncated tensor algebra.
pub(crate) struct EmbedCache {
    rank: usize,
    level: usize,
    map: HashMap<Mono, NcSeries>,
}

impl EmbedCache {
    pub fn new(rank: usize, level: usize) -> Self {
        EmbedCache { rank, level, map: HashMap::new() }
    }

    /// Right-normed-by-factorization bracketing of a Lyndon word:
    /// rho(letter) = X_letter, rho(uv) = [rho(u), rho(v)].
    pub fn bracketing(&mut self, w: &[u8]) -> Result<NcSeries> {
        if let Some(s) = self.map.get(w) {
            return Ok(s.clone());
        }
        let s = match standard_split(w) {
            None => Series::generator(self.rank, self.level, w[0] as usize)?,
            Some(at) => {
                let u = self.bracketing(&w[..at])?;
                let v = self.bracketing(&w[at..])?;
                u.mul(&v)?.sub(&v.mul(&u)?)?
            }
        };
        self.map.insert(w.to_vec(), s.clone());
        Ok(s)
    }
}

/// Writes a Lie element in the associative algebra truncated at `level`.
/// Terms of degree beyond the level are truncated away.
pub fn lie_embed(p: &LiePoly, level: usize) -> Result<NcSeries> {
    let mut cache = EmbedCache::new(p.rank(), level);
    lie_embed_with(&mut cache, p)
}

fn lie_embed_with(cache: &mut EmbedCache, p: &LiePoly) -> Result<NcSeries> {
    let mut out = Series::zero(cache.rank, cache.level);
    for (w, c) in p.terms() {
        if w.len() > cache.level {
            continue;
        }
        out = out.add(&cache.bracketing(w)?.scale(c))?;
    }
    Ok(out)
}

/// Rewrites a Lie element of the tensor algebra in Lyndon coordinates.
/// Triangularity: the bracketing of a Lyndon word is the word itself plus
/// lexicographically larger words, so elimination from the smallest word up
/// either terminates or certifies the element is not Lie.
fn to_lyndon_with(cache: &mut EmbedCache, s: &NcSeries) -> Result<LiePoly> {
    if !s.coeff(&[]).is_zero() {
        return Err(Error::NotLie);
    }
    let mut out = LiePoly::zero(s.rank());
    for d in 1..=s.level() {
        let comp = s.degree_component(d);
        let mut work: BTreeMap<Mono, Rat> = comp.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = work.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return Err(Error::NotLie);
            }
            let rho = cache.bracketing(&w)?;
            for (u, a) in rho.terms() {
                let v = work.get(u).cloned().unwrap_or_else(Rat::zero) - a * &c;
                if v.is_zero() {
                    work.remove(u);
                } else {
                    work.insert(u.clone(), v);
                }
            }
            out.add_term(w, c);
        }
    }
    Ok(out)
}

/// Left-normed bracketing word map: X_{i1}..X_{id} goes to
/// [..[[X_{i1}, X_{i2}], X_{i3}].., X_{id}], extended linearly degreewise,
/// divided by the degree. This is the classical projector onto the Lie part;
/// it is the identity on Lie elements.
pub fn dynkin_image(s: &NcSeries) -> Result<NcSeries> {
    let mut out = Series::zero(s.rank(), s.level());
    for (w, c) in s.terms() {
        if w.is_empty() {
            continue;
        }
        let mut b = Series::generator(s.rank(), s.level(), w[0] as usize)?;
        for &l in &w[1..] {
            let x = Series::generator(s.rank(), s.level(), l as usize)?;
            b = b.mul(&x)?.sub(&x.mul(&b)?)?;
        }
        let f = c.clone() / Rat::from_integer((w.len() as i64).into());
        out = out.add(&b.scale(&f))?;
    }
    Ok(out)
}

/// Lyndon coordinates of a primitive series via the bracketing projector.
pub fn dynkin_project(s: &NcSeries) -> Result<LiePoly> {
    if !s.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    lie_part(s)
}

/// Dynkin projection without the primitivity check; agrees with
/// `dynkin_project` on primitive input and is always a Lie element.
pub fn lie_part(s: &NcSeries) -> Result<LiePoly> {
    let mut cache = EmbedCache::new(s.rank(), s.level());
    to_lyndon_with(&mut cache, &dynkin_image(s)?)
}

/// [p, q] in Lyndon coordinates, computed through the tensor algebra.
pub fn lie_bracket(p: &LiePoly, q: &LiePoly) -> Result<LiePoly> {
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch(p.rank(), q.rank()));
    }
    let (Some(dp), Some(dq)) = (p.max_degree(), q.max_degree()) else {
        return Ok(LiePoly::zero(p.rank()));
    };
    let mut cache = EmbedCache::new(p.rank(), dp + dq);
    bracket_with(&mut cache, p, q)
}

fn bracket_with(cache: &mut EmbedCache, p: &LiePoly, q: &LiePoly) -> Result<LiePoly> {
    let a = lie_embed_with(cache, p)?;
    let b = lie_embed_with(cache, q)?;
    let c = a.mul(&b)?.sub(&b.mul(&a)?)?;
    to_lyndon_with(cache, &c)
}

/// Graded Lie ideal with a reduced echelon basis in Lyndon coordinates per degree.
#[derive(Clone, Debug)]
pub struct GradedLieIdeal {
    rank: usize,
    level: usize,
    lyndon: Vec<Vec<Mono>>,
    index: Vec<HashMap<Mono, usize>>,
    bases: Vec<RowSpace>,
}

impl GradedLieIdeal {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self, d: usize) -> usize {
        if d <= self.level {
            self.bases[d].dim()
        } else {
            0
        }
    }

    /// Number of Lyndon words of degree d (the ambient free Lie dimension).
    pub fn ambient_dim(&self, d: usize) -> usize {
        self.lyndon[d].len()
    }

    fn vec_of(&self, p: &LiePoly, d: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.lyndon[d].len()];
        for (w, c) in p.terms() {
            if w.len() == d {
                v[self.index[d][w]] = c.clone();
            }
        }
        v
    }

    fn poly_of(&self, v: &[Rat], d: usize) -> LiePoly {
        let mut p = LiePoly::zero(self.rank);
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                p.add_term(self.lyndon[d][idx].clone(), c.clone());
            }
        }
        p
    }

    /// Canonical representative modulo the ideal, degree by degree.
    pub fn reduce(&self, p: &LiePoly) -> Result<LiePoly> {
        if p.rank() != self.rank {
            return Err(Error::RankMismatch(p.rank(), self.rank));
        }
        if p.max_degree().is_some_and(|d| d > self.level) {
            return Err(Error::DegreeOverflow(p.max_degree().unwrap(), self.level));
        }
        let mut out = LiePoly::zero(self.rank);
        for d in 1..=self.level {
            let part = p.homogeneous_part(d);
            if part.is_zero() {
                continue;
            }
            let v = self.bases[d].reduce(self.vec_of(&part, d));
            out = out.add(&self.poly_of(&v, d))?;
        }
        Ok(out)
    }

    pub fn contains(&self, p: &LiePoly) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Graded dimensions of the quotient Lie algebra, degrees 1..=level.
    pub fn quotient_dims(&self) -> Vec<u64> {
        (1..=self.level)
            .map(|d| (self.lyndon[d].len() - self.bases[d].dim()) as u64)
            .collect()
    }

    /// Lifts of the non-pivot Lyndon words: a basis of the degree-d quotient.
    fn quotient_basis(&self, d: usize) -> Vec<LiePoly> {
        (0..self.lyndon[d].len())
            .filter(|&i| !self.bases[d].contains_pivot(i))
            .map(|i| {
                let mut p = LiePoly::zero(self.rank);
                p.add_term(self.lyndon[d][i].clone(), Rat::one());
                p
            })
            .collect()
    }
}

/// Builds the graded Lie ideal generated by homogeneous elements: degree d is
/// spanned by the degree-d generators plus brackets of degree-(d-1) basis
/// elements with the degree-1 generators (ideal closure, since the ambient
/// free Lie algebra is generated in degree 1).
pub fn lie_ideal_build(rank: usize, level: usize, gens: &[LiePoly]) -> Result<GradedLieIdeal> {
    let mut by_degree: Vec<Vec<LiePoly>> = vec![Vec::new(); level + 1];
    for g in gens {
        if g.rank() != rank {
            return Err(Error::RankMismatch(g.rank(), rank));
        }
        let Some(d) = g.lowest_degree() else {
            continue;
        };
        if !g.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        if d <= level {
            by_degree[d].push(g.clone());
        }
    }
    let lyndon: Vec<Vec<Mono>> = (0..=level).map(|d| lyndon_words(rank, d)).collect();
    let index: Vec<HashMap<Mono, usize>> = lyndon
        .iter()
        .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
        .collect();
    let mut ideal = GradedLieIdeal {
        rank,
        level,
        lyndon,
        index,
        bases: vec![RowSpace::new(1)],
    };
    let mut cache = EmbedCache::new(rank, level);
    for d in 1..=level {
        let mut sp = RowSpace::new(ideal.lyndon[d].len());
        let mut todo: Vec<LiePoly> = std::mem::take(&mut by_degree[d]);
        if d > 1 {
            let prev: Vec<LiePoly> =
                ideal.bases[d - 1].rows().iter().map(|v| ideal.poly_of(v, d - 1)).collect();
            for b in &prev {
                for a in 1..=rank {
                    todo.push(bracket_with(&mut cache, b, &LiePoly::generator(rank, a)?)?);
                }
            }
        }
        for p in todo {
            let v = ideal.vec_of(&p, d);
            sp.insert(v);
        }
        ideal.bases.push(sp);
    }
    Ok(ideal)
}

/// Graded dimensions of the quotient by the ideal.
pub fn lie_quotient_dims(ideal: &GradedLieIdeal) -> Vec<u64> {
    ideal.quotient_dims()
}

/// Graded dimensions of L / L^(i) where L is the quotient by the ideal and
/// L^(i) is the i-th derived subalgebra (L^(1) = [L, L]).
pub fn derived_quotient_dims(ideal: &GradedLieIdeal, i: usize) -> Result<Vec<u64>> {
    if i < 2 {
        return Err(Error::Invalid(format!("derived level must be >= 2, got {i}")));
    }
    let level = ideal.level;
    let rank = ideal.rank;
    let mut cache = EmbedCache::new(rank, level);
    let quotient: Vec<Vec<LiePoly>> =
        (0..=level).map(|d| ideal.quotient_basis(d)).collect();
    // derived level 1: spans of brackets of quotient basis elements
    let mut spans: Vec<RowSpace> = (0..=level).map(|d| RowSpace::new(ideal.lyndon[d].len())).collect();
    let mut polys: Vec<Vec<LiePoly>> = vec![Vec::new(); level + 1];
    for d in 2..=level {
        for a in 1..=(d / 2) {
            let b = d - a;
            for (ui, u) in quotient[a].iter().enumerate() {
                let vs = &quotient[b];
                let start = if a == b { ui + 1 } else { 0 };
                for v in &vs[start..] {
                    let w = ideal.reduce(&bracket_with(&mut cache, u, v)?)?;
                    if spans[d].insert(ideal.vec_of(&w, d)) {
                        polys[d].push(w);
                    }
                }
            }
        }
    }
    // higher derived levels: bracket the previous level with itself
    for _level in 2..=i {
        let mut next: Vec<RowSpace> =
            (0..=level).map(|d| RowSpace::new(ideal.lyndon[d].len())).collect();
        let mut next_polys: Vec<Vec<LiePoly>> = vec![Vec::new(); level + 1];
        for d in 2..=level {
            for a in 2..=(d / 2) {
                let b = d - a;
                for (ui, u) in polys[a].iter().enumerate() {
                    let vs = &polys[b];
                    let start = if a == b { ui + 1 } else { 0 };
                    for v in &vs[start..] {
                        let w = ideal.reduce(&bracket_with(&mut cache, u, v)?)?;
                        if next[d].insert(ideal.vec_of(&w, d)) {
                            next_polys[d].push(w);
                        }
                    }
                }
            }
        }
        spans = next;
        polys = next_polys;
    }
    Ok((1..=level)
        .map(|d| ((ideal.lyndon[d].len() - ideal.bases[d].dim()) - spans[d].dim()) as u64)
        .collect())
}
