use crate::error::{Error, Result};
use crate::series::{GradedIdeal, Series};
use crate::words::{commutator, Word};
use crate::{NcSeries, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    /// x_i goes to 1 + X_i.
    Magnus,
    /// x_i goes to exp(X_i).
    Exponential,
}

impl std::fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpansionKind::Magnus => write!(f, "magnus"),
            ExpansionKind::Exponential => write!(f, "exponential"),
        }
    }
}

/// Multiplicative map from the free group on `rank` generators into the
/// truncated tensor algebra, optionally followed by reduction modulo a
/// graded ideal (the induced map on a quotient algebra).
#[derive(Clone, Debug)]
pub struct Expansion {
    kind: ExpansionKind,
    rank: usize,
    level: usize,
    images: Vec<NcSeries>,
    inv_images: Vec<NcSeries>,
    target: Option<GradedIdeal>,
}

impl Expansion {
    pub fn new(kind: ExpansionKind, rank: usize, level: usize) -> Result<Self> {
        let mut images = Vec::with_capacity(rank);
        let mut inv_images = Vec::with_capacity(rank);
        for i in 1..=rank {
            let x = Series::generator(rank, level, i)?;
            let (img, inv) = match kind {
                ExpansionKind::Magnus => {
                    let img = Series::one(rank, level).add(&x)?;
                    // alternating geometric series, the genuine algebra inverse
                    let inv = img.inverse()?;
                    (img, inv)
                }
                ExpansionKind::Exponential => (x.exp()?, x.neg().exp()?),
            };
            images.push(img);
            inv_images.push(inv);
        }
        Ok(Expansion { kind, rank, level, images, inv_images, target: None })
    }

    pub fn magnus(rank: usize, level: usize) -> Result<Self> {
        Self::new(ExpansionKind::Magnus, rank, level)
    }

    pub fn exponential(rank: usize, level: usize) -> Result<Self> {
        Self::new(ExpansionKind::Exponential, rank, level)
    }

    /// Post-composes with reduction modulo the ideal, so images land in the
    /// quotient algebra in normal form.
    pub fn with_target(mut self, ideal: GradedIdeal) -> Result<Self> {
        if ideal.rank() != self.rank {
            return Err(Error::RankMismatch(ideal.rank(), self.rank));
        }
        if ideal.level() != self.level {
            return Err(Error::LevelMismatch(ideal.level(), self.level));
        }
        for img in self.images.iter_mut().chain(self.inv_images.iter_mut()) {
            *img = ideal.reduce(img)?;
        }
        self.target = Some(ideal);
        Ok(self)
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn target(&self) -> Option<&GradedIdeal> {
        self.target.as_ref()
    }

    /// Image of the i-th generator (1-based).
    pub fn image(&self, i: usize) -> Result<&NcSeries> {
        if i == 0 || i > self.rank {
            return Err(Error::BadGenerator { index: i, rank: self.rank });
        }
        Ok(&self.images[i - 1])
    }

    /// Image of a word: the product of generator images and inverse images,
    /// reduced after each factor when a target ideal is set.
    pub fn expand(&self, w: &Word) -> Result<NcSeries> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(w.rank(), self.rank));
        }
        let mut out = Series::one(self.rank, self.level);
        for &l in w.letters() {
            let factor = if l > 0 {
                &self.images[(l - 1) as usize]
            } else {
                &self.inv_images[(-l - 1) as usize]
            };
            out = out.mul(factor)?;
            if let Some(ideal) = &self.target {
                out = ideal.reduce(&out)?;
            }
        }
        Ok(out)
    }
}

/// Smallest degree with a nonzero term of expand(w) - 1, or None when every
/// term through the truncation level vanishes. For the free group this is the
/// lower-central-series depth of w through the level.
pub fn expansion_depth(e: &Expansion, w: &Word) -> Result<Option<usize>> {
    if e.target.is_some() {
        return Err(Error::QuotientTarget);
    }
    let s = e.expand(w)?;
    let dev = s.sub(&Series::one(e.rank, e.level))?;
    Ok(dev.lowest_degree())
}

/// Equality of images through degree k; for the free group this decides
/// equality in the class-k quotient F / Gamma_{k+1}.
pub fn nilpotent_equal(e: &Expansion, w1: &Word, w2: &Word, k: usize) -> Result<bool> {
    if k > e.level {
        return Err(Error::DegreeOverflow(k, e.level));
    }
    let a = e.expand(w1)?.truncated(k)?;
    let b = e.expand(w2)?.truncated(k)?;
    Ok(a == b)
}

/// Per-relator and sampled-word diagnostics for an expansion induced on the
/// quotient by an ideal.
#[derive(Clone, Debug)]
pub struct QuotientReport {
    /// for each relator, whether its image reduces to 1 modulo the ideal
    pub relator_reduces: Vec<bool>,
    /// sampled words with the outcome of the factor-wise group-like check
    pub sample_grouplike: Vec<(Word, bool)>,
}

impl QuotientReport {
    pub fn well_defined(&self) -> bool {
        self.relator_reduces.iter().all(|&b| b)
    }

    pub fn grouplike(&self) -> bool {
        self.sample_grouplike.iter().all(|(_, b)| *b)
    }
}

/// Checks that an expansion descends to the quotient by `ideal`: every
/// relator image must reduce to 1, and sampled images must satisfy the
/// group-like identity with both sides reduced factor-wise modulo the ideal.
/// The sample is the generators, the relators, and all commutators of
/// generator pairs.
pub fn taylor_check_on_quotient(
    e: &Expansion,
    relators: &[Word],
    ideal: &GradedIdeal,
) -> Result<QuotientReport> {
    if ideal.rank() != e.rank {
        return Err(Error::RankMismatch(ideal.rank(), e.rank));
    }
    if ideal.level() != e.level {
        return Err(Error::LevelMismatch(ideal.level(), e.level));
    }
    let one = Series::one(e.rank, e.level);
    let mut relator_reduces = Vec::with_capacity(relators.len());
    for r in relators {
        let img = ideal.reduce(&e.expand(r)?)?;
        relator_reduces.push(img == one);
    }
    let mut sample: Vec<Word> = (1..=e.rank).map(|i| Word::generator(e.rank, i).unwrap()).collect();
    sample.extend(relators.iter().cloned());
    for i in 1..=e.rank {
        for j in (i + 1)..=e.rank {
            let a = Word::generator(e.rank, i).unwrap();
            let b = Word::generator(e.rank, j).unwrap();
            sample.push(commutator(&a, &b)?);
        }
    }
    let mut sample_grouplike = Vec::with_capacity(sample.len());
    for w in sample {
        let img = ideal.reduce(&e.expand(&w)?)?;
        let diff = img.coproduct().sub(&img.tensor(&img)?)?;
        let ok = ideal.reduce2(&diff)?.is_zero();
        sample_grouplike.push((w, ok));
    }
    Ok(QuotientReport { relator_reduces, sample_grouplike })
}

/// The one-variable expansion of a braid word obtained by abelianizing:
/// sigma_i^{±1} goes to exp(±X). The value is exp(eX) where e is the
/// exponent sum, so every commutator maps to 1.
pub fn abelianized_expansion(braid: &[i32], level: usize) -> Result<NcSeries> {
    if braid.iter().any(|&l| l == 0) {
        return Err(Error::Invalid("braid letters must be nonzero".into()));
    }
    let e: i64 = braid.iter().map(|&l| if l > 0 { 1 } else { -1 }).sum();
    let x = Series::generator(1, level, 1)?;
    x.scale(&Rat::from_integer(e.into())).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn names(n: usize) -> Vec<String> {
        crate::words::default_names(n)
    }

    fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
        let len = rng.gen_range(0..=max_len);
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..=rank) as i32;
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        Word::new(rank, letters).unwrap()
    }

    #[test]
    fn magnus_generator_images() {
        let e = Expansion::magnus(2, 3).unwrap();
        let img = e.expand(&Word::generator(2, 1).unwrap()).unwrap();
        assert_eq!(img.coeff(&[]), r(1));
        assert_eq!(img.coeff(&[1]), r(1));
        assert_eq!(img.coeff(&[1, 1]), r(0));
        let inv = e.expand(&Word::generator(2, 1).unwrap().inverse()).unwrap();
        assert_eq!(inv.coeff(&[1]), r(-1));
        assert_eq!(inv.coeff(&[1, 1]), r(1));
        assert_eq!(inv.coeff(&[1, 1, 1]), r(-1));
    }

    #[test]
    fn exponential_commutator_level_two() {
        let e = Expansion::exponential(2, 2).unwrap();
        let w = parse_word("[x1,x2]", &names(2)).unwrap();
        let img = e.expand(&w).unwrap();
        assert_eq!(img.coeff(&[]), r(1));
        assert_eq!(img.coeff(&[1]), r(0));
        assert_eq!(img.coeff(&[2]), r(0));
        assert_eq!(img.coeff(&[1, 2]), r(1));
        assert_eq!(img.coeff(&[2, 1]), r(-1));
        assert_eq!(img.coeff(&[1, 1]), r(0));
    }

    #[test]
    fn expansion_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [ExpansionKind::Magnus, ExpansionKind::Exponential] {
            let e = Expansion::new(kind, 2, 4).unwrap();
            for _ in 0..25 {
                let u = random_word(&mut rng, 2, 6);
                let v = random_word(&mut rng, 2, 6);
                let uv = u.mul(&v).unwrap();
                assert_eq!(
                    e.expand(&uv).unwrap(),
                    e.expand(&u).unwrap().mul(&e.expand(&v).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn exponential_images_grouplike_magnus_not() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = Expansion::exponential(3, 4).unwrap();
        for _ in 0..20 {
            let w = random_word(&mut rng, 3, 8);
            assert!(e.expand(&w).unwrap().is_grouplike());
        }
        let m = Expansion::magnus(3, 2).unwrap();
        for i in 1..=3 {
            let img = m.expand(&Word::generator(3, i).unwrap()).unwrap();
            assert!(!img.is_grouplike());
        }
    }

    #[test]
    fn depth_examples() {
        let e = Expansion::magnus(2, 5).unwrap();
        let ns = names(2);
        let d = |t: &str| expansion_depth(&e, &parse_word(t, &ns).unwrap()).unwrap();
        assert_eq!(d("x1"), Some(1));
        assert_eq!(d("x1^2"), Some(1));
        assert_eq!(d("[x1,x2]"), Some(2));
        assert_eq!(d("[x1,[x1,x2]]"), Some(3));
        assert_eq!(d(""), None);
        // deviation beyond the level reports None
        let shallow = Expansion::magnus(2, 1).unwrap();
        assert_eq!(expansion_depth(&shallow, &parse_word("[x1,x2]", &ns).unwrap()).unwrap(), None);
    }

    #[test]
    fn depth_requires_free_target() {
        let comm = {
            let x = NcSeries::generator(2, 3, 1).unwrap();
            let y = NcSeries::generator(2, 3, 2).unwrap();
            x.mul(&y).unwrap().sub(&y.mul(&x).unwrap()).unwrap()
        };
        let ideal = GradedIdeal::build(2, 3, &[comm]).unwrap();
        let e = Expansion::magnus(2, 3).unwrap().with_target(ideal).unwrap();
        assert_eq!(
            expansion_depth(&e, &Word::generator(2, 1).unwrap()).unwrap_err(),
            Error::QuotientTarget
        );
    }

    #[test]
    fn depth_filtration_compatibility() {
        let e = Expansion::magnus(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cap = 5usize;
        let val = |w: &Word| expansion_depth(&e, w).unwrap().unwrap_or(cap);
        for _ in 0..40 {
            let u = random_word(&mut rng, 2, 5);
            let v = random_word(&mut rng, 2, 5);
            assert!(val(&u.mul(&v).unwrap()) >= val(&u).min(val(&v)));
            assert!(val(&commutator(&u, &v).unwrap()) >= (val(&u) + val(&v)).min(cap));
        }
    }

    #[test]
    fn nilpotent_equality_examples() {
        let e = Expansion::exponential(2, 4).unwrap();
        let ns = names(2);
        let comm = parse_word("[x1,x2]", &ns).unwrap();
        let empty = Word::empty(2);
        assert!(nilpotent_equal(&e, &comm, &empty, 1).unwrap());
        assert!(!nilpotent_equal(&e, &comm, &empty, 2).unwrap());
        // [[x1,x2],x2] * [x2,[x2,x1]] doubles the weight-3 commutator
        let w1 = parse_word("[[x1,x2],x2] [x2,[x2,x1]]", &ns).unwrap();
        assert!(nilpotent_equal(&e, &w1, &empty, 2).unwrap());
        assert!(!nilpotent_equal(&e, &w1, &empty, 3).unwrap());
        let sq = parse_word("[[x1,x2],x2]^2", &ns).unwrap();
        assert!(nilpotent_equal(&e, &w1, &sq, 3).unwrap());
        assert_eq!(nilpotent_equal(&e, &comm, &empty, 5).unwrap_err(), Error::DegreeOverflow(5, 4));
    }

    #[test]
    fn induced_expansion_on_commutative_quotient() {
        let level = 3;
        let comm = {
            let x = NcSeries::generator(2, level, 1).unwrap();
            let y = NcSeries::generator(2, level, 2).unwrap();
            x.mul(&y).unwrap().sub(&y.mul(&x).unwrap()).unwrap()
        };
        let ideal = GradedIdeal::build(2, level, &[comm]).unwrap();
        let relator = parse_word("[x1,x2]", &names(2)).unwrap();

        let e = Expansion::exponential(2, level).unwrap();
        let rep = taylor_check_on_quotient(&e, &[relator.clone()], &ideal).unwrap();
        assert!(rep.well_defined());
        assert!(rep.grouplike());

        let m = Expansion::magnus(2, level).unwrap();
        let rep = taylor_check_on_quotient(&m, &[relator], &ideal).unwrap();
        assert!(rep.well_defined());
        assert!(!rep.grouplike());
    }

    #[test]
    fn conjugated_generator_relators_stay_in_repeated_letter_ideal() {
        // images of [x_i, g x_i g^-1]: every Lyndon coordinate of the log
        // uses the letter i at least twice
        let n = 3;
        let level = 4;
        let e = Expansion::exponential(n, level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..15 {
            let g = random_word(&mut rng, n, 3);
            let i = rng.gen_range(1..=n);
            let xi = Word::generator(n, i).unwrap();
            let conj = g.mul(&xi).unwrap().mul(&g.inverse()).unwrap();
            let w = commutator(&xi, &conj).unwrap();
            let log = crate::lie::lie_part(&e.expand(&w).unwrap().log().unwrap()).unwrap();
            for (word, _) in log.terms() {
                let count = word.iter().filter(|&&l| l as usize == i).count();
                assert!(count >= 2, "word {word:?} has letter {i} only {count} times");
            }
        }
    }

    #[test]
    fn abelianized_braid_expansion() {
        let one = abelianized_expansion(&[1, 2, -1, -2], 4).unwrap();
        assert!(one.is_one());
        let s = abelianized_expansion(&[1], 4).unwrap();
        assert_eq!(s.coeff(&[1]), r(1));
        assert_eq!(s.coeff(&[1, 1]), Rat::new(1.into(), 2.into()));
        let sq = abelianized_expansion(&[1, 1], 3).unwrap();
        assert_eq!(sq.coeff(&[1]), r(2));
        assert_eq!(sq.coeff(&[1, 1]), r(2));
        assert!(abelianized_expansion(&[0], 2).is_err());
    }
}
