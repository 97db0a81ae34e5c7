use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Group family with its size parameter (rank n or genus g).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// F_n
    FreeGroup(usize),
    /// closed orientable surface group of genus g
    Surface(usize),
    /// pure braid group P_n
    PureBraid(usize),
    /// McCool group wP_n (basis-conjugating automorphisms)
    McCool(usize),
    /// upper McCool group wP_n^+
    UpperMcCool(usize),
    /// product of free groups F_1 x ... x F_{n-1}
    ProductOfFree(usize),
}

impl Family {
    pub fn param(&self) -> usize {
        match *self {
            Family::FreeGroup(n)
            | Family::Surface(n)
            | Family::PureBraid(n)
            | Family::McCool(n)
            | Family::UpperMcCool(n)
            | Family::ProductOfFree(n) => n,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            Family::FreeGroup(_) => "free",
            Family::Surface(_) => "surface",
            Family::PureBraid(_) => "pure-braid",
            Family::McCool(_) => "mccool",
            Family::UpperMcCool(_) => "upper-mccool",
            Family::ProductOfFree(_) => "product-free",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tag(), self.param())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = s
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("family `{s}` must look like name:param")))?;
        let p: usize = param
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad family parameter `{param}`")))?;
        match name.trim() {
            "free" => Ok(Family::FreeGroup(p)),
            "surface" => Ok(Family::Surface(p)),
            "pure-braid" => Ok(Family::PureBraid(p)),
            "mccool" => Ok(Family::McCool(p)),
            "upper-mccool" => Ok(Family::UpperMcCool(p)),
            "product-free" => Ok(Family::ProductOfFree(p)),
            other => Err(Error::Invalid(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankKind {
    Lcs,
    Chen,
}

impl fmt::Display for RankKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankKind::Lcs => write!(f, "lcs"),
            RankKind::Chen => write!(f, "chen"),
        }
    }
}

/// Whether a closed-form value is unconditional or only valid for large
/// degree (the wP_n Chen formula has an unspecified threshold).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueFlag {
    Exact,
    Asymptotic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    pub family: Family,
    pub kind: RankKind,
    /// values[k-1] is the degree-k rank
    pub values: Vec<u64>,
    pub flags: Vec<ValueFlag>,
}

impl RankTable {
    fn exact(family: Family, kind: RankKind, values: Vec<u64>) -> Self {
        let flags = vec![ValueFlag::Exact; values.len()];
        RankTable { family, kind, values, flags }
    }
}

fn mobius(n: u64) -> i64 {
    debug_assert!(n >= 1);
    let mut n = n;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

fn binom(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut c: u128 = 1;
    for i in 1..=b as u128 {
        c = c * (a as u128 - b as u128 + i) / i;
    }
    u64::try_from(c).expect("binomial fits u64 at desk scale")
}

fn to_u64(v: &BigInt) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::Invalid(format!("rank value {v} does not fit u64")))
}

/// Mobius inversion of a power-sum sequence: rank_k = (1/k) sum_{d|k} mu(d) s_{k/d},
/// where s is 1-indexed.
fn necklace(s: &[BigInt], big_k: usize) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(big_k);
    for k in 1..=big_k as u64 {
        let mut acc = BigInt::zero();
        for d in 1..=k {
            if k % d == 0 {
                acc += BigInt::from(mobius(d)) * &s[(k / d - 1) as usize];
            }
        }
        let k_big = BigInt::from(k);
        debug_assert!((&acc % &k_big).is_zero(), "necklace sum must divide by k");
        out.push(to_u64(&(acc / k_big))?);
    }
    Ok(out)
}

/// Witt formula: LCS ranks of the free group F_n.
pub fn witt_free(n: usize, big_k: usize) -> Result<RankTable> {
    if n < 1 {
        return Err(Error::Invalid("free group rank must be >= 1".into()));
    }
    let s: Vec<BigInt> = (1..=big_k as u32).map(|k| BigInt::from(n).pow(k)).collect();
    Ok(RankTable::exact(Family::FreeGroup(n), RankKind::Lcs, necklace(&s, big_k)?))
}

/// Chen ranks of the free group F_n.
pub fn chen_free(n: usize, big_k: usize) -> Result<RankTable> {
    if n < 1 {
        return Err(Error::Invalid("free group rank must be >= 1".into()));
    }
    let values = (1..=big_k as u64)
        .map(|k| if k == 1 { n as u64 } else { (k - 1) * binom(n as u64 + k - 2, k) })
        .collect();
    Ok(RankTable::exact(Family::FreeGroup(n), RankKind::Chen, values))
}

/// LCS ranks of the genus-g surface group: power sums of the inverse roots
/// of 1 - 2gt + t^2 fed through Mobius inversion, all in exact integers.
pub fn lcs_surface(g: usize, big_k: usize) -> Result<RankTable> {
    if g < 1 {
        return Err(Error::Invalid("genus must be >= 1".into()));
    }
    // s_k = alpha^k + beta^k with alpha+beta = 2g, alpha*beta = 1
    let mut s: Vec<BigInt> = Vec::with_capacity(big_k.max(2));
    let two_g = BigInt::from(2 * g);
    s.push(two_g.clone());
    s.push(&two_g * &two_g - BigInt::from(2));
    for k in 2..big_k {
        let next = &two_g * &s[k - 1] - &s[k - 2];
        s.push(next);
    }
    Ok(RankTable::exact(Family::Surface(g), RankKind::Lcs, necklace(&s, big_k)?))
}

/// Chen ranks of the genus-g surface group.
pub fn chen_surface(g: usize, big_k: usize) -> Result<RankTable> {
    if g < 1 {
        return Err(Error::Invalid("genus must be >= 1".into()));
    }
    let g = g as u64;
    let values = (1..=big_k as u64)
        .map(|k| {
            if k == 1 {
                2 * g
            } else {
                (k - 1) * binom(2 * g + k - 2, k) - binom(2 * g + k - 3, k - 2)
            }
        })
        .collect();
    Ok(RankTable::exact(Family::Surface(g as usize), RankKind::Chen, values))
}

fn braidlike_param(family: Family) -> Result<usize> {
    let n = family.param();
    if n < 2 {
        return Err(Error::Invalid(format!("{} needs parameter >= 2", family.tag())));
    }
    match family {
        Family::PureBraid(_) | Family::McCool(_) | Family::UpperMcCool(_) | Family::ProductOfFree(_) => Ok(n),
        other => Err(Error::Invalid(format!("{} is not a braid-like family", other.tag()))),
    }
}

/// LCS ranks for the braid-like families. P_n, wP_n^+, and the product of
/// free groups all share the ranks of F_1 x ... x F_{n-1}; no closed form is
/// on record for the full McCool group.
pub fn lcs_braidlike(family: Family, big_k: usize) -> Result<RankTable> {
    let n = braidlike_param(family)?;
    if matches!(family, Family::McCool(_)) {
        return Err(Error::NoClosedForm("LCS ranks of the full McCool group".into()));
    }
    let mut values = vec![0u64; big_k];
    for m in 1..n {
        let t = witt_free(m, big_k)?;
        for (acc, v) in values.iter_mut().zip(t.values) {
            *acc = acc.checked_add(v).ok_or_else(|| Error::Invalid("rank overflow".into()))?;
        }
    }
    Ok(RankTable::exact(family, RankKind::Lcs, values))
}

/// Chen ranks for the braid-like families. The wP_n closed form is only
/// asserted for large k, so every entry of that table carries the
/// `Asymptotic` flag.
pub fn chen_braidlike(family: Family, big_k: usize) -> Result<RankTable> {
    let n = braidlike_param(family)? as u64;
    match family {
        Family::PureBraid(_) => {
            let values = (1..=big_k as u64)
                .map(|k| match k {
                    1 => binom(n, 2),
                    2 => binom(n, 3),
                    _ => (k - 1) * binom(n + 1, 4),
                })
                .collect();
            Ok(RankTable::exact(family, RankKind::Chen, values))
        }
        Family::UpperMcCool(_) => {
            let values = (1..=big_k as u64)
                .map(|k| match k {
                    1 => binom(n, 2),
                    2 => binom(n, 3),
                    _ => binom(n + 1, 4) + (3..=k).map(|i| binom(n + i - 2, i + 1)).sum::<u64>(),
                })
                .collect();
            Ok(RankTable::exact(family, RankKind::Chen, values))
        }
        Family::McCool(_) => {
            let values: Vec<u64> = (1..=big_k as u64)
                .map(|k| (k - 1) * binom(n, 2) + (k * k - 1) * binom(n, 3))
                .collect();
            let flags = vec![ValueFlag::Asymptotic; values.len()];
            Ok(RankTable { family, kind: RankKind::Chen, values, flags })
        }
        Family::ProductOfFree(_) => {
            let mut values = vec![0u64; big_k];
            for m in 1..n as usize {
                let t = chen_free(m, big_k)?;
                for (acc, v) in values.iter_mut().zip(t.values) {
                    *acc = acc.checked_add(v).ok_or_else(|| Error::Invalid("rank overflow".into()))?;
                }
            }
            Ok(RankTable::exact(family, RankKind::Chen, values))
        }
        _ => unreachable!("braidlike_param filtered the family"),
    }
}

/// Rank table for any family/kind combination that has a closed form.
pub fn rank_table(family: Family, kind: RankKind, big_k: usize) -> Result<RankTable> {
    match (family, kind) {
        (Family::FreeGroup(n), RankKind::Lcs) => witt_free(n, big_k),
        (Family::FreeGroup(n), RankKind::Chen) => chen_free(n, big_k),
        (Family::Surface(g), RankKind::Lcs) => lcs_surface(g, big_k),
        (Family::Surface(g), RankKind::Chen) => chen_surface(g, big_k),
        (f, RankKind::Lcs) => lcs_braidlike(f, big_k),
        (f, RankKind::Chen) => chen_braidlike(f, big_k),
    }
}

/// Pairwise first-difference report: tables with different values at some
/// degree k have non-isomorphic graded Lie algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishReport {
    pub kind: RankKind,
    pub through: usize,
    /// (i, j, least k with a difference or None) over table indices i < j
    pub pairs: Vec<(usize, usize, Option<usize>)>,
}

pub fn distinguish(tables: &[RankTable]) -> Result<DistinguishReport> {
    let Some(first) = tables.first() else {
        return Ok(DistinguishReport { kind: RankKind::Chen, through: 0, pairs: Vec::new() });
    };
    for t in tables {
        if t.kind != first.kind {
            return Err(Error::Invalid("tables mix LCS and Chen kinds".into()));
        }
        if t.values.len() != first.values.len() {
            return Err(Error::Invalid("tables have different lengths".into()));
        }
    }
    let mut pairs = Vec::new();
    for i in 0..tables.len() {
        for j in (i + 1)..tables.len() {
            let at = tables[i]
                .values
                .iter()
                .zip(&tables[j].values)
                .position(|(a, b)| a != b)
                .map(|p| p + 1);
            pairs.push((i, j, at));
        }
    }
    Ok(DistinguishReport { kind: first.kind, through: first.values.len(), pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::lyndon_words;

    #[test]
    fn witt_values() {
        assert_eq!(witt_free(2, 8).unwrap().values, vec![2, 1, 2, 3, 6, 9, 18, 30]);
        assert_eq!(witt_free(1, 4).unwrap().values, vec![1, 0, 0, 0]);
        assert_eq!(witt_free(3, 2).unwrap().values[1], 3);
        assert!(witt_free(0, 3).is_err());
    }

    #[test]
    fn witt_matches_lyndon_counts() {
        for n in 1..=3 {
            let t = witt_free(n, 6).unwrap();
            for k in 1..=6 {
                assert_eq!(t.values[k - 1], lyndon_words(n, k).len() as u64, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn chen_free_values() {
        assert_eq!(chen_free(2, 5).unwrap().values, vec![2, 1, 2, 3, 4]);
        assert_eq!(chen_free(3, 4).unwrap().values[3], 15);
        assert_eq!(chen_free(1, 5).unwrap().values, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn surface_lcs_values() {
        assert_eq!(lcs_surface(1, 4).unwrap().values, vec![2, 0, 0, 0]);
        assert_eq!(lcs_surface(2, 4).unwrap().values, vec![4, 5, 16, 45]);
        assert_eq!(lcs_surface(3, 1).unwrap().values, vec![6]);
    }

    #[test]
    fn surface_chen_values() {
        let t = chen_surface(2, 4).unwrap();
        assert_eq!(t.values, vec![4, 5, 16, 35]);
        assert_eq!(chen_surface(1, 3).unwrap().values, vec![2, 0, 0]);
    }

    #[test]
    fn braidlike_tables() {
        assert_eq!(chen_braidlike(Family::PureBraid(4), 4).unwrap().values, vec![6, 4, 10, 15]);
        assert_eq!(chen_braidlike(Family::UpperMcCool(4), 4).unwrap().values, vec![6, 4, 10, 16]);
        assert_eq!(chen_braidlike(Family::ProductOfFree(4), 4).unwrap().values, vec![6, 4, 10, 18]);
        assert_eq!(lcs_braidlike(Family::PureBraid(4), 4).unwrap().values, vec![6, 4, 10, 21]);
        assert_eq!(
            lcs_braidlike(Family::ProductOfFree(4), 4).unwrap().values,
            lcs_braidlike(Family::UpperMcCool(4), 4).unwrap().values
        );
        assert!(matches!(lcs_braidlike(Family::McCool(4), 4), Err(Error::NoClosedForm(_))));
        let wp = chen_braidlike(Family::McCool(4), 3).unwrap();
        assert!(wp.flags.iter().all(|f| *f == ValueFlag::Asymptotic));
        assert_eq!(wp.values[2], 2 * 6 + 8 * 4);
        assert!(chen_braidlike(Family::PureBraid(1), 3).is_err());
        assert!(chen_braidlike(Family::FreeGroup(2), 3).is_err());
    }

    #[test]
    fn chen_equals_lcs_through_degree_three() {
        let mut cases: Vec<(RankTable, RankTable)> = Vec::new();
        for n in 1..=4 {
            cases.push((witt_free(n, 3).unwrap(), chen_free(n, 3).unwrap()));
        }
        for g in 1..=3 {
            cases.push((lcs_surface(g, 3).unwrap(), chen_surface(g, 3).unwrap()));
        }
        for n in 2..=5 {
            for f in [Family::PureBraid(n), Family::UpperMcCool(n), Family::ProductOfFree(n)] {
                cases.push((lcs_braidlike(f, 3).unwrap(), chen_braidlike(f, 3).unwrap()));
            }
        }
        for (lcs, chen) in cases {
            assert_eq!(lcs.values, chen.values, "family {}", lcs.family);
        }
    }

    #[test]
    fn distinguish_reports() {
        let tables = vec![
            chen_braidlike(Family::PureBraid(4), 4).unwrap(),
            chen_braidlike(Family::UpperMcCool(4), 4).unwrap(),
            chen_braidlike(Family::ProductOfFree(4), 4).unwrap(),
        ];
        let rep = distinguish(&tables).unwrap();
        assert_eq!(rep.pairs, vec![(0, 1, Some(4)), (0, 2, Some(4)), (1, 2, Some(4))]);

        let same = vec![
            lcs_braidlike(Family::PureBraid(4), 6).unwrap(),
            lcs_braidlike(Family::ProductOfFree(4), 6).unwrap(),
        ];
        let rep = distinguish(&same).unwrap();
        assert_eq!(rep.pairs, vec![(0, 1, None)]);

        let mixed = vec![
            witt_free(2, 3).unwrap(),
            chen_free(2, 3).unwrap(),
        ];
        assert!(distinguish(&mixed).is_err());
    }

    #[test]
    fn family_round_trip() {
        for s in ["free:3", "surface:2", "pure-braid:4", "mccool:5", "upper-mccool:4", "product-free:6"] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("braid".parse::<Family>().is_err());
        assert!("free:x".parse::<Family>().is_err());
    }
}
