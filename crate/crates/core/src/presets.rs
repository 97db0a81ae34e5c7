use crate::error::{Error, Result};
use crate::lie::{lie_bracket, LiePoly};
use crate::series::Series;
use crate::words::{commutator, Word};
use crate::NcSeries;

/// Generator index (1-based) of the pair (i, j), i < j, among the C(n,2)
/// pairs in lexicographic order; this is the X_ij coordinate convention for
/// braid-like algebras.
pub fn pair_index(n: usize, i: usize, j: usize) -> Result<usize> {
    if i == 0 || j == 0 || i >= j || j > n {
        return Err(Error::Invalid(format!("({i},{j}) is not an ordered pair in 1..={n}")));
    }
    Ok((i - 1) * (2 * n - i) / 2 + (j - i))
}

fn assoc_commutator(rank: usize, level: usize, a: usize, b: usize) -> Result<NcSeries> {
    let x = Series::generator(rank, level, a)?;
    let y = Series::generator(rank, level, b)?;
    x.mul(&y)?.sub(&y.mul(&x)?)
}

/// [X_a, X_b] for all a < b: the ideal of the free commutative algebra.
pub fn commutative_ideal_gens(rank: usize, level: usize) -> Result<Vec<NcSeries>> {
    let mut gens = Vec::new();
    for a in 1..=rank {
        for b in (a + 1)..=rank {
            gens.push(assoc_commutator(rank, level, a, b)?);
        }
    }
    Ok(gens)
}

/// The infinitesimal pure braid relations on the C(n,2) generators X_ij:
/// [X_ij, X_kl] for disjoint pairs and [X_ij, X_il + X_jl] for each triple,
/// as Lie elements.
pub fn pure_braid_lie_gens(n: usize) -> Result<Vec<LiePoly>> {
    if n < 2 {
        return Err(Error::Invalid("pure braid relations need n >= 2".into()));
    }
    let rank = n * (n - 1) / 2;
    let gen = |i: usize, j: usize| -> Result<LiePoly> {
        LiePoly::generator(rank, pair_index(n, i, j)?)
    };
    let mut gens = Vec::new();
    // disjoint pairs commute
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in (i + 1)..=n {
                for l in (k + 1)..=n {
                    if k != j && l != j {
                        gens.push(lie_bracket(&gen(i, j)?, &gen(k, l)?)?);
                    }
                }
            }
        }
    }
    // triple relations
    for a in 1..=n {
        for b in (a + 1)..=n {
            for c in (b + 1)..=n {
                let ab = gen(a, b)?;
                let ac = gen(a, c)?;
                let bc = gen(b, c)?;
                gens.push(lie_bracket(&ab, &ac.add(&bc)?)?);
                gens.push(lie_bracket(&ac, &ab.add(&bc)?)?);
                gens.push(lie_bracket(&bc, &ab.add(&ac)?)?);
            }
        }
    }
    Ok(gens)
}

/// The same relations as degree-2 elements of the tensor algebra.
pub fn pure_braid_assoc_gens(n: usize, level: usize) -> Result<Vec<NcSeries>> {
    let gens = pure_braid_lie_gens(n)?;
    gens.iter().map(|g| crate::lie::lie_embed(g, level)).collect()
}

/// Sum of [X_{2i-1}, X_{2i}] over i = 1..g: the genus-g surface relation.
pub fn surface_lie_gen(g: usize) -> Result<LiePoly> {
    if g < 1 {
        return Err(Error::Invalid("genus must be >= 1".into()));
    }
    let rank = 2 * g;
    let mut acc = LiePoly::zero(rank);
    for i in 1..=g {
        let a = LiePoly::generator(rank, 2 * i - 1)?;
        let b = LiePoly::generator(rank, 2 * i)?;
        acc = acc.add(&lie_bracket(&a, &b)?)?;
    }
    Ok(acc)
}

/// The surface relation as a degree-2 tensor element.
pub fn surface_assoc_gen(g: usize, level: usize) -> Result<NcSeries> {
    crate::lie::lie_embed(&surface_lie_gen(g)?, level)
}

/// The surface relator word: product of the group commutators
/// [x_{2i-1}, x_{2i}] over i = 1..g.
pub fn surface_relator_word(g: usize) -> Result<Word> {
    if g < 1 {
        return Err(Error::Invalid("genus must be >= 1".into()));
    }
    let rank = 2 * g;
    let mut w = Word::empty(rank);
    for i in 1..=g {
        let a = Word::generator(rank, 2 * i - 1)?;
        let b = Word::generator(rank, 2 * i)?;
        w = w.mul(&commutator(&a, &b)?)?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{lie_ideal_build, lie_quotient_dims};
    use crate::series::GradedIdeal;

    #[test]
    fn pair_indexing_is_lexicographic() {
        assert_eq!(pair_index(4, 1, 2).unwrap(), 1);
        assert_eq!(pair_index(4, 1, 3).unwrap(), 2);
        assert_eq!(pair_index(4, 1, 4).unwrap(), 3);
        assert_eq!(pair_index(4, 2, 3).unwrap(), 4);
        assert_eq!(pair_index(4, 2, 4).unwrap(), 5);
        assert_eq!(pair_index(4, 3, 4).unwrap(), 6);
        assert!(pair_index(4, 2, 2).is_err());
        assert!(pair_index(4, 0, 2).is_err());
        assert!(pair_index(4, 2, 5).is_err());
    }

    #[test]
    fn commutative_quotient_has_binomial_dims() {
        let gens = commutative_ideal_gens(3, 4).unwrap();
        let ideal = GradedIdeal::build(3, 4, &gens).unwrap();
        assert_eq!(ideal.hilbert(), vec![1, 3, 6, 10, 15]);
    }

    #[test]
    fn pure_braid_three_strands() {
        let gens = pure_braid_lie_gens(3).unwrap();
        let ideal = lie_ideal_build(3, 4, &gens).unwrap();
        assert_eq!(lie_quotient_dims(&ideal), vec![3, 1, 2, 3]);
    }

    #[test]
    fn surface_relation_matches_manual_ideal() {
        let g = surface_lie_gen(2).unwrap();
        let ideal = lie_ideal_build(4, 3, &[g]).unwrap();
        assert_eq!(lie_quotient_dims(&ideal), vec![4, 5, 16]);
        let w = surface_relator_word(2).unwrap();
        assert_eq!(w.letters(), &[1, 2, -1, -2, 3, 4, -3, -4]);
    }
}
