use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expand::{Expansion, ExpansionKind};
use crate::lie::{dynkin_project, lie_bracket, lie_ideal_build, lie_part, lie_quotient_dims, lyndon_words, LiePoly};
use crate::ratmat::RowSpace;
use crate::series::Mono;
use crate::words::GroupPresentation;
use crate::Rat;

/// Truncated presentation of the Malcev Lie algebra of a finitely presented
/// group: the free Lie algebra on the generators modulo the closed ideal
/// generated by the logarithms of the expanded relators.
#[derive(Clone, Debug)]
pub struct MalcevPresentation {
    rank: usize,
    level: usize,
    kind: ExpansionKind,
    relator_logs: Vec<LiePoly>,
    lowest_degree_parts: Vec<LiePoly>,
}

impl MalcevPresentation {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    /// True when the expansion kind carries group elements to group-like
    /// series, so the relator logs are honest Lie elements. The Magnus kind
    /// is accepted for experiments but its logs pass through the bracketing
    /// projector, and this flag records that caveat.
    pub fn taylor_kind(&self) -> bool {
        self.kind == ExpansionKind::Exponential
    }

    pub fn relator_logs(&self) -> &[LiePoly] {
        &self.relator_logs
    }

    pub fn lowest_degree_parts(&self) -> &[LiePoly] {
        &self.lowest_degree_parts
    }
}

/// Logs of expanded relators through degree `level`.
pub fn malcev_present(p: &GroupPresentation, e: &Expansion, level: usize) -> Result<MalcevPresentation> {
    if e.target().is_some() {
        return Err(Error::QuotientTarget);
    }
    if e.rank() != p.rank() {
        return Err(Error::RankMismatch(e.rank(), p.rank()));
    }
    if e.level() < level {
        return Err(Error::LevelMismatch(e.level(), level));
    }
    let mut relator_logs = Vec::with_capacity(p.relators().len());
    let mut lowest = Vec::with_capacity(p.relators().len());
    for r in p.relators() {
        let log = e.expand(r)?.truncated(level)?.log()?;
        let poly = match e.kind() {
            ExpansionKind::Exponential => dynkin_project(&log)?,
            ExpansionKind::Magnus => lie_part(&log)?,
        };
        lowest.push(poly.leading_form());
        relator_logs.push(poly);
    }
    Ok(MalcevPresentation {
        rank: p.rank(),
        level,
        kind: e.kind(),
        relator_logs,
        lowest_degree_parts: lowest,
    })
}

/// Two rank sequences whose agreement is a necessary condition for
/// filtered-formality; disagreement pinpoints the first inconsistent degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProbe {
    /// quotient by the ideal generated by the lowest-degree parts alone
    pub ranks_holonomy_like: Vec<u64>,
    /// leading forms of the saturated ideal generated by the full logs
    pub ranks_filtration: Vec<u64>,
}

impl RankProbe {
    /// Largest degree d such that the sequences agree at every degree <= d.
    pub fn agree_through(&self) -> usize {
        self.ranks_holonomy_like
            .iter()
            .zip(&self.ranks_filtration)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn first_disagreement(&self) -> Option<usize> {
        let d = self.agree_through();
        if d == self.ranks_holonomy_like.len() {
            None
        } else {
            Some(d + 1)
        }
    }
}

/// Compares the graded quotient by the lowest-degree parts against the
/// associated graded of the full inhomogeneous relator-log ideal.
pub fn graded_rank_probe(mp: &MalcevPresentation) -> Result<RankProbe> {
    let ideal = lie_ideal_build(mp.rank, mp.level, &mp.lowest_degree_parts)?;
    let ranks_holonomy_like = lie_quotient_dims(&ideal);
    let ranks_filtration = filtration_graded_dims(mp.rank, mp.level, &mp.relator_logs)?;
    Ok(RankProbe { ranks_holonomy_like, ranks_filtration })
}

fn truncate_poly(p: &LiePoly, level: usize) -> LiePoly {
    let terms: Vec<(Mono, Rat)> = p
        .terms()
        .filter(|(w, _)| w.len() <= level)
        .map(|(w, c)| (w.clone(), c.clone()))
        .collect();
    LiePoly::from_terms(p.rank(), terms).expect("terms come from a valid poly")
}

/// Graded dimensions of lie(V) / <<logs>> computed by saturating the
/// inhomogeneous ideal under bracketing with the generators, keeping an
/// echelon basis over all Lyndon words of degree <= level ordered degree-major.
/// Each echelon row's pivot sits in its leading-degree block, so counting
/// pivots per block measures the span of leading forms degree by degree.
fn filtration_graded_dims(rank: usize, level: usize, logs: &[LiePoly]) -> Result<Vec<u64>> {
    let lyndon: Vec<Vec<Mono>> = (0..=level).map(|d| lyndon_words(rank, d)).collect();
    let mut offset = vec![0usize; level + 2];
    for d in 1..=level {
        offset[d + 1] = offset[d] + lyndon[d].len();
    }
    let total = offset[level + 1];
    let index: Vec<HashMap<Mono, usize>> = lyndon
        .iter()
        .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
        .collect();
    if total == 0 {
        return Ok(vec![0; level]);
    }
    let vec_of = |p: &LiePoly| -> Vec<Rat> {
        let mut v = vec![Rat::new(0.into(), 1.into()); total];
        for (w, c) in p.terms() {
            v[offset[w.len()] + index[w.len()][w]] = c.clone();
        }
        v
    };
    let mut space = RowSpace::new(total);
    let mut queue: Vec<LiePoly> = logs.iter().map(|p| truncate_poly(p, level)).collect();
    let gens: Vec<LiePoly> = (1..=rank).map(|a| LiePoly::generator(rank, a)).collect::<Result<_>>()?;
    while let Some(p) = queue.pop() {
        if p.is_zero() || !space.insert(vec_of(&p)) {
            continue;
        }
        if p.lowest_degree().is_some_and(|d| d < level) {
            let clipped = truncate_poly(&p, level - 1);
            for g in &gens {
                queue.push(truncate_poly(&lie_bracket(&clipped, g)?, level));
            }
        }
    }
    let mut counts = vec![0u64; level + 1];
    for &piv in space.pivots() {
        let d = (1..=level).find(|&d| piv < offset[d + 1]).expect("pivot inside blocks");
        counts[d] += 1;
    }
    Ok((1..=level).map(|d| lyndon[d].len() as u64 - counts[d]).collect())
}
