use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::presets::pair_index;
use crate::series::Series;
use crate::{NcSeries, NumSeries};

const GEOM_EPS: f64 = 1e-9;
const SING_EPS: f64 = 1e-8;
const MAX_STEPS_PER_TRACK: usize = 1 << 14;

/// Where a loop lives: a plane with marked punctures (one moving point,
/// forms dz/(z - p_i)) or the configuration space of n ordered strands
/// (forms dlog(z_i - z_j), generators indexed by pairs).
#[derive(Clone, Debug, PartialEq)]
pub enum Ambient {
    PuncturedPlane(Vec<Complex64>),
    Configuration(usize),
}

impl Ambient {
    /// Number of series generators.
    pub fn rank(&self) -> usize {
        match self {
            Ambient::PuncturedPlane(ps) => ps.len(),
            Ambient::Configuration(n) => n * (n - 1) / 2,
        }
    }

    /// Number of moving coordinates a segment must carry.
    pub fn coords(&self) -> usize {
        match self {
            Ambient::PuncturedPlane(_) => 1,
            Ambient::Configuration(n) => *n,
        }
    }
}

/// One coordinate's path over a segment, parametrized by t in [0,1].
#[derive(Clone, Debug, PartialEq)]
pub enum Track {
    Line { from: Complex64, to: Complex64 },
    /// start angle plus signed sweep; positive sweep is counterclockwise
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Track {
    pub fn line(from: Complex64, to: Complex64) -> Track {
        Track::Line { from, to }
    }

    /// Arc from endpoint data. Coincident endpoints mean a full turn in the
    /// chosen direction.
    pub fn arc(from: Complex64, to: Complex64, center: Complex64, ccw: bool) -> Result<Track> {
        let r1 = (from - center).norm();
        let r2 = (to - center).norm();
        if r1 < GEOM_EPS || (r1 - r2).abs() > GEOM_EPS * r1.max(1.0) {
            return Err(Error::InvalidLoop(format!(
                "arc endpoints at radii {r1} and {r2} from the center"
            )));
        }
        let start = (from - center).arg();
        let end = (to - center).arg();
        let mut sweep = end - start;
        if ccw {
            while sweep <= GEOM_EPS {
                sweep += TAU;
            }
        } else {
            while sweep >= -GEOM_EPS {
                sweep -= TAU;
            }
        }
        Ok(Track::Arc { center, radius: r1, start, sweep })
    }

    pub fn at(&self, t: f64) -> Complex64 {
        match self {
            Track::Line { from, to } => from + (to - from) * t,
            Track::Arc { center, radius, start, sweep } => {
                center + Complex64::from_polar(*radius, start + sweep * t)
            }
        }
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        match self {
            Track::Line { from, to } => to - from,
            Track::Arc { center: _, radius, start, sweep } => {
                Complex64::new(0.0, *sweep) * Complex64::from_polar(*radius, start + sweep * t)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0)
    }

    pub fn reversed(&self) -> Track {
        match self {
            Track::Line { from, to } => Track::Line { from: *to, to: *from },
            Track::Arc { center, radius, start, sweep } => Track::Arc {
                center: *center,
                radius: *radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }
}

/// Simultaneous motion of all coordinates over one parameter interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub tracks: Vec<Track>,
}

impl Segment {
    /// A segment that keeps every coordinate except `moving` fixed.
    pub fn solo(positions: &[Complex64], moving: usize, track: Track) -> Result<Segment> {
        if moving >= positions.len() {
            return Err(Error::InvalidLoop(format!("no coordinate {moving}")));
        }
        let tracks = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| if i == moving { track.clone() } else { Track::line(p, p) })
            .collect();
        Ok(Segment { tracks })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub ambient: Ambient,
    pub segments: Vec<Segment>,
}

impl Loop {
    pub fn new(ambient: Ambient, segments: Vec<Segment>) -> Result<Loop> {
        let lp = Loop { ambient, segments };
        lp.validate()?;
        Ok(lp)
    }

    /// Continuity, closure, arc sanity, and sampled singularity avoidance.
    pub fn validate(&self) -> Result<()> {
        let coords = self.ambient.coords();
        if self.segments.is_empty() {
            return Err(Error::InvalidLoop("a loop needs at least one segment".into()));
        }
        for (si, seg) in self.segments.iter().enumerate() {
            if seg.tracks.len() != coords {
                return Err(Error::InvalidLoop(format!(
                    "segment {si} has {} tracks, ambient needs {coords}",
                    seg.tracks.len()
                )));
            }
            let next = &self.segments[(si + 1) % self.segments.len()];
            for (ci, tr) in seg.tracks.iter().enumerate() {
                if let Track::Arc { radius, .. } = tr {
                    if *radius < GEOM_EPS {
                        return Err(Error::InvalidLoop(format!("segment {si} arc radius {radius}")));
                    }
                }
                let gap = (tr.end() - next.tracks[ci].start()).norm();
                if gap > GEOM_EPS {
                    return Err(Error::InvalidLoop(format!(
                        "coordinate {ci} jumps by {gap:.3e} after segment {si}"
                    )));
                }
            }
            for k in 0..=32 {
                let t = k as f64 / 32.0;
                if let Err(e) = self.clearance(seg, t) {
                    return Err(match e {
                        Error::InvalidLoop(msg) => {
                            Error::InvalidLoop(format!("segment {si}, t={t}: {msg}"))
                        }
                        other => other,
                    });
                }
            }
        }
        Ok(())
    }

    fn clearance(&self, seg: &Segment, t: f64) -> Result<()> {
        match &self.ambient {
            Ambient::PuncturedPlane(ps) => {
                let z = seg.tracks[0].at(t);
                for (i, p) in ps.iter().enumerate() {
                    if (z - p).norm() < SING_EPS {
                        return Err(Error::InvalidLoop(format!("path touches puncture {}", i + 1)));
                    }
                }
            }
            Ambient::Configuration(n) => {
                let zs: Vec<Complex64> = seg.tracks.iter().map(|tr| tr.at(t)).collect();
                for i in 0..*n {
                    for j in (i + 1)..*n {
                        if (zs[i] - zs[j]).norm() < SING_EPS {
                            return Err(Error::InvalidLoop(format!(
                                "strands {} and {} collide",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Traversal in the opposite direction.
    pub fn inverse(&self) -> Loop {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|seg| Segment { tracks: seg.tracks.iter().map(Track::reversed).collect() })
            .collect();
        Loop { ambient: self.ambient.clone(), segments }
    }
}

/// Concatenation; the second loop must start where the first one ends.
pub fn concat(a: &Loop, b: &Loop) -> Result<Loop> {
    if a.ambient != b.ambient {
        return Err(Error::InvalidLoop("loops live in different ambients".into()));
    }
    let mut segments = a.segments.clone();
    segments.extend(b.segments.iter().cloned());
    Loop::new(a.ambient.clone(), segments)
}

/// Full counterclockwise circle around `center` starting at center + radius.
pub fn circle(ambient: Ambient, center: Complex64, radius: f64) -> Result<Loop> {
    let from = center + radius;
    let tr = Track::arc(from, from, center, true)?;
    Loop::new(ambient, vec![Segment { tracks: vec![tr] }])
}

/// Based loop around puncture `which` (1-based): straight spoke from the
/// basepoint to the circle of the given radius, once around, and back.
pub fn lollipop(
    punctures: Vec<Complex64>,
    which: usize,
    basepoint: Complex64,
    radius: f64,
) -> Result<Loop> {
    if which == 0 || which > punctures.len() {
        return Err(Error::InvalidLoop(format!("no puncture {which}")));
    }
    let p = punctures[which - 1];
    let dir = basepoint - p;
    if dir.norm() <= radius {
        return Err(Error::InvalidLoop("basepoint inside the circle".into()));
    }
    let on_circle = p + dir / dir.norm() * radius;
    let spoke = Track::line(basepoint, on_circle);
    let turn = Track::arc(on_circle, on_circle, p, true)?;
    let back = Track::line(on_circle, basepoint);
    Loop::new(
        Ambient::PuncturedPlane(punctures),
        vec![
            Segment { tracks: vec![spoke] },
            Segment { tracks: vec![turn] },
            Segment { tracks: vec![back] },
        ],
    )
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// Degree-1 value of the connection on a segment at parameter t:
/// sum over generators of the normalized form value times X_gen.
fn connection(lp: &Loop, seg: &Segment, t: f64, level: usize) -> Result<NumSeries> {
    let rank = lp.ambient.rank();
    let mut a = Series::zero(rank, level);
    match &lp.ambient {
        Ambient::PuncturedPlane(ps) => {
            let z = seg.tracks[0].at(t);
            let v = seg.tracks[0].velocity(t);
            for (i, p) in ps.iter().enumerate() {
                let den = z - p;
                if den.norm() < 1e-13 {
                    return Err(Error::InvalidLoop("path meets a puncture".into()));
                }
                a.add_term(vec![(i + 1) as u8], v / den / two_pi_i());
            }
        }
        Ambient::Configuration(n) => {
            let zs: Vec<Complex64> = seg.tracks.iter().map(|tr| tr.at(t)).collect();
            let vs: Vec<Complex64> = seg.tracks.iter().map(|tr| tr.velocity(t)).collect();
            for i in 1..=*n {
                for j in (i + 1)..=*n {
                    let den = zs[i - 1] - zs[j - 1];
                    if den.norm() < 1e-13 {
                        return Err(Error::InvalidLoop("strands meet".into()));
                    }
                    let g = pair_index(*n, i, j)?;
                    a.add_term(vec![g as u8], (vs[i - 1] - vs[j - 1]) / den / two_pi_i());
                }
            }
        }
    }
    Ok(a)
}

fn scale(s: &NumSeries, f: f64) -> NumSeries {
    s.scale(&Complex64::new(f, 0.0))
}

/// One classical Runge-Kutta step of T' = T * A(t).
fn rk4_step(lp: &Loop, seg: &Segment, t: f64, h: f64, big_t: &NumSeries) -> Result<NumSeries> {
    let level = big_t.level();
    let a1 = connection(lp, seg, t, level)?;
    let a2 = connection(lp, seg, t + h / 2.0, level)?;
    let a4 = connection(lp, seg, t + h, level)?;
    let k1 = big_t.mul(&a1)?;
    let k2 = big_t.add(&scale(&k1, h / 2.0))?.mul(&a2)?;
    let k3 = big_t.add(&scale(&k2, h / 2.0))?.mul(&a2)?;
    let k4 = big_t.add(&scale(&k3, h))?.mul(&a4)?;
    let incr = k1.add(&scale(&k2, 2.0))?.add(&scale(&k3, 2.0))?.add(&k4)?;
    big_t.add(&scale(&incr, h / 6.0))
}

fn sweep_loop(lp: &Loop, level: usize, steps: usize) -> Result<NumSeries> {
    let mut t_series = Series::one(lp.ambient.rank(), level);
    for seg in &lp.segments {
        let h = 1.0 / steps as f64;
        for k in 0..steps {
            t_series = rk4_step(lp, seg, k as f64 * h, h, &t_series)?;
        }
    }
    Ok(t_series)
}

fn max_diff(a: &NumSeries, b: &NumSeries) -> f64 {
    let mut m: f64 = 0.0;
    for (w, c) in a.terms() {
        m = m.max((c - b.coeff(w)).norm());
    }
    for (w, c) in b.terms() {
        m = m.max((c - a.coeff(w)).norm());
    }
    m
}

/// Parallel transport of the truncated connection around the loop. The
/// degree-d coefficient of the result is the order-d iterated integral, with
/// the earliest-time form attached to the leftmost letter, so transport is
/// multiplicative under loop concatenation. Step count doubles until two
/// successive sweeps agree within tol/10.
pub fn transport(lp: &Loop, level: usize, tol: f64) -> Result<NumSeries> {
    if level < 1 {
        return Err(Error::Invalid("transport level must be >= 1".into()));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    lp.validate()?;
    let mut steps = 8;
    let mut prev = sweep_loop(lp, level, steps)?;
    loop {
        steps *= 2;
        if steps > MAX_STEPS_PER_TRACK {
            return Err(Error::StepUnderflow(steps));
        }
        let cur = sweep_loop(lp, level, steps)?;
        if max_diff(&cur, &prev) < tol / 10.0 {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// Max-norm of coproduct(s) - s (x) s: zero exactly when s is group-like.
pub fn num_grouplike_defect(s: &NumSeries) -> f64 {
    let cop = s.coproduct();
    let mut m: f64 = 0.0;
    let mut seen = std::collections::BTreeSet::new();
    for ((l, r), c) in cop.terms() {
        let t = s.coeff(l) * s.coeff(r);
        m = m.max((c - t).norm());
        seen.insert((l.clone(), r.clone()));
    }
    // tensor-square terms the coproduct misses entirely
    for (l, cl) in s.terms() {
        for (r, cr) in s.terms() {
            if l.len() + r.len() <= s.level() && !seen.contains(&(l.clone(), r.clone())) {
                m = m.max((cl * cr).norm());
            }
        }
    }
    m
}

/// Truncated product of two transported series.
pub fn num_mul(a: &NumSeries, b: &NumSeries) -> Result<NumSeries> {
    a.mul(b)
}

/// Max absolute difference between a numeric series and an exact one.
pub fn compare_symbolic(s: &NumSeries, t: &NcSeries) -> Result<f64> {
    if s.rank() != t.rank() {
        return Err(Error::RankMismatch(s.rank(), t.rank()));
    }
    if s.level() != t.level() {
        return Err(Error::LevelMismatch(s.level(), t.level()));
    }
    let mut m: f64 = 0.0;
    for (w, c) in s.terms() {
        let e = t.coeff(w).to_f64().unwrap_or(f64::NAN);
        m = m.max((c - Complex64::new(e, 0.0)).norm());
    }
    for (w, c) in t.terms() {
        if s.coeff(w).norm() == 0.0 {
            m = m.max(c.to_f64().unwrap_or(f64::NAN).abs());
        }
    }
    Ok(m)
}
