//! Exact interval/arc combinatorics on the line and on circles of rational
//! circumference: intersections, containment, covers, pairwise-disjoint
//! families, and the factorization gate for Cech machinery.
//!
//! All endpoints are rational and every predicate is decided exactly.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{rat, ratio, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Line,
    Circle { circumference: Rational },
}

impl Ambient {
    pub fn circle(circumference: Rational) -> Result<Self> {
        if circumference <= Rational::zero() {
            return Err(Error::Domain("circumference must be positive".into()));
        }
        Ok(Ambient::Circle { circumference })
    }
}

/// An open arc. Line arcs are bounded open intervals; circle arcs are
/// proper (length strictly less than the circumference), with start
/// normalized into [0, circumference).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arc {
    Interval { lo: Rational, hi: Rational },
    CircleArc { start: Rational, len: Rational },
}

impl Arc {
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Domain(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Arc::Interval { lo, hi })
    }

    pub fn circle_arc(ambient: &Ambient, start: Rational, len: Rational) -> Result<Self> {
        let Ambient::Circle { circumference } = ambient else {
            return Err(Error::Domain("circle arc needs a circle ambient".into()));
        };
        if len <= Rational::zero() || &len >= circumference {
            return Err(Error::Domain(format!(
                "arc length {len} must lie in (0, {circumference})"
            )));
        }
        Ok(Arc::CircleArc { start: modulo(&start, circumference), len })
    }

    pub fn len(&self) -> Rational {
        match self {
            Arc::Interval { lo, hi } => hi - lo,
            Arc::CircleArc { len, .. } => len.clone(),
        }
    }

    /// Scale all endpoints by a positive factor (dilation of the ambient).
    pub fn dilate(&self, factor: &Rational) -> Arc {
        match self {
            Arc::Interval { lo, hi } => Arc::Interval { lo: lo * factor, hi: hi * factor },
            Arc::CircleArc { start, len } => {
                Arc::CircleArc { start: start * factor, len: len * factor }
            }
        }
    }
}

fn modulo(x: &Rational, m: &Rational) -> Rational {
    let q = (x / m).floor();
    x - q * m
}

/// Membership of a point in an open arc.
pub fn arc_contains_point(ambient: &Ambient, arc: &Arc, p: &Rational) -> bool {
    match (ambient, arc) {
        (Ambient::Line, Arc::Interval { lo, hi }) => lo < p && p < hi,
        (Ambient::Circle { circumference }, Arc::CircleArc { start, len }) => {
            let off = modulo(&(p - start), circumference);
            off > Rational::zero() && &off < len
        }
        _ => false,
    }
}

/// Intersection as a list of disjoint arcs (0, 1 or 2 components).
pub fn arc_intersection(ambient: &Ambient, a: &Arc, b: &Arc) -> Vec<Arc> {
    match (ambient, a, b) {
        (Ambient::Line, Arc::Interval { lo: l1, hi: h1 }, Arc::Interval { lo: l2, hi: h2 }) => {
            let lo = l1.max(l2).clone();
            let hi = h1.min(h2).clone();
            if lo < hi {
                vec![Arc::Interval { lo, hi }]
            } else {
                Vec::new()
            }
        }
        (
            Ambient::Circle { circumference },
            Arc::CircleArc { start: s1, len: l1 },
            Arc::CircleArc { start: s2, len: l2 },
        ) => {
            // work in offsets from s1
            let d = modulo(&(s2 - s1), circumference);
            let mut pieces: Vec<(Rational, Rational)> = Vec::new();
            // b covers offsets (d, d+l2), split at the wrap point
            let end = &d + l2;
            if end <= *circumference {
                pieces.push((d, end));
            } else {
                pieces.push((d.clone(), circumference.clone()));
                pieces.push((Rational::zero(), &end - circumference));
            }
            let mut out = Vec::new();
            for (u, v) in pieces {
                let lo = u.max(Rational::zero());
                let hi = v.min(l1.clone());
                if lo < hi {
                    out.push(Arc::CircleArc {
                        start: modulo(&(s1 + &lo), circumference),
                        len: &hi - &lo,
                    });
                }
            }
            out.sort_by(|x, y| arc_sort_key(x).cmp(&arc_sort_key(y)));
            out
        }
        _ => Vec::new(),
    }
}

fn arc_sort_key(a: &Arc) -> (Rational, Rational) {
    match a {
        Arc::Interval { lo, hi } => (lo.clone(), hi.clone()),
        Arc::CircleArc { start, len } => (start.clone(), len.clone()),
    }
}

/// Intersect an open set (disjoint arcs) with one more arc.
pub fn intersect_open(ambient: &Ambient, open: &[Arc], arc: &Arc) -> Vec<Arc> {
    let mut out = Vec::new();
    for c in open {
        out.extend(arc_intersection(ambient, c, arc));
    }
    out.sort_by(|x, y| arc_sort_key(x).cmp(&arc_sort_key(y)));
    out
}

/// The common intersection of several arcs, as disjoint components.
pub fn intersect_arcs(ambient: &Ambient, arcs: &[&Arc]) -> Vec<Arc> {
    let Some((first, rest)) = arcs.split_first() else { return Vec::new() };
    let mut acc = vec![(*first).clone()];
    for a in rest {
        acc = intersect_open(ambient, &acc, a);
        if acc.is_empty() {
            break;
        }
    }
    acc
}

pub fn arcs_disjoint(ambient: &Ambient, a: &Arc, b: &Arc) -> bool {
    arc_intersection(ambient, a, b).is_empty()
}

/// Does `outer` contain `inner`?
pub fn arc_contains_arc(ambient: &Ambient, outer: &Arc, inner: &Arc) -> bool {
    match (ambient, outer, inner) {
        (Ambient::Line, Arc::Interval { lo: l1, hi: h1 }, Arc::Interval { lo: l2, hi: h2 }) => {
            l1 <= l2 && h2 <= h1
        }
        (
            Ambient::Circle { circumference },
            Arc::CircleArc { start: s1, len: l1 },
            Arc::CircleArc { start: s2, len: l2 },
        ) => {
            let d = modulo(&(s2 - s1), circumference);
            &d + l2 <= *l1
        }
        _ => false,
    }
}

/// Offset of an inner arc's start within an outer arc, used for the
/// left-to-right multiplication order after cutting the circle in the
/// complement of the outer arc.
pub fn offset_within(ambient: &Ambient, outer: &Arc, inner: &Arc) -> Option<Rational> {
    if !arc_contains_arc(ambient, outer, inner) {
        return None;
    }
    match (ambient, outer, inner) {
        (Ambient::Line, Arc::Interval { lo: l1, .. }, Arc::Interval { lo: l2, .. }) => {
            Some(l2 - l1)
        }
        (
            Ambient::Circle { circumference },
            Arc::CircleArc { start: s1, .. },
            Arc::CircleArc { start: s2, .. },
        ) => Some(modulo(&(s2 - s1), circumference)),
        _ => None,
    }
}

/// The open the cover is a cover of: a single interval, a finite union of
/// disjoint intervals, or the whole circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Intervals(Vec<Arc>),
    FullCircle,
}

#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub ambient: Ambient,
    pub arcs: Vec<Arc>,
    pub target: Target,
}

impl CoverSpec {
    /// Validates shapes and that the union of the arcs equals the target.
    pub fn new(ambient: Ambient, arcs: Vec<Arc>, target: Target) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidSpec("cover needs at least one arc".into()));
        }
        for a in &arcs {
            match (&ambient, a) {
                (Ambient::Line, Arc::Interval { .. }) => {}
                (Ambient::Circle { .. }, Arc::CircleArc { .. }) => {}
                _ => return Err(Error::InvalidSpec("arc does not match ambient".into())),
            }
        }
        match (&ambient, &target) {
            (Ambient::Line, Target::Intervals(parts)) => {
                if parts.is_empty() {
                    return Err(Error::InvalidSpec("line target needs components".into()));
                }
                for p in parts {
                    let Arc::Interval { .. } = p else {
                        return Err(Error::InvalidSpec("line target must be intervals".into()));
                    };
                }
            }
            (Ambient::Circle { .. }, Target::FullCircle) => {}
            (Ambient::Circle { .. }, Target::Intervals(parts)) => {
                for p in parts {
                    let Arc::CircleArc { .. } = p else {
                        return Err(Error::InvalidSpec("circle target must be arcs".into()));
                    };
                }
            }
            _ => return Err(Error::InvalidSpec("target does not match ambient".into())),
        }
        let spec = CoverSpec { ambient, arcs, target };
        if let Some(p) = spec.uncovered_point() {
            return Err(Error::InvalidSpec(format!(
                "arcs do not cover the target: point {p} is uncovered"
            )));
        }
        if let Some(p) = spec.escaping_point() {
            return Err(Error::InvalidSpec(format!(
                "arc leaves the target near point {p}"
            )));
        }
        Ok(spec)
    }

    /// Representative points of the arrangement cells inside the target:
    /// interior arc endpoints (0-cells) and midpoints of the regions
    /// between consecutive endpoints (1-cells).
    pub fn cell_points(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = Vec::new();
        match (&self.ambient, &self.target) {
            (Ambient::Line, Target::Intervals(parts)) => {
                let mut out = Vec::new();
                for part in parts {
                    let Arc::Interval { lo, hi } = part else { continue };
                    pts.clear();
                    pts.push(lo.clone());
                    pts.push(hi.clone());
                    for a in &self.arcs {
                        if let Arc::Interval { lo: alo, hi: ahi } = a {
                            for v in [alo, ahi] {
                                if lo < v && v < hi {
                                    pts.push(v.clone());
                                }
                            }
                        }
                    }
                    pts.sort();
                    pts.dedup();
                    for w in pts.windows(2) {
                        out.push((&w[0] + &w[1]) * ratio(1, 2));
                    }
                    for v in &pts[1..pts.len() - 1] {
                        out.push(v.clone());
                    }
                }
                out.sort();
                out.dedup();
                out
            }
            (Ambient::Circle { circumference }, Target::FullCircle) => {
                for a in &self.arcs {
                    if let Arc::CircleArc { start, len } = a {
                        pts.push(start.clone());
                        pts.push(modulo(&(start + len), circumference));
                    }
                }
                pts.sort();
                pts.dedup();
                let mut out = pts.clone();
                for i in 0..pts.len() {
                    let a = &pts[i];
                    let b = if i + 1 < pts.len() {
                        pts[i + 1].clone()
                    } else {
                        &pts[0] + circumference
                    };
                    out.push(modulo(&((a + &b) * ratio(1, 2)), circumference));
                }
                out.sort();
                out.dedup();
                out
            }
            (Ambient::Circle { circumference }, Target::Intervals(parts)) => {
                // arcs restricted to a union of proper arcs: treat each part
                // via offsets, reusing the line logic on lifted coordinates
                let mut out = Vec::new();
                for part in parts {
                    let Arc::CircleArc { start, len } = part else { continue };
                    let mut cuts = vec![Rational::zero(), len.clone()];
                    for a in &self.arcs {
                        if let Arc::CircleArc { start: s2, len: l2 } = a {
                            let d = modulo(&(s2 - start), circumference);
                            for v in [d.clone(), &d + l2, &d - circumference, &d + l2 - circumference]
                            {
                                if Rational::zero() < v && &v < len {
                                    cuts.push(v);
                                }
                            }
                        }
                    }
                    cuts.sort();
                    cuts.dedup();
                    for w in cuts.windows(2) {
                        out.push(modulo(&(start + (&w[0] + &w[1]) * ratio(1, 2)), circumference));
                    }
                    for v in &cuts[1..cuts.len() - 1] {
                        out.push(modulo(&(start + v), circumference));
                    }
                }
                out.sort();
                out.dedup();
                out
            }
            _ => Vec::new(),
        }
    }

    fn uncovered_point(&self) -> Option<Rational> {
        self.cell_points()
            .into_iter()
            .find(|p| !self.arcs.iter().any(|a| arc_contains_point(&self.ambient, a, p)))
    }

    /// A point of some arc outside the target, if any (arcs must stay
    /// inside the target for the union to equal it).
    fn escaping_point(&self) -> Option<Rational> {
        let inside = |p: &Rational| match &self.target {
            Target::FullCircle => true,
            Target::Intervals(parts) => {
                parts.iter().any(|t| arc_contains_point(&self.ambient, t, p))
            }
        };
        for a in &self.arcs {
            // midpoint and near-end representative points of the arc
            let probes: Vec<Rational> = match a {
                Arc::Interval { lo, hi } => vec![
                    (lo + hi) * ratio(1, 2),
                    lo + (hi - lo) * ratio(1, 100),
                    hi - (hi - lo) * ratio(1, 100),
                ],
                Arc::CircleArc { start, len } => {
                    let Ambient::Circle { circumference } = &self.ambient else {
                        return None;
                    };
                    vec![
                        modulo(&(start + len * ratio(1, 2)), circumference),
                        modulo(&(start + len * ratio(1, 100)), circumference),
                        modulo(&(start + len * ratio(99, 100)), circumference),
                    ]
                }
            };
            if let Some(p) = probes.into_iter().find(|p| !inside(p)) {
                return Some(p);
            }
        }
        None
    }

    /// All nonempty pairwise-disjoint index families, ordered by size then
    /// lexicographically.
    pub fn disjoint_families(&self) -> Vec<Vec<usize>> {
        let n = self.arcs.len();
        let mut disjoint = vec![vec![false; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = arcs_disjoint(&self.ambient, &self.arcs[i], &self.arcs[j]);
                disjoint[i][j] = d;
                disjoint[j][i] = d;
            }
        }
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        fn rec(
            start: usize,
            n: usize,
            disjoint: &[Vec<bool>],
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            for i in start..n {
                if cur.iter().all(|&j| disjoint[j][i]) {
                    cur.push(i);
                    out.push(cur.clone());
                    rec(i + 1, n, disjoint, cur, out);
                    cur.pop();
                }
            }
        }
        rec(0, n, &disjoint, &mut cur, &mut out);
        out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        out
    }
}

/// Verdict of the factorization gate, with a witness point set when the
/// cover is rejected.
#[derive(Clone, Debug)]
pub struct FactorizationVerdict {
    pub factorizing: bool,
    /// points no pairwise-disjoint subfamily covers, when not factorizing
    pub witness: Option<Vec<Rational>>,
}

/// The desk-scale factorization gate for finite covers.
///
/// A literal reading of the pointwise definition admits no finite cover of
/// a connected 1-manifold at all (any disjoint subfamily covering one
/// representative point per arrangement cell would be a disjoint open cover
/// of a connected space), so the gate instead asks for what the Cech
/// machinery needs:
///
/// - covers of intervals on the line: validity (the union is the target);
/// - covers of the circle: validity, proper arcs, and at least one
///   pairwise-disjoint pair of cover elements, without which the Cech
///   complex cannot see any multiplication relation and H_0 would compute
///   A instead of A/[A,A].
///
/// When a circle cover is rejected, a smallest uncoverable representative
/// point set is returned (two points in "antipodal" regions in the
/// three-arc situation).
pub fn is_factorizing(cover: &CoverSpec) -> FactorizationVerdict {
    match (&cover.ambient, &cover.target) {
        (Ambient::Line, _) | (Ambient::Circle { .. }, Target::Intervals(_)) => {
            FactorizationVerdict { factorizing: true, witness: None }
        }
        (Ambient::Circle { .. }, Target::FullCircle) => {
            let families = cover.disjoint_families();
            if families.iter().any(|f| f.len() >= 2) {
                return FactorizationVerdict { factorizing: true, witness: None };
            }
            // witness: smallest representative set no single arc covers
            let cells = cover.cell_points();
            for size in 2..=4usize.min(cells.len()) {
                let mut idx: Vec<usize> = (0..size).collect();
                loop {
                    let pts: Vec<&Rational> = idx.iter().map(|&i| &cells[i]).collect();
                    let coverable = cover.arcs.iter().any(|a| {
                        pts.iter().all(|p| arc_contains_point(&cover.ambient, a, p))
                    });
                    if !coverable {
                        return FactorizationVerdict {
                            factorizing: false,
                            witness: Some(pts.into_iter().cloned().collect()),
                        };
                    }
                    // next combination
                    let mut i = size;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        if idx[i] != i + cells.len() - size {
                            idx[i] += 1;
                            for j in i + 1..size {
                                idx[j] = idx[j - 1] + 1;
                            }
                            break;
                        }
                    }
                    if idx[0] > cells.len() - size {
                        break;
                    }
                }
            }
            FactorizationVerdict { factorizing: false, witness: Some(cells) }
        }
    }
}

/// The standard cyclic cover of the circle by n arcs of equal length with
/// consecutive overlaps only (needs n >= 4 for opposite arcs to be
/// disjoint). Arc i starts at i*lambda/n with length lambda*(1/n + 1/(4n)).
pub fn cyclic_cover(circumference: &Rational, n: usize) -> Result<CoverSpec> {
    if n < 2 {
        return Err(Error::Domain("cyclic cover needs at least 2 arcs".into()));
    }
    let ambient = Ambient::circle(circumference.clone())?;
    let len = circumference * (ratio(1, n as i64) + ratio(1, 4 * n as i64));
    let arcs = (0..n)
        .map(|i| {
            Arc::circle_arc(
                &ambient,
                circumference * ratio(i as i64, n as i64),
                len.clone(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    CoverSpec::new(ambient, arcs, Target::FullCircle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_cover(arcs: &[(i64, i64, i64)], target: (i64, i64, i64)) -> CoverSpec {
        // tuples are (num_lo, num_hi, den)
        let mk = |t: &(i64, i64, i64)| {
            Arc::interval(ratio(t.0, t.2), ratio(t.1, t.2)).unwrap()
        };
        CoverSpec::new(
            Ambient::Line,
            arcs.iter().map(mk).collect(),
            Target::Intervals(vec![mk(&target)]),
        )
        .unwrap()
    }

    #[test]
    fn interval_intersections() {
        let amb = Ambient::Line;
        let a = Arc::interval(rat(0), rat(2)).unwrap();
        let b = Arc::interval(rat(1), rat(3)).unwrap();
        let c = Arc::interval(rat(2), rat(3)).unwrap();
        assert_eq!(
            arc_intersection(&amb, &a, &b),
            vec![Arc::interval(rat(1), rat(2)).unwrap()]
        );
        // open intervals touching at a point are disjoint
        assert!(arcs_disjoint(&amb, &a, &c));
        assert!(arc_contains_arc(&amb, &b, &c));
        assert!(!arc_contains_arc(&amb, &c, &b));
    }

    #[test]
    fn circle_intersections_including_wrap() {
        let amb = Ambient::circle(rat(1)).unwrap();
        // two long arcs intersect in two components
        let a = Arc::circle_arc(&amb, rat(0), ratio(3, 4)).unwrap();
        let b = Arc::circle_arc(&amb, ratio(1, 2), ratio(3, 4)).unwrap();
        let i = arc_intersection(&amb, &a, &b);
        assert_eq!(i.len(), 2, "{i:?}");
        // wrap-around containment
        let big = Arc::circle_arc(&amb, ratio(3, 4), ratio(1, 2)).unwrap();
        let small = Arc::circle_arc(&amb, ratio(9, 10), ratio(1, 5)).unwrap();
        assert!(arc_contains_arc(&amb, &big, &small));
        assert!(arc_contains_point(
            &amb,
            &big,
            &Rational::zero()
        ));
    }

    #[test]
    fn cover_validation() {
        // (0,2) u (1,3) covers (0,3)
        line_cover(&[(0, 2, 1), (1, 3, 1)], (0, 3, 1));
        // (0,1) u (1,2) does NOT cover (0,2): the point 1 is missed
        let r = CoverSpec::new(
            Ambient::Line,
            vec![
                Arc::interval(rat(0), rat(1)).unwrap(),
                Arc::interval(rat(1), rat(2)).unwrap(),
            ],
            Target::Intervals(vec![Arc::interval(rat(0), rat(2)).unwrap()]),
        );
        assert!(r.is_err());
        // an arc escaping the target is rejected
        let r = CoverSpec::new(
            Ambient::Line,
            vec![Arc::interval(rat(0), rat(3)).unwrap()],
            Target::Intervals(vec![Arc::interval(rat(0), rat(2)).unwrap()]),
        );
        assert!(r.is_err());
    }

    #[test]
    fn disjoint_families_examples() {
        // two overlapping intervals: only singletons
        let c = line_cover(&[(0, 2, 1), (1, 3, 1)], (0, 3, 1));
        assert_eq!(c.disjoint_families(), vec![vec![0], vec![1]]);

        // four-arc cyclic circle cover: singles plus the two diagonals
        let c = cyclic_cover(&rat(1), 4).unwrap();
        assert_eq!(
            c.disjoint_families(),
            vec![vec![0], vec![1], vec![2], vec![3], vec![0, 2], vec![1, 3]]
        );

        let c = line_cover(&[(0, 1, 1)], (0, 1, 1));
        assert_eq!(c.disjoint_families(), vec![vec![0]]);
    }

    #[test]
    fn factorizing_gate() {
        // overlapping interval cover: factorizing
        let c = line_cover(&[(0, 2, 1), (1, 3, 1)], (0, 3, 1));
        assert!(is_factorizing(&c).factorizing);

        // 4-arc cyclic cover: factorizing
        let c = cyclic_cover(&rat(1), 4).unwrap();
        assert!(is_factorizing(&c).factorizing);

        // 3 arcs pairwise overlapping, no two disjoint: rejected with a
        // 2-point witness
        let c = cyclic_cover(&rat(1), 3).unwrap();
        let v = is_factorizing(&c);
        assert!(!v.factorizing);
        let w = v.witness.expect("needs witness");
        assert_eq!(w.len(), 2, "witness {w:?}");
        // no single arc contains both witness points
        for a in &c.arcs {
            assert!(!w.iter().all(|p| arc_contains_point(&c.ambient, a, p)));
        }
    }

    #[test]
    fn cyclic_cover_shape() {
        let c = cyclic_cover(&rat(1), 4).unwrap();
        // opposite arcs disjoint, consecutive overlap
        assert!(arcs_disjoint(&c.ambient, &c.arcs[0], &c.arcs[2]));
        assert!(arcs_disjoint(&c.ambient, &c.arcs[1], &c.arcs[3]));
        assert!(!arcs_disjoint(&c.ambient, &c.arcs[0], &c.arcs[1]));
        assert!(!arcs_disjoint(&c.ambient, &c.arcs[3], &c.arcs[0]));
        // triple intersections are empty
        assert!(intersect_arcs(&c.ambient, &[&c.arcs[0], &c.arcs[1], &c.arcs[2]]).is_empty());
    }

    #[test]
    fn dilation_preserves_combinatorics() {
        let c1 = cyclic_cover(&rat(1), 4).unwrap();
        let c2 = cyclic_cover(&ratio(7, 3), 4).unwrap();
        assert_eq!(c1.disjoint_families(), c2.disjoint_families());
    }
}
