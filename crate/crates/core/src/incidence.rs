//! Lines, surfaces, light-cone sections, intervals, and the
//! timelike/spacelike classification of triples.

use crate::auto::{apply, compose, invert_word, send_pair_to_0_omega, AutoWord, Generator};
use crate::error::{KernelError, Result};
use crate::herm::{
    inertia, loewner_le, loewner_lt, projection_from_vector, rank1_decompose, trace_product,
    Herm2, Mat2, Projection,
};
use crate::scalar::{GaussRational, Rational};
use crate::spacetime::{coherent, distance, Point};
use num_traits::Zero;

/// A line of ō(H₂): either {aP + A : a ∈ ℝ̄} (with its point at infinity)
/// or {∞P + aP⊥ : a ∈ ℝ̄} ∪ {ω̄}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Finite { base: Herm2, dir: Projection },
    Infinity { dir: Projection },
}

impl Line {
    /// Canonicalizes the base so that tr(P·base) = 0; equality is structural.
    pub fn finite(base: Herm2, dir: Projection) -> Line {
        let lambda = trace_product(&base, dir.matrix());
        Line::Finite {
            base: &base - &dir.matrix().scale(&lambda),
            dir,
        }
    }

    pub fn infinity(dir: Projection) -> Line {
        Line::Infinity { dir }
    }

    /// The unique non-finite point of the line.
    pub fn point_at_infinity(&self) -> Point {
        match self {
            Line::Finite { base, dir } => Point::Infinite {
                dir: dir.clone(),
                offset: trace_product(dir.complement().matrix(), base),
            },
            Line::Infinity { .. } => Point::Omega,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        match (self, x) {
            (Line::Finite { base, dir }, Point::Finite(a)) => {
                let d = a - base;
                let t = trace_product(&d, dir.matrix());
                d == dir.matrix().scale(&t)
            }
            (Line::Finite { .. }, _) => x == &self.point_at_infinity(),
            (Line::Infinity { dir }, Point::Infinite { dir: q, .. }) => dir == q,
            (Line::Infinity { .. }, Point::Omega) => true,
            (Line::Infinity { .. }, Point::Finite(_)) => false,
        }
    }

    /// A few distinct points on the line, including the point at infinity.
    pub fn sample_points(&self) -> Vec<Point> {
        match self {
            Line::Finite { base, dir } => (0..3i64)
                .map(|k| {
                    Point::Finite(base + &dir.matrix().scale(&Rational::from_integer(k.into())))
                })
                .chain([self.point_at_infinity()])
                .collect(),
            Line::Infinity { dir } => (0..3i64)
                .map(|k| Point::Infinite {
                    dir: dir.clone(),
                    offset: Rational::from_integer(k.into()),
                })
                .chain([Point::Omega])
                .collect(),
        }
    }

    pub fn intersects(&self, other: &Line) -> bool {
        self.intersection_point(other).is_some()
    }

    /// The common point of two distinct lines, if any (two distinct maximal
    /// coherent sets share at most one point).
    pub fn intersection_point(&self, other: &Line) -> Option<Point> {
        if self == other {
            return None;
        }
        match (self, other) {
            (Line::Infinity { .. }, Line::Infinity { .. }) => Some(Point::Omega),
            (Line::Finite { .. }, Line::Infinity { .. }) => {
                let p = self.point_at_infinity();
                other.contains(&p).then_some(p)
            }
            (Line::Infinity { .. }, Line::Finite { .. }) => other.intersection_point(self),
            (
                Line::Finite { base: a1, dir: p1 },
                Line::Finite { base: a2, dir: p2 },
            ) => {
                if p1 == p2 {
                    // parallel directions meet only at infinity, and only if
                    // the P⊥-compressions agree — canonical bases then coincide
                    return None;
                }
                // a·P1 + A1 = b·P2 + A2: compress with P2⊥ to eliminate b
                let d = &(a2 - a1);
                let denom = trace_product(p1.matrix(), p2.complement().matrix());
                let a = trace_product(d, p2.complement().matrix()) / &denom;
                let cand = a1 + &p1.matrix().scale(&a);
                let x = Point::Finite(cand);
                (self.contains(&x) && other.contains(&x)).then_some(x)
            }
        }
    }
}

/// The unique line through two points at distance 1.
pub fn line_through(a: &Point, b: &Point) -> Result<Line> {
    if distance(a, b) != 1 {
        return Err(KernelError::Domain("line_through needs distance 1".into()));
    }
    match (a, b) {
        (Point::Finite(x), Point::Finite(y)) => {
            let (_, p) = rank1_decompose(&(y - x))?;
            Ok(Line::finite(x.clone(), p))
        }
        (Point::Finite(x), Point::Infinite { dir, .. })
        | (Point::Infinite { dir, .. }, Point::Finite(x)) => {
            Ok(Line::finite(x.clone(), dir.clone()))
        }
        (Point::Infinite { dir, .. }, _) | (_, Point::Infinite { dir, .. }) => {
            Ok(Line::infinity(dir.clone()))
        }
        _ => unreachable!("distance 1 pairs always match a case"),
    }
}

/// The unique point on ℓ coherent to C ∉ ℓ.
pub fn unique_coherent_on_line(line: &Line, c: &Point) -> Result<Point> {
    if line.contains(c) {
        return Err(KernelError::Domain("C lies on the line".into()));
    }
    match line {
        Line::Finite { base, dir } => match c {
            Point::Finite(cm) => {
                // det(base + tP − C) is linear in t with slope tr((base−C)P⊥)
                let d = base - cm;
                let slope = trace_product(&d, dir.complement().matrix());
                if slope.is_zero() {
                    Ok(line.point_at_infinity())
                } else {
                    let t = -d.det() / slope;
                    Ok(Point::Finite(base + &dir.matrix().scale(&t)))
                }
            }
            Point::Infinite { dir: q, offset: b } => {
                if q == dir {
                    Ok(line.point_at_infinity())
                } else {
                    let qperp = q.complement();
                    let t = (b - trace_product(qperp.matrix(), base))
                        / trace_product(qperp.matrix(), dir.matrix());
                    Ok(Point::Finite(base + &dir.matrix().scale(&t)))
                }
            }
            Point::Omega => Ok(line.point_at_infinity()),
        },
        Line::Infinity { dir } => match c {
            Point::Finite(cm) => Ok(Point::Infinite {
                dir: dir.clone(),
                offset: trace_product(dir.complement().matrix(), cm),
            }),
            Point::Infinite { .. } => Ok(Point::Omega),
            Point::Omega => unreachable!("ω̄ lies on every infinity line"),
        },
    }
}

/// Points of S_{A,B} = C_A ∩ C_B along the given rank-one directions,
/// for A < B.
pub fn sample_lightcone_section(
    a: &Herm2,
    b: &Herm2,
    dirs: &[[GaussRational; 2]],
) -> Result<Vec<Point>> {
    if !loewner_lt(a, b) {
        return Err(KernelError::Domain("section needs A < B".into()));
    }
    let d = a - b;
    let mut out = Vec::new();
    for v in dirs {
        let p = projection_from_vector(v)?;
        // det(A + tP − B) = det(D) + t·tr(D·P⊥); the slope is < 0 since D < 0
        let slope = trace_product(&d, p.complement().matrix());
        let t = -d.det() / slope;
        out.push(Point::Finite(a + &p.matrix().scale(&t)));
    }
    Ok(out)
}

/// Timelike/spacelike position of a pairwise non-coherent triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleClass {
    Timelike,
    Spacelike,
}

/// Classifies a triple with pairwise distance 2 by moving (A1, A2) to
/// (0, ω̄) and reading the inertia of the third image.
pub fn classify_triple(a1: &Point, a2: &Point, a3: &Point) -> Result<TripleClass> {
    if distance(a1, a2) != 2 || distance(a1, a3) != 2 || distance(a2, a3) != 2 {
        return Err(KernelError::Domain(
            "classify_triple needs pairwise distance 2".into(),
        ));
    }
    let w = send_pair_to_0_omega(a1, a2)?;
    match apply(&w, a3) {
        Point::Finite(img) => {
            if inertia(&img).is_definite() {
                Ok(TripleClass::Timelike)
            } else {
                Ok(TripleClass::Spacelike)
            }
        }
        _ => Err(KernelError::Domain(
            "third point did not land in H₂; triple was not pairwise distance 2".into(),
        )),
    }
}

/// X is coherent to some point of the section S_{A,B} iff it satisfies
/// one of the two one-sided order conditions.
pub fn coherent_to_section_criterion(x: &Herm2, a: &Herm2, b: &Herm2) -> Result<bool> {
    if !loewner_lt(a, b) {
        return Err(KernelError::Domain("criterion needs A < B".into()));
    }
    let in_open = loewner_lt(a, x) && loewner_lt(x, b);
    let o1 = !in_open && loewner_le(x, b) && !loewner_lt(x, a);
    let o2 = !in_open && loewner_le(a, x) && !loewner_lt(b, x);
    Ok(o1 || o2)
}

/// A surface stored as a transport of the diagonal surface
/// {aE11 + bE22 : a, b ∈ ℝ̄}.
#[derive(Debug, Clone)]
pub struct Surface {
    /// Word mapping the diagonal surface onto this surface.
    pub transport: AutoWord,
    /// Inverse word, cached for membership tests.
    inverse: AutoWord,
    pub l1: Line,
    pub l2: Line,
}

/// Membership in the diagonal surface.
pub fn diagonal_member(x: &Point) -> bool {
    match x {
        Point::Finite(a) => a.z.is_zero(),
        Point::Infinite { dir, .. } => {
            dir == &Projection::e11() || dir == &Projection::e22()
        }
        Point::Omega => true,
    }
}

impl Surface {
    pub fn membership(&self, x: &Point) -> bool {
        diagonal_member(&apply(&self.inverse, x))
    }
}

/// The surface along two disjoint lines, as a transport of the diagonal:
/// move a distance-2 pair to (0, ω̄), then align the two directions with a
/// congruence.
pub fn surface_along(l1: &Line, l2: &Line) -> Result<Surface> {
    if l1.intersects(l2) || l1 == l2 {
        return Err(KernelError::Domain(
            "lines intersect; no unique surface".into(),
        ));
    }
    // find A ∈ ℓ1, B ∈ ℓ2 with d(A,B) = 2 (each point of one line is
    // coherent to at most one point of the other, so samples suffice)
    let s1 = l1.sample_points();
    let s2 = l2.sample_points();
    let (a, b) = s1
        .iter()
        .flat_map(|a| s2.iter().map(move |b| (a, b)))
        .find(|(a, b)| distance(a, b) == 2)
        .ok_or_else(|| KernelError::Domain("no distance-2 pair across the lines".into()))?;
    let w0 = send_pair_to_0_omega(a, b)?;
    // the image of ℓ1 is {aP}; read P off a nonzero finite image point
    let p = s1
        .iter()
        .filter_map(|x| match apply(&w0, x) {
            Point::Finite(h) if !h.is_zero() => rank1_decompose(&h).ok().map(|(_, p)| p),
            _ => None,
        })
        .next()
        .ok_or_else(|| KernelError::Domain("could not read direction of first line".into()))?;
    // the image of ℓ2 is an infinity line; read its direction
    let q = s2
        .iter()
        .filter_map(|x| match apply(&w0, x) {
            Point::Infinite { dir, .. } => Some(dir),
            _ => None,
        })
        .next()
        .ok_or_else(|| KernelError::Domain("could not read direction of second line".into()))?;
    // S with S·(span P) = span e1 and S·(span Q) = span e2: inverse of [u v]
    let u = p.spanning_vector();
    let v = q.spanning_vector();
    let s = Mat2::new(u[0].clone(), v[0].clone(), u[1].clone(), v[1].clone()).inverse()?;
    let w = compose(&w0, &AutoWord::of(vec![Generator::Congruence(s)]));
    Ok(Surface {
        transport: invert_word(&w),
        inverse: w,
        l1: l1.clone(),
        l2: l2.clone(),
    })
}

/// X ∈ [A, B] in the Loewner order.
pub fn in_interval(x: &Herm2, lo: &Herm2, hi: &Herm2) -> bool {
    loewner_le(lo, x) && loewner_le(x, hi)
}

/// For P ∈ S_{A,B}, [A,B] ∩ C_P = [A,P] ∪ [P,B]. Returns the
/// two sub-intervals after validating the hypothesis.
pub fn interval_cone_decompose(
    a: &Herm2,
    b: &Herm2,
    p: &Herm2,
) -> Result<((Herm2, Herm2), (Herm2, Herm2))> {
    if !loewner_lt(a, b) {
        return Err(KernelError::Domain("decompose needs A < B".into()));
    }
    let pa = Point::Finite(p.clone());
    if !coherent(&pa, &Point::Finite(a.clone()))
        || !coherent(&pa, &Point::Finite(b.clone()))
        || !in_interval(p, a, b)
    {
        return Err(KernelError::Domain("P is not in the section S_{A,B}".into()));
    }
    Ok(((a.clone(), p.clone()), (p.clone(), b.clone())))
}
