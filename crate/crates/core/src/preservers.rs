//! Finite tabulated coherency preservers: validation, degenerate-type
//! witness search, taxonomy classification, and the example constructors.

use crate::auto::{
    apply, apply_herm, compose, interval_iso, invert_word, midpoint_move, send_pair_to_0_omega,
    wigner_fit, AutoWord, Generator,
};
use crate::error::{KernelError, Result};
use crate::herm::{
    loewner_le, loewner_lt, projection_from_vector, rank1_decompose, rational_sqrt,
    trace_product, Herm2, Projection,
};
use crate::incidence::{unique_coherent_on_line, Line};
use crate::scalar::{rat, ExtReal, GaussRational, Rational};
use crate::spacetime::{coherent, distance, Point};
use num_traits::{One, Zero};

/// A finite map given by explicit (input, output) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedMap {
    pub domain_descriptor: String,
    pub entries: Vec<(Point, Point)>,
}

impl TabulatedMap {
    pub fn new(domain_descriptor: &str, entries: Vec<(Point, Point)>) -> Result<TabulatedMap> {
        for i in 0..entries.len() {
            for j in 0..i {
                if entries[i].0 == entries[j].0 {
                    return Err(KernelError::Data("duplicate input in tabulated map".into()));
                }
            }
        }
        Ok(TabulatedMap {
            domain_descriptor: domain_descriptor.to_string(),
            entries,
        })
    }

    pub fn lookup(&self, x: &Point) -> Option<&Point> {
        self.entries.iter().find(|(i, _)| i == x).map(|(_, o)| o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcaseTag {
    O,
    I,
    II,
    III,
    IV,
}

/// Outcome of the interval-map taxonomy.
#[derive(Debug, Clone)]
pub enum PreserverVerdict {
    StandardCandidate { word: AutoWord, residual: f64 },
    TypeC { removed: Point, vertex: Point },
    TypeL { domain_line: Line, image_line: Line },
    Subcase {
        tag: SubcaseTag,
        p_cross: Option<Projection>,
        q_circ: Option<Point>,
        q_cross: Option<Point>,
    },
    Inconsistent,
}

// ---------------------------------------------------------------------------
// canonical grids

/// Twelve fixed rational projections spanning the Bloch sphere.
pub fn canonical_projections() -> Vec<Projection> {
    let vs: [[(i64, i64); 2]; 12] = [
        [(1, 0), (0, 0)],
        [(0, 0), (1, 0)],
        [(1, 0), (1, 0)],
        [(1, 0), (-1, 0)],
        [(1, 0), (0, 1)],
        [(1, 0), (0, -1)],
        [(2, 0), (1, 0)],
        [(1, 0), (2, 0)],
        [(3, 0), (1, 0)],
        [(1, 0), (3, 0)],
        [(2, 0), (0, 1)],
        [(1, 0), (0, 2)],
    ];
    vs.iter()
        .map(|v| {
            projection_from_vector(&[
                GaussRational::from_ints(v[0].0, v[0].1),
                GaussRational::from_ints(v[1].0, v[1].1),
            ])
            .expect("fixed spanning vectors are nonzero")
        })
        .collect()
}

pub fn grid_scalars() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)]
}

/// The canonical [0, I] grid {a·P + b·P⊥} over the fixed projections.
pub fn interval_grid_points() -> Vec<Herm2> {
    let mut out: Vec<Herm2> = Vec::new();
    for p in canonical_projections() {
        let pm = p.matrix();
        let qm = p.complement().into_matrix();
        for a in grid_scalars() {
            for b in grid_scalars() {
                let x = &pm.scale(&a) + &qm.scale(&b);
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Tabulates `f` over the canonical [0, I] grid.
pub fn grid_map(descriptor: &str, f: impl Fn(&Herm2) -> Point) -> Result<TabulatedMap> {
    let entries = interval_grid_points()
        .into_iter()
        .map(|x| {
            let y = f(&x);
            (Point::Finite(x), y)
        })
        .collect();
    TabulatedMap::new(descriptor, entries)
}

// ---------------------------------------------------------------------------
// predicates and witness searches

/// Exact pair scan: coherent inputs must have coherent outputs.
pub fn is_coherency_preserver(m: &TabulatedMap) -> bool {
    for i in 0..m.entries.len() {
        for j in 0..i {
            let (xi, yi) = &m.entries[i];
            let (xj, yj) = &m.entries[j];
            if coherent(xi, xj) && !coherent(yi, yj) {
                return false;
            }
        }
    }
    true
}

/// Re-verifies a type (𝒞) witness from its data.
pub fn verify_type_c(m: &TabulatedMap, removed: &Point, vertex: &Point) -> bool {
    m.entries
        .iter()
        .all(|(x, y)| x == removed || coherent(y, vertex))
}

/// Re-verifies a type (ℓ) witness from its data.
pub fn verify_type_l(m: &TabulatedMap, domain_line: &Line, image_line: &Line) -> bool {
    m.entries
        .iter()
        .all(|(x, y)| domain_line.contains(x) || image_line.contains(y))
}

/// First (removed, vertex) pair such that φ(𝒜∖{removed}) ⊂ C_vertex.
pub fn find_type_c_witness(m: &TabulatedMap) -> Option<(Point, Point)> {
    // for each vertex candidate, the set of entries whose output is not in
    // the cone must be coverable by a single removed input
    let mut bad: Vec<(usize, Option<usize>)> = Vec::new(); // (count, sole index)
    for (_, b) in &m.entries {
        let mut count = 0usize;
        let mut sole = None;
        for (k, (_, y)) in m.entries.iter().enumerate() {
            if !coherent(y, b) {
                count += 1;
                sole = Some(k);
            }
        }
        bad.push((count, sole));
    }
    for (a_idx, (a, _)) in m.entries.iter().enumerate() {
        for (b_idx, (_, b)) in m.entries.iter().enumerate() {
            let (count, sole) = &bad[b_idx];
            if *count == 0 || (*count == 1 && *sole == Some(a_idx)) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

fn line_through_or_dir(p: &Point) -> Line {
    match p {
        Point::Finite(x) => Line::finite(x.clone(), Projection::e11()),
        Point::Infinite { dir, .. } => Line::infinity(dir.clone()),
        Point::Omega => Line::infinity(Projection::e11()),
    }
}

/// First (ℓ, ℓ') pair such that φ(𝒜∖ℓ) ⊂ ℓ'. Candidate image lines are
/// enumerated from pairs of distinct coherent outputs (bounded prefix).
pub fn find_type_l_witness(m: &TabulatedMap) -> Option<(Line, Line)> {
    let mut distinct: Vec<&Point> = Vec::new();
    for (_, y) in &m.entries {
        if !distinct.contains(&y) {
            distinct.push(y);
        }
        if distinct.len() >= 25 {
            break;
        }
    }
    let mut candidates: Vec<Line> = Vec::new();
    for i in 0..distinct.len() {
        for j in 0..i {
            if distance(distinct[i], distinct[j]) == 1 {
                if let Ok(l) = crate::incidence::line_through(distinct[i], distinct[j]) {
                    if !candidates.contains(&l) {
                        candidates.push(l);
                    }
                }
            }
        }
    }
    // singleton-heavy ranges: any line through a frequent output also works
    for y in &distinct {
        let l = line_through_or_dir(y);
        if !candidates.contains(&l) {
            candidates.push(l);
        }
    }
    for lp in &candidates {
        let off: Vec<&Point> = m
            .entries
            .iter()
            .filter(|(_, y)| !lp.contains(y))
            .map(|(x, _)| x)
            .collect();
        let domain_line = match off.len() {
            0 => Some(line_through_or_dir(&m.entries[0].0)),
            1 => Some(line_through_or_dir(off[0])),
            _ => {
                // a common line must pass through the first two points
                if distance(off[0], off[1]) == 1 {
                    crate::incidence::line_through(off[0], off[1])
                        .ok()
                        .filter(|l| off.iter().all(|x| l.contains(x)))
                } else {
                    None
                }
            }
        };
        if let Some(l) = domain_line {
            if verify_type_l(m, &l, lp) {
                return Some((l, lp.clone()));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// interval-map taxonomy

/// Rational spectral decomposition x = hi·P + lo·P⊥ when it exists.
pub fn eigen_rational(x: &Herm2) -> Option<(Rational, Rational, Projection)> {
    let tr = x.trace();
    let disc = &tr * &tr - rat(4, 1) * x.det();
    let s = rational_sqrt(&disc)?;
    let two = rat(2, 1);
    let hi = (&tr + &s) / &two;
    let lo = (&tr - &s) / &two;
    if hi == lo {
        return Some((hi, lo, Projection::e11()));
    }
    let m = x - &Herm2::identity().scale(&lo);
    let (_, p) = rank1_decompose(&m).ok()?;
    Some((hi, lo, p))
}

fn img<'a>(ent: &'a [(Herm2, Point)], x: &Herm2) -> Option<&'a Point> {
    ent.iter().find(|(i, _)| i == x).map(|(_, o)| o)
}

fn proj_point(p: &Point) -> Option<Projection> {
    match p {
        Point::Finite(x) if x.rank() == 1 && x.trace().is_one() => {
            Projection::try_new(x.clone()).ok()
        }
        _ => None,
    }
}

/// No projection P exists whose removal makes the image of 𝒫 a singleton.
fn no_singleton_minus_one(values: &[Point]) -> bool {
    let mut counts: Vec<(&Point, usize)> = Vec::new();
    for v in values {
        if let Some(c) = counts.iter_mut().find(|(p, _)| *p == v) {
            c.1 += 1;
        } else {
            counts.push((v, 1));
        }
    }
    match counts.len() {
        0 | 1 => false,
        2 => counts.iter().all(|(_, c)| *c >= 2),
        _ => true,
    }
}

fn check_o(ent: &[(Herm2, Point)], projs: &[(Projection, Point)]) -> Option<Point> {
    let q = &projs[0].1;
    if !projs.iter().all(|(_, y)| y == q) {
        return None;
    }
    if ent.iter().all(|(_, y)| coherent(y, q)) {
        Some(q.clone())
    } else {
        None
    }
}

fn check_i(ent: &[(Herm2, Point)], projs: &[(Projection, Point)]) -> bool {
    let id = Herm2::identity();
    let zero = Point::zero();
    if !ent.iter().all(|(x, y)| !loewner_lt(x, &id) || *y == zero) {
        return false;
    }
    let values: Vec<Point> = projs.iter().map(|(_, y)| y.clone()).collect();
    if !no_singleton_minus_one(&values) {
        return false;
    }
    for (p, yp) in projs {
        for c in grid_scalars() {
            if c.is_one() {
                continue;
            }
            let x = p.matrix() + &p.complement().into_matrix().scale(&c);
            if let Some(y) = img(ent, &x) {
                if y != yp {
                    return false;
                }
            }
        }
    }
    true
}

fn check_ii(ent: &[(Herm2, Point)], projs: &[(Projection, Point)]) -> bool {
    let zero = Herm2::zero();
    let id = Point::Finite(Herm2::identity());
    if !ent.iter().all(|(x, y)| !loewner_lt(&zero, x) || *y == id) {
        return false;
    }
    let values: Vec<Point> = projs.iter().map(|(_, y)| y.clone()).collect();
    if !no_singleton_minus_one(&values) {
        return false;
    }
    for (p, yp) in projs {
        for c in grid_scalars() {
            if c.is_zero() {
                continue;
            }
            let x = p.matrix().scale(&c);
            if let Some(y) = img(ent, &x) {
                if y != yp {
                    return false;
                }
            }
        }
    }
    true
}

/// Exactly two values on 𝒫, one attained by a single projection P×.
fn two_value_structure(
    projs: &[(Projection, Point)],
) -> Option<(Projection, Point, Point)> {
    let mut counts: Vec<(&Point, usize, usize)> = Vec::new(); // value, count, first index
    for (k, (_, y)) in projs.iter().enumerate() {
        if let Some(c) = counts.iter_mut().find(|(p, _, _)| *p == y) {
            c.1 += 1;
        } else {
            counts.push((y, 1, k));
        }
    }
    if counts.len() != 2 {
        return None;
    }
    let singles: Vec<&(&Point, usize, usize)> =
        counts.iter().filter(|(_, c, _)| *c == 1).collect();
    if singles.len() != 1 {
        return None;
    }
    let (q_cross, _, idx) = singles[0];
    let q_circ = counts.iter().find(|(_, c, _)| *c != 1).map(|(p, _, _)| *p)?;
    Some((projs[*idx].0.clone(), (*q_cross).clone(), q_circ.clone()))
}

fn check_iii_iv(
    ent: &[(Herm2, Point)],
    p_cross: &Projection,
    q_cross: &Point,
    q_circ: &Point,
    dual: bool,
) -> bool {
    let (qx, qo) = match (proj_point(q_cross), proj_point(q_circ)) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => return false,
    };
    let (l_dom, l_x, l_o) = if !dual {
        (
            Line::finite(Herm2::zero(), p_cross.clone()),
            Line::finite(Herm2::zero(), qx.clone()),
            Line::finite(qo.matrix().clone(), qo.complement()),
        )
    } else {
        (
            Line::finite(p_cross.matrix().clone(), p_cross.complement()),
            Line::finite(qx.matrix().clone(), qx.complement()),
            Line::finite(Herm2::zero(), qo.clone()),
        )
    };
    for (x, y) in ent {
        let px = Point::Finite(x.clone());
        if l_dom.contains(&px) {
            if !l_x.contains(y) {
                return false;
            }
        } else if !l_o.contains(y) {
            return false;
        }
    }
    // fibers: everything off the exceptional line coherent to a point of it
    // must land on the unique coherent point of the generic image line
    for c in grid_scalars() {
        let xc = if !dual {
            p_cross.matrix().scale(&c)
        } else {
            p_cross.matrix() + &p_cross.complement().into_matrix().scale(&c)
        };
        let yc = match img(ent, &xc) {
            Some(y) => y,
            None => continue,
        };
        let target = match unique_coherent_on_line(&l_o, yc) {
            Ok(t) => t,
            Err(_) => return false,
        };
        let pc = Point::Finite(xc);
        for (x, y) in ent {
            let px = Point::Finite(x.clone());
            if !l_dom.contains(&px) && coherent(&px, &pc) && *y != target {
                return false;
            }
        }
    }
    true
}

/// All pairwise distances agree between inputs and outputs.
fn bidirectional(ent: &[(Herm2, Point)]) -> bool {
    for i in 0..ent.len() {
        for j in 0..i {
            let dx = distance(
                &Point::Finite(ent[i].0.clone()),
                &Point::Finite(ent[j].0.clone()),
            );
            if dx != distance(&ent[i].1, &ent[j].1) {
                return false;
            }
        }
    }
    true
}

/// Every decomposable input a·P + b·P⊥ must map to a·ψ(P) + b·ψ(P)⊥.
fn spectral_consistent(ent: &[(Herm2, Point)]) -> bool {
    for (x, y) in ent {
        let (hi, lo, p) = match eigen_rational(x) {
            Some(e) => e,
            None => continue,
        };
        if hi == lo {
            if *y != Point::Finite(x.clone()) {
                return false;
            }
            continue;
        }
        let q = match img(ent, p.matrix()).and_then(proj_point) {
            Some(q) => q,
            None => continue,
        };
        let expected = &q.matrix().scale(&hi) + &q.complement().into_matrix().scale(&lo);
        if *y != Point::Finite(expected) {
            return false;
        }
    }
    true
}

/// Classifies a tabulated map on an order interval against the taxonomy:
/// standard candidate, degenerate witnesses, or one of the exceptional
/// subcases (o), (i), (ii), (iii), (iv). Several verdicts may apply at once.
pub fn classify_interval_map(m: &TabulatedMap) -> Result<Vec<PreserverVerdict>> {
    let mut inputs: Vec<(Herm2, Point)> = Vec::new();
    for (x, y) in &m.entries {
        match x {
            Point::Finite(h) => inputs.push((h.clone(), y.clone())),
            _ => return Err(KernelError::Grid("interval map inputs must be finite".into())),
        }
    }
    if inputs.len() < 4 {
        return Err(KernelError::Grid("too few entries to classify".into()));
    }
    let a = inputs
        .iter()
        .find(|(x, _)| inputs.iter().all(|(y, _)| loewner_le(x, y)))
        .map(|(x, _)| x.clone())
        .ok_or_else(|| KernelError::Grid("no Loewner-minimal input".into()))?;
    let b = inputs
        .iter()
        .find(|(x, _)| inputs.iter().all(|(y, _)| loewner_le(y, x)))
        .map(|(x, _)| x.clone())
        .ok_or_else(|| KernelError::Grid("no Loewner-maximal input".into()))?;
    let zero = Herm2::zero();
    let id = Herm2::identity();
    let t = if a == zero && b == id {
        AutoWord::identity()
    } else {
        interval_iso(&a, &b, &zero, &id)
            .map_err(|e| KernelError::Grid(format!("domain transport failed: {e}")))?
    };
    let ent: Vec<(Herm2, Point)> = inputs
        .iter()
        .map(|(x, y)| match apply_herm(&t, x) {
            Point::Finite(h) => Ok((h, y.clone())),
            _ => Err(KernelError::Grid("domain transport left the finite part".into())),
        })
        .collect::<Result<_>>()?;
    let phi_a = img(&ent, &zero)
        .cloned()
        .ok_or_else(|| KernelError::Grid("missing minimal input".into()))?;
    let phi_b = img(&ent, &id)
        .cloned()
        .ok_or_else(|| KernelError::Grid("missing maximal input".into()))?;

    if distance(&phi_a, &phi_b) < 2 {
        let mut out = Vec::new();
        if let Some((removed, vertex)) = find_type_c_witness(m) {
            out.push(PreserverVerdict::TypeC { removed, vertex });
        }
        if let Some((domain_line, image_line)) = find_type_l_witness(m) {
            out.push(PreserverVerdict::TypeL {
                domain_line,
                image_line,
            });
        }
        if out.is_empty() {
            out.push(PreserverVerdict::Inconsistent);
        }
        return Ok(out);
    }

    // normalize images so that ψ fixes 0 and I
    let w0 = send_pair_to_0_omega(&phi_a, &phi_b)?;
    let k = AutoWord::of(vec![
        Generator::Invert,
        Generator::Translate(Herm2::identity()),
        Generator::Invert,
    ]);
    let v = compose(&w0, &k);
    let psi: Vec<(Herm2, Point)> = ent
        .iter()
        .map(|(x, y)| (x.clone(), apply(&v, y)))
        .collect();

    let projs: Vec<(Projection, Point)> = psi
        .iter()
        .filter_map(|(x, y)| {
            if x.rank() == 1 && x.trace().is_one() {
                Projection::try_new(x.clone()).ok().map(|p| (p, y.clone()))
            } else {
                None
            }
        })
        .collect();
    if projs.len() < 3 {
        return Err(KernelError::Grid("need at least three grid projections".into()));
    }

    let mut out = Vec::new();
    if let Some(q) = check_o(&psi, &projs) {
        out.push(PreserverVerdict::Subcase {
            tag: SubcaseTag::O,
            p_cross: None,
            q_circ: Some(q),
            q_cross: None,
        });
    } else {
        if check_i(&psi, &projs) {
            out.push(PreserverVerdict::Subcase {
                tag: SubcaseTag::I,
                p_cross: None,
                q_circ: None,
                q_cross: None,
            });
        }
        if check_ii(&psi, &projs) {
            out.push(PreserverVerdict::Subcase {
                tag: SubcaseTag::II,
                p_cross: None,
                q_circ: None,
                q_cross: None,
            });
        }
        if let Some((p_cross, q_cross, q_circ)) = two_value_structure(&projs) {
            if check_iii_iv(&psi, &p_cross, &q_cross, &q_circ, false) {
                out.push(PreserverVerdict::Subcase {
                    tag: SubcaseTag::III,
                    p_cross: Some(p_cross.clone()),
                    q_circ: Some(q_circ.clone()),
                    q_cross: Some(q_cross.clone()),
                });
            }
            if check_iii_iv(&psi, &p_cross, &q_cross, &q_circ, true) {
                out.push(PreserverVerdict::Subcase {
                    tag: SubcaseTag::IV,
                    p_cross: Some(p_cross),
                    q_circ: Some(q_circ),
                    q_cross: Some(q_cross),
                });
            }
        }
    }
    if !out.is_empty() {
        // degenerate collapses can coexist with a subcase description
        if let Some((removed, vertex)) = find_type_c_witness(m) {
            out.push(PreserverVerdict::TypeC { removed, vertex });
        }
        if let Some((domain_line, image_line)) = find_type_l_witness(m) {
            out.push(PreserverVerdict::TypeL {
                domain_line,
                image_line,
            });
        }
        return Ok(out);
    }

    // standard fit: exact identity, then unitary fit, then exact pair scan
    if psi.iter().all(|(x, y)| *y == Point::Finite(x.clone())) {
        return Ok(vec![PreserverVerdict::StandardCandidate {
            word: invert_word(&v),
            residual: 0.0,
        }]);
    }
    let half = Herm2::identity().scale(&rat(1, 2));
    if let Some(Point::Finite(mh)) = img(&psi, &half) {
        if loewner_lt(&zero, mh) && loewner_lt(mh, &id) {
            if let Ok(gw) = midpoint_move(mh) {
                let g = invert_word(&gw);
                let psi2: Vec<(Herm2, Point)> = psi
                    .iter()
                    .map(|(x, y)| (x.clone(), apply(&g, y)))
                    .collect();
                if spectral_consistent(&psi2) {
                    let pairs: Vec<(Projection, Projection)> = psi2
                        .iter()
                        .filter_map(|(x, y)| {
                            if x.rank() == 1 && x.trace().is_one() {
                                let p = Projection::try_new(x.clone()).ok()?;
                                proj_point(y).map(|q| (p, q))
                            } else {
                                None
                            }
                        })
                        .collect();
                    if pairs.len() >= 3 {
                        if let Ok(fit) = wigner_fit(&pairs) {
                            if fit.residual <= 1e-9 {
                                let norm = compose(&v, &g);
                                return Ok(vec![PreserverVerdict::StandardCandidate {
                                    word: invert_word(&norm),
                                    residual: fit.residual,
                                }]);
                            }
                        }
                    }
                }
            }
        }
    }
    if bidirectional(&psi) {
        return Ok(vec![PreserverVerdict::StandardCandidate {
            word: invert_word(&v),
            residual: 0.0,
        }]);
    }
    Ok(vec![PreserverVerdict::Inconsistent])
}

// ---------------------------------------------------------------------------
// example constructors

/// Radial assignment on a ray, as serializable data.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    Zero,
    Identity,
    Constant(Rational),
    Infinity,
}

impl ScalarFn {
    pub fn eval(&self, t: &Rational) -> ExtReal {
        match self {
            ScalarFn::Zero => ExtReal::Finite(Rational::zero()),
            ScalarFn::Identity => ExtReal::Finite(t.clone()),
            ScalarFn::Constant(r) => ExtReal::Finite(r.clone()),
            ScalarFn::Infinity => ExtReal::Infinity,
        }
    }
}

fn ray_point(v: &ExtReal, dir: &Projection) -> Point {
    match v {
        ExtReal::Finite(r) => Point::Finite(dir.matrix().scale(r)),
        ExtReal::Infinity => Point::infinite(dir.clone(), Rational::zero()),
    }
}

fn ensure_preserver(m: TabulatedMap, what: &str) -> Result<TabulatedMap> {
    if is_coherency_preserver(&m) {
        Ok(m)
    } else {
        Err(KernelError::Spec(format!(
            "{what}: assignment violates coherency preservation"
        )))
    }
}

/// Line-to-line collapse: ℓ_{0,E11} → ℓ_{0,E11} by t ↦ f(t), everything off
/// the line lands on ℓ_{E22,I} through the coherent parameter.
pub fn construct_line_line(f: &ScalarFn, domain: &[Herm2]) -> Result<TabulatedMap> {
    let mut entries = Vec::new();
    for x in domain {
        let y = if x.d.is_zero() && x.z.is_zero() {
            ray_point(&f.eval(&x.a), &Projection::e11())
        } else if !x.d.is_zero() {
            let t = x.det() / x.d.clone();
            match f.eval(&t) {
                ExtReal::Finite(r) => Point::Finite(&Herm2::e22() + &Herm2::e11().scale(&r)),
                ExtReal::Infinity => Point::infinite(Projection::e11(), rat(1, 1)),
            }
        } else {
            Point::Finite(Herm2::e22())
        };
        entries.push((Point::Finite(x.clone()), y));
    }
    ensure_preserver(TabulatedMap::new("line-line", entries)?, "line-line")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaySpec {
    pub dir: Projection,
    pub image: Projection,
    pub radial: ScalarFn,
}

/// Parameters for cone-to-cone maps into C_0 with per-ray assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct GenCParams {
    pub rays: Vec<RaySpec>,
    pub default_image: Projection,
    pub default_radial: ScalarFn,
    pub identity_on_rays: bool,
    pub rank2_overrides: Vec<(Herm2, Point)>,
}

pub fn construct_gen_c(params: &GenCParams, domain: &[Point]) -> Result<TabulatedMap> {
    let mut entries = Vec::new();
    for p in domain {
        let x = match p {
            Point::Finite(x) => x,
            _ => return Err(KernelError::Domain("gen-c domain must be finite".into())),
        };
        let y = if x.is_zero() {
            Point::zero()
        } else if x.rank() == 1 {
            if params.identity_on_rays {
                Point::Finite(x.clone())
            } else {
                let (t, pr) = rank1_decompose(x)?;
                let (image, radial) = params
                    .rays
                    .iter()
                    .find(|r| r.dir == pr)
                    .map(|r| (&r.image, &r.radial))
                    .unwrap_or((&params.default_image, &params.default_radial));
                ray_point(&radial.eval(&t), image)
            }
        } else {
            params
                .rank2_overrides
                .iter()
                .find(|(h, _)| h == x)
                .map(|(_, y)| y.clone())
                .unwrap_or_else(Point::zero)
        };
        entries.push((p.clone(), y));
    }
    ensure_preserver(TabulatedMap::new("gen-c", entries)?, "gen-c")
}

#[derive(Debug, Clone, PartialEq)]
pub struct JebjoSpecial {
    pub r: Projection,
    pub c: Rational,
    pub b: Vec<Herm2>,
}

/// Cone-based example families with everything off the cone collapsed.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    Varphi1 {
        eta: Projection,
        g: ScalarFn,
    },
    Exoh {
        assign: Vec<(Projection, Projection)>,
        default: Projection,
    },
    Jebjo {
        q_default: Projection,
        q_overrides: Vec<(Projection, Projection)>,
        special: Option<JebjoSpecial>,
    },
    OhOh {
        q: Projection,
    },
}

pub fn construct_cone_family(kind: &ConeKind, domain: &[Point]) -> Result<TabulatedMap> {
    if let ConeKind::Jebjo {
        q_default,
        q_overrides,
        special: Some(sp),
    } = kind
    {
        // compatibility: rays meeting the special fiber must map to R
        for p in domain {
            if let Point::Finite(x) = p {
                if x.rank() == 1 {
                    let (_, pr) = rank1_decompose(x)?;
                    let touches = sp.b.iter().any(|b| coherent(p, &Point::Finite(b.clone())));
                    if touches {
                        let q = q_overrides
                            .iter()
                            .find(|(d, _)| *d == pr)
                            .map(|(_, q)| q)
                            .unwrap_or(q_default);
                        if *q != sp.r {
                            return Err(KernelError::Spec(
                                "jebjo: ray image must equal R on rays meeting the fiber".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut entries = Vec::new();
    for p in domain {
        let y = match kind {
            ConeKind::Varphi1 { eta, g } => match p {
                Point::Finite(x) if x.is_zero() => Point::zero(),
                Point::Finite(x) if x.rank() == 1 => {
                    let (_, pr) = rank1_decompose(x)?;
                    let z = &pr.matrix().z;
                    if z.re.is_zero() && z.im >= Rational::zero() {
                        Point::Finite(eta.matrix().clone())
                    } else {
                        Point::Finite(Herm2::e11())
                    }
                }
                Point::Finite(x) => {
                    if x.a.is_zero() && x.d.is_zero() && x.z.im.is_zero() {
                        match g.eval(&x.z.re) {
                            ExtReal::Finite(r) => {
                                Point::Finite(&Herm2::e11() + &Herm2::e22().scale(&r))
                            }
                            ExtReal::Infinity => Point::infinite(Projection::e22(), rat(1, 1)),
                        }
                    } else {
                        Point::Finite(Herm2::identity())
                    }
                }
                _ => return Err(KernelError::Domain("varphi1 domain must be finite".into())),
            },
            ConeKind::Exoh { assign, default } => {
                let image_of = |pr: &Projection| {
                    assign
                        .iter()
                        .find(|(d, _)| d == pr)
                        .map(|(_, q)| q)
                        .unwrap_or(default)
                        .matrix()
                        .clone()
                };
                match p {
                    Point::Finite(x) if x.is_zero() => Point::zero(),
                    Point::Finite(x) if x.rank() == 1 => {
                        let (_, pr) = rank1_decompose(x)?;
                        Point::Finite(image_of(&pr))
                    }
                    Point::Infinite { dir, offset } if offset.is_zero() => {
                        Point::Finite(image_of(dir))
                    }
                    _ => Point::Finite(Herm2::identity()),
                }
            }
            ConeKind::Jebjo {
                q_default,
                q_overrides,
                special,
            } => match p {
                Point::Finite(x) if x.is_zero() => Point::zero(),
                Point::Finite(x) if x.rank() == 1 => {
                    let (_, pr) = rank1_decompose(x)?;
                    let q = q_overrides
                        .iter()
                        .find(|(d, _)| *d == pr)
                        .map(|(_, q)| q)
                        .unwrap_or(q_default);
                    Point::Finite(q.matrix().clone())
                }
                Point::Finite(x) => match special {
                    Some(sp) if sp.b.contains(x) => Point::Finite(
                        sp.r.matrix() + &sp.r.complement().into_matrix().scale(&sp.c),
                    ),
                    _ => Point::Finite(Herm2::identity()),
                },
                _ => return Err(KernelError::Domain("jebjo domain must be finite".into())),
            },
            ConeKind::OhOh { q } => match p {
                Point::Finite(x) if x.is_zero() => Point::zero(),
                Point::Finite(x) if x.rank() == 1 => Point::Finite(q.matrix().clone()),
                Point::Infinite { dir: _, offset } if offset.is_zero() => {
                    Point::Finite(q.matrix().clone())
                }
                _ => Point::Finite(
                    q.matrix() + &q.complement().into_matrix().scale(&rat(1, 2)),
                ),
            },
        };
        entries.push((p.clone(), y));
    }
    ensure_preserver(TabulatedMap::new("cone-family", entries)?, "cone-family")
}

pub fn remark_added_eval(q_circ: &Projection, x: &Herm2) -> Point {
    if x.is_zero() {
        Point::zero()
    } else if *x == Herm2::identity() {
        Point::Finite(Herm2::identity())
    } else if *x == Herm2::e11() {
        Point::Finite(Herm2::e11())
    } else if x.d.is_zero() && x.z.is_zero() {
        Point::zero()
    } else if x.a.is_one() && x.z.is_zero() {
        Point::Finite(Herm2::identity())
    } else {
        Point::Finite(q_circ.matrix().clone())
    }
}

/// The four-point map satisfying subcases (iii) and (iv) simultaneously,
/// with exceptional projection E11 on both sides.
pub fn remark_added_map(q_circ: &Projection) -> Result<TabulatedMap> {
    if *q_circ == Projection::e11() {
        return Err(KernelError::Spec(
            "remark-added: generic image must differ from E11".into(),
        ));
    }
    let m = grid_map("remark-added", |x| remark_added_eval(q_circ, x))?;
    ensure_preserver(m, "remark-added")
}

/// Template for subcase (i): everything below I collapses to 0, the top
/// boundary keeps its spectral projection.
pub fn subcase_i_map() -> Result<TabulatedMap> {
    let id = Herm2::identity();
    let m = grid_map("subcase-i", |x| {
        if loewner_lt(x, &id) {
            Point::zero()
        } else if *x == id {
            Point::Finite(id.clone())
        } else {
            let (_, _, p) = eigen_rational(x).expect("grid points decompose rationally");
            Point::Finite(p.into_matrix())
        }
    })?;
    ensure_preserver(m, "subcase-i")
}

/// Template for subcase (ii), the order dual of subcase (i).
pub fn subcase_ii_map() -> Result<TabulatedMap> {
    let zero = Herm2::zero();
    let id = Herm2::identity();
    let m = grid_map("subcase-ii", |x| {
        if loewner_lt(&zero, x) {
            Point::Finite(id.clone())
        } else if x.is_zero() {
            Point::zero()
        } else {
            let (_, _, p) = eigen_rational(x).expect("grid points decompose rationally");
            Point::Finite(p.into_matrix())
        }
    })?;
    ensure_preserver(m, "subcase-ii")
}

/// Template for subcase (o): a constant map into a single cone vertex Q
/// except at the endpoints.
pub fn subcase_o_map(q: &Projection) -> Result<TabulatedMap> {
    let id = Herm2::identity();
    let m = grid_map("subcase-o", |x| {
        if x.is_zero() {
            Point::zero()
        } else if *x == id {
            Point::Finite(id.clone())
        } else {
            Point::Finite(q.matrix().clone())
        }
    })?;
    ensure_preserver(m, "subcase-o")
}

/// Coefficient d with det(c1·E − c2·E⊥ − d·P) = 0, when it exists.
pub fn rank1_coherence_parameter(
    e: &Projection,
    c1: &Rational,
    c2: &Rational,
    p: &Projection,
) -> Result<Rational> {
    let c = trace_product(p.matrix(), e.matrix());
    let denom = (c1 + c2) * &c - c1;
    if denom.is_zero() {
        return Err(KernelError::Domain(
            "no coherent multiple: tr(PE) = c1/(c1+c2)".into(),
        ));
    }
    let d = c1 * c2 / denom;
    let combo = &(&e.matrix().scale(c1) - &e.complement().into_matrix().scale(c2))
        - &p.matrix().scale(&d);
    debug_assert!(combo.det().is_zero());
    Ok(d)
}

/// Per-ray sampling of a tabulated interval map.
#[derive(Debug, Clone)]
pub struct RayProfile {
    pub dir: Projection,
    pub inner: Vec<(Rational, Point)>,
    pub outer: Vec<(Rational, Point)>,
}

pub fn ray_profiles(m: &TabulatedMap) -> Result<Vec<RayProfile>> {
    let mut out = Vec::new();
    for p in canonical_projections() {
        if m.lookup(&Point::Finite(p.matrix().clone())).is_none() {
            continue;
        }
        let mut inner = Vec::new();
        let mut outer = Vec::new();
        for t in grid_scalars() {
            let xi = Point::Finite(p.matrix().scale(&t));
            if let Some(y) = m.lookup(&xi) {
                inner.push((t.clone(), y.clone()));
            }
            let xo = Point::Finite(p.matrix() + &p.complement().into_matrix().scale(&t));
            if let Some(y) = m.lookup(&xo) {
                outer.push((t, y.clone()));
            }
        }
        out.push(RayProfile {
            dir: p,
            inner,
            outer,
        });
    }
    if out.is_empty() {
        return Err(KernelError::Grid(
            "no canonical projections among the map inputs".into(),
        ));
    }
    Ok(out)
}
