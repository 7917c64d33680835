//! The standard-automorphism engine: generator words, application to points,
//! composition and inversion, affine normal form, the constructive existence
//! lemmas, Lorentz extraction, and Wigner fitting.

use crate::error::{KernelError, Result};
use crate::herm::{
    bloch, cholesky_factor, congruence_any, inertia, loewner_lt, rank1_decompose, rational_sqrt,
    trace_product, Herm2, Inertia, Mat2, Projection,
};
use crate::scalar::{GaussRational, Rational};
use crate::spacetime::{distance, xi, xi_inv, M4Event, Point};
use num_traits::{One, Zero};

/// A primitive automorphism of ō(H₂).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Negate,
    Transpose,
    Translate(Herm2),
    Congruence(Mat2),
    Invert,
}

impl Generator {
    pub fn congruence(s: Mat2) -> Result<Generator> {
        if s.det().is_zero() {
            return Err(KernelError::Singular);
        }
        Ok(Generator::Congruence(s))
    }
}

/// A composition word of generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AutoWord {
    pub gens: Vec<Generator>,
}

impl AutoWord {
    pub fn identity() -> AutoWord {
        AutoWord { gens: vec![] }
    }

    pub fn of(gens: Vec<Generator>) -> AutoWord {
        AutoWord { gens }
    }

    pub fn push(&mut self, g: Generator) {
        self.gens.push(g);
    }
}

fn apply_gen(g: &Generator, p: &Point) -> Point {
    match g {
        Generator::Negate => match p {
            Point::Finite(a) => Point::Finite(-a),
            // −∞ = ∞, so only the finite coefficient flips
            Point::Infinite { dir, offset } => Point::Infinite {
                dir: dir.clone(),
                offset: -offset.clone(),
            },
            Point::Omega => Point::Omega,
        },
        Generator::Transpose => match p {
            Point::Finite(a) => Point::Finite(a.transpose()),
            Point::Infinite { dir, offset } => Point::Infinite {
                dir: Projection::try_new(dir.matrix().transpose())
                    .expect("transpose of a projection is a projection"),
                offset: offset.clone(),
            },
            Point::Omega => Point::Omega,
        },
        Generator::Translate(b) => match p {
            Point::Finite(a) => Point::Finite(a + b),
            Point::Infinite { dir, offset } => Point::Infinite {
                dir: dir.clone(),
                offset: offset + trace_product(dir.complement().matrix(), b),
            },
            Point::Omega => Point::Omega,
        },
        Generator::Congruence(s) => match p {
            Point::Finite(a) => Point::Finite(congruence_any(s, a)),
            Point::Infinite { dir, offset } => {
                let image = congruence_any(s, dir.matrix());
                let t = image.trace();
                let q = Projection::try_new(image.scale(&t.recip()))
                    .expect("congruence image of a projection is rank one");
                let ss = congruence_any(s, &Herm2::identity());
                let b = offset * trace_product(q.complement().matrix(), &ss);
                Point::Infinite { dir: q, offset: b }
            }
            Point::Omega => Point::Omega,
        },
        Generator::Invert => match p {
            Point::Finite(a) => {
                if let Ok(inv) = a.inverse() {
                    Point::Finite(inv)
                } else if a.is_zero() {
                    Point::Omega
                } else {
                    // a = tP with t ≠ 0: inverse is ∞P⊥ + t⁻¹P
                    let (t, p1) = rank1_decompose(a).expect("singular nonzero is rank one");
                    Point::Infinite {
                        dir: p1.complement(),
                        offset: t.recip(),
                    }
                }
            }
            Point::Infinite { dir, offset } => {
                if offset.is_zero() {
                    // (∞P + 0·P⊥)⁻¹ = 0·P + ∞P⊥
                    Point::Infinite {
                        dir: dir.complement(),
                        offset: Rational::zero(),
                    }
                } else {
                    Point::Finite(dir.complement().matrix().scale(&offset.recip()))
                }
            }
            Point::Omega => Point::zero(),
        },
    }
}

/// Applies a word to a point, generator by generator.
pub fn apply(w: &AutoWord, p: &Point) -> Point {
    w.gens.iter().fold(p.clone(), |acc, g| apply_gen(g, &acc))
}

pub fn apply_herm(w: &AutoWord, a: &Herm2) -> Point {
    apply(w, &Point::Finite(a.clone()))
}

/// Concatenation: apply w1 first, then w2.
pub fn compose(w1: &AutoWord, w2: &AutoWord) -> AutoWord {
    let mut gens = w1.gens.clone();
    gens.extend(w2.gens.iter().cloned());
    AutoWord { gens }
}

fn invert_gen(g: &Generator) -> Generator {
    match g {
        Generator::Negate => Generator::Negate,
        Generator::Transpose => Generator::Transpose,
        Generator::Translate(b) => Generator::Translate(-b),
        Generator::Congruence(s) => {
            Generator::Congruence(s.inverse().expect("congruence matrices are invertible"))
        }
        Generator::Invert => Generator::Invert,
    }
}

pub fn invert_word(w: &AutoWord) -> AutoWord {
    AutoWord {
        gens: w.gens.iter().rev().map(invert_gen).collect(),
    }
}

/// Affine normal form X ↦ c·S·X^(t?)·S* + T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub c: i8,
    pub s: Mat2,
    pub t: Herm2,
    pub transposed: bool,
}

impl AffineForm {
    pub fn identity() -> AffineForm {
        AffineForm {
            c: 1,
            s: Mat2::identity(),
            t: Herm2::zero(),
            transposed: false,
        }
    }

    pub fn to_word(&self) -> AutoWord {
        let mut gens = Vec::new();
        if self.transposed {
            gens.push(Generator::Transpose);
        }
        if self.s != Mat2::identity() {
            gens.push(Generator::Congruence(self.s.clone()));
        }
        if self.c < 0 {
            gens.push(Generator::Negate);
        }
        if !self.t.is_zero() {
            gens.push(Generator::Translate(self.t.clone()));
        }
        AutoWord { gens }
    }

    pub fn apply(&self, p: &Point) -> Point {
        apply(&self.to_word(), p)
    }

    /// Multiplies S by a unit scalar making its first nonzero entry positive
    /// real, when that scalar is exactly representable.
    pub fn canonicalize_phase(mut self) -> AffineForm {
        let entries = [
            self.s.e[0][0].clone(),
            self.s.e[0][1].clone(),
            self.s.e[1][0].clone(),
            self.s.e[1][1].clone(),
        ];
        if let Some(e) = entries.iter().find(|e| !e.is_zero()) {
            if let Some(m) = rational_sqrt(&e.norm_sqr()) {
                let u = e.conj().scale(&m.recip());
                if u.norm_sqr().is_one() {
                    self.s = self.s.scale(&u);
                }
            }
        }
        self
    }

    /// Merges a generator applied after this form, staying affine.
    /// Returns false for Invert (not affine).
    fn absorb(&mut self, g: &Generator) -> bool {
        match g {
            Generator::Negate => {
                self.c = -self.c;
                self.t = -&self.t;
                true
            }
            Generator::Transpose => {
                self.s = self.s.transpose().adjoint(); // entrywise conjugate
                self.transposed = !self.transposed;
                self.t = self.t.transpose();
                true
            }
            Generator::Translate(b) => {
                self.t = &self.t + b;
                true
            }
            Generator::Congruence(r) => {
                self.s = r.mul(&self.s);
                self.t = congruence_any(r, &self.t);
                true
            }
            Generator::Invert => false,
        }
    }

    fn is_linear(&self) -> bool {
        self.t.is_zero()
    }

    /// Composes self after other: (self ∘ other)(X) = self(other(X)).
    fn after(&self, other: &AffineForm) -> AffineForm {
        let mut f = other.clone();
        for g in self.to_word().gens {
            assert!(f.absorb(&g));
        }
        f
    }
}

/// The probe set used to compare automorphism words by action.
pub fn probe_points() -> Vec<Point> {
    let half = Rational::new(1.into(), 2.into());
    vec![
        Point::zero(),
        Point::Finite(Herm2::identity()),
        Point::Finite(Herm2::e11()),
        Point::Finite(Herm2::e22()),
        Point::Finite(Herm2::new(
            half.clone(),
            half.clone(),
            GaussRational::new(half.clone(), Rational::zero()),
        )),
        Point::Finite(Herm2::new(
            half.clone(),
            half.clone(),
            GaussRational::new(Rational::zero(), half.clone()),
        )),
        Point::Finite(Herm2::diag(Rational::from_integer(2.into()), Rational::from_integer(3.into()))),
        Point::Omega,
        Point::infinite(Projection::e11(), Rational::zero()),
        Point::infinite(Projection::e22(), Rational::one()),
        Point::Finite(Herm2::j()),
        Point::Finite(Herm2::identity().scale(&half)),
    ]
}

/// Semidecision for word equality: agreement on the probe set.
pub fn words_agree(w1: &AutoWord, w2: &AutoWord) -> bool {
    probe_points()
        .iter()
        .all(|p| apply(w1, p) == apply(w2, p))
}

/// Symbolic reduction of a word to affine normal form. Succeeds whenever
/// inversions cancel pairwise through linear middles; otherwise falls back
/// to probe-based extraction. Returns None iff the word moves ω̄ (or, for
/// adversarial words, when no exact rational form can be recovered).
pub fn normalize_to_affine(w: &AutoWord) -> Option<AffineForm> {
    // stack of affine segments separated by inversions:
    // map = segs[n-1] ∘ Inv ∘ segs[n-2] ∘ Inv ∘ ... ∘ Inv ∘ segs[0]
    let mut segs = vec![AffineForm::identity()];
    for g in &w.gens {
        if matches!(g, Generator::Invert) {
            let top = segs.last().unwrap();
            if segs.len() >= 2 && top.is_linear() {
                // Inv ∘ (c S X^{t?} S*) ∘ Inv = c S⁻* X^{t?} S⁻¹
                let reduced = AffineForm {
                    c: top.c,
                    s: top.s.adjoint().inverse().expect("S invertible"),
                    t: Herm2::zero(),
                    transposed: top.transposed,
                };
                segs.pop();
                let below = segs.pop().unwrap();
                segs.push(reduced.after(&below));
            } else {
                segs.push(AffineForm::identity());
            }
        } else {
            segs.last_mut().unwrap().absorb(g);
        }
    }
    if segs.len() == 1 {
        return Some(segs.pop().unwrap().canonicalize_phase());
    }
    if apply(w, &Point::Omega) != Point::Omega {
        return None;
    }
    extract_affine_by_probes(w)
}

fn finite_image(w: &AutoWord, a: &Herm2) -> Option<Herm2> {
    match apply_herm(w, a) {
        Point::Finite(h) => Some(h),
        _ => None,
    }
}

/// Probe-based affine extraction for words that fix ω̄ but resist symbolic
/// reduction. Solves ψ(X) = cSX^(t?)S* from images of a hermitian basis.
fn extract_affine_by_probes(w: &AutoWord) -> Option<AffineForm> {
    let t = finite_image(w, &Herm2::zero())?;
    let x1 = Herm2::new(Rational::zero(), Rational::zero(), GaussRational::one());
    let x2 = Herm2::new(Rational::zero(), Rational::zero(), GaussRational::i());
    let psi = |x: &Herm2| -> Option<Herm2> { Some(&finite_image(w, x)? - &t) };
    let images = [
        psi(&Herm2::e11())?,
        psi(&Herm2::e22())?,
        psi(&x1)?,
        psi(&x2)?,
    ];
    for flag in [false, true] {
        // with the transpose flag, solve for χ(X) = ψ(Xᵗ) = cSXS*
        let chi: Vec<Mat2> = if flag {
            // E11ᵗ = E11, E22ᵗ = E22, X1ᵗ = X1, X2ᵗ = −X2
            vec![
                images[0].to_mat(),
                images[1].to_mat(),
                images[2].to_mat(),
                (-&images[3]).to_mat(),
            ]
        } else {
            images.iter().map(|h| h.to_mat()).collect()
        };
        let g = Herm2::from_mat(&chi[0].add(&chi[1])).ok()?;
        let c = match inertia(&g) {
            Inertia { pos: 2, .. } => 1i8,
            Inertia { neg: 2, .. } => -1i8,
            _ => continue,
        };
        let sign = GaussRational::from_ints(c as i64, 0);
        let b11 = chi[0].scale(&sign);
        // E12 = (X1 − i X2)/2
        let half = GaussRational::new(Rational::new(1.into(), 2.into()), Rational::zero());
        let b12 = chi[2]
            .sub(&chi[3].scale(&GaussRational::i()))
            .scale(&half)
            .scale(&sign);
        // b11 = s1 s1*, b12 = s1 s2*; scale both columns by conj(s1[j])
        let j = if !b11.e[0][0].is_zero() { 0 } else { 1 };
        let mu = b11.e[j][j].clone();
        if !mu.is_real() || mu.re <= Rational::zero() {
            continue;
        }
        let nu = rational_sqrt(&mu.re)?;
        let s1 = [b11.e[0][j].clone(), b11.e[1][j].clone()];
        let s2 = [b12.e[j][0].conj(), b12.e[j][1].conj()];
        let inv_nu = GaussRational::from_rational(nu.recip());
        let s = Mat2::new(
            &s1[0] * &inv_nu,
            &s2[0] * &inv_nu,
            &s1[1] * &inv_nu,
            &s2[1] * &inv_nu,
        );
        if s.det().is_zero() {
            continue;
        }
        let cand = AffineForm {
            c,
            s,
            t: t.clone(),
            transposed: flag,
        };
        let word = cand.to_word();
        if words_agree(w, &word) {
            return Some(cand.canonicalize_phase());
        }
    }
    None
}

/// Word sending A ↦ 0 and B ↦ ω̄ for d(A,B) = 2.
pub fn send_pair_to_0_omega(a: &Point, b: &Point) -> Result<AutoWord> {
    if distance(a, b) != 2 {
        return Err(KernelError::Domain("send_pair_to_0_omega needs distance 2".into()));
    }
    let mut w = match b {
        Point::Finite(bm) => {
            // X ↦ (X − B)⁻¹
            AutoWord::of(vec![Generator::Translate(-bm), Generator::Invert])
        }
        Point::Omega => AutoWord::identity(),
        Point::Infinite { dir, offset } => {
            // X ↦ ((X + (1−a)P)⁻¹ − P)⁻¹ with P the finite-direction projection
            let p = dir.complement().into_matrix();
            let shift = p.scale(&(Rational::one() - offset));
            AutoWord::of(vec![
                Generator::Translate(shift),
                Generator::Invert,
                Generator::Translate(-&p),
                Generator::Invert,
            ])
        }
    };
    match apply(&w, a) {
        Point::Finite(img) => {
            if !img.is_zero() {
                w.push(Generator::Translate(-&img));
            }
            Ok(w)
        }
        _ => Err(KernelError::Domain(
            "image of A is not finite; inputs were not at distance 2".into(),
        )),
    }
}

/// Word fixing 0 that acts as x ↦ x/(1 + βx) on the line {x·E11}.
fn moebius_e11(beta: Rational) -> AutoWord {
    AutoWord::of(vec![
        Generator::Invert,
        Generator::Translate(Herm2::e11().scale(&beta)),
        Generator::Invert,
    ])
}

/// Word sending A ↦ 0 and B ↦ E11 for d(A,B) = 1.
pub fn send_pair_to_0_e11(a: &Point, b: &Point) -> Result<AutoWord> {
    if distance(a, b) != 1 {
        return Err(KernelError::Domain("send_pair_to_0_e11 needs distance 1".into()));
    }
    // stage 1: move A to 0
    let mut w = match a {
        Point::Finite(am) => AutoWord::of(vec![Generator::Translate(-am)]),
        Point::Omega => AutoWord::of(vec![Generator::Invert]),
        Point::Infinite { dir, offset } => {
            let pperp = dir.complement().into_matrix();
            // shift the offset to 1, so inversion lands on the finite point P⊥
            AutoWord::of(vec![
                Generator::Translate(pperp.scale(&(Rational::one() - offset))),
                Generator::Invert,
                Generator::Translate(-&pperp),
            ])
        }
    };
    debug_assert_eq!(apply(&w, a), Point::zero());
    // stage 2: fix 0, send the image of B to E11
    match apply(&w, b) {
        Point::Finite(bm) => {
            let (t, p) = rank1_decompose(&bm)?;
            let s0 = align_to_e1(&p);
            let lambda = &t * congruence_any(&s0, p.matrix()).trace();
            w.push(Generator::Congruence(s0));
            // now B sits at λ·E11; the Möbius word pulls λ to 1
            let beta = (&lambda - Rational::one()) / &lambda;
            w = compose(&w, &moebius_e11(beta));
            Ok(w)
        }
        Point::Infinite { dir, offset } => {
            debug_assert!(offset.is_zero());
            let s0 = align_to_e1(&dir);
            w.push(Generator::Congruence(s0));
            // B is now ∞E11 + 0·E22, the point at infinity of the E11 line
            w = compose(&w, &moebius_e11(Rational::one()));
            Ok(w)
        }
        Point::Omega => unreachable!("Omega is at distance 2 from 0"),
    }
}

/// An invertible S with S·(span P)·S* along e1, exact.
/// Rows (u*, (−u₂, u₁)) send u to (|u|², 0); det = |u|² ≠ 0.
fn align_to_e1(p: &Projection) -> Mat2 {
    let u = p.spanning_vector();
    Mat2::new(
        u[0].conj(),
        u[1].conj(),
        (&u[1]).scale(&-Rational::one()),
        u[0].clone(),
    )
}

/// Order isomorphism of [A,B] onto [C,D] with A ↦ C, B ↦ D.
pub fn interval_iso(a: &Herm2, b: &Herm2, c: &Herm2, d: &Herm2) -> Result<AutoWord> {
    if !loewner_lt(a, b) || !loewner_lt(c, d) {
        return Err(KernelError::Domain("interval_iso needs A < B and C < D".into()));
    }
    let f1 = cholesky_factor(&(b - a))?;
    let f2 = cholesky_factor(&(d - c))?;
    let s = f2.mul(&f1.inverse()?);
    let mut gens = Vec::new();
    if !a.is_zero() {
        gens.push(Generator::Translate(-a));
    }
    gens.push(Generator::Congruence(s));
    if !c.is_zero() {
        gens.push(Generator::Translate(c.clone()));
    }
    Ok(AutoWord::of(gens))
}

/// Automorphism of [0,I] fixing 0 and I that moves (1/2)I to C.
pub fn midpoint_move(c: &Herm2) -> Result<AutoWord> {
    let zero = Herm2::zero();
    let id = Herm2::identity();
    if !loewner_lt(&zero, c) || !loewner_lt(c, &id) {
        return Err(KernelError::Domain("midpoint_move needs 0 < C < I".into()));
    }
    // ψ₁(X) = X⁻¹ − I maps [0,I] onto the positive cone with C ↦ C⁻¹ − I
    let d = &c.inverse()? - &id;
    let f = cholesky_factor(&d)?;
    Ok(AutoWord::of(vec![
        Generator::Invert,
        Generator::Translate(-&id),
        Generator::Congruence(f),
        Generator::Translate(id.clone()),
        Generator::Invert,
    ]))
}

/// The 4×4 Minkowski-coordinate matrix of r ↦ ξ⁻¹(c·S·ξ(r)^(t?)·S*).
pub fn induced_4x4(s: &Mat2, transposed: bool, c: i8) -> Result<[[Rational; 4]; 4]> {
    if s.det().is_zero() {
        return Err(KernelError::Singular);
    }
    let basis = [
        M4Event::new(Rational::one(), Rational::zero(), Rational::zero(), Rational::zero()),
        M4Event::new(Rational::zero(), Rational::one(), Rational::zero(), Rational::zero()),
        M4Event::new(Rational::zero(), Rational::zero(), Rational::one(), Rational::zero()),
        M4Event::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::one()),
    ];
    let mut cols = Vec::new();
    for e in &basis {
        let mut h = xi(e);
        if transposed {
            h = h.transpose();
        }
        let mut img = congruence_any(s, &h);
        if c < 0 {
            img = -&img;
        }
        cols.push(xi_inv(&img));
    }
    let mut q: [[Rational; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    for (j, col) in cols.iter().enumerate() {
        q[0][j] = col.x.clone();
        q[1][j] = col.y.clone();
        q[2][j] = col.z.clone();
        q[3][j] = col.t.clone();
    }
    Ok(q)
}

/// The Lorentz data of an affine form: Q4ᵗ·M·Q4 = d·M with M = diag(−1,−1,−1,1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LorentzDecomp {
    pub d: Rational,
    pub q4: [[Rational; 4]; 4],
    pub a: M4Event,
}

pub fn lorentz_extract(f: &AffineForm) -> LorentzDecomp {
    let d = f.s.det().norm_sqr();
    let q4 = induced_4x4(&f.s, f.transposed, f.c).expect("affine form has invertible S");
    LorentzDecomp {
        d,
        q4,
        a: xi_inv(&f.t),
    }
}

pub fn minkowski_gram() -> [[Rational; 4]; 4] {
    let mut m: [[Rational; 4]; 4] =
        std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    m[0][0] = -Rational::one();
    m[1][1] = -Rational::one();
    m[2][2] = -Rational::one();
    m[3][3] = Rational::one();
    m
}

pub fn mat4_mul(a: &[[Rational; 4]; 4], b: &[[Rational; 4]; 4]) -> [[Rational; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).map(|k| &a[i][k] * &b[k][j]).sum())
    })
}

pub fn mat4_transpose(a: &[[Rational; 4]; 4]) -> [[Rational; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

// ---------------------------------------------------------------------------
// Wigner fitting: the single float-assisted operation of the kernel.

pub type C64 = num::complex::Complex64;

/// Float unitary recovered by `wigner_fit`, with the Bloch-reflection flag.
#[derive(Debug, Clone)]
pub struct WignerFit {
    pub u: [[C64; 2]; 2],
    pub conjugate_by_transpose: bool,
    pub residual: f64,
}

fn bloch3(p: &Projection) -> [f64; 3] {
    let b = bloch(p.matrix()).expect("projection has trace one");
    [
        2.0 * rational_to_f64(&b.x),
        2.0 * rational_to_f64(&b.y),
        2.0 * rational_to_f64(&b.z),
    ]
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // exact for the bounded rationals used in suites
    str::parse::<f64>(&n.to_string()).unwrap() / str::parse::<f64>(&d.to_string()).unwrap()
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inv3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let d = det3(m);
    if d.abs() < 1e-9 {
        return None;
    }
    let c = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c(j, i) / d;
        }
    }
    Some(out)
}

fn mul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Unit quaternion of a rotation matrix in standard σ-coordinates.
fn rotation_to_quaternion(r: &[[f64; 3]; 3]) -> [f64; 4] {
    let tr = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        w = 0.25 * s;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if r[0][0] >= r[1][1] && r[0][0] >= r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        w = (r[2][1] - r[1][2]) / s;
        x = 0.25 * s;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] >= r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = 0.25 * s;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = 0.25 * s;
    }
    let n = (w * w + x * x + y * y + z * z).sqrt();
    [w / n, x / n, y / n, z / n]
}

/// Recovers the unitary (up to phase) behind a transition-probability
/// preserving map on sampled projections. Float-assisted; tolerances are
/// 1e−12 on the hypothesis and 1e−9 on the fit residual.
pub fn wigner_fit(pairs: &[(Projection, Projection)]) -> Result<WignerFit> {
    if pairs.len() < 3 {
        return Err(KernelError::Data("need at least 3 projection pairs".into()));
    }
    for (p, q) in pairs {
        for (p2, q2) in pairs {
            // exact inputs: the hypothesis tr(μP μQ) = tr(PQ) is checked exactly
            if trace_product(p.matrix(), p2.matrix()) != trace_product(q.matrix(), q2.matrix()) {
                return Err(KernelError::Data(
                    "pairs do not preserve transition probabilities".into(),
                ));
            }
        }
    }
    // pick three linearly independent input Bloch vectors
    let mut idx = None;
    'outer: for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            for k in (j + 1)..pairs.len() {
                let m = [bloch3(&pairs[i].0), bloch3(&pairs[j].0), bloch3(&pairs[k].0)];
                let cols = [
                    [m[0][0], m[1][0], m[2][0]],
                    [m[0][1], m[1][1], m[2][1]],
                    [m[0][2], m[1][2], m[2][2]],
                ];
                if det3(&cols).abs() > 1e-6 {
                    idx = Some((i, j, k));
                    break 'outer;
                }
            }
        }
    }
    let (i, j, k) = idx.ok_or_else(|| {
        KernelError::Degenerate("input Bloch vectors are coplanar".into())
    })?;
    let pcols = {
        let a = bloch3(&pairs[i].0);
        let b = bloch3(&pairs[j].0);
        let c = bloch3(&pairs[k].0);
        [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]]
    };
    let qcols = {
        let a = bloch3(&pairs[i].1);
        let b = bloch3(&pairs[j].1);
        let c = bloch3(&pairs[k].1);
        [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]]
    };
    let pinv = inv3(&pcols).ok_or_else(|| {
        KernelError::Degenerate("input Bloch vectors are numerically degenerate".into())
    })?;
    let r = mul3(&qcols, &pinv);
    let flag = det3(&r) < 0.0;
    // transpose conjugation reflects the Bloch sphere in the y = 0 plane
    let refl = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
    let rot = if flag { mul3(&r, &refl) } else { r };
    // our Bloch chart differs from σ-coordinates by C = diag(1, −1, −1)
    let cmat = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    let r_std = mul3(&cmat, &mul3(&rot, &cmat));
    let [w, x, y, z] = rotation_to_quaternion(&r_std);
    // U = wI − i(xσx + yσy + zσz)
    let u = [
        [C64::new(w, -z), C64::new(-y, -x)],
        [C64::new(y, -x), C64::new(w, z)],
    ];
    let residual = pairs
        .iter()
        .map(|(p, q)| wigner_residual(&u, flag, p, q))
        .fold(0.0f64, f64::max);
    Ok(WignerFit {
        u,
        conjugate_by_transpose: flag,
        residual,
    })
}

fn herm_to_c64(h: &Herm2) -> [[C64; 2]; 2] {
    [
        [
            C64::new(rational_to_f64(&h.a), 0.0),
            C64::new(rational_to_f64(&h.z.re), rational_to_f64(&h.z.im)),
        ],
        [
            C64::new(rational_to_f64(&h.z.re), -rational_to_f64(&h.z.im)),
            C64::new(rational_to_f64(&h.d), 0.0),
        ],
    ]
}

fn c64_mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let p = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]]
}

fn c64_adjoint(a: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// ‖U·P^(t?)·U* − Q‖ in the Frobenius norm, floats.
pub fn wigner_residual(
    u: &[[C64; 2]; 2],
    transpose: bool,
    p: &Projection,
    q: &Projection,
) -> f64 {
    let mut pm = herm_to_c64(p.matrix());
    if transpose {
        pm = [[pm[0][0], pm[1][0]], [pm[0][1], pm[1][1]]];
    }
    let img = c64_mul(&c64_mul(u, &pm), &c64_adjoint(u));
    let qm = herm_to_c64(q.matrix());
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += (img[i][j] - qm[i][j]).norm_sqr();
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn diag_w(a: i64, d: i64) -> Generator {
        Generator::Congruence(Mat2::diag(
            GaussRational::from_ints(a, 0),
            GaussRational::from_ints(d, 0),
        ))
    }

    #[test]
    fn apply_examples() {
        let w = AutoWord::of(vec![Generator::Translate(Herm2::diag(rat_int(0), rat_int(3)))]);
        assert_eq!(
            apply(&w, &Point::infinite(Projection::e11(), rat_int(1))),
            Point::infinite(Projection::e11(), rat_int(4))
        );
        let inv = AutoWord::of(vec![Generator::Invert]);
        assert_eq!(
            apply(&inv, &Point::Finite(Herm2::e11().scale(&rat_int(2)))),
            Point::infinite(Projection::e22(), rat(1, 2))
        );
        assert_eq!(apply(&inv, &Point::Omega), Point::zero());
        assert_eq!(
            apply(&inv, &Point::infinite(Projection::e11(), rat_int(0))),
            Point::infinite(Projection::e22(), rat_int(0))
        );
    }

    #[test]
    fn invert_word_examples() {
        let w = AutoWord::of(vec![diag_w(2, 1)]);
        let wi = invert_word(&w);
        match &wi.gens[0] {
            Generator::Congruence(s) => {
                assert_eq!(
                    s,
                    &Mat2::diag(
                        GaussRational::new(rat(1, 2), rat_int(0)),
                        GaussRational::one()
                    )
                );
            }
            _ => panic!("expected congruence"),
        }
        assert_eq!(
            invert_word(&AutoWord::of(vec![Generator::Invert])).gens,
            vec![Generator::Invert]
        );
    }

    #[test]
    fn word_roundtrip_on_probes() {
        let w = AutoWord::of(vec![
            Generator::Negate,
            Generator::Translate(Herm2::j()),
            diag_w(3, 1),
            Generator::Invert,
            Generator::Transpose,
            Generator::Translate(Herm2::identity()),
        ]);
        let wi = invert_word(&w);
        for p in probe_points() {
            assert_eq!(apply(&wi, &apply(&w, &p)), p);
        }
    }

    #[test]
    fn generators_preserve_coherency_on_probes() {
        use crate::spacetime::coherent;
        let gens = [
            Generator::Negate,
            Generator::Transpose,
            Generator::Translate(Herm2::new(rat_int(1), rat(-1, 2), GaussRational::from_ints(1, 1))),
            Generator::Congruence(Mat2::new(
                GaussRational::from_ints(1, 0),
                GaussRational::from_ints(2, 1),
                GaussRational::zero(),
                GaussRational::from_ints(1, 0),
            )),
            Generator::Invert,
        ];
        let pts = probe_points();
        for g in &gens {
            for a in &pts {
                for b in &pts {
                    let ga = apply_gen(g, a);
                    let gb = apply_gen(g, b);
                    assert_eq!(coherent(a, b), coherent(&ga, &gb), "{g:?} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let w = AutoWord::of(vec![Generator::Negate, Generator::Translate(Herm2::identity())]);
        let f = normalize_to_affine(&w).unwrap();
        assert_eq!(f.c, -1);
        assert_eq!(f.s, Mat2::identity());
        assert_eq!(f.t, Herm2::identity());
        assert!(!f.transposed);

        assert!(normalize_to_affine(&AutoWord::of(vec![Generator::Invert])).is_none());

        let w2 = AutoWord::of(vec![diag_w(2, 1), Generator::Transpose]);
        let f2 = normalize_to_affine(&w2).unwrap();
        assert!(f2.transposed);
        assert_eq!(f2.c, 1);
        assert!(f2.t.is_zero());
        assert!(words_agree(&w2, &f2.to_word()));
    }

    #[test]
    fn normalize_through_inversion_pair() {
        // Invert ∘ congruence ∘ Invert reduces symbolically
        let w = AutoWord::of(vec![
            Generator::Invert,
            diag_w(2, 3),
            Generator::Invert,
            Generator::Translate(Herm2::e11()),
        ]);
        let f = normalize_to_affine(&w).unwrap();
        assert!(words_agree(&w, &f.to_word()));
    }

    #[test]
    fn send_pair_to_0_omega_examples() {
        let cases = [
            (Point::zero(), Point::Omega),
            (Point::zero(), Point::Finite(Herm2::identity())),
            (
                Point::Finite(Herm2::identity()),
                Point::infinite(Projection::e11(), rat_int(0)),
            ),
            (
                Point::infinite(Projection::e22(), rat(3, 2)),
                Point::Finite(Herm2::j()),
            ),
        ];
        for (a, b) in &cases {
            let w = send_pair_to_0_omega(a, b).unwrap();
            assert_eq!(apply(&w, a), Point::zero(), "A image for {a:?},{b:?}");
            assert_eq!(apply(&w, b), Point::Omega, "B image for {a:?},{b:?}");
        }
        assert!(send_pair_to_0_omega(&Point::zero(), &Point::zero()).is_err());
    }

    #[test]
    fn send_pair_to_0_e11_examples() {
        let q = crate::herm::projection_from_vector(&[
            GaussRational::from_ints(2, 0),
            GaussRational::from_ints(1, 1),
        ])
        .unwrap();
        let cases = [
            (Point::zero(), Point::Finite(Herm2::e11())),
            (Point::zero(), Point::Finite(Herm2::e22().scale(&rat_int(-3)))),
            (Point::zero(), Point::infinite(Projection::e11(), rat_int(0))),
            (
                Point::Finite(Herm2::identity()),
                Point::Finite(&Herm2::identity() + &q.matrix().scale(&rat(5, 3))),
            ),
            (Point::Omega, Point::infinite(q.clone(), rat(-7, 2))),
            (
                Point::infinite(q, rat(1, 3)),
                Point::Omega,
            ),
        ];
        for (a, b) in &cases {
            let w = send_pair_to_0_e11(a, b).unwrap();
            assert_eq!(apply(&w, a), Point::zero(), "A image for {a:?}");
            assert_eq!(apply(&w, b), Point::Finite(Herm2::e11()), "B image for {b:?}");
        }
    }

    #[test]
    fn interval_iso_examples() {
        let zero = Herm2::zero();
        let id = Herm2::identity();
        let w = interval_iso(&zero, &id, &zero, &id).unwrap();
        for p in probe_points() {
            assert_eq!(apply(&w, &p), p);
        }
        let w2 = interval_iso(&zero, &id.scale(&rat_int(4)), &zero, &id).unwrap();
        assert_eq!(apply_herm(&w2, &id.scale(&rat_int(4))), Point::Finite(id.clone()));
        let b = Herm2::diag(rat_int(4), rat_int(1));
        let w3 = interval_iso(&zero, &b, &id, &(&id + &b)).unwrap();
        assert_eq!(apply_herm(&w3, &zero), Point::Finite(id.clone()));
        assert_eq!(apply_herm(&w3, &b), Point::Finite(&id + &b));
    }

    #[test]
    fn midpoint_move_examples() {
        let half_i = Herm2::identity().scale(&rat(1, 2));
        let cases = [
            Herm2::diag(rat(4, 5), rat(1, 2)),
            Herm2::identity().scale(&rat(1, 3)),
            half_i.clone(),
        ];
        for c in &cases {
            let w = midpoint_move(c).unwrap();
            assert_eq!(apply_herm(&w, &Herm2::zero()), Point::zero());
            assert_eq!(apply_herm(&w, &Herm2::identity()), Point::Finite(Herm2::identity()));
            assert_eq!(apply_herm(&w, &half_i), Point::Finite(c.clone()));
        }
        assert!(midpoint_move(&Herm2::j()).is_err());
    }

    #[test]
    fn induced_4x4_examples() {
        let id4 = induced_4x4(&Mat2::identity(), false, 1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(id4[i][j], if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
        let four = induced_4x4(
            &Mat2::diag(GaussRational::from_ints(2, 0), GaussRational::from_ints(2, 0)),
            false,
            1,
        )
        .unwrap();
        for i in 0..4 {
            assert_eq!(four[i][i], rat_int(4));
        }
    }

    #[test]
    fn lorentz_extract_examples() {
        let idf = AffineForm::identity();
        let l = lorentz_extract(&idf);
        assert_eq!(l.d, rat_int(1));
        assert_eq!(l.a, M4Event::origin());

        let s = Mat2::new(
            GaussRational::new(rat(3, 5), rat_int(0)),
            GaussRational::new(rat(4, 5), rat_int(0)),
            GaussRational::new(rat(-4, 5), rat_int(0)),
            GaussRational::new(rat(3, 5), rat_int(0)),
        );
        let f = AffineForm {
            c: 1,
            s,
            t: xi(&M4Event::new(rat_int(1), rat_int(0), rat_int(0), rat_int(0))),
            transposed: false,
        };
        let l2 = lorentz_extract(&f);
        assert_eq!(l2.d, rat_int(1));
        assert_eq!(l2.a, M4Event::new(rat_int(1), rat_int(0), rat_int(0), rat_int(0)));
        let m = minkowski_gram();
        let lhs = mat4_mul(&mat4_transpose(&l2.q4), &mat4_mul(&m, &l2.q4));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(lhs[i][j], &l2.d * &m[i][j]);
            }
        }
    }

    fn sample_projections() -> Vec<Projection> {
        use crate::herm::projection_from_vector;
        vec![
            Projection::e11(),
            projection_from_vector(&[GaussRational::from_ints(1, 0), GaussRational::from_ints(1, 0)])
                .unwrap(),
            projection_from_vector(&[GaussRational::from_ints(1, 0), GaussRational::from_ints(0, 1)])
                .unwrap(),
            projection_from_vector(&[GaussRational::from_ints(2, 1), GaussRational::from_ints(1, -1)])
                .unwrap(),
        ]
    }

    #[test]
    fn wigner_fit_identity() {
        let pairs: Vec<_> = sample_projections()
            .into_iter()
            .map(|p| (p.clone(), p))
            .collect();
        let fit = wigner_fit(&pairs).unwrap();
        assert!(!fit.conjugate_by_transpose);
        assert!(fit.residual <= 1e-9, "residual {}", fit.residual);
    }

    #[test]
    fn wigner_fit_rotation() {
        let u0 = Mat2::new(
            GaussRational::new(rat(3, 5), rat_int(0)),
            GaussRational::new(rat(4, 5), rat_int(0)),
            GaussRational::new(rat(-4, 5), rat_int(0)),
            GaussRational::new(rat(3, 5), rat_int(0)),
        );
        assert!(u0.is_unitary());
        let pairs: Vec<_> = sample_projections()
            .into_iter()
            .map(|p| {
                let img = congruence_any(&u0, p.matrix());
                (p, Projection::try_new(img).unwrap())
            })
            .collect();
        let fit = wigner_fit(&pairs).unwrap();
        assert!(!fit.conjugate_by_transpose);
        assert!(fit.residual <= 1e-9, "residual {}", fit.residual);
    }

    #[test]
    fn wigner_fit_transpose() {
        let pairs: Vec<_> = sample_projections()
            .into_iter()
            .map(|p| {
                let img = p.matrix().transpose();
                (p, Projection::try_new(img).unwrap())
            })
            .collect();
        let fit = wigner_fit(&pairs).unwrap();
        assert!(fit.conjugate_by_transpose);
        assert!(fit.residual <= 1e-9, "residual {}", fit.residual);
    }

    #[test]
    fn wigner_fit_rejects_bad_data() {
        let pairs = vec![
            (Projection::e11(), Projection::e11()),
            (Projection::e22(), Projection::e11()),
            (
                crate::herm::projection_from_vector(&[
                    GaussRational::from_ints(1, 0),
                    GaussRational::from_ints(1, 0),
                ])
                .unwrap(),
                Projection::e22(),
            ),
        ];
        assert!(matches!(wigner_fit(&pairs), Err(KernelError::Data(_))));
    }
}
