//! Exact 2×2 hermitian linear algebra: determinant/trace/adjugate, rank,
//! inertia, Loewner order, projections, Bloch coordinates, congruence.
//! Everything is radical-free; there is no eigendecomposition anywhere.

use crate::error::{KernelError, Result};
use crate::scalar::{sign_of, GaussRational, Rational, SignClass};
use num_traits::{One, Zero};
use std::ops::{Add, Neg, Sub};

/// General 2×2 matrix over the Gaussian rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [[GaussRational; 2]; 2],
}

impl Mat2 {
    pub fn new(
        a: GaussRational,
        b: GaussRational,
        c: GaussRational,
        d: GaussRational,
    ) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Mat2::new(
            GaussRational::one(),
            GaussRational::zero(),
            GaussRational::zero(),
            GaussRational::one(),
        )
    }

    pub fn zero() -> Self {
        Mat2::new(
            GaussRational::zero(),
            GaussRational::zero(),
            GaussRational::zero(),
            GaussRational::zero(),
        )
    }

    pub fn diag(a: GaussRational, d: GaussRational) -> Self {
        Mat2::new(a, GaussRational::zero(), GaussRational::zero(), d)
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let p = |i: usize, j: usize| {
            &(&self.e[i][0] * &rhs.e[0][j]) + &(&self.e[i][1] * &rhs.e[1][j])
        };
        Mat2::new(p(0, 0), p(0, 1), p(1, 0), p(1, 1))
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            &self.e[0][0] + &rhs.e[0][0],
            &self.e[0][1] + &rhs.e[0][1],
            &self.e[1][0] + &rhs.e[1][0],
            &self.e[1][1] + &rhs.e[1][1],
        )
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            &self.e[0][0] - &rhs.e[0][0],
            &self.e[0][1] - &rhs.e[0][1],
            &self.e[1][0] - &rhs.e[1][0],
            &self.e[1][1] - &rhs.e[1][1],
        )
    }

    pub fn scale(&self, c: &GaussRational) -> Mat2 {
        Mat2::new(
            &self.e[0][0] * c,
            &self.e[0][1] * c,
            &self.e[1][0] * c,
            &self.e[1][1] * c,
        )
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].clone(),
            self.e[1][0].clone(),
            self.e[0][1].clone(),
            self.e[1][1].clone(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn det(&self) -> GaussRational {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn trace(&self) -> GaussRational {
        &self.e[0][0] + &self.e[1][1]
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(
            self.e[1][1].clone(),
            (&self.e[0][1]).neg(),
            (&self.e[1][0]).neg(),
            self.e[0][0].clone(),
        )
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let d = self.det();
        if d.is_zero() {
            return Err(KernelError::Singular);
        }
        Ok(self.adjugate().scale(&d.inv()?))
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul(self) == Mat2::identity()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }
}

/// 2×2 hermitian matrix [[a, z], [conj z, d]] with exact rational diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Herm2 {
    pub a: Rational,
    pub d: Rational,
    pub z: GaussRational,
}

impl Herm2 {
    pub fn new(a: Rational, d: Rational, z: GaussRational) -> Self {
        Herm2 { a, d, z }
    }

    pub fn zero() -> Self {
        Herm2::new(Rational::zero(), Rational::zero(), GaussRational::zero())
    }

    pub fn identity() -> Self {
        Herm2::new(Rational::one(), Rational::one(), GaussRational::zero())
    }

    pub fn diag(a: Rational, d: Rational) -> Self {
        Herm2::new(a, d, GaussRational::zero())
    }

    pub fn e11() -> Self {
        Herm2::diag(Rational::one(), Rational::zero())
    }

    pub fn e22() -> Self {
        Herm2::diag(Rational::zero(), Rational::one())
    }

    /// J = diag(1, −1).
    pub fn j() -> Self {
        Herm2::diag(Rational::one(), -Rational::one())
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - self.z.norm_sqr()
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    pub fn scale(&self, c: &Rational) -> Herm2 {
        Herm2::new(&self.a * c, &self.d * c, self.z.scale(c))
    }

    /// Entrywise transpose, still hermitian.
    pub fn transpose(&self) -> Herm2 {
        Herm2::new(self.a.clone(), self.d.clone(), self.z.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.d.is_zero() && self.z.is_zero()
    }

    pub fn rank(&self) -> usize {
        if self.is_zero() {
            0
        } else if self.det().is_zero() {
            1
        } else {
            2
        }
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(
            GaussRational::from_rational(self.a.clone()),
            self.z.clone(),
            self.z.conj(),
            GaussRational::from_rational(self.d.clone()),
        )
    }

    pub fn from_mat(m: &Mat2) -> Result<Herm2> {
        if m.e[0][1].conj() != m.e[1][0] || !m.e[0][0].is_real() || !m.e[1][1].is_real() {
            return Err(KernelError::Domain("matrix is not hermitian".into()));
        }
        Ok(Herm2::new(
            m.e[0][0].re.clone(),
            m.e[1][1].re.clone(),
            m.e[0][1].clone(),
        ))
    }

    /// Inverse via adjugate/determinant; hermitian again.
    pub fn inverse(&self) -> Result<Herm2> {
        let det = self.det();
        if det.is_zero() {
            return Err(KernelError::Singular);
        }
        Ok(Herm2::new(
            &self.d / &det,
            &self.a / &det,
            self.z.neg().scale(&det.recip()),
        ))
    }
}

impl Add for &Herm2 {
    type Output = Herm2;
    fn add(self, rhs: Self) -> Herm2 {
        Herm2::new(&self.a + &rhs.a, &self.d + &rhs.d, &self.z + &rhs.z)
    }
}

impl Sub for &Herm2 {
    type Output = Herm2;
    fn sub(self, rhs: Self) -> Herm2 {
        Herm2::new(&self.a - &rhs.a, &self.d - &rhs.d, &self.z - &rhs.z)
    }
}

impl Neg for &Herm2 {
    type Output = Herm2;
    fn neg(self) -> Herm2 {
        Herm2::new(-self.a.clone(), -self.d.clone(), (&self.z).neg())
    }
}

/// Eigenvalue signature (#positive, #negative, #zero), from det/trace signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub pos: u8,
    pub neg: u8,
    pub zero: u8,
}

impl Inertia {
    pub fn new(pos: u8, neg: u8, zero: u8) -> Self {
        debug_assert_eq!(pos + neg + zero, 2);
        Inertia { pos, neg, zero }
    }

    pub fn is_definite(&self) -> bool {
        self.pos == 2 || self.neg == 2
    }
}

pub fn inertia(a: &Herm2) -> Inertia {
    match (sign_of(&a.det()), sign_of(&a.trace())) {
        (SignClass::Positive, SignClass::Positive) => Inertia::new(2, 0, 0),
        (SignClass::Positive, _) => Inertia::new(0, 2, 0),
        (SignClass::Negative, _) => Inertia::new(1, 1, 0),
        (SignClass::Zero, SignClass::Positive) => Inertia::new(1, 0, 1),
        (SignClass::Zero, SignClass::Negative) => Inertia::new(0, 1, 1),
        (SignClass::Zero, SignClass::Zero) => Inertia::new(0, 0, 2),
    }
}

/// Strict Loewner order: B − A positive definite.
pub fn loewner_lt(a: &Herm2, b: &Herm2) -> bool {
    inertia(&(b - a)) == Inertia::new(2, 0, 0)
}

/// Non-strict Loewner order: B − A positive semidefinite.
pub fn loewner_le(a: &Herm2, b: &Herm2) -> bool {
    let i = inertia(&(b - a));
    i.neg == 0
}

/// Rank-one projection; stored as its hermitian matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Projection(Herm2);

impl Projection {
    pub fn try_new(m: Herm2) -> Result<Projection> {
        if m.trace() != Rational::one() || !m.det().is_zero() {
            return Err(KernelError::Domain(
                "not a rank-one projection (need trace 1, det 0)".into(),
            ));
        }
        Ok(Projection(m))
    }

    pub fn matrix(&self) -> &Herm2 {
        &self.0
    }

    pub fn into_matrix(self) -> Herm2 {
        self.0
    }

    pub fn e11() -> Projection {
        Projection(Herm2::e11())
    }

    pub fn e22() -> Projection {
        Projection(Herm2::e22())
    }

    pub fn complement(&self) -> Projection {
        Projection(&Herm2::identity() - &self.0)
    }

    /// A spanning column vector (exact, unnormalized).
    pub fn spanning_vector(&self) -> [GaussRational; 2] {
        let m = &self.0;
        if !m.a.is_zero() {
            [GaussRational::from_rational(m.a.clone()), m.z.conj()]
        } else {
            // a = 0 forces z = 0 (det 0), so the matrix is E22
            [GaussRational::zero(), GaussRational::from_rational(m.d.clone())]
        }
    }
}

/// xx*/(x*x) for a nonzero column vector x.
pub fn projection_from_vector(x: &[GaussRational; 2]) -> Result<Projection> {
    let n = x[0].norm_sqr() + x[1].norm_sqr();
    if n.is_zero() {
        return Err(KernelError::Domain("zero vector spans no projection".into()));
    }
    let a = x[0].norm_sqr() / &n;
    let d = x[1].norm_sqr() / &n;
    let z = (&x[0] * &x[1].conj()).scale(&n.recip());
    Projection::try_new(Herm2::new(a, d, z))
}

/// Writes a rank-one hermitian matrix as t·P with t = tr(A).
pub fn rank1_decompose(a: &Herm2) -> Result<(Rational, Projection)> {
    if a.rank() != 1 {
        return Err(KernelError::Rank(format!("rank is {}, need 1", a.rank())));
    }
    let t = a.trace();
    // rank one and hermitian means trace is nonzero
    let p = Projection::try_new(a.scale(&t.recip()))?;
    Ok((t, p))
}

/// ‖P − Q‖² = 1 − tr(PQ), exact.
pub fn proj_dist_sq(p: &Projection, q: &Projection) -> Rational {
    let pm = p.matrix();
    let qm = q.matrix();
    let tr_pq = &pm.a * &qm.a
        + &pm.d * &qm.d
        + (&pm.z * &qm.z.conj()).re.clone()
        + (&pm.z.conj() * &qm.z).re.clone();
    Rational::one() - tr_pq
}

/// tr(AB) for hermitian A, B — always real.
pub fn trace_product(a: &Herm2, b: &Herm2) -> Rational {
    &a.a * &b.a + &a.d * &b.d + (&a.z * &b.z.conj()).re.clone() + (&a.z.conj() * &b.z).re.clone()
}

/// Bloch coordinates of a trace-one hermitian matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlochVector {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

/// [[1/2−z, x+iy], [x−iy, 1/2+z]] ↦ (x, y, z); needs trace one.
pub fn bloch(a: &Herm2) -> Result<BlochVector> {
    if a.trace() != Rational::one() {
        return Err(KernelError::Domain("bloch needs trace one".into()));
    }
    let half = Rational::new(1.into(), 2.into());
    Ok(BlochVector {
        x: a.z.re.clone(),
        y: a.z.im.clone(),
        z: &half - &a.a,
    })
}

pub fn bloch_inv(v: &BlochVector) -> Herm2 {
    let half = Rational::new(1.into(), 2.into());
    Herm2::new(
        &half - &v.z,
        &half + &v.z,
        GaussRational::new(v.x.clone(), v.y.clone()),
    )
}

/// SAS* for invertible S; exact, rank preserving.
pub fn congruence(s: &Mat2, a: &Herm2) -> Result<Herm2> {
    if s.det().is_zero() {
        return Err(KernelError::Singular);
    }
    Herm2::from_mat(&s.mul(&a.to_mat()).mul(&s.adjoint()))
}

/// SAS* without the invertibility requirement (used for rank-one factors).
pub fn congruence_any(s: &Mat2, a: &Herm2) -> Herm2 {
    Herm2::from_mat(&s.mul(&a.to_mat()).mul(&s.adjoint())).expect("SAS* is hermitian")
}

/// A Gaussian rational g with |g|² = r, when one exists (r must be a norm
/// from ℚ(i), i.e. numerator·denominator a sum of two integer squares).
pub fn two_square_rational(r: &Rational) -> Option<GaussRational> {
    use num::BigInt;
    if r.is_zero() {
        return Some(GaussRational::zero());
    }
    if r < &Rational::zero() {
        return None;
    }
    let n = r.numer() * r.denom();
    let limit = BigInt::from(1_000_000_000_000u64);
    if n > limit {
        return None; // out of search range; callers report RadicalError
    }
    let mut a = BigInt::from(0u32);
    while &a * &a <= n {
        let rem = &n - &a * &a;
        let b = rem.sqrt();
        if &b * &b == rem {
            let d = Rational::from_integer(r.denom().clone());
            return Some(GaussRational::new(
                Rational::from_integer(a) / &d,
                Rational::from_integer(b) / &d,
            ));
        }
        a += 1;
    }
    None
}

/// A pair (x, y) of Gaussian rationals with |x|² + |y|² = r, for r ≥ 0.
/// Always exists (four-square decomposition), up to the search cap.
fn four_square_rational(r: &Rational) -> Option<(GaussRational, GaussRational)> {
    use num::BigInt;
    if r.is_zero() {
        return Some((GaussRational::zero(), GaussRational::zero()));
    }
    let n = r.numer() * r.denom();
    let limit = BigInt::from(1_000_000_000_000u64);
    if n > limit {
        return None;
    }
    let d = Rational::from_integer(r.denom().clone());
    let mut a = BigInt::from(0u32);
    while &a * &a <= n {
        let rem = &n - &a * &a;
        if let Some(g) = two_square_rational(&Rational::from_integer(rem)) {
            return Some((
                GaussRational::new(Rational::from_integer(a) / &d, g.re / &d),
                GaussRational::new(g.im / &d, Rational::zero()),
            ));
        }
        a += 1;
    }
    None
}

/// An exact factor F with F·F* = A, for positive semidefinite A whose
/// determinant is a norm from ℚ(i). Fails with RadicalError otherwise.
pub fn cholesky_factor(a: &Herm2) -> Result<Mat2> {
    let i = inertia(a);
    if i.neg > 0 {
        return Err(KernelError::Domain(
            "cholesky factor needs a positive semidefinite matrix".into(),
        ));
    }
    if a.is_zero() {
        return Ok(Mat2::zero());
    }
    if a.det().is_zero() {
        // rank one: A = t·uu*/|u|², so F = λu·e1* with |λ|² = t/|u|²
        let (t, p) = rank1_decompose(a)?;
        let u = p.spanning_vector();
        let nu = u[0].norm_sqr() + u[1].norm_sqr();
        let lam = two_square_rational(&(t / nu))
            .ok_or_else(|| KernelError::Radical(format!("{} is not a norm from Q(i)", a.a)))?;
        return Ok(Mat2::new(
            &u[0] * &lam,
            GaussRational::zero(),
            &u[1] * &lam,
            GaussRational::zero(),
        ));
    }
    // LDL*: A = L diag(p, s) L* with L = [[1,0],[w,1]], w = conj(z)/a,
    // p = a, s = det/a. Then F = L·K for any K with KK* = diag(p, s).
    let p = a.a.clone();
    let s = a.det() / &a.a;
    let w = a.z.conj().scale(&a.a.recip());
    let k = match (rational_sqrt(&p), rational_sqrt(&s)) {
        (Some(sp), Some(ss)) => Mat2::diag(
            GaussRational::from_rational(sp),
            GaussRational::from_rational(ss),
        ),
        _ => {
            // row1 = (x, y) with |x|²+|y|² = p; row2 = λ(−ȳ, x̄) with |λ|² = s/p
            let (x, y) = four_square_rational(&p)
                .ok_or_else(|| KernelError::Radical(format!("cannot decompose {p}")))?;
            let lam = two_square_rational(&(&s / &p)).ok_or_else(|| {
                KernelError::Radical(format!("det {} is not a norm from Q(i)", a.det()))
            })?;
            Mat2::new(
                x.clone(),
                y.clone(),
                &(&y.conj()).neg() * &lam,
                &x.conj() * &lam,
            )
        }
    };
    let l = Mat2::new(
        GaussRational::one(),
        GaussRational::zero(),
        w,
        GaussRational::one(),
    );
    Ok(l.mul(&k))
}

/// Exact square root of a non-negative rational, when one exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_zero() {
        return Some(Rational::zero());
    }
    if r < &Rational::zero() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}
