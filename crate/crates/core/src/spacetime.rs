//! The compactified space ō(H₂): points, the coherency relation, distance,
//! cones, the Cayley transform to the unitary picture, the projective
//! quadric model, and the bridge to Minkowski events.

use crate::error::{KernelError, Result};
use crate::herm::{bloch, bloch_inv, trace_product, BlochVector, Herm2, Mat2, Projection};
use crate::scalar::{GaussRational, Rational};
use num_traits::{One, Zero};

/// A point of ō(H₂): a finite hermitian matrix, an infinite point
/// ∞P + aP⊥, or ω̄ = ∞P + ∞P⊥.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Herm2),
    Infinite { dir: Projection, offset: Rational },
    Omega,
}

impl Point {
    pub fn finite(a: Herm2) -> Point {
        Point::Finite(a)
    }

    pub fn infinite(dir: Projection, offset: Rational) -> Point {
        Point::Infinite { dir, offset }
    }

    pub fn zero() -> Point {
        Point::Finite(Herm2::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Point::Finite(_))
    }
}

/// The coherency relation of ō(H₂), all cases.
pub fn coherent(a: &Point, b: &Point) -> bool {
    use Point::*;
    match (a, b) {
        (Finite(x), Finite(y)) => (x - y).det().is_zero(),
        (Finite(x), Infinite { dir, offset }) | (Infinite { dir, offset }, Finite(x)) => {
            // P⊥AP⊥ = aP⊥, equivalently tr(P⊥A) = a
            trace_product(dir.complement().matrix(), x) == *offset
        }
        (Infinite { dir: p, .. }, Infinite { dir: q, .. }) => p == q,
        (Omega, Finite(_)) | (Finite(_), Omega) => false,
        (Omega, _) | (_, Omega) => true,
    }
}

/// d(A,B) ∈ {0, 1, 2}.
pub fn distance(a: &Point, b: &Point) -> u8 {
    if a == b {
        0
    } else if coherent(a, b) {
        1
    } else {
        2
    }
}

/// A 2×2 unitary matrix over the Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub fn try_new(m: Mat2) -> Result<Unitary2> {
        if !m.is_unitary() {
            return Err(KernelError::Domain("matrix is not unitary".into()));
        }
        Ok(Unitary2(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }
}

/// f(a) = (a − i)/(a + i) for finite rational a.
fn cayley_scalar(a: &Rational) -> GaussRational {
    let ai = GaussRational::new(a.clone(), -Rational::one());
    let bi = GaussRational::new(a.clone(), Rational::one());
    &ai / &bi
}

/// Cayley transform ō(H₂) → U₂; finite matrices miss eigenvalue 1.
pub fn cayley(p: &Point) -> Unitary2 {
    let u = match p {
        Point::Finite(a) => {
            // I − 2i(A + iI)⁻¹; A + iI is always invertible for hermitian A
            let ai = a.to_mat().add(&Mat2::identity().scale(&GaussRational::i()));
            let inv = ai.inverse().expect("A + iI is invertible");
            let two_i = GaussRational::from_ints(0, 2);
            Mat2::identity().sub(&inv.scale(&two_i))
        }
        Point::Infinite { dir, offset } => {
            let f = cayley_scalar(offset);
            dir.matrix()
                .to_mat()
                .add(&dir.complement().matrix().to_mat().scale(&f))
        }
        Point::Omega => Mat2::identity(),
    };
    Unitary2::try_new(u).expect("cayley image is unitary")
}

/// Partial inverse of the Cayley transform, defined on unitaries whose
/// eigenvalue-1 structure is exactly computable over the Gaussian rationals.
pub fn cayley_inv(u: &Unitary2) -> Result<Point> {
    let m = u.matrix();
    let id = Mat2::identity();
    let n = m.sub(&id);
    if n.is_zero() {
        return Ok(Point::Omega);
    }
    if !n.det().is_zero() {
        // no eigenvalue 1: finite point A = 2i(I − U)⁻¹ − iI
        let inv = id.sub(m).inverse()?;
        let a = inv
            .scale(&GaussRational::from_ints(0, 2))
            .sub(&id.scale(&GaussRational::i()));
        let h = Herm2::from_mat(&a)
            .map_err(|_| KernelError::Domain("cayley preimage is not hermitian".into()))?;
        return Ok(Point::Finite(h));
    }
    // eigenvalue 1 simple: U = P + f(a)P⊥, so U − I = (f(a) − 1)P⊥
    let t = n.trace();
    if t.is_zero() {
        return Err(KernelError::Domain(
            "no exact rational eigenprojection for this unitary".into(),
        ));
    }
    let pperp_m = n.scale(&t.inv()?);
    let f = &GaussRational::one() + &t;
    // a = i(1 + f)/(1 − f)
    let num = &GaussRational::i() * &(&GaussRational::one() + &f);
    let den = &GaussRational::one() - &f;
    let a = &num / &den;
    if !a.is_real() {
        return Err(KernelError::Domain("cayley preimage offset not real".into()));
    }
    let pperp = Herm2::from_mat(&pperp_m)
        .ok()
        .and_then(|h| Projection::try_new(h).ok())
        .ok_or_else(|| KernelError::Domain("no exact rational eigenprojection".into()))?;
    Ok(Point::Infinite {
        dir: pperp.complement(),
        offset: a.re,
    })
}

/// Coherency in the unitary picture: rank(U − V) ≤ 1.
pub fn unitary_coherent(u: &Unitary2, v: &Unitary2) -> bool {
    u.matrix().sub(v.matrix()).det().is_zero()
}

/// A Minkowski spacetime event (x, y, z, t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M4Event {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
    pub t: Rational,
}

impl M4Event {
    pub fn new(x: Rational, y: Rational, z: Rational, t: Rational) -> Self {
        M4Event { x, y, z, t }
    }

    pub fn origin() -> Self {
        M4Event::new(
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        )
    }

    /// Minkowski square −x² − y² − z² + t².
    pub fn minkowski_sq(&self) -> Rational {
        -(&self.x * &self.x) - &self.y * &self.y - &self.z * &self.z + &self.t * &self.t
    }
}

/// r = (x, y, z, t) ↦ [[t − z, x + iy], [x − iy, t + z]].
pub fn xi(r: &M4Event) -> Herm2 {
    Herm2::new(
        &r.t - &r.z,
        &r.t + &r.z,
        GaussRational::new(r.x.clone(), r.y.clone()),
    )
}

pub fn xi_inv(a: &Herm2) -> M4Event {
    let half = Rational::new(1.into(), 2.into());
    M4Event {
        x: a.z.re.clone(),
        y: a.z.im.clone(),
        z: (&a.d - &a.a) * &half,
        t: (&a.a + &a.d) * &half,
    }
}

/// Two events are lightlike iff spatial distance equals time separation.
pub fn lightlike(r1: &M4Event, r2: &M4Event) -> bool {
    let d = M4Event {
        x: &r1.x - &r2.x,
        y: &r1.y - &r2.y,
        z: &r1.z - &r2.z,
        t: &r1.t - &r2.t,
    };
    d.minkowski_sq().is_zero()
}

/// A projective point on the quadric q(x,y,z,t,h,n) = −x²−y²−z²+t²−hn = 0.
#[derive(Debug, Clone)]
pub struct QuadricPoint {
    pub v: [Rational; 6],
}

impl QuadricPoint {
    pub fn try_new(v: [Rational; 6]) -> Result<QuadricPoint> {
        if v.iter().all(|c| c.is_zero()) {
            return Err(KernelError::Domain("zero vector is not projective".into()));
        }
        let p = QuadricPoint { v };
        if !p.quadric_form().is_zero() {
            return Err(KernelError::Domain("point is not on the quadric".into()));
        }
        Ok(p)
    }

    pub fn quadric_form(&self) -> Rational {
        let [x, y, z, t, h, n] = &self.v;
        -(x * x) - y * y - z * z + t * t - h * n
    }
}

impl PartialEq for QuadricPoint {
    /// Projective equality: proportional coordinate vectors.
    fn eq(&self, other: &Self) -> bool {
        let mut ratio: Option<Rational> = None;
        for (a, b) in self.v.iter().zip(other.v.iter()) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = a / b;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(r0) => {
                            if &r != r0 {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        ratio.is_some()
    }
}

impl Eq for QuadricPoint {}

/// ⟨X, Y⟩ for the bilinear form of the quadric model.
pub fn quadric_pairing(xp: &QuadricPoint, yp: &QuadricPoint) -> Rational {
    let [x1, y1, z1, t1, h1, n1] = &xp.v;
    let [x2, y2, z2, t2, h2, n2] = &yp.v;
    let half = Rational::new(1.into(), 2.into());
    -(x1 * x2) - y1 * y2 - z1 * z2 + t1 * t2 - (h1 * n2 + n1 * h2) * &half
}

pub fn quadric_coherent(x: &QuadricPoint, y: &QuadricPoint) -> bool {
    quadric_pairing(x, y).is_zero()
}

/// Embeds a point of ō(H₂) into the projective quadric in ℝ⁶.
pub fn quadric_embed(p: &Point) -> QuadricPoint {
    match p {
        Point::Finite(a) => {
            let r = xi_inv(a);
            let q = r.minkowski_sq();
            QuadricPoint::try_new([r.x, r.y, r.z, r.t, Rational::one(), q])
                .expect("finite embedding lies on the quadric")
        }
        Point::Infinite { dir, offset } => {
            let b = bloch(dir.matrix()).expect("projection has trace one");
            let half = Rational::new(1.into(), 2.into());
            QuadricPoint::try_new([b.x, b.y, b.z, half, Rational::zero(), offset.clone()])
                .expect("infinite embedding lies on the quadric")
        }
        Point::Omega => QuadricPoint {
            v: [
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::one(),
            ],
        },
    }
}

/// Inverts the embedding up to projective scaling.
pub fn quadric_to_point(q: &QuadricPoint) -> Result<Point> {
    let [x, y, z, t, h, n] = &q.v;
    if !h.is_zero() {
        let r = M4Event::new(x / h, y / h, z / h, t / h);
        return Ok(Point::Finite(xi(&r)));
    }
    if !t.is_zero() {
        // scale so t = 1/2
        let s = Rational::new(1.into(), 2.into()) / t;
        let b = BlochVector {
            x: x * &s,
            y: y * &s,
            z: z * &s,
        };
        let dir = Projection::try_new(bloch_inv(&b))
            .map_err(|_| KernelError::Domain("quadric point has no projection part".into()))?;
        return Ok(Point::Infinite {
            dir,
            offset: n * &s,
        });
    }
    if x.is_zero() && y.is_zero() && z.is_zero() && !n.is_zero() {
        return Ok(Point::Omega);
    }
    Err(KernelError::Domain("vector does not lie on the quadric".into()))
}

/// Representative members of the cone with the given vertex, one batch per
/// requested direction.
pub fn cone_members_sample(vertex: &Point, dirs: &[Projection]) -> Vec<Point> {
    let mut out = Vec::new();
    match vertex {
        Point::Finite(a) => {
            for p in dirs {
                for k in 1..=2i64 {
                    let t = Rational::from_integer(k.into());
                    out.push(Point::Finite(a + &p.matrix().scale(&t)));
                }
                out.push(Point::Infinite {
                    dir: p.clone(),
                    offset: trace_product(p.complement().matrix(), a),
                });
            }
        }
        Point::Infinite { dir, offset } => {
            // the whole infinity line through the vertex, plus finite points
            // with the prescribed compression
            for k in 0..=2i64 {
                out.push(Point::Infinite {
                    dir: dir.clone(),
                    offset: offset + Rational::from_integer(k.into()),
                });
            }
            out.push(Point::Omega);
            let pperp = dir.complement();
            for k in 0..=5i64 {
                let t = Rational::from_integer(k.into());
                out.push(Point::Finite(
                    &pperp.matrix().scale(offset) + &dir.matrix().scale(&t),
                ));
            }
        }
        Point::Omega => {
            for p in dirs {
                for k in [0i64, 7] {
                    out.push(Point::Infinite {
                        dir: p.clone(),
                        offset: Rational::from_integer(k.into()),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn coherent_examples() {
        assert!(!coherent(
            &Point::Finite(Herm2::e11()),
            &Point::Finite(Herm2::e22())
        ));
        assert!(coherent(
            &Point::infinite(Projection::e11(), rat_int(2)),
            &Point::Finite(Herm2::diag(rat_int(5), rat_int(2)))
        ));
        assert!(!coherent(&Point::Omega, &Point::Finite(Herm2::j())));
        assert!(coherent(
            &Point::Omega,
            &Point::infinite(Projection::e22(), rat(3, 7))
        ));
        assert!(coherent(&Point::Omega, &Point::Omega));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&Point::zero(), &Point::zero()), 0);
        assert_eq!(
            distance(
                &Point::zero(),
                &Point::Finite(Herm2::e11().scale(&rat_int(3)))
            ),
            1
        );
        assert_eq!(distance(&Point::zero(), &Point::Omega), 2);
    }

    #[test]
    fn cayley_examples() {
        let neg_i = Mat2::identity().scale(&GaussRational::from_ints(-1, 0));
        assert_eq!(cayley(&Point::zero()).matrix(), &neg_i);
        assert_eq!(
            cayley(&Point::infinite(Projection::e11(), rat_int(0))).matrix(),
            &Herm2::j().to_mat()
        );
        assert_eq!(cayley(&Point::Omega).matrix(), &Mat2::identity());
    }

    #[test]
    fn cayley_inv_examples() {
        let neg_i = Unitary2::try_new(Mat2::identity().scale(&GaussRational::from_ints(-1, 0)))
            .unwrap();
        assert_eq!(cayley_inv(&neg_i).unwrap(), Point::zero());
        let id = Unitary2::try_new(Mat2::identity()).unwrap();
        assert_eq!(cayley_inv(&id).unwrap(), Point::Omega);
        let j = Unitary2::try_new(Herm2::j().to_mat()).unwrap();
        assert_eq!(
            cayley_inv(&j).unwrap(),
            Point::infinite(Projection::e11(), rat_int(0))
        );
    }

    #[test]
    fn cayley_roundtrip() {
        let pts = [
            Point::zero(),
            Point::Finite(Herm2::new(rat(1, 2), rat_int(-3), GaussRational::from_ints(2, 1))),
            Point::infinite(Projection::e22(), rat(5, 3)),
            Point::Omega,
        ];
        for p in &pts {
            assert_eq!(&cayley_inv(&cayley(p)).unwrap(), p);
        }
    }

    #[test]
    fn unitary_coherent_examples() {
        let id = Unitary2::try_new(Mat2::identity()).unwrap();
        let neg = Unitary2::try_new(Mat2::identity().scale(&GaussRational::from_ints(-1, 0)))
            .unwrap();
        let j = Unitary2::try_new(Herm2::j().to_mat()).unwrap();
        assert!(unitary_coherent(&id, &id));
        assert!(!unitary_coherent(&id, &neg));
        assert!(unitary_coherent(&id, &j));
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(&M4Event::origin()), Herm2::zero());
        assert_eq!(
            xi(&M4Event::new(rat_int(0), rat_int(0), rat_int(0), rat_int(1))),
            Herm2::identity()
        );
        assert_eq!(
            xi(&M4Event::new(rat_int(0), rat_int(0), rat_int(-1), rat_int(0))),
            Herm2::j()
        );
        let r = M4Event::new(rat(1, 3), rat(-2, 5), rat_int(4), rat(7, 2));
        assert_eq!(xi_inv(&xi(&r)), r);
    }

    #[test]
    fn lightlike_examples() {
        let o = M4Event::origin();
        assert!(lightlike(
            &o,
            &M4Event::new(rat_int(1), rat_int(0), rat_int(0), rat_int(1))
        ));
        assert!(!lightlike(
            &o,
            &M4Event::new(rat_int(0), rat_int(0), rat_int(0), rat_int(1))
        ));
        assert!(lightlike(
            &o,
            &M4Event::new(rat(3, 5), rat(4, 5), rat_int(0), rat_int(1))
        ));
    }

    #[test]
    fn quadric_embed_examples() {
        let omega = quadric_embed(&Point::Omega);
        assert_eq!(
            omega.v,
            [rat_int(0), rat_int(0), rat_int(0), rat_int(0), rat_int(0), rat_int(1)]
        );
        let zero = quadric_embed(&Point::zero());
        assert_eq!(
            zero.v,
            [rat_int(0), rat_int(0), rat_int(0), rat_int(0), rat_int(1), rat_int(0)]
        );
        let inf = quadric_embed(&Point::infinite(Projection::e11(), rat_int(5)));
        assert_eq!(
            inf.v,
            [rat_int(0), rat_int(0), rat(-1, 2), rat(1, 2), rat_int(0), rat_int(5)]
        );
    }

    #[test]
    fn quadric_roundtrip() {
        let pts = [
            Point::zero(),
            Point::Finite(Herm2::new(rat(1, 2), rat_int(-3), GaussRational::from_ints(2, 1))),
            Point::infinite(Projection::e22(), rat(5, 3)),
            Point::Omega,
        ];
        for p in &pts {
            assert_eq!(&quadric_to_point(&quadric_embed(p)).unwrap(), p);
        }
    }

    #[test]
    fn quadric_coherent_examples() {
        let e = quadric_embed(&Point::Omega);
        assert!(quadric_coherent(&e, &e));
        let z = quadric_embed(&Point::zero());
        assert_eq!(quadric_pairing(&e, &z), rat(-1, 2));
        assert!(!quadric_coherent(&e, &z));
        let inf = quadric_embed(&Point::infinite(Projection::e11(), rat_int(0)));
        assert!(quadric_coherent(&z, &inf));
    }

    #[test]
    fn cone_samples_are_coherent() {
        let dirs = [Projection::e11(), Projection::e22()];
        let vertices = [
            Point::zero(),
            Point::infinite(Projection::e11(), rat_int(3)),
            Point::Omega,
        ];
        for v in &vertices {
            for m in cone_members_sample(v, &dirs) {
                assert!(coherent(v, &m), "vertex {v:?} member {m:?}");
            }
        }
        let inf_members = cone_members_sample(&Point::infinite(Projection::e11(), rat_int(3)), &dirs);
        assert!(inf_members.contains(&Point::Finite(Herm2::diag(rat_int(5), rat_int(3)))));
        let omega_members = cone_members_sample(&Point::Omega, &dirs);
        assert!(omega_members.contains(&Point::infinite(Projection::e11(), rat_int(7))));
        let zero_members = cone_members_sample(&Point::zero(), &dirs);
        assert!(zero_members.contains(&Point::infinite(Projection::e11(), rat_int(0))));
    }
}
