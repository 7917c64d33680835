//! End-to-end acceptance battery. Each criterion prints one pass/fail line;
//! the test fails if any criterion fails or exceeds its time budget.

use chrono_kernel::auto::{
    apply_herm, induced_4x4, lorentz_extract, mat4_mul, mat4_transpose, minkowski_gram,
    AffineForm, AutoWord, Generator,
};
use chrono_kernel::herm::{loewner_lt, projection_from_vector, Mat2, Projection};
use chrono_kernel::incidence::{classify_triple, TripleClass};
use chrono_kernel::preservers::{
    classify_interval_map, construct_cone_family, construct_gen_c, construct_line_line,
    eigen_rational, grid_map, interval_grid_points, is_coherency_preserver, remark_added_eval,
    remark_added_map, ConeKind, GenCParams, PreserverVerdict, ScalarFn, SubcaseTag,
    TabulatedMap,
};
use chrono_kernel::scalar::{rat, rat_int, GaussRational};
use chrono_kernel::spacetime::{
    cayley, coherent, quadric_embed, quadric_pairing, unitary_coherent, M4Event, Point,
};
use chrono_kernel::verify::{run_suite, GeneratorConfig};
use chrono_kernel::{Herm2, Rational};
use num_traits::{One, Zero};
use std::time::{Duration, Instant};

struct Outcome {
    label: &'static str,
    ok: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn record(
    results: &mut Vec<Outcome>,
    label: &'static str,
    budget_secs: f64,
    body: impl FnOnce() -> Result<(), String>,
) {
    let start = Instant::now();
    let verdict = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs_f64(budget_secs);
    let in_budget = elapsed <= budget;
    let ok = verdict.is_ok() && in_budget;
    let detail = match (&verdict, in_budget) {
        (Err(e), _) => e.clone(),
        (Ok(()), false) => format!("over budget ({elapsed:?} > {budget:?})"),
        _ => String::new(),
    };
    results.push(Outcome {
        label,
        ok,
        elapsed,
        budget,
        detail,
    });
}

fn cfg(seed: u64, cases: u32) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        cases,
        ..GeneratorConfig::default()
    }
}

fn suite_passes(id: &str, cases: u32) -> Result<(), String> {
    let r = run_suite(id, &cfg(42, cases)).map_err(|e| format!("{id}: {e}"))?;
    if r.passed() {
        Ok(())
    } else {
        Err(format!("{id}: {} failures, first {:?}", r.failures.len(), r.failures.first()))
    }
}

fn j() -> Herm2 {
    Herm2::j()
}

fn half(x: &Herm2) -> Herm2 {
    x.scale(&rat(1, 2))
}

fn triple_is(a: &Point, b: &Point, c: &Point, want: TripleClass) -> Result<(), String> {
    match classify_triple(a, b, c) {
        Ok(got) if got == want => Ok(()),
        other => Err(format!("expected {want:?}, got {other:?}")),
    }
}

// deterministic small-magnitude word stream for criterion 10
fn word_stream(n: usize) -> Vec<AutoWord> {
    let dirs = [
        (1i64, 0i64, 0i64),
        (0, 1, 0),
        (1, 1, 0),
        (1, -1, 0),
        (1, 0, 1),
        (2, 1, 0),
        (1, 2, 1),
        (3, 1, 2),
    ];
    let mut words = Vec::new();
    let mut k: i64 = 0;
    while words.len() < n {
        k += 1;
        let len = 1 + (k % 4) as usize;
        let mut gens = Vec::new();
        for i in 0..len {
            let pick = (k + i as i64 * 7) % 5;
            gens.push(match pick {
                0 => Generator::Negate,
                1 => Generator::Transpose,
                2 => Generator::Invert,
                3 => {
                    let t = Herm2::new(
                        rat((k + 1) % 5, 2),
                        rat((k + 3) % 7, 3),
                        GaussRational::new(rat(k % 3, 2), rat((k + 2) % 3, 4)),
                    );
                    Generator::Translate(t)
                }
                _ => {
                    let (a, b, c) = dirs[(k as usize + i) % dirs.len()];
                    let s = Mat2::new(
                        GaussRational::from_ints(1 + k % 3, 0),
                        GaussRational::from_ints(a, b),
                        GaussRational::from_ints(0, 0),
                        GaussRational::from_ints(1, c % 2),
                    );
                    Generator::congruence(s).expect("triangular with nonzero diagonal")
                }
            });
        }
        let w = AutoWord::of(gens);
        // keep only words whose grid restriction stays finite
        if interval_grid_points()
            .iter()
            .all(|x| matches!(apply_herm(&w, x), Point::Finite(_)))
        {
            words.push(w);
        }
    }
    words
}

fn classify_tags(m: &TabulatedMap) -> Result<Vec<PreserverVerdict>, String> {
    classify_interval_map(m).map_err(|e| format!("classify failed: {e}"))
}

fn has_type_c(vs: &[PreserverVerdict]) -> bool {
    vs.iter().any(|v| matches!(v, PreserverVerdict::TypeC { .. }))
}

fn has_type_l(vs: &[PreserverVerdict]) -> bool {
    vs.iter().any(|v| matches!(v, PreserverVerdict::TypeL { .. }))
}

fn has_standard(vs: &[PreserverVerdict]) -> bool {
    vs.iter()
        .any(|v| matches!(v, PreserverVerdict::StandardCandidate { .. }))
}

fn has_tag(vs: &[PreserverVerdict], tag: SubcaseTag) -> bool {
    vs.iter()
        .any(|v| matches!(v, PreserverVerdict::Subcase { tag: t, .. } if *t == tag))
}

/// Map [0,I] into [0, C·I·C] by X ↦ CXC for diagonal rational C.
fn transport_diag(c11: Rational, c22: Rational, x: &Herm2) -> Herm2 {
    Herm2::new(
        &(&c11 * &c11) * &x.a,
        &(&c22 * &c22) * &x.d,
        x.z.scale(&(&c11 * &c22)),
    )
}

#[test]
fn acceptance() {
    let mut results: Vec<Outcome> = Vec::new();

    record(&mut results, "criterion 1: cayley isomorphism", 5.0, || {
        // explicit nine kind-combinations
        let p = projection_from_vector(&[GaussRational::from_ints(2, 1), GaussRational::one()])
            .unwrap();
        let reps = [
            Point::Finite(Herm2::new(rat(1, 3), rat(-2, 5), GaussRational::from_ints(1, 1))),
            Point::infinite(p, rat(3, 7)),
            Point::Omega,
        ];
        for a in &reps {
            for b in &reps {
                if coherent(a, b) != unitary_coherent(&cayley(a), &cayley(b)) {
                    return Err(format!("kind pair mismatch: {a:?} vs {b:?}"));
                }
            }
        }
        suite_passes("cayley-iso", 2000)
    });

    record(&mut results, "criterion 2: quadric isomorphism", 5.0, || {
        let a = Point::Finite(Herm2::identity());
        let b = Point::zero();
        if quadric_pairing(&quadric_embed(&a), &quadric_embed(&b)).is_zero() {
            return Err("0 and I must not pair to zero".into());
        }
        suite_passes("quadric-iso", 2000)
    });

    record(&mut results, "criterion 3: automorphism bidirectionality", 10.0, || {
        suite_passes("generator-bidirectional", 500)
    });

    record(&mut results, "criterion 4: triple classification", 10.0, || {
        let zero = Point::zero();
        let om = Point::Omega;
        let id = Point::Finite(Herm2::identity());
        let jj = Point::Finite(j());
        triple_is(&zero, &om, &id, TripleClass::Timelike)?;
        triple_is(&zero, &om, &jj, TripleClass::Spacelike)?;
        triple_is(
            &zero,
            &Point::Finite(half(&Herm2::identity())),
            &id,
            TripleClass::Timelike,
        )?;
        triple_is(&zero, &Point::Finite(half(&j())), &jj, TripleClass::Spacelike)?;
        suite_passes("threepoints-invariance", 200)
    });

    record(&mut results, "criterion 5: lorentz extraction", 2.0, || {
        let ident = AffineForm::identity();
        let dec = lorentz_extract(&ident);
        if !dec.d.is_one() {
            return Err("identity form must give d = 1".into());
        }
        let expect: [[Rational; 4]; 4] = std::array::from_fn(|i| {
            std::array::from_fn(|jx| if i == jx { Rational::one() } else { Rational::zero() })
        });
        if dec.q4 != expect {
            return Err("identity form must give Q4 = I".into());
        }
        if dec.a != M4Event::new(rat_int(0), rat_int(0), rat_int(0), rat_int(0)) {
            return Err("identity form must give a = 0".into());
        }
        // exact gram identity on a fixed nontrivial form as well
        let s = Mat2::new(
            GaussRational::from_ints(2, 1),
            GaussRational::from_ints(1, -1),
            GaussRational::zero(),
            GaussRational::from_ints(1, 0),
        );
        let q4 = induced_4x4(&s, true, -1).map_err(|e| e.to_string())?;
        let m = minkowski_gram();
        let lhs = mat4_mul(&mat4_transpose(&q4), &mat4_mul(&m, &q4));
        let d = s.det().norm_sqr();
        for i in 0..4 {
            for jx in 0..4 {
                if lhs[i][jx] != &m[i][jx] * &d {
                    return Err("gram identity failed on fixed form".into());
                }
            }
        }
        suite_passes("lorentz", 200)
    });

    record(&mut results, "criterion 6: wigner fit", 2.0, || {
        suite_passes("wigner", 50)
    });

    record(&mut results, "criterion 7: exact lemma battery", 60.0, || {
        for id in [
            "apbq",
            "matrum",
            "nnjk",
            "noauto",
            "c_s",
            "dupc",
            "oxi",
            "jedr",
            "pq",
            "tr1",
            "veryeasy",
            "simpll",
            "simplll",
            "triangle",
            "svinj",
            "segment",
            "neksej",
            "jelensr",
            "lemma134",
            "sjs",
            "path",
            "ua-propagation",
            "rank1-parameter",
        ] {
            suite_passes(id, 500)?;
        }
        Ok(())
    });

    record(&mut results, "criterion 8: mikar equivalence", 5.0, || {
        suite_passes("mikar", 300)
    });

    record(&mut results, "criterion 9: degenerate constructors", 10.0, || {
        let q = Projection::e22();
        let grid_pts: Vec<Point> = interval_grid_points().into_iter().map(Point::Finite).collect();

        let gen_c = construct_gen_c(
            &GenCParams {
                rays: vec![],
                default_image: q.clone(),
                default_radial: ScalarFn::Identity,
                identity_on_rays: false,
                rank2_overrides: vec![],
            },
            &grid_pts,
        )
        .map_err(|e| format!("genC: {e}"))?;
        let ohoh = construct_cone_family(&ConeKind::OhOh { q: q.clone() }, &grid_pts)
            .map_err(|e| format!("ohoh: {e}"))?;
        let line_line = construct_line_line(&ScalarFn::Identity, &interval_grid_points())
            .map_err(|e| format!("line-line: {e}"))?;
        let four_point = remark_added_map(&q).map_err(|e| format!("remark: {e}"))?;

        for (name, m) in [
            ("genC", &gen_c),
            ("ohoh", &ohoh),
            ("line-line", &line_line),
            ("four-point", &four_point),
        ] {
            if !is_coherency_preserver(m) {
                return Err(format!("{name} is not a coherency preserver"));
            }
        }
        let v_gen_c = classify_tags(&gen_c)?;
        let v_ohoh = classify_tags(&ohoh)?;
        let v_line = classify_tags(&line_line)?;
        let v_four = classify_tags(&four_point)?;
        if !has_type_c(&v_gen_c) {
            return Err("genC family missing TypeC verdict".into());
        }
        if !has_type_c(&v_ohoh) {
            return Err("cone family missing TypeC verdict".into());
        }
        if !has_type_l(&v_line) {
            return Err("line-line missing TypeL verdict".into());
        }
        if !(has_type_c(&v_four) && has_type_l(&v_four)) {
            return Err("four-point map must carry both witnesses".into());
        }
        for (name, vs) in [
            ("genC", &v_gen_c),
            ("ohoh", &v_ohoh),
            ("line-line", &v_line),
            ("four-point", &v_four),
        ] {
            if has_standard(vs) {
                return Err(format!("{name} must not classify as standard"));
            }
        }
        Ok(())
    });

    record(&mut results, "criterion 10: desk-scale taxonomy", 30.0, || {
        for (i, w) in word_stream(100).iter().enumerate() {
            let m = grid_map("word restriction", |x| apply_herm(w, x))
                .map_err(|e| format!("word {i}: {e}"))?;
            let vs = classify_tags(&m).map_err(|e| format!("word {i}: {e}"))?;
            let good = vs.iter().all(|v| {
                matches!(v, PreserverVerdict::StandardCandidate { residual, .. } if *residual <= 1e-9)
            });
            if !good || vs.is_empty() {
                return Err(format!("word {i} verdicts: {vs:?}"));
            }
        }
        Ok(())
    });

    record(&mut results, "criterion 11: restriction stability", 5.0, || {
        let id = Herm2::identity();
        let grid = interval_grid_points();

        // interval lengths are rational squares so the transport stays cheap
        for c in [rat(7, 16), rat(3, 4), rat(15, 16)] {
            // subcase (i) restricted to [cI, I]
            let lo = id.scale(&c);
            let span = Rational::one() - &c;
            let entries_i: Vec<(Point, Point)> = grid
                .iter()
                .map(|g| {
                    let x = &lo + &g.scale(&span);
                    let y = if loewner_lt(&x, &id) {
                        Point::zero()
                    } else if x == id {
                        Point::Finite(id.clone())
                    } else {
                        let (_, _, p) = eigen_rational(&x).expect("rational spectrum");
                        Point::Finite(p.into_matrix())
                    };
                    (Point::Finite(x), y)
                })
                .collect();
            let m = TabulatedMap::new("subcase-i restriction", dedup(entries_i))
                .map_err(|e| e.to_string())?;
            let vs = classify_tags(&m)?;
            if !has_tag(&vs, SubcaseTag::I) {
                return Err(format!("subcase (i) lost its tag on [{c}·I, I]: {vs:?}"));
            }

            // subcase (ii) restricted to [0, c'I] with c' again a square
            let c2 = &c * &c;
            let zero = Herm2::zero();
            let top = id.scale(&c2);
            let entries_ii: Vec<(Point, Point)> = grid
                .iter()
                .map(|g| {
                    let x = g.scale(&c2);
                    let y = if loewner_lt(&zero, &x) {
                        Point::Finite(id.clone())
                    } else if x.is_zero() {
                        Point::zero()
                    } else {
                        let (_, _, p) = eigen_rational(&x).expect("rational spectrum");
                        Point::Finite(p.into_matrix())
                    };
                    (Point::Finite(x), y)
                })
                .collect();
            let m = TabulatedMap::new("subcase-ii restriction", dedup(entries_ii))
                .map_err(|e| e.to_string())?;
            let vs = classify_tags(&m)?;
            if !has_tag(&vs, SubcaseTag::II) {
                return Err(format!("subcase (ii) lost its tag on [0, {top:?}]: {vs:?}"));
            }
        }

        for k in 1u32..=3 {
            let c22 = rat(1, 2i64.pow(k));
            // subcase (iii): the line-line rule on [0, diag(1, 4^{-k})]
            let domain: Vec<Herm2> = dedup_herm(
                grid.iter()
                    .map(|g| transport_diag(Rational::one(), c22.clone(), g))
                    .collect(),
            );
            let m = construct_line_line(&ScalarFn::Identity, &domain)
                .map_err(|e| format!("line-line restriction k={k}: {e}"))?;
            let vs = classify_tags(&m)?;
            if !has_tag(&vs, SubcaseTag::III) {
                return Err(format!("subcase (iii) lost its tag at k={k}: {vs:?}"));
            }

            // subcases (iii)/(iv): the four-point rule on the same interval
            let q = Projection::e22();
            let entries: Vec<(Point, Point)> = domain
                .iter()
                .map(|x| (Point::Finite(x.clone()), remark_added_eval(&q, x)))
                .collect();
            let m = TabulatedMap::new("four-point restriction", entries)
                .map_err(|e| e.to_string())?;
            let vs = classify_tags(&m)?;
            if !(has_tag(&vs, SubcaseTag::III) && has_tag(&vs, SubcaseTag::IV)) {
                return Err(format!("four-point map lost its tags at k={k}: {vs:?}"));
            }
        }
        Ok(())
    });

    let mut all_ok = true;
    for r in &results {
        let status = if r.ok { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<42} {:>8.2?} (budget {:?}) {}",
            r.label, r.elapsed, r.budget, r.detail
        );
        all_ok &= r.ok;
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}

fn dedup(entries: Vec<(Point, Point)>) -> Vec<(Point, Point)> {
    let mut out: Vec<(Point, Point)> = Vec::new();
    for e in entries {
        if !out.iter().any(|(x, _)| *x == e.0) {
            out.push(e);
        }
    }
    out
}

fn dedup_herm(xs: Vec<Herm2>) -> Vec<Herm2> {
    let mut out: Vec<Herm2> = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
